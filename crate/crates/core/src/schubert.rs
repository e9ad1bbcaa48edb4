//! Pieri-rule Schubert calculus on Grassmannians `Gr(k,n)`.
//!
//! Only multiplication by the hyperplane class `σ₁` is implemented; every
//! degree needed here is a power of `σ₁` paired against a single cycle, so
//! the full Littlewood–Richardson rule would be dead weight.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchubertError {
    #[error("partition {parts:?} does not fit in the {rows}x{cols} box")]
    OutOfBox { parts: Vec<u32>, rows: usize, cols: usize },
    #[error("parts must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("ambient Gr(k,n) needs 0 < k < n, got k={k} n={n}")]
    BadAmbient { k: usize, n: usize },
}

/// Weakly decreasing tuple of nonnegative integers, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self, SchubertError> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SchubertError::NotDecreasing(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn fits_box(&self, rows: usize, cols: usize) -> bool {
        self.parts.len() <= rows && self.parts.first().is_none_or(|&p| p as usize <= cols)
    }

    /// Conjugate partition (transpose of the Young diagram).
    pub fn transpose(&self) -> Partition {
        let max = self.parts.first().copied().unwrap_or(0) as usize;
        let parts = (1..=max)
            .map(|col| self.parts.iter().filter(|&&p| p as usize >= col).count() as u32)
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.parts.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        )
    }
}

/// Integer combination of Schubert cycles on a fixed `Gr(k,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertCycle {
    terms: BTreeMap<Partition, i64>,
    k: usize,
    n: usize,
}

impl SchubertCycle {
    pub fn zero(k: usize, n: usize) -> Result<Self, SchubertError> {
        if k == 0 || k >= n {
            return Err(SchubertError::BadAmbient { k, n });
        }
        Ok(SchubertCycle { terms: BTreeMap::new(), k, n })
    }

    pub fn single(lambda: Partition, k: usize, n: usize) -> Result<Self, SchubertError> {
        let mut c = SchubertCycle::zero(k, n)?;
        if !lambda.fits_box(k, n - k) {
            return Err(SchubertError::OutOfBox {
                parts: lambda.parts,
                rows: k,
                cols: n - k,
            });
        }
        c.terms.insert(lambda, 1);
        Ok(c)
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.k, self.n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coefficient(&self, lambda: &Partition) -> i64 {
        self.terms.get(lambda).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn add(&self, rhs: &SchubertCycle) -> Result<SchubertCycle, SchubertError> {
        if (self.k, self.n) != (rhs.k, rhs.n) {
            return Err(SchubertError::BadAmbient { k: rhs.k, n: rhs.n });
        }
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            *out.terms.entry(p.clone()).or_insert(0) += c;
        }
        out.prune();
        Ok(out)
    }

    /// Multiply by the hyperplane class `σ₁`: each `σ_λ` becomes the sum of
    /// `σ_μ` over all `μ ⊃ λ` adding one box inside the `k×(n−k)` rectangle.
    pub fn pieri_multiply(&self) -> SchubertCycle {
        let cols = (self.n - self.k) as u32;
        let mut out = SchubertCycle {
            terms: BTreeMap::new(),
            k: self.k,
            n: self.n,
        };
        for (lambda, &coeff) in &self.terms {
            let mut padded = lambda.parts.clone();
            padded.resize(self.k, 0);
            for row in 0..self.k {
                let cap = if row == 0 { cols } else { padded[row - 1] };
                if padded[row] < cap {
                    let mut mu = padded.clone();
                    mu[row] += 1;
                    let mu = Partition::new(mu).expect("adding a box keeps rows decreasing");
                    *out.terms.entry(mu).or_insert(0) += coeff;
                }
            }
        }
        out.prune();
        out
    }
}

impl fmt::Display for SchubertCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body = self
            .terms
            .iter()
            .map(|(p, c)| {
                if *c == 1 {
                    format!("s{}", p)
                } else {
                    format!("{}·s{}", c, p)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "{}", body)
    }
}

/// Degree of `σ_λ` on `Gr(k,n)`: the coefficient of the point class in
/// `σ_λ · σ₁^(k(n−k) − |λ|)`, computed by iterated Pieri multiplication.
pub fn degree(lambda: &Partition, k: usize, n: usize) -> Result<u64, SchubertError> {
    let mut cycle = SchubertCycle::single(lambda.clone(), k, n)?;
    let box_size = (k * (n - k)) as u32;
    for _ in 0..(box_size - lambda.weight()) {
        cycle = cycle.pieri_multiply();
    }
    let point = Partition::new(vec![(n - k) as u32; k]).expect("rectangle is a partition");
    let coeff = cycle.coefficient(&point);
    debug_assert!(coeff >= 0);
    // after k(n−k) − |λ| Pieri steps only the point class can survive
    debug_assert!(cycle.terms.len() <= 1);
    Ok(coeff as u64)
}

/// JSON shape for cycles: array of `{"partition":[...],"coeff":c}`.
#[derive(Serialize, Deserialize)]
struct TermWire {
    partition: Vec<u32>,
    coeff: i64,
}

impl Serialize for SchubertCycle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire: Vec<TermWire> = self
            .terms
            .iter()
            .map(|(p, &c)| TermWire {
                partition: p.parts.clone(),
                coeff: c,
            })
            .collect();
        wire.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Number of standard Young tableaux of a `rows×cols` rectangle by the
    /// hook length formula — the independent oracle for `degree(σ_∅)`.
    fn rectangle_syt_count(rows: usize, cols: usize) -> u64 {
        let cells = rows * cols;
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 1..=cells {
            num *= i as u128;
        }
        for r in 0..rows {
            for c in 0..cols {
                den *= ((cols - c - 1) + (rows - r - 1) + 1) as u128;
            }
        }
        (num / den) as u64
    }

    /// Count standard tableaux of the skew shape `box/λ` top-down: peel
    /// removable corners from the rectangle until only `λ` remains. This is
    /// a different recursion from the bottom-up Pieri iteration.
    fn skew_syt_count(lambda: &[u32], rows: usize, cols: usize) -> u64 {
        fn rec(shape: &mut Vec<u32>, lambda: &[u32], memo: &mut std::collections::HashMap<Vec<u32>, u64>) -> u64 {
            if shape.iter().zip(lambda.iter().chain(std::iter::repeat(&0))).all(|(a, b)| a == b) {
                return 1;
            }
            if let Some(&v) = memo.get(shape.as_slice()) {
                return v;
            }
            let mut total = 0;
            for i in 0..shape.len() {
                let below_ok = i + 1 >= shape.len() || shape[i + 1] < shape[i];
                let floor = lambda.get(i).copied().unwrap_or(0);
                if shape[i] > floor && below_ok {
                    shape[i] -= 1;
                    total += rec(shape, lambda, memo);
                    shape[i] += 1;
                }
            }
            memo.insert(shape.clone(), total);
            total
        }
        let mut shape = vec![cols as u32; rows];
        rec(&mut shape, lambda, &mut std::collections::HashMap::new())
    }

    #[test]
    fn partition_normalization_and_box() {
        assert_eq!(pt(&[2, 1, 0, 0]), pt(&[2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(pt(&[3, 3]).fits_box(2, 3));
        assert!(!pt(&[4]).fits_box(2, 3));
        assert!(!pt(&[1, 1, 1]).fits_box(2, 3));
    }

    #[test]
    fn transpose_involution() {
        assert_eq!(pt(&[3, 1]).transpose(), pt(&[2, 1, 1]));
        assert_eq!(pt(&[3, 1]).transpose().transpose(), pt(&[3, 1]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
    }

    #[test]
    fn pieri_single_steps() {
        let start = SchubertCycle::single(Partition::empty(), 2, 5).unwrap();
        let s1 = start.pieri_multiply();
        assert_eq!(s1.coefficient(&pt(&[1])), 1);
        assert_eq!(s1.terms.len(), 1);

        let s2 = s1.pieri_multiply();
        assert_eq!(s2.coefficient(&pt(&[2])), 1);
        assert_eq!(s2.coefficient(&pt(&[1, 1])), 1);
        assert_eq!(s2.terms.len(), 2);

        // full box has no addable cell
        let full = SchubertCycle::single(pt(&[3, 3]), 2, 5).unwrap();
        assert!(full.pieri_multiply().is_zero());
    }

    #[test]
    fn degrees_on_gr25_and_gr35() {
        assert_eq!(degree(&pt(&[2]), 2, 5).unwrap(), 3);
        assert_eq!(degree(&pt(&[2]), 3, 5).unwrap(), 2);
        assert_eq!(degree(&Partition::empty(), 2, 5).unwrap(), 5);
        assert_eq!(
            degree(&Partition::empty(), 2, 5).unwrap(),
            rectangle_syt_count(2, 3)
        );
    }

    #[test]
    fn degree_rejects_oversized_partition() {
        assert!(degree(&pt(&[4]), 2, 5).is_err());
        assert!(degree(&pt(&[1, 1, 1]), 2, 5).is_err());
    }

    #[test]
    fn degree_matches_skew_tableau_oracle() {
        for (k, n) in [(2usize, 4usize), (2, 5), (3, 5), (2, 6)] {
            let cols = n - k;
            let mut all = vec![Partition::empty()];
            // every partition in the box
            fn gen(rows: usize, cols: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
                if prefix.len() == rows {
                    return;
                }
                let cap = prefix.last().copied().unwrap_or(cols);
                for v in 1..=cap {
                    prefix.push(v);
                    out.push(Partition::new(prefix.clone()).unwrap());
                    gen(rows, cols, prefix, out);
                    prefix.pop();
                }
            }
            gen(k, cols as u32, &mut Vec::new(), &mut all);
            for lambda in all {
                let expected = skew_syt_count(lambda.parts(), k, cols);
                assert_eq!(
                    degree(&lambda, k, n).unwrap(),
                    expected,
                    "lambda={lambda} on Gr({k},{n})"
                );
            }
        }
    }

    #[test]
    fn cycle_json_shape() {
        let c = SchubertCycle::single(pt(&[1]), 2, 5).unwrap().pieri_multiply();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(
            v,
            serde_json::json!([
                {"partition": [1, 1], "coeff": 1},
                {"partition": [2], "coeff": 1}
            ])
        );
    }

    fn arb_partition_in_box(rows: usize, cols: u32) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0..=cols, 0..=rows).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn transpose_duality(lambda in arb_partition_in_box(2, 3)) {
            prop_assert_eq!(
                degree(&lambda, 2, 5).unwrap(),
                degree(&lambda.transpose(), 3, 5).unwrap()
            );
        }

        #[test]
        fn pieri_is_linear(a in arb_partition_in_box(2, 3), b in arb_partition_in_box(2, 3)) {
            let ca = SchubertCycle::single(a, 2, 5).unwrap();
            let cb = SchubertCycle::single(b, 2, 5).unwrap();
            let sum_then_mul = ca.add(&cb).unwrap().pieri_multiply();
            let mul_then_sum = ca.pieri_multiply().add(&cb.pieri_multiply()).unwrap();
            prop_assert_eq!(sum_then_mul, mul_then_sum);
        }
    }
}
