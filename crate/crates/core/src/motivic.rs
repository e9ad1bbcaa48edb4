//! Exact arithmetic in the image of the Grothendieck ring of varieties.
//!
//! Values live in the free module `Z[L]·1 ⊕ Z[L]·X ⊕ Z[L]·Y`: a polynomial in
//! the Lefschetz symbol `L` plus `Z[L]`-multiples of two formal curve symbols
//! `X` and `Y`. The symbols are degree ≤ 1 by construction — this is a module
//! over `Z[L]`, not a polynomial ring on `X` and `Y`, and any product that
//! would need `X·X`, `X·Y` or `Y·Y` is rejected.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::LPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MotivicError {
    /// Both factors carry formal symbols; the product would leave the module.
    #[error("product of formal curve symbols is not defined (X, Y span a module, not a ring)")]
    SymbolProduct,
    #[error("kernel of a nonzero 2-form on a 5-space has dimension 1 or 3, got {0}")]
    InvalidKernelDim(u32),
}

/// Element of `Z[L]·1 ⊕ Z[L]·X ⊕ Z[L]·Y`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MotivicExpression {
    /// Pure `Z[L]` part.
    #[serde(rename = "scalar")]
    pub scalar_part: LPoly,
    /// Coefficient of the formal symbol `X`.
    #[serde(rename = "x")]
    pub x_part: LPoly,
    /// Coefficient of the formal symbol `Y`.
    #[serde(rename = "y")]
    pub y_part: LPoly,
}

impl MotivicExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(p: LPoly) -> Self {
        MotivicExpression {
            scalar_part: p,
            ..Self::default()
        }
    }

    /// The bare symbol `X`.
    pub fn symbol_x() -> Self {
        MotivicExpression {
            x_part: LPoly::one(),
            ..Self::default()
        }
    }

    /// The bare symbol `Y`.
    pub fn symbol_y() -> Self {
        MotivicExpression {
            y_part: LPoly::one(),
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar_part.is_zero() && self.x_part.is_zero() && self.y_part.is_zero()
    }

    pub fn has_symbols(&self) -> bool {
        !self.x_part.is_zero() || !self.y_part.is_zero()
    }

    /// Module multiplication. At most one factor may carry symbol parts.
    pub fn try_mul(&self, rhs: &MotivicExpression) -> Result<MotivicExpression, MotivicError> {
        if self.has_symbols() && rhs.has_symbols() {
            return Err(MotivicError::SymbolProduct);
        }
        Ok(MotivicExpression {
            scalar_part: &self.scalar_part * &rhs.scalar_part,
            x_part: &(&self.scalar_part * &rhs.x_part) + &(&self.x_part * &rhs.scalar_part),
            y_part: &(&self.scalar_part * &rhs.y_part) + &(&self.y_part * &rhs.scalar_part),
        })
    }

    /// Replace both symbols by explicit `Z[L]` classes.
    pub fn substitute_symbols(&self, x: &LPoly, y: &LPoly) -> LPoly {
        &self.scalar_part + &(&(&self.x_part * x) + &(&self.y_part * y))
    }
}

impl Add for &MotivicExpression {
    type Output = MotivicExpression;
    fn add(self, rhs: &MotivicExpression) -> MotivicExpression {
        MotivicExpression {
            scalar_part: &self.scalar_part + &rhs.scalar_part,
            x_part: &self.x_part + &rhs.x_part,
            y_part: &self.y_part + &rhs.y_part,
        }
    }
}

impl Sub for &MotivicExpression {
    type Output = MotivicExpression;
    fn sub(self, rhs: &MotivicExpression) -> MotivicExpression {
        self + &(-rhs)
    }
}

impl Neg for &MotivicExpression {
    type Output = MotivicExpression;
    fn neg(self) -> MotivicExpression {
        MotivicExpression {
            scalar_part: -&self.scalar_part,
            x_part: -&self.x_part,
            y_part: -&self.y_part,
        }
    }
}

impl fmt::Display for MotivicExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.scalar_part.is_zero() {
            parts.push(self.scalar_part.to_string());
        }
        if !self.x_part.is_zero() {
            parts.push(format!("({})·X", self.x_part));
        }
        if !self.y_part.is_zero() {
            parts.push(format!("({})·Y", self.y_part));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `[P^n] = 1 + L + ... + L^n`.
pub fn class_projective_space(n: usize) -> MotivicExpression {
    MotivicExpression::scalar(LPoly::geometric(n))
}

/// Class of `Gr(k,n)` via its affine cell decomposition: one cell of
/// codimension `|λ|` per partition `λ` in the `k×(n−k)` box, so the class is
/// `Σ_λ L^(k(n−k) − |λ|)` — the Gaussian binomial with `L` in place of `q`.
pub fn class_grassmannian(k: usize, n: usize) -> MotivicExpression {
    assert!(k <= n, "class_grassmannian requires 0 <= k <= n");
    let rows = k;
    let cols = n - k;
    let box_size = rows * cols;
    let mut coeffs = vec![0i64; box_size + 1];
    for_each_partition_in_box(rows, cols, &mut |lambda| {
        let weight: usize = lambda.iter().sum();
        coeffs[box_size - weight] += 1;
    });
    MotivicExpression::scalar(LPoly::from_coeffs(coeffs))
}

/// Visit every partition with at most `rows` parts, each part ≤ `cols`,
/// as a weakly decreasing `rows`-tuple (trailing zeros included).
fn for_each_partition_in_box(rows: usize, cols: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(parts: &mut Vec<usize>, rows: usize, cols: usize, max: usize, f: &mut impl FnMut(&[usize])) {
        if parts.len() == rows {
            f(parts);
            return;
        }
        for v in (0..=max.min(cols)).rev() {
            parts.push(v);
            rec(parts, rows, cols, v, f);
            parts.pop();
        }
    }
    if rows == 0 {
        f(&[]);
        return;
    }
    rec(&mut Vec::with_capacity(rows), rows, cols, cols, f);
}

/// Class of a hyperplane section of `Gr(2,5)`, split by the kernel dimension
/// of the defining 2-form. Derived from the fibration over the kernel:
/// smooth case `[P^3] + ([P^2]−[P^1])·[LG(2,4)]` with `[LG(2,4)]` a split
/// 3-dimensional quadric, singular case `[P^2] + ([P^3]−[P^1])·[P^2]`.
pub fn class_hyperplane_section(kernel_dim: u32) -> Result<MotivicExpression, MotivicError> {
    let p = |n: usize| LPoly::geometric(n);
    let poly = match kernel_dim {
        1 => {
            let lg24 = LPoly::from_coeffs(vec![1i64, 1, 1, 1]);
            &p(3) + &(&(&p(2) - &p(1)) * &lg24)
        }
        3 => &p(2) + &(&(&p(3) - &p(1)) * &p(2)),
        other => return Err(MotivicError::InvalidKernelDim(other)),
    };
    Ok(MotivicExpression::scalar(poly))
}

/// Class of the universal hyperplane section of `Gr(2,5)` over a family `S`
/// of 2-forms: `[S]·(1 + L + 2L² + 2L³ + L⁴ + L⁵) + L⁴·[S ∩ Gr(2,V∨)]`.
pub fn class_universal_hyperplane(
    s_class: &MotivicExpression,
    s_cap_dual_class: &MotivicExpression,
) -> Result<MotivicExpression, MotivicError> {
    let smooth = class_hyperplane_section(1).expect("kernel_dim 1 is valid");
    let l4 = MotivicExpression::scalar(LPoly::monomial(4));
    let main = s_class.try_mul(&smooth)?;
    let correction = l4.try_mul(s_cap_dual_class)?;
    Ok(&main + &correction)
}

/// Outcome of the double count of the universal hyperplane section over the
/// 4-plane of forms cutting out a quintic curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    /// `[P^4]·(smooth section class) + L⁴·Y` — fibration over the forms.
    pub lhs: MotivicExpression,
    /// `[Gr(2,5)]·[P^3] + L⁴·X` — fibration over the subspaces.
    pub rhs: MotivicExpression,
    /// `lhs − rhs`; equals `L⁴·(Y − X)` when the identity holds.
    pub difference: MotivicExpression,
    /// Scalar parts of the two counts agree.
    pub identity_holds: bool,
}

/// Compute the class of the universal hyperplane section in two ways and
/// compare. The scalar parts must agree, leaving `L⁴·([X]−[Y]) = 0`.
pub fn verify_quintic_duality() -> DualityReport {
    let lhs = class_universal_hyperplane(&class_projective_space(4), &MotivicExpression::symbol_y())
        .expect("scalar × symbol is always defined");
    let l4_x = MotivicExpression::symbol_x()
        .try_mul(&MotivicExpression::scalar(LPoly::monomial(4)))
        .expect("scalar × symbol");
    let rhs = &class_grassmannian(2, 5)
        .try_mul(&class_projective_space(3))
        .expect("scalar product")
        + &l4_x;
    let difference = &lhs - &rhs;
    let identity_holds = lhs.scalar_part == rhs.scalar_part;
    DualityReport {
        lhs,
        rhs,
        difference,
        identity_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> LPoly {
        LPoly::from_coeffs(coeffs.to_vec())
    }

    #[test]
    fn projective_space_classes() {
        assert_eq!(class_projective_space(0).scalar_part, LPoly::one());
        assert_eq!(class_projective_space(3).scalar_part, p(&[1, 1, 1, 1]));
    }

    #[test]
    fn grassmannian_class_matches_known_polynomial() {
        // [Gr(2,5)] = 1 + L + 2L² + 2L³ + 2L⁴ + L⁵ + L⁶
        assert_eq!(
            class_grassmannian(2, 5).scalar_part,
            p(&[1, 1, 2, 2, 2, 1, 1])
        );
    }

    #[test]
    fn grassmannian_of_lines_is_projective_space() {
        for n in 1..=7 {
            assert_eq!(class_grassmannian(1, n), class_projective_space(n - 1));
        }
    }

    #[test]
    fn grassmannian_duality_and_shape() {
        for n in 0..=7 {
            for k in 0..=n {
                let g = class_grassmannian(k, n).scalar_part;
                assert_eq!(g, class_grassmannian(n - k, n).scalar_part, "k={k} n={n}");
                assert!(g.is_palindromic());
                assert!(g.all_coeffs_positive());
                assert_eq!(g.degree(), Some(k * (n - k)));
            }
        }
    }

    #[test]
    fn grassmannian_class_matches_product_formula() {
        // Independent route: ([n]_L)! / ([k]_L)! ([n-k]_L)! computed by
        // exact polynomial division of the factored numerator.
        fn q_int(n: usize) -> LPoly {
            LPoly::geometric(n.saturating_sub(1))
        }
        fn divide_exact(num: &LPoly, den: &LPoly) -> LPoly {
            // long division, asserting zero remainder
            let mut rem = num.clone();
            let mut q_coeffs = vec![BigInt::from(0); num.coeffs().len()];
            let d_deg = den.degree().unwrap();
            let d_lead = den.coeff(d_deg);
            while let Some(r_deg) = rem.degree() {
                if r_deg < d_deg {
                    break;
                }
                let factor = rem.coeff(r_deg) / &d_lead;
                q_coeffs[r_deg - d_deg] = factor.clone();
                let mut shift = vec![BigInt::from(0); r_deg - d_deg + 1];
                shift[r_deg - d_deg] = factor;
                rem = &rem - &(&LPoly::from_coeffs(shift) * den);
            }
            assert!(rem.is_zero(), "division must be exact");
            LPoly::from_coeffs(q_coeffs)
        }
        for n in 0..=6 {
            for k in 0..=n {
                let mut num = LPoly::one();
                let mut den = LPoly::one();
                for i in 1..=k {
                    num = &num * &q_int(n - k + i);
                    den = &den * &q_int(i);
                }
                let expected = divide_exact(&num, &den);
                assert_eq!(class_grassmannian(k, n).scalar_part, expected, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn hyperplane_section_rows() {
        assert_eq!(
            class_hyperplane_section(1).unwrap().scalar_part,
            p(&[1, 1, 2, 2, 1, 1])
        );
        assert_eq!(
            class_hyperplane_section(3).unwrap().scalar_part,
            p(&[1, 1, 2, 2, 2, 1])
        );
        assert_eq!(
            class_hyperplane_section(5),
            Err(MotivicError::InvalidKernelDim(5))
        );
        assert_eq!(
            class_hyperplane_section(0),
            Err(MotivicError::InvalidKernelDim(0))
        );
    }

    #[test]
    fn singular_section_exceeds_smooth_by_l4() {
        let smooth = class_hyperplane_section(1).unwrap().scalar_part;
        let singular = class_hyperplane_section(3).unwrap().scalar_part;
        assert_eq!(&smooth + &LPoly::monomial(4), singular);
    }

    #[test]
    fn universal_hyperplane_formula() {
        // S = [P^4], S ∩ dual = symbol Y: the eq-1 side of the double count.
        let h = class_universal_hyperplane(&class_projective_space(4), &MotivicExpression::symbol_y())
            .unwrap();
        assert_eq!(
            h.scalar_part,
            &LPoly::geometric(4) * &p(&[1, 1, 2, 2, 1, 1])
        );
        assert_eq!(h.y_part, LPoly::monomial(4));
        assert!(h.x_part.is_zero());

        // empty family: S and S ∩ dual both vanish
        let empty = class_universal_hyperplane(&MotivicExpression::zero(), &MotivicExpression::zero())
            .unwrap();
        assert!(empty.is_zero());
        // the L⁴ correction term follows the formula verbatim
        let dual_only =
            class_universal_hyperplane(&MotivicExpression::zero(), &class_grassmannian(2, 5)).unwrap();
        assert_eq!(
            dual_only.scalar_part,
            &LPoly::monomial(4) * &class_grassmannian(2, 5).scalar_part
        );
    }

    #[test]
    fn symbol_products_rejected() {
        let x = MotivicExpression::symbol_x();
        let y = MotivicExpression::symbol_y();
        assert_eq!(x.try_mul(&x), Err(MotivicError::SymbolProduct));
        assert_eq!(x.try_mul(&y), Err(MotivicError::SymbolProduct));
        assert_eq!(y.try_mul(&y), Err(MotivicError::SymbolProduct));
        // scalar × symbol stays fine
        assert!(class_projective_space(2).try_mul(&x).is_ok());
    }

    #[test]
    fn duality_double_count() {
        let report = verify_quintic_duality();
        assert!(report.identity_holds);
        let shared = p(&[1, 2, 4, 6, 7, 7, 6, 4, 2, 1]);
        assert_eq!(report.lhs.scalar_part, shared);
        assert_eq!(report.rhs.scalar_part, shared);
        assert!(report.difference.scalar_part.is_zero());
        assert_eq!(report.difference.y_part, LPoly::monomial(4));
        assert_eq!(report.difference.x_part, -&LPoly::monomial(4));
        // substituting the same class for X and Y kills the difference
        let any = p(&[3, 1, 4]);
        assert!(report.difference.substitute_symbols(&any, &any).is_zero());
    }

    #[test]
    fn expression_json_shape() {
        let e = verify_quintic_duality().difference;
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v["scalar"], serde_json::json!([]));
        assert_eq!(v["x"], serde_json::json!([0, 0, 0, 0, -1]));
        assert_eq!(v["y"], serde_json::json!([0, 0, 0, 0, 1]));
        let back: MotivicExpression = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }

    proptest! {
        #[test]
        fn module_laws(a in proptest::collection::vec(-9i64..9, 0..5),
                       b in proptest::collection::vec(-9i64..9, 0..5),
                       xc in proptest::collection::vec(-9i64..9, 0..4),
                       yc in proptest::collection::vec(-9i64..9, 0..4)) {
            let s1 = MotivicExpression::scalar(p(&a));
            let s2 = MotivicExpression::scalar(p(&b));
            let sym = MotivicExpression {
                scalar_part: LPoly::zero(),
                x_part: p(&xc),
                y_part: p(&yc),
            };
            // scalars commute and associate through the module action
            prop_assert_eq!(s1.try_mul(&s2).unwrap(), s2.try_mul(&s1).unwrap());
            let left = s1.try_mul(&s2).unwrap().try_mul(&sym).unwrap();
            let right = s1.try_mul(&s2.try_mul(&sym).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
