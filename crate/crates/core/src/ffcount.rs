//! Brute-force enumeration over small finite fields: Grassmannian point
//! counts, hyperplane-section counts, dual linear sections, singularity
//! screening, and the torsor double-count cross-check.
//!
//! Subspaces are enumerated through their unique reduced-row-echelon basis,
//! pivot patterns in colexicographic order, so every subspace appears exactly
//! once and partial counts can be partitioned by pattern. Counts are summed
//! per pattern (in parallel where it pays off); the result is independent of
//! the partitioning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ff::{Elt, FieldError, FiniteField};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("enumeration size limit exceeded: {what}")]
    SizeLimit { what: String },
    #[error("the zero form has no section")]
    ZeroForm,
    #[error("matrix is not alternating (skew-symmetric with zero diagonal)")]
    NotAlternating,
    #[error("the five 2-forms must be linearly independent")]
    DependentForms,
    #[error("operation requires a prime base field, got extension degree {0}")]
    BaseFieldRequired(u64),
    #[error("bad fixture: {0}")]
    BadFixture(String),
    #[error("no fixture passed the smoothness screen within {0} attempts")]
    FixtureSearchExhausted(u64),
}

const AMBIENT: usize = 5;
const MAX_N: usize = 8;
type Row = [Elt; MAX_N];

/// Pairs `(i,j)`, `i < j`, indexing the coordinates of `Λ²` of a 5-space.
pub const PAIR_ORDER: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

// ---------------------------------------------------------------------------
// row-echelon linear algebra over a finite field

/// Reduce `rows[..count] × width` to reduced row echelon form; returns the
/// rank. Zero rows sink to the bottom.
fn rref(field: &FiniteField, rows: &mut [Row], count: usize, width: usize) -> usize {
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(src) = (pivot_row..count).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = field.inv(rows[pivot_row][col]);
        for c in 0..width {
            rows[pivot_row][c] = field.mul(rows[pivot_row][c], inv);
        }
        for r in 0..count {
            if r != pivot_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..width {
                    let sub = field.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == count {
            break;
        }
    }
    pivot_row
}

/// Kernel of the linear map given by `rows` (a `count × width` matrix acting
/// on width-vectors), as RREF basis rows.
fn kernel_basis(field: &FiniteField, rows: &[Row], count: usize, width: usize) -> Vec<Row> {
    let mut work: Vec<Row> = rows[..count].to_vec();
    let rank = rref(field, &mut work, count, width);
    let mut pivots = Vec::with_capacity(rank);
    for r in 0..rank {
        let col = (0..width).find(|&c| work[r][c] != 0).expect("nonzero row");
        pivots.push(col);
    }
    let mut basis = Vec::with_capacity(width - rank);
    for free in 0..width {
        if pivots.contains(&free) {
            continue;
        }
        let mut v: Row = [0; MAX_N];
        v[free] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(work[r][free]);
        }
        basis.push(v);
    }
    // free-column construction already yields RREF up to row order
    let n = basis.len();
    rref(field, &mut basis, n, width);
    basis
}

// ---------------------------------------------------------------------------
// domain types

/// Subspace of `F^n` held as its canonical reduced-row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subspace {
    pub basis: Vec<Vec<Elt>>,
    pub ambient_dim: usize,
}

impl Subspace {
    /// Canonicalize a spanning set; dependent rows collapse.
    pub fn from_spanning(field: &FiniteField, vectors: &[Vec<Elt>], ambient_dim: usize) -> Self {
        assert!(ambient_dim <= MAX_N);
        let mut rows: Vec<Row> = vectors
            .iter()
            .map(|v| {
                let mut r: Row = [0; MAX_N];
                r[..v.len()].copy_from_slice(v);
                r
            })
            .collect();
        let n = rows.len();
        let rank = rref(field, &mut rows, n, ambient_dim);
        Subspace {
            basis: rows[..rank]
                .iter()
                .map(|r| r[..ambient_dim].to_vec())
                .collect(),
            ambient_dim,
        }
    }

    fn from_rref_rows(rows: &[Row], k: usize, ambient_dim: usize) -> Self {
        Subspace {
            basis: rows[..k].iter().map(|r| r[..ambient_dim].to_vec()).collect(),
            ambient_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the intersection with another subspace.
    pub fn intersection_dim(&self, other: &Subspace, field: &FiniteField) -> usize {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut rows: Vec<Row> = Vec::with_capacity(self.dim() + other.dim());
        for v in self.basis.iter().chain(&other.basis) {
            let mut r: Row = [0; MAX_N];
            r[..v.len()].copy_from_slice(v);
            rows.push(r);
        }
        let n = rows.len();
        let rank_sum = rref(field, &mut rows, n, self.ambient_dim);
        self.dim() + other.dim() - rank_sum
    }
}

/// Alternating 2-form on the fixed 5-space, as a skew matrix with zero
/// diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoForm {
    matrix: [[Elt; AMBIENT]; AMBIENT],
}

impl TwoForm {
    pub fn new(matrix: [[Elt; AMBIENT]; AMBIENT], field: &FiniteField) -> Result<Self, CountError> {
        for i in 0..AMBIENT {
            if matrix[i][i] != 0 {
                return Err(CountError::NotAlternating);
            }
            for j in 0..AMBIENT {
                if matrix[i][j] as u64 >= field.size() {
                    return Err(CountError::BadFixture(format!(
                        "entry {} outside field of size {}",
                        matrix[i][j],
                        field.size()
                    )));
                }
                if matrix[j][i] != field.neg(matrix[i][j]) {
                    return Err(CountError::NotAlternating);
                }
            }
        }
        Ok(TwoForm { matrix })
    }

    /// Build from arbitrary integers, reduced into the prime subfield.
    pub fn from_integers(rows: &[Vec<i64>], field: &FiniteField) -> Result<Self, CountError> {
        if rows.len() != AMBIENT || rows.iter().any(|r| r.len() != AMBIENT) {
            return Err(CountError::BadFixture("matrix must be 5x5".into()));
        }
        let mut matrix = [[0 as Elt; AMBIENT]; AMBIENT];
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                matrix[i][j] = field.from_int(x);
            }
        }
        Self::new(matrix, field)
    }

    /// From the 10 coefficients `θ_ij`, `i < j`, in [`PAIR_ORDER`].
    pub fn from_coords(coords: &[Elt; 10], field: &FiniteField) -> Self {
        let mut matrix = [[0 as Elt; AMBIENT]; AMBIENT];
        for (idx, &(i, j)) in PAIR_ORDER.iter().enumerate() {
            matrix[i][j] = coords[idx];
            matrix[j][i] = field.neg(coords[idx]);
        }
        TwoForm { matrix }
    }

    pub fn coords(&self) -> [Elt; 10] {
        let mut out = [0 as Elt; 10];
        for (idx, &(i, j)) in PAIR_ORDER.iter().enumerate() {
            out[idx] = self.matrix[i][j];
        }
        out
    }

    pub fn matrix(&self) -> &[[Elt; AMBIENT]; AMBIENT] {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }

    /// `θ(u ∧ w) = uᵀ·M·w`.
    #[inline]
    pub fn eval(&self, field: &FiniteField, u: &Row, w: &Row) -> Elt {
        let mut acc = 0 as Elt;
        for i in 0..AMBIENT {
            if u[i] == 0 {
                continue;
            }
            let mut inner = 0 as Elt;
            for j in 0..AMBIENT {
                if self.matrix[i][j] != 0 && w[j] != 0 {
                    inner = field.add(inner, field.mul(self.matrix[i][j], w[j]));
                }
            }
            acc = field.add(acc, field.mul(u[i], inner));
        }
        acc
    }

    /// Kernel `{v : θ(v ∧ u) = 0 for all u}`.
    pub fn kernel(&self, field: &FiniteField) -> Subspace {
        let mut rows: Vec<Row> = Vec::with_capacity(AMBIENT);
        for i in 0..AMBIENT {
            let mut r: Row = [0; MAX_N];
            r[..AMBIENT].copy_from_slice(&self.matrix[i]);
            rows.push(r);
        }
        let basis = kernel_basis(field, &rows, AMBIENT, AMBIENT);
        Subspace::from_rref_rows(&basis, basis.len(), AMBIENT)
    }

    /// Vanishes on the 2-plane spanned by the two rows.
    #[inline]
    fn vanishes_on_plane(&self, field: &FiniteField, rows: &[Row]) -> bool {
        self.eval(field, &rows[0], &rows[1]) == 0
    }
}

/// Five linearly independent alternating forms spanning a 5-dimensional
/// space `A ⊂ Λ²(V∨)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormSpace {
    forms: [TwoForm; 5],
}

impl FormSpace {
    pub fn new(forms: [TwoForm; 5], field: &FiniteField) -> Result<Self, CountError> {
        let mut rows: Vec<Row> = Vec::with_capacity(8);
        for f in &forms {
            let coords = f.coords();
            let mut r: Row = [0; MAX_N];
            r.copy_from_slice(&coords[..MAX_N]);
            rows.push(r);
        }
        // coordinates live in F^10: check rank with two row chunks
        let mut wide: Vec<[Elt; 16]> = forms
            .iter()
            .map(|f| {
                let mut r = [0 as Elt; 16];
                r[..10].copy_from_slice(&f.coords());
                r
            })
            .collect();
        if rank_wide(field, &mut wide) != 5 {
            return Err(CountError::DependentForms);
        }
        Ok(FormSpace { forms })
    }

    pub fn forms(&self) -> &[TwoForm; 5] {
        &self.forms
    }

    /// Combination `Σ c_i θ_i`.
    pub fn combine(&self, coeffs: &[Elt; 5], field: &FiniteField) -> TwoForm {
        let mut coords = [0 as Elt; 10];
        for (f, &c) in self.forms.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (idx, v) in f.coords().iter().enumerate() {
                coords[idx] = field.add(coords[idx], field.mul(c, *v));
            }
        }
        TwoForm::from_coords(&coords, field)
    }

    /// Basis of the orthogonal complement `A⊥ ⊂ Λ²(V)` under the pairing
    /// `θ(p) = Σ θ_ij p_ij`, returned as five alternating forms on the dual
    /// 5-space.
    pub fn orthogonal_complement(&self, field: &FiniteField) -> FormSpace {
        let mut wide: Vec<[Elt; 16]> = self
            .forms
            .iter()
            .map(|f| {
                let mut r = [0 as Elt; 16];
                r[..10].copy_from_slice(&f.coords());
                r
            })
            .collect();
        let basis = kernel_basis_wide(field, &mut wide);
        assert_eq!(basis.len(), 5);
        let forms: Vec<TwoForm> = basis
            .iter()
            .map(|v| {
                let mut coords = [0 as Elt; 10];
                coords.copy_from_slice(&v[..10]);
                TwoForm::from_coords(&coords, field)
            })
            .collect();
        FormSpace::new(forms.try_into().expect("five kernel vectors"), field)
            .expect("kernel basis is independent")
    }

    /// All entries lie in the prime subfield (true for loaded fixtures).
    pub fn entries_in_prime_field(&self, field: &FiniteField) -> bool {
        let q = field.q() as Elt;
        self.forms
            .iter()
            .all(|f| f.coords().iter().all(|&c| c < q))
    }
}

// 10-wide variants for Λ² coordinates (Row is only 8 wide)
fn rank_wide(field: &FiniteField, rows: &mut [[Elt; 16]]) -> usize {
    let width = 10;
    let count = rows.len();
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(src) = (pivot_row..count).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = field.inv(rows[pivot_row][col]);
        for c in 0..width {
            rows[pivot_row][c] = field.mul(rows[pivot_row][c], inv);
        }
        for r in 0..count {
            if r != pivot_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..width {
                    let sub = field.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == count {
            break;
        }
    }
    pivot_row
}

fn kernel_basis_wide(field: &FiniteField, rows: &mut [[Elt; 16]]) -> Vec<[Elt; 16]> {
    let width = 10;
    let rank = rank_wide(field, rows);
    let mut pivots = Vec::with_capacity(rank);
    for r in 0..rank {
        pivots.push((0..width).find(|&c| rows[r][c] != 0).expect("nonzero row"));
    }
    let mut basis = Vec::with_capacity(width - rank);
    for free in 0..width {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = [0 as Elt; 16];
        v[free] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(rows[r][free]);
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// echelon enumeration

/// Pivot patterns (k-subsets of columns) in colexicographic order.
fn pivot_patterns(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn rec(start: usize, k: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for c in start..n {
            current.push(c);
            rec(c + 1, k, n, current, out);
            current.pop();
        }
    }
    rec(0, k, n, &mut current, &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Visit every RREF matrix with the given pivot pattern.
fn enumerate_pattern<F: FnMut(&[Row])>(
    field: &FiniteField,
    k: usize,
    n: usize,
    pattern: &[usize],
    f: &mut F,
) {
    let mut rows: Vec<Row> = vec![[0; MAX_N]; k];
    for (i, &p) in pattern.iter().enumerate() {
        rows[i][p] = 1;
    }
    // free slots: right of the row's pivot, not a pivot column
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in pattern.iter().enumerate() {
        for j in p + 1..n {
            if !pattern.contains(&j) {
                free.push((i, j));
            }
        }
    }
    let q = field.size() as Elt;
    if free.is_empty() {
        f(&rows);
        return;
    }
    let mut digits = vec![0 as Elt; free.len()];
    loop {
        f(&rows);
        let mut pos = 0;
        loop {
            if pos == free.len() {
                return;
            }
            digits[pos] += 1;
            if digits[pos] < q {
                rows[free[pos].0][free[pos].1] = digits[pos];
                break;
            }
            digits[pos] = 0;
            rows[free[pos].0][free[pos].1] = 0;
            pos += 1;
        }
    }
}

fn check_enumeration_size(k: usize, n: usize, field: &FiniteField) -> Result<(), CountError> {
    if n > MAX_N {
        return Err(CountError::SizeLimit {
            what: format!("ambient dimension {n} exceeds {MAX_N}"),
        });
    }
    if field.size() > 16 {
        return Err(CountError::SizeLimit {
            what: format!("field size {} exceeds 16 for subspace enumeration", field.size()),
        });
    }
    let total = gaussian_count(k, n, field.size() as u128);
    if total > 50_000_000 {
        return Err(CountError::SizeLimit {
            what: format!("Gr({k},{n}) over F_{} has {total} points", field.size()),
        });
    }
    Ok(())
}

/// Gaussian binomial `[n choose k]_q` as an integer, for size guards.
fn gaussian_count(k: usize, n: usize, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Count all `k`-dimensional subspaces of `F^n` by echelon enumeration.
pub fn count_grassmannian(k: usize, n: usize, field: &FiniteField) -> Result<u64, CountError> {
    if k > n {
        return Ok(0);
    }
    check_enumeration_size(k, n, field)?;
    let patterns = pivot_patterns(k, n);
    let total: u64 = patterns
        .par_iter()
        .map(|pat| {
            let mut count = 0u64;
            enumerate_pattern(field, k, n, pat, &mut |_| count += 1);
            count
        })
        .sum();
    Ok(total)
}

/// Subspace counts partitioned by pivot pattern, in colex order. The sum
/// over any partition of the patterns equals the total count.
pub fn count_grassmannian_by_pattern(
    k: usize,
    n: usize,
    field: &FiniteField,
) -> Result<Vec<(Vec<usize>, u64)>, CountError> {
    if k > n {
        return Ok(Vec::new());
    }
    check_enumeration_size(k, n, field)?;
    Ok(pivot_patterns(k, n)
        .into_iter()
        .map(|pat| {
            let mut count = 0u64;
            enumerate_pattern(field, k, n, &pat, &mut |_| count += 1);
            (pat, count)
        })
        .collect())
}

/// `#{U ∈ Gr(2,5) : θ(U) = 0}` for a nonzero 2-form.
pub fn count_hyperplane_section(theta: &TwoForm, field: &FiniteField) -> Result<u64, CountError> {
    if theta.is_zero() {
        return Err(CountError::ZeroForm);
    }
    check_enumeration_size(2, AMBIENT, field)?;
    let patterns = pivot_patterns(2, AMBIENT);
    let total: u64 = patterns
        .par_iter()
        .map(|pat| {
            let mut count = 0u64;
            enumerate_pattern(field, 2, AMBIENT, pat, &mut |rows| {
                if theta.vanishes_on_plane(field, rows) {
                    count += 1;
                }
            });
            count
        })
        .sum();
    Ok(total)
}

/// Which side of the dual pair of linear sections to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionSide {
    Primal,
    Dual,
}

/// A point of the dual section: a decomposable form in `P(A)` with its
/// 3-dimensional kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualPoint {
    /// Coefficients in the basis of `A`, first nonzero coefficient 1.
    pub coeffs: Vec<Elt>,
    pub kernel: Subspace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SectionPoints {
    Primal(Vec<Subspace>),
    Dual(Vec<DualPoint>),
}

/// Rational points of `X = Gr(2,V) ∩ P(A⊥)`: planes on which every form of
/// `A` vanishes. Order follows the colex echelon enumeration.
pub fn primal_section_points(a: &FormSpace, field: &FiniteField) -> Result<Vec<Subspace>, CountError> {
    check_enumeration_size(2, AMBIENT, field)?;
    let patterns = pivot_patterns(2, AMBIENT);
    let chunks: Vec<Vec<Subspace>> = patterns
        .par_iter()
        .map(|pat| {
            let mut found = Vec::new();
            enumerate_pattern(field, 2, AMBIENT, pat, &mut |rows| {
                if a.forms().iter().all(|t| t.vanishes_on_plane(field, rows)) {
                    found.push(Subspace::from_rref_rows(rows, 2, AMBIENT));
                }
            });
            found
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Visit projective representatives of the nonzero vectors of `F^dim`
/// (first nonzero coordinate normalized to 1).
fn for_each_projective_point<F: FnMut(&[Elt])>(field: &FiniteField, dim: usize, f: &mut F) {
    let q = field.size() as Elt;
    let mut coords = vec![0 as Elt; dim];
    // leading position runs from last to first so enumeration is stable
    for lead in (0..dim).rev() {
        coords[lead] = 1;
        for c in coords.iter_mut().skip(lead + 1) {
            *c = 0;
        }
        loop {
            f(&coords);
            let mut pos = lead + 1;
            loop {
                if pos == dim {
                    break;
                }
                coords[pos] += 1;
                if coords[pos] < q {
                    break;
                }
                coords[pos] = 0;
                pos += 1;
            }
            if pos == dim {
                break;
            }
        }
        coords[lead] = 0;
    }
}

/// Rational points of `Y = Gr(2,V∨) ∩ P(A)`: classes of forms in `A` with
/// three-dimensional kernel.
pub fn dual_section_points(a: &FormSpace, field: &FiniteField) -> Result<Vec<DualPoint>, CountError> {
    let mut out = Vec::new();
    for_each_projective_point(field, 5, &mut |coords| {
        let c: [Elt; 5] = coords.try_into().expect("five coefficients");
        let theta = a.combine(&c, field);
        let kernel = theta.kernel(field);
        debug_assert!(theta.is_zero() || kernel.dim() == 1 || kernel.dim() == 3);
        if kernel.dim() == 3 {
            out.push(DualPoint {
                coeffs: coords.to_vec(),
                kernel,
            });
        }
    });
    Ok(out)
}

pub fn section_points(
    a: &FormSpace,
    field: &FiniteField,
    side: SectionSide,
) -> Result<SectionPoints, CountError> {
    match side {
        SectionSide::Primal => Ok(SectionPoints::Primal(primal_section_points(a, field)?)),
        SectionSide::Dual => Ok(SectionPoints::Dual(dual_section_points(a, field)?)),
    }
}

// ---------------------------------------------------------------------------
// singularity screening

/// A pair witnessing the singularity criterion: a plane `U` with `θ(U) = 0`
/// for all `θ ∈ A` together with a nonzero `θ₀ ∈ A` whose kernel contains
/// `U`, over `F_{q^ext}`. Entries are field-element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularWitness {
    pub ext_degree: u64,
    pub plane_basis: Vec<Vec<Elt>>,
    pub theta0_coeffs: Vec<Elt>,
}

/// Outcome of screening for singular points over extensions of the base
/// field. An empty report means no singular point was found up to the
/// stated degree; it is not a smoothness proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub q: u64,
    pub degrees_screened: u64,
    pub witnesses: Vec<SingularWitness>,
}

impl SingularityReport {
    pub fn found_none(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Screen `X_A` for singular points over `F_{q^m}`, `m ≤ max_ext`: a point
/// `[U]` is singular exactly when every `θ ∈ A` vanishes on `U` and some
/// nonzero `θ₀ ∈ A` has `U ⊆ Ker(θ₀)`. The `θ₀` witness is found by exact
/// linear algebra over the extension, which searches the same space as
/// enumerating `P(A)(F_{q^m})`.
pub fn detect_singular(
    a: &FormSpace,
    field: &FiniteField,
    max_ext: u64,
) -> Result<SingularityReport, CountError> {
    if field.extension_degree() != 1 {
        return Err(CountError::BaseFieldRequired(field.extension_degree()));
    }
    if !a.entries_in_prime_field(field) {
        return Err(CountError::BadFixture(
            "forms must have prime-field entries".into(),
        ));
    }
    if !(1..=4).contains(&max_ext) {
        return Err(CountError::SizeLimit {
            what: format!("extension degree {max_ext} outside 1..=4"),
        });
    }
    let q = field.q();
    let mut witnesses = Vec::new();
    for m in 1..=max_ext {
        let ext = FiniteField::new(q, m)?;
        check_enumeration_size(2, AMBIENT, &ext)?;
        let patterns = pivot_patterns(2, AMBIENT);
        let mut found: Vec<SingularWitness> = patterns
            .par_iter()
            .map(|pat| {
                let mut local = Vec::new();
                enumerate_pattern(&ext, 2, AMBIENT, pat, &mut |rows| {
                    if !a.forms().iter().all(|t| t.vanishes_on_plane(&ext, rows)) {
                        return;
                    }
                    if let Some(theta0) = kernel_membership_witness(a, &ext, rows) {
                        local.push(SingularWitness {
                            ext_degree: m,
                            plane_basis: rows
                                .iter()
                                .take(2)
                                .map(|r| r[..AMBIENT].to_vec())
                                .collect(),
                            theta0_coeffs: theta0.to_vec(),
                        });
                    }
                });
                local
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        witnesses.append(&mut found);
    }
    Ok(SingularityReport {
        q,
        degrees_screened: max_ext,
        witnesses,
    })
}

/// Nonzero coefficients `c` with `U ⊆ Ker(Σ c_i θ_i)`, if any: the kernel of
/// the 10×5 system `Σ_j c_j (u_i^T M_j) = 0`.
fn kernel_membership_witness(
    a: &FormSpace,
    field: &FiniteField,
    plane: &[Row],
) -> Option<[Elt; 5]> {
    let mut rows: Vec<Row> = Vec::with_capacity(10);
    for u in plane.iter().take(2) {
        for out_coord in 0..AMBIENT {
            let mut r: Row = [0; MAX_N];
            for (j, form) in a.forms().iter().enumerate() {
                // coefficient of c_j in (u^T M_j)[out_coord]
                let mut acc = 0 as Elt;
                for i in 0..AMBIENT {
                    if u[i] != 0 {
                        acc = field.add(acc, field.mul(u[i], form.matrix()[i][out_coord]));
                    }
                }
                r[j] = acc;
            }
            rows.push(r);
        }
    }
    let basis = kernel_basis(field, &rows, rows.len(), 5);
    basis.first().map(|v| {
        let mut out = [0 as Elt; 5];
        out.copy_from_slice(&v[..5]);
        out
    })
}

// ---------------------------------------------------------------------------
// torsor double count

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsorReport {
    pub q: u64,
    pub seed: Option<u64>,
    pub count_x: u64,
    pub count_y: u64,
    pub counts_equal: bool,
    /// Every rational pair `(U, θ)` has `dim(U ∩ Ker θ) = 1`.
    pub pairing_ok: bool,
    /// The primal screen found nothing up to degree 2; when false the
    /// counts carry no weight.
    pub reliable: bool,
    pub screen_primal: SingularityReport,
    /// Screen of the dual section via `A⊥`, reported for context.
    pub screen_dual: SingularityReport,
}

/// Count both sections of a 5-space of forms over the base field and check
/// the incidence pairing. Torsors under one elliptic curve have the same
/// number of rational points over a finite field, so for smooth fixtures
/// the two counts must agree.
pub fn torsor_count_test(a: &FormSpace, field: &FiniteField) -> Result<TorsorReport, CountError> {
    if field.extension_degree() != 1 {
        return Err(CountError::BaseFieldRequired(field.extension_degree()));
    }
    let screen_primal = detect_singular(a, field, 2)?;
    let screen_dual = detect_singular(&a.orthogonal_complement(field), field, 2)?;
    let reliable = screen_primal.found_none();

    let x_points = primal_section_points(a, field)?;
    let y_points = dual_section_points(a, field)?;
    let mut pairing_ok = true;
    for u in &x_points {
        for y in &y_points {
            if u.intersection_dim(&y.kernel, field) != 1 {
                pairing_ok = false;
            }
        }
    }
    Ok(TorsorReport {
        q: field.q(),
        seed: None,
        count_x: x_points.len() as u64,
        count_y: y_points.len() as u64,
        counts_equal: x_points.len() == y_points.len(),
        pairing_ok,
        reliable,
        screen_primal,
        screen_dual,
    })
}

// ---------------------------------------------------------------------------
// universal hyperplane counts

/// Both fibrations of the incidence `{(U, [θ]) : θ(U) = 0}`: over the
/// forms (each fiber a hyperplane section of the Grassmannian) and over the
/// subspaces (each fiber a hyperplane of the form space).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalCountReport {
    pub q: u64,
    /// `Σ over [θ] of #{U : θ(U)=0}`.
    pub by_form_fibers: u64,
    /// `Σ over U of #{[θ] : θ(U)=0}`.
    pub by_subspace_fibers: u64,
    pub sides_agree: bool,
}

fn all_planes(field: &FiniteField) -> Result<Vec<[Row; 2]>, CountError> {
    check_enumeration_size(2, AMBIENT, field)?;
    let mut planes = Vec::new();
    for pat in pivot_patterns(2, AMBIENT) {
        enumerate_pattern(field, 2, AMBIENT, &pat, &mut |rows| {
            planes.push([rows[0], rows[1]]);
        });
    }
    Ok(planes)
}

/// Count the incidence over the full `P(Λ²V∨) ≅ P⁹` of forms, both ways.
pub fn count_universal_hyperplane(field: &FiniteField) -> Result<UniversalCountReport, CountError> {
    if field.size() > 3 {
        return Err(CountError::SizeLimit {
            what: format!("universal count supports field size 2 or 3, got {}", field.size()),
        });
    }
    let planes = all_planes(field)?;

    // projective representatives of Λ²(V∨) ∖ 0
    let mut thetas: Vec<TwoForm> = Vec::new();
    for_each_projective_point(field, 10, &mut |coords| {
        let c: [Elt; 10] = coords.try_into().expect("ten coefficients");
        thetas.push(TwoForm::from_coords(&c, field));
    });

    let by_form_fibers: u64 = thetas
        .par_iter()
        .map(|theta| {
            planes
                .iter()
                .filter(|p| theta.eval(field, &p[0], &p[1]) == 0)
                .count() as u64
        })
        .sum();

    let by_subspace_fibers: u64 = planes
        .par_iter()
        .map(|p| {
            thetas
                .iter()
                .filter(|theta| theta.eval(field, &p[0], &p[1]) == 0)
                .count() as u64
        })
        .sum();

    Ok(UniversalCountReport {
        q: field.size(),
        by_form_fibers,
        by_subspace_fibers,
        sides_agree: by_form_fibers == by_subspace_fibers,
    })
}

/// The same double count restricted to `S = P(A)` for a 5-space of forms,
/// together with the section sizes entering the scalar bookkeeping:
/// `by_form = Σ_{P(A)} #D_θ` and `by_subspace = Σ_U #{[θ] ∈ P(A) : θ(U)=0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalSectionReport {
    pub q: u64,
    pub by_form_fibers: u64,
    pub by_subspace_fibers: u64,
    pub count_x: u64,
    pub count_y: u64,
    pub sides_agree: bool,
}

pub fn count_universal_section(
    a: &FormSpace,
    field: &FiniteField,
) -> Result<UniversalSectionReport, CountError> {
    let planes = all_planes(field)?;
    let mut thetas: Vec<TwoForm> = Vec::new();
    for_each_projective_point(field, 5, &mut |coords| {
        let c: [Elt; 5] = coords.try_into().expect("five coefficients");
        thetas.push(a.combine(&c, field));
    });

    let by_form_fibers: u64 = thetas
        .par_iter()
        .map(|theta| {
            planes
                .iter()
                .filter(|p| theta.eval(field, &p[0], &p[1]) == 0)
                .count() as u64
        })
        .sum();
    let by_subspace_fibers: u64 = planes
        .par_iter()
        .map(|p| {
            thetas
                .iter()
                .filter(|theta| theta.eval(field, &p[0], &p[1]) == 0)
                .count() as u64
        })
        .sum();

    let count_x = primal_section_points(a, field)?.len() as u64;
    let count_y = dual_section_points(a, field)?.len() as u64;

    Ok(UniversalSectionReport {
        q: field.size(),
        by_form_fibers,
        by_subspace_fibers,
        count_x,
        count_y,
        sides_agree: by_form_fibers == by_subspace_fibers,
    })
}

// ---------------------------------------------------------------------------
// seeded random fixtures

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Uniform random alternating form.
pub fn random_alternating(field: &FiniteField, rng: &mut ChaCha20Rng) -> TwoForm {
    let mut coords = [0 as Elt; 10];
    for c in coords.iter_mut() {
        *c = rng.gen_range(0..field.size()) as Elt;
    }
    TwoForm::from_coords(&coords, field)
}

/// Random form of prescribed rank (2 or 4): a random change of basis applied
/// to `x₁∧x₂` or `x₁∧x₂ + x₃∧x₄`.
pub fn random_form_of_rank(
    field: &FiniteField,
    rank: usize,
    rng: &mut ChaCha20Rng,
) -> Result<TwoForm, CountError> {
    if rank != 2 && rank != 4 {
        return Err(CountError::BadFixture(format!(
            "alternating 5x5 forms have rank 2 or 4, got {rank}"
        )));
    }
    let mut canonical = [[0 as Elt; AMBIENT]; AMBIENT];
    canonical[0][1] = 1;
    canonical[1][0] = field.neg(1);
    if rank == 4 {
        canonical[2][3] = 1;
        canonical[3][2] = field.neg(1);
    }
    let b = random_invertible(field, rng);
    // M = Bᵀ · canonical · B
    let mut matrix = [[0 as Elt; AMBIENT]; AMBIENT];
    for i in 0..AMBIENT {
        for j in 0..AMBIENT {
            let mut acc = 0 as Elt;
            for r in 0..AMBIENT {
                if b[r][i] == 0 {
                    continue;
                }
                for c in 0..AMBIENT {
                    if canonical[r][c] != 0 && b[c][j] != 0 {
                        let term = field.mul(field.mul(b[r][i], canonical[r][c]), b[c][j]);
                        acc = field.add(acc, term);
                    }
                }
            }
            matrix[i][j] = acc;
        }
    }
    TwoForm::new(matrix, field)
}

fn random_invertible(field: &FiniteField, rng: &mut ChaCha20Rng) -> [[Elt; AMBIENT]; AMBIENT] {
    loop {
        let mut m = [[0 as Elt; AMBIENT]; AMBIENT];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(0..field.size()) as Elt;
            }
        }
        let mut rows: Vec<Row> = m
            .iter()
            .map(|r| {
                let mut row: Row = [0; MAX_N];
                row[..AMBIENT].copy_from_slice(r);
                row
            })
            .collect();
        if rref(field, &mut rows, AMBIENT, AMBIENT) == AMBIENT {
            return m;
        }
    }
}

/// Five independent random alternating forms.
pub fn random_form_space(field: &FiniteField, rng: &mut ChaCha20Rng) -> FormSpace {
    loop {
        let forms: [TwoForm; 5] = std::array::from_fn(|_| random_alternating(field, rng));
        if let Ok(space) = FormSpace::new(forms, field) {
            return space;
        }
    }
}

/// Deterministically search from `seed` for a form space whose primal screen
/// up to degree 2 is clean; returns the space and the number of attempts.
pub fn random_smooth_form_space(
    field: &FiniteField,
    seed: u64,
    max_attempts: u64,
) -> Result<(FormSpace, u64), CountError> {
    let mut rng = seeded_rng(seed);
    for attempt in 0..max_attempts {
        let a = random_form_space(field, &mut rng);
        if detect_singular(&a, field, 2)?.found_none() {
            return Ok((a, attempt));
        }
    }
    Err(CountError::FixtureSearchExhausted(max_attempts))
}

// ---------------------------------------------------------------------------
// fixture wire format: an array of five 5×5 integer matrices

pub fn form_space_from_json(text: &str, field: &FiniteField) -> Result<FormSpace, CountError> {
    let raw: Vec<Vec<Vec<i64>>> =
        serde_json::from_str(text).map_err(|e| CountError::BadFixture(e.to_string()))?;
    if raw.len() != 5 {
        return Err(CountError::BadFixture(format!(
            "expected five matrices, got {}",
            raw.len()
        )));
    }
    let mut forms = Vec::with_capacity(5);
    for m in &raw {
        forms.push(TwoForm::from_integers(m, field)?);
    }
    FormSpace::new(forms.try_into().expect("five forms"), field)
}

pub fn form_space_to_json(a: &FormSpace) -> String {
    let raw: Vec<Vec<Vec<i64>>> = a
        .forms()
        .iter()
        .map(|f| {
            f.matrix()
                .iter()
                .map(|row| row.iter().map(|&x| x as i64).collect())
                .collect()
        })
        .collect();
    serde_json::to_string(&raw).expect("plain integers serialize")
}
