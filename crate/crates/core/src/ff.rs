//! Small finite fields `F_{q^m}` (`q` prime ≤ 7, `m` ≤ 4) as polynomial
//! quotients with table-driven arithmetic.
//!
//! Elements are indices below `q^m`, encoding the coefficient vector of a
//! residue polynomial in base `q`, constant term least significant. The
//! modulus is the lexicographically first irreducible monic polynomial of
//! degree `m` in that encoding, so every count downstream is reproducible
//! bit for bit. The prime field embeds as the indices below `q`.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic must be a prime at most 7, got {0}")]
    BadCharacteristic(u64),
    #[error("extension degree must be between 1 and 4, got {0}")]
    BadDegree(u64),
    #[error("{0} is not a prime power q^m with q ≤ 7 prime and m ≤ 4")]
    NotPrimePower(u64),
}

/// Field element: an index below the field size.
pub type Elt = u16;

#[derive(Debug, Clone, Serialize)]
pub struct FiniteField {
    q: u16,
    m: u8,
    size: u16,
    /// Monic modulus, little-endian coefficients, length `m + 1`.
    modulus: Vec<u16>,
    #[serde(skip)]
    add_table: Vec<Elt>,
    #[serde(skip)]
    mul_table: Vec<Elt>,
    #[serde(skip)]
    neg_table: Vec<Elt>,
    #[serde(skip)]
    inv_table: Vec<Elt>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m
    }
}
impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(q: u64, m: u64) -> Result<Self, FieldError> {
        if !matches!(q, 2 | 3 | 5 | 7) {
            return Err(FieldError::BadCharacteristic(q));
        }
        if !(1..=4).contains(&m) {
            return Err(FieldError::BadDegree(m));
        }
        let q = q as u16;
        let m = m as u8;
        let size = (q as u32).pow(m as u32) as u16;
        let modulus = first_irreducible(q, m);
        debug_assert!(is_irreducible(&modulus, q));

        let mut field = FiniteField {
            q,
            m,
            size,
            modulus,
            add_table: Vec::new(),
            mul_table: Vec::new(),
            neg_table: Vec::new(),
            inv_table: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// Field of the given order, factored as `q^m`.
    pub fn of_order(n: u64) -> Result<Self, FieldError> {
        for q in [2u64, 3, 5, 7] {
            let mut pow = q;
            for m in 1..=4u64 {
                if pow == n {
                    return Self::new(q, m);
                }
                pow *= q;
            }
        }
        Err(FieldError::NotPrimePower(n))
    }

    fn build_tables(&mut self) {
        let s = self.size as usize;
        let mut add = vec![0 as Elt; s * s];
        let mut mul = vec![0 as Elt; s * s];
        for a in 0..s {
            let da = self.decode(a as Elt);
            for b in a..s {
                let db = self.decode(b as Elt);
                let sum = self.encode(&add_digits(&da, &db, self.q));
                let prod = self.encode(&self.mulmod_digits(&da, &db));
                add[a * s + b] = sum;
                add[b * s + a] = sum;
                mul[a * s + b] = prod;
                mul[b * s + a] = prod;
            }
        }
        let mut neg = vec![0 as Elt; s];
        for (a, slot) in neg.iter_mut().enumerate() {
            let nd: Vec<u16> = self.decode(a as Elt).iter().map(|&c| (self.q - c) % self.q).collect();
            *slot = self.encode(&nd);
        }
        let mut inv = vec![0 as Elt; s];
        for a in 1..s {
            inv[a] = (1..s)
                .find(|&b| mul[a * s + b] == 1)
                .expect("every nonzero element of a field is invertible") as Elt;
        }
        self.add_table = add;
        self.mul_table = mul;
        self.neg_table = neg;
        self.inv_table = inv;
    }

    fn decode(&self, x: Elt) -> Vec<u16> {
        let mut digits = vec![0u16; self.m as usize];
        let mut v = x;
        for d in digits.iter_mut() {
            *d = v % self.q;
            v /= self.q;
        }
        digits
    }

    fn encode(&self, digits: &[u16]) -> Elt {
        let mut acc: u32 = 0;
        for &d in digits.iter().rev() {
            acc = acc * self.q as u32 + d as u32;
        }
        acc as Elt
    }

    /// Multiply residue polynomials and reduce by the (monic) modulus.
    fn mulmod_digits(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let q = self.q as u32;
        let m = self.m as usize;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u32 * bj as u32) % q;
            }
        }
        for deg in (m..2 * m - 1).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            prod[deg] = 0;
            for (k, &mc) in self.modulus.iter().enumerate().take(m) {
                let idx = deg - m + k;
                prod[idx] = (prod[idx] + q - lead * mc as u32 % q) % q;
            }
        }
        prod.truncate(m);
        prod.iter().map(|&c| c as u16).collect()
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn extension_degree(&self) -> u64 {
        self.m as u64
    }

    pub fn size(&self) -> u64 {
        self.size as u64
    }

    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn zero(&self) -> Elt {
        0
    }

    pub fn one(&self) -> Elt {
        1
    }

    /// Reduce an integer into the prime subfield.
    pub fn from_int(&self, x: i64) -> Elt {
        x.rem_euclid(self.q as i64) as Elt
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add_table[a as usize * self.size as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul_table[a as usize * self.size as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg_table[a as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        assert_ne!(a, 0, "zero has no inverse");
        self.inv_table[a as usize]
    }

    #[inline]
    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }
}

fn add_digits(a: &[u16], b: &[u16], q: u16) -> Vec<u16> {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % q).collect()
}

/// Lexicographically first irreducible monic polynomial of degree `m`,
/// ordered by the base-`q` encoding of the non-leading coefficients.
fn first_irreducible(q: u16, m: u8) -> Vec<u16> {
    let count = (q as u32).pow(m as u32);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut v = idx;
        for _ in 0..m {
            coeffs.push((v % q as u32) as u16);
            v /= q as u32;
        }
        coeffs.push(1); // monic
        if is_irreducible(&coeffs, q) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_q")
}

/// Exhaustive trial division by all monic polynomials of degree up to
/// `deg/2`.
fn is_irreducible(poly: &[u16], q: u16) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for half_deg in 1..=deg / 2 {
        let count = (q as u32).pow(half_deg as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(half_deg + 1);
            let mut v = idx;
            for _ in 0..half_deg {
                div.push((v % q as u32) as u16);
                v /= q as u32;
            }
            div.push(1);
            if poly_rem_is_zero(poly, &div, q) {
                return false;
            }
        }
    }
    true
}

/// Does `div` (monic) divide `poly` exactly over `F_q`?
fn poly_rem_is_zero(poly: &[u16], div: &[u16], q: u16) -> bool {
    let q = q as u32;
    let mut rem: Vec<u32> = poly.iter().map(|&c| c as u32).collect();
    let d = div.len() - 1;
    for deg in (d..rem.len()).rev() {
        let lead = rem[deg];
        if lead == 0 {
            continue;
        }
        rem[deg] = 0;
        for (k, &dc) in div.iter().enumerate().take(d) {
            let idx = deg - d + k;
            rem[idx] = (rem[idx] + q - lead * dc as u32 % q) % q;
        }
    }
    rem.iter().all(|&c| c == 0)
}
