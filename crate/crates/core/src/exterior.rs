//! Exterior algebra of constant-coefficient (p,q)-forms on complex n-space.
//!
//! A form lives in Λ^p E ⊗ Λ^q Ē for a complex vector space E of dimension n
//! and is stored as a sparse map from basis monomials to complex coefficients.
//! The basis monomial keyed by (I, J) is dz_{i1}∧…∧dz_{ip}∧dz̄_{j1}∧…∧dz̄_{jq}
//! with all holomorphic differentials preceding all antiholomorphic ones;
//! interleaved products are normalized to this layout at construction time.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default pruning threshold for [`Form::normalized`].
pub const NORMALIZE_EPS: f64 = 1e-12;

/// i^m computed exactly (components are 0 or ±1).
pub fn i_pow(m: i64) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Binomial coefficient C(n, k); 0 outside the triangle.
pub fn binomial(n: u32, k: i32) -> usize {
    if k < 0 || k as u32 > n {
        return 0;
    }
    let k = (k as u32).min(n - k as u32) as u64;
    let n = n as u64;
    let mut acc: u64 = 1;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc as usize
}

/// A strictly increasing list of 1-based indices into {1, …, n}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: Vec<u8>,
}

impl MultiIndex {
    /// Builds a multi-index, validating strict monotonicity and the range [1, n].
    pub fn new(entries: &[u8], n: u32) -> Result<Self> {
        for (pos, &e) in entries.iter().enumerate() {
            if e < 1 || e as u32 > n {
                return Err(Error::InvalidParameter(format!(
                    "index {e} out of range 1..={n}"
                )));
            }
            if pos > 0 && entries[pos - 1] >= e {
                return Err(Error::InvalidParameter(format!(
                    "indices not increasing: {:?}",
                    entries
                )));
            }
        }
        Ok(Self {
            entries: entries.to_vec(),
        })
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn contains(&self, e: u8) -> bool {
        self.entries.binary_search(&e).is_ok()
    }

    /// Merges two disjoint increasing lists, returning the sorted union and the
    /// sign of the permutation that sorts the concatenation; `None` on collision.
    pub fn merge(&self, other: &Self) -> Option<(Self, i32)> {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0usize, 0usize);
        // Each element of `b` moved left past the remaining tail of `a`
        // contributes that many transpositions.
        let mut inversions = 0usize;
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                inversions += a.len() - i;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((Self { entries: out }, sign))
    }

    /// The complement {1, …, n} \ self, increasing.
    pub fn complement(&self, n: u32) -> Self {
        let mut out = Vec::with_capacity(n as usize - self.entries.len());
        let mut it = self.entries.iter().peekable();
        for e in 1..=n as u8 {
            if it.peek() == Some(&&e) {
                it.next();
            } else {
                out.push(e);
            }
        }
        Self { entries: out }
    }

    /// All C(n, k) increasing k-subsets of {1, …, n} in lexicographic order.
    pub fn enumerate(n: u32, k: u32) -> Vec<Self> {
        if k > n {
            return Vec::new();
        }
        let k = k as usize;
        let mut out = Vec::with_capacity(binomial(n, k as i32));
        let mut cur: Vec<u8> = (1..=k as u8).collect();
        loop {
            out.push(Self { entries: cur.clone() });
            // advance to the next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < (n as u8) - (k as u8 - 1 - i as u8) {
                    cur[i] += 1;
                    for j in i + 1..k {
                        cur[j] = cur[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A bidegree (p, q) over ambient dimension n. Degrees outside [0, n] denote
/// the zero space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bidegree {
    pub p: i32,
    pub q: i32,
    pub n: u32,
}

impl Bidegree {
    pub fn new(p: i32, q: i32, n: u32) -> Self {
        Self { p, q, n }
    }

    /// True when V^{p,q} = 0 by convention.
    pub fn is_zero_space(&self) -> bool {
        self.p < 0 || self.q < 0 || self.p as u32 > self.n || self.q as u32 > self.n
    }

    /// dim V^{p,q} = C(n,p)·C(n,q), zero outside the valid range.
    pub fn dim(&self) -> usize {
        if self.is_zero_space() {
            0
        } else {
            binomial(self.n, self.p) * binomial(self.n, self.q)
        }
    }

    pub fn shifted(&self, dp: i32, dq: i32) -> Self {
        Self::new(self.p + dp, self.q + dq, self.n)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})|n={}", self.p, self.q, self.n)
    }
}

pub type BasisKey = (MultiIndex, MultiIndex);

/// A constant-coefficient (p,q)-form, stored sparsely over the monomial basis.
///
/// Absent keys mean zero. Stored zeros are permitted; [`Form::normalized`]
/// prunes entries with modulus below an explicit epsilon and is never invoked
/// implicitly by the algebra operations.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    bidegree: Bidegree,
    terms: BTreeMap<BasisKey, Complex64>,
}

impl Form {
    pub fn zero(bidegree: Bidegree) -> Self {
        Self {
            bidegree,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar c, as a (0,0)-form.
    pub fn scalar(c: Complex64, n: u32) -> Self {
        let mut f = Self::zero(Bidegree::new(0, 0, n));
        if c != Complex64::ZERO {
            f.terms.insert((MultiIndex::empty(), MultiIndex::empty()), c);
        }
        f
    }

    pub fn one(n: u32) -> Self {
        Self::scalar(Complex64::new(1.0, 0.0), n)
    }

    /// The basis monomial dz_I ∧ dz̄_J.
    pub fn monomial(i: MultiIndex, j: MultiIndex, n: u32) -> Self {
        let bidegree = Bidegree::new(i.len() as i32, j.len() as i32, n);
        let mut f = Self::zero(bidegree);
        f.terms.insert((i, j), Complex64::new(1.0, 0.0));
        f
    }

    /// dz_i as a (1,0)-form.
    pub fn dz(i: u8, n: u32) -> Result<Self> {
        Ok(Self::monomial(MultiIndex::new(&[i], n)?, MultiIndex::empty(), n))
    }

    /// dz̄_j as a (0,1)-form.
    pub fn dzbar(j: u8, n: u32) -> Result<Self> {
        Ok(Self::monomial(MultiIndex::empty(), MultiIndex::new(&[j], n)?, n))
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
    }

    pub fn n(&self) -> u32 {
        self.bidegree.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, key: &BasisKey) -> Complex64 {
        self.terms.get(key).copied().unwrap_or(Complex64::ZERO)
    }

    /// Inserts a coefficient, validating index sizes against the bidegree.
    pub fn set_coefficient(&mut self, i: MultiIndex, j: MultiIndex, c: Complex64) -> Result<()> {
        if i.len() as i32 != self.bidegree.p || j.len() as i32 != self.bidegree.q {
            return Err(Error::BidegreeMismatch {
                expected_p: self.bidegree.p,
                expected_q: self.bidegree.q,
                got_p: i.len() as i32,
                got_q: j.len() as i32,
            });
        }
        self.terms.insert((i, j), c);
        Ok(())
    }

    fn accumulate(&mut self, key: BasisKey, c: Complex64) {
        let entry = self.terms.entry(key).or_insert(Complex64::ZERO);
        *entry += c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| *c == Complex64::ZERO)
    }

    /// Coefficient ℓ² norm.
    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Removes stored terms with modulus ≤ eps. The only place pruning happens.
    pub fn normalized(mut self, eps: f64) -> Self {
        self.terms.retain(|_, c| c.norm() > eps);
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), -*c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.bidegree.n != other.bidegree.n {
            return Err(Error::DimensionMismatch(self.bidegree.n, other.bidegree.n));
        }
        if self.bidegree.p != other.bidegree.p || self.bidegree.q != other.bidegree.q {
            return Err(Error::BidegreeMismatch {
                expected_p: self.bidegree.p,
                expected_q: self.bidegree.q,
                got_p: other.bidegree.p,
                got_q: other.bidegree.q,
            });
        }
        Ok(())
    }

    /// Exterior product. On basis monomials,
    /// e(I_a,J_a) ∧ e(I_b,J_b) = (−1)^{|J_a|·|I_b|} sgn(I_a,I_b) sgn(J_a,J_b) e(I_a⊔I_b, J_a⊔J_b),
    /// vanishing on index collision; the sign moves the dz̄ block of the left
    /// factor past the dz block of the right one, then sorts each block.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.bidegree.n != other.bidegree.n {
            return Err(Error::DimensionMismatch(self.bidegree.n, other.bidegree.n));
        }
        let out_deg = Bidegree::new(
            self.bidegree.p + other.bidegree.p,
            self.bidegree.q + other.bidegree.q,
            self.bidegree.n,
        );
        let mut out = Form::zero(out_deg);
        if out_deg.is_zero_space() {
            return Ok(out);
        }
        let block_sign = if (self.bidegree.q * other.bidegree.p) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        for ((ia, ja), ca) in &self.terms {
            for ((ib, jb), cb) in &other.terms {
                let Some((i, si)) = ia.merge(ib) else { continue };
                let Some((j, sj)) = ja.merge(jb) else { continue };
                let sign = block_sign * (si * sj) as f64;
                out.accumulate((i, j), ca * cb * sign);
            }
        }
        Ok(out)
    }

    /// Complex conjugation: (p,q) ↦ (q,p), coefficient c at (I,J) contributes
    /// conj(c)·(−1)^{pq} at (J,I). An involution.
    pub fn conjugate(&self) -> Self {
        let bd = self.bidegree;
        let sign = if (bd.p * bd.q) % 2 == 0 { 1.0 } else { -1.0 };
        let mut out = Form::zero(Bidegree::new(bd.q, bd.p, bd.n));
        for ((i, j), c) in &self.terms {
            out.accumulate((j.clone(), i.clone()), c.conj() * sign);
        }
        out
    }

    /// True iff ‖a − ā‖ ≤ tol. Rejects p ≠ q.
    pub fn is_real(&self, tol: f64) -> Result<bool> {
        if self.bidegree.p != self.bidegree.q {
            return Err(Error::BidegreeMismatch {
                expected_p: self.bidegree.p,
                expected_q: self.bidegree.p,
                got_p: self.bidegree.p,
                got_q: self.bidegree.q,
            });
        }
        Ok(self.sub(&self.conjugate())?.norm() <= tol)
    }

    /// Validates that a (k,k)-form is real within tol·max(1, ‖Ω‖).
    pub fn ensure_real(&self, rel_tol: f64) -> Result<()> {
        let tol = rel_tol * self.norm().max(1.0);
        let defect = self.sub(&self.conjugate())?.norm();
        if defect > tol {
            return Err(Error::NotReal { defect, tol });
        }
        Ok(())
    }
}

/// The reference Kähler form ω = i·(dz₁∧dz̄₁ + ⋯ + dzₙ∧dz̄ₙ).
pub fn kahler_form(n: u32) -> Form {
    kahler_power(1, n)
}

/// ω^k = k!·Σ_{|I|=k} i^{k²}·e(I,I); the zero form for k > n, 1 for k = 0.
pub fn kahler_power(k: u32, n: u32) -> Form {
    if k > n {
        return Form::zero(Bidegree::new(k as i32, k as i32, n));
    }
    let mut f = Form::zero(Bidegree::new(k as i32, k as i32, n));
    let mut factorial = 1.0f64;
    for j in 2..=k as u64 {
        factorial *= j as f64;
    }
    let coeff = i_pow((k as i64) * (k as i64)) * factorial;
    for i in MultiIndex::enumerate(n, k) {
        f.terms.insert((i.clone(), i), coeff);
    }
    f
}
