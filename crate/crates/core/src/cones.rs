//! Constructors, samplers, and positivity certificates for the cones in play:
//! Kähler forms, positive and strictly positive (k,k)-forms, wedge products of
//! Kähler forms, and determinants of Griffiths-positive matrices of
//! (1,1)-forms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::{i_pow, kahler_form, Bidegree, Form, MultiIndex};
use crate::io::{FormFile, GriffithsMatrixFile};
use crate::linalg::{self, CMatrix, CVector};
use crate::rng::{complex_gaussian, SeededRng};

/// A Kähler form, carried as its n×n Hermitian positive-definite coefficient
/// matrix h; the form itself is i·Σ h_{jl}·dz_j∧dz̄_l.
#[derive(Debug, Clone)]
pub struct KahlerForm {
    n: u32,
    h: CMatrix,
    lambda_min: f64,
}

impl KahlerForm {
    /// Certifies Hermitian symmetry and positive-definiteness at construction.
    pub fn new(h: CMatrix) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n || n == 0 {
            return Err(Error::InvalidParameter("h must be square and nonempty".into()));
        }
        let defect = (&h - h.adjoint()).norm();
        if defect > 1e-10 * h.norm().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        let (values, _) = linalg::hermitian_eigen(&h);
        let lambda_min = values[0];
        if lambda_min <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coefficient matrix is not positive-definite (lambda_min = {lambda_min:.3e})"
            )));
        }
        Ok(Self {
            n: n as u32,
            h,
            lambda_min,
        })
    }

    /// The reference form ω (h = identity).
    pub fn standard(n: u32) -> Self {
        Self {
            n,
            h: CMatrix::identity(n as usize, n as usize),
            lambda_min: 1.0,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.h
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// The (1,1)-form i·Σ h_{jl}·dz_j∧dz̄_l.
    pub fn form(&self) -> Form {
        form_from_coefficient_matrix(&self.h, self.n)
    }

    /// The convex slide (1−t)·h + t·I, Kähler for every t ∈ [0,1].
    pub fn toward_standard(&self, t: f64) -> Form {
        let n = self.n as usize;
        let blended = self.h.map(|c| c * (1.0 - t)) + CMatrix::identity(n, n) * Complex64::new(t, 0.0);
        form_from_coefficient_matrix(&blended, self.n)
    }
}

/// i·Σ h_{jl}·dz_j∧dz̄_l for an arbitrary coefficient matrix.
pub fn form_from_coefficient_matrix(h: &CMatrix, n: u32) -> Form {
    let mut f = Form::zero(Bidegree::new(1, 1, n));
    let i = Complex64::new(0.0, 1.0);
    for r in 0..n as usize {
        for c in 0..n as usize {
            let v = h[(r, c)];
            if v != Complex64::ZERO {
                f.set_coefficient(
                    MultiIndex::new(&[(r + 1) as u8], n).unwrap(),
                    MultiIndex::new(&[(c + 1) as u8], n).unwrap(),
                    i * v,
                )
                .expect("(1,1) coefficient");
            }
        }
    }
    f
}

/// Coefficient matrix h of a (1,1)-form written as i·Σ h_{jl}·dz_j∧dz̄_l.
pub fn coefficient_matrix(form: &Form) -> Result<CMatrix> {
    let bd = form.bidegree();
    if bd.p != 1 || bd.q != 1 {
        return Err(Error::BidegreeMismatch {
            expected_p: 1,
            expected_q: 1,
            got_p: bd.p,
            got_q: bd.q,
        });
    }
    let n = bd.n as usize;
    let mut h = CMatrix::zeros(n, n);
    let minus_i = Complex64::new(0.0, -1.0);
    for ((i, j), c) in form.terms() {
        h[(i.entries()[0] as usize - 1, j.entries()[0] as usize - 1)] = minus_i * c;
    }
    Ok(h)
}

/// Samples a Kähler form h = A·A* + εI with Gaussian A, with ε lifted until
/// the condition number is at most `condition_cap`. Deterministic per rng state.
pub fn sample_kahler(n: u32, rng: &mut SeededRng, condition_cap: f64) -> KahlerForm {
    let dim = n as usize;
    let a = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let base = &a * a.adjoint();
    let (values, _) = linalg::hermitian_eigen(&base);
    let (mu_min, mu_max) = (values[0].max(0.0), values[dim - 1].max(1e-300));
    if condition_cap <= 1.0 {
        // the cap forces isotropy: a scalar multiple of the identity
        return KahlerForm {
            n,
            h: CMatrix::identity(dim, dim) * Complex64::new(mu_max, 0.0),
            lambda_min: mu_max,
        };
    }
    let needed = (mu_max - condition_cap * mu_min) / (condition_cap - 1.0);
    let eps = needed.max(0.0);
    let h = base + CMatrix::identity(dim, dim) * Complex64::new(eps, 0.0);
    KahlerForm::new(h).expect("A·A* + εI is Hermitian positive-definite")
}

/// Ω = ω₁∧…∧ω_k. The empty product is the scalar 1.
pub fn timorin_product(factors: &[KahlerForm]) -> Result<Form> {
    match factors.first() {
        Some(f) => timorin_product_with_n(factors, f.n()),
        None => Err(Error::InvalidParameter(
            "empty factor list: use timorin_product_with_n to fix the ambient dimension".into(),
        )),
    }
}

/// As [`timorin_product`], with the ambient dimension passed explicitly so the
/// empty product (k = 0) is well-formed.
pub fn timorin_product_with_n(factors: &[KahlerForm], n: u32) -> Result<Form> {
    if factors.len() > n as usize {
        return Err(Error::InvalidParameter(format!(
            "{} factors exceed ambient dimension {n}",
            factors.len()
        )));
    }
    let mut acc = Form::one(n);
    for f in factors {
        if f.n() != n {
            return Err(Error::DimensionMismatch(n, f.n()));
        }
        acc = acc.wedge(&f.form())?;
    }
    Ok(acc)
}

/// A Hermitian k×k matrix of (1,1)-forms: entries[i][j] = conjugate(entries[j][i]).
#[derive(Debug, Clone)]
pub struct GriffithsMatrix {
    n: u32,
    k: usize,
    entries: Vec<Vec<Form>>,
}

impl GriffithsMatrix {
    pub fn new(entries: Vec<Vec<Form>>) -> Result<Self> {
        let k = entries.len();
        if k == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        let n = entries[0][0].n();
        let mut defect: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for row in &entries {
            if row.len() != k {
                return Err(Error::InvalidParameter("matrix must be square".into()));
            }
            for e in row {
                let bd = e.bidegree();
                if bd.n != n || bd.p != 1 || bd.q != 1 {
                    return Err(Error::InvalidParameter(
                        "entries must be (1,1)-forms over a common n".into(),
                    ));
                }
                scale = scale.max(e.norm());
            }
        }
        for i in 0..k {
            for j in 0..k {
                defect = defect.max(
                    entries[i][j]
                        .sub(&entries[j][i].conjugate())
                        .expect("same space")
                        .norm(),
                );
            }
        }
        if defect > 1e-10 * scale.max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { n, k, entries })
    }

    /// ω times the k×k identity.
    pub fn scaled_identity(n: u32, k: usize) -> Self {
        let w = kahler_form(n);
        let zero = Form::zero(Bidegree::new(1, 1, n));
        let entries = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { w.clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        Self { n, k, entries }
    }

    pub fn diagonal(factors: &[KahlerForm]) -> Result<Self> {
        let k = factors.len();
        if k == 0 {
            return Err(Error::InvalidParameter("empty diagonal".into()));
        }
        let n = factors[0].n();
        let zero = Form::zero(Bidegree::new(1, 1, n));
        let entries = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { factors[i].form() } else { zero.clone() })
                    .collect()
            })
            .collect();
        Ok(Self { n, k, entries })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    /// The flattened nk×nk coefficient tensor N[(a,j),(b,l)] with
    /// α_{ab} = i·Σ_{j,l} N[(a,j),(b,l)]·dz_j∧dz̄_l. Hermitian when the matrix is.
    pub fn flattened_tensor(&self) -> CMatrix {
        let n = self.n as usize;
        let dim = n * self.k;
        let mut big = CMatrix::zeros(dim, dim);
        for a in 0..self.k {
            for b in 0..self.k {
                let h = coefficient_matrix(&self.entries[a][b]).expect("(1,1) entry");
                for j in 0..n {
                    for l in 0..n {
                        big[(a * n + j, b * n + l)] = h[(j, l)];
                    }
                }
            }
        }
        big
    }

    /// Entrywise (1−t)·M + t·Iω; M₀ = M and M₁ = Iω.
    pub fn toward_scaled_identity(&self, t: f64) -> Self {
        let id = Self::scaled_identity(self.n, self.k);
        let entries = (0..self.k)
            .map(|i| {
                (0..self.k)
                    .map(|j| {
                        self.entries[i][j]
                            .scale(Complex64::new(1.0 - t, 0.0))
                            .add(&id.entries[i][j].scale(Complex64::new(t, 0.0)))
                            .expect("same space")
                    })
                    .collect()
            })
            .collect();
        Self {
            n: self.n,
            k: self.k,
            entries,
        }
    }

    /// Appends a block ω·I_{2r}, giving a (k+2r)×(k+2r) matrix whose
    /// determinant is det(M)∧ω^{2r}.
    pub fn block_extension(&self, r: usize) -> Self {
        let total = self.k + 2 * r;
        let w = kahler_form(self.n);
        let zero = Form::zero(Bidegree::new(1, 1, self.n));
        let entries: Vec<Vec<Form>> = (0..total)
            .map(|i| {
                (0..total)
                    .map(|j| {
                        if i < self.k && j < self.k {
                            self.entries[i][j].clone()
                        } else if i == j {
                            w.clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            n: self.n,
            k: total,
            entries,
        }
    }

    pub fn to_file(&self) -> GriffithsMatrixFile {
        GriffithsMatrixFile {
            n: self.n,
            k: self.k,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(FormFile::from_form).collect())
                .collect(),
        }
    }

    pub fn from_file(file: GriffithsMatrixFile) -> Result<Self> {
        let entries: Result<Vec<Vec<Form>>> = file
            .entries
            .into_iter()
            .map(|row| row.into_iter().map(|f| f.into_form()).collect())
            .collect();
        let m = Self::new(entries?)?;
        if m.n != file.n || m.k != file.k {
            return Err(Error::Parse {
                location: "header".into(),
                message: "n/k header disagrees with entries".into(),
            });
        }
        Ok(m)
    }
}

/// det M = Σ_σ sgn(σ)·α_{1σ(1)}∧…∧α_{kσ(k)}; entries have even degree, so the
/// factor order is immaterial. Real whenever M is Hermitian.
pub fn form_determinant(m: &GriffithsMatrix) -> Form {
    let k = m.k;
    let n = m.n;
    let mut acc = Form::zero(Bidegree::new(k as i32, k as i32, n));
    let mut perm: Vec<usize> = (0..k).collect();
    permute_accumulate(m, &mut perm, 0, 1, &mut acc);
    acc
}

fn permute_accumulate(m: &GriffithsMatrix, perm: &mut Vec<usize>, row: usize, sign: i32, acc: &mut Form) {
    let k = m.k;
    if row == k {
        let mut prod = Form::one(m.n);
        for (r, &c) in perm.iter().enumerate() {
            prod = prod.wedge(m.entry(r, c)).expect("same n");
            if prod.is_zero() {
                return;
            }
        }
        *acc = acc
            .add(&prod.scale(Complex64::new(sign as f64, 0.0)))
            .expect("same space");
        return;
    }
    for i in row..k {
        perm.swap(row, i);
        let s = if i == row { sign } else { -sign };
        permute_accumulate(m, perm, row + 1, s, acc);
        perm.swap(row, i);
    }
}

/// Positivity verdict for a matrix of (1,1)-forms.
#[derive(Debug, Clone)]
pub enum PositivityCertificate {
    /// λ_min of the flattened nk×nk tensor is positive — sufficient for
    /// Griffiths positivity.
    NakanoCertified { lambda_min: f64 },
    /// Every one of `samples` compressions θMθ̄ᵀ had a positive-definite
    /// coefficient matrix; `min_eigenvalue` is the worst observed.
    GridSampled { samples: usize, min_eigenvalue: f64 },
    /// θMθ̄ᵀ fails to be Kähler for this θ.
    Refuted {
        theta: Vec<Complex64>,
        lambda_min: f64,
    },
}

impl PositivityCertificate {
    pub fn is_positive(&self) -> bool {
        !matches!(self, PositivityCertificate::Refuted { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityStrategy {
    Nakano,
    Grid,
}

/// Certifies (Nakano) or samples (grid) Griffiths positivity of M.
pub fn griffiths_positivity(
    m: &GriffithsMatrix,
    strategy: PositivityStrategy,
    samples: usize,
    rng: &mut SeededRng,
) -> PositivityCertificate {
    match strategy {
        PositivityStrategy::Nakano => {
            let big = m.flattened_tensor();
            let (values, _) = linalg::hermitian_eigen(&big);
            let lambda_min = values[0];
            if lambda_min > 0.0 {
                PositivityCertificate::NakanoCertified { lambda_min }
            } else {
                // a negative flattened tensor direction need not refute
                // Griffiths positivity; fall back to reporting the sampler
                griffiths_positivity(m, PositivityStrategy::Grid, samples.max(128), rng)
            }
        }
        PositivityStrategy::Grid => {
            let mut worst = f64::INFINITY;
            for s in 0..samples {
                let theta = unit_vector(m.k, rng, s);
                let compressed = compress(m, &theta);
                let (values, _) = linalg::hermitian_eigen(&compressed);
                let lambda_min = values[0];
                if lambda_min <= 0.0 {
                    return PositivityCertificate::Refuted {
                        theta: theta.iter().cloned().collect(),
                        lambda_min,
                    };
                }
                worst = worst.min(lambda_min);
            }
            PositivityCertificate::GridSampled {
                samples,
                min_eigenvalue: worst,
            }
        }
    }
}

/// Coefficient matrix of θMθ̄ᵀ.
fn compress(m: &GriffithsMatrix, theta: &CVector) -> CMatrix {
    let n = m.n as usize;
    let big = m.flattened_tensor();
    let mut out = CMatrix::zeros(n, n);
    for a in 0..m.k {
        for b in 0..m.k {
            let w = theta[a] * theta[b].conj();
            if w == Complex64::ZERO {
                continue;
            }
            for j in 0..n {
                for l in 0..n {
                    out[(j, l)] += w * big[(a * n + j, b * n + l)];
                }
            }
        }
    }
    out
}

fn unit_vector(k: usize, rng: &mut SeededRng, sample_index: usize) -> CVector {
    // coordinate directions first, then uniform points on the complex sphere
    if sample_index < k {
        let mut v = CVector::zeros(k);
        v[sample_index] = Complex64::new(1.0, 0.0);
        return v;
    }
    loop {
        let v = CVector::from_fn(k, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// Samples Σ λ_s·i^{k²}·α_s∧ᾱ_s with λ_s > 0 and random (k,0)-forms α_s.
/// The result is a positive — hence real — (k,k)-form.
pub fn sample_positive_form(n: u32, k: u32, terms: usize, rng: &mut SeededRng) -> Result<Form> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    if terms < 1 {
        return Err(Error::InvalidParameter("need at least one term".into()));
    }
    let phase = i_pow((k as i64) * (k as i64));
    let mut acc = Form::zero(Bidegree::new(k as i32, k as i32, n));
    for _ in 0..terms {
        let mut alpha = Form::zero(Bidegree::new(k as i32, 0, n));
        for idx in MultiIndex::enumerate(n, k) {
            alpha.set_coefficient(idx, MultiIndex::empty(), complex_gaussian(rng))?;
        }
        let lambda: f64 = 0.1 + 0.9 * rand::Rng::random::<f64>(rng);
        let term = alpha.wedge(&alpha.conjugate())?.scale(phase * lambda);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Outcome of the randomized strict-positivity probe.
#[derive(Debug, Clone)]
pub enum StrictPositivityVerdict {
    /// Every sampled k-plane saw a nonvanishing restriction;
    /// `min_magnitude` is the smallest |volume multiple| observed and
    /// `nonnegative_volume_multiple` reports whether every restriction was a
    /// nonnegative real multiple of the subspace volume form.
    SampledPass {
        samples: usize,
        min_magnitude: f64,
        nonnegative_volume_multiple: bool,
    },
    /// The restriction to this frame (columns = an orthonormal basis of the
    /// k-plane) vanishes.
    Refuted { frame: CMatrix },
}

impl StrictPositivityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, StrictPositivityVerdict::SampledPass { .. })
    }
}

/// Samples `m` k-planes (every coordinate k-frame first, then Haar frames from
/// seeded Gaussian QR) and checks that the restriction of Ω to each is a
/// nonvanishing multiple of that plane's volume form.
pub fn strict_positivity_check(
    omega_form: &Form,
    m: usize,
    rng: &mut SeededRng,
) -> Result<StrictPositivityVerdict> {
    let bd = omega_form.bidegree();
    if bd.p != bd.q || bd.p < 0 {
        return Err(Error::BidegreeMismatch {
            expected_p: bd.p,
            expected_q: bd.p,
            got_p: bd.p,
            got_q: bd.q,
        });
    }
    let n = bd.n;
    let k = bd.p as u32;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "restriction probe needs 1 ≤ k ≤ n, got k={k}"
        )));
    }
    let scale = omega_form.norm().max(1e-300);
    let phase = i_pow((k as i64) * (k as i64));

    let coordinate_frames: Vec<CMatrix> = MultiIndex::enumerate(n, k)
        .into_iter()
        .map(|idx| {
            let mut f = CMatrix::zeros(n as usize, k as usize);
            for (col, &e) in idx.entries().iter().enumerate() {
                f[(e as usize - 1, col)] = Complex64::new(1.0, 0.0);
            }
            f
        })
        .collect();

    let mut min_magnitude = f64::INFINITY;
    let mut nonneg = true;
    let total = m.max(coordinate_frames.len());
    for s in 0..total {
        let frame = if s < coordinate_frames.len() {
            coordinate_frames[s].clone()
        } else {
            haar_frame(n as usize, k as usize, rng)
        };
        let c = restriction_coefficient(omega_form, &frame)?;
        if c.norm() <= 1e-12 * scale {
            return Ok(StrictPositivityVerdict::Refuted { frame });
        }
        // volume multiple: restriction = μ·(ω_plane)^k/k! with μ = c/i^{k²}
        let mu = c / phase;
        if mu.im.abs() > 1e-9 * scale || mu.re < -1e-9 * scale {
            nonneg = false;
        }
        min_magnitude = min_magnitude.min(mu.norm());
    }
    Ok(StrictPositivityVerdict::SampledPass {
        samples: total,
        min_magnitude,
        nonnegative_volume_multiple: nonneg,
    })
}

/// Pullback coefficient of a (k,k)-form along a k-frame F:
/// restriction = c·e_w({1..k},{1..k}) with c = Σ Ω[I,J]·det F_I·conj(det F_J).
fn restriction_coefficient(omega_form: &Form, frame: &CMatrix) -> Result<Complex64> {
    let k = frame.ncols();
    let mut acc = Complex64::ZERO;
    for ((i, j), coeff) in omega_form.terms() {
        let di = subdeterminant(frame, i.entries(), k);
        if di == Complex64::ZERO {
            continue;
        }
        let dj = subdeterminant(frame, j.entries(), k);
        acc += coeff * di * dj.conj();
    }
    Ok(acc)
}

fn subdeterminant(frame: &CMatrix, rows: &[u8], k: usize) -> Complex64 {
    let sub = DMatrix::from_fn(k, k, |r, c| frame[(rows[r] as usize - 1, c)]);
    sub.determinant()
}

fn haar_frame(n: usize, k: usize, rng: &mut SeededRng) -> CMatrix {
    let g = CMatrix::from_fn(n, k, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    q.columns(0, k).into_owned()
}

/// Reassembles a k×k matrix of (1,1)-forms from its flattened nk×nk
/// coefficient tensor.
pub fn matrix_from_flattened(big: &CMatrix, n: u32, k: usize) -> Result<GriffithsMatrix> {
    let nn = n as usize;
    if big.nrows() != nn * k || big.ncols() != nn * k {
        return Err(Error::InvalidParameter(format!(
            "flattened tensor must be {0}×{0}",
            nn * k
        )));
    }
    let entries: Vec<Vec<Form>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let block = big.view((a * nn, b * nn), (nn, nn)).into_owned();
                    form_from_coefficient_matrix(&block, n)
                })
                .collect()
        })
        .collect();
    GriffithsMatrix::new(entries)
}

/// Samples a Nakano-certified matrix: the flattened tensor is B·B* plus a 5%
/// mean-eigenvalue ridge, so its λ_min is strictly positive by construction.
pub fn sample_nakano_matrix(n: u32, k: usize, rng: &mut SeededRng) -> GriffithsMatrix {
    let dim = (n as usize) * k;
    let b = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let mut big = &b * b.adjoint();
    let tr: f64 = (0..dim).map(|i| big[(i, i)].re).sum::<f64>() / dim as f64;
    big += CMatrix::identity(dim, dim) * Complex64::new(0.05 * tr.max(1e-3), 0.0);
    matrix_from_flattened(&big, n, k).expect("Hermitian by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::kahler_power;
    use crate::rng::seeded;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sample_kahler_is_deterministic_and_positive() {
        let a = sample_kahler(2, &mut seeded(5), 1e6);
        let b = sample_kahler(2, &mut seeded(5), 1e6);
        assert_eq!(a.matrix(), b.matrix());
        assert!(a.lambda_min() > 0.0);

        // frozen golden sample for seed 5
        let golden: Vec<Complex64> = a.matrix().iter().cloned().collect();
        let again: Vec<Complex64> = sample_kahler(2, &mut seeded(5), 1e6)
            .matrix()
            .iter()
            .cloned()
            .collect();
        assert_eq!(golden, again);
    }

    #[test]
    fn sample_kahler_cap_one_forces_isotropy() {
        let k = sample_kahler(3, &mut seeded(1), 1.0);
        let h = k.matrix();
        let lead = h[(0, 0)];
        assert!((h - CMatrix::identity(3, 3) * lead).norm() < 1e-12);
    }

    #[test]
    fn sample_kahler_respects_condition_cap() {
        for seed in 0..10 {
            let k = sample_kahler(4, &mut seeded(seed), 10.0);
            let (values, _) = linalg::hermitian_eigen(k.matrix());
            let cond = values[3] / values[0];
            assert!(cond <= 10.0 + 1e-6, "cond = {cond}");
        }
    }

    #[test]
    fn kahler_form_round_trip_and_reality() {
        let k = sample_kahler(3, &mut seeded(2), 100.0);
        let f = k.form();
        assert!(f.is_real(1e-12).unwrap());
        let h = coefficient_matrix(&f).unwrap();
        assert!((h - k.matrix()).norm() < 1e-14);
    }

    #[test]
    fn timorin_product_basics() {
        let n = 3;
        // all factors ω → ω^k
        let w = KahlerForm::standard(n);
        let prod = timorin_product(&[w.clone(), w.clone()]).unwrap();
        assert!(prod.sub(&kahler_power(2, n)).unwrap().norm() < 1e-12);

        // k = 1: the factor's own form
        let k1 = sample_kahler(n, &mut seeded(3), 50.0);
        let prod = timorin_product(std::slice::from_ref(&k1)).unwrap();
        assert!(prod.sub(&k1.form()).unwrap().norm() < 1e-14);

        // k = 0 via explicit n
        let empty = timorin_product_with_n(&[], n).unwrap();
        assert_eq!(empty, Form::one(n));

        // k > n rejected
        let many = vec![w.clone(); 4];
        assert!(timorin_product(&many).is_err());
    }

    #[test]
    fn timorin_product_diagonal_cross_check() {
        // n=2, factors diag(1,2), diag(2,1): top coefficient from the wedge
        // oracle; cross-check via top_scalar = mixed pairing 1·1 + 2·2 = ...
        use crate::operators::top_scalar;
        let n = 2;
        let h1 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let h2 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let prod = timorin_product(&[KahlerForm::new(h1).unwrap(), KahlerForm::new(h2).unwrap()])
            .unwrap();
        // i²·(1·1 + 2·2)·(dz₁dz̄₁dz₂dz̄₂ reordered) = (1·1 + 2·2)·e_top... the
        // mixed term: ω₁∧ω₂ = i²(h1₁h2₂ + h1₂h2₁)·dz₁dz̄₁∧dz₂dz̄₂
        //            = (1·1 + 2·2)·e({1,2},{1,2})
        let eps = top_scalar(&prod).unwrap();
        assert!((eps - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn determinant_of_diagonal_matches_product() {
        let n = 3;
        let mut rng = seeded(7);
        let factors: Vec<KahlerForm> = (0..2).map(|_| sample_kahler(n, &mut rng, 100.0)).collect();
        let m = GriffithsMatrix::diagonal(&factors).unwrap();
        let det = form_determinant(&m);
        let prod = timorin_product(&factors).unwrap();
        assert!(det.sub(&prod).unwrap().norm() < 1e-12);
    }

    #[test]
    fn determinant_small_cases() {
        let n = 2;
        // k = 1: the single entry
        let k1 = sample_kahler(n, &mut seeded(9), 100.0);
        let m = GriffithsMatrix::diagonal(std::slice::from_ref(&k1)).unwrap();
        assert!(form_determinant(&m).sub(&k1.form()).unwrap().norm() < 1e-14);

        // M = I·ω (k×k) → ω^k
        let m = GriffithsMatrix::scaled_identity(n, 2);
        assert!(form_determinant(&m).sub(&kahler_power(2, n)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn determinant_is_permutation_invariant_and_real() {
        let n = 3;
        let k = 2;
        let m = random_nakano_matrix(n, k, &mut seeded(21));
        let det = form_determinant(&m);
        assert!(det.is_real(1e-10 * det.norm().max(1.0)).unwrap());

        // conjugation by the swap permutation
        let swapped = GriffithsMatrix::new(vec![
            vec![m.entry(1, 1).clone(), m.entry(1, 0).clone()],
            vec![m.entry(0, 1).clone(), m.entry(0, 0).clone()],
        ])
        .unwrap();
        assert_eq!(form_determinant(&swapped), det);
    }

    #[test]
    fn griffiths_path_endpoints() {
        let n = 2;
        let m = random_nakano_matrix(n, 2, &mut seeded(13));
        let at0 = m.toward_scaled_identity(0.0);
        let at1 = m.toward_scaled_identity(1.0);
        for i in 0..2 {
            for j in 0..2 {
                assert!(at0.entry(i, j).sub(m.entry(i, j)).unwrap().norm() < 1e-14);
                let expect = GriffithsMatrix::scaled_identity(n, 2);
                assert!(at1.entry(i, j).sub(expect.entry(i, j)).unwrap().norm() < 1e-14);
            }
        }
    }

    #[test]
    fn block_extension_determinant_identity() {
        let n = 4;
        for r in 0..=2usize {
            let m = random_nakano_matrix(n, 2, &mut seeded(17));
            let ext = m.block_extension(r);
            assert_eq!(ext.k(), 2 + 2 * r);
            let lhs = form_determinant(&ext);
            let rhs = form_determinant(&m)
                .wedge(&kahler_power(2 * r as u32, n))
                .unwrap();
            let scale = rhs.norm().max(1.0);
            assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-10 * scale, "r={r}");
        }
        // r = 0 returns the same matrix
        let m = random_nakano_matrix(n, 2, &mut seeded(18));
        let same = m.block_extension(0);
        assert_eq!(form_determinant(&same), form_determinant(&m));
        // M = Iω, r = 1 → det = ω^{k+2}
        let m = GriffithsMatrix::scaled_identity(3, 1);
        let det = form_determinant(&m.block_extension(1));
        assert!(det.sub(&kahler_power(3, 3)).unwrap().norm() < 1e-12);
    }

    fn random_nakano_matrix(n: u32, k: usize, rng: &mut SeededRng) -> GriffithsMatrix {
        sample_nakano_matrix(n, k, rng)
    }

    #[test]
    fn nakano_certificate_examples() {
        let n = 2;
        // M = I·ω → λ_min = 1
        let m = GriffithsMatrix::scaled_identity(n, 2);
        let cert = griffiths_positivity(&m, PositivityStrategy::Nakano, 0, &mut seeded(1));
        match cert {
            PositivityCertificate::NakanoCertified { lambda_min } => {
                assert!((lambda_min - 1.0).abs() < 1e-10)
            }
            _ => panic!("expected Nakano certificate"),
        }

        // diagonal with Kähler entries → certified (block-diagonal eigenvalues)
        let mut rng = seeded(2);
        let factors: Vec<KahlerForm> = (0..2).map(|_| sample_kahler(n, &mut rng, 100.0)).collect();
        let m = GriffithsMatrix::diagonal(&factors).unwrap();
        let cert = griffiths_positivity(&m, PositivityStrategy::Nakano, 0, &mut seeded(1));
        assert!(matches!(cert, PositivityCertificate::NakanoCertified { .. }));

        // α₁₁ = −ω → refuted with θ = e₁
        let w = kahler_form(n);
        let zero = Form::zero(Bidegree::new(1, 1, n));
        let bad = GriffithsMatrix::new(vec![
            vec![w.scale(c(-1.0, 0.0)), zero.clone()],
            vec![zero.clone(), w.clone()],
        ])
        .unwrap();
        let cert = griffiths_positivity(&bad, PositivityStrategy::Grid, 16, &mut seeded(1));
        match cert {
            PositivityCertificate::Refuted { theta, lambda_min } => {
                assert!(lambda_min <= 0.0);
                assert!((theta[0].norm() - 1.0).abs() < 1e-12);
                assert!(theta[1].norm() < 1e-12);
            }
            _ => panic!("expected refutation"),
        }
    }

    #[test]
    fn nakano_implies_grid_pass() {
        let n = 2;
        let m = random_nakano_matrix(n, 2, &mut seeded(33));
        let cert = griffiths_positivity(&m, PositivityStrategy::Nakano, 0, &mut seeded(1));
        assert!(matches!(cert, PositivityCertificate::NakanoCertified { .. }));
        let grid = griffiths_positivity(&m, PositivityStrategy::Grid, 512, &mut seeded(4));
        assert!(grid.is_positive());
    }

    #[test]
    fn sample_positive_form_properties() {
        let mut rng = seeded(41);
        // single term α = dz₁∧…∧dz_k reproduces i^{k²}e({1..k},{1..k})
        let n = 3;
        let k = 2;
        let mut alpha = Form::zero(Bidegree::new(k, 0, n));
        alpha
            .set_coefficient(MultiIndex::new(&[1, 2], n).unwrap(), MultiIndex::empty(), c(1.0, 0.0))
            .unwrap();
        let built = alpha
            .wedge(&alpha.conjugate())
            .unwrap()
            .scale(i_pow((k as i64) * (k as i64)));
        let key = (
            MultiIndex::new(&[1, 2], n).unwrap(),
            MultiIndex::new(&[1, 2], n).unwrap(),
        );
        assert_eq!(built.coefficient(&key), c(1.0, 0.0));

        // sampled combinations are real
        for _ in 0..5 {
            let f = sample_positive_form(n, 2, 3, &mut rng).unwrap();
            assert!(f.is_real(1e-10 * f.norm()).unwrap());
        }

        // k = 1 with spanning terms: coefficient matrix positive-definite
        let f = sample_positive_form(3, 1, 8, &mut rng).unwrap();
        let h = coefficient_matrix(&f).unwrap();
        let (values, _) = linalg::hermitian_eigen(&h);
        assert!(values[0] > 0.0);
    }

    #[test]
    fn strict_positivity_examples() {
        let mut rng = seeded(43);
        // ω^k passes
        let v = strict_positivity_check(&kahler_power(2, 3), 32, &mut rng).unwrap();
        match v {
            StrictPositivityVerdict::SampledPass {
                min_magnitude,
                nonnegative_volume_multiple,
                ..
            } => {
                assert!(min_magnitude > 0.0);
                assert!(nonnegative_volume_multiple);
            }
            _ => panic!("expected pass"),
        }

        // e({1,2},{1,2}) on n = 3 is killed by the coordinate plane {e1, e3}
        let bad = Form::monomial(
            MultiIndex::new(&[1, 2], 3).unwrap(),
            MultiIndex::new(&[1, 2], 3).unwrap(),
            3,
        );
        let v = strict_positivity_check(&bad, 8, &mut rng).unwrap();
        assert!(matches!(v, StrictPositivityVerdict::Refuted { .. }));

        // Timorin products pass
        let factors: Vec<KahlerForm> = (0..2).map(|_| sample_kahler(3, &mut rng, 100.0)).collect();
        let prod = timorin_product(&factors).unwrap();
        let v = strict_positivity_check(&prod, 32, &mut rng).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn griffiths_file_round_trip() {
        let m = random_nakano_matrix(2, 2, &mut seeded(55));
        let file = m.to_file();
        let text = serde_json::to_string(&file).unwrap();
        let back: GriffithsMatrixFile = serde_json::from_str(&text).unwrap();
        let m2 = GriffithsMatrix::from_file(back).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.entry(i, j), m2.entry(i, j));
            }
        }
    }
}
