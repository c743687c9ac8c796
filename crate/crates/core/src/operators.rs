//! Matrix representations of wedge-multiplication operators, the Hermitian
//! pairing Q, primitive subspaces, and the classical Lefschetz decomposition.
//!
//! All matrices are laid out over the lex-ordered monomial basis of each
//! bidegree space (lex on I, then J), which fixes every layout reproducibly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::{i_pow, kahler_power, Bidegree, Form, MultiIndex};
use crate::linalg::{self, CMatrix, CVector};

/// Relative singular-value cutoff for rank decisions.
pub const DEFAULT_SIGMA_TOL: f64 = 1e-9;
/// Relative eigenvalue cutoff for signatures and positivity verdicts.
pub const DEFAULT_EIG_TOL: f64 = 1e-8;

/// The lex-ordered monomial basis of one bidegree space.
#[derive(Debug, Clone)]
pub struct Basis {
    pub bidegree: Bidegree,
    keys: Vec<(MultiIndex, MultiIndex)>,
}

impl Basis {
    pub fn new(bidegree: Bidegree) -> Self {
        let keys = if bidegree.is_zero_space() {
            Vec::new()
        } else {
            let is = MultiIndex::enumerate(bidegree.n, bidegree.p as u32);
            let js = MultiIndex::enumerate(bidegree.n, bidegree.q as u32);
            let mut keys = Vec::with_capacity(is.len() * js.len());
            for i in &is {
                for j in &js {
                    keys.push((i.clone(), j.clone()));
                }
            }
            keys
        };
        Self { bidegree, keys }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[(MultiIndex, MultiIndex)] {
        &self.keys
    }

    pub fn monomial(&self, idx: usize) -> Form {
        let (i, j) = &self.keys[idx];
        Form::monomial(i.clone(), j.clone(), self.bidegree.n)
    }

    pub fn index_of(&self, key: &(MultiIndex, MultiIndex)) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    /// Coefficient vector of a form in this basis.
    pub fn to_vector(&self, form: &Form) -> Result<CVector> {
        if form.bidegree() != self.bidegree {
            return Err(Error::BidegreeMismatch {
                expected_p: self.bidegree.p,
                expected_q: self.bidegree.q,
                got_p: form.bidegree().p,
                got_q: form.bidegree().q,
            });
        }
        let mut v = CVector::zeros(self.dim());
        for (key, c) in form.terms() {
            let idx = self
                .index_of(key)
                .expect("form key outside enumerated basis");
            v[idx] = *c;
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &CVector) -> Form {
        let mut f = Form::zero(self.bidegree);
        for (idx, (i, j)) in self.keys.iter().enumerate() {
            if v[idx] != Complex64::ZERO {
                f.set_coefficient(i.clone(), j.clone(), v[idx])
                    .expect("basis key fits bidegree");
            }
        }
        f
    }
}

/// The matrix of α ↦ Φ∧α between two bidegree spaces; rows are indexed by the
/// target basis, columns by the source basis, both lex-ordered.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub source: Bidegree,
    pub target: Bidegree,
    pub matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn is_square(&self) -> bool {
        self.matrix.nrows() == self.matrix.ncols()
    }

    pub fn apply(&self, source_basis: &Basis, target_basis: &Basis, form: &Form) -> Result<Form> {
        let v = source_basis.to_vector(form)?;
        Ok(target_basis.from_vector(&(&self.matrix * v)))
    }
}

/// Builds the matrix of α ↦ Φ∧α on the given source bidegree. A target space
/// outside the valid range yields a 0×dim(source) matrix.
pub fn wedge_operator(phi: &Form, source: Bidegree) -> OperatorMatrix {
    let pb = phi.bidegree();
    let target = Bidegree::new(source.p + pb.p, source.q + pb.q, source.n);
    let src_basis = Basis::new(source);
    let tgt_basis = Basis::new(target);
    let mut matrix = CMatrix::zeros(tgt_basis.dim(), src_basis.dim());
    if tgt_basis.dim() > 0 {
        for (col, _) in src_basis.keys().iter().enumerate() {
            let image = phi
                .wedge(&src_basis.monomial(col))
                .expect("same ambient dimension");
            for (key, c) in image.terms() {
                if let Some(row) = tgt_basis.index_of(key) {
                    matrix[(row, col)] = *c;
                }
            }
        }
    }
    OperatorMatrix {
        source,
        target,
        matrix,
    }
}

/// Extracts ε with η = ε·ωⁿ/n! from a top-degree (n,n)-form:
/// ε = coeff(η at ({1..n},{1..n})) / i^{n²}.
pub fn top_scalar(eta: &Form) -> Result<Complex64> {
    let bd = eta.bidegree();
    let n = bd.n;
    if bd.p != n as i32 || bd.q != n as i32 {
        return Err(Error::BidegreeMismatch {
            expected_p: n as i32,
            expected_q: n as i32,
            got_p: bd.p,
            got_q: bd.q,
        });
    }
    let full: Vec<u8> = (1..=n as u8).collect();
    let key = (MultiIndex::new(&full, n)?, MultiIndex::new(&full, n)?);
    Ok(eta.coefficient(&key) / i_pow((n as i64) * (n as i64)))
}

/// The Hermitian pairing Q on one bidegree space, as a Gram matrix over the
/// lex monomial basis: entry (a,b) is Q(e_a, e_b).
#[derive(Debug, Clone)]
pub struct HermitianForm {
    pub bidegree: Bidegree,
    pub matrix: CMatrix,
}

impl HermitianForm {
    /// Q(α, β) = Σ_{a,b} H[a,b]·α_a·conj(β_b).
    pub fn evaluate(&self, alpha: &CVector, beta: &CVector) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for a in 0..self.matrix.nrows() {
            if alpha[a] == Complex64::ZERO {
                continue;
            }
            for b in 0..self.matrix.ncols() {
                acc += self.matrix[(a, b)] * alpha[a] * beta[b].conj();
            }
        }
        acc
    }

    /// The matrix S with Q(α,α) = α*·S·α (S = conj(H), also Hermitian).
    pub fn quadratic_matrix(&self) -> CMatrix {
        self.matrix.map(|c| c.conj())
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm() / self.matrix.norm().max(1e-300)
    }
}

/// Builds Q(α,β) = i^{q−p}(−1)^{(p+q)(p+q+1)/2}·top_scalar(α∧β̄∧Ω) as a Gram
/// matrix on V^{p,q}. Requires Ω real of bidegree (n−p−q, n−p−q).
pub fn gram_q(omega_form: &Form, p: i32, q: i32) -> Result<HermitianForm> {
    let n = omega_form.n();
    let k = n as i32 - p - q;
    let ob = omega_form.bidegree();
    if ob.p != k || ob.q != k {
        return Err(Error::BidegreeMismatch {
            expected_p: k,
            expected_q: k,
            got_p: ob.p,
            got_q: ob.q,
        });
    }
    omega_form.ensure_real(1e-9)?;

    let bidegree = Bidegree::new(p, q, n);
    let basis = Basis::new(bidegree);
    let dim = basis.dim();
    let sign = i_pow((q - p) as i64)
        * if ((p + q) * (p + q + 1) / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
    let mut matrix = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let eb_bar = basis.monomial(b).conjugate();
        let eb_bar_omega = eb_bar.wedge(omega_form)?;
        for a in 0..dim {
            let prod = basis.monomial(a).wedge(&eb_bar_omega)?;
            matrix[(a, b)] = sign * top_scalar(&prod)?;
        }
    }
    Ok(HermitianForm { bidegree, matrix })
}

/// An orthonormal-spanned subspace of one bidegree space; columns of `basis`
/// are the spanning set in the coefficient inner product.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub bidegree: Bidegree,
    pub basis: CMatrix,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn member(&self, idx: usize) -> Form {
        Basis::new(self.bidegree).from_vector(&self.basis.column(idx).into_owned())
    }

    /// ‖v − P v‖ for the orthogonal projection P onto this subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        linalg::distance_to_span(&self.basis, v)
    }
}

/// Orthonormal basis of P^{p,q} = ker(α ↦ α∧Ω∧ω) inside V^{p,q}.
pub fn primitive_basis(omega_form: &Form, p: i32, q: i32, sigma_tol: f64) -> Result<Subspace> {
    let n = omega_form.n();
    let lift = omega_form.wedge(&kahler_power(1, n))?;
    let source = Bidegree::new(p, q, n);
    let op = wedge_operator(&lift, source);
    Ok(Subspace {
        bidegree: source,
        basis: linalg::kernel_basis(&op.matrix, sigma_tol),
    })
}

/// One classical Lefschetz component: α = Σ_j ω^j ∧ γ_j with γ_j classically
/// primitive (γ_j ∧ ω^{n−a−b+2j+1} = 0).
#[derive(Debug, Clone)]
pub struct LefschetzComponent {
    pub level: u32,
    pub primitive_part: Form,
}

/// Classical Lefschetz decomposition of α ∈ V^{a,b} with a+b ≤ n.
pub fn lefschetz_decompose(alpha: &Form) -> Result<Vec<LefschetzComponent>> {
    let bd = alpha.bidegree();
    let n = bd.n;
    if bd.is_zero_space() {
        return Err(Error::InvalidParameter(format!(
            "bidegree {bd} denotes the zero space"
        )));
    }
    if bd.p + bd.q > n as i32 {
        return Err(Error::InvalidParameter(format!(
            "total degree {} exceeds n = {n}; decomposition not guaranteed",
            bd.p + bd.q
        )));
    }
    let max_level = bd.p.min(bd.q).max(0) as u32;
    let target_basis = Basis::new(bd);
    let alpha_vec = target_basis.to_vector(alpha)?;

    // columns: ω^j ∧ (orthonormal basis of the classical primitives of V^{a−j,b−j})
    let mut blocks: Vec<(u32, Subspace, CMatrix)> = Vec::new();
    let mut total_cols = 0usize;
    for j in 0..=max_level {
        let sub_bd = bd.shifted(-(j as i32), -(j as i32));
        let power = n as i32 - (bd.p + bd.q) + 2 * j as i32 + 1;
        let killer = kahler_power(power.max(0) as u32, n);
        let op = wedge_operator(&killer, sub_bd);
        let prim = Subspace {
            bidegree: sub_bd,
            basis: linalg::kernel_basis(&op.matrix, DEFAULT_SIGMA_TOL),
        };
        let lift = wedge_operator(&kahler_power(j, n), sub_bd);
        let lifted = &lift.matrix * &prim.basis;
        total_cols += prim.dim();
        blocks.push((j, prim, lifted));
    }

    let mut stacked = CMatrix::zeros(target_basis.dim(), total_cols);
    let mut col = 0usize;
    for (_, prim, lifted) in &blocks {
        for jcol in 0..prim.dim() {
            stacked.set_column(col, &lifted.column(jcol));
            col += 1;
        }
    }
    let coeffs = linalg::lstsq(&stacked, &alpha_vec);
    let residual = (&stacked * &coeffs - &alpha_vec).norm();
    let scale = alpha_vec.norm().max(1e-300);
    if residual > 1e-9 * scale {
        return Err(Error::InvalidParameter(format!(
            "decomposition residual {residual:.3e} exceeds 1e-9 relative"
        )));
    }

    let mut out = Vec::new();
    let mut offset = 0usize;
    for (j, prim, _) in &blocks {
        let d = prim.dim();
        let mut gamma_vec = CVector::zeros(prim.basis.nrows());
        for c in 0..d {
            let w = coeffs[offset + c];
            gamma_vec += prim.basis.column(c) * w;
        }
        offset += d;
        let gamma = Basis::new(prim.bidegree).from_vector(&gamma_vec);
        out.push(LefschetzComponent {
            level: *j,
            primitive_part: gamma,
        });
    }
    Ok(out)
}

/// Reassembles Σ_j ω^j ∧ γ_j.
pub fn lefschetz_recompose(components: &[LefschetzComponent], bd: Bidegree) -> Result<Form> {
    let mut acc = Form::zero(bd);
    for comp in components {
        let lifted = kahler_power(comp.level, bd.n).wedge(&comp.primitive_part)?;
        acc = acc.add(&lifted)?;
    }
    Ok(acc)
}

/// Eigenvalue signature (n₊, n₋, n₀) of a Hermitian form.
pub fn signature(h: &HermitianForm, rel_tol: f64) -> (usize, usize, usize) {
    linalg::signature_of(&h.matrix, rel_tol)
}

/// Smallest singular value of an operator. Non-square operators report 0 with
/// `square = false` (they cannot be isomorphisms).
#[derive(Debug, Clone, Copy)]
pub struct MinSingular {
    pub value: f64,
    pub square: bool,
}

pub fn min_singular_value(op: &OperatorMatrix) -> MinSingular {
    if !op.is_square() {
        return MinSingular {
            value: 0.0,
            square: false,
        };
    }
    MinSingular {
        value: linalg::sigma_min(&op.matrix),
        square: true,
    }
}
