//! Hankel and ★-multiplication operators on ℓ²(ℕ,ℍ).
//!
//! Matrices act on right-module column vectors: (Av)(j) = Σ_k A(j,k)·v(k),
//! so A is right-linear and its adjoint for ⟨u,v⟩ = Σ conj(v_k)u_k is the
//! conjugate transpose. The operator norm is the largest singular value of
//! the complex 2N×2N matrix obtained by writing each entry z + w·j as the
//! block [[z, w], [-w̄, z̄]] over the i-slice; it is computed here without
//! materializing the embedding, by Lanczos iteration on A^H A in quaternion
//! arithmetic (the two are the same operator up to a norm-preserving
//! relabeling of ℍ^N as ℂ^{2N}).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::hardy::h2_inner;
use crate::quat::Quaternion;
use crate::rng::SeededRng;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Dense square matrix with quaternion entries, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatMatrix {
    dim: usize,
    entries: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self {
            dim,
            entries: vec![Quaternion::ZERO; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.entries[r * dim + c] = f(r, c);
            }
        }
        m
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| {
            if r == c {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Quaternion) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    /// Complex 2N×2N embedding over the i-slice, row-major: the entry
    /// q = z + w·j becomes [[z, w], [-w̄, z̄]]. Any other slice choice gives
    /// a unitarily equivalent matrix.
    pub fn complex_embedding(&self) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); 4 * n * n];
        let stride = 2 * n;
        for r in 0..n {
            for c in 0..n {
                let q = self.get(r, c);
                let z = Complex64::new(q.x0, q.x1);
                let w = Complex64::new(q.x2, q.x3);
                out[(2 * r) * stride + 2 * c] = z;
                out[(2 * r) * stride + 2 * c + 1] = w;
                out[(2 * r + 1) * stride + 2 * c] = -w.conj();
                out[(2 * r + 1) * stride + 2 * c + 1] = z.conj();
            }
        }
        out
    }
}

/// A right-linear operator on ℍ^N given by its action and its adjoint's.
pub trait RightLinearOp {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion>;
    fn apply_adjoint(&self, v: &[Quaternion]) -> Vec<Quaternion>;
}

impl RightLinearOp for QuatMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        let n = self.dim;
        self.entries
            .chunks_exact(n)
            .map(|row| {
                let mut acc = Quaternion::ZERO;
                for (a, x) in row.iter().zip(v) {
                    acc += *a * *x;
                }
                acc
            })
            .collect()
    }

    fn apply_adjoint(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        let n = self.dim;
        let mut out = vec![Quaternion::ZERO; n];
        for (row, &vr) in self.entries.chunks_exact(n).zip(v) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * vr;
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// FFT-backed structured operators
// ---------------------------------------------------------------------------

fn split_complex(v: &[Quaternion]) -> (Vec<Complex64>, Vec<Complex64>) {
    let v1 = v.iter().map(|q| Complex64::new(q.x0, q.x1)).collect();
    let v2 = v.iter().map(|q| Complex64::new(q.x2, q.x3)).collect();
    (v1, v2)
}

fn merge_complex(z: Complex64, w: Complex64) -> Quaternion {
    Quaternion::new(z.re, z.im, w.re, w.im)
}

struct FftConv {
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FftConv {
    fn new(needed: usize) -> Self {
        let len = needed.next_power_of_two().max(2);
        let mut planner = FftPlanner::new();
        Self {
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    fn spectrum(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        buf[..x.len()].copy_from_slice(x);
        self.fwd.process(&mut buf);
        buf
    }

    fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<Complex64> {
        self.inv.process(&mut spec);
        let s = 1.0 / self.len as f64;
        for v in &mut spec {
            *v *= s;
        }
        spec
    }
}

/// Componentwise quaternion product through the i-slice splitting:
/// (a1 + a2 j)(v1 + v2 j) = (a1 v1 - a2 v̄2) + (a1 v2 + a2 v̄1) j.
/// Given spectra of the symbol components and of the four input variants,
/// returns the two output spectra.
fn combined_spectra(
    sa1: &[Complex64],
    sa2: &[Complex64],
    fu1: &[Complex64],
    fu2: &[Complex64],
    fcu1: &[Complex64],
    fcu2: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let z = sa1
        .iter()
        .zip(fu1)
        .zip(sa2.iter().zip(fcu2))
        .map(|((a, u), (b, cu))| a * u - b * cu)
        .collect();
    let w = sa1
        .iter()
        .zip(fu2)
        .zip(sa2.iter().zip(fcu1))
        .map(|((a, u), (b, cu))| a * u + b * cu)
        .collect();
    (z, w)
}

/// Matrix-free Hankel operator [α(j+k)] with FFT applies; equal to
/// [`hankel_matrix`] as an operator, usable at truncations where the dense
/// matrix would not fit.
pub struct HankelOperator {
    dim: usize,
    conv: FftConv,
    spec_a1: Vec<Complex64>,
    spec_a2: Vec<Complex64>,
    spec_a1c: Vec<Complex64>,
    spec_a2n: Vec<Complex64>,
}

impl HankelOperator {
    /// Needs α(n) for n <= 2·dim - 2.
    pub fn new(alpha: &[Quaternion], dim: usize) -> Result<Self> {
        assert!(dim >= 1);
        if alpha.len() < 2 * dim - 1 {
            return Err(Error::SymbolTooShort {
                needed: 2 * dim - 1,
                got: alpha.len(),
            });
        }
        if !alpha.iter().all(|a| a.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        let alpha = &alpha[..2 * dim - 1];
        let conv = FftConv::new(3 * dim - 2);
        let (a1, a2) = split_complex(alpha);
        let a1c: Vec<Complex64> = a1.iter().map(|z| z.conj()).collect();
        let a2n: Vec<Complex64> = a2.iter().map(|z| -z).collect();
        Ok(Self {
            dim,
            spec_a1: conv.spectrum(&a1),
            spec_a2: conv.spectrum(&a2),
            spec_a1c: conv.spectrum(&a1c),
            spec_a2n: conv.spectrum(&a2n),
            conv,
        })
    }

    /// (Γ v)(j) = Σ_k α(j+k) v(k) as a linear convolution against the
    /// reversed input, read off at offsets dim-1 .. 2 dim-2.
    fn hankel_apply(&self, sa1: &[Complex64], sa2: &[Complex64], v: &[Quaternion]) -> Vec<Quaternion> {
        let n = self.dim;
        let (v1, v2) = split_complex(v);
        let u1: Vec<Complex64> = v1.iter().rev().copied().collect();
        let u2: Vec<Complex64> = v2.iter().rev().copied().collect();
        let cu1: Vec<Complex64> = u1.iter().map(|z| z.conj()).collect();
        let cu2: Vec<Complex64> = u2.iter().map(|z| z.conj()).collect();
        let (zs, ws) = combined_spectra(
            sa1,
            sa2,
            &self.conv.spectrum(&u1),
            &self.conv.spectrum(&u2),
            &self.conv.spectrum(&cu1),
            &self.conv.spectrum(&cu2),
        );
        let z = self.conv.inverse(zs);
        let w = self.conv.inverse(ws);
        (0..n).map(|j| merge_complex(z[j + n - 1], w[j + n - 1])).collect()
    }
}

impl RightLinearOp for HankelOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        self.hankel_apply(&self.spec_a1, &self.spec_a2, v)
    }

    fn apply_adjoint(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        // The adjoint is the Hankel operator with conjugated symbol, whose
        // slice components are (conj a1, -a2).
        self.hankel_apply(&self.spec_a1c, &self.spec_a2n, v)
    }
}

/// Matrix-free lower-triangular Toeplitz operator (causal convolution by the
/// coefficients of φ); equal to [`mult_matrix`] as an operator.
pub struct ToeplitzOperator {
    dim: usize,
    conv: FftConv,
    spec_p1: Vec<Complex64>,
    spec_p2: Vec<Complex64>,
    spec_p1c: Vec<Complex64>,
    spec_p2n: Vec<Complex64>,
}

impl ToeplitzOperator {
    pub fn new(phi: &TruncatedSeries, dim: usize) -> Result<Self> {
        assert!(dim >= 1);
        let sym: Vec<Quaternion> = (0..dim).map(|n| phi.coeff(n)).collect();
        if !sym.iter().all(|a| a.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        let conv = FftConv::new(2 * dim - 1);
        let (p1, p2) = split_complex(&sym);
        let p1c: Vec<Complex64> = p1.iter().map(|z| z.conj()).collect();
        let p2n: Vec<Complex64> = p2.iter().map(|z| -z).collect();
        Ok(Self {
            dim,
            spec_p1: conv.spectrum(&p1),
            spec_p2: conv.spectrum(&p2),
            spec_p1c: conv.spectrum(&p1c),
            spec_p2n: conv.spectrum(&p2n),
            conv,
        })
    }
}

impl RightLinearOp for ToeplitzOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        let n = self.dim;
        let (v1, v2) = split_complex(v);
        let cv1: Vec<Complex64> = v1.iter().map(|z| z.conj()).collect();
        let cv2: Vec<Complex64> = v2.iter().map(|z| z.conj()).collect();
        let (zs, ws) = combined_spectra(
            &self.spec_p1,
            &self.spec_p2,
            &self.conv.spectrum(&v1),
            &self.conv.spectrum(&v2),
            &self.conv.spectrum(&cv1),
            &self.conv.spectrum(&cv2),
        );
        let z = self.conv.inverse(zs);
        let w = self.conv.inverse(ws);
        (0..n).map(|r| merge_complex(z[r], w[r])).collect()
    }

    fn apply_adjoint(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        // (T^H v)(c) = Σ_d conj(φ(d)) v(c+d): a correlation, evaluated as a
        // convolution against the reversed input.
        let n = self.dim;
        let (v1, v2) = split_complex(v);
        let u1: Vec<Complex64> = v1.iter().rev().copied().collect();
        let u2: Vec<Complex64> = v2.iter().rev().copied().collect();
        let cu1: Vec<Complex64> = u1.iter().map(|z| z.conj()).collect();
        let cu2: Vec<Complex64> = u2.iter().map(|z| z.conj()).collect();
        let (zs, ws) = combined_spectra(
            &self.spec_p1c,
            &self.spec_p2n,
            &self.conv.spectrum(&u1),
            &self.conv.spectrum(&u2),
            &self.conv.spectrum(&cu1),
            &self.conv.spectrum(&cu2),
        );
        let z = self.conv.inverse(zs);
        let w = self.conv.inverse(ws);
        (0..n).map(|c| merge_complex(z[n - 1 - c], w[n - 1 - c])).collect()
    }
}

// ---------------------------------------------------------------------------
// Matrix constructors
// ---------------------------------------------------------------------------

/// Dense Hankel matrix [α(j+k)]; constant anti-diagonals. Needs α(n) for
/// n <= 2·dim - 2.
pub fn hankel_matrix(alpha: &[Quaternion], dim: usize) -> Result<QuatMatrix> {
    if alpha.len() < 2 * dim - 1 {
        return Err(Error::SymbolTooShort {
            needed: 2 * dim - 1,
            got: alpha.len(),
        });
    }
    Ok(QuatMatrix::from_fn(dim, |r, c| alpha[r + c]))
}

/// Dense lower-triangular Toeplitz matrix of the ★-multiplication operator
/// M_φ: entry (n, k) = φ̌(n-k) for n >= k.
pub fn mult_matrix(phi: &TruncatedSeries, dim: usize) -> QuatMatrix {
    QuatMatrix::from_fn(dim, |r, c| {
        if r >= c {
            phi.coeff(r - c)
        } else {
            Quaternion::ZERO
        }
    })
}

/// Hankel symbol α tied to a series b through α(n) = conj(b̌(n)).
#[derive(Clone, Debug)]
pub struct HankelSymbolPair {
    alpha: Vec<Quaternion>,
    b: TruncatedSeries,
}

impl HankelSymbolPair {
    pub fn from_series(b: &TruncatedSeries, n_alpha: usize) -> Self {
        let alpha = (0..n_alpha).map(|n| b.coeff(n).conj()).collect();
        Self {
            alpha,
            b: b.clone(),
        }
    }

    pub fn alpha(&self) -> &[Quaternion] {
        &self.alpha
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.b
    }
}

// ---------------------------------------------------------------------------
// Operator norm
// ---------------------------------------------------------------------------

fn vec_inner(u: &[Quaternion], v: &[Quaternion]) -> Quaternion {
    let mut acc = Quaternion::ZERO;
    for (a, b) in u.iter().zip(v) {
        acc += b.conj() * *a;
    }
    acc
}

fn vec_norm(u: &[Quaternion]) -> f64 {
    u.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
fn tridiag_lambda_max(alpha: &[f64], beta: &[f64]) -> f64 {
    let n = alpha.len();
    let count_less = |x: f64| -> usize {
        let mut cnt = 0;
        let mut d = 1.0f64;
        for i in 0..n {
            let b2 = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] };
            d = (alpha[i] - x) - b2 / d;
            if d.abs() < 1e-300 {
                d = -1e-300;
            }
            if d < 0.0 {
                cnt += 1;
            }
        }
        cnt
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    hi += 1e-12 * (1.0 + hi.abs());
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if count_less(mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest singular value of a right-linear operator: Lanczos with full
/// reorthogonalization on the self-adjoint composition A^H A, deterministic
/// start. The Ritz values climb monotonically, so the result approaches the
/// true norm from below to the stated tolerance.
pub fn largest_singular_value(op: &impl RightLinearOp) -> f64 {
    let n = op.dim();
    let mut rng = SeededRng::substream(0x9e37_79b9_7f4a_7c15, 0x0b);
    let mut v: Vec<Quaternion> = (0..n)
        .map(|_| Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal()))
        .collect();
    let nv = vec_norm(&v);
    if nv == 0.0 {
        return 0.0;
    }
    for q in &mut v {
        *q = *q * (1.0 / nv);
    }

    let max_steps = n.min(400);
    let mut basis: Vec<Vec<Quaternion>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut est = 0.0f64;
    let mut stagnant = 0;

    for step in 0..max_steps {
        let mut w = op.apply_adjoint(&op.apply(&v));
        let alpha = vec_inner(&w, &v).re();
        if step == 0 && alpha == 0.0 && vec_norm(&w) == 0.0 {
            return 0.0; // start vector lies in the kernel: zero operator
        }
        alphas.push(alpha);
        // Two-pass projection against the whole stored basis keeps the
        // recurrence orthogonal even for clustered spectra.
        for _ in 0..2 {
            for b in &basis {
                let s = vec_inner(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= *bi * s;
                }
            }
        }
        let beta = vec_norm(&w);

        let new_est = tridiag_lambda_max(&alphas, &betas).max(0.0).sqrt();
        let improved = new_est - est;
        est = est.max(new_est);
        if step >= 8 {
            if improved.abs() <= 1e-13 * est.max(1e-300) {
                stagnant += 1;
                if stagnant >= 3 {
                    break;
                }
            } else {
                stagnant = 0;
            }
        }
        let scale = alphas.iter().fold(0.0f64, |m, a| m.max(a.abs())).max(1e-300);
        if beta * beta <= 1e-28 * scale {
            break; // invariant subspace reached
        }
        betas.push(beta);
        for wi in &mut w {
            *wi = *wi * (1.0 / beta);
        }
        v = w;
        basis.push(v.clone());
    }
    est
}

/// Operator norm of a dense quaternion matrix as a right-linear map on
/// ℓ²-columns. Errors on non-finite entries.
pub fn op_norm(a: &QuatMatrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFiniteEntries);
    }
    Ok(largest_singular_value(a))
}

// ---------------------------------------------------------------------------
// Hankel bilinear form and the norm ladder
// ---------------------------------------------------------------------------

/// T_b(f, g) = ⟨f ★ g, b⟩ in H².
pub fn hankel_bilinear(
    b: &TruncatedSeries,
    f: &TruncatedSeries,
    g: &TruncatedSeries,
) -> Quaternion {
    let bound = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    h2_inner(&f.star_mul_bound(g, bound), b)
}

/// Norms of the Hankel truncations of α(n) = conj(b̌(n)) along a truncation
/// ladder. Nondecreasing for nested truncations; the last entry is the
/// reported estimate of the full operator norm.
pub fn hankel_norm_estimate(
    b: &TruncatedSeries,
    n_list: &[usize],
) -> Result<Vec<(usize, f64)>> {
    if n_list.is_empty() {
        return Err(Error::EmptyInput("truncation ladder"));
    }
    let n_max = *n_list.iter().max().expect("nonempty");
    let pair = HankelSymbolPair::from_series(b, 2 * n_max - 1);
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let op = HankelOperator::new(&pair.alpha()[..2 * n - 1], n)?;
        out.push((n, largest_singular_value(&op)));
    }
    Ok(out)
}
