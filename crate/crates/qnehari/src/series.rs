//! Truncated regular power series f(q) = Σ q^n a_n with right coefficients:
//! the ★-algebra, regular conjugate, ★-inverse, Cullen derivative,
//! evaluation, the representation formula and slicewise splitting.

use serde::{Deserialize, Serialize};

use crate::quat::{ImaginaryUnit, Quaternion, TOL};
use crate::rng::SeededRng;
use crate::{Error, Result};

/// Degree bound applied by [`TruncatedSeries::star_mul`] when no explicit
/// bound is given; products never grow past it.
pub const DEFAULT_DEGREE_BOUND: usize = 256;

/// Finite coefficient list a_0..a_N for f(q) = Σ q^n a_n.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Quaternion>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Quaternion::ONE)
    }

    pub fn constant(c: Quaternion) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The monomial q^n · c.
    pub fn monomial(n: usize, c: Quaternion) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; n + 1];
        coeffs[n] = c;
        Self { coeffs }
    }

    pub fn from_real_coeffs(values: &[f64]) -> Self {
        Self {
            coeffs: values.iter().map(|&v| Quaternion::from_real(v)).collect(),
        }
    }

    /// Coefficients with i.i.d. standard-normal components, for test suites
    /// and the `random_poly` symbol generator.
    pub fn random(deg: usize, scale: f64, rng: &mut SeededRng) -> Self {
        let coeffs = (0..=deg)
            .map(|_| {
                Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal()) * scale
            })
            .collect();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// Coefficient of q^n (zero beyond the stored range).
    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    /// Largest n with a_n != 0, or None for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| *c != Quaternion::ZERO)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// ★-product truncated at [`DEFAULT_DEGREE_BOUND`].
    pub fn star_mul(&self, g: &TruncatedSeries) -> TruncatedSeries {
        self.star_mul_bound(g, DEFAULT_DEGREE_BOUND)
    }

    /// ★-product with an explicit truncation bound: coefficient n of the
    /// result is Σ_{k=0}^{n} a_k b_{n-k}, quaternion products in that order.
    pub fn star_mul_bound(&self, g: &TruncatedSeries, bound: usize) -> TruncatedSeries {
        if self.coeffs.is_empty() || g.coeffs.is_empty() {
            return TruncatedSeries::zero();
        }
        let deg = (self.coeffs.len() - 1 + g.coeffs.len() - 1).min(bound);
        let mut out = vec![Quaternion::ZERO; deg + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            if k > deg || a == Quaternion::ZERO {
                continue;
            }
            let top = (deg - k).min(g.coeffs.len() - 1);
            for (m, &b) in g.coeffs[..=top].iter().enumerate() {
                out[k + m] += a * b;
            }
        }
        TruncatedSeries::new(out)
    }

    /// Regular conjugate f^c: coefficientwise quaternion conjugation.
    pub fn regular_conj(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// f ★ f^c; its coefficients are real up to roundoff.
    pub fn symmetrize(&self) -> TruncatedSeries {
        let bound = 2 * self.degree().unwrap_or(0);
        self.star_mul_bound(&self.regular_conj(), bound)
    }

    /// Formal ★-inverse truncated at degree `n`, by the triangular recursion
    /// b_0 = a_0^{-1}, b_n = -a_0^{-1} Σ_{k=1}^{n} a_k b_{n-k}.
    pub fn star_inv(&self, n: usize) -> Result<TruncatedSeries> {
        Ok(self.star_inv_checked(n)?.inverse)
    }

    /// ★-inverse with a conditioning report; the residual is the largest
    /// coefficient magnitude of f ★ f^{-★} at degrees 1..n.
    pub fn star_inv_checked(&self, n: usize) -> Result<StarInvOutcome> {
        let a0 = self.coeff(0);
        let a0_inv = a0.inv().map_err(|_| Error::NotStarInvertible)?;
        let mut inv = vec![Quaternion::ZERO; n + 1];
        inv[0] = a0_inv;
        for m in 1..=n {
            let mut acc = Quaternion::ZERO;
            for k in 1..=m {
                let a = self.coeff(k);
                if a != Quaternion::ZERO {
                    acc += a * inv[m - k];
                }
            }
            inv[m] = -(a0_inv * acc);
        }
        let inverse = TruncatedSeries::new(inv);

        // Growth bound for the recursion: |b_m| <= |a_0|^{-1} s^m with
        // s = Σ_{k>=1}|a_k| / |a_0|, hence max(1, s)^n overall.
        let s: f64 = self.coeffs.iter().skip(1).map(|c| c.norm()).sum::<f64>() / a0.norm();
        let condition = s.max(1.0).powi(n as i32);

        let product = self.star_mul_bound(&inverse, n);
        let residual = (1..=n)
            .map(|m| product.coeff(m).norm())
            .fold((product.coeff(0) - Quaternion::ONE).norm(), f64::max);
        Ok(StarInvOutcome {
            inverse,
            condition,
            residual,
        })
    }

    /// Cullen derivative: coefficient n-1 of the result is n·a_n.
    pub fn cullen_derive(&self) -> TruncatedSeries {
        if self.coeffs.len() <= 1 {
            return TruncatedSeries::zero();
        }
        TruncatedSeries::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(idx, &a)| a * (idx + 1) as f64)
                .collect(),
        )
    }

    /// Horner evaluation of Σ q^n a_n, respecting right coefficients.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for &a in self.coeffs.iter().rev() {
            acc = a + q * acc;
        }
        acc
    }

    /// Pointwise-product route: 0 when f(q) vanishes, otherwise
    /// f(q) · g(f(q)^{-1} q f(q)). Serves as an independent route for
    /// evaluating f ★ g.
    pub fn eval_via_transform(&self, g: &TruncatedSeries, q: Quaternion) -> Quaternion {
        let fq = self.eval(q);
        if fq.norm() < TOL {
            return Quaternion::ZERO;
        }
        let conjugated = fq.inv().expect("norm checked above") * q * fq;
        fq * g.eval(conjugated)
    }

    /// Decompose every coefficient as c_n + d_n·J with c_n, d_n in L_I;
    /// requires J orthogonal to I.
    pub fn split_coeffs(&self, i: ImaginaryUnit, j: ImaginaryUnit) -> Result<ComplexSlicePair> {
        let ip = i.dot(j).abs();
        if ip >= TOL {
            return Err(Error::UnitsNotOrthogonal(ip));
        }
        let qi = i.as_quaternion();
        let qj = j.as_quaternion();
        let qk = qi * qj;
        let mut f_coeffs = Vec::with_capacity(self.coeffs.len());
        let mut g_coeffs = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            // {1, I, J, IJ} is an orthonormal basis of H when I ⟂ J.
            f_coeffs.push((a.dot(Quaternion::ONE), a.dot(qi)));
            g_coeffs.push((a.dot(qj), a.dot(qk)));
        }
        Ok(ComplexSlicePair { f_coeffs, g_coeffs })
    }

    pub fn scale(&self, s: f64) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        TruncatedSeries::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        TruncatedSeries::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    /// CSV form: one row `n,x0,x1,x2,x3` per coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,x0,x1,x2,x3\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!(
                "{n},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                c.x0, c.x1, c.x2, c.x3
            ));
        }
        out
    }
}

/// Conditioning report for the ★-inverse recursion.
#[derive(Clone, Debug)]
pub struct StarInvOutcome {
    pub inverse: TruncatedSeries,
    /// A priori growth bound max(1, Σ_{k>=1}|a_k|/|a_0|)^n.
    pub condition: f64,
    /// Largest deviation of f ★ f^{-★} from 1 among degrees 0..n.
    pub residual: f64,
}

impl StarInvOutcome {
    /// Formal inversion can blow up; flag outcomes whose verified residual
    /// is no longer near roundoff.
    pub fn is_suspect(&self) -> bool {
        self.residual > 1e-8
    }
}

/// Splitting of the coefficients on the slice L_I with respect to J ⟂ I:
/// each coefficient is c_n + d_n·J with c_n, d_n in L_I stored as
/// (real, I-component) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSlicePair {
    pub f_coeffs: Vec<(f64, f64)>,
    pub g_coeffs: Vec<(f64, f64)>,
}

impl ComplexSlicePair {
    /// Reassemble the quaternionic series F + G·J.
    pub fn recombine(&self, i: ImaginaryUnit, j: ImaginaryUnit) -> TruncatedSeries {
        let qi = i.as_quaternion();
        let qj = j.as_quaternion();
        let coeffs = self
            .f_coeffs
            .iter()
            .zip(&self.g_coeffs)
            .map(|(&(fr, fi), &(gr, gi))| {
                let c = Quaternion::from_real(fr) + qi * fi;
                let d = Quaternion::from_real(gr) + qi * gi;
                c + d * qj
            })
            .collect();
        TruncatedSeries::new(coeffs)
    }

    /// Evaluate F + G·J at the slice point x + yI via complex arithmetic
    /// inside L_I.
    pub fn eval_on_slice(
        &self,
        x: f64,
        y: f64,
        i: ImaginaryUnit,
        j: ImaginaryUnit,
    ) -> Quaternion {
        let f = eval_complex(&self.f_coeffs, x, y);
        let g = eval_complex(&self.g_coeffs, x, y);
        let qi = i.as_quaternion();
        let qj = j.as_quaternion();
        let fv = Quaternion::from_real(f.0) + qi * f.1;
        let gv = Quaternion::from_real(g.0) + qi * g.1;
        fv + gv * qj
    }
}

/// Horner evaluation of a complex-coefficient polynomial at x + iy.
fn eval_complex(coeffs: &[(f64, f64)], x: f64, y: f64) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for &(cr, ci) in coeffs.iter().rev() {
        let nre = cr + x * re - y * im;
        let nim = ci + x * im + y * re;
        re = nre;
        im = nim;
    }
    (re, im)
}

/// Representation formula: from the values v± = f(x ± yI) on one slice,
/// recover f(x + yJ) = ½(v+ + v-) + J·(I/2)·(v- - v+).
pub fn rep_formula(
    v_plus: Quaternion,
    v_minus: Quaternion,
    i: ImaginaryUnit,
    j: ImaginaryUnit,
) -> Quaternion {
    let avg = (v_plus + v_minus) * 0.5;
    let twist = j.as_quaternion() * (i.as_quaternion() * 0.5) * (v_minus - v_plus);
    avg + twist
}
