//! Hardy-space machinery on the quaternionic ball: the coefficient norm and
//! inner product, reproducing kernels, the log-weight volume formula, the
//! polarized derivative pairing, and boundary H∞ / H¹ estimates.
//!
//! Volume conventions: dVol(x + yI) = ¼ dA_S(I) dx dy over the half-disc
//! parameterization y >= 0, so Vol(B) = ¼ · 4π · (π/2) = π²/2.

use crate::numeric::{geometric_gauss_legendre, pairwise_sum};
use crate::quat::{from_polar, sample_units, ImaginaryUnit, Quaternion};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Vol(B) for dVol = ¼ dA_S dx dy.
pub const BALL_VOLUME: f64 = std::f64::consts::PI * std::f64::consts::PI / 2.0;

/// Radial cutoff toward the origin for the log-weight substitution
/// t = -2 log r: contributions beyond are below 1e-18.
const T_MAX: f64 = 45.0;

/// ℓ² coefficient norm (Σ |a_n|²)^{1/2}.
pub fn h2_norm(f: &TruncatedSeries) -> f64 {
    let squares: Vec<f64> = f.coeffs().iter().map(|c| c.norm_sqr()).collect();
    pairwise_sum(&squares).sqrt()
}

/// Quaternion-valued inner product Σ conj(b_n) a_n; conjugate-symmetric.
pub fn h2_inner(f: &TruncatedSeries, g: &TruncatedSeries) -> Quaternion {
    let n = f.len().min(g.len());
    let mut acc = Quaternion::ZERO;
    for k in 0..n {
        acc += g.coeff(k).conj() * f.coeff(k);
    }
    acc
}

/// Reproducing kernel k_w = (1 - q w̄)^{-★} truncated at degree `n`:
/// coefficients w̄^k.
pub fn kernel(w: Quaternion, n: usize) -> Result<TruncatedSeries> {
    if w.norm() >= 1.0 {
        return Err(Error::OutsideBall(w.norm()));
    }
    let wc = w.conj();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut p = Quaternion::ONE;
    for _ in 0..=n {
        coeffs.push(p);
        p = p * wc;
    }
    Ok(TruncatedSeries::new(coeffs))
}

/// Tail of the squared kernel norm lost to truncation at degree `n`:
/// |w|^{2n+2}/(1-|w|²).
pub fn kernel_tail_bound(w: Quaternion, n: usize) -> f64 {
    let r2 = w.norm_sqr();
    r2.powi(n as i32 + 1) / (1.0 - r2)
}

/// Lower bound for sup_B |f| by boundary sampling.
///
/// On each boundary torus f(e^{Iθ}) = A(θ) + I·B(θ) with A, B independent of
/// I, so |f|² = |A|² + |B|² - 2Re(A·conj(B)·I) is affine in I and the sup
/// over the sphere of units is exact: |A|² + |B|² + 2|Im(A·conj(B))|. Only θ
/// is sampled (seed fixes the grid offset), with a dense refinement around
/// the argmax.
pub fn hinf_estimate(f: &TruncatedSeries, n_samples: usize, seed: u64) -> f64 {
    let deg = match f.degree() {
        Some(d) => d,
        None => return 0.0,
    };
    if deg == 0 {
        return f.coeff(0).norm();
    }
    let slice_sup = |theta: f64| -> f64 {
        let mut a = Quaternion::ZERO;
        let mut b = Quaternion::ZERO;
        for (n, &c) in f.coeffs().iter().enumerate() {
            let (s, co) = (n as f64 * theta).sin_cos();
            a += c * co;
            b += c * s;
        }
        let cross = a * b.conj();
        (a.norm_sqr() + b.norm_sqr() + 2.0 * cross.im_norm()).sqrt()
    };

    let n_theta = n_samples.max(2 * deg + 2).max(64);
    let offset = (seed as f64 / u64::MAX as f64) * 2.0 * std::f64::consts::PI / n_theta as f64;
    let mut best = (0.0f64, 0.0f64); // (value, theta)
    for m in 0..n_theta {
        let theta = offset + 2.0 * std::f64::consts::PI * m as f64 / n_theta as f64;
        let v = slice_sup(theta);
        if v > best.0 {
            best = (v, theta);
        }
    }
    // Shrinking local grids around the running argmax.
    let mut window = 2.0 * std::f64::consts::PI / n_theta as f64;
    for _ in 0..8 {
        let center = best.1;
        for m in 0..33 {
            let theta = center - window + 2.0 * window * m as f64 / 32.0;
            let v = slice_sup(theta);
            if v > best.0 {
                best = (v, theta);
            }
        }
        window *= 0.2;
    }
    best.0
}

/// Quadrature layout for integrals against dVol on the ball.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Radial nodes (grouped into 8-point Gauss panels).
    pub n_radial: usize,
    /// Angular nodes on the full circle; raised automatically so that
    /// trigonometric polynomials of the working degree integrate exactly.
    pub n_angular: usize,
    /// Monte Carlo samples on the sphere of imaginary units.
    pub n_sphere: usize,
    pub seed: u64,
    /// Radial truncation: integrate r in [0, r_max], r_max < 1.
    pub r_max: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_radial: 96,
            n_angular: 128,
            n_sphere: 64,
            seed: 7,
            r_max: 0.999,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_radial == 0 || self.n_angular == 0 || self.n_sphere == 0 {
            return Err(Error::Config("quadrature counts must be >= 1".into()));
        }
        if !(0.0 < self.r_max && self.r_max < 1.0) {
            return Err(Error::Config(format!(
                "r_max must lie in (0,1), got {}",
                self.r_max
            )));
        }
        Ok(())
    }

    /// Next refinement level: double every count, halve the boundary gap.
    pub fn refine(&self) -> Self {
        Self {
            n_radial: self.n_radial * 2,
            n_angular: self.n_angular * 2,
            n_sphere: self.n_sphere * 2,
            seed: self.seed,
            r_max: 1.0 - 0.5 * (1.0 - self.r_max),
        }
    }
}

/// Shared tensor loop: mean over sampled units and the exact angular grid of
/// a per-(I, θ) radial integral, assembled so that
/// (1/Vol) ∫_B · dVol = 2 · mean of the returned values.
fn ball_average<F>(quad: &QuadratureSpec, n_angular: usize, mut radial: F) -> Vec<Quaternion>
where
    F: FnMut(ImaginaryUnit, f64) -> Quaternion,
{
    let units = sample_units(quad.n_sphere, quad.seed);
    let mut per_unit = Vec::with_capacity(units.len());
    for &u in &units {
        let mut comps = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
        for m in 0..n_angular {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / n_angular as f64;
            let v = radial(u, theta);
            comps[0].push(v.x0);
            comps[1].push(v.x1);
            comps[2].push(v.x2);
            comps[3].push(v.x3);
        }
        let scale = 1.0 / n_angular as f64;
        per_unit.push(Quaternion::new(
            pairwise_sum(&comps[0]) * scale,
            pairwise_sum(&comps[1]) * scale,
            pairwise_sum(&comps[2]) * scale,
            pairwise_sum(&comps[3]) * scale,
        ));
    }
    per_unit
}

fn mean_quat(values: &[Quaternion]) -> Quaternion {
    let n = values.len() as f64;
    let c0: Vec<f64> = values.iter().map(|v| v.x0).collect();
    let c1: Vec<f64> = values.iter().map(|v| v.x1).collect();
    let c2: Vec<f64> = values.iter().map(|v| v.x2).collect();
    let c3: Vec<f64> = values.iter().map(|v| v.x3).collect();
    Quaternion::new(
        pairwise_sum(&c0) / n,
        pairwise_sum(&c1) / n,
        pairwise_sum(&c2) / n,
        pairwise_sum(&c3) / n,
    )
}

/// H² norm through the volume formula
/// (|f(0)|² + (1/Vol) ∫_B |∂_c f|² log|q|^{-2} dVol)^{1/2}.
///
/// The radial variable is substituted r = e^{-t/2}, which turns the log
/// weight into t·½e^{-t} dt and removes the singularity at the origin.
pub fn h2_norm_volume(f: &TruncatedSeries, quad: &QuadratureSpec) -> f64 {
    let d = f.cullen_derive();
    let head = f.coeff(0).norm_sqr();
    if d.degree().is_none() {
        return head.sqrt();
    }
    let deg = f.degree().unwrap_or(0);
    let n_angular = quad.n_angular.max(2 * deg + 2);
    let t_min = -2.0 * quad.r_max.ln();
    let panels = quad.n_radial.div_ceil(8).max(2);
    // Panels geometric in t: the integrand is a sum of t·e^{-nt} whose scale
    // shrinks like 1/n toward t_min, so a graded layout resolves every
    // degree at once.
    let (ts, ws) = geometric_gauss_legendre(t_min, T_MAX, panels, 8);
    let radii: Vec<f64> = ts.iter().map(|&t| (-0.5 * t).exp()).collect();

    let per_unit = ball_average(quad, n_angular, |u, theta| {
        let terms: Vec<f64> = ts
            .iter()
            .zip(&ws)
            .zip(&radii)
            .map(|((&t, &w), &r)| {
                let q = from_polar(r, theta, u);
                d.eval(q).norm_sqr() * t * 0.5 * (-t).exp() * w
            })
            .collect();
        Quaternion::from_real(pairwise_sum(&terms))
    });
    (head + 2.0 * mean_quat(&per_unit).re()).sqrt()
}

/// Polarized derivative pairing
/// conj(g(0))·f(0) + (1/Vol) ∫_B conj(∂_c g) ∂_c f (1-|q|²) dVol.
///
/// This is an equivalent inner product for H², not equal to [`h2_inner`]
/// (already on monomials it returns n/(n+1) instead of 1); reports compare
/// the two without asserting equality.
pub fn h2_inner_derivative(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    quad: &QuadratureSpec,
) -> Quaternion {
    let df = f.cullen_derive();
    let dg = g.cullen_derive();
    let head = g.coeff(0).conj() * f.coeff(0);
    if df.degree().is_none() || dg.degree().is_none() {
        return head;
    }
    let deg = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
    let n_angular = quad.n_angular.max(2 * deg + 2);
    let panels = quad.n_radial.div_ceil(8).max(2);
    // Grade in 1-r so that high-degree terms concentrated at the boundary
    // are resolved; r runs down from r_max to 0.
    let (gaps, ws) = geometric_gauss_legendre(1.0 - quad.r_max, 1.0, panels, 8);
    let rs: Vec<f64> = gaps.iter().map(|&u| 1.0 - u).collect();

    let per_unit = ball_average(quad, n_angular, |u, theta| {
        let mut acc = Quaternion::ZERO;
        for (&r, &w) in rs.iter().zip(&ws) {
            let q = from_polar(r, theta, u);
            acc += dg.eval(q).conj() * df.eval(q) * ((1.0 - r * r) * r * w);
        }
        acc
    });
    head + mean_quat(&per_unit) * 2.0
}

/// Boundary L¹ norm of the restriction to the slice through `unit`:
/// (1/2π) ∫ |f(e^{Iθ})| dθ by a uniform periodic grid.
pub fn h1_norm_slice(f: &TruncatedSeries, unit: ImaginaryUnit, n_theta: usize) -> f64 {
    let n = n_theta.max(8);
    let values: Vec<f64> = (0..n)
        .map(|m| {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            f.eval(from_polar(1.0, theta, unit)).norm()
        })
        .collect();
    pairwise_sum(&values) / n as f64
}
