//! Carleson-measure geometry on the ball: symmetric boxes, weighted point
//! clouds for dμ_b = |∂_c b|²(1-|q|²) dVol, box and embedding constants, the
//! Möbius-ratio estimate and the averaged-kernel test function.
//!
//! All reported constants are lower bounds obtained from finite samples;
//! none of them certifies a supremum.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hardy::{h2_norm, kernel, BALL_VOLUME};
use crate::numeric::pairwise_sum;
use crate::quat::{sample_units, to_polar, Quaternion, SlicePoint, TOL};
use crate::rng::SeededRng;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Provenance of a sampled measure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleMeta {
    pub generator: String,
    pub seed: u64,
    pub n_points: usize,
}

/// Weighted point cloud on the ball approximating a positive measure:
/// Σ w_i φ(p_i) estimates ∫ φ dμ.
#[derive(Clone, Debug)]
pub struct MeasureSample {
    points: Vec<Quaternion>,
    weights: Vec<f64>,
    meta: SampleMeta,
}

impl MeasureSample {
    pub fn new(points: Vec<Quaternion>, weights: Vec<f64>, meta: SampleMeta) -> Self {
        assert_eq!(points.len(), weights.len());
        debug_assert!(weights.iter().all(|w| w.is_finite() && *w >= 0.0));
        debug_assert!(points.iter().all(|p| p.norm() < 1.0));
        Self {
            points,
            weights,
            meta,
        }
    }

    /// Real-axis mass is never produced by the samplers (it is a null set of
    /// the parameterization); explicit atoms on B ∩ ℝ carry that part.
    pub fn with_real_atoms(mut self, atoms: &[(f64, f64)]) -> Self {
        for &(x, w) in atoms {
            assert!(x.abs() < 1.0 && w >= 0.0);
            self.points.push(Quaternion::from_real(x));
            self.weights.push(w);
        }
        self
    }

    pub fn points(&self) -> &[Quaternion] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Σ w_i φ(p_i) with deterministic pairwise reduction.
    pub fn integrate(&self, mut phi: impl FnMut(Quaternion) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * phi(p))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// CSV rows `x0,x1,x2,x3,weight`.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "x0,x1,x2,x3,weight")?;
        for (p, w) in self.points.iter().zip(&self.weights) {
            writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                p.x0, p.x1, p.x2, p.x3, w
            )?;
        }
        Ok(())
    }

    /// Persist as `<stem>.csv` plus the generator metadata in a
    /// `<stem>.meta.json` sidecar.
    pub fn write_files(&self, dir: &std::path::Path, stem: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut csv = std::fs::File::create(dir.join(format!("{stem}.csv")))?;
        self.write_csv(&mut csv)?;
        let json = serde_json::to_string_pretty(&self.meta).expect("meta serializes");
        std::fs::write(dir.join(format!("{stem}.meta.json")), json)
    }
}

/// Center data of a symmetric box S(q) for q = r e^{Jθ}; membership does not
/// depend on J.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BoxSpec {
    pub r: f64,
    pub theta: f64,
}

impl BoxSpec {
    pub fn new(r: f64, theta: f64) -> Self {
        assert!((0.0..1.0).contains(&r), "box center radius must be in [0,1)");
        Self { r, theta }
    }

    pub fn from_center(q: Quaternion) -> Self {
        let (r, theta, _) = to_polar(q);
        Self::new(r, theta)
    }
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = a % two_pi;
    if x > std::f64::consts::PI {
        x -= two_pi;
    } else if x < -std::f64::consts::PI {
        x += two_pi;
    }
    x
}

fn polar_in_box(rho: f64, alpha: f64, b: &BoxSpec) -> bool {
    let gap = 1.0 - rho;
    if !(gap > 0.0 && gap <= 2.0 * (1.0 - b.r)) {
        return false;
    }
    // A point ϱe^{Iα} equals ϱe^{(-I)(-α)}, so both angle representatives
    // are admissible.
    let lim = 1.0 - b.r;
    wrap_angle(alpha - b.theta).abs() <= lim || wrap_angle(alpha + b.theta).abs() <= lim
}

/// Membership p ∈ S(q): with p = ϱe^{Iα}, requires |α-θ| <= 1-r and
/// 0 < 1-ϱ <= 2(1-r) for some representative, any I.
pub fn box_contains(b: &BoxSpec, p: Quaternion) -> bool {
    let (rho, alpha, _) = to_polar(p);
    polar_in_box(rho, alpha, b)
}

/// Draw `n` points for dμ_b: units uniform on the sphere, (x, y) uniform on
/// the half-disc, each weighted by (π²/2)·|∂_c b|²(1-|q|²)/n so that weighted
/// sums estimate ∫ φ dμ_b.
pub fn mu_b_sample(b: &TruncatedSeries, n: usize, seed: u64) -> MeasureSample {
    let db = b.cullen_derive();
    let mut rng = SeededRng::substream(seed, 0x6d65);
    let units = sample_units(n, seed.wrapping_add(0x5ca1ab1e));
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for u in units {
        let rho = rng.uniform().sqrt();
        let t = rng.uniform_in(0.0, std::f64::consts::PI);
        let (x, y) = (rho * t.cos(), rho * t.sin());
        let q = Quaternion::from_real(x) + u.as_quaternion() * y;
        let density = db.eval(q).norm_sqr() * (1.0 - q.norm_sqr());
        points.push(q);
        weights.push(BALL_VOLUME * density / n as f64);
    }
    MeasureSample::new(
        points,
        weights,
        SampleMeta {
            generator: "mu_b".into(),
            seed,
            n_points: n,
        },
    )
}

/// Deterministic probe centers, dense near the boundary where the Carleson
/// condition binds: r in {0, .5, .75, .9, .95, .99} × 16 angles.
pub fn default_probe_centers() -> Vec<BoxSpec> {
    let radii = [0.0, 0.5, 0.75, 0.9, 0.95, 0.99];
    let mut out = Vec::with_capacity(radii.len() * 16);
    for &r in &radii {
        for m in 0..16 {
            let theta = std::f64::consts::PI * (m as f64 + 0.5) / 16.0;
            out.push(BoxSpec::new(r, theta));
        }
    }
    out
}

/// max over centers of μ(S(q)) / (1-r): a sampled lower bound for the box
/// constant of Theorem-2 type characterizations.
pub fn box_constant(mu: &MeasureSample, centers: &[BoxSpec]) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::EmptyInput("box centers"));
    }
    // Polar data of the cloud computed once; boxes only look at (ϱ, α).
    let polar: Vec<(f64, f64)> = mu
        .points()
        .iter()
        .map(|&p| {
            let (rho, alpha, _) = to_polar(p);
            (rho, alpha)
        })
        .collect();
    let mut best = 0.0f64;
    for b in centers {
        let terms: Vec<f64> = polar
            .iter()
            .zip(mu.weights())
            .filter(|((rho, alpha), _)| polar_in_box(*rho, *alpha, b))
            .map(|(_, &w)| w)
            .collect();
        best = best.max(pairwise_sum(&terms) / (1.0 - b.r));
    }
    Ok(best)
}

/// max over the test set of ∫|f|²dμ / ‖f‖²: a sampled lower bound for the
/// Carleson embedding constant.
pub fn embedding_constant(mu: &MeasureSample, test_set: &[TruncatedSeries]) -> Result<f64> {
    if test_set.is_empty() {
        return Err(Error::EmptyInput("embedding test set"));
    }
    let mut best = 0.0f64;
    for f in test_set {
        let norm = h2_norm(f);
        if norm == 0.0 {
            return Err(Error::ZeroNormTestFunction);
        }
        let mass = mu.integrate(|q| f.eval(q).norm_sqr());
        best = best.max(mass / (norm * norm));
    }
    Ok(best)
}

/// Averaged-kernel test function K = ½(k_w + k_{w̄}); its coefficients
/// ½(w̄^n + w^n) are real.
pub fn carleson_test_fn(w: Quaternion, n: usize) -> Result<TruncatedSeries> {
    if w.norm() >= 1.0 {
        return Err(Error::OutsideBall(w.norm()));
    }
    let a = kernel(w, n)?;
    let b = kernel(w.conj(), n)?;
    Ok(a.add(&b).scale(0.5))
}

/// |(1 - z(w+w̄)/2) / (1 - zw)| in the complex arithmetic of a common slice.
pub fn moebius_ratio(w: &SlicePoint, z: &SlicePoint) -> Result<f64> {
    if !(w.is_real() || z.is_real()) {
        let ip = w.unit().dot(z.unit()).abs();
        if (ip - 1.0).abs() > TOL {
            return Err(Error::SliceMismatch(ip));
        }
    }
    let wz = Complex64::new(w.x(), w.y());
    let zz = Complex64::new(z.x(), z.y());
    let denom = Complex64::new(1.0, 0.0) - zz * wz;
    if denom.norm() < TOL {
        return Err(Error::MoebiusPole);
    }
    let numer = Complex64::new(1.0 - zz.re * wz.re, -zz.im * wz.re);
    Ok(numer.norm() / denom.norm())
}

/// Extremes of the Möbius ratio over a (|w|, arg w) grid with an (ϱ, α) grid
/// in each region s(w).
#[derive(Clone, Copy, Debug)]
pub struct MoebiusSweep {
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl MoebiusSweep {
    /// The single constant c with 1/c <= ratio <= c over the sweep.
    pub fn constant(&self) -> f64 {
        self.max_ratio.max(1.0 / self.min_ratio)
    }
}

/// Sweep z over s(w) = {1-|z| <= 2(1-|w|), |arg z - arg w| <= 1-|w|} for each
/// w on the grid. Everything happens on the canonical i-slice.
pub fn moebius_sweep(radii: &[f64], n_args: usize, n_rho: usize, n_alpha: usize) -> MoebiusSweep {
    let i = crate::quat::ImaginaryUnit::i();
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    for &rw in radii {
        for ia in 0..n_args {
            let aw = std::f64::consts::FRAC_PI_2 * ia as f64 / (n_args - 1).max(1) as f64;
            let w = SlicePoint::new(rw * aw.cos(), rw * aw.sin(), i);
            let rho_lo = (1.0 - 2.0 * (1.0 - rw)).max(0.0);
            for ir in 0..n_rho {
                let rho = rho_lo + (1.0 - 1e-9 - rho_lo) * (ir as f64 + 0.5) / n_rho as f64;
                for ja in 0..n_alpha {
                    let al = aw - (1.0 - rw)
                        + 2.0 * (1.0 - rw) * (ja as f64 + 0.5) / n_alpha as f64;
                    let z = SlicePoint::new(rho * al.cos(), rho * al.sin(), i);
                    if z.modulus() >= 1.0 {
                        continue;
                    }
                    if let Ok(ratio) = moebius_ratio(&w, &z) {
                        min_ratio = min_ratio.min(ratio);
                        max_ratio = max_ratio.max(ratio);
                    }
                }
            }
        }
    }
    MoebiusSweep {
        min_ratio,
        max_ratio,
    }
}

/// The grid of the default sweep: |w| through 0.999, arguments in [0, π/2].
pub fn default_moebius_radii() -> Vec<f64> {
    vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{from_polar, ImaginaryUnit};

    #[test]
    fn box_membership_examples() {
        // Center r = 0, θ = 0: every point with polar angle <= 1 rad.
        let b = BoxSpec::new(0.0, 0.0);
        assert!(box_contains(&b, Quaternion::from_real(0.5)));
        assert!(box_contains(
            &b,
            from_polar(0.9, 0.99, ImaginaryUnit::j())
        ));
        assert!(!box_contains(
            &b,
            from_polar(0.9, 1.01, ImaginaryUnit::j())
        ));

        // The center's base point (ϱ = r, α = θ) belongs for any unit.
        let b = BoxSpec::new(0.6, 0.8);
        for u in sample_units(5, 1) {
            assert!(box_contains(&b, from_polar(0.6, 0.8, u)));
        }
    }

    #[test]
    fn box_membership_matches_second_implementation() {
        // Oracle written directly against the defining inequalities with an
        // explicit search over angle representatives.
        fn oracle(b: &BoxSpec, p: Quaternion) -> bool {
            let sp = SlicePoint::from_quaternion(p);
            let rho = sp.modulus();
            if !(1.0 - rho > 0.0 && 1.0 - rho <= 2.0 * (1.0 - b.r)) {
                return false;
            }
            let alpha = sp.y().atan2(sp.x());
            for cand in [alpha, -alpha] {
                for k in [-1.0, 0.0, 1.0] {
                    if (cand - b.theta + k * 2.0 * std::f64::consts::PI).abs() <= 1.0 - b.r {
                        return true;
                    }
                }
            }
            false
        }
        let mut rng = SeededRng::new(77);
        let mut inside = 0;
        for _ in 0..5000 {
            let b = BoxSpec::new(rng.uniform_in(0.0, 0.99), rng.uniform_in(0.0, std::f64::consts::PI));
            let u = sample_units(1, rng.uniform_in(0.0, 1e9) as u64)[0];
            let p = from_polar(
                rng.uniform_in(0.0, 0.9999),
                rng.uniform_in(0.0, std::f64::consts::PI),
                u,
            );
            let got = box_contains(&b, p);
            assert_eq!(got, oracle(&b, p));
            inside += got as usize;
        }
        assert!(inside > 0, "sweep never hit a box");
    }

    #[test]
    fn box_membership_is_rotation_invariant() {
        let mut rng = SeededRng::new(78);
        for _ in 0..500 {
            let b = BoxSpec::new(rng.uniform_in(0.0, 0.95), rng.uniform_in(0.0, 3.0));
            let rho = rng.uniform_in(0.0, 0.999);
            let alpha = rng.uniform_in(0.0, std::f64::consts::PI);
            let units = sample_units(4, rng.uniform_in(0.0, 1e9) as u64);
            let first = box_contains(&b, from_polar(rho, alpha, units[0]));
            for &u in &units[1..] {
                assert_eq!(first, box_contains(&b, from_polar(rho, alpha, u)));
            }
        }
    }

    #[test]
    fn measure_of_constant_symbol_vanishes() {
        let mu = mu_b_sample(&TruncatedSeries::constant(Quaternion::K), 500, 3);
        assert_eq!(mu.total_mass(), 0.0);
    }

    #[test]
    fn measure_of_linear_symbol_matches_closed_form() {
        // b = q: μ_b(B) = ∫ (1-|q|²) dVol = π²/4.
        let b = TruncatedSeries::monomial(1, Quaternion::ONE);
        let mu = mu_b_sample(&b, 200_000, 11);
        let expect = std::f64::consts::PI.powi(2) / 4.0;
        let got = mu.total_mass();
        assert!(
            (got - expect).abs() / expect < 0.01,
            "mass {got} vs {expect}"
        );
    }

    #[test]
    fn measure_estimate_follows_monte_carlo_rate() {
        // Standard error across seeds should halve when n quadruples.
        let b = TruncatedSeries::monomial(1, Quaternion::ONE);
        let spread = |n: usize| {
            let vals: Vec<f64> = (0..20)
                .map(|s| mu_b_sample(&b, n, 1000 + s).total_mass())
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64)
                .sqrt()
        };
        let ratio = spread(8000) / spread(2000);
        assert!(
            (0.3..0.8).contains(&ratio),
            "spread ratio {ratio} not consistent with 1/sqrt(n)"
        );
    }

    #[test]
    fn box_constant_examples() {
        let zero = MeasureSample::new(
            vec![],
            vec![],
            SampleMeta {
                generator: "empty".into(),
                seed: 0,
                n_points: 0,
            },
        );
        let centers = default_probe_centers();
        assert_eq!(box_constant(&zero, &centers).unwrap(), 0.0);
        assert!(matches!(
            box_constant(&zero, &[]),
            Err(Error::EmptyInput(_))
        ));

        // Point mass w in a box with 1 - r = 1/2 scores 2w.
        let w = 0.7;
        let mass = MeasureSample::new(
            vec![Quaternion::from_real(0.3)],
            vec![w],
            SampleMeta {
                generator: "atom".into(),
                seed: 0,
                n_points: 1,
            },
        );
        let c = box_constant(&mass, &[BoxSpec::new(0.5, 0.0)]).unwrap();
        assert!((c - 2.0 * w).abs() < 1e-14);
    }

    #[test]
    fn box_constant_is_seed_stable_for_linear_symbol() {
        let b = TruncatedSeries::monomial(1, Quaternion::ONE);
        let centers = default_probe_centers();
        let vals: Vec<f64> = (0..5)
            .map(|s| {
                let mu = mu_b_sample(&b, 1_000_000, 40 + s);
                box_constant(&mu, &centers).unwrap()
            })
            .collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0f64, f64::max);
        assert!(hi.is_finite() && lo > 0.0);
        assert!(
            (hi - lo) / hi < 0.10,
            "box constant unstable across seeds: {vals:?}"
        );
    }

    #[test]
    fn embedding_constant_examples() {
        let b = TruncatedSeries::monomial(1, Quaternion::ONE);
        let mu = mu_b_sample(&b, 50_000, 5);
        let ones = [TruncatedSeries::one()];
        let c = embedding_constant(&mu, &ones).unwrap();
        assert!((c - mu.total_mass()).abs() < 1e-12);

        let zero_measure = MeasureSample::new(
            vec![],
            vec![],
            SampleMeta {
                generator: "empty".into(),
                seed: 0,
                n_points: 0,
            },
        );
        assert_eq!(embedding_constant(&zero_measure, &ones).unwrap(), 0.0);
        assert!(matches!(
            embedding_constant(&mu, &[TruncatedSeries::zero()]),
            Err(Error::ZeroNormTestFunction)
        ));
    }

    #[test]
    fn embedding_constant_is_seed_stable() {
        // Symbol 1/(1 - q/2) truncated: geometric coefficients 2^{-n}.
        let b = TruncatedSeries::from_real_coeffs(
            &(0..64).map(|n| 0.5f64.powi(n)).collect::<Vec<_>>(),
        );
        let mut rng = SeededRng::new(500);
        let mut tests: Vec<TruncatedSeries> = Vec::new();
        for &r in &[0.5, 0.9, 0.99] {
            tests.push(kernel(Quaternion::from_real(r), 256).unwrap());
        }
        for _ in 0..50 {
            tests.push(TruncatedSeries::random(12, 1.0, &mut rng));
        }
        let vals: Vec<f64> = (0..3)
            .map(|s| {
                let mu = mu_b_sample(&b, 50_000, 900 + s);
                embedding_constant(&mu, &tests).unwrap()
            })
            .collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0f64, f64::max);
        assert!(
            (hi - lo) / hi < 0.15,
            "embedding constant unstable: {vals:?}"
        );
    }

    #[test]
    fn averaged_kernel_examples() {
        let w = Quaternion::from_real(0.4);
        let k = carleson_test_fn(w, 32).unwrap();
        let plain = kernel(w, 32).unwrap();
        for n in 0..=32 {
            assert!(k.coeff(n).approx_eq(plain.coeff(n), 1e-15));
        }

        let mut rng = SeededRng::new(9);
        for _ in 0..20 {
            let dir = Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal());
            let w = dir * (rng.uniform_in(0.1, 0.95) / dir.norm());
            let k = carleson_test_fn(w, 48).unwrap();
            for n in 0..=48 {
                assert!(k.coeff(n).im_norm() < 1e-13, "coefficient {n} not real");
            }
            assert!(h2_norm(&k) <= h2_norm(&kernel(w, 48).unwrap()) + 1e-12);
        }

        assert!(carleson_test_fn(Quaternion::from_real(1.0), 4).is_err());
    }

    #[test]
    fn averaged_kernel_stays_large_on_its_box() {
        // Exhibit |K(z)| ≳ 1/(1-|w|²) on S_{I_w}(w); the grid minimum of the
        // normalized quantity sits near 0.32.
        let i = ImaginaryUnit::i();
        for &(rw, aw) in &[(0.5, 0.8), (0.9, 0.3), (0.99, 1.2), (0.95, 0.01)] {
            let w = from_polar(rw, aw, i);
            let k = carleson_test_fn(w, 2048).unwrap();
            let mut min_scaled = f64::INFINITY;
            for ir in 0..40 {
                let rho_lo = (1.0 - 2.0 * (1.0 - rw)).max(0.0);
                let rho = rho_lo + (0.9999 - rho_lo) * (ir as f64 + 0.5) / 40.0;
                for ja in 0..40 {
                    let al = aw - (1.0 - rw) + 2.0 * (1.0 - rw) * (ja as f64 + 0.5) / 40.0;
                    let z = from_polar(rho, al, i);
                    let v = k.eval(z).norm() * (1.0 - rw * rw);
                    min_scaled = min_scaled.min(v);
                }
            }
            assert!(
                min_scaled > 0.25,
                "normalized kernel dipped to {min_scaled} at |w|={rw}"
            );
        }
    }

    #[test]
    fn moebius_ratio_examples() {
        let i = ImaginaryUnit::i();
        let w = SlicePoint::new(0.3, 0.4, i);
        let origin = SlicePoint::new(0.0, 0.0, i);
        assert!((moebius_ratio(&w, &origin).unwrap() - 1.0).abs() < 1e-15);

        let wr = SlicePoint::new(0.6, 0.0, i);
        let z = SlicePoint::new(0.2, 0.5, i);
        assert!((moebius_ratio(&wr, &z).unwrap() - 1.0).abs() < 1e-15);

        // Pole at z w = 1 is rejected.
        let w1 = SlicePoint::new(0.8, 0.0, i);
        let z1 = SlicePoint::new(1.0 / 0.8, 0.0, i);
        assert!(matches!(moebius_ratio(&w1, &z1), Err(Error::MoebiusPole)));

        let zj = SlicePoint::new(0.2, 0.5, ImaginaryUnit::j());
        assert!(matches!(
            moebius_ratio(&w, &zj),
            Err(Error::SliceMismatch(_))
        ));

        // Slice sign normalization: -I with -y is the same point.
        let same = SlicePoint::new(0.2, -0.5, -i);
        assert!(
            (moebius_ratio(&w, &same).unwrap() - moebius_ratio(&w, &z).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn moebius_sweep_stays_in_a_two_sided_band() {
        let sweep = moebius_sweep(&default_moebius_radii(), 16, 100, 100);
        assert!(sweep.min_ratio > 0.0);
        let c = sweep.constant();
        assert!(c < 100.0, "empirical constant {c} too large");
        assert!(c > 1.0);
    }

    #[test]
    fn slicewise_two_stage_integration_agrees() {
        // For a real-coefficient symbol the density is slice-independent, so
        // μ_b factors through (x, y) ⊗ uniform units and a separable
        // integrand splits into the product of the two stages.
        let b = TruncatedSeries::from_real_coeffs(&[0.0, 1.0, 0.3, -0.2]);
        let n = 200_000;
        let mu = mu_b_sample(&b, n, 77);
        let g = |q: Quaternion| q.re() * q.re() + q.im_norm();
        let h = |q: Quaternion| 1.0 + 0.5 * q.x1 / q.im_norm().max(1e-300);

        let joint = mu.integrate(|q| g(q) * h(q));
        let left = mu.integrate(g);
        let mean_h: f64 = mu
            .points()
            .iter()
            .map(|&q| h(q))
            .sum::<f64>()
            / n as f64;
        let err = (joint - left * mean_h).abs();
        assert!(
            err < 0.02 * left.abs().max(1.0),
            "two-stage mismatch: joint {joint} vs {}",
            left * mean_h
        );
    }

    #[test]
    fn csv_round_and_atoms() {
        let mu = MeasureSample::new(
            vec![Quaternion::new(0.1, 0.2, 0.0, 0.0)],
            vec![0.5],
            SampleMeta {
                generator: "unit".into(),
                seed: 1,
                n_points: 1,
            },
        )
        .with_real_atoms(&[(0.25, 2.0)]);
        assert_eq!(mu.len(), 2);
        assert!((mu.total_mass() - 2.5).abs() < 1e-15);
        let mut buf = Vec::new();
        mu.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x0,x1,x2,x3,weight\n"));
        assert_eq!(text.lines().count(), 3);

        let dir = tempfile::tempdir().unwrap();
        mu.write_files(dir.path(), "cloud").unwrap();
        let sidecar = std::fs::read_to_string(dir.path().join("cloud.meta.json")).unwrap();
        let meta: SampleMeta = serde_json::from_str(&sidecar).unwrap();
        assert_eq!(meta.generator, "unit");
        assert_eq!(meta.seed, 1);
    }
}
