//! The experiments: Hankel-norm ladders against bilinear suprema, BMOA norms
//! and Carleson constants (norm-equivalence study), the multiplication-norm
//! versus H∞ ladder, the reproducing-kernel-thesis probe, and a selftest.
//!
//! Estimated quantities are lower bounds from finite searches and samples;
//! a failing sub-computation marks only its own row as `error`.

use crate::bmo::{bmo_norm, ArcFamily};
use crate::hardy::{hinf_estimate, kernel};
use crate::measures::{
    box_constant, default_probe_centers, embedding_constant, mu_b_sample, MeasureSample,
};
use crate::operators::{
    hankel_norm_estimate, largest_singular_value, HankelSymbolPair, ToeplitzOperator,
};
use crate::quat::{from_polar, sample_units, Quaternion};
use crate::rng::SeededRng;
use crate::series::TruncatedSeries;

use super::config::LabConfig;
use super::report::{push_log_ratios, LabReport, PlotTable, Quantity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Theorem1,
    TheoremA,
    Rkt,
    Selftest,
}

// ---------------------------------------------------------------------------
// Bilinear supremum search
// ---------------------------------------------------------------------------

type Mat4 = [[f64; 4]; 4];

fn quat_to_vec(q: Quaternion) -> [f64; 4] {
    [q.x0, q.x1, q.x2, q.x3]
}

fn vec_to_quat(v: [f64; 4]) -> Quaternion {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

/// Matrix of x ↦ a·x on the coordinates (1, i, j, k).
fn left_mat(a: Quaternion) -> Mat4 {
    let cols = [
        a * Quaternion::ONE,
        a * Quaternion::I,
        a * Quaternion::J,
        a * Quaternion::K,
    ];
    let mut m = [[0.0; 4]; 4];
    for (c, q) in cols.iter().enumerate() {
        let v = quat_to_vec(*q);
        for r in 0..4 {
            m[r][c] = v[r];
        }
    }
    m
}

/// Matrix of x ↦ x·g.
fn right_mat(g: Quaternion) -> Mat4 {
    let cols = [
        Quaternion::ONE * g,
        Quaternion::I * g,
        Quaternion::J * g,
        Quaternion::K * g,
    ];
    let mut m = [[0.0; 4]; 4];
    for (c, q) in cols.iter().enumerate() {
        let v = quat_to_vec(*q);
        for r in 0..4 {
            m[r][c] = v[r];
        }
    }
    m
}

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += a[r][k] * b[k][c];
            }
            out[r][c] = s;
        }
    }
    out
}

fn mat_tvec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    // m^T · v
    let mut out = [0.0; 4];
    for c in 0..4 {
        let mut s = 0.0;
        for r in 0..4 {
            s += m[r][c] * v[r];
        }
        out[c] = s;
    }
    out
}

/// Largest eigenpair of a symmetric 4×4 matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn sym4_top_eigen(m: &Mat4) -> (f64, [f64; 4]) {
    let mut a = *m;
    let mut v: Mat4 = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1e-300);
    for _ in 0..80 {
        // largest off-diagonal element
        let (mut p, mut q, mut big) = (0, 1, 0.0f64);
        for r in 0..4 {
            for c in (r + 1)..4 {
                if a[r][c].abs() > big {
                    big = a[r][c].abs();
                    p = r;
                    q = c;
                }
            }
        }
        if big < 1e-15 * scale {
            break;
        }
        let theta = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
        let (s, c) = theta.sin_cos();
        let mut g: Mat4 = [[0.0; 4]; 4];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        g[p][p] = c;
        g[p][q] = s;
        g[q][p] = -s;
        g[q][q] = c;
        let gt = {
            let mut t = g;
            t[p][q] = -s;
            t[q][p] = s;
            t
        };
        a = mat_mul(&gt, &mat_mul(&a, &g));
        v = mat_mul(&v, &g);
    }
    let mut best = 0;
    for i in 1..4 {
        if a[i][i] > a[best][best] {
            best = i;
        }
    }
    let mut vec = [0.0; 4];
    for r in 0..4 {
        vec[r] = v[r][best];
    }
    (a[best][best], vec)
}

fn vec_norm(v: &[Quaternion]) -> f64 {
    v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

fn gamma_apply(alpha: &[Quaternion], f: &[Quaternion]) -> Vec<Quaternion> {
    let n = f.len();
    (0..n)
        .map(|k| {
            let mut acc = Quaternion::ZERO;
            for (j, &fj) in f.iter().enumerate() {
                acc += alpha[j + k] * fj;
            }
            acc
        })
        .collect()
}

fn pairing_value(alpha: &[Quaternion], f: &[Quaternion], g: &[Quaternion]) -> Quaternion {
    let gf = gamma_apply(alpha, f);
    let mut acc = Quaternion::ZERO;
    for (u, gk) in gf.iter().zip(g) {
        acc += *u * *gk;
    }
    acc
}

/// Lower bound for sup |⟨f★g, b⟩| / (‖f‖‖g‖) over series of degree < n:
/// random search over normalized random-coefficient polynomials followed by
/// an alternating ascent. Given f, the best g is closed-form
/// (the pairing equals ⟨g, conj(Γ_α f)⟩); given g, the pairing is a
/// real-linear map of f into ℝ⁴ whose top singular pair a 4×4 Jacobi solve
/// yields. Both half-steps are monotone, so the iteration climbs.
#[allow(clippy::needless_range_loop)]
pub fn bilinear_sup(b: &TruncatedSeries, n: usize, restarts: usize, seed: u64) -> f64 {
    let deg = match b.degree() {
        Some(d) => d,
        None => return 0.0,
    };
    // Entries α(j+k) vanish for j+k > deg, so nothing outside the leading
    // (deg+1)-block can raise the ratio.
    let n = n.min(deg + 1).max(1);
    let pair = HankelSymbolPair::from_series(b, 2 * n - 1);
    let alpha = pair.alpha();

    let mut rng = SeededRng::substream(seed, 0xb111);
    let rand_vec = |len: usize, rng: &mut SeededRng| -> Vec<Quaternion> {
        (0..len)
            .map(|_| Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal()))
            .collect()
    };

    let mut best = 0.0f64;
    for _ in 0..200 {
        let f = rand_vec(n, &mut rng);
        let g = rand_vec(n, &mut rng);
        let v = pairing_value(alpha, &f, &g).norm() / (vec_norm(&f) * vec_norm(&g));
        best = best.max(v);
    }

    for _ in 0..restarts.max(1) {
        let mut f = rand_vec(n, &mut rng);
        let nf = vec_norm(&f);
        for q in &mut f {
            *q = *q * (1.0 / nf);
        }
        let mut prev = 0.0f64;
        for _ in 0..80 {
            // Optimal g for this f.
            let u = gamma_apply(alpha, &f);
            let val_g = vec_norm(&u);
            if val_g == 0.0 {
                break;
            }
            let g: Vec<Quaternion> = u.iter().map(|q| q.conj() * (1.0 / val_g)).collect();

            // Optimal f for this g via the induced real 4×(4n) map.
            let mut ls: Vec<Mat4> = Vec::with_capacity(n);
            for j in 0..n {
                let mut l = [[0.0; 4]; 4];
                for (k, gk) in g.iter().enumerate() {
                    let term = mat_mul(&left_mat(alpha[j + k]), &right_mat(*gk));
                    for r in 0..4 {
                        for c in 0..4 {
                            l[r][c] += term[r][c];
                        }
                    }
                }
                ls.push(l);
            }
            let mut mmt = [[0.0; 4]; 4];
            for l in &ls {
                for r in 0..4 {
                    for c in 0..4 {
                        let mut s = 0.0;
                        for k in 0..4 {
                            s += l[r][k] * l[c][k];
                        }
                        mmt[r][c] += s;
                    }
                }
            }
            let (lam, v) = sym4_top_eigen(&mmt);
            let val_f = lam.max(0.0).sqrt();
            f = ls.iter().map(|l| vec_to_quat(mat_tvec(l, &v))).collect();
            let nf = vec_norm(&f);
            if nf == 0.0 {
                break;
            }
            for q in &mut f {
                *q = *q * (1.0 / nf);
            }
            best = best.max(val_g).max(val_f);
            if (val_f - prev).abs() <= 1e-13 * val_f.max(1e-300) {
                break;
            }
            prev = val_f;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Experiment: Hankel norm vs BMO vs Carleson constants
// ---------------------------------------------------------------------------

/// Test functions for the embedding constant: truncated kernels anchored at
/// three radii in sampled directions, plus random polynomials.
fn embedding_test_set(n_random: usize, seed: u64) -> Vec<TruncatedSeries> {
    let mut out = Vec::new();
    let units = sample_units(8, seed.wrapping_add(0x7e57));
    for &r in &[0.5, 0.9, 0.99] {
        for (m, &u) in units.iter().enumerate() {
            let theta = std::f64::consts::PI * (m as f64 + 0.5) / units.len() as f64;
            let w = from_polar(r, theta, u);
            out.push(kernel(w, 256).expect("|w| < 1"));
        }
    }
    let mut rng = SeededRng::substream(seed, 0x7e58);
    for _ in 0..n_random {
        out.push(TruncatedSeries::random(12, 1.0, &mut rng));
    }
    out
}

fn measure_quantities(
    report: &mut LabReport,
    mu: &MeasureSample,
    test_set: &[TruncatedSeries],
    cfg: &LabConfig,
) {
    match box_constant(mu, &default_probe_centers()) {
        Ok(v) => report.push(Quantity::ok(
            "sqrt_box_constant",
            v.sqrt(),
            None,
            Some(cfg.mc.measure_points),
            cfg.seed,
        )),
        Err(e) => report.push(Quantity::error("sqrt_box_constant", cfg.seed, e.to_string())),
    }
    match embedding_constant(mu, test_set) {
        Ok(v) => report.push(Quantity::ok(
            "sqrt_embedding_constant",
            v.sqrt(),
            None,
            Some(cfg.mc.measure_points),
            cfg.seed,
        )),
        Err(e) => report.push(Quantity::error(
            "sqrt_embedding_constant",
            cfg.seed,
            e.to_string(),
        )),
    }
}

/// Norm-equivalence experiment for one symbol: Hankel ladder, bilinear
/// supremum, BMOA norm, box and embedding constants, pairwise log-ratios.
pub fn theorem1_report(b: &TruncatedSeries, cfg: &LabConfig) -> LabReport {
    let seed = cfg.seed;
    let mut report = LabReport::new("theorem1", cfg.symbol.label(), seed);
    let max_n = *cfg.ladder.last().expect("validated ladder");

    match hankel_norm_estimate(b, &cfg.ladder) {
        Ok(ladder) => {
            report.plots.push(PlotTable {
                name: "hankel_ladder".into(),
                columns: vec!["N".into(), "hankel_norm".into()],
                rows: ladder.iter().map(|&(n, v)| vec![n as f64, v]).collect(),
            });
            let &(n, v) = ladder.last().expect("nonempty ladder");
            report.push(Quantity::ok("hankel_norm", v, Some(n), None, seed));
        }
        Err(e) => report.push(Quantity::error("hankel_norm", seed, e.to_string())),
    }

    let bl = bilinear_sup(b, max_n, cfg.mc.bilinear_restarts, seed);
    report.push(Quantity::ok(
        "bilinear_sup",
        bl,
        Some(max_n),
        Some(cfg.mc.bilinear_restarts),
        seed,
    ));

    let fam = ArcFamily::dyadic(cfg.arc_levels, cfg.arc_samples);
    match bmo_norm(b, cfg.mc.slices, &fam, seed) {
        Ok(v) => report.push(Quantity::ok("bmo_norm", v, None, Some(cfg.mc.slices), seed)),
        Err(e) => report.push(Quantity::error("bmo_norm", seed, e.to_string())),
    }

    let mu = mu_b_sample(b, cfg.mc.measure_points, seed);
    let test_set = embedding_test_set(cfg.mc.random_test_fns, seed);
    measure_quantities(&mut report, &mu, &test_set, cfg);

    push_log_ratios(
        &mut report,
        &[
            "hankel_norm",
            "bilinear_sup",
            "bmo_norm",
            "sqrt_box_constant",
            "sqrt_embedding_constant",
        ],
    );
    report
}

// ---------------------------------------------------------------------------
// Experiment: multiplication norm vs H∞
// ---------------------------------------------------------------------------

/// ★-multiplication norm ladder against the boundary H∞ estimate; the ratio
/// column tends to 1 as the truncation and the sampling refine.
pub fn theorem_a_report(phi: &TruncatedSeries, cfg: &LabConfig) -> LabReport {
    let seed = cfg.seed;
    let mut report = LabReport::new("theoremA", cfg.symbol.label(), seed);

    let hinf = hinf_estimate(phi, cfg.mc.boundary_samples, seed);
    report.push(Quantity::ok(
        "hinf",
        hinf,
        None,
        Some(cfg.mc.boundary_samples),
        seed,
    ));

    let mut rows = Vec::new();
    let mut final_norm = None;
    for &n in &cfg.ladder {
        match ToeplitzOperator::new(phi, n) {
            Ok(op) => {
                let v = largest_singular_value(&op);
                let ratio = if hinf > 0.0 { v / hinf } else { f64::NAN };
                rows.push(vec![n as f64, v, hinf, ratio]);
                final_norm = Some((n, v));
            }
            Err(e) => {
                report.push(Quantity::error("mult_norm", seed, e.to_string()));
                final_norm = None;
                break;
            }
        }
    }
    if let Some((n, v)) = final_norm {
        report.push(Quantity::ok("mult_norm", v, Some(n), None, seed));
        if hinf > 0.0 {
            report.push(Quantity::ok("mult_to_hinf_ratio", v / hinf, Some(n), None, seed));
        }
        report.plots.push(PlotTable {
            name: "theorem_a_ladder".into(),
            columns: vec![
                "N".into(),
                "mult_norm".into(),
                "hinf".into(),
                "ratio".into(),
            ],
            rows,
        });
    }
    report
}

// ---------------------------------------------------------------------------
// Experiment: reproducing kernel thesis probe
// ---------------------------------------------------------------------------

/// Embedding constant tested on kernels alone versus kernels plus random
/// polynomials; the ratio is recorded as evidence, nothing is asserted.
pub fn rkt_probe(b: &TruncatedSeries, cfg: &LabConfig) -> LabReport {
    let seed = cfg.seed;
    let mut report = LabReport::new("rkt", cfg.symbol.label(), seed);
    let mu = mu_b_sample(b, cfg.mc.measure_points, seed);

    let kernels = embedding_test_set(0, seed);
    let full = embedding_test_set(cfg.mc.random_test_fns, seed);

    let mut values = [None, None];
    for (idx, (name, set)) in [("embed_kernels_only", &kernels), ("embed_full", &full)]
        .iter()
        .enumerate()
    {
        match embedding_constant(&mu, set) {
            Ok(v) => {
                values[idx] = Some(v);
                report.push(Quantity::ok(
                    name,
                    v,
                    None,
                    Some(cfg.mc.measure_points),
                    seed,
                ));
            }
            Err(e) => report.push(Quantity::error(name, seed, e.to_string())),
        }
    }
    if let (Some(k), Some(f)) = (values[0], values[1]) {
        if k > 0.0 && f > 0.0 {
            report.push(Quantity::ok("rkt_ratio", k / f, None, None, seed));
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Selftest
// ---------------------------------------------------------------------------

fn check(report: &mut LabReport, name: &str, outcome: std::result::Result<(), String>) {
    match outcome {
        Ok(()) => report.push(Quantity::ok(name, 1.0, None, None, report.seed)),
        Err(msg) => {
            let seed = report.seed;
            report.push(Quantity::error(name, seed, msg));
        }
    }
}

/// Fast internal consistency battery; failures mark rows as errors.
pub fn selftest(cfg: &LabConfig) -> LabReport {
    let mut report = LabReport::new("selftest", "builtin".into(), cfg.seed);

    check(&mut report, "star_algebra", {
        let mut rng = SeededRng::substream(cfg.seed, 1);
        let mut out = Ok(());
        for _ in 0..50 {
            let f = TruncatedSeries::random(8, 1.0, &mut rng);
            let g = TruncatedSeries::random(8, 1.0, &mut rng);
            let h = TruncatedSeries::random(8, 1.0, &mut rng);
            let lhs = f.star_mul_bound(&g, 24).star_mul_bound(&h, 24);
            let rhs = f.star_mul_bound(&g.star_mul_bound(&h, 24), 24);
            let dist = (0..=24)
                .map(|k| (lhs.coeff(k) - rhs.coeff(k)).norm())
                .fold(0.0, f64::max);
            if dist > 1e-12 {
                out = Err(format!("associativity residual {dist}"));
                break;
            }
            let sym = f.symmetrize();
            if (0..sym.len()).any(|k| sym.coeff(k).im_norm() > 1e-12) {
                out = Err("symmetrization not real".into());
                break;
            }
        }
        out
    });

    check(&mut report, "reproducing_kernel", {
        let mut rng = SeededRng::substream(cfg.seed, 2);
        let mut out = Ok(());
        for _ in 0..20 {
            let f = TruncatedSeries::random(10, 1.0, &mut rng);
            let dir = Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal());
            let w = dir * (rng.uniform_in(0.0, 0.9) / dir.norm());
            let k = kernel(w, 32).expect("|w| < 1");
            let err = (crate::hardy::h2_inner(&f, &k) - f.eval(w)).norm();
            if err > 1e-12 {
                out = Err(format!("reproducing error {err}"));
                break;
            }
        }
        out
    });

    check(&mut report, "representation_formula", {
        let mut rng = SeededRng::substream(cfg.seed, 3);
        let units = sample_units(40, cfg.seed);
        let mut out = Ok(());
        for pair in units.chunks(2) {
            let f = TruncatedSeries::random(6, 1.0, &mut rng);
            let (x, y) = (rng.uniform_in(-0.5, 0.5), rng.uniform_in(0.0, 0.5));
            let vp = f.eval(Quaternion::from_real(x) + pair[0].as_quaternion() * y);
            let vm = f.eval(Quaternion::from_real(x) - pair[0].as_quaternion() * y);
            let got = crate::series::rep_formula(vp, vm, pair[0], pair[1]);
            let want = f.eval(Quaternion::from_real(x) + pair[1].as_quaternion() * y);
            if (got - want).norm() > 1e-12 {
                out = Err(format!("representation residual {}", (got - want).norm()));
                break;
            }
        }
        out
    });

    check(&mut report, "mult_norm_vs_hinf", {
        let phi = TruncatedSeries::from_real_coeffs(&[1.0, 0.5]);
        let op = ToeplitzOperator::new(&phi, 64).expect("finite");
        let norm = largest_singular_value(&op);
        let hinf = hinf_estimate(&phi, 20_000, cfg.seed);
        if (norm / hinf - 1.0).abs() < 0.05 {
            Ok(())
        } else {
            Err(format!("ratio {} off unity", norm / hinf))
        }
    });

    check(&mut report, "csv_determinism", {
        let mut small = cfg.clone();
        small.symbol = super::SymbolSpec::RandomPoly { deg: 6, seed: 5 };
        small.ladder = vec![4, 8];
        small.mc.measure_points = 5_000;
        small.mc.boundary_samples = 2_000;
        small.mc.slices = 2;
        small.mc.random_test_fns = 4;
        small.arc_levels = 3;
        let b = small.symbol.build().expect("generator builds");
        let a = theorem1_report(&b, &small).to_csv();
        let c = theorem1_report(&b, &small).to_csv();
        if a == c {
            Ok(())
        } else {
            Err("repeated run changed bytes".into())
        }
    });

    report
}
