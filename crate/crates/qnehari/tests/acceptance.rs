//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them all).
//!
//! Every tolerance is pinned in code. Criterion 7 is known to fail on its
//! final bracket: the norm of the N×N Hankel section of 1/(n+1) grows only
//! logarithmically toward π and is ≈ 2.554 at N = 4096, far below the
//! asserted 3.10. The check is kept as stated rather than loosened; see the
//! README note.

use std::time::Instant;

use qnehari::bmo::{bmo_slice_norm, ArcFamily};
use qnehari::hardy::{
    h2_inner, h2_norm, h2_norm_volume, hinf_estimate, kernel, kernel_tail_bound, QuadratureSpec,
};
use qnehari::lab::{theorem1_report, LabConfig, SymbolSpec};
use qnehari::measures::{default_moebius_radii, moebius_ratio, moebius_sweep};
use qnehari::operators::{
    hankel_norm_estimate, largest_singular_value, mult_matrix, op_norm, ToeplitzOperator,
};
use qnehari::quat::{sample_units, ImaginaryUnit, Quaternion, SlicePoint};
use qnehari::series::{rep_formula, TruncatedSeries};

mod support;
use support::{rand_ball_point, rand_quat, rand_series, Rng};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_algebra_suite() {
    let start = Instant::now();
    let mut rng = Rng::new(0xa15e);
    let cases = 500;
    let mut worst_assoc = 0.0f64;
    let mut worst_conj = 0.0f64;
    let mut worst_sym = 0.0f64;
    let mut worst_inv = 0.0f64;
    for case in 0..cases {
        let deg = 1 + (case % 32);
        // Scaled coefficients keep the 1e-14 coefficient tolerances
        // meaningful for degree-32 convolutions.
        let f = rand_series(deg, 0.25, &mut rng);
        let g = rand_series(deg, 0.25, &mut rng);
        let h = rand_series(deg, 0.25, &mut rng);
        let bound = 3 * deg;

        let lhs = f.star_mul_bound(&g, bound).star_mul_bound(&h, bound);
        let rhs = f.star_mul_bound(&g.star_mul_bound(&h, bound), bound);
        for k in 0..=bound {
            worst_assoc = worst_assoc.max((lhs.coeff(k) - rhs.coeff(k)).norm());
        }

        let cl = f.star_mul_bound(&g, 2 * deg).regular_conj();
        let cr = g.regular_conj().star_mul_bound(&f.regular_conj(), 2 * deg);
        for k in 0..=2 * deg {
            worst_conj = worst_conj.max((cl.coeff(k) - cr.coeff(k)).norm());
        }

        let sym = f.symmetrize();
        for k in 0..sym.len() {
            worst_sym = worst_sym.max(sym.coeff(k).im_norm());
        }

        // |a_0| = 1, |a_n| <= 0.3 as the ★-inverse residual case requires.
        let mut coeffs = vec![Quaternion::ZERO; 13];
        let dir = rand_quat(&mut rng);
        coeffs[0] = dir * (1.0 / dir.norm());
        for c in coeffs.iter_mut().skip(1) {
            let d = rand_quat(&mut rng);
            *c = d * (0.3 * rng.uniform() / d.norm());
        }
        let fi = TruncatedSeries::new(coeffs);
        let out = fi.star_inv_checked(32).expect("unit constant coefficient");
        worst_inv = worst_inv.max(out.residual);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_assoc < 1e-13
        && worst_conj < 1e-14
        && worst_sym < 1e-13
        && worst_inv < 1e-10
        && elapsed < 10.0;
    report(
        "01 algebra suite",
        pass,
        &format!(
            "assoc {worst_assoc:.2e}, conj {worst_conj:.2e}, sym {worst_sym:.2e}, inv {worst_inv:.2e}, {elapsed:.2} s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_02_transform_oracle() {
    let mut rng = Rng::new(0x02ac);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 100 {
        let f = rand_series(6 + (checked % 8), 1.0, &mut rng);
        let g = rand_series(6 + (checked % 5), 1.0, &mut rng);
        let q = rand_quat(&mut rng) * 0.15;
        if f.eval(q).norm() <= 1e-6 {
            continue;
        }
        let bound = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
        let err = (f.eval_via_transform(&g, q) - f.star_mul_bound(&g, bound).eval(q)).norm();
        worst = worst.max(err);
        checked += 1;
    }
    let pass = worst < 1e-10;
    report(
        "02 transform-route oracle",
        pass,
        &format!("max error {worst:.2e} over 100 triples"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_representation_and_splitting() {
    let mut rng = Rng::new(0x03ac);
    let units = sample_units(2000, 31);
    let mut worst_rep = 0.0f64;
    for pair in units.chunks(2) {
        let f = rand_series(8, 1.0, &mut rng);
        let x = rng.uniform_in(-0.6, 0.6);
        let y = rng.uniform_in(0.0, 0.6);
        let (i, j) = (pair[0], pair[1]);
        let vp = f.eval(Quaternion::from_real(x) + i.as_quaternion() * y);
        let vm = f.eval(Quaternion::from_real(x) - i.as_quaternion() * y);
        let got = rep_formula(vp, vm, i, j);
        let want = f.eval(Quaternion::from_real(x) + j.as_quaternion() * y);
        worst_rep = worst_rep.max((got - want).norm());
    }

    let mut worst_split = 0.0f64;
    for u in sample_units(50, 77) {
        let v = u.perpendicular();
        let f = rand_series(10, 1.0, &mut rng);
        let pair = f.split_coeffs(u, v).expect("orthogonal units");
        let back = pair.recombine(u, v);
        for k in 0..f.len() {
            worst_split = worst_split.max((back.coeff(k) - f.coeff(k)).norm());
        }
    }
    let pass = worst_rep < 1e-12 && worst_split < 1e-14;
    report(
        "03 representation/splitting",
        pass,
        &format!("rep {worst_rep:.2e} over 1000 cases, split {worst_split:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_reproducing_kernel() {
    let mut rng = Rng::new(0x04ac);
    let n = 64;
    let mut worst_rep = 0.0f64;
    let mut tail_ok = true;
    for _ in 0..200 {
        let f = rand_series(12, 1.0, &mut rng);
        let w = rand_ball_point(0.9, &mut rng);
        let k = kernel(w, n).expect("|w| < 1");
        worst_rep = worst_rep.max((h2_inner(&f, &k) - f.eval(w)).norm());

        let exact = 1.0 / (1.0 - w.norm_sqr());
        let got = h2_norm(&k).powi(2);
        let tail = kernel_tail_bound(w, n);
        tail_ok &= exact - got >= -1e-12 && exact - got <= tail + 1e-12;
    }
    let pass = worst_rep < 1e-12 && tail_ok;
    report(
        "04 reproducing kernel",
        pass,
        &format!("reproducing error {worst_rep:.2e}, tail bound {}", if tail_ok { "held" } else { "violated" }),
    );
    assert!(pass);
}

#[test]
fn criterion_05_volume_norm_formula() {
    let mut rng = Rng::new(0x05ac);
    let quad = QuadratureSpec::default();
    let mut worst_rel = 0.0f64;
    for _ in 0..20 {
        let f = rand_series(16, 1.0, &mut rng);
        let exact = h2_norm(&f);
        let viaq = h2_norm_volume(&f, &quad);
        worst_rel = worst_rel.max((viaq - exact).abs() / exact);
    }

    let mut monotone = true;
    for _ in 0..2 {
        let f = rand_series(10, 1.0, &mut rng);
        let exact = h2_norm(&f);
        let mut level = QuadratureSpec {
            n_radial: 48,
            n_angular: 64,
            n_sphere: 16,
            seed: 7,
            r_max: 0.996,
        };
        let mut prev = f64::INFINITY;
        for _ in 0..3 {
            let err = (h2_norm_volume(&f, &level) - exact).abs();
            monotone &= err < prev;
            prev = err;
            level = level.refine();
        }
    }
    let pass = worst_rel < 0.005 && monotone;
    report(
        "05 volume norm formula",
        pass,
        &format!("worst relative error {worst_rel:.2e}, refinement monotone: {monotone}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_mult_norm_vs_hinf() {
    let mut rng = Rng::new(0x06ac);
    let mut worst_low = f64::INFINITY;
    let mut worst_high = 0.0f64;
    let mut max_elapsed = 0.0f64;
    for case in 0..10 {
        let start = Instant::now();
        let deg = 1 + (case * 7) % 16;
        let phi = rand_series(deg, 1.0, &mut rng);
        // The dense matrix operator and the convolution operator coincide;
        // cross-check once at a moderate size, then ladder with the fast one.
        if case == 0 {
            let dense = op_norm(&mult_matrix(&phi, 128)).expect("finite");
            let fast = largest_singular_value(&ToeplitzOperator::new(&phi, 128).unwrap());
            assert!((dense - fast).abs() < 1e-9 * (1.0 + dense));
        }
        let mut norm = 0.0f64;
        for n in [32usize, 64, 128, 256, 512] {
            let v = largest_singular_value(&ToeplitzOperator::new(&phi, n).unwrap());
            assert!(v >= norm - 1e-10, "ladder decreased");
            norm = v;
        }
        let hinf = hinf_estimate(&phi, 100_000, 0x06ac + case as u64);
        let ratio = norm / hinf;
        worst_low = worst_low.min(ratio);
        worst_high = worst_high.max(ratio);
        max_elapsed = max_elapsed.max(start.elapsed().as_secs_f64());
    }
    let pass = worst_low >= 0.95 && worst_high <= 1.02 && max_elapsed < 120.0;
    report(
        "06 multiplication norm vs sup norm",
        pass,
        &format!("ratios in [{worst_low:.5}, {worst_high:.5}], max {max_elapsed:.1} s/symbol"),
    );
    assert!(pass);
}

#[test]
fn criterion_07_hankel_basics() {
    // Monomial symbols: partial permutation matrices of norm exactly one.
    let mut unit_ok = true;
    for (m, u) in [
        (0usize, Quaternion::ONE),
        (3, Quaternion::new(0.5, 0.5, 0.5, 0.5)),
        (7, Quaternion::new(0.0, 0.6, 0.0, 0.8)),
    ] {
        let b = TruncatedSeries::monomial(m, u);
        for (_, v) in hankel_norm_estimate(&b, &[m + 1, 2 * m + 2, 4 * (m + 1)]).unwrap() {
            unit_ok &= (v - 1.0).abs() < 1e-12;
        }
    }
    report(
        "07a hankel monomial norms",
        unit_ok,
        "monomial symbols give norm 1 at every sufficient truncation",
    );
    assert!(unit_ok);

    // alpha(n) = 1/(n+1): monotone ladder up to N = 4096.
    let b = TruncatedSeries::from_real_coeffs(
        &(0..8192).map(|n| 1.0 / (n as f64 + 1.0)).collect::<Vec<_>>(),
    );
    let ladder = hankel_norm_estimate(&b, &[32, 64, 128, 256, 512, 1024, 2048, 4096]).unwrap();
    let mut monotone = true;
    for w in ladder.windows(2) {
        monotone &= w[1].1 >= w[0].1 - 1e-9;
    }
    report(
        "07b hankel 1/(n+1) ladder monotone",
        monotone,
        &format!("ladder {:?}", ladder.iter().map(|(n, v)| (*n, (v * 1e4).round() / 1e4)).collect::<Vec<_>>()),
    );
    assert!(monotone);

    let final_value = ladder.last().unwrap().1;
    let in_bracket = (3.10..=std::f64::consts::PI).contains(&final_value);
    report(
        "07c hankel 1/(n+1) final bracket [3.10, pi]",
        in_bracket,
        &format!(
            "final value {final_value:.6} at N = 4096; the section norm grows like pi - O(1/log N) and cannot reach 3.10 at this truncation"
        ),
    );
    assert!(
        in_bracket,
        "final Hankel ladder value {final_value:.6} is outside [3.10, pi]: finite sections of the 1/(n+1) symbol converge to pi only logarithmically (2.554 at N = 4096), so this bracket is unreachable at N = 4096"
    );
}

#[test]
fn criterion_08_theorem1_comparability() {
    let start = Instant::now();
    let mut cfg = LabConfig::default();
    let quantities = [
        "hankel_norm",
        "bmo_norm",
        "sqrt_box_constant",
        "sqrt_embedding_constant",
    ];
    let mut pooled: Vec<f64> = Vec::new();
    let mut provable_ok = true;
    for seed in 0..20u64 {
        cfg.symbol = SymbolSpec::RandomPoly { deg: 32, seed };
        cfg.seed = seed + 1;
        let b = cfg.symbol.build().unwrap();
        let rep = theorem1_report(&b, &cfg);
        assert!(!rep.has_errors(), "symbol {seed} errored");
        let vals: Vec<f64> = quantities
            .iter()
            .map(|q| rep.value_of(q).expect("present"))
            .collect();
        for (i, a) in vals.iter().enumerate() {
            for b in vals.iter().skip(i + 1) {
                pooled.push((a / b).ln());
            }
        }
        let hank = rep.value_of("hankel_norm").unwrap();
        let bl = rep.value_of("bilinear_sup").unwrap();
        provable_ok &= bl <= hank + 1e-9;
    }
    let width = pooled.iter().cloned().fold(f64::MIN, f64::max)
        - pooled.iter().cloned().fold(f64::MAX, f64::min);
    let elapsed = start.elapsed().as_secs_f64();
    let pass = width <= 50f64.ln() && provable_ok && elapsed < 900.0;
    report(
        "08 theorem1 comparability window",
        pass,
        &format!(
            "log-ratio window {width:.3} (limit {:.3}), bilinear<=hankel on all: {provable_ok}, {elapsed:.0} s",
            50f64.ln()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_bmo_slice_bounds() {
    let mut rng = Rng::new(0x09ac);
    let fam = ArcFamily::dyadic(6, 64);
    let slices = sample_units(64, 0x51ce);
    let mut worst_pair = 0.0f64;
    for case in 0..50 {
        let f = rand_series(4 + (case % 13), 1.0, &mut rng);
        let norms: Vec<f64> = slices
            .iter()
            .map(|&u| bmo_slice_norm(&f, u, &fam).expect("valid family"))
            .collect();
        let hi = norms.iter().cloned().fold(0.0f64, f64::max);
        let lo = norms.iter().cloned().fold(f64::MAX, f64::min);
        worst_pair = worst_pair.max(hi / lo);
    }
    // J-norm <= 2 * I-norm * (1 + 5% sampling slack) for every ordered pair.
    let pass = worst_pair <= 2.0 * 1.05;
    report(
        "09 bmo slice two-sided bound",
        pass,
        &format!("worst slice-norm ratio {worst_pair:.4} (limit 2.1) over 50 polys x 64 slices"),
    );
    assert!(pass);
}

#[test]
fn criterion_10_moebius_sweep() {
    let sweep = moebius_sweep(&default_moebius_radii(), 16, 200, 200);
    let c = sweep.constant();

    let i = ImaginaryUnit::i();
    let mut exact_ok = true;
    let mut rng = Rng::new(0x10ac);
    for _ in 0..100 {
        let w = SlicePoint::new(rng.uniform_in(-0.9, 0.9), rng.uniform_in(0.0, 0.9), i);
        let z0 = SlicePoint::new(0.0, 0.0, i);
        exact_ok &= moebius_ratio(&w, &z0).unwrap() == 1.0;
        let wr = SlicePoint::new(rng.uniform_in(-0.99, 0.99), 0.0, i);
        let z = SlicePoint::new(rng.uniform_in(-0.6, 0.6), rng.uniform_in(0.0, 0.6), i);
        exact_ok &= moebius_ratio(&wr, &z).unwrap() == 1.0;
    }
    let pass = c < 100.0 && exact_ok;
    report(
        "10 moebius ratio sweep",
        pass,
        &format!(
            "ratio in [{:.4}, {:.4}], c = {c:.3} < 100, degenerate cases exactly 1: {exact_ok}",
            sweep.min_ratio, sweep.max_ratio
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_report_determinism() {
    let mut cfg = LabConfig {
        symbol: SymbolSpec::RandomPoly { deg: 16, seed: 4 },
        ladder: vec![8, 16, 32],
        arc_levels: 4,
        ..LabConfig::default()
    };
    cfg.mc.measure_points = 20_000;
    cfg.mc.boundary_samples = 5_000;
    cfg.mc.slices = 4;
    cfg.mc.random_test_fns = 8;
    cfg.validate().unwrap();
    let b = cfg.symbol.build().unwrap();

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    theorem1_report(&b, &cfg).write(dir_a.path()).unwrap();
    theorem1_report(&b, &cfg).write(dir_b.path()).unwrap();

    let bytes_a = std::fs::read(dir_a.path().join("report.csv")).unwrap();
    let bytes_b = std::fs::read(dir_b.path().join("report.csv")).unwrap();
    let plots_a = std::fs::read(dir_a.path().join("plotdata/hankel_ladder.csv")).unwrap();
    let plots_b = std::fs::read(dir_b.path().join("plotdata/hankel_ladder.csv")).unwrap();
    let pass = bytes_a == bytes_b && plots_a == plots_b;
    report(
        "11 report determinism",
        pass,
        &format!("report.csv {} bytes, bitwise identical: {pass}", bytes_a.len()),
    );
    assert!(pass);
}
