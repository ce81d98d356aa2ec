//! Small numerical helpers shared across modules: deterministic pairwise
//! summation and Gauss-Legendre nodes.

/// Pairwise (cascade) summation. Deterministic for a given input order and
/// much better conditioned than a running sum on long accumulations.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule on [a, b]: `panels` equal panels of
/// `nodes_per_panel` points each, returned as (nodes, weights).
pub fn composite_gauss_legendre(
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
) -> (Vec<f64>, Vec<f64>) {
    let edges: Vec<f64> = (0..=panels)
        .map(|p| a + (b - a) * p as f64 / panels as f64)
        .collect();
    paneled_gauss_legendre(&edges, nodes_per_panel)
}

/// Composite Gauss-Legendre with panel edges geometric between `a` and `b`
/// (both positive): panels concentrate near `a`, resolving integrands whose
/// scale is proportional to position, such as sums of e^{-nt}.
pub fn geometric_gauss_legendre(
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
) -> (Vec<f64>, Vec<f64>) {
    assert!(a > 0.0 && b > a);
    let ratio = b / a;
    let edges: Vec<f64> = (0..=panels)
        .map(|p| a * ratio.powf(p as f64 / panels as f64))
        .collect();
    paneled_gauss_legendre(&edges, nodes_per_panel)
}

fn paneled_gauss_legendre(edges: &[f64], nodes_per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(nodes_per_panel);
    let panels = edges.len() - 1;
    let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
    let mut weights = Vec::with_capacity(panels * nodes_per_panel);
    for p in 0..panels {
        let (lo, hi) = (edges[p], edges[p + 1]);
        let h = hi - lo;
        for (&x, &w) in xs.iter().zip(&ws) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    (nodes, weights)
}
