//! BMOA norms from boundary values: arc averages on a slice, the arc-family
//! supremum per slice, and the supremum over sampled slices.
//!
//! Arcs live on the circle modulo 2π; boundary values are taken at r = 1,
//! which is legitimate for the polynomial carriers used throughout.

use crate::numeric::{composite_gauss_legendre, pairwise_sum};
use crate::quat::{from_polar, sample_units, ImaginaryUnit, Quaternion};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A collection of arcs (start, end) with end - start in (0, 2π], plus a
/// baseline node count per arc.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct ArcFamily {
    pub arcs: Vec<(f64, f64)>,
    pub n_theta: usize,
}

impl ArcFamily {
    pub fn new(arcs: Vec<(f64, f64)>, n_theta: usize) -> Result<Self> {
        if n_theta < 8 {
            return Err(Error::TooFewArcSamples { min: 8, got: n_theta });
        }
        for &(a, b) in &arcs {
            validate_arc((a, b))?;
        }
        Ok(Self { arcs, n_theta })
    }

    /// Dyadic default: levels k = 0..=max_level with arc length 2π·2^{-k},
    /// each at 2^{k+2} rotated positions. The family is closed under the
    /// reflection a ↦ -a (mod 2π), which the slice-comparison bound uses.
    pub fn dyadic(max_level: u32, n_theta: usize) -> Self {
        let mut arcs = Vec::new();
        for k in 0..=max_level {
            let len = TWO_PI / f64::powi(2.0, k as i32);
            let positions = 1usize << (k + 2);
            for m in 0..positions {
                let start = TWO_PI * m as f64 / positions as f64;
                arcs.push((start, start + len));
            }
        }
        Self::new(arcs, n_theta.max(8)).expect("dyadic arcs are valid")
    }

    fn nodes_for(&self, len: f64, deg: usize) -> usize {
        node_budget(self.n_theta, len, deg)
    }
}

/// Node count resolving the oscillation of a degree-`deg` restriction on an
/// arc of length `len`, with a floor of 64.
fn node_budget(n_theta: usize, len: f64, deg: usize) -> usize {
    let oscillation = (len * (2.0 * deg as f64 + 2.0)).ceil() as usize;
    n_theta.max(64).max(oscillation)
}

fn validate_arc(arc: (f64, f64)) -> Result<()> {
    let len = arc.1 - arc.0;
    if !(len > 0.0 && len <= TWO_PI + 1e-12) {
        return Err(Error::DegenerateArc(len));
    }
    Ok(())
}

/// Boundary values of f on the arc at the Gauss nodes, with (nodes, weights)
/// of the rule on the raw interval.
fn arc_rule(
    f: &TruncatedSeries,
    unit: ImaginaryUnit,
    arc: (f64, f64),
    nodes: usize,
) -> (Vec<Quaternion>, Vec<f64>) {
    let panels = nodes.div_ceil(16).max(1);
    let (ts, ws) = composite_gauss_legendre(arc.0, arc.1, panels, 16);
    let values = ts
        .iter()
        .map(|&t| f.eval(from_polar(1.0, t, unit)))
        .collect();
    (values, ws)
}

/// Average boundary value (1/|a|) ∫_a f(e^{θI}) dθ.
pub fn arc_mean(f: &TruncatedSeries, unit: ImaginaryUnit, arc: (f64, f64)) -> Result<Quaternion> {
    validate_arc(arc)?;
    let len = arc.1 - arc.0;
    let deg = f.degree().unwrap_or(0);
    let nodes = node_budget(64, len, deg);
    let (values, ws) = arc_rule(f, unit, arc, nodes);
    let mut acc = Quaternion::ZERO;
    for (v, w) in values.iter().zip(&ws) {
        acc += *v * *w;
    }
    Ok(acc * (1.0 / len))
}

fn arc_mean_and_variance(
    f: &TruncatedSeries,
    unit: ImaginaryUnit,
    arc: (f64, f64),
    nodes: usize,
) -> (Quaternion, f64) {
    let len = arc.1 - arc.0;
    let (values, ws) = arc_rule(f, unit, arc, nodes);
    let mut mean = Quaternion::ZERO;
    for (v, w) in values.iter().zip(&ws) {
        mean += *v * *w;
    }
    mean = mean * (1.0 / len);
    let terms: Vec<f64> = values
        .iter()
        .zip(&ws)
        .map(|(v, w)| (*v - mean).norm_sqr() * *w)
        .collect();
    (mean, pairwise_sum(&terms) / len)
}

/// Mean-oscillation norm of the boundary restriction to one slice: the max
/// over the family of ((1/|a|) ∫_a |f - f_{I,a}|²)^{1/2}. A lower bound for
/// the supremum over all arcs.
pub fn bmo_slice_norm(f: &TruncatedSeries, unit: ImaginaryUnit, fam: &ArcFamily) -> Result<f64> {
    if fam.arcs.is_empty() {
        return Err(Error::EmptyInput("arc family"));
    }
    if fam.n_theta < 8 {
        return Err(Error::TooFewArcSamples { min: 8, got: fam.n_theta });
    }
    let deg = f.degree().unwrap_or(0);
    let mut best = 0.0f64;
    for &arc in &fam.arcs {
        validate_arc(arc)?;
        let nodes = fam.nodes_for(arc.1 - arc.0, deg);
        let (_, var) = arc_mean_and_variance(f, unit, arc, nodes);
        best = best.max(var);
    }
    Ok(best.sqrt())
}

/// sup over slices of the slice norm, sampled: the canonical i-slice is
/// always included alongside `n_slices` seeded units.
pub fn bmo_norm(
    f: &TruncatedSeries,
    n_slices: usize,
    fam: &ArcFamily,
    seed: u64,
) -> Result<f64> {
    let mut best = bmo_slice_norm(f, ImaginaryUnit::i(), fam)?;
    for u in sample_units(n_slices, seed) {
        best = best.max(bmo_slice_norm(f, u, fam)?);
    }
    Ok(best)
}

/// Per-slice norms as CSV rows `slice_x1,slice_x2,slice_x3,bmo` (debug dump).
pub fn slice_norms_csv(
    f: &TruncatedSeries,
    units: &[ImaginaryUnit],
    fam: &ArcFamily,
) -> Result<String> {
    let mut out = String::from("slice_x1,slice_x2,slice_x3,bmo\n");
    for &u in units {
        let [x1, x2, x3] = u.components();
        let v = bmo_slice_norm(f, u, fam)?;
        out.push_str(&format!("{x1:.17e},{x2:.17e},{x3:.17e},{v:.12e}\n"));
    }
    Ok(out)
}
