//! Run configuration: symbol generators, sampling budgets and output paths.
//! Loaded from UTF-8 JSON; CLI flags override individual keys.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::hardy::{kernel, QuadratureSpec};
use crate::quat::Quaternion;
use crate::rng::SeededRng;
use crate::series::{TruncatedSeries, DEFAULT_DEGREE_BOUND};
use crate::{Error, Result};

/// Named symbol generators. The suite mixes clearly bounded symbols
/// (monomial, geometric, kernel) with borderline ones (lacunary) so that
/// comparability windows are informative.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SymbolSpec {
    /// q^degree · u with |u| = 1 (defaults to 1).
    Monomial {
        degree: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<[f64; 4]>,
    },
    /// Coefficients rho^n, |rho| < 1, truncated where they underflow.
    Geometric { rho: f64 },
    /// Standard-normal quaternion coefficients up to `deg`.
    RandomPoly { deg: usize, seed: u64 },
    /// Truncated reproducing kernel k_w.
    KernelSymbol { w: [f64; 4] },
    /// Unit coefficients at the indices base^k.
    Lacunary { base: usize },
    /// The zero series.
    Zero,
}

impl SymbolSpec {
    pub fn build(&self) -> Result<TruncatedSeries> {
        match self {
            SymbolSpec::Monomial { degree, unit } => {
                let u = unit
                    .map(Quaternion::from)
                    .unwrap_or(Quaternion::ONE);
                let n = u.norm();
                if n == 0.0 {
                    return Err(Error::Config("monomial unit must be nonzero".into()));
                }
                Ok(TruncatedSeries::monomial(*degree, u * (1.0 / n)))
            }
            SymbolSpec::Geometric { rho } => {
                if rho.abs() >= 1.0 {
                    return Err(Error::Config(format!(
                        "geometric ratio must satisfy |rho| < 1, got {rho}"
                    )));
                }
                let mut coeffs = Vec::new();
                let mut p = 1.0f64;
                for _ in 0..=DEFAULT_DEGREE_BOUND {
                    coeffs.push(p);
                    p *= rho;
                    if p.abs() < 1e-16 {
                        break;
                    }
                }
                Ok(TruncatedSeries::from_real_coeffs(&coeffs))
            }
            SymbolSpec::RandomPoly { deg, seed } => {
                let mut rng = SeededRng::substream(*seed, 0x5b01);
                Ok(TruncatedSeries::random(*deg, 1.0, &mut rng))
            }
            SymbolSpec::KernelSymbol { w } => {
                let w = Quaternion::from(*w);
                kernel(w, DEFAULT_DEGREE_BOUND)
            }
            SymbolSpec::Lacunary { base } => {
                if *base < 2 {
                    return Err(Error::Config("lacunary base must be >= 2".into()));
                }
                let mut coeffs = vec![Quaternion::ZERO; DEFAULT_DEGREE_BOUND + 1];
                let mut idx = 1usize;
                while idx <= DEFAULT_DEGREE_BOUND {
                    coeffs[idx] = Quaternion::ONE;
                    idx *= base;
                }
                Ok(TruncatedSeries::new(coeffs))
            }
            SymbolSpec::Zero => Ok(TruncatedSeries::zero()),
        }
    }

    /// Short provenance label used in reports.
    pub fn label(&self) -> String {
        match self {
            SymbolSpec::Monomial { degree, .. } => format!("monomial:{degree}"),
            SymbolSpec::Geometric { rho } => format!("geometric:{rho}"),
            SymbolSpec::RandomPoly { deg, seed } => format!("random_poly:{deg}:{seed}"),
            SymbolSpec::KernelSymbol { w } => {
                format!("kernel:{},{},{},{}", w[0], w[1], w[2], w[3])
            }
            SymbolSpec::Lacunary { base } => format!("lacunary:{base}"),
            SymbolSpec::Zero => "zero".into(),
        }
    }

    /// CLI shorthand: `monomial:3[:x0,x1,x2,x3]`, `geometric:0.5`,
    /// `random_poly:32:7`, `kernel:0.5,0.3,0,0`, `lacunary:2`, `zero`.
    pub fn parse(text: &str) -> Result<SymbolSpec> {
        let mut parts = text.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let bad = |msg: &str| Error::Config(format!("symbol `{text}`: {msg}"));
        let parse_f64 = |s: &str| s.parse::<f64>().map_err(|_| bad("expected a number"));
        let parse_quad = |s: &str| -> Result<[f64; 4]> {
            let vs: Vec<f64> = s
                .split(',')
                .map(|p| p.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("expected four comma-separated numbers"))?;
            if vs.len() != 4 {
                return Err(bad("expected four components"));
            }
            Ok([vs[0], vs[1], vs[2], vs[3]])
        };
        match head {
            "monomial" => {
                if rest.is_empty() {
                    return Err(bad("missing degree"));
                }
                let degree = rest[0].parse().map_err(|_| bad("bad degree"))?;
                let unit = if rest.len() > 1 {
                    Some(parse_quad(rest[1])?)
                } else {
                    None
                };
                Ok(SymbolSpec::Monomial { degree, unit })
            }
            "geometric" => Ok(SymbolSpec::Geometric {
                rho: parse_f64(rest.first().ok_or_else(|| bad("missing ratio"))?)?,
            }),
            "random_poly" => {
                if rest.len() < 2 {
                    return Err(bad("expected random_poly:<deg>:<seed>"));
                }
                Ok(SymbolSpec::RandomPoly {
                    deg: rest[0].parse().map_err(|_| bad("bad degree"))?,
                    seed: rest[1].parse().map_err(|_| bad("bad seed"))?,
                })
            }
            "kernel" => Ok(SymbolSpec::KernelSymbol {
                w: parse_quad(rest.first().ok_or_else(|| bad("missing base point"))?)?,
            }),
            "lacunary" => Ok(SymbolSpec::Lacunary {
                base: rest
                    .first()
                    .ok_or_else(|| bad("missing base"))?
                    .parse()
                    .map_err(|_| bad("bad base"))?,
            }),
            "zero" => Ok(SymbolSpec::Zero),
            _ => Err(bad("unknown generator")),
        }
    }
}

/// Monte Carlo and search budgets.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct McSpec {
    pub measure_points: usize,
    pub boundary_samples: usize,
    pub slices: usize,
    pub bilinear_restarts: usize,
    pub random_test_fns: usize,
}

impl Default for McSpec {
    fn default() -> Self {
        Self {
            measure_points: 200_000,
            boundary_samples: 100_000,
            slices: 16,
            bilinear_restarts: 6,
            random_test_fns: 50,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct LabConfig {
    pub symbol: SymbolSpec,
    pub seed: u64,
    pub ladder: Vec<usize>,
    pub quad: QuadratureSpec,
    pub mc: McSpec,
    pub arc_levels: u32,
    pub arc_samples: usize,
    pub out_dir: PathBuf,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            symbol: SymbolSpec::RandomPoly { deg: 32, seed: 1 },
            seed: 1,
            ladder: vec![32, 64, 128, 256, 512],
            quad: QuadratureSpec::default(),
            mc: McSpec::default(),
            arc_levels: 8,
            arc_samples: 64,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl LabConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ladder.is_empty() {
            return Err(Error::Config("truncation ladder must be non-empty".into()));
        }
        if self.ladder.contains(&0) {
            return Err(Error::Config("ladder entries must be >= 1".into()));
        }
        if self.ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("ladder must be strictly increasing".into()));
        }
        if self.mc.measure_points == 0
            || self.mc.boundary_samples == 0
            || self.mc.slices == 0
            || self.mc.random_test_fns == 0
        {
            return Err(Error::Config("sample counts must be positive".into()));
        }
        if self.arc_samples < 8 {
            return Err(Error::Config("arc_samples must be >= 8".into()));
        }
        self.quad.validate()?;
        // The generator must exist and build.
        self.symbol.build()?;
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<LabConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))
}
