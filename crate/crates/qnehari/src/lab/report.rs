//! Report containers and the flat-file emitters.
//!
//! `report.csv` carries one row per named scalar with provenance columns and
//! is byte-deterministic for a fixed configuration; `report.json` adds the
//! wall-clock timestamp and ladder curves; `plotdata/*.csv` holds the curves
//! in a form any plotting tool can ingest.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

/// One named scalar with provenance. A failed quantity keeps its row with
/// `status = error` so long runs never silently drop completed columns.
#[derive(Clone, Debug, Serialize)]
pub struct Quantity {
    pub quantity: String,
    pub value: Option<f64>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Quantity {
    pub fn ok(name: &str, value: f64, n: Option<usize>, samples: Option<usize>, seed: u64) -> Self {
        debug_assert!(value.is_finite() && value >= 0.0 || name.starts_with("log_ratio"));
        Self {
            quantity: name.into(),
            value: Some(value),
            n,
            samples,
            seed,
            status: "ok".into(),
            message: None,
        }
    }

    pub fn error(name: &str, seed: u64, message: String) -> Self {
        Self {
            quantity: name.into(),
            value: None,
            n: None,
            samples: None,
            seed,
            status: "error".into(),
            message: Some(message),
        }
    }
}

/// A small numeric table destined for `plotdata/<name>.csv`.
#[derive(Clone, Debug, Serialize)]
pub struct PlotTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlotTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabReport {
    pub experiment: String,
    pub symbol: String,
    pub seed: u64,
    pub quantities: Vec<Quantity>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub plots: Vec<PlotTable>,
    /// Seconds since the Unix epoch; kept out of the CSV so identical
    /// configurations produce identical bytes there.
    pub generated_at: u64,
}

impl LabReport {
    pub fn new(experiment: &str, symbol: String, seed: u64) -> Self {
        let generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            experiment: experiment.into(),
            symbol,
            seed,
            quantities: Vec::new(),
            plots: Vec::new(),
            generated_at,
        }
    }

    pub fn push(&mut self, q: Quantity) {
        self.quantities.push(q);
    }

    pub fn has_errors(&self) -> bool {
        self.quantities.iter().any(|q| q.status == "error")
    }

    pub fn value_of(&self, name: &str) -> Option<f64> {
        self.quantities
            .iter()
            .find(|q| q.quantity == name)
            .and_then(|q| q.value)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value,N,samples,seed,status\n");
        for q in &self.quantities {
            let value = q.value.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let n = q.n.map(|v| v.to_string()).unwrap_or_default();
            let samples = q.samples.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                q.quantity, value, n, samples, q.seed, q.status
            ));
        }
        out
    }

    /// Write `report.csv`, `report.json` and `plotdata/*.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut csv = std::fs::File::create(dir.join("report.csv"))?;
        csv.write_all(self.to_csv().as_bytes())?;
        let json = serde_json::to_string_pretty(self).expect("report serializes");
        std::fs::write(dir.join("report.json"), json)?;
        if !self.plots.is_empty() {
            let plotdir = dir.join("plotdata");
            std::fs::create_dir_all(&plotdir)?;
            for p in &self.plots {
                std::fs::write(plotdir.join(format!("{}.csv", p.name)), p.to_csv())?;
            }
        }
        Ok(())
    }
}

/// Pairwise log-ratio rows for the strictly positive quantities among
/// `names`, appended to the report.
pub fn push_log_ratios(report: &mut LabReport, names: &[&str]) {
    let seed = report.seed;
    let mut ratios = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in names.iter().skip(i + 1) {
            let (va, vb) = (report.value_of(a), report.value_of(b));
            if let (Some(x), Some(y)) = (va, vb) {
                if x > 0.0 && y > 0.0 {
                    ratios.push(Quantity::ok(
                        &format!("log_ratio_{a}_over_{b}"),
                        (x / y).ln(),
                        None,
                        None,
                        seed,
                    ));
                }
            }
        }
    }
    for r in ratios {
        report.push(r);
    }
}
