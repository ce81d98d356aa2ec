//! `qnehari`: run one experiment and write `report.csv`, `report.json` and
//! `plotdata/*.csv` under the output directory.
//!
//! Exit codes: 0 success, 1 configuration error, 2 partial report (at least
//! one quantity errored).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use qnehari::lab::{load_config, run_experiment, ExperimentKind, LabConfig, SymbolSpec};
use qnehari::operators::{hankel_matrix, mult_matrix, HankelSymbolPair, QuatMatrix};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentArg {
    /// Hankel norm vs bilinear sup vs BMOA vs Carleson constants.
    Theorem1,
    /// Multiplication-operator norm ladder vs the boundary sup norm.
    #[value(name = "theoremA", alias = "theorema")]
    TheoremA,
    /// Reproducing-kernel-thesis probe.
    Rkt,
    /// Fast internal consistency battery.
    Selftest,
}

impl From<ExperimentArg> for ExperimentKind {
    fn from(a: ExperimentArg) -> Self {
        match a {
            ExperimentArg::Theorem1 => ExperimentKind::Theorem1,
            ExperimentArg::TheoremA => ExperimentKind::TheoremA,
            ExperimentArg::Rkt => ExperimentKind::Rkt,
            ExperimentArg::Selftest => ExperimentKind::Selftest,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qnehari", version, about = "Quaternionic Hardy-space laboratory")]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: ExperimentArg,

    /// JSON configuration file; flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Symbol shorthand, e.g. `geometric:0.5`, `random_poly:32:7`,
    /// `monomial:3`, `kernel:0.5,0.3,0,0`, `lacunary:2`, `zero`.
    #[arg(long)]
    symbol: Option<String>,

    /// Master seed for every sampled quantity.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for report.csv / report.json / plotdata.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated truncation ladder, e.g. `32,64,128`.
    #[arg(long)]
    ladder: Option<String>,

    /// Also dump the dense operator matrix at the smallest ladder size as
    /// CSV of 4-component entries (debug aid).
    #[arg(long)]
    dump_matrices: bool,
}

fn build_config(cli: &Cli) -> qnehari::Result<LabConfig> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => LabConfig::default(),
    };
    if let Some(text) = &cli.symbol {
        cfg.symbol = SymbolSpec::parse(text)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(ladder) = &cli.ladder {
        cfg.ladder = ladder
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| qnehari::Error::Config(format!("bad ladder entry `{p}`")))
            })
            .collect::<qnehari::Result<_>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dump_matrix(m: &QuatMatrix, path: &std::path::Path) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "row,col,x0,x1,x2,x3")?;
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let q = m.get(r, c);
            writeln!(
                out,
                "{r},{c},{:.17e},{:.17e},{:.17e},{:.17e}",
                q.x0, q.x1, q.x2, q.x3
            )?;
        }
    }
    Ok(())
}

fn dump_debug_matrices(kind: ExperimentKind, cfg: &LabConfig) -> std::io::Result<()> {
    let b = cfg.symbol.build().expect("validated symbol");
    let n = *cfg.ladder.first().expect("validated ladder");
    let dir = cfg.out_dir.join("debug");
    std::fs::create_dir_all(&dir)?;
    match kind {
        ExperimentKind::Theorem1 | ExperimentKind::Rkt => {
            let pair = HankelSymbolPair::from_series(&b, 2 * n - 1);
            if let Ok(m) = hankel_matrix(pair.alpha(), n) {
                dump_matrix(&m, &dir.join(format!("hankel_N{n}.csv")))?;
            }
        }
        ExperimentKind::TheoremA => {
            dump_matrix(&mult_matrix(&b, n), &dir.join(format!("mult_N{n}.csv")))?;
        }
        ExperimentKind::Selftest => {}
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(1);
        }
    };
    let kind = ExperimentKind::from(cli.experiment);

    let report = match run_experiment(kind, &cfg) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = report.write(&cfg.out_dir) {
        eprintln!("cannot write report under {}: {e}", cfg.out_dir.display());
        return ExitCode::from(1);
    }
    if cli.dump_matrices {
        if let Err(e) = dump_debug_matrices(kind, &cfg) {
            eprintln!("cannot dump matrices: {e}");
            return ExitCode::from(1);
        }
    }

    for q in &report.quantities {
        match (&q.value, &q.message) {
            (Some(v), _) => println!("{:<32} {v:.6e} [{}]", q.quantity, q.status),
            (None, Some(msg)) => println!("{:<32} error: {msg}", q.quantity),
            (None, None) => println!("{:<32} error", q.quantity),
        }
    }
    println!(
        "report written to {}",
        cfg.out_dir.join("report.csv").display()
    );

    if report.has_errors() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
