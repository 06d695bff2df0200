use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use chargemagic::analytics::{
    analytic_moments, asymptotic_prediction, haar_mean_sp2, mean_sp2, mean_sp2_tilted, neg_log2, to_f64,
};
use chargemagic::harness::{self, parse_frame, ExperimentConfig, ExperimentKind, Histogram, OutputFormat};
use chargemagic::sampler::SamplingPath;
use chargemagic::sectors::{sector_dimension, Direction};
use chargemagic::{Error, Result};

#[derive(Parser)]
#[command(name = "chargemagic", version, about = "Stabilizer entropy of charge-constrained states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form ensemble quantities.
    #[command(subcommand)]
    Analytic(Analytic),
    /// Sample Haar×U(1) states and record Ξ₂, M₂ and participation entropies.
    Sample {
        #[command(flatten)]
        run: RunArgs,
        /// Also write a 200-bin Ξ₂ histogram per charge to this CSV file.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Running mean and variance of Ξ₂ against the exact moments.
    VarianceConvergence(RunArgs),
    /// Mid-spectrum eigenstates of the complex SYK model.
    Csyk(RunArgs),
    /// Mid-spectrum eigenstates of the XXZ chain with next-nearest ZZZ.
    Xxz(RunArgs),
    /// Mid-spectrum eigenstates of the mixed-field Ising chain.
    Mfim(RunArgs),
    /// Tilted-charge θ sweep.
    Mixed(RunArgs),
    /// Exact versus saddle-point `-log₂ 𝔼Ξ₂` on an (L, s) grid.
    Collapse(RunArgs),
    /// Disorder relative variance of cSYK eigenstate magic against L.
    SelfAveraging(RunArgs),
    /// Participation-entropy and Porter–Thomas checks.
    PeCheck(RunArgs),
}

#[derive(Subcommand)]
enum Analytic {
    /// Exact `𝔼Ξ₂` per sector.
    Mean(AnalyticArgs),
    /// Exact second moment and variance of Ξ₂.
    Variance(AnalyticArgs),
    /// Saddle-point coefficients at charge density s.
    Asymptotic {
        #[arg(long = "s", value_delimiter = ',', required = true, allow_hyphen_values = true)]
        s: Vec<f64>,
        /// Evaluate `m L + g` at these sizes and compare with the exact value.
        #[arg(long = "L", value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Exact mean under a tilted charge.
    Tilted {
        #[command(flatten)]
        sector: AnalyticArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<f64>,
        #[arg(long)]
        frame: Option<String>,
    },
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long = "L")]
    n_qubits: usize,
    #[arg(long = "q", allow_hyphen_values = true, value_delimiter = ',')]
    charges: Vec<i64>,
    /// Print exact rationals as well.
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Default)]
struct RunArgs {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "L")]
    n_qubits: Option<usize>,
    #[arg(long = "q", allow_hyphen_values = true, value_delimiter = ',')]
    charges: Vec<i64>,
    /// z, x, y or n(nx,ny,nz).
    #[arg(long)]
    frame: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Vec<f64>,
    /// System-size grid.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Charge-density grid.
    #[arg(long = "s", value_delimiter = ',')]
    densities: Vec<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Energy-density window |E/L| < w.
    #[arg(long)]
    window: Option<f64>,
    /// Central fraction of the spectrum.
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// direct or projection.
    #[arg(long)]
    path: Option<String>,
    /// Allow sampling up to L = 14.
    #[arg(long)]
    allow_large: bool,
    #[arg(long, allow_hyphen_values = true)]
    j1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    j2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h_x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h_l: Option<f64>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

impl RunArgs {
    fn resolve(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        c.kind = kind;
        macro_rules! take {
            ($($src:ident => $dst:expr),* $(,)?) => {
                $(if let Some(v) = self.$src { $dst = v; })*
            };
        }
        take!(
            n_qubits => c.n_qubits,
            samples => c.samples,
            realizations => c.realizations,
            seed => c.seed,
            j1 => c.xxz.j1,
            delta => c.xxz.delta,
            j2 => c.xxz.j2,
            h_b => c.xxz.h_b,
            h_x => c.xxz.h_x,
            g => c.mfim.g,
            h => c.mfim.h,
            h1 => c.mfim.h1,
            h_l => c.mfim.h_l,
        );
        if !self.charges.is_empty() {
            c.charges = self.charges.clone();
        }
        if !self.theta.is_empty() {
            c.thetas = self.theta.clone();
        }
        if !self.sizes.is_empty() {
            c.sizes = self.sizes.clone();
        }
        if !self.densities.is_empty() {
            c.densities = self.densities.clone();
        }
        if let Some(f) = &self.frame {
            c.frame = parse_frame(f)?;
        }
        if self.window.is_some() {
            c.window = self.window;
        }
        if self.fraction.is_some() {
            c.fraction = self.fraction;
            if self.window.is_none() {
                c.window = None;
            }
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        if self.out.is_some() {
            c.output = self.out.clone();
        }
        if let Some(f) = &self.format {
            c.format = f.parse()?;
        }
        if let Some(p) = &self.path {
            c.path = match p.as_str() {
                "direct" => SamplingPath::Direct,
                "projection" => SamplingPath::Projection,
                _ => return Err(Error::Config(format!("bad sampling path '{p}'"))),
            };
        }
        c.allow_large |= self.allow_large;
        Ok(c)
    }
}

fn analytic(cmd: &Analytic) -> Result<()> {
    match cmd {
        Analytic::Mean(a) | Analytic::Variance(a) => {
            let variance = matches!(cmd, Analytic::Variance(_));
            let charges = if a.charges.is_empty() { vec![0] } else { a.charges.clone() };
            for q in charges {
                let l = a.n_qubits;
                let row = if variance {
                    let m = analytic_moments(l, q)?;
                    let mut row = json!({
                        "L": l, "q": q, "d_q": sector_dimension(l, q).to_string(),
                        "mean": to_f64(&m.mean),
                        "second_moment": to_f64(&m.second_moment),
                        "variance": to_f64(&m.variance),
                    });
                    if a.exact {
                        row["variance_exact"] = json!(m.variance.to_string());
                    }
                    row
                } else {
                    let m = mean_sp2(l, q)?;
                    let mut row = json!({
                        "L": l, "q": q, "d_q": sector_dimension(l, q).to_string(),
                        "mean": to_f64(&m),
                        "neg_log2_mean": neg_log2(&m),
                        "haar_neg_log2_mean": neg_log2(&haar_mean_sp2(l)),
                    });
                    if a.exact {
                        row["mean_exact"] = json!(m.to_string());
                    }
                    row
                };
                println!("{row}");
            }
        }
        Analytic::Asymptotic { s, sizes } => {
            for &s in s {
                let p = asymptotic_prediction(s)?;
                let mut row = json!({
                    "s": s, "z": p.z, "f_star": p.f_star, "xi": p.xi, "m": p.m, "g": p.g,
                });
                for &l in sizes {
                    let q = harness::nearest_valid_charge(l, s);
                    row[format!("L{l}")] = json!({
                        "q": q,
                        "asymptotic": p.neg_log2_mean(l),
                        "exact": neg_log2(&mean_sp2(l, q)?),
                    });
                }
                println!("{row}");
            }
        }
        Analytic::Tilted { sector, theta, frame } => {
            let mut dirs: Vec<(String, Direction)> = theta
                .iter()
                .map(|&t| (format!("theta={t}"), Direction::from_theta(t)))
                .collect();
            if let Some(f) = frame {
                let f = parse_frame(f)?;
                dirs.push((f.to_string(), f.direction()));
            }
            if dirs.is_empty() {
                dirs.push(("z".into(), Direction::Z));
            }
            let charges = if sector.charges.is_empty() { vec![0] } else { sector.charges.clone() };
            for q in charges {
                for (label, d) in &dirs {
                    let m = mean_sp2_tilted(sector.n_qubits, q, d)?;
                    println!(
                        "{}",
                        json!({"L": sector.n_qubits, "q": q, "direction": label, "mean": m, "neg_log2_mean": -m.log2()})
                    );
                }
            }
        }
    }
    Ok(())
}

fn histogram_csv(summaries: &[harness::EnsembleSummary]) -> String {
    let mut s = String::from("# observable=xi2 bins=200 range=[min,max]\nL,q,bin,lo,hi,count\n");
    for e in summaries {
        let h: &Histogram = &e.xi2_histogram;
        let width = (h.hi - h.lo) / h.counts.len() as f64;
        for (i, c) in h.counts.iter().enumerate() {
            let lo = h.lo + width * i as f64;
            s.push_str(&format!(
                "{},{},{i},{},{},{c}\n",
                e.n_qubits,
                e.charge,
                harness::format_float(lo),
                harness::format_float(lo + width)
            ));
        }
    }
    s
}

fn run(cli: Cli) -> Result<()> {
    let (args, kind) = match &cli.command {
        Command::Analytic(a) => return analytic(a),
        Command::Sample { run, .. } => (run, ExperimentKind::Mean),
        Command::VarianceConvergence(r) => (r, ExperimentKind::VarianceConvergence),
        Command::Csyk(r) => (r, ExperimentKind::CsykSweep),
        Command::Xxz(r) => (r, ExperimentKind::XxzSweep),
        Command::Mfim(r) => (r, ExperimentKind::MfimSweep),
        Command::Mixed(r) => (r, ExperimentKind::MixedCharge),
        Command::Collapse(r) => (r, ExperimentKind::AsymptoticCollapse),
        Command::SelfAveraging(r) => (r, ExperimentKind::SelfAveraging),
        Command::PeCheck(r) => (r, ExperimentKind::PeCheck),
    };
    let cfg = args.resolve(kind)?;
    if args.print_config {
        print!("{}", cfg.to_text());
        return Ok(());
    }
    let hist_path = match &cli.command {
        Command::Sample { histogram, .. } => histogram.clone(),
        _ => None,
    };
    // fail on an unwritable histogram path before sampling
    if let Some(p) = &hist_path {
        std::fs::File::create(p).map_err(|e| Error::Config(format!("cannot open '{}': {e}", p.display())))?;
    }
    let out = harness::execute(&cfg)?;
    if let (Some(p), harness::ExperimentOutput::Ensemble(e)) = (&hist_path, &out) {
        std::fs::write(p, histogram_csv(&e.summaries))?;
    }
    println!("{}", out.summary_json());
    if cfg.output.is_some() && cfg.format == OutputFormat::Csv {
        log::info!("{} records written", out.records().len());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
