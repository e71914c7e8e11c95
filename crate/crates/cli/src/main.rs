use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hesslab::commands::{parse_subset, parse_weight, AnalyzeOptions, VerifyOptions};
use hesslab::{analyze, kahler, verify, Cache, CliError, CliResult, Context, Format, Render};
use hesslab_core::gkm::default_weight;
use hesslab_core::hessenberg::HessenbergFunction;
use hesslab_core::springer::SpringerConvention;

/// Dot-action characters, Springer support and Kähler package checks for
/// regular semisimple Hessenberg varieties in type A.
#[derive(Parser)]
#[command(name = "hesslab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers, graded multiplicities, λ_H and support checks for one h.
    Analyze {
        /// Hessenberg function as comma-separated values, e.g. 2,3,3.
        #[arg(long)]
        h: HessenbergFunction,
        /// Also count Betti numbers on the moment graph (n ≤ 5).
        #[arg(long)]
        gkm: bool,
        /// Cross-check the sampled λ_H against the exact chain shape (n ≤ 5).
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep every Hessenberg function of size n.
    Verify {
        #[arg(long)]
        n: usize,
        /// Only functions with h(i) > i for i < n.
        #[arg(long)]
        indecomposable: bool,
        /// Largest n at which moment-graph Betti numbers are compared.
        #[arg(long, default_value_t = 5)]
        gkm_max_n: usize,
        /// Match irreducible λ with orbit λ instead of its conjugate; expected to fail.
        #[arg(long)]
        convention_control: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Poincaré duality, hard Lefschetz and Hodge–Riemann on W_J invariants (n ≤ 4).
    Kahler {
        #[arg(long)]
        h: HessenbergFunction,
        /// Simple reflections generating W_J, e.g. 1,2; empty for the trivial group.
        #[arg(long = "J", default_value = "")]
        j: String,
        /// Strictly decreasing weight, e.g. 1,0,-1; defaults to n−1, …, 0.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, env = "HESSLAB_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long)]
    timing: bool,
    /// Lift the cost guards on n.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Table => Format::Table,
        }
    }
}

impl Common {
    fn context(&self) -> Context {
        let cache = self.cache_dir.as_ref().map_or_else(Cache::disabled, Cache::at);
        Context { seed: self.seed, cache, force: self.force, timing: self.timing }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn in_pool<T: Send>(&self, f: impl FnOnce() -> CliResult<T> + Send) -> CliResult<T> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            if j == 0 {
                return Err(CliError::Usage("--jobs must be positive".into()));
            }
            builder = builder.num_threads(j);
        }
        let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(f)
    }
}

/// Writes the report, then maps violations to exit code 3.
fn finish(common: &Common, report: &impl Render, witnesses: Vec<String>) -> CliResult<ExitCode> {
    common.emit(&report.render(common.format.into()))?;
    if witnesses.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for w in &witnesses {
        eprintln!("violation: {w}");
    }
    Ok(ExitCode::from(3))
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Analyze { h, gkm, symbolic, common } => {
            let ctx = common.context();
            let opts = AnalyzeOptions { gkm, symbolic, ..AnalyzeOptions::default() };
            let report = common.in_pool(|| analyze(&ctx, &h, opts))?;
            let witnesses = report.violations.iter().map(|w| format!("{} [{}] {}", w.h, w.check, w.detail)).collect();
            finish(&common, &report, witnesses)
        }
        Command::Verify { n, indecomposable, gkm_max_n, convention_control, common } => {
            let ctx = common.context();
            let convention =
                if convention_control { SpringerConvention::Unconjugated } else { SpringerConvention::Fourier };
            let opts = VerifyOptions { n, indecomposable_only: indecomposable, gkm_max_n, convention };
            let report = common.in_pool(|| verify(&ctx, opts))?;
            let witnesses = report.violations.iter().map(|w| format!("{} [{}] {}", w.h, w.check, w.detail)).collect();
            finish(&common, &report, witnesses)
        }
        Command::Kahler { h, j, lambda, common } => {
            let ctx = common.context();
            let n = h.n();
            let j = parse_subset(&j, n)?;
            let lambda = match lambda {
                Some(s) => parse_weight(&s, n)?,
                None => default_weight(n),
            };
            let report = common.in_pool(|| kahler(&ctx, &h, &j, &lambda))?;
            let witnesses = report.witnesses.clone();
            finish(&common, &report, witnesses)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
