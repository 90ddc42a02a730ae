mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Analyses of characteristic time operators built from a Hamiltonian
/// spectrum: summability checks, truncation export, commutation-relation
/// verification, spectral and deficiency diagnostics, and kernel identities.
#[derive(Parser)]
#[command(name = "chronolab", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summability condition report (JSON)
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Partial-sum horizon N
        #[arg(long)]
        horizon: usize,
        /// Which condition: inverse-square | hilbert-schmidt
        #[arg(long, default_value = "inverse-square")]
        condition: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Attach wall times (breaks byte-identical reruns)
        #[arg(long)]
        timings: bool,
    },
    /// Build a truncation and export it in Matrix Market format plus sidecar
    Build {
        #[arg(long)]
        config: PathBuf,
        /// Number of energy levels kept
        #[arg(short = 'N', long = "levels")]
        n: usize,
        /// Diagonal perturbation: constant:<tau> | square-summable:<a>,<q> | custom:<v1>,<v2>,...
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the canonical-domain generator suite and verify the commutation law
    Ccr {
        #[arg(long)]
        config: PathBuf,
        /// Generator horizon L
        #[arg(short = 'L', long = "horizon")]
        l: usize,
        /// Force exact rational arithmetic
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Eigenvalue study of truncations over a horizon list (CSV)
    #[command(name = "spectrum-of-T")]
    SpectrumOfT {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated increasing horizons, e.g. -N 25,50,100
        #[arg(short = 'N', long = "levels", value_delimiter = ',')]
        n: Vec<usize>,
        /// Number of leading eigenvalues per row
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rectangular deficiency-equation probe (JSON)
    Deficiency {
        #[arg(long)]
        config: PathBuf,
        /// Support horizon N (columns)
        #[arg(short = 'N', long = "levels")]
        n: usize,
        /// Row horizon R > N; defaults to 3N
        #[arg(short = 'R', long = "rows")]
        r: Option<usize>,
        /// + or -
        #[arg(long)]
        sign: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Hilbert-Schmidt kernel identity by quadrature (JSON)
    KernelCheck {
        #[arg(long)]
        config: PathBuf,
        /// Kernel truncation N
        #[arg(short = 'N', long = "levels")]
        n: usize,
        /// Gauss-Legendre nodes per axis
        #[arg(long)]
        nodes: usize,
        /// Domain length of the sine basis
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        /// Write the kernel on the quadrature grid as CSV (q, q', Re K, Im K)
        #[arg(long)]
        dump_grid: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Build K seeded perturbed operators and re-verify the commutation law
    ClassGen {
        #[arg(long)]
        config: PathBuf,
        /// Truncation horizon for the matrix route
        #[arg(short = 'N', long = "levels")]
        n: usize,
        /// Generator horizon L
        #[arg(short = 'L', long = "horizon")]
        l: usize,
        /// Family size
        #[arg(short = 'K', long = "count")]
        count: usize,
        /// Base perturbation the seeded family rescales
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
}

/// A must-pass assertion failed; carries the machine-parseable id.
#[derive(Debug)]
pub struct AnalysisFailure(pub String);

impl std::fmt::Display for AnalysisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "assertion failed: {}", self.0)
    }
}

impl std::error::Error for AnalysisFailure {}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CHRONOLAB_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let config_error = err
                .downcast_ref::<chronolab_core::Error>()
                .is_some_and(|e| matches!(e, chronolab_core::Error::Config { .. }));
            if config_error {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Check {
            config,
            horizon,
            condition,
            out,
            timings,
        } => commands::check(&config, horizon, &condition, out.as_deref(), timings),
        Command::Build {
            config,
            n,
            alpha,
            out,
        } => commands::build(&config, n, alpha.as_deref(), &out),
        Command::Ccr {
            config,
            l,
            exact,
            out,
            timings,
        } => commands::ccr(&config, l, exact, out.as_deref(), timings),
        Command::SpectrumOfT {
            config,
            n,
            top,
            out,
        } => commands::spectrum_of_t(&config, &n, top, out.as_deref()),
        Command::Deficiency {
            config,
            n,
            r,
            sign,
            out,
            timings,
        } => commands::deficiency(
            &config,
            n,
            r.unwrap_or(3 * n),
            &sign,
            out.as_deref(),
            timings,
        ),
        Command::KernelCheck {
            config,
            n,
            nodes,
            length,
            dump_grid,
            out,
            timings,
        } => commands::kernel_check(
            &config,
            n,
            nodes,
            length,
            dump_grid.as_deref(),
            out.as_deref(),
            timings,
        ),
        Command::ClassGen {
            config,
            n,
            l,
            count,
            alpha,
            out,
            timings,
        } => commands::class_gen(&config, n, l, count, &alpha, out.as_deref(), timings),
    }
}
