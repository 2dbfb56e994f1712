use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use corona_lab::quadrature::DEFAULT_NODES;

#[derive(Debug, Parser)]
#[command(name = "corona-lab", version, about = "Blaschke products, representing measures and corona Bezout certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Run the module's invariant suite and report pass/fail counts.
    #[arg(long)]
    pub selftest: bool,
    /// Seed for every randomized verification grid.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Quadrature node count.
    #[arg(long, env = "CORONA_LAB_NODES", default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Exact Euclid for polynomial instances, least squares otherwise.
    Auto,
    Exact,
    Numeric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a Bezout instance and write its certificate.
    CoronaSolve {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Largest polynomial degree tried by the least-squares solver.
        #[arg(long, default_value_t = 16)]
        degree_cap: usize,
        /// Residual tolerance for numeric certificates.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Re-verify a certificate on an independent seeded grid.
    CoronaCheck {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        #[arg(long, required_unless_present = "selftest")]
        cert: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Measure min Σ|f_k| over the closed-disc grid.
    Delta {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Separation diagnostics of a disc sequence.
    InterpCheck {
        /// Sequence file with `points`.
        #[arg(long = "in", conflicts_with = "points")]
        input: Option<PathBuf>,
        /// Inline points as `[[re, im], …]`.
        #[arg(long, required_unless_present_any = ["selftest", "input"])]
        points: Option<String>,
        /// Carleson constant above which the sequence counts as thin.
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a finite Blaschke product.
    BlaschkeEval {
        /// Zeros as `[[re, im], …]`.
        #[arg(long, required_unless_present = "selftest")]
        zeros: Option<String>,
        /// A point `[re, im]` or a list of points.
        #[arg(long, required_unless_present = "selftest")]
        at: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rotation: f64,
        /// Also report the modulus lower bound on |z| ≤ eta.
        #[arg(long)]
        eta: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Build the sector ladder for a zero set.
    Ladder {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample f ∘ L_j on a disc grid along a sequence.
    HoffmanTrace {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        /// Also write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// L² distance between B ∘ L_c and the identity.
    L2Identity {
        #[arg(long, required_unless_present = "selftest")]
        zeros: Option<String>,
        /// Center `[re, im]`.
        #[arg(long, required_unless_present = "selftest")]
        c: Option<String>,
        #[arg(long, default_value_t = 4096)]
        n_fft: usize,
        /// Include all Fourier coefficients in the output.
        #[arg(long)]
        coeffs: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Fit a step density to prescribed functional values.
    MeasureFit {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Quartile points of a step density.
    Quartiles {
        #[arg(long, required_unless_present = "selftest")]
        density: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Pushforward of a step density under L_c.
    Pushforward {
        #[arg(long, required_unless_present = "selftest")]
        density: Option<PathBuf>,
        #[arg(long, required_unless_present = "selftest")]
        c: Option<String>,
        /// Number of equispaced samples of the pushed-forward density.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Also write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Reweight a density so its quartile arc passes through a target midpoint.
    AlignArcs {
        #[arg(long, required_unless_present = "selftest")]
        density: Option<PathBuf>,
        #[arg(long, required_unless_present = "selftest", allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, required_unless_present = "selftest", allow_negative_numbers = true)]
        beta: Option<f64>,
        /// Ordering case: a, b or c.
        #[arg(long, required_unless_present = "selftest")]
        case: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Extract cluster values of functions along a sequence.
    ClusterScenario {
        #[arg(long = "in", required_unless_present = "selftest")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}
