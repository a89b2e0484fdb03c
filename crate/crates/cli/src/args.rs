use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qcstar", version, about = "Verify and compute in quasi C*-algebra models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Model file (JSON, `"schema": 1`).
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for the checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Random samples per suite.
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    /// Order of the root or of the function class.
    #[arg(short = 'n', global = true, default_value_t = 2)]
    pub n: u32,
    /// Cauchy tolerance of the partial-product schedule.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub cauchy_tol: f64,
    /// Base of the partial-product schedule `ε_k = base^{-k}`.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub schedule_base: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A named element, given positionally or with `--element`.
#[derive(Debug, clap::Args)]
pub struct ElementArg {
    #[arg(value_name = "ELEMENT")]
    pub positional: Option<String>,
    #[arg(long = "element", value_name = "ELEMENT", conflicts_with = "positional")]
    pub flag: Option<String>,
}

impl ElementArg {
    pub fn name(&self) -> Option<&str> {
        self.positional.as_deref().or(self.flag.as_deref())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topology axioms of the grid model and the extended Gelfand laws.
    Axioms,
    /// Spectrum of a quasi-positive element.
    Spectrum {
        #[command(flatten)]
        element: ElementArg,
    },
    /// `f(a)` for a catalog function: `pow:q`, `respow:m`, `expneg`,
    /// `poly:[c0,..]` or `table:<path>`.
    Calculus {
        function: String,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Positive `n`-th root.
    Root {
        #[command(flatten)]
        element: ElementArg,
    },
    /// Partial product `a · b`.
    Product { a: String, b: String },
    /// Extended Gelfand transform of `a x + y`.
    Gelfand { a: String, x: String, y: String },
    /// GNS representations of the model's forms (point masses when none).
    Gns { forms: Vec<String> },
    /// Operator-model suites.
    Opmodel {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Seminorm inequalities on random operators and bounded sets.
    Lattice,
    /// Positivity through the resolvent `(I + A)^{-1}` and back.
    Chain,
    /// The commutant of `S^{-1}` and membership of the model's elements.
    Commutant,
    /// The product bound for the weight-function seminorm.
    Physical,
    All,
}
