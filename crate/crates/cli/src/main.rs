use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "stablecoh", version, about = "Mod-p cohomology of small p-groups and stable elements over categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Suppress progress lines on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
enum Command {
    /// Betti numbers, optional bar-complex check and cup products.
    Cohomology(CohomologyArgs),
    /// Dimensions and bases of the limit over a category.
    Stable(CategoryArgs),
    /// Cohomology dimensions and presentation of the graph-of-groups group.
    Gamma(GammaArgs),
    /// Finite quotient into the symmetric group on the ambient group.
    Quotient(QuotientArgs),
    /// Conjugating permutation for one injective homomorphism.
    Conjugator(ConjugatorArgs),
    /// Fixed spaces of matrix groups on polynomials and Dickson generators.
    Invariants(InvariantArgs),
    /// Degreewise module generators over the limit subring.
    Finiteness(FinitenessArgs),
    /// Validates a category and prints it in the file format.
    Category(CategoryArgs),
    /// Lists catalog groups and category presets.
    Catalog,
}

#[derive(Args, Debug, Serialize)]
struct CohomologyArgs {
    /// Catalog group name.
    #[arg(long)]
    group: String,
    #[arg(long)]
    prime: Option<u32>,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    /// Cross-check against the bar complex (groups of order at most 8, degrees at most 4).
    #[arg(long)]
    oracle: bool,
    /// Include products of basis classes.
    #[arg(long)]
    cup: bool,
}

#[derive(Args, Debug, Serialize, Clone)]
struct CategoryArgs {
    /// Category preset: cu, aut, identity, dickson-<n> or user.
    #[arg(long)]
    preset: Option<String>,
    /// Category file (JSON); implies the user preset.
    #[arg(long)]
    category: Option<PathBuf>,
    /// Catalog group for group-based presets.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    prime: Option<u32>,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
}

#[derive(Args, Debug, Serialize)]
struct GammaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    input: CategoryArgs,
    /// Write the presentation in text form to this path.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct QuotientArgs {
    #[command(flatten)]
    #[serde(flatten)]
    input: CategoryArgs,
    /// Largest image order enumerated.
    #[arg(long, default_value_t = stablecoh::gamma::DEFAULT_QUOTIENT_CAP)]
    order_cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct ConjugatorArgs {
    #[arg(long)]
    group: String,
    /// Generator images, e.g. "a:b,b:a"; images are words in the group's generator letters.
    #[arg(long)]
    phi: String,
    /// Generators of a subgroup used as the domain (cycle notation, repeatable).
    #[arg(long = "subgroup-gen")]
    subgroup_gen: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MatrixGroupKind {
    Gl,
    Swap,
    Trivial,
}

#[derive(Args, Debug, Serialize)]
struct InvariantArgs {
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value_t = MatrixGroupKind::Gl)]
    subgroup: MatrixGroupKind,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    /// Also compare with the limit over the one-object category.
    #[arg(long)]
    compare: bool,
}

#[derive(Args, Debug, Serialize)]
struct FinitenessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    input: CategoryArgs,
    /// Number of top degrees watched for new generators.
    #[arg(long, default_value_t = stablecoh::stable::DEFAULT_WINDOW)]
    window: usize,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    config: RunConfig<'a>,
    report: Value,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    #[serde(flatten)]
    command: &'a Command,
    format: Format,
    deterministic: bool,
}

/// Outcome of a subcommand: the report and whether its self-checks held.
pub struct Outcome {
    pub report: Value,
    pub checks_passed: bool,
}

pub struct Progress {
    quiet: bool,
}

impl Progress {
    pub fn line(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("stablecoh: {}", msg.as_ref());
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("STABLECOH_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn render_text(value: &Value, out: &mut String, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, out, indent + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            out.push_str(&format!("{pad}  -\n"));
                            render_text(item, out, indent + 2);
                        }
                    }
                    Value::String(s) if s.contains('\n') => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    other => out.push_str(&format!("{pad}{k}: {other}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let progress = Progress { quiet: cli.quiet };
    let result = match &cli.command {
        Command::Cohomology(a) => commands::cohomology(a, &progress),
        Command::Stable(a) => commands::stable(a, &progress),
        Command::Gamma(a) => commands::gamma(a, &progress),
        Command::Quotient(a) => commands::quotient(a, &progress),
        Command::Conjugator(a) => commands::conjugator(a),
        Command::Invariants(a) => commands::invariants(a, &progress),
        Command::Finiteness(a) => commands::finiteness(a, &progress),
        Command::Category(a) => commands::category(a),
        Command::Catalog => commands::catalog(),
    };
    match result {
        Ok(outcome) => {
            let envelope = Envelope {
                tool: "stablecoh",
                version: env!("CARGO_PKG_VERSION"),
                config: RunConfig { command: &cli.command, format: cli.format, deterministic: true },
                report: outcome.report,
            };
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&envelope).expect("reports serialize") + "\n",
                Format::Text => {
                    let mut out = String::new();
                    render_text(&serde_json::to_value(&envelope).expect("reports serialize"), &mut out, 0);
                    out
                }
            };
            // a closed pipe downstream is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if outcome.checks_passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("stablecoh: a self-check failed; see the report");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_consistency() { 2 } else { 1 })
        }
    }
}
