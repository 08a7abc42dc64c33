//! Command-line frontend: enumeration, composition, matrices, hom-space
//! dimensions, verification suites, and diagram rendering.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage error, 3 guard
//! exceeded.

mod render;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use ncpart::{
    compose, enumerate_colored, hom_space, json, suites, to_matrix, ColoredError, ComposeError,
    CompositionResult, FiniteGroup, GammaElem, OperatorError, PartitionError, PointGroup,
};

#[derive(Parser)]
#[command(name = "ncpart", about = "Exact calculus of bi-coloured noncrossing partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Composition,
    Counting,
    Axioms,
    Fixtures,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all valid colored partitions of the given sizes
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        gamma: String,
        /// Comma-separated upper point colors (defaults to identities)
        #[arg(long)]
        upper: Option<String>,
        /// Comma-separated lower point colors (defaults to identities)
        #[arg(long)]
        lower: Option<String>,
    },
    /// Compose two partitions (q after p) and report the scalar exponent
    Compose {
        p: String,
        q: String,
        /// Also print the scaled matrix of the composite
        #[arg(long)]
        emit_matrix: bool,
    },
    /// Print the exact matrix of a partition operator
    Matrix { file: String },
    /// Dimension of the span of partition operators between two objects
    Homdim {
        #[arg(long)]
        upper: Option<String>,
        #[arg(long)]
        lower: Option<String>,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        gamma: String,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteName,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        max_kl: usize,
        #[arg(long, default_value_t = 2)]
        max_l: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Render a partition as a diagram
    Render {
        file: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: RenderFormat,
    },
}

fn parse_colors(
    gamma: &Arc<PointGroup>,
    arg: &Option<String>,
    count: usize,
) -> Result<Vec<GammaElem>, String> {
    match arg {
        None => Ok(vec![gamma.identity(); count]),
        Some(s) => {
            let parts: Vec<&str> = if s.trim().is_empty() {
                Vec::new()
            } else {
                s.split(',').map(|t| t.trim()).collect()
            };
            if parts.len() != count {
                return Err(format!("expected {count} colors, got {}", parts.len()));
            }
            parts
                .iter()
                .map(|name| gamma.parse(name).map_err(|e| e.to_string()))
                .collect()
        }
    }
}

fn guard_exceeded_compose(e: &ComposeError) -> bool {
    matches!(
        e,
        ComposeError::Partition(PartitionError::SizeLimitExceeded(_))
            | ComposeError::Operator(OperatorError::SizeLimitExceeded(_))
            | ComposeError::Matrix(ncpart::MatrixError::SizeLimitExceeded(_))
            | ComposeError::Colored(ColoredError::Partition(PartitionError::SizeLimitExceeded(_)))
    )
}

fn read_partition(path: &str) -> Result<ncpart::ColoredPartition, (String, u8)> {
    let text = std::fs::read_to_string(path).map_err(|e| (format!("{path}: {e}"), 2u8))?;
    json::from_json_str(&text).map_err(|e| (format!("{path}: {e}"), 1u8))
}

fn run() -> Result<(), (String, u8)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate { k, l, lambda, gamma, upper, lower } => {
            let lambda = FiniteGroup::from_spec(&lambda).map_err(|e| (e.to_string(), 2))?;
            let gamma = PointGroup::from_spec(&gamma).map_err(|e| (e.to_string(), 2))?;
            let up = parse_colors(&gamma, &upper, k).map_err(|m| (m, 2))?;
            let lo = parse_colors(&gamma, &lower, l).map_err(|m| (m, 2))?;
            let all = enumerate_colored(k, l, &up, &lo, &lambda, &gamma).map_err(|e| {
                let code = if matches!(
                    e,
                    ColoredError::Partition(PartitionError::SizeLimitExceeded(_))
                ) {
                    3
                } else {
                    1
                };
                (e.to_string(), code)
            })?;
            eprintln!("{} colored partitions", all.len());
            for cp in &all {
                println!("{}", json::to_json_compact(cp));
            }
            Ok(())
        }
        Command::Compose { p, q, emit_matrix } => {
            let p = read_partition(&p)?;
            let q = read_partition(&q)?;
            let result = compose(&p, &q).map_err(|e| {
                let code = if guard_exceeded_compose(&e) { 3 } else { 1 };
                (e.to_string(), code)
            })?;
            match result {
                CompositionResult::Zero => println!("zero"),
                CompositionResult::Nonzero { composed, exponent } => {
                    println!("exponent: {exponent}");
                    println!(
                        "scalar: |{}|^{} = {}",
                        composed.lambda().spec(),
                        exponent,
                        (composed.lambda().order() as u64).pow(exponent)
                    );
                    println!("{}", json::to_json(&composed));
                    if emit_matrix {
                        let scalar = ncpart::Rational64::from_integer(
                            (composed.lambda().order() as i64).pow(exponent),
                        );
                        let m = to_matrix(&composed)
                            .map_err(|e| (e.to_string(), 3))?
                            .scale(scalar);
                        print!("{}", m.dump());
                    }
                }
            }
            Ok(())
        }
        Command::Matrix { file } => {
            let cp = read_partition(&file)?;
            let m = to_matrix(&cp).map_err(|e| (e.to_string(), 3))?;
            print!("{}", m.dump());
            Ok(())
        }
        Command::Homdim { upper, lower, lambda, gamma } => {
            let lambda = FiniteGroup::from_spec(&lambda).map_err(|e| (e.to_string(), 2))?;
            let gamma = PointGroup::from_spec(&gamma).map_err(|e| (e.to_string(), 2))?;
            let up = match &upper {
                None => Vec::new(),
                Some(_) => {
                    let n = upper.as_ref().map_or(0, |s| {
                        if s.trim().is_empty() {
                            0
                        } else {
                            s.split(',').count()
                        }
                    });
                    parse_colors(&gamma, &upper, n).map_err(|m| (m, 2))?
                }
            };
            let lo = match &lower {
                None => Vec::new(),
                Some(_) => {
                    let n = lower.as_ref().map_or(0, |s| {
                        if s.trim().is_empty() {
                            0
                        } else {
                            s.split(',').count()
                        }
                    });
                    parse_colors(&gamma, &lower, n).map_err(|m| (m, 2))?
                }
            };
            let hs = hom_space(&up, &lo, &lambda, &gamma).map_err(|e| {
                let code = if guard_exceeded_compose(&e) { 3 } else { 1 };
                (e.to_string(), code)
            })?;
            println!("candidates: {}", hs.basis_candidates.len());
            println!("dimension: {}", hs.dimension);
            Ok(())
        }
        Command::Verify { suite, lambda, max_kl, max_l, seed } => {
            let lambda = FiniteGroup::from_spec(&lambda).map_err(|e| (e.to_string(), 2))?;
            let name = match suite {
                SuiteName::Composition => "composition",
                SuiteName::Counting => "counting",
                SuiteName::Axioms => "axioms",
                SuiteName::Fixtures => "fixtures",
                SuiteName::All => "all",
            };
            let reports = suites::run_suites(name, &lambda, max_kl, max_l, seed).map_err(|e| {
                let code = match &e {
                    ncpart::SuiteError::UnknownSuite(_) => 2,
                    ncpart::SuiteError::Compose(inner) if guard_exceeded_compose(inner) => 3,
                    _ => 1,
                };
                (e.to_string(), code)
            })?;
            let mut all_pass = true;
            for r in &reports {
                print!("{}", r.render());
                all_pass &= r.all_pass();
            }
            if all_pass {
                Ok(())
            } else {
                Err(("one or more suite cases failed".into(), 1))
            }
        }
        Command::Render { file, format } => {
            let cp = read_partition(&file)?;
            match format {
                RenderFormat::Ascii => print!("{}", render::render_ascii(&cp)),
                RenderFormat::Svg => print!("{}", render::render_svg(&cp)),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
