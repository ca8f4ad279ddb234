//! `chiral`: OPEs, normally ordered products and verification suites for
//! free-field vertex algebras.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use chiral_core::expr::{parse_expr, FieldExpr};
use chiral_core::presentation::{builtin_definitions, load_definitions, Definitions};
use chiral_core::report::VerificationReport;
use chiral_core::scalar::Level;
use chiral_core::vertex::{Field, FreeFieldAlgebra, LambdaPoly};
use chiral_core::verifier::{run_suite, verify_hom, SuiteOptions, SUITE_NAMES};

#[derive(Parser, Debug)]
#[command(name = "chiral", version, about = "Exact lambda-bracket calculator and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// `symbolic`, an integer, or `p/q`.
    #[arg(long, global = true, default_value = "symbolic", allow_hyphen_values = true)]
    level: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for the randomized axiom suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Definition file whose entries extend or replace the built-in ones.
    #[arg(long, global = true)]
    defs: Option<PathBuf>,

    /// Print only failing checks and the summary line.
    #[arg(short, long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular part of the OPE `a(z)b(w)`.
    Ope {
        a: String,
        b: String,
        /// Free-field algebra: EL, BetaGamma, BgEL or DchU.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Normally ordered product `:ab:`.
    Nprod {
        a: String,
        b: String,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Run a verification suite, or check a single named map.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite_name: Option<String>,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite: Option<String>,
        /// Verify this map from the definitions instead of a suite.
        #[arg(long, conflicts_with_all = ["suite", "suite_name"])]
        map: Option<String>,
        /// Restrict the axiom suite to one algebra.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, default_value_t = SuiteOptions::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = SuiteOptions::default().max_grading)]
        max_grading: u32,
    },
    /// Print the built-in definitions, or one named entry.
    Show { name: Option<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A usage or configuration problem; reported with exit status 2.
#[derive(Debug)]
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

struct Context {
    level: Level,
    format: Format,
    quiet: bool,
    defs: Definitions,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, ConfigError> {
    let level: Level = cli.level.parse()?;
    let defs = match &cli.defs {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
            builtin_definitions().overlay(&load_definitions(&text)?)
        }
        None => builtin_definitions().clone(),
    };
    let ctx = Context {
        level,
        format: cli.format,
        quiet: cli.quiet,
        defs,
    };
    match cli.command {
        Command::Ope { a, b, algebra } => {
            let (alg, fa, fb) = resolve_pair(&ctx, &a, &b, algebra)?;
            let p = alg.lambda_bracket(&fa, &fb)?;
            print_ope(&ctx, &alg, &p);
            Ok(true)
        }
        Command::Nprod { a, b, algebra } => {
            let (alg, fa, fb) = resolve_pair(&ctx, &a, &b, algebra)?;
            let f = alg.nprod(&fa, &fb)?;
            print_field(&ctx, &alg, &f);
            Ok(true)
        }
        Command::Verify {
            suite_name,
            suite,
            map,
            algebra,
            samples,
            max_grading,
        } => {
            let report = if let Some(m) = map {
                let h = ctx
                    .defs
                    .map(&m)
                    .ok_or_else(|| ConfigError(format!("no map named {m}")))?;
                verify_hom(h, &ctx.level)?
            } else {
                let name = suite.or(suite_name).unwrap_or_else(|| "all".into());
                let opts = SuiteOptions {
                    seed: cli.seed,
                    samples,
                    max_grading,
                    algebra,
                };
                run_suite(&name, &ctx.level, &ctx.defs, &opts)?
            };
            print_report(&ctx, &report);
            Ok(report.overall)
        }
        Command::Show { name } => {
            match name {
                None => println!("{}", ctx.defs),
                Some(n) => println!("{}", show_entry(&ctx.defs, &n)?),
            }
            Ok(true)
        }
    }
}

fn show_entry(defs: &Definitions, name: &str) -> Result<String, ConfigError> {
    if let Some(a) = defs.algebra(name) {
        return Ok(a.to_string());
    }
    if let Some(m) = defs.map(name) {
        return Ok(m.to_string());
    }
    if let Some(f) = defs.field(name) {
        return Ok(f.to_string());
    }
    if let Some(p) = defs.poisson(name) {
        return Ok(p.to_string());
    }
    if let Some(m) = defs.poisson_map(name) {
        return Ok(m.to_string());
    }
    Err(ConfigError(format!("no definition named {name}")))
}

/// An input is a field expression, `@name` for a named field, or
/// `m(expr)` to push `expr` through the map `m` (or `map_m`).
fn resolve_input(defs: &Definitions, text: &str) -> Result<(FieldExpr, Option<String>), ConfigError> {
    let t = text.trim();
    if let Some(name) = t.strip_prefix('@') {
        let f = defs
            .field(name)
            .ok_or_else(|| ConfigError(format!("no field named {name}")))?;
        return Ok((f.expr.clone(), Some(f.algebra.clone())));
    }
    if let Some((head, inner)) = t.split_once('(') {
        let map = defs.map(head).or_else(|| defs.map(&format!("map_{head}")));
        if let (Some(map), Some(inner)) = (map, inner.strip_suffix(')')) {
            return Ok((map.apply(&parse_expr(inner)?), Some(map.target.clone())));
        }
    }
    Ok((parse_expr(t)?, None))
}

fn resolve_pair(
    ctx: &Context,
    a: &str,
    b: &str,
    algebra: Option<String>,
) -> Result<(FreeFieldAlgebra, Field, Field), ConfigError> {
    let (ea, ta) = resolve_input(&ctx.defs, a)?;
    let (eb, tb) = resolve_input(&ctx.defs, b)?;
    let mut name = algebra;
    for t in [ta, tb].into_iter().flatten() {
        match &name {
            Some(n) if *n != t => {
                return Err(ConfigError(format!("inputs live in different algebras: {n} and {t}")))
            }
            _ => name = Some(t),
        }
    }
    let name = name.unwrap_or_else(|| "EL".into());
    let alg = FreeFieldAlgebra::by_name(&name)
        .ok_or_else(|| ConfigError(format!("unknown free-field algebra {name}")))?
        .at_level(&ctx.level)?;
    let fa = ea.eval(&alg)?;
    let fb = eb.eval(&alg)?;
    Ok((alg, fa, fb))
}

fn print_ope(ctx: &Context, alg: &FreeFieldAlgebra, p: &LambdaPoly) {
    let rendered = alg.render_ope(p);
    match ctx.format {
        Format::Text => println!("{rendered}"),
        Format::Json => {
            let poles: Vec<_> = p
                .coeffs()
                .map(|(n, _)| {
                    json!({
                        "pole": n + 1,
                        "product": n,
                        "coefficient": alg.render_field(&p.nth_product(n)),
                    })
                })
                .collect();
            let out = json!({
                "algebra": alg.name(),
                "level": ctx.level.to_string(),
                "poles": poles,
                "rendered": rendered,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
    }
}

fn print_field(ctx: &Context, alg: &FreeFieldAlgebra, f: &Field) {
    let rendered = alg.render_field(f);
    match ctx.format {
        Format::Text => println!("{rendered}"),
        Format::Json => {
            let out = json!({
                "algebra": alg.name(),
                "level": ctx.level.to_string(),
                "rendered": rendered,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
    }
}

fn print_report(ctx: &Context, report: &VerificationReport) {
    match ctx.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text if ctx.quiet => {
            let mut failures = report.clone();
            failures.checks.retain(|c| !c.pass);
            let passed = report.checks.iter().filter(|c| c.pass).count();
            for c in &failures.checks {
                println!("FAIL {}: residual {}", c.label, c.residual);
            }
            println!(
                "{}: {passed}/{} checks passed",
                if report.overall { "PASS" } else { "FAIL" },
                report.checks.len()
            );
        }
        Format::Text => println!("{report}"),
    }
}
