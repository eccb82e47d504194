use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use lexmetric_core::constructions::{gravitational, lexicographic, squash};
use lexmetric_core::resolving::{greedy_generator, metric_dimension, Solver, SolverConfig};
use lexmetric_core::theory::{
    self, verify_corollaries, verify_diameter, verify_dimension, verify_squash, CheckOutcome,
    Guards,
};
use lexmetric_core::twins::{special_classes, twin_classes};
use lexmetric_core::{corpus, FiniteMetricSpace};

use crate::io::{self, Format, IoError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lexmetric", version, about = "Finite metric spaces, lexicographic products and metric dimension")]
pub struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Distance-equality tolerance; overrides the input files.
    #[arg(long, global = true, value_parser = nonnegative)]
    tolerance: Option<f64>,
    /// Input file type; inferred from the extension by default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest product space a check may build.
    #[arg(long, global = true, default_value_t = theory::DEFAULT_MAX_PRODUCT_POINTS)]
    max_product_points: usize,
    /// Largest space whose metric bases may all be listed.
    #[arg(long, global = true, default_value_t = lexmetric_core::resolving::DEFAULT_MAX_ENUMERATION_POINTS)]
    max_enumeration_points: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the metric axioms.
    Validate { file: PathBuf },
    /// Nearness, slack and diameter.
    Stats { file: PathBuf },
    /// Convert an edge list into a metric table.
    Graph { file: PathBuf },
    /// Truncate every distance at 2t.
    Gravitate {
        file: PathBuf,
        #[arg(long, value_parser = positive)]
        t: f64,
    },
    /// Apply d -> eta*d/(eta+d).
    Squash {
        file: PathBuf,
        #[arg(long, value_parser = positive)]
        eta: f64,
    },
    /// Lexicographic product of two spaces.
    Product { m: PathBuf, m2: PathBuf },
    /// Metric dimension and a basis.
    Dim {
        file: PathBuf,
        /// Greedy upper bound instead of the exact value.
        #[arg(long, conflicts_with_all = ["all_bases", "enumeration"])]
        greedy: bool,
        /// List every metric basis.
        #[arg(long)]
        all_bases: bool,
        /// Use plain subset enumeration instead of branch and bound.
        #[arg(long)]
        enumeration: bool,
    },
    /// Twin equivalence classes.
    Twins { file: PathBuf },
    /// Twin classes of M that add landmarks to a product basis with M2.
    Special { m: PathBuf, m2: PathBuf },
    /// Check the product identities on a pair of spaces.
    Verify {
        m: PathBuf,
        m2: PathBuf,
        #[arg(long, value_enum, default_value_t = TheoremArg::All)]
        theorem: TheoremArg,
    },
    /// Verify every identity on seeded random pairs.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    Dimension,
    Diameter,
    Squash,
    Corollaries,
    All,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("expected a nonnegative number, got {s:?}")),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Core(#[from] lexmetric_core::Error),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn load(&self, path: &Path) -> Result<FiniteMetricSpace, CliError> {
        Ok(io::load_space(path, self.cli.format, self.cli.tolerance)?)
    }

    fn guards(&self) -> Guards {
        Guards {
            max_product_points: self.cli.max_product_points,
            max_enumeration_points: self.cli.max_enumeration_points,
        }
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig {
            max_enumeration_points: self.cli.max_enumeration_points,
            ..SolverConfig::default()
        }
    }

    /// JSON document in `--json` mode, otherwise the text lines.
    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
        if self.cli.json {
            serde_json::to_writer_pretty(&mut *self.out, value).map_err(std::io::Error::from)?;
            writeln!(self.out)?;
        } else {
            write!(self.out, "{}", text())?;
        }
        Ok(())
    }

    fn emit_table(&mut self, space: &FiniteMetricSpace) -> Result<(), CliError> {
        writeln!(self.out, "{}", io::to_json(space))?;
        Ok(())
    }
}

fn labels(xs: &[lexmetric_core::PointId]) -> String {
    let parts: Vec<&str> = xs.iter().map(|p| p.as_str()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn describe(outcome: &CheckOutcome) -> String {
    match outcome {
        CheckOutcome::Checked(r) => format!(
            "{:<26} {}  lhs {}  rhs {}\n",
            r.theorem.name(),
            if r.pass { "PASS" } else { "FAIL" },
            r.lhs,
            r.rhs
        ),
        CheckOutcome::Skipped(s) => format!("{:<26} SKIP  {}\n", s.theorem.name(), s.reason),
    }
}

fn check(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    which: TheoremArg,
    guards: &Guards,
) -> Result<Vec<CheckOutcome>, lexmetric_core::Error> {
    Ok(match which {
        TheoremArg::Dimension => vec![CheckOutcome::Checked(verify_dimension(m, m2, guards)?)],
        TheoremArg::Diameter => vec![CheckOutcome::Checked(verify_diameter(m, m2)?)],
        TheoremArg::Squash => vec![CheckOutcome::Checked(verify_squash(m, m2, guards)?)],
        TheoremArg::Corollaries => verify_corollaries(m, m2, guards)?,
        TheoremArg::All => theory::verify_all(m, m2, guards)?,
    })
}

fn execute(ctx: &mut Ctx<'_>) -> Result<i32, CliError> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Validate { file } => {
            let space = ctx.load(file)?;
            let report = space.validate();
            ctx.emit(&report, || {
                if report.ok {
                    return format!("ok: {} points form a metric\n", space.len());
                }
                let mut s = format!("{} violations\n", report.violations.len());
                for v in &report.violations {
                    s += &format!("  {} {}: {} vs {}\n", v.axiom, labels(&v.points), v.lhs, v.rhs);
                }
                s
            })?;
            Ok(if report.ok { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Stats { file } => {
            let stats = ctx.load(file)?.stats();
            ctx.emit(&stats, || {
                let mut s = format!(
                    "nearness {}\nslack {}\ndiameter {}\n",
                    stats.nearness, stats.slack, stats.diameter
                );
                for (p, eta) in &stats.nearness_per_point {
                    s += &format!("  η({p}) = {eta}\n");
                }
                s
            })?;
            Ok(EXIT_OK)
        }
        Command::Graph { file } => {
            let space = io::load_space(file, Some(cli.format.unwrap_or(Format::Edges)), cli.tolerance)?;
            ctx.emit_table(&space)?;
            Ok(EXIT_OK)
        }
        Command::Gravitate { file, t } => {
            let space = gravitational(&ctx.load(file)?, *t)?;
            ctx.emit_table(&space)?;
            Ok(EXIT_OK)
        }
        Command::Squash { file, eta } => {
            let space = squash(*eta, &ctx.load(file)?)?;
            ctx.emit_table(&space)?;
            Ok(EXIT_OK)
        }
        Command::Product { m, m2 } => {
            let p = lexicographic(&ctx.load(m)?, &ctx.load(m2)?)?;
            ctx.emit_table(p.space())?;
            Ok(EXIT_OK)
        }
        Command::Dim {
            file,
            greedy,
            all_bases,
            enumeration,
        } => {
            let space = ctx.load(file)?;
            if *greedy {
                let set: Vec<_> = greedy_generator(&space)
                    .into_iter()
                    .map(|i| space.label(i).clone())
                    .collect();
                let doc = json!({ "method": "greedy", "size": set.len(), "generator": set });
                ctx.emit(&doc, || format!("greedy upper bound {}\ngenerator {}\n", set.len(), labels(&set)))?;
                return Ok(EXIT_OK);
            }
            let mut cfg = ctx.solver();
            cfg.enumerate_all = *all_bases;
            if *enumeration {
                cfg.solver = Solver::Enumeration;
            }
            let r = metric_dimension(&space, &cfg)?;
            ctx.emit(&r, || {
                let mut s = format!("dimension {}\nbasis {}\n", r.dimension, labels(&r.basis));
                if let Some(all) = &r.all_bases {
                    s += &format!("{} bases\n", all.len());
                    for b in all {
                        s += &format!("  {}\n", labels(b));
                    }
                }
                s
            })?;
            Ok(EXIT_OK)
        }
        Command::Twins { file } => {
            let part = twin_classes(&ctx.load(file)?)?;
            let doc = json!({ "twins_free": part.is_twins_free(), "classes": part.classes });
            ctx.emit(&doc, || {
                let mut s = format!("twins-free: {}\n", part.is_twins_free());
                for c in &part.classes {
                    s += &labels(&c.members);
                    if let (Some(gap), Some(eta)) = (c.gap, c.class_nearness) {
                        s += &format!("  ℓ = {gap}  η = {eta}");
                    }
                    s += "\n";
                }
                s
            })?;
            Ok(EXIT_OK)
        }
        Command::Special { m, m2 } => {
            let set = special_classes(&ctx.load(m)?, &ctx.load(m2)?, &ctx.solver())?;
            ctx.emit(&set, || {
                let mut s = format!("extra landmarks {}\n", set.extra_landmarks());
                for c in &set.classes {
                    s += &format!(
                        "{} ℓ = {}: {}\n",
                        labels(&c.members),
                        c.gap,
                        if c.included { "special" } else { "not special" }
                    );
                }
                s
            })?;
            Ok(EXIT_OK)
        }
        Command::Verify { m, m2, theorem } => {
            let outcomes = check(&ctx.load(m)?, &ctx.load(m2)?, *theorem, &ctx.guards())?;
            let pass = outcomes.iter().all(CheckOutcome::passed);
            if ctx.cli.json && outcomes.len() == 1 {
                ctx.emit(&outcomes[0], String::new)?;
            } else {
                ctx.emit(&outcomes, || outcomes.iter().map(describe).collect())?;
            }
            Ok(if pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Corpus { seed, count } => {
            let guards = ctx.guards();
            let mut rng = corpus::rng(*seed);
            let mut failures = Vec::new();
            let mut checked = 0;
            for i in 0..*count {
                let (m, m2) = corpus::random_pair(&mut rng, guards.max_product_points);
                for outcome in theory::verify_all(&m, &m2, &guards)? {
                    checked += 1;
                    if !outcome.passed() {
                        failures.push(json!({ "pair": i, "report": outcome }));
                    }
                }
            }
            let doc = json!({
                "seed": seed,
                "count": count,
                "checks": checked,
                "failed": failures.len(),
                "failures": failures,
            });
            ctx.emit(&doc, || {
                format!(
                    "seed {seed}: {count} pairs, {checked} checks, {} failed\n",
                    failures.len()
                )
            })?;
            Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Runs the command line and returns the exit status: 0 on success or a
/// passing check, 1 on a failed check, 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_out = !e.use_stderr();
            let text = e.render().to_string();
            let _ = if to_out { write!(out, "{text}") } else { write!(err, "{text}") };
            return if to_out { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut ctx = Ctx { cli: &cli, out };
    match execute(&mut ctx) {
        Ok(code) => code,
        Err(CliError::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
