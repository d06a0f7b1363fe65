//! Command-line surface. `run` parses arguments, dispatches, and returns the
//! exit status with the text to print, so it can be driven in-process.
//!
//! Exit status: 0 when every verdict is yes, 2 when something is
//! inconclusive, 1 on usage or input errors.

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cartanmodel::{series, DegreeFact, Verdict, Witness};
use crate::catalog::{run_catalog, Bounds, Catalog, Report};
use crate::error::{Error, Result};
use crate::space::{check_space, oracle_space, BorelBase, SpaceQuery};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "isoformal",
    version,
    about = "Formality and equivariant formality of homogeneous spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    Torus,
    Invariant,
}

#[derive(Debug, Args)]
struct Space {
    /// Group label, e.g. `SU(4)`, `Sp(2)xSp(2)`, `E7`.
    #[arg(long)]
    group: String,
    /// Subgroup label.
    #[arg(long)]
    subgroup: String,
    /// Embedding recipe, `kind` or `kind@H > kind`.
    #[arg(long)]
    embedding: Option<String>,
    /// Degree-reasoning facts for groups known by degrees only.
    #[arg(long = "fact", value_enum)]
    facts: Vec<FactArg>,
    /// Time budget for the splitting search, in seconds.
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FactArg {
    KillingForm,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide formality and equivariant formality of one space.
    Check {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the Poincaré polynomial of one space.
    Poincare {
        #[command(flatten)]
        space: Space,
    },
    /// Brute-force cohomology and fiber-restriction surjectivity.
    Oracle {
        #[command(flatten)]
        space: Space,
        /// Check every degree up to this one.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Base::Torus)]
        base: Base,
    },
    /// Catalog runs.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// Run every instance within the bounds.
    Run {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=12))]
        max_rank: u64,
        /// Catalog file (default: $ISOFORMAL_CATALOG, else built in).
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Run the cohomology oracles up to this formal dimension.
        #[arg(long)]
        oracle_dimension: Option<u32>,
        /// Only families whose label contains this text.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// List the families and their instance counts.
    List {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=12))]
        max_rank: u64,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Re-emit a structured report.
    Render {
        /// A report produced by `catalog run --format structured`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Structured)]
        format: Format,
    },
}

/// Exit status and output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(EXIT_OK, text),
                _ => Outcome {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome::error(e),
    }
}

fn code_for(yes: bool) -> i32 {
    if yes {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Check { space, format } => {
            let v = verdict(&space)?;
            let text = match format {
                Format::Structured => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&v).expect("verdict serializes")
                ),
                Format::Table => describe(&v),
            };
            Ok(Outcome::ok(code_for(v.all_yes()), text))
        }
        Command::Poincare { space } => {
            let v = verdict(&space)?;
            Ok(match &v.poincare {
                Some(p) => {
                    let s: Vec<i128> = p.iter().map(|&c| c as i128).collect();
                    Outcome::ok(
                        code_for(v.formal.is_yes()),
                        format!("{p:?}\n{}\n", series::display(&s)),
                    )
                }
                None => Outcome::ok(
                    EXIT_INCONCLUSIVE,
                    format!("{}: Poincaré polynomial not determined\n", v.space),
                ),
            })
        }
        Command::Oracle {
            space,
            max_degree,
            base,
        } => {
            let q = space.query();
            let base = match base {
                Base::Torus => BorelBase::Torus,
                Base::Invariant => BorelBase::Invariant,
            };
            let r = oracle_space(&q, max_degree, base)?;
            let (betti, onto) = (r.betti, r.surjective);
            let text = format!(
                "{}\nBetti numbers up to degree {max_degree}: {betti:?}\nfiber restriction onto up to degree {max_degree}: {}\n",
                q.label(),
                if onto { "yes" } else { "no" }
            );
            Ok(Outcome::ok(code_for(onto), text))
        }
        Command::Catalog { action } => catalog(action),
    }
}

fn catalog(action: CatalogAction) -> Result<Outcome> {
    let load = |path: Option<PathBuf>| match path {
        Some(p) => Catalog::load(&p),
        None => Catalog::load_default(),
    };
    match action {
        CatalogAction::Run {
            max_rank,
            catalog,
            oracle_dimension,
            family,
            budget,
            format,
        } => {
            let c = load(catalog)?;
            let bounds = Bounds {
                max_rank: max_rank as usize,
                oracle_dimension,
                budget_seconds: budget,
                family_filter: family,
            };
            let r = run_catalog(&c, &bounds)?;
            Ok(Outcome::ok(code_for(r.all_passed()), render(&r, format)))
        }
        CatalogAction::List { max_rank, catalog } => {
            let c = load(catalog)?;
            let bounds = Bounds {
                max_rank: max_rank as usize,
                ..Bounds::default()
            };
            let mut out = String::new();
            let mut total = 0;
            for f in &c.families {
                let n = c.reduce_entry(f, &bounds)?.len();
                total += n;
                out.push_str(&format!("{n:>4}  {}\n", f.label));
            }
            out.push_str(&format!(
                "{total:>4}  instances in {} families\n",
                c.families.len()
            ));
            Ok(Outcome::ok(EXIT_OK, out))
        }
        CatalogAction::Render { input, format } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::Report(format!("cannot read {}: {e}", input.display())))?;
            let r = Report::from_json(&text)?;
            Ok(Outcome::ok(code_for(r.all_passed()), render(&r, format)))
        }
    }
}

fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Structured => r.to_json(),
        Format::Table => r.table(),
    }
}

impl Space {
    fn query(&self) -> SpaceQuery {
        SpaceQuery {
            group: self.group.clone(),
            subgroup: self.subgroup.clone(),
            embedding: self.embedding.clone(),
            facts: self
                .facts
                .iter()
                .map(|f| match f {
                    FactArg::KillingForm => DegreeFact::KillingForm,
                })
                .collect(),
            budget: Duration::from_secs(self.budget),
        }
    }
}

fn verdict(space: &Space) -> Result<Verdict> {
    check_space(&space.query())
}

/// Human-readable verdict with its witness.
fn describe(v: &Verdict) -> String {
    let mut out = format!(
        "{}\n  formal: {}\n  equivariantly formal: {}\n  route: {}\n",
        v.space,
        v.formal,
        v.equivariantly_formal,
        v.route.map(|r| r.to_string()).unwrap_or_else(|| "-".into())
    );
    if let Some(p) = &v.poincare {
        let s: Vec<i128> = p.iter().map(|&c| c as i128).collect();
        out.push_str(&format!("  Poincaré polynomial: {}\n", series::display(&s)));
    }
    match &v.witness {
        Some(Witness::Splitting {
            splitting,
            equivariant,
        }) => {
            out.push_str(&format!(
                "  regular subset: {:?}\n  redundant order: {:?}\n  regular basis: {}\n",
                splitting.regular_subset,
                splitting.redundant_order,
                splitting.regular_basis.join(", ")
            ));
            for r in &splitting.membership_certificates {
                out.push_str(&format!(
                    "  psi_{} = {} reduces to {}\n",
                    r.index, r.image, r.remainder
                ));
            }
            if let Some(eq) = equivariant {
                out.push_str(&format!("  Borel order: {:?}\n", eq.order));
                for c in &eq.certificates {
                    out.push_str(&format!(
                        "  Borel certificate for psi_{}: {:?}\n",
                        c.index, c.evidence
                    ));
                }
            }
        }
        Some(Witness::Degrees(d)) => {
            for c in &d.candidates {
                out.push_str(&format!(
                    "  candidate ({}): {}\n",
                    if c.certified { "certified" } else { "open" },
                    c.description
                ));
            }
        }
        Some(Witness::Transfer(t)) => out.push_str(&format!("  transferred from {}\n", t.target)),
        Some(Witness::Product(p)) => out.push_str(&format!("  {}\n", p.rule)),
        None => {}
    }
    for n in &v.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}
