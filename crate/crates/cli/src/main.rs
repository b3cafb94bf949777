use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fqpoints::bounds::BoundContext;
use fqpoints::catalog::{self, Family};
use fqpoints::error::Error;
use fqpoints::exec::{Env, DEFAULT_BUDGET};
use fqpoints::gf::{parse_field, Field};
use fqpoints::input::{load_spec, ParsedSpec};
use fqpoints::pipeline::{self, Settings};
use fqpoints::report::{Format, Header, Report, Row};

const DEFAULT_GRID: &str = "3,2^2,5,7,2^3,3^2,11,13";

#[derive(Parser, Debug)]
#[command(name = "fqpoints", version, about = "Exact point counts and bound checks over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Largest enumeration allowed, in points.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Highest extension level K for singularity audits.
    #[arg(long = "ext-level", global = true, default_value_t = 2)]
    ext_level: u32,
    /// First seed; runs with several projections use consecutive seeds.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Directory for report files; print to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Lower the named bound by one before judging it.
    #[arg(long = "inject-fault", global = true, hide = true)]
    inject_fault: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Variety spec document (TOML).
    #[arg(long, conflicts_with = "catalog")]
    spec: Option<PathBuf>,
    /// Catalog entry name, see `catalog list`.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total, smooth and singular point counts.
    Count {
        #[command(flatten)]
        source: Source,
        /// Field `p^k`; overrides the spec's field.
        #[arg(long)]
        field: Option<String>,
    },
    /// Counts plus every applicable bound, over a grid of fields.
    Verify {
        /// Spec or catalog entry; the whole catalog when both are absent.
        #[command(flatten)]
        source: Source,
        /// Comma-separated fields `p^k`.
        #[arg(long, default_value = DEFAULT_GRID)]
        field: String,
    },
    /// Bound and threshold values for a shape, without counting.
    Bounds {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Singular-locus bound, or `smooth`.
        #[arg(long, default_value = "smooth")]
        s: String,
        /// Comma-separated generator degrees.
        #[arg(long)]
        degrees: String,
    },
    /// Seeded singular-fiber audits and a nonsingular section search.
    BertiniAudit {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        field: Option<String>,
        /// Number of seeded projections.
        #[arg(long, default_value_t = 20)]
        projections: u64,
    },
    /// Value-set averages, the allowable-subset identity and its bounds.
    Valueset {
        /// Comma-separated fields `p^k`.
        #[arg(long)]
        field: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// Built-in varieties.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_budget() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn fields(list: &str) -> Result<Vec<Field>, Failure> {
    list.split(',')
        .map(|t| parse_field(t.trim()).map_err(|e| Error::from(e).into()))
        .collect()
}

fn one_field(tok: Option<&str>) -> Result<Option<Field>, Failure> {
    tok.map(|t| parse_field(t).map_err(|e| Error::from(e).into())).transpose()
}

fn family(name: &str) -> Result<Family, Failure> {
    catalog::find(name).ok_or_else(|| usage(format!("unknown catalog entry `{name}`; see `catalog list`")))
}

/// The variety named by `--spec` or `--catalog`, with its ground truth
/// when it comes from the catalog.
fn resolve(
    source: &Source,
    field: Option<&Field>,
) -> Result<(String, ParsedSpec, Option<catalog::GroundTruth>), Failure> {
    match (&source.spec, &source.catalog) {
        (Some(path), _) => {
            let parsed = load_spec(path, field)?;
            let name = path.file_stem().map_or("spec".into(), |s| s.to_string_lossy().into_owned());
            Ok((name, parsed, None))
        }
        (None, Some(name)) => {
            let f = field.ok_or_else(|| usage("--field is required with --catalog"))?;
            let inst = family(name)?.build(f)?;
            Ok((
                inst.name(),
                ParsedSpec {
                    variety: inst.spec,
                    projection: None,
                },
                Some(inst.truth),
            ))
        }
        (None, None) => Err(usage("give --spec FILE or --catalog NAME")),
    }
}

fn skipped(fam: &Family, f: &Field, why: &str) -> Row {
    Row::new("catalog", &fam.to_string(), &f.name(), "instance")
        .against("", "", "", "not-applicable")
        .note(why)
}

fn run(cli: &Cli, env: &Env) -> Result<Option<Report>, Failure> {
    let a = &cli.run;
    if a.ext_level == 0 {
        return Err(usage("--ext-level must be at least 1"));
    }
    if a.budget == 0 {
        return Err(usage("--budget must be positive"));
    }
    let settings = Settings {
        seed: a.seed,
        ext_level: a.ext_level,
        projections: 1,
        fault: a.inject_fault.clone(),
    };
    let header = |cmd: &str| Header::new(cmd, a.seed, a.budget, a.ext_level);
    let report = match &cli.command {
        Command::Catalog { action: CatalogAction::List } => {
            for fam in catalog::families() {
                println!("{:<24} P^{}  {}", fam.to_string(), fam.ambient_dim(), fam.about());
            }
            return Ok(None);
        }
        Command::Count { source, field } => {
            let field = one_field(field.as_deref())?;
            let (name, parsed, _) = resolve(source, field.as_ref())?;
            let mut rep = Report::new(header("count"));
            rep.extend(pipeline::count_rows(&name, &parsed.variety, parsed.projection.as_ref(), env)?);
            rep
        }
        Command::Verify { source, field } => {
            let mut rep = Report::new(header("verify"));
            for f in fields(field)? {
                if source.spec.is_none() && source.catalog.is_none() {
                    for fam in catalog::families() {
                        match fam.supports(&f) {
                            Ok(()) => {
                                let inst = fam.build(&f)?;
                                rep.extend(pipeline::verify_rows(
                                    &inst.name(),
                                    &inst.spec,
                                    Some(&inst.truth),
                                    &settings,
                                    env,
                                )?);
                            }
                            Err(why) => rep.extend([skipped(&fam, &f, &why)]),
                        }
                    }
                } else {
                    let (name, parsed, truth) = resolve(source, Some(&f))?;
                    rep.extend(pipeline::verify_rows(&name, &parsed.variety, truth.as_ref(), &settings, env)?);
                }
            }
            rep
        }
        Command::Bounds {
            field,
            n,
            r,
            s,
            degrees,
        } => {
            let f = parse_field(field).map_err(Error::from)?;
            let degrees = degrees
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| usage(format!("bad degree `{t}`"))))
                .collect::<Result<Vec<u32>, Failure>>()?;
            let s = match s.as_str() {
                "smooth" => None,
                t => Some(t.parse::<usize>().map_err(|_| usage(format!("bad singular bound `{t}`")))?),
            };
            let ctx = BoundContext::new(*n, *r, s, &degrees, f.size() as u64)?;
            let mut rep = Report::new(header("bounds"));
            rep.extend(pipeline::bounds_rows("shape", &ctx));
            rep
        }
        Command::BertiniAudit {
            source,
            field,
            projections,
        } => {
            let field = one_field(field.as_deref())?;
            let (name, parsed, _) = resolve(source, field.as_ref())?;
            let settings = Settings {
                projections: *projections,
                ..settings
            };
            let mut rep = Report::new(header("bertini-audit"));
            rep.extend(pipeline::bertini_rows(&name, &parsed.variety, &settings, env)?);
            rep
        }
        Command::Valueset { field, d, s } => {
            let mut rep = Report::new(header("valueset"));
            for f in fields(field)? {
                rep.extend(pipeline::valueset_rows(&f, *d, *s, a.seed, env)?);
            }
            rep
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.run.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let env = Env::new(cli.run.workers, cli.run.budget);
    let report = match run(&cli, &env) {
        Ok(Some(r)) => r,
        Ok(None) => return ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let emitted = match &cli.run.out {
        Some(dir) => {
            report
                .write(dir, format, env.exec.workers(), env.exec.is_parallel())
                .map(|p| eprintln!("wrote {}", p.display()))
        }
        None => report.render(format).map(|s| print!("{s}")),
    };
    if let Err(e) = emitted {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let bad: Vec<&Row> = report.hard_violations().collect();
    for r in &bad {
        eprintln!(
            "violated: {} {} over F_{}: {} {} {}",
            r.instance, r.name, r.field, r.measured, r.relation, r.bound
        );
    }
    if bad.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
