//! Command-line front end: argument parsing, document I/O and output rendering.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use secview::decompose::{decompose, decompose_reference, lint_policy, DecomposeOptions, Decomposition};
use secview::document::{load_policy, load_schema, load_views, DecompositionDocument};
use secview::exec::Execution;
use secview::fd::{closure, identifier_sets_of_set, minimal_identifier_sets, IdentifierSearch};
use secview::report::{render_decomposition_text, render_report_text, ReportDocument};
use secview::schema::{LogicalSchema, PolicySet};
use secview::verify::{audit, restrict_fds, Verdict, DEFAULT_MAX_JOIN_SETS};
use secview::{emit_views, AttrSet};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INSECURE: i32 = 2;
pub const EXIT_UNVERIFIED: i32 = 3;
/// The logical check and the join closure reached different verdicts.
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "secview", version, about = "Secure view-layer decomposition and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Sql,
}

#[derive(Debug, Args)]
pub struct SchemaArg {
    /// Schema document (JSON).
    #[arg(short, long)]
    pub schema: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Largest identifier considered on schemas with more than 16 attributes (exact when unset).
    #[arg(long, env = "SECVIEW_MAX_IDENTIFIER_SIZE")]
    pub max_identifier_size: Option<usize>,
}

impl SearchArgs {
    fn search(&self) -> IdentifierSearch {
        self.max_identifier_size
            .map_or_else(IdentifierSearch::exact, IdentifierSearch::bounded)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split every relation into maximal views that respect the policy.
    Decompose {
        #[command(flatten)]
        schema: SchemaArg,
        /// Policy document (JSON).
        #[arg(short, long)]
        policy: PathBuf,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write CREATE VIEW statements to this file.
        #[arg(long)]
        emit_sql: Option<PathBuf>,
        /// Use the power-set reference procedure.
        #[arg(long)]
        reference: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Run on a single thread.
        #[arg(long)]
        sequential: bool,
        /// Include wall-clock time in the statistics.
        #[arg(long)]
        timings: bool,
    },
    /// Check a view layer (or the schema itself) against a policy.
    Verify {
        #[command(flatten)]
        schema: SchemaArg,
        #[arg(short, long)]
        policy: PathBuf,
        /// View list or decomposition output; the schema's own relations when omitted.
        #[arg(long)]
        views: Option<PathBuf>,
        /// Cap on the number of attribute sets the join closure may build.
        #[arg(long, default_value_t = DEFAULT_MAX_JOIN_SETS)]
        max_join_sets: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
    /// Print the attribute closure of a set.
    Closure {
        #[command(flatten)]
        schema: SchemaArg,
        /// Attributes as RELATION.attr, comma separated or repeated.
        #[arg(long, value_delimiter = ',', required = true)]
        attrs: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the minimal identifier sets of an attribute or attribute set.
    Identifiers {
        #[command(flatten)]
        schema: SchemaArg,
        #[arg(long, value_delimiter = ',', required = true)]
        attrs: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Report policy sets that protect less than they appear to.
    Lint {
        #[command(flatten)]
        schema: SchemaArg,
        #[arg(short, long)]
        policy: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Render CREATE VIEW statements for a view list or decomposition output.
    EmitViews {
        #[command(flatten)]
        schema: SchemaArg,
        #[arg(long)]
        views: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Core(secview::Error),
    Io { path: PathBuf, source: std::io::Error },
    Usage(String),
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Core(e) => e.code(),
            Failure::Io { .. } => "io",
            Failure::Usage(_) => "usage",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<secview::Error> for Failure {
    fn from(e: secview::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn stdout_io(e: std::io::Error) -> Failure {
    Failure::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn emit(out: &mut dyn Write, target: Option<&Path>, text: &str) -> Result<(), Failure> {
    match target {
        Some(path) => write_file(path, text),
        None => out.write_all(text.as_bytes()).map_err(stdout_io),
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

fn schema_and_policy(schema: &Path, policy: &Path) -> Result<(LogicalSchema, PolicySet), Failure> {
    let schema = load_schema(&read(schema)?)?;
    let policy = load_policy(&read(policy)?, &schema)?;
    Ok((schema, policy))
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn resolve_all(schema: &LogicalSchema, names: &[String]) -> Result<AttrSet, Failure> {
    Ok(schema.attr_set(names)?)
}

/// Runs one command, writing results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Decompose {
            schema,
            policy,
            output,
            emit_sql,
            reference,
            search,
            format,
            sequential,
            timings,
        } => {
            let (schema, policy) = schema_and_policy(&schema.schema, &policy)?;
            let options = DecomposeOptions {
                identifiers: search.search(),
                execution: execution(sequential),
                ..DecomposeOptions::default()
            };
            let d = if reference {
                decompose_reference(&schema, &policy, &options)?
            } else {
                decompose(&schema, &policy, &options)?
            };
            let sql = emit_views(&d, &schema);
            if let Some(path) = &emit_sql {
                write_file(path, &sql)?;
            }
            let text = match format {
                Format::Json => pretty(&DecompositionDocument::new(&d, &schema, timings)),
                Format::Text => render_decomposition_text(&d, &schema),
                Format::Sql => sql,
            };
            emit(out, output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            schema,
            policy,
            views,
            max_join_sets,
            search,
            format,
            sequential,
        } => {
            let (schema, policy) = schema_and_policy(&schema.schema, &policy)?;
            let layer = match &views {
                Some(path) => restrict_fds(&load_views(&read(path)?, &schema)?, &schema),
                None => schema.clone(),
            };
            let report = audit(&layer, &policy, search.search(), max_join_sets, execution(sequential));
            let text = match format {
                Format::Json => pretty(&ReportDocument::new(&report, &policy, &schema)),
                Format::Text => render_report_text(&report, &policy, &schema),
                Format::Sql => return Err(Failure::Usage("verify has no SQL output".into())),
            };
            emit(out, None, &text)?;
            Ok(match (report.consistent, report.verdict) {
                (Some(false), _) => EXIT_DISAGREEMENT,
                (_, Verdict::Insecure) => EXIT_INSECURE,
                (_, Verdict::Unverified) => EXIT_UNVERIFIED,
                (_, Verdict::Secure) => EXIT_OK,
            })
        }
        Command::Closure { schema, attrs, format } => {
            let schema = load_schema(&read(&schema.schema)?)?;
            let x = resolve_all(&schema, &attrs)?;
            let cx = closure(&x, &schema);
            let text = match format {
                Format::Json => pretty(&json!({
                    "attributes": schema.names(&x),
                    "closure": schema.names(&cx),
                })),
                Format::Text => format!("{}\n", schema.render_set(&cx)),
                Format::Sql => return Err(Failure::Usage("closure has no SQL output".into())),
            };
            emit(out, None, &text)?;
            Ok(EXIT_OK)
        }
        Command::Identifiers {
            schema,
            attrs,
            search,
            format,
        } => {
            let schema = load_schema(&read(&schema.schema)?)?;
            let x = resolve_all(&schema, &attrs)?;
            let family = if x.len() == 1 {
                minimal_identifier_sets(x.first().expect("one member"), &schema, search.search())
            } else {
                identifier_sets_of_set(&x, &schema, search.search())
            };
            let text = match format {
                Format::Json => pretty(&json!({
                    "attributes": schema.names(&x),
                    "identifiers": family.identifiers.iter().map(|s| schema.names(s)).collect::<Vec<_>>(),
                    "exact": family.exact,
                })),
                Format::Text => {
                    let mut s: String = family
                        .identifiers
                        .iter()
                        .map(|i| format!("{}\n", schema.render_set(i)))
                        .collect();
                    if family.identifiers.is_empty() {
                        s.push_str("(none)\n");
                    }
                    if !family.exact {
                        s.push_str("(search bounded; larger identifiers may exist)\n");
                    }
                    s
                }
                Format::Sql => return Err(Failure::Usage("identifiers has no SQL output".into())),
            };
            emit(out, None, &text)?;
            Ok(EXIT_OK)
        }
        Command::Lint {
            schema,
            policy,
            search,
            format,
        } => {
            let (schema, policy) = schema_and_policy(&schema.schema, &policy)?;
            let diagnostics = lint_policy(&schema, &policy, search.search());
            let text = match format {
                Format::Json => pretty(&json!({
                    "diagnostics": diagnostics.iter().map(|d| json!({
                        "severity": d.severity.as_str(),
                        "code": d.code,
                        "set": schema.names(policy.sets()[d.sds].members()),
                        "message": d.message,
                        "subsets": d.subsets.iter().map(|s| schema.names(s)).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                })),
                Format::Text => {
                    let mut s = String::new();
                    for d in &diagnostics {
                        s.push_str(&format!("{}[{}]: {}\n", d.severity.as_str(), d.code, d.message));
                        for sub in &d.subsets {
                            s.push_str(&format!("  {}\n", schema.render_set(sub)));
                        }
                    }
                    if diagnostics.is_empty() {
                        s.push_str("no findings\n");
                    }
                    s
                }
                Format::Sql => return Err(Failure::Usage("lint has no SQL output".into())),
            };
            emit(out, None, &text)?;
            Ok(EXIT_OK)
        }
        Command::EmitViews { schema, views, output } => {
            let schema = load_schema(&read(&schema.schema)?)?;
            let views = load_views(&read(&views)?, &schema)?;
            let d = Decomposition::from_views(&views, &schema);
            emit(out, output.as_deref(), &emit_views(&d, &schema))?;
            Ok(EXIT_OK)
        }
    }
}
