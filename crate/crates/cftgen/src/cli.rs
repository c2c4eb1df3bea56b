//! Command-line front end.
//!
//! Exit codes: 0 success, 1 findings with errors or a failed generation or
//! analysis, 2 usage error, 3 I/O or parse failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use cftgen_core::analysis::{shared_tops, AnalysisError, DiffOptions};
use cftgen_core::generate::{CrossWiring, TraceEvent, UndrivenInputPolicy};
use cftgen_core::{
    diff, flatten, generate, minimal_cut_sets, validate_rule_set, validate_system, CftProject,
    ConnectorTypeTable, FailureModeRef, GenerationOptions, RuleLibrary, ValidationReport,
};

use crate::cftdoc::{export_cft, import_cft, parse_failure_mode_ref, Metadata};
use crate::dot::{project_to_dot, tree_to_dot};
use crate::error::FormatError;
use crate::project::{parse_cfc_project, CfcProject};
use crate::report::{
    ComparisonDoc, DiffDoc, ErrorDoc, GenerationDoc, Report, StructureDoc, TopDoc,
};
use crate::rulefile::parse_rule_library;
use crate::trace::trace_to_json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FINDINGS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Undriven {
    /// Eliminate terms over undriven inputs
    False,
    /// Model undriven inputs as basic events
    BasicEvent,
}

#[derive(Debug, Parser)]
#[command(
    name = "cftgen",
    version,
    about = "Generate and analyse component fault trees from CFC projects"
)]
struct Cli {
    /// Report format on standard output
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Print nothing on standard output except requested documents
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a project and optionally a rule library against it
    Validate {
        project: PathBuf,
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Generate the component fault trees of a project
    Generate {
        project: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        /// Fail on blocks without a rule set instead of applying the worst case
        #[arg(long)]
        no_worst_case: bool,
        /// Also connect unconnected inports to same-named outports
        #[arg(long)]
        name_matching: bool,
        #[arg(long, value_enum, default_value = "false")]
        undriven: Undriven,
        /// Write the CFT document here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Minimal cut sets of output failure modes
    Analyze {
        cft: PathBuf,
        /// component/port/failure-type, repeatable
        #[arg(long = "top", required = true)]
        tops: Vec<String>,
    },
    /// Compare two CFT documents by their minimal cut sets
    Diff {
        a: PathBuf,
        b: PathBuf,
        /// component/port/failure-type, repeatable; default all shared tops
        #[arg(long = "top")]
        tops: Vec<String>,
    },
    /// Render a CFT document, or one flattened tree of it, as DOT
    ExportDot {
        cft: PathBuf,
        #[arg(long)]
        top: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failed step together with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind,
            message: message.into(),
        }
    }

    fn findings(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FINDINGS,
            kind,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }

    fn format(path: &Path, e: FormatError) -> Self {
        let kind = match e {
            FormatError::Syntax { .. } => "syntax",
            FormatError::Schema { .. } => "schema",
            FormatError::DuplicateRuleKey { .. } => "duplicate-rule",
        };
        Failure::input(kind, format!("{}: {e}", path.display()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input("io", format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::input("io", format!("cannot write {}: {e}", path.display())))
}

fn load_project(path: &Path) -> Result<(CfcProject, String), Failure> {
    let text = read(path)?;
    let p = parse_cfc_project(&text).map_err(|e| Failure::format(path, e))?;
    Ok((p, text))
}

fn load_rules(path: &Path) -> Result<(RuleLibrary, String), Failure> {
    let text = read(path)?;
    let lib = parse_rule_library(&text).map_err(|e| Failure::format(path, e))?;
    Ok((lib, text))
}

fn load_cft(path: &Path) -> Result<CftProject, Failure> {
    let text = read(path)?;
    import_cft(&text)
        .map(|(p, _)| p)
        .map_err(|e| Failure::format(path, e))
}

fn merged_types(project: &CfcProject, lib: &RuleLibrary) -> Result<ConnectorTypeTable, Failure> {
    let mut t = project.connector_types();
    t.merge(&lib.connector_types).map_err(|e| {
        Failure::findings("schema", format!("project and rule library disagree: {e}"))
    })?;
    Ok(t)
}

fn parse_top(s: &str) -> Result<FailureModeRef, Failure> {
    parse_failure_mode_ref(s).ok_or_else(|| {
        Failure::usage(format!(
            "`{s}` is not of the form component/port/failure-type"
        ))
    })
}

fn analysis_failure(e: AnalysisError) -> Failure {
    Failure::findings("analysis", e.to_string())
}

fn validate(report: &mut Report, project: &Path, rules: Option<&Path>) -> Result<(), Failure> {
    let (p, _) = load_project(project)?;
    let mut rule_findings = ValidationReport::new();
    let types = match rules {
        Some(path) => {
            let (lib, _) = load_rules(path)?;
            let types = merged_types(&p, &lib)?;
            for c in &p.system.components {
                for b in &c.diagram.blocks {
                    if let Some(rs) = lib.get(&b.block_type) {
                        let mut r = validate_rule_set(rs, b, &types);
                        for f in &mut r.findings {
                            f.location = format!("{}/{}", c.name, f.location);
                        }
                        rule_findings.extend(r);
                    }
                }
            }
            types
        }
        None => p.connector_types(),
    };
    report.add_findings(&validate_system(&p.system, &types));
    report.add_findings(&rule_findings);
    Ok(())
}

struct GenerateArgs<'a> {
    project: &'a Path,
    rules: &'a Path,
    opts: GenerationOptions,
    output: Option<&'a Path>,
    dot: Option<&'a Path>,
    trace: Option<&'a Path>,
}

/// Returns the CFT document when it goes to standard output.
fn generate_cmd(report: &mut Report, a: &GenerateArgs<'_>) -> Result<Option<String>, Failure> {
    let (p, project_text) = load_project(a.project)?;
    let (mut lib, rules_text) = load_rules(a.rules)?;
    lib.connector_types = merged_types(&p, &lib)?;
    let findings = validate_system(&p.system, &lib.connector_types);
    report.add_findings(&findings);
    if !findings.is_valid() {
        return Err(Failure::findings(
            "generation",
            "the project has validation errors",
        ));
    }
    let (cft, trace) = generate(&p.system, &lib, &a.opts)
        .map_err(|e| Failure::findings("generation", e.to_string()))?;
    let metadata = Metadata::for_tool()
        .with_input("project", project_text.as_bytes())
        .with_input("rules", rules_text.as_bytes());
    let doc = export_cft(&cft, &metadata);
    if let Some(path) = a.dot {
        write(path, &project_to_dot(&cft))?;
    }
    if let Some(path) = a.trace {
        write(path, &trace_to_json(&trace))?;
    }
    report.generation = Some(GenerationDoc {
        elements: cft.elements.len(),
        gates: cft.elements.iter().map(|e| e.gates.len()).sum(),
        worst_case: trace
            .events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::WorstCaseApplied {
                    component,
                    block,
                    block_type,
                } => Some(format!("{component}/{block} ({block_type})")),
                _ => None,
            })
            .collect(),
        output: a.output.map(|o| o.display().to_string()),
    });
    match a.output {
        Some(path) => {
            write(path, &doc)?;
            Ok(None)
        }
        None => Ok(Some(doc)),
    }
}

fn analyze(report: &mut Report, cft: &Path, tops: &[String]) -> Result<(), Failure> {
    let tops = tops
        .iter()
        .map(|t| parse_top(t))
        .collect::<Result<Vec<_>, _>>()?;
    let project = load_cft(cft)?;
    let mut out = Vec::new();
    for top in &tops {
        let tree = flatten(&project, top).map_err(|e| analysis_failure(e.into()))?;
        let cut_sets = minimal_cut_sets(&tree).map_err(analysis_failure)?;
        out.push(TopDoc {
            top: top.to_string(),
            cut_sets,
        });
    }
    report.analysis = Some(out);
    Ok(())
}

fn diff_cmd(report: &mut Report, a: &Path, b: &Path, tops: &[String]) -> Result<(), Failure> {
    let tops = tops
        .iter()
        .map(|t| parse_top(t))
        .collect::<Result<Vec<_>, _>>()?;
    let pa = load_cft(a)?;
    let pb = load_cft(b)?;
    let tops = if tops.is_empty() {
        shared_tops(&pa, &pb)
    } else {
        tops
    };
    let d = diff(&pa, &pb, &tops, &DiffOptions::default()).map_err(analysis_failure)?;
    report.diff = Some(DiffDoc {
        tops: d.tops.iter().map(ComparisonDoc::from).collect(),
        structure: StructureDoc::from(&d.structure),
    });
    if !d.all_equivalent() {
        report.exit_code = EXIT_FINDINGS;
    }
    Ok(())
}

fn export_dot(
    cft: &Path,
    top: Option<&str>,
    output: Option<&Path>,
) -> Result<Option<String>, Failure> {
    let project = load_cft(cft)?;
    let text = match top {
        Some(t) => {
            let top = parse_top(t)?;
            let tree = flatten(&project, &top).map_err(|e| analysis_failure(e.into()))?;
            tree_to_dot(&tree, &top.to_string())
        }
        None => project_to_dot(&project),
    };
    match output {
        Some(path) => {
            write(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_USAGE
            };
        }
    };

    let (mut report, result) = match &cli.command {
        Command::Validate { project, rules } => {
            let mut r = Report::new("validate");
            let res = validate(&mut r, project, rules.as_deref()).map(|()| None);
            (r, res)
        }
        Command::Generate {
            project,
            rules,
            no_worst_case,
            name_matching,
            undriven,
            output,
            dot,
            trace,
        } => {
            let mut r = Report::new("generate");
            let opts = GenerationOptions {
                worst_case_fallback: !no_worst_case,
                undriven_input_policy: match undriven {
                    Undriven::False => UndrivenInputPolicy::EliminateAsFalse,
                    Undriven::BasicEvent => UndrivenInputPolicy::SynthesizeBasicEvent,
                },
                cross_wiring: if *name_matching {
                    CrossWiring::Both
                } else {
                    CrossWiring::ExplicitConnections
                },
            };
            let args = GenerateArgs {
                project,
                rules,
                opts,
                output: output.as_deref(),
                dot: dot.as_deref(),
                trace: trace.as_deref(),
            };
            let res = generate_cmd(&mut r, &args);
            (r, res)
        }
        Command::Analyze { cft, tops } => {
            let mut r = Report::new("analyze");
            let res = analyze(&mut r, cft, tops).map(|()| None);
            (r, res)
        }
        Command::Diff { a, b, tops } => {
            let mut r = Report::new("diff");
            let res = diff_cmd(&mut r, a, b, tops).map(|()| None);
            (r, res)
        }
        Command::ExportDot { cft, top, output } => {
            let r = Report::new("export-dot");
            let res = export_dot(cft, top.as_deref(), output.as_deref());
            (r, res)
        }
    };

    let document = match result {
        Ok(doc) => {
            if report.error_count() > 0 {
                report.exit_code = EXIT_FINDINGS;
            }
            doc
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            report.exit_code = f.code;
            report.error = Some(ErrorDoc {
                kind: f.kind,
                message: f.message,
            });
            None
        }
    };

    match document {
        // the requested document owns standard output
        Some(doc) => {
            let _ = stdout.write_all(doc.as_bytes());
        }
        None if cli.quiet => {}
        None => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text if report.command == "export-dot" => String::new(),
                Format::Text => report.to_text(),
            };
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    report.exit_code
}
