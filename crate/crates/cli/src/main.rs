use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use diamond::ambiguity::{critical_ambiguities_with, resolve_with, AmbiguityClass, AmbiguityOptions, Resolution};
use diamond::completion::{
    check_confluence_with, complete, ideal_member, CompletionStatus, ConfluenceVerdict, Inconclusive, Limits,
};
use diamond::rewriting::{count_irreducible, irr_description, normal_form_with, Forbidding, NormalFormOptions};
use diamond::series::truncated_normal_form_with;
use diamond::syntax::{parse_expression, parse_system, print_system};
use diamond::{Ambiguity, Element, Error, Precision, RewriteStep, RewritingSystem};

const OK: u8 = 0;
const FAILED: u8 = 1;
const BUDGET: u8 = 2;
const INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "diamond", version, about = "Normal forms, confluence checks and completion for rewriting systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the main output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Rewriting steps allowed per normal form.
    #[arg(long, global = true, default_value_t = diamond::rewriting::DEFAULT_MAX_STEPS)]
    max_steps: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Decide confluence by resolving every critical ambiguity.
    Check { file: PathBuf },
    /// Run completion and print the resulting system.
    Complete {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, default_value_t = 500)]
        max_rules: usize,
    },
    /// Normal form of an expression.
    Nf {
        file: PathBuf,
        expr: String,
        /// Reduce modulo the neighbourhood B_N (series systems need this).
        #[arg(long)]
        precision: Option<u32>,
        /// Print every rewriting step.
        #[arg(long)]
        trail: bool,
    },
    /// List critical ambiguities with their resolution status.
    Pairs {
        file: PathBuf,
        /// Also list coprime pairs the first criterion discards.
        #[arg(long)]
        all: bool,
    },
    /// Describe the irreducible monomials and count them per degree.
    Irr {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Decide ideal membership (the system must be confluent).
    Member { file: PathBuf, expr: String },
}

struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn text(&mut self, line: impl AsRef<str>) {
        if self.format == Format::Text {
            self.buf.push_str(line.as_ref());
            self.buf.push('\n');
        }
    }

    fn json(&mut self, v: Value) {
        if self.format == Format::JsonLines {
            self.buf.push_str(&v.to_string());
            self.buf.push('\n');
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { format: cli.format, buf: String::new() };
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            INPUT
        }
        Err(Failure::Engine(e @ Error::Parse { .. })) => {
            eprintln!("error: {}:{e}", cli.command.file().display());
            INPUT
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &out.buf),
        None => io::stdout().write_all(out.buf.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(INPUT);
    }
    ExitCode::from(code)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::StepBudgetExceeded(_) => BUDGET,
        Error::NotConfluentSystem => FAILED,
        _ => INPUT,
    }
}

impl Command {
    fn file(&self) -> &Path {
        match self {
            Command::Check { file }
            | Command::Complete { file, .. }
            | Command::Nf { file, .. }
            | Command::Pairs { file, .. }
            | Command::Irr { file, .. }
            | Command::Member { file, .. } => file,
        }
    }
}

enum Failure {
    /// Unreadable files and malformed expression arguments.
    Input(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn load(path: &Path) -> Result<RewritingSystem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_system(&text)?)
}

fn expression(sys: &RewritingSystem, text: &str) -> Result<Element, Failure> {
    parse_expression(sys, text).map_err(|e| Failure::Input(format!("expression {text:?}: {e}")))
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8, Failure> {
    match &cli.command {
        Command::Check { file } => {
            let sys = load(file)?;
            Ok(report_verdict(&sys, &check_confluence_with(&sys, cli.max_steps), out))
        }
        Command::Complete { file, max_degree, max_rules } => {
            let sys = load(file)?;
            let limits = Limits { max_degree: *max_degree, max_rules: *max_rules, max_steps: cli.max_steps };
            let report = complete(&sys, limits)?;
            let done = &report.system;
            let status = match report.status {
                CompletionStatus::Complete => "complete",
                CompletionStatus::DegreeCapped => "degree_capped",
                CompletionStatus::RuleCapped => "rule_capped",
            };
            out.text(print_system(done));
            for (i, r) in done.rules().iter().enumerate() {
                out.json(json!({
                    "kind": "rule", "index": i,
                    "lead": done.theory().render(&r.lead), "lower": done.render(&r.lower),
                }));
            }
            for d in &report.dropped {
                out.json(json!({
                    "kind": "dropped", "lead": done.theory().render(&d.rule.lead),
                    "lower": done.render(&d.rule.lower), "steps": d.steps,
                }));
            }
            out.json(json!({
                "kind": "completion", "status": status, "rules": done.len(),
                "added": report.added.len(), "dropped": report.dropped.len(), "pending": report.pending,
            }));
            eprintln!(
                "{status}: {} rules ({} added, {} dropped, {} pending)",
                done.len(),
                report.added.len(),
                report.dropped.len(),
                report.pending
            );
            Ok(if report.status == CompletionStatus::Complete { OK } else { BUDGET })
        }
        Command::Nf { file, expr, precision, trail } => {
            let sys = load(file)?;
            let a = expression(&sys, expr)?;
            let opts = NormalFormOptions { max_steps: cli.max_steps, record_trail: *trail };
            let (nf, truncated, steps) = match precision {
                Some(n) => {
                    let r = truncated_normal_form_with(&sys, &a, Precision::new(*n)?, opts)?;
                    (r.representative, r.truncated, r.trail)
                }
                None => {
                    let r = normal_form_with(&sys, &a, opts)?;
                    (r.element, false, r.trail)
                }
            };
            for (i, s) in steps.iter().enumerate() {
                out.text(format!("{:>4}. {}", i + 1, describe_step(&sys, s)));
                out.json(json!({
                    "kind": "step", "index": i, "rule": s.rule,
                    "monomial": sys.theory().render(&s.monomial), "coefficient": s.coefficient.to_string(),
                }));
            }
            out.text(sys.render(&nf));
            out.json(json!({
                "kind": "normal_form", "input": sys.render(&a), "result": sys.render(&nf),
                "precision": precision, "truncated": truncated, "steps": steps.len(),
            }));
            Ok(OK)
        }
        Command::Pairs { file, all } => {
            let sys = load(file)?;
            let opts = AmbiguityOptions { keep_montages: *all, mixed_gap: diamond::ambiguity::MIXED_GAP_BOUND };
            let mut code = OK;
            for amb in critical_ambiguities_with(&sys, opts) {
                let cert = match resolve_with(&sys, &amb, cli.max_steps) {
                    Ok(c) => c,
                    Err(e @ Error::StepBudgetExceeded(_)) => {
                        eprintln!("error: {e}");
                        code = code.max(BUDGET);
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let resolved = cert.status == Resolution::Resolved;
                if !resolved && code == OK {
                    code = FAILED;
                }
                out.text(format!(
                    "{} {} {} {}: {} => {}",
                    class_name(&amb),
                    amb.rule1,
                    amb.rule2,
                    sys.theory().render(&amb.superposition),
                    sys.render(&cert.s_polynomial),
                    if resolved { "resolved".to_string() } else { sys.render(&cert.remainder) }
                ));
                let mut record = ambiguity_json(&sys, &amb);
                record["kind"] = json!("ambiguity");
                record["s_polynomial"] = json!(sys.render(&cert.s_polynomial));
                record["remainder"] = json!(sys.render(&cert.remainder));
                record["resolved"] = json!(resolved);
                out.json(record);
            }
            Ok(code)
        }
        Command::Irr { file, max_degree } => {
            let sys = load(file)?;
            let d = irr_description(&sys);
            let how = match d.semantics {
                Forbidding::Factor => "factor",
                Forbidding::Divisibility => "divisor",
            };
            let leads: Vec<String> = d.leads.iter().map(|l| sys.theory().render(l)).collect();
            out.text(format!("forbidden as {how}: {}", if leads.is_empty() { "none".into() } else { leads.join(", ") }));
            out.json(json!({ "kind": "forbidden", "semantics": how, "leads": leads }));
            let counts = count_irreducible(&sys, *max_degree);
            for (deg, n) in counts.iter().enumerate() {
                out.text(format!("degree {deg}: {n}"));
                out.json(json!({ "kind": "count", "degree": deg, "irreducible": n }));
            }
            Ok(OK)
        }
        Command::Member { file, expr } => {
            let sys = load(file)?;
            let a = expression(&sys, expr)?;
            let member = ideal_member(&sys, &a)?;
            out.text(if member { "member" } else { "not a member" });
            out.json(json!({ "kind": "member", "element": sys.render(&a), "member": member }));
            Ok(OK)
        }
    }
}

fn report_verdict(sys: &RewritingSystem, verdict: &ConfluenceVerdict, out: &mut Out) -> u8 {
    match verdict {
        ConfluenceVerdict::Confluent => {
            out.text("confluent");
            out.json(json!({ "kind": "verdict", "verdict": "confluent" }));
            OK
        }
        ConfluenceVerdict::NotConfluent { ambiguity, remainder } => {
            out.text("not confluent");
            out.text(format!(
                "ambiguity: {} of rules {} and {} at {}",
                class_name(ambiguity),
                ambiguity.rule1,
                ambiguity.rule2,
                sys.theory().render(&ambiguity.superposition)
            ));
            out.text(format!("witness: {}", sys.render(remainder)));
            let mut record = json!({ "kind": "verdict", "verdict": "not_confluent" });
            record["ambiguity"] = ambiguity_json(sys, ambiguity);
            record["witness"] = json!(sys.render(remainder));
            out.json(record);
            FAILED
        }
        ConfluenceVerdict::Inconclusive(why) => {
            let reason = match why {
                Inconclusive::Budget(msg) => msg.clone(),
                Inconclusive::MixedGap(n) => {
                    format!("every checked ambiguity resolves, but disjoint mixed families were only expanded up to gap {n}")
                }
            };
            out.text(format!("inconclusive: {reason}"));
            out.json(json!({ "kind": "verdict", "verdict": "inconclusive", "reason": reason }));
            BUDGET
        }
    }
}

fn class_name(a: &Ambiguity) -> &'static str {
    match a.class {
        AmbiguityClass::Overlap => "overlap",
        AmbiguityClass::Inclusion { .. } => "inclusion",
        AmbiguityClass::Montage => "montage",
        AmbiguityClass::Disjoint => "disjoint",
    }
}

fn ambiguity_json(sys: &RewritingSystem, a: &Ambiguity) -> Value {
    json!({
        "class": class_name(a),
        "rule1": a.rule1,
        "rule2": a.rule2,
        "superposition": sys.theory().render(&a.superposition),
    })
}

fn describe_step(sys: &RewritingSystem, s: &RewriteStep) -> String {
    let term = Element::term(s.monomial.clone(), s.coefficient.clone());
    format!("{} by rule {} ({})", sys.render(&term), s.rule, sys.render_rule(sys.rule(s.rule)))
}
