mod commands;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morita_gp::complex::{SearchBounds, DEFAULT_BUDGET, DEFAULT_PERIOD_BOUND, DEFAULT_WINDOW};
use morita_gp::io::{InputError, Problem};
use serde_json::{json, Value};

use commands::{Command, Flags, NcAction};
use report::{input_error_json, Report, Status};

/// Gorenstein-projective modules over Morita context rings.
#[derive(Parser, Debug)]
#[command(name = "mgp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Resolve and validate every object in a problem file.
    Validate(Run),
    /// Build the Morita context ring and list its structure constants.
    BuildRing(Run),
    /// Indecomposable projective and injective modules as quadruples.
    Classify(Run),
    /// Decide the Gorenstein-projectivity criterion for a quadruple.
    CheckGp(Run),
    /// Certify a module Gorenstein-projective by a periodic complete resolution.
    CertifyGp(Run),
    /// Build the total complete resolution of a quadruple that passes the criterion.
    BuildResolution(Run),
    /// Weak compatibility of a bimodule, or semi-weak compatibility with `--side`.
    CheckCompat(Run),
    /// The noncommutative tensor product of a context with zero maps.
    NcTensor {
        #[arg(value_enum)]
        action: NcArg,
        #[command(flatten)]
        run: Run,
    },
    /// Compare the criterion with direct certification on a family of modules.
    Audit(Run),
    /// Re-check the witnesses of a saved JSON report and re-run its invocation.
    VerifyReport {
        problem: PathBuf,
        report: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NcArg {
    Build,
    Iso,
    Check,
}

#[derive(Args, Debug)]
struct Run {
    /// Problem file (JSON).
    problem: PathBuf,
    #[command(flatten)]
    target: Target,
    /// Emit the full report object as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = DEFAULT_PERIOD_BOUND)]
    period_bound: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Overrides for the problem file's `command` payload.
#[derive(Args, Debug, Default)]
struct Target {
    #[arg(long)]
    context: Option<String>,
    #[arg(long)]
    extension: Option<String>,
    #[arg(long)]
    quadruple: Option<String>,
    #[arg(long)]
    module: Option<String>,
    #[arg(long)]
    bimodule: Option<String>,
    /// left-n, left-i, right-m or right-i.
    #[arg(long)]
    side: Option<String>,
    /// Test complex, repeatable.
    #[arg(long = "test")]
    tests: Vec<String>,
    /// Family member, repeatable.
    #[arg(long = "family")]
    family: Vec<String>,
    #[arg(long)]
    random_family: Option<usize>,
}

impl Target {
    fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        for (k, v) in [
            ("context", &self.context),
            ("extension", &self.extension),
            ("quadruple", &self.quadruple),
            ("module", &self.module),
            ("bimodule", &self.bimodule),
            ("side", &self.side),
        ] {
            if let Some(v) = v {
                m.insert(k.into(), json!(v));
            }
        }
        if !self.tests.is_empty() {
            m.insert("tests".into(), json!(self.tests));
        }
        if !self.family.is_empty() {
            m.insert("family".into(), json!(self.family));
        }
        if let Some(n) = self.random_family {
            m.insert("random_family".into(), json!(n));
        }
        Value::Object(m)
    }

    fn from_json(v: &Value) -> Target {
        let s = |k: &str| v.get(k).and_then(Value::as_str).map(String::from);
        let list = |k: &str| -> Vec<String> {
            v.get(k).and_then(Value::as_array).into_iter().flatten().filter_map(Value::as_str).map(String::from).collect()
        };
        Target {
            context: s("context"),
            extension: s("extension"),
            quadruple: s("quadruple"),
            module: s("module"),
            bimodule: s("bimodule"),
            side: s("side"),
            tests: list("tests"),
            family: list("family"),
            random_family: v.get("random_family").and_then(Value::as_u64).map(|n| n as usize),
        }
    }

    fn apply(&self, p: &mut Problem) {
        let c = &mut p.command;
        for (dst, src) in [
            (&mut c.context, &self.context),
            (&mut c.extension, &self.extension),
            (&mut c.quadruple, &self.quadruple),
            (&mut c.module, &self.module),
            (&mut c.bimodule, &self.bimodule),
            (&mut c.side, &self.side),
        ] {
            if src.is_some() {
                dst.clone_from(src);
            }
        }
        if !self.tests.is_empty() {
            c.tests.clone_from(&self.tests);
        }
        if !self.family.is_empty() {
            c.family.clone_from(&self.family);
        }
        if self.random_family.is_some() {
            c.random_family = self.random_family;
        }
    }
}

fn load(path: &Path, bounds: SearchBounds) -> Result<Problem, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError { location: path.display().to_string(), message: e.to_string() })?;
    Problem::parse(&text, bounds)
}

fn invocation(cmd: Command, target: &Target, flags: &Flags) -> Value {
    let action = match cmd {
        Command::NcTensor(a) => Some(a.name()),
        _ => None,
    };
    json!({ "command": cmd.name(), "action": action, "target": target.to_json(), "flags": flags.to_json() })
}

fn execute(problem: &Path, cmd: Command, target: &Target, flags: &Flags) -> Result<Report, InputError> {
    let mut p = load(problem, flags.bounds)?;
    target.apply(&mut p);
    commands::run(cmd, &mut p, flags, invocation(cmd, target, flags))
}

fn command_of(name: &str, action: Option<&str>) -> Option<Command> {
    Some(match name {
        "validate" => Command::Validate,
        "build-ring" => Command::BuildRing,
        "classify" => Command::Classify,
        "check-gp" => Command::CheckGp,
        "certify-gp" => Command::CertifyGp,
        "build-resolution" => Command::BuildResolution,
        "check-compat" => Command::CheckCompat,
        "audit" => Command::Audit,
        "nc-tensor" => Command::NcTensor(match action? {
            "build" => NcAction::Build,
            "iso" => NcAction::Iso,
            "check" => NcAction::Check,
            _ => return None,
        }),
        _ => return None,
    })
}

fn verify_report(problem: &Path, report_path: &Path) -> Result<Report, InputError> {
    let loc = report_path.display().to_string();
    let bad = |m: &str| InputError { location: loc.clone(), message: m.to_string() };
    let text = std::fs::read_to_string(report_path).map_err(|e| bad(&e.to_string()))?;
    let report: Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let inv = &report["invocation"];
    let cmd = command_of(inv["command"].as_str().unwrap_or(""), inv["action"].as_str()).ok_or_else(|| bad("unknown command in invocation"))?;
    let fl = &inv["flags"];
    let num = |k: &str, d: usize| fl.get(k).and_then(Value::as_u64).map_or(d, |n| n as usize);
    let flags = Flags {
        bounds: SearchBounds {
            window: num("window", DEFAULT_WINDOW),
            period_bound: num("period_bound", DEFAULT_PERIOD_BOUND),
            budget: num("budget", DEFAULT_BUDGET),
        },
        seed: fl.get("seed").and_then(Value::as_u64).unwrap_or(0),
    };
    let target = Target::from_json(&inv["target"]);
    let p = load(problem, flags.bounds)?;
    let mut checks = verify::check_report(p.field(), &report)?;
    let rerun = execute(problem, cmd, &target, &flags)?;
    checks.push(("re-run is byte-identical".into(), rerun.render_json() == text.trim_end()));
    let ok = checks.iter().all(|(_, b)| *b);
    let summary = checks.iter().map(|(n, b)| format!("{}: {n}", if *b { "ok" } else { "FAILED" })).collect();
    Ok(Report {
        command: "verify-report".into(),
        invocation: json!({ "command": "verify-report", "report": cmd.name() }),
        status: if ok { Status::Ok } else { Status::Fail },
        result: json!({ "checks": verify::checks_json(&checks) }),
        witness: None,
        summary,
    })
}

fn emit(r: Result<Report, InputError>, json: bool) -> ExitCode {
    match r {
        Ok(r) => {
            if json {
                println!("{}", r.render_json());
            } else {
                print!("{}", r.render_text());
            }
            ExitCode::from(r.status.exit_code())
        }
        Err(e) => {
            if json {
                println!("{}", input_error_json(&e));
            }
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let (cmd, run) = match cli.command {
        Cmd::VerifyReport { problem, report, json } => return emit(verify_report(&problem, &report), json),
        Cmd::Validate(r) => (Command::Validate, r),
        Cmd::BuildRing(r) => (Command::BuildRing, r),
        Cmd::Classify(r) => (Command::Classify, r),
        Cmd::CheckGp(r) => (Command::CheckGp, r),
        Cmd::CertifyGp(r) => (Command::CertifyGp, r),
        Cmd::BuildResolution(r) => (Command::BuildResolution, r),
        Cmd::CheckCompat(r) => (Command::CheckCompat, r),
        Cmd::Audit(r) => (Command::Audit, r),
        Cmd::NcTensor { action, run } => {
            let a = match action {
                NcArg::Build => NcAction::Build,
                NcArg::Iso => NcAction::Iso,
                NcArg::Check => NcAction::Check,
            };
            (Command::NcTensor(a), run)
        }
    };
    let flags = Flags {
        bounds: SearchBounds { window: run.window, period_bound: run.period_bound, budget: run.budget },
        seed: run.seed,
    };
    emit(execute(&run.problem, cmd, &run.target, &flags), run.json)
}
