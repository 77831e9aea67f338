//! Command implementations for the `agcode` binary.
//!
//! Every command writes a JSON document to stdout (or the output file) and
//! human-readable lines to stderr. Exit status: 0 success, 1 a check
//! failed, 2 a precondition or usage error.

use std::fs;
use std::path::PathBuf;

use agcode::analysis::{self, AnalysisError, DEFAULT_MESSAGE_GUARD};
use agcode::construction::{self, Construction, ConstructionError, Instance};
use agcode::families::{Family, FamilyError};
use agcode::schema::{CodeFile, InstanceFile, SchemaError};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "agcode",
    version,
    about = "Evaluation codes from Galois-point automorphism groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the code and write it as JSON.
    Construct {
        #[command(flatten)]
        target: Target,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check every computable hypothesis and report each one.
    Verify {
        #[command(flatten)]
        target: Target,
    },
    /// Exact minimum distance by exhaustive enumeration.
    Distance {
        #[command(flatten)]
        target: Target,
        /// Largest number of messages to enumerate.
        #[arg(long, default_value_t = DEFAULT_MESSAGE_GUARD)]
        max_messages: u64,
    },
    /// Certify that <G1, G2> embeds in the code's automorphism group.
    Automorphisms {
        #[command(flatten)]
        target: Target,
    },
    /// Re-serialize an instance or code file, or write a built-in instance.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Which instance to work on: a built-in family, or `custom` with `--input`.
#[derive(Debug, Clone, Args)]
pub struct Target {
    /// fermat, projline, bf or custom
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Multiplier m for L(m D_0); by default the code uses D itself.
    #[arg(long)]
    pub m: Option<u32>,
    /// Instance file (or, for export, a code file).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub status: i32,
    pub report: Value,
    pub messages: Vec<String>,
    /// Path and contents to write instead of printing the report.
    pub file: Option<(PathBuf, String)>,
}

impl Outcome {
    fn new(status: i32, report: Value) -> Self {
        Outcome {
            status,
            report,
            messages: Vec::new(),
            file: None,
        }
    }

    fn say(mut self, line: impl Into<String>) -> Self {
        self.messages.push(line.into());
        self
    }
}

#[derive(Debug)]
enum Failure {
    Check(String),
    Precondition { code: &'static str, message: String },
}

impl Failure {
    fn into_outcome(self) -> Outcome {
        match self {
            Failure::Check(message) => {
                Outcome::new(1, json!({"status": "check_failed", "message": message}))
                    .say(format!("check failed: {message}"))
            }
            Failure::Precondition { code, message } => Outcome::new(
                2,
                json!({"status": "error", "code": code, "message": message}),
            )
            .say(format!("error: {message}")),
        }
    }
}

fn precondition(code: &'static str, message: impl ToString) -> Failure {
    Failure::Precondition {
        code,
        message: message.to_string(),
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match &e {
            ConstructionError::ConditionFailed(_) | ConstructionError::NotGroundValued { .. } => {
                Failure::Check(e.to_string())
            }
            ConstructionError::NoValidQPrime { .. } => precondition("no_valid_qprime", e),
            ConstructionError::Family(FamilyError::ProjLineParameter(_)) => {
                precondition("parity", e)
            }
            ConstructionError::Family(FamilyError::Unknown(_)) => precondition("unknown_family", e),
            _ => precondition("precondition", e),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BoundViolated { .. } => Failure::Check(e.to_string()),
            AnalysisError::GuardExceeded { .. } => precondition("guard_exceeded", e),
            _ => precondition("precondition", e),
        }
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        match e {
            SchemaError::Construction(c) => c.into(),
            other => precondition("bad_input", other),
        }
    }
}

fn load_instance(target: &Target) -> Result<Instance, Failure> {
    let family = target
        .family
        .as_deref()
        .unwrap_or(if target.input.is_some() { "custom" } else { "" });
    let inst = if family == "custom" {
        let path = target
            .input
            .as_ref()
            .ok_or_else(|| precondition("usage", "custom family needs --input"))?;
        let text = fs::read_to_string(path)
            .map_err(|e| precondition("io", format!("{}: {e}", path.display())))?;
        let file: InstanceFile = serde_json::from_str(&text).map_err(SchemaError::from)?;
        file.to_instance()?
    } else {
        if family.is_empty() {
            return Err(precondition("usage", "give --family or --input"));
        }
        let family: Family = family.parse().map_err(ConstructionError::from)?;
        let q = target
            .q
            .ok_or_else(|| precondition("usage", "built-in families need --q"))?;
        Instance::builtin(family, q)?
    };
    Ok(match target.m {
        Some(m) => inst.with_multiplier(m)?,
        None => inst,
    })
}

fn summary(inst: &Instance, built: &Construction) -> String {
    let code = &built.code;
    format!(
        "{}: [{}, {}] over {} with designed distance >= {}, |<G1,G2>| = {}",
        inst.label(),
        code.n(),
        code.k(),
        code.field(),
        code.distance_bound(),
        built.group.order()
    )
}

fn construct(target: &Target, output: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let inst = load_instance(target)?;
    let built = construction::build_code(&inst)?;
    let file = CodeFile::new(&inst, &built);
    let mut out = Outcome::new(0, serde_json::to_value(&file).expect("serializable"))
        .say(summary(&inst, &built));
    if let Some(path) = output {
        out.file = Some((path.clone(), file.to_json()));
    }
    Ok(out)
}

fn verify(target: &Target) -> Result<Outcome, Failure> {
    let inst = load_instance(target)?;
    let checks = construction::verify(&inst)?;
    let passed = checks.iter().all(|c| c.passed);
    let mut out = Outcome::new(
        if passed { 0 } else { 1 },
        json!({"status": if passed { "ok" } else { "check_failed" }, "label": inst.label(), "checks": checks}),
    );
    for c in &checks {
        out = out.say(format!(
            "[{}] {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.condition,
            c.detail
        ));
    }
    Ok(out)
}

fn distance(target: &Target, guard: u64) -> Result<Outcome, Failure> {
    let inst = load_instance(target)?;
    let mut built = construction::build_code(&inst)?;
    let rep = analysis::min_distance_exact(&built.code, guard)?;
    built.code.set_distance_exact(rep.distance)?;
    let mut file = CodeFile::new(&inst, &built);
    file.distance = Some(rep.clone());
    let line = format!(
        "{}: exact d = {}, bound {} ({} codewords scanned)",
        inst.label(),
        rep.distance,
        rep.bound,
        rep.codewords_scanned
    );
    Ok(Outcome::new(
        0,
        json!({
            "status": "ok",
            "label": inst.label(),
            "n": file.n,
            "k": file.k,
            "distance_exact": rep.distance,
            "distance_bound": rep.bound,
            "report": rep,
        }),
    )
    .say(summary(&inst, &built))
    .say(line))
}

fn automorphisms(target: &Target) -> Result<Outcome, Failure> {
    let inst = load_instance(target)?;
    let built = construction::build_code(&inst)?;
    let rep = analysis::verify_faithful(&built.group, built.orbit(), &built.code)?;
    let line = format!(
        "{}: <G1,G2> of order {} -> Aut(C), image of order {}: {}",
        inst.label(),
        rep.group_order,
        rep.image_order,
        if rep.passed {
            "injective"
        } else {
            "NOT injective"
        }
    );
    Ok(Outcome::new(
        if rep.passed { 0 } else { 1 },
        json!({"status": if rep.passed { "ok" } else { "check_failed" }, "label": inst.label(), "faithfulness": rep}),
    )
    .say(line))
}

fn export(target: &Target, output: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let text = match (&target.input, target.family.as_deref()) {
        (Some(path), None | Some("custom")) => {
            let raw = fs::read_to_string(path)
                .map_err(|e| precondition("io", format!("{}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&raw).map_err(SchemaError::from)?;
            if value.get("matrix").is_some() {
                let file: CodeFile = serde_json::from_value(value).map_err(SchemaError::from)?;
                file.to_code()?;
                file.to_json()
            } else {
                let file: InstanceFile =
                    serde_json::from_value(value).map_err(SchemaError::from)?;
                let inst = file.to_instance()?;
                serde_json::to_string_pretty(&InstanceFile::from_instance(&inst))
                    .expect("serializable")
                    + "\n"
            }
        }
        _ => {
            let inst = load_instance(target)?;
            serde_json::to_string_pretty(&InstanceFile::from_instance(&inst)).expect("serializable")
                + "\n"
        }
    };
    let report: Value = serde_json::from_str(&text).expect("just serialized");
    let mut out = Outcome::new(0, report).say("exported");
    if let Some(path) = output {
        out.file = Some((path.clone(), text));
    }
    Ok(out)
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Construct { target, output } => construct(target, output),
        Command::Verify { target } => verify(target),
        Command::Distance {
            target,
            max_messages,
        } => distance(target, *max_messages),
        Command::Automorphisms { target } => automorphisms(target),
        Command::Export { target, output } => export(target, output),
    };
    result.unwrap_or_else(Failure::into_outcome)
}
