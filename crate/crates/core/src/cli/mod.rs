//! Batch front end: parses an input ideal, runs one pipeline and builds a
//! deterministic report.

pub mod parse;
pub mod report;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::kuranishi::{base_components, semiuniversal, verify_flatness, KuranishiError, DEFAULT_DEPTH, DEFAULT_ORDER};
use crate::resolvent::{build_resolvent, verify_resolvent, InputIdeal, ResolventError};
use crate::tangent::{tangent_cohomology, weight_band, TangentError};

pub use parse::{parse_input, InputOptions, ParseError, ParsedInput};
pub use report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Resolve,
    Tangent,
    Deform,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Resolve => "resolve",
            Command::Tangent => "tangent",
            Command::Deform => "deform",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Path(PathBuf),
    Inline(String),
}

/// Command-line values override options given in the input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub input: InputSource,
    pub depth: Option<u32>,
    pub order: Option<u32>,
    pub weight_bound: Option<i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("cannot read input: {0}")]
    Io(String),
    #[error(transparent)]
    Parse(ParseError),
    #[error("invalid job: {0}")]
    Semantic(String),
    #[error("certification failed: {0}")]
    Certification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(ParseError::Syntax { .. }) => 1,
            CliError::Parse(ParseError::Semantic(_)) | CliError::Semantic(_) => 2,
            CliError::Certification(_) => 3,
        }
    }
}

impl From<ResolventError> for CliError {
    fn from(e: ResolventError) -> Self {
        match e {
            ResolventError::NonMinimalCycle { .. } => CliError::Certification(e.to_string()),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<TangentError> for CliError {
    fn from(e: TangentError) -> Self {
        match e {
            TangentError::WeightBoundTooSmall { .. } => CliError::Semantic(e.to_string()),
            other => CliError::Certification(other.to_string()),
        }
    }
}

impl From<KuranishiError> for CliError {
    fn from(e: KuranishiError) -> Self {
        match e {
            KuranishiError::OrderTooSmall => CliError::Semantic(e.to_string()),
            KuranishiError::Resolvent(e) => e.into(),
            KuranishiError::Tangent(e) => e.into(),
            other => CliError::Certification(other.to_string()),
        }
    }
}

/// A finished job. `certified` is false when a check in the report failed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub certified: bool,
    pub timings: Vec<(String, Duration)>,
}

fn read_input(src: &InputSource) -> Result<String, CliError> {
    match src {
        InputSource::Inline(s) => Ok(s.clone()),
        InputSource::Path(p) if p.as_os_str() == "-" => {
            std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(e.to_string()))
        }
        InputSource::Path(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
    }
}

struct Settings {
    depth: u32,
    order: u32,
    weight_bound: i64,
}

fn settings(job: &JobSpec, opts: &InputOptions, ideal: &InputIdeal) -> Result<Settings, CliError> {
    let depth = job.depth.or(opts.depth).unwrap_or(DEFAULT_DEPTH);
    if depth < 2 {
        return Err(CliError::Semantic(format!("depth must be at least 2, got {depth}")));
    }
    let order = job.order.or(opts.order).unwrap_or(DEFAULT_ORDER);
    if order < 1 {
        return Err(CliError::Semantic("order must be at least 1".into()));
    }
    let weight_bound = job.weight_bound.or(opts.weight_bound).unwrap_or_else(|| ideal.default_weight_bound(depth));
    let needed = ideal.generator_weights().into_iter().max().unwrap_or(0);
    if weight_bound < needed {
        return Err(CliError::Semantic(format!(
            "weight bound {weight_bound} is below the top generator weight {needed}"
        )));
    }
    Ok(Settings { depth, order, weight_bound })
}

struct Clock {
    start: Instant,
    timings: Vec<(String, Duration)>,
}

impl Clock {
    fn new() -> Self {
        Clock { start: Instant::now(), timings: Vec::new() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.push((stage.to_string(), now - self.start));
        self.start = now;
    }
}

fn empty_report(command: Command, input: report::InputEcho) -> Report {
    Report {
        command: command.name().to_string(),
        input,
        resolvent: None,
        parameters: Vec::new(),
        t1: Vec::new(),
        t2: Vec::new(),
        family: Vec::new(),
        kuranishi: Vec::new(),
        perturbation: Vec::new(),
        base_components: None,
        stabilized_at: None,
        lifting: None,
        flatness: None,
        caveats: Vec::new(),
    }
}

pub fn run(job: &JobSpec) -> Result<Outcome, CliError> {
    let text = read_input(&job.input)?;
    if job.command == Command::Verify {
        return run_verify(&text, job);
    }
    let mut clock = Clock::new();
    let parsed = parse_input(&text).map_err(CliError::Parse)?;
    let ideal = &parsed.ideal;
    let s = settings(job, &parsed.options, ideal)?;
    clock.lap("parse");
    let order = (job.command == Command::Deform).then_some(s.order);
    let mut rep = empty_report(job.command, report::input_echo(ideal, s.depth, order, s.weight_bound));
    if ideal.is_approximate() {
        rep.caveats.push(crate::kuranishi::Caveat::ApproximateInput.to_string());
    }
    let mut certified = true;
    match job.command {
        Command::Resolve | Command::Tangent => {
            let r = build_resolvent(ideal, s.depth, s.weight_bound)?;
            clock.lap("resolvent");
            let checks = verify_resolvent(&r);
            certified &= checks.passed();
            rep.resolvent = Some(report::resolvent_echo(&r, &checks));
            clock.lap("verify resolvent");
            rep.caveats.push(
                crate::kuranishi::Caveat::Truncation { depth: s.depth, weight_bound: s.weight_bound }.to_string(),
            );
            if job.command == Command::Tangent {
                let t1 = tangent_cohomology(&r, 1, s.weight_bound)?;
                let t2 = tangent_cohomology(&r, 2, s.weight_bound)?;
                clock.lap("tangent cohomology");
                rep.t1 = report::classes_echo(&r, &t1);
                rep.t2 = report::classes_echo(&r, &t2);
                let (low, high) = weight_band(&r, s.weight_bound)?;
                rep.caveats.push(crate::kuranishi::Caveat::WeightBand { low, high }.to_string());
            }
        }
        Command::Deform => {
            let (r, res) = semiuniversal(ideal, s.depth, s.weight_bound, s.order)?;
            clock.lap("deformation");
            let checks = verify_resolvent(&r);
            certified &= checks.passed();
            rep.resolvent = Some(report::resolvent_echo(&r, &checks));
            rep.t1 = report::classes_echo(&r, &res.t1);
            rep.t2 = report::classes_echo(&r, &res.t2);
            report::deformation_echo(&r, &res, &mut rep);
            let identity = res.lift_log.iter().all(|l| l.identity_holds);
            let at_zero = family_at_zero_is_input(&res.family, ideal, &res.parameter_vars());
            rep.lifting = Some(report::LiftingEcho {
                defects_split: res.lift_log.len(),
                homotopy_identity: identity,
                family_at_zero_is_input: at_zero,
            });
            rep.base_components = base_components(&res.kuranishi, &res.parameters)
                .map(|c| report::components_echo(&r, &res.parameters, &c));
            let flat = verify_flatness(&res.perturbation, &res.kuranishi, &res.parameters, &r, s.order);
            clock.lap("flatness");
            certified &= flat.passed() && identity && at_zero;
            rep.flatness = Some(report::flatness_echo(&flat));
            rep.caveats = res.caveats.iter().map(ToString::to_string).collect();
        }
        Command::Verify => unreachable!("handled above"),
    }
    Ok(Outcome { report: rep, certified, timings: clock.timings })
}

/// Setting every parameter to zero must give back the input generators.
pub fn family_at_zero_is_input(family: &[crate::algebra::Poly], ideal: &InputIdeal, params: &[crate::algebra::Var]) -> bool {
    let at_zero: Vec<_> = family.iter().map(|f| f.filter(|m| !params.iter().any(|p| m.contains(p.id)))).collect();
    at_zero == ideal.generators()
}

fn run_verify(text: &str, job: &JobSpec) -> Result<Outcome, CliError> {
    let mut clock = Clock::new();
    let mut rep: Report = serde_json::from_str(text).map_err(|e| {
        CliError::Parse(ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
    })?;
    let saved = report::load_deformation(&rep).map_err(CliError::Semantic)?;
    clock.lap("load");
    let order = job.order.unwrap_or(saved.order);
    let flat = verify_flatness(&saved.perturbation, &saved.kuranishi, &saved.parameters, &saved.resolvent, order);
    clock.lap("flatness");
    let vars: Vec<_> = saved.parameters.iter().map(|p| p.var).collect();
    let at_zero = family_at_zero_is_input(&saved.family, &saved.ideal, &vars);
    let certified = flat.passed() && at_zero;
    rep.command = Command::Verify.name().to_string();
    rep.flatness = Some(report::flatness_echo(&flat));
    if let Some(l) = rep.lifting.as_mut() {
        l.family_at_zero_is_input = at_zero;
    }
    Ok(Outcome { report: rep, certified, timings: clock.timings })
}

pub fn serialize(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report::render_text(report),
    }
}
