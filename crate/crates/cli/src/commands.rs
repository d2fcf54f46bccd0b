use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use qtrans_core::oracle::{
    enumerate_check, sample_effect, sample_instrument, sample_transition_effect, ExpectedMarginal,
    InstrumentSample, SampleReport, DEFAULT_SHOTS, Z_THRESHOLD,
};
use qtrans_core::transition::{
    instrument_distribution, instrument_joint_distribution, instrument_state_transition,
    joint_effect_distribution, observable_distribution, updated_state,
};
use qtrans_core::{
    Classical, DistributionTable, Error, Model, Observable, Quantum, TransitionPath, DEFAULT_TOL,
};

use crate::report::{Format, Node, Report};
use crate::scenario::{Defaults, ModelKind, Scenario};
use crate::world::{InstrumentEntry, OpEntry, ScenarioModel, World};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNDEFINED: i32 = 2;
pub const EXIT_STATISTICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qtrans",
    version,
    about = "Transition probabilities between effects and states on classical and Hilbert space models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Validation and comparison tolerance [default: scenario value, else 1e-9]
    #[arg(long, global = true, env = "QTRANS_TOL")]
    pub tol: Option<f64>,

    /// Sampling seed [default: scenario value, else 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Sampling shots [default: scenario value, else 100000]
    #[arg(long, global = true)]
    pub shots: Option<u64>,

    /// Run the sampling oracle alongside the analytic value
    #[arg(long, global = true)]
    pub check: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every object in a scenario
    Validate { scenario: PathBuf },
    /// P_{s,J}(a,b): a occurs in s, then b occurs in the updated state J(s)~
    TpEffect {
        scenario: PathBuf,
        state: String,
        operation: String,
        a: String,
        b: String,
    },
    /// P_J(s1,s2) for an operation, or the (x,y) table for an instrument
    TpState {
        scenario: PathBuf,
        target: String,
        state1: String,
        state2: String,
    },
    /// Joint table of two observables around an operation or instrument, with marginals
    Joint {
        scenario: PathBuf,
        state: String,
        target: String,
        a: String,
        b: String,
    },
    /// Channel, repeatability and measured-effect checks
    Check { scenario: PathBuf, target: String },
    /// Sample a quantity: effect:STATE:EFFECT, tp-effect:STATE:OP:A:B or instrument:STATE:INSTRUMENT
    Sample { scenario: PathBuf, quantity: String },
    /// Distribution of an observable or instrument in a state
    Dist {
        scenario: PathBuf,
        state: String,
        target: String,
    },
}

impl Command {
    fn scenario(&self) -> &Path {
        match self {
            Command::Validate { scenario }
            | Command::TpEffect { scenario, .. }
            | Command::TpState { scenario, .. }
            | Command::Joint { scenario, .. }
            | Command::Check { scenario, .. }
            | Command::Sample { scenario, .. }
            | Command::Dist { scenario, .. } => scenario,
        }
    }
}

/// What a command printed and the exit status it asks for.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TransitionUndefined { .. } => EXIT_UNDEFINED,
            Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(Report, i32), Failure>;

#[derive(Debug, Clone, Copy)]
struct Settings {
    tol: f64,
    seed: u64,
    shots: u64,
}

impl Settings {
    /// Command line (or `QTRANS_TOL`) first, then scenario defaults, then
    /// built-in values.
    fn resolve(cli: &Cli, defaults: &Defaults) -> Result<Self, Failure> {
        let tol = cli.tol.or(defaults.tol).unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::usage(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let shots = cli.shots.or(defaults.shots).unwrap_or(DEFAULT_SHOTS);
        if shots == 0 {
            return Err(Failure::usage("shots must be at least 1"));
        }
        Ok(Self {
            tol,
            seed: cli.seed.or(defaults.seed).unwrap_or(0),
            shots,
        })
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let scenario = match Scenario::load(cli.command.scenario()) {
        Ok(s) => s,
        Err(message) => return failure(Failure::usage(message)),
    };
    let settings = match Settings::resolve(cli, &scenario.defaults) {
        Ok(s) => s,
        Err(f) => return failure(f),
    };
    match scenario.model {
        ModelKind::Classical => run_model::<Classical>(cli, &scenario, settings),
        ModelKind::Quantum => run_model::<Quantum>(cli, &scenario, settings),
    }
}

fn failure(f: Failure) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("qtrans: {}\n", f.message),
        code: f.code,
    }
}

fn run_model<M: ScenarioModel>(cli: &Cli, scenario: &Scenario, settings: Settings) -> Outcome {
    let world = World::<M>::build(scenario, settings.tol);
    if let Command::Validate { .. } = cli.command {
        let (report, code) = validate(&world, scenario, settings);
        return Outcome {
            stdout: report.render(cli.format),
            stderr: if code == EXIT_OK {
                String::new()
            } else {
                format!("qtrans: {} invalid object(s)\n", world.violations.len())
            },
            code,
        };
    }
    if !world.violations.is_empty() {
        let mut stderr = String::new();
        for v in &world.violations {
            stderr.push_str(&format!(
                "qtrans: invalid {} '{}': {}\n",
                v.section, v.name, v.message
            ));
        }
        return Outcome {
            stdout: String::new(),
            stderr,
            code: EXIT_INVALID,
        };
    }
    let ctx = Ctx {
        world: &world,
        settings,
        check: cli.check,
    };
    let result = match &cli.command {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::TpEffect {
            state,
            operation,
            a,
            b,
            ..
        } => ctx.tp_effect(state, operation, a, b),
        Command::TpState {
            target,
            state1,
            state2,
            ..
        } => ctx.tp_state(target, state1, state2),
        Command::Joint {
            state,
            target,
            a,
            b,
            ..
        } => ctx.joint(state, target, a, b),
        Command::Check { target, .. } => ctx.check_target(target),
        Command::Sample { quantity, .. } => ctx.sample(quantity),
        Command::Dist { state, target, .. } => ctx.dist(state, target),
    };
    match result {
        Ok((body, code)) => {
            let report = Report::new().with("model", M::KIND.as_str());
            let report = merge(report, body);
            Outcome {
                stdout: report.render(cli.format),
                stderr: if code == EXIT_STATISTICAL {
                    format!("qtrans: sampled estimate outside {Z_THRESHOLD} standard errors\n")
                } else {
                    String::new()
                },
                code,
            }
        }
        Err(f) => failure(f),
    }
}

fn merge(mut head: Report, body: Report) -> Report {
    for (k, v) in body.into_entries() {
        head.add(k, v);
    }
    head
}

fn validate<M: ScenarioModel>(
    world: &World<M>,
    scenario: &Scenario,
    settings: Settings,
) -> (Report, i32) {
    let mut r = Report::new().with("model", M::KIND.as_str());
    if let Some(d) = &scenario.description {
        r.add("description", d.as_str());
    }
    r.add("dim", scenario.dim);
    r.add("tol", settings.tol);
    let sections: [(&str, Vec<&String>); 5] = [
        ("effects", scenario.effects.keys().collect()),
        ("states", scenario.states.keys().collect()),
        ("observables", scenario.observables.keys().collect()),
        ("operations", scenario.operations.keys().collect()),
        ("instruments", scenario.instruments.keys().collect()),
    ];
    for (section, names) in sections {
        if names.is_empty() {
            continue;
        }
        let mut s = Report::new();
        for name in names {
            let status = world
                .violations
                .iter()
                .find(|v| v.section == section && &v.name == name)
                .map(|v| v.message.clone())
                .unwrap_or_else(|| "ok".into());
            s.add(name.as_str(), status);
        }
        r.add(section, s);
    }
    for v in world.violations.iter().filter(|v| v.section == "scenario") {
        r.add("scenario", v.message.as_str());
    }
    let n = world.violations.len();
    r.add("violations", n);
    r.add("status", if n == 0 { "valid" } else { "invalid" });
    (r, if n == 0 { EXIT_OK } else { EXIT_INVALID })
}

enum Target<'a, M: Model> {
    Operation(&'a OpEntry<M>),
    Instrument(&'a InstrumentEntry<M>),
    Observable(&'a Observable<M>),
}

struct Ctx<'a, M: ScenarioModel> {
    world: &'a World<M>,
    settings: Settings,
    check: bool,
}

fn max_path_deviation(paths: &[(TransitionPath, f64)]) -> f64 {
    let generic = paths[0].1;
    paths
        .iter()
        .map(|(_, v)| (v - generic).abs())
        .fold(0.0, f64::max)
}

fn paths_report(paths: &[(TransitionPath, f64)]) -> Report {
    let mut r = Report::new();
    for (p, v) in paths {
        r.add(p.as_str(), *v);
    }
    r
}

fn sample_report(rep: &SampleReport) -> Report {
    Report::new()
        .with("estimate", rep.estimate)
        .with("analytic", rep.analytic)
        .with("std_error", rep.std_error)
        .with("z_score", rep.z_score)
        .with("threshold", Z_THRESHOLD)
        .with("passed", rep.within(Z_THRESHOLD))
        .with("shots", rep.shots)
        .with("seed", rep.seed)
        .with("rng_id", rep.rng_id.as_str())
}

fn instrument_sample_report(rep: &InstrumentSample) -> Report {
    Report::new()
        .with("empirical", rep.empirical.clone())
        .with("analytic", rep.analytic.clone())
        .with(
            "counts",
            Node::List(rep.counts.iter().map(|&c| Node::Int(c)).collect()),
        )
        .with(
            "z_scores",
            Node::List(rep.z_scores.iter().map(|&z| Node::Num(z)).collect()),
        )
        .with("max_z", rep.max_z())
        .with("threshold", Z_THRESHOLD)
        .with("passed", rep.max_z() <= Z_THRESHOLD)
        .with("shots", rep.shots)
        .with("seed", rep.seed)
        .with("rng_id", rep.rng_id.as_str())
}

/// `|a − b|` cell by cell, on the axes of `a`.
fn deviation_table(
    a: &DistributionTable,
    b: &DistributionTable,
) -> Result<DistributionTable, Failure> {
    let entries = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).abs())
        .collect();
    Ok(DistributionTable::new(a.axes().to_vec(), entries)?)
}

fn marginal_report(
    table: &DistributionTable,
    axis: usize,
    expected: &DistributionTable,
    meaning: &str,
) -> Result<Report, Failure> {
    let marginal = table.marginal(&[axis])?;
    let deviation = deviation_table(&marginal, expected)?;
    let max = deviation.entries().iter().copied().fold(0.0, f64::max);
    Ok(Report::new()
        .with("expected_as", meaning)
        .with("marginal", marginal)
        .with("expected", expected.clone())
        .with("deviation", deviation)
        .with("max_deviation", max))
}

impl<'a, M: ScenarioModel> Ctx<'a, M> {
    fn tol(&self) -> f64 {
        self.settings.tol
    }

    fn state(&self, name: &str) -> Result<&'a M::Substate, Failure> {
        self.world.state(name).map_err(Failure::usage)
    }

    fn effect(&self, name: &str) -> Result<&'a M::Effect, Failure> {
        self.world.effect(name).map_err(Failure::usage)
    }

    fn observable(&self, name: &str) -> Result<&'a Observable<M>, Failure> {
        self.world.observable(name).map_err(Failure::usage)
    }

    fn operation(&self, name: &str) -> Result<&'a OpEntry<M>, Failure> {
        self.world.operation(name).map_err(Failure::usage)
    }

    fn instrument(&self, name: &str) -> Result<&'a InstrumentEntry<M>, Failure> {
        self.world.instrument(name).map_err(Failure::usage)
    }

    fn target(&self, name: &str, observables: bool) -> Result<Target<'a, M>, Failure> {
        let mut found = Vec::new();
        if let Some(op) = self.world.operations.get(name) {
            found.push(Target::Operation(op));
        }
        if let Some(inst) = self.world.instruments.get(name) {
            found.push(Target::Instrument(inst));
        }
        if observables {
            if let Some(obs) = self.world.observables.get(name) {
                found.push(Target::Observable(obs));
            }
        }
        match found.len() {
            0 => Err(Failure::usage(format!("unknown target '{name}'"))),
            1 => Ok(found.pop().expect("one target")),
            _ => Err(Failure::usage(format!("target name '{name}' is ambiguous"))),
        }
    }

    fn undefined(&self, e: Error, op: &str, state: &str) -> Failure {
        match e {
            Error::TransitionUndefined { probability } => Failure {
                code: EXIT_UNDEFINED,
                message: format!(
                    "transition undefined: operation '{op}' occurs with probability {} in state '{state}'",
                    crate::report::format_number(probability)
                ),
            },
            other => other.into(),
        }
    }

    fn tp_effect(&self, state: &str, op: &str, a: &str, b: &str) -> CmdResult {
        let s = self.state(state)?;
        let entry = self.operation(op)?;
        let (ea, eb) = (self.effect(a)?, self.effect(b)?);
        let paths = M::effect_paths(entry, s, ea, eb, self.tol())
            .map_err(|e| self.undefined(e, op, state))?;
        let (path, value) = *paths.last().expect("generic path");
        let mut r = Report::new()
            .with("quantity", "P_{s,J}(a,b)")
            .with("state", state)
            .with("operation", op)
            .with("kind", entry.kind)
            .with("a", a)
            .with("b", b)
            .with("value", value)
            .with("path", path.as_str())
            .with("paths", paths_report(&paths))
            .with("max_path_deviation", max_path_deviation(&paths));
        let mut code = EXIT_OK;
        if self.check {
            let rep = sample_transition_effect::<M>(
                s,
                &entry.op,
                ea,
                eb,
                self.settings.shots,
                self.settings.seed,
                self.tol(),
            )?;
            if !rep.within(Z_THRESHOLD) {
                code = EXIT_STATISTICAL;
            }
            r.add("oracle", sample_report(&rep));
        }
        Ok((r, code))
    }

    fn tp_state(&self, target: &str, state1: &str, state2: &str) -> CmdResult {
        let (s1, s2) = (self.state(state1)?, self.state(state2)?);
        let mut r = Report::new()
            .with("quantity", "P_J(s1,s2)")
            .with("target", target)
            .with("state1", state1)
            .with("state2", state2);
        match self.target(target, false)? {
            Target::Operation(entry) => {
                let paths = M::state_paths(entry, s1, s2, self.tol())?;
                let (path, value) = *paths.last().expect("generic path");
                r.add("kind", entry.kind)
                    .add("value", value)
                    .add("path", path.as_str())
                    .add("paths", paths_report(&paths))
                    .add("max_path_deviation", max_path_deviation(&paths));
            }
            Target::Instrument(inst) => {
                let table = instrument_state_transition(&inst.instrument, s1, s2)?;
                let mut per_op = Report::new();
                for (label, entry) in &inst.parts {
                    let paths = M::state_paths(entry, s1, s2, self.tol())?;
                    let (path, value) = *paths.last().expect("generic path");
                    per_op.add(
                        label.as_str(),
                        Report::new()
                            .with("value", value)
                            .with("path", path.as_str())
                            .with("max_path_deviation", max_path_deviation(&paths)),
                    );
                }
                r.add("kind", inst.kind)
                    .add("total", table.total())
                    .add("first_marginal", table.marginal(&[0])?)
                    .add("second_marginal", table.marginal(&[1])?)
                    .add("table", table)
                    .add("per_operation", per_op);
            }
            Target::Observable(_) => unreachable!("observables not searched"),
        }
        Ok((r, EXIT_OK))
    }

    fn joint(&self, state: &str, target: &str, a: &str, b: &str) -> CmdResult {
        let s = self.state(state)?;
        let (oa, ob) = (self.observable(a)?, self.observable(b)?);
        let tol = self.tol();
        let phi_a = observable_distribution(s, oa)?;
        let mut r = Report::new()
            .with("state", state)
            .with("target", target)
            .with("A", a)
            .with("B", b);
        let (table, marginals) = match self.target(target, false)? {
            Target::Operation(entry) => {
                let table = joint_effect_distribution(s, &entry.op, oa, ob, tol)
                    .map_err(|e| self.undefined(e, target, state))?;
                let updated = updated_state::<M>(&entry.op, s, tol)?;
                let phi_b = observable_distribution(&updated, ob)?;
                r.add("quantity", "P_{s,J}(A_x,B_y)");
                (
                    table,
                    vec![
                        (0, phi_a, "distribution of A in s"),
                        (1, phi_b, "distribution of B in J(s)~"),
                    ],
                )
            }
            Target::Instrument(inst) => {
                let table = instrument_joint_distribution(s, &inst.instrument, oa, ob)?;
                let phi_i = instrument_distribution(s, &inst.instrument)?;
                let bar = inst.instrument.apply_sum(s)?;
                let phi_b = observable_distribution(&bar, ob)?;
                r.add("quantity", "Q_{s,I_z}(A_x,B_y)");
                (
                    table,
                    vec![
                        (0, phi_i, "distribution of I in s"),
                        (1, phi_a, "distribution of A in s"),
                        (2, phi_b, "distribution of B in the sum of I applied to s"),
                    ],
                )
            }
            Target::Observable(_) => unreachable!("observables not searched"),
        };
        let expected: Vec<ExpectedMarginal> = marginals
            .iter()
            .map(|(axis, t, _)| ExpectedMarginal::new(vec![*axis], t.entries().to_vec()))
            .collect();
        let enumeration = enumerate_check(&table, &expected, tol);
        let mut m = Report::new();
        for (axis, t, meaning) in &marginals {
            let name = table.axes()[*axis].name.clone();
            m.add(name, marginal_report(&table, *axis, t, meaning)?);
        }
        let passed = enumeration.passed();
        r.add("total", table.total())
            .add("table", table)
            .add("marginals", m)
            .add("enumeration_passed", passed);
        Ok((r, if passed { EXIT_OK } else { EXIT_STATISTICAL }))
    }

    fn operation_checks(&self, entry: &OpEntry<M>) -> Result<Report, Failure> {
        let tol = self.tol();
        let op = &entry.op;
        let hat = M::measured_effect(op);
        let mut soundness: f64 = 0.0;
        for s in M::probe_states(self.world.dim) {
            let occurs = M::total(&M::apply(op, &s)?);
            soundness = soundness.max((M::eval(&s, &hat)? - occurs).abs());
        }
        let channel_deviation = M::channel_deviation(op)?;
        let repeatability = M::repeatability_deviation(op)?;
        let repeatable = repeatability <= tol;
        let mut r = Report::new()
            .with("kind", entry.kind)
            .with("channel", channel_deviation <= tol)
            .with("channel_deviation", channel_deviation)
            .with("repeatable", repeatable)
            .with("repeatability_deviation", repeatability)
            .with("measured_effect_deviation", soundness);
        if let Some(dev) = M::projection_deviation(entry) {
            let projection = dev < tol;
            r.add("projection", projection)
                .add("projection_deviation", dev)
                .add("repeatable_iff_projection", repeatable == projection);
        }
        if let Some((a, alpha)) = &entry.holevo {
            let alpha_a = M::eval(alpha, a)?;
            let mut a_max: f64 = 0.0;
            for s in M::probe_states(self.world.dim) {
                a_max = a_max.max(M::eval(&s, a)?);
            }
            let a_zero = a_max <= tol;
            let predicted = (alpha_a - 1.0).abs() <= tol || a_zero;
            r.add("alpha_of_a", alpha_a)
                .add("effect_is_zero", a_zero)
                .add("predicted_repeatable", predicted)
                .add("prediction_holds", predicted == repeatable);
        }
        Ok(r)
    }

    fn check_target(&self, target: &str) -> CmdResult {
        let mut r = Report::new().with("target", target);
        match self.target(target, false)? {
            Target::Operation(entry) => {
                let checks = self.operation_checks(entry)?;
                r = merge(r, checks);
            }
            Target::Instrument(inst) => {
                let measured: Vec<M::Effect> = inst
                    .instrument
                    .iter()
                    .map(|(_, op)| M::measured_effect(op))
                    .collect();
                let refs: Vec<&M::Effect> = measured.iter().collect();
                let dev = M::unit_deviation(&refs)?;
                r.add("kind", inst.kind)
                    .add("outcomes", inst.instrument.len())
                    .add("sum_is_channel", dev <= self.tol())
                    .add("sum_channel_deviation", dev)
                    .add(
                        "measures_an_observable",
                        inst.instrument.measured_observable(self.tol()).is_ok(),
                    );
                let mut per_op = Report::new();
                for (label, entry) in &inst.parts {
                    per_op.add(label.as_str(), self.operation_checks(entry)?);
                }
                r.add("per_operation", per_op);
            }
            Target::Observable(_) => unreachable!("observables not searched"),
        }
        Ok((r, EXIT_OK))
    }

    fn sample(&self, quantity: &str) -> CmdResult {
        let parts: Vec<&str> = quantity.split(':').collect();
        let (shots, seed, tol) = (self.settings.shots, self.settings.seed, self.tol());
        let mut r = Report::new().with("quantity", quantity);
        let passed = match parts.as_slice() {
            ["effect", state, effect] => {
                let rep =
                    sample_effect::<M>(self.state(state)?, self.effect(effect)?, shots, seed)?;
                r = merge(r, sample_report(&rep));
                rep.within(Z_THRESHOLD)
            }
            ["tp-effect", state, op, a, b] => {
                let s = self.state(state)?;
                let entry = self.operation(op)?;
                let rep = sample_transition_effect::<M>(
                    s,
                    &entry.op,
                    self.effect(a)?,
                    self.effect(b)?,
                    shots,
                    seed,
                    tol,
                )
                .map_err(|e| self.undefined(e, op, state))?;
                r = merge(r, sample_report(&rep));
                rep.within(Z_THRESHOLD)
            }
            ["instrument", state, inst] => {
                let rep = sample_instrument(
                    self.state(state)?,
                    &self.instrument(inst)?.instrument,
                    shots,
                    seed,
                )?;
                r = merge(r, instrument_sample_report(&rep));
                rep.max_z() <= Z_THRESHOLD
            }
            _ => {
                return Err(Failure::usage(format!(
                    "unknown quantity '{quantity}': expected effect:STATE:EFFECT, \
                     tp-effect:STATE:OP:A:B or instrument:STATE:INSTRUMENT"
                )))
            }
        };
        Ok((r, if passed { EXIT_OK } else { EXIT_STATISTICAL }))
    }

    fn dist(&self, state: &str, target: &str) -> CmdResult {
        let s = self.state(state)?;
        let mut r = Report::new().with("state", state).with("target", target);
        let mut code = EXIT_OK;
        match self.target(target, true)? {
            Target::Observable(obs) => {
                let t = observable_distribution(s, obs)?;
                r.add("kind", "observable")
                    .add("total", t.total())
                    .add("distribution", t);
            }
            Target::Instrument(inst) => {
                let t = instrument_distribution(s, &inst.instrument)?;
                r.add("kind", "instrument")
                    .add("total", t.total())
                    .add("distribution", t);
                if self.check {
                    let rep = sample_instrument(
                        s,
                        &inst.instrument,
                        self.settings.shots,
                        self.settings.seed,
                    )?;
                    if rep.max_z() > Z_THRESHOLD {
                        code = EXIT_STATISTICAL;
                    }
                    r.add("oracle", instrument_sample_report(&rep));
                }
            }
            Target::Operation(_) => {
                return Err(Failure::usage(format!(
                    "'{target}' is an operation; dist takes an observable or instrument"
                )))
            }
        }
        Ok((r, code))
    }
}
