//! File-driven front end: analysis specs in, JSON reports out.
//!
//! A spec file holds one task object or an array of them. Every task is
//! validated before any computation starts; a malformed spec is a usage
//! error and nothing runs.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classes::{ConvexityClass, HSpec};
use crate::error::{Error, Result};
use crate::funcmodel::{Interval, PhiMap, RealFunction};
use crate::numerics::SearchBudget;
use crate::theorems::{
    check_composition, check_integral, check_jensen, random_instances, JensenInstance, Status,
    TheoremId,
};
use crate::tolerance::QUAD_TOL;
use crate::verifier::falsify_membership;
use crate::VERSION;

pub const SEED_ENV: &str = "PHICONVEX_SEED";
pub const DEFAULT_SEED: u64 = 0;
const DEFAULT_JENSEN_INSTANCES: usize = 100;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DISCREPANCY: i32 = 2;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_per_axis: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_margin: Option<f64>,
    /// Requested absolute quadrature error for integral checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
    /// Random instances drawn for n-point theorems without explicit weights.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jensen_instances: Option<usize>,
}

impl BudgetOverrides {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// One task of a spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    pub f: String,
    #[serde(default = "identity_text")]
    pub phi: String,
    pub interval: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// `falsify`, `theorem`, `jensen`, `integral`, or a theorem id.
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BudgetOverrides::is_empty")]
    pub budget: BudgetOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn identity_text() -> String {
    "x".to_owned()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Overrides every per-task seed.
    pub seed: Option<u64>,
    pub parallel: bool,
}

impl RunOptions {
    /// Seed used when neither the command line nor the task sets one.
    pub fn fallback_seed() -> Result<u64> {
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Spec(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}

#[derive(Debug, Clone)]
enum TaskKind {
    Falsify(ConvexityClass),
    Composition(TheoremId),
    Jensen(TheoremId, Vec<JensenInstance>),
    Integral(TheoremId, f64, f64),
}

#[derive(Debug, Clone)]
struct PreparedTask {
    label: String,
    f: RealFunction,
    phi: PhiMap,
    kind: TaskKind,
    budget: SearchBudget,
    quad_tol: f64,
    echo: AnalysisSpec,
}

fn spec_err(index: usize, msg: impl std::fmt::Display) -> Error {
    Error::Spec(format!("task {index}: {msg}"))
}

fn jensen_theorem_for(class: &ConvexityClass) -> Result<TheoremId> {
    Ok(match *class {
        ConvexityClass::PhiH { h: HSpec::Power { s } } => TheoremId::SConvexJensen { s },
        ConvexityClass::PhiH { h: HSpec::Identity } => TheoremId::SConvexJensen { s: 1.0 },
        ConvexityClass::PhiH { h: HSpec::Reciprocal } => TheoremId::GodunovaLevinJensen,
        ConvexityClass::PhiH { h: HSpec::One } => TheoremId::PClassJensen,
        ConvexityClass::QuasiPhi => TheoremId::QuasiConvexJensen,
        ConvexityClass::LogPhi => {
            return Err(Error::InvalidArgument(
                "no n-point theorem for log-phi-convex".into(),
            ))
        }
    })
}

fn prepare(index: usize, spec: &AnalysisSpec, options: &RunOptions, fallback: u64) -> Result<PreparedTask> {
    let seed = options.seed.or(spec.seed).unwrap_or(fallback);
    let interval =
        Interval::new(spec.interval[0], spec.interval[1]).map_err(|e| spec_err(index, e))?;
    let f = RealFunction::parse(&spec.f, interval).map_err(|e| spec_err(index, format!("f: {e}")))?;
    let phi = PhiMap::parse(&spec.phi, interval).map_err(|e| spec_err(index, format!("phi: {e}")))?;

    let defaults = SearchBudget::default();
    let o = &spec.budget;
    let budget = SearchBudget {
        grid_per_axis: o.grid_per_axis.unwrap_or(defaults.grid_per_axis),
        restarts: o.restarts.unwrap_or(defaults.restarts),
        max_iterations: o.max_iterations.unwrap_or(defaults.max_iterations),
        tol_margin: o.tol_margin.unwrap_or(defaults.tol_margin),
        seed,
    };
    budget.validate().map_err(|e| spec_err(index, e))?;
    let quad_tol = o.quad_tol.unwrap_or(QUAD_TOL);
    if quad_tol.is_nan() || quad_tol <= 0.0 {
        return Err(spec_err(index, "quad_tol must be positive"));
    }

    let class = spec
        .class
        .as_deref()
        .map(|name| ConvexityClass::from_name(name, spec.s))
        .transpose()
        .map_err(|e| spec_err(index, e))?;
    let need_class = || class.ok_or_else(|| spec_err(index, format!("task `{}` needs \"class\"", spec.task)));

    let theorem_name = if spec.task.starts_with("thm-") {
        Some(spec.task.clone())
    } else {
        spec.theorem.clone()
    };
    let theorem = theorem_name
        .as_deref()
        .map(|id| TheoremId::parse(id, spec.s))
        .transpose()
        .map_err(|e| spec_err(index, e))?;

    let explicit_instance = || -> Result<Option<JensenInstance>> {
        match (&spec.weights, &spec.points) {
            (Some(w), Some(p)) => JensenInstance::new(w.clone(), p.clone())
                .map(Some)
                .map_err(|e| spec_err(index, e)),
            (None, None) => Ok(None),
            _ => Err(spec_err(index, "\"weights\" and \"points\" must be given together")),
        }
    };
    let integral_points = || -> Result<(f64, f64)> {
        match spec.points.as_deref() {
            None => Ok((interval.lo(), interval.hi())),
            Some([x, y]) => Ok((*x, *y)),
            Some(_) => Err(spec_err(index, "integral checks take exactly two \"points\"")),
        }
    };

    let kind = match (spec.task.as_str(), theorem) {
        ("falsify", _) => TaskKind::Falsify(need_class()?),
        ("jensen", _) => {
            let thm = match theorem {
                Some(t) => t,
                None => jensen_theorem_for(&need_class()?).map_err(|e| spec_err(index, e))?,
            };
            if !thm.is_jensen() {
                return Err(spec_err(index, format!("{thm} is not an n-point theorem")));
            }
            let inst = explicit_instance()?
                .ok_or_else(|| spec_err(index, "jensen task needs \"weights\" and \"points\""))?;
            TaskKind::Jensen(thm, vec![inst])
        }
        ("integral", _) => {
            let thm = match theorem {
                Some(t) => t,
                None => match need_class()? {
                    ConvexityClass::LogPhi => TheoremId::GeometricMeanIntegral,
                    ConvexityClass::QuasiPhi => TheoremId::QuasiConvexIntegral,
                    other => {
                        return Err(spec_err(index, format!("no integral theorem for {other}")))
                    }
                },
            };
            if !thm.is_integral() {
                return Err(spec_err(index, format!("{thm} is not an integral theorem")));
            }
            let (x, y) = integral_points()?;
            TaskKind::Integral(thm, x, y)
        }
        (task, Some(thm)) if task == "theorem" || task.starts_with("thm-") => {
            if thm.is_composition() {
                TaskKind::Composition(thm)
            } else if thm.is_jensen() {
                let instances = match explicit_instance()? {
                    Some(i) => vec![i],
                    None => random_instances(
                        seed,
                        o.jensen_instances.unwrap_or(DEFAULT_JENSEN_INSTANCES),
                        2..=6,
                        interval,
                    )
                    .map_err(|e| spec_err(index, e))?,
                };
                TaskKind::Jensen(thm, instances)
            } else {
                let (x, y) = integral_points()?;
                TaskKind::Integral(thm, x, y)
            }
        }
        ("theorem", None) => return Err(spec_err(index, "task `theorem` needs \"theorem\"")),
        (other, _) => return Err(spec_err(index, format!("unknown task `{other}`"))),
    };

    let label = match &kind {
        TaskKind::Falsify(c) => format!("falsify {c}"),
        TaskKind::Composition(t) | TaskKind::Jensen(t, _) | TaskKind::Integral(t, _, _) => {
            t.id().to_owned()
        }
    };
    let mut echo = spec.clone();
    echo.seed = Some(seed);
    Ok(PreparedTask {
        label,
        f,
        phi,
        kind,
        budget,
        quad_tol,
        echo,
    })
}

/// Outcome label of a task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    /// Plain membership search; no theorem made a prediction.
    NoPrediction,
    Confirmed,
    Discrepancy,
    Vacuous,
    Error,
}

impl From<Status> for TaskStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Confirmed => TaskStatus::Confirmed,
            Status::Discrepancy => TaskStatus::Discrepancy,
            Status::Vacuous => TaskStatus::Vacuous,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub spec: AnalysisSpec,
    pub status: TaskStatus,
    /// Short human-readable outcome.
    pub verdict: String,
    /// Headline margin: witness or minimum observed margin, or the
    /// inequality margin for integral and n-point checks.
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub tasks: Vec<TaskReport>,
    pub exit_code: i32,
    pub wall_time_seconds: f64,
}

fn run_task(task: &PreparedTask) -> TaskReport {
    let started = Instant::now();
    let result: Result<(TaskStatus, String, Option<f64>, Value)> = (|| {
        Ok(match &task.kind {
            TaskKind::Falsify(class) => {
                let v = falsify_membership(&task.f, &task.phi, class, &task.budget)?;
                (TaskStatus::NoPrediction, v.label().to_owned(), Some(v.margin()), serde_json::to_value(&v)?)
            }
            TaskKind::Composition(thm) => {
                let out = check_composition(*thm, &task.f, &task.phi, &task.budget)?;
                let text = format!("{}; f∘phi: {}", status_text(out.status), out.verdict.label());
                (out.status.into(), text, Some(out.verdict.margin()), serde_json::to_value(&out)?)
            }
            TaskKind::Jensen(thm, instances) => {
                let out = check_jensen(*thm, &task.f, &task.phi, instances, &task.budget)?;
                let text = format!("{}; {} instance(s)", status_text(out.status), out.instances);
                (out.status.into(), text, Some(out.min_margin), serde_json::to_value(&out)?)
            }
            TaskKind::Integral(thm, x, y) => {
                let out = check_integral(*thm, &task.f, &task.phi, *x, *y, task.quad_tol, &task.budget)?;
                let mut text = status_text(out.status).to_owned();
                if out.outcome.degenerate {
                    text.push_str("; degenerate");
                }
                (out.status.into(), text, Some(out.outcome.margin), serde_json::to_value(&out)?)
            }
        })
    })();
    let seconds = started.elapsed().as_secs_f64();
    match result {
        Ok((status, verdict, margin, detail)) => TaskReport {
            task: task.label.clone(),
            spec: task.echo.clone(),
            status,
            verdict,
            margin,
            detail: Some(detail),
            error: None,
            seconds,
        },
        Err(e) => TaskReport {
            task: task.label.clone(),
            spec: task.echo.clone(),
            status: TaskStatus::Error,
            verdict: "error".to_owned(),
            margin: None,
            detail: None,
            error: Some(e.to_string()),
            seconds,
        },
    }
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Confirmed => "confirmed",
        Status::Discrepancy => "DISCREPANCY",
        Status::Vacuous => "vacuous (hypotheses unverified)",
    }
}

/// Parses spec text: one task object or an array of them.
pub fn parse_specs(text: &str) -> Result<Vec<AnalysisSpec>> {
    let value: Value = serde_json::from_str(text)?;
    let specs = match value {
        Value::Array(items) => items
            .into_iter()
            .map(serde_json::from_value)
            .collect::<std::result::Result<Vec<AnalysisSpec>, _>>()?,
        other => vec![serde_json::from_value(other)?],
    };
    if specs.is_empty() {
        return Err(Error::Spec("spec contains no tasks".into()));
    }
    Ok(specs)
}

/// Validates every task, then runs them in order (or concurrently with
/// `options.parallel`; results keep spec order either way).
pub fn run_specs(specs: &[AnalysisSpec], options: &RunOptions) -> Result<Report> {
    let started = Instant::now();
    let fallback = RunOptions::fallback_seed()?;
    let prepared = specs
        .iter()
        .enumerate()
        .map(|(i, s)| prepare(i, s, options, fallback))
        .collect::<Result<Vec<_>>>()?;

    let tasks: Vec<TaskReport> = if options.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = prepared
                .iter()
                .map(|t| scope.spawn(move || run_task(t)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("task thread panicked"))
                .collect()
        })
    } else {
        prepared.iter().map(run_task).collect()
    };

    let exit_code = if tasks.iter().any(|t| t.status == TaskStatus::Error) {
        EXIT_ERROR
    } else if tasks.iter().any(|t| t.status == TaskStatus::Discrepancy) {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    Ok(Report {
        toolkit: "phiconvex",
        version: VERSION,
        seed: options.seed.unwrap_or(fallback),
        tasks,
        exit_code,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

pub fn run_text(text: &str, options: &RunOptions) -> Result<Report> {
    run_specs(&parse_specs(text)?, options)
}

pub fn run_file(path: &Path, options: &RunOptions) -> Result<Report> {
    let text = std::fs::read_to_string(path)?;
    run_text(&text, options)
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Fixed-width summary: task, verdict, margin, seconds.
    pub fn summary_table(&self) -> String {
        let mut out = format!(
            "{:<3} {:<24} {:<52} {:>15} {:>9}\n",
            "#", "task", "verdict", "margin", "seconds"
        );
        for (i, t) in self.tasks.iter().enumerate() {
            let margin = t
                .margin
                .map(|m| format!("{m:.6e}"))
                .unwrap_or_else(|| "-".to_owned());
            let verdict = t.error.as_ref().map_or(t.verdict.clone(), |e| format!("error: {e}"));
            out.push_str(&format!(
                "{:<3} {:<24} {:<52} {:>15} {:>9.3}\n",
                i, t.task, verdict, margin, t.seconds
            ));
        }
        out
    }
}

/// Removes timing fields from a serialized report so two runs can be
/// compared byte for byte.
pub fn strip_timing(report: &mut Value) {
    match report {
        Value::Object(map) => {
            map.remove("wall_time_seconds");
            map.remove("seconds");
            for v in map.values_mut() {
                strip_timing(v);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
