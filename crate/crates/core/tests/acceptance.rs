//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::time::Instant;

use phiconvex::catalog::{self, CatalogEntry};
use phiconvex::cli::{self, RunOptions};
use phiconvex::classes::defect;
use phiconvex::funcmodel::{Interval, PhiMap, RealFunction};
use phiconvex::numerics::{integrate, SearchBudget};
use phiconvex::theorems::{
    check_composition, hh_geometric_margin, jensen_margin, quasi_integral_margin,
    random_instances, TheoremId,
};
use phiconvex::verifier::{falsify_membership, revalidate, Verdict};
use serde_json::{json, Value};

type Outcome = Result<String, String>;

const SEED: u64 = 20240611;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(e: &CatalogEntry) -> Result<(RealFunction, PhiMap), String> {
    e.build().map_err(|err| format!("{} / {}: {err}", e.f, e.phi))
}

fn membership() -> Outcome {
    let started = Instant::now();
    let budget = SearchBudget::default().with_seed(SEED);
    ensure(budget.grid_per_axis == 41 && budget.restarts == 8, || {
        "default budget is not 41^3 with 8 restarts".into()
    })?;
    let members = catalog::members();
    ensure(members.len() >= 12, || format!("only {} members", members.len()))?;
    let mut worst = f64::INFINITY;
    for e in &members {
        let (f, phi) = build(e)?;
        let v = falsify_membership(&f, &phi, &e.class, &budget).map_err(|err| err.to_string())?;
        match v {
            Verdict::NotFalsified {
                min_margin_observed,
                ..
            } => {
                ensure(min_margin_observed >= -1e-9, || {
                    format!("{} / {} {}: min margin {min_margin_observed:e}", e.f, e.phi, e.class)
                })?;
                worst = worst.min(min_margin_observed);
            }
            Verdict::Falsified { witness, .. } => {
                return Err(format!("{} / {} {}: falsified at {witness:?}", e.f, e.phi, e.class))
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{} members not falsified, worst margin {worst:.3e}, {secs:.1} s",
        members.len()
    ))
}

fn non_membership() -> Outcome {
    let budget = SearchBudget::default().with_seed(SEED);
    let entries = catalog::non_members();
    ensure(entries.len() >= 6, || format!("only {} non-members", entries.len()))?;
    let mut shallowest = f64::NEG_INFINITY;
    for e in &entries {
        let (f, phi) = build(e)?;
        let first = falsify_membership(&f, &phi, &e.class, &budget).map_err(|err| err.to_string())?;
        let second = falsify_membership(&f, &phi, &e.class, &budget).map_err(|err| err.to_string())?;
        ensure(first == second, || format!("{} {}: rerun differs", e.f, e.class))?;
        let Verdict::Falsified { witness, .. } = first else {
            return Err(format!("{} / {} {}: no witness", e.f, e.phi, e.class));
        };
        ensure(witness.margin < -1e-3, || {
            format!("{} {}: witness margin {:e}", e.f, e.class, witness.margin)
        })?;
        let again = revalidate(&witness, &f, &phi, &e.class, budget.tol_margin)
            .map_err(|err| err.to_string())?;
        ensure(again, || format!("{} {}: witness does not re-validate", e.f, e.class))?;
        let direct = defect(&e.class, &f, &phi, witness.x, witness.y, witness.t)
            .map_err(|err| err.to_string())?;
        ensure(direct.margin == witness.margin, || {
            format!("{} {}: re-evaluated margin differs", e.f, e.class)
        })?;
        shallowest = shallowest.max(witness.margin);
    }
    Ok(format!(
        "{} witnesses, all re-validated, shallowest margin {shallowest:.4}",
        entries.len()
    ))
}

fn composition() -> Outcome {
    let budget = SearchBudget::default().with_seed(SEED);
    let cases = catalog::composition_cases();
    let mut near_zero_note = String::new();
    for c in &cases {
        let (f, phi) = c.build().map_err(|err| err.to_string())?;
        let out = check_composition(c.theorem, &f, &phi, &budget).map_err(|err| err.to_string())?;
        let Verdict::NotFalsified {
            min_margin_observed,
            near_zero_points,
            points_tested,
            ..
        } = out.verdict
        else {
            return Err(format!("{} with {} / {}: falsified", c.theorem, c.f, c.phi));
        };
        ensure(out.hypotheses.any_branch(), || {
            format!("{} with {} / {}: hypotheses not verified", c.theorem, c.f, c.phi)
        })?;
        if c.theorem == TheoremId::LogConvexComposition
            && c.setting == catalog::Setting::AffinePhi
        {
            ensure(min_margin_observed >= -1e-9, || {
                format!("log-convex affine case min margin {min_margin_observed:e}")
            })?;
            let grid = budget.grid_per_axis.pow(3);
            ensure(near_zero_points * 2 >= grid, || {
                format!("only {near_zero_points} of {grid} grid points near zero")
            })?;
            near_zero_note = format!(
                "; {} equality case: {near_zero_points}/{grid} grid points near zero ({points_tested} evaluations)",
                c.theorem.id()
            );
        }
    }
    ensure(!near_zero_note.is_empty(), || "log-convex affine case missing from catalog".into())?;
    Ok(format!("{} composition cases not falsified{near_zero_note}", cases.len()))
}

fn jensen() -> Outcome {
    let started = Instant::now();
    let theorems = [
        TheoremId::SConvexJensen { s: 0.5 },
        TheoremId::GodunovaLevinJensen,
        TheoremId::PClassJensen,
        TheoremId::QuasiConvexJensen,
    ];
    let mut evaluated = 0usize;
    for thm in theorems {
        let class = thm.premise_class();
        let members: Vec<_> = catalog::members().into_iter().filter(|e| e.class == class).collect();
        ensure(!members.is_empty(), || format!("no catalog member for {thm}"))?;
        for (k, e) in members.iter().enumerate() {
            let (f, phi) = build(e)?;
            let domain = phi.domain();
            let instances = random_instances(SEED + k as u64, 100, 2..=6, domain)
                .map_err(|err| err.to_string())?;
            for inst in &instances {
                let out = jensen_margin(&class, &f, &phi, inst).map_err(|err| err.to_string())?;
                let tag = || format!("{thm} {} / {} n={}", e.f, e.phi, inst.len());
                ensure(out.margin >= -1e-9, || format!("{}: margin {:e}", tag(), out.margin))?;
                ensure(out.chain.is_monotone(1e-9), || {
                    format!("{}: chain {:?} not monotone", tag(), out.chain.0)
                })?;
                ensure((out.chain.last() - out.rhs).abs() <= 1e-12, || {
                    format!("{}: chain tail {} vs rhs {}", tag(), out.chain.last(), out.rhs)
                })?;
                if inst.len() == 2 {
                    let (t, x, y) = (inst.weights()[0], inst.points()[0], inst.points()[1]);
                    let d = defect(&class, &f, &phi, x, y, t).map_err(|err| err.to_string())?;
                    ensure((d.margin - out.margin).abs() <= 1e-12, || {
                        format!("{}: n=2 margin {} vs defect {}", tag(), out.margin, d.margin)
                    })?;
                }
                evaluated += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs <= 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{evaluated} instances over 4 theorems, {secs:.2} s"))
}

/// Composite Simpson rule with `n` (even) subintervals.
fn composite_simpson(g: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let v = g(a + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (g(a) + g(b) + 4.0 * odd + 2.0 * even)
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn geometric_mean_integral() -> Outcome {
    let id = PhiMap::identity(unit());
    let exp = RealFunction::parse("exp(x)", unit()).map_err(|e| e.to_string())?;
    let eq = hh_geometric_margin(&exp, &id, 0.0, 1.0, 1e-12).map_err(|e| e.to_string())?;
    ensure(eq.margin.abs() <= 1e-8, || format!("exp(x) margin {:e}", eq.margin))?;
    ensure((eq.mean - 0.5f64.exp()).abs() <= 1e-8, || format!("exp(x) mean {}", eq.mean))?;

    let g = RealFunction::parse("exp(x^2)", unit()).map_err(|e| e.to_string())?;
    let out = hh_geometric_margin(&g, &id, 0.0, 1.0, 1e-12).map_err(|e| e.to_string())?;
    ensure(out.margin > 0.0, || format!("exp(x^2) margin {:e}", out.margin))?;
    let integrand = |u: f64| ((u * u + (1.0 - u) * (1.0 - u)) / 2.0).exp();
    let oracle_mean = composite_simpson(integrand, 0.0, 1.0, 1 << 20);
    let oracle_margin = 0.5f64.exp() - oracle_mean;
    ensure((out.margin - oracle_margin).abs() <= 1e-8, || {
        format!("exp(x^2) margin {} vs oracle {}", out.margin, oracle_margin)
    })?;
    Ok(format!(
        "exp(x) margin {:.1e}; exp(x^2) margin {:.12} (oracle {:.12})",
        eq.margin, out.margin, oracle_margin
    ))
}

fn quasi_integral() -> Outcome {
    let id = PhiMap::identity(unit());
    let sq = RealFunction::parse("x^2", unit()).map_err(|e| e.to_string())?;
    let out = quasi_integral_margin(&sq, &id, 0.0, 1.0, 1e-12).map_err(|e| e.to_string())?;
    let exact_mean = 1.0 / 3.0;
    ensure((out.mean - exact_mean).abs() <= 1e-9, || format!("mean {}", out.mean))?;
    ensure((out.margin - 2.0 / 3.0).abs() <= 1e-9, || format!("x^2 margin {}", out.margin))?;

    let c = RealFunction::parse("2.5", unit()).map_err(|e| e.to_string())?;
    let flat = quasi_integral_margin(&c, &id, 0.2, 0.9, 1e-12).map_err(|e| e.to_string())?;
    ensure(flat.margin.abs() <= 1e-12, || format!("constant margin {:e}", flat.margin))?;

    // φ folds 0.25 and 0.75 onto the same image
    let fold = PhiMap::parse("4*(x-0.5)^2", unit()).map_err(|e| e.to_string())?;
    let deg = quasi_integral_margin(&sq, &fold, 0.25, 0.75, 1e-12).map_err(|e| e.to_string())?;
    ensure(deg.degenerate && deg.margin == 0.0, || {
        format!("degenerate path gave margin {} flag {}", deg.margin, deg.degenerate)
    })?;
    Ok(format!(
        "x^2 margin {:.12}; constant margin {:.1e}; degenerate margin 0 flagged",
        out.margin, flat.margin
    ))
}

fn quadrature() -> Outcome {
    let cubics: [([f64; 4], f64, f64); 4] = [
        ([1.0, 0.0, 0.0, 0.0], 0.0, 1.0),
        ([-2.0, 3.0, -1.0, 5.0], -1.0, 2.0),
        ([0.5, -4.0, 2.0, 0.25], 0.3, 7.1),
        ([7.0, 1.0, 1.0, -3.0], -2.5, -0.5),
    ];
    let mut worst = 0.0f64;
    for (c, a, b) in cubics {
        let p = |x: f64| ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
        let anti = |x: f64| c[0] * x.powi(4) / 4.0 + c[1] * x.powi(3) / 3.0 + c[2] * x * x / 2.0 + c[3] * x;
        let exact = anti(b) - anti(a);
        let q = integrate(|x| Ok::<_, phiconvex::EvalError>(p(x)), a, b, 1e-12)
            .map_err(|e| e.to_string())?;
        let err = (q.value - exact).abs();
        ensure(err <= 1e-12, || format!("cubic {c:?} on [{a}, {b}]: error {err:e}"))?;
        worst = worst.max(err);
    }
    let q = integrate(|x| Ok::<_, phiconvex::EvalError>(x.exp()), 0.0, 1.0, 1e-10)
        .map_err(|e| e.to_string())?;
    let err = (q.value - (std::f64::consts::E - 1.0)).abs();
    ensure(err <= 1e-10 && q.tolerance_met, || format!("exp error {err:e}"))?;
    Ok(format!(
        "cubic worst error {worst:.1e}; exp error {err:.1e} in {} evaluations",
        q.evaluations
    ))
}

/// Every catalog triple and theorem check as one spec.
fn full_suite_spec() -> Value {
    let mut tasks = Vec::new();
    for e in catalog::all() {
        let mut t = json!({
            "f": e.f, "phi": e.phi, "interval": [e.interval.0, e.interval.1],
            "class": e.class.name(), "task": "falsify"
        });
        if let Some(s) = e.class.s() {
            t["s"] = json!(s);
        }
        tasks.push(t);
    }
    for c in catalog::composition_cases() {
        let mut t = json!({
            "f": c.f, "phi": c.phi, "interval": [c.interval.0, c.interval.1],
            "task": c.theorem.id()
        });
        if let TheoremId::SConvexComposition { s } = c.theorem {
            t["s"] = json!(s);
        }
        tasks.push(t);
    }
    tasks.extend([
        json!({"f": "x^2", "phi": "0.5*x+0.25", "interval": [0, 1], "task": "thm-2.2", "s": 0.5}),
        json!({"f": "sqrt(x)", "interval": [0, 1], "task": "thm-2.6"}),
        json!({"f": "1", "phi": "x^2", "interval": [0, 1], "task": "thm-2.9"}),
        json!({"f": "x^2", "interval": [0, 1], "class": "phi-quasi-convex", "task": "jensen",
               "weights": [0.5, 0.5], "points": [0, 1]}),
        json!({"f": "exp(x)", "interval": [0, 1], "task": "thm-2.13"}),
        json!({"f": "exp(x^2)", "interval": [0, 1], "task": "thm-2.13"}),
        json!({"f": "x^2", "interval": [0, 1], "task": "thm-2.16"}),
        json!({"f": "sqrt(x)", "phi": "x^2", "interval": [0, 1], "class": "phi-quasi-convex",
               "task": "integral", "points": [0.1, 0.8]}),
    ]);
    Value::Array(tasks)
}

fn determinism() -> Outcome {
    let text = full_suite_spec().to_string();
    let run = |parallel| -> Result<String, String> {
        let report = cli::run_text(&text, &RunOptions { seed: Some(SEED), parallel })
            .map_err(|e| e.to_string())?;
        let mut v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
        cli::strip_timing(&mut v);
        serde_json::to_string_pretty(&v).map_err(|e| e.to_string())
    };
    let first = run(false)?;
    let second = run(true)?;
    ensure(first == second, || "reports differ".into())?;
    let tasks = full_suite_spec().as_array().map_or(0, Vec::len);
    let parsed: Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    ensure(parsed["exit_code"] == 0, || format!("suite exit code {}", parsed["exit_code"]))?;
    Ok(format!("{tasks} tasks, {} bytes identical across runs", first.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("membership suite", membership),
        ("non-membership suite", non_membership),
        ("composition theorems", composition),
        ("jensen suite", jensen),
        ("geometric-mean integral", geometric_mean_integral),
        ("quasi-convex integral", quasi_integral),
        ("quadrature", quadrature),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
