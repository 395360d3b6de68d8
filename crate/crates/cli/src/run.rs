//! Dispatch of problems to the core and the exit-code contract.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use entrolab_core::duality::bridge_check;
use entrolab_core::entropy::{
    alg_entropy_h, bernoulli_certificate, ent_algebraic, ent_star_tau, h_star, h_top_linear, Budget, Describe, Endomorphism, EntropyValue, SupReport,
};
use entrolab_core::topology::{Carrier, ResidualSubgroup};
use entrolab_core::Error;

use crate::output::{certificate_to_json, merge_value, trace_to_json, value_to_json};
use crate::problem::{dec, Problem, Task};
use crate::CliError;

/// Ordered by severity: a batch reports its worst member.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Outcome {
    Ok,
    /// A value is only a lower bound, or a search ran out of budget.
    Budget,
    /// A computed identity or an expectation failed.
    Mismatch,
    Input,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Mismatch => 1,
            Outcome::Input => 2,
            Outcome::Budget => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Outcome::Ok => "ok",
            Outcome::Budget => "budget",
            Outcome::Mismatch => "mismatch",
            Outcome::Input => "input",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Options {
    pub trace: bool,
    pub jobs: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { trace: false, jobs: 1 }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct RunOutput {
    pub json: Value,
    pub outcome: Outcome,
}

fn classify(e: &CliError) -> Outcome {
    match e {
        CliError::Input(_) => Outcome::Input,
        CliError::Core(e) => match e {
            Error::BudgetExhausted { .. } | Error::NoStabilization(_) | Error::TruncationTooLarge { .. } | Error::OrderBoundExceeded { .. } => Outcome::Budget,
            Error::VerificationFailed(_) => Outcome::Mismatch,
            _ => Outcome::Input,
        },
    }
}

fn failure(task: Option<&str>, e: &CliError) -> RunOutput {
    let outcome = classify(e);
    let mut o = Map::new();
    if let Some(t) = task {
        o.insert("task".into(), json!(t));
    }
    o.insert("error".into(), json!({"class": outcome.name(), "message": e.to_string()}));
    RunOutput { json: Value::Object(o), outcome }
}

/// Runs one parsed problem. Partial results are kept on budget exhaustion.
pub fn run_problem(p: &Problem, opts: &Options) -> RunOutput {
    let budget = Budget { jobs: opts.jobs.max(1), ..p.budget.clone() };
    match execute(p, &budget, opts) {
        Ok((mut out, mut outcome)) => {
            if let Some(expect) = &p.expect {
                let failed: Vec<Value> = expect.iter().filter(|(k, v)| out.get(k.as_str()) != Some(v)).map(|(k, _)| json!(k)).collect();
                if !failed.is_empty() {
                    outcome = outcome.max(Outcome::Mismatch);
                }
                out.insert("expectation".into(), json!({"met": failed.is_empty(), "failed": failed}));
            }
            RunOutput { json: Value::Object(out), outcome }
        }
        Err(e) => failure(Some(p.task.name()), &e),
    }
}

/// A single problem object, or `{"problems": [...]}` run in order.
pub fn run_document(doc: &Value, opts: &Options) -> RunOutput {
    if let Some(list) = doc.get("problems") {
        let Some(list) = list.as_array() else {
            return failure(None, &CliError::Input("problems must be an array".into()));
        };
        let runs: Vec<RunOutput> = list.iter().map(|p| run_document(p, opts)).collect();
        let outcome = runs.iter().map(|r| r.outcome).max().unwrap_or(Outcome::Ok);
        return RunOutput { json: json!({"results": runs.into_iter().map(|r| r.json).collect::<Vec<_>>()}), outcome };
    }
    match Problem::from_json(doc) {
        Ok(p) => run_problem(&p, opts),
        Err(e) => failure(doc.get("task").and_then(Value::as_str), &e),
    }
}

/// A problem file, or every `*.json` file of a directory in name order.
pub fn run_path(path: &Path, opts: &Options) -> RunOutput {
    if path.is_dir() {
        let mut files: Vec<_> = match fs::read_dir(path) {
            Ok(rd) => rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect(),
            Err(e) => return failure(None, &CliError::Input(format!("{}: {e}", path.display()))),
        };
        files.sort();
        let runs: Vec<(String, RunOutput)> =
            files.iter().map(|f| (f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(), run_file(f, opts))).collect();
        let outcome = runs.iter().map(|(_, r)| r.outcome).max().unwrap_or(Outcome::Ok);
        let list: Vec<Value> = runs.into_iter().map(|(f, r)| json!({"file": f, "exit": dec(r.outcome.exit_code()), "result": r.json})).collect();
        return RunOutput { json: json!({"files": list}), outcome };
    }
    run_file(path, opts)
}

fn run_file(path: &Path, opts: &Options) -> RunOutput {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return failure(None, &CliError::Input(format!("{}: {e}", path.display()))),
    };
    match serde_json::from_str::<Value>(&text) {
        Ok(doc) => run_document(&doc, opts),
        Err(e) => failure(None, &CliError::Input(format!("{}: {e}", path.display()))),
    }
}

fn value_outcome(v: &EntropyValue) -> Outcome {
    match v {
        EntropyValue::AtLeast { .. } => Outcome::Budget,
        _ => Outcome::Ok,
    }
}

fn sup_members<M: Describe>(out: &mut Map<String, Value>, r: &SupReport<M>, opts: &Options) {
    let members = r
        .members
        .iter()
        .map(|m| {
            let mut o = Map::new();
            o.insert("member".into(), json!(m.member.describe()));
            o.insert("value".into(), value_to_json(&m.value));
            if opts.trace {
                o.insert("trace".into(), trace_to_json(&m.trace));
            }
            Value::Object(o)
        })
        .collect::<Vec<_>>();
    out.insert("members".into(), Value::Array(members));
}

fn execute(p: &Problem, budget: &Budget, opts: &Options) -> Result<(Map<String, Value>, Outcome), CliError> {
    let mut out = Map::new();
    out.insert("task".into(), json!(p.task.name()));
    let outcome = match p.task {
        Task::HStar => {
            let carrier = p.carrier()?;
            let phi = p.endomorphism(&carrier)?;
            let n = p.subgroup.as_ref().ok_or_else(|| CliError::Input("hstar needs a \"subgroup\"".into()))?.open(&carrier)?;
            let (v, trace) = h_star(&phi, &n, budget)?;
            merge_value(&mut out, &v);
            if opts.trace {
                out.insert("trace".into(), trace_to_json(&trace));
            }
            value_outcome(&v)
        }
        Task::EntStar | Task::HTop => {
            let carrier = p.carrier()?;
            let phi = p.endomorphism(&carrier)?;
            let tau = p.topology(&carrier)?;
            let r = match (p.task, &phi) {
                (Task::HTop, Endomorphism::Window(psi)) => h_top_linear(psi, &tau, budget)?,
                (Task::HTop, _) => return Err(CliError::Input("htop is computed for banded maps of a product K^I".into())),
                _ => ent_star_tau(&phi, &tau, budget)?,
            };
            out.insert("topology".into(), json!(tau.kind().name()));
            merge_value(&mut out, &r.value);
            sup_members(&mut out, &r, opts);
            value_outcome(&r.value)
        }
        Task::Ent => {
            let carrier = p.carrier()?;
            let phi = p.endomorphism(&carrier)?;
            match &p.subgroup {
                Some(s) => {
                    let (v, trace) = alg_entropy_h(&phi, &s.finite(&carrier)?, budget)?;
                    merge_value(&mut out, &v);
                    if opts.trace {
                        out.insert("trace".into(), trace_to_json(&trace));
                    }
                    value_outcome(&v)
                }
                None => {
                    let r = ent_algebraic(&phi, budget)?;
                    merge_value(&mut out, &r.value);
                    sup_members(&mut out, &r, opts);
                    value_outcome(&r.value)
                }
            }
        }
        Task::Bridge => {
            let carrier = p.carrier()?;
            let phi = p.endomorphism(&carrier)?;
            let tau = p.topology(&carrier)?;
            let r = bridge_check(&phi, &tau, budget)?;
            let rows = r
                .members
                .iter()
                .map(|m| {
                    json!({
                        "member": m.member,
                        "structural": m.structural,
                        "rows": m.rows.iter().map(|row| json!({"n": dec(row.n), "c_n": dec(&row.c_n), "t_n": dec(&row.t_n)})).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>();
            let partial = matches!(r.left, EntropyValue::AtLeast { .. }) || matches!(r.right, EntropyValue::AtLeast { .. });
            let outcome = if !r.adjoint || !r.local_equal() {
                Outcome::Mismatch
            } else if partial {
                Outcome::Budget
            } else if !r.global_equal() {
                Outcome::Mismatch
            } else {
                Outcome::Ok
            };
            out.insert("left".into(), value_to_json(&r.left));
            out.insert("right".into(), value_to_json(&r.right));
            out.insert("adjoint".into(), json!(r.adjoint));
            out.insert("global_equal".into(), json!(r.global_equal()));
            out.insert("local_equal".into(), json!(r.local_equal()));
            out.insert("members".into(), Value::Array(rows));
            out.insert("verdict".into(), json!(if r.passed() { "passed" } else { "failed" }));
            outcome
        }
        Task::BernoulliCert => {
            let c = p.certificate.as_ref().ok_or_else(|| CliError::Input("bernoulli-cert needs a \"certificate\" entry".into()))?;
            let cert = bernoulli_certificate(c.p, c.m, c.n_max, c.shift)?;
            let verified = cert.verify();
            out.insert("alpha_lower".into(), dec(&cert.alpha_lower));
            out.insert("certificate".into(), certificate_to_json(&cert));
            out.insert("verdict".into(), json!(if verified.is_ok() { "verified" } else { "failed" }));
            if let Err(e) = verified {
                out.insert("diagnostic".into(), json!(e.to_string()));
                Outcome::Mismatch
            } else {
                Outcome::Ok
            }
        }
        Task::Residual => {
            let carrier = p.carrier()?;
            let tau = p.topology(&carrier)?;
            let r = tau.residual_subgroup(p.prefix_len.unwrap_or(budget.base_prefix + 1))?;
            out.insert("topology".into(), json!(tau.kind().name()));
            out.insert("exact".into(), json!(r.exact));
            out.insert("residual".into(), residual_json(&r.subgroup, &carrier));
            if r.exact {
                Outcome::Ok
            } else {
                Outcome::Budget
            }
        }
    };
    Ok((out, outcome))
}

/// `{"kind", "subgroup", "whole", "trivial"}` for `G^1_τ`.
fn residual_json(r: &ResidualSubgroup, carrier: &Carrier) -> Value {
    let (kind, describe, whole, trivial) = match r {
        ResidualSubgroup::Zero => ("zero", "0".to_string(), false, true),
        ResidualSubgroup::Finite(s) => ("finite", s.describe(), s.is_whole(), s.is_trivial()),
        ResidualSubgroup::Lattice(l) => {
            let rank = match carrier {
                Carrier::Lattice(g) => g.rank(),
                _ => 0,
            };
            ("lattice", l.describe(), l.index() == 1.into(), rank == 0)
        }
        ResidualSubgroup::Window(w) => ("window", w.describe(), w.is_whole(), false),
    };
    json!({"kind": kind, "subgroup": describe, "whole": whole, "trivial": trivial})
}
