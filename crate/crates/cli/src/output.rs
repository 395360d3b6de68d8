//! JSON forms of results. Integers are decimal strings, as in problem files.

use serde_json::{json, Map, Value};

use entrolab_core::entropy::{BernoulliCertificate, BudgetNote, CertificateLevel, Describe, EntropyValue, Mode, Trace};
use entrolab_core::window::{FactorialSign, ShiftKind};
use entrolab_core::{BigInt, BigUint};

use crate::problem::{array, count, dec, field, int, object, string};
use crate::CliError;

type Parsed<T> = Result<T, CliError>;

/// `{"kind":"exact","alpha","mode"}`, `{"kind":"infinite","certificate":[..]}`
/// or `{"kind":"at_least","alpha","budget"}`.
pub fn value_to_json(v: &EntropyValue) -> Value {
    match v {
        EntropyValue::Exact { alpha, mode } => json!({"kind": "exact", "alpha": dec(alpha), "mode": mode.name()}),
        EntropyValue::Infinite { certificates } => {
            json!({"kind": "infinite", "certificate": certificates.iter().map(certificate_to_json).collect::<Vec<_>>()})
        }
        EntropyValue::AtLeast { alpha, note } => json!({
            "kind": "at_least",
            "alpha": dec(alpha),
            "budget": {
                "max_steps": dec(note.max_steps),
                "members": dec(note.members),
                "upper_bound": note.upper_bound.as_ref().map(dec).unwrap_or(Value::Null),
            },
        }),
    }
}

pub fn value_from_json(v: &Value) -> Parsed<EntropyValue> {
    let o = object(v, "value")?;
    match string(field(o, "kind")?, "kind")? {
        "exact" => {
            let mode = match string(field(o, "mode")?, "mode")? {
                "proven" => Mode::Proven,
                "heuristic" => Mode::Heuristic,
                m => return Err(CliError::Input(format!("unknown mode {m:?}"))),
            };
            Ok(EntropyValue::Exact { alpha: natural(field(o, "alpha")?, "alpha")?, mode })
        }
        "infinite" => Ok(EntropyValue::Infinite {
            certificates: array(field(o, "certificate")?, "certificate")?.iter().map(certificate_from_json).collect::<Parsed<_>>()?,
        }),
        "at_least" => {
            let b = object(field(o, "budget")?, "budget")?;
            let upper_bound = match field(b, "upper_bound")? {
                Value::Null => None,
                u => Some(natural(u, "upper_bound")?),
            };
            let note = BudgetNote { max_steps: count(field(b, "max_steps")?, "max_steps")?, members: count(field(b, "members")?, "members")?, upper_bound };
            Ok(EntropyValue::AtLeast { alpha: natural(field(o, "alpha")?, "alpha")?, note })
        }
        k => Err(CliError::Input(format!("unknown value kind {k:?}"))),
    }
}

pub fn certificate_to_json(c: &BernoulliCertificate) -> Value {
    json!({
        "p": dec(c.p),
        "m": dec(c.m),
        "shift": c.shift.name(),
        "sign": c.sign.name(),
        "alpha_lower": dec(&c.alpha_lower),
        "levels": c.levels.iter().map(|l| json!({
            "n": dec(l.n),
            "witnesses": l.witnesses.iter().map(|w| w.iter().map(|(i, a)| json!([dec(i), dec(a)])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "corrected": l.corrected,
            "combinations_checked": dec(l.combinations_checked),
        })).collect::<Vec<_>>(),
    })
}

pub fn certificate_from_json(v: &Value) -> Parsed<BernoulliCertificate> {
    let o = object(v, "certificate")?;
    let shift = string(field(o, "shift")?, "shift")?;
    let sign = string(field(o, "sign")?, "sign")?;
    let levels = array(field(o, "levels")?, "levels")?
        .iter()
        .map(|l| {
            let l = object(l, "level")?;
            let witnesses = array(field(l, "witnesses")?, "witnesses")?
                .iter()
                .map(|w| {
                    array(w, "witness")?
                        .iter()
                        .map(|e| {
                            let e = array(e, "entry")?;
                            if e.len() != 2 {
                                return Err(CliError::Input("witness entries are [index, coefficient]".into()));
                            }
                            Ok((int(&e[0], "index")?, count(&e[1], "coefficient")? as u64))
                        })
                        .collect::<Parsed<Vec<(BigInt, u64)>>>()
                })
                .collect::<Parsed<Vec<_>>>()?;
            Ok(CertificateLevel {
                n: count(field(l, "n")?, "n")?,
                witnesses,
                corrected: field(l, "corrected")?.as_bool().ok_or_else(|| CliError::Input("corrected must be a boolean".into()))?,
                combinations_checked: count(field(l, "combinations_checked")?, "combinations_checked")? as u64,
            })
        })
        .collect::<Parsed<Vec<_>>>()?;
    Ok(BernoulliCertificate {
        p: count(field(o, "p")?, "p")? as u64,
        m: count(field(o, "m")?, "m")?,
        shift: ShiftKind::from_name(shift).ok_or_else(|| CliError::Input(format!("unknown shift kind {shift:?}")))?,
        sign: FactorialSign::from_name(sign).ok_or_else(|| CliError::Input(format!("unknown sign {sign:?}")))?,
        levels,
        alpha_lower: natural(field(o, "alpha_lower")?, "alpha_lower")?,
    })
}

pub fn trace_to_json<S: Describe>(t: &Trace<S>) -> Value {
    json!({
        "steps": t.steps.iter().map(|s| json!({
            "n": dec(s.n),
            "subgroup": s.subgroup.describe(),
            "size": dec(&s.size),
            "ratio": dec(&s.ratio),
        })).collect::<Vec<_>>(),
        "stable_from": t.stable_from.map(dec).unwrap_or(Value::Null),
        "mode": t.mode.map(|m| Value::from(m.name())).unwrap_or(Value::Null),
    })
}

/// Merges the value's fields into `out`, so a result reads `{"kind", "alpha", ...}`.
pub fn merge_value(out: &mut Map<String, Value>, v: &EntropyValue) {
    if let Value::Object(o) = value_to_json(v) {
        out.extend(o);
    }
}

fn natural(v: &Value, what: &str) -> Parsed<BigUint> {
    let n = int(v, what)?;
    n.to_biguint().ok_or_else(|| CliError::Input(format!("{what} must be nonnegative")))
}
