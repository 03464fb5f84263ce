//! JSON and text renderings of results, and parsing JSON back.
//!
//! JSON layout (version 1):
//!
//! ```text
//! {"schema": 1,
//!  "params": {"p", "ell", "t", "q", "k", "u", "v"},
//!  "method": "formula" | "bruteforce" | "both",
//!  "bruteforce_mode": null | "full_snf" | "local_snf",
//!  "free_rank": 1,
//!  "elementary_divisors": [["<prime>", exponent, multiplicity], ...],
//!  "unfactored": [["<order>", multiplicity], ...],
//!  "order_factorization": {"<prime>": exponent},
//!  "p_multiplicities": {"<j>": e_j},
//!  "coprime_part": {"u_prime", "u_exponent", "v_prime", "v_exponent"},
//!  "checks": [{"name", "passed", "detail"}]}
//! ```
//!
//! Integers of any size are written as JSON numbers; primes and orders used as
//! keys or tags are strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use cyclosrg::critgroup::{BruteforceMode, Check, CoprimePart};
use cyclosrg::{AbelianGroupDesc, CriticalGroupResult, Method, PMultiplicities, Params};
use num_bigint::BigUint;
use serde_json::{json, Map, Number, Value};

use crate::CliError;

pub const SCHEMA: u64 = 1;

pub fn big(n: &BigUint) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("decimal integer"))
}

fn bad(what: impl Into<String>) -> CliError {
    CliError::Json(what.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn parse_big(v: &Value) -> Result<BigUint, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(bad(format!("expected a nonnegative integer, found {v}"))),
    };
    BigUint::from_str(&text).map_err(|_| bad(format!("expected a nonnegative integer, found {text}")))
}

fn parse_u64(v: &Value) -> Result<u64, CliError> {
    v.as_u64().ok_or_else(|| bad(format!("expected a small integer, found {v}")))
}

fn parse_u32(v: &Value) -> Result<u32, CliError> {
    u32::try_from(parse_u64(v)?).map_err(|_| bad(format!("{v} does not fit in 32 bits")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn params_json(p: &Params) -> Value {
    json!({
        "p": p.p,
        "ell": p.ell,
        "t": p.t,
        "q": big(&p.q),
        "k": big(&p.k),
        "u": big(&p.u),
        "v": big(&p.v),
    })
}

pub fn multiplicities_json(m: &PMultiplicities) -> Value {
    Value::Object(m.exps.iter().map(|(j, e)| (j.to_string(), big(e))).collect())
}

fn mode_name(mode: Option<BruteforceMode>) -> Value {
    match mode {
        None => Value::Null,
        Some(BruteforceMode::FullSnf) => json!("full_snf"),
        Some(BruteforceMode::LocalSnf) => json!("local_snf"),
    }
}

pub fn check_json(c: &Check) -> Value {
    json!({"name": c.name, "passed": c.passed, "detail": c.detail})
}

pub fn result_to_json(r: &CriticalGroupResult) -> Value {
    let divisors: Vec<Value> =
        r.group.divisors.iter().map(|((prime, e), m)| json!([prime.to_string(), e, big(m)])).collect();
    let unfactored: Vec<Value> = r.group.unfactored.iter().map(|(n, m)| json!([n.to_string(), big(m)])).collect();
    let order: Map<String, Value> = r.order.iter().map(|(prime, e)| (prime.to_string(), big(e))).collect();
    json!({
        "schema": SCHEMA,
        "params": params_json(&r.params),
        "method": r.method.to_string(),
        "bruteforce_mode": mode_name(r.bruteforce_mode),
        "free_rank": r.group.free_rank,
        "elementary_divisors": divisors,
        "unfactored": unfactored,
        "order_factorization": order,
        "p_multiplicities": multiplicities_json(&r.p_part),
        "coprime_part": {
            "u_prime": big(&r.coprime.u_prime),
            "u_exponent": big(&r.coprime.u_exponent),
            "v_prime": big(&r.coprime.v_prime),
            "v_exponent": big(&r.coprime.v_exponent),
        },
        "checks": r.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

/// Rebuilds a result from its JSON form. Parameters are re-derived from
/// `(p, ell, t)` and must match the recorded `q, k, u, v`.
pub fn result_from_json(v: &Value) -> Result<CriticalGroupResult, CliError> {
    let schema = parse_u64(field(v, "schema")?)?;
    if schema != SCHEMA {
        return Err(bad(format!("unsupported schema {schema}")));
    }
    let pj = field(v, "params")?;
    let params = Params::new(parse_u64(field(pj, "p")?)?, parse_u64(field(pj, "ell")?)?, parse_u32(field(pj, "t")?)?)?;
    for (key, want) in [("q", &params.q), ("k", &params.k), ("u", &params.u), ("v", &params.v)] {
        if parse_big(field(pj, key)?)? != *want {
            return Err(bad(format!("params.{key} is inconsistent with (p, ell, t)")));
        }
    }
    let method_name = field(v, "method")?.as_str().ok_or_else(|| bad("method must be a string"))?;
    let method = Method::from_str(method_name).map_err(bad)?;
    let bruteforce_mode = match field(v, "bruteforce_mode")? {
        Value::Null => None,
        m if m == "full_snf" => Some(BruteforceMode::FullSnf),
        m if m == "local_snf" => Some(BruteforceMode::LocalSnf),
        m => return Err(bad(format!("unknown bruteforce_mode {m}"))),
    };

    let mut group = AbelianGroupDesc::free(parse_u64(field(v, "free_rank")?)?);
    for entry in array(field(v, "elementary_divisors")?, "elementary_divisors")? {
        match entry.as_array().map(Vec::as_slice) {
            Some([prime, e, m]) => group.add_prime_power(parse_big(prime)?, parse_u32(e)?, parse_big(m)?),
            _ => return Err(bad(format!("malformed elementary divisor {entry}"))),
        }
    }
    for entry in array(field(v, "unfactored")?, "unfactored")? {
        match entry.as_array().map(Vec::as_slice) {
            Some([n, m]) => {
                *group.unfactored.entry(parse_big(n)?).or_default() += parse_big(m)?;
            }
            _ => return Err(bad(format!("malformed unfactored entry {entry}"))),
        }
    }

    let order_obj = field(v, "order_factorization")?.as_object().ok_or_else(|| bad("order_factorization must be an object"))?;
    let mut order = BTreeMap::new();
    for (prime, e) in order_obj {
        order.insert(parse_big(&Value::String(prime.clone()))?, parse_big(e)?);
    }

    let mult_obj = field(v, "p_multiplicities")?.as_object().ok_or_else(|| bad("p_multiplicities must be an object"))?;
    let mut counts = Vec::new();
    for (j, e) in mult_obj {
        let j: u32 = j.parse().map_err(|_| bad(format!("bad exponent key {j:?}")))?;
        counts.push((j, parse_big(e)?));
    }
    let p_part = PMultiplicities::from_counts(params.p, counts);

    let cj = field(v, "coprime_part")?;
    let coprime = CoprimePart {
        u_prime: parse_big(field(cj, "u_prime")?)?,
        u_exponent: parse_big(field(cj, "u_exponent")?)?,
        v_prime: parse_big(field(cj, "v_prime")?)?,
        v_exponent: parse_big(field(cj, "v_exponent")?)?,
    };

    let mut checks = Vec::new();
    for c in array(field(v, "checks")?, "checks")? {
        let text = |key| field(c, key)?.as_str().map(str::to_string).ok_or_else(|| bad(format!("check {key} must be a string")));
        let passed = field(c, "passed")?.as_bool().ok_or_else(|| bad("check passed must be a boolean"))?;
        checks.push(Check { name: text("name")?, passed, detail: text("detail")? });
    }

    Ok(CriticalGroupResult { params, method, group, p_part, coprime, order, bruteforce_mode, checks })
}

fn factorization_text(order: &BTreeMap<BigUint, BigUint>) -> String {
    if order.is_empty() {
        return "1".into();
    }
    order.iter().map(|(prime, e)| format!("{prime}^{e}")).collect::<Vec<_>>().join(" * ")
}

pub fn result_to_text(r: &CriticalGroupResult) -> String {
    let p = &r.params;
    let mut out = String::new();
    let _ = writeln!(out, "{p}: q = {}, k = {}, u = {}, v = {}", p.q, p.k, p.u, p.v);
    let mode = match r.bruteforce_mode {
        None => String::new(),
        Some(BruteforceMode::FullSnf) => " (full Smith form)".into(),
        Some(BruteforceMode::LocalSnf) => " (local Smith forms)".into(),
    };
    let _ = writeln!(out, "method: {}{mode}", r.method);
    out.push_str(&r.group.to_string());
    let _ = writeln!(out, "order: {}", factorization_text(&r.order));
    let _ = writeln!(out, "{}", r.p_part);
    for c in &r.checks {
        let _ = writeln!(out, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    out
}

pub fn checks_to_text(title: &str, checks: &[Check]) -> String {
    let mut out = format!("{title}\n");
    for c in checks {
        let _ = writeln!(out, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    out
}
