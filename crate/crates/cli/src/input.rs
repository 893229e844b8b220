//! State files and inline `key=value` settings.
//!
//! Two file formats are accepted: a JSON object, or one `key = value` per
//! line with `#` comments. Values are decimals (`0.1`, `-2.5e-3`) or
//! fractions (`1/3`), parsed exactly so `--exact` sees the intended number.

use std::collections::BTreeMap;
use std::str::FromStr;

use clap::ValueEnum;
use moment_hyp::Rational;
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    #[value(name = "grad13-1d")]
    Grad1d,
    #[value(name = "grad13-3d")]
    Grad3d,
    #[value(name = "mod13")]
    Mod13,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Grad1d => "grad13-1d",
            System::Grad3d => "grad13-3d",
            System::Mod13 => "mod13",
        }
    }

    /// Field names with their equilibrium defaults.
    pub fn fields(self) -> &'static [(&'static str, i64)] {
        match self {
            System::Grad1d => &[("rho", 1), ("u1", 0), ("theta11", 1), ("theta22", 1), ("q1", 0)],
            System::Grad3d => &FIELDS_3D_Q,
            System::Mod13 => &FIELDS_3D_S,
        }
    }
}

const FIELDS_3D_Q: [(&str, i64); 13] = [
    ("rho", 1),
    ("u1", 0),
    ("u2", 0),
    ("u3", 0),
    ("theta11", 1),
    ("theta12", 0),
    ("theta13", 0),
    ("theta22", 1),
    ("theta23", 0),
    ("theta33", 1),
    ("q1", 0),
    ("q2", 0),
    ("q3", 0),
];

const FIELDS_3D_S: [(&str, i64); 13] = [
    ("rho", 1),
    ("u1", 0),
    ("u2", 0),
    ("u3", 0),
    ("theta11", 1),
    ("theta12", 0),
    ("theta13", 0),
    ("theta22", 1),
    ("theta23", 0),
    ("theta33", 1),
    ("s1", 0),
    ("s2", 0),
    ("s3", 0),
];

/// Parses `12`, `-0.25`, `1.5e-3` or `7/8` into an exact rational.
pub fn parse_number(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let bad = || format!("not a number: {text:?}");
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut n = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let scale: BigInt = Pow::pow(&ten, shift.unsigned_abs());
    Ok(if shift >= 0 { Rational::from_integer(n * scale) } else { Rational::new(n, scale) })
}

fn json_number(v: &Value) -> Result<Rational, String> {
    match v {
        Value::Number(n) => parse_number(&n.to_string()),
        Value::String(s) => parse_number(s),
        other => Err(format!("expected a number, got {other}")),
    }
}

/// Raw `key → value` pairs from a state file.
pub fn parse_state_text(text: &str) -> Result<Vec<(String, Rational)>, String> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| format!("bad JSON state: {e}"))?;
        let obj = v.as_object().ok_or("JSON state must be an object")?;
        // a full analysis report carries the state under "state"
        let obj = match obj.get("state").and_then(Value::as_object) {
            Some(inner) => inner,
            None => obj,
        };
        return obj.iter().map(|(k, v)| Ok((k.clone(), json_number(v).map_err(|e| format!("{k}: {e}"))?))).collect();
    }
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_assignment(line).map_err(|e| format!("line {}: {e}", lineno + 1))?);
    }
    Ok(out)
}

pub fn parse_assignment(s: &str) -> Result<(String, Rational), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    Ok((k.trim().to_string(), parse_number(v)?))
}

/// Fills every field of `system`, starting from equilibrium and applying
/// `pairs` in order. Unknown keys are rejected.
pub fn resolve(system: System, pairs: &[(String, Rational)]) -> Result<BTreeMap<&'static str, Rational>, String> {
    let mut values: BTreeMap<&'static str, Rational> =
        system.fields().iter().map(|&(k, d)| (k, Rational::from_integer(d.into()))).collect();
    for (k, v) in pairs {
        let key = system
            .fields()
            .iter()
            .map(|(name, _)| *name)
            .find(|name| name == k)
            .ok_or_else(|| {
                let names: Vec<&str> = system.fields().iter().map(|(n, _)| *n).collect();
                format!("unknown field {k:?} for {}; expected one of {}", system.name(), names.join(", "))
            })?;
        values.insert(key, v.clone());
    }
    Ok(values)
}

/// Exact rationals print as integers or `n/d`.
pub fn rational_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}
