//! Single-leaf perturbations of numeric claims, for testing that the
//! verifier rejects every altered certificate.

use num_bigint::BigInt;
use serde_json::{Number, Value};

fn is_decimal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn pointer_token(k: &str) -> String {
    k.replace('~', "~0").replace('/', "~1")
}

/// JSON pointers to every numeric leaf of `v`: JSON numbers and decimal
/// strings.
pub fn numeric_leaves(v: &Value) -> Vec<String> {
    fn walk(v: &Value, path: String, out: &mut Vec<String>) {
        match v {
            Value::Number(_) => out.push(path),
            Value::String(s) if is_decimal(s) => out.push(path),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, format!("{path}/{i}"), out)),
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, format!("{path}/{}", pointer_token(k)), out)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

/// Changes the numeric leaf at `pointer` to a different value of the same
/// JSON type: integers move by one, reals by one unit in the last place.
pub fn perturb(v: &mut Value, pointer: &str) -> bool {
    let Some(leaf) = v.pointer_mut(pointer) else {
        return false;
    };
    match leaf {
        Value::Number(n) => {
            let new = if let Some(u) = n.as_u64() {
                Number::from(if u == u64::MAX { u - 1 } else { u + 1 })
            } else if let Some(i) = n.as_i64() {
                Number::from(i - 1)
            } else {
                let x = n.as_f64().unwrap_or(0.0);
                let y = if x == 0.0 { f64::MIN_POSITIVE } else { f64::from_bits(x.to_bits() + 1) };
                match Number::from_f64(y) {
                    Some(m) => m,
                    None => return false,
                }
            };
            *leaf = Value::Number(new);
            true
        }
        Value::String(s) if is_decimal(s) => {
            let x: BigInt = s.parse().expect("decimal string");
            *s = (x + 1u32).to_string();
            true
        }
        _ => false,
    }
}
