//! Serde adapters writing integers as decimal strings, so serialized
//! certificates never depend on a reader's integer width.

use std::fmt::Display;
use std::str::FromStr;

use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

fn parse<'de, T: FromStr, D: Deserializer<'de>>(s: &str) -> Result<T, D::Error> {
    // Canonical decimal only: no sign, no leading zeros, no whitespace.
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(D::Error::custom(format!("not a canonical decimal integer: {s:?}")));
    }
    s.parse().map_err(|_| D::Error::custom(format!("integer out of range: {s}")))
}

pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
    let s = String::deserialize(d)?;
    parse::<T, D>(&s)
}

pub mod vec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| parse::<T, D>(s)).collect()
    }
}

pub mod opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Vec<u64>>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(m) => s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<u64>>>, D::Error> {
        let Some(m) = Option::<Vec<Vec<String>>>::deserialize(d)? else { return Ok(None) };
        m.iter().map(|r| r.iter().map(|s| parse::<u64, D>(s)).collect()).collect::<Result<_, _>>().map(Some)
    }
}
