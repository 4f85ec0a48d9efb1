//! JSON output wrapper shared by every command.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::value::RawValue;

pub const TOOL_VERSION: &str = concat!("quadfermat ", env!("CARGO_PKG_VERSION"));

/// Command parameters, sorted by key. Naturals are written as bare numbers.
#[derive(Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<&'static str, Box<RawValue>>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nat(mut self, key: &'static str, x: &BigUint) -> Self {
        let raw = RawValue::from_string(x.to_string()).expect("digits are valid JSON");
        self.0.insert(key, raw);
        self
    }

    pub fn set(mut self, key: &'static str, value: impl Serialize) -> Self {
        let raw = serde_json::value::to_raw_value(&value).expect("parameter serializes");
        self.0.insert(key, raw);
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub parameters: Params,
    pub results: T,
    pub tool_version: &'a str,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, parameters: Params, results: T) -> Self {
        Self {
            command,
            parameters,
            results,
            tool_version: TOOL_VERSION,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("envelope serializes");
        out.push('\n');
        out
    }
}
