//! Serde helpers that write naturals as bare JSON numbers of any length.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::arith::Natural;

fn raw<S: Serializer>(digits: String, s: S) -> Result<S::Ok, S::Error> {
    RawValue::from_string(digits)
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

pub fn nat<S: Serializer>(x: &Natural, s: S) -> Result<S::Ok, S::Error> {
    raw(x.to_string(), s)
}

pub fn int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    raw(x.to_string(), s)
}

pub fn opt_nat<S: Serializer>(x: &Option<Natural>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => nat(x, s),
        None => s.serialize_none(),
    }
}

pub fn nat_pair<S: Serializer>(pair: &(Natural, Natural), s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&RawNat(&pair.0))?;
    seq.serialize_element(&RawNat(&pair.1))?;
    seq.end()
}

pub fn opt_nat_pair<S: Serializer>(
    pair: &Option<(Natural, Natural)>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match pair {
        Some(pair) => nat_pair(pair, s),
        None => s.serialize_none(),
    }
}

/// Borrowing wrapper for use inside collections.
pub struct RawNat<'a>(pub &'a Natural);

impl Serialize for RawNat<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        nat(self.0, s)
    }
}

pub fn nat_vec<S: Serializer>(xs: &[Natural], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&RawNat(x))?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pow2;

    #[derive(Serialize)]
    struct Row {
        #[serde(serialize_with = "nat")]
        big: Natural,
        #[serde(serialize_with = "nat_pair")]
        pair: (Natural, Natural),
    }

    #[test]
    fn writes_unquoted_digits() {
        let row = Row {
            big: pow2(64) + 1u32,
            pair: (Natural::from(5u32), Natural::from(13u32)),
        };
        assert_eq!(
            serde_json::to_string(&row).unwrap(),
            r#"{"big":18446744073709551617,"pair":[5,13]}"#
        );
    }
}
