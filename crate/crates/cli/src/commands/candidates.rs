use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use quadfermat::json;
use quadfermat::quadform::{self, Parity, QuadTarget};

use super::brace_list;
use crate::envelope::{Envelope, Params};
use crate::{CandidatesArgs, Failure, Outcome};

/// Interval members listed explicitly up to this many.
const LIST_LIMIT: u64 = 64;

#[derive(Serialize)]
struct Residues {
    prime: u64,
    parametric: BTreeSet<u64>,
    qr: BTreeSet<u64>,
    equal: bool,
}

#[derive(Serialize)]
struct CandidatesResult<'a> {
    #[serde(serialize_with = "json::nat")]
    n: &'a BigUint,
    #[serde(rename = "N", serialize_with = "json::nat")]
    value: &'a BigUint,
    parity: Parity,
    offset: u32,
    #[serde(serialize_with = "json::nat")]
    u_min: &'a BigUint,
    u_sup: String,
    #[serde(serialize_with = "json::nat")]
    count: &'a BigUint,
    /// Omitted when empty or too long to list.
    #[serde(
        serialize_with = "json::nat_vec",
        skip_serializing_if = "Vec::is_empty"
    )]
    members: Vec<BigUint>,
    residues: Option<&'a Residues>,
}

pub fn run(args: CandidatesArgs) -> Outcome {
    let target = QuadTarget::new(args.n.clone())?;
    let interval = quadform::u_interval(&target);
    let count = interval.len();
    let members: Vec<BigUint> = match u64::try_from(&count).ok() {
        Some(k) if k <= LIST_LIMIT => (0..k).map(|i| &interval.u_min + i).collect(),
        _ => Vec::new(),
    };
    let residues = match args.prime {
        Some(p) => {
            let parametric = quadform::admissible_residues_parametric(&target, p)?;
            let qr = quadform::admissible_residues_qr(&target, p)?;
            let equal = parametric == qr;
            Some(Residues {
                prime: p,
                parametric,
                qr,
                equal,
            })
        }
        None => None,
    };

    if args.json {
        let mut params = Params::new().nat("n", target.n());
        if let Some(p) = args.prime {
            params = params.set("prime", p);
        }
        let results = CandidatesResult {
            n: target.n(),
            value: target.value(),
            parity: target.parity(),
            offset: target.offset(),
            u_min: &interval.u_min,
            u_sup: interval.u_sup.to_string(),
            count: &count,
            members,
            residues: residues.as_ref(),
        };
        print!("{}", Envelope::new("candidates", params, results).to_json());
    } else {
        println!(
            "n = {}, N = {} ({} n, centers 8u + {})",
            target.n(),
            target.value(),
            target.parity(),
            target.offset()
        );
        if members.is_empty() && !interval.is_empty() {
            println!("interval {interval} -> {count} values");
        } else {
            println!("interval {interval} -> {}", brace_list(&members));
        }
        if let Some(r) = &residues {
            let list = |s: &BTreeSet<u64>| brace_list(&s.iter().collect::<Vec<_>>());
            println!("mod {}: parametric {}", r.prime, list(&r.parametric));
            println!("mod {}: qr         {}", r.prime, list(&r.qr));
            println!("equal={}", r.equal);
        }
    }
    match residues {
        Some(r) if !r.equal => Err(Failure::inconsistent(format!(
            "residue sets modulo {} disagree",
            r.prime
        ))),
        _ => Ok(()),
    }
}
