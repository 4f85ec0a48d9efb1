use num_bigint::BigUint;
use serde::Serialize;

use quadfermat::arith;
use quadfermat::fermat_generic::{self, GenericVerdict, SquareSplit};
use quadfermat::json;
use quadfermat::quadform::{self, FactorPair, Parity, QuadTarget, SieveOptions, Verdict};

use crate::envelope::{Envelope, Params};
use crate::{FactorArgs, FactorGenericArgs, Failure, Outcome};

#[derive(Serialize)]
struct FactorResult<'a> {
    #[serde(serialize_with = "json::nat")]
    n: &'a BigUint,
    #[serde(rename = "N", serialize_with = "json::nat")]
    value: &'a BigUint,
    parity: Parity,
    interval: String,
    verdict: &'static str,
    pairs: &'a [FactorPair],
    examined: u64,
    skipped_qr: u64,
    skipped_paper: u64,
    trial_divisor: Option<u64>,
}

pub fn run(args: FactorArgs) -> Outcome {
    let target = match (&args.n, &args.value) {
        (Some(n), _) => QuadTarget::new(n.clone())?,
        (None, Some(value)) => QuadTarget::from_value(value)?,
        (None, None) => return Err(Failure::invalid("one of --n or --N is required")),
    };
    let options = SieveOptions {
        filter_primes: arith::odd_primes_up_to(args.prime_bound),
        use_paper_filters: args.paper_filters,
        want_all: args.all,
    };
    if args.paper_filters {
        eprintln!("warning: congruence skips are enabled; a prime verdict is not conclusive");
    }
    let interval = quadform::u_interval(&target);
    let out = quadform::sieve_enumerate(&target, &options)?;
    let composite = matches!(out.verdict, Verdict::Composite(_));

    if args.json {
        let params = match &args.value {
            Some(value) => Params::new().nat("N", value),
            None => Params::new().nat("n", target.n()),
        };
        let params = params
            .set("all", args.all)
            .set("paper_filters", args.paper_filters)
            .set("prime_bound", args.prime_bound);
        let results = FactorResult {
            n: target.n(),
            value: target.value(),
            parity: target.parity(),
            interval: interval.to_string(),
            verdict: if composite { "composite" } else { "prime" },
            pairs: out.pairs(),
            examined: out.examined,
            skipped_qr: out.skipped_qr,
            skipped_paper: out.skipped_paper,
            trial_divisor: out.trial_divisor,
        };
        print!("{}", Envelope::new("factor", params, results).to_json());
    } else {
        println!(
            "n = {}, N = {} ({} n, centers 8u + {})",
            target.n(),
            target.value(),
            target.parity(),
            target.offset()
        );
        println!("interval u in {interval}");
        if let Some(p) = out.trial_divisor {
            println!("filter prime {p} divides N");
        }
        for pair in out.pairs() {
            println!(
                "{} = {} x {}  (u = {}, center = {}, d = {})",
                target.value(),
                pair.a,
                pair.b,
                pair.witness_u,
                pair.center,
                pair.d
            );
        }
        if !composite {
            println!("prime");
        }
        println!(
            "examined {} candidates, skipped {} by residues, {} by congruences",
            out.examined, out.skipped_qr, out.skipped_paper
        );
    }
    if composite {
        Ok(())
    } else {
        Err(Failure::negative())
    }
}

#[derive(Serialize)]
struct GenericResult<'a> {
    #[serde(rename = "N", serialize_with = "json::nat")]
    value: &'a BigUint,
    verdict: &'static str,
    split: Option<&'a SquareSplit>,
    steps: u64,
}

pub fn run_generic(args: FactorGenericArgs) -> Outcome {
    let budget = args.budget.unwrap_or(u64::MAX);
    let out = fermat_generic::fermat_factor(&args.value, budget)?;
    let (verdict, split) = match &out.verdict {
        GenericVerdict::Split(s) => ("composite", Some(s)),
        GenericVerdict::Prime => ("prime", None),
        GenericVerdict::BudgetExhausted => ("budget_exhausted", None),
    };
    if args.json {
        let mut params = Params::new().nat("N", &args.value);
        if let Some(b) = args.budget {
            params = params.set("budget", b);
        }
        let results = GenericResult {
            value: &args.value,
            verdict,
            split,
            steps: out.steps,
        };
        print!(
            "{}",
            Envelope::new("factor-generic", params, results).to_json()
        );
    } else {
        match split {
            Some(s) => println!(
                "{} = {} x {}  (c = {}, d = {})",
                args.value, s.a, s.b, s.c, s.d
            ),
            None => println!("{verdict}"),
        }
        println!("tested {} centers", out.steps);
    }
    match split {
        Some(_) => Ok(()),
        None => Err(Failure::negative()),
    }
}
