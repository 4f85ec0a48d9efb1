use num_bigint::BigUint;
use serde::Serialize;

use quadfermat::fermat_numbers::{self as fermat, FermatTarget, LambdaFilters};
use quadfermat::json;

use crate::envelope::{Envelope, Params};
use crate::{Failure, FermatArgs, Mode, Outcome, Switch};

#[derive(Serialize)]
struct LucasHit {
    #[serde(serialize_with = "json::nat")]
    s: BigUint,
    #[serde(serialize_with = "json::nat")]
    divisor: BigUint,
    #[serde(serialize_with = "json::nat")]
    cofactor: BigUint,
}

#[derive(Serialize)]
struct LucasResult {
    index: u32,
    #[serde(serialize_with = "json::nat")]
    s_bound: BigUint,
    s_last: u64,
    complete: bool,
    hits: Vec<LucasHit>,
}

#[derive(Serialize)]
struct LambdaHit {
    #[serde(serialize_with = "json::nat")]
    lambda: BigUint,
    #[serde(serialize_with = "json::nat")]
    center: BigUint,
    #[serde(serialize_with = "json::nat_pair")]
    pair: (BigUint, BigUint),
}

#[derive(Serialize)]
struct LambdaResult {
    index: u32,
    #[serde(serialize_with = "json::nat")]
    lambda_min: BigUint,
    #[serde(serialize_with = "json::nat")]
    lambda_sup: BigUint,
    budget_exhausted: bool,
    examined: u64,
    skipped_mod3: u64,
    skipped_mod4: u64,
    skipped_primes: u64,
    hits: Vec<LambdaHit>,
}

fn lucas(t: &FermatTarget, args: &FermatArgs) -> Result<(LucasResult, bool), Failure> {
    let search = fermat::lucas_search(t, args.budget)?;
    let hits: Vec<LucasHit> = search
        .hits
        .into_iter()
        .map(|h| LucasHit {
            cofactor: t.value() / &h.divisor,
            s: h.s,
            divisor: h.divisor,
        })
        .collect();
    if !args.json {
        println!("F{} = {}", t.index(), t.value());
        for h in &hits {
            println!(
                "s = {}  divisor {}  cofactor {}",
                h.s, h.divisor, h.cofactor
            );
        }
        let how = if search.complete {
            "complete"
        } else {
            "budget reached"
        };
        println!("tested s in [1, {}] ({how})", search.s_last);
    }
    let found = !hits.is_empty();
    let result = LucasResult {
        index: t.index(),
        s_bound: fermat::lucas_s_bound(t)?,
        s_last: search.s_last,
        complete: search.complete,
        hits,
    };
    Ok((result, found))
}

fn lambda(t: &FermatTarget, args: &FermatArgs) -> Result<(LambdaResult, bool), Failure> {
    let filters = match args.filters {
        Switch::On => LambdaFilters::all(args.prime_bound),
        Switch::Off => LambdaFilters::none(),
    };
    let interval = fermat::lambda_interval(t)?;
    let search = fermat::lambda_search(t, args.budget, &filters)?;
    let hits: Vec<LambdaHit> = search
        .hits
        .into_iter()
        .map(|h| {
            let pair = h.factors().expect("hits carry a root");
            LambdaHit {
                lambda: h.lambda,
                center: h.center,
                pair,
            }
        })
        .collect();
    if !args.json {
        println!("F{} = {}", t.index(), t.value());
        println!(
            "lambda interval [{}, {})",
            interval.lambda_min, interval.lambda_sup
        );
        for h in &hits {
            println!("lambda = {}  {} x {}", h.lambda, h.pair.0, h.pair.1);
        }
        println!(
            "examined {}, skipped {} (mod 3) {} (mod 4) {} (primes 3 mod 4){}",
            search.examined,
            search.skipped.mod3,
            search.skipped.mod4,
            search.skipped.primes3mod4,
            if search.budget_exhausted {
                ", budget exhausted"
            } else {
                ""
            }
        );
    }
    let found = !hits.is_empty();
    let result = LambdaResult {
        index: t.index(),
        lambda_min: interval.lambda_min,
        lambda_sup: interval.lambda_sup,
        budget_exhausted: search.budget_exhausted,
        examined: search.examined,
        skipped_mod3: search.skipped.mod3,
        skipped_mod4: search.skipped.mod4,
        skipped_primes: search.skipped.primes3mod4,
        hits,
    };
    Ok((result, found))
}

pub fn run(args: FermatArgs) -> Outcome {
    let t = fermat::make_fermat(args.index)?;
    let mut params = Params::new()
        .set("index", args.index)
        .set("budget", args.budget);
    let found = match args.mode {
        Mode::Lucas => {
            let (result, found) = lucas(&t, &args)?;
            if args.json {
                params = params.set("mode", "lucas");
                print!("{}", Envelope::new("fermat", params, result).to_json());
            }
            found
        }
        Mode::Lambda => {
            let (result, found) = lambda(&t, &args)?;
            if args.json {
                params = params
                    .set("mode", "lambda")
                    .set("filters", args.filters == Switch::On)
                    .set("prime_bound", args.prime_bound);
                print!("{}", Envelope::new("fermat", params, result).to_json());
            }
            found
        }
    };
    if found {
        Ok(())
    } else {
        if !args.json {
            println!("no divisor found");
        }
        Err(Failure::negative())
    }
}
