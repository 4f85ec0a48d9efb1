use std::fs::File;
use std::io::{self, Write};

use num_bigint::BigUint;
use rayon::prelude::*;

use quadfermat::bench::{self, BenchRow};

use crate::envelope::{Envelope, Params};
use crate::{BenchArgs, Failure, Outcome};

pub const CSV_HEADER: [&str; 6] = ["strategy", "n", "N", "candidates", "found", "elapsed_ns"];

fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.strategy.to_string(),
            r.target_n.to_string(),
            r.value.to_string(),
            r.candidates_examined.to_string(),
            r.found.to_string(),
            r.elapsed_ns.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: BenchArgs) -> Outcome {
    let strategies = bench::parse_strategies(&args.strategies)?;
    // each target is timed on its own; rows keep target order
    let per_target = args
        .targets
        .par_iter()
        .map(|n| {
            bench::run_bench(
                std::slice::from_ref(n),
                &strategies,
                args.repetitions,
                args.prime_bound,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<BenchRow> = per_target.into_iter().flatten().collect();

    if let Some(path) = &args.csv {
        let file =
            File::create(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        write_csv(file, &rows).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    }
    if args.json {
        let targets: Vec<&BigUint> = args.targets.iter().collect();
        let params = Params::new()
            .set(
                "targets",
                targets.iter().map(ToString::to_string).collect::<Vec<_>>(),
            )
            .set(
                "strategies",
                strategies
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
            )
            .set("repetitions", args.repetitions)
            .set("prime_bound", args.prime_bound);
        print!("{}", Envelope::new("bench", params, &rows).to_json());
    } else if args.csv.is_none() {
        write_csv(io::stdout().lock(), &rows).map_err(Failure::invalid)?;
    } else {
        for r in &rows {
            println!(
                "{:<26} n = {:<6} {:>10} candidates  found={}",
                r.strategy.to_string(),
                r.target_n.to_string(),
                r.candidates_examined,
                r.found
            );
        }
    }
    Ok(())
}
