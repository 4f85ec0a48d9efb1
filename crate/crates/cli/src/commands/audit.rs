use std::fs;

use quadfermat::audit::{self, ClaimReport};

use crate::envelope::{Envelope, Params};
use crate::{AuditArgs, Failure, Outcome};

/// Violations echoed per report in text mode.
const SHOWN_VIOLATIONS: usize = 3;

pub fn run(args: AuditArgs) -> Outcome {
    let (lo, hi) = args.range;
    let claims = audit::parse_claims(&args.claims)?;
    let mut reports: Vec<ClaimReport> = audit::audit_claims(lo, hi, &claims, args.prime_bound)?;
    if claims.iter().any(|c| c.is_fermat()) {
        let fermat = audit::audit_fermat(&args.fermat_indices, &claims, args.prime_bound)?;
        for (index, reason) in &fermat.skipped {
            eprintln!("notice: F{index} skipped: {reason}");
        }
        reports.extend(fermat.reports);
    }

    let mut unconfirmed = 0usize;
    for report in &reports {
        for v in &report.violations {
            if !audit::reverify(report.claim, v) {
                unconfirmed += 1;
                eprintln!(
                    "inconsistent: {} violation at n = {} (pair {} x {}) does not replay",
                    report.claim, v.n, v.pair.0, v.pair.1
                );
            }
        }
    }

    for report in &reports {
        let status = if report.passed() { "pass" } else { "FAIL" };
        println!(
            "{:<8} {status}  {} instances, {} violations  ({})",
            report.claim.to_string(),
            report.instances,
            report.violations.len(),
            report.range
        );
        for v in report.violations.iter().take(SHOWN_VIOLATIONS) {
            println!(
                "           n = {}, N = {}, pair ({}, {}), u = {}: {}",
                v.n, v.value, v.pair.0, v.pair.1, v.u, v.detail
            );
        }
        if report.violations.len() > SHOWN_VIOLATIONS {
            println!(
                "           ... {} more",
                report.violations.len() - SHOWN_VIOLATIONS
            );
        }
    }

    if let Some(path) = &args.json {
        let claim_list: Vec<String> = claims.iter().map(ToString::to_string).collect();
        let mut params = Params::new()
            .set("range", format!("{lo}:{hi}"))
            .set("claims", claim_list)
            .set("prime_bound", args.prime_bound);
        if claims.iter().any(|c| c.is_fermat()) {
            let mut indices = args.fermat_indices.clone();
            indices.sort_unstable();
            indices.dedup();
            params = params.set("fermat_indices", indices);
        }
        let json = Envelope::new("audit", params, &reports).to_json();
        fs::write(path, json).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    }

    if unconfirmed > 0 {
        return Err(Failure::inconsistent(format!(
            "{unconfirmed} recorded violations failed re-verification"
        )));
    }
    Ok(())
}
