//! Replicated simulation tested against the exact laws.
//!
//! Runs R independent trajectories, each from its own counter-derived RNG
//! stream, and compares the empirical mean of D/n and the empirical
//! covariance of (D - nD*)/sqrt(n) with the exact values. The reduction
//! over replicates is exact integer arithmetic, so the verdict is
//! byte-identical at any worker count.
//!
//! This is a desk-scale run; the acceptance-level configuration
//! (n = 20000, R = 2000) runs through the `verify` subcommand.
//!
//! Run with: cargo run --release --example monte_carlo_verify

use hooknet::stats::{self, ReplicatePolicy};
use hooknet::{Analysis, SeedSpec};

fn main() -> hooknet::Result<()> {
    let seed = SeedSpec::parse(
        r#"{
            "vertices": ["hook", "x", "y", "z"],
            "edges": [
                ["hook", "x"], ["hook", "y"], ["hook", "z"],
                ["x", "y"], ["x", "z"], ["y", "z"]
            ],
            "loops": {"y": 2},
            "hook": "hook"
        }"#,
    )?;
    let a = Analysis::derive(&seed, 2)?;

    let (n, replicates, base_seed, jobs) = (2_000, 500, 7, 4);
    let stats = stats::replicate(&a.model, n, replicates, base_seed, jobs)?;

    // The covariance estimate is the noisy part at this scale; its relative
    // error shrinks like 1/sqrt(R), so the desk run gets a looser bound.
    let policy = ReplicatePolicy {
        cov_tol: 0.2,
        ..ReplicatePolicy::default()
    };
    let verdict = stats::compare_theory(&stats, &a.laws, &policy)?;

    for row in &verdict.mean_rows {
        println!(
            "mean D[{}]/n = {:.5} (limit {}), |dev| = {:.2e}",
            row.label, row.empirical, row.theory, row.abs_dev
        );
    }
    println!(
        "max mean deviation {:.2e} (tol {}), cov deviation {:.3} (tol {})",
        verdict.max_mean_dev, policy.mean_tol, verdict.cov_rel_dev, policy.cov_tol
    );
    for w in &verdict.warnings {
        println!("warning: {w}");
    }
    println!("pass: {}", verdict.pass);
    assert!(verdict.pass, "desk-scale verification should pass");
    Ok(())
}
