//! Strong-law limits and Gaussian covariance, including a degenerate case.
//!
//! For an ordinary seed the degree counts obey D/n -> D* almost surely and
//! (D - nD*)/sqrt(n) has a limiting normal law with an exactly computable
//! covariance. When the hook sits alone in its degree class the network is
//! degenerate: one component of the principal eigenvector vanishes, the
//! hook's class empties in the limit, and the Gaussian law no longer
//! applies; some linear combinations of counts become deterministic.
//!
//! Run with: cargo run --example degree_laws

use hooknet::{Analysis, SeedSpec};
use num_traits::Zero;

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
    println!("ordinary seed at m = 2 (degenerate = {}):", a.laws.degenerate);
    for (label, lim) in a.laws.labels.iter().zip(a.laws.strong_law.d_star.iter()) {
        println!("  D*[{label}] = {lim}");
    }

    // The covariance rows sum to zero: the node total is deterministic, so
    // the fluctuation of the summed counts vanishes.
    let sigma = &a.laws.sigma;
    assert!(sigma.is_symmetric());
    assert!(sigma.row_sums().iter().all(Zero::is_zero));
    println!("  Sigma is {} x {}, symmetric, zero row sums", sigma.rows, sigma.cols);
    println!("  Sigma[0][0] = {}", hooknet::ratio::Exact(sigma.get(0, 0).clone()));

    // Aggregating history classes with equal carried degree gives the plain
    // degree law; here no two classes collide, so it is a permutation-free
    // regrouping of the same numbers.
    for (d, lim) in a.laws.plain_degrees.iter().zip(a.laws.plain_d_star.iter()) {
        println!("  plain degree {d}: limit {lim}");
    }
    println!();

    // A degenerate seed: the hook is the only degree-1 vertex.
    let pendant = SeedSpec::parse(
        r#"{
            "vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["b", "d"]],
            "hook": "a"
        }"#,
    )?;
    let d = Analysis::derive(&pendant, 1)?;
    println!("pendant-hook seed at m = 1 (degenerate = {}):", d.laws.degenerate);
    println!("  central limit theorem applicable: {}", d.laws.clt_applicable);
    for (label, share) in d.laws.labels.iter().zip(d.spectrum.v1.iter()) {
        println!("  v1[{label}] = {share}");
    }
    for (deg, lim) in d.laws.plain_degrees.iter().zip(d.laws.plain_d_star.iter()) {
        println!("  plain degree {deg}: limit {lim}");
    }
    // The emptied hook class has zero limiting variance. The remaining
    // classes still fluctuate, but their joint covariance is a single outer
    // product (rank one), so the right linear combination of them is
    // asymptotically deterministic.
    println!(
        "  plain covariance diagonal: {:?}",
        (0..d.laws.plain_sigma.rows)
            .map(|i| hooknet::ratio::Exact(d.laws.plain_sigma.get(i, i).clone()).to_string())
            .collect::<Vec<_>>()
    );
    Ok(())
}
