//! Urn and graph grown in lockstep from one random stream.
//!
//! The simulator can evolve the urn composition alone, the network graph
//! alone, or both coupled: a single uniform draw per step picks the same
//! insertion position in each representation, so their degree counts must
//! agree exactly at every step. The coupled mode asserts that agreement
//! while it runs and reports it at the end.
//!
//! Run with: cargo run --example coupled_simulation

use hooknet::profile::DegreeProfile;
use hooknet::ratio::rational_to_f64;
use hooknet::sim::{self, Mode};
use hooknet::urn::UrnModel;
use hooknet::{Analysis, SeedSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

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
    let profile = DegreeProfile::new(&seed, 2)?;
    let model = UrnModel::build(&profile);

    let mut rng = ChaCha12Rng::seed_from_u64(42);
    let marks = [10, 100, 1000, 10000];
    let run = sim::run(&model, 10_000, &mut rng, Mode::Coupled, &marks, true)?;
    println!("coupling held at every step: {}", run.coupling_held.unwrap());
    println!("final nodes: {}, steps: {}", run.node_count, run.steps);

    // Convergence toward the exact limits along the trajectory.
    let a = Analysis::derive(&seed, 2)?;
    let labels = &a.laws.labels;
    print!("{:>8}", "step");
    for l in labels {
        print!("{l:>10}");
    }
    println!();
    for cp in &run.checkpoints {
        print!("{:>8}", cp.step);
        for &d in &cp.degrees {
            print!("{:>10.4}", d as f64 / cp.step as f64);
        }
        println!();
    }
    print!("{:>8}", "limit");
    for lim in &a.laws.strong_law.d_star {
        print!("{:>10.4}", rational_to_f64(&lim.0));
    }
    println!();
    Ok(())
}
