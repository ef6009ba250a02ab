//! Closed-form spectrum against independent determinant checks.
//!
//! The replacement matrix of any hooking network has an integer spectrum
//! known in closed form: the balance factor once, -1 with multiplicity
//! k - 1, and -2, ..., -m with multiplicity k each. This example builds a
//! few profiles directly (no seed document needed), prints the claimed
//! spectrum, and confirms each eigenvalue with a fraction-free integer
//! determinant, plus probe values that must come out nonzero.
//!
//! Run with: cargo run --example spectrum_check

use hooknet::profile::DegreeProfile;
use hooknet::spectrum;
use hooknet::urn::UrnModel;

fn main() -> hooknet::Result<()> {
    // (m, degrees, counts, hook index)
    let cases = [
        (2, vec![3, 7], vec![3, 1], 0),
        (3, vec![3, 7], vec![3, 1], 0),
        (4, vec![2, 3, 5], vec![2, 2, 1], 2),
        (5, vec![1, 2, 3, 4], vec![2, 3, 2, 1], 1),
    ];

    for (m, degrees, counts, hook) in cases {
        let profile = DegreeProfile::from_parts(m, degrees.clone(), counts.clone(), hook)?;
        let model = UrnModel::build(&profile);
        let eigen = spectrum::eigenvalues(&profile);
        println!(
            "m = {m}, degrees {degrees:?} x {counts:?}: dimension {} x {}",
            model.a.rows, model.a.cols
        );

        let claimed: Vec<String> = eigen.iter().map(|(l, c)| format!("{l} (x{c})")).collect();
        println!("  claimed spectrum: {}", claimed.join(", "));

        let check = spectrum::verify_spectrum(&model, &eigen);
        for c in &check.eigenvalue_checks {
            println!("  det(A - ({}) I) = {}", c.lambda, c.determinant);
            assert!(c.pass);
        }
        for c in &check.probe_checks {
            // A probe is a value that is not claimed as an eigenvalue; its
            // determinant must be nonzero or the claimed multiplicities
            // would undercount.
            println!("  probe det(A - ({}) I) = {}", c.lambda, c.determinant);
            assert!(c.pass);
        }
        println!("  multiplicities cover the dimension: {}\n", check.multiplicity_accounting);
    }
    Ok(())
}
