//! Eigenstructure of the replacement matrix.
//!
//! The spectrum has a closed form: the balance factor is the principal
//! eigenvalue, -1 appears k-1 times, and each of -2..-m appears k times.
//! `verify_spectrum` cross-checks that claim with exact integer determinants,
//! and the principal eigenvector comes from a segment recursion with falling
//! factorials, normalized to unit L1 mass.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::ratio::Exact;
use crate::urn::UrnModel;

/// Eigenvalues, principal eigenvector, and structural classification.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// Distinct integer eigenvalues with multiplicities, descending.
    pub eigenvalues: Vec<(i64, usize)>,
    /// Principal left eigenvector of the replacement matrix (eigenvector of
    /// the transpose), L1-normalized, componentwise nonnegative.
    pub v1: Vec<Exact>,
    /// Some component of v1 is zero; happens exactly when the hook's degree
    /// class has a single seed vertex.
    pub degenerate: bool,
    /// The matrix is nonsingular; fails only for a two-vertex seed at arity 1.
    pub invertible: bool,
}

/// Closed-form spectrum of the replacement matrix for a profile.
pub fn eigenvalues(profile: &crate::profile::DegreeProfile) -> Vec<(i64, usize)> {
    let k = profile.k();
    let mut eig = vec![(profile.balance(), 1usize)];
    if k > 1 {
        eig.push((-1, k - 1));
    }
    for r in 2..=i64::from(profile.m) {
        eig.push((-r, k));
    }
    eig
}

/// One determinant check inside a spectrum verification.
#[derive(Debug, Clone, Serialize)]
pub struct DeterminantCheck {
    pub lambda: i64,
    /// Exact det(A - lambda I), rendered in decimal.
    pub determinant: String,
    /// Whether the determinant matched the expectation for this lambda.
    pub pass: bool,
}

/// Report of the exact determinant cross-check of the closed-form spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumVerification {
    /// det(A - lambda I) = 0 for every claimed eigenvalue.
    pub eigenvalue_checks: Vec<DeterminantCheck>,
    /// det(A - lambda I) != 0 for sampled non-eigenvalues.
    pub probe_checks: Vec<DeterminantCheck>,
    /// Multiplicities sum to the matrix dimension.
    pub multiplicity_accounting: bool,
    pub pass: bool,
}

/// Confirms the closed-form spectrum against exact integer determinants.
pub fn verify_spectrum(model: &UrnModel, eigen: &[(i64, usize)]) -> SpectrumVerification {
    let mut eigenvalue_checks = Vec::new();
    for &(lambda, _) in eigen {
        let det = model.a.det_shifted(lambda);
        eigenvalue_checks.push(DeterminantCheck {
            lambda,
            determinant: det.to_string(),
            pass: det.is_zero(),
        });
    }
    let claimed: Vec<i64> = eigen.iter().map(|e| e.0).collect();
    let mut probe_checks = Vec::new();
    for probe in [model.lambda1 + 1, 1] {
        // A probe that happens to be a claimed eigenvalue proves nothing.
        if claimed.contains(&probe) || probe_checks.iter().any(|c: &DeterminantCheck| c.lambda == probe) {
            continue;
        }
        let det = model.a.det_shifted(probe);
        probe_checks.push(DeterminantCheck {
            lambda: probe,
            determinant: det.to_string(),
            pass: !det.is_zero(),
        });
    }
    let multiplicity_accounting =
        eigen.iter().map(|e| e.1).sum::<usize>() == model.colors();
    let pass = multiplicity_accounting
        && eigenvalue_checks.iter().all(|c| c.pass)
        && probe_checks.iter().all(|c| c.pass);
    SpectrumVerification { eigenvalue_checks, probe_checks, multiplicity_accounting, pass }
}

/// Falling factorial x(x-1)...(x-r+1) as a rational.
fn falling(x: i64, r: usize) -> BigRational {
    let mut acc = BigInt::one();
    for t in 0..r as i64 {
        acc *= BigInt::from(x - t);
    }
    BigRational::from_integer(acc)
}

/// Computes the principal eigenvector and classification flags.
///
/// Refuses when the balance factor is zero (a two-vertex seed at arity 1):
/// the urn then adds no balls and no limit law is available from it.
pub fn principal_eigenvector(model: &UrnModel) -> Result<Spectrum> {
    let profile = &model.profile;
    if model.lambda1 <= 0 {
        return Err(Error::Structural(
            "non-invertible path network: a two-vertex seed at arity 1 has balance factor 0, \
             the replacement matrix is singular and carries no growth"
                .into(),
        ));
    }
    let k = profile.k();
    let m = profile.m as usize;
    let i = profile.hook_index;
    let mtau = i64::from(profile.m) * profile.tau0() as i64;

    // Leading segment: one ball-count share per seed vertex of each degree,
    // with the hook's own copy excluded from its class.
    let denom = BigRational::from_integer(BigInt::from(mtau - 1));
    let segment: Vec<BigRational> = (0..k)
        .map(|j| {
            let count = profile.counts[j] as i64 - if j == i { 1 } else { 0 };
            BigRational::from_integer(BigInt::from(i64::from(profile.m) * count)) / &denom
        })
        .collect();

    let mut v1: Vec<BigRational> = Vec::with_capacity(m * k);
    v1.extend(segment.iter().cloned());
    for r in 2..=m {
        // Later segments shrink by a ratio of falling factorials.
        let ratio = falling(i64::from(profile.m) - 1, r - 1) / falling(mtau - 2, r - 1);
        for j in 0..k {
            let scaled = &segment[j] * &ratio;
            v1.push(scaled);
        }
    }
    drop(segment);

    // The segment recursion normalizes itself; any deviation is a defect.
    let norm: BigRational = v1.iter().fold(BigRational::zero(), |a, b| a + b);
    assert!(norm.is_one(), "principal eigenvector must have unit L1 mass");
    assert!(v1.iter().all(|x| !x.is_negative()), "principal eigenvector must be nonnegative");

    // The defining relation, checked exactly.
    let at = model.a.to_rational().transpose();
    let image = at.mul(&RatMatrix::column(&v1));
    let lambda = BigRational::from_integer(BigInt::from(model.lambda1));
    for j in 0..m * k {
        assert_eq!(
            image.get(j, 0),
            &(&v1[j] * &lambda),
            "eigen relation failed at component {j}"
        );
    }

    let degenerate = profile.counts[i] == 1;
    assert_eq!(
        degenerate,
        v1.iter().any(Zero::is_zero),
        "zero components must coincide with a singleton hook class"
    );
    let invertible = !(profile.m == 1 && profile.tau0() == 2);

    Ok(Spectrum {
        eigenvalues: eigenvalues(profile),
        v1: v1.into_iter().map(Exact).collect(),
        degenerate,
        invertible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::DegreeProfile;
    use crate::ratio::rat;

    fn model(m: u32, degrees: Vec<u64>, counts: Vec<u64>, hook: usize) -> UrnModel {
        UrnModel::build(&DegreeProfile::from_parts(m, degrees, counts, hook).unwrap())
    }

    #[test]
    fn closed_form_spectra() {
        let binary = model(2, vec![3, 7], vec![3, 1], 0);
        assert_eq!(eigenvalues(&binary.profile), vec![(5, 1), (-1, 1), (-2, 2)]);
        let ternary = model(3, vec![3, 7], vec![3, 1], 0);
        assert_eq!(
            eigenvalues(&ternary.profile),
            vec![(8, 1), (-1, 1), (-2, 2), (-3, 2)]
        );
        let path = model(1, vec![1], vec![2], 0);
        assert_eq!(eigenvalues(&path.profile), vec![(0, 1)]);
    }

    #[test]
    fn determinant_verification_passes() {
        for m in [
            model(2, vec![3, 7], vec![3, 1], 0),
            model(3, vec![3, 7], vec![3, 1], 0),
            model(1, vec![1, 2, 3], vec![1, 2, 1], 0),
            model(1, vec![3, 7], vec![3, 1], 0),
        ] {
            let report = verify_spectrum(&m, &eigenvalues(&m.profile));
            assert!(report.pass);
        }
    }

    #[test]
    fn probe_determinants_are_nonzero() {
        let binary = model(2, vec![3, 7], vec![3, 1], 0);
        let report = verify_spectrum(&binary, &eigenvalues(&binary.profile));
        assert_eq!(report.probe_checks.len(), 2);
        // Probe at 3 specifically: not an eigenvalue of the binary model.
        let det3 = binary.a.det_shifted(3);
        assert!(!det3.is_zero());
    }

    #[test]
    fn binary_principal_eigenvector() {
        let spectrum = principal_eigenvector(&model(2, vec![3, 7], vec![3, 1], 0)).unwrap();
        let expected = [rat(12, 21), rat(6, 21), rat(2, 21), rat(1, 21)];
        assert_eq!(spectrum.v1.iter().map(|e| e.0.clone()).collect::<Vec<_>>(), expected);
        assert!(!spectrum.degenerate);
        assert!(spectrum.invertible);
    }

    #[test]
    fn degenerate_eigenvector_has_a_zero_block() {
        let spectrum = principal_eigenvector(&model(1, vec![1, 2, 3], vec![1, 2, 1], 0)).unwrap();
        let expected = [rat(0, 1), rat(2, 3), rat(1, 3)];
        assert_eq!(spectrum.v1.iter().map(|e| e.0.clone()).collect::<Vec<_>>(), expected);
        assert!(spectrum.degenerate);
        assert!(spectrum.invertible);
    }

    #[test]
    fn unary_two_class_eigenvector() {
        let spectrum = principal_eigenvector(&model(1, vec![3, 7], vec![3, 1], 0)).unwrap();
        let expected = [rat(2, 3), rat(1, 3)];
        assert_eq!(spectrum.v1.iter().map(|e| e.0.clone()).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn path_network_is_refused() {
        let err = principal_eigenvector(&model(1, vec![1], vec![2], 0)).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }
}
