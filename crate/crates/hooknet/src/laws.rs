//! Limit laws for degree counts.
//!
//! From the urn's principal eigenvector come the strong-law limits of every
//! degree class. The fluctuation side is a fixed-point equation for the
//! limiting ball-count covariance, solved exactly on the symmetric subspace,
//! then pushed forward to degree space through an exact linear map and
//! aggregated over colliding plain degrees.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::modsolve;
use crate::profile::DegreeProfile;
use crate::ratio::{self, Exact};
use crate::spectrum::Spectrum;
use crate::urn::UrnModel;

/// Strong-law limits per degree label: counts divided by steps converge to
/// these rationals almost surely.
#[derive(Debug, Clone, Serialize)]
pub struct StrongLaw {
    /// Limit of D/n per ledger label.
    pub d_star: Vec<Exact>,
    /// The same vector without the remaining-slot division on active labels:
    /// the raw ball-count limits. Kept for side-by-side display; its active
    /// block double-counts nodes and fails node conservation whenever m > s+1
    /// occurs, so it is never used downstream.
    pub unscaled_active_variant: Vec<Exact>,
}

/// Limiting covariance of the ball counts, with its verification bit.
#[derive(Debug, Clone, Serialize)]
pub struct CovarianceSolution {
    /// Limit of Cov[X]/n, an mk x mk exact rational matrix.
    pub q: RatMatrix,
    /// The fixed-point equation re-substituted exactly; always true for a
    /// returned solution.
    pub residual_zero: bool,
}

/// Exact linear map from ball-count space to degree-count space.
#[derive(Debug, Clone)]
pub struct DegreeMap {
    /// (m+1)k x mk matrix: active rows pick a color and divide by remaining
    /// slots; saturated rows reconstruct draw counts through the inverse of
    /// the transposed replacement matrix.
    pub l: RatMatrix,
    /// Constant part of the affine map (nonzero only on saturated rows).
    pub offset: Vec<BigRational>,
}

/// The full degree-space limit law bundle.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeLawReport {
    /// Human-readable label names, ledger order.
    pub labels: Vec<String>,
    /// Plain degree value of each label, ledger order.
    pub label_degrees: Vec<u64>,
    pub strong_law: StrongLaw,
    /// Limiting covariance of (D - n D*)/sqrt(n), ledger order.
    pub sigma: RatMatrix,
    /// Distinct plain degrees, ascending.
    pub plain_degrees: Vec<u64>,
    /// Strong-law limits aggregated over labels with equal plain degree.
    pub plain_d_star: Vec<Exact>,
    /// Covariance aggregated over labels with equal plain degree.
    pub plain_sigma: RatMatrix,
    pub degenerate: bool,
    pub invertible: bool,
    /// The Gaussian fluctuation law is backed by the urn theory only when the
    /// principal eigenvector is strictly positive; degenerate profiles get
    /// their covariance cross-validated by simulation instead.
    pub clt_applicable: bool,
}

/// Computes the strong-law limit vector over the full ledger.
pub fn strong_law_limits(spectrum: &Spectrum, profile: &DegreeProfile) -> Result<StrongLaw> {
    let k = profile.k();
    let m = profile.m as usize;
    let lambda = ratio::int(profile.balance());
    let mut d_star: Vec<BigRational> = Vec::with_capacity((m + 1) * k);
    let mut unscaled: Vec<BigRational> = Vec::with_capacity((m + 1) * k);
    for s in 0..m {
        for j in 0..k {
            let ball_limit = &lambda * &spectrum.v1[j + s * k].0;
            // A node with s hookings holds m-s balls; divide to count nodes.
            d_star.push(&ball_limit / ratio::int((m - s) as i64));
            unscaled.push(ball_limit);
        }
    }
    for j in 0..k {
        // Saturated nodes are counted by their final draw.
        let y_limit = spectrum.v1[(m - 1) * k + j].0.clone();
        d_star.push(y_limit.clone());
        unscaled.push(y_limit);
    }
    let total = ratio::sum(&d_star);
    assert_eq!(
        total,
        ratio::int(profile.nodes_per_step() as i64),
        "strong-law limits must sum to the nodes added per step"
    );
    Ok(StrongLaw {
        d_star: d_star.into_iter().map(Exact).collect(),
        unscaled_active_variant: unscaled.into_iter().map(Exact).collect(),
    })
}

/// Index of the unordered pair (i, j), i <= j, in the packed upper triangle.
fn pack(c: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < c);
    i * c - i * (i + 1) / 2 + j
}

/// Solves the covariance fixed-point equation for the ball counts.
///
/// The unknown symmetric matrix is packed into its upper triangle, giving a
/// linear system with mk(mk+1)/2 unknowns, solved exactly. Uniqueness holds
/// whenever the balance factor is positive, because every non-principal
/// eigenvalue is a negative integer.
pub fn solve_covariance(model: &UrnModel, spectrum: &Spectrum) -> Result<CovarianceSolution> {
    let c = model.colors();
    let lambda_int = model.lambda1;
    let lambda = ratio::int(lambda_int);
    let v1: Vec<BigRational> = spectrum.v1.iter().map(|e| e.0.clone()).collect();

    // Driving term: transported single-draw covariance of the replacements.
    let w = RatMatrix::from_fn(c, c, |r, t| {
        let prod = &v1[r] * &v1[t];
        if r == t {
            &v1[r] - &prod
        } else {
            -prod
        }
    });
    let a_rat = model.a.to_rational();
    let at = a_rat.transpose();
    let b = at.mul(&w).mul(&a_rat);

    let n_half = c * (c + 1) / 2;
    let mut coeff = RatMatrix::zeros(n_half, n_half);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(n_half);
    for r in 0..c {
        for t in r..c {
            let eq = pack(c, r, t);
            let mut row = vec![0i64; n_half];
            for u in 0..c {
                let aur = model.a.get(u, r);
                if aur != 0 {
                    row[pack(c, u.min(t), u.max(t))] += aur;
                }
                let aut = model.a.get(u, t);
                if aut != 0 {
                    row[pack(c, r.min(u), r.max(u))] += aut;
                }
            }
            row[pack(c, r, t)] -= lambda_int;
            for (col, v) in row.into_iter().enumerate() {
                if v != 0 {
                    coeff.set(eq, col, ratio::int(v));
                }
            }
            rhs.push(-(&lambda * b.get(r, t)));
        }
    }

    let packed = modsolve::solve_rational(&coeff, &rhs)?;
    let q = RatMatrix::from_fn(c, c, |r, t| packed[pack(c, r.min(t), r.max(t))].clone());

    // Re-substitute into the original matrix equation.
    let residual = at
        .mul(&q)
        .add(&q.mul(&a_rat))
        .add(&b.scale(&lambda))
        .sub(&q.scale(&lambda));
    let residual_zero = residual.is_zero();
    assert!(residual_zero, "covariance solution must satisfy its equation exactly");
    assert!(
        q.row_sums().iter().all(Zero::is_zero),
        "deterministic total ball count forces zero row sums"
    );
    Ok(CovarianceSolution { q, residual_zero })
}

/// Builds the exact affine map from ball counts to degree counts.
pub fn degree_linear_map(model: &UrnModel) -> Result<DegreeMap> {
    let profile = &model.profile;
    let k = profile.k();
    let m = profile.m as usize;
    let c = m * k;
    let at_inv = model.a.to_rational().transpose().inverse().map_err(|_| {
        Error::Structural(
            "non-invertible path network: saturated-node counts cannot be reconstructed \
             from ball counts for a two-vertex seed at arity 1"
                .into(),
        )
    })?;
    let mut l = RatMatrix::zeros((m + 1) * k, c);
    let mut offset = vec![BigRational::zero(); (m + 1) * k];
    for s in 0..m {
        for j in 0..k {
            l.set(j + s * k, j + s * k, ratio::rat(1, (m - s) as i64));
        }
    }
    for j in 0..k {
        let src = (m - 1) * k + j;
        let dst = m * k + j;
        let mut shift = BigRational::zero();
        for col in 0..c {
            let v = at_inv.get(src, col).clone();
            shift -= &v * ratio::int(model.x0[col]);
            l.set(dst, col, v);
        }
        offset[dst] = shift;
    }
    Ok(DegreeMap { l, offset })
}

/// Assembles the degree-space law report from the solved pieces.
pub fn degree_covariance(
    model: &UrnModel,
    spectrum: &Spectrum,
    cov: &CovarianceSolution,
    map: &DegreeMap,
) -> Result<DegreeLawReport> {
    let profile = &model.profile;
    let ledger = profile.ledger();
    let strong_law = strong_law_limits(spectrum, profile)?;

    let sigma = map.l.mul(&cov.q).mul(&map.l.transpose());
    assert!(sigma.is_symmetric(), "degree covariance must be symmetric");
    assert!(
        sigma.row_sums().iter().all(Zero::is_zero),
        "deterministic node count forces zero row sums"
    );

    let agg = RatMatrix::from_rows(
        ledger
            .aggregation_rows()
            .iter()
            .map(|row| row.iter().map(|&v| ratio::int(v)).collect())
            .collect(),
    );
    let d_star_col = RatMatrix::column(
        &strong_law.d_star.iter().map(|e| e.0.clone()).collect::<Vec<_>>(),
    );
    let plain_col = agg.mul(&d_star_col);
    let plain_d_star: Vec<Exact> =
        (0..agg.rows).map(|r| Exact(plain_col.get(r, 0).clone())).collect();
    let plain_sigma = agg.mul(&sigma).mul(&agg.transpose());

    let labels = (0..ledger.len()).map(|i| ledger.label_name(i, profile)).collect();
    let label_degrees = ledger.labels.iter().map(|l| l.plain_degree).collect();

    Ok(DegreeLawReport {
        labels,
        label_degrees,
        strong_law,
        sigma,
        plain_degrees: ledger.group_degrees.clone(),
        plain_d_star,
        plain_sigma,
        degenerate: spectrum.degenerate,
        invertible: spectrum.invertible,
        clt_applicable: !spectrum.degenerate,
    })
}

/// One-call pipeline from an urn model to the full law report.
pub fn derive_laws(model: &UrnModel, spectrum: &Spectrum) -> Result<(CovarianceSolution, DegreeLawReport)> {
    let cov = solve_covariance(model, spectrum)?;
    let map = degree_linear_map(model)?;
    let report = degree_covariance(model, spectrum, &cov, &map)?;
    Ok((cov, report))
}

impl DegreeLawReport {
    /// Strong-law limits as doubles, ledger order.
    pub fn d_star_f64(&self) -> Vec<f64> {
        self.strong_law.d_star.iter().map(Exact::to_f64).collect()
    }

    /// Degree covariance as double rows, ledger order.
    pub fn sigma_f64(&self) -> Vec<Vec<f64>> {
        self.sigma.to_f64_rows()
    }

    /// Aggregated covariance as double rows.
    pub fn plain_sigma_f64(&self) -> Vec<Vec<f64>> {
        self.plain_sigma.to_f64_rows()
    }

    /// Aggregated strong-law limits as doubles.
    pub fn plain_d_star_f64(&self) -> Vec<f64> {
        self.plain_d_star.iter().map(Exact::to_f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::DegreeProfile;
    use crate::ratio::{int, rat};
    use crate::spectrum::principal_eigenvector;

    fn pipeline(m: u32, degrees: Vec<u64>, counts: Vec<u64>, hook: usize) -> (UrnModel, Spectrum) {
        let model = UrnModel::build(&DegreeProfile::from_parts(m, degrees, counts, hook).unwrap());
        let spectrum = principal_eigenvector(&model).unwrap();
        (model, spectrum)
    }

    #[test]
    fn binary_strong_law() {
        let (model, spectrum) = pipeline(2, vec![3, 7], vec![3, 1], 0);
        let law = strong_law_limits(&spectrum, &model.profile).unwrap();
        let expected: Vec<BigRational> =
            [30, 15, 10, 5, 2, 1].iter().map(|&n| rat(n, 21)).collect();
        assert_eq!(law.d_star.iter().map(|e| e.0.clone()).collect::<Vec<_>>(), expected);
        let unscaled: Vec<BigRational> =
            [60, 30, 10, 5, 2, 1].iter().map(|&n| rat(n, 21)).collect();
        assert_eq!(
            law.unscaled_active_variant.iter().map(|e| e.0.clone()).collect::<Vec<_>>(),
            unscaled
        );
        // The variant double-counts: its total exceeds the nodes per step.
        assert_eq!(ratio::sum(&unscaled), rat(108, 21));
    }

    #[test]
    fn binary_ball_covariance() {
        let (model, spectrum) = pipeline(2, vec![3, 7], vec![3, 1], 0);
        let cov = solve_covariance(&model, &spectrum).unwrap();
        let scale = rat(5, 441);
        let expected = [
            [48, -32, -27, 11],
            [-32, 40, 11, -19],
            [-27, 11, 20, -4],
            [11, -19, -4, 12],
        ];
        for r in 0..4 {
            for t in 0..4 {
                assert_eq!(cov.q.get(r, t), &(&scale * int(expected[r][t])), "entry ({r},{t})");
            }
        }
        assert!(cov.residual_zero);
    }

    #[test]
    fn binary_degree_covariance() {
        let (model, spectrum) = pipeline(2, vec![3, 7], vec![3, 1], 0);
        let (_, report) = derive_laws(&model, &spectrum).unwrap();
        let scale = rat(5, 882);
        let expected = [
            [24, -16, -27, 11, 3, 5],
            [-16, 20, 11, -19, 5, -1],
            [-27, 11, 40, -8, -13, -3],
            [11, -19, -8, 24, -3, -5],
            [3, 5, -13, -3, 10, -2],
            [5, -1, -3, -5, -2, 6],
        ];
        for r in 0..6 {
            for t in 0..6 {
                assert_eq!(
                    report.sigma.get(r, t),
                    &(&scale * int(expected[r][t])),
                    "entry ({r},{t})"
                );
            }
        }
        assert!(report.clt_applicable);
    }

    #[test]
    fn unary_two_class_laws() {
        let (model, spectrum) = pipeline(1, vec![3, 7], vec![3, 1], 0);
        let (cov, report) = derive_laws(&model, &spectrum).unwrap();
        let d: Vec<BigRational> = report.strong_law.d_star.iter().map(|e| e.0.clone()).collect();
        assert_eq!(d, vec![rat(4, 3), rat(2, 3), rat(2, 3), rat(1, 3)]);
        assert_eq!(cov.q.get(0, 0), &rat(1, 9));
        assert_eq!(cov.q.get(0, 1), &rat(-1, 9));
        let scale = rat(1, 9);
        let expected = [
            [1, -1, -1, 1],
            [-1, 1, 1, -1],
            [-1, 1, 1, -1],
            [1, -1, -1, 1],
        ];
        for r in 0..4 {
            for t in 0..4 {
                assert_eq!(
                    report.sigma.get(r, t),
                    &(&scale * int(expected[r][t])),
                    "entry ({r},{t})"
                );
            }
        }
    }

    #[test]
    fn unary_inactive_row_reconstruction() {
        // Saturated degree-10 nodes satisfy D10 = (X1 - X2)/2 - 1.
        let (model, _) = pipeline(1, vec![3, 7], vec![3, 1], 0);
        let map = degree_linear_map(&model).unwrap();
        assert_eq!(map.l.get(3, 0), &rat(1, 2));
        assert_eq!(map.l.get(3, 1), &rat(-1, 2));
        assert_eq!(map.offset[3], int(-1));
    }

    #[test]
    fn degenerate_laws() {
        let (model, spectrum) = pipeline(1, vec![1, 2, 3], vec![1, 2, 1], 0);
        let (cov, report) = derive_laws(&model, &spectrum).unwrap();
        assert!(report.degenerate);
        assert!(!report.clt_applicable);
        // Ball covariance: the hook class is frozen, the others mirror.
        let scale = rat(1, 9);
        let q_expected = [[0, 0, 0], [0, 1, -1], [0, -1, 1]];
        for r in 0..3 {
            for t in 0..3 {
                assert_eq!(cov.q.get(r, t), &(&scale * int(q_expected[r][t])), "({r},{t})");
            }
        }
        assert_eq!(
            report.plain_d_star.iter().map(|e| e.0.clone()).collect::<Vec<_>>(),
            vec![int(0), rat(4, 3), rat(4, 3), rat(1, 3)]
        );
        assert_eq!(report.plain_degrees, vec![1, 2, 3, 4]);
    }

    #[test]
    fn covariance_matrices_are_positive_semidefinite() {
        for (m, degrees, counts, hook) in [
            (2, vec![3u64, 7], vec![3u64, 1], 0usize),
            (1, vec![3, 7], vec![3, 1], 0),
            (1, vec![1, 2, 3], vec![1, 2, 1], 0),
            (3, vec![3, 7], vec![3, 1], 0),
        ] {
            let (model, spectrum) = pipeline(m, degrees, counts, hook);
            let (cov, report) = derive_laws(&model, &spectrum).unwrap();
            assert!(cov.q.is_positive_semidefinite());
            assert!(report.sigma.is_positive_semidefinite());
            assert!(report.plain_sigma.is_positive_semidefinite());
        }
    }
}
