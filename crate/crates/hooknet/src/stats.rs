//! Replicate-level Monte-Carlo estimation and comparison with exact laws.
//!
//! Replicates accumulate integer degree counts exactly; floating point
//! appears once, in the final division. The per-replicate random stream is
//! derived from the base seed and the replicate index alone, and integer
//! sums are order-independent, so results are bit-identical at every
//! parallelism level.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::DegreeLawReport;
use crate::ratio;
use crate::sim::{self, Mode};
use crate::urn::UrnModel;

/// Identifier of the generator family baked into every report.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Below this replicate count the covariance estimate is flagged as shaky.
const STABLE_REPLICATES: u32 = 30;

/// Tolerances for the theory comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicatePolicy {
    /// Max absolute deviation of empirical mean components.
    pub mean_tol: f64,
    /// Max Frobenius-relative deviation of the covariance estimate.
    pub cov_tol: f64,
    /// Max absolute entry where the limit covariance row is identically zero.
    pub zero_tol: f64,
}

impl Default for ReplicatePolicy {
    fn default() -> Self {
        // Calibrated to n = 20000, R = 2000 sampling error scales.
        ReplicatePolicy { mean_tol: 0.02, cov_tol: 0.10, zero_tol: 0.01 }
    }
}

/// Empirical means and covariances over independent replicates.
#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub n: u64,
    pub replicates: u32,
    pub base_seed: u64,
    pub rng_algorithm: &'static str,
    /// Empirical mean of D/n per ledger label.
    pub empirical_mean: Vec<f64>,
    /// Sample covariance of (D - n D*)/sqrt(n) per label pair. The centering
    /// constant cancels in the sample covariance, so no theory enters here.
    pub empirical_cov: Vec<Vec<f64>>,
    /// Same, aggregated over equal plain degrees.
    pub plain_mean: Vec<f64>,
    pub plain_cov: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

#[derive(Clone)]
struct Acc {
    sum: Vec<i128>,
    prod: Vec<i128>,
    runs: u32,
}

impl Acc {
    fn new(dim: usize) -> Acc {
        Acc { sum: vec![0; dim], prod: vec![0; dim * dim], runs: 0 }
    }

    fn add(&mut self, d: &[i64]) {
        let dim = self.sum.len();
        for (acc, &v) in self.sum.iter_mut().zip(d) {
            *acc += i128::from(v);
        }
        for r in 0..dim {
            let dr = i128::from(d[r]);
            for c in r..dim {
                self.prod[r * dim + c] += dr * i128::from(d[c]);
            }
        }
        self.runs += 1;
    }

    fn merge(&mut self, other: &Acc) {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.prod.iter_mut().zip(&other.prod) {
            *a += b;
        }
        self.runs += other.runs;
    }

    fn mean(&self, n: u64) -> Vec<f64> {
        let denom = self.runs as f64 * n as f64;
        self.sum.iter().map(|&s| s as f64 / denom).collect()
    }

    /// Sample covariance of D/sqrt(n) with divisor runs-1 (or 1 when runs=2
    /// is all we have; callers refuse runs < 2).
    fn covariance(&self, n: u64) -> Vec<Vec<f64>> {
        let dim = self.sum.len();
        let r = i128::from(self.runs);
        let divisor = (self.runs - 1).max(1) as f64 * self.runs as f64 * n as f64;
        let mut cov = vec![vec![0f64; dim]; dim];
        for row in 0..dim {
            for col in row..dim {
                let exact = r * self.prod[row * dim + col] - self.sum[row] * self.sum[col];
                let v = exact as f64 / divisor;
                cov[row][col] = v;
                cov[col][row] = v;
            }
        }
        cov
    }
}

/// Runs `replicates` independent growths and summarizes their degree counts.
///
/// Replicate i draws from stream i of a generator seeded with `base_seed`.
/// `jobs` caps worker threads; any value yields identical output.
pub fn replicate(
    model: &UrnModel,
    n: u64,
    replicates: u32,
    base_seed: u64,
    jobs: usize,
) -> Result<RunStats> {
    if n < 1 {
        return Err(Error::Parameter("need at least 1 step".into()));
    }
    if replicates < 2 {
        return Err(Error::Parameter(
            "need at least 2 replicates for a covariance estimate".into(),
        ));
    }
    sim::check_horizon(model, n)?;
    let ledger = model.profile.ledger();
    let dim = ledger.len();
    let groups = ledger.aggregation_rows();

    let jobs = jobs.max(1).min(replicates as usize);
    let chunk = (replicates as usize).div_ceil(jobs);
    let mut partials: Vec<Acc> = Vec::with_capacity(jobs);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for t in 0..jobs {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(replicates as usize);
            if lo >= hi {
                break;
            }
            handles.push(scope.spawn(move || {
                let mut acc = Acc::new(dim);
                for i in lo..hi {
                    let mut rng = ChaCha12Rng::seed_from_u64(base_seed);
                    rng.set_stream(i as u64);
                    let out = sim::run(model, n, &mut rng, Mode::Urn, &[], false)
                        .expect("horizon was pre-checked");
                    acc.add(&out.degrees);
                }
                acc
            }));
        }
        for h in handles {
            partials.push(h.join().expect("replicate worker never panics"));
        }
    });
    // Integer partial sums merge exactly; order cannot matter.
    let mut acc = Acc::new(dim);
    for p in &partials {
        acc.merge(p);
    }
    assert_eq!(acc.runs, replicates);

    let mut plain = Acc::new(groups.len());
    // Aggregated accumulators derive exactly from the resolved ones.
    plain.runs = acc.runs;
    for (g, row) in groups.iter().enumerate() {
        for (label, &w) in row.iter().enumerate() {
            if w != 0 {
                plain.sum[g] += acc.sum[label];
            }
        }
    }
    for ga in 0..groups.len() {
        for gb in 0..groups.len() {
            let mut total = 0i128;
            for (la, &wa) in groups[ga].iter().enumerate() {
                if wa == 0 {
                    continue;
                }
                for (lb, &wb) in groups[gb].iter().enumerate() {
                    if wb != 0 {
                        let (r, c) = (la.min(lb), la.max(lb));
                        total += acc.prod[r * dim + c];
                    }
                }
            }
            plain.prod[ga * groups.len() + gb] = total;
        }
    }

    let mut warnings = Vec::new();
    if replicates < STABLE_REPLICATES {
        warnings.push(format!(
            "insufficient replicates: covariance from R = {replicates} runs is noisy; use R >= {STABLE_REPLICATES}"
        ));
    }

    Ok(RunStats {
        n,
        replicates,
        base_seed,
        rng_algorithm: RNG_ALGORITHM,
        empirical_mean: acc.mean(n),
        empirical_cov: acc.covariance(n),
        plain_mean: plain.mean(n),
        plain_cov: plain.covariance(n),
        warnings,
    })
}

/// One mean-comparison row of the verdict table.
#[derive(Debug, Clone, Serialize)]
pub struct MeanRow {
    pub label: String,
    pub theory: String,
    pub empirical: f64,
    pub abs_dev: f64,
}

/// Quantitative comparison of empirical statistics with the exact laws.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub policy: ReplicatePolicy,
    pub mean_rows: Vec<MeanRow>,
    pub max_mean_dev: f64,
    pub mean_pass: bool,
    /// Frobenius-relative deviation of the resolved covariance estimate.
    pub cov_rel_dev: f64,
    pub cov_pass: bool,
    /// Labels whose limit covariance row is identically zero, checked
    /// absolutely entry by entry.
    pub zero_rows: Vec<String>,
    pub max_zero_dev: f64,
    pub zero_pass: bool,
    /// Aggregated-covariance comparison; present when plain degrees collide.
    pub plain_cov_rel_dev: Option<f64>,
    pub plain_cov_pass: Option<bool>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn frobenius_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)))
        .sum::<f64>()
        .sqrt()
}

/// Compares empirical estimates against the exact limit laws.
pub fn compare_theory(
    stats: &RunStats,
    report: &DegreeLawReport,
    policy: &ReplicatePolicy,
) -> Result<VerifyReport> {
    let dim = report.labels.len();
    if stats.empirical_mean.len() != dim {
        return Err(Error::Parameter(format!(
            "dimension mismatch: {} empirical labels vs {} theoretical",
            stats.empirical_mean.len(),
            dim
        )));
    }

    let theory_mean = report.d_star_f64();
    let mut mean_rows = Vec::with_capacity(dim);
    let mut max_mean_dev = 0f64;
    for j in 0..dim {
        let abs_dev = (stats.empirical_mean[j] - theory_mean[j]).abs();
        max_mean_dev = max_mean_dev.max(abs_dev);
        mean_rows.push(MeanRow {
            label: report.labels[j].clone(),
            theory: report.strong_law.d_star[j].to_string(),
            empirical: stats.empirical_mean[j],
            abs_dev,
        });
    }
    let mean_pass = max_mean_dev <= policy.mean_tol;

    let theory_cov = report.sigma_f64();
    let cov_rel_dev = frobenius_diff(&stats.empirical_cov, &theory_cov) / frobenius(&theory_cov);
    let cov_pass = cov_rel_dev <= policy.cov_tol;

    let mut zero_rows = Vec::new();
    let mut max_zero_dev = 0f64;
    for j in 0..dim {
        let structurally_zero =
            (0..dim).all(|c| num_traits::Zero::is_zero(report.sigma.get(j, c)));
        if structurally_zero {
            zero_rows.push(report.labels[j].clone());
            for c in 0..dim {
                max_zero_dev = max_zero_dev.max(stats.empirical_cov[j][c].abs());
            }
        }
    }
    let zero_pass = max_zero_dev <= policy.zero_tol;

    let collides = report.plain_degrees.len() < dim;
    let (plain_cov_rel_dev, plain_cov_pass) = if collides {
        let theory_plain = report.plain_sigma_f64();
        let dev = frobenius_diff(&stats.plain_cov, &theory_plain) / frobenius(&theory_plain);
        (Some(dev), Some(dev <= policy.cov_tol))
    } else {
        (None, None)
    };

    let pass = mean_pass && cov_pass && zero_pass && plain_cov_pass.unwrap_or(true);
    Ok(VerifyReport {
        policy: policy.clone(),
        mean_rows,
        max_mean_dev,
        mean_pass,
        cov_rel_dev,
        cov_pass,
        zero_rows,
        max_zero_dev,
        zero_pass,
        plain_cov_rel_dev,
        plain_cov_pass,
        warnings: stats.warnings.clone(),
        pass,
    })
}

/// Max absolute deviation of the empirical mean from an arbitrary vector,
/// for side-by-side variant comparisons.
pub fn max_mean_deviation(stats: &RunStats, target: &[ratio::Exact]) -> f64 {
    stats
        .empirical_mean
        .iter()
        .zip(target)
        .map(|(e, t)| (e - t.to_f64()).abs())
        .fold(0f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::DegreeProfile;
    use crate::spectrum::principal_eigenvector;

    fn binary_model() -> UrnModel {
        UrnModel::build(&DegreeProfile::from_parts(2, vec![3, 7], vec![3, 1], 0).unwrap())
    }

    #[test]
    fn parallel_matches_serial_bitwise() {
        let model = binary_model();
        let serial = replicate(&model, 200, 40, 11, 1).unwrap();
        let parallel = replicate(&model, 200, 40, 11, 4).unwrap();
        assert_eq!(serial.empirical_mean, parallel.empirical_mean);
        assert_eq!(serial.empirical_cov, parallel.empirical_cov);
        assert_eq!(serial.plain_cov, parallel.plain_cov);
    }

    #[test]
    fn few_replicates_warn() {
        let model = binary_model();
        let stats = replicate(&model, 50, 2, 0, 1).unwrap();
        assert!(stats.warnings.iter().any(|w| w.contains("insufficient replicates")));
        // Divisor R-1 = 1: the covariance is still finite and symmetric.
        assert_eq!(stats.empirical_cov[0][1], stats.empirical_cov[1][0]);
    }

    #[test]
    fn identical_replicates_have_zero_covariance() {
        // Degenerate horizon: with n=1 and a seed whose first draw is forced
        // (single color), every replicate is identical.
        let model = UrnModel::build(&DegreeProfile::from_parts(1, vec![2], vec![3], 0).unwrap());
        let stats = replicate(&model, 1, 8, 0, 2).unwrap();
        for row in &stats.empirical_cov {
            for v in row {
                assert_eq!(*v, 0.0);
            }
        }
    }

    #[test]
    fn theory_vs_itself_passes() {
        let model = binary_model();
        let spectrum = principal_eigenvector(&model).unwrap();
        let (_, report) = crate::laws::derive_laws(&model, &spectrum).unwrap();
        let mut stats = replicate(&model, 400, 64, 5, 2).unwrap();
        // Overwrite the empirical fields with the theory itself.
        stats.empirical_mean = report.d_star_f64();
        stats.empirical_cov = report.sigma_f64();
        let verdict = compare_theory(&stats, &report, &ReplicatePolicy::default()).unwrap();
        assert_eq!(verdict.max_mean_dev, 0.0);
        assert_eq!(verdict.cov_rel_dev, 0.0);
        assert!(verdict.pass);
    }

    #[test]
    fn dimension_mismatch_is_refused() {
        let model = binary_model();
        let spectrum = principal_eigenvector(&model).unwrap();
        let (_, report) = crate::laws::derive_laws(&model, &spectrum).unwrap();
        let other =
            UrnModel::build(&DegreeProfile::from_parts(1, vec![2], vec![3], 0).unwrap());
        let stats = replicate(&other, 50, 4, 0, 1).unwrap();
        assert!(compare_theory(&stats, &report, &ReplicatePolicy::default()).is_err());
    }
}
