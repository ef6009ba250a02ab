//! The ball-count urn underlying a hooking network.
//!
//! Every insertion position at a node of label (j, s) is a ball of color
//! `j + s*k`, for s in 0..m. A hooking draws one ball uniformly, and the
//! replacement matrix records the deterministic ball-count update for a draw
//! of each color. The matrix is balanced: every row adds the same number of
//! balls, which is what makes the strong laws kick in.

use serde::Serialize;

use crate::matrix::IntMatrix;
use crate::profile::DegreeProfile;

/// Replacement matrix, initial ball counts, and balance factor.
#[derive(Debug, Clone, Serialize)]
pub struct UrnModel {
    pub profile: DegreeProfile,
    /// mk x mk integer replacement matrix; row = drawn color.
    #[serde(serialize_with = "serialize_matrix")]
    pub a: IntMatrix,
    /// Initial ball counts: m balls per seed vertex, by degree class.
    pub x0: Vec<i64>,
    /// Balls added per step: m*tau0 - m - 1.
    pub lambda1: i64,
}

fn serialize_matrix<S: serde::Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.rows))?;
    for r in 0..m.rows {
        seq.serialize_element(m.row(r))?;
    }
    seq.end()
}

impl UrnModel {
    /// Assembles the replacement matrix for a profile.
    pub fn build(profile: &DegreeProfile) -> UrnModel {
        let k = profile.k();
        let m = profile.m as usize;
        let mi = m as i64;
        let i = profile.hook_index;
        let mk = m * k;
        let mut a = IntMatrix::zeros(mk, mk);

        // Core block: a draw of a never-hooked color retires that ball and
        // adds m fresh positions per new node, minus the m positions the
        // latched copy of the hook never contributes.
        let h = |j: usize, l: usize| -> i64 {
            mi * profile.counts[l] as i64
                - if l == j { mi } else { 0 }
                - if l == i { mi } else { 0 }
        };

        for j in 0..k {
            for l in 0..k {
                a.set(j, l, h(j, l));
            }
            if m >= 2 {
                // The drawn node advances one history step.
                a.set(j, k + j, mi - 1);
            }
        }
        for r in 2..=m {
            let base = (r - 1) * k;
            for j in 0..k {
                // A partially hooked draw spawns the same fresh positions,
                // plus the m it would have removed had the node been new.
                for l in 0..k {
                    a.set(base + j, l, h(j, l) + if l == j { mi } else { 0 });
                }
                a.set(base + j, base + j, -((m - r + 1) as i64));
                if r < m {
                    a.set(base + j, base + k + j, (m - r) as i64);
                }
            }
        }

        let mut x0 = vec![0i64; mk];
        for j in 0..k {
            x0[j] = mi * profile.counts[j] as i64;
        }

        UrnModel { profile: profile.clone(), a, x0, lambda1: profile.balance() }
    }

    /// Matrix side length: m * k colors.
    pub fn colors(&self) -> usize {
        self.a.rows
    }

    /// Total initial balls: m * tau0.
    pub fn initial_total(&self) -> i64 {
        self.x0.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(m: u32, degrees: Vec<u64>, counts: Vec<u64>, hook: usize) -> DegreeProfile {
        DegreeProfile::from_parts(m, degrees, counts, hook).unwrap()
    }

    #[test]
    fn ternary_matrix() {
        let model = UrnModel::build(&profile(3, vec![3, 7], vec![3, 1], 0));
        assert_eq!(
            model.a.to_rows(),
            vec![
                vec![3, 3, 2, 0, 0, 0],
                vec![6, 0, 0, 2, 0, 0],
                vec![6, 3, -2, 0, 1, 0],
                vec![6, 3, 0, -2, 0, 1],
                vec![6, 3, 0, 0, -1, 0],
                vec![6, 3, 0, 0, 0, -1],
            ]
        );
        assert_eq!(model.x0, vec![9, 3, 0, 0, 0, 0]);
        assert_eq!(model.lambda1, 8);
    }

    #[test]
    fn binary_matrix() {
        let model = UrnModel::build(&profile(2, vec![3, 7], vec![3, 1], 0));
        assert_eq!(
            model.a.to_rows(),
            vec![
                vec![2, 2, 1, 0],
                vec![4, 0, 0, 1],
                vec![4, 2, -1, 0],
                vec![4, 2, 0, -1],
            ]
        );
        assert_eq!(model.x0, vec![6, 2, 0, 0]);
        assert_eq!(model.lambda1, 5);
    }

    #[test]
    fn unary_matrices() {
        let model = UrnModel::build(&profile(1, vec![1, 2, 3], vec![1, 2, 1], 0));
        assert_eq!(
            model.a.to_rows(),
            vec![vec![-1, 2, 1], vec![0, 1, 1], vec![0, 2, 0]]
        );
        let model = UrnModel::build(&profile(1, vec![3, 7], vec![3, 1], 0));
        assert_eq!(model.a.to_rows(), vec![vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn rows_balance() {
        for (m, degrees, counts, hook) in [
            (1, vec![1, 2, 3], vec![1, 2, 1], 0),
            (2, vec![3, 7], vec![3, 1], 0),
            (3, vec![3, 7], vec![3, 1], 0),
            (4, vec![2, 3, 5], vec![2, 2, 1], 2),
        ] {
            let model = UrnModel::build(&profile(m, degrees, counts, hook));
            for s in model.a.row_sums() {
                assert_eq!(s, model.lambda1);
            }
            assert_eq!(model.initial_total(), i64::from(m) * model.profile.tau0() as i64);
        }
    }
}
