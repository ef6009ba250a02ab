//! Degree profiles and the admissible-degree ledger.
//!
//! A profile condenses a seed into the data the urn construction needs: the
//! distinct vertex degrees with their counts, the arity, and which degree the
//! hook carries. The ledger then enumerates every degree label that can ever
//! appear in the grown network, as pairs (original degree, hookings received),
//! and records which labels collide at the same plain degree value.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed::SeedSpec;

/// Distinct seed degrees, their counts, and the hook's position among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// Arity: the number of hookings a vertex accepts before saturating.
    pub m: u32,
    /// Distinct seed degrees, strictly increasing.
    pub degrees: Vec<u64>,
    /// Vertices of each degree; same length as `degrees`, all positive.
    pub counts: Vec<u64>,
    /// Index into `degrees` of the hook's degree (0-based).
    pub hook_index: usize,
}

impl DegreeProfile {
    /// Builds the profile of a seed at arity `m`.
    pub fn new(seed: &SeedSpec, m: u32) -> Result<DegreeProfile> {
        if m == 0 {
            return Err(Error::Parameter("arity must be at least 1".into()));
        }
        let mut degs = seed.degrees();
        let hook_degree = seed.hook_degree();
        degs.sort_unstable();
        let mut degrees = Vec::new();
        let mut counts = Vec::new();
        for d in degs {
            if degrees.last() == Some(&d) {
                *counts.last_mut().expect("counts tracks degrees") += 1;
            } else {
                degrees.push(d);
                counts.push(1);
            }
        }
        let hook_index = degrees
            .binary_search(&hook_degree)
            .expect("hook degree occurs in the seed");
        Ok(DegreeProfile { m, degrees, counts, hook_index })
    }

    /// Direct construction from degree data, for synthetic profiles.
    pub fn from_parts(m: u32, degrees: Vec<u64>, counts: Vec<u64>, hook_index: usize) -> Result<DegreeProfile> {
        if m == 0 {
            return Err(Error::Parameter("arity must be at least 1".into()));
        }
        if degrees.is_empty() || degrees.len() != counts.len() {
            return Err(Error::Parameter("degrees and counts must be nonempty and equal length".into()));
        }
        if !degrees.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parameter("degrees must be strictly increasing".into()));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::Parameter("every degree count must be positive".into()));
        }
        if hook_index >= degrees.len() {
            return Err(Error::Parameter("hook index out of range".into()));
        }
        let p = DegreeProfile { m, degrees, counts, hook_index };
        if p.tau0() < 2 {
            return Err(Error::Parameter("profile needs at least 2 seed vertices".into()));
        }
        Ok(p)
    }

    /// Number of distinct seed degrees.
    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    /// Seed order: total vertex count.
    pub fn tau0(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Degree of the hook.
    pub fn hook_degree(&self) -> u64 {
        self.degrees[self.hook_index]
    }

    /// Balance factor of the associated urn: each step adds this many balls.
    pub fn balance(&self) -> i64 {
        let m = i64::from(self.m);
        m * self.tau0() as i64 - m - 1
    }

    /// Nodes added to the network per hooking.
    pub fn nodes_per_step(&self) -> u64 {
        self.tau0() - 1
    }

    /// The full label ledger for this profile.
    pub fn ledger(&self) -> AdmissibleDegreeLedger {
        AdmissibleDegreeLedger::new(self)
    }
}

/// One degree label: a seed degree together with a hooking history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeLabel {
    /// Index into the profile's `degrees` (0-based).
    pub j: usize,
    /// Hookings received so far; the label is active while `s < m`.
    pub s: u32,
    /// Plain degree carried in the network: degrees[j] + s * hook_degree.
    pub plain_degree: u64,
}

/// Every degree label the network can exhibit, with collision bookkeeping.
///
/// Labels are ordered history-major: all never-hooked labels first in degree
/// order, then once-hooked, and so on, with the saturated block last. For
/// active labels this matches the urn color numbering `j + s*k`.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleDegreeLedger {
    pub labels: Vec<DegreeLabel>,
    /// Label indices grouped by equal plain degree, ascending in degree.
    pub groups: Vec<Vec<usize>>,
    /// The distinct plain degree of each group, ascending.
    pub group_degrees: Vec<u64>,
}

impl AdmissibleDegreeLedger {
    fn new(profile: &DegreeProfile) -> AdmissibleDegreeLedger {
        let k = profile.k();
        let h = profile.hook_degree();
        let mut labels = Vec::with_capacity((profile.m as usize + 1) * k);
        for s in 0..=profile.m {
            for j in 0..k {
                labels.push(DegreeLabel {
                    j,
                    s,
                    plain_degree: profile.degrees[j] + u64::from(s) * h,
                });
            }
        }
        let mut degrees: Vec<u64> = labels.iter().map(|l| l.plain_degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let groups: Vec<Vec<usize>> = degrees
            .iter()
            .map(|&d| {
                (0..labels.len()).filter(|&i| labels[i].plain_degree == d).collect()
            })
            .collect();
        AdmissibleDegreeLedger { labels, groups, group_degrees: degrees }
    }

    /// Total number of labels: (m+1) * k.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Groups containing more than one label: distinct histories whose plain
    /// degrees coincide.
    pub fn collisions(&self) -> Vec<&Vec<usize>> {
        self.groups.iter().filter(|g| g.len() > 1).collect()
    }

    /// 0/1 aggregation matrix: row per plain degree, column per label.
    pub fn aggregation_rows(&self) -> Vec<Vec<i64>> {
        self.groups
            .iter()
            .map(|g| {
                let mut row = vec![0i64; self.labels.len()];
                for &i in g {
                    row[i] = 1;
                }
                row
            })
            .collect()
    }

    /// Human-readable name of a label, e.g. `d3+2h`.
    pub fn label_name(&self, idx: usize, profile: &DegreeProfile) -> String {
        let l = &self.labels[idx];
        if l.s == 0 {
            format!("d{}", profile.degrees[l.j])
        } else {
            format!("d{}+{}h", profile.degrees[l.j], l.s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> SeedSpec {
        SeedSpec::parse(
            r#"{
              "vertices": ["hook", "x", "y", "z"],
              "edges": [["hook","x"],["hook","y"],["hook","z"],["x","y"],["x","z"],["y","z"]],
              "loops": {"y": 2},
              "hook": "hook"
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn binary_profile_of_the_bundled_seed() {
        let p = DegreeProfile::new(&fig2(), 2).unwrap();
        assert_eq!(p.degrees, vec![3, 7]);
        assert_eq!(p.counts, vec![3, 1]);
        assert_eq!(p.hook_index, 0);
        assert_eq!(p.tau0(), 4);
        assert_eq!(p.balance(), 5);
    }

    #[test]
    fn ledger_degrees_for_the_binary_profile() {
        let p = DegreeProfile::new(&fig2(), 2).unwrap();
        let ledger = p.ledger();
        let degs: Vec<u64> = ledger.labels.iter().map(|l| l.plain_degree).collect();
        assert_eq!(degs, vec![3, 7, 6, 10, 9, 13]);
        assert!(ledger.collisions().is_empty());
        assert_eq!(ledger.group_degrees, vec![3, 6, 7, 9, 10, 13]);
    }

    #[test]
    fn collision_detection() {
        // Hook degree 2 with seed degrees 2 and 4: one hooking of a degree-2
        // node reaches plain degree 4, colliding with never-hooked degree-4.
        let p = DegreeProfile::from_parts(2, vec![2, 4], vec![2, 1], 0).unwrap();
        let ledger = p.ledger();
        let collisions = ledger.collisions();
        assert_eq!(collisions.len(), 2);
        let names: Vec<u64> = collisions
            .iter()
            .map(|g| ledger.labels[g[0]].plain_degree)
            .collect();
        assert_eq!(names, vec![4, 6]);
    }

    #[test]
    fn unary_saturating_ledger() {
        let p = DegreeProfile::from_parts(1, vec![2], vec![3], 0).unwrap();
        let ledger = p.ledger();
        assert_eq!(ledger.len(), 2);
        assert_eq!(ledger.labels[0].plain_degree, 2);
        assert_eq!(ledger.labels[1].plain_degree, 4);
    }

    #[test]
    fn triangle_profile() {
        let s = SeedSpec::parse(
            r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["a","c"]],"hook":"a"}"#,
        )
        .unwrap();
        let p = DegreeProfile::new(&s, 1).unwrap();
        assert_eq!(p.degrees, vec![2]);
        assert_eq!(p.counts, vec![3]);
        assert_eq!(p.hook_index, 0);
    }
}
