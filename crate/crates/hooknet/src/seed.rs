//! Seed graph documents: parsing and validation.
//!
//! A seed is described by a small JSON document:
//!
//! ```json
//! {
//!   "vertices": ["a", "b", "c"],
//!   "edges": [["a", "b"], ["b", "c"], ["a", "c"]],
//!   "hook": "a"
//! }
//! ```
//!
//! An optional `"loops"` object maps a vertex to its number of self-loops,
//! each contributing 2 to that vertex's degree. Self-pairs inside `"edges"`
//! and duplicate edges in either orientation are rejected. The graph must be
//! connected through its proper edges and have at least two vertices.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated seed graph with a designated hook vertex.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeedSpec {
    /// Vertex identifiers, in document order.
    pub vertices: Vec<String>,
    /// Unordered proper edges, in document order.
    pub edges: Vec<(String, String)>,
    /// Self-loop counts per vertex; each loop adds 2 to the degree.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub loops: BTreeMap<String, u32>,
    /// The vertex fused into the network at every hooking.
    pub hook: String,
}

#[derive(Deserialize)]
struct SeedDoc {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
    #[serde(default)]
    loops: BTreeMap<String, u32>,
    hook: String,
}

impl SeedSpec {
    /// Parses and validates a seed document.
    pub fn parse(text: &str) -> Result<SeedSpec> {
        let doc: SeedDoc =
            serde_json::from_str(text).map_err(|e| Error::SeedSyntax(e.to_string()))?;
        let spec = SeedSpec {
            vertices: doc.vertices,
            edges: doc.edges.into_iter().map(|[a, b]| (a, b)).collect(),
            loops: doc.loops,
            hook: doc.hook,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Reads and parses a seed document from a file.
    pub fn load(path: &std::path::Path) -> Result<SeedSpec> {
        let text = std::fs::read_to_string(path)?;
        SeedSpec::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (pos, v) in self.vertices.iter().enumerate() {
            if index.insert(v.as_str(), pos).is_some() {
                return Err(Error::SeedInvalid(format!("duplicate vertex \"{v}\"")));
            }
        }
        if self.vertices.len() < 2 {
            return Err(Error::SeedInvalid(format!(
                "seed needs at least 2 vertices, found {}",
                self.vertices.len()
            )));
        }
        if !index.contains_key(self.hook.as_str()) {
            return Err(Error::SeedInvalid(format!("unknown hook \"{}\"", self.hook)));
        }
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (a, b) in &self.edges {
            let &ia = index
                .get(a.as_str())
                .ok_or_else(|| Error::SeedInvalid(format!("edge endpoint \"{a}\" is not a vertex")))?;
            let &ib = index
                .get(b.as_str())
                .ok_or_else(|| Error::SeedInvalid(format!("edge endpoint \"{b}\" is not a vertex")))?;
            if ia == ib {
                return Err(Error::SeedInvalid(format!(
                    "self-loop [\"{a}\", \"{a}\"] in edges; use the \"loops\" field for self-loops"
                )));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(Error::SeedInvalid(format!("duplicate edge [\"{a}\", \"{b}\"]")));
            }
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
        }
        for (v, count) in &self.loops {
            if !index.contains_key(v.as_str()) {
                return Err(Error::SeedInvalid(format!(
                    "loop vertex \"{v}\" is not a vertex"
                )));
            }
            if *count == 0 {
                return Err(Error::SeedInvalid(format!(
                    "loop count for \"{v}\" must be positive; omit the entry instead"
                )));
            }
        }
        // Connectivity over proper edges; loops attach nothing.
        let mut visited = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        visited[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(stranded) = visited.iter().position(|&x| !x) {
            return Err(Error::SeedInvalid(format!(
                "graph is disconnected: vertex \"{}\" is unreachable",
                self.vertices[stranded]
            )));
        }
        Ok(())
    }

    /// Number of seed vertices.
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Degree of each vertex, in `vertices` order. Loops count twice.
    pub fn degrees(&self) -> Vec<u64> {
        let index: HashMap<&str, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut deg = vec![0u64; self.vertices.len()];
        for (a, b) in &self.edges {
            deg[index[a.as_str()]] += 1;
            deg[index[b.as_str()]] += 1;
        }
        for (v, count) in &self.loops {
            deg[index[v.as_str()]] += 2 * u64::from(*count);
        }
        deg
    }

    /// Degree of the hook vertex.
    pub fn hook_degree(&self) -> u64 {
        let pos = self
            .vertices
            .iter()
            .position(|v| v == &self.hook)
            .expect("validated seed has a known hook");
        self.degrees()[pos]
    }

    /// Serializes back to the document format.
    pub fn to_document(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            vertices: &'a [String],
            edges: Vec<[&'a str; 2]>,
            #[serde(skip_serializing_if = "BTreeMap::is_empty")]
            loops: &'a BTreeMap<String, u32>,
            hook: &'a str,
        }
        let doc = Doc {
            vertices: &self.vertices,
            edges: self.edges.iter().map(|(a, b)| [a.as_str(), b.as_str()]).collect(),
            loops: &self.loops,
            hook: &self.hook,
        };
        serde_json::to_string_pretty(&doc).expect("seed document always serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SeedSpec> {
        SeedSpec::parse(text)
    }

    #[test]
    fn single_edge_seed() {
        let s = parse(r#"{"vertices":["a","b"],"edges":[["a","b"]],"hook":"a"}"#).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(s.degrees(), vec![1, 1]);
        assert_eq!(s.hook_degree(), 1);
    }

    #[test]
    fn loops_add_two_per_loop() {
        let s = parse(
            r#"{"vertices":["a","b"],"edges":[["a","b"]],"loops":{"b":2},"hook":"a"}"#,
        )
        .unwrap();
        assert_eq!(s.degrees(), vec![1, 5]);
    }

    #[test]
    fn unknown_hook_is_named() {
        let err = parse(r#"{"vertices":["a","b"],"edges":[["a","b"]],"hook":"z"}"#).unwrap_err();
        assert!(err.to_string().contains("unknown hook \"z\""), "{err}");
    }

    #[test]
    fn self_pair_points_to_loops_field() {
        let err = parse(r#"{"vertices":["a","b"],"edges":[["a","a"],["a","b"]],"hook":"a"}"#)
            .unwrap_err();
        assert!(err.to_string().contains("loops"), "{err}");
    }

    #[test]
    fn duplicate_edge_rejected_in_either_orientation() {
        let err = parse(
            r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","a"],["b","c"]],"hook":"a"}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate edge"), "{err}");
    }

    #[test]
    fn disconnected_vertex_is_named() {
        let err = parse(
            r#"{"vertices":["a","b","c"],"edges":[["a","b"]],"hook":"a"}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("\"c\""), "{err}");
    }

    #[test]
    fn too_small_seed_rejected() {
        let err = parse(r#"{"vertices":["a"],"edges":[],"hook":"a"}"#).unwrap_err();
        assert!(err.to_string().contains("at least 2"), "{err}");
    }

    #[test]
    fn document_round_trip() {
        let text = r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]],"loops":{"c":1},"hook":"b"}"#;
        let s = parse(text).unwrap();
        let again = parse(&s.to_document()).unwrap();
        assert_eq!(s, again);
    }
}
