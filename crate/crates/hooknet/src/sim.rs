//! Stochastic growth of the network, in ball-count and explicit-graph form.
//!
//! A step draws one insertion position uniformly at random. The urn mode
//! tracks only ball counts per color and applies the replacement row. The
//! graph mode maintains actual node records and picks the concrete node that
//! was hit. Both modes consume a single shared random draw per step, so a
//! coupled run can assert, at every step, that the graph's slot counts equal
//! the urn's ball counts exactly.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::urn::UrnModel;

/// Which bookkeeping a run maintains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Ball counts only; fastest, used by the replicate harness.
    Urn,
    /// Explicit node records.
    Graph,
    /// Both, with an exact cross-check after every step.
    Coupled,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "urn" => Ok(Mode::Urn),
            "graph" => Ok(Mode::Graph),
            "coupled" => Ok(Mode::Coupled),
            other => Err(Error::Parameter(format!(
                "unknown mode \"{other}\" (expected urn, graph, or coupled)"
            ))),
        }
    }
}

/// Ball counts and draw counts of a running urn.
#[derive(Debug, Clone, Serialize)]
pub struct SimState {
    /// Balls per color: insertion positions per active class.
    pub x: Vec<i64>,
    /// Cumulative draws per color.
    pub y: Vec<i64>,
    /// Steps taken.
    pub n: u64,
    /// Cached total of `x`.
    pub total: i64,
}

/// One node of the explicit graph.
#[derive(Debug, Clone)]
struct NodeRec {
    /// Index of the node's original degree class.
    class: u32,
    /// Hookings received so far.
    hookings: u32,
    /// Current plain degree.
    degree: u64,
}

/// Explicit node-level state for graph and coupled modes.
#[derive(Debug, Clone)]
pub struct GraphState {
    nodes: Vec<NodeRec>,
    /// Node ids per active color; a color-c node holds m-s slots, kept
    /// contiguous so slot q belongs to the node at position q/(m-s).
    active: Vec<Vec<u32>>,
    /// Saturated nodes per original degree class.
    saturated: Vec<u64>,
    /// Edges in the network, loops included.
    pub edges: u64,
}

impl GraphState {
    fn new(model: &UrnModel) -> GraphState {
        let profile = &model.profile;
        let k = profile.k();
        let mut nodes = Vec::new();
        let mut active = vec![Vec::new(); model.colors()];
        for (j, (&d, &c)) in profile.degrees.iter().zip(&profile.counts).enumerate() {
            for _ in 0..c {
                active[j].push(nodes.len() as u32);
                nodes.push(NodeRec { class: j as u32, hookings: 0, degree: d });
            }
        }
        let degree_sum: u64 = profile.degrees.iter().zip(&profile.counts).map(|(d, c)| d * c).sum();
        GraphState { nodes, active, saturated: vec![0; k], edges: degree_sum / 2 }
    }

    /// Live node count.
    pub fn node_count(&self) -> u64 {
        self.nodes.len() as u64
    }

    /// Node counts per ledger label, histories resolved.
    fn degree_counts(&self, model: &UrnModel) -> Vec<i64> {
        let k = model.profile.k();
        let mk = model.colors();
        let mut d = vec![0i64; mk + k];
        for (c, list) in self.active.iter().enumerate() {
            d[c] = list.len() as i64;
        }
        for j in 0..k {
            d[mk + j] = self.saturated[j] as i64;
        }
        d
    }

    /// Histogram of plain degrees over all live nodes.
    pub fn degree_histogram(&self) -> std::collections::BTreeMap<u64, u64> {
        let mut h = std::collections::BTreeMap::new();
        for node in &self.nodes {
            *h.entry(node.degree).or_insert(0) += 1;
        }
        h
    }
}

/// A single in-progress simulation.
pub struct Simulation<'a> {
    pub model: &'a UrnModel,
    pub mode: Mode,
    pub state: SimState,
    pub graph: Option<GraphState>,
    /// False once any per-step cross-check failed (coupled mode only).
    pub coupling_ok: bool,
}

impl<'a> Simulation<'a> {
    pub fn new(model: &'a UrnModel, mode: Mode) -> Simulation<'a> {
        let state = SimState {
            x: model.x0.clone(),
            y: vec![0; model.colors()],
            n: 0,
            total: model.initial_total(),
        };
        let graph = match mode {
            Mode::Urn => None,
            Mode::Graph | Mode::Coupled => Some(GraphState::new(model)),
        };
        Simulation { model, mode, state, graph, coupling_ok: true }
    }

    /// Performs one hooking, consuming exactly one random draw.
    pub fn step(&mut self, rng: &mut impl Rng) {
        let profile = &self.model.profile;
        let k = profile.k();
        let m = profile.m as usize;
        debug_assert!(self.state.total > 0, "tenable urn never empties");
        let r = rng.gen_range(0..self.state.total as u64);

        // Locate the drawn color and the offset of the ball inside it.
        let mut rest = r as i64;
        let mut color = 0usize;
        while rest >= self.state.x[color] {
            rest -= self.state.x[color];
            color += 1;
        }

        if let Some(graph) = &mut self.graph {
            let s = color / k;
            let j = color % k;
            let slots = (m - s) as i64;
            let pos = (rest / slots) as usize;
            let id = graph.active[color].swap_remove(pos);
            let node = &mut graph.nodes[id as usize];
            debug_assert_eq!(node.class as usize, j);
            debug_assert_eq!(node.hookings as usize, s);
            node.hookings += 1;
            node.degree += profile.hook_degree();
            if s + 1 < m {
                graph.active[color + k].push(id);
            } else {
                graph.saturated[j] += 1;
            }
            // Fuse a fresh seed copy: every vertex except its hook arrives
            // as a new never-hooked node.
            for (l, (&d, &count)) in profile.degrees.iter().zip(&profile.counts).enumerate() {
                let fresh = count - u64::from(l == profile.hook_index);
                for _ in 0..fresh {
                    graph.active[l].push(graph.nodes.len() as u32);
                    graph.nodes.push(NodeRec { class: l as u32, hookings: 0, degree: d });
                }
            }
            graph.edges += profile.degrees.iter().zip(&profile.counts).map(|(d, c)| d * c).sum::<u64>() / 2;
        }

        for (xc, &delta) in self.state.x.iter_mut().zip(self.model.a.row(color)) {
            *xc += delta;
            debug_assert!(*xc >= 0, "tenability violated");
        }
        self.state.y[color] += 1;
        self.state.n += 1;
        self.state.total += self.model.lambda1;

        if self.mode == Mode::Coupled {
            self.coupling_ok &= self.slot_counts_match();
        }
    }

    /// Graph slot counts equal urn ball counts, color by color.
    fn slot_counts_match(&self) -> bool {
        let graph = self.graph.as_ref().expect("coupled mode keeps a graph");
        let k = self.model.profile.k();
        let m = self.model.profile.m as usize;
        (0..self.model.colors()).all(|c| {
            let slots = (m - c / k) as i64;
            graph.active[c].len() as i64 * slots == self.state.x[c]
        })
    }

    /// The ball-count identity: x = (replacement matrix transposed) y + x0.
    pub fn linear_relation_holds(&self) -> bool {
        let a = &self.model.a;
        (0..a.cols).all(|c| {
            let mut acc = i128::from(self.model.x0[c]);
            for u in 0..a.rows {
                acc += i128::from(a.get(u, c)) * i128::from(self.state.y[u]);
            }
            acc == i128::from(self.state.x[c])
        })
    }

    /// History-resolved degree counts in ledger order.
    ///
    /// Urn mode divides active ball counts by remaining slots (always exact)
    /// and reads saturated counts from the draw totals; graph mode counts
    /// actual nodes. Coupled mode computes both and insists they agree.
    pub fn degree_counts(&self) -> Vec<i64> {
        let k = self.model.profile.k();
        let m = self.model.profile.m as usize;
        let mk = self.model.colors();
        let from_urn = || {
            let mut d = vec![0i64; mk + k];
            for c in 0..mk {
                let slots = (m - c / k) as i64;
                assert_eq!(
                    self.state.x[c] % slots,
                    0,
                    "active ball counts come in whole nodes"
                );
                d[c] = self.state.x[c] / slots;
            }
            for j in 0..k {
                d[mk + j] = self.state.y[(m - 1) * k + j];
            }
            d
        };
        match &self.graph {
            None => from_urn(),
            Some(graph) => {
                let d = graph.degree_counts(self.model);
                if self.mode == Mode::Coupled {
                    assert_eq!(d, from_urn(), "graph and urn degree counts must agree");
                }
                d
            }
        }
    }

    /// Total ball conservation: the step count fully determines the total.
    pub fn conservation_holds(&self) -> bool {
        let expected = self.model.lambda1 * self.state.n as i64 + self.model.initial_total();
        self.state.total == expected && self.state.x.iter().sum::<i64>() == expected
    }
}

/// A degree-count snapshot taken mid-run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckpointRow {
    pub step: u64,
    pub x: Vec<i64>,
    pub degrees: Vec<i64>,
}

/// Summary of one finished run.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub mode: Mode,
    pub steps: u64,
    pub final_x: Vec<i64>,
    pub final_y: Vec<i64>,
    /// History-resolved degree counts, ledger order.
    pub degrees: Vec<i64>,
    pub node_count: u64,
    pub checkpoints: Vec<CheckpointRow>,
    /// Every per-step cross-check passed; present in coupled mode only.
    pub coupling_held: Option<bool>,
}

/// Errors when a horizon could overflow the i64 ball counters.
///
/// One guard up front keeps the hot loop on plain integer arithmetic.
pub fn check_horizon(model: &UrnModel, n_steps: u64) -> Result<()> {
    let headroom = (i64::MAX / 4 - model.initial_total()) / model.lambda1.max(1);
    if n_steps > headroom.max(0) as u64 {
        return Err(Error::Parameter(format!(
            "step count {n_steps} would overflow ball counters"
        )));
    }
    Ok(())
}

/// Grows a network for `n_steps` hookings.
///
/// `checkpoints` lists step numbers at which to snapshot (out-of-range or
/// unsorted entries are normalized). With `verify_every_step`, the ball-count
/// identity is asserted after every single hooking instead of only at the
/// checkpoints and the end.
pub fn run(
    model: &UrnModel,
    n_steps: u64,
    rng: &mut impl Rng,
    mode: Mode,
    checkpoints: &[u64],
    verify_every_step: bool,
) -> Result<RunOutput> {
    check_horizon(model, n_steps)?;
    let mut marks: Vec<u64> = checkpoints.iter().copied().filter(|&s| s <= n_steps).collect();
    marks.sort_unstable();
    marks.dedup();

    let mut sim = Simulation::new(model, mode);
    let mut rows = Vec::with_capacity(marks.len());
    let mut next_mark = 0usize;
    for step in 0..=n_steps {
        if next_mark < marks.len() && marks[next_mark] == step {
            rows.push(CheckpointRow {
                step,
                x: sim.state.x.clone(),
                degrees: sim.degree_counts(),
            });
            assert!(sim.linear_relation_holds(), "ball-count identity broken at a checkpoint");
            next_mark += 1;
        }
        if step == n_steps {
            break;
        }
        sim.step(rng);
        if verify_every_step {
            assert!(sim.linear_relation_holds(), "ball-count identity broken mid-run");
            assert!(sim.conservation_holds(), "ball total drifted mid-run");
        }
    }
    assert!(sim.conservation_holds(), "ball total must be determined by the step count");
    assert!(sim.linear_relation_holds(), "ball-count identity must hold at the end");

    let degrees = sim.degree_counts();
    let expected_nodes = model.profile.nodes_per_step() * n_steps + model.profile.tau0();
    assert_eq!(
        degrees.iter().sum::<i64>(),
        expected_nodes as i64,
        "degree counts must cover every node exactly once"
    );
    let node_count = match &sim.graph {
        Some(g) => {
            assert_eq!(g.node_count(), expected_nodes, "graph node count off");
            g.node_count()
        }
        None => expected_nodes,
    };

    Ok(RunOutput {
        mode,
        steps: n_steps,
        final_x: sim.state.x.clone(),
        final_y: sim.state.y.clone(),
        degrees,
        node_count,
        checkpoints: rows,
        coupling_held: (mode == Mode::Coupled).then_some(sim.coupling_ok),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::DegreeProfile;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn binary_model() -> UrnModel {
        UrnModel::build(&DegreeProfile::from_parts(2, vec![3, 7], vec![3, 1], 0).unwrap())
    }

    #[test]
    fn zero_steps_reports_the_seed() {
        let model = binary_model();
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let out = run(&model, 0, &mut rng, Mode::Urn, &[], false).unwrap();
        assert_eq!(out.degrees, vec![3, 1, 0, 0, 0, 0]);
        assert_eq!(out.final_x, vec![6, 2, 0, 0]);
    }

    #[test]
    fn totals_track_the_balance_factor() {
        let model = binary_model();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut sim = Simulation::new(&model, Mode::Urn);
        for n in 1..=200 {
            sim.step(&mut rng);
            assert_eq!(sim.state.total, 5 * n + 8);
            assert!(sim.conservation_holds());
        }
    }

    #[test]
    fn coupled_run_holds_and_matches_urn() {
        let model = binary_model();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let coupled = run(&model, 500, &mut rng, Mode::Coupled, &[], true).unwrap();
        assert_eq!(coupled.coupling_held, Some(true));
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let urn = run(&model, 500, &mut rng, Mode::Urn, &[], false).unwrap();
        assert_eq!(coupled.degrees, urn.degrees);
        assert_eq!(coupled.final_x, urn.final_x);
    }

    #[test]
    fn determinism_per_seed() {
        let model = binary_model();
        let mut a = ChaCha12Rng::seed_from_u64(9);
        let mut b = ChaCha12Rng::seed_from_u64(9);
        let run_a = run(&model, 300, &mut a, Mode::Urn, &[100, 200], false).unwrap();
        let run_b = run(&model, 300, &mut b, Mode::Urn, &[100, 200], false).unwrap();
        assert_eq!(run_a.final_x, run_b.final_x);
        assert_eq!(run_a.checkpoints.len(), 2);
        assert_eq!(run_a.checkpoints[1].x, run_b.checkpoints[1].x);
        let mut c = ChaCha12Rng::seed_from_u64(10);
        let run_c = run(&model, 300, &mut c, Mode::Urn, &[], false).unwrap();
        assert_ne!(run_a.final_x, run_c.final_x);
    }

    #[test]
    fn graph_histogram_covers_all_nodes() {
        let model = binary_model();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut sim = Simulation::new(&model, Mode::Graph);
        for _ in 0..50 {
            sim.step(&mut rng);
        }
        let graph = sim.graph.as_ref().unwrap();
        let hist = graph.degree_histogram();
        assert_eq!(hist.values().sum::<u64>(), graph.node_count());
        // Only admissible plain degrees can occur.
        for d in hist.keys() {
            assert!([3u64, 6, 7, 9, 10, 13].contains(d), "degree {d}");
        }
    }

    #[test]
    fn unary_degenerate_runs() {
        let model =
            UrnModel::build(&DegreeProfile::from_parts(1, vec![1, 2, 3], vec![1, 2, 1], 0).unwrap());
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let out = run(&model, 400, &mut rng, Mode::Coupled, &[], true).unwrap();
        assert_eq!(out.coupling_held, Some(true));
        assert_eq!(out.degrees.iter().sum::<i64>(), 3 * 400 + 4);
    }
}
