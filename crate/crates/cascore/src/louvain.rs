//! Newman modularity and the Louvain algorithm: the level-1 pass used by the
//! ensemble step, and the full multilevel variant with graph coarsening.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

const MIN_GAIN: f64 = 1e-12;
const LEVEL_TOLERANCE: f64 = 1e-9;

/// Newman modularity of a partition.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if g.n_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    if p.n_nodes() != g.n_nodes() {
        return Err(Error::MismatchedNodes(format!(
            "partition has {} nodes, graph has {}",
            p.n_nodes(),
            g.n_nodes()
        )));
    }
    let m = g.total_volume() / 2.0;
    let mut intra = vec![0.0; p.n_parts()];
    let mut vol = vec![0.0; p.n_parts()];
    for (u, v, w) in g.edges() {
        if p.part_of(u) == p.part_of(v) {
            intra[p.part_of(u)] += w;
        }
    }
    for v in 0..g.n_nodes() {
        vol[p.part_of(v)] += g.degree(v)?;
    }
    let q = (0..p.n_parts())
        .map(|c| intra[c] / m - (vol[c] / (2.0 * m)).powi(2))
        .sum();
    Ok(q)
}

/// Working graph for the multilevel pass; coarsened super-nodes may carry
/// self-loops holding their internal weight.
struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degrees: Vec<f64>,
    total_weight: f64,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> LevelGraph {
        let n = g.n_nodes();
        let mut adj = vec![Vec::new(); n];
        for (u, v, w) in g.edges() {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let degrees: Vec<f64> = (0..n).map(|v| g.degree(v).unwrap()).collect();
        LevelGraph {
            adj,
            self_loops: vec![0.0; n],
            degrees,
            total_weight: g.total_volume() / 2.0,
        }
    }

    fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    fn modularity(&self, assignment: &[usize], n_parts: usize) -> f64 {
        let w = self.total_weight;
        let mut intra = vec![0.0; n_parts];
        let mut vol = vec![0.0; n_parts];
        for v in 0..self.n_nodes() {
            intra[assignment[v]] += self.self_loops[v];
            vol[assignment[v]] += self.degrees[v];
            for &(u, ew) in &self.adj[v] {
                if v < u && assignment[v] == assignment[u] {
                    intra[assignment[v]] += ew;
                }
            }
        }
        (0..n_parts)
            .map(|c| intra[c] / w - (vol[c] / (2.0 * w)).powi(2))
            .sum()
    }

    /// One Louvain level: singleton start, seeded sweep order, move nodes to
    /// the neighboring community with maximal positive modularity gain until
    /// a full sweep makes no move. Returns dense community ids.
    fn one_level(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let n = self.n_nodes();
        let w = self.total_weight;
        let mut assignment: Vec<usize> = (0..n).collect();
        let mut vol_tot: Vec<f64> = self.degrees.clone();
        let mut order: Vec<usize> = (0..n).collect();
        let mut moved = true;
        while moved {
            moved = false;
            order.shuffle(rng);
            for &v in &order {
                let old = assignment[v];
                let deg_v = self.degrees[v];
                // edge weight from v into each adjacent community
                let mut to_comm: HashMap<usize, f64> = HashMap::new();
                for &(u, ew) in &self.adj[v] {
                    *to_comm.entry(assignment[u]).or_insert(0.0) += ew;
                }
                vol_tot[old] -= deg_v;
                let k_old = to_comm.get(&old).copied().unwrap_or(0.0);
                let stay_gain = k_old / w - vol_tot[old] * deg_v / (2.0 * w * w);
                let mut candidates: Vec<(usize, f64)> = to_comm.into_iter().collect();
                candidates.sort_unstable_by_key(|&(c, _)| c);
                let mut best = (old, stay_gain);
                for (c, k_vc) in candidates {
                    if c == old {
                        continue;
                    }
                    let gain = k_vc / w - vol_tot[c] * deg_v / (2.0 * w * w);
                    if gain > best.1 + MIN_GAIN {
                        best = (c, gain);
                    }
                }
                vol_tot[best.0] += deg_v;
                if best.0 != old {
                    assignment[v] = best.0;
                    moved = true;
                }
            }
        }
        densify(&assignment)
    }

    fn coarsen(&self, assignment: &[usize], n_parts: usize) -> LevelGraph {
        let mut self_loops = vec![0.0; n_parts];
        let mut cross: HashMap<(usize, usize), f64> = HashMap::new();
        for v in 0..self.n_nodes() {
            let cv = assignment[v];
            self_loops[cv] += self.self_loops[v];
            for &(u, ew) in &self.adj[v] {
                if v < u {
                    let cu = assignment[u];
                    if cu == cv {
                        self_loops[cv] += ew;
                    } else {
                        let key = (cv.min(cu), cv.max(cu));
                        *cross.entry(key).or_insert(0.0) += ew;
                    }
                }
            }
        }
        let mut adj = vec![Vec::new(); n_parts];
        let mut keys: Vec<(usize, usize)> = cross.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let w = cross[&key];
            adj[key.0].push((key.1, w));
            adj[key.1].push((key.0, w));
        }
        let degrees: Vec<f64> = (0..n_parts)
            .map(|c| {
                2.0 * self_loops[c] + adj[c].iter().map(|(_, w)| w).sum::<f64>()
            })
            .collect();
        LevelGraph {
            adj,
            self_loops,
            degrees,
            total_weight: self.total_weight,
        }
    }
}

fn densify(raw: &[usize]) -> Vec<usize> {
    let mut remap: HashMap<usize, usize> = HashMap::new();
    raw.iter()
        .map(|&c| {
            let next = remap.len();
            *remap.entry(c).or_insert(next)
        })
        .collect()
}

/// First Louvain iteration only: repeated node sweeps without coarsening.
pub fn louvain_level1(g: &Graph, seed: u64) -> Result<Partition> {
    if g.n_nodes() == 0 {
        return Err(Error::NoNodes);
    }
    if g.n_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    let level = LevelGraph::from_graph(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment = level.one_level(&mut rng);
    Ok(Partition::from_assignments(&assignment))
}

/// Full multilevel Louvain: alternate level passes with coarsening until
/// modularity stops improving.
pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    if g.n_nodes() == 0 {
        return Err(Error::NoNodes);
    }
    if g.n_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = LevelGraph::from_graph(g);
    let mut node_map: Vec<usize> = (0..g.n_nodes()).collect();
    let mut prev_q = f64::NEG_INFINITY;
    loop {
        let assignment = level.one_level(&mut rng);
        let n_parts = assignment.iter().max().map_or(0, |m| m + 1);
        let q = level.modularity(&assignment, n_parts);
        for slot in node_map.iter_mut() {
            *slot = assignment[*slot];
        }
        if q - prev_q <= LEVEL_TOLERANCE {
            break;
        }
        prev_q = q;
        level = level.coarsen(&assignment, n_parts);
    }
    Ok(Partition::from_assignments(&node_map))
}
