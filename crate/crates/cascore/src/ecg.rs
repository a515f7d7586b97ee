//! Ensemble consensus weighting (ECG) and its association-score variants:
//! edges are reweighted by how the endpoints relate across an ensemble of
//! level-1 Louvain partitions, then the reweighted graph is partitioned.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Partition};
use crate::louvain::{louvain, louvain_level1};
use crate::scores::{score_from_parts, ScoreKind};

/// How ensemble co-membership is turned into an edge weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Plain 0/1 co-membership indicator.
    Ecg,
    /// `f(u, C_v) + f(v, C_u) - f(u, C_v) * f(v, C_u)`
    Or,
    /// `f(u, C_v) * f(v, C_u)`
    And,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scheme> {
        match s.to_ascii_lowercase().as_str() {
            "ecg" => Ok(Scheme::Ecg),
            "or" => Ok(Scheme::Or),
            "and" => Ok(Scheme::And),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EcgConfig {
    /// Ensemble size.
    pub k: usize,
    pub scheme: Scheme,
    /// Association score used by the `Or`/`And` schemes; ignored for `Ecg`.
    pub kind: ScoreKind,
    /// Minimum edge weight after reweighting.
    pub floor: f64,
    pub seed: u64,
}

impl EcgConfig {
    pub fn new(k: usize, scheme: Scheme, kind: ScoreKind, floor: f64, seed: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidConfig("ensemble size k must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&floor) {
            return Err(Error::InvalidConfig(format!(
                "weight floor {floor} must lie in [0, 1)"
            )));
        }
        Ok(EcgConfig {
            k,
            scheme,
            kind,
            floor,
            seed,
        })
    }
}

impl Default for EcgConfig {
    fn default() -> Self {
        EcgConfig {
            k: 16,
            scheme: Scheme::Ecg,
            kind: ScoreKind::P,
            floor: 0.05,
            seed: 0,
        }
    }
}

/// 1 iff `u` and `v` share a part.
pub fn ecg_indicator(p: &Partition, u: NodeId, v: NodeId) -> f64 {
    if p.part_of(u) == p.part_of(v) {
        1.0
    } else {
        0.0
    }
}

pub fn f_or(a: f64, b: f64) -> f64 {
    a + b - a * b
}

pub fn f_and(a: f64, b: f64) -> f64 {
    a * b
}

/// Per-partition association data: for each node, the edge weight it sends
/// into every part, plus part volumes.
struct PartitionView {
    part_of: Vec<usize>,
    rel_vols: Vec<f64>,
    node_part_weight: Vec<HashMap<usize, f64>>,
}

impl PartitionView {
    fn new(g: &Graph, p: &Partition) -> Result<PartitionView> {
        if p.n_nodes() != g.n_nodes() {
            return Err(Error::MismatchedNodes(format!(
                "ensemble partition covers {} nodes, graph has {}",
                p.n_nodes(),
                g.n_nodes()
            )));
        }
        let mut vols = vec![0.0; p.n_parts()];
        for v in 0..g.n_nodes() {
            vols[p.part_of(v)] += g.degree(v)?;
        }
        let total = g.total_volume();
        let rel_vols = vols.iter().map(|v| v / total).collect();
        let mut node_part_weight = vec![HashMap::new(); g.n_nodes()];
        for v in 0..g.n_nodes() {
            let acc: &mut HashMap<usize, f64> = &mut node_part_weight[v];
            for &(u, w) in g.neighbors(v) {
                *acc.entry(p.part_of(u)).or_insert(0.0) += w;
            }
        }
        Ok(PartitionView {
            part_of: p.assignments().to_vec(),
            rel_vols,
            node_part_weight,
        })
    }

    fn contribution(
        &self,
        p: &Partition,
        u: NodeId,
        v: NodeId,
        deg_u: f64,
        deg_v: f64,
        scheme: Scheme,
        kind: ScoreKind,
    ) -> Result<f64> {
        match scheme {
            Scheme::Ecg => Ok(ecg_indicator(p, u, v)),
            Scheme::Or | Scheme::And => {
                let cu = self.part_of[u];
                let cv = self.part_of[v];
                let u_into_cv = self.node_part_weight[u].get(&cv).copied().unwrap_or(0.0);
                let v_into_cu = self.node_part_weight[v].get(&cu).copied().unwrap_or(0.0);
                let a = score_from_parts(kind, deg_u, u_into_cv, self.rel_vols[cv])?;
                let b = score_from_parts(kind, deg_v, v_into_cu, self.rel_vols[cu])?;
                Ok(match scheme {
                    Scheme::Or => f_or(a, b),
                    Scheme::And => f_and(a, b),
                    Scheme::Ecg => unreachable!(),
                })
            }
        }
    }
}

/// Reweight every edge by the ensemble: raw weight is the mean per-partition
/// contribution, then rescaled to `[floor, 1]`.
pub fn edge_weights(g: &Graph, partitions: &[Partition], config: &EcgConfig) -> Result<Graph> {
    if partitions.len() != config.k {
        return Err(Error::InvalidConfig(format!(
            "expected {} partitions, got {}",
            config.k,
            partitions.len()
        )));
    }
    let views: Vec<PartitionView> = partitions
        .iter()
        .map(|p| PartitionView::new(g, p))
        .collect::<Result<_>>()?;
    let edges = g.edges();
    let raw: Vec<Result<f64>> = edges
        .par_iter()
        .map(|&(u, v, _)| {
            let deg_u = g.degree(u)?;
            let deg_v = g.degree(v)?;
            let mut sum = 0.0;
            for (view, p) in views.iter().zip(partitions) {
                sum += view.contribution(p, u, v, deg_u, deg_v, config.scheme, config.kind)?;
            }
            Ok(sum / config.k as f64)
        })
        .collect();
    let mut weights = HashMap::with_capacity(edges.len());
    for (&(u, v, _), r) in edges.iter().zip(raw) {
        let mean = r?;
        weights.insert((u, v), config.floor + (1.0 - config.floor) * mean);
    }
    g.reweighted(&weights)
}

/// Result of the full ensemble pipeline.
pub struct EcgResult {
    pub partition: Partition,
    pub weighted: Graph,
}

/// Run `k` seeded level-1 passes, reweight the edges, then run full Louvain
/// on the reweighted graph.
pub fn cas_ecg(g: &Graph, config: &EcgConfig) -> Result<EcgResult> {
    let partitions: Vec<Partition> = (0..config.k)
        .into_par_iter()
        .map(|i| louvain_level1(g, config.seed.wrapping_add(i as u64)))
        .collect::<Result<_>>()?;
    let weighted = edge_weights(g, &partitions, config)?;
    let partition = louvain(&weighted, config.seed)?;
    Ok(EcgResult {
        partition,
        weighted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Cover;

    fn two_triangles() -> Graph {
        Graph::parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d").unwrap()
    }

    #[test]
    fn indicator_cases() {
        let p = Partition::from_assignments(&[0, 0, 1]);
        assert_eq!(ecg_indicator(&p, 0, 1), 1.0);
        assert_eq!(ecg_indicator(&p, 0, 2), 0.0);
        assert_eq!(ecg_indicator(&p, 2, 2), 1.0);
    }

    #[test]
    fn combiner_identities() {
        assert_eq!(f_or(1.0, 0.3), 1.0);
        assert_eq!(f_and(0.8, 0.5), 0.4);
        assert!((f_or(0.8, 0.5) - 0.9).abs() < 1e-15);
        for a in [0.0, 0.2, 0.7, 1.0] {
            for b in [0.0, 0.4, 0.9, 1.0] {
                assert!(f_and(a, b) <= a.min(b) + 1e-15);
                assert!(f_or(a, b) + 1e-15 >= a.max(b));
                assert!(f_and(a, b) <= f_or(a, b) + 1e-15);
                assert!((0.0..=1.0).contains(&f_or(a, b)));
            }
        }
    }

    #[test]
    fn disjoint_triangles_all_weights_one() {
        let g = two_triangles();
        for scheme in [Scheme::Ecg, Scheme::Or, Scheme::And] {
            let config = EcgConfig::new(4, scheme, ScoreKind::Ief, 0.05, 1).unwrap();
            let partitions: Vec<Partition> = (0..4)
                .map(|i| louvain_level1(&g, i).unwrap())
                .collect();
            let weighted = edge_weights(&g, &partitions, &config).unwrap();
            for (_, _, w) in weighted.edges() {
                assert!((w - 1.0).abs() < 1e-12, "scheme {scheme:?} weight {w}");
            }
        }
    }

    #[test]
    fn and_floor_when_never_co_clustered() {
        // path a-b: split into singleton parts with IEF of 0 both ways is
        // impossible here, so build a cross edge between two cliques and a
        // partition that separates the endpoints.
        let g = Graph::parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d\na d").unwrap();
        let p = Partition::from_assignments(&[0, 0, 0, 1, 1, 1]);
        let config = EcgConfig::new(1, Scheme::And, ScoreKind::Nief, 0.05, 1).unwrap();
        let weighted = edge_weights(&g, std::slice::from_ref(&p), &config).unwrap();
        let a = weighted.node_id("a").unwrap();
        let d = weighted.node_id("d").unwrap();
        let w_ad = weighted
            .neighbors(a)
            .iter()
            .find(|(u, _)| *u == d)
            .unwrap()
            .1;
        // NIEF(a, C_d) = max(1/3 - 1/2, 0) = 0, so the AND weight hits the floor
        assert!((w_ad - 0.05).abs() < 1e-12);
    }

    #[test]
    fn k1_ecg_reduces_to_indicator() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\na d\nd e").unwrap();
        let config = EcgConfig::new(1, Scheme::Ecg, ScoreKind::Ief, 0.1, 5).unwrap();
        let p = louvain_level1(&g, 5).unwrap();
        let weighted = edge_weights(&g, std::slice::from_ref(&p), &config).unwrap();
        for (u, v, w) in weighted.edges() {
            let expect = if p.part_of(u) == p.part_of(v) { 1.0 } else { 0.1 };
            assert!((w - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_invariant_under_community_relabeling() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\na d\nd e\ne f\nf d").unwrap();
        let p1 = Partition::from_assignments(&[0, 0, 0, 1, 1, 1]);
        let p2 = Partition::from_assignments(&[1, 1, 1, 0, 0, 0]);
        for scheme in [Scheme::Ecg, Scheme::Or, Scheme::And] {
            let config = EcgConfig::new(1, scheme, ScoreKind::P, 0.05, 0).unwrap();
            let w1 = edge_weights(&g, std::slice::from_ref(&p1), &config).unwrap();
            let w2 = edge_weights(&g, std::slice::from_ref(&p2), &config).unwrap();
            assert_eq!(w1.to_edge_list(9), w2.to_edge_list(9));
        }
    }

    #[test]
    fn weights_stay_in_floor_one_range() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\na d\nd e\ne f\nf d").unwrap();
        let config = EcgConfig::default();
        let result = cas_ecg(&g, &config).unwrap();
        for (_, _, w) in result.weighted.edges() {
            assert!(w >= config.floor - 1e-12 && w <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn cas_ecg_two_triangles_all_schemes() {
        let g = two_triangles();
        let truth = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        for scheme in [Scheme::Ecg, Scheme::Or, Scheme::And] {
            let config = EcgConfig::new(8, scheme, ScoreKind::P, 0.05, 11).unwrap();
            let result = cas_ecg(&g, &config).unwrap();
            let comms = result.partition.communities();
            let mut got: Vec<Vec<usize>> = comms;
            got.sort();
            let mut want = truth.communities();
            want.sort();
            assert_eq!(got, want, "scheme {scheme:?}");
        }
    }

    #[test]
    fn cas_ecg_deterministic() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\na d\nd e\ne f\nf d").unwrap();
        let config = EcgConfig::new(6, Scheme::And, ScoreKind::P, 0.05, 77).unwrap();
        let r1 = cas_ecg(&g, &config).unwrap();
        let r2 = cas_ecg(&g, &config).unwrap();
        assert_eq!(r1.partition, r2.partition);
        assert_eq!(r1.weighted.to_edge_list(9), r2.weighted.to_edge_list(9));
    }

    #[test]
    fn config_validation() {
        assert!(EcgConfig::new(0, Scheme::Ecg, ScoreKind::P, 0.05, 0).is_err());
        assert!(EcgConfig::new(4, Scheme::Ecg, ScoreKind::P, 1.0, 0).is_err());
    }
}
