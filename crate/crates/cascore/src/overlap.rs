//! Threshold-based cover refinement and a simplified ego-split initializer
//! for producing overlapping covers.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cover, Graph};
use crate::louvain::louvain;
use crate::scores::{community_weights, score_from_parts, CoverStats, ScoreKind};

/// Threshold grid printed by the CLI when scanning for a refinement cutoff.
pub const DEFAULT_TAU_GRID: [f64; 6] = [0.05, 0.075, 0.1, 0.15, 0.2, 0.25];

#[derive(Debug, Clone, Copy)]
pub struct RefineConfig {
    pub kind: ScoreKind,
    pub tau: f64,
    /// Communities smaller than this after refinement are dropped; 1 keeps
    /// everything, including emptied communities.
    pub min_size: usize,
}

impl RefineConfig {
    pub fn new(kind: ScoreKind, tau: f64, min_size: usize) -> Result<RefineConfig> {
        if !(tau > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "refinement threshold tau must be positive, got {tau}"
            )));
        }
        if min_size < 1 {
            return Err(Error::InvalidConfig("min_size must be >= 1".into()));
        }
        Ok(RefineConfig {
            kind,
            tau,
            min_size,
        })
    }
}

/// One refinement pass: community `i` of the output collects every node
/// whose score against the ORIGINAL community `i` reaches `tau`. Nodes
/// matching no community become outliers.
pub fn refine_cover(g: &Graph, cover: &Cover, config: &RefineConfig) -> Result<Cover> {
    if cover.n_nodes() != g.n_nodes() {
        return Err(Error::MismatchedNodes(format!(
            "cover has {} nodes, graph has {}",
            cover.n_nodes(),
            g.n_nodes()
        )));
    }
    let stats = CoverStats::new(g, cover)?;
    let memberships: Vec<Result<Vec<usize>>> = (0..g.n_nodes())
        .into_par_iter()
        .map(|v| {
            let deg = g.degree(v)?;
            let mut kept = Vec::new();
            // score > 0 needs an incident edge, so only touched communities
            // can pass a positive threshold
            for (c, deg_c) in community_weights(g, cover, v) {
                let s = score_from_parts(config.kind, deg, deg_c, stats.rel_vols[c])?;
                if s >= config.tau {
                    kept.push(c);
                }
            }
            Ok(kept)
        })
        .collect();
    let memberships: Vec<Vec<usize>> = memberships.into_iter().collect::<Result<_>>()?;
    let refined = Cover::from_memberships(memberships, cover.n_communities());
    if config.min_size > 1 {
        Ok(refined.drop_small(config.min_size))
    } else {
        Ok(refined)
    }
}

/// Outlier count per threshold over a grid, for picking a cutoff.
pub fn outlier_counts_per_tau(
    g: &Graph,
    cover: &Cover,
    kind: ScoreKind,
    taus: &[f64],
    min_size: usize,
) -> Result<Vec<(f64, usize)>> {
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let config = RefineConfig::new(kind, tau, min_size)?;
        let refined = refine_cover(g, cover, &config)?;
        out.push((tau, refined.count_outliers()));
    }
    Ok(out)
}

/// Number of nodes with empty membership.
pub fn count_outliers(cover: &Cover) -> usize {
    cover.count_outliers()
}

/// Simplified ego-split: each node is split into one persona per connected
/// component of its ego-net (ego excluded), the persona graph is clustered
/// with full Louvain, and persona communities map back to overlapping node
/// memberships. Communities with fewer than `min_size` nodes are dropped.
pub fn ego_split(g: &Graph, seed: u64, min_size: usize) -> Result<Cover> {
    if g.n_nodes() == 0 {
        return Err(Error::NoNodes);
    }
    // persona_of[v] maps each neighbor of v to the persona of v owning that
    // edge; persona_owner[p] is the original node behind persona p
    let mut persona_of: Vec<HashMap<usize, usize>> = vec![HashMap::new(); g.n_nodes()];
    let mut persona_owner: Vec<usize> = Vec::new();
    for v in 0..g.n_nodes() {
        let nbrs: Vec<usize> = g.neighbors(v).iter().map(|(u, _)| *u).collect();
        let comp = neighborhood_components(g, v, &nbrs);
        let mut comp_to_persona: HashMap<usize, usize> = HashMap::new();
        for (&u, &c) in nbrs.iter().zip(&comp) {
            let p = *comp_to_persona.entry(c).or_insert_with(|| {
                persona_owner.push(v);
                persona_owner.len() - 1
            });
            persona_of[v].insert(u, p);
        }
    }
    let mut persona_edges = Vec::with_capacity(g.n_edges());
    for (u, v, w) in g.edges() {
        persona_edges.push((persona_of[u][&v], persona_of[v][&u], w));
    }
    if persona_edges.is_empty() {
        return Ok(Cover::from_memberships(vec![Vec::new(); g.n_nodes()], 0));
    }
    let persona_graph = Graph::from_indexed_edges(persona_owner.len(), &persona_edges)?;
    let partition = louvain(&persona_graph, seed)?;
    let mut memberships: Vec<Vec<usize>> = vec![Vec::new(); g.n_nodes()];
    for (p, &owner) in persona_owner.iter().enumerate() {
        memberships[owner].push(partition.part_of(p));
    }
    let cover = Cover::from_memberships(memberships, partition.n_parts());
    Ok(cover.drop_small(min_size))
}

/// Component index (by position) of each listed neighbor of `v` within the
/// subgraph induced on those neighbors.
fn neighborhood_components(g: &Graph, v: usize, nbrs: &[usize]) -> Vec<usize> {
    let index: HashMap<usize, usize> = nbrs.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut comp = vec![usize::MAX; nbrs.len()];
    let mut next = 0;
    for start in 0..nbrs.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &(u, _) in g.neighbors(nbrs[i]) {
                if u == v {
                    continue;
                }
                if let Some(&j) = index.get(&u) {
                    if comp[j] == usize::MAX {
                        comp[j] = next;
                        stack.push(j);
                    }
                }
            }
        }
        next += 1;
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_above_one_empties_everything() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d").unwrap();
        let cover = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let config = RefineConfig::new(ScoreKind::Ief, 1.5, 1).unwrap();
        let refined = refine_cover(&g, &cover, &config).unwrap();
        assert_eq!(refined.count_outliers(), 6);
        assert_eq!(refined.n_communities(), 2);
    }

    #[test]
    fn tiny_tau_with_ief_joins_every_touched_community() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nc d\nd e\ne f\nf d").unwrap();
        let cover = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let config = RefineConfig::new(ScoreKind::Ief, 1e-9, 1).unwrap();
        let refined = refine_cover(&g, &cover, &config).unwrap();
        // c has an edge into d's community, so it joins both
        let c = g.node_id("c").unwrap();
        assert_eq!(refined.memberships_of(c), &[0, 1]);
        for v in 0..g.n_nodes() {
            assert!(!refined.is_outlier(v));
        }
    }

    #[test]
    fn bridge_node_joins_both_triangles_with_nief() {
        // two triangles plus a bridge node with one edge to each side
        let g =
            Graph::parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d\nx a\nx d").unwrap();
        let cover = {
            let a = |l: &str| g.node_id(l).unwrap();
            Cover::from_communities(
                g.n_nodes(),
                &[
                    vec![a("a"), a("b"), a("c")],
                    vec![a("d"), a("e"), a("f")],
                ],
            )
        };
        let config = RefineConfig::new(ScoreKind::Nief, 0.1, 1).unwrap();
        let refined = refine_cover(&g, &cover, &config).unwrap();
        let x = g.node_id("x").unwrap();
        // NIEF(x, side) = 1/2 - 7/16 = 0.0625 < 0.1? vol(side)=7, vol(V)=16.
        // 0.5 - 0.4375 = 0.0625, below tau=0.1, so drop to a smaller tau.
        let config = RefineConfig::new(ScoreKind::Nief, 0.05, 1).unwrap();
        let refined2 = refine_cover(&g, &cover, &config).unwrap();
        assert_eq!(refined2.memberships_of(x), &[0, 1]);
        assert!(refined.memberships_of(x).is_empty());
    }

    #[test]
    fn refinement_monotone_in_tau() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nc d\nd e\ne f\nf d").unwrap();
        let cover = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let mut prev_outliers = 0;
        for &tau in &DEFAULT_TAU_GRID {
            let config = RefineConfig::new(ScoreKind::Nief, tau, 1).unwrap();
            let refined = refine_cover(&g, &cover, &config).unwrap();
            let outliers = refined.count_outliers();
            assert!(outliers >= prev_outliers);
            prev_outliers = outliers;
        }
    }

    #[test]
    fn refine_depends_only_on_original_cover() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nc d\nd e\ne f\nf d").unwrap();
        let cover = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let config = RefineConfig::new(ScoreKind::Ief, 0.3, 1).unwrap();
        let once = refine_cover(&g, &cover, &config).unwrap();
        let again = refine_cover(&g, &cover, &config).unwrap();
        assert_eq!(once, again);
    }

    #[test]
    fn zero_tau_rejected() {
        assert!(RefineConfig::new(ScoreKind::Ief, 0.0, 1).is_err());
        assert!(RefineConfig::new(ScoreKind::Ief, -1.0, 1).is_err());
    }

    #[test]
    fn ego_split_two_triangles_sharing_a_node() {
        // shared node s belongs to both triangle communities
        let g = Graph::parse_edge_list("a b\na s\nb s\nc d\nc s\nd s").unwrap();
        let cover = ego_split(&g, 3, 1).unwrap();
        let s = g.node_id("s").unwrap();
        assert_eq!(cover.memberships_of(s).len(), 2);
        let a = g.node_id("a").unwrap();
        let c = g.node_id("c").unwrap();
        assert_eq!(cover.memberships_of(a).len(), 1);
        assert_ne!(cover.memberships_of(a), cover.memberships_of(c));
    }

    #[test]
    fn ego_split_single_clique() {
        let mut edges = String::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                edges.push_str(&format!("n{u} n{v}\n"));
            }
        }
        let g = Graph::parse_edge_list(&edges).unwrap();
        let cover = ego_split(&g, 1, 1).unwrap();
        assert_eq!(cover.n_communities(), 1);
        assert_eq!(cover.count_outliers(), 0);
    }

    #[test]
    fn ego_split_min_size_filters_everything() {
        let g = Graph::parse_edge_list("a b\nb c\nc a").unwrap();
        let cover = ego_split(&g, 1, 10).unwrap();
        assert_eq!(cover.n_communities(), 0);
        assert_eq!(cover.count_outliers(), 3);
    }

    #[test]
    fn ego_split_disjoint_cliques_recovered() {
        let mut edges = String::new();
        for (offset, size) in [(0, 4), (4, 5), (9, 4)] {
            for u in 0..size {
                for v in (u + 1)..size {
                    edges.push_str(&format!("n{} n{}\n", offset + u, offset + v));
                }
            }
        }
        let g = Graph::parse_edge_list(&edges).unwrap();
        let cover = ego_split(&g, 5, 4).unwrap();
        assert_eq!(cover.n_communities(), 3);
        let mut comms = cover.communities();
        comms.sort();
        assert_eq!(comms[0].len(), 4);
        assert_eq!(comms[1].len(), 5);
        assert_eq!(comms[2].len(), 4);
        assert_eq!(cover.count_outliers(), 0);
    }
}
