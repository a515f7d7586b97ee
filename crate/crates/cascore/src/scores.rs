//! The three community association strength scores (IEF, NIEF, P), the
//! binomial CDF behind the P score, and batch scoring / ranking utilities.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CommunityId, Cover, Graph, NodeId};

/// Which of the three association scores to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    Ief,
    Nief,
    P,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 3] = [ScoreKind::Ief, ScoreKind::Nief, ScoreKind::P];

    pub fn name(&self) -> &'static str {
        match self {
            ScoreKind::Ief => "ief",
            ScoreKind::Nief => "nief",
            ScoreKind::P => "p",
        }
    }
}

impl std::str::FromStr for ScoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ScoreKind> {
        match s.to_ascii_lowercase().as_str() {
            "ief" => Ok(ScoreKind::Ief),
            "nief" => Ok(ScoreKind::Nief),
            "p" => Ok(ScoreKind::P),
            other => Err(Error::InvalidConfig(format!("unknown score kind '{other}'"))),
        }
    }
}

// Lanczos approximation, g = 7.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        a += c / (x + (i as f64) + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// CDF of Binomial(n, p) at k: sum of the first k+1 probability masses.
/// Returns 0 for k < 0 and 1 for k >= n. Absolute error <= 1e-12 for
/// n <= 10^4.
pub fn binomial_cdf(k: i64, n: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if k < 0 {
        return Ok(0.0);
    }
    if k as u64 >= n {
        return Ok(1.0);
    }
    // here 0 <= k < n, so n >= 1
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    let k = k as u64;
    let q = 1.0 - p;
    let t0 = q.powi(n as i32);
    if n <= 1000 && t0 > f64::MIN_POSITIVE {
        // iterative term recurrence t_{i+1} = t_i * (n-i)/(i+1) * p/q
        let mut term = t0;
        let mut sum = term;
        for i in 0..k {
            term *= ((n - i) as f64) / ((i + 1) as f64) * (p / q);
            sum += term;
        }
        Ok(sum.min(1.0))
    } else {
        // log-space accumulation
        let (lp, lq) = (p.ln(), q.ln());
        let log_terms: Vec<f64> = (0..=k)
            .map(|i| ln_binomial(n, i) + (i as f64) * lp + ((n - i) as f64) * lq)
            .collect();
        let m = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let sum: f64 = log_terms.iter().map(|&lt| (lt - m).exp()).sum();
        Ok((m + sum.ln()).exp().clamp(0.0, 1.0))
    }
}

/// IEF from raw degree figures. Zero degree yields 0.
pub fn ief_from_parts(deg: f64, deg_c: f64) -> f64 {
    if deg <= 0.0 {
        0.0
    } else {
        deg_c / deg
    }
}

/// NIEF from raw degree figures and relative community volume.
pub fn nief_from_parts(deg: f64, deg_c: f64, rel_vol: f64) -> f64 {
    if deg <= 0.0 {
        0.0
    } else {
        (ief_from_parts(deg, deg_c) - rel_vol).max(0.0)
    }
}

/// P score from raw degree figures; weighted degrees are rounded to the
/// nearest integer (the binomial model needs integer trials).
pub fn p_from_parts(deg: f64, deg_c: f64, rel_vol: f64) -> Result<f64> {
    if deg <= 0.0 {
        return Ok(0.0);
    }
    let n = deg.round() as u64;
    let k = deg_c.round() as i64 - 1;
    binomial_cdf(k, n, rel_vol)
}

pub fn score_from_parts(kind: ScoreKind, deg: f64, deg_c: f64, rel_vol: f64) -> Result<f64> {
    match kind {
        ScoreKind::Ief => Ok(ief_from_parts(deg, deg_c)),
        ScoreKind::Nief => Ok(nief_from_parts(deg, deg_c, rel_vol)),
        ScoreKind::P => p_from_parts(deg, deg_c, rel_vol),
    }
}

/// Internal edge fraction of `v` in the node set `members`.
pub fn ief(g: &Graph, v: NodeId, members: &[NodeId]) -> Result<f64> {
    let deg = g.degree(v)?;
    let deg_c = g.community_degree(v, members)?;
    Ok(ief_from_parts(deg, deg_c))
}

/// Normalized internal edge fraction: IEF minus the community's relative
/// volume, floored at zero.
pub fn nief(g: &Graph, v: NodeId, members: &[NodeId]) -> Result<f64> {
    let deg = g.degree(v)?;
    if deg <= 0.0 {
        return Ok(0.0);
    }
    let deg_c = g.community_degree(v, members)?;
    let rel = g.relative_volume(members)?;
    Ok(nief_from_parts(deg, deg_c, rel))
}

/// Binomial-CDF tail score.
pub fn p_score(g: &Graph, v: NodeId, members: &[NodeId]) -> Result<f64> {
    let deg = g.degree(v)?;
    if deg <= 0.0 {
        return Ok(0.0);
    }
    let deg_c = g.community_degree(v, members)?;
    let rel = g.relative_volume(members)?;
    p_from_parts(deg, deg_c, rel)
}

pub fn score(g: &Graph, v: NodeId, members: &[NodeId], kind: ScoreKind) -> Result<f64> {
    match kind {
        ScoreKind::Ief => ief(g, v, members),
        ScoreKind::Nief => nief(g, v, members),
        ScoreKind::P => p_score(g, v, members),
    }
}

/// One scored (node, community) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub node: NodeId,
    pub community: CommunityId,
    pub ief: f64,
    pub nief: f64,
    pub p: f64,
}

impl ScoreRow {
    pub fn get(&self, kind: ScoreKind) -> f64 {
        match kind {
            ScoreKind::Ief => self.ief,
            ScoreKind::Nief => self.nief,
            ScoreKind::P => self.p,
        }
    }
}

/// All scored pairs, in (node, community) order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
}

impl ScoreTable {
    /// CSV with header `node,community,ief,nief,p`, 6 decimal places.
    pub fn to_csv(&self, g: &Graph) -> String {
        let mut out = String::from("node,community,ief,nief,p\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6}\n",
                g.label(r.node),
                r.community,
                r.ief,
                r.nief,
                r.p
            ));
        }
        out
    }
}

/// Per-cover volumes shared by the batch scorers.
pub(crate) struct CoverStats {
    pub rel_vols: Vec<f64>,
}

impl CoverStats {
    pub fn new(g: &Graph, cover: &Cover) -> Result<CoverStats> {
        let mut rel_vols = Vec::with_capacity(cover.n_communities());
        for members in cover.communities() {
            rel_vols.push(g.relative_volume(&members)?);
        }
        Ok(CoverStats { rel_vols })
    }
}

/// Edge weight from `v` into each community it touches, as sorted pairs.
pub(crate) fn community_weights(g: &Graph, cover: &Cover, v: NodeId) -> Vec<(CommunityId, f64)> {
    let mut acc: HashMap<CommunityId, f64> = HashMap::new();
    for &(u, w) in g.neighbors(v) {
        for &c in cover.memberships_of(u) {
            *acc.entry(c).or_insert(0.0) += w;
        }
    }
    let mut pairs: Vec<(CommunityId, f64)> = acc.into_iter().collect();
    pairs.sort_unstable_by_key(|&(c, _)| c);
    pairs
}

/// Score every (node, community) pair where the node has an edge into the
/// community or belongs to it. Rows come out in (node, community) order.
pub fn score_all(g: &Graph, cover: &Cover) -> Result<ScoreTable> {
    if cover.n_nodes() != g.n_nodes() {
        return Err(Error::MismatchedNodes(format!(
            "cover has {} nodes, graph has {}",
            cover.n_nodes(),
            g.n_nodes()
        )));
    }
    let stats = CoverStats::new(g, cover)?;
    let per_node: Vec<Result<Vec<ScoreRow>>> = (0..g.n_nodes())
        .into_par_iter()
        .map(|v| {
            let deg = g.degree(v)?;
            let mut weights = community_weights(g, cover, v);
            // include own communities even with zero incident weight
            for &c in cover.memberships_of(v) {
                if weights.binary_search_by_key(&c, |&(c, _)| c).is_err() {
                    weights.push((c, 0.0));
                }
            }
            weights.sort_unstable_by_key(|&(c, _)| c);
            let mut rows = Vec::with_capacity(weights.len());
            for (c, deg_c) in weights {
                let rel = stats.rel_vols[c];
                rows.push(ScoreRow {
                    node: v,
                    community: c,
                    ief: ief_from_parts(deg, deg_c),
                    nief: nief_from_parts(deg, deg_c, rel),
                    p: p_from_parts(deg, deg_c, rel)?,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_node {
        rows.extend(r?);
    }
    Ok(ScoreTable { rows })
}

/// All communities of the cover ranked for `v` by the given score,
/// descending; ties broken by ascending community id. Zero-score
/// communities are kept at the tail.
pub fn rank_communities(
    g: &Graph,
    v: NodeId,
    cover: &Cover,
    kind: ScoreKind,
) -> Result<Vec<(CommunityId, f64)>> {
    g.check_node(v)?;
    let stats = CoverStats::new(g, cover)?;
    rank_with_stats(g, v, cover, &stats, kind)
}

pub(crate) fn rank_with_stats(
    g: &Graph,
    v: NodeId,
    cover: &Cover,
    stats: &CoverStats,
    kind: ScoreKind,
) -> Result<Vec<(CommunityId, f64)>> {
    let deg = g.degree(v)?;
    let weights: HashMap<CommunityId, f64> = community_weights(g, cover, v).into_iter().collect();
    let mut scored = Vec::with_capacity(cover.n_communities());
    for c in 0..cover.n_communities() {
        let deg_c = weights.get(&c).copied().unwrap_or(0.0);
        let s = score_from_parts(kind, deg, deg_c, stats.rel_vols[c])?;
        scored.push((c, s));
    }
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    Ok(scored)
}

/// Best community for `v` under the given score. Errors when the cover has
/// no communities; with all-zero scores returns the smallest community id.
pub fn max_score(
    g: &Graph,
    v: NodeId,
    cover: &Cover,
    kind: ScoreKind,
) -> Result<(CommunityId, f64)> {
    if cover.n_communities() == 0 {
        return Err(Error::NoCommunities);
    }
    let ranked = rank_communities(g, v, cover, kind)?;
    Ok(ranked[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::scenario;

    fn round2(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    #[test]
    fn binomial_cdf_spot_values() {
        assert!((binomial_cdf(3, 5, 0.5).unwrap() - 0.8125).abs() < 1e-12);
        assert_eq!(binomial_cdf(-1, 7, 0.3).unwrap(), 0.0);
        let p0 = binomial_cdf(0, 5, 0.01).unwrap();
        assert!((p0 - 0.99f64.powi(5)).abs() < 1e-12);
        assert_eq!(binomial_cdf(5, 5, 0.5).unwrap(), 1.0);
        assert_eq!(binomial_cdf(0, 0, 0.4).unwrap(), 1.0);
        assert_eq!(binomial_cdf(2, 5, 0.0).unwrap(), 1.0);
        assert_eq!(binomial_cdf(2, 5, 1.0).unwrap(), 0.0);
        assert!(binomial_cdf(2, 5, 1.5).is_err());
        assert!(binomial_cdf(2, 5, -0.1).is_err());
    }

    #[test]
    fn binomial_cdf_large_n_log_space() {
        // F(n/2; n, 0.5) = (1 + C(n, n/2) / 2^n) / 2 stays near 0.5
        let v = binomial_cdf(5000, 10000, 0.5).unwrap();
        assert!(v > 0.5 && v < 0.51, "{v}");
        // extreme tail must not underflow to garbage
        let tail = binomial_cdf(10, 10000, 0.5).unwrap();
        assert!(tail >= 0.0 && tail < 1e-100);
    }

    #[test]
    fn table1_spot_rows() {
        // vol(V)=10000, vol(C1)=5000, vol(C2)=100, deg(v)=5
        let s = scenario(10000, &[(5000, 4), (100, 1)], 0).unwrap();
        let c1 = &s.communities[0];
        let c2 = &s.communities[1];
        assert_eq!(round2(ief(&s.graph, s.v, c1).unwrap()), 0.8);
        assert_eq!(round2(nief(&s.graph, s.v, c1).unwrap()), 0.3);
        assert_eq!(round2(p_score(&s.graph, s.v, c1).unwrap()), 0.81);
        assert_eq!(round2(ief(&s.graph, s.v, c2).unwrap()), 0.2);
        assert_eq!(round2(nief(&s.graph, s.v, c2).unwrap()), 0.19);
        assert_eq!(round2(p_score(&s.graph, s.v, c2).unwrap()), 0.95);
    }

    #[test]
    fn nief_floor_at_zero() {
        let s = scenario(10000, &[(5000, 2), (100, 3)], 0).unwrap();
        assert_eq!(nief(&s.graph, s.v, &s.communities[0]).unwrap(), 0.0);
    }

    #[test]
    fn table2_row_three() {
        // deg=3, deg_C=2, w=0.5
        let s = scenario(10000, &[(5000, 2)], 1).unwrap();
        let c = &s.communities[0];
        assert_eq!(round2(nief(&s.graph, s.v, c).unwrap()), 0.17);
        assert_eq!(round2(p_score(&s.graph, s.v, c).unwrap()), 0.5);
    }

    #[test]
    fn zero_degree_scores_zero() {
        let g = Graph::from_indexed_edges(3, &[(0, 1, 1.0)]).unwrap();
        for kind in ScoreKind::ALL {
            assert_eq!(score(&g, 2, &[0, 1], kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn zero_law_no_edges_into_community() {
        let g = Graph::parse_edge_list("a b\nc d").unwrap();
        for kind in ScoreKind::ALL {
            assert_eq!(score(&g, 0, &[2, 3], kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn score_all_disjoint_triangles() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d").unwrap();
        let cover = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let table = score_all(&g, &cover).unwrap();
        assert_eq!(table.rows.len(), 6);
        for row in &table.rows {
            assert_eq!(row.ief, 1.0);
        }
    }

    #[test]
    fn score_all_empty_cover() {
        let g = Graph::parse_edge_list("a b").unwrap();
        let cover = Cover::from_memberships(vec![vec![], vec![]], 0);
        assert!(score_all(&g, &cover).unwrap().rows.is_empty());
    }

    #[test]
    fn ranking_table1_row() {
        // row (4, 1): P prefers C2, IEF prefers C1
        let s = scenario(10000, &[(5000, 4), (100, 1)], 0).unwrap();
        let cover = Cover::from_communities(s.graph.n_nodes(), &s.communities);
        let by_p = rank_communities(&s.graph, s.v, &cover, ScoreKind::P).unwrap();
        assert_eq!(by_p[0].0, 1);
        let by_ief = rank_communities(&s.graph, s.v, &cover, ScoreKind::Ief).unwrap();
        assert_eq!(by_ief[0].0, 0);
    }

    #[test]
    fn max_score_table1_row_32_nief() {
        let s = scenario(10000, &[(5000, 3), (100, 2)], 0).unwrap();
        let cover = Cover::from_communities(s.graph.n_nodes(), &s.communities);
        let (c, val) = max_score(&s.graph, s.v, &cover, ScoreKind::Nief).unwrap();
        assert_eq!(c, 1);
        assert_eq!(round2(val), 0.39);
    }

    #[test]
    fn max_score_all_zero_takes_lowest_id() {
        let g = Graph::parse_edge_list("a b\nc d\ne f").unwrap();
        let cover = Cover::from_communities(6, &[vec![2, 3], vec![4, 5]]);
        let (c, val) = max_score(&g, 0, &cover, ScoreKind::P).unwrap();
        assert_eq!((c, val), (0, 0.0));
    }

    #[test]
    fn max_score_empty_cover_errors() {
        let g = Graph::parse_edge_list("a b").unwrap();
        let cover = Cover::from_memberships(vec![vec![], vec![]], 0);
        assert!(max_score(&g, 0, &cover, ScoreKind::Ief).is_err());
    }

    #[test]
    fn csv_format() {
        let g = Graph::parse_edge_list("a b").unwrap();
        let cover = Cover::from_communities(2, &[vec![0, 1]]);
        let csv = score_all(&g, &cover).unwrap().to_csv(&g);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "node,community,ief,nief,p");
        assert_eq!(lines.next().unwrap(), "a,0,1.000000,0.000000,0.000000");
    }
}
