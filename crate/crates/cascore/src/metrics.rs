//! Partition and cover similarity metrics (AMI, oNMI), ROC/AUC with tie
//! handling, and the score-quality experiments built on them.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Cover, Graph, NodeId, Partition};
use crate::scores::{rank_with_stats, CoverStats, ScoreKind};

fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Adjusted Mutual Information with arithmetic-mean normalization and the
/// permutation-model expected MI. Degenerate single-cluster comparisons
/// return 0.
pub fn ami(p1: &Partition, p2: &Partition) -> Result<f64> {
    if p1.n_nodes() != p2.n_nodes() {
        return Err(Error::MismatchedNodes(format!(
            "{} vs {} nodes",
            p1.n_nodes(),
            p2.n_nodes()
        )));
    }
    let n = p1.n_nodes();
    if n == 0 {
        return Err(Error::NoNodes);
    }
    let (r, c) = (p1.n_parts(), p2.n_parts());
    let mut counts = vec![vec![0usize; c]; r];
    let mut a = vec![0usize; r];
    let mut b = vec![0usize; c];
    for v in 0..n {
        counts[p1.part_of(v)][p2.part_of(v)] += 1;
        a[p1.part_of(v)] += 1;
        b[p2.part_of(v)] += 1;
    }
    let nf = n as f64;
    let h1: f64 = a.iter().map(|&x| entropy_term(x as f64 / nf)).sum();
    let h2: f64 = b.iter().map(|&x| entropy_term(x as f64 / nf)).sum();
    if h1 == 0.0 || h2 == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for i in 0..r {
        for j in 0..c {
            let nij = counts[i][j] as f64;
            if nij > 0.0 {
                mi += nij / nf * ((nf * nij) / (a[i] as f64 * b[j] as f64)).ln();
            }
        }
    }
    let emi = expected_mi(&a, &b, n);
    let denom = 0.5 * (h1 + h2) - emi;
    if denom.abs() < 1e-15 {
        return Ok(0.0);
    }
    Ok((mi - emi) / denom)
}

/// Expected MI under the hypergeometric (permutation) model.
fn expected_mi(a: &[usize], b: &[usize], n: usize) -> f64 {
    let mut log_fact = vec![0.0; n + 1];
    for i in 1..=n {
        log_fact[i] = log_fact[i - 1] + (i as f64).ln();
    }
    let nf = n as f64;
    let mut emi = 0.0;
    for &ai in a {
        for &bj in b {
            let lo = 1.max((ai + bj).saturating_sub(n));
            let hi = ai.min(bj);
            for nij in lo..=hi {
                let nij_f = nij as f64;
                let log_term = log_fact[ai] + log_fact[bj] + log_fact[n - ai] + log_fact[n - bj]
                    - log_fact[n]
                    - log_fact[nij]
                    - log_fact[ai - nij]
                    - log_fact[bj - nij]
                    - log_fact[n - ai - bj + nij];
                emi += nij_f / nf * ((nf * nij_f) / (ai as f64 * bj as f64)).ln() * log_term.exp();
            }
        }
    }
    emi
}

/// Binary entropy of a community of the given size over `n` nodes.
fn community_entropy(size: usize, n: usize) -> f64 {
    let p = size as f64 / n as f64;
    entropy_term(p) + entropy_term(1.0 - p)
}

/// Conditional entropy H(X|Y) for one community pair, or `None` when the
/// standard validity constraint fails.
fn conditional_pair(x: &HashSet<NodeId>, y: &HashSet<NodeId>, n: usize) -> Option<f64> {
    let n11 = x.intersection(y).count();
    let n10 = x.len() - n11;
    let n01 = y.len() - n11;
    let n00 = n - x.len() - n01;
    let nf = n as f64;
    let h = |k: usize| entropy_term(k as f64 / nf);
    if h(n11) + h(n00) < h(n10) + h(n01) {
        return None;
    }
    let joint = h(n11) + h(n10) + h(n01) + h(n00);
    Some(joint - community_entropy(y.len(), n))
}

fn onmi_side(xs: &[HashSet<NodeId>], ys: &[HashSet<NodeId>], n: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for x in xs {
        let hx = community_entropy(x.len(), n);
        let best = ys
            .iter()
            .filter_map(|y| conditional_pair(x, y, n))
            .fold(f64::INFINITY, f64::min);
        num += if best.is_finite() { best.max(0.0) } else { hx };
        den += hx;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Overlapping NMI: the lack-of-information measure
/// `1 - (H(A|B)/H(A) + H(B|A)/H(B)) / 2` over best-match conditional
/// entropies.
pub fn onmi(a: &Cover, b: &Cover) -> Result<f64> {
    if a.n_nodes() != b.n_nodes() {
        return Err(Error::MismatchedNodes(format!(
            "{} vs {} nodes",
            a.n_nodes(),
            b.n_nodes()
        )));
    }
    if a.n_communities() == 0 || b.n_communities() == 0 {
        return Err(Error::EmptyCover);
    }
    let n = a.n_nodes();
    let to_sets = |c: &Cover| -> Vec<HashSet<NodeId>> {
        c.communities()
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect()
    };
    let xs = to_sets(a);
    let ys = to_sets(b);
    Ok(1.0 - 0.5 * (onmi_side(&xs, &ys, n) + onmi_side(&ys, &xs, n)))
}

/// ROC curve over thresholded scores; low score predicts outlier.
#[derive(Debug, Clone)]
pub struct RocCurve {
    /// (false positive rate, true positive rate), from (0,0) to (1,1).
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

impl RocCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fpr,tpr\n");
        for (fpr, tpr) in &self.points {
            out.push_str(&format!("{fpr:.6},{tpr:.6}\n"));
        }
        out
    }
}

/// Build the ROC curve for outlier prediction by ascending score. Equal
/// scores are grouped into a single step; the trapezoidal area equals the
/// Mann-Whitney statistic with average-rank tie correction.
pub fn roc(scores: &[f64], is_outlier: &[bool]) -> Result<RocCurve> {
    if scores.len() != is_outlier.len() {
        return Err(Error::MismatchedNodes(format!(
            "{} scores vs {} labels",
            scores.len(),
            is_outlier.len()
        )));
    }
    let n_pos = is_outlier.iter().filter(|&&o| o).count();
    let n_neg = is_outlier.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[i].partial_cmp(&scores[j]).unwrap().then(i.cmp(&j)));
    let mut points = vec![(0.0, 0.0)];
    let mut auc = 0.0;
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut idx = 0;
    while idx < order.len() {
        let score = scores[order[idx]];
        let mut group_end = idx;
        while group_end < order.len() && scores[order[group_end]] == score {
            group_end += 1;
        }
        for &i in &order[idx..group_end] {
            if is_outlier[i] {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        let prev = *points.last().unwrap();
        let point = (fp as f64 / n_neg as f64, tp as f64 / n_pos as f64);
        auc += (point.0 - prev.0) * (point.1 + prev.1) / 2.0;
        points.push(point);
        idx = group_end;
    }
    Ok(RocCurve { points, auc })
}

/// Per-rank accuracy: for every node with at least K true memberships, does
/// the K-th ranked community actually contain the node. Returns
/// `(K, proportion, count)` rows; zero-degree nodes are excluded.
pub fn k_rank_accuracy(g: &Graph, truth: &Cover, kind: ScoreKind) -> Result<Vec<(usize, f64, usize)>> {
    if truth.n_nodes() != g.n_nodes() {
        return Err(Error::MismatchedNodes(format!(
            "cover has {} nodes, graph has {}",
            truth.n_nodes(),
            g.n_nodes()
        )));
    }
    let stats = CoverStats::new(g, truth)?;
    let membership_sets: Vec<HashSet<usize>> = (0..g.n_nodes())
        .map(|v| truth.memberships_of(v).iter().copied().collect())
        .collect();
    let mut hits: HashMap<usize, (usize, usize)> = HashMap::new();
    for v in 0..g.n_nodes() {
        let t = membership_sets[v].len();
        if t == 0 || g.degree(v)? == 0.0 {
            continue;
        }
        let ranked = rank_with_stats(g, v, truth, &stats, kind)?;
        for k in 1..=t.min(ranked.len()) {
            let entry = hits.entry(k).or_insert((0, 0));
            entry.1 += 1;
            if membership_sets[v].contains(&ranked[k - 1].0) {
                entry.0 += 1;
            }
        }
    }
    let mut ks: Vec<usize> = hits.keys().copied().collect();
    ks.sort_unstable();
    Ok(ks
        .into_iter()
        .map(|k| {
            let (hit, total) = hits[&k];
            (k, hit as f64 / total as f64, total)
        })
        .collect())
}

/// Max association score of each node over the communities of a partition,
/// in node order. Nodes with no incident edges score 0.
pub fn max_scores_against_partition(
    g: &Graph,
    found: &Partition,
    kind: ScoreKind,
) -> Result<Vec<f64>> {
    let cover = found.as_cover();
    let stats = CoverStats::new(g, &cover)?;
    let mut out = Vec::with_capacity(g.n_nodes());
    for v in 0..g.n_nodes() {
        let ranked = rank_with_stats(g, v, &cover, &stats, kind)?;
        out.push(ranked.first().map_or(0.0, |&(_, s)| s));
    }
    Ok(out)
}

/// Score every node by its best community in the found partition and build
/// the ROC curve against the true outlier set.
pub fn outlier_experiment(
    g: &Graph,
    found: &Partition,
    true_outliers: &[NodeId],
    kind: ScoreKind,
) -> Result<RocCurve> {
    let scores = max_scores_against_partition(g, found, kind)?;
    let outlier_set: HashSet<NodeId> = true_outliers.iter().copied().collect();
    let labels: Vec<bool> = (0..g.n_nodes()).map(|v| outlier_set.contains(&v)).collect();
    roc(&scores, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ami_identity_is_one() {
        let p = Partition::from_assignments(&[0, 0, 1, 1, 2, 2]);
        assert!((ami(&p, &p).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ami_single_community_is_zero() {
        let p1 = Partition::from_assignments(&[0, 0, 1, 1]);
        let p2 = Partition::from_assignments(&[0, 0, 0, 0]);
        assert_eq!(ami(&p1, &p2).unwrap(), 0.0);
    }

    #[test]
    fn ami_matches_reference_values() {
        // frozen from an independent reference implementation
        let p1 = Partition::from_assignments(&[0, 0, 1, 1, 2, 2, 2, 1]);
        let p2 = Partition::from_assignments(&[0, 1, 1, 1, 2, 2, 0, 1]);
        assert!((ami(&p1, &p2).unwrap() - 0.36970240513785807).abs() < 1e-9);
        let a2: Vec<usize> = [vec![0; 5], vec![1; 5], vec![2; 5]].concat();
        let b2 = vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 0, 1, 2];
        let q1 = Partition::from_assignments(&a2);
        let q2 = Partition::from_assignments(&b2);
        assert!((ami(&q1, &q2).unwrap() - 0.23365312431641852).abs() < 1e-9);
    }

    #[test]
    fn ami_symmetric_and_relabel_invariant() {
        let p1 = Partition::from_assignments(&[0, 0, 1, 1, 2, 2, 2, 1]);
        let p2 = Partition::from_assignments(&[0, 1, 1, 1, 2, 2, 0, 1]);
        let p2r = Partition::from_assignments(&[5, 9, 9, 9, 3, 3, 5, 9]);
        assert!((ami(&p1, &p2).unwrap() - ami(&p2, &p1).unwrap()).abs() < 1e-12);
        assert!((ami(&p1, &p2).unwrap() - ami(&p1, &p2r).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ami_mismatched_sizes_error() {
        let p1 = Partition::from_assignments(&[0, 1]);
        let p2 = Partition::from_assignments(&[0, 1, 1]);
        assert!(ami(&p1, &p2).is_err());
    }

    #[test]
    fn onmi_identity_is_one() {
        let a = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert!((onmi(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn onmi_hand_case_matches_oracle() {
        // nodes 1..=6 mapped to ids 0..=5; value frozen from the
        // straight-from-formula oracle script
        let a = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let b = Cover::from_communities(6, &[vec![0, 1, 2, 3], vec![4, 5]]);
        assert!((onmi(&a, &b).unwrap() - 0.47957395851362217).abs() < 1e-9);
    }

    #[test]
    fn onmi_symmetric_and_order_invariant() {
        let a = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        let b = Cover::from_communities(6, &[vec![0, 1, 2, 3], vec![4, 5]]);
        let b_reordered = Cover::from_communities(6, &[vec![4, 5], vec![0, 1, 2, 3]]);
        assert!((onmi(&a, &b).unwrap() - onmi(&b, &a).unwrap()).abs() < 1e-12);
        assert!((onmi(&a, &b).unwrap() - onmi(&a, &b_reordered).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn onmi_empty_cover_errors() {
        let a = Cover::from_communities(4, &[vec![0, 1]]);
        let empty = Cover::from_memberships(vec![Vec::new(); 4], 0);
        assert!(matches!(onmi(&a, &empty), Err(Error::EmptyCover)));
    }

    #[test]
    fn roc_trivial_configurations() {
        // outliers strictly below normals
        let scores = [0.1, 0.2, 0.8, 0.9];
        let labels = [true, true, false, false];
        assert!((roc(&scores, &labels).unwrap().auc - 1.0).abs() < 1e-12);
        // inverted labels
        let inverted = [false, false, true, true];
        assert!((roc(&scores, &inverted).unwrap().auc - 0.0).abs() < 1e-12);
        // all scores equal
        let flat = [0.5; 4];
        assert!((roc(&flat, &labels).unwrap().auc - 0.5).abs() < 1e-12);
    }

    #[test]
    fn roc_curve_shape_invariants() {
        let scores = [0.1, 0.3, 0.3, 0.4, 0.9, 0.2];
        let labels = [true, false, true, false, false, true];
        let curve = roc(&scores, &labels).unwrap();
        assert_eq!(*curve.points.first().unwrap(), (0.0, 0.0));
        assert_eq!(*curve.points.last().unwrap(), (1.0, 1.0));
        for pair in curve.points.windows(2) {
            assert!(pair[1].0 >= pair[0].0);
            assert!(pair[1].1 >= pair[0].1);
        }
    }

    #[test]
    fn roc_invariant_under_monotone_transform() {
        let scores = [0.1, 0.3, 0.3, 0.4, 0.9, 0.2];
        let labels = [true, false, true, false, false, true];
        let transformed: Vec<f64> = scores.iter().map(|&s: &f64| s.powi(3) * 10.0).collect();
        let a1 = roc(&scores, &labels).unwrap().auc;
        let a2 = roc(&transformed, &labels).unwrap().auc;
        assert!((a1 - a2).abs() < 1e-12);
    }

    #[test]
    fn roc_single_class_errors() {
        assert!(matches!(
            roc(&[0.1, 0.2], &[true, true]),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn k_rank_disjoint_cliques_perfect_at_one() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d").unwrap();
        let truth = Cover::from_communities(6, &[vec![0, 1, 2], vec![3, 4, 5]]);
        for kind in ScoreKind::ALL {
            let rows = k_rank_accuracy(&g, &truth, kind).unwrap();
            assert_eq!(rows, vec![(1, 1.0, 6)]);
        }
    }

    #[test]
    fn k_rank_excludes_isolated_nodes() {
        let g = Graph::from_indexed_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let truth = Cover::from_communities(4, &[vec![0, 1, 2, 3]]);
        let rows = k_rank_accuracy(&g, &truth, ScoreKind::Ief).unwrap();
        assert_eq!(rows, vec![(1, 1.0, 3)]);
    }

    #[test]
    fn outlier_experiment_isolated_outliers_perfect() {
        let g = Graph::from_indexed_edges(
            8,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
        )
        .unwrap();
        let found = Partition::from_assignments(&[0, 0, 0, 1, 1, 1, 0, 1]);
        let curve = outlier_experiment(&g, &found, &[6, 7], ScoreKind::Ief).unwrap();
        assert!((curve.auc - 1.0).abs() < 1e-12);
    }
}
