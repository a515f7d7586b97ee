//! Undirected weighted graph with string node labels interned to dense ids,
//! plus the partition and cover types used throughout the crate.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type CommunityId = usize;

/// Immutable undirected weighted graph. No self-loops, no parallel edges.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    adj: Vec<Vec<(NodeId, f64)>>,
    degrees: Vec<f64>,
    total_volume: f64,
    n_edges: usize,
}

impl Graph {
    /// Build a graph from `(u, v, w)` triples over string labels. Labels are
    /// interned in first-appearance order. Self-loops, duplicate edges and
    /// negative weights are rejected.
    pub fn from_labeled_edges<I, S>(edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: AsRef<str>,
    {
        let mut builder = GraphBuilder::new();
        for (u, v, w) in edges {
            builder.add_edge(u.as_ref(), v.as_ref(), w, 0)?;
        }
        Ok(builder.finish())
    }

    /// Build a graph over `n` isolated nodes with synthetic labels, then add
    /// edges by dense id. Used by the generators.
    pub fn from_indexed_edges(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Graph> {
        let mut builder = GraphBuilder::new();
        for i in 0..n {
            builder.intern(&i.to_string());
        }
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidNode(u.max(v)));
            }
            let (lu, lv) = (u.to_string(), v.to_string());
            builder.add_edge(&lu, &lv, w, 0)?;
        }
        Ok(builder.finish())
    }

    /// Parse the line-oriented edge-list format: `u v [w]`, whitespace
    /// separated, `#` starts a comment, weight defaults to 1.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut builder = GraphBuilder::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let mut it = line.split_whitespace();
            let Some(u) = it.next() else { continue };
            let v = it.next().ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: "expected `u v [w]`".into(),
            })?;
            let w = match it.next() {
                Some(tok) => tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("invalid weight '{tok}'"),
                })?,
                None => 1.0,
            };
            if it.next().is_some() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "trailing tokens after `u v w`".into(),
                });
            }
            builder.add_edge(u, v, w, lineno + 1)?;
        }
        Ok(builder.finish())
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn require_node(&self, label: &str) -> Result<NodeId> {
        self.node_id(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adj[v]
    }

    /// Weighted degree of `v`.
    pub fn degree(&self, v: NodeId) -> Result<f64> {
        self.check_node(v)?;
        Ok(self.degrees[v])
    }

    /// Sum of weights of edges from `v` into the node set `members`.
    pub fn community_degree(&self, v: NodeId, members: &[NodeId]) -> Result<f64> {
        self.check_node(v)?;
        let set = self.node_set(members)?;
        Ok(self.community_degree_with_set(v, &set))
    }

    pub(crate) fn community_degree_with_set(&self, v: NodeId, set: &HashSet<NodeId>) -> f64 {
        self.adj[v]
            .iter()
            .filter(|(u, _)| set.contains(u))
            .map(|(_, w)| w)
            .sum()
    }

    /// vol(C) = sum of weighted degrees over the node set. Summed in the
    /// order given (duplicates ignored) so the result does not depend on
    /// hash iteration order.
    pub fn volume(&self, members: &[NodeId]) -> Result<f64> {
        let mut seen = HashSet::with_capacity(members.len());
        let mut sum = 0.0;
        for &v in members {
            self.check_node(v)?;
            if seen.insert(v) {
                sum += self.degrees[v];
            }
        }
        Ok(sum)
    }

    /// w(C) = vol(C) / vol(V), clamped to 1 against float noise when the
    /// member sum is taken in a different order than the total.
    pub fn relative_volume(&self, members: &[NodeId]) -> Result<f64> {
        if self.total_volume == 0.0 {
            return Err(Error::EmptyGraph);
        }
        Ok((self.volume(members)? / self.total_volume).min(1.0))
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// Induced subgraph on `{v} ∪ N(v)`, or `N(v)` alone when `include_ego`
    /// is false. Labels are preserved.
    pub fn ego_net(&self, v: NodeId, include_ego: bool) -> Result<Graph> {
        self.check_node(v)?;
        let mut keep: Vec<NodeId> = Vec::new();
        if include_ego {
            keep.push(v);
        }
        keep.extend(self.adj[v].iter().map(|(u, _)| *u));
        keep.sort_unstable();
        self.induced_subgraph(&keep)
    }

    /// Induced subgraph on a sorted, deduplicated list of node ids.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Result<Graph> {
        let mut builder = GraphBuilder::new();
        let keep_set: HashSet<NodeId> = keep.iter().copied().collect();
        for &v in keep {
            self.check_node(v)?;
            builder.intern(&self.labels[v]);
        }
        for &v in keep {
            for &(u, w) in &self.adj[v] {
                if u > v && keep_set.contains(&u) {
                    builder.add_edge(&self.labels[v], &self.labels[u], w, 0)?;
                }
            }
        }
        Ok(builder.finish())
    }

    /// All edges once, with `u < v`, ordered by `(u, v)`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, f64)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for v in 0..self.adj.len() {
            for &(u, w) in &self.adj[v] {
                if v < u {
                    out.push((v, u, w));
                }
            }
        }
        out
    }

    /// Serialize in the edge-list format with the given weight precision.
    /// Unit weights are omitted so unweighted files round-trip unchanged.
    pub fn to_edge_list(&self, precision: usize) -> String {
        let mut out = String::new();
        for (u, v, w) in self.edges() {
            if w == 1.0 {
                out.push_str(&format!("{} {}\n", self.labels[u], self.labels[v]));
            } else {
                out.push_str(&format!(
                    "{} {} {:.prec$}\n",
                    self.labels[u],
                    self.labels[v],
                    w,
                    prec = precision
                ));
            }
        }
        out
    }

    /// Same structure, new edge weights. `weights` is keyed like `edges()`.
    pub fn reweighted(&self, weights: &HashMap<(NodeId, NodeId), f64>) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.n_edges);
        for (u, v, _) in self.edges() {
            let w = weights
                .get(&(u, v))
                .copied()
                .ok_or_else(|| Error::InvalidConfig(format!("missing weight for edge ({u},{v})")))?;
            edges.push((self.labels[u].clone(), self.labels[v].clone(), w));
        }
        // keep isolated nodes and label order
        let mut builder = GraphBuilder::new();
        for l in &self.labels {
            builder.intern(l);
        }
        for (u, v, w) in &edges {
            builder.add_edge(u, v, *w, 0)?;
        }
        Ok(builder.finish())
    }

    pub(crate) fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    pub(crate) fn node_set(&self, members: &[NodeId]) -> Result<HashSet<NodeId>> {
        let mut set = HashSet::with_capacity(members.len());
        for &v in members {
            self.check_node(v)?;
            set.insert(v);
        }
        Ok(set)
    }
}

/// Incremental graph construction with dedup checks.
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    adj: Vec<Vec<(NodeId, f64)>>,
    seen: HashSet<(NodeId, NodeId)>,
    n_edges: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        GraphBuilder {
            labels: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
            seen: HashSet::new(),
            n_edges: 0,
        }
    }

    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        self.adj.push(Vec::new());
        id
    }

    /// Add an edge by label, rejecting self-loops, duplicates and negative
    /// weights.
    pub fn add_labeled(&mut self, u: &str, v: &str, w: f64) -> Result<()> {
        self.add_edge(u, v, w, 0)
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    fn add_edge(&mut self, u: &str, v: &str, w: f64, line: usize) -> Result<()> {
        let fail = |message: String| Error::Parse { line, message };
        if u == v {
            return Err(fail(format!("self-loop on node '{u}'")));
        }
        if w < 0.0 || !w.is_finite() {
            return Err(fail(format!("negative or non-finite weight {w}")));
        }
        let (a, b) = (self.intern(u), self.intern(v));
        let key = (a.min(b), a.max(b));
        if !self.seen.insert(key) {
            return Err(fail(format!("duplicate edge '{u} {v}'")));
        }
        self.adj[a].push((b, w));
        self.adj[b].push((a, w));
        self.n_edges += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Graph {
        let mut degrees = vec![0.0; self.labels.len()];
        for (v, nbrs) in self.adj.iter_mut().enumerate() {
            nbrs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            degrees[v] = nbrs.iter().map(|(_, w)| w).sum();
        }
        let total_volume = degrees.iter().sum();
        Graph {
            labels: self.labels,
            index: self.index,
            adj: self.adj,
            degrees,
            total_volume,
            n_edges: self.n_edges,
        }
    }
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// Total assignment of every node to exactly one community.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<CommunityId>,
    n_parts: usize,
}

impl Partition {
    /// Build from raw per-node community ids, renumbering communities
    /// densely in first-appearance order.
    pub fn from_assignments(raw: &[usize]) -> Partition {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut parts = Vec::with_capacity(raw.len());
        for &c in raw {
            let next = remap.len();
            let id = *remap.entry(c).or_insert(next);
            parts.push(id);
        }
        Partition {
            parts,
            n_parts: remap.len(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.parts.len()
    }

    pub fn n_parts(&self) -> usize {
        self.n_parts
    }

    pub fn part_of(&self, v: NodeId) -> CommunityId {
        self.parts[v]
    }

    pub fn assignments(&self) -> &[CommunityId] {
        &self.parts
    }

    /// Member lists per community, each sorted by node id.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.n_parts];
        for (v, &c) in self.parts.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn as_cover(&self) -> Cover {
        Cover::from_memberships(
            self.parts.iter().map(|&c| vec![c]).collect(),
            self.n_parts,
        )
    }
}

/// Assignment of every node to zero or more communities. Empty membership
/// encodes an outlier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    memberships: Vec<Vec<CommunityId>>,
    n_communities: usize,
}

impl Cover {
    /// `memberships[v]` lists the communities of node `v`. Ids must be dense
    /// in `0..n_communities`; membership lists are sorted and deduplicated.
    pub fn from_memberships(mut memberships: Vec<Vec<CommunityId>>, n_communities: usize) -> Cover {
        for m in &mut memberships {
            m.sort_unstable();
            m.dedup();
        }
        Cover {
            memberships,
            n_communities,
        }
    }

    /// Build from community member lists over `n` nodes.
    pub fn from_communities(n: usize, communities: &[Vec<NodeId>]) -> Cover {
        let mut memberships = vec![Vec::new(); n];
        for (c, members) in communities.iter().enumerate() {
            for &v in members {
                memberships[v].push(c);
            }
        }
        Cover::from_memberships(memberships, communities.len())
    }

    pub fn n_nodes(&self) -> usize {
        self.memberships.len()
    }

    pub fn n_communities(&self) -> usize {
        self.n_communities
    }

    pub fn memberships_of(&self, v: NodeId) -> &[CommunityId] {
        &self.memberships[v]
    }

    pub fn is_outlier(&self, v: NodeId) -> bool {
        self.memberships[v].is_empty()
    }

    /// Member lists per community, each sorted by node id.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.n_communities];
        for (v, cs) in self.memberships.iter().enumerate() {
            for &c in cs {
                out[c].push(v);
            }
        }
        out
    }

    /// Number of nodes with empty membership.
    pub fn count_outliers(&self) -> usize {
        self.memberships.iter().filter(|m| m.is_empty()).count()
    }

    /// Drop communities with fewer than `min_size` members and renumber the
    /// survivors in ascending original order.
    pub fn drop_small(&self, min_size: usize) -> Cover {
        let comms = self.communities();
        let kept: Vec<Vec<NodeId>> = comms
            .into_iter()
            .filter(|c| c.len() >= min_size)
            .collect();
        Cover::from_communities(self.n_nodes(), &kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_arithmetic() {
        let g = Graph::parse_edge_list("a b\nb c").unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.total_volume(), 4.0);
        let b = g.node_id("b").unwrap();
        assert_eq!(g.degree(b).unwrap(), 2.0);
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = Graph::parse_edge_list("a b 2.0\nb a 2.0").unwrap_err();
        assert!(err.to_string().contains("duplicate edge"));
    }

    #[test]
    fn self_loop_rejected_with_line() {
        let err = Graph::parse_edge_list("a b\nc c").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(Graph::parse_edge_list("a b -1").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = Graph::parse_edge_list("# header\n\na b # trailing\nb c").unwrap();
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn star_center_degree() {
        let g = Graph::parse_edge_list("c a\nc b\nc d\nc e\nc f").unwrap();
        let c = g.node_id("c").unwrap();
        assert_eq!(g.degree(c).unwrap(), 5.0);
    }

    #[test]
    fn isolated_node_degree_zero() {
        let g = Graph::from_indexed_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.degree(2).unwrap(), 0.0);
    }

    #[test]
    fn community_degree_cases() {
        let g = Graph::parse_edge_list("a b\nb c\nc a").unwrap();
        let (a, b, c) = (0, 1, 2);
        // C = V equals degree
        assert_eq!(
            g.community_degree(c, &[a, b, c]).unwrap(),
            g.degree(c).unwrap()
        );
        // triangle, C = {a,b}, v = c
        assert_eq!(g.community_degree(c, &[a, b]).unwrap(), 2.0);
        // disjoint from neighborhood
        let g2 = Graph::parse_edge_list("a b\nc d").unwrap();
        assert_eq!(g2.community_degree(0, &[2, 3]).unwrap(), 0.0);
        // invalid id in C
        assert!(g.community_degree(0, &[99]).is_err());
    }

    #[test]
    fn relative_volume_bounds() {
        let g = Graph::parse_edge_list("a b\nb c\nc a").unwrap();
        let all: Vec<usize> = (0..3).collect();
        assert_eq!(g.relative_volume(&all).unwrap(), 1.0);
        assert_eq!(g.relative_volume(&[]).unwrap(), 0.0);
    }

    #[test]
    fn relative_volume_empty_graph_errors() {
        let g = Graph::from_indexed_edges(2, &[]).unwrap();
        assert!(matches!(g.relative_volume(&[0]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn ego_net_star() {
        let g = Graph::parse_edge_list("c a\nc b\nc d").unwrap();
        let c = g.node_id("c").unwrap();
        let with_ego = g.ego_net(c, true).unwrap();
        assert_eq!(with_ego.n_nodes(), 4);
        assert_eq!(with_ego.n_edges(), 3);
        let without = g.ego_net(c, false).unwrap();
        assert_eq!(without.n_nodes(), 3);
        assert_eq!(without.n_edges(), 0);
    }

    #[test]
    fn ego_net_triangle_without_ego() {
        let g = Graph::parse_edge_list("a b\nb c\nc a").unwrap();
        let a = g.node_id("a").unwrap();
        let sub = g.ego_net(a, false).unwrap();
        assert_eq!(sub.n_nodes(), 2);
        assert_eq!(sub.n_edges(), 1);
        assert!(sub.node_id("b").is_some() && sub.node_id("c").is_some());
    }

    #[test]
    fn partition_degree_sums() {
        let g = Graph::parse_edge_list("a b\nb c\nc a\nc d\nd e").unwrap();
        let p = Partition::from_assignments(&[0, 0, 1, 1, 1]);
        for v in 0..g.n_nodes() {
            let total: f64 = p
                .communities()
                .iter()
                .map(|c| g.community_degree(v, c).unwrap())
                .sum();
            assert!((total - g.degree(v).unwrap()).abs() < 1e-12);
        }
        let rel: f64 = p
            .communities()
            .iter()
            .map(|c| g.relative_volume(c).unwrap())
            .sum();
        assert!((rel - 1.0).abs() < 1e-12);
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "a b\nb c 2.5\nc a";
        let g = Graph::parse_edge_list(text).unwrap();
        let ser = g.to_edge_list(6);
        let g2 = Graph::parse_edge_list(&ser).unwrap();
        assert_eq!(g2.to_edge_list(6), ser);
        assert_eq!(g.labels(), g2.labels());
    }

    #[test]
    fn cover_outliers() {
        let cover = Cover::from_memberships(vec![vec![0], vec![], vec![0, 1]], 2);
        assert_eq!(cover.count_outliers(), 1);
        assert!(cover.is_outlier(1));
        assert_eq!(cover.memberships_of(2), &[0, 1]);
    }
}
