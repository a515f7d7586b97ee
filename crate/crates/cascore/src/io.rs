//! Text formats for partitions, covers and node sets.
//!
//! Partition file: one `node community_id` pair per line.
//! Cover file: one `node<TAB>id1,id2,...` per line, literal `-` for an empty
//! membership set. `#` starts a comment in every format.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Cover, Graph, NodeId, Partition};

fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(pos) => &raw[..pos],
        None => raw,
    }
}

/// Parse a partition file against the node labels of `g`. Every node of the
/// graph must be assigned exactly once.
pub fn parse_partition(g: &Graph, text: &str) -> Result<Partition> {
    let mut raw: Vec<Option<usize>> = vec![None; g.n_nodes()];
    for (lineno, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        let mut it = line.split_whitespace();
        let Some(label) = it.next() else { continue };
        let comm = it.next().ok_or_else(|| Error::Parse {
            line: lineno + 1,
            message: "expected `node community_id`".into(),
        })?;
        let comm: usize = comm.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("invalid community id '{comm}'"),
        })?;
        let v = g.node_id(label).ok_or_else(|| Error::Parse {
            line: lineno + 1,
            message: format!("unknown node '{label}'"),
        })?;
        if raw[v].replace(comm).is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("node '{label}' assigned twice"),
            });
        }
    }
    let mut assignments = Vec::with_capacity(g.n_nodes());
    for (v, c) in raw.into_iter().enumerate() {
        match c {
            Some(c) => assignments.push(c),
            None => {
                return Err(Error::MismatchedNodes(format!(
                    "node '{}' missing from partition",
                    g.label(v)
                )))
            }
        }
    }
    Ok(Partition::from_assignments(&assignments))
}

pub fn write_partition(g: &Graph, p: &Partition) -> String {
    let mut out = String::new();
    for v in 0..g.n_nodes() {
        out.push_str(&format!("{} {}\n", g.label(v), p.part_of(v)));
    }
    out
}

/// Parse a cover file. Nodes missing from the file get empty membership.
/// Community ids are renumbered densely in ascending order of the file's ids.
pub fn parse_cover(g: &Graph, text: &str) -> Result<Cover> {
    let mut raw: Vec<Option<Vec<usize>>> = vec![None; g.n_nodes()];
    let mut seen_ids: BTreeMap<usize, ()> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (label, rest) = match trimmed.split_once(['\t', ' ']) {
            Some((l, r)) => (l, r.trim()),
            None => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "expected `node<TAB>id1,id2,...` or `node<TAB>-`".into(),
                })
            }
        };
        let v = g.node_id(label).ok_or_else(|| Error::Parse {
            line: lineno + 1,
            message: format!("unknown node '{label}'"),
        })?;
        let mut ids = Vec::new();
        if rest != "-" {
            for tok in rest.split(',') {
                let id: usize = tok.trim().parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("invalid community id '{tok}'"),
                })?;
                seen_ids.insert(id, ());
                ids.push(id);
            }
        }
        if raw[v].replace(ids).is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("node '{label}' listed twice"),
            });
        }
    }
    let remap: HashMap<usize, usize> = seen_ids
        .keys()
        .enumerate()
        .map(|(dense, &orig)| (orig, dense))
        .collect();
    let memberships: Vec<Vec<usize>> = raw
        .into_iter()
        .map(|m| {
            m.unwrap_or_default()
                .into_iter()
                .map(|c| remap[&c])
                .collect()
        })
        .collect();
    Ok(Cover::from_memberships(memberships, remap.len()))
}

pub fn write_cover(g: &Graph, cover: &Cover) -> String {
    let mut out = String::new();
    for v in 0..g.n_nodes() {
        let ms = cover.memberships_of(v);
        if ms.is_empty() {
            out.push_str(&format!("{}\t-\n", g.label(v)));
        } else {
            let ids: Vec<String> = ms.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{}\t{}\n", g.label(v), ids.join(",")));
        }
    }
    out
}

/// Parse a node-set file: one node label per line.
pub fn parse_node_set(g: &Graph, text: &str) -> Result<Vec<NodeId>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let v = g.node_id(line).ok_or_else(|| Error::Parse {
            line: lineno + 1,
            message: format!("unknown node '{line}'"),
        })?;
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn write_node_set(g: &Graph, nodes: &[NodeId]) -> String {
    let mut out = String::new();
    for &v in nodes {
        out.push_str(g.label(v));
        out.push('\n');
    }
    out
}

/// Heuristic used by the CLI: a communities file with a tab (or a `-` field)
/// is a cover, otherwise it is a partition.
pub fn parse_communities(g: &Graph, text: &str) -> Result<Cover> {
    let looks_like_cover = text.lines().map(strip_comment).any(|l| {
        l.contains('\t') || l.split_whitespace().nth(1).is_some_and(|t| t == "-" || t.contains(','))
    });
    if looks_like_cover {
        parse_cover(g, text)
    } else {
        Ok(parse_partition(g, text)?.as_cover())
    }
}
