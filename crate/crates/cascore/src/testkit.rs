//! Construction helpers for tests: build concrete graphs realizing
//! prescribed total volume, community volumes and focal-node degree splits.

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};

/// A graph with one focal node `v` and communities of prescribed volume.
pub struct Scenario {
    pub graph: Graph,
    pub v: NodeId,
    pub communities: Vec<Vec<NodeId>>,
}

/// Build a unit-weight graph where the focal node has exactly `deg` edges
/// into community `i` per `specs[i] = (vol_i, deg_i)`, each community has
/// volume exactly `vol_i`, the focal node has `extra_deg` further edges to
/// background nodes, and the whole graph has volume `total_vol`.
pub fn scenario(total_vol: u64, specs: &[(u64, u64)], extra_deg: u64) -> Result<Scenario> {
    let mut b = GraphBuilder::new();
    let mut fresh = 0usize;
    let mut next = |b: &mut GraphBuilder, prefix: &str| {
        fresh += 1;
        b.intern(&format!("{prefix}{fresh}"));
        format!("{prefix}{fresh}")
    };
    let v_label = "v".to_string();
    b.intern(&v_label);

    let mut communities: Vec<Vec<String>> = Vec::new();
    for &(vol, deg) in specs {
        if vol < deg {
            return Err(Error::InvalidConfig(format!(
                "community volume {vol} smaller than focal degree {deg}"
            )));
        }
        let mut members: Vec<String> = Vec::new();
        // focal edges into the community
        for _ in 0..deg {
            let m = next(&mut b, "c");
            b.add_labeled(&v_label, &m, 1.0)?;
            members.push(m);
        }
        // pad the community volume with internal matchings among fresh nodes
        let mut remaining = vol - deg;
        while remaining >= 2 {
            let a = next(&mut b, "c");
            let c = next(&mut b, "c");
            b.add_labeled(&a, &c, 1.0)?;
            members.push(a);
            members.push(c);
            remaining -= 2;
        }
        if remaining == 1 {
            // one community node attached to a background node
            let a = next(&mut b, "c");
            let bg = next(&mut b, "x");
            b.add_labeled(&a, &bg, 1.0)?;
            members.push(a);
        }
        if members.is_empty() {
            // zero-volume community still needs a member
            members.push(next(&mut b, "c"));
        }
        communities.push(members);
    }
    for _ in 0..extra_deg {
        let bg = next(&mut b, "x");
        b.add_labeled(&v_label, &bg, 1.0)?;
    }
    // pad total volume with disjoint background edges (2 volume each)
    if total_vol % 2 == 1 {
        return Err(Error::InvalidConfig(
            "total volume must be even for a unit-weight graph".into(),
        ));
    }
    let target_edges = (total_vol / 2) as usize;
    if target_edges < b.n_edges() {
        return Err(Error::InvalidConfig(format!(
            "total volume {total_vol} below the {} already required",
            2 * b.n_edges()
        )));
    }
    while b.n_edges() < target_edges {
        let a = next(&mut b, "x");
        let c = next(&mut b, "x");
        b.add_labeled(&a, &c, 1.0)?;
    }
    let graph = b.finish();
    let v = graph.node_id("v").unwrap();
    let communities = communities
        .into_iter()
        .map(|ms| ms.iter().map(|l| graph.node_id(l).unwrap()).collect())
        .collect();
    Ok(Scenario {
        graph,
        v,
        communities,
    })
}
