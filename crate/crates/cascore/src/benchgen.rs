//! Seeded synthetic benchmark with planted communities, background noise,
//! outliers and overlapping memberships. Degrees and community sizes follow
//! truncated power laws; edges are realized by degree-proportional random
//! pairing.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Cover, Graph, NodeId};

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub n: usize,
    /// Degree power-law exponent.
    pub gamma: f64,
    pub d_min: u64,
    pub d_max: u64,
    /// Community-size power-law exponent.
    pub beta: f64,
    pub s_min: u64,
    pub s_max: u64,
    /// Fraction of each non-outlier node's degree wired to the background.
    pub xi: f64,
    pub n_outliers: usize,
    /// Mean community memberships per non-outlier node.
    pub eta: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Infeasible(m));
        if self.n == 0 {
            return fail("n must be positive".into());
        }
        if self.n_outliers >= self.n {
            return fail(format!(
                "n_outliers {} must be below n {}",
                self.n_outliers, self.n
            ));
        }
        if self.s_min < 2 {
            return fail(format!("s_min {} must be at least 2", self.s_min));
        }
        if self.s_max < self.s_min {
            return fail(format!("s_max {} below s_min {}", self.s_max, self.s_min));
        }
        if self.d_min < 1 {
            return fail("d_min must be at least 1".into());
        }
        if self.d_max < self.d_min {
            return fail(format!("d_max {} below d_min {}", self.d_max, self.d_min));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return fail(format!("xi {} outside [0, 1]", self.xi));
        }
        if self.eta < 1.0 {
            return fail(format!("eta {} must be at least 1", self.eta));
        }
        let members = self.n - self.n_outliers;
        if self.s_max as usize > members {
            return fail(format!(
                "s_max {} exceeds the {} non-outlier nodes",
                self.s_max, members
            ));
        }
        Ok(())
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 1000,
            gamma: 2.5,
            d_min: 5,
            d_max: 50,
            beta: 1.5,
            s_min: 20,
            s_max: 100,
            xi: 0.2,
            n_outliers: 0,
            eta: 1.0,
            seed: 0,
        }
    }
}

/// i.i.d. draws from `P(x) ∝ x^(-exponent)` on the integer range `[lo, hi]`.
pub fn sample_power_law(
    count: usize,
    exponent: f64,
    lo: u64,
    hi: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u64>> {
    if lo > hi {
        return Err(Error::Infeasible(format!("lo {lo} above hi {hi}")));
    }
    let weights: Vec<f64> = (lo..=hi).map(|x| (x as f64).powf(-exponent)).collect();
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    let total = acc;
    Ok((0..count)
        .map(|_| {
            let t = rng.random_range(0.0..total);
            let idx = cumulative.partition_point(|&c| c < t);
            lo + idx.min(weights.len() - 1) as u64
        })
        .collect())
}

/// Analytic mean of the truncated discrete power law; used as a test oracle.
pub fn power_law_mean(exponent: f64, lo: u64, hi: u64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for x in lo..=hi {
        let w = (x as f64).powf(-exponent);
        num += x as f64 * w;
        den += w;
    }
    num / den
}

fn stochastic_round(x: f64, rng: &mut ChaCha8Rng) -> u64 {
    let floor = x.floor();
    let frac = x - floor;
    floor as u64 + if rng.random_range(0.0..1.0) < frac { 1 } else { 0 }
}

pub struct Generated {
    pub graph: Graph,
    pub truth: Cover,
    pub outliers: Vec<NodeId>,
}

/// Generate the benchmark graph, its planted truth cover and outlier list.
pub fn generate(config: &GenConfig) -> Result<Generated> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n;
    let degrees = sample_power_law(n, config.gamma, config.d_min, config.d_max, &mut rng)?;

    // outliers are the last n_outliers node ids
    let members_count = n - config.n_outliers;
    let member_nodes: Vec<NodeId> = (0..members_count).collect();

    // sample community sizes until the membership slots cover eta * members
    let target_slots = (config.eta * members_count as f64).round() as u64;
    let mut sizes: Vec<u64> = Vec::new();
    let mut slots = 0u64;
    while slots < target_slots {
        let s = sample_power_law(1, config.beta, config.s_min, config.s_max, &mut rng)?[0];
        sizes.push(s);
        slots += s;
    }
    if sizes.is_empty() {
        return Err(Error::Infeasible("no community slots to fill".into()));
    }

    // base quotas: every non-outlier node gets one membership, distributed
    // across communities proportionally to size (largest remainder)
    let total: f64 = sizes.iter().sum::<u64>() as f64;
    let mut base: Vec<usize> = sizes
        .iter()
        .map(|&s| ((s as f64 / total) * members_count as f64).floor() as usize)
        .collect();
    for (b, &s) in base.iter_mut().zip(&sizes) {
        *b = (*b).clamp(1, s as usize);
    }
    let mut assigned: usize = base.iter().sum();
    // largest-remainder style fixup to make quotas sum to members_count
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&i, &j| sizes[j].cmp(&sizes[i]).then(i.cmp(&j)));
    let mut guard = 0;
    while assigned != members_count {
        for &i in &order {
            if assigned < members_count && base[i] < sizes[i] as usize {
                base[i] += 1;
                assigned += 1;
            } else if assigned > members_count && base[i] > 1 {
                base[i] -= 1;
                assigned -= 1;
            }
            if assigned == members_count {
                break;
            }
        }
        guard += 1;
        if guard > sizes.len() + members_count {
            return Err(Error::Infeasible(
                "community quotas cannot cover every non-outlier node".into(),
            ));
        }
    }

    // deal a shuffled node list into the base quotas
    let mut shuffled = member_nodes.clone();
    use rand::seq::SliceRandom;
    shuffled.shuffle(&mut rng);
    let mut communities: Vec<Vec<NodeId>> = Vec::with_capacity(sizes.len());
    let mut cursor = 0;
    for &b in &base {
        communities.push(shuffled[cursor..cursor + b].to_vec());
        cursor += b;
    }

    // distribute the overlap slots (beyond one membership per node) across
    // communities proportionally to their spare capacity
    let spare: Vec<usize> = sizes
        .iter()
        .zip(&base)
        .map(|(&s, &b)| s as usize - b)
        .collect();
    let spare_total: usize = spare.iter().sum();
    let extra_total = (target_slots as usize).saturating_sub(members_count).min(spare_total);
    let mut extras = vec![0usize; sizes.len()];
    if spare_total > 0 && extra_total > 0 {
        let mut acc = 0.0;
        let mut given = 0usize;
        for i in 0..sizes.len() {
            acc += extra_total as f64 * spare[i] as f64 / spare_total as f64;
            let quota = (acc.round() as usize).saturating_sub(given).min(spare[i]);
            extras[i] = quota;
            given += quota;
        }
        // hand out any rounding leftover to communities with capacity
        let mut leftover = extra_total - given;
        for i in 0..sizes.len() {
            while leftover > 0 && extras[i] < spare[i] {
                extras[i] += 1;
                leftover -= 1;
            }
        }
    }
    let mut member_sets: Vec<HashSet<NodeId>> = communities
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    for i in 0..sizes.len() {
        let mut remaining = extras[i];
        let mut retries = 0;
        while remaining > 0 {
            let v = member_nodes[rng.random_range(0..members_count)];
            if member_sets[i].insert(v) {
                communities[i].push(v);
                remaining -= 1;
            } else {
                retries += 1;
                if retries > 50 * (extras[i] + 1) {
                    break; // community saturated against duplicates
                }
            }
        }
        communities[i].sort_unstable();
    }

    let truth = Cover::from_communities(n, &communities);

    // split each node's degree into community and background budgets
    let mut community_alloc: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n]; // (community, budget)
    let mut background_budget: Vec<u64> = vec![0; n];
    let community_weight: Vec<f64> = communities
        .iter()
        .map(|c| c.iter().map(|&v| degrees[v] as f64).sum())
        .collect();
    for v in 0..n {
        let d = degrees[v];
        let ms = truth.memberships_of(v);
        if ms.is_empty() {
            background_budget[v] = d;
            continue;
        }
        let dc = stochastic_round(d as f64 * (1.0 - config.xi), &mut rng).min(d);
        background_budget[v] = d - dc;
        // spread dc across memberships proportionally to community volume
        let w_total: f64 = ms.iter().map(|&c| community_weight[c]).sum();
        let mut given = 0u64;
        let mut acc = 0.0;
        for (idx, &c) in ms.iter().enumerate() {
            let share = if idx + 1 == ms.len() {
                dc - given
            } else {
                acc += dc as f64 * community_weight[c] / w_total;
                let q = (acc.round() as u64).saturating_sub(given).min(dc - given);
                q
            };
            given += share;
            if share > 0 {
                community_alloc[v].push((c, share));
            }
        }
    }

    // realize community subgraphs and the background by weighted pairing
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::new();
    for (c, comm) in communities.iter().enumerate() {
        let weights: Vec<(NodeId, u64)> = comm
            .iter()
            .filter_map(|&v| {
                community_alloc[v]
                    .iter()
                    .find(|&&(cc, _)| cc == c)
                    .map(|&(_, b)| (v, b))
            })
            .collect();
        pair_edges(&weights, &mut seen, &mut edges, &mut rng);
    }
    let bg: Vec<(NodeId, u64)> = (0..n)
        .filter(|&v| background_budget[v] > 0)
        .map(|v| (v, background_budget[v]))
        .collect();
    pair_edges(&bg, &mut seen, &mut edges, &mut rng);

    let graph = Graph::from_indexed_edges(n, &edges)?;
    let outliers: Vec<NodeId> = (members_count..n).collect();
    Ok(Generated {
        graph,
        truth,
        outliers,
    })
}

/// Degree-proportional random pairing: shuffle the stub multiset and pair
/// consecutive stubs, re-shuffling rejected self-loops and duplicates for a
/// bounded number of rounds.
fn pair_edges(
    weights: &[(NodeId, u64)],
    seen: &mut HashSet<(NodeId, NodeId)>,
    edges: &mut Vec<(NodeId, NodeId, f64)>,
    rng: &mut ChaCha8Rng,
) {
    use rand::seq::SliceRandom;
    let total: u64 = weights.iter().map(|&(_, w)| w).sum();
    if total < 2 || weights.len() < 2 {
        return;
    }
    let mut stubs: Vec<NodeId> = Vec::with_capacity(total as usize);
    for &(v, w) in weights {
        stubs.extend(std::iter::repeat(v).take(w as usize));
    }
    for _round in 0..20 {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut rejected = Vec::new();
        for pair in stubs.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                rejected.push(u);
                rejected.push(v);
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                edges.push((key.0, key.1, 1.0));
            } else {
                rejected.push(u);
                rejected.push(v);
            }
        }
        if rejected.len() == stubs.len() {
            break; // no progress; remaining stubs are unplaceable
        }
        stubs = rejected;
    }
}
