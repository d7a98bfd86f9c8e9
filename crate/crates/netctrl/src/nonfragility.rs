//! Non-fragility of controllability under follower loss: brute-force
//! classification over all removal subsets, graphic classification via the
//! minimal follower cutset, the D1 necessary condition, and constructive
//! synthesis of strongly non-fragile weights.

use std::collections::BTreeMap;

use crate::cuts::{combinations, min_follower_cutset};
use crate::error::{Error, Result};
use crate::graph::{edge_key, WeightedGraph};
use crate::system::MasSystem;

pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 14;
pub const DEFAULT_SYNTHESIS_BOUND: usize = 12;
pub const HALVING_CAP: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Strongly non-fragile: every follower removal keeps controllability.
    Snf,
    /// k-weakly non-fragile for the given k >= 1.
    KWnf(usize),
    /// Not even 1-node non-fragile (0-WNF).
    Fragile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Fixed-weight verdict from exhaustive removal enumeration.
    BruteForce,
    /// Best k achievable over weight choices, from the cutset criterion.
    Graphic,
}

#[derive(Debug, Clone)]
pub struct FragilityReport {
    pub classification: Classification,
    /// k = n-1 encodes SNF, k = 0 encodes Fragile.
    pub k: usize,
    /// Smallest removal breaking controllability; empty for SNF.
    pub breaking_set: Vec<String>,
    /// min follower cutset size - 1; None = unbounded (no follower cutset).
    pub graphic_k: Option<usize>,
    pub method: Method,
    /// Brute force only: p-nodes-NF verdict for each p = 1..n-1.
    pub per_p: Vec<bool>,
    /// Graphic SNF case only: whether the leader-relative length is 1.
    pub length_one: Option<bool>,
}

fn classify_k(k: usize, n: usize) -> Classification {
    if n == 0 || k == n - 1 {
        Classification::Snf
    } else if k == 0 {
        Classification::Fragile
    } else {
        Classification::KWnf(k)
    }
}

/// Is every removal of exactly `p` followers survivable? Returns the first
/// (lexicographic by node index) breaking removal when not.
pub fn is_p_nodes_nf(
    sys: &MasSystem,
    p: usize,
    tol: Option<f64>,
) -> Result<(bool, Vec<String>)> {
    let n = sys.node_count();
    if !sys.is_controllable(tol) {
        return Err(Error::UncontrollableInput);
    }
    if p == 0 || p > n - 1 {
        return Err(Error::BadRemovalCount { p, max: n - 1 });
    }
    if n > DEFAULT_BRUTE_FORCE_BOUND {
        return Err(Error::BruteForceBound {
            n,
            bound: DEFAULT_BRUTE_FORCE_BOUND,
        });
    }
    let followers: Vec<usize> = (0..n).filter(|&i| i != sys.leader_index()).collect();
    for combo in combinations(&followers, p) {
        let names: Vec<String> = combo
            .iter()
            .map(|&i| sys.graph().label(i).to_string())
            .collect();
        let sub = sys.subsystem_after_removal(&names)?;
        if sub.controllability_rank(tol).rank < n - p {
            return Ok((false, names));
        }
    }
    Ok((true, Vec::new()))
}

/// Exhaustive fixed-weight classification per the p-nodes-NF ladder.
pub fn classify_brute_force(sys: &MasSystem, tol: Option<f64>) -> Result<FragilityReport> {
    let n = sys.node_count();
    let mut per_p = Vec::with_capacity(n.saturating_sub(1));
    let mut witnesses = Vec::with_capacity(n.saturating_sub(1));
    for p in 1..n {
        let (ok, witness) = is_p_nodes_nf(sys, p, tol)?;
        per_p.push(ok);
        witnesses.push(witness);
    }
    // k = longest all-true prefix; the breaking set is the first failure at
    // p = k+1
    let k = per_p.iter().take_while(|&&ok| ok).count();
    let breaking_set = if k < per_p.len() {
        witnesses[k].clone()
    } else {
        Vec::new()
    };
    Ok(FragilityReport {
        classification: classify_k(k, n),
        k,
        breaking_set,
        graphic_k: None,
        method: Method::BruteForce,
        per_p,
        length_one: None,
    })
}

/// Graphic classification: the best k achievable over edge-weight choices,
/// decided by the minimal follower cutset. This is an existence-over-weights
/// statement, not a verdict on the given weights.
pub fn classify_graphic(g: &WeightedGraph, leader: &str) -> Result<FragilityReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    g.index_of(leader)?;
    let n = g.node_count();
    let cut = min_follower_cutset(g, leader)?;
    if !cut.exists {
        let length_one = g.distance_partition(leader)?.length <= 1;
        return Ok(FragilityReport {
            classification: Classification::Snf,
            k: n.saturating_sub(1),
            breaking_set: Vec::new(),
            graphic_k: None,
            method: Method::Graphic,
            per_p: Vec::new(),
            length_one: Some(length_one),
        });
    }
    let graphic_k = cut.size.unwrap() - 1;
    Ok(FragilityReport {
        classification: classify_k(graphic_k, n),
        k: graphic_k,
        breaking_set: cut.witness,
        graphic_k: Some(graphic_k),
        method: Method::Graphic,
        per_p: Vec::new(),
        length_one: None,
    })
}

/// Necessary condition for k-WNF: the first BFS layer from the leader must
/// hold at least k+1 followers.
pub fn check_d1_necessary(g: &WeightedGraph, leader: &str, k: usize) -> Result<bool> {
    let dp = g.distance_partition(leader)?;
    let d1 = dp.layers.get(1).map(|l| l.len()).unwrap_or(0);
    Ok(d1 >= k + 1)
}

/// Construct weights making the system strongly non-fragile: distinct
/// integer weights on the leader edges, follower edges jointly halved from 1
/// until every follower-subset removal leaves a controllable subsystem.
/// Returns the weight map and the final common follower-edge bound M.
pub fn synthesize_snf_weights(
    g: &WeightedGraph,
    leader: &str,
    tol: Option<f64>,
) -> Result<(BTreeMap<(String, String), f64>, f64)> {
    let li = g.index_of(leader)?;
    if g.distance_partition(leader)?.length != 1 && g.node_count() > 1 {
        return Err(Error::LengthNotOne);
    }
    if g.node_count() > DEFAULT_SYNTHESIS_BOUND {
        return Err(Error::BruteForceBound {
            n: g.node_count(),
            bound: DEFAULT_SYNTHESIS_BOUND,
        });
    }
    let mut weights = BTreeMap::new();
    let mut leader_weight = 0.0;
    for &(j, _) in g.neighbors(li) {
        leader_weight += 1.0;
        weights.insert(edge_key(leader, g.label(j)), leader_weight);
    }
    let follower_edges: Vec<(String, String)> = g
        .edge_list()
        .into_iter()
        .filter(|(u, v, _)| u != leader && v != leader)
        .map(|(u, v, _)| edge_key(&u, &v))
        .collect();
    let mut m = 1.0;
    let mut last_failure = Vec::new();
    for _ in 0..=HALVING_CAP {
        for key in &follower_edges {
            weights.insert(key.clone(), m);
        }
        let candidate = MasSystem::new(g.with_weights(&weights)?, leader)?;
        match first_breaking_subset(&candidate, tol)? {
            None => return Ok((weights, m)),
            Some(subset) => {
                if follower_edges.is_empty() {
                    // nothing to shrink; distinct leader weights were not enough
                    return Err(Error::SynthesisCap(subset));
                }
                last_failure = subset;
                m /= 2.0;
            }
        }
    }
    Err(Error::SynthesisCap(last_failure))
}

/// First follower subset (including the empty one) whose removal leaves an
/// uncontrollable subsystem, or None when the system is SNF.
fn first_breaking_subset(sys: &MasSystem, tol: Option<f64>) -> Result<Option<Vec<String>>> {
    let n = sys.node_count();
    let followers: Vec<usize> = (0..n).filter(|&i| i != sys.leader_index()).collect();
    for p in 0..followers.len() + 1 {
        for combo in combinations(&followers, p) {
            let names: Vec<String> = combo
                .iter()
                .map(|&i| sys.graph().label(i).to_string())
                .collect();
            let sub = sys.subsystem_after_removal(&names)?;
            if sub.controllability_rank(tol).rank < n - p {
                return Ok(Some(names));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(nodes: &[&str], edges: &[(&str, &str, f64)], leader: &str) -> MasSystem {
        MasSystem::new(WeightedGraph::new(nodes, edges).unwrap(), leader).unwrap()
    }

    fn path3() -> MasSystem {
        system(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v2", "v3", 1.0)], "v1")
    }

    fn distinct_star() -> MasSystem {
        system(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v1", "v3", 2.0)], "v1")
    }

    #[test]
    fn two_node_system_is_1nf() {
        let sys = system(&["v1", "v2"], &[("v1", "v2", 1.0)], "v1");
        let (ok, witness) = is_p_nodes_nf(&sys, 1, None).unwrap();
        assert!(ok);
        assert!(witness.is_empty());
    }

    #[test]
    fn path3_fails_at_p1() {
        let (ok, witness) = is_p_nodes_nf(&path3(), 1, None).unwrap();
        assert!(!ok);
        assert_eq!(witness, vec!["v2"]);
    }

    #[test]
    fn distinct_star_is_1nf() {
        let (ok, _) = is_p_nodes_nf(&distinct_star(), 1, None).unwrap();
        assert!(ok);
    }

    #[test]
    fn p_out_of_range_rejected() {
        assert!(matches!(
            is_p_nodes_nf(&path3(), 3, None),
            Err(Error::BadRemovalCount { .. })
        ));
        assert!(matches!(
            is_p_nodes_nf(&path3(), 0, None),
            Err(Error::BadRemovalCount { .. })
        ));
    }

    #[test]
    fn uncontrollable_input_rejected() {
        let sys = system(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v1", "v3", 1.0)], "v1");
        assert!(matches!(
            is_p_nodes_nf(&sys, 1, None),
            Err(Error::UncontrollableInput)
        ));
    }

    #[test]
    fn brute_force_distinct_star_is_snf() {
        let r = classify_brute_force(&distinct_star(), None).unwrap();
        assert_eq!(r.classification, Classification::Snf);
        assert_eq!(r.k, 2);
        assert!(r.breaking_set.is_empty());
        assert_eq!(r.per_p, vec![true, true]);
    }

    #[test]
    fn brute_force_path3_is_fragile() {
        let r = classify_brute_force(&path3(), None).unwrap();
        assert_eq!(r.classification, Classification::Fragile);
        assert_eq!(r.k, 0);
        assert_eq!(r.breaking_set, vec!["v2"]);
    }

    #[test]
    fn graphic_star_is_snf_capable() {
        let g = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2", 1.0), ("v1", "v3", 1.0), ("v1", "v4", 1.0)],
        )
        .unwrap();
        let r = classify_graphic(&g, "v1").unwrap();
        assert_eq!(r.classification, Classification::Snf);
        assert_eq!(r.graphic_k, None);
        assert_eq!(r.length_one, Some(true));
    }

    #[test]
    fn graphic_path_is_fragile_for_all_weights() {
        let r = classify_graphic(path3().graph(), "v1").unwrap();
        assert_eq!(r.classification, Classification::Fragile);
        assert_eq!(r.graphic_k, Some(0));
    }

    #[test]
    fn graphic_cycle4_is_1wnf() {
        let g = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[
                ("v1", "v2", 1.0),
                ("v2", "v3", 1.0),
                ("v3", "v4", 1.0),
                ("v1", "v4", 1.0),
            ],
        )
        .unwrap();
        let r = classify_graphic(&g, "v1").unwrap();
        assert_eq!(r.classification, Classification::KWnf(1));
        assert_eq!(r.graphic_k, Some(1));
    }

    #[test]
    fn d1_counts() {
        let star = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2", 1.0), ("v1", "v3", 1.0), ("v1", "v4", 1.0)],
        )
        .unwrap();
        assert!(check_d1_necessary(&star, "v1", 2).unwrap());
        assert!(check_d1_necessary(path3().graph(), "v1", 0).unwrap());
        let cycle = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[
                ("v1", "v2", 1.0),
                ("v2", "v3", 1.0),
                ("v3", "v4", 1.0),
                ("v1", "v4", 1.0),
            ],
        )
        .unwrap();
        assert!(!check_d1_necessary(&cycle, "v1", 2).unwrap());
    }

    #[test]
    fn synthesize_star_weights() {
        let g = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2", 1.0), ("v1", "v3", 1.0), ("v1", "v4", 1.0)],
        )
        .unwrap();
        let (weights, _m) = synthesize_snf_weights(&g, "v1", None).unwrap();
        let vals: Vec<f64> = weights.values().copied().collect();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        let sys = MasSystem::new(g.with_weights(&weights).unwrap(), "v1").unwrap();
        assert_eq!(
            classify_brute_force(&sys, None).unwrap().classification,
            Classification::Snf
        );
    }

    #[test]
    fn synthesize_triangle() {
        let g = WeightedGraph::new(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v1", "v3", 1.0), ("v2", "v3", 1.0)],
        )
        .unwrap();
        let (weights, m) = synthesize_snf_weights(&g, "v1", None).unwrap();
        assert!(m > 0.0);
        let sys = MasSystem::new(g.with_weights(&weights).unwrap(), "v1").unwrap();
        assert_eq!(
            classify_brute_force(&sys, None).unwrap().classification,
            Classification::Snf
        );
    }

    #[test]
    fn synthesize_rejects_long_graphs() {
        assert!(matches!(
            synthesize_snf_weights(path3().graph(), "v1", None),
            Err(Error::LengthNotOne)
        ));
    }
}
