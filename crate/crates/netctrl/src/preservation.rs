//! Preserving partial controllability of an important node set under agent
//! loss: structural checks on the removal graph, minimal breaking sets via
//! the compressed graph, the fixed-weight numeric check, and boundary-weight
//! synthesis.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cuts::{min_st_vertex_cut, CutReport};
use crate::error::{Error, Result};
use crate::graph::edge_key;
use crate::groups::{check_group_rows, GroupVerdict};
use crate::system::MasSystem;

pub const HALVING_CAP: usize = 60;

#[derive(Debug, Clone)]
pub struct PreservationVerdict {
    pub important: Vec<String>,
    pub removed: Vec<String>,
    pub structurally_preserved: bool,
    /// Members of the important set separated from the leader.
    pub violated_targets: Vec<String>,
    pub min_break_size: Option<usize>,
    pub min_break_witness: Vec<String>,
}

fn validate_sets(
    sys: &MasSystem,
    vq: &[impl AsRef<str>],
    vprime: &[impl AsRef<str>],
) -> Result<(Vec<String>, Vec<String>)> {
    let g = sys.graph();
    let mut important: Vec<String> = Vec::new();
    for s in vq {
        let s = s.as_ref();
        g.index_of(s)?;
        if s == sys.leader() {
            return Err(Error::ForbiddenMembership(
                s.to_string(),
                "the important set".to_string(),
            ));
        }
        important.push(s.to_string());
    }
    let mut removed: Vec<String> = Vec::new();
    for s in vprime {
        let s = s.as_ref();
        g.index_of(s)?;
        if s == sys.leader() {
            return Err(Error::LeaderRemoved);
        }
        if important.iter().any(|i| i == s) {
            return Err(Error::ForbiddenMembership(
                s.to_string(),
                "both the important and the removed set".to_string(),
            ));
        }
        removed.push(s.to_string());
    }
    Ok((important, removed))
}

/// Structural preservation: every important node stays in the leader's
/// component of G - V'. This is the existence-over-weights criterion; see
/// [`check_preservation_numeric`] for the fixed-weight truth.
pub fn check_preservation_structural(
    sys: &MasSystem,
    vq: &[impl AsRef<str>],
    vprime: &[impl AsRef<str>],
) -> Result<PreservationVerdict> {
    let (important, removed) = validate_sets(sys, vq, vprime)?;
    let h = sys.graph().remove_nodes(&removed)?;
    let comps = h.connected_components();
    let leader_comp = comps
        .iter()
        .find(|c| c.iter().any(|l| l == sys.leader()))
        .cloned()
        .unwrap_or_default();
    let violated: Vec<String> = important
        .iter()
        .filter(|v| !leader_comp.contains(v))
        .cloned()
        .collect();
    let brk = min_breaking_set(sys, vq)?;
    Ok(PreservationVerdict {
        structurally_preserved: violated.is_empty(),
        violated_targets: violated,
        important,
        removed,
        min_break_size: brk.size,
        min_break_witness: brk.witness,
    })
}

/// Smallest removal set that structurally breaks the important set:
/// component-wise compression of the set, then a minimum leader-to-q vertex
/// cut per compressed node. Other compressed nodes are forbidden in the
/// cut since important nodes may not be removed.
pub fn min_breaking_set(sys: &MasSystem, vq: &[impl AsRef<str>]) -> Result<CutReport> {
    let (important, _) = validate_sets(sys, vq, &[] as &[&str])?;
    let (cg, qs) = sys.graph().compress_components(&important)?;
    let mut best = CutReport {
        exists: false,
        size: None,
        witness: Vec::new(),
    };
    for target in &qs {
        let forbidden: Vec<&String> = qs.iter().filter(|q| *q != target).collect();
        let report = min_st_vertex_cut(&cg, sys.leader(), target, &forbidden)?;
        if report.exists && (!best.exists || report.size < best.size) {
            best = report;
        }
    }
    Ok(best)
}

/// Fixed-weight preservation: rebuild the removal subsystem and test the
/// important set's rows there. Structural preservation is necessary but not
/// sufficient for this to hold at fixed weights.
pub fn check_preservation_numeric(
    sys: &MasSystem,
    vq: &[impl AsRef<str>],
    vprime: &[impl AsRef<str>],
    tol: Option<f64>,
) -> Result<GroupVerdict> {
    let (important, removed) = validate_sets(sys, vq, vprime)?;
    let sub = sys.subsystem_after_removal(&removed)?;
    check_group_rows(&sub, &important, tol)
}

/// Realize the existence claim behind the structural criterion: keep the
/// weights of edges entirely outside the important set fixed, re-randomize
/// the intra-set and boundary weights, and jointly shrink the boundary until
/// the numeric check passes for every scenario (and for the empty removal).
/// Boundary weights are re-randomized rather than merely scaled so that
/// weight symmetries in the input cannot survive the shrinking.
pub fn synthesize_preserving_weights(
    sys: &MasSystem,
    vq: &[impl AsRef<str>],
    scenarios: &[Vec<String>],
    seed: u64,
    tol: Option<f64>,
) -> Result<BTreeMap<(String, String), f64>> {
    let (important, _) = validate_sets(sys, vq, &[] as &[&str])?;
    let mut all_scenarios: Vec<Vec<String>> = vec![Vec::new()];
    all_scenarios.extend(scenarios.iter().cloned());
    for scenario in scenarios {
        let verdict = check_preservation_structural(sys, &important, scenario)?;
        if !verdict.structurally_preserved {
            return Err(Error::ScenarioNotStructural(scenario.clone()));
        }
    }
    let in_vq = |l: &str| important.iter().any(|v| v == l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = sys.graph().weight_map();
    let mut boundary: Vec<((String, String), f64)> = Vec::new();
    for (u, v, _) in sys.graph().edge_list() {
        let key = edge_key(&u, &v);
        match (in_vq(&u), in_vq(&v)) {
            (true, true) => {
                weights.insert(key, rng.random_range(0.5..1.5));
            }
            (true, false) | (false, true) => {
                let base = rng.random_range(0.5..1.5);
                boundary.push((key, base));
            }
            (false, false) => {}
        }
    }
    let mut scale = 1.0;
    let mut failing = Vec::new();
    for _ in 0..=HALVING_CAP {
        for (key, base) in &boundary {
            weights.insert(key.clone(), base * scale);
        }
        let candidate = MasSystem::new(sys.graph().with_weights(&weights)?, sys.leader())?;
        let mut ok = true;
        for scenario in &all_scenarios {
            let verdict = check_preservation_numeric(&candidate, &important, scenario, tol)?;
            if !verdict.partially_controllable {
                ok = false;
                failing = scenario.clone();
                break;
            }
        }
        if ok {
            return Ok(weights);
        }
        scale /= 2.0;
    }
    Err(Error::PreservationCap(failing))
}
