//! Partial controllability of node groups: the row-rank criterion on the
//! controllability matrix, the Grammian principal-minor criterion, and
//! maximal controllable node groups.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{grammian, numerical_rank, RankResult};
use crate::system::MasSystem;

pub const DEFAULT_HORIZON: (f64, f64) = (0.0, 1.0);
pub const DEFAULT_ENUMERATION_BOUND: usize = 5000;

/// Verdict on one node group. Only the fields of the criterion actually
/// evaluated are populated.
#[derive(Debug, Clone)]
pub struct GroupVerdict {
    pub group: Vec<String>,
    pub partially_controllable: bool,
    pub row_rank: Option<RankResult>,
    pub grammian_min_singular: Option<f64>,
    pub horizon: Option<(f64, f64)>,
}

fn group_indices(sys: &MasSystem, group: &[impl AsRef<str>]) -> Result<Vec<usize>> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut idx: Vec<usize> = group
        .iter()
        .map(|s| sys.graph().index_of(s.as_ref()))
        .collect::<Result<_>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

fn select_rows(m: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)])
}

fn select_principal(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

fn labels_of(sys: &MasSystem, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| sys.graph().label(i).to_string()).collect()
}

/// Row-rank criterion: the group is partially controllable iff its rows of
/// the controllability matrix are linearly independent.
pub fn check_group_rows(
    sys: &MasSystem,
    group: &[impl AsRef<str>],
    tol: Option<f64>,
) -> Result<GroupVerdict> {
    let idx = group_indices(sys, group)?;
    let q = sys.controllability_matrix().q;
    let rank = numerical_rank(&select_rows(&q, &idx), tol);
    Ok(GroupVerdict {
        group: labels_of(sys, &idx),
        partially_controllable: rank.rank == idx.len(),
        row_rank: Some(rank),
        grammian_min_singular: None,
        horizon: None,
    })
}

/// Grammian criterion: the group is partially controllable iff the
/// group-indexed principal minor of W_c(t0, t1) is invertible.
pub fn check_group_grammian(
    sys: &MasSystem,
    group: &[impl AsRef<str>],
    t0: f64,
    t1: f64,
    tol: Option<f64>,
) -> Result<GroupVerdict> {
    let idx = group_indices(sys, group)?;
    let w = grammian(&sys.laplacian(), &sys.input_vector(), t0, t1)?;
    let minor = select_principal(&w, &idx);
    let rank = numerical_rank(&minor, tol);
    let min_sv = rank.singular_values.last().copied().unwrap_or(0.0);
    Ok(GroupVerdict {
        group: labels_of(sys, &idx),
        partially_controllable: rank.rank == idx.len(),
        row_rank: None,
        grammian_min_singular: Some(min_sv),
        horizon: Some((t0, t1)),
    })
}

/// Grow a maximal controllable node group greedily in node-index order from
/// `must_include`. All maximal groups share size rank(Q), so greediness
/// loses no size.
pub fn maximal_group(
    sys: &MasSystem,
    must_include: &[impl AsRef<str>],
    tol: Option<f64>,
) -> Result<Vec<String>> {
    let mut idx: Vec<usize> = must_include
        .iter()
        .map(|s| sys.graph().index_of(s.as_ref()))
        .collect::<Result<_>>()?;
    idx.sort_unstable();
    idx.dedup();
    let q = sys.controllability_matrix().q;
    if !idx.is_empty() && numerical_rank(&select_rows(&q, &idx), tol).rank != idx.len() {
        return Err(Error::SeedNotControllable);
    }
    for cand in 0..sys.node_count() {
        if idx.contains(&cand) {
            continue;
        }
        let mut trial = idx.clone();
        trial.push(cand);
        trial.sort_unstable();
        if numerical_rank(&select_rows(&q, &trial), tol).rank == trial.len() {
            idx = trial;
        }
    }
    Ok(labels_of(sys, &idx))
}

/// Every maximal controllable node group, by enumerating all subsets of
/// size rank(Q) and keeping those with independent rows.
pub fn all_maximal_groups(
    sys: &MasSystem,
    tol: Option<f64>,
    bound: Option<usize>,
) -> Result<Vec<Vec<String>>> {
    let bound = bound.unwrap_or(DEFAULT_ENUMERATION_BOUND);
    let q = sys.controllability_matrix().q;
    let r = numerical_rank(&q, tol).rank;
    let n = sys.node_count();
    let count = binomial(n, r);
    if count > bound {
        return Err(Error::EnumerationBound { count, bound });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for combo in crate::cuts::combinations(&all, r) {
        if numerical_rank(&select_rows(&q, &combo), tol).rank == r {
            out.push(labels_of(sys, &combo));
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn system(nodes: &[&str], edges: &[(&str, &str, f64)], leader: &str) -> MasSystem {
        MasSystem::new(WeightedGraph::new(nodes, edges).unwrap(), leader).unwrap()
    }

    fn equal_star() -> MasSystem {
        system(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v1", "v3", 1.0)], "v1")
    }

    #[test]
    fn leader_singleton_always_controllable() {
        for sys in [equal_star(), system(&["v1"], &[], "v1")] {
            assert!(check_group_rows(&sys, &["v1"], None)
                .unwrap()
                .partially_controllable);
        }
    }

    #[test]
    fn equal_star_follower_pair_rows_dependent() {
        let v = check_group_rows(&equal_star(), &["v2", "v3"], None).unwrap();
        assert!(!v.partially_controllable);
        assert_eq!(v.row_rank.unwrap().rank, 1);
    }

    #[test]
    fn equal_star_leader_follower_pair_independent() {
        let v = check_group_rows(&equal_star(), &["v1", "v2"], None).unwrap();
        assert!(v.partially_controllable);
    }

    #[test]
    fn empty_group_rejected() {
        assert!(matches!(
            check_group_rows(&equal_star(), &[] as &[&str], None),
            Err(Error::EmptyGroup)
        ));
    }

    #[test]
    fn grammian_scalar_system() {
        let sys = system(&["v1"], &[], "v1");
        let v = check_group_grammian(&sys, &["v1"], 0.0, 1.0, None).unwrap();
        assert!(v.partially_controllable);
        assert!((v.grammian_min_singular.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grammian_equal_star_pair_singular() {
        let v = check_group_grammian(&equal_star(), &["v2", "v3"], 0.0, 1.0, None).unwrap();
        assert!(!v.partially_controllable);
    }

    #[test]
    fn grammian_controllable_pair() {
        let sys = system(&["v1", "v2"], &[("v1", "v2", 1.0)], "v1");
        let v = check_group_grammian(&sys, &["v1", "v2"], 0.0, 1.0, None).unwrap();
        assert!(v.partially_controllable);
    }

    #[test]
    fn maximal_group_of_controllable_system_is_everything() {
        let sys = system(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v2", "v3", 1.0)], "v1");
        assert_eq!(maximal_group(&sys, &[] as &[&str], None).unwrap(), vec!["v1", "v2", "v3"]);
    }

    #[test]
    fn maximal_group_equal_star_greedy() {
        assert_eq!(
            maximal_group(&equal_star(), &[] as &[&str], None).unwrap(),
            vec!["v1", "v2"]
        );
        assert_eq!(
            maximal_group(&equal_star(), &["v3"], None).unwrap(),
            vec!["v1", "v3"]
        );
    }

    #[test]
    fn maximal_group_rejects_dependent_seed() {
        assert!(matches!(
            maximal_group(&equal_star(), &["v2", "v3"], None),
            Err(Error::SeedNotControllable)
        ));
    }

    #[test]
    fn all_maximal_groups_equal_star() {
        let groups = all_maximal_groups(&equal_star(), None, None).unwrap();
        assert_eq!(groups, vec![vec!["v1", "v2"], vec!["v1", "v3"]]);
    }

    #[test]
    fn all_maximal_groups_controllable_system() {
        let sys = system(&["v1", "v2"], &[("v1", "v2", 1.0)], "v1");
        assert_eq!(all_maximal_groups(&sys, None, None).unwrap(), vec![vec!["v1", "v2"]]);
    }

    #[test]
    fn disconnected_follower_never_in_a_group() {
        let sys = system(&["v1", "v2", "v3"], &[("v1", "v2", 1.0)], "v1");
        for g in all_maximal_groups(&sys, None, None).unwrap() {
            assert!(!g.contains(&"v3".to_string()));
        }
    }

    #[test]
    fn enumeration_bound_enforced() {
        // equal-weight star: rank 2, so C(3, 2) = 3 candidate groups
        assert!(matches!(
            all_maximal_groups(&equal_star(), None, Some(2)),
            Err(Error::EnumerationBound { .. })
        ));
    }
}
