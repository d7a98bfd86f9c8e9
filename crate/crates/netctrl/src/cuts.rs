//! Vertex cutsets: <s,t> vertex cuts by unit-capacity max-flow on the
//! vertex-split digraph (Menger), follower-restricted minimal cutsets,
//! cut vertices, and an exhaustive-subset oracle for cross-checking.

use crate::error::{Error, Result};
use crate::graph::{sort_by_index, WeightedGraph};

pub const DEFAULT_ORACLE_BOUND: usize = 12;

/// Outcome of a minimum-cut query. `exists == false` means no finite vertex
/// cut separates the endpoints (adjacent endpoints, or every separating set
/// needs a forbidden node).
#[derive(Debug, Clone, PartialEq)]
pub struct CutReport {
    pub exists: bool,
    pub size: Option<usize>,
    pub witness: Vec<String>,
}

impl CutReport {
    fn none() -> Self {
        CutReport {
            exists: false,
            size: None,
            witness: Vec::new(),
        }
    }
}

fn validate_st<S: AsRef<str>>(
    g: &WeightedGraph,
    s: &str,
    t: &str,
    vset: &[S],
) -> Result<(usize, usize, Vec<usize>)> {
    let si = g.index_of(s)?;
    let ti = g.index_of(t)?;
    if si == ti {
        return Err(Error::SourceEqualsTarget);
    }
    let idx: Vec<usize> = vset
        .iter()
        .map(|v| g.index_of(v.as_ref()))
        .collect::<Result<_>>()?;
    for &i in &idx {
        if i == si || i == ti {
            return Err(Error::ForbiddenMembership(
                g.label(i).to_string(),
                "the <s,t> vertex set".to_string(),
            ));
        }
    }
    Ok((si, ti, idx))
}

/// True iff removing `vset` puts `s` and `t` in different components.
pub fn is_st_cutset<S: AsRef<str>>(
    g: &WeightedGraph,
    s: &str,
    t: &str,
    vset: &[S],
) -> Result<bool> {
    validate_st(g, s, t, vset)?;
    let h = g.remove_nodes(vset)?;
    let comps = h.connected_components();
    let find = |x: &str| comps.iter().position(|c| c.iter().any(|l| l == x));
    Ok(find(s) != find(t))
}

/// Minimum <s,t> vertex cut disjoint from `forbidden`, via unit-capacity
/// max-flow on the split digraph. Forbidden vertices get unbounded internal
/// capacity so no finite cut can use them.
pub fn min_st_vertex_cut<S: AsRef<str>>(
    g: &WeightedGraph,
    s: &str,
    t: &str,
    forbidden: &[S],
) -> Result<CutReport> {
    let (si, ti, forb) = validate_st(g, s, t, forbidden)?;
    if g.adjacent(si, ti) {
        return Ok(CutReport::none());
    }
    let n = g.node_count();
    let inf: i64 = (n as i64) + 2;
    // node i splits into in = 2i, out = 2i+1
    let m = 2 * n;
    let mut cap = vec![vec![0i64; m]; m];
    let mut forbidden_mask = vec![false; n];
    for &i in &forb {
        forbidden_mask[i] = true;
    }
    for i in 0..n {
        cap[2 * i][2 * i + 1] = if forbidden_mask[i] || i == si || i == ti {
            inf
        } else {
            1
        };
        for &(j, _) in g.neighbors(i) {
            cap[2 * i + 1][2 * j] = inf;
        }
    }
    let source = 2 * si + 1;
    let sink = 2 * ti;
    let mut flow = 0i64;
    loop {
        // BFS augmenting path (Edmonds-Karp)
        let mut prev = vec![usize::MAX; m];
        prev[source] = source;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for v in 0..m {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while v != source {
            bottleneck = bottleneck.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = sink;
        while v != source {
            cap[prev[v]][v] -= bottleneck;
            cap[v][prev[v]] += bottleneck;
            v = prev[v];
        }
        flow += bottleneck;
        if flow >= inf {
            return Ok(CutReport::none());
        }
    }
    // min cut = allowed vertices whose internal arc crosses the residual
    // reachability frontier
    let mut reach = vec![false; m];
    reach[source] = true;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for v in 0..m {
            if !reach[v] && cap[u][v] > 0 {
                reach[v] = true;
                queue.push_back(v);
            }
        }
    }
    let mut witness: Vec<String> = (0..n)
        .filter(|&i| reach[2 * i] && !reach[2 * i + 1])
        .map(|i| g.label(i).to_string())
        .collect();
    debug_assert_eq!(witness.len() as i64, flow);
    sort_by_index(g, &mut witness);
    Ok(CutReport {
        exists: true,
        size: Some(flow as usize),
        witness,
    })
}

/// Same contract as [`min_st_vertex_cut`], by enumerating candidate subsets
/// in increasing size. Test oracle; refuses graphs above `bound` nodes.
pub fn brute_force_min_cut<S: AsRef<str>>(
    g: &WeightedGraph,
    s: &str,
    t: &str,
    forbidden: &[S],
    bound: Option<usize>,
) -> Result<CutReport> {
    let bound = bound.unwrap_or(DEFAULT_ORACLE_BOUND);
    if g.node_count() > bound {
        return Err(Error::OracleBound {
            n: g.node_count(),
            bound,
        });
    }
    let (si, ti, forb) = validate_st(g, s, t, forbidden)?;
    if g.adjacent(si, ti) {
        return Ok(CutReport::none());
    }
    let allowed: Vec<usize> = (0..g.node_count())
        .filter(|&i| i != si && i != ti && !forb.contains(&i))
        .collect();
    for size in 0..=allowed.len() {
        for combo in combinations(&allowed, size) {
            let names: Vec<&str> = combo.iter().map(|&i| g.label(i)).collect();
            if is_st_cutset(g, s, t, &names)? {
                return Ok(CutReport {
                    exists: true,
                    size: Some(size),
                    witness: names.iter().map(|s| s.to_string()).collect(),
                });
            }
        }
    }
    Ok(CutReport::none())
}

/// Minimum follower-only cutset: smallest set avoiding the leader whose
/// removal increases p(G). Computed as the minimum over non-adjacent pairs
/// of the leader-forbidden <s,t> cut.
pub fn min_follower_cutset(g: &WeightedGraph, leader: &str) -> Result<CutReport> {
    if !g.is_connected() {
        return Err(Error::CutsetDisconnected);
    }
    let li = g.index_of(leader)?;
    let n = g.node_count();
    let mut best = CutReport::none();
    for s in 0..n {
        for t in s + 1..n {
            if g.adjacent(s, t) {
                continue;
            }
            let forbidden: Vec<&str> = if s == li || t == li {
                Vec::new()
            } else {
                vec![leader]
            };
            let report = min_st_vertex_cut(g, g.label(s), g.label(t), &forbidden)?;
            if report.exists && (!best.exists || report.size < best.size) {
                best = report;
            }
        }
    }
    Ok(best)
}

/// All cut vertices of `g` outside `excluding`: nodes whose removal
/// increases the component count.
pub fn cut_vertices<S: AsRef<str>>(g: &WeightedGraph, excluding: &[S]) -> Result<Vec<String>> {
    let excl: Vec<usize> = excluding
        .iter()
        .map(|s| g.index_of(s.as_ref()))
        .collect::<Result<_>>()?;
    let p = g.component_count();
    let mut out = Vec::new();
    for i in 0..g.node_count() {
        if excl.contains(&i) {
            continue;
        }
        if g.remove_nodes(&[g.label(i)])?.component_count() > p {
            out.push(g.label(i).to_string());
        }
    }
    Ok(out)
}

/// Index subsets of `items` of the given size, lexicographic by position.
pub(crate) fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::new(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v2", "v3", 1.0)]).unwrap()
    }

    fn cycle4() -> WeightedGraph {
        WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[
                ("v1", "v2", 1.0),
                ("v2", "v3", 1.0),
                ("v3", "v4", 1.0),
                ("v1", "v4", 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn st_cutset_on_path() {
        assert!(is_st_cutset(&path3(), "v1", "v3", &["v2"]).unwrap());
    }

    #[test]
    fn st_cutset_direct_edge_never_cut() {
        assert!(!is_st_cutset(&cycle4(), "v1", "v2", &["v3"]).unwrap());
        assert!(!is_st_cutset(&cycle4(), "v1", "v2", &["v3", "v4"]).unwrap());
    }

    #[test]
    fn st_cutset_cycle_needs_both() {
        assert!(!is_st_cutset(&cycle4(), "v1", "v3", &["v2"]).unwrap());
        assert!(is_st_cutset(&cycle4(), "v1", "v3", &["v2", "v4"]).unwrap());
    }

    #[test]
    fn st_cutset_rejects_s_equals_t() {
        assert!(matches!(
            is_st_cutset(&path3(), "v1", "v1", &[] as &[&str]),
            Err(Error::SourceEqualsTarget)
        ));
    }

    #[test]
    fn min_cut_path() {
        let r = min_st_vertex_cut(&path3(), "v1", "v3", &[] as &[&str]).unwrap();
        assert_eq!(r.size, Some(1));
        assert_eq!(r.witness, vec!["v2"]);
    }

    #[test]
    fn min_cut_cycle() {
        let r = min_st_vertex_cut(&cycle4(), "v1", "v3", &[] as &[&str]).unwrap();
        assert_eq!(r.size, Some(2));
        assert_eq!(r.witness, vec!["v2", "v4"]);
        // exhaustive check: no single vertex separates
        let b = brute_force_min_cut(&cycle4(), "v1", "v3", &[] as &[&str], None).unwrap();
        assert_eq!(b.size, Some(2));
    }

    #[test]
    fn min_cut_adjacent_nodes_impossible() {
        let k4 = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[
                ("v1", "v2", 1.0),
                ("v1", "v3", 1.0),
                ("v1", "v4", 1.0),
                ("v2", "v3", 1.0),
                ("v2", "v4", 1.0),
                ("v3", "v4", 1.0),
            ],
        )
        .unwrap();
        let r = min_st_vertex_cut(&k4, "v1", "v2", &[] as &[&str]).unwrap();
        assert!(!r.exists);
    }

    #[test]
    fn min_cut_all_forbidden() {
        let r = brute_force_min_cut(&path3(), "v1", "v3", &["v2"], None).unwrap();
        assert!(!r.exists);
        let f = min_st_vertex_cut(&path3(), "v1", "v3", &["v2"]).unwrap();
        assert!(!f.exists);
    }

    #[test]
    fn oracle_bound_enforced() {
        let labels: Vec<String> = (0..13).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String, f64)> = (0..12)
            .map(|i| (format!("v{i}"), format!("v{}", i + 1), 1.0))
            .collect();
        let g = WeightedGraph::new(&labels, &edges).unwrap();
        assert!(matches!(
            brute_force_min_cut(&g, "v0", "v12", &[] as &[&str], None),
            Err(Error::OracleBound { .. })
        ));
    }

    #[test]
    fn follower_cutset_star_has_none() {
        let star = WeightedGraph::new(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2", 1.0), ("v1", "v3", 1.0), ("v1", "v4", 1.0)],
        )
        .unwrap();
        assert!(!min_follower_cutset(&star, "v1").unwrap().exists);
    }

    #[test]
    fn follower_cutset_path() {
        let r = min_follower_cutset(&path3(), "v1").unwrap();
        assert_eq!(r.size, Some(1));
        assert_eq!(r.witness, vec!["v2"]);
    }

    #[test]
    fn follower_cutset_cycle() {
        let r = min_follower_cutset(&cycle4(), "v1").unwrap();
        assert_eq!(r.size, Some(2));
        assert_eq!(r.witness, vec!["v2", "v4"]);
    }

    #[test]
    fn follower_cutset_requires_connected() {
        let g = WeightedGraph::new(&["v1", "v2"], &[] as &[(&str, &str, f64)]).unwrap();
        assert!(matches!(
            min_follower_cutset(&g, "v1"),
            Err(Error::CutsetDisconnected)
        ));
    }

    #[test]
    fn cut_vertices_basics() {
        assert_eq!(cut_vertices(&path3(), &[] as &[&str]).unwrap(), vec!["v2"]);
        assert!(cut_vertices(&cycle4(), &[] as &[&str]).unwrap().is_empty());
        assert!(cut_vertices(&path3(), &["v2"]).unwrap().is_empty());
    }
}
