//! Weighted undirected graphs and the structural operations used by the
//! controllability analyses: components, node removal, induced subgraphs,
//! distance partitions and graph compression.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Undirected graph with strictly positive edge weights. Nodes are identified
/// by label; internal indices are dense and follow construction order.
/// Values are immutable after construction; every operation returns a new graph.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // canonical u < v
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
}

/// BFS layers D_0..D_l from a root; `length` is the index of the last
/// nonempty layer.
#[derive(Debug, Clone, PartialEq)]
pub struct DistancePartition {
    pub layers: Vec<Vec<String>>,
    pub length: usize,
}

impl WeightedGraph {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(
        nodes: &[S],
        edges: &[(T, T, f64)],
    ) -> Result<Self> {
        let labels: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateNode(l.clone()));
            }
        }
        let mut g = WeightedGraph {
            adj: vec![Vec::new(); labels.len()],
            edges: Vec::with_capacity(edges.len()),
            labels,
            index,
        };
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        for (u, v, w) in edges {
            let (u, v, w) = (u.as_ref(), v.as_ref(), *w);
            let ui = g.index_of(u)?;
            let vi = g.index_of(v)?;
            if ui == vi {
                return Err(Error::SelfLoop(u.to_string()));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight {
                    u: u.to_string(),
                    v: v.to_string(),
                    w,
                });
            }
            let key = (ui.min(vi), ui.max(vi));
            if seen.insert(key, ()).is_some() {
                return Err(Error::DuplicateEdge(u.to_string(), v.to_string()));
            }
            g.edges.push((key.0, key.1, w));
            g.adj[ui].push((vi, w));
            g.adj[vi].push((ui, w));
        }
        for a in &mut g.adj {
            a.sort_by_key(|&(j, _)| j);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn weight_between(&self, i: usize, j: usize) -> Option<f64> {
        self.adj[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .ok()
            .map(|p| self.adj[i][p].1)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.weight_between(i, j).is_some()
    }

    /// Edges as label triples in canonical (lower index first) order.
    pub fn edge_list(&self) -> Vec<(String, String, f64)> {
        self.edges
            .iter()
            .map(|&(u, v, w)| (self.labels[u].clone(), self.labels[v].clone(), w))
            .collect()
    }

    /// Same topology, weights replaced from a label-keyed map. Every edge of
    /// the graph must appear in the map.
    pub fn with_weights(&self, weights: &BTreeMap<(String, String), f64>) -> Result<Self> {
        let edges: Vec<(String, String, f64)> = self
            .edges
            .iter()
            .map(|&(u, v, _)| {
                let key = edge_key(&self.labels[u], &self.labels[v]);
                let w = weights
                    .get(&key)
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("missing weight for edge {key:?}")))?;
                Ok((key.0, key.1, w))
            })
            .collect::<Result<_>>()?;
        WeightedGraph::new(&self.labels, &edges)
    }

    pub fn weight_map(&self) -> BTreeMap<(String, String), f64> {
        self.edges
            .iter()
            .map(|&(u, v, w)| (edge_key(&self.labels[u], &self.labels[v]), w))
            .collect()
    }

    fn resolve<S: AsRef<str>>(&self, set: &[S]) -> Result<Vec<usize>> {
        set.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    /// Connected components as label sets, each sorted by internal index,
    /// components ordered by smallest contained index. p(G) = result length.
    pub fn connected_components(&self) -> Vec<Vec<String>> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<String>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            comp[start] = id;
            while let Some(i) = queue.pop_front() {
                members.push(self.labels[i].clone());
                for &(j, _) in &self.adj[i] {
                    if comp[j] == usize::MAX {
                        comp[j] = id;
                        queue.push_back(j);
                    }
                }
            }
            members.sort_by_key(|l| self.index[l]);
            out.push(members);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// G - V': drop the given nodes and every edge touching them.
    pub fn remove_nodes<S: AsRef<str>>(&self, removed: &[S]) -> Result<WeightedGraph> {
        let idx = self.resolve(removed)?;
        let mut keep = vec![true; self.node_count()];
        for i in idx {
            keep[i] = false;
        }
        let nodes: Vec<&String> = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| keep[i])
            .map(|(_, l)| l)
            .collect();
        let edges: Vec<(&String, &String, f64)> = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| keep[u] && keep[v])
            .map(|&(u, v, w)| (&self.labels[u], &self.labels[v], w))
            .collect();
        WeightedGraph::new(&nodes, &edges)
    }

    /// Induced subgraph on `keep`, preserving node identity.
    pub fn induced_subgraph<S: AsRef<str>>(&self, keep: &[S]) -> Result<WeightedGraph> {
        let idx = self.resolve(keep)?;
        let mut keep_mask = vec![false; self.node_count()];
        for i in idx {
            keep_mask[i] = true;
        }
        let removed: Vec<&String> = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| !keep_mask[i])
            .map(|(_, l)| l)
            .collect();
        self.remove_nodes(&removed)
    }

    /// BFS distance partition relative to `root`. Errors on disconnected input.
    pub fn distance_partition(&self, root: &str) -> Result<DistancePartition> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let r = self.index_of(root)?;
        let n = self.node_count();
        let mut dist = vec![usize::MAX; n];
        dist[r] = 0;
        let mut queue = VecDeque::from([r]);
        let mut max_d = 0;
        while let Some(i) = queue.pop_front() {
            for &(j, _) in &self.adj[i] {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    max_d = max_d.max(dist[j]);
                    queue.push_back(j);
                }
            }
        }
        let mut layers = vec![Vec::new(); max_d + 1];
        for i in 0..n {
            layers[dist[i]].push(self.labels[i].clone());
        }
        Ok(DistancePartition {
            length: max_d,
            layers,
        })
    }

    /// Compress a connected node set into a single fresh node that inherits
    /// the set's outside adjacency. Compressed-graph weights are all 1: the
    /// compressed graph is only ever used for connectivity reasoning.
    pub fn compress<S: AsRef<str>>(&self, vq: &[S]) -> Result<(WeightedGraph, String)> {
        if vq.is_empty() {
            return Err(Error::EmptyCompressionSet);
        }
        if !self.induced_subgraph(vq)?.is_connected() {
            return Err(Error::CompressionSetDisconnected);
        }
        let (g, mut names) = self.compress_disjoint(&[vq])?;
        Ok((g, names.pop().unwrap()))
    }

    /// Split `vq` into the connected components of its induced subgraph and
    /// compress each component inside one shared graph. Returns the graph and
    /// the compressed node labels, ordered by smallest member index.
    pub fn compress_components<S: AsRef<str>>(
        &self,
        vq: &[S],
    ) -> Result<(WeightedGraph, Vec<String>)> {
        if vq.is_empty() {
            return Err(Error::EmptyCompressionSet);
        }
        let comps = self.induced_subgraph(vq)?.connected_components();
        let parts: Vec<Vec<&str>> = comps
            .iter()
            .map(|c| c.iter().map(|s| s.as_str()).collect())
            .collect();
        self.compress_disjoint(&parts)
    }

    fn compress_disjoint<S: AsRef<str>, P: AsRef<[S]>>(
        &self,
        parts: &[P],
    ) -> Result<(WeightedGraph, Vec<String>)> {
        let n = self.node_count();
        // part id per node, usize::MAX = kept
        let mut part_of = vec![usize::MAX; n];
        for (p, part) in parts.iter().enumerate() {
            for s in part.as_ref() {
                part_of[self.index_of(s.as_ref())?] = p;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| part_of[i] == usize::MAX).collect();
        let mut names = Vec::with_capacity(parts.len());
        for p in 0..parts.len() {
            let base = if parts.len() == 1 {
                "q".to_string()
            } else {
                format!("q{}", p + 1)
            };
            let mut name = base;
            while self.index.contains_key(&name) || names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
        }
        let mut nodes: Vec<String> = kept.iter().map(|&i| self.labels[i].clone()).collect();
        nodes.extend(names.iter().cloned());
        let mut edges: Vec<(String, String, f64)> = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| part_of[u] == usize::MAX && part_of[v] == usize::MAX)
            .map(|&(u, v, w)| (self.labels[u].clone(), self.labels[v].clone(), w))
            .collect();
        for &i in &kept {
            let mut hit = vec![false; parts.len()];
            for &(j, _) in &self.adj[i] {
                if part_of[j] != usize::MAX {
                    hit[part_of[j]] = true;
                }
            }
            for (p, &h) in hit.iter().enumerate() {
                if h {
                    edges.push((self.labels[i].clone(), names[p].clone(), 1.0));
                }
            }
        }
        // structure-only object: unit weights throughout
        for e in &mut edges {
            e.2 = 1.0;
        }
        Ok((WeightedGraph::new(&nodes, &edges)?, names))
    }
}

impl PartialEq for WeightedGraph {
    /// Label-based equality: same node set and same weighted edge set,
    /// regardless of internal index order.
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.labels.clone();
        let mut b = other.labels.clone();
        a.sort();
        b.sort();
        a == b && self.weight_map() == other.weight_map()
    }
}

/// Canonical (lexicographically ordered) label pair for weight maps.
pub fn edge_key(u: &str, v: &str) -> (String, String) {
    if u <= v {
        (u.to_string(), v.to_string())
    } else {
        (v.to_string(), u.to_string())
    }
}

/// Sort a label set by its index in `g` (deterministic reporting order).
pub fn sort_by_index(g: &WeightedGraph, set: &mut [String]) {
    set.sort_by_key(|l| g.index_of(l).unwrap_or(usize::MAX));
}
