//! Leader-follower system model: Laplacian assembly, the single-input
//! vector, the controllability matrix and follower-removal subsystems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{numerical_rank, RankResult};

/// A weighted interconnection graph with one externally actuated leader.
/// Connectivity is not required at this level so removal subsystems stay
/// representable.
#[derive(Debug, Clone, PartialEq)]
pub struct MasSystem {
    graph: WeightedGraph,
    leader: String,
}

/// Q = [b, -Lb, ..., (-L)^{n-1} b], rows ordered like `node_order`.
#[derive(Debug, Clone)]
pub struct ControllabilityMatrix {
    pub q: DMatrix<f64>,
    pub node_order: Vec<String>,
}

impl MasSystem {
    pub fn new(graph: WeightedGraph, leader: &str) -> Result<Self> {
        graph.index_of(leader)?;
        Ok(MasSystem {
            graph,
            leader: leader.to_string(),
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn leader(&self) -> &str {
        &self.leader
    }

    pub fn leader_index(&self) -> usize {
        self.graph.index_of(&self.leader).expect("leader is validated")
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn followers(&self) -> Vec<String> {
        self.graph
            .labels()
            .iter()
            .filter(|l| **l != self.leader)
            .cloned()
            .collect()
    }

    /// L = D - A over the current graph.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.graph.node_count();
        let mut l = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut degree = 0.0;
            for &(j, w) in self.graph.neighbors(i) {
                l[(i, j)] = -w;
                degree += w;
            }
            l[(i, i)] = degree;
        }
        l
    }

    /// b: one at the leader's row, zero elsewhere.
    pub fn input_vector(&self) -> DVector<f64> {
        let mut b = DVector::zeros(self.graph.node_count());
        b[self.leader_index()] = 1.0;
        b
    }

    pub fn controllability_matrix(&self) -> ControllabilityMatrix {
        let n = self.graph.node_count();
        let neg_l = -self.laplacian();
        let mut q = DMatrix::zeros(n, n);
        let mut col = self.input_vector();
        for k in 0..n {
            q.set_column(k, &col);
            if k + 1 < n {
                col = &neg_l * col;
            }
        }
        ControllabilityMatrix {
            q,
            node_order: self.graph.labels().to_vec(),
        }
    }

    pub fn controllability_rank(&self, tol: Option<f64>) -> RankResult {
        numerical_rank(&self.controllability_matrix().q, tol)
    }

    pub fn is_controllable(&self, tol: Option<f64>) -> bool {
        self.controllability_rank(tol).rank == self.graph.node_count()
    }

    /// The subsystem left after removing followers: the Laplacian is
    /// recomputed from the surviving edges (agents re-run the protocol with
    /// their surviving neighbors).
    pub fn subsystem_after_removal<S: AsRef<str>>(&self, removed: &[S]) -> Result<MasSystem> {
        if removed.iter().any(|r| r.as_ref() == self.leader) {
            return Err(Error::LeaderRemoved);
        }
        MasSystem::new(self.graph.remove_nodes(removed)?, &self.leader)
    }
}
