//! Tree networks over terminals and Steiner points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;

/// How a network's adjacency was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologyTag {
    /// Full Steiner topology with a canonical id from the oracle enumeration.
    Full {
        id: u64,
    },
    /// p-regular chain of Steiner points.
    PChain {
        n: usize,
        p: usize,
    },
    Custom,
}

/// Terminals plus Steiner points with an explicit edge list.
///
/// Vertices are indexed terminals first (`0..terminals.len()`), then Steiner
/// points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNetwork {
    pub terminals: Vec<Point3>,
    pub steiner_points: Vec<Point3>,
    pub edges: Vec<(usize, usize)>,
    pub topology: TopologyTag,
}

impl TreeNetwork {
    pub fn vertex_count(&self) -> usize {
        self.terminals.len() + self.steiner_points.len()
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_steiner(&self, v: usize) -> bool {
        v >= self.terminals.len()
    }

    /// Vertex index of Steiner point `k` (0-based).
    pub fn steiner_vertex(&self, k: usize) -> usize {
        self.terminals.len() + k
    }

    pub fn position(&self, v: usize) -> Point3 {
        if v < self.terminals.len() {
            self.terminals[v]
        } else {
            self.steiner_points[v - self.terminals.len()]
        }
    }

    pub fn edge_length(&self, edge: (usize, usize)) -> f64 {
        self.position(edge.0).distance(self.position(edge.1))
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|&e| self.edge_length(e)).collect()
    }

    /// Total Euclidean edge length.
    pub fn length(&self) -> f64 {
        self.edges.iter().map(|&e| self.edge_length(e)).sum()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Checks that the edges form a spanning tree over all vertices.
    pub fn validate_tree(&self) -> Result<()> {
        let nv = self.vertex_count();
        if self.edges.len() + 1 != nv {
            return Err(Error::Invalid(format!(
                "{} edges over {nv} vertices is not a tree",
                self.edges.len()
            )));
        }
        if let Some(&(a, b)) = self
            .edges
            .iter()
            .find(|&&(a, b)| a >= nv || b >= nv || a == b)
        {
            return Err(Error::Invalid(format!("bad edge ({a}, {b})")));
        }
        let adj = self.neighbors();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Invalid("network is disconnected".into()))
        }
    }

    /// True for a full topology: `n − 2` Steiner points of degree 3, terminals
    /// of degree 1, and tree connectivity.
    pub fn is_full_topology(&self) -> bool {
        let n = self.terminals.len();
        if n < 3 || self.steiner_points.len() != n - 2 || self.validate_tree().is_err() {
            return false;
        }
        let deg = self.degrees();
        deg[..n].iter().all(|&d| d == 1) && deg[n..].iter().all(|&d| d == 3)
    }

    /// Sum of unit vectors from Steiner point `k` toward each of its neighbours.
    ///
    /// Zero exactly when the point is in force balance under unit edge tensions.
    pub fn fermat_vector(&self, k: usize, adj: &[Vec<usize>]) -> Result<Point3> {
        let v = self.steiner_vertex(k);
        let x = self.position(v);
        let mut sum = Point3::ORIGIN;
        for &w in &adj[v] {
            let d = self.position(w) - x;
            let u = d.normalized().ok_or_else(|| {
                Error::Singular(format!("zero-length edge ({v}, {w}) at Steiner point {k}"))
            })?;
            sum += u;
        }
        Ok(sum)
    }

    /// Largest distance between any two terminals, floored at 1.
    pub fn scale(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.terminals.iter().enumerate() {
            for b in &self.terminals[i + 1..] {
                d = d.max(a.distance(*b));
            }
        }
        d.max(1.0)
    }
}
