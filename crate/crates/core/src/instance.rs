use serde::Serialize;

use crate::graph::GraphVar;

/// Sentinel for an arc that is not part of the initial potential graph.
pub const FORBIDDEN: i64 = i64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Symmetric,
    Asymmetric,
}

/// A Hamiltonian-path instance with fixed endpoints `s` and `e`.
#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    pub name: String,
    pub n: usize,
    #[serde(skip)]
    costs: Vec<i64>,
    pub s: usize,
    pub e: usize,
    pub kind: InstanceKind,
    /// Dimension of the source file before any circuit-to-path split.
    pub dimension: usize,
    pub weight_type: String,
}

impl Instance {
    /// Builds an instance from a dense row-major matrix. Entries equal to
    /// [`FORBIDDEN`], the diagonal, arcs into `s` and arcs out of `e` are all
    /// excluded from the initial domain.
    pub fn from_matrix(name: impl Into<String>, n: usize, s: usize, e: usize, mut costs: Vec<i64>) -> Self {
        assert_eq!(costs.len(), n * n, "matrix must be n x n");
        assert!(s < n && e < n && s != e);
        for u in 0..n {
            costs[u * n + u] = FORBIDDEN;
            costs[u * n + s] = FORBIDDEN;
            costs[e * n + u] = FORBIDDEN;
        }
        let kind = if Self::interior_symmetric(n, s, e, &costs) {
            InstanceKind::Symmetric
        } else {
            InstanceKind::Asymmetric
        };
        Instance { name: name.into(), n, costs, s, e, kind, dimension: n, weight_type: "EXPLICIT".into(), }
    }

    fn interior_symmetric(n: usize, s: usize, e: usize, c: &[i64]) -> bool {
        (0..n).filter(|&u| u != s && u != e).all(|u| {
            (0..n).filter(|&v| v != s && v != e).all(|v| c[u * n + v] == c[v * n + u])
        })
    }

    #[inline]
    pub fn cost(&self, u: usize, v: usize) -> Option<i64> {
        let c = self.costs[u * self.n + v];
        (c != FORBIDDEN).then_some(c)
    }

    /// Raw matrix entry, [`FORBIDDEN`] for excluded arcs.
    #[inline]
    pub fn raw_cost(&self, u: usize, v: usize) -> i64 {
        self.costs[u * self.n + v]
    }

    pub fn matrix(&self) -> &[i64] {
        &self.costs
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| self.cost(u, v).is_some())
    }

    pub fn graph_var(&self) -> GraphVar {
        GraphVar::new(self.n, self.s, self.e, self.arcs())
    }

    /// Cost of a node sequence, `None` if it uses a forbidden arc.
    pub fn path_cost(&self, order: &[usize]) -> Option<i64> {
        order.windows(2).try_fold(0i64, |acc, w| self.cost(w[0], w[1]).map(|c| acc + c))
    }

    /// Whether `order` is an s→e Hamiltonian path of this instance.
    pub fn is_hamiltonian_path(&self, order: &[usize]) -> bool {
        if order.len() != self.n || order.first() != Some(&self.s) || order.last() != Some(&self.e) {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in order {
            if v >= self.n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        self.path_cost(order).is_some()
    }

    pub(crate) fn with_metadata(mut self, kind: InstanceKind, dimension: usize, weight_type: &str) -> Self {
        self.kind = kind;
        self.dimension = dimension;
        self.weight_type = weight_type.to_string();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_arcs_are_forbidden() {
        let inst = Instance::from_matrix("t", 3, 0, 2, vec![1; 9]);
        assert_eq!(inst.cost(1, 0), None);
        assert_eq!(inst.cost(2, 1), None);
        assert_eq!(inst.cost(1, 1), None);
        assert_eq!(inst.cost(0, 1), Some(1));
        assert_eq!(inst.arcs().count(), 3);
        assert!(inst.is_hamiltonian_path(&[0, 1, 2]));
        assert_eq!(inst.path_cost(&[0, 1, 2]), Some(2));
    }
}
