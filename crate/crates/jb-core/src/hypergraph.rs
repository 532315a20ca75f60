//! Multi-hypergraph container plus the minimum endpoint-cover used by the
//! structural tests.

use crate::error::Error;

/// Hypergraph on vertices `0..n`. Hyperedges are nonempty vertex sets
/// (sorted, duplicate-free within an edge); equal hyperedges may repeat.
/// Every vertex must occur in at least one hyperedge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, Error> {
        let mut covered = vec![false; n];
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::invalid(format!("hyperedge {i} is empty")));
            }
            for w in e.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::invalid(format!(
                        "hyperedge {i} is not strictly sorted"
                    )));
                }
            }
            for &v in e {
                if v >= n {
                    return Err(Error::invalid(format!(
                        "hyperedge {i} mentions vertex {v} >= n = {n}"
                    )));
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::invalid(format!("vertex {v} is isolated")));
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    /// Indices of a minimum-size hyperedge subset whose endpoint union is all
    /// of `V`. Found by exhausting subsets in increasing size, so the result
    /// is the lexicographically first optimum; callers are test harnesses
    /// working at small scale.
    pub fn spanning_forest(&self) -> Result<Vec<usize>, Error> {
        if self.n > 64 || self.edges.len() > 24 {
            return Err(Error::gate(format!(
                "spanning_forest supports n <= 64 and m <= 24, got n = {}, m = {}",
                self.n,
                self.edges.len()
            )));
        }
        let full: u64 = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let masks: Vec<u64> = self
            .edges
            .iter()
            .map(|e| e.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        if self.n == 0 {
            return Ok(Vec::new());
        }
        for size in 1..=self.edges.len() {
            let mut chosen = Vec::with_capacity(size);
            if let Some(sol) = Self::cover_search(&masks, full, 0, size, 0, &mut chosen) {
                return Ok(sol);
            }
        }
        unreachable!("every vertex is covered by some hyperedge");
    }

    fn cover_search(
        masks: &[u64],
        full: u64,
        acc: u64,
        left: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if left == 0 {
            return if acc == full { Some(chosen.clone()) } else { None };
        }
        for i in from..masks.len() {
            if masks.len() - i < left {
                break;
            }
            chosen.push(i);
            if let Some(sol) = Self::cover_search(masks, full, acc | masks[i], left - 1, i + 1, chosen)
            {
                return Some(sol);
            }
            chosen.pop();
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_cover_beats_greedy_order() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(h.spanning_forest().unwrap(), vec![2]);
    }

    #[test]
    fn disjoint_edges_are_all_needed() {
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(h.spanning_forest().unwrap(), vec![0, 1]);
    }

    #[test]
    fn isolated_vertex_rejected() {
        assert!(Hypergraph::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn malformed_edges_rejected() {
        assert!(Hypergraph::new(2, vec![vec![]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![1, 0]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0, 0], vec![1]]).is_err());
        assert!(Hypergraph::new(1, vec![vec![3]]).is_err());
    }

    #[test]
    fn duplicate_hyperedges_allowed() {
        let h = Hypergraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(h.edges().len(), 2);
        assert_eq!(h.spanning_forest().unwrap(), vec![0]);
    }
}
