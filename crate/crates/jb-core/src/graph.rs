//! Multigraph container and basic structure queries.
//!
//! Vertices are `0..n`. Edges form a multiset of unordered pairs; parallel
//! edges are stored as separate entries so `m()` and every edge count in the
//! solvers respect multiplicity. Self-loops are rejected.

use std::collections::BTreeMap;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Per vertex: neighbor -> parallel edge count. Derived from `edges`.
    adj: Vec<BTreeMap<usize, usize>>,
}

/// Ordered bipartition (P, Q) of a bipartite graph. Both sides sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl MultiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        let mut g = MultiGraph {
            n,
            edges: Vec::with_capacity(edges.len()),
            adj: vec![BTreeMap::new(); n],
        };
        for (u, v) in edges {
            g.push_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            adj: vec![BTreeMap::new(); n],
        }
    }

    /// Appends one more parallel copy of the edge {u, v}.
    pub fn push_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) out of range for n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("self-loop at vertex {u}")));
        }
        self.edges.push((u, v));
        *self.adj[u].entry(v).or_insert(0) += 1;
        *self.adj[v].entry(u).or_insert(0) += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total edge count including parallel multiplicity.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj[u].get(&v).copied().unwrap_or(0)
    }

    /// Distinct neighbors of `u` with parallel counts.
    pub fn neighbors(&self, u: usize) -> &BTreeMap<usize, usize> {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].values().sum()
    }

    /// Connected components; each sorted ascending, components ordered by
    /// their minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for (&w, _) in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Canonical bipartition if the graph is bipartite, else `None`.
    ///
    /// Canonical rule: in every component the lowest-numbered vertex goes to
    /// P (so isolated vertices all land in P). Parallel edges are a single
    /// adjacency for 2-coloring purposes.
    pub fn find_bipartition(&self) -> Option<Bipartition> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for (&w, _) in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let mut p = Vec::new();
        let mut q = Vec::new();
        for v in 0..self.n {
            if color[v] == Some(false) {
                p.push(v);
            } else {
                q.push(v);
            }
        }
        Some(Bipartition { p, q })
    }

    pub fn is_bipartite(&self) -> bool {
        self.find_bipartition().is_some()
    }

    /// Number of edges (with multiplicity) whose endpoints both satisfy `mask`.
    pub fn edges_within(&self, mask: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask[u] && mask[v])
            .count()
    }

    /// Number of edges (with multiplicity) between a masked set and its complement.
    pub fn edges_across(&self, mask: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask[u] != mask[v])
            .count()
    }

    /// Induced subgraph on `keep` (deduplicated, sorted). Returns the subgraph
    /// with relabeled vertices `0..keep.len()` plus the new-to-old vertex map.
    pub fn induced(&self, keep: &[usize]) -> (MultiGraph, Vec<usize>) {
        let mut order: Vec<usize> = keep.to_vec();
        order.sort_unstable();
        order.dedup();
        let mut old_to_new = vec![usize::MAX; self.n];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new;
        }
        let mut sub = MultiGraph::empty(order.len());
        for &(u, v) in &self.edges {
            if old_to_new.get(u).copied().unwrap_or(usize::MAX) != usize::MAX
                && old_to_new[v] != usize::MAX
            {
                sub.push_edge(old_to_new[u], old_to_new[v])
                    .expect("relabeled edge is in range");
            }
        }
        (sub, order)
    }

    /// Induced subgraph after deleting `drop`; same relabeling contract as `induced`.
    pub fn without(&self, drop: &[usize]) -> (MultiGraph, Vec<usize>) {
        let mut dropped = vec![false; self.n];
        for &v in drop {
            dropped[v] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !dropped[v]).collect();
        self.induced(&keep)
    }

    /// Parses the `n m` + one `u v` line per edge format.
    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty graph text"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing vertex count"))?
            .parse()
            .map_err(|_| Error::parse("vertex count is not a number"))?;
        let m: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing edge count"))?
            .parse()
            .map_err(|_| Error::parse("edge count is not a number"))?;
        if it.next().is_some() {
            return Err(Error::parse("trailing tokens after header"));
        }
        let mut g = MultiGraph::empty(n);
        for i in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(format!("expected {m} edge lines, got {i}")))?;
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .ok_or_else(|| Error::parse(format!("edge line {i} is empty")))?
                .parse()
                .map_err(|_| Error::parse(format!("edge line {i}: bad endpoint")))?;
            let v: usize = it
                .next()
                .ok_or_else(|| Error::parse(format!("edge line {i}: missing endpoint")))?
                .parse()
                .map_err(|_| Error::parse(format!("edge line {i}: bad endpoint")))?;
            if it.next().is_some() {
                return Err(Error::parse(format!("edge line {i}: trailing tokens")));
            }
            g.push_edge(u, v)?;
        }
        for (i, line) in lines.enumerate() {
            if !line.trim().is_empty() {
                return Err(Error::parse(format!("unexpected extra line {}", m + 1 + i)));
            }
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}
