//! Rooted tree decompositions with the adhesion/cone accessors used by the
//! solver DP, the text format, and the validity checks.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::MultiGraph;
use crate::unbreak::is_unbreakable_set;

/// Rooted tree decomposition. `eta` is the width-style threshold carried by
/// highly connected decompositions (bag unbreakability parameter).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    eta: usize,
    parent: Vec<Option<usize>>,
    bags: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

/// Outcome of a validation pass: `ok` with an empty problem list, or the
/// collected human-readable violations.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub ok: bool,
    pub problems: Vec<String>,
}

impl ValidationReport {
    fn from_problems(problems: Vec<String>) -> Self {
        ValidationReport {
            ok: problems.is_empty(),
            problems,
        }
    }
}

impl TreeDecomposition {
    pub fn new(
        eta: usize,
        parent: Vec<Option<usize>>,
        bags: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        if parent.len() != bags.len() {
            return Err(Error::invalid("parent and bag lists differ in length"));
        }
        let nodes = parent.len();
        if nodes == 0 {
            return Err(Error::invalid("decomposition needs at least one node"));
        }
        let roots: Vec<usize> = (0..nodes).filter(|&t| parent[t].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::invalid(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); nodes];
        for t in 0..nodes {
            if let Some(p) = parent[t] {
                if p >= nodes {
                    return Err(Error::invalid(format!("node {t} has parent {p} >= {nodes}")));
                }
                children[p].push(t);
            }
        }
        // Every node must reach the root; equal node and edge counts would
        // still allow cycles among non-root nodes.
        let mut depth_ok = vec![false; nodes];
        depth_ok[root] = true;
        for t in 0..nodes {
            let mut path = Vec::new();
            let mut cur = t;
            while !depth_ok[cur] {
                path.push(cur);
                match parent[cur] {
                    Some(p) => {
                        if path.contains(&p) {
                            return Err(Error::invalid("parent pointers form a cycle"));
                        }
                        cur = p;
                    }
                    None => break,
                }
            }
            if !depth_ok[cur] {
                return Err(Error::invalid("node does not reach the root"));
            }
            for v in path {
                depth_ok[v] = true;
            }
        }
        for (t, bag) in bags.iter().enumerate() {
            for w in bag.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::invalid(format!("bag {t} is not strictly sorted")));
                }
            }
        }
        Ok(TreeDecomposition {
            eta,
            parent,
            bags,
            children,
            root,
        })
    }

    /// Single-bag decomposition of a connected graph with eta = max(n, 2).
    pub fn trivial(g: &MultiGraph) -> Result<Self, Error> {
        if !g.is_connected() {
            return Err(Error::invalid(
                "trivial decomposition requires a connected graph",
            ));
        }
        TreeDecomposition::new(g.n().max(2), vec![None], vec![(0..g.n()).collect()])
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t]
    }

    /// Adhesion to the parent: bag(t) intersected with the parent bag.
    /// Empty at the root.
    pub fn sigma(&self, t: usize) -> Vec<usize> {
        match self.parent[t] {
            None => Vec::new(),
            Some(p) => {
                let pb: BTreeSet<usize> = self.bags[p].iter().copied().collect();
                self.bags[t]
                    .iter()
                    .copied()
                    .filter(|v| pb.contains(v))
                    .collect()
            }
        }
    }

    /// Cone of t: union of all bags in the subtree rooted at t, sorted.
    pub fn gamma(&self, t: usize) -> Vec<usize> {
        let mut acc = BTreeSet::new();
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            acc.extend(self.bags[u].iter().copied());
            stack.extend(self.children[u].iter().copied());
        }
        acc.into_iter().collect()
    }

    /// Nodes in post order (children before parents), root last.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in &self.children[t] {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Standard tree-decomposition conditions for `g`: vertex coverage, edge
    /// coverage, and connected occupancy per vertex.
    pub fn validate(&self, g: &MultiGraph) -> ValidationReport {
        let mut problems = Vec::new();
        let nodes = self.nodes();
        let mut occupancy: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for t in 0..nodes {
            for &v in &self.bags[t] {
                if v >= g.n() {
                    problems.push(format!("bag {t} mentions vertex {v} >= n = {}", g.n()));
                } else {
                    occupancy[v].push(t);
                }
            }
        }
        for v in 0..g.n() {
            if occupancy[v].is_empty() {
                problems.push(format!("vertex {v} appears in no bag"));
            }
        }
        for &(u, v) in g.edges() {
            let vb: BTreeSet<usize> = occupancy[v].iter().copied().collect();
            if !occupancy[u].iter().any(|t| vb.contains(t)) {
                problems.push(format!("edge ({u}, {v}) is covered by no bag"));
            }
        }
        // Occupancy of each vertex must induce a connected subtree.
        for v in 0..g.n() {
            let occ: BTreeSet<usize> = occupancy[v].iter().copied().collect();
            if occ.len() <= 1 {
                continue;
            }
            let start = *occ.iter().next().unwrap();
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                let mut nbrs: Vec<usize> = self.children[t].clone();
                if let Some(p) = self.parent[t] {
                    nbrs.push(p);
                }
                for u in nbrs {
                    if occ.contains(&u) && seen.insert(u) {
                        stack.push(u);
                    }
                }
            }
            if seen.len() != occ.len() {
                problems.push(format!("vertex {v} occupies a disconnected set of nodes"));
            }
        }
        ValidationReport::from_problems(problems)
    }

    /// Highly connected decomposition conditions on top of `validate`:
    /// for every node the part below the adhesion is connected with
    /// neighborhood exactly the adhesion, bags are (eta, k)-unbreakable in
    /// their cone, and non-root adhesions are small and (2k, k)-unbreakable
    /// in the parent cone.
    pub fn validate_highly_connected(&self, g: &MultiGraph, k: usize) -> Result<ValidationReport, Error> {
        let base = self.validate(g);
        let mut problems = base.problems;
        for t in 0..self.nodes() {
            let gamma = self.gamma(t);
            let sigma = self.sigma(t);
            let sigma_set: BTreeSet<usize> = sigma.iter().copied().collect();
            let interior: Vec<usize> = gamma
                .iter()
                .copied()
                .filter(|v| !sigma_set.contains(v))
                .collect();
            if interior.is_empty() {
                problems.push(format!("node {t}: cone minus adhesion is empty"));
            } else {
                let (sub, _) = g.induced(&interior);
                if !sub.is_connected() {
                    problems.push(format!("node {t}: cone minus adhesion is disconnected"));
                }
                let mut nbhd = BTreeSet::new();
                let in_interior: BTreeSet<usize> = interior.iter().copied().collect();
                for &v in &interior {
                    for (&w, _) in g.neighbors(v) {
                        if !in_interior.contains(&w) {
                            nbhd.insert(w);
                        }
                    }
                }
                if nbhd != sigma_set {
                    problems.push(format!(
                        "node {t}: neighborhood of the interior is {nbhd:?}, expected the adhesion {sigma:?}"
                    ));
                }
            }
            let (cone_graph, cone_map) = g.induced(&gamma);
            let bag_local: Vec<usize> = self.bags[t]
                .iter()
                .map(|v| cone_map.binary_search(v).expect("bag inside cone"))
                .collect();
            if !is_unbreakable_set(&cone_graph, &bag_local, self.eta, k)? {
                problems.push(format!("node {t}: bag is not ({}, {k})-unbreakable in its cone", self.eta));
            }
            if let Some(p) = self.parent[t] {
                if sigma.len() > self.eta {
                    problems.push(format!(
                        "node {t}: adhesion size {} exceeds eta = {}",
                        sigma.len(),
                        self.eta
                    ));
                }
                let pgamma = self.gamma(p);
                let (pg, pmap) = g.induced(&pgamma);
                let sig_local: Vec<usize> = sigma
                    .iter()
                    .map(|v| pmap.binary_search(v).expect("adhesion inside parent cone"))
                    .collect();
                if !is_unbreakable_set(&pg, &sig_local, 2 * k, k)? {
                    problems.push(format!(
                        "node {t}: adhesion is not ({}, {k})-unbreakable in the parent cone",
                        2 * k
                    ));
                }
            }
        }
        Ok(ValidationReport::from_problems(problems))
    }

    /// Parses the `nodes eta` + one `id parent bag_size vertices...` line per
    /// node format; parent is -1 for the root.
    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty decomposition text"))?;
        let mut it = header.split_whitespace();
        let nodes: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing node count"))?
            .parse()
            .map_err(|_| Error::parse("node count is not a number"))?;
        let eta: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing eta"))?
            .parse()
            .map_err(|_| Error::parse("eta is not a number"))?;
        if it.next().is_some() {
            return Err(Error::parse("trailing tokens after header"));
        }
        let mut parent = vec![None; nodes];
        let mut bags: Vec<Option<Vec<usize>>> = vec![None; nodes];
        for i in 0..nodes {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(format!("expected {nodes} node lines, got {i}")))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 3 {
                return Err(Error::parse(format!("node line {i}: too few tokens")));
            }
            let id: usize = toks[0]
                .parse()
                .map_err(|_| Error::parse(format!("node line {i}: bad id")))?;
            if id >= nodes {
                return Err(Error::parse(format!("node line {i}: id {id} out of range")));
            }
            if bags[id].is_some() {
                return Err(Error::parse(format!("duplicate node id {id}")));
            }
            let par: isize = toks[1]
                .parse()
                .map_err(|_| Error::parse(format!("node line {i}: bad parent")))?;
            let size: usize = toks[2]
                .parse()
                .map_err(|_| Error::parse(format!("node line {i}: bad bag size")))?;
            if toks.len() != 3 + size {
                return Err(Error::parse(format!(
                    "node line {i}: expected {size} bag vertices, got {}",
                    toks.len() - 3
                )));
            }
            let mut bag = Vec::with_capacity(size);
            for tok in &toks[3..] {
                bag.push(
                    tok.parse::<usize>()
                        .map_err(|_| Error::parse(format!("node line {i}: bad bag vertex")))?,
                );
            }
            parent[id] = if par < 0 {
                None
            } else {
                Some(usize::try_from(par).unwrap())
            };
            bags[id] = Some(bag);
        }
        for line in lines {
            if !line.trim().is_empty() {
                return Err(Error::parse("unexpected extra line"));
            }
        }
        let bags: Vec<Vec<usize>> = bags.into_iter().map(|b| b.unwrap()).collect();
        TreeDecomposition::new(eta, parent, bags)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.nodes(), self.eta);
        for t in 0..self.nodes() {
            let par = self.parent[t].map(|p| p as isize).unwrap_or(-1);
            out.push_str(&format!("{t} {par} {}", self.bags[t].len()));
            for &v in &self.bags[t] {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }
}
