//! Tree-decomposition solver for connected bipartite instances with forced
//! sides.
//!
//! Vertices take colors from [k]_0 and a color vector turns colors into
//! sides: left-class vertices land on V1 exactly when their color bit is
//! clear, right-class vertices when it is set. Equal colors across an edge
//! therefore mean opposite sides, and an edge stays free exactly when its
//! endpoints agree in color. The solver compiles every decomposition node
//! into a hypergraph painting instance over its bag: singleton hyperedges
//! place vertices and enforce pins, pair hyperedges charge bag-internal
//! edges, and one hyperedge per child imports the child table through its
//! boundary with the boundary contribution subtracted. The root table is
//! the full answer; an OR over one color vector per popcount class covers
//! all vectors because the construction is color-permutation equivariant.

use std::collections::BTreeMap;

use jb_core::{unbreak, Error, MultiGraph, TreeDecomposition};

use crate::hp::{coloring_at, hp_witness, solve_hp_favorable, HPInstance, PaintingFunction};
use crate::table::{AJPTable, Caps, Table};

/// Boundary colorings a node is willing to sweep.
const SIGMA_GATE: u64 = 1_000_000;

/// Side of the output bipartition.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    V1,
    V2,
}

/// Bit vector over the k + 1 colors steering color-to-side translation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ColorVector {
    bits: u32,
    k: usize,
}

impl ColorVector {
    pub fn new(bits: u32, k: usize) -> Self {
        assert!(k <= 30, "color budget out of range");
        debug_assert!(bits < 1u32 << (k + 1));
        ColorVector { bits, k }
    }

    pub fn bit(&self, color: usize) -> bool {
        debug_assert!(color <= self.k);
        self.bits >> color & 1 == 1
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// All 2^(k+1) vectors, ascending by bit pattern.
    pub fn all(k: usize) -> impl Iterator<Item = ColorVector> {
        (0..1u32 << (k + 1)).map(move |bits| ColorVector::new(bits, k))
    }

    /// One representative per popcount class. Any vector is a color
    /// permutation of one of these.
    pub fn representatives(k: usize) -> Vec<ColorVector> {
        (0..=k + 1)
            .map(|w| ColorVector::new(((1u64 << w) - 1) as u32, k))
            .collect()
    }
}

/// Side of a colored vertex under a color vector.
pub fn translate(in_left: bool, color: usize, v: ColorVector) -> Side {
    if v.bit(color) == in_left {
        Side::V2
    } else {
        Side::V1
    }
}

/// Connected bipartite instance: graph, forced vertex sets (a into V1,
/// b into V2), and the two budgets.
#[derive(Clone, Debug)]
pub struct AbcInstance {
    g: MultiGraph,
    in_left: Vec<bool>,
    a: Vec<usize>,
    b: Vec<usize>,
    k1: usize,
    k2: usize,
}

impl AbcInstance {
    pub fn new(
        g: MultiGraph,
        a: Vec<usize>,
        b: Vec<usize>,
        k1: usize,
        k2: usize,
    ) -> Result<Self, Error> {
        if g.n() == 0 {
            return Err(Error::invalid("instance graph needs at least one vertex"));
        }
        if !g.is_connected() {
            return Err(Error::invalid("instance graph must be connected"));
        }
        let bip = g
            .find_bipartition()
            .ok_or_else(|| Error::invalid("instance graph must be bipartite"))?;
        let mut in_left = vec![false; g.n()];
        for &v in &bip.p {
            in_left[v] = true;
        }
        let mut a = a;
        let mut b = b;
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        for &v in a.iter().chain(&b) {
            if v >= g.n() {
                return Err(Error::invalid(format!("forced vertex {v} out of range")));
            }
        }
        if a.iter().any(|v| b.binary_search(v).is_ok()) {
            return Err(Error::invalid("forced sets must be disjoint"));
        }
        Ok(AbcInstance { g, in_left, a, b, k1, k2 })
    }

    pub fn g(&self) -> &MultiGraph {
        &self.g
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn k(&self) -> usize {
        self.k1 + self.k2
    }

    /// True for vertices in the left class of the canonical bipartition.
    pub fn in_left(&self, v: usize) -> bool {
        self.in_left[v]
    }

    pub fn caps(&self) -> Caps {
        Caps::new(self.g.n(), self.k1, self.k2)
    }
}

/// Solved tables of one decomposition node at a fixed color vector, one
/// up-closed table per boundary coloring.
#[derive(Clone, Debug)]
pub struct YTable {
    node: usize,
    sigma: Vec<usize>,
    v: ColorVector,
    b: usize,
    tables: Vec<AJPTable>,
}

impl YTable {
    pub fn node(&self) -> usize {
        self.node
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn v(&self) -> ColorVector {
        self.v
    }

    /// Table for one boundary coloring index.
    pub fn table(&self, usigma_idx: usize) -> &AJPTable {
        &self.tables[usigma_idx]
    }

    /// Cell read with out-of-range coordinates treated as zero.
    pub fn get(&self, usigma_idx: usize, mu: usize, l1: usize, l2: usize) -> bool {
        let t = &self.tables[usigma_idx];
        mu <= t.b() && l1 <= t.k1() && l2 <= t.k2() && t.get(mu, l1, l2)
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

/// Role of one hyperedge in a compiled node instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HpEdgeKind {
    /// Singleton placing one bag vertex (graph id).
    Vertex(usize),
    /// One parallel copy of a bag-internal graph edge.
    GraphEdge(usize, usize),
    /// Boundary hyperedge importing a child node table.
    Child(usize),
}

/// A compiled painting instance together with its provenance: which node
/// it belongs to, under which boundary coloring and color vector it was
/// built, and what each hyperedge stands for.
pub struct BuiltHp {
    pub hp: HPInstance,
    pub node: usize,
    pub bag: Vec<usize>,
    pub usigma: Vec<usize>,
    pub v: ColorVector,
    pub kinds: Vec<HpEdgeKind>,
}

/// Contribution of a colored boundary: vertices placed on V1 and same-side
/// internal edges, counted with multiplicity. Child tables already account
/// for these, so the importing menu subtracts them.
pub fn boundary_shift(
    inst: &AbcInstance,
    sigma: &[usize],
    colors: &[usize],
    v: ColorVector,
) -> (usize, usize, usize) {
    debug_assert_eq!(sigma.len(), colors.len());
    let (mut mu, mut l1, mut l2) = (0, 0, 0);
    for (i, &u) in sigma.iter().enumerate() {
        let side = translate(inst.in_left(u), colors[i], v);
        if side == Side::V1 {
            mu += 1;
        }
        for (j, &w) in sigma.iter().enumerate().skip(i + 1) {
            let mult = inst.g().multiplicity(u, w);
            if mult == 0 {
                continue;
            }
            if side == translate(inst.in_left(w), colors[j], v) {
                if side == Side::V1 {
                    l1 += mult;
                } else {
                    l2 += mult;
                }
            }
        }
    }
    (mu, l1, l2)
}

fn singleton_menu(
    inst: &AbcInstance,
    u: usize,
    pin: Option<usize>,
    v: ColorVector,
    caps: Caps,
) -> PaintingFunction {
    let k = inst.k();
    let mut menus = BTreeMap::new();
    for c in 0..=k {
        if pin.is_some_and(|p| p != c) {
            continue;
        }
        let side = translate(inst.in_left(u), c, v);
        if inst.a.binary_search(&u).is_ok() && side != Side::V1 {
            continue;
        }
        if inst.b.binary_search(&u).is_ok() && side != Side::V2 {
            continue;
        }
        let mu = usize::from(side == Side::V1);
        let t = Table::point(caps, mu, 0, 0);
        if t.any() {
            menus.insert(c, t);
        }
    }
    PaintingFunction::Menus(menus)
}

fn pair_menu(inst: &AbcInstance, u: usize, w: usize, v: ColorVector, caps: Caps) -> PaintingFunction {
    let k = inst.k();
    let base = k + 1;
    debug_assert_ne!(inst.in_left(u), inst.in_left(w));
    let mut menus = BTreeMap::new();
    for cu in 0..=k {
        let su = translate(inst.in_left(u), cu, v);
        for cw in 0..=k {
            let sw = translate(inst.in_left(w), cw, v);
            let t = if su != sw {
                // Opposite sides are free but only with equal colors.
                if cu == cw {
                    Table::point(caps, 0, 0, 0)
                } else {
                    Table::Zero
                }
            } else if su == Side::V1 {
                Table::point(caps, 0, 1, 0)
            } else {
                Table::point(caps, 0, 0, 1)
            };
            if t.any() {
                menus.insert(cu * base + cw, t);
            }
        }
    }
    PaintingFunction::Menus(menus)
}

fn child_menu(
    inst: &AbcInstance,
    sigma_child: &[usize],
    child: &YTable,
    v: ColorVector,
    caps: Caps,
) -> PaintingFunction {
    let k = inst.k();
    let base = k + 1;
    let len = sigma_child.len();
    let total = base.pow(len as u32);
    let mut menus = BTreeMap::new();
    for idx in 0..total {
        let colors = coloring_at(idx, base, len);
        if !unbreak::is_unbreakable_function(&colors, 3 * k * k, k) {
            continue;
        }
        let (dm, d1, d2) = boundary_shift(inst, sigma_child, &colors, v);
        let mut grid = AJPTable::new(caps.b, caps.k1, caps.k2);
        for mu in 0..=caps.b.min(child.b().saturating_sub(dm)) {
            for l1 in 0..=caps.k1.saturating_sub(d1) {
                for l2 in 0..=caps.k2.saturating_sub(d2) {
                    if child.get(idx, mu + dm, l1 + d1, l2 + d2) {
                        grid.set(mu, l1, l2);
                    }
                }
            }
        }
        let t = Table::dense(grid);
        if t.any() {
            menus.insert(idx, t);
        }
    }
    PaintingFunction::Menus(menus)
}

/// Compiles one decomposition node into a painting instance. `children`
/// must hold the solved tables of `td.children(node)` in order, all at the
/// same color vector `v`.
pub fn build_hp_instance(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    node: usize,
    usigma: &[usize],
    v: ColorVector,
    children: &[&YTable],
) -> Result<BuiltHp, Error> {
    let k = inst.k();
    let bag = td.bag(node).to_vec();
    let sigma = td.sigma(node);
    if usigma.len() != sigma.len() || usigma.iter().any(|&c| c > k) {
        return Err(Error::invalid("boundary coloring does not fit the boundary"));
    }
    if children.len() != td.children(node).len() {
        return Err(Error::invalid("child table list does not match the node"));
    }
    let caps = Caps::new(td.gamma(node).len(), inst.k1(), inst.k2());
    let local = |u: usize| -> Result<usize, Error> {
        bag.binary_search(&u)
            .map_err(|_| Error::invalid(format!("vertex {u} missing from bag of node {node}")))
    };

    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut kinds: Vec<HpEdgeKind> = Vec::new();
    let mut paint: Vec<PaintingFunction> = Vec::new();

    for (i, &u) in bag.iter().enumerate() {
        let pin = sigma.binary_search(&u).ok().map(|p| usigma[p]);
        edges.push(vec![i]);
        kinds.push(HpEdgeKind::Vertex(u));
        paint.push(singleton_menu(inst, u, pin, v, caps));
    }
    for i in 0..bag.len() {
        for j in i + 1..bag.len() {
            let mult = inst.g().multiplicity(bag[i], bag[j]);
            if mult == 0 {
                continue;
            }
            let menu = pair_menu(inst, bag[i], bag[j], v, caps);
            for _ in 0..mult {
                edges.push(vec![i, j]);
                kinds.push(HpEdgeKind::GraphEdge(bag[i], bag[j]));
                paint.push(menu.clone());
            }
        }
    }
    for (&child, table) in td.children(node).iter().zip(children) {
        let sigma_child = td.sigma(child);
        if sigma_child.is_empty() {
            return Err(Error::invalid(format!(
                "node {child} has an empty boundary inside a connected instance"
            )));
        }
        debug_assert_eq!(table.node(), child);
        let support: Result<Vec<usize>, Error> =
            sigma_child.iter().map(|&u| local(u)).collect();
        edges.push(support?);
        kinds.push(HpEdgeKind::Child(child));
        paint.push(child_menu(inst, &sigma_child, table, v, caps));
    }

    let d = edges.iter().map(|e| e.len()).max().unwrap_or(1);
    let q = (td.eta() + k) * k;
    let h = jb_core::Hypergraph::new(bag.len(), edges)?;
    let hp = HPInstance::new(inst.k1(), inst.k2(), caps.b, d, q, h, paint)?;
    Ok(BuiltHp { hp, node, bag, usigma: usigma.to_vec(), v, kinds })
}

fn check_decomposition(inst: &AbcInstance, td: &TreeDecomposition) -> Result<(), Error> {
    let report = td.validate_highly_connected(inst.g(), inst.k())?;
    if !report.ok {
        return Err(Error::invalid(format!(
            "decomposition rejected: {}",
            report.problems.join("; ")
        )));
    }
    Ok(())
}

fn sigma_colorings(k: usize, len: usize) -> Result<usize, Error> {
    let mut total = 1u64;
    for _ in 0..len {
        total = total
            .checked_mul(k as u64 + 1)
            .filter(|&t| t <= SIGMA_GATE)
            .ok_or_else(|| {
                Error::gate(format!("boundary sweep needs more than {SIGMA_GATE} colorings"))
            })?;
    }
    Ok(total as usize)
}

/// Bottom-up pass at one color vector. Returns one YTable per node.
fn solve_tree(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    v: ColorVector,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<Vec<YTable>, Error> {
    let k = inst.k();
    let mut tables: Vec<Option<YTable>> = (0..td.nodes()).map(|_| None).collect();
    for &t in &td.post_order() {
        let sigma = td.sigma(t);
        let total = sigma_colorings(k, sigma.len())?;
        let per: Result<Vec<AJPTable>, Error> = (0..total)
            .map(|idx| {
                let usigma = coloring_at(idx, k + 1, sigma.len());
                let child_tables: Vec<&YTable> = td
                    .children(t)
                    .iter()
                    .map(|&c| tables[c].as_ref().expect("post-order visits children first"))
                    .collect();
                let built = build_hp_instance(inst, td, t, &usigma, v, &child_tables)?;
                hook(&built);
                solve_hp_favorable(&built.hp)
            })
            .collect();
        tables[t] = Some(YTable {
            node: t,
            sigma,
            v,
            b: td.gamma(t).len(),
            tables: per?,
        });
    }
    Ok(tables.into_iter().map(|t| t.expect("all nodes solved")).collect())
}

/// Full answer table over (mu, l1, l2): mu is the exact size of V1 and the
/// budgets bound the internal edges of the two sides. Up-closed in (l1, l2).
pub fn solve_abcbjb(inst: &AbcInstance, td: &TreeDecomposition) -> Result<AJPTable, Error> {
    solve_abcbjb_with(inst, td, &mut |_| {})
}

/// Same as `solve_abcbjb` but invokes `hook` on every compiled node
/// instance before it is solved.
pub fn solve_abcbjb_with(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<AJPTable, Error> {
    check_decomposition(inst, td)?;
    let mut acc = AJPTable::new(inst.g().n(), inst.k1(), inst.k2());
    for v in ColorVector::representatives(inst.k()) {
        let tables = solve_tree(inst, td, v, hook)?;
        let root = &tables[td.root()];
        debug_assert!(root.sigma().is_empty());
        acc.or_with(root.table(0));
    }
    Ok(acc)
}

fn replay(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    tables: &[YTable],
    node: usize,
    usigma: &[usize],
    v: ColorVector,
    cell: (usize, usize, usize),
    colors: &mut [Option<usize>],
) -> Result<(), Error> {
    let child_tables: Vec<&YTable> = td.children(node).iter().map(|&c| &tables[c]).collect();
    let built = build_hp_instance(inst, td, node, usigma, v, &child_tables)?;
    let w = hp_witness(&built.hp, cell.0, cell.1, cell.2)?
        .ok_or_else(|| Error::invalid("table replay lost a node cell"))?;
    for (i, &u) in built.bag.iter().enumerate() {
        debug_assert!(colors[u].is_none() || colors[u] == Some(w.coloring[i]));
        colors[u] = Some(w.coloring[i]);
    }
    for (e, kind) in built.kinds.iter().enumerate() {
        let child = match kind {
            HpEdgeKind::Child(c) => *c,
            _ => continue,
        };
        let sigma_child = td.sigma(child);
        let edge = built.hp.h().edge(e);
        let child_colors: Vec<usize> = edge.iter().map(|&i| w.coloring[i]).collect();
        let (dm, d1, d2) = boundary_shift(inst, &sigma_child, &child_colors, v);
        let (m, a, b) = w.splits[e];
        replay(
            inst,
            td,
            tables,
            child,
            &child_colors,
            v,
            (m + dm, a + d1, b + d2),
            colors,
        )?;
    }
    Ok(())
}

/// Vertex sides witnessing one answer cell, or None when the cell is zero.
pub fn abc_witness(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    mu: usize,
    l1: usize,
    l2: usize,
) -> Result<Option<Vec<Side>>, Error> {
    check_decomposition(inst, td)?;
    if mu > inst.g().n() || l1 > inst.k1() || l2 > inst.k2() {
        return Ok(None);
    }
    for v in ColorVector::representatives(inst.k()) {
        let tables = solve_tree(inst, td, v, &mut |_| {})?;
        let root = td.root();
        if !tables[root].get(0, mu, l1, l2) {
            continue;
        }
        let mut colors: Vec<Option<usize>> = vec![None; inst.g().n()];
        replay(inst, td, &tables, root, &[], v, (mu, l1, l2), &mut colors)?;
        let sides = colors
            .iter()
            .enumerate()
            .map(|(u, c)| {
                let c = c.ok_or_else(|| Error::invalid("witness left a vertex uncolored"))?;
                Ok(translate(inst.in_left(u), c, v))
            })
            .collect::<Result<Vec<Side>, Error>>()?;
        return Ok(Some(sides));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_graph(mult: usize) -> MultiGraph {
        MultiGraph::new(2, vec![(0, 1); mult]).unwrap()
    }

    #[test]
    fn translate_follows_the_vector() {
        let v = ColorVector::new(0b01, 1);
        assert_eq!(translate(true, 0, v), Side::V2);
        assert_eq!(translate(true, 1, v), Side::V1);
        assert_eq!(translate(false, 0, v), Side::V1);
        assert_eq!(translate(false, 1, v), Side::V2);
    }

    #[test]
    fn single_edge_table_matches_hand_computation() {
        let inst = AbcInstance::new(edge_graph(1), vec![], vec![], 1, 1).unwrap();
        let td = TreeDecomposition::trivial(inst.g()).unwrap();
        let t = solve_abcbjb(&inst, &td).unwrap();
        // Both on V2 costs one l2 unit, a split is free, both on V1 costs
        // one l1 unit.
        assert_eq!(
            t.ones(),
            vec![
                (0, 0, 1),
                (0, 1, 1),
                (1, 0, 0),
                (1, 0, 1),
                (1, 1, 0),
                (1, 1, 1),
                (2, 1, 0),
                (2, 1, 1),
            ]
        );
    }

    #[test]
    fn parallel_edges_raise_the_cost() {
        let inst = AbcInstance::new(edge_graph(2), vec![], vec![], 2, 2).unwrap();
        let td = TreeDecomposition::trivial(inst.g()).unwrap();
        let t = solve_abcbjb(&inst, &td).unwrap();
        assert!(t.get(2, 2, 0) && !t.get(2, 1, 2));
        assert!(t.get(0, 0, 2) && !t.get(0, 2, 1));
        assert!(t.get(1, 0, 0));
    }

    #[test]
    fn zero_budget_forces_a_split() {
        let inst = AbcInstance::new(edge_graph(1), vec![], vec![], 0, 0).unwrap();
        let td = TreeDecomposition::trivial(inst.g()).unwrap();
        let t = solve_abcbjb(&inst, &td).unwrap();
        assert_eq!(t.ones(), vec![(1, 0, 0)]);
    }

    #[test]
    fn forced_sides_prune_the_table() {
        let inst = AbcInstance::new(edge_graph(1), vec![0], vec![1], 1, 1).unwrap();
        let td = TreeDecomposition::trivial(inst.g()).unwrap();
        let t = solve_abcbjb(&inst, &td).unwrap();
        assert_eq!(t.ones(), vec![(1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)]);

        let pinned = AbcInstance::new(edge_graph(1), vec![0], vec![], 0, 0).unwrap();
        let t = solve_abcbjb(&pinned, &TreeDecomposition::trivial(pinned.g()).unwrap()).unwrap();
        assert_eq!(t.ones(), vec![(1, 0, 0)]);
    }

    #[test]
    fn two_node_decomposition_agrees_with_trivial() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst = AbcInstance::new(g, vec![], vec![], 1, 1).unwrap();
        let trivial = TreeDecomposition::trivial(inst.g()).unwrap();
        let split =
            TreeDecomposition::new(2, vec![None, Some(0)], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let a = solve_abcbjb(&inst, &trivial).unwrap();
        let b = solve_abcbjb(&inst, &split).unwrap();
        assert_eq!(a.ones(), b.ones());
    }

    #[test]
    fn hook_sees_every_compiled_node() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst = AbcInstance::new(g, vec![], vec![], 1, 1).unwrap();
        let split =
            TreeDecomposition::new(2, vec![None, Some(0)], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let mut seen = Vec::new();
        solve_abcbjb_with(&inst, &split, &mut |built| {
            seen.push((built.node, built.usigma.clone(), built.v.bits()));
        })
        .unwrap();
        // Four vectors (k = 2 has popcount classes 0..=3), child swept under
        // three boundary colorings plus one root coloring each.
        assert_eq!(seen.len(), 4 * (3 + 1));
        assert!(seen.iter().any(|(node, us, _)| *node == 1 && us == &[2]));
    }

    #[test]
    fn witness_sides_satisfy_the_cell() {
        let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let inst = AbcInstance::new(g, vec![0], vec![], 1, 1).unwrap();
        let td = TreeDecomposition::trivial(inst.g()).unwrap();
        let table = solve_abcbjb(&inst, &td).unwrap();
        for (mu, l1, l2) in table.ones() {
            let sides = abc_witness(&inst, &td, mu, l1, l2).unwrap().unwrap();
            let mask: Vec<bool> = sides.iter().map(|s| *s == Side::V1).collect();
            let inv: Vec<bool> = mask.iter().map(|b| !b).collect();
            assert_eq!(mask.iter().filter(|&&b| b).count(), mu);
            assert!(inst.g().edges_within(&mask) <= l1);
            assert!(inst.g().edges_within(&inv) <= l2);
            assert!(sides[0] == Side::V1);
        }
        assert!(abc_witness(&inst, &td, 0, 0, 0).unwrap().is_none());
    }
}
