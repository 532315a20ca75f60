//! Structured solver for favorable hypergraph painting instances.
//!
//! Favorability buys two facts. Menus only accept unbreakable colorings,
//! and any multichromatic hyperedge costs at least one unit of (l1 + l2).
//! With total budget k, a satisfying coloring therefore has at most k
//! non-constant hyperedges, and those form whole support groups (parallel
//! hyperedges over the same vertex set are non-constant together).
//!
//! The solver enumerates the set T of support groups allowed to be
//! non-constant. Outside T the coloring is constant on every component of
//! the hypergraph, so per-component tables can be precomputed once. Inside
//! a component touched by T, removing the T supports splits it into
//! fragments; the coloring is constant per fragment and a small product
//! over fragment colors remains.

use std::collections::BTreeMap;

use jb_core::Error;

use super::{brute::HpWitness, coloring_index, HPInstance};
use crate::table::{AJPTable, Caps, Table};

/// Unit budget for one solve call; roughly one table operation per unit.
const WORK_GATE: u64 = 300_000_000;

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A support group: one or more parallel hyperedges over the same vertex
/// set of size at least two.
struct Support {
    edges: Vec<usize>,
    comp: usize,
}

struct Component {
    verts: Vec<usize>,
    edges: Vec<usize>,
    supports: Vec<usize>,
    /// Table for a constant coloring, per color.
    per_color: Vec<Table>,
    /// OR over all constant colors.
    any_color: Table,
}

struct Structure<'a> {
    inst: &'a HPInstance,
    caps: Caps,
    comps: Vec<Component>,
    supports: Vec<Support>,
}

impl<'a> Structure<'a> {
    fn build(inst: &'a HPInstance) -> Result<Self, Error> {
        inst.check_favorable()?;
        let caps = inst.caps();
        let n = inst.h().n();
        let k = inst.k();
        let mut sets = DisjointSets::new(n);
        for e in inst.h().edges() {
            for w in e.windows(2) {
                sets.union(w[0], w[1]);
            }
        }
        let mut comp_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comp_of = vec![0usize; n];
        for v in 0..n {
            let r = sets.find(v);
            let next = comp_ids.len();
            let id = *comp_ids.entry(r).or_insert(next);
            comp_of[v] = id;
        }
        let mut comps: Vec<Component> = (0..comp_ids.len())
            .map(|_| Component {
                verts: Vec::new(),
                edges: Vec::new(),
                supports: Vec::new(),
                per_color: Vec::new(),
                any_color: Table::Zero,
            })
            .collect();
        for v in 0..n {
            comps[comp_of[v]].verts.push(v);
        }
        let mut by_support: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (e, edge) in inst.h().edges().iter().enumerate() {
            comps[comp_of[edge[0]]].edges.push(e);
            if edge.len() >= 2 {
                by_support.entry(edge.clone()).or_default().push(e);
            }
        }
        let mut supports = Vec::with_capacity(by_support.len());
        for (verts, edges) in by_support {
            let comp = comp_of[verts[0]];
            comps[comp].supports.push(supports.len());
            supports.push(Support { edges, comp });
        }
        for comp in comps.iter_mut() {
            let mut any = Table::Zero;
            let mut per_color = Vec::with_capacity(k + 2);
            for c in 0..=k {
                let mut acc = Table::one();
                for &e in &comp.edges {
                    let colors = vec![c; inst.h().edge(e).len()];
                    acc = acc.conv(&inst.closed_menu(e, &colors), caps);
                    if !acc.any() {
                        break;
                    }
                }
                any = any.or(&acc, caps);
                per_color.push(acc);
            }
            comp.per_color = per_color;
            comp.any_color = any;
        }
        Ok(Structure { inst, caps, comps, supports })
    }

    fn spend(&self, work: &mut u64, amount: u64) -> Result<(), Error> {
        *work += amount;
        if *work > WORK_GATE {
            return Err(Error::gate(format!(
                "painting solve exceeded {WORK_GATE} table operations"
            )));
        }
        Ok(())
    }

    /// Visits every admissible support set T in lexicographic order,
    /// starting from the empty set. Copy counts are charged against k.
    fn for_each_t<F>(&self, f: &mut F) -> Result<(), Error>
    where
        F: FnMut(&[usize]) -> Result<(), Error>,
    {
        fn rec<F>(
            s: &Structure<'_>,
            start: usize,
            budget: usize,
            chosen: &mut Vec<usize>,
            f: &mut F,
        ) -> Result<(), Error>
        where
            F: FnMut(&[usize]) -> Result<(), Error>,
        {
            f(chosen)?;
            for i in start..s.supports.len() {
                let copies = s.supports[i].edges.len();
                if copies <= budget {
                    chosen.push(i);
                    rec(s, i + 1, budget - copies, chosen, f)?;
                    chosen.pop();
                }
            }
            Ok(())
        }
        let mut chosen = Vec::new();
        rec(self, 0, self.inst.k(), &mut chosen, f)
    }

    /// Fragment structure of one component after the supports in `sups`
    /// stop acting as connectors. Returns the local fragment id per vertex,
    /// the member edges per fragment, and the T copies in edge order.
    fn fragments(
        &self,
        comp: usize,
        sups: &[usize],
    ) -> (BTreeMap<usize, usize>, usize, Vec<Vec<usize>>, Vec<usize>) {
        let c = &self.comps[comp];
        let local: BTreeMap<usize, usize> =
            c.verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut t_edges: Vec<usize> = Vec::new();
        for &s in sups {
            t_edges.extend_from_slice(&self.supports[s].edges);
        }
        t_edges.sort_unstable();
        let mut sets = DisjointSets::new(c.verts.len());
        for &e in &c.edges {
            if t_edges.binary_search(&e).is_ok() {
                continue;
            }
            for w in self.inst.h().edge(e).windows(2) {
                sets.union(local[&w[0]], local[&w[1]]);
            }
        }
        let mut frag_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut frag_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &v) in c.verts.iter().enumerate() {
            let r = sets.find(i);
            let next = frag_ids.len();
            let id = *frag_ids.entry(r).or_insert(next);
            frag_of.insert(v, id);
        }
        let nfrags = frag_ids.len();
        let mut frag_edges: Vec<Vec<usize>> = vec![Vec::new(); nfrags];
        for &e in &c.edges {
            if t_edges.binary_search(&e).is_err() {
                frag_edges[frag_of[&self.inst.h().edge(e)[0]]].push(e);
            }
        }
        (frag_of, nfrags, frag_edges, t_edges)
    }

    /// Per-fragment constant-color tables for one fragment decomposition.
    fn fragment_tables(
        &self,
        frag_edges: &[Vec<usize>],
        work: &mut u64,
    ) -> Result<Vec<Vec<Table>>, Error> {
        let k = self.inst.k();
        let mut out = Vec::with_capacity(frag_edges.len());
        for edges in frag_edges {
            self.spend(work, (edges.len() as u64 + 1) * (k as u64 + 1))?;
            let mut per_color = Vec::with_capacity(k + 1);
            for c in 0..=k {
                let mut acc = Table::one();
                for &e in edges {
                    let colors = vec![c; self.inst.h().edge(e).len()];
                    acc = acc.conv(&self.inst.closed_menu(e, &colors), self.caps);
                    if !acc.any() {
                        break;
                    }
                }
                per_color.push(acc);
            }
            out.push(per_color);
        }
        Ok(out)
    }

    /// Runs `visit` for every fragment coloring under which all supports in
    /// `sups` are multichromatic and every copy menu is nonzero. The visit
    /// closure receives the coloring and the conv factors in a fixed order:
    /// fragments ascending, then T copies in edge order.
    fn for_each_chi<F>(
        &self,
        comp: usize,
        sups: &[usize],
        work: &mut u64,
        visit: &mut F,
    ) -> Result<(), Error>
    where
        F: FnMut(&[usize], &BTreeMap<usize, usize>, &[usize], &[Table]) -> Result<bool, Error>,
    {
        let k = self.inst.k();
        let base = k + 1;
        let (frag_of, nfrags, frag_edges, t_edges) = self.fragments(comp, sups);
        let frag_tables = self.fragment_tables(&frag_edges, work)?;
        let mut chi = vec![0usize; nfrags];
        loop {
            self.spend(work, (nfrags + t_edges.len()) as u64 + 1)?;
            let mut factors: Vec<Table> = Vec::with_capacity(nfrags + t_edges.len());
            let mut viable = true;
            for f in 0..nfrags {
                let t = &frag_tables[f][chi[f]];
                if !t.any() {
                    viable = false;
                    break;
                }
                factors.push(t.clone());
            }
            if viable {
                for &e in &t_edges {
                    let edge = self.inst.h().edge(e);
                    let colors: Vec<usize> =
                        edge.iter().map(|v| chi[frag_of[v]]).collect();
                    if colors.windows(2).all(|w| w[0] == w[1]) {
                        viable = false;
                        break;
                    }
                    let menu = self
                        .inst
                        .paint(e)
                        .closed_menu(coloring_index(&colors, base), self.caps);
                    if !menu.any() {
                        viable = false;
                        break;
                    }
                    factors.push(menu);
                }
            }
            if viable && visit(&chi, &frag_of, &t_edges, &factors)? {
                return Ok(());
            }
            // Next coloring, last fragment least significant.
            let mut i = nfrags;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                chi[i] += 1;
                if chi[i] < base {
                    break;
                }
                chi[i] = 0;
            }
        }
    }

    /// OR over all admissible fragment colorings of one touched component.
    fn touched_table(&self, comp: usize, sups: &[usize], work: &mut u64) -> Result<Table, Error> {
        let mut acc = Table::Zero;
        self.for_each_chi(comp, sups, work, &mut |_chi, _frag_of, _t_edges, factors| {
            let mut t = Table::one();
            for f in factors {
                t = t.conv(f, self.caps);
                if !t.any() {
                    break;
                }
            }
            acc = acc.or(&t, self.caps);
            Ok(false)
        })?;
        Ok(acc)
    }

    /// Factor tables of one branch: per component either the precomputed
    /// constant-color table or the touched-component table.
    fn branch_factors(&self, t: &[usize], work: &mut u64) -> Result<Vec<Table>, Error> {
        let mut touched: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &s in t {
            touched.entry(self.supports[s].comp).or_default().push(s);
        }
        let mut factors = Vec::with_capacity(self.comps.len());
        for (j, comp) in self.comps.iter().enumerate() {
            self.spend(work, 1)?;
            let table = match touched.get(&j) {
                None => comp.any_color.clone(),
                Some(sups) => self.touched_table(j, sups, work)?,
            };
            if !table.any() {
                return Ok(vec![Table::Zero]);
            }
            factors.push(table);
        }
        Ok(factors)
    }
}

fn conv_fold(factors: &[Table], caps: Caps) -> Table {
    let mut acc = Table::one();
    for f in factors {
        acc = acc.conv(f, caps);
        if !acc.any() {
            break;
        }
    }
    acc
}

/// Picks one cell per factor whose componentwise sum reaches `cell`, using
/// prefix tables. Requires every factor to be up-closed.
pub(crate) fn conv_backtrack(
    factors: &[Table],
    caps: Caps,
    cell: (usize, usize, usize),
) -> Option<Vec<(usize, usize, usize)>> {
    let mut prefix = Vec::with_capacity(factors.len() + 1);
    prefix.push(Table::one());
    for f in factors {
        let next = prefix.last().unwrap().conv(f, caps);
        prefix.push(next);
    }
    if !prefix[factors.len()].get(cell.0, cell.1, cell.2) {
        return None;
    }
    let mut cells = vec![(0, 0, 0); factors.len()];
    let (mut m, mut a, mut b) = cell;
    for i in (0..factors.len()).rev() {
        let mut found = false;
        match &factors[i] {
            Table::Zero => {}
            Table::Point { mu, l1, l2 } => {
                if *mu <= m
                    && *l1 <= a
                    && *l2 <= b
                    && prefix[i].get(m - mu, a - l1, b - l2)
                {
                    cells[i] = (*mu, *l1, *l2);
                    m -= mu;
                    a -= l1;
                    b -= l2;
                    found = true;
                }
            }
            Table::Dense(t) => {
                'search: for (cm, ca, cb) in t.ones() {
                    if cm <= m && ca <= a && cb <= b && prefix[i].get(m - cm, a - ca, b - cb) {
                        cells[i] = (cm, ca, cb);
                        m -= cm;
                        a -= ca;
                        b -= cb;
                        found = true;
                        break 'search;
                    }
                }
            }
        }
        if !found {
            return None;
        }
    }
    Some(cells)
}

/// Resolves per-edge splits for a list of member edges under one constant
/// color, contributing to `splits`.
fn assign_constant_splits(
    inst: &HPInstance,
    caps: Caps,
    edges: &[usize],
    color: usize,
    cell: (usize, usize, usize),
    splits: &mut [(usize, usize, usize)],
) -> bool {
    let menus: Vec<Table> = edges
        .iter()
        .map(|&e| inst.closed_menu(e, &vec![color; inst.h().edge(e).len()]))
        .collect();
    match conv_backtrack(&menus, caps, cell) {
        Some(cells) => {
            for (&e, c) in edges.iter().zip(cells) {
                splits[e] = c;
            }
            true
        }
        None => false,
    }
}

/// Full aHP table of a favorable instance. The result is up-closed in
/// (l1, l2) and matches `brute_force_hp` cell for cell.
pub fn solve_hp_favorable(inst: &HPInstance) -> Result<AJPTable, Error> {
    let s = Structure::build(inst)?;
    let caps = inst.caps();
    let mut out = AJPTable::new(caps.b, caps.k1, caps.k2);
    let mut work = 0u64;
    s.for_each_t(&mut |t| {
        let factors = s.branch_factors(t, &mut work)?;
        match conv_fold(&factors, caps) {
            Table::Zero => {}
            Table::Point { mu, l1, l2 } => out.set_up_closed(mu, l1, l2),
            Table::Dense(d) => out.or_with(&d),
        }
        Ok(())
    })?;
    Ok(out)
}

/// Witness for one aHP cell of a favorable instance, or None if the cell
/// is zero. The replay walks branches in the same order as the solver and
/// decodes the first hit.
pub fn hp_witness(
    inst: &HPInstance,
    mu: usize,
    l1: usize,
    l2: usize,
) -> Result<Option<HpWitness>, Error> {
    let caps = inst.caps();
    if mu > caps.b || l1 > caps.k1 || l2 > caps.k2 {
        return Ok(None);
    }
    let s = Structure::build(inst)?;
    let cell = (mu, l1, l2);
    let mut work = 0u64;
    let mut result: Option<HpWitness> = None;
    s.for_each_t(&mut |t| {
        if result.is_some() {
            return Ok(());
        }
        let factors = s.branch_factors(t, &mut work)?;
        let comp_cells = match conv_backtrack(&factors, caps, cell) {
            Some(c) => c,
            None => return Ok(()),
        };
        let mut touched: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &sup in t {
            touched.entry(s.supports[sup].comp).or_default().push(sup);
        }
        let mut coloring = vec![0usize; inst.h().n()];
        let mut splits = vec![(0usize, 0usize, 0usize); inst.h().edges().len()];
        for (j, comp) in s.comps.iter().enumerate() {
            let target = comp_cells[j];
            match touched.get(&j) {
                None => {
                    // Constant component: find a color reaching the cell.
                    let mut done = false;
                    for c in 0..=inst.k() {
                        if !comp.per_color[c].get(target.0, target.1, target.2) {
                            continue;
                        }
                        let ok = assign_constant_splits(
                            inst, caps, &comp.edges, c, target, &mut splits,
                        );
                        debug_assert!(ok, "per-color table promised a split");
                        if ok {
                            for &v in &comp.verts {
                                coloring[v] = c;
                            }
                            done = true;
                            break;
                        }
                    }
                    if !done {
                        return Err(Error::invalid(
                            "witness replay lost a constant component",
                        ));
                    }
                }
                Some(sups) => {
                    let mut done = false;
                    s.for_each_chi(j, sups, &mut work, &mut |chi, frag_of, t_edges, factors| {
                        let cells = match conv_backtrack(factors, caps, target) {
                            Some(c) => c,
                            None => return Ok(false),
                        };
                        let nfrags = factors.len() - t_edges.len();
                        let (_, _, frag_edges, _) = s.fragments(j, sups);
                        for f in 0..nfrags {
                            let ok = assign_constant_splits(
                                inst,
                                caps,
                                &frag_edges[f],
                                chi[f],
                                cells[f],
                                &mut splits,
                            );
                            if !ok {
                                return Err(Error::invalid(
                                    "witness replay lost a fragment",
                                ));
                            }
                        }
                        for (i, &e) in t_edges.iter().enumerate() {
                            splits[e] = cells[nfrags + i];
                        }
                        for (&v, &f) in frag_of {
                            coloring[v] = chi[f];
                        }
                        done = true;
                        Ok(true)
                    })?;
                    if !done {
                        return Err(Error::invalid(
                            "witness replay lost a touched component",
                        ));
                    }
                }
            }
        }
        let w = HpWitness { coloring, splits };
        debug_assert!(w.check(inst, mu, l1, l2));
        result = Some(w);
        Ok(())
    })?;
    Ok(result)
}
