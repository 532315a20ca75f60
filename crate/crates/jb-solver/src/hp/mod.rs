//! Hypergraph painting instances.
//!
//! An instance carries a hypergraph H, budgets (k1, k2), a mu bound b, the
//! structural parameters (d, q), and one painting function per hyperedge.
//! A painting function maps colorings of the hyperedge (into [k]_0 with
//! k = k1 + k2) to acceptance menus over (mu, l1, l2) cells. The solved
//! table aHP(mu, l1, l2) asks for a global coloring plus per-hyperedge
//! menu cells with exact mu sum and budget sums within (l1, l2).

use std::collections::BTreeMap;

use jb_core::{unbreak, Error, Hypergraph};

use crate::table::{AJPTable, Caps, Table};

mod brute;
mod family;
pub(crate) mod solve;

pub use brute::{brute_force_hp, brute_force_hp_witness, HpWitness};
pub use family::{
    candidate_lists, generate_assignment_family, normalize_assignment,
    normalize_assignment_traced, solve_hp_family, Assignment, PaintedComponents,
};
pub use solve::{hp_witness, solve_hp_favorable};

/// Mixed-radix index of a coloring over an ordered vertex list. The first
/// position is most significant, so the enumeration order of
/// `jb_core::unbreak::enumerate_unbreakable_functions` is ascending in this
/// encoding.
pub fn coloring_index(colors: &[usize], base: usize) -> usize {
    debug_assert!(colors.iter().all(|&c| c < base));
    colors.iter().fold(0, |acc, &c| acc * base + c)
}

/// Inverse of `coloring_index` for a fixed length.
pub fn coloring_at(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    debug_assert_eq!(idx, 0);
    out
}

/// Duplicate-free candidate colorings of a hyperedge with `len` vertices:
/// exactly the (3k^2, k)-unbreakable functions into [k]_0, in ascending
/// mixed-radix order.
pub fn enumerate_candidate_colorings(len: usize, k: usize) -> Result<Vec<Vec<usize>>, Error> {
    unbreak::enumerate_unbreakable_functions(len, 3 * k * k, k)
}

/// Per-hyperedge painting function.
#[derive(Clone, Debug, PartialEq)]
pub enum PaintingFunction {
    /// Raw per-coloring cell grids, indexed by `coloring_index`; the vector
    /// length is (k+1)^|F|. Grids are arbitrary bit sets, fixtures keep them
    /// exactly as written.
    Dense(Vec<AJPTable>),
    /// Sparse menus keyed by coloring index; absent keys are zero menus.
    /// Dense menus stored here must be up-closed in (l1, l2).
    Menus(BTreeMap<usize, Table>),
}

impl PaintingFunction {
    /// Coloring indices whose menu is not identically zero, ascending.
    pub fn nonzero_colorings(&self) -> Vec<usize> {
        match self {
            PaintingFunction::Dense(grids) => (0..grids.len())
                .filter(|&i| grids[i].any())
                .collect(),
            PaintingFunction::Menus(m) => {
                m.iter().filter(|(_, t)| t.any()).map(|(&i, _)| i).collect()
            }
        }
    }

    /// Raw cell lookup, out-of-range coordinates read as zero.
    pub fn cell(&self, idx: usize, mu: usize, l1: usize, l2: usize) -> bool {
        match self {
            PaintingFunction::Dense(grids) => {
                let g = &grids[idx];
                mu <= g.b() && l1 <= g.k1() && l2 <= g.k2() && g.get(mu, l1, l2)
            }
            PaintingFunction::Menus(m) => {
                m.get(&idx).map_or(false, |t| t.get(mu, l1, l2))
            }
        }
    }

    /// Up-closed menu for one coloring under the instance caps.
    pub fn closed_menu(&self, idx: usize, caps: Caps) -> Table {
        match self {
            PaintingFunction::Dense(grids) => {
                let mut g = grids[idx].resized(caps);
                g.close();
                Table::dense(g)
            }
            PaintingFunction::Menus(m) => m.get(&idx).cloned().unwrap_or(Table::Zero),
        }
    }
}

/// Hypergraph painting instance.
#[derive(Clone, Debug)]
pub struct HPInstance {
    k1: usize,
    k2: usize,
    b: usize,
    d: usize,
    q: usize,
    h: Hypergraph,
    paint: Vec<PaintingFunction>,
}

impl HPInstance {
    pub fn new(
        k1: usize,
        k2: usize,
        b: usize,
        d: usize,
        q: usize,
        h: Hypergraph,
        paint: Vec<PaintingFunction>,
    ) -> Result<Self, Error> {
        if paint.len() != h.edges().len() {
            return Err(Error::invalid("one painting function per hyperedge required"));
        }
        let base = k1 + k2 + 1;
        for (i, e) in h.edges().iter().enumerate() {
            if e.len() > d {
                return Err(Error::invalid(format!(
                    "hyperedge {i} has {} vertices, above the bound d={d}",
                    e.len()
                )));
            }
            if let PaintingFunction::Dense(grids) = &paint[i] {
                let want = base.pow(e.len() as u32);
                if grids.len() != want {
                    return Err(Error::invalid(format!(
                        "hyperedge {i} needs {want} coloring grids, got {}",
                        grids.len()
                    )));
                }
            }
        }
        Ok(HPInstance { k1, k2, b, d, q, h, paint })
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// Total budget k = k1 + k2; colorings map into [k]_0.
    pub fn k(&self) -> usize {
        self.k1 + self.k2
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn h(&self) -> &Hypergraph {
        &self.h
    }

    pub fn paint(&self, e: usize) -> &PaintingFunction {
        &self.paint[e]
    }

    pub fn caps(&self) -> Caps {
        Caps::new(self.b, self.k1, self.k2)
    }

    /// Menu of hyperedge `e` under a coloring of its vertex list, up-closed.
    pub fn closed_menu(&self, e: usize, colors: &[usize]) -> Table {
        debug_assert_eq!(colors.len(), self.h.edge(e).len());
        self.paint[e].closed_menu(coloring_index(colors, self.k() + 1), self.caps())
    }

    /// Validates the two locally checkable favorability properties: menus
    /// only accept (3k^2, k)-unbreakable colorings, and multichromatic
    /// colorings are only accepted together with positive edge budget.
    pub fn check_favorable(&self) -> Result<(), Error> {
        let k = self.k();
        let base = k + 1;
        for (e, edge) in self.h.edges().iter().enumerate() {
            for idx in self.paint[e].nonzero_colorings() {
                let colors = coloring_at(idx, base, edge.len());
                if !unbreak::is_unbreakable_function(&colors, 3 * k * k, k) {
                    return Err(Error::invalid(format!(
                        "hyperedge {e} accepts a coloring that is not ({}, {k})-unbreakable",
                        3 * k * k
                    )));
                }
                let multi = colors.windows(2).any(|w| w[0] != w[1]);
                if multi {
                    let menu = self.paint[e].closed_menu(idx, self.caps());
                    for mu in 0..=self.b {
                        if menu.get(mu, 0, 0) {
                            return Err(Error::invalid(format!(
                                "hyperedge {e} accepts a multichromatic coloring with zero budget"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializes the instance; sparse paintings are materialized to grids.
    pub fn to_text(&self) -> String {
        let caps = self.caps();
        let base = self.k() + 1;
        let mut out = String::new();
        out.push_str(&format!("hp {} {} {} {} {}\n", self.k1, self.k2, self.b, self.d, self.q));
        out.push_str(&format!("{} {}\n", self.h.n(), self.h.edges().len()));
        for e in self.h.edges() {
            out.push('e');
            for v in e {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        for (i, edge) in self.h.edges().iter().enumerate() {
            out.push_str(&format!("f {i}\n"));
            let total = base.pow(edge.len() as u32);
            for idx in 0..total {
                let grid = match &self.paint[i] {
                    PaintingFunction::Dense(grids) => grids[idx].clone(),
                    PaintingFunction::Menus(m) => m
                        .get(&idx)
                        .map(|t| t.to_dense(caps))
                        .unwrap_or_else(|| AJPTable::new(caps.b, caps.k1, caps.k2)),
                };
                if !grid.any() {
                    continue;
                }
                let mut bits = String::with_capacity((self.b + 1) * (self.k1 + 1) * (self.k2 + 1));
                for mu in 0..=self.b {
                    for l1 in 0..=self.k1 {
                        for l2 in 0..=self.k2 {
                            bits.push(if grid.get(mu, l1, l2) { '1' } else { '0' });
                        }
                    }
                }
                out.push_str(&format!("c {idx} {bits}\n"));
            }
        }
        out
    }

    /// Parses the `to_text` format. Every painting comes back dense, so a
    /// parsed instance round-trips exactly.
    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(format!("missing {what} line")))
        };
        let (_, header) = next("header")?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 6 || h[0] != "hp" {
            return Err(Error::parse("header must be `hp k1 k2 b d q`"));
        }
        let num = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad {what}: {s}")))
        };
        let (k1, k2) = (num(h[1], "k1")?, num(h[2], "k2")?);
        let (b, d, q) = (num(h[3], "b")?, num(h[4], "d")?, num(h[5], "q")?);
        let (_, sizes) = next("size")?;
        let s: Vec<&str> = sizes.split_whitespace().collect();
        if s.len() != 2 {
            return Err(Error::parse("size line must be `n m`"));
        }
        let (n, m) = (num(s[0], "n")?, num(s[1], "m")?);
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = next("edge")?;
            let mut it = line.split_whitespace();
            if it.next() != Some("e") {
                return Err(Error::parse(format!("line {}: expected edge line", ln + 1)));
            }
            let vs: Result<Vec<usize>, Error> =
                it.map(|t| num(t, "edge vertex")).collect();
            edges.push(vs?);
        }
        let hg = Hypergraph::new(n, edges)?;
        let base = k1 + k2 + 1;
        let cells = (b + 1) * (k1 + 1) * (k2 + 1);
        let mut paint = Vec::with_capacity(m);
        let mut pending: Option<(usize, Vec<AJPTable>, usize)> = None;
        let flush = |p: &mut Vec<PaintingFunction>,
                     pend: &mut Option<(usize, Vec<AJPTable>, usize)>| {
            if let Some((_, grids, _)) = pend.take() {
                p.push(PaintingFunction::Dense(grids));
            }
        };
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.first().copied() {
                Some("f") => {
                    if toks.len() != 2 {
                        return Err(Error::parse(format!("line {}: bad f line", ln + 1)));
                    }
                    let idx = num(toks[1], "painting index")?;
                    flush(&mut paint, &mut pending);
                    if idx != paint.len() || idx >= m {
                        return Err(Error::parse(format!(
                            "line {}: painting blocks must appear in order",
                            ln + 1
                        )));
                    }
                    let total = base.pow(hg.edge(idx).len() as u32);
                    pending = Some((idx, vec![AJPTable::new(b, k1, k2); total], 0));
                }
                Some("c") => {
                    let (_, grids, last) = pending
                        .as_mut()
                        .ok_or_else(|| Error::parse(format!("line {}: c before f", ln + 1)))?;
                    if toks.len() != 3 {
                        return Err(Error::parse(format!("line {}: bad c line", ln + 1)));
                    }
                    let idx = num(toks[1], "coloring index")?;
                    if idx >= grids.len() || (*last > 0 && idx < *last) {
                        return Err(Error::parse(format!(
                            "line {}: coloring index out of order or range",
                            ln + 1
                        )));
                    }
                    let bits = toks[2];
                    if bits.len() != cells || !bits.bytes().all(|c| c == b'0' || c == b'1') {
                        return Err(Error::parse(format!(
                            "line {}: cell string must be {cells} bits",
                            ln + 1
                        )));
                    }
                    let grid = &mut grids[idx];
                    for (pos, ch) in bits.bytes().enumerate() {
                        if ch == b'1' {
                            let l2 = pos % (k2 + 1);
                            let l1 = pos / (k2 + 1) % (k1 + 1);
                            let mu = pos / ((k2 + 1) * (k1 + 1));
                            grid.set(mu, l1, l2);
                        }
                    }
                    *last = idx + 1;
                }
                _ => {
                    return Err(Error::parse(format!("line {}: unknown line kind", ln + 1)));
                }
            }
        }
        flush(&mut paint, &mut pending);
        if paint.len() != m {
            return Err(Error::parse(format!(
                "expected {m} painting blocks, found {}",
                paint.len()
            )));
        }
        HPInstance::new(k1, k2, b, d, q, hg, paint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coloring_codec_round_trips() {
        let base = 3;
        for idx in 0..27 {
            let c = coloring_at(idx, base, 3);
            assert_eq!(coloring_index(&c, base), idx);
        }
        assert_eq!(coloring_index(&[1, 0, 2], 3), 9 + 2);
    }

    #[test]
    fn candidate_colorings_are_unbreakable_and_sorted() {
        let cands = enumerate_candidate_colorings(3, 2).unwrap();
        let mut prev = None;
        for c in &cands {
            assert!(unbreak::is_unbreakable_function(c, 12, 2));
            let idx = coloring_index(c, 3);
            if let Some(p) = prev {
                assert!(idx > p);
            }
            prev = Some(idx);
        }
        // q = 3k^2 >= |F| here, so every function of three vertices is
        // unbreakable and the list is the full cube.
        assert_eq!(cands.len(), 27);
    }

    fn tiny_instance() -> HPInstance {
        // Two vertices, one pair hyperedge, k1 = 1, k2 = 0.
        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let caps = Caps::new(2, 1, 0);
        let mut menus = BTreeMap::new();
        // Constant coloring 0 on both vertices: free point at mu = 2.
        menus.insert(0, Table::point(caps, 2, 0, 0));
        // Colors (0, 1): costs one l1 unit, mu = 1.
        menus.insert(1, Table::point(caps, 1, 1, 0));
        HPInstance::new(1, 0, 2, 2, 3, h, vec![PaintingFunction::Menus(menus)]).unwrap()
    }

    #[test]
    fn favorable_check_accepts_and_rejects() {
        let inst = tiny_instance();
        inst.check_favorable().unwrap();

        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let caps = Caps::new(2, 1, 0);
        let mut menus = BTreeMap::new();
        menus.insert(1, Table::point(caps, 1, 0, 0));
        let bad =
            HPInstance::new(1, 0, 2, 2, 3, h, vec![PaintingFunction::Menus(menus)]).unwrap();
        assert!(bad.check_favorable().is_err());
    }

    #[test]
    fn fixture_text_round_trips() {
        let inst = tiny_instance();
        let text = inst.to_text();
        let parsed = HPInstance::from_text(&text).unwrap();
        assert_eq!(parsed.to_text(), text);
        assert_eq!(parsed.h().edges(), inst.h().edges());
        assert!(parsed.paint(0).cell(0, 2, 0, 0));
        assert!(parsed.paint(0).cell(1, 1, 1, 0));
        assert!(!parsed.paint(0).cell(2, 1, 1, 0));
    }

    #[test]
    fn fixture_parser_rejects_malformed_input() {
        assert!(HPInstance::from_text("hp 1 0 2 2\n0 0\n").is_err());
        assert!(HPInstance::from_text("hp 1 0 2 2 3\n2 1\ne 0 1\nc 0 111111\n").is_err());
        let short_bits = "hp 1 0 2 2 3\n2 1\ne 0 1\nf 0\nc 0 101\n";
        assert!(HPInstance::from_text(short_bits).is_err());
    }
}
