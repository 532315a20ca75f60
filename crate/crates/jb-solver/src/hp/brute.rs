//! Exhaustive reference solver for hypergraph painting.
//!
//! Enumerates every global coloring of V(H) into [k]_0 and folds the
//! per-hyperedge menus by convolution. This is the ground truth the
//! structured solver is compared against; it is gated, not fast.

use jb_core::Error;

use super::{coloring_index, HPInstance};
use crate::table::{AJPTable, Table};

/// Colorings the exhaustive solver is willing to walk through.
const COLORING_GATE: u64 = 4_000_000;

fn coloring_count(inst: &HPInstance) -> Result<u64, Error> {
    let base = (inst.k() + 1) as u64;
    let mut total = 1u64;
    for _ in 0..inst.h().n() {
        total = total
            .checked_mul(base)
            .filter(|&t| t <= COLORING_GATE)
            .ok_or_else(|| {
                Error::gate(format!(
                    "brute-force painting needs more than {COLORING_GATE} colorings"
                ))
            })?;
    }
    Ok(total)
}

fn fold_menus(inst: &HPInstance, global: &[usize]) -> Table {
    let caps = inst.caps();
    let base = inst.k() + 1;
    let mut acc = Table::one();
    for (e, edge) in inst.h().edges().iter().enumerate() {
        let idx = coloring_index(
            &edge.iter().map(|&v| global[v]).collect::<Vec<_>>(),
            base,
        );
        let menu = inst.paint(e).closed_menu(idx, caps);
        acc = acc.conv(&menu, caps);
        if !acc.any() {
            break;
        }
    }
    acc
}

/// Full aHP table by exhaustive enumeration. The result is up-closed in
/// (l1, l2).
pub fn brute_force_hp(inst: &HPInstance) -> Result<AJPTable, Error> {
    let total = coloring_count(inst)?;
    let caps = inst.caps();
    let n = inst.h().n();
    let base = inst.k() + 1;
    let mut out = AJPTable::new(caps.b, caps.k1, caps.k2);
    let mut global = vec![0usize; n];
    for step in 0..total {
        if step > 0 {
            let mut i = n;
            loop {
                i -= 1;
                global[i] += 1;
                if global[i] < base {
                    break;
                }
                global[i] = 0;
            }
        }
        match fold_menus(inst, &global) {
            Table::Zero => {}
            t => out.or_with(&t.to_dense(caps)),
        }
    }
    Ok(out)
}

/// A coloring together with one accepted menu cell per hyperedge. The mu
/// components sum exactly to the queried mu and the budget components sum
/// to at most (l1, l2); each cell lies in the up-closed menu of its edge.
#[derive(Clone, Debug, PartialEq)]
pub struct HpWitness {
    pub coloring: Vec<usize>,
    pub splits: Vec<(usize, usize, usize)>,
}

impl HpWitness {
    /// Replays the witness against the instance menus.
    pub fn check(&self, inst: &HPInstance, mu: usize, l1: usize, l2: usize) -> bool {
        if self.coloring.len() != inst.h().n()
            || self.splits.len() != inst.h().edges().len()
            || self.coloring.iter().any(|&c| c > inst.k())
        {
            return false;
        }
        let mut sums = (0usize, 0usize, 0usize);
        for (e, edge) in inst.h().edges().iter().enumerate() {
            let local: Vec<usize> = edge.iter().map(|&v| self.coloring[v]).collect();
            let (m, a, b) = self.splits[e];
            if !inst.closed_menu(e, &local).get(m, a, b) {
                return false;
            }
            sums = (sums.0 + m, sums.1 + a, sums.2 + b);
        }
        sums.0 == mu && sums.1 <= l1 && sums.2 <= l2
    }
}

/// Finds a witness for one aHP cell by the same exhaustive walk, or None
/// when the cell is zero.
pub fn brute_force_hp_witness(
    inst: &HPInstance,
    mu: usize,
    l1: usize,
    l2: usize,
) -> Result<Option<HpWitness>, Error> {
    let caps = inst.caps();
    if mu > caps.b || l1 > caps.k1 || l2 > caps.k2 {
        return Ok(None);
    }
    let total = coloring_count(inst)?;
    let n = inst.h().n();
    let base = inst.k() + 1;
    let m_edges = inst.h().edges().len();
    let mut global = vec![0usize; n];
    for step in 0..total {
        if step > 0 {
            let mut i = n;
            loop {
                i -= 1;
                global[i] += 1;
                if global[i] < base {
                    break;
                }
                global[i] = 0;
            }
        }
        // Prefix tables over the hyperedge order support backtracking.
        let mut prefix = Vec::with_capacity(m_edges + 1);
        prefix.push(Table::one());
        for (e, edge) in inst.h().edges().iter().enumerate() {
            let idx = coloring_index(
                &edge.iter().map(|&v| global[v]).collect::<Vec<_>>(),
                base,
            );
            let menu = inst.paint(e).closed_menu(idx, caps);
            let next = prefix[e].conv(&menu, caps);
            prefix.push(next);
        }
        if !prefix[m_edges].get(mu, l1, l2) {
            continue;
        }
        let mut splits = vec![(0, 0, 0); m_edges];
        let (mut tm, mut t1, mut t2) = (mu, l1, l2);
        for e in (0..m_edges).rev() {
            let idx = coloring_index(
                &inst.h().edge(e).iter().map(|&v| global[v]).collect::<Vec<_>>(),
                base,
            );
            let cells = inst.paint(e).closed_menu(idx, caps).to_dense(caps);
            let mut found = false;
            'cell: for (m, a, b) in cells.ones() {
                if m <= tm && a <= t1 && b <= t2 && prefix[e].get(tm - m, t1 - a, t2 - b) {
                    splits[e] = (m, a, b);
                    tm -= m;
                    t1 -= a;
                    t2 -= b;
                    found = true;
                    break 'cell;
                }
            }
            debug_assert!(found, "prefix table promised a split");
            if !found {
                break;
            }
        }
        let w = HpWitness { coloring: global.clone(), splits };
        debug_assert!(w.check(inst, mu, l1, l2));
        return Ok(Some(w));
    }
    Ok(None)
}
