//! Definition-literal brute-force solvers.
//!
//! Everything here enumerates the raw search space with no pruning beyond
//! size gates. These are the reference answers the structured solvers are
//! tested against, so they must stay independent of the fast paths: no
//! shared tables, no shared recurrences, only the problem statements.

use jb_core::{Error, TreeDecomposition};

use crate::abc::{translate, AbcInstance, ColorVector, Side};
use crate::pipeline::{BjbInstance, SolveAnswer, SolveStats};
use crate::table::AJPTable;

/// Enumeration budgets. Callers that want more coverage pass bigger gates
/// instead of recompiling.
#[derive(Copy, Clone, Debug)]
pub struct OracleGate {
    /// Largest vertex count for 2^n partition sweeps.
    pub max_vertices: usize,
    /// Largest number of color assignments enumerated per query.
    pub max_assignments: u64,
}

impl Default for OracleGate {
    fn default() -> Self {
        OracleGate {
            max_vertices: 20,
            max_assignments: 4_000_000,
        }
    }
}

fn side_lists(n: usize, mask: u64) -> (Vec<usize>, Vec<usize>) {
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for v in 0..n {
        if mask >> v & 1 == 1 {
            v1.push(v);
        } else {
            v2.push(v);
        }
    }
    (v1, v2)
}

fn mask_feasible(inst: &BjbInstance, mask: u64) -> bool {
    let n = inst.g.n();
    if (mask.count_ones() as usize) != inst.mu {
        return false;
    }
    let bits: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
    let inv: Vec<bool> = bits.iter().map(|&b| !b).collect();
    inst.g.edges_within(&bits) <= inst.k1 && inst.g.edges_within(&inv) <= inst.k2
}

fn bjb_sweep(
    inst: &BjbInstance,
    gate: OracleGate,
    masks: impl Iterator<Item = u64>,
) -> Result<SolveAnswer, Error> {
    let start = std::time::Instant::now();
    let n = inst.g.n();
    if n > gate.max_vertices {
        return Err(Error::gate(format!(
            "brute force over 2^{n} partitions exceeds the vertex gate {}",
            gate.max_vertices
        )));
    }
    let mut stats = SolveStats::default();
    for mask in masks {
        stats.branches += 1;
        if mask_feasible(inst, mask) {
            let (v1, v2) = side_lists(n, mask);
            stats.elapsed = start.elapsed();
            return Ok(SolveAnswer {
                yes: true,
                witness: Some((v1, v2)),
                stats,
            });
        }
    }
    stats.elapsed = start.elapsed();
    Ok(SolveAnswer {
        yes: false,
        witness: None,
        stats,
    })
}

/// Checks every vertex subset as V1, ascending by bitmask, and returns the
/// first feasible partition.
pub fn brute_force_bjb(inst: &BjbInstance) -> Result<SolveAnswer, Error> {
    brute_force_bjb_gated(inst, OracleGate::default())
}

pub fn brute_force_bjb_gated(inst: &BjbInstance, gate: OracleGate) -> Result<SolveAnswer, Error> {
    bjb_sweep(inst, gate, 0..1u64 << inst.g.n())
}

/// Same sweep in descending mask order. An independent second route: if the
/// two disagree on yes/no, the oracle itself is broken.
pub fn brute_force_bjb_reversed(inst: &BjbInstance) -> Result<SolveAnswer, Error> {
    brute_force_bjb_reversed_gated(inst, OracleGate::default())
}

pub fn brute_force_bjb_reversed_gated(
    inst: &BjbInstance,
    gate: OracleGate,
) -> Result<SolveAnswer, Error> {
    bjb_sweep(inst, gate, (0..1u64 << inst.g.n()).rev())
}

/// Full answer table by direct enumeration over all 2^n partitions.
pub fn brute_force_abcbjb(inst: &AbcInstance) -> Result<AJPTable, Error> {
    brute_force_abcbjb_gated(inst, OracleGate::default())
}

pub fn brute_force_abcbjb_gated(inst: &AbcInstance, gate: OracleGate) -> Result<AJPTable, Error> {
    let n = inst.g().n();
    if n > gate.max_vertices {
        return Err(Error::gate(format!(
            "brute force over 2^{n} partitions exceeds the vertex gate {}",
            gate.max_vertices
        )));
    }
    let mut out = AJPTable::new(n, inst.k1(), inst.k2());
    for mask in 0..1u64 << n {
        if inst.a().iter().any(|&v| mask >> v & 1 == 0)
            || inst.b().iter().any(|&v| mask >> v & 1 == 1)
        {
            continue;
        }
        let bits: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let inv: Vec<bool> = bits.iter().map(|&b| !b).collect();
        let m1 = inst.g().edges_within(&bits);
        let m2 = inst.g().edges_within(&inv);
        if m1 <= inst.k1() && m2 <= inst.k2() {
            out.set_up_closed(mask.count_ones() as usize, m1, m2);
        }
    }
    Ok(out)
}

/// One y-table bit by direct enumeration of all colorings of γ(t) that
/// extend the boundary coloring.
///
/// A coloring is accepted when, under the side translation for `v`, exactly
/// `mu` vertices of γ(t) land in V1, forced vertices land on their side,
/// the same-side edge copies inside γ(t) stay within l1 and l2, and the
/// differently colored adjacent pairs are exactly the same-side adjacent
/// pairs.
pub fn brute_force_y(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    t: usize,
    usigma: &[usize],
    v: ColorVector,
    mu: usize,
    l1: usize,
    l2: usize,
) -> Result<bool, Error> {
    brute_force_y_gated(inst, td, t, usigma, v, mu, l1, l2, OracleGate::default())
}

#[allow(clippy::too_many_arguments)]
pub fn brute_force_y_gated(
    inst: &AbcInstance,
    td: &TreeDecomposition,
    t: usize,
    usigma: &[usize],
    v: ColorVector,
    mu: usize,
    l1: usize,
    l2: usize,
    gate: OracleGate,
) -> Result<bool, Error> {
    let sigma = td.sigma(t);
    let gamma = td.gamma(t);
    if usigma.len() != sigma.len() {
        return Err(Error::invalid("boundary coloring length mismatch"));
    }
    let colors = inst.k() + 1;
    if usigma.iter().any(|&c| c >= colors) {
        return Err(Error::invalid("boundary color out of range"));
    }
    let free: Vec<usize> = gamma
        .iter()
        .copied()
        .filter(|u| sigma.binary_search(u).is_err())
        .collect();
    let total = (colors as u64)
        .checked_pow(free.len() as u32)
        .filter(|&c| c <= gate.max_assignments)
        .ok_or_else(|| Error::gate("too many color assignments to enumerate"))?;

    let mut color = vec![usize::MAX; inst.g().n()];
    for (&u, &c) in sigma.iter().zip(usigma) {
        color[u] = c;
    }
    let mut in_gamma = vec![false; inst.g().n()];
    for &u in &gamma {
        in_gamma[u] = true;
    }
    for idx in 0..total {
        let mut rem = idx;
        for &u in &free {
            color[u] = (rem % colors as u64) as usize;
            rem /= colors as u64;
        }
        if check_y_conditions(inst, &gamma, &in_gamma, &color, v, mu, l1, l2) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[allow(clippy::too_many_arguments)]
fn check_y_conditions(
    inst: &AbcInstance,
    gamma: &[usize],
    in_gamma: &[bool],
    color: &[usize],
    v: ColorVector,
    mu: usize,
    l1: usize,
    l2: usize,
) -> bool {
    let side = |u: usize| translate(inst.in_left(u), color[u], v);
    let v1_count = gamma.iter().filter(|&&u| side(u) == Side::V1).count();
    if v1_count != mu {
        return false;
    }
    for &u in inst.a() {
        if in_gamma[u] && side(u) != Side::V1 {
            return false;
        }
    }
    for &u in inst.b() {
        if in_gamma[u] && side(u) != Side::V2 {
            return false;
        }
    }
    let mut same1 = 0;
    let mut same2 = 0;
    for &(p, q) in inst.g().edges() {
        if !in_gamma[p] || !in_gamma[q] {
            continue;
        }
        let same_side = side(p) == side(q);
        if (color[p] != color[q]) != same_side {
            return false;
        }
        if same_side {
            if side(p) == Side::V1 {
                same1 += 1;
            } else {
                same2 += 1;
            }
        }
    }
    same1 <= l1 && same2 <= l2
}
