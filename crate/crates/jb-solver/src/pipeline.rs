//! End-to-end judicious bipartition solvers on multigraphs.
//!
//! The balanced solver reduces to the annotated bipartite problem. Any
//! feasible partition leaves at most k1 + k2 monochromatic edges, so the
//! graph has an odd cycle transversal of size at most k1 + k2. The solver
//! branches on the side split F of the transversal S, replaces S by four
//! pinned gadget vertices carrying the S-to-rest edges, and queries the
//! bipartite solver once per split. Edges inside F and inside S without F
//! are paid up front; edges between the two transversal sides are cut and
//! cost nothing.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use jb_core::{oct, Error, MultiGraph, TreeDecomposition};

use crate::abc::{abc_witness, solve_abcbjb_with, AbcInstance, BuiltHp, Side};
use crate::hp::solve::conv_backtrack;
use crate::table::{AJPTable, Caps, Table};

/// Balanced judicious bipartition query: |V1| = mu, e(V1) <= k1, e(V2) <= k2.
#[derive(Clone, Debug)]
pub struct BjbInstance {
    pub g: MultiGraph,
    pub mu: usize,
    pub k1: usize,
    pub k2: usize,
}

impl BjbInstance {
    pub fn new(g: MultiGraph, mu: usize, k1: usize, k2: usize) -> Self {
        BjbInstance { g, mu, k1, k2 }
    }
}

/// Annotated balanced query on a bipartite graph: additionally A is inside
/// V1 and B is inside V2. The graph may be disconnected.
#[derive(Clone, Debug)]
pub struct AbBjbInstance {
    pub g: MultiGraph,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub mu: usize,
    pub k1: usize,
    pub k2: usize,
}

impl AbBjbInstance {
    pub fn new(
        g: MultiGraph,
        a: Vec<usize>,
        b: Vec<usize>,
        mu: usize,
        k1: usize,
        k2: usize,
    ) -> Self {
        AbBjbInstance {
            g,
            a,
            b,
            mu,
            k1,
            k2,
        }
    }
}

/// Counters filled in by the solvers.
#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    /// Size of the odd cycle transversal, when one within budget exists.
    pub oct_size: Option<usize>,
    /// Transversal splits evaluated before the answer was known.
    pub branches: u64,
    /// Painting instances compiled across all tree nodes and color vectors.
    pub hp_calls: u64,
    pub elapsed: Duration,
}

/// Solver verdict plus an optional verified partition (V1, V2).
#[derive(Clone, Debug)]
pub struct SolveAnswer {
    pub yes: bool,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub stats: SolveStats,
}

impl SolveAnswer {
    fn no(stats: SolveStats) -> Self {
        SolveAnswer {
            yes: false,
            witness: None,
            stats,
        }
    }
}

/// Checks a balanced judicious bipartition witness against the instance.
pub fn check_bjb_witness(
    g: &MultiGraph,
    mu: usize,
    k1: usize,
    k2: usize,
    v1: &[usize],
    v2: &[usize],
) -> bool {
    let mut seen = vec![0u8; g.n()];
    for &v in v1 {
        if v >= g.n() {
            return false;
        }
        seen[v] += 1;
    }
    for &v in v2 {
        if v >= g.n() {
            return false;
        }
        seen[v] += 1;
    }
    if seen.iter().any(|&c| c != 1) || v1.len() != mu {
        return false;
    }
    let mask: Vec<bool> = (0..g.n()).map(|v| v1.contains(&v)).collect();
    let inv: Vec<bool> = mask.iter().map(|&b| !b).collect();
    g.edges_within(&mask) <= k1 && g.edges_within(&inv) <= k2
}

/// Same check with the annotation: A inside V1 and B inside V2.
pub fn check_abbjb_witness(inst: &AbBjbInstance, v1: &[usize], v2: &[usize]) -> bool {
    check_bjb_witness(&inst.g, inst.mu, inst.k1, inst.k2, v1, v2)
        && inst.a.iter().all(|v| v1.contains(v))
        && inst.b.iter().all(|v| v2.contains(v))
}

/// One transversal split compiled to an annotated bipartite instance.
///
/// Vertex ids 0..map.len() are the surviving original vertices; the last
/// four ids are the gadget vertices w, x, y, z in that order. Every edge
/// between a survivor u and a transversal vertex becomes one gadget edge
/// per copy: to w or x when the transversal endpoint is in F, to y or z
/// otherwise, picking the gadget endpoint on the opposite bipartition class
/// of u so the gadget graph stays bipartite.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub g: MultiGraph,
    /// Forced V1 gadget vertices {w, x}.
    pub a: Vec<usize>,
    /// Forced V2 gadget vertices {y, z}.
    pub b: Vec<usize>,
    /// Gadget id to original id, for the survivors only.
    pub map: Vec<usize>,
    /// Transversal vertices placed in V1, original ids, sorted.
    pub f: Vec<usize>,
    /// Transversal vertices placed in V2, original ids, sorted.
    pub rest: Vec<usize>,
    /// Edge copies inside F.
    pub l1: usize,
    /// Edge copies inside the transversal minus F.
    pub l2: usize,
}

/// Builds the gadget for the split of `s` selected by `f_mask` (bit i picks
/// s[i] for V1). `s` must be sorted, duplicate free, and leave a bipartite
/// remainder.
pub fn build_gadget(g: &MultiGraph, s: &[usize], f_mask: u64) -> Result<Gadget, Error> {
    if s.len() > 63 {
        return Err(Error::gate("transversal too large to enumerate splits"));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&v| v >= g.n()) {
        return Err(Error::invalid("transversal must be sorted distinct vertex ids"));
    }
    let mut f = Vec::new();
    let mut rest = Vec::new();
    for (i, &v) in s.iter().enumerate() {
        if f_mask >> i & 1 == 1 {
            f.push(v);
        } else {
            rest.push(v);
        }
    }
    let (core, map) = g.without(s);
    let bip = core
        .find_bipartition()
        .ok_or_else(|| Error::invalid("graph minus transversal is not bipartite"))?;
    let mut in_p = vec![false; core.n()];
    for &v in &bip.p {
        in_p[v] = true;
    }
    let mut core_id = vec![usize::MAX; g.n()];
    for (new, &old) in map.iter().enumerate() {
        core_id[old] = new;
    }
    let base = core.n();
    let (w, x, y, z) = (base, base + 1, base + 2, base + 3);
    let mut gg = MultiGraph::empty(base + 4);
    for &(u, v) in core.edges() {
        gg.push_edge(u, v)?;
    }
    let mut l1 = 0;
    let mut l2 = 0;
    for &(u, v) in g.edges() {
        let (cu, cv) = (core_id[u], core_id[v]);
        match (cu == usize::MAX, cv == usize::MAX) {
            (false, false) => {}
            (true, true) => {
                let uf = f.binary_search(&u).is_ok();
                let vf = f.binary_search(&v).is_ok();
                if uf && vf {
                    l1 += 1;
                } else if !uf && !vf {
                    l2 += 1;
                }
            }
            (in_s_u, _) => {
                let (sv, c) = if in_s_u { (u, cv) } else { (v, cu) };
                let pin = match (f.binary_search(&sv).is_ok(), in_p[c]) {
                    (true, true) => w,
                    (true, false) => x,
                    (false, false) => y,
                    (false, true) => z,
                };
                gg.push_edge(c, pin)?;
            }
        }
    }
    debug_assert!(gg.is_bipartite());
    Ok(Gadget {
        g: gg,
        a: vec![w, x],
        b: vec![y, z],
        map,
        f,
        rest,
        l1,
        l2,
    })
}

/// One connected component of an annotated instance, solved to a full table.
struct CompSolve {
    inst: AbcInstance,
    td: TreeDecomposition,
    /// Local id to id in the enclosing graph.
    verts: Vec<usize>,
    table: AJPTable,
}

fn component_tables(
    g: &MultiGraph,
    a: &[usize],
    b: &[usize],
    k1: usize,
    k2: usize,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<Vec<CompSolve>, Error> {
    let mut comps = Vec::new();
    for comp in g.connected_components() {
        let (sub, verts) = g.induced(&comp);
        let local = |set: &[usize]| -> Vec<usize> {
            set.iter()
                .filter_map(|v| verts.binary_search(v).ok())
                .collect()
        };
        let inst = AbcInstance::new(sub, local(a), local(b), k1, k2)?;
        let td = TreeDecomposition::trivial(inst.g())?;
        let table = solve_abcbjb_with(&inst, &td, hook)?;
        comps.push(CompSolve {
            inst,
            td,
            verts,
            table,
        });
    }
    Ok(comps)
}

/// Convolution of all component tables, sized to the whole vertex set.
fn combine(comps: &[CompSolve], n: usize, k1: usize, k2: usize) -> AJPTable {
    let mut acc = AJPTable::point(Caps::new(0, k1, k2), 0, 0, 0);
    for c in comps {
        let b = (acc.b() + c.table.b()).min(n);
        acc = acc.convolve(&c.table, b);
    }
    acc
}

/// Splits one global cell across components and extracts per-vertex sides.
fn composed_witness(
    comps: &[CompSolve],
    n: usize,
    k1: usize,
    k2: usize,
    mu: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>)>, Error> {
    let caps = Caps::new(n, k1, k2);
    let factors: Vec<Table> = comps
        .iter()
        .map(|c| Table::dense(c.table.clone()))
        .collect();
    let Some(cells) = conv_backtrack(&factors, caps, (mu, k1, k2)) else {
        return Ok(None);
    };
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for (c, &(m, l1, l2)) in comps.iter().zip(&cells) {
        let sides = abc_witness(&c.inst, &c.td, m, l1, l2)?
            .ok_or_else(|| Error::invalid("internal: component cell lost its witness"))?;
        for (local, side) in sides.iter().enumerate() {
            match side {
                Side::V1 => v1.push(c.verts[local]),
                Side::V2 => v2.push(c.verts[local]),
            }
        }
    }
    v1.sort_unstable();
    v2.sort_unstable();
    Ok(Some((v1, v2)))
}

/// Solves the annotated balanced problem by convolving component tables.
pub fn solve_abbjb(inst: &AbBjbInstance) -> Result<SolveAnswer, Error> {
    solve_abbjb_with(inst, &mut |_| {})
}

/// Same with a hook on every compiled painting instance.
pub fn solve_abbjb_with(
    inst: &AbBjbInstance,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<SolveAnswer, Error> {
    let start = Instant::now();
    let mut hp_calls = 0;
    let mut counting = |h: &BuiltHp| {
        hp_calls += 1;
        hook(h);
    };
    let n = inst.g.n();
    let comps = component_tables(&inst.g, &inst.a, &inst.b, inst.k1, inst.k2, &mut counting)?;
    let total = combine(&comps, n, inst.k1, inst.k2);
    let yes = inst.mu <= n && total.get(inst.mu, inst.k1, inst.k2);
    let witness = if yes {
        let got = composed_witness(&comps, n, inst.k1, inst.k2, inst.mu)?;
        debug_assert!(got.is_some());
        got
    } else {
        None
    };
    if let Some((v1, v2)) = &witness {
        if !check_abbjb_witness(inst, v1, v2) {
            return Err(Error::invalid("internal: assembled witness failed its check"));
        }
    }
    Ok(SolveAnswer {
        yes,
        witness,
        stats: SolveStats {
            oct_size: None,
            branches: 1,
            hp_calls,
            elapsed: start.elapsed(),
        },
    })
}

/// Evaluates one transversal split: builds the gadget, solves the annotated
/// instance, and assembles the original-graph witness on success.
fn eval_branch(
    g: &MultiGraph,
    s: &[usize],
    mask: u64,
    mu: usize,
    k1: usize,
    k2: usize,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<Option<(Vec<usize>, Vec<usize>)>, Error> {
    let gadget = build_gadget(g, s, mask)?;
    if gadget.l1 > k1 || gadget.l2 > k2 || mu < gadget.f.len() {
        return Ok(None);
    }
    let (k1r, k2r) = (k1 - gadget.l1, k2 - gadget.l2);
    let mu2 = mu - gadget.f.len() + 2;
    let ng = gadget.g.n();
    if mu2 > ng {
        return Ok(None);
    }
    let comps = component_tables(&gadget.g, &gadget.a, &gadget.b, k1r, k2r, hook)?;
    let total = combine(&comps, ng, k1r, k2r);
    if !total.get(mu2, k1r, k2r) {
        return Ok(None);
    }
    let (gv1, gv2) = composed_witness(&comps, ng, k1r, k2r, mu2)?
        .ok_or_else(|| Error::invalid("internal: branch cell lost its witness"))?;
    Ok(Some(map_back(&gadget, &gv1, &gv2)))
}

/// Lifts a gadget-graph partition back to the original graph: survivors map
/// through the gadget vertex map, the four pinned vertices are dropped, and
/// the transversal split is appended.
fn map_back(gadget: &Gadget, gv1: &[usize], gv2: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let survivors = gadget.map.len();
    let mut v1: Vec<usize> = gv1
        .iter()
        .filter(|&&v| v < survivors)
        .map(|&v| gadget.map[v])
        .collect();
    let mut v2: Vec<usize> = gv2
        .iter()
        .filter(|&&v| v < survivors)
        .map(|&v| gadget.map[v])
        .collect();
    v1.extend_from_slice(&gadget.f);
    v2.extend_from_slice(&gadget.rest);
    v1.sort_unstable();
    v2.sort_unstable();
    (v1, v2)
}

/// Solves balanced judicious bipartition.
pub fn solve_bjb(inst: &BjbInstance) -> Result<SolveAnswer, Error> {
    solve_bjb_with(inst, &mut |_| {})
}

/// Sequential solve with a hook on every compiled painting instance.
pub fn solve_bjb_with(
    inst: &BjbInstance,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<SolveAnswer, Error> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if inst.mu > inst.g.n() {
        stats.elapsed = start.elapsed();
        return Ok(SolveAnswer::no(stats));
    }
    let Some(s) = oct::solve_oct(&inst.g, inst.k1 + inst.k2) else {
        stats.elapsed = start.elapsed();
        return Ok(SolveAnswer::no(stats));
    };
    stats.oct_size = Some(s.len());
    let mut hp_calls = 0;
    let mut counting = |h: &BuiltHp| {
        hp_calls += 1;
        hook(h);
    };
    let mut hit = None;
    for mask in 0..1u64 << s.len() {
        stats.branches += 1;
        if let Some(cut) = eval_branch(&inst.g, &s, mask, inst.mu, inst.k1, inst.k2, &mut counting)?
        {
            hit = Some(cut);
            break;
        }
    }
    stats.hp_calls = hp_calls;
    stats.elapsed = start.elapsed();
    finish_bjb(inst, hit, stats)
}

/// Parallel solve: transversal splits are distributed over worker threads
/// in stride order and the lowest-numbered feasible split wins, so the
/// answer matches the sequential solver.
pub fn solve_bjb_threads(inst: &BjbInstance, threads: usize) -> Result<SolveAnswer, Error> {
    if threads <= 1 {
        return solve_bjb(inst);
    }
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if inst.mu > inst.g.n() {
        stats.elapsed = start.elapsed();
        return Ok(SolveAnswer::no(stats));
    }
    let Some(s) = oct::solve_oct(&inst.g, inst.k1 + inst.k2) else {
        stats.elapsed = start.elapsed();
        return Ok(SolveAnswer::no(stats));
    };
    stats.oct_size = Some(s.len());
    let total = 1u64 << s.len();
    let workers = threads.min(total as usize).max(1);
    let best = AtomicU64::new(u64::MAX);
    let branches = AtomicU64::new(0);
    let hp_calls = AtomicU64::new(0);
    let hits: Mutex<Vec<(u64, (Vec<usize>, Vec<usize>))>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| -> Result<(), Error> {
        let mut handles = Vec::new();
        for t in 0..workers {
            let (s, best, branches, hp_calls, hits) = (&s, &best, &branches, &hp_calls, &hits);
            handles.push(scope.spawn(move || -> Result<(), Error> {
                let mut count = |_: &BuiltHp| {
                    hp_calls.fetch_add(1, Ordering::Relaxed);
                };
                let mut mask = t as u64;
                while mask < total {
                    // Masks ascend within a worker, so once a better hit
                    // exists everything further is beaten too.
                    if mask >= best.load(Ordering::Relaxed) {
                        break;
                    }
                    branches.fetch_add(1, Ordering::Relaxed);
                    if let Some(cut) =
                        eval_branch(&inst.g, s, mask, inst.mu, inst.k1, inst.k2, &mut count)?
                    {
                        best.fetch_min(mask, Ordering::Relaxed);
                        hits.lock().unwrap().push((mask, cut));
                        break;
                    }
                    mask += workers as u64;
                }
                Ok(())
            }));
        }
        for h in handles {
            h.join().expect("branch worker panicked")?;
        }
        Ok(())
    })?;
    stats.branches = branches.load(Ordering::Relaxed);
    stats.hp_calls = hp_calls.load(Ordering::Relaxed);
    stats.elapsed = start.elapsed();
    let hit = hits
        .into_inner()
        .unwrap()
        .into_iter()
        .min_by_key(|&(mask, _)| mask)
        .map(|(_, cut)| cut);
    finish_bjb(inst, hit, stats)
}

fn finish_bjb(
    inst: &BjbInstance,
    hit: Option<(Vec<usize>, Vec<usize>)>,
    stats: SolveStats,
) -> Result<SolveAnswer, Error> {
    match hit {
        None => Ok(SolveAnswer::no(stats)),
        Some((v1, v2)) => {
            if !check_bjb_witness(&inst.g, inst.mu, inst.k1, inst.k2, &v1, &v2) {
                return Err(Error::invalid("internal: assembled witness failed its check"));
            }
            Ok(SolveAnswer {
                yes: true,
                witness: Some((v1, v2)),
                stats,
            })
        }
    }
}

/// One precomputed transversal split for the unbalanced sweep. The table
/// answers every size query at once.
struct JbBranch {
    gadget: Gadget,
    k1r: usize,
    k2r: usize,
    table: AJPTable,
}

fn jb_branch(
    g: &MultiGraph,
    s: &[usize],
    mask: u64,
    k1: usize,
    k2: usize,
    hook: &mut dyn FnMut(&BuiltHp),
) -> Result<Option<JbBranch>, Error> {
    let gadget = build_gadget(g, s, mask)?;
    if gadget.l1 > k1 || gadget.l2 > k2 {
        return Ok(None);
    }
    let (k1r, k2r) = (k1 - gadget.l1, k2 - gadget.l2);
    let ng = gadget.g.n();
    let comps = component_tables(&gadget.g, &gadget.a, &gadget.b, k1r, k2r, hook)?;
    let table = combine(&comps, ng, k1r, k2r);
    Ok(Some(JbBranch {
        gadget,
        k1r,
        k2r,
        table,
    }))
}

/// Yes/no answers for every V1 size at once; entry mu matches `solve_bjb`
/// on (g, mu, k1, k2). Branch tables are built once and shared by all
/// sizes.
pub fn solve_bjb_all_mu(g: &MultiGraph, k1: usize, k2: usize) -> Result<Vec<bool>, Error> {
    let mut out = vec![false; g.n() + 1];
    let Some(s) = oct::solve_oct(g, k1 + k2) else {
        return Ok(out);
    };
    for mask in 0..1u64 << s.len() {
        let Some(br) = jb_branch(g, &s, mask, k1, k2, &mut |_| {})? else {
            continue;
        };
        let f_len = br.gadget.f.len();
        for (mu, hit) in out.iter_mut().enumerate() {
            if *hit || mu < f_len {
                continue;
            }
            let mu2 = mu - f_len + 2;
            if mu2 <= br.gadget.g.n() && br.table.get(mu2, br.k1r, br.k2r) {
                *hit = true;
            }
        }
    }
    Ok(out)
}

/// Solves judicious bipartition: is there any V1 size with both side budgets
/// respected? Returns the witness for the smallest feasible |V1|.
pub fn solve_jb(g: &MultiGraph, k1: usize, k2: usize) -> Result<SolveAnswer, Error> {
    solve_jb_threads(g, k1, k2, 1)
}

/// Parallel variant; branch tables are built concurrently, the size sweep
/// stays deterministic.
pub fn solve_jb_threads(
    g: &MultiGraph,
    k1: usize,
    k2: usize,
    threads: usize,
) -> Result<SolveAnswer, Error> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let Some(s) = oct::solve_oct(g, k1 + k2) else {
        stats.elapsed = start.elapsed();
        return Ok(SolveAnswer::no(stats));
    };
    stats.oct_size = Some(s.len());
    let total = 1u64 << s.len();
    let mut branches: Vec<(u64, JbBranch)> = Vec::new();
    if threads <= 1 {
        let mut hp_calls = 0;
        let mut count = |_: &BuiltHp| hp_calls += 1;
        for mask in 0..total {
            if let Some(br) = jb_branch(g, &s, mask, k1, k2, &mut count)? {
                branches.push((mask, br));
            }
        }
        stats.hp_calls = hp_calls;
    } else {
        let workers = threads.min(total as usize).max(1);
        let hp_calls = AtomicU64::new(0);
        let out: Mutex<Vec<(u64, JbBranch)>> = Mutex::new(Vec::new());
        std::thread::scope(|scope| -> Result<(), Error> {
            let mut handles = Vec::new();
            for t in 0..workers {
                let (s, hp_calls, out) = (&s, &hp_calls, &out);
                handles.push(scope.spawn(move || -> Result<(), Error> {
                    let mut count = |_: &BuiltHp| {
                        hp_calls.fetch_add(1, Ordering::Relaxed);
                    };
                    let mut mask = t as u64;
                    while mask < total {
                        if let Some(br) = jb_branch(g, s, mask, k1, k2, &mut count)? {
                            out.lock().unwrap().push((mask, br));
                        }
                        mask += workers as u64;
                    }
                    Ok(())
                }));
            }
            for h in handles {
                h.join().expect("branch worker panicked")?;
            }
            Ok(())
        })?;
        branches = out.into_inner().unwrap();
        branches.sort_by_key(|&(mask, _)| mask);
        stats.hp_calls = hp_calls.load(Ordering::Relaxed);
    }
    stats.branches = total;
    for mu in 0..=g.n() {
        for (_, br) in &branches {
            let f_len = br.gadget.f.len();
            if mu < f_len {
                continue;
            }
            let mu2 = mu - f_len + 2;
            if mu2 > br.gadget.g.n() || !br.table.get(mu2, br.k1r, br.k2r) {
                continue;
            }
            let gg = &br.gadget.g;
            let comps =
                component_tables(gg, &br.gadget.a, &br.gadget.b, br.k1r, br.k2r, &mut |_| {})?;
            let (gv1, gv2) = composed_witness(&comps, gg.n(), br.k1r, br.k2r, mu2)?
                .ok_or_else(|| Error::invalid("internal: branch cell lost its witness"))?;
            let (v1, v2) = map_back(&br.gadget, &gv1, &gv2);
            if !check_bjb_witness(g, mu, k1, k2, &v1, &v2) {
                return Err(Error::invalid("internal: assembled witness failed its check"));
            }
            stats.elapsed = start.elapsed();
            return Ok(SolveAnswer {
                yes: true,
                witness: Some((v1, v2)),
                stats,
            });
        }
    }
    stats.elapsed = start.elapsed();
    Ok(SolveAnswer::no(stats))
}
