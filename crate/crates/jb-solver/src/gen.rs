//! Test-instance generation.
//!
//! Everything here is deterministic: random generators draw from a caller
//! supplied ChaCha stream (see `rng_from_env`), and the exhaustive generator
//! enumerates connected simple graphs once per isomorphism class via a
//! refinement-based canonical code. Generated instances feed the oracle
//! comparison suites and never influence solver behavior.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::env;

use jb_core::{Error, Hypergraph, MultiGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hp::solve::DisjointSets;
use crate::hp::{coloring_at, HPInstance, PaintingFunction};
use crate::table::{Caps, Table};

/// Seeded generator stream; the JP_SEED environment variable overrides the
/// default so failures can be replayed.
pub fn rng_from_env(default_seed: u64) -> ChaCha8Rng {
    let seed = env::var("JP_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(default_seed);
    ChaCha8Rng::seed_from_u64(seed)
}

/// Path on n vertices.
pub fn path(n: usize) -> MultiGraph {
    let mut g = MultiGraph::empty(n);
    for v in 1..n {
        g.push_edge(v - 1, v).unwrap();
    }
    g
}

/// Cycle on n >= 3 vertices.
pub fn cycle(n: usize) -> MultiGraph {
    let mut g = path(n);
    g.push_edge(n - 1, 0).unwrap();
    g
}

/// Complete simple graph.
pub fn complete(n: usize) -> MultiGraph {
    let mut g = MultiGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.push_edge(u, v).unwrap();
        }
    }
    g
}

/// Theta graph: vertices 0 and 1 joined by three internally disjoint paths
/// with a, b, and c inner vertices. Zero inner vertices degenerate to a
/// parallel edge.
pub fn theta(a: usize, b: usize, c: usize) -> MultiGraph {
    let mut g = MultiGraph::empty(2 + a + b + c);
    let mut next = 2;
    for len in [a, b, c] {
        let mut prev = 0;
        for _ in 0..len {
            g.push_edge(prev, next).unwrap();
            prev = next;
            next += 1;
        }
        g.push_edge(prev, 1).unwrap();
    }
    g
}

/// Random multigraph with 1..=n_max vertices and up to m_max edges; repeats
/// allowed, sampled self-loops are dropped.
pub fn random_multigraph(rng: &mut impl Rng, n_max: usize, m_max: usize) -> MultiGraph {
    let n = rng.gen_range(1..=n_max);
    let mut g = MultiGraph::empty(n);
    if n < 2 {
        return g;
    }
    for _ in 0..rng.gen_range(0..=m_max) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.push_edge(u, v).unwrap();
        }
    }
    g
}

/// Random connected multigraph on exactly n vertices: a uniform recursive
/// tree plus up to `extra` additional edges.
pub fn random_connected(rng: &mut impl Rng, n: usize, extra: usize) -> MultiGraph {
    let mut g = MultiGraph::empty(n);
    for v in 1..n {
        g.push_edge(rng.gen_range(0..v), v).unwrap();
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                g.push_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random connected bipartite multigraph: random side per vertex, a
/// crossing spanning tree, and up to `extra` crossing edges.
pub fn random_connected_bipartite(rng: &mut impl Rng, n: usize, extra: usize) -> MultiGraph {
    let mut side = vec![false; n];
    for s in side.iter_mut().skip(1) {
        *s = rng.gen_bool(0.5);
    }
    let mut g = MultiGraph::empty(n);
    for v in 1..n {
        let mut opp: Vec<usize> = (0..v).filter(|&u| side[u] != side[v]).collect();
        if opp.is_empty() {
            side[v] = !side[v];
            opp = (0..v).collect();
        }
        g.push_edge(opp[rng.gen_range(0..opp.len())], v).unwrap();
    }
    let left: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    let right: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
    if !left.is_empty() && !right.is_empty() {
        for _ in 0..extra {
            let u = left[rng.gen_range(0..left.len())];
            let v = right[rng.gen_range(0..right.len())];
            g.push_edge(u, v).unwrap();
        }
    }
    g
}

/// Random disjoint pinned sets over 0..n; each vertex joins the first set,
/// the second, or neither.
pub fn random_pinned_sets(rng: &mut impl Rng, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for v in 0..n {
        match rng.gen_range(0..4) {
            0 => a.push(v),
            1 => b.push(v),
            _ => {}
        }
    }
    (a, b)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut sub in permutations(&rest) {
            sub.insert(0, x);
            out.push(sub);
        }
    }
    out
}

/// Minimum adjacency code over all vertex orders compatible with the stable
/// degree-refinement partition. Two simple graphs share a code exactly when
/// they are isomorphic.
fn canonical_code(n: usize, rows: &[u64]) -> u64 {
    let mut color = vec![0usize; n];
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&u| rows[v] >> u & 1 == 1)
                    .map(|u| color[u])
                    .collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort_unstable();
        uniq.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| uniq.binary_search(s).unwrap()).collect();
        if next == color {
            break;
        }
        color = next;
    }
    let ncolors = color.iter().copied().max().unwrap_or(0) + 1;
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncolors];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    let cell_perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c)).collect();
    let mut idx = vec![0usize; cells.len()];
    let mut best = u64::MAX;
    loop {
        let mut order = Vec::with_capacity(n);
        for (ci, perms) in cell_perms.iter().enumerate() {
            order.extend_from_slice(&perms[idx[ci]]);
        }
        let mut code = 0u64;
        let mut bit = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if rows[order[i]] >> order[j] & 1 == 1 {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
        let mut c = 0;
        loop {
            if c == idx.len() {
                return best;
            }
            idx[c] += 1;
            if idx[c] < cell_perms[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

/// Every connected simple graph on exactly n vertices with at most m_cap
/// edges, one representative per isomorphism class, in mask order of the
/// first representative encountered.
pub fn connected_graphs_up_to_iso(n: usize, m_cap: usize) -> Result<Vec<MultiGraph>, Error> {
    if n == 0 || n > 7 {
        return Err(Error::gate(format!(
            "exhaustive generation supports 1 <= n <= 7, got n = {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let np = pairs.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << np {
        if mask.count_ones() as usize > m_cap {
            continue;
        }
        let mut uf = DisjointSets::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                uf.union(u, v);
            }
        }
        if (0..n).filter(|&v| uf.find(v) == v).count() != 1 {
            continue;
        }
        let mut rows = vec![0u64; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                rows[u] |= 1 << v;
                rows[v] |= 1 << u;
            }
        }
        if seen.insert(canonical_code(n, &rows)) {
            let mut g = MultiGraph::empty(n);
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.push_edge(u, v).unwrap();
                }
            }
            out.push(g);
        }
    }
    Ok(out)
}

/// Exhaustive connected simple graphs for all vertex counts up to n_max.
pub fn all_connected_up_to(n_max: usize, m_cap: usize) -> Result<Vec<MultiGraph>, Error> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(connected_graphs_up_to_iso(n, m_cap)?);
    }
    Ok(out)
}

/// Menus built from a per-coloring cell function; colorings mapped to None
/// get no menu entry.
pub fn menus_from_fn(
    len: usize,
    k1: usize,
    k2: usize,
    caps: Caps,
    f: impl Fn(&[usize]) -> Option<(usize, usize, usize)>,
) -> PaintingFunction {
    let base = k1 + k2 + 1;
    let mut menus = BTreeMap::new();
    for idx in 0..base.pow(len as u32) {
        let colors = coloring_at(idx, base, len);
        if let Some((mu, l1, l2)) = f(&colors) {
            let t = Table::point(caps, mu, l1, l2);
            if t.any() {
                menus.insert(idx, t);
            }
        }
    }
    PaintingFunction::Menus(menus)
}

/// Favorable painting instance shaped like the pipeline's construction:
/// singleton hyperedges place their vertex by color parity, pair hyperedges
/// are free on equal colors and cost one budget unit otherwise.
pub fn partition_instance(
    n: usize,
    pairs: &[(usize, usize)],
    k1: usize,
    k2: usize,
) -> HPInstance {
    let shape = Shape {
        n,
        modes: vec![0; n],
        pairs: pairs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect(),
        charge_first: pairs.iter().map(|&(u, v)| u.min(v) % 2 == 0).collect(),
    };
    shape_instance(&shape, k1, k2)
}

/// Structure behind a synthetic favorable instance: one singleton hyperedge
/// per vertex with a placement mode, one pair hyperedge per listed pair with
/// a fixed budget side for multichromatic colorings.
struct Shape {
    n: usize,
    modes: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    charge_first: Vec<bool>,
}

fn shape_instance(shape: &Shape, k1: usize, k2: usize) -> HPInstance {
    let n = shape.n;
    let caps = Caps::new(n, k1, k2);
    let mut edges: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut paint: Vec<PaintingFunction> = (0..n)
        .map(|v| {
            let mode = shape.modes[v];
            menus_from_fn(1, k1, k2, caps, move |c| match mode {
                0 => Some((usize::from(c[0] % 2 == 0), 0, 0)),
                1 => Some((usize::from(c[0] == 0), 0, 0)),
                _ => Some((0, 0, 0)),
            })
        })
        .collect();
    for (i, &(u, v)) in shape.pairs.iter().enumerate() {
        edges.push(vec![u, v]);
        let first = shape.charge_first[i];
        // Multichromatic pair colorings always cost one unit, which keeps
        // the instance favorable.
        paint.push(menus_from_fn(2, k1, k2, caps, move |c| {
            if c[0] == c[1] {
                Some((0, 0, 0))
            } else if first {
                Some((0, 1, 0))
            } else {
                Some((0, 0, 1))
            }
        }));
    }
    let m = edges.len();
    let h = Hypergraph::new(n, edges).unwrap();
    HPInstance::new(k1, k2, n, 2, m.max(12), h, paint).unwrap()
}

fn sample_shape(rng: &mut impl Rng, n_max: usize) -> Shape {
    let n = rng.gen_range(2..=n_max);
    let extra = rng.gen_range(0..=n / 2);
    let g = random_connected(rng, n, extra);
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    Shape {
        n,
        modes: (0..n).map(|_| rng.gen_range(0..3)).collect(),
        charge_first: (0..pairs.len()).map(|_| rng.gen_bool(0.5)).collect(),
        pairs,
    }
}

/// Random synthetic favorable instance with 2..=n_max vertices.
pub fn random_favorable_instance(
    rng: &mut impl Rng,
    n_max: usize,
    k1: usize,
    k2: usize,
) -> HPInstance {
    shape_instance(&sample_shape(rng, n_max), k1, k2)
}

/// Random favorable instance together with a planted coloring the instance
/// accepts within its budgets. Falls back to the all-zero coloring when
/// rejection sampling finds nothing cheaper.
pub fn planted_instance(
    rng: &mut impl Rng,
    n_max: usize,
    k1: usize,
    k2: usize,
) -> (HPInstance, Vec<usize>) {
    let shape = sample_shape(rng, n_max);
    let k = k1 + k2;
    let mut planted = vec![0usize; shape.n];
    for _ in 0..64 {
        let colors: Vec<usize> = (0..shape.n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    0
                } else {
                    rng.gen_range(0..=k)
                }
            })
            .collect();
        let mut cost = (0usize, 0usize);
        for (i, &(u, v)) in shape.pairs.iter().enumerate() {
            if colors[u] != colors[v] {
                if shape.charge_first[i] {
                    cost.0 += 1;
                } else {
                    cost.1 += 1;
                }
            }
        }
        if cost.0 <= k1 && cost.1 <= k2 {
            planted = colors;
            break;
        }
    }
    (shape_instance(&shape, k1, k2), planted)
}
