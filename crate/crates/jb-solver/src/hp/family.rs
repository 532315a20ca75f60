//! Painting via derandomized assignment families.
//!
//! An assignment pins a subset of the hyperedges, each to one of its
//! candidate colorings; the remaining hyperedges stay free. Pinning induces
//! a link graph on the vertices whose components any compatible coloring
//! must respect, and after normalization the components can be colored
//! almost independently. The family built here is rich enough that every
//! accepting coloring of a favorable instance is compatible with at least
//! one member, so OR-ing the per-assignment tables recovers the full
//! painting table. This is a second route to the same table as
//! `solve_hp_favorable` with a very different shape, which makes the two
//! useful as cross-checks.

use std::collections::{BTreeMap, BTreeSet};

use jb_core::{derand, Error};

use super::solve::DisjointSets;
use super::{enumerate_candidate_colorings, HPInstance};
use crate::table::{AJPTable, Table};

/// Upper bound on (cover set, pin function) combinations per family.
const FAMILY_GATE: u128 = 2_000_000;

/// Unit budget for one family solve; roughly one menu convolution per unit.
const FAMILY_WORK_GATE: u64 = 50_000_000;

/// Pin vector over the hyperedges: 0 leaves a hyperedge free, i > 0 pins it
/// to the i-th entry of its candidate coloring list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    pub pins: Vec<usize>,
}

/// Candidate coloring list per hyperedge, in enumeration order. Pins are
/// 1-based indices into these lists.
pub fn candidate_lists(inst: &HPInstance) -> Result<Vec<Vec<Vec<usize>>>, Error> {
    inst.h()
        .edges()
        .iter()
        .map(|e| enumerate_candidate_colorings(e.len(), inst.k()))
        .collect()
}

/// Builds the assignment family. For every way of choosing at most k
/// hyperedges to pin, a candidate per pinned hyperedge, and at most q
/// further hyperedges that must stay free, some member realizes the pins
/// and leaves the protected hyperedges free.
pub fn generate_assignment_family(inst: &HPInstance) -> Result<Vec<Assignment>, Error> {
    let m = inst.h().edges().len();
    if m == 0 {
        return Ok(vec![Assignment { pins: Vec::new() }]);
    }
    let k = inst.k();
    if k == 0 {
        // A single color admits no multichromatic hyperedge, so pinning
        // never helps.
        return Ok(vec![Assignment { pins: vec![0; m] }]);
    }
    let alpha: Vec<usize> = candidate_lists(inst)?.iter().map(|c| c.len()).collect();
    let alpha_max = alpha.iter().copied().max().unwrap_or(0);
    let cover = derand::cover_family(m, k, inst.q())?;
    let kappa0s = derand::all_functions(k, alpha_max)?;
    let mut combos: u128 = 0;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in &cover {
        let kappas = derand::perfect_family(s.len(), k)?;
        combos += kappas.len() as u128 * kappa0s.len() as u128;
        if combos > FAMILY_GATE {
            return Err(Error::gate(format!(
                "assignment family needs more than {FAMILY_GATE} pin combinations"
            )));
        }
        for kappa in &kappas {
            for kappa0 in &kappa0s {
                let mut pins = vec![0usize; m];
                for (pos, &e) in s.iter().enumerate() {
                    // Candidate indices beyond the hyperedge's own list
                    // leave it free instead.
                    let i = kappa0[kappa[pos]] + 1;
                    pins[e] = if i <= alpha[e] { i } else { 0 };
                }
                seen.insert(pins);
            }
        }
    }
    Ok(seen.into_iter().map(|pins| Assignment { pins }).collect())
}

/// Component view of a normalized assignment.
///
/// Components of the link graph must be monochromatic under any coloring
/// compatible with the pins. A component label of `Some(c)` means every
/// compatible coloring paints it c, `None` leaves it unconstrained; labels
/// that would be ambiguous collapse to `Some(0)`. Supercomponents group the
/// non-zero components that share a hyperedge, and every hyperedge is owned
/// by exactly one supercomponent.
#[derive(Clone, Debug)]
pub struct PaintedComponents {
    /// Link graph component per vertex.
    pub comp_of: Vec<usize>,
    /// Vertices per component, ascending; components ordered by smallest
    /// vertex.
    pub comps: Vec<Vec<usize>>,
    /// Forced color per component.
    pub labels: Vec<Option<usize>>,
    /// Supercomponent per component.
    pub super_of: Vec<usize>,
    /// Constituent components per supercomponent.
    pub supers: Vec<Vec<usize>>,
    /// Supercomponents that are a single component labeled `Some(0)`.
    pub zero_super: Vec<bool>,
    /// Owning supercomponent per hyperedge.
    pub owner: Vec<usize>,
}

impl PaintedComponents {
    /// Color of `vertex` under the canonical coloring of supercomponent
    /// `d_star` with free color `i`: labeled components keep their label,
    /// unlabeled ones take i, and i = 0 paints the whole supercomponent 0.
    pub fn phi(&self, d_star: usize, i: usize, vertex: usize) -> usize {
        let comp = self.comp_of[vertex];
        debug_assert_eq!(self.super_of[comp], d_star);
        if i == 0 {
            return 0;
        }
        self.labels[comp].unwrap_or(i)
    }
}

/// Link graph components: free hyperedges tie all their vertices together,
/// pinned hyperedges tie each color class of their candidate together.
fn link_components(
    n: usize,
    edges: &[Vec<usize>],
    cands: &[Vec<Vec<usize>>],
    pins: &[usize],
    k: usize,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut uf = DisjointSets::new(n);
    for (e, edge) in edges.iter().enumerate() {
        if pins[e] == 0 {
            for w in edge.windows(2) {
                uf.union(w[0], w[1]);
            }
        } else {
            let lam = &cands[e][pins[e] - 1];
            let mut first = vec![usize::MAX; k + 1];
            for (pos, &v) in edge.iter().enumerate() {
                if first[lam[pos]] == usize::MAX {
                    first[lam[pos]] = v;
                } else {
                    uf.union(first[lam[pos]], v);
                }
            }
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = uf.find(v);
        if comp_of[r] == usize::MAX {
            comp_of[r] = comps.len();
            comps.push(Vec::new());
        }
        comp_of[v] = comp_of[r];
        comps[comp_of[v]].push(v);
    }
    (comp_of, comps)
}

/// A pinned hyperedge contributes a color c to a component's label set only
/// when its candidate is constant c on the whole intersection. Two distinct
/// contributions are contradictory and collapse the label to 0.
fn component_labels(
    edges: &[Vec<usize>],
    cands: &[Vec<Vec<usize>>],
    pins: &[usize],
    comp_of: &[usize],
    ncomps: usize,
) -> Vec<Option<usize>> {
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncomps];
    for (e, edge) in edges.iter().enumerate() {
        if pins[e] == 0 {
            continue;
        }
        let lam = &cands[e][pins[e] - 1];
        let mut per: BTreeMap<usize, Option<usize>> = BTreeMap::new();
        for (pos, &v) in edge.iter().enumerate() {
            per.entry(comp_of[v])
                .and_modify(|c| {
                    if *c != Some(lam[pos]) {
                        *c = None;
                    }
                })
                .or_insert(Some(lam[pos]));
        }
        for (d, c) in per {
            if let Some(c) = c {
                sets[d].insert(c);
            }
        }
    }
    sets.iter()
        .map(|s| match s.len() {
            0 => None,
            1 => s.iter().next().copied(),
            _ => Some(0),
        })
        .collect()
}

/// A pinned hyperedge contained in one component forces nothing beyond what
/// the component already forces; the pin drops.
fn find_rule1(edges: &[Vec<usize>], pins: &[usize], comp_of: &[usize]) -> Option<usize> {
    edges.iter().enumerate().find_map(|(e, edge)| {
        (pins[e] > 0 && edge.iter().all(|&v| comp_of[v] == comp_of[edge[0]])).then_some(e)
    })
}

/// A component holding both a zero-colored and a nonzero-colored pinned
/// vertex is contradictory; the pin behind the nonzero witness drops. Runs
/// after rule 1, so every surviving pinned hyperedge straddles components.
fn find_rule2(
    edges: &[Vec<usize>],
    cands: &[Vec<Vec<usize>>],
    pins: &[usize],
    comp_of: &[usize],
    ncomps: usize,
) -> Option<usize> {
    let mut nonzero = vec![usize::MAX; ncomps];
    let mut zero = vec![false; ncomps];
    for (e, edge) in edges.iter().enumerate() {
        if pins[e] == 0 {
            continue;
        }
        let lam = &cands[e][pins[e] - 1];
        for (pos, &v) in edge.iter().enumerate() {
            let d = comp_of[v];
            if lam[pos] == 0 {
                zero[d] = true;
            } else if nonzero[d] == usize::MAX {
                nonzero[d] = e;
            }
        }
    }
    (0..ncomps)
        .filter(|&d| zero[d] && nonzero[d] != usize::MAX)
        .map(|d| nonzero[d])
        .min()
}

/// A pinned hyperedge touching two distinct 0-labeled components cannot be
/// multichromatic there; the pin drops. Free hyperedges sit inside a single
/// component and never qualify.
fn find_rule3(
    edges: &[Vec<usize>],
    pins: &[usize],
    comp_of: &[usize],
    labels: &[Option<usize>],
) -> Option<usize> {
    for (e, edge) in edges.iter().enumerate() {
        if pins[e] == 0 {
            continue;
        }
        let mut seen: Option<usize> = None;
        for &v in edge {
            let d = comp_of[v];
            if labels[d] != Some(0) {
                continue;
            }
            match seen {
                None => seen = Some(d),
                Some(d0) if d0 != d => return Some(e),
                _ => {}
            }
        }
    }
    None
}

fn normalize_with(
    inst: &HPInstance,
    cands: &[Vec<Vec<usize>>],
    start: &[usize],
    trace: &mut dyn FnMut(&Assignment),
) -> Result<(Assignment, PaintedComponents), Error> {
    let h = inst.h();
    let edges = h.edges();
    if start.len() != edges.len() {
        return Err(Error::invalid(
            "assignment length differs from hyperedge count",
        ));
    }
    for (e, &p) in start.iter().enumerate() {
        if p > cands[e].len() {
            return Err(Error::invalid(format!(
                "pin {p} out of range for hyperedge {e}"
            )));
        }
    }
    let mut pins = start.to_vec();
    // Every rule application zeroes one pin, so the loop runs at most m + 1
    // times. Components and labels are rebuilt from scratch after each drop.
    let (comp_of, comps, labels) = loop {
        let (comp_of, comps) = link_components(h.n(), edges, cands, &pins, inst.k());
        if let Some(e) = find_rule1(edges, &pins, &comp_of) {
            pins[e] = 0;
            trace(&Assignment { pins: pins.clone() });
            continue;
        }
        if let Some(e) = find_rule2(edges, cands, &pins, &comp_of, comps.len()) {
            pins[e] = 0;
            trace(&Assignment { pins: pins.clone() });
            continue;
        }
        let labels = component_labels(edges, cands, &pins, &comp_of, comps.len());
        if let Some(e) = find_rule3(edges, &pins, &comp_of, &labels) {
            pins[e] = 0;
            trace(&Assignment { pins: pins.clone() });
            continue;
        }
        break (comp_of, comps, labels);
    };
    let ncomps = comps.len();
    let mut uf = DisjointSets::new(ncomps);
    for edge in edges {
        let touched: BTreeSet<usize> = edge.iter().map(|&v| comp_of[v]).collect();
        let linked: Vec<usize> = touched
            .into_iter()
            .filter(|&d| labels[d] != Some(0))
            .collect();
        for w in linked.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut super_of = vec![usize::MAX; ncomps];
    let mut supers: Vec<Vec<usize>> = Vec::new();
    for d in 0..ncomps {
        let r = uf.find(d);
        if super_of[r] == usize::MAX {
            super_of[r] = supers.len();
            supers.push(Vec::new());
        }
        super_of[d] = super_of[r];
        supers[super_of[d]].push(d);
    }
    let zero_super: Vec<bool> = supers
        .iter()
        .map(|cs| cs.len() == 1 && labels[cs[0]] == Some(0))
        .collect();
    let mut owner = Vec::with_capacity(edges.len());
    for edge in edges {
        let touched: BTreeSet<usize> = edge.iter().map(|&v| super_of[comp_of[v]]).collect();
        // After rule 3 a hyperedge sees at most one 0-labeled component, and
        // all non-zero components it sees share one supercomponent.
        debug_assert!(touched.len() <= 2);
        let own = if touched.len() == 1 {
            *touched.iter().next().unwrap()
        } else {
            let live: Vec<usize> = touched
                .iter()
                .copied()
                .filter(|&s| !zero_super[s])
                .collect();
            debug_assert_eq!(live.len(), 1);
            live[0]
        };
        owner.push(own);
    }
    Ok((
        Assignment { pins },
        PaintedComponents {
            comp_of,
            comps,
            labels,
            super_of,
            supers,
            zero_super,
            owner,
        },
    ))
}

/// Exhaustively applies the simplification rules to an assignment and
/// returns the resulting component structure.
pub fn normalize_assignment(
    inst: &HPInstance,
    p: &Assignment,
) -> Result<(Assignment, PaintedComponents), Error> {
    normalize_assignment_traced(inst, p, &mut |_| {})
}

/// As `normalize_assignment`, reporting the intermediate assignment after
/// every rule application.
pub fn normalize_assignment_traced(
    inst: &HPInstance,
    p: &Assignment,
    trace: &mut dyn FnMut(&Assignment),
) -> Result<(Assignment, PaintedComponents), Error> {
    let cands = candidate_lists(inst)?;
    normalize_with(inst, &cands, &p.pins, trace)
}

/// Painting table by branching over the assignment family.
///
/// Each branch convolves, per supercomponent, the owned hyperedge menus
/// under the canonical colorings phi and ORs over the free color; vertices
/// outside the owning supercomponent always read color 0, which is exact
/// because straddled components are 0-labeled. Any cell a branch sets is
/// witnessed by a real coloring, and for favorable instances the family
/// contains a branch recovering every witnessed cell.
pub fn solve_hp_family(inst: &HPInstance) -> Result<AJPTable, Error> {
    inst.check_favorable()?;
    let caps = inst.caps();
    let cands = candidate_lists(inst)?;
    let family = generate_assignment_family(inst)?;
    let mut out = AJPTable::new(inst.b(), inst.k1(), inst.k2());
    let mut work: u64 = 0;
    for p in &family {
        let (_, pc) = normalize_with(inst, &cands, &p.pins, &mut |_| {})?;
        let mut owned: Vec<Vec<usize>> = vec![Vec::new(); pc.supers.len()];
        for (e, &s) in pc.owner.iter().enumerate() {
            owned[s].push(e);
        }
        let mut branch = Table::one();
        for (ds, es) in owned.iter().enumerate() {
            if es.is_empty() {
                continue;
            }
            // With every constituent labeled, phi no longer depends on the
            // free color, so colors beyond 1 repeat the same table.
            let unlabeled = pc.supers[ds].iter().any(|&d| pc.labels[d].is_none());
            let c_max = if unlabeled { inst.k() } else { inst.k().min(1) };
            work += ((c_max + 1) * es.len()) as u64;
            if work > FAMILY_WORK_GATE {
                return Err(Error::gate(format!(
                    "family painting solve needs more than {FAMILY_WORK_GATE} menu convolutions"
                )));
            }
            let mut acc = Table::Zero;
            for c in 0..=c_max {
                let mut t = Table::one();
                for &e in es {
                    let colors: Vec<usize> = inst
                        .h()
                        .edge(e)
                        .iter()
                        .map(|&v| {
                            if pc.super_of[pc.comp_of[v]] == ds {
                                pc.phi(ds, c, v)
                            } else {
                                0
                            }
                        })
                        .collect();
                    t = t.conv(&inst.closed_menu(e, &colors), caps);
                    if !t.any() {
                        break;
                    }
                }
                acc = acc.or(&t, caps);
            }
            branch = branch.conv(&acc, caps);
            if !branch.any() {
                break;
            }
        }
        out.or_with(&branch.to_dense(caps));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::partition_instance;
    use crate::hp::{brute_force_hp, solve_hp_favorable};

    fn pin_of(cands: &[Vec<Vec<usize>>], e: usize, lam: &[usize]) -> usize {
        cands[e].iter().position(|c| c == lam).unwrap() + 1
    }

    #[test]
    fn family_covers_all_zero_and_every_single_pin() {
        let inst = partition_instance(2, &[(0, 1)], 1, 0);
        let fam = generate_assignment_family(&inst).unwrap();
        let m = inst.h().edges().len();
        assert!(fam.iter().any(|a| a.pins == vec![0; m]));
        let cands = candidate_lists(&inst).unwrap();
        for e in 0..m {
            for i in 1..=cands[e].len() {
                let mut want = vec![0; m];
                want[e] = i;
                assert!(
                    fam.iter().any(|a| a.pins == want),
                    "missing pin {i} on hyperedge {e}"
                );
            }
        }
    }

    #[test]
    fn zero_budget_family_is_the_free_assignment() {
        let inst = partition_instance(2, &[(0, 1)], 0, 0);
        let fam = generate_assignment_family(&inst).unwrap();
        assert_eq!(fam, vec![Assignment { pins: vec![0; 3] }]);
        let table = solve_hp_family(&inst).unwrap();
        assert_eq!(table.ones(), brute_force_hp(&inst).unwrap().ones());
    }

    #[test]
    fn normalize_keeps_the_all_free_assignment() {
        let inst = partition_instance(4, &[(0, 1), (2, 3)], 1, 1);
        let m = inst.h().edges().len();
        let mut fired = 0usize;
        let (norm, pc) =
            normalize_assignment_traced(&inst, &Assignment { pins: vec![0; m] }, &mut |_| {
                fired += 1
            })
            .unwrap();
        assert_eq!(fired, 0);
        assert_eq!(norm.pins, vec![0; m]);
        assert_eq!(pc.comps, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(pc.labels, vec![None, None]);
        assert_eq!(pc.supers.len(), 2);
        assert!(!pc.zero_super.iter().any(|&z| z));
        assert_eq!(pc.phi(pc.super_of[0], 2, 0), 2);
        assert_eq!(pc.phi(pc.super_of[0], 0, 1), 0);
    }

    #[test]
    fn rule_one_frees_a_contained_pin() {
        let inst = partition_instance(2, &[(0, 1)], 1, 1);
        let cands = candidate_lists(&inst).unwrap();
        let mut pins = vec![0; 3];
        pins[2] = pin_of(&cands, 2, &[1, 1]);
        let mut seen = Vec::new();
        let (norm, pc) =
            normalize_assignment_traced(&inst, &Assignment { pins }, &mut |a| {
                seen.push(a.clone())
            })
            .unwrap();
        assert_eq!(seen.len(), 1);
        assert_eq!(norm.pins, vec![0; 3]);
        assert_eq!(pc.comps, vec![vec![0, 1]]);
        assert_eq!(pc.labels, vec![None]);
    }

    #[test]
    fn rules_two_and_three_fire_in_order() {
        let pairs = [
            (0, 1),
            (0, 2),
            (3, 4),
            (3, 5),
            (0, 3),
            (6, 7),
            (7, 8),
            (7, 9),
        ];
        let inst = partition_instance(10, &pairs, 1, 1);
        let cands = candidate_lists(&inst).unwrap();
        let mut pins = vec![0usize; 18];
        pins[10] = pin_of(&cands, 10, &[1, 2]);
        pins[11] = pin_of(&cands, 11, &[2, 1]);
        pins[12] = pin_of(&cands, 12, &[1, 2]);
        pins[13] = pin_of(&cands, 13, &[2, 1]);
        pins[14] = pin_of(&cands, 14, &[1, 2]);
        pins[16] = pin_of(&cands, 16, &[1, 0]);
        pins[17] = pin_of(&cands, 17, &[0, 1]);
        let mut seen = Vec::new();
        let (norm, pc) =
            normalize_assignment_traced(&inst, &Assignment { pins: pins.clone() }, &mut |a| {
                seen.push(a.clone())
            })
            .unwrap();
        // The component {6, 7} holds a nonzero pin witness from hyperedge 16
        // and a zero witness from 17, so rule 2 drops pin 16. The grown
        // component {6, 7, 8} then labels 0, the components {0} and {3} both
        // collapse to 0 under contradictory pins, and hyperedge 14 straddles
        // two 0-labeled components, so rule 3 drops pin 14.
        let mut after1 = pins.clone();
        after1[16] = 0;
        let mut after2 = after1.clone();
        after2[14] = 0;
        assert_eq!(seen, vec![
            Assignment { pins: after1 },
            Assignment { pins: after2.clone() },
        ]);
        assert_eq!(norm.pins, after2);
        assert_eq!(
            pc.comps,
            vec![
                vec![0, 3],
                vec![1],
                vec![2],
                vec![4],
                vec![5],
                vec![6, 7, 8],
                vec![9],
            ]
        );
        assert_eq!(
            pc.labels,
            vec![
                Some(0),
                Some(2),
                Some(1),
                Some(2),
                Some(1),
                Some(0),
                Some(1),
            ]
        );
        assert_eq!(
            pc.zero_super,
            vec![true, false, false, false, false, true, false]
        );
        assert_eq!(
            pc.owner,
            vec![0, 1, 2, 0, 3, 4, 5, 5, 5, 6, 1, 2, 3, 4, 0, 5, 5, 6]
        );
        assert_eq!(pc.phi(0, 2, 3), 0);
        assert_eq!(pc.phi(1, 2, 1), 2);
        assert_eq!(pc.phi(1, 0, 1), 0);
        assert_eq!(pc.phi(6, 1, 9), 1);
    }

    #[test]
    fn family_solver_agrees_with_brute_force() {
        let cases = [
            partition_instance(4, &[(0, 1), (1, 2), (2, 3)], 1, 0),
            partition_instance(3, &[(0, 1), (1, 2), (0, 2)], 1, 1),
            partition_instance(4, &[(0, 1), (2, 3)], 0, 1),
        ];
        for inst in &cases {
            let fam = solve_hp_family(inst).unwrap();
            let brute = brute_force_hp(inst).unwrap();
            assert_eq!(fam.ones(), brute.ones());
            let fav = solve_hp_favorable(inst).unwrap();
            assert_eq!(fam.ones(), fav.ones());
        }
    }
}
