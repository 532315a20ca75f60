//! Unbreakability checks for vertex sets and colorings.
//!
//! A separation (X, Y) covers V with no edge between X \ Y and Y \ X; its
//! order is |X ∩ Y|. A set A is (q, k)-unbreakable when every separation of
//! order at most k leaves at most q vertices of A strictly on one of the two
//! sides. A function g : U -> [k]_0 is (q, k)-unbreakable when some color
//! class misses at most q elements of U.

use crate::error::Error;
use crate::graph::MultiGraph;

const SET_GATE_N: usize = 18;
const ENUM_GATE: u128 = 4_000_000;

/// Exhaustive separation check. Vertices are assigned to left-only, cut, or
/// right-only; assignments inducing an edge between the strict sides are not
/// separations and are skipped. `a` may contain duplicates.
pub fn is_unbreakable_set(
    g: &MultiGraph,
    a: &[usize],
    q: usize,
    k: usize,
) -> Result<bool, Error> {
    let mut in_a = vec![false; g.n()];
    for &v in a {
        if v >= g.n() {
            return Err(Error::invalid(format!("set vertex {v} out of range")));
        }
        in_a[v] = true;
    }
    let a_size = in_a.iter().filter(|&&b| b).count();
    // Both strict sides are subsets of A, so neither can exceed q.
    if a_size <= q {
        return Ok(true);
    }
    if g.n() > SET_GATE_N {
        return Err(Error::gate(format!(
            "is_unbreakable_set supports n <= {SET_GATE_N}, got n = {}",
            g.n()
        )));
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Side {
        Left,
        Cut,
        Right,
    }
    struct Search<'a> {
        g: &'a MultiGraph,
        in_a: &'a [bool],
        q: usize,
        k: usize,
        side: Vec<Side>,
    }
    impl Search<'_> {
        /// Returns true if some violating separation extends the first
        /// `fixed` assignments.
        fn run(&mut self, fixed: usize, cut: usize, left_a: usize, right_a: usize) -> bool {
            if fixed == self.g.n() {
                return left_a > self.q && right_a > self.q;
            }
            let v = fixed;
            let mut left_ok = true;
            let mut right_ok = true;
            for (&w, _) in self.g.neighbors(v) {
                if w < fixed {
                    match self.side[w] {
                        Side::Left => right_ok = false,
                        Side::Right => left_ok = false,
                        Side::Cut => {}
                    }
                }
            }
            if left_ok {
                self.side[v] = Side::Left;
                let la = left_a + usize::from(self.in_a[v]);
                if self.run(fixed + 1, cut, la, right_a) {
                    return true;
                }
            }
            if right_ok {
                self.side[v] = Side::Right;
                let ra = right_a + usize::from(self.in_a[v]);
                if self.run(fixed + 1, cut, left_a, ra) {
                    return true;
                }
            }
            if cut < self.k {
                self.side[v] = Side::Cut;
                if self.run(fixed + 1, cut + 1, left_a, right_a) {
                    return true;
                }
            }
            self.side[v] = Side::Cut;
            false
        }
    }
    let mut search = Search {
        g,
        in_a: &in_a,
        q,
        k,
        side: vec![Side::Cut; g.n()],
    };
    Ok(!search.run(0, 0, 0, 0))
}

/// Some color class of `f` misses at most `q` elements. Values must lie in
/// `0..=k`.
pub fn is_unbreakable_function(f: &[usize], q: usize, k: usize) -> bool {
    debug_assert!(f.iter().all(|&c| c <= k));
    let mut class = vec![0usize; k + 1];
    for &c in f {
        class[c] += 1;
    }
    let max = class.iter().max().copied().unwrap_or(0);
    f.len() - max <= q
}

/// All (q, k)-unbreakable functions from `0..u` to `[k]_0`, in ascending
/// mixed-radix order (last position least significant).
pub fn enumerate_unbreakable_functions(
    u: usize,
    q: usize,
    k: usize,
) -> Result<Vec<Vec<usize>>, Error> {
    let total = (k as u128 + 1).checked_pow(u as u32).unwrap_or(u128::MAX);
    if total > ENUM_GATE {
        return Err(Error::gate(format!(
            "enumerate_unbreakable_functions: (k+1)^u = {total} exceeds {ENUM_GATE}"
        )));
    }
    let mut out = Vec::new();
    let mut f = vec![0usize; u];
    loop {
        if is_unbreakable_function(&f, q, k) {
            out.push(f.clone());
        }
        let mut pos = u;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if f[pos] < k {
                f[pos] += 1;
                for x in f[pos + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// The closed-form count bound Sum_{l=0..q} C(u, l) * q^k * (k+1), evaluated
/// exactly. See the acceptance suite for the check against enumeration.
pub fn unbreakable_function_bound(u: usize, q: usize, k: usize) -> u128 {
    let mut subsets: u128 = 0;
    for l in 0..=q.min(u) {
        subsets += binomial(u, l);
    }
    subsets * (q as u128).pow(k as u32) * (k as u128 + 1)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_vertex_set_is_unbreakable() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(is_unbreakable_set(&g, &[0, 1, 2], 1, 1).unwrap());
    }

    #[test]
    fn star_leaves_split_by_center_cut() {
        let g = MultiGraph::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        // Deleting the center leaves two leaves on each side.
        assert!(!is_unbreakable_set(&g, &[1, 2, 3, 4], 1, 1).unwrap());
        assert!(is_unbreakable_set(&g, &[1, 2, 3, 4], 3, 1).unwrap());
    }

    #[test]
    fn small_sets_are_trivially_unbreakable() {
        let g = MultiGraph::empty(30);
        assert!(is_unbreakable_set(&g, &[0, 1], 2, 5).unwrap());
        assert!(is_unbreakable_set(&g, &[], 0, 0).unwrap());
    }

    #[test]
    fn gate_fires_above_vertex_limit() {
        let g = MultiGraph::empty(19);
        assert!(matches!(
            is_unbreakable_set(&g, &(0..19).collect::<Vec<_>>(), 1, 1),
            Err(Error::Gate(_))
        ));
    }

    #[test]
    fn disconnected_a_is_breakable_with_zero_cut() {
        let g = MultiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(!is_unbreakable_set(&g, &[0, 1, 2, 3], 1, 0).unwrap());
    }

    #[test]
    fn only_constants_at_q_zero() {
        let fs = enumerate_unbreakable_functions(2, 0, 1).unwrap();
        assert_eq!(fs, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn eight_vertex_colorings_need_a_class_of_five() {
        // (3k^2, k)-unbreakable with k = 1 means a class missing at most 3.
        let fs = enumerate_unbreakable_functions(8, 3, 1).unwrap();
        assert!(!fs.is_empty());
        for f in &fs {
            let ones = f.iter().filter(|&&c| c == 1).count();
            let max = ones.max(8 - ones);
            assert!(max >= 5, "coloring {f:?} has no class of size 5");
        }
    }

    #[test]
    fn enumeration_matches_direct_filter() {
        for (u, q, k) in [(3, 1, 2), (4, 2, 1), (4, 2, 2)] {
            let listed = enumerate_unbreakable_functions(u, q, k).unwrap();
            let mut expected = Vec::new();
            let mut f = vec![0usize; u];
            'outer: loop {
                if is_unbreakable_function(&f, q, k) {
                    expected.push(f.clone());
                }
                let mut pos = u;
                loop {
                    if pos == 0 {
                        break 'outer;
                    }
                    pos -= 1;
                    if f[pos] < k {
                        f[pos] += 1;
                        f[pos + 1..].iter_mut().for_each(|x| *x = 0);
                        break;
                    }
                }
            }
            assert_eq!(listed, expected);
        }
    }

    #[test]
    fn corrected_exponent_bounds_the_enumeration() {
        // Sanity companion to the acceptance check: with k^l in place of q^k
        // the closed form really is an upper bound.
        for u in 0..=6 {
            for q in 1..=3usize {
                for k in 0..=3usize {
                    let count = enumerate_unbreakable_functions(u, q, k).unwrap().len() as u128;
                    let mut bound: u128 = 0;
                    for l in 0..=q.min(u) {
                        bound += binomial(u, l) * (k as u128).pow(l as u32);
                    }
                    bound *= k as u128 + 1;
                    assert!(count <= bound, "u={u} q={q} k={k}: {count} > {bound}");
                }
            }
        }
    }
}
