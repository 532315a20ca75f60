//! Property tests for the core primitives against independent re-derivations.

use jb_core::graph::MultiGraph;
use jb_core::oct::{brute_force_oct, solve_oct};
use jb_core::unbreak::is_unbreakable_set;
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// strategies
// ---------------------------------------------------------------------------

fn small_multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = MultiGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        if n < 2 {
            return Just(MultiGraph::empty(n)).boxed();
        }
        // Loop-free by construction: the second endpoint skips over u.
        let edge = (0..n, 0..n - 1).prop_map(|(u, v)| (u, if v >= u { v + 1 } else { v }));
        prop::collection::vec(edge, 0..=max_m)
            .prop_map(move |edges| MultiGraph::new(n, edges).unwrap())
            .boxed()
    })
}

// ---------------------------------------------------------------------------
// graph invariants
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn text_round_trip(g in small_multigraph(8, 14)) {
        let parsed = MultiGraph::from_text(&g.to_text()).unwrap();
        prop_assert_eq!(&g, &parsed);
    }

    #[test]
    fn bipartition_is_proper_and_canonical(g in small_multigraph(8, 14)) {
        match g.find_bipartition() {
            Some(b) => {
                let mut side = vec![false; g.n()];
                for &v in &b.q {
                    side[v] = true;
                }
                for &(u, v) in g.edges() {
                    prop_assert_ne!(side[u], side[v], "edge inside one side");
                }
                for comp in g.connected_components() {
                    prop_assert!(!side[comp[0]], "lowest vertex of a component left P");
                }
            }
            None => {
                // No proper 2-coloring may exist at all.
                let n = g.n();
                let mut any = false;
                for mask in 0..(1u32 << n) {
                    if g
                        .edges()
                        .iter()
                        .all(|&(u, v)| (mask >> u) & 1 != (mask >> v) & 1)
                    {
                        any = true;
                        break;
                    }
                }
                prop_assert!(!any, "a proper 2-coloring exists but none was found");
            }
        }
    }

    #[test]
    fn unbreakable_set_matches_direct_enumeration(
        g in small_multigraph(6, 8),
        q in 0usize..3,
        k in 0usize..3,
    ) {
        let n = g.n();
        let a: Vec<usize> = (0..n).collect();
        // Independent route: pick the cut set, then the left part of the
        // remainder, and reject assignments with strict-side edges.
        let mut breakable = false;
        'outer: for cut in 0u32..(1 << n) {
            if (cut.count_ones() as usize) > k {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|v| cut >> v & 1 == 0).collect();
            for pick in 0u32..(1 << rest.len()) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (i, &v) in rest.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        left.push(v);
                    } else {
                        right.push(v);
                    }
                }
                let crossing = g.edges().iter().any(|&(u, v)| {
                    (left.contains(&u) && right.contains(&v))
                        || (left.contains(&v) && right.contains(&u))
                });
                if crossing {
                    continue;
                }
                if left.len() > q && right.len() > q {
                    breakable = true;
                    break 'outer;
                }
            }
        }
        prop_assert_eq!(is_unbreakable_set(&g, &a, q, k).unwrap(), !breakable);
    }

    #[test]
    fn oct_matches_brute_force(g in small_multigraph(7, 12), k in 0usize..3) {
        let fast = solve_oct(&g, k);
        let slow = brute_force_oct(&g, k).unwrap();
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(s) = fast {
            prop_assert!(s.len() <= k);
            let (sub, _) = g.without(&s);
            prop_assert!(sub.is_bipartite());
        }
    }
}
