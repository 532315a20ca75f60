//! Deterministic covering and perfect families.
//!
//! A cover family for (n, y, z) contains, for every pair of disjoint sets
//! Y, Z with |Y| <= y and |Z| <= z, some member S with Y inside S and S
//! disjoint from Z. An (n, r)-perfect family of functions [n] -> [r]
//! contains, for every r-subset X, some member injective on X. Sizes are
//! reported by callers as statistics; only the covering properties are
//! contractual.

use crate::error::Error;
use crate::unbreak::binomial;

const CONSTRAINT_GATE: u128 = 6_000_000;

/// Members are sorted subsets of 0..n, ordered by (size, lexicographic).
pub fn cover_family(n: usize, y: usize, z: usize) -> Result<Vec<Vec<usize>>, Error> {
    let candidates = subsets_up_to(n, y);
    if z >= n {
        // Taking Z as the whole complement of Y forces S = Y exactly, for
        // every Y; the family of all small subsets is the unique minimum.
        return Ok(candidates);
    }
    let mut constraint_count: u128 = 0;
    for a in 0..=y.min(n) {
        let mut inner: u128 = 0;
        for b in 0..=z.min(n - a) {
            inner += binomial(n - a, b);
        }
        constraint_count += binomial(n, a) * inner;
    }
    if constraint_count > CONSTRAINT_GATE {
        return Err(Error::gate(format!(
            "cover_family: {constraint_count} (Y, Z) constraints exceeds the gate"
        )));
    }
    // Materialize constraints as (y_mask, z_mask) over u64 bit sets.
    if n > 60 {
        return Err(Error::gate(format!("cover_family supports n <= 60, got {n}")));
    }
    let mut constraints: Vec<(u64, u64)> = Vec::new();
    for ys in &candidates {
        let y_mask = mask_of(ys);
        let rest: Vec<usize> = (0..n).filter(|v| y_mask & (1 << v) == 0).collect();
        for zs in subsets_up_to(rest.len(), z) {
            let z_mask = zs.iter().fold(0u64, |m, &i| m | (1 << rest[i]));
            constraints.push((y_mask, z_mask));
        }
    }
    let cand_masks: Vec<u64> = candidates.iter().map(|s| mask_of(s)).collect();
    let mut unmet: Vec<bool> = vec![true; constraints.len()];
    let mut unmet_left = constraints.len();
    let mut family = Vec::new();
    while unmet_left > 0 {
        let mut best = usize::MAX;
        let mut best_cover = 0usize;
        for (ci, &cm) in cand_masks.iter().enumerate() {
            let cover = constraints
                .iter()
                .zip(&unmet)
                .filter(|(&(ym, zm), &u)| u && ym & !cm == 0 && zm & cm == 0)
                .count();
            if cover > best_cover {
                best_cover = cover;
                best = ci;
            }
        }
        debug_assert!(best != usize::MAX, "every (Y, Z) is covered by S = Y");
        let cm = cand_masks[best];
        for (i, &(ym, zm)) in constraints.iter().enumerate() {
            if unmet[i] && ym & !cm == 0 && zm & cm == 0 {
                unmet[i] = false;
                unmet_left -= 1;
            }
        }
        family.push(candidates[best].clone());
    }
    Ok(family)
}

/// Members are value vectors of length n over 0..r, each injective on every
/// r-subset it is responsible for. Greedy over one canonical candidate per
/// uncovered subset X = {x_1 < ... < x_r}: x_i maps to i - 1, the rest to 0.
pub fn perfect_family(n: usize, r: usize) -> Result<Vec<Vec<usize>>, Error> {
    if r == 0 {
        return if n == 0 {
            Ok(vec![Vec::new()])
        } else {
            Err(Error::invalid("perfect_family: empty range with nonempty domain"))
        };
    }
    if n <= r {
        // At most one constraint (X = everything); the identity-style
        // injection covers it.
        return Ok(vec![(0..n).collect()]);
    }
    if r > 6 || binomial(n, r) > 1_000_000 {
        return Err(Error::gate(format!(
            "perfect_family: C({n}, {r}) constraints exceeds the gate"
        )));
    }
    let mut constraints: Vec<Vec<usize>> = Vec::new();
    let mut x: Vec<usize> = (0..r).collect();
    loop {
        constraints.push(x.clone());
        if !advance(&mut x, n) {
            break;
        }
    }
    let candidate_for = |x: &[usize]| -> Vec<usize> {
        let mut f = vec![0usize; n];
        for (i, &v) in x.iter().enumerate() {
            f[v] = i;
        }
        f
    };
    let injective_on = |f: &[usize], x: &[usize]| -> bool {
        let mut seen = 0u64;
        for &v in x {
            let b = 1u64 << f[v];
            if seen & b != 0 {
                return false;
            }
            seen |= b;
        }
        true
    };
    let mut unmet = vec![true; constraints.len()];
    let mut unmet_left = constraints.len();
    let mut family: Vec<Vec<usize>> = Vec::new();
    while unmet_left > 0 {
        let mut best = usize::MAX;
        let mut best_cover = 0usize;
        for (i, u) in unmet.iter().enumerate() {
            if !u {
                continue;
            }
            let f = candidate_for(&constraints[i]);
            let cover = constraints
                .iter()
                .zip(&unmet)
                .filter(|(x, &uu)| uu && injective_on(&f, x))
                .count();
            if cover > best_cover {
                best_cover = cover;
                best = i;
            }
        }
        let f = candidate_for(&constraints[best]);
        for (i, x) in constraints.iter().enumerate() {
            if unmet[i] && injective_on(&f, x) {
                unmet[i] = false;
                unmet_left -= 1;
            }
        }
        family.push(f);
    }
    Ok(family)
}

/// All functions [k] -> 0..alpha as value vectors, ascending mixed-radix
/// (last position least significant).
pub fn all_functions(k: usize, alpha: usize) -> Result<Vec<Vec<usize>>, Error> {
    if k == 0 {
        return Ok(vec![Vec::new()]);
    }
    if alpha == 0 {
        return Ok(Vec::new());
    }
    let total = (alpha as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > 2_000_000 {
        return Err(Error::gate(format!(
            "all_functions: {alpha}^{k} = {total} exceeds the gate"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut f = vec![0usize; k];
    loop {
        out.push(f.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if f[pos] + 1 < alpha {
                f[pos] += 1;
                f[pos + 1..].iter_mut().for_each(|v| *v = 0);
                break;
            }
        }
    }
}

/// Sorted subsets of 0..n with size at most `cap`, ordered by (size, lex).
pub fn subsets_up_to(n: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in 1..=cap.min(n) {
        let mut x: Vec<usize> = (0..s).collect();
        loop {
            out.push(x.clone());
            if !advance(&mut x, n) {
                break;
            }
        }
    }
    out
}

fn advance(c: &mut [usize], n: usize) -> bool {
    let s = c.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if c[i] < n - s + i {
            c[i] += 1;
            for j in i + 1..s {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn mask_of(s: &[usize]) -> u64 {
    s.iter().fold(0u64, |m, &v| m | (1 << v))
}
