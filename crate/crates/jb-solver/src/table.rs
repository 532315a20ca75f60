//! Binary tables over (mu, l1, l2) cells.
//!
//! `AJPTable` is the dense form: one bitset over mu per budget pair (l1, l2).
//! It doubles as a raw cell grid for painting-function menus, where the
//! monotonicity invariant of solver outputs does not apply. `Table` is the
//! sparse form used on hot paths; most menus are a single up-closed point
//! and convolving two points is constant time.

use std::fmt;

/// Dimension caps shared by every table of one problem instance.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub b: usize,
    pub k1: usize,
    pub k2: usize,
}

impl Caps {
    pub fn new(b: usize, k1: usize, k2: usize) -> Self {
        Caps { b, k1, k2 }
    }
}

/// Dense 3-D bit table indexed by (mu in [b]_0, l1 in [k1]_0, l2 in [k2]_0).
///
/// Rows are bitsets over mu, laid out row-major by (l1, l2). Solver outputs
/// keep the rows monotone in (l1, l2); menu grids may hold arbitrary bits.
#[derive(Clone, PartialEq, Eq)]
pub struct AJPTable {
    b: usize,
    k1: usize,
    k2: usize,
    words: usize,
    rows: Vec<u64>,
}

impl AJPTable {
    pub fn new(b: usize, k1: usize, k2: usize) -> Self {
        let words = b / 64 + 1;
        AJPTable {
            b,
            k1,
            k2,
            words,
            rows: vec![0; (k1 + 1) * (k2 + 1) * words],
        }
    }

    /// Up-closed single cell: 1 at (mu, l1', l2') for every l1' >= l1, l2' >= l2.
    pub fn point(caps: Caps, mu: usize, l1: usize, l2: usize) -> Self {
        let mut t = AJPTable::new(caps.b, caps.k1, caps.k2);
        if mu <= caps.b && l1 <= caps.k1 && l2 <= caps.k2 {
            for a in l1..=caps.k1 {
                for b in l2..=caps.k2 {
                    t.set(mu, a, b);
                }
            }
        }
        t
    }

    pub fn caps(&self) -> Caps {
        Caps::new(self.b, self.k1, self.k2)
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    fn row(&self, l1: usize, l2: usize) -> &[u64] {
        let r = (l1 * (self.k2 + 1) + l2) * self.words;
        &self.rows[r..r + self.words]
    }

    fn row_mut(&mut self, l1: usize, l2: usize) -> &mut [u64] {
        let r = (l1 * (self.k2 + 1) + l2) * self.words;
        &mut self.rows[r..r + self.words]
    }

    pub fn get(&self, mu: usize, l1: usize, l2: usize) -> bool {
        debug_assert!(mu <= self.b && l1 <= self.k1 && l2 <= self.k2);
        self.row(l1, l2)[mu / 64] >> (mu % 64) & 1 == 1
    }

    pub fn set(&mut self, mu: usize, l1: usize, l2: usize) {
        debug_assert!(mu <= self.b && l1 <= self.k1 && l2 <= self.k2);
        self.row_mut(l1, l2)[mu / 64] |= 1u64 << (mu % 64);
    }

    /// Sets the cell and everything above it in the budget order.
    pub fn set_up_closed(&mut self, mu: usize, l1: usize, l2: usize) {
        for a in l1..=self.k1 {
            for b in l2..=self.k2 {
                self.set(mu, a, b);
            }
        }
    }

    pub fn any(&self) -> bool {
        self.rows.iter().any(|&w| w != 0)
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn or_with(&mut self, other: &AJPTable) {
        assert_eq!(self.caps(), other.caps(), "table dimension mismatch");
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            *a |= b;
        }
    }

    /// In-place monotone closure over (l1, l2): every 1 propagates to all
    /// larger budget pairs.
    pub fn close(&mut self) {
        for l1 in 0..=self.k1 {
            for l2 in 0..=self.k2 {
                if l1 > 0 {
                    let src = self.row(l1 - 1, l2).to_vec();
                    let dst = self.row_mut(l1, l2);
                    for (d, s) in dst.iter_mut().zip(&src) {
                        *d |= s;
                    }
                }
                if l2 > 0 {
                    let src = self.row(l1, l2 - 1).to_vec();
                    let dst = self.row_mut(l1, l2);
                    for (d, s) in dst.iter_mut().zip(&src) {
                        *d |= s;
                    }
                }
            }
        }
    }

    pub fn is_monotone(&self) -> bool {
        for l1 in 0..=self.k1 {
            for l2 in 0..=self.k2 {
                for mu in 0..=self.b {
                    if !self.get(mu, l1, l2) {
                        continue;
                    }
                    if l1 < self.k1 && !self.get(mu, l1 + 1, l2) {
                        return false;
                    }
                    if l2 < self.k2 && !self.get(mu, l1, l2 + 1) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Convolution with exact mu sums and exact (l1, l2) split sums. For
    /// up-closed inputs this equals the budget-slack convolution and the
    /// result is up-closed again. Entries with mu beyond `b_out` are dropped,
    /// which is safe whenever the caller only ever reads mu <= b_out.
    pub fn convolve(&self, other: &AJPTable, b_out: usize) -> AJPTable {
        assert_eq!((self.k1, self.k2), (other.k1, other.k2));
        let mut out = AJPTable::new(b_out, self.k1, self.k2);
        for a1 in 0..=self.k1 {
            for a2 in 0..=self.k2 {
                let ra = self.row(a1, a2);
                if ra.iter().all(|&w| w == 0) {
                    continue;
                }
                for c1 in 0..=self.k1 - a1 {
                    for c2 in 0..=self.k2 - a2 {
                        let rb = other.row(c1, c2);
                        let dst_idx = ((a1 + c1) * (out.k2 + 1) + a2 + c2) * out.words;
                        conv_rows_into(&mut out.rows[dst_idx..dst_idx + out.words], ra, rb, self.b);
                    }
                }
            }
        }
        out.mask_top();
        out
    }

    /// Clears bits above `b` in the top word of every row. Convolution shifts
    /// can smear set bits past the mu bound inside the last word.
    fn mask_top(&mut self) {
        let live = self.b % 64;
        if live == 63 {
            return;
        }
        let mask = (1u64 << (live + 1)) - 1;
        let top = self.words - 1;
        for r in 0..(self.k1 + 1) * (self.k2 + 1) {
            self.rows[r * self.words + top] &= mask;
        }
    }

    /// Copies into fresh dimensions, dropping cells that fall outside.
    pub fn resized(&self, caps: Caps) -> AJPTable {
        let mut out = AJPTable::new(caps.b, caps.k1, caps.k2);
        for l1 in 0..=self.k1.min(caps.k1) {
            for l2 in 0..=self.k2.min(caps.k2) {
                for mu in 0..=self.b.min(caps.b) {
                    if self.get(mu, l1, l2) {
                        out.set(mu, l1, l2);
                    }
                }
            }
        }
        out
    }

    /// All set cells in (mu, l1, l2) lexicographic order. Test support.
    pub fn ones(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for mu in 0..=self.b {
            for l1 in 0..=self.k1 {
                for l2 in 0..=self.k2 {
                    if self.get(mu, l1, l2) {
                        out.push((mu, l1, l2));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for AJPTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AJPTable(b={}, k1={}, k2={}, ones={:?})",
            self.b,
            self.k1,
            self.k2,
            self.ones()
        )
    }
}

/// dst |= conv(a, b) where rows are bitsets over mu.
fn conv_rows_into(dst: &mut [u64], a: &[u64], b: &[u64], a_max: usize) {
    for s in 0..=a_max {
        if a[s / 64] >> (s % 64) & 1 == 0 {
            continue;
        }
        let wshift = s / 64;
        let bshift = s % 64;
        for i in wshift..dst.len() {
            let j = i - wshift;
            let mut w = 0u64;
            if j < b.len() {
                w |= b[j] << bshift;
            }
            if bshift > 0 && j >= 1 && j - 1 < b.len() {
                w |= b[j - 1] >> (64 - bshift);
            }
            if w == 0 && j > b.len() {
                break;
            }
            dst[i] |= w;
        }
    }
}

/// Sparse table: most painting menus are empty or a single up-closed point.
#[derive(Clone, Debug, PartialEq)]
pub enum Table {
    Zero,
    /// Up-closed point: 1 at (mu, l1', l2') for all l1' >= l1, l2' >= l2.
    Point { mu: usize, l1: usize, l2: usize },
    Dense(Box<AJPTable>),
}

impl Table {
    /// Point constructor that normalizes out-of-cap coordinates to Zero.
    pub fn point(caps: Caps, mu: usize, l1: usize, l2: usize) -> Table {
        if mu > caps.b || l1 > caps.k1 || l2 > caps.k2 {
            Table::Zero
        } else {
            Table::Point { mu, l1, l2 }
        }
    }

    pub fn dense(t: AJPTable) -> Table {
        if t.any() {
            Table::Dense(Box::new(t))
        } else {
            Table::Zero
        }
    }

    pub fn any(&self) -> bool {
        !matches!(self, Table::Zero)
    }

    pub fn get(&self, mu: usize, l1: usize, l2: usize) -> bool {
        match self {
            Table::Zero => false,
            Table::Point {
                mu: pm,
                l1: p1,
                l2: p2,
            } => mu == *pm && l1 >= *p1 && l2 >= *p2,
            Table::Dense(t) => {
                mu <= t.b() && l1 <= t.k1() && l2 <= t.k2() && t.get(mu, l1, l2)
            }
        }
    }

    pub fn to_dense(&self, caps: Caps) -> AJPTable {
        match self {
            Table::Zero => AJPTable::new(caps.b, caps.k1, caps.k2),
            Table::Point { mu, l1, l2 } => AJPTable::point(caps, *mu, *l1, *l2),
            Table::Dense(t) => t.resized(caps),
        }
    }

    /// Exact-mu, budget-split convolution under `caps`. Dense operands must
    /// be up-closed in (l1, l2); the point-times-dense shortcut reads only
    /// the maximal split and relies on it.
    pub fn conv(&self, other: &Table, caps: Caps) -> Table {
        match (self, other) {
            (Table::Zero, _) | (_, Table::Zero) => Table::Zero,
            (
                Table::Point { mu: m1, l1: a1, l2: a2 },
                Table::Point { mu: m2, l1: b1, l2: b2 },
            ) => Table::point(caps, m1 + m2, a1 + b1, a2 + b2),
            (Table::Point { mu, l1, l2 }, Table::Dense(t))
            | (Table::Dense(t), Table::Point { mu, l1, l2 }) => {
                debug_assert!(t.is_monotone());
                if *mu > caps.b || *l1 > caps.k1 || *l2 > caps.k2 {
                    return Table::Zero;
                }
                let mut out = AJPTable::new(caps.b, caps.k1, caps.k2);
                for c1 in *l1..=caps.k1 {
                    for c2 in *l2..=caps.k2 {
                        let s1 = c1 - l1;
                        let s2 = c2 - l2;
                        if s1 > t.k1() || s2 > t.k2() {
                            continue;
                        }
                        for m in 0..=t.b().min(caps.b.saturating_sub(*mu)) {
                            if t.get(m, s1, s2) {
                                out.set(m + mu, c1, c2);
                            }
                        }
                    }
                }
                Table::dense(out)
            }
            (Table::Dense(a), Table::Dense(b)) => {
                let widened_a = if a.caps() == (Caps::new(a.b(), caps.k1, caps.k2)) {
                    None
                } else {
                    Some(a.resized(Caps::new(a.b().min(caps.b), caps.k1, caps.k2)))
                };
                let widened_b = if b.caps() == (Caps::new(b.b(), caps.k1, caps.k2)) {
                    None
                } else {
                    Some(b.resized(Caps::new(b.b().min(caps.b), caps.k1, caps.k2)))
                };
                let ra = widened_a.as_ref().unwrap_or(a);
                let rb = widened_b.as_ref().unwrap_or(b);
                Table::dense(ra.convolve(rb, caps.b))
            }
        }
    }

    pub fn or(&self, other: &Table, caps: Caps) -> Table {
        match (self, other) {
            (Table::Zero, t) | (t, Table::Zero) => t.clone(),
            (Table::Point { mu: m1, l1: a1, l2: a2 }, Table::Point { mu: m2, l1: b1, l2: b2 }) => {
                if m1 == m2 && a1 <= b1 && a2 <= b2 {
                    self.clone()
                } else if m1 == m2 && b1 <= a1 && b2 <= a2 {
                    other.clone()
                } else {
                    let mut d = self.to_dense(caps);
                    d.or_with(&other.to_dense(caps));
                    Table::dense(d)
                }
            }
            _ => {
                let mut d = self.to_dense(caps);
                d.or_with(&other.to_dense(caps));
                Table::dense(d)
            }
        }
    }

    /// Neutral element of `conv`.
    pub fn one() -> Table {
        Table::Point { mu: 0, l1: 0, l2: 0 }
    }
}
