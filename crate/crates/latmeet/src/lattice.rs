//! Finite bounded lattices over dense element indices.
//!
//! Elements are plain `usize` indices in `0..n`. Two backends live behind
//! [`Lattice`]: an explicit one built from a cover relation (order kept as
//! bitsets, join/meet tabled up to [`TABLE_LIMIT`]) and an implicit powerset
//! one where an element *is* its subset bitmask and join/meet are single
//! word operations. The powerset backend also supports the reversed order
//! (containment), which is what knowledge operators act on.

use std::sync::OnceLock;

use thiserror::Error;

/// Size up to which explicit lattices precompute full join/meet tables.
pub const TABLE_LIMIT: usize = 4096;

/// Join/meet call counters. Algorithms thread one of these explicitly and
/// report it back with their result; nothing global is involved.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounters {
    pub joins: u64,
    pub meets: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.joins + self.meets
    }

    /// Join that counts against this counter set.
    pub fn join(&mut self, lat: &Lattice, a: usize, b: usize) -> usize {
        self.joins += 1;
        lat.join(a, b)
    }

    /// Meet that counts against this counter set.
    pub fn meet(&mut self, lat: &Lattice, a: usize, b: usize) -> usize {
        self.meets += 1;
        lat.meet(a, b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("cover pair ({0}, {1}) out of range for n = {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("cover relation contains a cycle")]
    CycleDetected,
    #[error("order is not bounded: it needs a unique bottom and top")]
    NotBounded,
    #[error("elements {0} and {1} have no unique least upper or greatest lower bound")]
    NotALattice(usize, usize),
}

/// A finite bounded lattice.
pub struct Lattice {
    n: usize,
    repr: Repr,
    distributive: OnceLock<bool>,
}

enum Repr {
    Explicit(Box<Explicit>),
    /// Elements are bitmasks over `bits` atoms. With `dual` set the order is
    /// reversed containment (bottom is the full set), join is intersection.
    Powerset { bits: u32, dual: bool },
}

struct Explicit {
    /// Row `a`, bit position `p`: whether `a <= topo[p]`.
    up: BitMatrix,
    /// Row `a`, bit position `p`: whether `topo[p] <= a`.
    down: BitMatrix,
    /// Lower covers of each element, ascending.
    covers: Vec<Vec<u32>>,
    topo: Vec<u32>,
    pos: Vec<u32>,
    bottom: u32,
    top: u32,
    ji: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    join: Vec<u32>,
    meet: Vec<u32>,
}

impl Lattice {
    /// Build an explicit lattice from a cover (or any order-generating)
    /// relation given as `(lower, upper)` pairs. The order is the transitive
    /// closure; true covers are re-derived, so redundant pairs are harmless.
    /// Validates boundedness and that every pair has a unique lub and glb.
    pub fn build_from_covers(n: usize, cover_pairs: &[(usize, usize)]) -> Result<Lattice, LatticeError> {
        build_explicit(n, cover_pairs, n <= TABLE_LIMIT)
    }

    /// Powerset of `bits` atoms ordered by inclusion; element = bitmask.
    pub fn powerset(bits: u32) -> Lattice {
        assert!(bits <= 30, "powerset lattice limited to 30 atoms");
        let lat = Lattice {
            n: 1usize << bits,
            repr: Repr::Powerset { bits, dual: false },
            distributive: OnceLock::new(),
        };
        let _ = lat.distributive.set(true);
        lat
    }

    /// Powerset of `bits` atoms under *reversed* inclusion: bottom is the
    /// full set, join is intersection. Knowledge operators live here.
    pub fn powerset_dual(bits: u32) -> Lattice {
        assert!(bits <= 30, "powerset lattice limited to 30 atoms");
        let lat = Lattice {
            n: 1usize << bits,
            repr: Repr::Powerset { bits, dual: true },
            distributive: OnceLock::new(),
        };
        let _ = lat.distributive.set(true);
        lat
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bottom(&self) -> usize {
        match &self.repr {
            Repr::Explicit(e) => e.bottom as usize,
            Repr::Powerset { dual: false, .. } => 0,
            Repr::Powerset { dual: true, .. } => self.n - 1,
        }
    }

    pub fn top(&self) -> usize {
        match &self.repr {
            Repr::Explicit(e) => e.top as usize,
            Repr::Powerset { dual: false, .. } => self.n - 1,
            Repr::Powerset { dual: true, .. } => 0,
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        debug_assert!(a < self.n && b < self.n);
        match &self.repr {
            Repr::Explicit(e) => e.up.get(a, e.pos[b] as usize),
            Repr::Powerset { dual: false, .. } => a & b == a,
            Repr::Powerset { dual: true, .. } => a & b == b,
        }
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Least upper bound (uncounted; see [`OpCounters::join`] for the
    /// counted flavor used inside algorithms).
    pub fn join(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.n && b < self.n);
        match &self.repr {
            Repr::Explicit(e) => match &e.tables {
                Some(t) => t.join[a * self.n + b] as usize,
                None => join_scan(e, a, b).expect("validated lattice"),
            },
            Repr::Powerset { dual: false, .. } => a | b,
            Repr::Powerset { dual: true, .. } => a & b,
        }
    }

    /// Greatest lower bound (uncounted).
    pub fn meet(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.n && b < self.n);
        match &self.repr {
            Repr::Explicit(e) => match &e.tables {
                Some(t) => t.meet[a * self.n + b] as usize,
                None => meet_scan(e, a, b).expect("validated lattice"),
            },
            Repr::Powerset { dual: false, .. } => a & b,
            Repr::Powerset { dual: true, .. } => a | b,
        }
    }

    /// Elements covered by `a` (its children), ascending.
    pub fn covers(&self, a: usize) -> Vec<usize> {
        debug_assert!(a < self.n);
        match &self.repr {
            Repr::Explicit(e) => e.covers[a].iter().map(|&x| x as usize).collect(),
            Repr::Powerset { bits, dual: false } => {
                let mut out = Vec::with_capacity(a.count_ones() as usize);
                for i in (0..*bits).rev() {
                    if a >> i & 1 == 1 {
                        out.push(a & !(1usize << i));
                    }
                }
                out
            }
            Repr::Powerset { bits, dual: true } => {
                let mut out = Vec::with_capacity(*bits as usize - a.count_ones() as usize);
                for i in 0..*bits {
                    if a >> i & 1 == 0 {
                        out.push(a | 1usize << i);
                    }
                }
                out
            }
        }
    }

    pub fn cover_count(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Explicit(e) => e.covers[a].len(),
            Repr::Powerset { dual: false, .. } => a.count_ones() as usize,
            Repr::Powerset { bits, dual: true } => *bits as usize - a.count_ones() as usize,
        }
    }

    /// Total number of cover edges in the Hasse diagram.
    pub fn cover_edge_count(&self) -> usize {
        match &self.repr {
            Repr::Explicit(e) => e.covers.iter().map(Vec::len).sum(),
            Repr::Powerset { bits: 0, .. } => 0,
            Repr::Powerset { bits, .. } => (*bits as usize) << (bits - 1),
        }
    }

    /// An element is join-irreducible iff it has exactly one child.
    pub fn is_join_irreducible(&self, a: usize) -> bool {
        self.cover_count(a) == 1
    }

    /// All join-irreducible elements, ascending.
    pub fn ji(&self) -> Vec<usize> {
        match &self.repr {
            Repr::Explicit(e) => e.ji.iter().map(|&x| x as usize).collect(),
            Repr::Powerset { bits, dual: false } => (0..*bits).map(|i| 1usize << i).collect(),
            Repr::Powerset { bits, dual: true } => {
                let full = self.n - 1;
                (0..*bits).rev().map(|i| full & !(1usize << i)).collect()
            }
        }
    }

    /// Join-irreducibles below (or equal to) `e`, ascending.
    pub fn ji_downset(&self, e: usize) -> Vec<usize> {
        debug_assert!(e < self.n);
        match &self.repr {
            Repr::Explicit(ex) => ex
                .ji
                .iter()
                .map(|&x| x as usize)
                .filter(|&x| self.leq(x, e))
                .collect(),
            Repr::Powerset { bits, dual: false } => {
                (0..*bits).filter(|i| e >> i & 1 == 1).map(|i| 1usize << i).collect()
            }
            Repr::Powerset { bits, dual: true } => {
                let full = self.n - 1;
                (0..*bits)
                    .rev()
                    .filter(|i| e >> i & 1 == 0)
                    .map(|i| full & !(1usize << i))
                    .collect()
            }
        }
    }

    /// Element at a fixed linear-extension position (bottom first).
    pub fn topo_at(&self, p: usize) -> usize {
        debug_assert!(p < self.n);
        match &self.repr {
            Repr::Explicit(e) => e.topo[p] as usize,
            Repr::Powerset { dual: false, .. } => p,
            Repr::Powerset { dual: true, .. } => self.n - 1 - p,
        }
    }

    pub fn pos_of(&self, a: usize) -> usize {
        debug_assert!(a < self.n);
        match &self.repr {
            Repr::Explicit(e) => e.pos[a] as usize,
            Repr::Powerset { dual: false, .. } => a,
            Repr::Powerset { dual: true, .. } => self.n - 1 - a,
        }
    }

    /// Visit every `x <= a`, in a deterministic order.
    pub fn for_each_down(&self, a: usize, mut f: impl FnMut(usize)) {
        debug_assert!(a < self.n);
        match &self.repr {
            Repr::Explicit(e) => {
                let row = e.down.row(a);
                for (w, &word) in row.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let p = w * 64 + bits.trailing_zeros() as usize;
                        f(e.topo[p] as usize);
                        bits &= bits - 1;
                    }
                }
            }
            Repr::Powerset { dual: false, .. } => {
                // classic submask walk, descending
                let mut s = a;
                loop {
                    f(s);
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & a;
                }
            }
            Repr::Powerset { dual: true, .. } => {
                // below `a` in the reversed order = supersets of `a`
                let rest = (self.n - 1) & !a;
                let mut s = rest;
                loop {
                    f(a | s);
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & rest;
                }
            }
        }
    }

    pub fn down_set(&self, a: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_down(a, |x| out.push(x));
        out
    }

    /// Distributivity check: `a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c)` for all
    /// triples. Cubic scan, memoized; generators that know the answer by
    /// construction pre-seed the flag.
    pub fn is_distributive(&self) -> bool {
        *self.distributive.get_or_init(|| {
            for a in 0..self.n {
                for b in 0..self.n {
                    for c in 0..self.n {
                        let lhs = self.join(a, self.meet(b, c));
                        let rhs = self.meet(self.join(a, b), self.join(a, c));
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }

    /// `(lower, upper)` cover edges, mostly for serialization.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.cover_edge_count());
        for a in 0..self.n {
            for c in self.covers(a) {
                out.push((c, a));
            }
        }
        out
    }

    /// `(bits, dual)` if this is a powerset backend.
    pub fn powerset_bits(&self) -> Option<(u32, bool)> {
        match &self.repr {
            Repr::Powerset { bits, dual } => Some((*bits, *dual)),
            Repr::Explicit(_) => None,
        }
    }

    /// Closed-form lattice difference where one exists (powerset backends).
    pub(crate) fn difference_fast(&self, c: usize, a: usize) -> Option<usize> {
        match &self.repr {
            Repr::Explicit(_) => None,
            Repr::Powerset { dual: false, .. } => Some(c & !a),
            Repr::Powerset { dual: true, .. } => Some((!a | c) & (self.n - 1)),
        }
    }

    pub(crate) fn set_distributive_hint(&self, v: bool) {
        let _ = self.distributive.set(v);
    }

    /// Distributivity if already known, without triggering the cubic scan.
    pub(crate) fn distributive_hint(&self) -> Option<bool> {
        self.distributive.get().copied()
    }
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Repr::Explicit(_) => write!(f, "Lattice(explicit, n={})", self.n),
            Repr::Powerset { bits, dual } => {
                write!(f, "Lattice(powerset, bits={bits}, dual={dual})")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// explicit backend construction

struct BitMatrix {
    words: Vec<u64>,
    stride: usize,
}

impl BitMatrix {
    fn new(rows: usize, bits: usize) -> Self {
        let stride = bits.div_ceil(64);
        BitMatrix { words: vec![0; rows * stride], stride }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.words[r * self.stride + c / 64] |= 1u64 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.words[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }
}

fn and_rows(a: &[u64], b: &[u64], out: &mut [u64]) {
    for i in 0..out.len() {
        out[i] = a[i] & b[i];
    }
}

fn first_set(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn last_set(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate().rev() {
        if w != 0 {
            return Some(i * 64 + 63 - w.leading_zeros() as usize);
        }
    }
    None
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn count_set(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Unique minimal element of the intersection of two up-sets, verified.
fn join_scan(e: &Explicit, a: usize, b: usize) -> Result<usize, LatticeError> {
    let stride = e.up.stride;
    let mut buf = vec![0u64; stride];
    and_rows(e.up.row(a), e.up.row(b), &mut buf);
    let p = first_set(&buf).ok_or(LatticeError::NotALattice(a, b))?;
    let c = e.topo[p] as usize;
    if is_subset(&buf, e.up.row(c)) {
        Ok(c)
    } else {
        Err(LatticeError::NotALattice(a, b))
    }
}

fn meet_scan(e: &Explicit, a: usize, b: usize) -> Result<usize, LatticeError> {
    let stride = e.down.stride;
    let mut buf = vec![0u64; stride];
    and_rows(e.down.row(a), e.down.row(b), &mut buf);
    let p = last_set(&buf).ok_or(LatticeError::NotALattice(a, b))?;
    let c = e.topo[p] as usize;
    if is_subset(&buf, e.down.row(c)) {
        Ok(c)
    } else {
        Err(LatticeError::NotALattice(a, b))
    }
}

fn build_explicit(n: usize, cover_pairs: &[(usize, usize)], tabled: bool) -> Result<Lattice, LatticeError> {
    if n == 0 {
        return Err(LatticeError::NotBounded);
    }
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(lo, hi) in cover_pairs {
        if lo >= n || hi >= n {
            return Err(LatticeError::IndexOutOfRange(lo, hi, n));
        }
        if lo == hi {
            return Err(LatticeError::CycleDetected);
        }
        succ[lo].push(hi as u32);
        indeg[hi] += 1;
    }

    // Kahn pass: cycle detection plus an order for the closure sweep.
    let mut ready: Vec<usize> = (0..n).filter(|&a| indeg[a] == 0).collect();
    let mut ord = Vec::with_capacity(n);
    let mut indeg_work = indeg.clone();
    while let Some(a) = ready.pop() {
        ord.push(a);
        for &b in &succ[a] {
            indeg_work[b as usize] -= 1;
            if indeg_work[b as usize] == 0 {
                ready.push(b as usize);
            }
        }
    }
    if ord.len() != n {
        return Err(LatticeError::CycleDetected);
    }

    // Reflexive-transitive closure with bit index = element index.
    let mut up_el = BitMatrix::new(n, n);
    for &a in ord.iter().rev() {
        up_el.set(a, a);
        let succs = succ[a].clone();
        for b in succs {
            let (ra, rb) = (a, b as usize);
            // rows are disjoint slices; use split borrows via index math
            let stride = up_el.stride;
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            let (head, tail) = up_el.words.split_at_mut(hi * stride);
            let row_lo = &mut head[lo * stride..lo * stride + stride];
            let row_hi = &mut tail[..stride];
            if ra < rb {
                for i in 0..stride {
                    row_lo[i] |= row_hi[i];
                }
            } else {
                for i in 0..stride {
                    row_hi[i] |= row_lo[i];
                }
            }
        }
    }

    // Boundedness: one minimal (bottom) and one maximal (top) element.
    let mut down_el = BitMatrix::new(n, n);
    for a in 0..n {
        for b in 0..n {
            if up_el.get(a, b) {
                down_el.set(b, a);
            }
        }
    }
    let minimal: Vec<usize> = (0..n).filter(|&a| count_set(down_el.row(a)) == 1).collect();
    let maximal: Vec<usize> = (0..n).filter(|&a| count_set(up_el.row(a)) == 1).collect();
    if minimal.len() != 1 || maximal.len() != 1 {
        return Err(LatticeError::NotBounded);
    }
    let (bottom, top) = (minimal[0] as u32, maximal[0] as u32);

    // True covers from the closure: maximal elements of each strict down-set.
    let stride = up_el.stride;
    let mut covers: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut strict = vec![0u64; stride];
    for a in 0..n {
        strict.copy_from_slice(down_el.row(a));
        strict[a / 64] &= !(1u64 << (a % 64));
        for (w, &word) in strict.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let x = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                // x is a cover of a iff nothing in the strict down-set sits above x
                let mut solo = true;
                for i in 0..stride {
                    let above = up_el.row(x)[i] & strict[i];
                    let expect = if i == x / 64 { 1u64 << (x % 64) } else { 0 };
                    if above != expect {
                        solo = false;
                        break;
                    }
                }
                if solo {
                    covers[a].push(x as u32);
                }
            }
        }
        covers[a].sort_unstable();
    }

    // Linear extension: repeatedly remove the smallest-index minimal element.
    let mut ups: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut pend = vec![0usize; n];
    for a in 0..n {
        pend[a] = covers[a].len();
        for &c in &covers[a] {
            ups[c as usize].push(a as u32);
        }
    }
    let mut heap = std::collections::BinaryHeap::new();
    for a in 0..n {
        if pend[a] == 0 {
            heap.push(std::cmp::Reverse(a));
        }
    }
    let mut topo = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(a)) = heap.pop() {
        topo.push(a as u32);
        for &b in &ups[a] {
            pend[b as usize] -= 1;
            if pend[b as usize] == 0 {
                heap.push(std::cmp::Reverse(b as usize));
            }
        }
    }
    debug_assert_eq!(topo.len(), n);
    let mut pos = vec![0u32; n];
    for (p, &a) in topo.iter().enumerate() {
        pos[a as usize] = p as u32;
    }

    // Remap order bitsets so bit position = topo position.
    let mut up = BitMatrix::new(n, n);
    let mut down = BitMatrix::new(n, n);
    for a in 0..n {
        for b in 0..n {
            if up_el.get(a, b) {
                up.set(a, pos[b] as usize);
                down.set(b, pos[a] as usize);
            }
        }
    }

    let ji: Vec<u32> = (0..n as u32).filter(|&a| covers[a as usize].len() == 1).collect();

    let mut ex = Explicit { up, down, covers, topo, pos, bottom, top, ji, tables: None };

    // Validate unique joins/meets pairwise; keep the tables when small.
    let mut join_t = if tabled { vec![0u32; n * n] } else { Vec::new() };
    let mut meet_t = if tabled { vec![0u32; n * n] } else { Vec::new() };
    for a in 0..n {
        for b in a..n {
            let j = join_scan(&ex, a, b)?;
            let m = meet_scan(&ex, a, b)?;
            if tabled {
                join_t[a * n + b] = j as u32;
                join_t[b * n + a] = j as u32;
                meet_t[a * n + b] = m as u32;
                meet_t[b * n + a] = m as u32;
            }
        }
    }
    if tabled {
        ex.tables = Some(Tables { join: join_t, meet: meet_t });
    }

    Ok(Lattice {
        n,
        repr: Repr::Explicit(Box::new(ex)),
        distributive: OnceLock::new(),
    })
}

#[cfg(test)]
pub(crate) fn build_untabled(n: usize, cover_pairs: &[(usize, usize)]) -> Result<Lattice, LatticeError> {
    build_explicit(n, cover_pairs, false)
}
