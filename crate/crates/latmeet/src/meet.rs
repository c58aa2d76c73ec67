//! Algorithms for the greatest lower bound of join-endomorphisms.
//!
//! Meets in the endomorphism lattice are not pointwise, which is what makes
//! this interesting. Two families live here:
//!
//! * `dmeet` / `dmeet_plus` compute the meet of two *join-endomorphisms* on
//!   a distributive lattice directly.
//! * `gmeet`, `gmeet_star`, `gmeet_mono`, `gmeet_mono_star` and
//!   `gmeet_mono_lazy` take an arbitrary map `h0` over any lattice and
//!   converge to the largest join-endomorphism below it; the meet of `f`
//!   and `g` is recovered by seeding them with the pointwise meet.
//! * `brute_force_max_endo_below` is the independent exhaustive oracle.
//!
//! Every entry point reports the join/meet calls it made in [`OpCounters`].

use crate::endo::Endo;
use crate::lattice::{Lattice, OpCounters};
use thiserror::Error;

/// Enumeration budget for the brute-force oracle (product of candidate
/// down-set sizes).
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeetError {
    #[error("algorithm requires a distributive lattice")]
    NotDistributive,
    #[error("element {0} needs two distinct covers")]
    MissingTwoCovers(usize),
    #[error("enumeration needs {need} candidates, budget is {budget}")]
    InstanceTooLarge { need: u128, budget: u64 },
}

/// Outcome of a meet computation: the resulting endomorphism, the operation
/// counters for this run, and `iterations` (conflict fixes for the
/// conflict-driven algorithms, full passes for the lazy one, 0 for the
/// direct ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetResult {
    pub endo: Endo,
    pub counters: OpCounters,
    pub iterations: u64,
}

/// Lattice difference: the least `e` with `a v e >= c`. Closed form on
/// powerset backends, otherwise a fold-meet over all candidates. The
/// characteristic Galois property holds on distributive lattices.
pub fn subtract(lat: &Lattice, c: usize, a: usize) -> usize {
    if let Some(d) = lat.difference_fast(c, a) {
        return d;
    }
    let mut acc = lat.top();
    for e in 0..lat.n() {
        if lat.leq(c, lat.join(a, e)) {
            acc = lat.meet(acc, e);
        }
    }
    acc
}

/// Quadratic meet on a distributive lattice:
/// `h(c) = /\ { f(a) v g(c - a) | a <= c }`.
/// Difference calls are a third primitive and are not counted.
pub fn dmeet(lat: &Lattice, f: &Endo, g: &Endo) -> Result<MeetResult, MeetError> {
    if !lat.is_distributive() {
        return Err(MeetError::NotDistributive);
    }
    debug_assert!(crate::endo::is_join_endo(lat, f) && crate::endo::is_join_endo(lat, g));
    let n = lat.n();
    let top = lat.top();
    let mut ops = OpCounters::new();
    let mut h = vec![0usize; n];
    for (c, slot) in h.iter_mut().enumerate() {
        let mut acc = top;
        lat.for_each_down(c, |a| {
            let term = ops.join(lat, f.at(a), g.at(subtract(lat, c, a)));
            acc = ops.meet(lat, acc, term);
        });
        *slot = acc;
    }
    Ok(MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: 0 })
}

/// Linear meet on a distributive lattice: meet pointwise on the join
/// irreducibles, rebuild everything else from two covers. Costs exactly
/// `|J(L)|` meets and `n - |J(L)| - 1` joins; bottom is free.
pub fn dmeet_plus(lat: &Lattice, f: &Endo, g: &Endo) -> Result<MeetResult, MeetError> {
    if !lat.is_distributive() {
        return Err(MeetError::NotDistributive);
    }
    debug_assert!(crate::endo::is_join_endo(lat, f) && crate::endo::is_join_endo(lat, g));
    let n = lat.n();
    let bot = lat.bottom();
    let mut ops = OpCounters::new();
    let mut h = vec![usize::MAX; n];
    for p in 0..n {
        let a = lat.topo_at(p);
        h[a] = if a == bot {
            bot
        } else if lat.is_join_irreducible(a) {
            ops.meet(lat, f.at(a), g.at(a))
        } else {
            let cov = lat.covers(a);
            if cov.len() < 2 {
                return Err(MeetError::MissingTwoCovers(a));
            }
            ops.join(lat, h[cov[0]], h[cov[1]])
        };
    }
    Ok(MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: 0 })
}

/// Conflict-driven meet on arbitrary lattices. Scans row-major for a pair
/// with `h(a v b) != h(a) v h(b)`, repairs it, restarts the scan.
pub fn gmeet(lat: &Lattice, h0: &[usize]) -> MeetResult {
    assert_eq!(h0.len(), lat.n());
    let n = lat.n();
    let mut h = h0.to_vec();
    h[lat.bottom()] = lat.bottom(); // every member of the class maps bottom home
    let mut ops = OpCounters::new();
    let mut fixes = 0u64;
    'scan: loop {
        for a in 0..n {
            for b in a..n {
                if fix_conflict(lat, &mut h, a, b, &mut ops) {
                    fixes += 1;
                    continue 'scan;
                }
            }
        }
        break;
    }
    MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: fixes }
}

/// `gmeet` with a cyclic cursor instead of restarting: after a repair the
/// scan resumes from the next pair, stopping after one clean wrap.
pub fn gmeet_star(lat: &Lattice, h0: &[usize]) -> MeetResult {
    assert_eq!(h0.len(), lat.n());
    let n = lat.n();
    let total = n * (n + 1) / 2;
    let mut h = h0.to_vec();
    h[lat.bottom()] = lat.bottom();
    let mut ops = OpCounters::new();
    let mut fixes = 0u64;
    let (mut a, mut b) = (0usize, 0usize);
    let mut clean = 0usize;
    while clean < total {
        if fix_conflict(lat, &mut h, a, b, &mut ops) {
            fixes += 1;
            clean = 0;
        } else {
            clean += 1;
        }
        b += 1;
        if b == n {
            a += 1;
            if a == n {
                a = 0;
            }
            b = a;
        }
    }
    MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: fixes }
}

/// One conflict check/repair step shared by `gmeet` and `gmeet_star`.
fn fix_conflict(lat: &Lattice, h: &mut [usize], a: usize, b: usize, ops: &mut OpCounters) -> bool {
    let j = ops.join(lat, a, b);
    let hj = ops.join(lat, h[a], h[b]);
    if h[j] == hj {
        return false;
    }
    if lat.leq(hj, h[j]) {
        h[j] = hj;
    } else {
        h[a] = ops.meet(lat, h[a], h[j]);
        h[b] = ops.meet(lat, h[b], h[j]);
    }
    true
}

/// Greatest monotone map below `h0`: one top-down sweep meeting every child
/// with its parent. Exactly one meet per cover edge.
pub fn mono_below(lat: &Lattice, h0: &[usize], ops: &mut OpCounters) -> Vec<usize> {
    assert_eq!(h0.len(), lat.n());
    let mut h = h0.to_vec();
    mono_below_in(lat, &mut h, ops);
    h
}

fn mono_below_in(lat: &Lattice, h: &mut [usize], ops: &mut OpCounters) {
    for p in (0..lat.n()).rev() {
        let b = lat.topo_at(p);
        for a in lat.covers(b) {
            h[a] = ops.meet(lat, h[a], h[b]);
        }
    }
}

/// Conflict-driven meet that first restores monotonicity, which keeps
/// `h(a v b) >= h(a) v h(b)` invariant; a conflict is then repaired by
/// meeting the whole down-set of `a v b` with `h(a) v h(b)`.
pub fn gmeet_mono(lat: &Lattice, h0: &[usize]) -> MeetResult {
    assert_eq!(h0.len(), lat.n());
    let mut h = h0.to_vec();
    let mut ops = OpCounters::new();
    let fixes = gmeet_mono_core(lat, &mut h, &mut ops, false);
    MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: fixes }
}

/// `gmeet_mono` with the cyclic cursor search policy.
pub fn gmeet_mono_star(lat: &Lattice, h0: &[usize]) -> MeetResult {
    assert_eq!(h0.len(), lat.n());
    let mut h = h0.to_vec();
    let mut ops = OpCounters::new();
    let fixes = gmeet_mono_core(lat, &mut h, &mut ops, true);
    MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: fixes }
}

fn gmeet_mono_core(lat: &Lattice, h: &mut [usize], ops: &mut OpCounters, cyclic: bool) -> u64 {
    let n = lat.n();
    h[lat.bottom()] = lat.bottom();
    mono_below_in(lat, h, ops);
    let mut fixes = 0u64;
    if cyclic {
        let total = n * (n + 1) / 2;
        let (mut a, mut b) = (0usize, 0usize);
        let mut clean = 0usize;
        while clean < total {
            if fix_mono_conflict(lat, h, a, b, ops) {
                fixes += 1;
                clean = 0;
            } else {
                clean += 1;
            }
            b += 1;
            if b == n {
                a += 1;
                if a == n {
                    a = 0;
                }
                b = a;
            }
        }
    } else {
        'scan: loop {
            for a in 0..n {
                for b in a..n {
                    if fix_mono_conflict(lat, h, a, b, ops) {
                        fixes += 1;
                        continue 'scan;
                    }
                }
            }
            break;
        }
    }
    fixes
}

fn fix_mono_conflict(lat: &Lattice, h: &mut [usize], a: usize, b: usize, ops: &mut OpCounters) -> bool {
    let j = ops.join(lat, a, b);
    let hj = ops.join(lat, h[a], h[b]);
    if h[j] == hj {
        return false;
    }
    // monotonicity is maintained, so the conflict is strictly one-sided
    debug_assert!(lat.leq(hj, h[j]));
    lat.for_each_down(j, |x| {
        h[x] = ops.meet(lat, h[x], hj);
    });
    true
}

/// Lazy variant: sweep all pairs lowering `h(a v b)` unconditionally, then
/// restore monotonicity, and repeat until a whole round changes nothing.
pub fn gmeet_mono_lazy(lat: &Lattice, h0: &[usize]) -> MeetResult {
    assert_eq!(h0.len(), lat.n());
    let n = lat.n();
    let mut h = h0.to_vec();
    h[lat.bottom()] = lat.bottom();
    let mut ops = OpCounters::new();
    mono_below_in(lat, &mut h, &mut ops);
    let mut passes = 0u64;
    loop {
        passes += 1;
        let prev = h.clone();
        for a in 0..n {
            for b in a..n {
                let j = ops.join(lat, a, b);
                let hj = ops.join(lat, h[a], h[b]);
                h[j] = ops.meet(lat, h[j], hj);
            }
        }
        mono_below_in(lat, &mut h, &mut ops);
        if h == prev {
            break;
        }
    }
    MeetResult { endo: Endo::new_validated(h), counters: ops, iterations: passes }
}

/// Shared repair path: largest join-endomorphism below an arbitrary map.
pub(crate) fn max_endo_below(lat: &Lattice, h0: &[usize], ops: &mut OpCounters) -> Vec<usize> {
    let mut h = h0.to_vec();
    gmeet_mono_core(lat, &mut h, ops, false);
    h
}

/// Exhaustive oracle: enumerate every map pointwise below `h0`, keep the
/// join-endomorphisms, and fold their pointwise join (the class is closed
/// under pointwise joins, so that fold is the maximum). Errs out when the
/// candidate count exceeds `budget`.
pub fn brute_force_max_endo_below_with_budget(
    lat: &Lattice,
    h0: &[usize],
    budget: u64,
) -> Result<Endo, MeetError> {
    brute_core(lat, h0, budget).map(|(e, _)| e)
}

/// [`brute_force_max_endo_below_with_budget`] at [`DEFAULT_ENUM_BUDGET`].
pub fn brute_force_max_endo_below(lat: &Lattice, h0: &[usize]) -> Result<Endo, MeetError> {
    brute_force_max_endo_below_with_budget(lat, h0, DEFAULT_ENUM_BUDGET)
}

/// Counted wrapper so the oracle can sit next to the real algorithms in a
/// benchmark table. `iterations` reports the number of candidate maps.
pub fn brute_force_meet(lat: &Lattice, h0: &[usize]) -> Result<MeetResult, MeetError> {
    let (endo, counters, candidates) = brute_counted(lat, h0, DEFAULT_ENUM_BUDGET)?;
    Ok(MeetResult { endo, counters, iterations: candidates })
}

fn brute_core(lat: &Lattice, h0: &[usize], budget: u64) -> Result<(Endo, OpCounters), MeetError> {
    let (endo, counters, _) = brute_counted(lat, h0, budget)?;
    Ok((endo, counters))
}

fn brute_counted(
    lat: &Lattice,
    h0: &[usize],
    budget: u64,
) -> Result<(Endo, OpCounters, u64), MeetError> {
    assert_eq!(h0.len(), lat.n());
    let n = lat.n();
    let bot = lat.bottom();
    let mut ops = OpCounters::new();

    let cand: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut d = lat.down_set(h0[x]);
            d.sort_unstable();
            d
        })
        .collect();
    let mut need: u128 = 1;
    for c in &cand {
        need = need.saturating_mul(c.len() as u128);
        if need > budget as u128 {
            return Err(MeetError::InstanceTooLarge { need, budget });
        }
    }

    let mut best = vec![bot; n]; // constant bottom is always in the class
    let mut idx = vec![0usize; n];
    let mut cur: Vec<usize> = cand.iter().map(|c| c[0]).collect();
    let mut candidates = 0u64;
    loop {
        candidates += 1;
        if slice_is_join_endo(lat, &cur, &mut ops) {
            for x in 0..n {
                best[x] = ops.join(lat, best[x], cur[x]);
            }
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == n {
                let endo = Endo::new_validated(best);
                return Ok((endo, ops, candidates));
            }
            idx[k] += 1;
            if idx[k] < cand[k].len() {
                cur[k] = cand[k][idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = cand[k][0];
            k += 1;
        }
    }
}

fn slice_is_join_endo(lat: &Lattice, m: &[usize], ops: &mut OpCounters) -> bool {
    if m[lat.bottom()] != lat.bottom() {
        return false;
    }
    let n = lat.n();
    for a in 0..n {
        for b in a + 1..n {
            let j = ops.join(lat, a, b);
            if m[j] != ops.join(lat, m[a], m[b]) {
                return false;
            }
        }
    }
    true
}
