//! Deterministic and random generators for lattices and partitions: powersets,
//! M_n, down-set lattices of random posets (always distributive), meet-closed
//! set families (generally not), and exactly-uniform random set partitions.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::lattice::{Lattice, LatticeError};
use crate::partition::Partition;

/// Powerset generator bound: beyond 2^24 elements nothing here is usable.
pub const POWERSET_LIMIT: usize = 24;
/// Poset size bound for the down-set construction (output can reach 2^k).
pub const POSET_LIMIT: usize = 16;
/// Default cap on generated lattice size; keeps outputs within the tabled range.
pub const DEFAULT_SIZE_CAP: usize = 4096;
/// Largest n for which partition sampling uses exact big-integer weights.
pub const EXACT_PARTITION_LIMIT: usize = 1000;
/// Hard bound for random_partition.
pub const PARTITION_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("parameter {param} exceeds the supported limit {limit}")]
    TooLarge { param: usize, limit: usize },
    #[error("generated lattice exceeded {cap} elements in all {attempts} attempts")]
    OutputTooLarge { cap: usize, attempts: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub fn powerset_lattice(k: usize) -> Result<Lattice, GenError> {
    if k > POWERSET_LIMIT {
        return Err(GenError::TooLarge { param: k, limit: POWERSET_LIMIT });
    }
    Ok(Lattice::powerset(k as u32))
}

/// M_n: an antichain of n elements with a new top and bottom glued on.
/// Distributive only for n ⩽ 2 (M₁ is the 3-chain, M₂ the diamond).
pub fn mn_lattice(n: usize) -> Lattice {
    assert!(n >= 1, "M_n needs at least one middle element");
    let top = n + 1;
    let mut covers = Vec::with_capacity(2 * n);
    for mid in 1..=n {
        covers.push((0, mid));
        covers.push((mid, top));
    }
    Lattice::build_from_covers(n + 2, &covers).expect("M_n is a lattice")
}

/// Total order on `len` elements.
pub fn chain_lattice(len: usize) -> Lattice {
    assert!(len >= 1);
    let covers: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
    Lattice::build_from_covers(len, &covers).expect("a chain is a lattice")
}

/// The lattice of down-sets of a poset on `k` points, ordered by inclusion.
/// `stricts` lists strict order pairs (a below b); their transitive closure is
/// taken here. Down-sets of any poset form a distributive lattice, and in the
/// breadth-first construction each edge "add one newly-allowed point" is
/// exactly a cover.
pub fn downset_lattice(k: usize, stricts: &[(usize, usize)], size_cap: usize) -> Result<Lattice, GenError> {
    if k > POSET_LIMIT {
        return Err(GenError::TooLarge { param: k, limit: POSET_LIMIT });
    }
    let mut below = vec![0u32; k]; // below[x]: everything strictly under x
    for &(a, b) in stricts {
        assert!(a < k && b < k && a != b, "bad poset pair ({a}, {b})");
        below[b] |= 1 << a;
    }
    loop {
        let mut changed = false;
        for x in 0..k {
            let mut want = below[x];
            let mut rest = below[x];
            while rest != 0 {
                let y = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                want |= below[y];
            }
            if want != below[x] {
                below[x] = want;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut index: HashMap<u32, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut covers = Vec::new();
    index.insert(0, 0);
    queue.push_back(0u32);
    while let Some(d) = queue.pop_front() {
        let from = index[&d];
        for x in 0..k {
            if d >> x & 1 == 1 || below[x] & !d != 0 {
                continue; // already in, or some predecessor still missing
            }
            let e = d | 1 << x;
            let next = index.len();
            let to = *index.entry(e).or_insert_with(|| {
                queue.push_back(e);
                next
            });
            covers.push((from, to));
        }
        if index.len() > size_cap {
            return Err(GenError::OutputTooLarge { cap: size_cap, attempts: 1 });
        }
    }
    let lat = Lattice::build_from_covers(index.len(), &covers)?;
    lat.set_distributive_hint(true);
    Ok(lat)
}

/// Random distributive lattice: down-sets of a random poset on `k_poset`
/// points (each pair a cover with probability `cover_prob`). Retries with
/// fresh randomness when the result overflows `size_cap`.
pub fn random_distributive_with<R: Rng>(
    k_poset: usize,
    cover_prob: f64,
    size_cap: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<Lattice, GenError> {
    if k_poset > POSET_LIMIT {
        return Err(GenError::TooLarge { param: k_poset, limit: POSET_LIMIT });
    }
    for _ in 0..attempts {
        let mut stricts = Vec::new();
        for a in 0..k_poset {
            for b in a + 1..k_poset {
                if rng.gen_bool(cover_prob) {
                    stricts.push((a, b));
                }
            }
        }
        match downset_lattice(k_poset, &stricts, size_cap) {
            Err(GenError::OutputTooLarge { .. }) => continue,
            other => return other,
        }
    }
    Err(GenError::OutputTooLarge { cap: size_cap, attempts })
}

pub fn random_distributive<R: Rng>(k_poset: usize, rng: &mut R) -> Result<Lattice, GenError> {
    random_distributive_with(k_poset, 0.3, DEFAULT_SIZE_CAP, 20, rng)
}

/// Lattice of a family of subsets of a `ground_bits`-element set, ordered by
/// inclusion: the family is closed under intersection and the full set is
/// adjoined, which guarantees meets (intersection) and joins (least common
/// superset) exist.
pub fn lattice_of_set_family(ground_bits: usize, family: &[u32]) -> Result<Lattice, GenError> {
    assert!(ground_bits <= 30);
    let ground = ((1u64 << ground_bits) - 1) as u32;
    let mut masks: Vec<u32> = vec![ground];
    for &m in family {
        assert!(m & !ground == 0, "member {m:#x} leaves the ground set");
        insert_closed(&mut masks, m & ground);
    }
    masks.sort_unstable_by_key(|&m| (m.count_ones(), m));
    let mut covers = Vec::new();
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if i != j && a & !b == 0 && a != b {
                covers.push((i, j)); // any ⊂ pair works; cover re-derivation prunes
            }
        }
    }
    Ok(Lattice::build_from_covers(masks.len(), &covers)?)
}

fn insert_closed(masks: &mut Vec<u32>, m: u32) {
    if masks.contains(&m) {
        return;
    }
    masks.push(m);
    // one pass suffices: intersections of new members are m & (f ∩ f'), which
    // is m & f'' for an existing f''
    let mut extra = Vec::new();
    for &f in masks.iter() {
        let x = m & f;
        if !masks.contains(&x) && !extra.contains(&x) {
            extra.push(x);
        }
    }
    masks.extend(extra);
}

/// Random, generally non-distributive lattice of roughly `target_n` elements.
/// The actual size is whatever the intersection closure lands on.
pub fn random_arbitrary<R: Rng>(target_n: usize, rng: &mut R) -> Lattice {
    assert!((1..=512).contains(&target_n));
    let ground_bits = (usize::BITS - target_n.leading_zeros()) as usize + 2;
    let ground_bits = ground_bits.clamp(3, 26);
    let ground = ((1u64 << ground_bits) - 1) as u32;
    let mut masks: Vec<u32> = vec![ground];
    for _ in 0..10 * target_n {
        if masks.len() >= target_n {
            break;
        }
        insert_closed(&mut masks, rng.gen_range(0..=ground));
    }
    let family = masks[1..].to_vec();
    lattice_of_set_family(ground_bits, &family).expect("closure stays within bounds")
}

// ---------------------------------------------------------------------------
// Random set partitions, exactly uniform.

static STIRLING: Mutex<Vec<Vec<BigUint>>> = Mutex::new(Vec::new());

/// Runs `f` with the Stirling-number triangle S(j, i) built up to row `n`.
/// Rows are cached for the life of the process.
fn with_stirling<T>(n: usize, f: impl FnOnce(&[Vec<BigUint>]) -> T) -> T {
    let mut rows = STIRLING.lock().unwrap();
    if rows.is_empty() {
        rows.push(vec![BigUint::one()]);
    }
    while rows.len() <= n {
        let j = rows.len();
        let prev = &rows[j - 1];
        let mut row = vec![BigUint::zero(); j + 1];
        for i in 1..=j {
            let mut v = prev[i - 1].clone();
            if i < j {
                v += &prev[i] * i as u32;
            }
            row[i] = v;
        }
        rows.push(row);
    }
    f(&rows)
}

/// Uniform big integer below `bound`, by rejection on raw random bits.
fn uniform_below<R: Rng>(bound: &BigUint, rng: &mut R) -> BigUint {
    debug_assert!(!bound.is_zero());
    let bits = bound.bits();
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    loop {
        rng.fill_bytes(&mut bytes);
        let rem = bits % 8;
        if rem != 0 {
            *bytes.last_mut().unwrap() &= (1u8 << rem) - 1;
        }
        let x = BigUint::from_bytes_le(&bytes);
        if &x < bound {
            return x;
        }
    }
}

fn exact_uniform_partition<R: Rng>(n: usize, rng: &mut R) -> Partition {
    with_stirling(n, |rows| {
        let bell: BigUint = rows[n].iter().sum();
        // stage 1: block count k, weighted by S(n, k)
        let x = uniform_below(&bell, rng);
        let mut k = 0;
        let mut acc = BigUint::zero();
        for (i, w) in rows[n].iter().enumerate() {
            acc += w;
            if x < acc {
                k = i;
                break;
            }
        }
        // stage 2, backward: does element j−1 open a block of its own?
        // P(yes) = S(j−1, i−1) / S(j, i)
        let mut opens = vec![false; n + 1];
        let mut i = k;
        for j in (1..=n).rev() {
            let x = uniform_below(&rows[j][i], rng);
            if x < rows[j - 1][i - 1] {
                opens[j] = true;
                i -= 1;
            }
        }
        // forward: replay decisions; a joiner picks uniformly among the
        // blocks present so far, which is exactly the count the backward
        // step conditioned on
        let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(k);
        for j in 1..=n {
            if opens[j] {
                blocks.push(vec![j - 1]);
            } else {
                let b = rng.gen_range(0..blocks.len());
                blocks[b].push(j - 1);
            }
        }
        Partition::new(n, blocks).expect("replay covers every element once")
    })
}

/// Urn sampler for large n: draw the urn count U with P(U=u) ∝ u^n/u!, throw
/// the n elements into the urns uniformly, and keep the nonempty urns. The
/// mixture identity makes every set partition exactly equally likely; the only
/// approximation is sampling U with 64-bit floats (relative weight error
/// ~1e-12, far below sampling noise).
fn stam_partition<R: Rng>(n: usize, rng: &mut R) -> Partition {
    let nf = n as f64;
    // peak of ln w(u) = n ln u − ln u! near the root of u ln u = n
    let mut u_star = nf / nf.ln().max(1.0);
    for _ in 0..40 {
        u_star = nf / u_star.ln().max(1e-9);
    }
    let ln_w = |u: f64| -> f64 { nf * u.ln() - ln_factorial(u) };
    let u0 = u_star.round().max(1.0);
    let peak = ln_w(u0);
    let mut lo = u0;
    while lo > 1.0 && ln_w(lo - 1.0) > peak - 45.0 {
        lo -= 1.0;
    }
    let mut hi = u0;
    while ln_w(hi + 1.0) > peak - 45.0 {
        hi += 1.0;
    }
    let weights: Vec<f64> = ((lo as u64)..=(hi as u64))
        .map(|u| (ln_w(u as f64) - peak).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let mut r = rng.gen::<f64>() * total;
    let mut u = hi as usize; // fallback for fp underflow at the tail
    for (off, w) in weights.iter().enumerate() {
        r -= w;
        if r <= 0.0 {
            u = lo as usize + off;
            break;
        }
    }
    let mut urns: Vec<Vec<usize>> = vec![Vec::new(); u];
    for x in 0..n {
        urns[rng.gen_range(0..u)].push(x);
    }
    urns.retain(|b| !b.is_empty());
    Partition::new(n, urns).expect("urns cover every element once")
}

fn ln_factorial(u: f64) -> f64 {
    // Stirling series; u ⩾ 1 here
    let inv = 1.0 / u;
    u * u.ln() - u + 0.5 * (2.0 * std::f64::consts::PI * u).ln() + inv / 12.0
        - inv * inv * inv / 360.0
}

/// Uniform random set partition of `0..n`. Exact big-integer weights up to
/// [`EXACT_PARTITION_LIMIT`]; the urn method (same distribution, float
/// weights for the urn count) beyond that.
pub fn random_partition<R: Rng>(n: usize, rng: &mut R) -> Partition {
    assert!(n <= PARTITION_LIMIT, "partition sampling capped at {PARTITION_LIMIT}");
    if n == 0 {
        return Partition::new(0, Vec::new()).unwrap();
    }
    if n <= EXACT_PARTITION_LIMIT {
        exact_uniform_partition(n, rng)
    } else {
        stam_partition(n, rng)
    }
}

// ---------------------------------------------------------------------------

/// One reproducible generation request, as the CLI consumes it.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub kind: GenKind,
    pub param: usize,
    pub seed: u64,
    pub cover_prob: f64,
    pub size_cap: usize,
    pub attempts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Powerset,
    Mn,
    Dist,
    Arb,
}

impl GenConfig {
    pub fn new(kind: GenKind, param: usize, seed: u64) -> GenConfig {
        GenConfig {
            kind,
            param,
            seed,
            cover_prob: 0.3,
            size_cap: DEFAULT_SIZE_CAP,
            attempts: 20,
        }
    }

    pub fn generate(&self) -> Result<Lattice, GenError> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            GenKind::Powerset => powerset_lattice(self.param),
            GenKind::Mn => Ok(mn_lattice(self.param.max(1))),
            GenKind::Dist => random_distributive_with(
                self.param,
                self.cover_prob,
                self.size_cap,
                self.attempts,
                &mut rng,
            ),
            GenKind::Arb => Ok(random_arbitrary(self.param, &mut rng)),
        }
    }
}
