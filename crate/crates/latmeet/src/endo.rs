//! Join-endomorphisms of a finite lattice and their join-irreducible
//! representation.
//!
//! An endomorphism is stored as a dense map `element -> element`. A map `f`
//! is a join-endomorphism when `f(bottom) = bottom` and
//! `f(a v b) = f(a) v f(b)` for all pairs; that check is memoized per value.

use std::sync::OnceLock;

use rand::Rng;

use crate::lattice::{Lattice, OpCounters};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EndoError {
    #[error("element {0} is not join-irreducible")]
    NotJoinIrreducible(usize),
    #[error("operation requires a distributive lattice")]
    NotDistributive,
    #[error("map has {got} entries, lattice has {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// A total map on lattice elements, immutable once built. Whether it is a
/// join-endomorphism is validated lazily and cached.
#[derive(Clone)]
pub struct Endo {
    map: Vec<usize>,
    validated: OnceLock<bool>,
}

impl Endo {
    pub fn new(map: Vec<usize>) -> Endo {
        Endo { map, validated: OnceLock::new() }
    }

    /// For constructions that are join-endomorphisms by theorem.
    pub(crate) fn new_validated(map: Vec<usize>) -> Endo {
        let e = Endo::new(map);
        let _ = e.validated.set(true);
        e
    }

    pub fn at(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }
}

impl PartialEq for Endo {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for Endo {}

impl std::fmt::Debug for Endo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Endo({:?})", self.map)
    }
}

/// Bottom preservation plus pairwise join preservation; quadratic scan with
/// early exit, result cached on the value.
pub fn is_join_endo(lat: &Lattice, h: &Endo) -> bool {
    assert_eq!(h.len(), lat.n(), "map size must match the lattice");
    *h.validated.get_or_init(|| {
        let n = lat.n();
        if h.at(lat.bottom()) != lat.bottom() {
            return false;
        }
        for a in 0..n {
            for b in a + 1..n {
                if h.at(lat.join(a, b)) != lat.join(h.at(a), h.at(b)) {
                    return false;
                }
            }
        }
        true
    })
}

/// Order preservation, `a <= b` implies `h(a) <= h(b)`.
pub fn is_monotone(lat: &Lattice, h: &Endo) -> bool {
    let n = lat.n();
    for a in 0..n {
        for b in 0..n {
            if lat.leq(a, b) && !lat.leq(h.at(a), h.at(b)) {
                return false;
            }
        }
    }
    true
}

/// Pointwise join; joins of join-endomorphisms stay join-endomorphisms, so
/// the result is pre-validated when both inputs are.
pub fn pointwise_join(lat: &Lattice, f: &Endo, g: &Endo) -> Endo {
    debug_assert_eq!(f.len(), lat.n());
    debug_assert_eq!(g.len(), lat.n());
    let map = (0..lat.n()).map(|a| lat.join(f.at(a), g.at(a))).collect();
    if f.validated.get() == Some(&true) && g.validated.get() == Some(&true) {
        Endo::new_validated(map)
    } else {
        Endo::new(map)
    }
}

/// Pointwise meet. This is *not* the meet in the endomorphism lattice and
/// the result is generally not a join-endomorphism; it is left unvalidated.
pub fn pointwise_meet(lat: &Lattice, f: &Endo, g: &Endo) -> Endo {
    debug_assert_eq!(f.len(), lat.n());
    debug_assert_eq!(g.len(), lat.n());
    Endo::new((0..lat.n()).map(|a| lat.meet(f.at(a), g.at(a))).collect())
}

/// The single-step map sending the up-set of `a` to `b` and everything else
/// to bottom. `a` must be join-irreducible. On distributive lattices this is
/// a join-endomorphism; on non-distributive ones it may fail closure, so the
/// validation flag is only pre-set when distributivity is already known.
pub fn f_ab(lat: &Lattice, a: usize, b: usize) -> Result<Endo, EndoError> {
    if !lat.is_join_irreducible(a) {
        return Err(EndoError::NotJoinIrreducible(a));
    }
    let bot = lat.bottom();
    let map = (0..lat.n()).map(|x| if lat.leq(a, x) { b } else { bot }).collect();
    if lat.distributive_hint() == Some(true) {
        Ok(Endo::new_validated(map))
    } else {
        Ok(Endo::new(map))
    }
}

/// The join-irreducible endomorphisms `f_ab` for `a, b` both irreducible;
/// on a distributive lattice these are exactly the join-irreducibles of the
/// endomorphism lattice. Deduplicated, in `(a, b)` generation order.
pub fn ji_endos(lat: &Lattice) -> Result<Vec<Endo>, EndoError> {
    if !lat.is_distributive() {
        return Err(EndoError::NotDistributive);
    }
    let ji = lat.ji();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &a in &ji {
        for &b in &ji {
            let f = f_ab(lat, a, b)?;
            if seen.insert(f.map().to_vec()) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Relation over join-irreducibles representing an endomorphism: `(a, b)`
/// present iff `a <= f(b)`. Pairs are kept sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JIRelation {
    pub ji: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

/// Extract the representing relation of `f` (distributive lattices only).
pub fn to_ji_relation(lat: &Lattice, f: &Endo) -> Result<JIRelation, EndoError> {
    if !lat.is_distributive() {
        return Err(EndoError::NotDistributive);
    }
    if f.len() != lat.n() {
        return Err(EndoError::SizeMismatch { expected: lat.n(), got: f.len() });
    }
    let ji = lat.ji();
    let mut pairs = Vec::new();
    for &a in &ji {
        for &b in &ji {
            if lat.leq(a, f.at(b)) {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_unstable();
    Ok(JIRelation { ji, pairs })
}

/// Rebuild the endomorphism from its relation:
/// `F(c) = v{ a | (a, b) in R and b <= c }`.
pub fn from_ji_relation(lat: &Lattice, rel: &JIRelation) -> Result<Endo, EndoError> {
    if !lat.is_distributive() {
        return Err(EndoError::NotDistributive);
    }
    let bot = lat.bottom();
    let mut map = vec![bot; lat.n()];
    for (c, slot) in map.iter_mut().enumerate() {
        let mut acc = bot;
        for &(a, b) in &rel.pairs {
            if lat.leq(b, c) {
                acc = lat.join(acc, a);
            }
        }
        *slot = acc;
    }
    Ok(Endo::new_validated(map))
}

/// Random join-endomorphism: the pointwise join of `density` single-step
/// maps with `a` uniform over the irreducibles and `b` uniform over the
/// lattice. On non-distributive lattices that join can fail closure, in
/// which case the largest join-endomorphism below it is taken instead, so
/// the output is always valid. `density = 0` gives the constant-bottom map.
pub fn random_endo_with_density(lat: &Lattice, rng: &mut impl Rng, density: usize) -> Endo {
    let ji = lat.ji();
    let bot = lat.bottom();
    let mut map = vec![bot; lat.n()];
    for _ in 0..density {
        if ji.is_empty() {
            break;
        }
        let a = ji[rng.gen_range(0..ji.len())];
        let b = rng.gen_range(0..lat.n());
        for (x, slot) in map.iter_mut().enumerate() {
            if lat.leq(a, x) {
                *slot = lat.join(*slot, b);
            }
        }
    }
    let candidate = Endo::new(map);
    if is_join_endo(lat, &candidate) {
        candidate
    } else {
        let mut ops = OpCounters::new();
        let repaired = crate::meet::max_endo_below(lat, candidate.map(), &mut ops);
        Endo::new_validated(repaired)
    }
}

/// [`random_endo_with_density`] at the default density `|J(L)|`.
pub fn random_endo(lat: &Lattice, rng: &mut impl Rng) -> Endo {
    let k = lat.ji().len();
    random_endo_with_density(lat, rng, k)
}
