//! Join-endomorphisms of a distributive lattice as relations over its
//! join-irreducibles: single-step maps f_ab generate everything, and the
//! relation form round-trips exactly.

use latmeet::endo::{
    f_ab, from_ji_relation, is_join_endo, ji_endos, random_endo, to_ji_relation, Endo,
};
use latmeet::generators::downset_lattice;
use latmeet::lattice::Lattice;
use latmeet::meet::brute_force_max_endo_below;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let lat = Lattice::powerset(3);
    let ji = lat.ji();
    println!("powerset(3): n = {}, irreducibles (the singletons) = {ji:?}", lat.n());

    // a single-step map: send the up-set of {0} to {1,2}, everything else to ∅
    let f = f_ab(&lat, 0b001, 0b110).unwrap();
    println!("f_(001,110) = {:?}", f.map());
    println!("  join-endomorphism: {}", is_join_endo(&lat, &f));

    // every join-endomorphism is the join of the f_ab below it; equivalently
    // it is determined by which (a, b) satisfy a ⩽ f(b)
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_endo(&lat, &mut rng);
    let rel = to_ji_relation(&lat, &g).unwrap();
    println!("\nrandom g = {:?}", g.map());
    println!("  relation on J × J: {:?}", rel.pairs);
    let back = from_ji_relation(&lat, &rel).unwrap();
    println!("  rebuilt from the relation: {:?} (round-trip exact: {})", back.map(), back == g);

    // the encoding is a bijection: |E(L)| candidate relations collapse to the
    // ones closed appropriately, and distinct endomorphisms never collide
    let lat = downset_lattice(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], 64).unwrap();
    println!("\ndown-set lattice of the 4-point diamond poset: n = {}", lat.n());
    let mut seen = std::collections::HashSet::new();
    let mut count = 0u32;
    for _ in 0..200 {
        let e = random_endo(&lat, &mut rng);
        let rel = to_ji_relation(&lat, &e).unwrap();
        assert_eq!(from_ji_relation(&lat, &rel).unwrap(), e);
        if seen.insert(e.map().to_vec()) {
            count += 1;
        }
    }
    println!("  {count} distinct endomorphisms sampled, all round-tripped exactly");

    // any endomorphism is the pointwise join of the single-step maps its
    // relation selects — the f_ab really do generate E(L)
    let ji = ji_endos(&lat).unwrap();
    println!("  {} generators f_ab (|J|² = {})", ji.len(), lat.ji().len() * lat.ji().len());
    let e = random_endo(&lat, &mut rng);
    let rel = to_ji_relation(&lat, &e).unwrap();
    let mut acc = Endo::new(vec![lat.bottom(); lat.n()]);
    for &(a, b) in &rel.pairs {
        let step = f_ab(&lat, b, a).unwrap(); // (a ⩽ e(b)) selects the map b ↦ a
        acc = Endo::new((0..lat.n()).map(|x| lat.join(acc.at(x), step.at(x))).collect());
    }
    println!("  join of selected generators reproduces e: {}", acc == e);

    // the general algorithms and the exhaustive oracle agree that each f_ab is
    // already the largest endomorphism below itself
    let probe = &ji[3];
    let best = brute_force_max_endo_below(&lat, probe.map()).unwrap();
    println!("  f_ab is its own best approximation: {}", best == *probe);
}
