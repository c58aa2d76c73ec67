//! Distributed knowledge of two agents, decided four independent ways:
//! from the cached knowledge-operator arrays, from the accessibility
//! relations, from the partitions (when the relations are equivalences),
//! and — the structural route — as a meet of join-endomorphisms over the
//! event lattice.

use std::time::Instant;

use latmeet::knowledge::{
    build_kop_array, decide_dk_operators, decide_dk_partitions, decide_dk_relations,
    dk_as_endo_meet, dk_of, event_lattice, k_of, operator_endo, Relation,
};
use latmeet::partition::Partition;

fn main() {
    // Ω = {0..5}; Alice cannot tell {0,1} or {2,3} apart, Bob only sees halves.
    let alice = Partition::new(6, vec![vec![0, 1], vec![2, 3], vec![4], vec![5]]).unwrap();
    let bob = Partition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    let ra = Relation::from_partition(&alice);
    let rb = Relation::from_partition(&bob);

    let event: u32 = 0b001011; // E = {0, 1, 3}
    println!("Ω = 6 states, E = {{0, 1, 3}}");
    println!("  K_alice(E) = {:#08b}", k_of(&ra, event));
    println!("  K_bob(E)   = {:#08b}", k_of(&rb, event));
    println!("  D(E)       = {:#08b}   (pooling their observations)", dk_of(&ra, &rb, event).unwrap());

    // Candidate operator m: the true distributed-knowledge operator.
    let rm = ra.intersect(&rb).unwrap();
    let pm = rm.to_partition().unwrap();
    println!("\njoint partition: {:?}", pm.blocks());

    let vka = build_kop_array(&ra).unwrap();
    let vkb = build_kop_array(&rb).unwrap();
    let vkm = build_kop_array(&rm).unwrap();

    let by_ops = decide_dk_operators(&vka, &vkb, &vkm).unwrap();
    let by_rel = decide_dk_relations(&ra, &rb, &rm).unwrap();
    let by_par = decide_dk_partitions(&alice, &bob, &pm).unwrap();
    println!("is m the distributed knowledge of alice and bob?");
    println!("  via operator arrays: {by_ops}");
    println!("  via relations:       {by_rel}");
    println!("  via partitions:      {by_par}");

    // And the lattice view: D is the meet of K_alice and K_bob in E(P(Ω), ⊇).
    let lat = event_lattice(6);
    let h = dk_as_endo_meet(&ra, &rb).unwrap();
    let direct = operator_endo(&lat, &rm);
    println!("  endo-meet equals the operator of R_a ∩ R_b: {}", h == direct);

    // A wrong candidate fails all three decision procedures.
    let coarser = Partition::new(6, vec![vec![0, 1], vec![2], vec![3], vec![4, 5]]).unwrap();
    let rw = Relation::from_partition(&coarser);
    let vkw = build_kop_array(&rw).unwrap();
    println!("\na coarser candidate {:?}:", coarser.blocks());
    println!("  via operator arrays: {}", decide_dk_operators(&vka, &vkb, &vkw).unwrap());
    println!("  via relations:       {}", decide_dk_relations(&ra, &rb, &rw).unwrap());
    println!("  via partitions:      {}", decide_dk_partitions(&alice, &bob, &coarser).unwrap());

    // The operator probe touches n events; the relation test scans n^2 bits.
    let n = 12usize;
    let pi = Partition::new(n, (0..n / 2).map(|b| vec![2 * b, 2 * b + 1]).collect()).unwrap();
    let pj = Partition::new(n, {
        let mut blocks = vec![vec![0, n - 1]];
        blocks.extend((0..n / 2 - 1).map(|b| vec![2 * b + 1, 2 * b + 2]));
        blocks
    })
    .unwrap();
    let (ri, rj) = (Relation::from_partition(&pi), Relation::from_partition(&pj));
    let rm = ri.intersect(&rj).unwrap();
    let (vki, vkj, vkm) = (
        build_kop_array(&ri).unwrap(),
        build_kop_array(&rj).unwrap(),
        build_kop_array(&rm).unwrap(),
    );
    let t = Instant::now();
    for _ in 0..10_000 {
        assert!(decide_dk_operators(&vki, &vkj, &vkm).unwrap());
    }
    println!("\nn = {n}: 10k cached-operator decisions in {:?} ({} probes each)", t.elapsed(), n);
}
