//! Coarsest common refinement of two random partitions of a million-element
//! set, through the disjoint-set pipeline, with find/union counters.

use std::time::Instant;

use latmeet::generators::random_partition;
use latmeet::partition::{canonical, ds_to_partition, equal, intersection, partition_to_ds};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let t = Instant::now();
    let p = random_partition(n, &mut rng);
    let q = random_partition(n, &mut rng);
    println!(
        "sampled two uniform partitions of [{n}] in {:?} ({} and {} blocks)",
        t.elapsed(),
        p.block_count(),
        q.block_count()
    );

    let mut dp = partition_to_ds(&p);
    let mut dq = partition_to_ds(&q);
    println!(
        "encoding as forests: {} unions, {} finds",
        dp.unions + dq.unions,
        dp.finds + dq.finds
    );

    let before = dp.finds + dq.finds;
    let t = Instant::now();
    let mut meet = intersection(&mut dp, &mut dq).unwrap();
    let took = t.elapsed();
    println!(
        "intersection in {took:?}: {} finds during the pairing pass",
        dp.finds + dq.finds - before
    );

    let blocks = meet.class_count();
    println!("result has {blocks} blocks (vs {} and {})", p.block_count(), q.block_count());

    // canonical form: every representative is the least element of its block
    let t = Instant::now();
    let canon = canonical(&mut meet);
    println!("canonicalised in {:?}; representatives never exceed their members: {}",
        t.elapsed(),
        canon.iter().enumerate().all(|(i, &r)| r <= i)
    );

    // sanity: intersecting with either input changes nothing
    let mut again = intersection(&mut meet, &mut partition_to_ds(&p)).unwrap();
    println!("meet ∩ p == meet: {}", equal(&mut again, &mut meet).unwrap());

    let back = ds_to_partition(&mut meet);
    println!("round-tripped through block lists: {} blocks, n = {}", back.block_count(), back.n());
}
