//! How the total operation count of the two direct algorithms grows with
//! lattice size, summarised as least-squares slopes in log-log space.

use latmeet::bench::Algorithm;
use latmeet::endo::random_endo;
use latmeet::generators::chain_lattice;
use latmeet::lattice::Lattice;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy): (f64, f64) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn measure(lat: &Lattice, alg: Algorithm, rng: &mut ChaCha8Rng) -> f64 {
    let f = random_endo(lat, rng);
    let g = random_endo(lat, rng);
    let res = alg.run(lat, &f, &g).unwrap();
    (res.counters.joins + res.counters.meets) as f64
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    println!("powerset lattices, n = 16 .. 1024:");
    let mut dm = Vec::new();
    let mut dp = Vec::new();
    for k in 4..=10u32 {
        let lat = Lattice::powerset(k);
        let x = (lat.n() as f64).ln();
        dm.push((x, measure(&lat, Algorithm::DMeet, &mut rng).ln()));
        dp.push((x, measure(&lat, Algorithm::DMeetPlus, &mut rng).ln()));
    }
    println!("  dmeet  slope = {:.3}   (3^k against 2^k is log2(3) ≈ 1.585)", slope(&dm));
    println!("  dmeet+ slope = {:.3}   (2^k - 1 operations: linear in n)", slope(&dp));

    // chains stay small: dmeet's subtraction falls back to a full fold here,
    // which is uncounted but costs n per call
    println!("\nchain lattices, n = 32 .. 512:");
    let mut dm = Vec::new();
    let mut dp = Vec::new();
    for e in 5..=9u32 {
        let lat = chain_lattice(1 << e);
        let x = (lat.n() as f64).ln();
        dm.push((x, measure(&lat, Algorithm::DMeet, &mut rng).ln()));
        dp.push((x, measure(&lat, Algorithm::DMeetPlus, &mut rng).ln()));
    }
    println!("  dmeet  slope = {:.3}   (Σ|↓c| = n(n+1)/2: quadratic)", slope(&dm));
    println!("  dmeet+ slope = {:.3}   (every element above ⊥ is irreducible)", slope(&dp));

    println!("\nthe gap is the point: dmeet pays for every pair below each");
    println!("element, dmeet+ pays once per element.");
}
