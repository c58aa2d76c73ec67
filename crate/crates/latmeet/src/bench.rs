//! Benchmark plumbing: named algorithms, reproducible instance streams, and
//! flat records that serialize to CSV or JSON. Counters are deterministic
//! under a fixed seed; only the nanosecond column varies between runs.

use std::io;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::endo::{pointwise_meet, random_endo, Endo};
use crate::generators;
use crate::knowledge::{
    build_kop_array_with_limit, decide_dk_operators, decide_dk_partitions, decide_dk_relations,
    Relation,
};
use crate::lattice::Lattice;
use crate::meet::{
    brute_force_meet, dmeet, dmeet_plus, gmeet, gmeet_mono, gmeet_mono_lazy, gmeet_mono_star,
    gmeet_star, MeetError, MeetResult,
};
use crate::partition::{self, Partition};

/// One benchmark observation; `trial == -1` marks a summary row carrying the
/// worst-case counters and the mean runtime of its group.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub algorithm: String,
    pub kind: String,
    pub n: usize,
    pub trial: i64,
    pub joins: u64,
    pub meets: u64,
    pub nanos: u64,
    pub seed: u64,
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}

/// CSV header even when there are no rows (csv only emits it with data).
pub fn csv_header() -> &'static str {
    "algorithm,kind,n,trial,joins,meets,nanos,seed"
}

pub fn write_json<W: io::Write>(records: &[BenchRecord], mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    DMeet,
    DMeetPlus,
    GMeet,
    GMeetStar,
    GMeetMono,
    GMeetMonoStar,
    GMeetMonoLazy,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::DMeet,
        Algorithm::DMeetPlus,
        Algorithm::GMeet,
        Algorithm::GMeetStar,
        Algorithm::GMeetMono,
        Algorithm::GMeetMonoStar,
        Algorithm::GMeetMonoLazy,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::DMeet => "dmeet",
            Algorithm::DMeetPlus => "dmeet+",
            Algorithm::GMeet => "gmeet",
            Algorithm::GMeetStar => "gmeet*",
            Algorithm::GMeetMono => "gmeet_mono",
            Algorithm::GMeetMonoStar => "gmeet_mono*",
            Algorithm::GMeetMonoLazy => "gmeet_mono_lazy",
            Algorithm::Brute => "brute",
        }
    }

    pub fn parse(s: &str) -> Option<Algorithm> {
        Algorithm::ALL.iter().copied().find(|a| a.name() == s)
    }

    /// dmeet and dmeet+ refuse non-distributive lattices.
    pub fn needs_distributive(self) -> bool {
        matches!(self, Algorithm::DMeet | Algorithm::DMeetPlus)
    }

    /// Run on the pair (f, g): the direct algorithms consume the pair itself,
    /// the general ones start from the pointwise meet and repair it downward.
    pub fn run(self, lat: &Lattice, f: &Endo, g: &Endo) -> Result<MeetResult, MeetError> {
        match self {
            Algorithm::DMeet => dmeet(lat, f, g),
            Algorithm::DMeetPlus => dmeet_plus(lat, f, g),
            Algorithm::GMeet => Ok(gmeet(lat, pointwise_meet(lat, f, g).map())),
            Algorithm::GMeetStar => Ok(gmeet_star(lat, pointwise_meet(lat, f, g).map())),
            Algorithm::GMeetMono => Ok(gmeet_mono(lat, pointwise_meet(lat, f, g).map())),
            Algorithm::GMeetMonoStar => Ok(gmeet_mono_star(lat, pointwise_meet(lat, f, g).map())),
            Algorithm::GMeetMonoLazy => Ok(gmeet_mono_lazy(lat, pointwise_meet(lat, f, g).map())),
            Algorithm::Brute => brute_force_meet(lat, pointwise_meet(lat, f, g).map()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Powerset,
    Mn,
    Dist,
    Arb,
    Chain,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Powerset => "powerset",
            LatticeKind::Mn => "mn",
            LatticeKind::Dist => "dist",
            LatticeKind::Arb => "arb",
            LatticeKind::Chain => "chain",
        }
    }

    pub fn parse(s: &str) -> Option<LatticeKind> {
        [
            LatticeKind::Powerset,
            LatticeKind::Mn,
            LatticeKind::Dist,
            LatticeKind::Arb,
            LatticeKind::Chain,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    /// Build the instance for a size parameter (bits for powersets, middle
    /// count for M_n, poset points for dist, target size otherwise).
    pub fn build(self, param: usize, seed: u64) -> Result<Lattice, generators::GenError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            LatticeKind::Powerset => generators::powerset_lattice(param),
            LatticeKind::Mn => Ok(generators::mn_lattice(param.max(1))),
            LatticeKind::Dist => generators::random_distributive(param, &mut rng),
            LatticeKind::Arb => Ok(generators::random_arbitrary(param, &mut rng)),
            LatticeKind::Chain => Ok(generators::chain_lattice(param.max(1))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeetSuite {
    pub kinds: Vec<LatticeKind>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
}

/// Mix parameters into per-instance rng streams so every (kind, size, trial)
/// cell is independent and reproducible.
fn stream(seed: u64, a: u64, b: u64, c: u64) -> ChaCha8Rng {
    let mut x = seed ^ a.wrapping_mul(0x9e3779b97f4a7c15) ^ b.wrapping_mul(0xbf58476d1ce4e5b9)
        ^ c.wrapping_mul(0x94d049bb133111eb);
    // splitmix finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    ChaCha8Rng::seed_from_u64(x ^ (x >> 31))
}

pub fn run_meet_suite(suite: &MeetSuite) -> Result<Vec<BenchRecord>, MeetError> {
    let mut records = Vec::new();
    for (ki, &kind) in suite.kinds.iter().enumerate() {
        for &size in &suite.sizes {
            let lat = kind
                .build(size, suite.seed ^ (ki as u64) << 32 ^ size as u64)
                .map_err(|_| MeetError::InstanceTooLarge { need: size as u128, budget: 0 })?;
            for &alg in &suite.algorithms {
                let mut group: Vec<BenchRecord> = Vec::with_capacity(suite.trials);
                // one discarded warm-up trial ahead of the measured ones
                for trial in 0..suite.trials + 1 {
                    let mut rng = stream(suite.seed, ki as u64, size as u64, trial as u64);
                    let f = random_endo(&lat, &mut rng);
                    let g = random_endo(&lat, &mut rng);
                    let start = Instant::now();
                    let res = alg.run(&lat, &f, &g)?;
                    let nanos = start.elapsed().as_nanos() as u64;
                    if trial == 0 {
                        continue;
                    }
                    group.push(BenchRecord {
                        algorithm: alg.name().to_string(),
                        kind: kind.name().to_string(),
                        n: lat.n(),
                        trial: trial as i64 - 1,
                        joins: res.counters.joins,
                        meets: res.counters.meets,
                        nanos,
                        seed: suite.seed,
                    });
                }
                push_summary(&mut records, group);
            }
        }
    }
    Ok(records)
}

fn push_summary(records: &mut Vec<BenchRecord>, group: Vec<BenchRecord>) {
    if group.is_empty() {
        return;
    }
    let mean_nanos = group.iter().map(|r| r.nanos).sum::<u64>() / group.len() as u64;
    let summary = BenchRecord {
        algorithm: group[0].algorithm.clone(),
        kind: group[0].kind.clone(),
        n: group[0].n,
        trial: -1,
        joins: group.iter().map(|r| r.joins).max().unwrap(),
        meets: group.iter().map(|r| r.meets).max().unwrap(),
        nanos: mean_nanos,
        seed: group[0].seed,
    };
    records.extend(group);
    records.push(summary);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkVariant {
    CachedOperator,
    NoncachedOperator,
    Relation,
    DisjointSet,
}

impl DkVariant {
    pub const ALL: [DkVariant; 4] = [
        DkVariant::CachedOperator,
        DkVariant::NoncachedOperator,
        DkVariant::Relation,
        DkVariant::DisjointSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DkVariant::CachedOperator => "cached_operator",
            DkVariant::NoncachedOperator => "noncached_operator",
            DkVariant::Relation => "relation",
            DkVariant::DisjointSet => "disjoint_set",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DkSuite {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Operator variants tabulate 2^n events; skipped above this.
    pub op_cap: usize,
    /// Relation variant holds n×n bit matrices; skipped above this.
    pub rel_cap: usize,
}

impl DkSuite {
    pub fn new(sizes: Vec<usize>, trials: usize, seed: u64) -> DkSuite {
        DkSuite { sizes, trials, seed, op_cap: 16, rel_cap: 8192 }
    }
}

/// True instances (the third partition really is the intersection) keep every
/// procedure on its full-scan worst case.
pub fn dk_instance(n: usize, rng: &mut ChaCha8Rng) -> (Partition, Partition, Partition) {
    let pi = generators::random_partition(n, rng);
    let pj = generators::random_partition(n, rng);
    let mut di = partition::partition_to_ds(&pi);
    let mut dj = partition::partition_to_ds(&pj);
    let mut dm = partition::intersection(&mut di, &mut dj).expect("equal sizes");
    let pm = partition::ds_to_partition(&mut dm);
    (pi, pj, pm)
}

pub fn run_dk_suite(suite: &DkSuite) -> Vec<BenchRecord> {
    let mut records = Vec::new();
    for &n in &suite.sizes {
        for variant in DkVariant::ALL {
            if matches!(variant, DkVariant::CachedOperator | DkVariant::NoncachedOperator)
                && n > suite.op_cap
            {
                continue;
            }
            if variant == DkVariant::Relation && n > suite.rel_cap {
                continue;
            }
            let mut group = Vec::with_capacity(suite.trials);
            for trial in 0..suite.trials + 1 {
                let mut rng = stream(suite.seed, DK_STREAM_SALT, n as u64, trial as u64);
                let (pi, pj, pm) = dk_instance(n, &mut rng);
                let nanos = time_dk_variant(variant, suite.op_cap, &pi, &pj, &pm);
                if trial == 0 {
                    continue;
                }
                group.push(BenchRecord {
                    algorithm: variant.name().to_string(),
                    kind: "dk".to_string(),
                    n,
                    trial: trial as i64 - 1,
                    joins: 0,
                    meets: 0,
                    nanos,
                    seed: suite.seed,
                });
            }
            push_summary(&mut records, group);
        }
    }
    records
}

// keeps dk instance streams disjoint from the meet-suite streams
const DK_STREAM_SALT: u64 = 0xd15c0;

fn time_dk_variant(
    variant: DkVariant,
    op_cap: usize,
    pi: &Partition,
    pj: &Partition,
    pm: &Partition,
) -> u64 {
    match variant {
        DkVariant::DisjointSet => {
            let start = Instant::now();
            let ok = decide_dk_partitions(pi, pj, pm).expect("same n");
            let nanos = start.elapsed().as_nanos() as u64;
            assert!(ok, "constructed instance is true");
            nanos
        }
        DkVariant::Relation => {
            let ri = Relation::from_partition(pi);
            let rj = Relation::from_partition(pj);
            let rm = Relation::from_partition(pm);
            let start = Instant::now();
            let ok = decide_dk_relations(&ri, &rj, &rm).expect("same n");
            let nanos = start.elapsed().as_nanos() as u64;
            assert!(ok);
            nanos
        }
        DkVariant::CachedOperator => {
            let ri = Relation::from_partition(pi);
            let rj = Relation::from_partition(pj);
            let rm = Relation::from_partition(pm);
            let vki = build_kop_array_with_limit(&ri, op_cap).expect("size pre-checked");
            let vkj = build_kop_array_with_limit(&rj, op_cap).expect("size pre-checked");
            let vkm = build_kop_array_with_limit(&rm, op_cap).expect("size pre-checked");
            let start = Instant::now();
            let ok = decide_dk_operators(&vki, &vkj, &vkm).expect("same n");
            let nanos = start.elapsed().as_nanos() as u64;
            assert!(ok);
            nanos
        }
        DkVariant::NoncachedOperator => {
            let ri = Relation::from_partition(pi);
            let rj = Relation::from_partition(pj);
            let rm = Relation::from_partition(pm);
            let start = Instant::now();
            let vki = build_kop_array_with_limit(&ri, op_cap).expect("size pre-checked");
            let vkj = build_kop_array_with_limit(&rj, op_cap).expect("size pre-checked");
            let vkm = build_kop_array_with_limit(&rm, op_cap).expect("size pre-checked");
            let ok = decide_dk_operators(&vki, &vkj, &vkm).expect("same n");
            let nanos = start.elapsed().as_nanos() as u64;
            assert!(ok);
            nanos
        }
    }
}
