//! The two benchmark suites driven as a library: meet algorithms over
//! lattice families, and the four distributed-knowledge decision procedures.
//! Emits the same CSV the `latmeet bench` subcommand writes.

use latmeet::bench::{
    csv_header, run_dk_suite, run_meet_suite, write_csv, Algorithm, DkSuite, LatticeKind,
    MeetSuite,
};

fn main() {
    let suite = MeetSuite {
        kinds: vec![LatticeKind::Powerset, LatticeKind::Chain],
        sizes: vec![4, 5, 6],
        trials: 3,
        algorithms: vec![Algorithm::DMeetPlus, Algorithm::GMeetMonoStar],
        seed: 17,
    };
    let records = run_meet_suite(&suite).unwrap();

    println!("{}", csv_header());
    for r in records.iter().filter(|r| r.trial == -1) {
        // trial -1 rows summarise a group: worst-case counters, mean time
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(r), &mut buf).unwrap();
        println!("{}", String::from_utf8(buf).unwrap().lines().nth(1).unwrap());
    }

    // powerset sizes are bit counts (n = 2^k), chain sizes are element counts
    println!("\ndistributed-knowledge suite (all four procedures, true instances):");
    let dk = DkSuite::new(vec![8, 12, 16], 5, 17);
    let records = run_dk_suite(&dk);
    println!("{}", csv_header());
    let mut buf = Vec::new();
    let summaries: Vec<_> = records.into_iter().filter(|r| r.trial == -1).collect();
    write_csv(&summaries, &mut buf).unwrap();
    for line in String::from_utf8(buf).unwrap().lines().skip(1) {
        println!("{line}");
    }
    println!("\ncached_operator decides in n probes; the others pay to look at");
    println!("the whole relation or forest but skip the 2^n-entry table build.");
}
