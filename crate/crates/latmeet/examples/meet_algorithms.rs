//! The two four-and-five-element lattices where meets of join-endomorphisms
//! stop being pointwise, worked end to end with every algorithm.

use latmeet::bench::Algorithm;
use latmeet::endo::{is_join_endo, pointwise_meet, Endo};
use latmeet::generators::mn_lattice;
use latmeet::lattice::Lattice;

fn show(lat: &Lattice, name: &str, e: &[usize]) {
    let pretty: Vec<String> = e
        .iter()
        .map(|&v| {
            if v == lat.bottom() {
                "⊥".into()
            } else if v == lat.top() {
                "⊤".into()
            } else {
                v.to_string()
            }
        })
        .collect();
    println!("  {name} = [{}]", pretty.join(", "));
}

fn main() {
    // the diamond: ⊥ < 1,2 < ⊤
    let m2 = mn_lattice(2);
    let f = Endo::new(vec![0, 2, 1, 3]); // swaps the two middle elements
    let g = Endo::new(vec![0, 3, 2, 3]); // sends 1 to ⊤, fixes the rest

    println!("diamond M2 (distributive):");
    show(&m2, "f", f.map());
    show(&m2, "g", g.map());

    let pw = pointwise_meet(&m2, &f, &g);
    show(&m2, "pointwise f∧g", pw.map());
    println!(
        "  pointwise meet is a join-endomorphism: {} (h(1∨2) ≠ h(1)∨h(2))",
        is_join_endo(&m2, &pw)
    );

    for alg in Algorithm::ALL {
        let res = alg.run(&m2, &f, &g).unwrap();
        show(&m2, alg.name(), res.endo.map());
    }
    println!("  all agree: the meet lowers h(⊤) from ⊤ to 2, nothing else moves\n");

    // M3: the smallest non-distributive lattice; the meet collapses entirely
    let m3 = mn_lattice(3);
    let f = Endo::new(vec![0, 1, 3, 2, 4]);
    let g = Endo::new(vec![0, 4, 2, 3, 4]);
    println!("M3 (non-distributive):");
    show(&m3, "f", f.map());
    show(&m3, "g", g.map());
    show(&m3, "pointwise f∧g", pointwise_meet(&m3, &f, &g).map());

    for alg in Algorithm::ALL {
        match alg.run(&m3, &f, &g) {
            Ok(res) => show(&m3, alg.name(), res.endo.map()),
            Err(e) => println!("  {} refuses: {e}", alg.name()),
        }
    }
    println!("  h(2)=h(3)=⊥ forces h(⊤)=⊥, and monotonicity drags h(1) down too");
}
