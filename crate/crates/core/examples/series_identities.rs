//! Möbius numbers from exponential generating functions, checked against
//! directly built posets where these are small.

use eigenlattice::dowling::{build_family, FamilySpec};
use eigenlattice::series::{mobius_q_dd0, mobius_q_dde, rat, RationalSeries};

fn main() {
    let f = RationalSeries::from_fn(6, |n| rat(1, 1 + n as i64));
    let round_trip = f.ln().unwrap().exp().unwrap();
    println!("exp(ln f) == f: {}", round_trip == f);

    let mu = mobius_q_dde(1, 2, 0, 6).unwrap();
    println!("μ(Q_2n(2,2,2)), n = 0..6: {}", mu.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    let mu0 = mobius_q_dd0(1, 2, 6).unwrap();
    println!("μ(Q_2n(2,2,2,{{0}})), n = 0..6: {}", mu0.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));

    for n in 1..=3usize {
        let p = build_family(&FamilySpec::new(2 * n, 2, 2, 2, []).unwrap()).unwrap();
        let q = build_family(&FamilySpec::new(2 * n, 2, 2, 2, [0]).unwrap()).unwrap();
        println!(
            "n={n}: posets give {} and {}",
            p.poset().mobius_bounded().unwrap(),
            q.poset().mobius_bounded().unwrap()
        );
    }
}
