//! The partition lattice Π_{n+1} is found inside Q_n(1) by isomorphism
//! search; Q_n(1) and Q_n(2) are told apart.

use eigenlattice::dowling::{build_family, FamilySpec};
use eigenlattice::poset::{is_order_isomorphism, IsoOutcome, DEFAULT_ISO_BUDGET};

fn main() {
    for n in 2..=5 {
        let q = build_family(&FamilySpec::dowling(n, 1)).unwrap();
        let all: Vec<usize> = (1..=n + 1).collect();
        let pi = build_family(&FamilySpec::new(n + 1, 1, 1, 1, all).unwrap()).unwrap();
        let verdict = match q.poset().find_isomorphism(pi.poset(), DEFAULT_ISO_BUDGET) {
            IsoOutcome::Found(map) => format!("isomorphic, map verified: {}", is_order_isomorphism(q.poset(), pi.poset(), &map)),
            other => format!("{other:?}"),
        };
        println!("Q_{n}(1) vs Π_{} ({} elements): {verdict}", n + 1, q.poset().len());
    }
    let a = build_family(&FamilySpec::dowling(3, 1)).unwrap();
    let b = build_family(&FamilySpec::dowling(3, 2)).unwrap();
    println!("Q_3(1) vs Q_3(2): {:?}", a.poset().find_isomorphism(b.poset(), DEFAULT_ISO_BUDGET));
}
