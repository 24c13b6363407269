//! Möbius numbers three ways: the recursive row, alternating chain counts,
//! and the reduced Euler characteristic of the proper part.

use eigenlattice::dowling::{build_family, FamilySpec};

fn main() {
    for (n, r) in [(2, 1), (3, 1), (3, 2), (4, 2), (3, 3)] {
        let f = build_family(&FamilySpec::dowling(n, r)).unwrap();
        let p = f.poset();
        let (b, t) = (p.bottom().unwrap(), p.top().unwrap());
        let row = p.mobius(b, t).unwrap();
        let chains = p.mobius_via_chains(b, t).unwrap();
        let euler = p.proper_part().unwrap().order_complex().homology_ranks().reduced_euler_characteristic();
        let product: i64 = (1..n as i64).map(|j| j * i64::from(r) + 1).product::<i64>() * if n % 2 == 0 { 1 } else { -1 };
        println!("{:<8} row {row:>6}  chains {chains:>6}  euler {euler:>6}  product {product:>6}", f.spec().to_string());
    }
}
