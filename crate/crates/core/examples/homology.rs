//! Reduced homology of proper parts: concentrated in the top degree with
//! rank |μ| for shellable families.

use eigenlattice::dowling::{build_family, FamilySpec};

fn main() {
    let specs = [
        FamilySpec::dowling(3, 2),
        FamilySpec::dowling(4, 2),
        FamilySpec::new(4, 2, 2, 2, []).unwrap(),
        FamilySpec::new(6, 2, 2, 2, []).unwrap(),
        FamilySpec::new(6, 3, 3, 1, []).unwrap(),
    ];
    for spec in &specs {
        let f = build_family(spec).unwrap();
        let proper = f.poset().proper_part().unwrap();
        let betti = proper.order_complex().homology_ranks();
        println!(
            "{:<12} mu {:>5}  reduced betti (from degree -1) {:?}",
            spec.to_string(),
            f.poset().mobius_bounded().unwrap(),
            std::iter::once(betti.minus_one).chain(betti.ranks.iter().copied()).collect::<Vec<_>>()
        );
    }
}
