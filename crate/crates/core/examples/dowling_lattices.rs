//! Sizes, lengths and Möbius numbers of a few Dowling-type families.

use eigenlattice::dowling::{build_family, count_atoms, FamilySpec};

fn main() {
    let specs = [
        FamilySpec::dowling(3, 2),
        FamilySpec::dowling(4, 3),
        FamilySpec::new(4, 2, 1, 1, [1]).unwrap(),
        FamilySpec::new(4, 2, 2, 2, []).unwrap(),
        FamilySpec::new(6, 2, 2, 1, [0]).unwrap(),
        FamilySpec::new(6, 3, 3, 3, []).unwrap(),
    ];
    println!("{:<16} {:>6} {:>6} {:>8} {:>6} {:>8}", "family", "size", "length", "mu", "atoms", "lattice");
    for spec in &specs {
        let f = build_family(spec).expect("valid spec");
        let p = f.poset();
        println!(
            "{:<16} {:>6} {:>6} {:>8} {:>6} {:>8}",
            spec.to_string(),
            p.len(),
            p.length().unwrap_or(0),
            p.mobius_bounded().unwrap(),
            count_atoms(spec).unwrap(),
            p.is_lattice()
        );
    }

    let f = build_family(&FamilySpec::dowling(2, 2)).unwrap();
    println!("\nelements of {}:", f.spec());
    for i in 0..f.poset().len() {
        println!("  {}", f.poset().key(i));
    }
}
