//! Eigenspace posets of reflection cosets and the families they match.

use eigenlattice::reflection::{build_eigenposet, classify_case, verify_theorem, CosetParams};

fn main() {
    let cosets = [
        CosetParams::new(2, 2, 3, 1, 2).unwrap(),
        CosetParams::new(2, 2, 2, 1, 2).unwrap(),
        CosetParams::new(2, 2, 2, 1, 4).unwrap(),
        CosetParams::new(1, 1, 4, 1, 2).unwrap(),
        CosetParams::new(3, 3, 3, 3, 2).unwrap(),
        CosetParams::new(3, 1, 3, 1, 3).unwrap().with_zeta_exp(2).unwrap(),
    ];
    for params in &cosets {
        let pred = classify_case(params).unwrap();
        let eig = build_eigenposet(params).unwrap();
        let rep = verify_theorem(params).unwrap();
        println!(
            "G({},{},{}) e={} ζ=exp(2πi·{}/{})  case {:<3} {:<22} spaces {:>4}  family {:>4}  mu {:>4}  {}",
            params.r,
            params.p,
            params.n,
            params.e,
            params.zeta_exp,
            params.m,
            pred.case.to_string(),
            pred.description,
            eig.spaces.len(),
            rep.rhs_size,
            rep.mobius,
            if rep.passed() { "ok" } else { "MISMATCH" }
        );
    }
}
