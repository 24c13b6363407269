//! Runs the eigenspace/Dowling comparison over every diagonal coset with
//! r ≤ 3, 2 ≤ n ≤ 4, m ≤ 4 and prints one line per coset.

use std::time::Instant;

use eigenlattice::reflection::{build_eigenposet, intersections_closed, parameter_grid, verify_theorem};

fn main() {
    let start = Instant::now();
    let grid = parameter_grid(3, 2, 4, 4);
    let mut failures = 0;
    for params in &grid {
        let rep = verify_theorem(params).expect("diagonal cosets are supported");
        let closed = intersections_closed(&build_eigenposet(params).unwrap());
        let ok = rep.passed() && closed;
        failures += usize::from(!ok);
        println!(
            "r={} p={} e={} n={} m={} ζ=e(2πi·{}/{})  case {:<3} {:<22} |S|={:<5} μ={:<6} {}",
            params.r,
            params.p,
            params.e,
            params.n,
            params.m,
            params.zeta_exp,
            params.m,
            rep.case.as_deref().unwrap_or("-"),
            rep.target,
            rep.lhs_size,
            rep.mobius,
            if ok { "ok" } else { "FAIL" },
        );
    }
    println!("{} cosets, {failures} failures, {:.2?}", grid.len(), start.elapsed());
}
