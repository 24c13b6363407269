//! Generating-function Möbius numbers against directly built posets.

use num_bigint::BigInt;

use eigenlattice::dowling::{build_family, FamilySpec};
use eigenlattice::series::{counts_general, mobius_q_dd0, mobius_q_dde, mobius_restricted};

fn mu(spec: &FamilySpec) -> BigInt {
    BigInt::from(build_family(spec).unwrap().poset().mobius_bounded().unwrap())
}

#[test]
fn dde_matches_posets() {
    for d in 2..=4usize {
        for r in 1..=2u64 {
            for e in 0..d {
                let cap = if d as u64 * r > 2 { 6 } else { 8 };
                let t = (cap - e) / d;
                let series = mobius_q_dde(r, d, e, t).unwrap();
                for n in 1..=t {
                    let spec = FamilySpec::new(d * n + e, (d as u64 * r) as u32, d, d, []).unwrap();
                    assert_eq!(series[n], mu(&spec), "{spec}");
                }
            }
        }
    }
}

#[test]
fn dd0_matches_posets() {
    let series = mobius_q_dd0(1, 2, 3).unwrap();
    for n in 1..=3 {
        let spec = FamilySpec::new(2 * n, 2, 2, 2, [0]).unwrap();
        assert_eq!(series[n], mu(&spec), "{spec}");
    }
}

#[test]
fn even_blocks_and_even_zero_block() {
    for r in 1..=3u64 {
        let counts = counts_general(1, 1, 0, r).unwrap();
        let series = mobius_restricted(&counts, r, 6, |n| n % 2 == 0, |n| n % 2 == 0).unwrap();
        for n in [2usize, 4, 6] {
            let odd: Vec<usize> = (1..=n).filter(|j| j % 2 == 1).collect();
            let spec = FamilySpec::new(n, r as u32, 2, 1, odd).unwrap();
            assert_eq!(series[n], mu(&spec), "{spec}");
        }
        assert!(series.iter().skip(1).step_by(2).all(|x| *x == BigInt::from(0)));
    }
}

#[test]
fn restricted_rejects_non_semigroup() {
    let counts = counts_general(1, 1, 0, 2).unwrap();
    assert!(mobius_restricted(&counts, 2, 4, |n| n == 2, |n| n % 2 == 0).is_err());
}
