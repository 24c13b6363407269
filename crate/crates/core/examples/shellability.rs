//! Certifies the lexicographic atom ordering of Q_n(r,d) and Q_n(r,d,k)
//! for small parameters and writes the largest certificate to stdout.

use std::time::Instant;

use eigenlattice::dowling::{build_family, FamilySpec};
use eigenlattice::shellability::{check_recursive_atom_ordering, lex_atom_order, RaoOutcome, DEFAULT_SHELL_BUDGET};

fn main() {
    let mut largest = None;
    for d in [2usize, 3] {
        for r in 1..=3u32 {
            for k in (1..=d).filter(|&k| d % k == 0 && (r as usize).is_multiple_of(k)) {
                for n in 1..=6 {
                    let spec = FamilySpec::new(n, r, d, k, []).expect("valid spec");
                    let start = Instant::now();
                    let f = build_family(&spec).expect("family builds");
                    let ord = lex_atom_order(&f).expect("bounded family poset");
                    let outcome = check_recursive_atom_ordering(f.poset(), &ord, DEFAULT_SHELL_BUDGET).unwrap();
                    let status = match &outcome {
                        RaoOutcome::Certified(c) => format!("certified ({} nodes)", c.nodes.len()),
                        RaoOutcome::Failed(v) => format!("FAILED {v:?}"),
                        RaoOutcome::Inconclusive => "inconclusive".to_string(),
                    };
                    println!("{:<16} |P|={:<6} atoms={:<5} {status} {:.2?}", spec.to_string(), f.poset().len(), ord.order.len(), start.elapsed());
                    if let RaoOutcome::Certified(c) = outcome {
                        if largest.as_ref().is_none_or(|(_, l): &(String, usize)| c.nodes.len() > *l) {
                            largest = Some((c.to_json(), c.nodes.len()));
                        }
                    }
                }
            }
        }
    }
    if let Some((json, _)) = largest {
        println!("largest certificate: {} bytes of JSON", json.len());
    }
}
