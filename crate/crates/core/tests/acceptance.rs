//! Acceptance suite. Each criterion runs under a pinned wall-clock limit and
//! prints one PASS/FAIL line; the test fails if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eigenlattice::dowling::{
    build_family, count_atoms, count_minimal_below, distinguished_element, FamilyPoset, FamilySpec, GPartition,
};
use eigenlattice::poset::{is_order_isomorphism, FinitePoset, IsoOutcome, DEFAULT_ISO_BUDGET};
use eigenlattice::reflection::{build_eigenposet, intersections_closed, parameter_grid, verify_theorem};
use eigenlattice::series::mobius_q_dde;
use eigenlattice::shellability::{check_recursive_atom_ordering, lex_atom_order, RaoOutcome, DEFAULT_SHELL_BUDGET};

const LIMIT_PRODUCT: Duration = Duration::from_secs(60);
const LIMIT_PARTITION: Duration = Duration::from_secs(60);
const LIMIT_SERIES: Duration = Duration::from_secs(1);
const LIMIT_SERIES_POSETS: Duration = Duration::from_secs(60);
const LIMIT_GRID: Duration = Duration::from_secs(600);
const LIMIT_COUNTS: Duration = Duration::from_secs(120);
const LIMIT_SHELL: Duration = Duration::from_secs(300);
const LIMIT_HOMOLOGY: Duration = Duration::from_secs(300);
const LIMIT_CHAINS: Duration = Duration::from_secs(120);
const LIMIT_JOINS: Duration = Duration::from_secs(600);
const LIMIT_ACTION: Duration = Duration::from_secs(60);

const MAX_HOMOLOGY_SIZE: usize = 2000;
const MAX_CHAIN_SIZE: usize = 400;
const SEED: u64 = 0x5eed_2026;

type Check = fn() -> Result<String, String>;

fn mu(f: &FamilyPoset) -> i64 {
    f.poset().mobius_bounded().expect("family posets are bounded")
}

fn family(n: usize, r: u32, d: usize, k: usize, j: &[usize]) -> FamilyPoset {
    build_family(&FamilySpec::new(n, r, d, k, j.iter().copied()).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Families with `k | d`, `k | r`, `d ≥ 2` and `n ≤ nmax`.
fn coloured_specs(nmax: usize, rmax: u32, dmax: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for d in 2..=dmax {
        for r in 1..=rmax {
            for k in (1..=d).filter(|&k| d % k == 0 && (r as usize).is_multiple_of(k)) {
                for n in 1..=nmax {
                    out.push(FamilySpec::new(n, r, d, k, []).unwrap());
                }
            }
        }
    }
    out
}

fn c1_product_formulas() -> Result<String, String> {
    let mut checked = 0;
    for n in 1..=5usize {
        for r in 1..=3u32 {
            let f = family(n, r, 1, 1, &[]);
            let want = sign(n) * (1..n as i64).map(|j| j * i64::from(r) + 1).product::<i64>();
            ensure(mu(&f) == want, || format!("μ(Q_{n}({r})) = {} ≠ {want}", mu(&f)))?;
            checked += 1;
            if r >= 2 && n >= 2 {
                let f = family(n, r, 1, 1, &[1]);
                let want = sign(n)
                    * (n as i64 - 1)
                    * (i64::from(r) - 1)
                    * (1..=n as i64 - 2).map(|j| j * i64::from(r) + 1).product::<i64>();
                ensure(mu(&f) == want, || format!("μ(Q_{n}({r},{{1}})) = {} ≠ {want}", mu(&f)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} families"))
}

/// `Π_n` from set partitions of `{1..n}` ordered by refinement.
fn partition_lattice(n: usize) -> FinitePoset {
    fn rgs(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            cur.push(b);
            rgs(n, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rgs(n, &mut Vec::new(), &mut parts);
    let keys: Vec<String> = parts.iter().map(|p| format!("{p:?}")).collect();
    // x ≤ y iff every block of x lies inside a block of y.
    FinitePoset::from_order_fn(keys, |a, b| {
        let (x, y) = (&parts[a], &parts[b]);
        (0..n).all(|i| (0..n).all(|j| x[i] != x[j] || y[i] == y[j]))
    })
    .unwrap()
}

fn c2_partition_lattices() -> Result<String, String> {
    for n in 2..=7usize {
        let pi = partition_lattice(n);
        let q = family(n - 1, 1, 1, 1, &[]);
        let want = sign(n - 1) * (1..n as i64).product::<i64>();
        ensure(mu(&q) == want, || format!("μ(Q_{}(1)) = {} ≠ {want}", n - 1, mu(&q)))?;
        match q.poset().find_isomorphism(&pi, DEFAULT_ISO_BUDGET) {
            IsoOutcome::Found(map) => {
                ensure(is_order_isomorphism(q.poset(), &pi, &map), || format!("bad map for Π_{n}"))?
            }
            other => return Err(format!("Π_{n}: {other:?}")),
        }
        let full = family(n, 1, 1, 1, &(1..=n).collect::<Vec<_>>());
        ensure(full.poset().find_isomorphism(&pi, DEFAULT_ISO_BUDGET).is_found(), || {
            format!("Q_{n}(1,{{1..n}}) ≇ Π_{n}")
        })?;
    }
    Ok("Π_2..Π_7".into())
}

fn c3_series() -> Result<String, String> {
    let start = Instant::now();
    let series = mobius_q_dde(1, 2, 0, 5).map_err(|e| e.to_string())?;
    let got: Vec<i64> = series[1..].iter().map(|x| i64::try_from(x).unwrap()).collect();
    ensure(got == [0, -1, 24, -918, 54560], || format!("series gave {got:?}"))?;
    let series_time = start.elapsed();
    ensure(series_time <= LIMIT_SERIES, || format!("series took {series_time:?}"))?;
    for (n, want) in [(2usize, 0i64), (4, -1), (6, 24)] {
        let f = family(n, 2, 2, 2, &[]);
        ensure(mu(&f) == want, || format!("μ(Q_{n}(2,2,2)) = {} ≠ {want}", mu(&f)))?;
    }
    ensure(start.elapsed() <= LIMIT_SERIES_POSETS, || "posets too slow".into())?;
    Ok(format!("series in {:.3}s", series_time.as_secs_f64()))
}

fn c4_grid() -> Result<String, String> {
    let grid = parameter_grid(3, 2, 4, 4);
    let mut failures = Vec::new();
    for params in &grid {
        let rep = verify_theorem(params).map_err(|e| format!("{params:?}: {e}"))?;
        if !rep.passed() {
            failures.push(format!("{params:?}"));
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    Ok(format!("{}/{} cosets", grid.len(), grid.len()))
}

/// Labelings of a `d`-block over `Z/r` with equal counts in each class
/// mod `k`, up to a global shift.
fn block_labelings(d: usize, r: u32, k: usize) -> u64 {
    let total = (r as u64).pow(d as u32);
    let even = (0..total)
        .filter(|&code| {
            let mut counts = vec![0usize; k];
            let mut c = code;
            for _ in 0..d {
                counts[(c % r as u64) as usize % k] += 1;
                c /= r as u64;
            }
            counts.iter().all(|&x| x == d / k)
        })
        .count() as u64;
    even / r as u64
}

fn c5_counts() -> Result<String, String> {
    let mut checked = 0;
    for d in 2..=4usize {
        for r in 1..=4u32 {
            for k in (1..=d).filter(|&k| d % k == 0 && (r as usize).is_multiple_of(k)) {
                let per_block = BigInt::from(block_labelings(d, r, k));
                for e in 0..d {
                    for n in (1..).take_while(|&n| d * n + e <= 8) {
                        // Choose the zero block, then n unordered d-blocks, then labels.
                        let brute = factorial(d * n + e) / (factorial(e) * factorial(n) * factorial(d).pow(n as u32))
                            * per_block.pow(n as u32);
                        let closed = factorial(d * n + e) * BigInt::from(r).pow(((d - 1) * n) as u32)
                            / (factorial(n)
                                * factorial(e)
                                * factorial(d / k).pow((k * n) as u32)
                                * BigInt::from(k).pow((d * n) as u32));
                        ensure(brute == closed, || format!("N formula differs at d={d} r={r} k={k} e={e} n={n}"))?;
                        let spec = FamilySpec::new(d * n + e, r, d, k, []).unwrap();
                        let got = BigInt::from(count_atoms(&spec).unwrap());
                        ensure(got == closed, || format!("atoms of {spec}: {got} ≠ {closed}"))?;
                        checked += 1;
                    }
                }
                for n in (1..).take_while(|&n| d * n <= 8) {
                    // Split each colour class into n groups of d/k, then forget the order of blocks.
                    let class = d * n / k;
                    let split = factorial(class) / factorial(d / k).pow(n as u32);
                    let want = split.pow(k as u32) / factorial(n);
                    let spec = FamilySpec::new(d * n, r, d, k, []).unwrap();
                    let c = distinguished_element(n, d, k, r);
                    let got = BigInt::from(count_minimal_below(&c, &spec).unwrap());
                    ensure(got == want, || format!("minimal below c_{n} in {spec}: {got} ≠ {want}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} counts"))
}

fn c6_shellability() -> Result<String, String> {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("certificates");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut largest = 0;
    let mut count = 0;
    for spec in coloured_specs(6, 3, 3) {
        let f = build_family(&spec).unwrap();
        let ord = lex_atom_order(&f).map_err(|e| format!("{spec}: {e}"))?;
        match check_recursive_atom_ordering(f.poset(), &ord, DEFAULT_SHELL_BUDGET).map_err(|e| e.to_string())? {
            RaoOutcome::Certified(c) => {
                ensure(c.verify(f.poset()), || format!("{spec}: certificate does not verify"))?;
                largest = largest.max(c.nodes.len());
                let name = spec.to_string().replace(['(', ')', ','], "_");
                std::fs::write(dir.join(format!("{name}.json")), c.to_json()).map_err(|e| e.to_string())?;
                count += 1;
            }
            other => return Err(format!("{spec}: {other:?}")),
        }
    }
    Ok(format!("{count} certificates, largest {largest} nodes, in {}", dir.display()))
}

fn homology_specs() -> Vec<FamilySpec> {
    let mut specs = coloured_specs(6, 3, 3);
    for n in 2..=5 {
        for r in 1..=3 {
            specs.push(FamilySpec::dowling(n, r));
        }
    }
    specs
}

fn c7_homology() -> Result<String, String> {
    let mut checked = 0;
    for spec in homology_specs() {
        let f = build_family(&spec).unwrap();
        let p = f.poset();
        if p.len() > MAX_HOMOLOGY_SIZE || p.len() < 3 {
            continue;
        }
        let len = p.length().unwrap();
        let betti = p.proper_part().unwrap().order_complex().homology_ranks();
        let top = len as isize - 2;
        ensure(betti.concentrated_in(top), || format!("{spec}: {betti:?} not concentrated in {top}"))?;
        let rank = if top < 0 { betti.minus_one } else { betti.ranks.get(top as usize).copied().unwrap_or(0) };
        ensure(rank as i64 == mu(&f).abs(), || format!("{spec}: top rank {rank} ≠ |μ| {}", mu(&f).abs()))?;
        checked += 1;
    }
    Ok(format!("{checked} posets up to {MAX_HOMOLOGY_SIZE} elements"))
}

fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> FinitePoset {
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        rel[i][i] = true;
        for j in i + 1..n {
            rel[i][j] = rng.gen_bool(0.3);
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][m] && rel[m][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    FinitePoset::from_order_fn((0..n).map(|i| format!("v{i}")), |a, b| rel[perm[a]][perm[b]]).unwrap()
}

fn c8_chain_mobius() -> Result<String, String> {
    let mut posets = 0;
    for spec in homology_specs().into_iter().chain([FamilySpec::new(3, 2, 1, 1, [1]).unwrap()]) {
        let f = build_family(&spec).unwrap();
        let p = f.poset();
        if p.len() > MAX_CHAIN_SIZE {
            continue;
        }
        let b = p.bottom().unwrap();
        for y in 0..p.len() {
            let via = p.mobius_via_chains(b, y).unwrap();
            ensure(p.mobius(b, y).unwrap() == via, || format!("{spec}: μ(0̂,{}) disagrees", p.key(y)))?;
        }
        posets += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..50 {
        let p = random_poset(&mut rng, 12);
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.leq(x, y) {
                    ensure(p.mobius(x, y).unwrap() == p.mobius_via_chains(x, y).unwrap(), || {
                        format!("random poset {t}: ({x},{y})")
                    })?;
                }
            }
        }
    }
    Ok(format!("{posets} families and 50 random posets"))
}

fn c9_joins() -> Result<String, String> {
    let grid = parameter_grid(3, 2, 4, 4);
    for params in &grid {
        let eig = build_eigenposet(params).map_err(|e| e.to_string())?;
        ensure(intersections_closed(&eig), || format!("{params:?}: not closed under intersection"))?;
    }
    Ok(format!("{} cosets", grid.len()))
}

fn c10_action() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let families: Vec<(FamilySpec, Vec<GPartition>)> = (1..=4usize)
        .flat_map(|n| (1..=3u32).map(move |r| FamilySpec::dowling(n, r)))
        .map(|s| {
            let m = s.members();
            (s, m)
        })
        .collect();
    let mut comparable = 0;
    for _ in 0..1000 {
        let (spec, members) = families.choose(&mut rng).unwrap();
        let n = spec.n;
        let x = members.choose(&mut rng).unwrap();
        // Bias toward comparable pairs by taking y as a join half the time.
        let z = members.choose(&mut rng).unwrap();
        let y = if rng.gen_bool(0.5) { x.join(z) } else { z.clone() };
        let g: Vec<u32> = (0..n).map(|_| rng.gen_range(0..spec.r)).collect();
        let mut sigma: Vec<usize> = (1..=n).collect();
        sigma.shuffle(&mut rng);
        let (gx, gy) = (x.act(&g, &sigma), y.act(&g, &sigma));
        ensure(spec.admits(&gx) && spec.admits(&gy), || format!("{spec}: action leaves the family"))?;
        ensure(x.leq(&y) == gx.leq(&gy) && y.leq(x) == gy.leq(&gx), || {
            format!("{spec}: order not preserved for {x} {y} under g={g:?} σ={sigma:?}")
        })?;
        ensure(gx.join(&gy) == x.join(&y).act(&g, &sigma), || format!("{spec}: join not equivariant"))?;
        comparable += usize::from(x.leq(&y));
    }
    Ok(format!("1000 samples, {comparable} comparable"))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, Check, Duration); 10] = [
        (1, "Möbius product formulas", c1_product_formulas, LIMIT_PRODUCT),
        (2, "partition lattices", c2_partition_lattices, LIMIT_PARTITION),
        (3, "series and Q_2n(2,2,2)", c3_series, LIMIT_SERIES_POSETS),
        (4, "eigenspace theorem grid", c4_grid, LIMIT_GRID),
        (5, "atom and minimal-element counts", c5_counts, LIMIT_COUNTS),
        (6, "lexicographic recursive atom orderings", c6_shellability, LIMIT_SHELL),
        (7, "homology concentration", c7_homology, LIMIT_HOMOLOGY),
        (8, "Möbius via chains", c8_chain_mobius, LIMIT_CHAINS),
        (9, "eigenspace intersections", c9_joins, LIMIT_JOINS),
        (10, "wreath action", c10_action, LIMIT_ACTION),
    ];
    let mut failed = BTreeSet::new();
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; exceeded {}s", limit.as_secs())),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {id:>2} PASS  {name}: {detail} ({:.2}s, limit {}s)",
                took.as_secs_f64(),
                limit.as_secs()
            ),
            Err(why) => {
                println!("criterion {id:>2} FAIL  {name}: {why} ({:.2}s)", took.as_secs_f64());
                failed.insert(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
