//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

use cubictower::arith::{cubic_exponent, cubic_exponent_with_root, is_prime, primitive_roots, smallest_primitive_root};
use cubictower::census::{doublet_census, embedded_fixtures, multiplet_census, quartet_census, verify_fixtures};
use cubictower::conductor::{decompose_factored, is_admissible};
use cubictower::f3geometry::{bundles, lines, plane_span, planes};
use cubictower::galois_action::{elementary_abelian, elementary_sigma, elementary_sigma_closed, named_group, sigma_census};
use cubictower::residue_graph::{build_graph, symbol_matrix, symbol_matrix_with_roots};
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool").install(f)
}

fn cubic_multiplets() -> Outcome {
    let start = Instant::now();
    let m = single_threaded(|| multiplet_census(3, 100_000).unwrap());
    let took = start.elapsed();
    let got: Vec<(u64, Option<u64>)> = m.rows.iter().map(|r| (r.conductors, r.min)).collect();
    let want = vec![(4785, Some(7)), (3863, Some(63)), (783, Some(819)), (26, Some(15561))];
    let ok = got == want && m.total_conductors == 9457 && m.total_fields == 15851 && took < Duration::from_secs(10);
    check(ok, format!("rows {got:?}, totals {}/{}, {took:.2?}", m.total_conductors, m.total_fields))
}

fn quintic_multiplets() -> Outcome {
    let m = multiplet_census(5, 100_000).unwrap();
    let got: Vec<(u64, Option<u64>)> = m.rows.iter().map(|r| (r.conductors, r.min)).collect();
    let want = vec![(2388, Some(11)), (845, Some(275)), (49, Some(8525))];
    let ok = got == want && m.total_conductors == 3282 && m.total_fields == 6552;
    check(ok, format!("rows {got:?}, totals {}/{}", m.total_conductors, m.total_fields))
}

// label, conductor counts at 25000/50000/75000/100000, minimum below 10^5
const CATEGORY_TABLE: [(&str, [u64; 4], u64); 17] = [
    ("I/1", [7, 19, 27, 38], 4977),
    ("I/2", [15, 29, 44, 60], 7657),
    ("II/1", [10, 25, 36, 47], 3913),
    ("II/2", [7, 19, 34, 45], 6327),
    ("III/1", [11, 22, 41, 52], 1953),
    ("III/2", [57, 125, 181, 262], 819),
    ("III/3", [20, 50, 81, 124], 1197),
    ("III/4", [5, 8, 16, 17], 6643),
    ("III/5", [4, 17, 27, 37], 14049),
    ("III/6", [5, 16, 27, 31], 8541),
    ("III/7", [4, 8, 20, 34], 4599),
    ("III/8", [1, 4, 6, 7], 20293),
    ("III/9", [3, 7, 11, 15], 16471),
    ("IV/1", [0, 0, 2, 7], 61579),
    ("IV/2", [0, 1, 1, 2], 49543),
    ("IV/3", [0, 1, 2, 5], 38311),
    ("V/1", [0, 0, 0, 0], 0),
];
const SUBTOTALS: [(&str, [u64; 4]); 5] =
    [("I", [22, 48, 71, 98]), ("II", [17, 44, 70, 92]), ("III", [110, 257, 410, 579]), ("IV", [0, 2, 5, 14]), ("V", [0, 0, 0, 0])];
const TOTALS: [u64; 4] = [149, 351, 556, 783];

fn category_table() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (k, bound) in [25_000u64, 50_000, 75_000, 100_000].into_iter().enumerate() {
        let c = quartet_census(bound).unwrap();
        for (label, counts, min) in CATEGORY_TABLE {
            let cell = c.cell(label).unwrap();
            let min_ok = k < 3 || (counts[3] == 0 && cell.min.is_none()) || cell.min == Some(min);
            if cell.conductors != counts[k] || cell.fields != 4 * counts[k] || !min_ok {
                bad.push(format!("{label}@{bound}"));
            }
        }
        for (cat, counts) in SUBTOTALS {
            if c.subtotal(cat).unwrap().conductors != counts[k] {
                bad.push(format!("{cat}@{bound}"));
            }
        }
        if c.total.conductors != TOTALS[k] || c.total.fields != 4 * TOTALS[k] {
            bad.push(format!("total@{bound}"));
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < Duration::from_secs(30);
    check(ok, format!("{} labels x 4 bounds, mismatches {bad:?}, {took:.2?}", CATEGORY_TABLE.len()))
}

fn doublet_graphs() -> Outcome {
    let d = doublet_census(100_000).unwrap();
    let band = (1550..=1740).contains(&(4 * d.g3));
    check((d.g1, d.g2, d.g3) == (1740, 1715, 408) && band, format!("({}, {}, {}), 4*g3 = {}", d.g1, d.g2, d.g3, 4 * d.g3))
}

fn fixtures() -> Outcome {
    let rows = embedded_fixtures();
    let rep = verify_fixtures(rows);
    let non_exc_groups = rep.rows.iter().zip(rows).filter(|(r, (_, f))| !f.exception && r.groups_ok.is_some()).count();
    let first_bad: Vec<String> = rep.rows.iter().filter(|r| !r.passed()).take(3).map(|r| format!("{} {}", r.file, r.conductor)).collect();
    check(rep.failed == 0, format!("{} rows, {} passed, {non_exc_groups} group columns checked by rule; {first_bad:?}", rows.len(), rep.passed))
}

fn sigma_rows() -> Outcome {
    let start = Instant::now();
    let rows = [
        ("4,2", (6, 2, 2, 2)),
        ("8,3", (8, 0, 0, 0)),
        ("8,4", (24, 8, 8, 2)),
        ("8,5", (168, 56, 0, 0)),
        ("25,2", (480, 20, 20, 20)),
        ("125,3", (12000, 500, 500, 20)),
        ("125,4", (500, 0, 0, 0)),
    ];
    let mut bad = Vec::new();
    for (name, want) in rows {
        let got = sigma_census(&named_group(name).unwrap(), 3).unwrap().tuple();
        if got != want {
            bad.push(format!("<{name}> {got:?}"));
        }
    }
    let took = start.elapsed();
    check(bad.is_empty() && took < Duration::from_secs(60), format!("7 rows, mismatches {bad:?}, {took:.2?}"))
}

// Slower than the module's own index formulas: exponent by searching the
// powers of a primitive root found by brute force.
fn index_character(m: u64, r: u64, table: &[u64]) -> Option<u32> {
    let k = table.iter().position(|&x| x == r % m)?;
    Some((k % 3) as u32)
}

fn power_table(m: u64) -> Vec<u64> {
    let phi = if m == 9 { 6 } else { m - 1 };
    let coprime = |x: u64| !x.is_multiple_of(3) || m != 9;
    let g = (2..m)
        .filter(|&g| coprime(g))
        .find(|&g| {
            let mut x = 1;
            (1..=phi).all(|k| {
                x = x * g % m;
                (x == 1) == (k == phi)
            })
        })
        .unwrap();
    let mut t = Vec::with_capacity(phi as usize);
    let mut x = 1;
    for _ in 0..phi {
        t.push(x);
        x = x * g % m;
    }
    t
}

fn properties() -> Outcome {
    let mut bad = Vec::new();
    // Geometry duality over all 13 x 13 incidences.
    let (ls, ps, bs) = (lines(), planes(), bundles());
    for l in &ls {
        for p in &ps {
            let brute = plane_span(p).contains(&l.generator);
            if brute != p.lines.contains(&l.index) || brute != bs[l.index - 1].planes.contains(&p.index) {
                bad.push(format!("incidence L{} P{}", l.index, p.index));
            }
        }
    }
    // Vanishing of δ under every mix of first and second primitive roots.
    let m = multiplet_census(3, 100_000).unwrap();
    let mut zero_edge = 0;
    for c in (2..100_000u64).filter(|&c| is_admissible(3, c)) {
        let f = cubictower::arith::factorize(c);
        if f.factors.len() != 3 {
            continue;
        }
        let k = decompose_factored(3, &f).unwrap();
        let g = build_graph(&symbol_matrix(&k).unwrap()).unwrap();
        if g.n_edges != 0 {
            continue;
        }
        zero_edge += 1;
        let alts: Vec<Vec<u64>> = k.ramified_primes.iter().map(|&q| primitive_roots(q).unwrap().take(2).collect()).collect();
        for mask in 0..8usize {
            let roots: Vec<u64> = (0..3).map(|i| alts[i][(mask >> i) & 1]).collect();
            let alt = build_graph(&symbol_matrix_with_roots(&k, &roots).unwrap()).unwrap();
            if alt.delta_zero != g.delta_zero || alt.n_edges != 0 {
                bad.push(format!("delta {c} roots {roots:?}"));
            }
        }
    }
    if zero_edge != 38 + 52 || m.row(3).unwrap().conductors != 783 {
        bad.push(format!("zero-edge conductors {zero_edge}"));
    }
    // Multiplicativity of the character for every prime modulus below 10^4.
    let mut moduli = 0;
    for q in (7..10_000u64).filter(|&q| q % 3 == 1 && is_prime(q)) {
        moduli += 1;
        for r in 2..40i64 {
            for s in [2i64, 3, 5, 7, 11, 13, -1, -2] {
                let (a, b, ab) = (cubic_exponent(3, q, r).unwrap(), cubic_exponent(3, q, s).unwrap(), cubic_exponent(3, q, r * s).unwrap());
                if let (Some(x), Some(y), Some(z)) = (a.exponent, b.exponent, ab.exponent) {
                    if (x + y) % 3 != z {
                        bad.push(format!("chi mod {q}: {r}*{s}"));
                    }
                }
            }
        }
    }
    // Census output independent of the number of workers.
    let json = |n: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| {
            serde_json::to_string(&(quartet_census(60_000).unwrap(), multiplet_census(5, 60_000).unwrap(), doublet_census(60_000).unwrap()))
                .unwrap()
        })
    };
    if json(1) != json(4) || json(4) != json(3) {
        bad.push("census differs across thread counts".into());
    }
    // Closed-form GL count against brute force and the table-group census.
    for (p, r) in [(2u64, 2u32), (2, 3), (5, 2), (7, 2)] {
        let g = elementary_abelian(p as u32, r as usize).unwrap();
        let brute = elementary_sigma(p, r).unwrap();
        if brute != elementary_sigma_closed(p, r) || brute != sigma_census(&g, 3).unwrap() {
            bad.push(format!("elementary ({p})^{r}"));
        }
    }
    check(bad.is_empty(), format!("169 incidences, {zero_edge} zero-edge conductors x 8 root choices, {moduli} moduli; failures {:?}", &bad[..bad.len().min(3)]))
}

fn derived_oracles() -> Outcome {
    let below_100 = (1..100u64).filter(|&c| is_admissible(3, c)).count();
    let mut pairs = 0u64;
    let mut bad = Vec::new();
    let moduli = std::iter::once(9).chain((7..10_000u64).filter(|&q| q % 3 == 1 && is_prime(q)));
    for m in moduli {
        let table = power_table(m);
        let g = smallest_primitive_root(m).unwrap();
        if g != table[1] {
            bad.push(format!("root mod {m}"));
        }
        for r in 1..m {
            if m == 9 && r % 3 == 0 {
                continue;
            }
            pairs += 1;
            let fast = cubic_exponent_with_root(3, m, r as i64, g).unwrap().exponent;
            if fast != index_character(m, r, &table) {
                bad.push(format!("({r}/{m})"));
            }
        }
    }
    check(below_100 == 14 && bad.is_empty(), format!("{below_100} admissible below 100; {pairs} (m, r) pairs, mismatches {:?}", &bad[..bad.len().min(3)]))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 cubic multiplet census below 10^5", cubic_multiplets),
        ("2 quintic multiplet census below 10^5", quintic_multiplets),
        ("3 category/graph table at four bounds", category_table),
        ("4 doublet graph distribution below 10^5", doublet_graphs),
        ("5 fixture regression", fixtures),
        ("6 sigma census rows of order <= 125", sigma_rows),
        ("7 property suites", properties),
        ("8 derived oracles", derived_oracles),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        failed += !o.ok as usize;
        println!("{} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
