//! The ten acceptance criteria, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines always reach the output; exits nonzero if
//! any criterion fails or overruns its time budget.

use orbring::document::RingDocument;
use orbring::sampling::{rng, BasisSampler};
use orbring::suites;
use orbring::{Command, RunConfig};
use orbring_core::combinatorics::CaseTag;
use orbring_core::linalg::Rational;
use orbring_core::oracles::{euler_commuting_pairs, gottsche_series, molien_poincare};
use orbring_core::ring::{build_ring, restriction_ring_hom_check, BasisRef, OrbifoldRing, ResourceBounds};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(case: CaseTag, n: usize, dt: bool) -> Result<OrbifoldRing, String> {
    build_ring(&case, n, dt, &ResourceBounds::default()).map_err(|e| e.to_string())
}

fn config(case: CaseTag, n: usize, dt: bool) -> RunConfig {
    RunConfig::new(case, n, dt, Command::Check { suite: String::from("all") })
}

fn all_passed(records: &[orbring::CheckRecord]) -> Result<(), String> {
    match records.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(format!("{}: {} {:?}", r.name, r.details, r.counterexample)),
    }
}

fn c1_k3() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("k1.json");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_orbring"))
        .args(["build", "--case", "kummer", "-n", "1", "-o", path.to_str().unwrap()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("build exited with {:?}", out.status.code()))?;
    let doc = RingDocument::from_json(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(doc.poincare_invariants == [1, 0, 22, 0, 1], || format!("invariants {:?}", doc.poincare_invariants))?;
    let chi = euler_commuting_pairs(&CaseTag::Kummer, 1);
    ensure(chi == 24, || format!("Euler oracle {chi}"))?;
    Ok(format!("invariants {:?}, Euler oracle {chi}", doc.poincare_invariants))
}

/// Sign of sorting a list of distinct generators, or `None` on a repeat.
fn sort_sign(gens: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..gens.len() {
        for j in 0..gens.len() - 1 - i {
            if gens[j] == gens[j + 1] {
                return None;
            }
            if gens[j] > gens[j + 1] {
                gens.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if gens.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn gens_of(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|k| mask >> k & 1 == 1).collect()
}

fn mask_of(gens: &[usize]) -> usize {
    gens.iter().map(|g| 1 << g).sum()
}

/// `e_S ∧ e_T` on bitmask monomials.
fn wedge(s: usize, t: usize) -> Option<(usize, i64)> {
    let mut g = gens_of(s);
    g.extend(gens_of(t));
    sort_sign(&mut g).map(|sign| (mask_of(&g), sign))
}

/// Pullback along the diagonal `A → A²`: the generator `4b + j` goes to `j`.
fn diagonal_pullback(s: usize) -> Option<(usize, i64)> {
    let mut g: Vec<usize> = gens_of(s).into_iter().map(|k| k % 4).collect();
    sort_sign(&mut g).map(|sign| (mask_of(&g), sign))
}

/// `Δ_* c` as the class with `∫ Δ_* c · ω = ∫_A c · Δ^* ω` for every `ω`.
fn diagonal_pushforward(c: usize) -> BTreeMap<usize, i64> {
    let mut out = BTreeMap::new();
    for m in 0..256usize {
        let comp = 255 ^ m;
        let Some((pulled, s1)) = diagonal_pullback(comp) else { continue };
        let Some((top, s2)) = wedge(c, pulled) else { continue };
        if top != 15 {
            continue;
        }
        let (_, pairing) = wedge(m, comp).expect("complementary");
        out.insert(m, s1 * s2 * pairing);
    }
    out
}

fn expect_terms(ring: &OrbifoldRing, a: usize, b: usize, want: BTreeMap<usize, i64>) -> Result<(), String> {
    let got = ring.star_basis(a, b);
    let want: Vec<(usize, Rational)> = want.into_iter().map(|(k, c)| (k, Rational::from_int(c))).collect();
    ensure(got == want, || {
        format!("{} ⋆ {}: engine {:?}, expected {:?}", ring.basis_label(a), ring.basis_label(b), got, want)
    })
}

fn c2_product_rules() -> Outcome {
    let r = ring(CaseTag::hilb(), 2, true)?;
    let tw = r.elements().iter().position(|g| !g.is_identity()).ok_or("no twisted sector")?;
    let untw = |s: usize| r.global_index(BasisRef { sector: 0, component: 0, local: s });
    let twisted = |s: usize| r.global_index(BasisRef { sector: tw, component: 0, local: s });
    let mut counts = [0usize; 3];
    for a in 0..256 {
        for b in 0..256 {
            let want = wedge(a, b).into_iter().map(|(m, s)| (m + r.sector_offset(0), s)).collect();
            expect_terms(&r, untw(a), untw(b), want)?;
            counts[0] += 1;
        }
    }
    for a in 0..256 {
        for b in 0..16 {
            let restricted = diagonal_pullback(a).and_then(|(m, s)| wedge(m, b).map(|(k, t)| (k, s * t)));
            let want: BTreeMap<usize, i64> = restricted.into_iter().map(|(m, s)| (twisted(m), s)).collect();
            expect_terms(&r, untw(a), twisted(b), want.clone())?;
            let restricted = diagonal_pullback(a).and_then(|(m, s)| wedge(b, m).map(|(k, t)| (k, s * t)));
            let want: BTreeMap<usize, i64> = restricted.into_iter().map(|(m, s)| (twisted(m), s)).collect();
            expect_terms(&r, twisted(b), untw(a), want)?;
            counts[1] += 2;
        }
    }
    for a in 0..16 {
        for b in 0..16 {
            let want: BTreeMap<usize, i64> = match wedge(a, b) {
                None => BTreeMap::new(),
                Some((m, s)) => diagonal_pushforward(m).into_iter().map(|(k, c)| (untw(k), -s * c)).collect(),
            };
            expect_terms(&r, twisted(a), twisted(b), want)?;
            counts[2] += 1;
        }
    }
    Ok(format!(
        "{} untwisted, {} mixed, {} twisted pairs match cup, restricted cup and -Δ_*(αβ)",
        counts[0], counts[1], counts[2]
    ))
}

fn c3_kummer_euler() -> Outcome {
    let mut seen = Vec::new();
    for (n, expected) in [(1usize, 24i128), (2, 108), (3, 448)] {
        let r = ring(CaseTag::Kummer, n, false)?;
        let chi = r.invariant_subring().map_err(|e| e.to_string())?.poincare().euler();
        let oracle = euler_commuting_pairs(&CaseTag::Kummer, n);
        let m = (n + 1) as i128;
        let sigma: i128 = (1..=m).filter(|d| m % d == 0).sum();
        let arithmetic = m * m * m * sigma;
        ensure(chi == oracle && chi == arithmetic && chi == expected, || {
            format!("n={n}: model {chi}, commuting pairs {oracle}, (n+1)³σ(n+1) {arithmetic}")
        })?;
        seen.push(chi);
    }
    Ok(format!("χ = {seen:?} from the model, commuting pairs and (n+1)³σ(n+1)"))
}

fn c4_b2() -> Outcome {
    let mut seen = Vec::new();
    for n in [2usize, 3] {
        let r = ring(CaseTag::Kummer, n, true)?;
        let projector = r.invariant_subring().map_err(|e| e.to_string())?.dim_in_degree(2);
        let molien = molien_poincare(&CaseTag::Kummer, n).map_err(|e| e.to_string())?.coeff(2);
        ensure(projector == 7 && molien == 7, || format!("n={n}: projector {projector}, Molien {molien}"))?;
        seen.push((n, projector));
    }
    Ok(format!("b₂ (n, projector rank = Molien) = {seen:?}"))
}

fn c5_gottsche() -> Outcome {
    let series = gottsche_series(4, [1, 4, 6, 4, 1]).map_err(|e| e.to_string())?;
    for (n, expected) in series.iter().enumerate().skip(1) {
        let r = ring(CaseTag::hilb(), n, false)?;
        let p = r.invariant_subring().map_err(|e| e.to_string())?.poincare();
        ensure(&p == expected, || format!("n={n}: engine {p}, generating function {expected}"))?;
    }
    Ok(format!("n=1..4 agree; n=4: {}", series[4]))
}

const RANDOM_TRIPLES: usize = 10_000;

fn c6_associativity() -> Outcome {
    let mut exhaustive = 0u64;
    for case in [CaseTag::hilb(), CaseTag::Kummer] {
        for n in 1..=2 {
            for dt in [false, true] {
                let r = ring(case.clone(), n, dt)?;
                let table = r.product_table(r.dim()).map_err(|e| e.to_string())?;
                let o = r.check_associativity_exhaustive(&table);
                ensure(o.passed() && o.nontrivial > 0, || format!("{case:?} n={n} dt={dt}: {o:?}"))?;
                exhaustive += o.checked;
            }
        }
    }
    let mut sampled = Vec::new();
    for (case, n) in [(CaseTag::hilb(), 3), (CaseTag::hilb(), 4), (CaseTag::Kummer, 3)] {
        for dt in [false, true] {
            let r = ring(case.clone(), n, dt)?;
            let triples = BasisSampler::new(&r).triples(&mut rng(2024), RANDOM_TRIPLES);
            let o = r.check_associativity_triples(triples);
            ensure(o.passed() && o.checked as usize >= RANDOM_TRIPLES && o.nontrivial > 0, || {
                format!("{} n={n} dt={dt}: {o:?}", case.name())
            })?;
            sampled.push(o.nontrivial);
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive triples; {RANDOM_TRIPLES} seeded triples per sampled ring, nontrivial {sampled:?}"
    ))
}

fn c7_cocycle() -> Outcome {
    for case in [CaseTag::hilb(), CaseTag::Kummer] {
        for n in 1..=4 {
            all_passed(&suites::cocycle(&config(case.clone(), n, true)).map_err(|e| e.to_string())?)?;
        }
    }
    Ok(String::from("identity on all of G³ and integral ε for n=1..4, both cases (up to S₅)"))
}

fn c8_restriction_hom() -> Outcome {
    let mut pairs = 0;
    for n in 1..=2 {
        for dt in [false, true] {
            let rep = restriction_ring_hom_check(n, dt, &ResourceBounds::default()).map_err(|e| e.to_string())?;
            ensure(rep.passed(), || format!("n={n} dt={dt}: {rep:?}"))?;
            pairs += rep.pairs_compared;
        }
    }
    Ok(format!("restriction multiplicative on all {pairs} basis pairs, n=1,2, both dt settings"))
}

fn c9_torsion() -> Outcome {
    for n in 1..=3 {
        all_passed(&suites::torsion(&config(CaseTag::Kummer, n, false)).map_err(|e| e.to_string())?)?;
    }
    Ok(String::from("d⁴ components and label reduction mod d for every pair, n=1..3"))
}

fn c10_duality() -> Outcome {
    let mut runs = 0;
    for (case, n) in [
        (CaseTag::hilb(), 1),
        (CaseTag::hilb(), 2),
        (CaseTag::hilb(), 3),
        (CaseTag::hilb(), 4),
        (CaseTag::Kummer, 1),
        (CaseTag::Kummer, 2),
        (CaseTag::Kummer, 3),
    ] {
        for dt in [false, true] {
            let cfg = config(case.clone(), n, dt);
            let mut ctx = suites::Context::new(&cfg);
            let records = suites::duality(&mut ctx).map_err(|e| e.to_string())?;
            all_passed(&records)?;
            runs += 1;
        }
    }
    Ok(format!("palindromic invariants of top degree 4n, grading and degree additivity in {runs} rings"))
}

struct Criterion {
    id: usize,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, title: "K3 from the Kummer case, n=1", budget: secs(1), run: c1_k3 },
        Criterion { id: 2, title: "product rules, hilb n=2 with dt", budget: secs(1), run: c2_product_rules },
        Criterion { id: 3, title: "Kummer Euler characteristics", budget: secs(30), run: c3_kummer_euler },
        Criterion { id: 4, title: "b2 = 7 for Kummer n=2,3", budget: secs(60), run: c4_b2 },
        Criterion { id: 5, title: "Göttsche agreement, hilb n=1..4", budget: secs(300), run: c5_gottsche },
        Criterion { id: 6, title: "associativity", budget: secs(600), run: c6_associativity },
        Criterion { id: 7, title: "torsion cocycle and ε integrality", budget: secs(10), run: c7_cocycle },
        Criterion { id: 8, title: "restriction ring homomorphism", budget: secs(120), run: c8_restriction_hom },
        Criterion { id: 9, title: "torsion bookkeeping", budget: secs(120), run: c9_torsion },
        Criterion { id: 10, title: "duality and grading", budget: secs(600), run: c10_duality },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("over budget; {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status}: {} ({:.2} s of {} s): {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
