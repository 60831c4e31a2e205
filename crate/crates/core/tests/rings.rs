use orbring_core::combinatorics::{all_permutations, orbit_join, CaseTag};
use orbring_core::oracles::{euler_commuting_pairs, gottsche_series, molien_poincare, torsion_bruteforce};
use orbring_core::ring::{build_ring, OrbifoldRing, ResourceBounds};
use orbring_core::sector::{restriction, LocusModel};

const K3: [usize; 5] = [1, 0, 22, 0, 1];

fn ring(case: &CaseTag, n: usize, dt: bool) -> OrbifoldRing {
    build_ring(case, n, dt, &ResourceBounds::default()).unwrap()
}

#[test]
fn abelian_invariants_match_generating_function() {
    let series = gottsche_series(3, [1, 4, 6, 4, 1]).unwrap();
    for (n, expected) in series.iter().enumerate().skip(1) {
        let p = ring(&CaseTag::hilb(), n, false).invariant_subring().unwrap().poincare();
        assert_eq!(&p, expected, "n = {n}");
    }
}

#[test]
fn k3_base_invariants_and_euler() {
    let case = CaseTag::hilb_with_betti(K3).unwrap();
    let series = gottsche_series(3, K3).unwrap();
    for (n, chi) in [(1, 24), (2, 324), (3, 3200)] {
        let p = ring(&case, n, true).invariant_subring().unwrap().poincare();
        assert_eq!(p, series[n], "n = {n}");
        assert_eq!(p.euler(), chi);
        assert_eq!(euler_commuting_pairs(&case, n), chi);
    }
}

#[test]
fn odd_cohomology_base_matches_generating_function() {
    let betti = [1, 2, 4, 2, 1];
    let case = CaseTag::hilb_with_betti(betti).unwrap();
    let series = gottsche_series(2, betti).unwrap();
    for (n, expected) in series.iter().enumerate().skip(1) {
        let r = ring(&case, n, false);
        assert_eq!(&r.invariant_subring().unwrap().poincare(), expected);
        assert_eq!(&molien_poincare(&case, n).unwrap(), expected);
    }
}

#[test]
fn two_point_products_are_associative_on_any_base() {
    // Sectors of S₂ have no obstruction classes, so the model is exact here.
    for betti in [K3, [1, 2, 4, 2, 1]] {
        let case = CaseTag::hilb_with_betti(betti).unwrap();
        for dt in [false, true] {
            let r = ring(&case, 2, dt);
            let table = r.product_table(r.dim()).unwrap();
            let o = r.check_associativity_exhaustive(&table);
            assert!(o.passed(), "{betti:?} dt={dt}: {o:?}");
            assert!(o.nontrivial > 0);
        }
    }
}

#[test]
fn small_rings_are_graded_unital_and_invariant() {
    for case in [CaseTag::hilb(), CaseTag::Kummer] {
        for n in 1..=2 {
            for dt in [false, true] {
                let r = ring(&case, n, dt);
                let table = r.product_table(r.dim()).unwrap();
                assert!(r.check_unit().passed());
                assert!(r.check_degree_additivity(&table).passed());
                let inv = r.check_g_invariance(&table).unwrap();
                assert!(inv.passed(), "{case:?} n={n} dt={dt}: {inv:?}");
                assert!(r.selection_table().agree());
                let i = r.invariant_subring().unwrap();
                assert!(r.check_invariant_commutativity(&i).passed());
            }
        }
    }
}

#[test]
fn torsion_enumeration_matches_engine_components() {
    for n in 1..=2 {
        for g in all_permutations(n + 1) {
            for h in all_permutations(n + 1) {
                let rep = torsion_bruteforce(n, &g, &h).unwrap();
                assert!(!rep.skipped);
                let join = orbit_join(&g, &h).unwrap();
                let small = LocusModel::build(&CaseTag::Kummer, &join).unwrap();
                for (locus, lm) in rep.loci[..3].iter().zip(&rep.label_maps) {
                    let large = LocusModel::build(&CaseTag::Kummer, &locus.partition).unwrap();
                    assert_eq!(large.component_count(), locus.gcd.pow(4));
                    let comps = restriction(&large, &small).unwrap().components;
                    for (k, &c) in comps.iter().enumerate() {
                        let (from, to) = (small.component_label(k), large.component_label(c));
                        for x in 0..4 {
                            assert_eq!(lm.map[from[x]], to[x], "g = {g}, h = {h}");
                            assert_eq!(to[x], from[x] % large.modulus);
                        }
                    }
                }
            }
        }
    }
}
