//! Named groups of property checks run by `orbring check`.

use crate::config::RunConfig;
use crate::document::CheckRecord;
use crate::error::AppError;
use crate::sampling::{rng, BasisSampler};
use orbring_core::combinatorics::{all_permutations, epsilon, CaseTag, Permutation, SetPartition};
use orbring_core::linalg::Rational;
use orbring_core::oracles::{
    euler_commuting_pairs, gottsche_series, molien_poincare, torsion_bruteforce, TorsionReport,
};
use orbring_core::poincare::PoincarePolynomial;
use orbring_core::ring::{InvariantSubring, OrbifoldRing, ProductTable, RestrictionCheck};
use orbring_core::sector::{restriction, LocusModel};
use rand::Rng;
use std::collections::BTreeMap;

pub const SUITES: [&str; 8] =
    ["associativity", "cocycle", "euler", "gottsche", "molien", "torsion", "duality", "lemma59"];

/// Rings up to this dimension get a full product table and exhaustive
/// checks; larger ones are sampled.
pub const EXHAUSTIVE_MAX_DIM: usize = 1024;

/// Largest permutation degree for the exhaustive cocycle check.
pub const COCYCLE_MAX_DEGREE: usize = 5;

/// Invariant subrings up to this dimension are checked on all pairs.
const INVARIANT_PAIRS_MAX_DIM: usize = 400;
/// Pairs drawn when the invariant subring is larger.
const INVARIANT_SAMPLED_PAIRS: usize = 300;

/// The suites selected by `name`, or a usage error.
pub fn resolve(name: &str) -> Result<Vec<&'static str>, AppError> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES
        .iter()
        .find(|s| **s == name)
        .map(|s| vec![*s])
        .ok_or_else(|| AppError::Usage(format!("unknown suite {name:?}; expected one of {}, all", SUITES.join(", "))))
}

/// Lazily built ring data shared by the suites of one run.
pub struct Context<'c> {
    cfg: &'c RunConfig,
    ring: Option<OrbifoldRing>,
    inv: Option<InvariantSubring>,
    table: Option<Option<ProductTable>>,
}

impl<'c> Context<'c> {
    pub fn new(cfg: &'c RunConfig) -> Self {
        Context { cfg, ring: None, inv: None, table: None }
    }

    pub fn config(&self) -> &RunConfig {
        self.cfg
    }

    pub fn ring(&mut self) -> Result<&OrbifoldRing, AppError> {
        if self.ring.is_none() {
            self.ring = Some(self.cfg.build_ring()?);
        }
        Ok(self.ring.as_ref().expect("built above"))
    }

    pub fn with_invariants(&mut self) -> Result<(&OrbifoldRing, &InvariantSubring), AppError> {
        self.ring()?;
        let ring = self.ring.as_ref().expect("built above");
        if self.inv.is_none() {
            self.inv = Some(ring.invariant_subring()?);
        }
        Ok((ring, self.inv.as_ref().expect("built above")))
    }

    /// The product table when the ring is small enough for one.
    pub fn with_table(&mut self) -> Result<(&OrbifoldRing, Option<&ProductTable>), AppError> {
        self.ring()?;
        let ring = self.ring.as_ref().expect("built above");
        if self.table.is_none() {
            let t = if ring.dim() <= EXHAUSTIVE_MAX_DIM { Some(ring.product_table(EXHAUSTIVE_MAX_DIM)?) } else { None };
            self.table = Some(t);
        }
        Ok((ring, self.table.as_ref().expect("built above").as_ref()))
    }

    pub fn into_parts(self) -> (Option<OrbifoldRing>, Option<InvariantSubring>, Option<ProductTable>) {
        (self.ring, self.inv, self.table.flatten())
    }
}

pub fn run_suite(name: &str, ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    match name {
        "associativity" => associativity(ctx),
        "cocycle" => cocycle(ctx.config()),
        "euler" => euler(ctx),
        "gottsche" => gottsche(ctx),
        "molien" => molien(ctx),
        "torsion" => torsion(ctx.config()),
        "duality" => duality(ctx),
        "lemma59" => restriction_hom(ctx.config()),
        other => Err(AppError::Usage(format!("unknown suite {other:?}"))),
    }
}

/// Runs every suite selected by `name` on one shared context.
pub fn run_named(name: &str, cfg: &RunConfig) -> Result<Vec<CheckRecord>, AppError> {
    let suites = resolve(name)?;
    let mut ctx = Context::new(cfg);
    let mut out = Vec::new();
    for s in suites {
        out.extend(run_suite(s, &mut ctx)?);
    }
    Ok(out)
}

fn sample_scope(cfg: &RunConfig, count: usize, what: &str) -> String {
    format!("seeded sample of {count} {what} (seed {})", cfg.seed)
}

pub fn associativity(ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    let cfg = ctx.config().clone();
    let (ring, table) = ctx.with_table()?;
    let mut out = vec![CheckRecord::from_outcome("associativity.unit", "all basis vectors", &ring.check_unit())];
    out.push(match table {
        Some(t) => CheckRecord::from_outcome(
            "associativity",
            "exhaustive over basis triples",
            &ring.check_associativity_exhaustive(t),
        ),
        None => {
            let triples = BasisSampler::new(ring).triples(&mut rng(cfg.seed), cfg.samples);
            CheckRecord::from_outcome(
                "associativity",
                &sample_scope(&cfg, cfg.samples, "basis triples"),
                &ring.check_associativity_triples(triples),
            )
        }
    });
    if !cfg.case.is_abelian() {
        out[1].details.push_str(
            "; the base surface is not abelian and the product omits its nonzero obstruction classes, \
             so associativity is not expected beyond two points",
        );
    }
    Ok(out)
}

/// The discrete-torsion cocycle identity on all of `G³` and integrality of
/// `ε` on all of `G²`. Needs only the group.
pub fn cocycle(cfg: &RunConfig) -> Result<Vec<CheckRecord>, AppError> {
    let deg = cfg.case.group_degree(cfg.n);
    if deg > COCYCLE_MAX_DEGREE {
        return Err(AppError::Bound(format!(
            "cocycle check enumerates G³ and supports permutation degree at most {COCYCLE_MAX_DEGREE}"
        )));
    }
    let group = all_permutations(deg);
    let order = group.len();
    let mut mul = vec![0usize; order * order];
    let mut eps = vec![0i64; order * order];
    let mut bad_eps = None;
    for (a, g) in group.iter().enumerate() {
        for (b, h) in group.iter().enumerate() {
            mul[a * order + b] = g.compose(h)?.lex_rank();
            match epsilon(g, h, &cfg.case) {
                Ok(e) => eps[a * order + b] = e,
                Err(_) if bad_eps.is_none() => bad_eps = Some(format!("ε({g}, {h})")),
                Err(_) => {}
            }
        }
    }
    let pairs = (order * order) as u64;
    let integrality = match bad_eps {
        None => CheckRecord::pass("cocycle.integrality", format!("ε integral on all {pairs} pairs")),
        Some(w) => CheckRecord::fail("cocycle.integrality", format!("{pairs} pairs"), Some(w)),
    };
    let mut failure = None;
    for a in 0..order {
        for b in 0..order {
            let ab = mul[a * order + b];
            for c in 0..order {
                let bc = mul[b * order + c];
                let lhs = eps[a * order + b] + eps[ab * order + c];
                let rhs = eps[a * order + bc] + eps[b * order + c];
                if lhs != rhs && failure.is_none() {
                    failure = Some(format!("({}, {}, {}): {lhs} vs {rhs}", group[a], group[b], group[c]));
                }
            }
        }
    }
    let triples = pairs * order as u64;
    let identity = match failure {
        None => CheckRecord::pass("cocycle.identity", format!("exhaustive over {triples} triples")),
        Some(w) => CheckRecord::fail("cocycle.identity", format!("{triples} triples"), Some(w)),
    };
    Ok(vec![integrality, identity])
}

/// `(n+1)³ σ(n+1)`.
pub fn kummer_euler_closed_form(n: usize) -> i128 {
    let m = (n + 1) as i128;
    let sigma: i128 = (1..=m).filter(|d| m % d == 0).sum();
    m.pow(3) * sigma
}

pub fn euler(ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    let (case, n) = (ctx.config().case.clone(), ctx.config().n);
    let (_, inv) = ctx.with_invariants()?;
    let chi = inv.poincare().euler();
    let mut out = vec![CheckRecord::compare(
        "euler.commuting_pairs",
        "χ of the invariant ring",
        chi,
        euler_commuting_pairs(&case, n),
    )];
    if case == CaseTag::Kummer {
        out.push(CheckRecord::compare("euler.closed_form", "χ against (n+1)³σ(n+1)", chi, kummer_euler_closed_form(n)));
    }
    Ok(out)
}

pub fn gottsche(ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    let (case, n) = (ctx.config().case.clone(), ctx.config().n);
    let CaseTag::Hilb { betti } = case else {
        return Ok(vec![CheckRecord::skipped(
            "gottsche",
            String::from("the generating function covers the hilb case"),
        )]);
    };
    let series = gottsche_series(n, betti)?;
    let (_, inv) = ctx.with_invariants()?;
    Ok(vec![CheckRecord::compare("gottsche", "invariant Poincaré polynomial", inv.poincare(), series[n].clone())])
}

fn integral_dims(dims: &[Rational]) -> Option<PoincarePolynomial> {
    dims.iter()
        .map(|d| d.to_i64().and_then(|x| u64::try_from(x).ok()))
        .collect::<Option<Vec<u64>>>()
        .map(PoincarePolynomial::new)
}

pub fn molien(ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    let (case, n) = (ctx.config().case.clone(), ctx.config().n);
    let (ring, inv) = ctx.with_invariants()?;
    let projector = inv.poincare();
    let mut out = vec![CheckRecord::compare(
        "molien.closed_form",
        "projector rank against Molien traces",
        projector.clone(),
        molien_poincare(&case, n)?,
    )];
    let averaged = ring.trace_average_dims()?;
    out.push(match integral_dims(&averaged) {
        Some(p) => CheckRecord::compare(
            "molien.engine_traces",
            "projector rank against engine trace averages",
            projector.clone(),
            p,
        ),
        None => CheckRecord::fail("molien.engine_traces", format!("non-integral trace averages {averaged:?}"), None),
    });
    out.push(CheckRecord::compare(
        "molien.centralizers",
        "projector rank against centralizer regrouping",
        projector,
        ring.centralizer_regrouping()?,
    ));
    Ok(out)
}

/// Caches loci and restriction component maps by partition.
struct LocusCache {
    n: usize,
    models: BTreeMap<SetPartition, LocusModel>,
    components: BTreeMap<(SetPartition, SetPartition), Vec<usize>>,
}

impl LocusCache {
    fn model(&mut self, p: &SetPartition) -> Result<&LocusModel, AppError> {
        if !self.models.contains_key(p) {
            let m = LocusModel::build(&CaseTag::Kummer, p)?;
            self.models.insert(p.clone(), m);
        }
        Ok(&self.models[p])
    }

    /// For each component of the `join` locus, the component of `large`
    /// that contains it, as the engine's restriction map records it.
    fn components(&mut self, large: &SetPartition, join: &SetPartition) -> Result<&[usize], AppError> {
        let key = (large.clone(), join.clone());
        if !self.components.contains_key(&key) {
            self.model(large)?;
            self.model(join)?;
            let map = restriction(&self.models[large], &self.models[join])?;
            self.components.insert(key.clone(), map.components);
        }
        Ok(&self.components[&key])
    }
}

struct TorsionTally {
    pairs: u64,
    loci: u64,
    inclusions: u64,
    counts: Option<String>,
    rule: Option<String>,
    engine: Option<String>,
}

fn note(slot: &mut Option<String>, msg: impl FnOnce() -> String) {
    if slot.is_none() {
        *slot = Some(msg());
    }
}

fn torsion_pair(
    cache: &mut LocusCache,
    g: &Permutation,
    h: &Permutation,
    rep: &TorsionReport,
    tally: &mut TorsionTally,
) -> Result<(), AppError> {
    let pair = || format!("g = {g}, h = {h}");
    if rep.skipped {
        note(&mut tally.counts, || format!("{}: enumeration level {} above the cap", pair(), rep.level));
        return Ok(());
    }
    for locus in &rep.loci {
        tally.loci += 1;
        let engine = cache.model(&locus.partition)?.component_count();
        let d4 = locus.gcd.pow(4);
        if locus.components != locus.gcd || !locus.labels_bijective || locus.total_components() != d4 || engine != d4 {
            note(&mut tally.counts, || {
                format!(
                    "{}: locus {:?} has {} cosets per coordinate, gcd {}, engine {} components",
                    pair(),
                    locus.partition.sizes(),
                    locus.components,
                    locus.gcd,
                    engine
                )
            });
        }
    }
    let join = &rep.loci[3];
    for lm in &rep.label_maps {
        tally.inclusions += 1;
        let d_target = cache.model(&lm.target)?.modulus;
        if let Some(t) = (0..lm.map.len()).find(|&t| lm.map[t] != t % d_target) {
            note(&mut tally.rule, || {
                format!("{}: label {t} goes to {} instead of {}", pair(), lm.map[t], t % d_target)
            });
        }
        let comps = cache.components(&lm.target, &join.partition)?.to_vec();
        let (jm, tm) = (&cache.models[&join.partition], &cache.models[&lm.target]);
        for (k, &c) in comps.iter().enumerate() {
            let (from, to) = (jm.component_label(k), tm.component_label(c));
            if (0..4).any(|x| lm.map.get(from[x]) != Some(&to[x])) {
                note(&mut tally.engine, || format!("{}: component {from:?} lands in {to:?}", pair()));
                break;
            }
        }
    }
    Ok(())
}

/// Brute-force torsion enumeration against the engine's loci, for every
/// ordered pair of group elements.
pub fn torsion(cfg: &RunConfig) -> Result<Vec<CheckRecord>, AppError> {
    if cfg.case != CaseTag::Kummer {
        return Ok(vec![CheckRecord::skipped("torsion", String::from("hilb-case loci are connected"))]);
    }
    let group = all_permutations(cfg.case.group_degree(cfg.n));
    if group.len() * group.len() > cfg.bounds.max_group_pairs {
        return Err(AppError::Bound(format!(
            "{} group pairs exceed {}",
            group.len().pow(2),
            cfg.bounds.max_group_pairs
        )));
    }
    let mut cache = LocusCache { n: cfg.n, models: BTreeMap::new(), components: BTreeMap::new() };
    let mut tally = TorsionTally { pairs: 0, loci: 0, inclusions: 0, counts: None, rule: None, engine: None };
    for g in &group {
        for h in &group {
            tally.pairs += 1;
            let rep = torsion_bruteforce(cache.n, g, h)?;
            torsion_pair(&mut cache, g, h, &rep, &mut tally)?;
        }
    }
    let record = |name: &str, scope: String, failure: Option<String>| match failure {
        None => CheckRecord::pass(name, scope),
        Some(f) => CheckRecord::fail(name, scope, Some(f)),
    };
    Ok(vec![
        record(
            "torsion.component_counts",
            format!("{} pairs, {} loci with d⁴ components", tally.pairs, tally.loci),
            tally.counts,
        ),
        record("torsion.label_rule", format!("{} inclusions reduce labels mod d", tally.inclusions), tally.rule),
        record(
            "torsion.engine_labels",
            format!("{} inclusions match the engine's component maps", tally.inclusions),
            tally.engine,
        ),
    ])
}

pub fn duality(ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    let cfg = ctx.config().clone();
    let mut out = Vec::new();
    {
        let (ring, inv) = ctx.with_invariants()?;
        let p = inv.poincare();
        let want_top = 4 * cfg.n;
        let details = format!("invariants {p}, top degree {want_top}");
        out.push(if p.is_palindromic() && p.degree() == Some(want_top) && ring.top_degree() == want_top {
            CheckRecord::pass("duality.palindromic", details)
        } else {
            CheckRecord::fail("duality.palindromic", details, None)
        });
        let total = ring.poincare_total();
        let grading: Vec<u64> = ring.ck_grading().into_iter().map(|x| x as u64).collect();
        out.push(CheckRecord::compare(
            "duality.ck_grading",
            "graded dimensions against total Poincaré polynomial",
            PoincarePolynomial::new(grading),
            total,
        ));
        let d = inv.dim();
        let outcome = if d <= INVARIANT_PAIRS_MAX_DIM {
            ring.check_invariant_commutativity(inv)
        } else {
            let mut r = rng(cfg.seed);
            let pairs: Vec<(usize, usize)> =
                (0..INVARIANT_SAMPLED_PAIRS).map(|_| (r.gen_range(0..d), r.gen_range(0..d))).collect();
            ring.check_invariant_commutativity_pairs(inv, pairs)
        };
        let scope = if d <= INVARIANT_PAIRS_MAX_DIM {
            String::from("all invariant basis pairs")
        } else {
            sample_scope(&cfg, INVARIANT_SAMPLED_PAIRS, "invariant basis pairs")
        };
        out.push(CheckRecord::from_outcome("duality.invariant_commutativity", &scope, &outcome));
        let sel = ring.selection_table();
        out.push(if sel.agree() {
            CheckRecord::pass("duality.selection_rules", String::from("K-theoretic and cohomological rules agree"))
        } else {
            CheckRecord::fail("duality.selection_rules", String::from("selection rules disagree"), None)
        });
    }
    let (ring, table) = ctx.with_table()?;
    match table {
        Some(t) => {
            out.push(CheckRecord::from_outcome(
                "duality.degree_additivity",
                "all structure constants",
                &ring.check_degree_additivity(t),
            ));
            out.push(CheckRecord::from_outcome(
                "duality.g_invariance",
                "all group elements and basis pairs",
                &ring.check_g_invariance(t)?,
            ));
        }
        None => {
            let sampler = BasisSampler::new(ring);
            let mut r = rng(cfg.seed);
            let pairs = sampler.pairs(&mut r, cfg.samples);
            out.push(CheckRecord::from_outcome(
                "duality.degree_additivity",
                &sample_scope(&cfg, cfg.samples, "basis pairs"),
                &ring.check_degree_additivity_pairs(pairs),
            ));
            let count = cfg.samples.min(1000);
            let triples: Vec<(usize, usize, usize)> = sampler
                .pairs(&mut r, count)
                .into_iter()
                .map(|(a, b)| (r.gen_range(0..ring.group_order()), a, b))
                .collect();
            out.push(CheckRecord::from_outcome(
                "duality.g_invariance",
                &sample_scope(&cfg, count, "(h, a, b) triples"),
                &ring.check_g_invariance_triples(triples)?,
            ));
        }
    }
    Ok(out)
}

/// Largest `n` for which all basis pairs are compared.
pub const RESTRICTION_EXHAUSTIVE_MAX_N: usize = 2;

pub fn restriction_hom(cfg: &RunConfig) -> Result<Vec<CheckRecord>, AppError> {
    const NAME: &str = "restriction_hom";
    if cfg.case != CaseTag::Kummer {
        return Ok(vec![CheckRecord::skipped(NAME, String::from("the restriction targets the kummer case"))]);
    }
    let check = RestrictionCheck::new(cfg.n, cfg.dt, &cfg.bounds)?;
    let (report, scope) = if cfg.n <= RESTRICTION_EXHAUSTIVE_MAX_N {
        (check.check_all(), String::from("all basis pairs"))
    } else {
        let pairs = BasisSampler::new(check.source()).pairs(&mut rng(cfg.seed), cfg.samples);
        (check.check_pairs(pairs), sample_scope(cfg, cfg.samples, "basis pairs"))
    };
    let details = format!(
        "{scope}: {} pairs compared, {} beyond the top degree, unit {}",
        report.pairs_compared,
        report.pairs_beyond_top_degree,
        if report.unit_preserved { "preserved" } else { "not preserved" }
    );
    Ok(vec![if report.passed() {
        CheckRecord::pass(NAME, details)
    } else {
        CheckRecord::fail(NAME, details, report.failure)
    }])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    fn cfg(case: CaseTag, n: usize) -> RunConfig {
        RunConfig::new(case, n, true, Command::Check { suite: String::from("all") })
    }

    #[test]
    fn suite_names_resolve() {
        assert_eq!(resolve("all").unwrap().len(), 8);
        assert_eq!(resolve("torsion").unwrap(), vec!["torsion"]);
        assert!(matches!(resolve("bogus"), Err(AppError::Usage(_))));
    }

    #[test]
    fn closed_form_values() {
        assert_eq!([1, 2, 3].map(kummer_euler_closed_form), [24, 108, 448]);
    }

    #[test]
    fn cocycle_small() {
        for c in [cfg(CaseTag::hilb(), 3), cfg(CaseTag::Kummer, 2)] {
            assert!(cocycle(&c).unwrap().iter().all(CheckRecord::passed));
        }
    }

    #[test]
    fn all_suites_pass_on_small_rings() {
        for c in [cfg(CaseTag::hilb(), 2), cfg(CaseTag::Kummer, 1)] {
            for rec in run_named("all", &c).unwrap() {
                assert!(rec.passed(), "{rec:?}");
            }
        }
    }
}
