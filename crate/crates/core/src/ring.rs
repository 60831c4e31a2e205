//! The orbifold cohomology ring `H(M, G) = ⊕_g H*(M^g)` with its star
//! product, the group action, and the invariant subring.
//!
//! Group elements are indexed by their rank in lexicographic one-line order,
//! so index 0 is the identity. A global basis vector is a triple (sector,
//! component, local basis index) flattened as
//! `offset[g] + component · model_dim + local`. Its total degree is the local
//! degree plus `2·age(g)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::{all_permutations, epsilon, orbit_join, CaseTag, Permutation, SetPartition};
use crate::error::{Error, Result};
use crate::linalg::sparse::{axpy, scale, SparseMap, SparseVec};
use crate::linalg::{Accumulator, ExteriorAlgebra, GradedAlgebra, Rational, SparseEchelon};
use crate::poincare::PoincarePolynomial;
use crate::sector::{
    build_sector, conjugation, gysin_from_restriction, merge_terms, restriction, LocusAlgebra, LocusModel, SectorMap,
    SectorModel,
};

/// Limits checked before anything is allocated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceBounds {
    /// Upper bound on `Σ_g dim H*(M^g)`.
    pub max_total_dim: usize,
    /// Upper bound on `|G|²`.
    pub max_group_pairs: usize,
}

impl Default for ResourceBounds {
    fn default() -> Self {
        ResourceBounds { max_total_dim: 1 << 17, max_group_pairs: 576 }
    }
}

/// A basis vector of `H(M, G)` in structured form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisRef {
    pub sector: usize,
    pub component: usize,
    pub local: usize,
}

/// A sparse element of `H(M, G)` in the global basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbifoldElement {
    terms: SparseVec,
}

impl OrbifoldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(terms: Vec<(usize, Rational)>) -> Self {
        OrbifoldElement { terms: merge_terms(terms) }
    }

    pub fn basis(index: usize) -> Self {
        OrbifoldElement { terms: vec![(index, Rational::ONE)] }
    }

    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> SparseVec {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        OrbifoldElement { terms: axpy(&self.terms, &Rational::ONE, &other.terms) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        OrbifoldElement { terms: axpy(&self.terms, &Rational::from_int(-1), &other.terms) }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        OrbifoldElement { terms: scale(&self.terms, s) }
    }
}

#[derive(Clone, Debug)]
struct PairData {
    product: usize,
    join: usize,
    rank: usize,
    epsilon: i64,
    /// Restriction from `M^g`, restriction from `M^h`, Gysin into `M^{gh}`,
    /// as indices into `maps`; present when the rank vanishes.
    maps: Option<(usize, usize, usize)>,
}

/// Outcome of an exhaustive or sampled property check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOutcome {
    pub checked: u64,
    /// Checked cases where the compared values were nonzero.
    pub nontrivial: u64,
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn fail(&mut self, msg: String) {
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }
}

/// Star products of all pairs of global basis vectors.
#[derive(Clone, Debug)]
pub struct ProductTable {
    dim: usize,
    entries: Vec<SparseVec>,
}

impl ProductTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &SparseVec {
        &self.entries[i * self.dim + j]
    }

    /// Nonzero structure constants `(i, j, k, c)` with `e_i ⋆ e_j = Σ c e_k`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .flat_map(move |(ij, v)| v.iter().map(move |(k, c)| (ij / self.dim, ij % self.dim, *k, c)))
    }

    fn row_times(&self, v: &[(usize, Rational)], j: usize, acc: &mut Accumulator) {
        for (k, c) in v {
            acc.add_scaled(self.get(*k, j), c);
        }
    }

    fn times_row(&self, i: usize, v: &[(usize, Rational)], acc: &mut Accumulator) {
        for (k, c) in v {
            acc.add_scaled(self.get(i, *k), c);
        }
    }
}

/// Per-degree basis of the invariant subring, each vector in the global
/// basis of `H(M, G)`.
#[derive(Clone, Debug)]
pub struct InvariantSubring {
    echelons: Vec<SparseEchelon>,
    /// Flat index of each `(degree, pivot)`.
    flat: BTreeMap<(usize, usize), usize>,
    degrees: Vec<usize>,
    vectors: Vec<SparseVec>,
}

impl InvariantSubring {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim_in_degree(&self, k: usize) -> usize {
        self.echelons.get(k).map_or(0, SparseEchelon::rank)
    }

    pub fn poincare(&self) -> PoincarePolynomial {
        PoincarePolynomial::new(self.echelons.iter().map(|e| e.rank() as u64).collect())
    }

    /// Basis element `k` in flat order (by degree, then pivot).
    pub fn element(&self, k: usize) -> OrbifoldElement {
        OrbifoldElement { terms: self.vectors[k].clone() }
    }

    pub fn degree(&self, k: usize) -> usize {
        self.degrees[k]
    }

    /// Coordinates of a homogeneous element of total degree `deg` in the
    /// invariant basis; `None` when it is not invariant.
    pub fn coordinates(&self, deg: usize, v: &OrbifoldElement) -> Option<Vec<(usize, Rational)>> {
        if v.is_zero() {
            return Some(Vec::new());
        }
        let e = self.echelons.get(deg)?;
        let coords = e.coordinates(&v.terms)?;
        Some(coords.into_iter().map(|(p, c)| (self.flat[&(deg, p)], c)).collect())
    }
}

/// Report of the sector-wise restriction from the Hilbert-case ring on
/// `n+1` letters to the Kummer-case ring.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomCheckReport {
    /// Pairs whose products were compared term by term.
    pub pairs_compared: u64,
    /// Of those, pairs whose degrees add up past the top degree.
    pub pairs_beyond_top_degree: u64,
    pub unit_preserved: bool,
    pub failure: Option<String>,
}

impl HomCheckReport {
    pub fn passed(&self) -> bool {
        self.unit_preserved && self.failure.is_none()
    }
}

/// Which sector pairs may multiply, by two selection rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionTable {
    /// `λ₋₁` of the trivial obstruction bundle is nonzero.
    pub k_theoretic: Vec<Vec<bool>>,
    /// The product of the sector fundamental classes is nonzero.
    pub cohomological: Vec<Vec<bool>>,
}

impl SelectionTable {
    pub fn agree(&self) -> bool {
        self.k_theoretic == self.cohomological
    }
}

/// The ring `H(M, G)` for one case, `n` and torsion setting.
#[derive(Clone, Debug)]
pub struct OrbifoldRing {
    case: CaseTag,
    n: usize,
    dt: bool,
    elements: Vec<Permutation>,
    mul: Vec<usize>,
    inverse: Vec<usize>,
    sectors: Vec<SectorModel>,
    sector_locus: Vec<usize>,
    loci: Vec<LocusModel>,
    offsets: Vec<usize>,
    degrees: Vec<u8>,
    pairs: Vec<PairData>,
    maps: Vec<SectorMap>,
}

/// `(components, model dimension)` of a locus, without building it.
fn locus_size(case: &CaseTag, partition: &SetPartition) -> usize {
    let l = partition.len() as u32;
    match case {
        CaseTag::Hilb { betti } => betti.iter().sum::<usize>().saturating_pow(l),
        CaseTag::Kummer => partition.gcd().pow(4).saturating_mul(16usize.saturating_pow(l - 1)),
    }
}

fn apply(map: &SparseMap, v: &[(usize, Rational)]) -> SparseVec {
    let mut terms = Vec::new();
    for (i, c) in v {
        for (j, x) in map.row(*i) {
            terms.push((j, c * x));
        }
    }
    merge_terms(terms)
}

pub fn build_ring(case: &CaseTag, n: usize, dt: bool, bounds: &ResourceBounds) -> Result<OrbifoldRing> {
    if n == 0 {
        return Err(Error::InvalidArgument(String::from("n must be at least 1")));
    }
    let deg = case.group_degree(n);
    if deg > 8 {
        return Err(Error::ResourceBound(format!("group of degree {} is too large", deg)));
    }
    let order: usize = (1..=deg).product();
    if order * order > bounds.max_group_pairs {
        return Err(Error::ResourceBound(format!("|G|² = {} exceeds {}", order * order, bounds.max_group_pairs)));
    }
    let elements = all_permutations(deg);
    let total: usize = elements.iter().map(|g| locus_size(case, &g.orbits())).fold(0, usize::saturating_add);
    if total > bounds.max_total_dim {
        return Err(Error::ResourceBound(format!("total dimension {} exceeds {}", total, bounds.max_total_dim)));
    }

    let mut mul = vec![0; order * order];
    let mut inverse = vec![0; order];
    for (a, g) in elements.iter().enumerate() {
        inverse[a] = g.inverse().lex_rank();
        for (b, h) in elements.iter().enumerate() {
            mul[a * order + b] = (g * h).lex_rank();
        }
    }

    let mut locus_index: BTreeMap<SetPartition, usize> = BTreeMap::new();
    let mut loci: Vec<LocusModel> = Vec::new();
    let mut intern = |p: SetPartition, loci: &mut Vec<LocusModel>| -> Result<usize> {
        if let Some(&i) = locus_index.get(&p) {
            return Ok(i);
        }
        loci.push(LocusModel::build(case, &p)?);
        locus_index.insert(p, loci.len() - 1);
        Ok(loci.len() - 1)
    };

    let mut sectors = Vec::with_capacity(order);
    let mut sector_locus = Vec::with_capacity(order);
    let mut offsets = vec![0];
    let mut degrees: Vec<u8> = Vec::new();
    for g in &elements {
        let s = build_sector(case, n, g)?;
        let li = intern(g.orbits(), &mut loci)?;
        let shift = 2 * s.age;
        let model = &loci[li];
        for _ in 0..model.component_count() {
            for i in 0..model.model_dim() {
                degrees.push((model.algebra.degree(i) + shift) as u8);
            }
        }
        offsets.push(offsets.last().unwrap() + s.dim());
        sectors.push(s);
        sector_locus.push(li);
    }

    let mut maps: Vec<SectorMap> = Vec::new();
    let mut restriction_cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut gysin_cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pairs = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            let (g, h) = (&elements[a], &elements[b]);
            let c = mul[a * order + b];
            let join = intern(orbit_join(g, h)?, &mut loci)?;
            let (ag, ah, agh) = (sectors[a].age, sectors[b].age, sectors[c].age);
            let codim = loci[sector_locus[c]].complex_dim() - loci[join].complex_dim();
            let excess = (ag + ah) as i64 - agh as i64 - codim as i64;
            if excess < 0 {
                return Err(Error::Invariant(format!("negative obstruction rank for {} and {}", g, h)));
            }
            let eps = epsilon(g, h, case)?;
            let rank = excess as usize;
            let pair_maps = if rank == 0 {
                let mut res = |src: usize, maps: &mut Vec<SectorMap>| -> Result<usize> {
                    if let Some(&i) = restriction_cache.get(&(src, join)) {
                        return Ok(i);
                    }
                    maps.push(restriction(&loci[src], &loci[join])?);
                    restriction_cache.insert((src, join), maps.len() - 1);
                    Ok(maps.len() - 1)
                };
                let rg = res(sector_locus[a], &mut maps)?;
                let rh = res(sector_locus[b], &mut maps)?;
                let target = sector_locus[c];
                let gy = match gysin_cache.get(&(join, target)) {
                    Some(&i) => i,
                    None => {
                        let r = restriction(&loci[target], &loci[join])?;
                        maps.push(gysin_from_restriction(&loci[join], &loci[target], &r)?);
                        gysin_cache.insert((join, target), maps.len() - 1);
                        maps.len() - 1
                    }
                };
                Some((rg, rh, gy))
            } else {
                None
            };
            pairs.push(PairData { product: c, join, rank, epsilon: eps, maps: pair_maps });
        }
    }

    Ok(OrbifoldRing {
        case: case.clone(),
        n,
        dt,
        elements,
        mul,
        inverse,
        sectors,
        sector_locus,
        loci,
        offsets,
        degrees,
        pairs,
        maps,
    })
}

impl OrbifoldRing {
    pub fn case(&self) -> &CaseTag {
        &self.case
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> bool {
        self.dt
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element_index(&self, g: &Permutation) -> Result<usize> {
        if g.degree() != self.case.group_degree(self.n) {
            return Err(Error::RingMismatch(format!("{} has degree {}", g, g.degree())));
        }
        Ok(g.lex_rank())
    }

    pub fn group_mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.group_order() + b]
    }

    pub fn group_inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn sectors(&self) -> &[SectorModel] {
        &self.sectors
    }

    pub fn sector(&self, g: usize) -> &SectorModel {
        &self.sectors[g]
    }

    pub fn locus(&self, g: usize) -> &LocusModel {
        &self.loci[self.sector_locus[g]]
    }

    /// Total dimension of `H(M, G)`.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Real dimension of `M`; the top total degree.
    pub fn top_degree(&self) -> usize {
        2 * self.sectors[0].ambient_dim()
    }

    pub fn sector_offset(&self, g: usize) -> usize {
        self.offsets[g]
    }

    pub fn global_index(&self, r: BasisRef) -> usize {
        self.offsets[r.sector] + r.component * self.locus(r.sector).model_dim() + r.local
    }

    pub fn basis_ref(&self, index: usize) -> BasisRef {
        let sector = self.offsets.partition_point(|&o| o <= index) - 1;
        let m = self.locus(sector).model_dim();
        let rel = index - self.offsets[sector];
        BasisRef { sector, component: rel / m, local: rel % m }
    }

    /// Total degree of a global basis vector.
    pub fn degree(&self, index: usize) -> usize {
        self.degrees[index] as usize
    }

    /// Total degree of a homogeneous element; `None` for zero or mixed.
    pub fn element_degree(&self, e: &OrbifoldElement) -> Option<usize> {
        let first = self.degree(e.terms.first()?.0);
        e.terms.iter().all(|(i, _)| self.degree(*i) == first).then_some(first)
    }

    pub fn unit(&self) -> OrbifoldElement {
        OrbifoldElement::basis(self.global_index(BasisRef {
            sector: 0,
            component: 0,
            local: self.locus(0).algebra.unit(),
        }))
    }

    /// Human-readable name of a global basis vector.
    pub fn basis_label(&self, index: usize) -> String {
        let r = self.basis_ref(index);
        let locus = self.locus(r.sector);
        let g = self.elements[r.sector].to_cycle_string();
        let local = locus.algebra.label(r.local);
        if locus.component_count() > 1 {
            let t = locus.component_label(r.component);
            format!("{}@{},{},{},{}|{}", g, t[0], t[1], t[2], t[3], local)
        } else {
            format!("{}|{}", g, local)
        }
    }

    /// Inverse of [`basis_label`](Self::basis_label). The local part may
    /// also be given as `#k` for the local index `k`.
    pub fn parse_basis_label(&self, s: &str) -> Result<usize> {
        let bad = || Error::Parse(format!("basis spec {:?} is not of the form SECTOR[@t1,t2,t3,t4]|BASIS", s));
        let (head, local) = s.rsplit_once('|').ok_or_else(bad)?;
        let (sector, label) = match head.split_once('@') {
            Some((g, t)) => (g, Some(t)),
            None => (head, None),
        };
        let g = Permutation::parse_cycles(sector, self.case.group_degree(self.n))?;
        let g = self.element_index(&g)?;
        let locus = self.locus(g);
        let component = match label {
            None => 0,
            Some(t) => {
                let parts: Vec<usize> =
                    t.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
                if parts.len() != 4 || parts.iter().any(|&x| x >= locus.modulus) {
                    return Err(Error::Parse(format!("component label {:?} outside (Z/{})^4", t, locus.modulus)));
                }
                locus.component_index(&[parts[0], parts[1], parts[2], parts[3]])
            }
        };
        let local = local.trim();
        let index = if let Some(k) = local.strip_prefix('#') {
            k.parse::<usize>().ok().filter(|&k| k < locus.model_dim()).ok_or_else(bad)?
        } else {
            (0..locus.model_dim())
                .find(|&i| locus.algebra.label(i) == local)
                .ok_or_else(|| Error::Parse(format!("no basis vector {:?} in sector {}", local, sector)))?
        };
        Ok(self.global_index(BasisRef { sector: g, component, local: index }))
    }

    pub fn obstruction_rank(&self, g: usize, h: usize) -> usize {
        self.pairs[g * self.group_order() + h].rank
    }

    pub fn epsilon(&self, g: usize, h: usize) -> i64 {
        self.pairs[g * self.group_order() + h].epsilon
    }

    /// The set partition indexing `M^{<g,h>}`.
    pub fn join(&self, g: usize, h: usize) -> &SetPartition {
        &self.loci[self.pairs[g * self.group_order() + h].join].partition
    }

    /// Appends the terms of `a ⋆ b` to `out` for `a`, `b` supported on
    /// single blocks; terms may repeat.
    #[allow(clippy::too_many_arguments)]
    fn star_block(
        &self,
        g: usize,
        cg: usize,
        va: &[(usize, Rational)],
        h: usize,
        ch: usize,
        vb: &[(usize, Rational)],
        out_terms: &mut Vec<(usize, Rational)>,
    ) {
        let pd = &self.pairs[g * self.group_order() + h];
        let Some((rg, rh, gy)) = pd.maps else {
            return;
        };
        let (rg, rh, gy) = (&self.maps[rg], &self.maps[rh], &self.maps[gy]);
        let targets: Vec<usize> = (0..gy.components.len())
            .filter(|&k| rg.components[k] == cg && rh.components[k] == ch)
            .map(|k| gy.components[k])
            .collect();
        if targets.is_empty() {
            return;
        }
        let ra = apply(&rg.matrix, va);
        if ra.is_empty() {
            return;
        }
        let rb = apply(&rh.matrix, vb);
        if rb.is_empty() {
            return;
        }
        let prod = self.loci[pd.join].algebra.product(&ra, &rb);
        if prod.is_empty() {
            return;
        }
        let mut out = apply(&gy.matrix, &prod);
        if self.dt && pd.epsilon % 2 != 0 {
            for t in &mut out {
                t.1 = -&t.1;
            }
        }
        let base = self.offsets[pd.product];
        let m = self.loci[self.sector_locus[pd.product]].model_dim();
        for tc in targets {
            out_terms.extend(out.iter().map(|(i, c)| (base + tc * m + i, c.clone())));
        }
    }

    /// Splits a sorted element into runs lying in one (sector, component).
    fn blocks(&self, v: &[(usize, Rational)]) -> Vec<(usize, usize, SparseVec)> {
        let mut out: Vec<(usize, usize, SparseVec)> = Vec::new();
        for (i, c) in v {
            let r = self.basis_ref(*i);
            match out.last_mut() {
                Some((s, k, terms)) if *s == r.sector && *k == r.component => terms.push((r.local, c.clone())),
                _ => out.push((r.sector, r.component, vec![(r.local, c.clone())])),
            }
        }
        out
    }

    fn check_support(&self, e: &OrbifoldElement) -> Result<()> {
        match e.terms.last() {
            Some((i, _)) if *i >= self.dim() => {
                Err(Error::RingMismatch(format!("basis index {} beyond dimension {}", i, self.dim())))
            }
            _ => Ok(()),
        }
    }

    pub fn star(&self, a: &OrbifoldElement, b: &OrbifoldElement) -> Result<OrbifoldElement> {
        self.check_support(a)?;
        self.check_support(b)?;
        let mut acc = Accumulator::new(self.dim());
        self.star_into(&a.terms, &b.terms, &mut acc);
        Ok(OrbifoldElement { terms: acc.drain() })
    }

    fn star_into(&self, a: &[(usize, Rational)], b: &[(usize, Rational)], acc: &mut Accumulator) {
        let ba = self.blocks(a);
        let bb = self.blocks(b);
        let mut terms = Vec::new();
        for (g, cg, va) in &ba {
            for (h, ch, vb) in &bb {
                self.star_block(*g, *cg, va, *h, *ch, vb, &mut terms);
                for (i, c) in terms.drain(..) {
                    acc.add(i, &c);
                }
            }
        }
    }

    /// `e_i ⋆ e_j` for global basis indices.
    pub fn star_basis(&self, i: usize, j: usize) -> SparseVec {
        let (ri, rj) = (self.basis_ref(i), self.basis_ref(j));
        let mut terms = Vec::new();
        self.star_block(
            ri.sector,
            ri.component,
            &[(ri.local, Rational::ONE)],
            rj.sector,
            rj.component,
            &[(rj.local, Rational::ONE)],
            &mut terms,
        );
        merge_terms(terms)
    }

    /// Conjugation maps `M^g → M^{hgh⁻¹}` for every sector `g`.
    fn conjugation_maps(&self, h: usize) -> Result<Vec<SectorMap>> {
        let hp = &self.elements[h];
        (0..self.group_order())
            .map(|g| {
                let t = self.conjugate(h, g);
                conjugation(hp, self.locus(g), self.locus(t))
            })
            .collect()
    }

    /// Index of `h g h⁻¹`.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.group_mul(self.group_mul(h, g), self.inverse[h])
    }

    /// The automorphism of `H(M, G)` induced by `h`.
    pub fn g_action(&self, h: usize) -> Result<RingAction<'_>> {
        Ok(RingAction { ring: self, h, maps: self.conjugation_maps(h)? })
    }

    /// Star products of all basis pairs, when the ring is at most `max_dim`.
    pub fn product_table(&self, max_dim: usize) -> Result<ProductTable> {
        let d = self.dim();
        if d > max_dim {
            return Err(Error::ResourceBound(format!("product table of dimension {} exceeds {}", d, max_dim)));
        }
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.star_basis(i, j));
            }
        }
        Ok(ProductTable { dim: d, entries })
    }

    pub fn poincare_total(&self) -> PoincarePolynomial {
        let mut p = PoincarePolynomial::default();
        for s in &self.sectors {
            p = p.add(&PoincarePolynomial::from_usize(&s.betti()).shift(2 * s.age));
        }
        p
    }

    /// Dimensions of the summands `hⁱ = ⊕_g H^{i−2·age(g)}(M^g)`, counted
    /// over the global basis.
    pub fn ck_grading(&self) -> Vec<usize> {
        let mut out = vec![0; self.top_degree() + 1];
        for &d in &self.degrees {
            out[d as usize] += 1;
        }
        out
    }

    /// Lexicographically first representative of each conjugacy class.
    pub fn class_representatives(&self) -> Vec<usize> {
        let order = self.group_order();
        let mut seen = vec![false; order];
        let mut reps = Vec::new();
        for g in 0..order {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for h in 0..order {
                seen[self.conjugate(h, g)] = true;
            }
        }
        reps
    }

    /// The image of the averaging projector `p = (1/|G|) Σ_h h`.
    ///
    /// `p(h·e) = p(e)`, so applying `p` to the basis of one sector per
    /// conjugacy class spans the whole image.
    pub fn invariant_subring(&self) -> Result<InvariantSubring> {
        let order = self.group_order();
        let top = self.top_degree();
        let mut echelons = vec![SparseEchelon::new(); top + 1];
        let actions: Vec<Vec<SectorMap>> = (0..order).map(|h| self.conjugation_maps(h)).collect::<Result<_>>()?;
        let weight = Rational::new(1, order as i64);
        for g in self.class_representatives() {
            let locus = self.locus(g);
            let m = locus.model_dim();
            for comp in 0..locus.component_count() {
                for i in 0..m {
                    let mut terms = Vec::new();
                    for (h, maps) in actions.iter().enumerate() {
                        let t = self.conjugate(h, g);
                        let base = self.offsets[t] + comp * self.locus(t).model_dim();
                        for (j, c) in maps[g].matrix.row(i) {
                            terms.push((base + j, c * &weight));
                        }
                    }
                    let v = merge_terms(terms);
                    if v.is_empty() {
                        continue;
                    }
                    let deg = self.degree(self.offsets[g] + comp * m + i);
                    echelons[deg].insert(&v);
                }
            }
        }
        let mut flat = BTreeMap::new();
        let mut degrees = Vec::new();
        let mut vectors = Vec::new();
        for (deg, e) in echelons.iter().enumerate() {
            for (p, v) in e.basis() {
                flat.insert((deg, p), vectors.len());
                degrees.push(deg);
                vectors.push(v.clone());
            }
        }
        Ok(InvariantSubring { echelons, flat, degrees, vectors })
    }

    /// Invariant dimensions regrouped by conjugacy class: for a
    /// representative `g`, the `C(g)`-invariants of `H*(M^g)` shifted by
    /// `2·age(g)`.
    pub fn centralizer_regrouping(&self) -> Result<PoincarePolynomial> {
        let order = self.group_order();
        let mut dims = vec![0u64; self.top_degree() + 1];
        for g in self.class_representatives() {
            let centralizer: Vec<usize> = (0..order).filter(|&h| self.conjugate(h, g) == g).collect();
            let maps: Vec<SectorMap> = centralizer
                .iter()
                .map(|&h| conjugation(&self.elements[h], self.locus(g), self.locus(g)))
                .collect::<Result<_>>()?;
            let locus = self.locus(g);
            let mut echelons = vec![SparseEchelon::new(); locus.algebra.top_degree() + 1];
            for i in 0..locus.model_dim() {
                let v = merge_terms(maps.iter().flat_map(|m| m.matrix.row_vec(i)).collect());
                if !v.is_empty() {
                    echelons[locus.algebra.degree(i)].insert(&v);
                }
            }
            let shift = 2 * self.sectors[g].age;
            for (k, e) in echelons.iter().enumerate() {
                dims[k + shift] += (e.rank() * locus.component_count()) as u64;
            }
        }
        Ok(PoincarePolynomial::new(dims))
    }

    /// Invariant dimensions as trace averages `(1/|G|) Σ_h tr(h | degree k)`.
    pub fn trace_average_dims(&self) -> Result<Vec<Rational>> {
        let order = self.group_order();
        let mut sums = vec![Rational::ZERO; self.top_degree() + 1];
        for h in 0..order {
            let maps = self.conjugation_maps(h)?;
            for (g, map) in maps.iter().enumerate() {
                if self.conjugate(h, g) != g {
                    continue;
                }
                let locus = self.locus(g);
                let shift = 2 * self.sectors[g].age;
                let comps = Rational::from_int(locus.component_count() as i64);
                for i in 0..locus.model_dim() {
                    for (j, c) in map.matrix.row(i) {
                        if j == i {
                            sums[locus.algebra.degree(i) + shift] += &(c * &comps);
                        }
                    }
                }
            }
        }
        let w = Rational::new(1, order as i64);
        Ok(sums.iter().map(|s| s * &w).collect())
    }

    /// Structure constants of the invariant subring in its flat basis:
    /// `(i, j, k, c)` with `x_i ⋆ x_j = Σ c x_k`.
    pub fn invariant_structure_constants(
        &self,
        inv: &InvariantSubring,
    ) -> Result<Vec<(usize, usize, usize, Rational)>> {
        let mut out = Vec::new();
        let mut acc = Accumulator::new(self.dim());
        for i in 0..inv.dim() {
            for j in 0..inv.dim() {
                let deg = inv.degree(i) + inv.degree(j);
                if deg > self.top_degree() {
                    continue;
                }
                self.star_into(&inv.vectors[i], &inv.vectors[j], &mut acc);
                let p = OrbifoldElement { terms: acc.drain() };
                let coords = inv.coordinates(deg, &p).ok_or_else(|| {
                    Error::Invariant(format!("product of invariant basis elements {} and {} is not invariant", i, j))
                })?;
                out.extend(coords.into_iter().map(|(k, c)| (i, j, k, c)));
            }
        }
        Ok(out)
    }

    /// Zero-failure check of `x ⋆ y = (−1)^{pq} y ⋆ x` on the invariant basis.
    pub fn check_invariant_commutativity(&self, inv: &InvariantSubring) -> CheckOutcome {
        let d = inv.dim();
        self.check_invariant_commutativity_pairs(inv, (0..d).flat_map(|i| (i..d).map(move |j| (i, j))))
    }

    /// Graded commutativity on the given pairs of invariant basis indices.
    pub fn check_invariant_commutativity_pairs<I>(&self, inv: &InvariantSubring, pairs: I) -> CheckOutcome
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = CheckOutcome::default();
        let mut acc = Accumulator::new(self.dim());
        for (i, j) in pairs {
            let (p, q) = (inv.degree(i), inv.degree(j));
            if p + q > self.top_degree() {
                continue;
            }
            self.star_into(&inv.vectors[i], &inv.vectors[j], &mut acc);
            let xy = acc.drain();
            self.star_into(&inv.vectors[j], &inv.vectors[i], &mut acc);
            let yx = acc.drain();
            let yx = if p * q % 2 == 1 { scale(&yx, &Rational::from_int(-1)) } else { yx };
            out.checked += 1;
            if !xy.is_empty() {
                out.nontrivial += 1;
            }
            if xy != yx {
                out.fail(format!("invariant basis elements {} (degree {}) and {} (degree {})", i, p, j, q));
            }
        }
        out
    }

    /// Every product term has total degree `deg a + deg b`.
    pub fn check_degree_additivity(&self, table: &ProductTable) -> CheckOutcome {
        let mut out = CheckOutcome::default();
        for (i, j, k, _) in table.structure_constants() {
            out.checked += 1;
            out.nontrivial += 1;
            if self.degree(k) != self.degree(i) + self.degree(j) {
                out.fail(format!(
                    "{} ⋆ {} has a term {} of degree {}",
                    self.basis_label(i),
                    self.basis_label(j),
                    self.basis_label(k),
                    self.degree(k)
                ));
            }
        }
        out
    }

    /// Degree additivity of `e_a ⋆ e_b` on the given pairs.
    pub fn check_degree_additivity_pairs<I>(&self, pairs: I) -> CheckOutcome
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = CheckOutcome::default();
        for (a, b) in pairs {
            out.checked += 1;
            let prod = self.star_basis(a, b);
            if !prod.is_empty() {
                out.nontrivial += 1;
            }
            if let Some((k, _)) = prod.iter().find(|(k, _)| self.degree(*k) != self.degree(a) + self.degree(b)) {
                out.fail(format!(
                    "{} ⋆ {} has a term {} of degree {}",
                    self.basis_label(a),
                    self.basis_label(b),
                    self.basis_label(*k),
                    self.degree(*k)
                ));
            }
        }
        out
    }

    /// The identity-sector fundamental class is a two-sided unit on the
    /// whole basis.
    pub fn check_unit(&self) -> CheckOutcome {
        let mut out = CheckOutcome::default();
        let u = self.unit().terms[0].0;
        for i in 0..self.dim() {
            out.checked += 1;
            let want = vec![(i, Rational::ONE)];
            if self.star_basis(u, i) != want || self.star_basis(i, u) != want {
                out.fail(format!("unit fails on {}", self.basis_label(i)));
            }
        }
        out
    }

    /// `(a ⋆ b) ⋆ c = a ⋆ (b ⋆ c)` for every basis triple.
    pub fn check_associativity_exhaustive(&self, table: &ProductTable) -> CheckOutcome {
        let d = table.dim();
        let mut out = CheckOutcome::default();
        let mut left = Accumulator::new(d);
        let mut right = Accumulator::new(d);
        for a in 0..d {
            for b in 0..d {
                let ab = table.get(a, b);
                for c in 0..d {
                    out.checked += 1;
                    let bc = table.get(b, c);
                    if ab.is_empty() && bc.is_empty() {
                        continue;
                    }
                    table.row_times(ab, c, &mut left);
                    table.times_row(a, bc, &mut right);
                    let (l, r) = (left.drain(), right.drain());
                    if !l.is_empty() || !r.is_empty() {
                        out.nontrivial += 1;
                    }
                    if l != r {
                        out.fail(self.triple_message(a, b, c));
                    }
                }
            }
        }
        out
    }

    fn triple_message(&self, a: usize, b: usize, c: usize) -> String {
        format!("({} ⋆ {}) ⋆ {}", self.basis_label(a), self.basis_label(b), self.basis_label(c))
    }

    /// Associativity on the given basis triples.
    pub fn check_associativity_triples<I>(&self, triples: I) -> CheckOutcome
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut out = CheckOutcome::default();
        let mut acc = Accumulator::new(self.dim());
        for (a, b, c) in triples {
            out.checked += 1;
            let ab = self.star_basis(a, b);
            self.star_into(&ab, &[(c, Rational::ONE)], &mut acc);
            let left = acc.drain();
            let bc = self.star_basis(b, c);
            self.star_into(&[(a, Rational::ONE)], &bc, &mut acc);
            let right = acc.drain();
            if !left.is_empty() || !right.is_empty() {
                out.nontrivial += 1;
            }
            if left != right {
                out.fail(self.triple_message(a, b, c));
            }
        }
        out
    }

    /// `h·(a ⋆ b) = (h·a) ⋆ (h·b)` on all basis pairs, for every `h`.
    pub fn check_g_invariance(&self, table: &ProductTable) -> Result<CheckOutcome> {
        let mut out = CheckOutcome::default();
        let mut acc = Accumulator::new(self.dim());
        for h in 0..self.group_order() {
            let act = self.g_action(h)?;
            let images: Vec<SparseVec> = (0..self.dim()).map(|i| act.apply_basis(i)).collect();
            for a in 0..self.dim() {
                for b in 0..self.dim() {
                    out.checked += 1;
                    let lhs = act.apply_terms(table.get(a, b));
                    if !lhs.is_empty() {
                        out.nontrivial += 1;
                    }
                    self.star_into(&images[a], &images[b], &mut acc);
                    if lhs != acc.drain() {
                        out.fail(format!(
                            "{} does not commute with {} ⋆ {}",
                            self.elements[h],
                            self.basis_label(a),
                            self.basis_label(b)
                        ));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `h·(a ⋆ b) = (h·a) ⋆ (h·b)` on the given `(h, a, b)`.
    pub fn check_g_invariance_triples<I>(&self, triples: I) -> Result<CheckOutcome>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut out = CheckOutcome::default();
        let mut acc = Accumulator::new(self.dim());
        let mut actions: Vec<Option<RingAction<'_>>> = (0..self.group_order()).map(|_| None).collect();
        for (h, a, b) in triples {
            if actions[h].is_none() {
                actions[h] = Some(self.g_action(h)?);
            }
            let act = actions[h].as_ref().expect("filled above");
            out.checked += 1;
            let lhs = act.apply_terms(&self.star_basis(a, b));
            if !lhs.is_empty() {
                out.nontrivial += 1;
            }
            self.star_into(&act.apply_basis(a), &act.apply_basis(b), &mut acc);
            if lhs != acc.drain() {
                out.fail(format!(
                    "{} does not commute with {} ⋆ {}",
                    self.elements[h],
                    self.basis_label(a),
                    self.basis_label(b)
                ));
            }
        }
        Ok(out)
    }

    pub fn selection_table(&self) -> SelectionTable {
        let order = self.group_order();
        let mut k_theoretic = vec![vec![false; order]; order];
        let mut cohomological = vec![vec![false; order]; order];
        for g in 0..order {
            for h in 0..order {
                // λ₋₁ of a trivial bundle of rank r is (1 − 1)^r
                k_theoretic[g][h] = self.obstruction_rank(g, h) == 0;
                let ug = self.fundamental_class(g);
                let uh = self.fundamental_class(h);
                let p = self.star(&ug, &uh).expect("fundamental classes lie in the ring");
                cohomological[g][h] = !p.is_zero();
            }
        }
        SelectionTable { k_theoretic, cohomological }
    }

    /// Sum of the unit classes of all components of sector `g`.
    pub fn fundamental_class(&self, g: usize) -> OrbifoldElement {
        let locus = self.locus(g);
        let u = locus.algebra.unit();
        OrbifoldElement {
            terms: (0..locus.component_count())
                .map(|c| (self.global_index(BasisRef { sector: g, component: c, local: u }), Rational::ONE))
                .collect(),
        }
    }
}

/// The action of one group element on `H(M, G)`.
pub struct RingAction<'a> {
    ring: &'a OrbifoldRing,
    h: usize,
    maps: Vec<SectorMap>,
}

impl RingAction<'_> {
    pub fn element(&self) -> usize {
        self.h
    }

    fn apply_basis(&self, i: usize) -> SparseVec {
        let r = self.ring.basis_ref(i);
        let t = self.ring.conjugate(self.h, r.sector);
        let base = self.ring.offsets[t] + r.component * self.ring.locus(t).model_dim();
        self.maps[r.sector].matrix.row(r.local).map(|(j, c)| (base + j, c.clone())).collect()
    }

    fn apply_terms(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut terms = Vec::new();
        for (i, c) in v {
            terms.extend(self.apply_basis(*i).into_iter().map(|(j, x)| (j, &x * c)));
        }
        merge_terms(terms)
    }

    pub fn apply(&self, e: &OrbifoldElement) -> OrbifoldElement {
        OrbifoldElement { terms: self.apply_terms(&e.terms) }
    }
}

/// The sector-wise restriction `H(A^{n+1}, S_{n+1}) → H(A_0^{n+1}, S_{n+1})`.
/// On each sector it is the algebra map sending the generator of coordinate
/// `(b, j)` to its class in the quotient model, placed diagonally on every
/// torsion component.
pub struct RestrictionCheck {
    source: OrbifoldRing,
    target: OrbifoldRing,
    /// Per sector, the image of each local source basis vector.
    images: Vec<Vec<SparseVec>>,
}

impl RestrictionCheck {
    pub fn new(n: usize, dt: bool, bounds: &ResourceBounds) -> Result<Self> {
        let source = build_ring(&CaseTag::hilb(), n + 1, dt, bounds)?;
        let target = build_ring(&CaseTag::Kummer, n, dt, bounds)?;
        let mut images = Vec::with_capacity(source.group_order());
        for g in 0..source.group_order() {
            let (LocusAlgebra::Exterior(src), LocusAlgebra::Exterior(tgt)) =
                (&source.locus(g).algebra, &target.locus(g).algebra)
            else {
                return Err(Error::Invariant(String::from("exterior models expected")));
            };
            let tl = target.locus(g);
            let gens: Vec<SparseVec> =
                (0..src.generators()).map(|c| tl.coordinate_class(c / 4, c % 4).clone()).collect();
            let local = ExteriorAlgebra::hom_images(src, tgt, &gens);
            let m = tl.model_dim();
            let base = target.sector_offset(g);
            let sector_images = local
                .into_iter()
                .map(|v| {
                    let mut out = Vec::with_capacity(v.len() * tl.component_count());
                    for comp in 0..tl.component_count() {
                        out.extend(v.iter().map(|(i, c)| (base + comp * m + i, c.clone())));
                    }
                    out
                })
                .collect();
            images.push(sector_images);
        }
        Ok(RestrictionCheck { source, target, images })
    }

    pub fn source(&self) -> &OrbifoldRing {
        &self.source
    }

    pub fn target(&self) -> &OrbifoldRing {
        &self.target
    }

    pub fn image(&self, i: usize) -> &SparseVec {
        let r = self.source.basis_ref(i);
        &self.images[r.sector][r.local]
    }

    /// Compares `R(a ⋆ b)` with `R(a) ⋆ R(b)` on the given source pairs.
    pub fn check_pairs<I>(&self, pairs: I) -> HomCheckReport
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let (big, small) = (&self.source, &self.target);
        let mut report = HomCheckReport {
            unit_preserved: *self.image(big.unit().terms[0].0) == small.fundamental_class(0).terms,
            ..Default::default()
        };
        let top = small.top_degree();
        let mut acc = Accumulator::new(small.dim());
        for (a, b) in pairs {
            if big.degree(a) + big.degree(b) > top {
                report.pairs_beyond_top_degree += 1;
            }
            report.pairs_compared += 1;
            let prod = big.star_basis(a, b);
            let mut lhs = Vec::new();
            for (k, c) in &prod {
                lhs.extend(self.image(*k).iter().map(|(t, x)| (*t, x * c)));
            }
            let lhs = merge_terms(lhs);
            small.star_into(self.image(a), self.image(b), &mut acc);
            if lhs != acc.drain() && report.failure.is_none() {
                report.failure = Some(format!("{} ⋆ {}", big.basis_label(a), big.basis_label(b)));
            }
        }
        report
    }

    /// All pairs of source basis vectors.
    pub fn check_all(&self) -> HomCheckReport {
        let d = self.source.dim();
        self.check_pairs((0..d).flat_map(|a| (0..d).map(move |b| (a, b))))
    }
}

/// Exhaustive multiplicativity of the restriction from the Hilbert-case
/// ring on `n+1` letters to the Kummer-case ring for `n`.
pub fn restriction_ring_hom_check(n: usize, dt: bool, bounds: &ResourceBounds) -> Result<HomCheckReport> {
    Ok(RestrictionCheck::new(n, dt, bounds)?.check_all())
}
