//! Cohomology models of fixed loci and the maps between them.
//!
//! A fixed locus is indexed by a set partition `J` of the permuted points:
//! the points constant on each block of `J`. For a group element `g` the
//! partition is its orbit set `O(g)`; for a pair it is the orbit join.
//!
//! * Hilbert case: `S^J ≅ S^{|J|}`, one component, model `H*(S)^{⊗|J|}`.
//!   For the abelian surface this is the exterior algebra on `4|J|`
//!   generators `e_{b,j}` at index `4b + j`.
//! * Kummer case: `{y ∈ A^J : Σ κ_b y_b = 0}` with block sizes `κ_b` and
//!   `d = gcd κ`. It splits into `d⁴` translates of the connected kernel of
//!   `Σ (κ_b/d) y_b`, labelled by `t ∈ (Z/d)⁴` meaning `Σ (κ_b/d) y_b = t/d`.
//!   Each has `H¹ = Q^{4|J|} / W` with `W` spanned by the weight vectors.
//!
//! A coarser partition `J' ⊇ J` is a smaller locus; the component `t'` of
//! `J'` lies in the component `t' mod d_J` of `J`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::{age, CaseTag, Permutation, SetPartition};
use crate::error::{Error, Result};
use crate::linalg::sparse::{collect_terms, SparseMap, SparseVec};
use crate::linalg::{
    quotient_model, Accumulator, ExteriorAlgebra, GradedAlgebra, Rational, TableAlgebra, TensorAlgebra,
};

/// Rank of `H¹` of the abelian surface.
pub const H1_RANK: usize = 4;

#[derive(Clone, Debug)]
pub enum LocusAlgebra {
    Exterior(ExteriorAlgebra),
    Tensor(TensorAlgebra),
}

impl GradedAlgebra for LocusAlgebra {
    fn dim(&self) -> usize {
        match self {
            LocusAlgebra::Exterior(a) => a.dim(),
            LocusAlgebra::Tensor(a) => a.dim(),
        }
    }
    fn degree(&self, i: usize) -> usize {
        match self {
            LocusAlgebra::Exterior(a) => a.degree(i),
            LocusAlgebra::Tensor(a) => a.degree(i),
        }
    }
    fn top_degree(&self) -> usize {
        match self {
            LocusAlgebra::Exterior(a) => a.top_degree(),
            LocusAlgebra::Tensor(a) => a.top_degree(),
        }
    }
    fn unit(&self) -> usize {
        match self {
            LocusAlgebra::Exterior(a) => a.unit(),
            LocusAlgebra::Tensor(a) => a.unit(),
        }
    }
    #[inline]
    fn mul_basis_into(&self, i: usize, j: usize, scale: &Rational, acc: &mut Accumulator) {
        match self {
            LocusAlgebra::Exterior(a) => a.mul_basis_into(i, j, scale, acc),
            LocusAlgebra::Tensor(a) => a.mul_basis_into(i, j, scale, acc),
        }
    }
    fn dual(&self, i: usize) -> (usize, Rational) {
        match self {
            LocusAlgebra::Exterior(a) => a.dual(i),
            LocusAlgebra::Tensor(a) => a.dual(i),
        }
    }
    fn integral(&self, i: usize) -> Rational {
        match self {
            LocusAlgebra::Exterior(a) => a.integral(i),
            LocusAlgebra::Tensor(a) => a.integral(i),
        }
    }
    fn label(&self, i: usize) -> String {
        match self {
            LocusAlgebra::Exterior(a) => a.label(i),
            LocusAlgebra::Tensor(a) => a.label(i),
        }
    }
}

impl LocusAlgebra {
    /// Product of two sparse vectors, merged by sorting.
    pub fn product(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> SparseVec {
        match self {
            LocusAlgebra::Exterior(_) => {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (j, y) in b {
                        if let Some(neg) = crate::linalg::algebra::wedge_sign(*i as u64, *j as u64) {
                            let c = x * y;
                            terms.push((i | j, if neg { -c } else { c }));
                        }
                    }
                }
                merge_terms(terms)
            }
            LocusAlgebra::Tensor(t) => t.mul(a, b),
        }
    }
}

/// Sorts terms by index and sums duplicates, dropping zeros.
pub fn merge_terms(mut terms: Vec<(usize, Rational)>) -> SparseVec {
    if terms.len() <= 1 {
        terms.retain(|(_, c)| !c.is_zero());
        return terms;
    }
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (i, c) in terms {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += &c,
            _ => {
                if let Some((_, d)) = out.last() {
                    if d.is_zero() {
                        out.pop();
                    }
                }
                out.push((i, c));
            }
        }
    }
    if let Some((_, d)) = out.last() {
        if d.is_zero() {
            out.pop();
        }
    }
    out
}

/// Cohomology model of the fixed locus of a set partition.
#[derive(Clone, Debug)]
pub struct LocusModel {
    pub case: CaseTag,
    pub partition: SetPartition,
    /// Component labels live in `(Z/modulus)^4`; `1` means connected.
    pub modulus: usize,
    pub algebra: LocusAlgebra,
    /// Kummer case: weight relations on the ambient `Q^{4|J|}`.
    relations: Vec<Vec<Rational>>,
    /// Degree-1 class of each ambient coordinate `(b, j)` at `4b + j`
    /// (exterior models only).
    coordinate_classes: Vec<SparseVec>,
}

impl LocusModel {
    pub fn build(case: &CaseTag, partition: &SetPartition) -> Result<Self> {
        let l = partition.len();
        match case {
            CaseTag::Hilb { betti } if !case.is_abelian() => {
                let base = TableAlgebra::surface(*betti)?;
                Ok(LocusModel {
                    case: case.clone(),
                    partition: partition.clone(),
                    modulus: 1,
                    algebra: LocusAlgebra::Tensor(TensorAlgebra::power(&base, l)),
                    relations: Vec::new(),
                    coordinate_classes: Vec::new(),
                })
            }
            CaseTag::Hilb { .. } => {
                let m = H1_RANK * l;
                Ok(LocusModel {
                    case: case.clone(),
                    partition: partition.clone(),
                    modulus: 1,
                    algebra: LocusAlgebra::Exterior(ExteriorAlgebra::new(m)),
                    relations: Vec::new(),
                    coordinate_classes: (0..m).map(|k| vec![(1usize << k, Rational::ONE)]).collect(),
                })
            }
            CaseTag::Kummer => {
                let sizes = partition.sizes();
                let d = partition.gcd();
                let m = H1_RANK * l;
                let relations: Vec<Vec<Rational>> = (0..H1_RANK)
                    .map(|j| {
                        (0..m)
                            .map(|c| {
                                if c % H1_RANK == j {
                                    Rational::from_int((sizes[c / H1_RANK] / d) as i64)
                                } else {
                                    Rational::ZERO
                                }
                            })
                            .collect()
                    })
                    .collect();
                let q = quotient_model(m, &relations)?;
                let coordinate_classes = (0..m).map(|c| q.project_coordinate(c)).collect();
                Ok(LocusModel {
                    case: case.clone(),
                    partition: partition.clone(),
                    modulus: d,
                    algebra: LocusAlgebra::Exterior(q.algebra),
                    relations,
                    coordinate_classes,
                })
            }
        }
    }

    pub fn component_count(&self) -> usize {
        self.modulus.pow(H1_RANK as u32)
    }

    pub fn model_dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Complex dimension of each component.
    pub fn complex_dim(&self) -> usize {
        match self.case {
            CaseTag::Hilb { .. } => 2 * self.partition.len(),
            CaseTag::Kummer => 2 * (self.partition.len() - 1),
        }
    }

    pub fn betti(&self) -> Vec<usize> {
        let c = self.component_count();
        self.algebra.betti().into_iter().map(|b| b * c).collect()
    }

    pub fn component_label(&self, index: usize) -> [usize; H1_RANK] {
        let d = self.modulus;
        let mut out = [0; H1_RANK];
        let mut x = index;
        for k in (0..H1_RANK).rev() {
            out[k] = x % d;
            x /= d;
        }
        out
    }

    pub fn component_index(&self, label: &[usize; H1_RANK]) -> usize {
        label.iter().fold(0, |acc, &t| acc * self.modulus + t % self.modulus)
    }

    /// Index of the component of `self` containing component `index` of the
    /// smaller locus `smaller` (whose modulus is a multiple of ours).
    pub fn containing_component(&self, smaller: &LocusModel, index: usize) -> usize {
        debug_assert_eq!(smaller.modulus % self.modulus, 0);
        let label = smaller.component_label(index);
        self.component_index(&label)
    }

    pub fn coordinate_class(&self, block: usize, j: usize) -> &SparseVec {
        &self.coordinate_classes[H1_RANK * block + j]
    }

    pub fn relations(&self) -> &[Vec<Rational>] {
        &self.relations
    }
}

/// Which structural map a [`SectorMap`] realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Restriction,
    Gysin,
    Conjugation,
}

/// A linear map between locus models together with its component
/// correspondence.
///
/// `matrix` acts on single-component models. `components[k]` pairs a
/// component of the smaller (or, for conjugation, source) locus with one of
/// the other side: for restrictions it is the source component that target
/// component `k` lies in; for Gysin maps it is the target component that
/// source component `k` maps into; conjugations preserve labels.
#[derive(Clone, Debug)]
pub struct SectorMap {
    pub kind: MapKind,
    pub source: SetPartition,
    pub target: SetPartition,
    pub matrix: SparseMap,
    pub components: Vec<usize>,
    /// Cohomological degree shift.
    pub degree_shift: usize,
}

/// The algebra map `H*(M^{source}) → H*(M^{target})` induced by pulling back
/// along `z ↦ y` with `y_b = z_{block_map[b]}`.
fn pullback_matrix(source: &LocusModel, target: &LocusModel, block_map: &[usize]) -> Result<SparseMap> {
    assert_eq!(block_map.len(), source.partition.len());
    match (&source.algebra, &target.algebra) {
        (LocusAlgebra::Exterior(src), LocusAlgebra::Exterior(tgt)) => {
            // ambient coordinate map, checked on the weight relations
            let image_of_ambient = |c: usize| target.coordinate_class(block_map[c / H1_RANK], c % H1_RANK);
            for w in source.relations() {
                let img = collect_terms(
                    w.iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .flat_map(|(c, x)| image_of_ambient(c).iter().map(move |(k, y)| (*k, x * y))),
                );
                if !img.is_empty() {
                    return Err(Error::Invariant(format!(
                        "weight relation of {} does not map into the relations of {}",
                        source.partition, target.partition
                    )));
                }
            }
            let kept = kept_coordinates(source);
            let gens: Vec<SparseVec> = kept.iter().map(|&c| image_of_ambient(c).clone()).collect();
            let images = src.hom_images(tgt, &gens);
            Ok(SparseMap::from_rows(images, tgt.dim()))
        }
        (LocusAlgebra::Tensor(src), LocusAlgebra::Tensor(tgt)) => {
            let mut rows = Vec::with_capacity(src.dim());
            for i in 0..src.dim() {
                let parts = src.split(i);
                let mut v: SparseVec = vec![(tgt.unit(), Rational::ONE)];
                for (b, &a) in parts.iter().enumerate() {
                    let e = tgt.embed(block_map[b], a);
                    v = tgt.mul(&v, &[(e, Rational::ONE)]);
                    if v.is_empty() {
                        break;
                    }
                }
                rows.push(v);
            }
            Ok(SparseMap::from_rows(rows, tgt.dim()))
        }
        _ => Err(Error::Invariant(String::from("mixed locus model kinds"))),
    }
}

/// Ambient coordinates `4b + j` that are generators of an exterior model.
fn kept_coordinates(locus: &LocusModel) -> Vec<usize> {
    let mut kept = Vec::new();
    for (c, class) in locus.coordinate_classes.iter().enumerate() {
        if class.len() == 1 && class[0].1.is_one() && class[0].0.is_power_of_two() {
            let k = class[0].0.trailing_zeros() as usize;
            if k == kept.len() {
                kept.push(c);
            }
        }
    }
    let LocusAlgebra::Exterior(e) = &locus.algebra else { unreachable!() };
    debug_assert_eq!(kept.len(), e.generators());
    kept
}

fn block_map_to_coarser(fine: &SetPartition, coarse: &SetPartition) -> Vec<usize> {
    let of = coarse.block_of();
    fine.blocks().iter().map(|b| of[b[0]]).collect()
}

/// Restriction `H*(M^{source}) → H*(M^{target})` for a coarser `target`.
pub fn restriction(source: &LocusModel, target: &LocusModel) -> Result<SectorMap> {
    if !target.partition.coarsens(&source.partition) {
        return Err(Error::NotCoarsening(format!("{} vs {}", target.partition, source.partition)));
    }
    let block_map = block_map_to_coarser(&source.partition, &target.partition);
    let matrix = pullback_matrix(source, target, &block_map)?;
    let components = (0..target.component_count()).map(|k| source.containing_component(target, k)).collect();
    Ok(SectorMap {
        kind: MapKind::Restriction,
        source: source.partition.clone(),
        target: target.partition.clone(),
        matrix,
        components,
        degree_shift: 0,
    })
}

/// Gysin pushforward from the smaller locus `small` into `large`, built as
/// the pairing-adjoint of `restriction` (which must go `large → small`):
/// `⟨gysin x, y⟩ = ⟨x, restriction y⟩` componentwise.
pub fn gysin_from_restriction(small: &LocusModel, large: &LocusModel, restriction: &SectorMap) -> Result<SectorMap> {
    let res_t = restriction.matrix.transpose();
    let mut rows = Vec::with_capacity(small.model_dim());
    for s in 0..small.model_dim() {
        let (ds, ps) = small.algebra.dual(s);
        let mut row = Vec::new();
        for (y, r) in res_t.row(ds) {
            let (dy, py) = large.algebra.dual(y);
            // the row pairs as ∫ e_{D(y)} e_y, which is ∫ e_y e_{D(y)} up to a Koszul sign
            let py = if large.algebra.degree(y) * large.algebra.degree(dy) % 2 == 1 { -py } else { py };
            if py.is_zero() {
                return Err(Error::DegeneratePairing(format!("{} basis {}", large.partition, y)));
            }
            row.push((dy, &(r * &ps) / &py));
        }
        rows.push(merge_terms(row));
    }
    let shift = large.algebra.top_degree() - small.algebra.top_degree();
    Ok(SectorMap {
        kind: MapKind::Gysin,
        source: small.partition.clone(),
        target: large.partition.clone(),
        matrix: SparseMap::from_rows(rows, large.model_dim()),
        components: restriction.components.clone(),
        degree_shift: shift,
    })
}

pub fn gysin(small: &LocusModel, large: &LocusModel) -> Result<SectorMap> {
    let r = restriction(large, small)?;
    gysin_from_restriction(small, large, &r)
}

/// The isomorphism `H*(M^g) → H*(M^{hgh⁻¹})` induced by `h`.
pub fn conjugation(h: &Permutation, source: &LocusModel, target: &LocusModel) -> Result<SectorMap> {
    if h.degree() != source.partition.n() {
        return Err(Error::DegreeMismatch(h.degree(), source.partition.n()));
    }
    let of = target.partition.block_of();
    let block_map: Vec<usize> = source.partition.blocks().iter().map(|b| of[h.apply(b[0])]).collect();
    for (b, block) in source.partition.blocks().iter().enumerate() {
        if block.iter().any(|&x| of[h.apply(x)] != block_map[b])
            || block.len() != target.partition.blocks()[block_map[b]].len()
        {
            return Err(Error::Invariant(format!(
                "{} does not carry {} onto {}",
                h, source.partition, target.partition
            )));
        }
    }
    let matrix = pullback_matrix(source, target, &block_map)?;
    Ok(SectorMap {
        kind: MapKind::Conjugation,
        source: source.partition.clone(),
        target: target.partition.clone(),
        matrix,
        components: (0..source.component_count()).collect(),
        degree_shift: 0,
    })
}

/// The model of `H*(M^g)` for one group element.
#[derive(Clone, Debug)]
pub struct SectorModel {
    pub g: Permutation,
    pub case: CaseTag,
    pub age: usize,
    pub locus: LocusModel,
}

impl SectorModel {
    pub fn orbits(&self) -> &SetPartition {
        &self.locus.partition
    }

    pub fn complex_dim(&self) -> usize {
        self.locus.complex_dim()
    }

    pub fn component_count(&self) -> usize {
        self.locus.component_count()
    }

    pub fn dim(&self) -> usize {
        self.component_count() * self.locus.model_dim()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.locus.betti()
    }

    /// Complex dimension of the ambient `M`.
    pub fn ambient_dim(&self) -> usize {
        match self.case {
            CaseTag::Hilb { .. } => 2 * self.g.degree(),
            CaseTag::Kummer => 2 * (self.g.degree() - 1),
        }
    }
}

/// Builds the sector of `g`; `n` is the case parameter (`g ∈ S_n` for the
/// Hilbert case, `g ∈ S_{n+1}` for the Kummer case).
pub fn build_sector(case: &CaseTag, n: usize, g: &Permutation) -> Result<SectorModel> {
    let want = case.group_degree(n);
    if g.degree() != want {
        return Err(Error::DegreeMismatch(g.degree(), want));
    }
    let locus = LocusModel::build(case, &g.orbits())?;
    Ok(SectorModel { g: g.clone(), case: case.clone(), age: age(g, case), locus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{all_permutations, orbit_join};

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn hilb_transposition_sector() {
        let s = build_sector(&CaseTag::hilb(), 2, &p("(1 2)", 2)).unwrap();
        assert_eq!(s.component_count(), 1);
        assert_eq!(s.age, 1);
        assert_eq!(s.complex_dim(), 2);
        assert_eq!(s.betti(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn kummer_small_sectors() {
        let s = build_sector(&CaseTag::Kummer, 1, &p("(1 2)", 2)).unwrap();
        assert_eq!((s.component_count(), s.locus.model_dim(), s.age), (16, 1, 1));
        let s = build_sector(&CaseTag::Kummer, 2, &p("(1 2 3)", 3)).unwrap();
        assert_eq!((s.component_count(), s.locus.model_dim(), s.age), (81, 1, 2));
        assert!(build_sector(&CaseTag::Kummer, 2, &p("(1 2)", 2)).is_err());
    }

    #[test]
    fn sector_dimension_invariants() {
        for (case, n) in [(CaseTag::hilb(), 4), (CaseTag::Kummer, 3)] {
            for g in all_permutations(case.group_degree(n)) {
                let s = build_sector(&case, n, &g).unwrap();
                assert_eq!(2 * s.age + s.complex_dim(), s.ambient_dim());
                let l = g.orbits().len();
                assert_eq!(s.locus.algebra.top_degree(), 2 * s.complex_dim());
                match case {
                    CaseTag::Kummer => {
                        assert_eq!(s.component_count(), g.orbits().gcd().pow(4));
                        assert_eq!(s.complex_dim(), 2 * (l - 1));
                    }
                    CaseTag::Hilb { .. } => assert_eq!(s.complex_dim(), 2 * l),
                }
            }
        }
    }

    #[test]
    fn restriction_to_same_partition_is_identity() {
        let case = CaseTag::Kummer;
        let l = LocusModel::build(&case, &p("(1 2)", 3).orbits()).unwrap();
        let r = restriction(&l, &l).unwrap();
        for i in 0..l.model_dim() {
            assert_eq!(r.matrix.row_vec(i), vec![(i, q(1))]);
        }
        assert_eq!(r.components, (0..l.component_count()).collect::<Vec<_>>());
    }

    #[test]
    fn diagonal_restriction_hilb_two() {
        let case = CaseTag::hilb();
        let a2 = LocusModel::build(&case, &SetPartition::discrete(2)).unwrap();
        let diag = LocusModel::build(&case, &p("(1 2)", 2).orbits()).unwrap();
        let r = restriction(&a2, &diag).unwrap();
        for j in 0..4 {
            assert_eq!(r.matrix.row_vec(1 << j), vec![(1 << j, q(1))]);
            assert_eq!(r.matrix.row_vec(1 << (4 + j)), vec![(1 << j, q(1))]);
        }
        // surjective
        let mut hit = vec![false; diag.model_dim()];
        for i in 0..a2.model_dim() {
            for (t, _) in r.matrix.row(i) {
                hit[t] = true;
            }
        }
        assert!(hit.iter().all(|&x| x));
        assert!(restriction(&diag, &a2).is_err());
    }

    #[test]
    fn kummer_restriction_to_points() {
        let case = CaseTag::Kummer;
        let g = LocusModel::build(&case, &p("(1 2)", 3).orbits()).unwrap();
        let j = LocusModel::build(&case, &SetPartition::from_blocks(3, vec![vec![0, 1, 2]])).unwrap();
        assert_eq!((g.component_count(), g.complex_dim()), (1, 2));
        assert_eq!(j.component_count(), 81);
        let r = restriction(&g, &j).unwrap();
        assert!(r.components.iter().all(|&c| c == 0));
        for i in 1..g.model_dim() {
            assert!(r.matrix.row_vec(i).is_empty());
        }
        assert_eq!(r.matrix.row_vec(0), vec![(0, q(1))]);
    }

    #[test]
    fn restriction_is_unital_algebra_hom() {
        for (case, n) in
            [(CaseTag::hilb(), 3), (CaseTag::Kummer, 3), (CaseTag::hilb_with_betti([1, 2, 3, 2, 1]).unwrap(), 2)]
        {
            let all = all_permutations(case.group_degree(n));
            for g in &all {
                for h in &all {
                    let jp = orbit_join(g, h).unwrap();
                    let src = LocusModel::build(&case, &g.orbits()).unwrap();
                    let tgt = LocusModel::build(&case, &jp).unwrap();
                    if src.model_dim() > 256 {
                        continue;
                    }
                    let r = restriction(&src, &tgt).unwrap();
                    assert_eq!(r.matrix.row_vec(src.algebra.unit()), vec![(tgt.algebra.unit(), q(1))]);
                    for a in 0..src.model_dim() {
                        for b in 0..src.model_dim() {
                            let ab = src.algebra.mul_basis(a, b);
                            let mut lhs = Vec::new();
                            for (k, c) in &ab {
                                lhs.extend(r.matrix.row(*k).map(|(t, m)| (t, c * m)));
                            }
                            let lhs = merge_terms(lhs);
                            let rhs = tgt.algebra.mul(&r.matrix.row_vec(a), &r.matrix.row_vec(b));
                            assert_eq!(lhs, rhs, "{:?} {} {}", jp, a, b);
                        }
                    }
                }
            }
        }
    }

    fn pairing_matrix_check(small: &LocusModel, large: &LocusModel) {
        let r = restriction(large, small).unwrap();
        let gy = gysin_from_restriction(small, large, &r).unwrap();
        assert_eq!(gy.degree_shift, large.algebra.top_degree() - small.algebra.top_degree());
        for x in 0..small.model_dim() {
            for y in 0..large.model_dim() {
                let lhs = large.algebra.pairing(&gy.matrix.row_vec(x), &[(y, q(1))]);
                let rhs = small.algebra.pairing(&[(x, q(1))], &r.matrix.row_vec(y));
                assert_eq!(lhs, rhs);
            }
        }
        // projection formula gysin(res(y)·x) = y·gysin(x)
        for x in 0..small.model_dim() {
            let gx = gy.matrix.row_vec(x);
            for y in 0..large.model_dim() {
                let ry = r.matrix.row_vec(y);
                let prod = small.algebra.mul(&ry, &[(x, q(1))]);
                let mut lhs = Vec::new();
                for (k, c) in &prod {
                    lhs.extend(gy.matrix.row(*k).map(|(t, m)| (t, c * m)));
                }
                assert_eq!(merge_terms(lhs), large.algebra.mul(&[(y, q(1))], &gx));
            }
        }
    }

    #[test]
    fn gysin_adjoint_and_projection_formula() {
        for (case, n) in [(CaseTag::hilb(), 2), (CaseTag::hilb(), 3), (CaseTag::Kummer, 2), (CaseTag::Kummer, 3)] {
            let deg = case.group_degree(n);
            let all = all_permutations(deg);
            let mut seen = Vec::new();
            for g in &all {
                for h in &all {
                    let big = g.orbits();
                    let small = orbit_join(g, h).unwrap();
                    if seen.contains(&(big.clone(), small.clone())) {
                        continue;
                    }
                    seen.push((big.clone(), small.clone()));
                    let lb = LocusModel::build(&case, &big).unwrap();
                    let ls = LocusModel::build(&case, &small).unwrap();
                    if lb.model_dim() * ls.model_dim() > 20_000 {
                        continue;
                    }
                    pairing_matrix_check(&ls, &lb);
                }
            }
        }
    }

    #[test]
    fn gysin_codim_zero_is_identity() {
        let l = LocusModel::build(&CaseTag::hilb(), &p("(1 2)", 3).orbits()).unwrap();
        let gy = gysin(&l, &l).unwrap();
        for i in 0..l.model_dim() {
            assert_eq!(gy.matrix.row_vec(i), vec![(i, q(1))]);
        }
    }

    #[test]
    fn diagonal_class_pairs_like_restriction() {
        let case = CaseTag::hilb();
        let a2 = LocusModel::build(&case, &SetPartition::discrete(2)).unwrap();
        let diag = LocusModel::build(&case, &p("(1 2)", 2).orbits()).unwrap();
        let gy = gysin(&diag, &a2).unwrap();
        let delta = gy.matrix.row_vec(0);
        assert!(delta.iter().all(|(i, _)| (*i as u64).count_ones() == 4));
        let r = restriction(&a2, &diag).unwrap();
        for beta in a2.algebra.basis_of_degree(4) {
            let lhs = a2.algebra.pairing(&delta, &[(beta, q(1))]);
            let rhs = diag.algebra.integrate(&r.matrix.row_vec(beta));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn self_intersection_vanishes() {
        for (case, n) in [(CaseTag::hilb(), 3), (CaseTag::Kummer, 2), (CaseTag::Kummer, 3)] {
            let all = all_permutations(case.group_degree(n));
            for g in &all {
                for h in &all {
                    let big = LocusModel::build(&case, &g.orbits()).unwrap();
                    let small = LocusModel::build(&case, &orbit_join(g, h).unwrap()).unwrap();
                    if small.complex_dim() == big.complex_dim() {
                        continue;
                    }
                    let r = restriction(&big, &small).unwrap();
                    let gy = gysin_from_restriction(&small, &big, &r).unwrap();
                    let one = gy.matrix.row_vec(small.algebra.unit());
                    assert!(!one.is_empty());
                    let mut back = Vec::new();
                    for (k, c) in &one {
                        back.extend(r.matrix.row(*k).map(|(t, m)| (t, c * m)));
                    }
                    assert!(merge_terms(back).is_empty(), "{} in {}", small.partition, big.partition);
                }
            }
        }
    }

    #[test]
    fn conjugation_functorial() {
        for (case, n) in [(CaseTag::hilb(), 3), (CaseTag::Kummer, 2)] {
            let all = all_permutations(case.group_degree(n));
            for g in &all {
                let lg = LocusModel::build(&case, &g.orbits()).unwrap();
                for h1 in &all {
                    let g1 = g.conjugate_by(h1);
                    let l1 = LocusModel::build(&case, &g1.orbits()).unwrap();
                    let c1 = conjugation(h1, &lg, &l1).unwrap();
                    assert_eq!(crate::combinatorics::age(&g1, &case), crate::combinatorics::age(g, &case));
                    for h2 in &all {
                        let g2 = g1.conjugate_by(h2);
                        let l2 = LocusModel::build(&case, &g2.orbits()).unwrap();
                        let c2 = conjugation(h2, &l1, &l2).unwrap();
                        let c21 = conjugation(&(h2 * h1), &lg, &l2).unwrap();
                        assert_eq!(c1.matrix.then(&c2.matrix), c21.matrix);
                    }
                }
                let id = conjugation(&Permutation::identity(g.degree()), &lg, &lg).unwrap();
                for i in 0..lg.model_dim() {
                    assert_eq!(id.matrix.row_vec(i), vec![(i, q(1))]);
                }
            }
        }
    }

    #[test]
    fn conjugation_preserves_orientation() {
        let case = CaseTag::Kummer;
        for g in all_permutations(4) {
            let lg = LocusModel::build(&case, &g.orbits()).unwrap();
            for h in all_permutations(4) {
                let lt = LocusModel::build(&case, &g.conjugate_by(&h).orbits()).unwrap();
                let c = conjugation(&h, &lg, &lt).unwrap();
                let top = lg.model_dim() - 1;
                assert_eq!(lt.algebra.integrate(&c.matrix.row_vec(top)), lg.algebra.integral(top));
            }
        }
    }
}
