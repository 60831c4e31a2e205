//! Finite-dimensional graded-commutative algebras over the rationals.
//!
//! Every model here has a homogeneous basis that is self-dual up to scalars
//! under the Poincaré pairing `⟨a, b⟩ = ∫ a·b`: each basis vector `e_i` has a
//! single partner `e_{dual(i)}` with nonzero pairing. Gysin maps are built on
//! top of this, so it is checked at construction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::matrix::MatrixQ;
use super::sparse::{Accumulator, SparseVec};
use super::Rational;
use crate::error::{Error, Result};

pub trait GradedAlgebra {
    fn dim(&self) -> usize;
    fn degree(&self, i: usize) -> usize;
    fn top_degree(&self) -> usize;
    /// Basis index of the unit.
    fn unit(&self) -> usize;
    /// Adds `scale · e_i e_j` into `acc`.
    fn mul_basis_into(&self, i: usize, j: usize, scale: &Rational, acc: &mut Accumulator);
    /// Poincaré partner of `e_i` and the value `∫ e_i e_partner`.
    fn dual(&self, i: usize) -> (usize, Rational);
    /// `∫ e_i`; zero off the top degree.
    fn integral(&self, i: usize) -> Rational;
    fn label(&self, i: usize) -> String;

    fn mul_basis(&self, i: usize, j: usize) -> SparseVec {
        let mut acc = Accumulator::new(self.dim());
        self.mul_basis_into(i, j, &Rational::ONE, &mut acc);
        acc.drain()
    }

    fn mul_into(&self, a: &[(usize, Rational)], b: &[(usize, Rational)], acc: &mut Accumulator) {
        for (i, x) in a {
            for (j, y) in b {
                self.mul_basis_into(*i, *j, &(x * y), acc);
            }
        }
    }

    fn mul(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> SparseVec {
        let mut acc = Accumulator::new(self.dim());
        self.mul_into(a, b, &mut acc);
        acc.drain()
    }

    fn integrate(&self, a: &[(usize, Rational)]) -> Rational {
        a.iter().map(|(i, c)| c * &self.integral(*i)).sum()
    }

    fn pairing(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Rational {
        self.integrate(&self.mul(a, b))
    }

    /// Betti numbers `b_0..b_top`.
    fn betti(&self) -> Vec<usize> {
        let mut b = vec![0; self.top_degree() + 1];
        for i in 0..self.dim() {
            b[self.degree(i)] += 1;
        }
        b
    }

    fn basis_of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }
}

/// Exterior algebra on `m` degree-1 generators.
///
/// Basis vectors are indexed by bitmask: bit `k` set means generator `k` is
/// present, and the monomial is the wedge of its generators in increasing
/// order. The full monomial integrates to `orientation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorAlgebra {
    generators: usize,
    orientation: Rational,
}

pub const MAX_EXTERIOR_GENERATORS: usize = 24;

/// Sign of `e_s ∧ e_t` relative to `e_{s ∪ t}`, or `None` if they overlap.
#[inline]
pub fn wedge_sign(s: u64, t: u64) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (s >> b).count_ones();
        rest &= rest - 1;
    }
    Some(inversions & 1 == 1)
}

impl ExteriorAlgebra {
    pub fn new(generators: usize) -> Self {
        Self::with_orientation(generators, Rational::ONE)
    }

    pub fn with_orientation(generators: usize, orientation: Rational) -> Self {
        assert!(generators <= MAX_EXTERIOR_GENERATORS, "too many exterior generators");
        assert!(!orientation.is_zero(), "zero orientation");
        ExteriorAlgebra { generators, orientation }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn orientation(&self) -> &Rational {
        &self.orientation
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << self.generators) - 1
    }

    pub fn generator(&self, k: usize) -> Result<usize> {
        if k >= self.generators {
            return Err(Error::IndexOutOfRange { index: k, generators: self.generators });
        }
        Ok(1 << k)
    }

    /// Basis index of the monomial on the given generators (any order), with
    /// the sign of sorting them; zero on a repeated index.
    pub fn monomial(&self, gens: &[usize]) -> Result<Option<(usize, Rational)>> {
        let mut mask = 0u64;
        let mut neg = false;
        for &g in gens {
            let b = self.generator(g)? as u64;
            match wedge_sign(mask, b) {
                None => return Ok(None),
                Some(s) => neg ^= s,
            }
            mask |= b;
        }
        let sign = if neg { Rational::from_int(-1) } else { Rational::ONE };
        Ok(Some((mask as usize, sign)))
    }

    /// Wedge product of multivectors; errors if an index exceeds the model.
    pub fn wedge(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Result<SparseVec> {
        for &(i, _) in a.iter().chain(b) {
            if i >= self.dim() {
                return Err(Error::IndexOutOfRange { index: i, generators: self.generators });
            }
        }
        Ok(self.mul(a, b))
    }

    /// Images of every monomial under the algebra map determined by the
    /// images of the generators in `target`.
    pub fn hom_images(&self, target: &ExteriorAlgebra, generator_images: &[SparseVec]) -> Vec<SparseVec> {
        assert_eq!(generator_images.len(), self.generators);
        let mut acc = Accumulator::new(target.dim());
        let mut images: Vec<SparseVec> = Vec::with_capacity(self.dim());
        images.push(vec![(0, Rational::ONE)]);
        for mask in 1..self.dim() {
            let top = 63 - (mask as u64).leading_zeros() as usize;
            let rest = mask & !(1 << top);
            let prev = &images[rest];
            if prev.is_empty() {
                images.push(Vec::new());
                continue;
            }
            target.mul_into(prev, &generator_images[top], &mut acc);
            images.push(acc.drain());
        }
        images
    }
}

impl GradedAlgebra for ExteriorAlgebra {
    fn dim(&self) -> usize {
        1 << self.generators
    }

    fn degree(&self, i: usize) -> usize {
        (i as u64).count_ones() as usize
    }

    fn top_degree(&self) -> usize {
        self.generators
    }

    fn unit(&self) -> usize {
        0
    }

    #[inline]
    fn mul_basis_into(&self, i: usize, j: usize, scale: &Rational, acc: &mut Accumulator) {
        if let Some(neg) = wedge_sign(i as u64, j as u64) {
            if neg {
                acc.add(i | j, &(-scale));
            } else {
                acc.add(i | j, scale);
            }
        }
    }

    fn dual(&self, i: usize) -> (usize, Rational) {
        let c = self.full_mask() ^ i as u64;
        let neg = wedge_sign(i as u64, c).unwrap();
        let v = if neg { -&self.orientation } else { self.orientation.clone() };
        (c as usize, v)
    }

    fn integral(&self, i: usize) -> Rational {
        if i as u64 == self.full_mask() {
            self.orientation.clone()
        } else {
            Rational::ZERO
        }
    }

    fn label(&self, i: usize) -> String {
        if i == 0 {
            return String::from("1");
        }
        let idx: Vec<String> = (0..self.generators).filter(|k| i >> k & 1 == 1).map(|k| format!("{}", k + 1)).collect();
        format!("e{}", idx.join(","))
    }
}

/// An algebra given by an explicit multiplication table.
#[derive(Clone, Debug)]
pub struct TableAlgebra {
    labels: Vec<String>,
    degrees: Vec<usize>,
    top: usize,
    unit: usize,
    table: Vec<SparseVec>,
    integrals: Vec<Rational>,
    duals: Vec<(usize, Rational)>,
}

impl TableAlgebra {
    /// Builds and validates: unit, degree additivity, self-dual basis.
    /// Associativity and graded commutativity are checked by
    /// [`check_structure`].
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<usize>,
        unit: usize,
        table: Vec<SparseVec>,
        integrals: Vec<Rational>,
    ) -> Result<Self> {
        let n = degrees.len();
        assert_eq!(labels.len(), n);
        assert_eq!(table.len(), n * n);
        assert_eq!(integrals.len(), n);
        let top = degrees.iter().copied().max().unwrap_or(0);
        let mut alg = TableAlgebra { labels, degrees, top, unit, table, integrals, duals: Vec::new() };
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &alg.table[i * n + j] {
                    if alg.degrees[*k] != alg.degrees[i] + alg.degrees[j] {
                        return Err(Error::Invariant(format!("product e{}e{} not degree additive", i, j)));
                    }
                }
            }
            if alg.table[unit * n + i] != vec![(i, Rational::ONE)]
                || alg.table[i * n + unit] != vec![(i, Rational::ONE)]
            {
                return Err(Error::Invariant(format!("basis {} does not see the unit", i)));
            }
        }
        let mut duals = Vec::with_capacity(n);
        for i in 0..n {
            let partners: Vec<(usize, Rational)> =
                (0..n).map(|j| (j, alg.integrate(&alg.table[i * n + j]))).filter(|(_, v)| !v.is_zero()).collect();
            if partners.len() != 1 {
                return Err(Error::DegeneratePairing(format!(
                    "basis {} pairs with {} elements",
                    alg.labels[i],
                    partners.len()
                )));
            }
            duals.push(partners[0].clone());
        }
        alg.duals = duals;
        Ok(alg)
    }

    /// Materializes the multiplication table of another model.
    pub fn from_algebra<A: GradedAlgebra>(a: &A) -> Result<Self> {
        let n = a.dim();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(a.mul_basis(i, j));
            }
        }
        Self::new(
            (0..n).map(|i| a.label(i)).collect(),
            (0..n).map(|i| a.degree(i)).collect(),
            a.unit(),
            table,
            (0..n).map(|i| a.integral(i)).collect(),
        )
    }

    /// A Poincaré duality algebra of a compact surface with Betti numbers
    /// `b`: unit, `b1` classes `x_i` in degree 1 dual to `x_i^*` in degree
    /// 3, `b2` classes `y_i` with `y_i y_j = δ_ij pt`, and the point class.
    /// All other positive-degree products vanish.
    pub fn surface(b: [usize; 5]) -> Result<Self> {
        if b[0] != 1 || b[4] != 1 || b[1] != b[3] {
            return Err(Error::InvalidBetti(format!("{:?} is not palindromic with b0 = b4 = 1", b)));
        }
        let mut labels = vec![String::from("1")];
        let mut degrees = vec![0];
        for i in 0..b[1] {
            labels.push(format!("x{}", i + 1));
            degrees.push(1);
        }
        for i in 0..b[2] {
            labels.push(format!("y{}", i + 1));
            degrees.push(2);
        }
        for i in 0..b[3] {
            labels.push(format!("x{}*", i + 1));
            degrees.push(3);
        }
        labels.push(String::from("pt"));
        degrees.push(4);
        let n = degrees.len();
        let pt = n - 1;
        let x = |i: usize| 1 + i;
        let y = |i: usize| 1 + b[1] + i;
        let xs = |i: usize| 1 + b[1] + b[2] + i;
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            table[i] = vec![(i, Rational::ONE)];
            table[i * n] = vec![(i, Rational::ONE)];
        }
        for i in 0..b[1] {
            table[x(i) * n + xs(i)] = vec![(pt, Rational::ONE)];
            table[xs(i) * n + x(i)] = vec![(pt, Rational::from_int(-1))];
        }
        for i in 0..b[2] {
            table[y(i) * n + y(i)] = vec![(pt, Rational::ONE)];
        }
        let mut integrals = vec![Rational::ZERO; n];
        integrals[pt] = Rational::ONE;
        Self::new(labels, degrees, 0, table, integrals)
    }
}

impl GradedAlgebra for TableAlgebra {
    fn dim(&self) -> usize {
        self.degrees.len()
    }

    fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    fn top_degree(&self) -> usize {
        self.top
    }

    fn unit(&self) -> usize {
        self.unit
    }

    fn mul_basis_into(&self, i: usize, j: usize, scale: &Rational, acc: &mut Accumulator) {
        acc.add_scaled(&self.table[i * self.dim() + j], scale);
    }

    fn dual(&self, i: usize) -> (usize, Rational) {
        self.duals[i].clone()
    }

    fn integral(&self, i: usize) -> Rational {
        self.integrals[i].clone()
    }

    fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
}

/// Graded tensor product of table algebras with Koszul signs
/// `(a⊗b)(a'⊗b') = (−1)^{|b||a'|} aa'⊗bb'`.
///
/// Basis index is mixed radix with factor 0 most significant. The integral
/// of a tensor of top classes is the product of the factor integrals.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    factors: Vec<TableAlgebra>,
    strides: Vec<usize>,
    dim: usize,
}

impl TensorAlgebra {
    pub fn new(factors: Vec<TableAlgebra>) -> Self {
        let mut strides = vec![0; factors.len()];
        let mut dim = 1usize;
        for (k, f) in factors.iter().enumerate().rev() {
            strides[k] = dim;
            dim = dim.checked_mul(f.dim()).expect("tensor dimension overflow");
        }
        TensorAlgebra { factors, strides, dim }
    }

    pub fn power(base: &TableAlgebra, k: usize) -> Self {
        Self::new(vec![base.clone(); k])
    }

    pub fn factors(&self) -> &[TableAlgebra] {
        &self.factors
    }

    pub fn split(&self, i: usize) -> Vec<usize> {
        self.factors.iter().zip(&self.strides).map(|(f, s)| (i / s) % f.dim()).collect()
    }

    pub fn join(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.strides).map(|(p, s)| p * s).sum()
    }

    /// Basis index of `1 ⊗ … ⊗ e_a ⊗ … ⊗ 1` with `e_a` in factor `k`.
    pub fn embed(&self, k: usize, a: usize) -> usize {
        let mut parts: Vec<usize> = self.factors.iter().map(|f| f.unit()).collect();
        parts[k] = a;
        self.join(&parts)
    }

    fn koszul_negative(&self, a: &[usize], b: &[usize]) -> bool {
        // b_k moves past a_{k+1}, …, a_{last}
        let mut parity = 0usize;
        let mut tail = 0usize;
        for k in (0..self.factors.len()).rev() {
            parity += self.factors[k].degree(b[k]) * tail;
            tail += self.factors[k].degree(a[k]);
        }
        parity % 2 == 1
    }
}

impl GradedAlgebra for TensorAlgebra {
    fn dim(&self) -> usize {
        self.dim
    }

    fn degree(&self, i: usize) -> usize {
        self.split(i).iter().zip(&self.factors).map(|(&p, f)| f.degree(p)).sum()
    }

    fn top_degree(&self) -> usize {
        self.factors.iter().map(|f| f.top_degree()).sum()
    }

    fn unit(&self) -> usize {
        let parts: Vec<usize> = self.factors.iter().map(|f| f.unit()).collect();
        self.join(&parts)
    }

    fn mul_basis_into(&self, i: usize, j: usize, scale: &Rational, acc: &mut Accumulator) {
        let a = self.split(i);
        let b = self.split(j);
        let mut terms: Vec<(usize, Rational)> =
            vec![(0, if self.koszul_negative(&a, &b) { -scale } else { scale.clone() })];
        for (k, f) in self.factors.iter().enumerate() {
            let prod = f.mul_basis(a[k], b[k]);
            if prod.is_empty() {
                return;
            }
            let mut next = Vec::with_capacity(terms.len() * prod.len());
            for (idx, c) in &terms {
                for (p, d) in &prod {
                    next.push((idx + p * self.strides[k], c * d));
                }
            }
            terms = next;
        }
        for (idx, c) in terms {
            acc.add(idx, &c);
        }
    }

    fn dual(&self, i: usize) -> (usize, Rational) {
        let a = self.split(i);
        let mut parts = Vec::with_capacity(a.len());
        let mut value = Rational::ONE;
        for (k, f) in self.factors.iter().enumerate() {
            let (p, v) = f.dual(a[k]);
            parts.push(p);
            value *= &v;
        }
        if self.koszul_negative(&a, &parts) {
            value = -value;
        }
        (self.join(&parts), value)
    }

    fn integral(&self, i: usize) -> Rational {
        self.split(i).iter().zip(&self.factors).map(|(&p, f)| f.integral(p)).fold(Rational::ONE, |a, b| a * b)
    }

    fn label(&self, i: usize) -> String {
        let parts: Vec<String> = self.split(i).iter().zip(&self.factors).map(|(&p, f)| f.label(p)).collect();
        parts.join("⊗")
    }
}

/// Tensor product of a list of models.
pub fn tensor_algebra(models: &[TableAlgebra]) -> TensorAlgebra {
    TensorAlgebra::new(models.to_vec())
}

/// Exterior model of `Λ(Q^m / W)` for `W` spanned by `relations`.
#[derive(Clone, Debug)]
pub struct QuotientModel {
    pub algebra: ExteriorAlgebra,
    /// Ambient coordinates kept as generators of the quotient, increasing.
    pub kept: Vec<usize>,
    /// `m × kept.len()` matrix sending ambient coordinate `i` to its class.
    pub projection: MatrixQ,
}

impl QuotientModel {
    /// The class of ambient coordinate `i` as a sparse combination of the
    /// quotient generators.
    pub fn project_coordinate(&self, i: usize) -> SparseVec {
        (0..self.kept.len())
            .filter(|&k| !self.projection[(i, k)].is_zero())
            .map(|k| (1usize << k, self.projection[(i, k)].clone()))
            .collect()
    }
}

/// Quotient of the exterior algebra on `m` generators by the degree-1
/// `relations`. The complement keeps the lexicographically first ambient
/// coordinates that stay independent modulo the relations.
///
/// The result integrates its full monomial to
/// `∫ w_1 ∧ … ∧ w_r ∧ e_kept`, computed in `Λ(Q^m)` with the standard
/// orientation: the fundamental-class normalization of a subtorus cut out by
/// the relations.
pub fn quotient_model(m: usize, relations: &[Vec<Rational>]) -> Result<QuotientModel> {
    for r in relations {
        if r.len() != m {
            return Err(Error::DegreeMismatch(r.len(), m));
        }
    }
    let r = relations.len();
    let rel = if r == 0 { MatrixQ::zeros(0, m) } else { MatrixQ::from_rows(relations.to_vec()) };
    // pivots taken from the right leave the earliest coordinates free
    let order: Vec<usize> = (0..m).rev().collect();
    let (rank, pivots, rref) = rel.rref_with_order(&order);
    if rank != r {
        return Err(Error::DependentRelations);
    }
    let kept: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let mut projection = MatrixQ::zeros(m, kept.len());
    for (k, &c) in kept.iter().enumerate() {
        projection[(c, k)] = Rational::ONE;
    }
    for (row, &p) in pivots.iter().enumerate() {
        // e_p + Σ_kept rref[row][c] e_c lies in W
        for (k, &c) in kept.iter().enumerate() {
            projection[(p, k)] = -&rref[(row, c)];
        }
    }
    let mut frame = MatrixQ::zeros(m, m);
    for (col, w) in relations.iter().enumerate() {
        for (i, x) in w.iter().enumerate() {
            frame[(i, col)] = x.clone();
        }
    }
    for (k, &c) in kept.iter().enumerate() {
        frame[(c, r + k)] = Rational::ONE;
    }
    let orientation = if m == 0 { Rational::ONE } else { frame.determinant() };
    if orientation.is_zero() {
        return Err(Error::DependentRelations);
    }
    Ok(QuotientModel { algebra: ExteriorAlgebra::with_orientation(kept.len(), orientation), kept, projection })
}

/// Basis of the subspace fixed by a finite group acting on a graded space.
///
/// `action[g][k]` is the matrix (columns = images) of group element `g` on
/// degree `k`. Returns a basis of the image of the averaging projector in
/// each degree. Closure is spot-checked on up to `closure_samples` pairs,
/// and each dimension is cross-checked against the trace average.
pub fn invariant_basis(action: &[Vec<MatrixQ>], closure_samples: usize) -> Result<Vec<Vec<Vec<Rational>>>> {
    let order = action.len();
    if order == 0 {
        return Err(Error::ActionNotClosed(String::from("empty group")));
    }
    let degrees = action[0].len();
    let mut checked = 0;
    'outer: for a in 0..order {
        for b in 0..order {
            if checked >= closure_samples {
                break 'outer;
            }
            checked += 1;
            for k in 0..degrees {
                let prod = action[a][k].mul(&action[b][k]);
                if !action.iter().any(|g| g[k] == prod) {
                    return Err(Error::ActionNotClosed(format!("elements {} and {} in degree {}", a, b, k)));
                }
            }
        }
    }
    let inv_order = Rational::new(1, order as i64);
    let mut out = Vec::with_capacity(degrees);
    for k in 0..degrees {
        let n = action[0][k].rows();
        let mut avg = MatrixQ::zeros(n, n);
        let mut trace = Rational::ZERO;
        for g in action {
            trace += &g[k].trace();
            for i in 0..n {
                for j in 0..n {
                    avg[(i, j)] += &g[k][(i, j)];
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                avg[(i, j)] = &avg[(i, j)] * &inv_order;
            }
        }
        let data = super::matrix::rref_kernel(&avg);
        let molien = &trace * &inv_order;
        if molien != Rational::from_int(data.rank as i64) {
            return Err(Error::Invariant(format!(
                "degree {}: projector rank {} but trace average {}",
                k, data.rank, molien
            )));
        }
        out.push(data.image);
    }
    Ok(out)
}

/// Exhaustive structural checks on a model: associativity and graded
/// commutativity on all basis pairs/triples, unit, and nondegeneracy of
/// the pairing on each complementary degree pair via its Gram determinant.
pub fn check_structure<A: GradedAlgebra>(a: &A) -> Result<()> {
    let n = a.dim();
    let top = a.top_degree();
    for i in 0..n {
        if a.mul_basis(a.unit(), i) != vec![(i, Rational::ONE)] {
            return Err(Error::Invariant(format!("unit fails on {}", a.label(i))));
        }
        for j in 0..n {
            let ij = a.mul_basis(i, j);
            let ji = a.mul_basis(j, i);
            let sign = if a.degree(i) * a.degree(j) % 2 == 1 { -Rational::ONE } else { Rational::ONE };
            if ij != super::sparse::scale(&ji, &sign) {
                return Err(Error::Invariant(format!("{}·{} not graded commutative", a.label(i), a.label(j))));
            }
            for (k, _) in &ij {
                if a.degree(*k) != a.degree(i) + a.degree(j) {
                    return Err(Error::Invariant(String::from("degree additivity")));
                }
            }
            for k in 0..n {
                let left = a.mul(&ij, &[(k, Rational::ONE)]);
                let right = a.mul(&[(i, Rational::ONE)], &a.mul_basis(j, k));
                if left != right {
                    return Err(Error::Invariant(format!(
                        "({}·{})·{} is not associative",
                        a.label(i),
                        a.label(j),
                        a.label(k)
                    )));
                }
            }
        }
    }
    gram_nondegenerate(a, top)
}

/// Gram determinant of `⟨H^p, H^{top−p}⟩` is nonzero for every `p`.
pub fn gram_nondegenerate<A: GradedAlgebra>(a: &A, top: usize) -> Result<()> {
    for p in 0..=top {
        let rows = a.basis_of_degree(p);
        let cols = a.basis_of_degree(top - p);
        if rows.len() != cols.len() {
            return Err(Error::DegeneratePairing(format!("b_{} != b_{}", p, top - p)));
        }
        if rows.is_empty() {
            continue;
        }
        let gram = MatrixQ::from_rows(
            rows.iter()
                .map(|&i| cols.iter().map(|&j| a.pairing(&[(i, Rational::ONE)], &[(j, Rational::ONE)])).collect())
                .collect(),
        );
        if gram.determinant().is_zero() {
            return Err(Error::DegeneratePairing(format!("degree {}", p)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn wedge_examples() {
        let e = ExteriorAlgebra::new(3);
        let e1 = vec![(e.generator(0).unwrap(), q(1))];
        let e2 = vec![(e.generator(1).unwrap(), q(1))];
        let e3 = vec![(e.generator(2).unwrap(), q(1))];
        let e23 = e.wedge(&e2, &e3).unwrap();
        assert_eq!(e.wedge(&e1, &e23).unwrap(), vec![(0b111, q(1))]);
        assert_eq!(e.wedge(&e2, &e1).unwrap(), vec![(0b011, q(-1))]);
        assert!(e.wedge(&e1, &e1).unwrap().is_empty());
        assert!(e.wedge(&[(8, q(1))], &e1).is_err());
        assert!(e.generator(3).is_err());
    }

    #[test]
    fn monomial_sorting_sign() {
        let e = ExteriorAlgebra::new(4);
        assert_eq!(e.monomial(&[2, 0, 1]).unwrap(), Some((0b111, q(1))));
        assert_eq!(e.monomial(&[1, 0]).unwrap(), Some((0b11, q(-1))));
        assert_eq!(e.monomial(&[1, 1]).unwrap(), None);
    }

    #[test]
    fn exterior_dimensions_and_duality() {
        let e = ExteriorAlgebra::new(5);
        let b = e.betti();
        assert_eq!(b, vec![1, 5, 10, 10, 5, 1]);
        for i in 0..e.dim() {
            let (j, v) = e.dual(i);
            assert_eq!(e.pairing(&[(i, q(1))], &[(j, q(1))]), v);
        }
        gram_nondegenerate(&e, 5).unwrap();
    }

    #[test]
    fn wedge_associative_exhaustive_small() {
        for m in 0..=4 {
            check_structure(&ExteriorAlgebra::new(m)).unwrap();
        }
    }

    #[test]
    fn wedge_associative_m8_all_triples() {
        let e = ExteriorAlgebra::new(8);
        let n = e.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = e.mul_basis(i, j);
                if ij.is_empty() {
                    continue;
                }
                for k in 0..n {
                    let l = e.mul(&ij, &[(k, q(1))]);
                    let r = e.mul(&[(i, q(1))], &e.mul_basis(j, k));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn surface_models_are_frobenius() {
        let k3 = TableAlgebra::surface([1, 0, 22, 0, 1]).unwrap();
        assert_eq!(k3.betti(), vec![1, 0, 22, 0, 1]);
        check_structure(&k3).unwrap();
        let odd = TableAlgebra::surface([1, 2, 3, 2, 1]).unwrap();
        check_structure(&odd).unwrap();
        assert!(TableAlgebra::surface([1, 2, 3, 1, 1]).is_err());
        assert!(TableAlgebra::surface([2, 0, 1, 0, 2]).is_err());
    }

    #[test]
    fn tensor_one_factor_is_the_factor() {
        let base = TableAlgebra::from_algebra(&ExteriorAlgebra::new(2)).unwrap();
        let t = tensor_algebra(core::slice::from_ref(&base));
        assert_eq!(t.dim(), base.dim());
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                assert_eq!(t.mul_basis(i, j), base.mul_basis(i, j));
            }
        }
    }

    #[test]
    fn tensor_of_abelian_surfaces() {
        let a = TableAlgebra::from_algebra(&ExteriorAlgebra::new(4)).unwrap();
        let t = TensorAlgebra::power(&a, 2);
        assert_eq!(t.betti()[1], 8);
        // (1+t)^8
        assert_eq!(t.betti(), vec![1, 8, 28, 56, 70, 56, 28, 8, 1]);
        let t3 = TensorAlgebra::power(&a, 3);
        let mut expected = vec![0usize; 13];
        for (k, e) in expected.iter_mut().enumerate() {
            *e = (0..k).fold(1usize, |acc, i| acc * (12 - i) / (i + 1));
        }
        assert_eq!(t3.betti(), expected);
    }

    #[test]
    fn tensor_of_exteriors_matches_exterior_on_union() {
        // Λ(Q^2) ⊗ Λ(Q^2) ≅ Λ(Q^4) with generator (factor k, j) ↦ 2k + j
        let a = TableAlgebra::from_algebra(&ExteriorAlgebra::new(2)).unwrap();
        let t = TensorAlgebra::power(&a, 2);
        let e = ExteriorAlgebra::new(4);
        let to_ext = |i: usize| -> usize {
            let p = t.split(i);
            // factor-local index of Λ(Q^2) is its own bitmask
            p[0] | (p[1] << 2)
        };
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                let tp: Vec<(usize, Rational)> = t.mul_basis(i, j).into_iter().map(|(k, c)| (to_ext(k), c)).collect();
                assert_eq!(tp, e.mul_basis(to_ext(i), to_ext(j)));
            }
            assert_eq!(t.integral(i), e.integral(to_ext(i)));
        }
        check_structure(&t).unwrap();
    }

    #[test]
    fn quotient_examples() {
        let qm = quotient_model(4, &[]).unwrap();
        assert_eq!(qm.projection, MatrixQ::identity(4));
        assert_eq!(qm.algebra.orientation(), &q(1));

        // two abelian-surface factors modulo the four sum relations
        let rel: Vec<Vec<Rational>> =
            (0..4).map(|j| (0..8).map(|c| if c % 4 == j { q(1) } else { q(0) }).collect()).collect();
        let qm = quotient_model(8, &rel).unwrap();
        assert_eq!(qm.kept, vec![0, 1, 2, 3]);
        assert_eq!(qm.algebra.betti(), vec![1, 4, 6, 4, 1]);
        assert_eq!(qm.project_coordinate(5), vec![(0b10, q(-1))]);

        let full: Vec<Vec<Rational>> =
            (0..4).map(|j| (0..4).map(|c| if c == j { q(1) } else { q(0) }).collect()).collect();
        let qm = quotient_model(4, &full).unwrap();
        assert_eq!(qm.algebra.dim(), 1);
        assert_eq!(qm.algebra.betti(), vec![1]);

        let dep = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(quotient_model(2, &dep).unwrap_err(), Error::DependentRelations);
    }

    #[test]
    fn quotient_orientation_is_weight_power() {
        // weights (3, 2) on two abelian-surface factors: the kept block is
        // orbit 0 and the full monomial integrates to 2^4
        let rel: Vec<Vec<Rational>> = (0..4)
            .map(|j| (0..8).map(|c| if c % 4 == j { q(if c < 4 { 3 } else { 2 }) } else { q(0) }).collect())
            .collect();
        let qm = quotient_model(8, &rel).unwrap();
        assert_eq!(qm.kept, vec![0, 1, 2, 3]);
        assert_eq!(qm.algebra.orientation(), &q(16));
    }

    #[test]
    fn invariants_trivial_and_swap() {
        let id2 = MatrixQ::identity(2);
        let swap = MatrixQ::from_i64(&[&[0, 1], &[1, 0]]);
        let triv = invariant_basis(&[vec![id2.clone()]], 10).unwrap();
        assert_eq!(triv[0].len(), 2);
        let sw = invariant_basis(&[vec![id2], vec![swap]], 10).unwrap();
        assert_eq!(sw[0].len(), 1);
        let v = &sw[0][0];
        assert_eq!(v[0], v[1]);
        let bad = invariant_basis(&[vec![MatrixQ::identity(2)], vec![MatrixQ::from_i64(&[&[2, 0], &[0, 1]])]], 10);
        assert!(matches!(bad, Err(Error::ActionNotClosed(_))));
    }

    #[test]
    fn invariants_of_graded_swap_degree_two() {
        // swap of the two factors of Λ(Q^4) ⊗ Λ(Q^4) = Λ(Q^8), degree-2 part
        let e = ExteriorAlgebra::new(8);
        let basis = e.basis_of_degree(2);
        assert_eq!(basis.len(), 28);
        let gens: Vec<SparseVec> = (0..8).map(|k| vec![(1usize << ((k + 4) % 8), q(1))]).collect();
        let images = e.hom_images(&e, &gens);
        let mut swap = MatrixQ::zeros(28, 28);
        for (col, &b) in basis.iter().enumerate() {
            for (t, c) in &images[b] {
                let row = basis.iter().position(|x| x == t).unwrap();
                swap[(row, col)] = c.clone();
            }
        }
        let inv = invariant_basis(&[vec![MatrixQ::identity(28)], vec![swap]], 4).unwrap();
        assert_eq!(inv[0].len(), 12);
    }
}
