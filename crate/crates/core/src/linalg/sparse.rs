use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::Rational;

/// Sparse vector: `(index, coefficient)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Dense scratch space that remembers which slots were touched.
pub struct Accumulator {
    values: Vec<Rational>,
    touched: Vec<usize>,
    live: Vec<bool>,
}

impl Accumulator {
    pub fn new(dim: usize) -> Self {
        Accumulator { values: vec![Rational::ZERO; dim], touched: Vec::new(), live: vec![false; dim] }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn add(&mut self, i: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        if !self.live[i] {
            self.live[i] = true;
            self.touched.push(i);
        }
        self.values[i] += c;
    }

    pub fn add_scaled(&mut self, v: &[(usize, Rational)], scale: &Rational) {
        if scale.is_one() {
            for (i, c) in v {
                self.add(*i, c);
            }
        } else {
            for (i, c) in v {
                self.add(*i, &(c * scale));
            }
        }
    }

    /// Drains the contents into a sorted sparse vector and resets.
    pub fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.live[i] = false;
            let c = core::mem::take(&mut self.values[i]);
            if !c.is_zero() {
                out.push((i, c));
            }
        }
        self.touched.clear();
        out
    }
}

/// Adds `scale * b` into `a`, both sorted.
pub fn axpy(a: &SparseVec, scale: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, &b[j].1 * scale));
            j += 1;
        } else {
            let c = &a[i].1 + &(&b[j].1 * scale);
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, s: &Rational) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, c * s)).collect()
}

/// Builds a sorted sparse vector from unsorted terms, merging duplicates.
pub fn collect_terms<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> SparseVec {
    let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, c) in terms {
        *map.entry(i).or_default() += c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Linear map stored row by row in compressed form: row `i` is the image of
/// source basis vector `i`.
#[derive(Clone, Debug, Default)]
pub struct SparseMap {
    offsets: Vec<usize>,
    cols: Vec<u32>,
    coeffs: Vec<Rational>,
    target_dim: usize,
}

impl SparseMap {
    pub fn from_rows(rows: Vec<SparseVec>, target_dim: usize) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let total = rows.iter().map(Vec::len).sum();
        let mut cols = Vec::with_capacity(total);
        let mut coeffs = Vec::with_capacity(total);
        for row in rows {
            for (j, c) in row {
                debug_assert!(j < target_dim);
                cols.push(j as u32);
                coeffs.push(c);
            }
            offsets.push(cols.len());
        }
        SparseMap { offsets, cols, coeffs, target_dim }
    }

    pub fn source_dim(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        self.cols[a..b].iter().map(|&j| j as usize).zip(&self.coeffs[a..b])
    }

    pub fn row_vec(&self, i: usize) -> SparseVec {
        self.row(i).map(|(j, c)| (j, c.clone())).collect()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn transpose(&self) -> SparseMap {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.target_dim];
        for i in 0..self.source_dim() {
            for (j, c) in self.row(i) {
                rows[j].push((i, c.clone()));
            }
        }
        SparseMap::from_rows(rows, self.source_dim())
    }

    pub fn apply(&self, v: &[(usize, Rational)], acc: &mut Accumulator) {
        for (i, c) in v {
            for (j, m) in self.row(*i) {
                acc.add(j, &(c * m));
            }
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SparseMap) -> SparseMap {
        assert_eq!(self.target_dim, other.source_dim());
        let mut acc = Accumulator::new(other.target_dim);
        let rows = (0..self.source_dim())
            .map(|i| {
                for (j, c) in self.row(i) {
                    for (k, m) in other.row(j) {
                        acc.add(k, &(c * m));
                    }
                }
                acc.drain()
            })
            .collect();
        SparseMap::from_rows(rows, other.target_dim)
    }

    pub fn trace(&self) -> Rational {
        (0..self.source_dim()).flat_map(|i| self.row(i).filter(move |(j, _)| *j == i).map(|(_, c)| c.clone())).sum()
    }
}

impl PartialEq for SparseMap {
    fn eq(&self, other: &Self) -> bool {
        self.target_dim == other.target_dim
            && self.source_dim() == other.source_dim()
            && (0..self.source_dim()).all(|i| self.row_vec(i) == other.row_vec(i))
    }
}

/// Incrementally built fully reduced echelon basis of a subspace.
///
/// Every stored row has coefficient 1 at its pivot and 0 at every other
/// row's pivot, so coordinates of a member vector are read off at pivots.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        // each stored row has zeros at other pivots, so one pass in any order suffices
        let hits: Vec<(usize, Rational)> =
            v.iter().filter(|(i, _)| self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone())).collect();
        for (p, c) in hits {
            v = axpy(&v, &(-c), &self.rows[&p]);
        }
        v
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let r = scale(&r, &lead.recip());
        let keys: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, row)| row.binary_search_by_key(&p, |t| t.0).is_ok())
            .map(|(k, _)| *k)
            .collect();
        for k in keys {
            let row = self.rows.remove(&k).unwrap();
            let c = row[row.binary_search_by_key(&p, |t| t.0).unwrap()].1.clone();
            self.rows.insert(k, axpy(&row, &(-c), &r));
        }
        self.rows.insert(p, r);
        true
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is outside
    /// the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<(usize, Rational)>> {
        if !self.reduce(v).is_empty() {
            return None;
        }
        Some(v.iter().filter(|(i, _)| self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone())).collect())
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &SparseVec)> + '_ {
        self.rows.iter().map(|(k, v)| (*k, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn echelon_rank_and_coordinates() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(&vec![(0, q(1)), (1, q(1))]));
        assert!(e.insert(&vec![(1, q(2)), (2, q(1))]));
        assert!(!e.insert(&vec![(0, q(1)), (1, q(3)), (2, q(1))]));
        assert_eq!(e.rank(), 2);
        let v = vec![(0, q(2)), (1, q(4)), (2, q(1))];
        let coords = e.coordinates(&v).unwrap();
        let mut rebuilt = Vec::new();
        for (p, c) in coords {
            rebuilt = axpy(&rebuilt, &c, &e.rows[&p]);
        }
        assert_eq!(rebuilt, v);
        assert!(e.coordinates(&vec![(2, q(1))]).is_none());
    }

    #[test]
    fn transpose_twice_is_identity() {
        let m = SparseMap::from_rows(vec![vec![(1, q(2))], vec![], vec![(0, q(-1)), (1, q(3))]], 2);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.trace(), q(0));
    }
}
