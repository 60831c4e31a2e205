use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Exact row-reduction data of a matrix.
#[derive(Clone, Debug)]
pub struct RrefData {
    pub rank: usize,
    /// Pivot column of each nonzero row of `rref`, in row order.
    pub pivots: Vec<usize>,
    pub rref: MatrixQ,
    /// Basis of the right kernel, one vector per free column.
    pub kernel: Vec<Vec<Rational>>,
    /// The pivot columns of the input, which span its column space.
    pub image: Vec<Vec<Rational>>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, cols, data: vec![Rational::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        MatrixQ { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn rank(&self) -> usize {
        self.rref_with_order(&(0..self.cols).collect::<Vec<_>>()).0
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Rational::ZERO;
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            for r in c + 1..n {
                let f = &m[(r, c)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = &m[(c, k)] * &f;
                    m[(r, k)] -= &v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form scanning columns in `order`. Returns the rank,
    /// pivot columns, and the reduced matrix.
    pub(crate) fn rref_with_order(&self, order: &[usize]) -> (usize, Vec<usize>, MatrixQ) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for &c in order {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = m[(row, c)].recip();
            for k in 0..m.cols {
                let v = &m[(row, k)] * &inv;
                m[(row, k)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for k in 0..m.cols {
                    if m[(row, k)].is_zero() {
                        continue;
                    }
                    let v = &m[(row, k)] * &f;
                    m[(r, k)] -= &v;
                }
            }
            pivots.push(c);
            row += 1;
        }
        (row, pivots, m)
    }
}

impl core::ops::Index<(usize, usize)> for MatrixQ {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for MatrixQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Exact RREF of `m`, with a kernel basis (one vector per free column, with a
/// 1 in that column) and the pivot columns of `m` as an image basis.
pub fn rref_kernel(m: &MatrixQ) -> RrefData {
    let order: Vec<usize> = (0..m.cols()).collect();
    let (rank, pivots, rref) = m.rref_with_order(&order);
    let mut kernel = Vec::new();
    for free in (0..m.cols()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::ZERO; m.cols()];
        v[free] = Rational::ONE;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&rref[(r, free)];
        }
        kernel.push(v);
    }
    let image = pivots.iter().map(|&p| m.column(p)).collect();
    RrefData { rank, pivots, rref, kernel, image }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn identity_full_rank() {
        let d = rref_kernel(&MatrixQ::identity(3));
        assert_eq!(d.rank, 3);
        assert!(d.kernel.is_empty());
        assert_eq!(d.image.len(), 3);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let d = rref_kernel(&MatrixQ::zeros(2, 3));
        assert_eq!(d.rank, 0);
        assert_eq!(d.kernel.len(), 3);
    }

    #[test]
    fn rank_one_kernel() {
        let m = MatrixQ::from_i64(&[&[1, 2], &[2, 4]]);
        let d = rref_kernel(&m);
        assert_eq!(d.rank, 1);
        assert_eq!(d.kernel.len(), 1);
        // (−2, 1) is proportional to (2, −1)
        assert_eq!(d.kernel[0], vec![q(-2), q(1)]);
        assert_eq!(m.mul_vec(&d.kernel[0]), vec![q(0), q(0)]);
        assert_eq!(d.image, vec![vec![q(1), q(2)]]);
    }

    #[test]
    fn rank_plus_nullity() {
        let m = MatrixQ::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let d = rref_kernel(&m);
        assert_eq!(d.rank + d.kernel.len(), 4);
        for k in &d.kernel {
            assert!(m.mul_vec(k).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = MatrixQ::from_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.determinant(), q(0));
        let m = MatrixQ::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), q(-1));
    }
}
