use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Graded dimensions `Σ b_k t^k` with nonnegative integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PoincarePolynomial {
    coeffs: Vec<u64>,
}

impl PoincarePolynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PoincarePolynomial { coeffs }
    }

    pub fn from_usize(coeffs: &[usize]) -> Self {
        Self::new(coeffs.iter().map(|&c| c as u64).collect())
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    /// `(1 + t)^m`.
    pub fn exterior(m: usize) -> Self {
        let mut c = vec![1u64];
        for _ in 0..m {
            let mut next = vec![0u64; c.len() + 1];
            for (k, v) in c.iter().enumerate() {
                next[k] += v;
                next[k + 1] += v;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Value at `t = −1`, the Euler characteristic.
    pub fn euler(&self) -> i128 {
        self.coeffs.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i128 } else { -(c as i128) }).sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::default();
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{}", c)?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{}t", c)?,
                (_, 1) => write!(f, "t^{}", k)?,
                _ => write!(f, "{}t^{}", c, k)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn exterior_and_euler() {
        let p = PoincarePolynomial::exterior(4);
        assert_eq!(p.coeffs(), &[1, 4, 6, 4, 1]);
        assert_eq!(p.euler(), 0);
        assert!(p.is_palindromic());
        assert_eq!(p.mul(&p), PoincarePolynomial::exterior(8));
        let k3 = PoincarePolynomial::new(vec![1, 0, 22, 0, 1]);
        assert_eq!(k3.euler(), 24);
        assert_eq!(k3.to_string(), "1 + 22t^2 + t^4");
        assert_eq!(PoincarePolynomial::new(vec![0, 0]).degree(), None);
    }
}
