//! Symmetric-group machinery: permutations, partitions, orbit joins, ages
//! and the discrete-torsion exponent.
//!
//! Permutations are 0-indexed in one-line notation. Composition is
//! `(g ∘ h)(x) = g(h(x))`, so `g * h` applies `h` first. Cycle notation at the
//! text boundary is 1-indexed with fixed points omitted, and `id` for the
//! identity.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize);
        Permutation { images: (0..n as u8).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parse(format!("{:?} is not a bijection of 0..{}", images, n)));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    /// Builds from disjoint 0-indexed cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n || used[x] {
                    return Err(Error::Parse(format!("cycle entry {} repeated or out of range", x + 1)));
                }
                used[x] = true;
                images[x] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, checking degrees.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() })
    }

    pub fn conjugate_by(&self, h: &Permutation) -> Self {
        h * &(self * &h.inverse())
    }

    /// Orbits, each sorted, ordered by their minimal element.
    pub fn orbits(&self) -> SetPartition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut block = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                block.push(x);
                x = self.apply(x);
            }
            block.sort_unstable();
            blocks.push(block);
        }
        SetPartition::from_blocks(n, blocks)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    /// Rank of the one-line form in lexicographic order of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.images[i + 1..].iter().filter(|&&x| x < self.images[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| format!("{}", x + 1)).collect();
                format!("({})", inner.join(" "))
            })
            .collect();
        if parts.is_empty() {
            String::from("id")
        } else {
            parts.concat()
        }
    }

    /// Parses 1-indexed cycle notation such as `(1 2)(3 4 5)` or `id`.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let t = s.trim();
        if t == "id" || t.is_empty() {
            return Ok(Self::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::Parse(format!("expected '(' in {:?}", s)));
            };
            let Some(close) = body.find(')') else {
                return Err(Error::Parse(format!("unclosed cycle in {:?}", s)));
            };
            let mut cycle = Vec::new();
            for tok in body[..close].split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse(format!("bad entry {:?} in {:?}", tok, s)))?;
                if v == 0 || v > n {
                    return Err(Error::Parse(format!("entry {} out of range 1..={}", v, n)));
                }
                cycle.push(v - 1);
            }
            if cycle.is_empty() {
                return Err(Error::Parse(format!("empty cycle in {:?}", s)));
            }
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(n, &refs)
    }
}

impl<'a> Mul<&'a Permutation> for &'a Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// All of `S_n` in lexicographic one-line order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation::from_images(cur.clone()).unwrap()];
    while let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation::from_images(cur.clone()).unwrap());
    }
    out
}

/// A weakly decreasing list of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(String::from("partition parts must be positive")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |a, &b| a.gcd(&b))
    }

    /// Order of the centralizer of an element of this cycle type:
    /// `Π_r r^{m_r} m_r!`.
    pub fn centralizer_order(&self) -> u128 {
        let mut out: u128 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let r = self.parts[i];
            let m = self.parts[i..].iter().take_while(|&&p| p == r).count();
            for k in 1..=m {
                out *= (r as u128) * (k as u128);
            }
            i += m;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| format!("{}", p)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order starting at `(n)`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// A set partition of `{0..n-1}`: sorted blocks ordered by minimal element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_unstable_by_key(|b| b[0]);
        debug_assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), n);
        SetPartition { n, blocks }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_blocks(n, (0..n).map(|i| vec![i]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.sizes()).unwrap()
    }

    /// Block index of each point.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    /// True if every block of `finer` lies in a block of `self`.
    pub fn coarsens(&self, finer: &SetPartition) -> bool {
        let of = self.block_of();
        self.n == finer.n && finer.blocks.iter().all(|b| b.iter().all(|&x| of[x] == of[b[0]]))
    }

    pub fn gcd(&self) -> usize {
        self.blocks.iter().fold(0, |a, b| a.gcd(&b.len()))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|x| format!("{}", x + 1)).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Disjoint-set forest with path halving and union by size.
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    pub fn into_partition(mut self) -> SetPartition {
        let n = self.parent.len();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            blocks[r].push(x);
        }
        SetPartition::from_blocks(n, blocks)
    }
}

pub fn cycle_type(g: &Permutation) -> Partition {
    g.orbits().shape()
}

/// Orbits of the subgroup generated by `g` and `h`.
pub fn orbit_join(g: &Permutation, h: &Permutation) -> Result<SetPartition> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch(g.degree(), h.degree()));
    }
    let mut uf = UnionFind::new(g.degree());
    for x in 0..g.degree() {
        uf.union(x, g.apply(x));
        uf.union(x, h.apply(x));
    }
    Ok(uf.into_partition())
}

/// Which quotient stack is being modelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `[S^n / S_n]` for a surface `S` with trivial canonical class, given by
    /// its Betti numbers.
    Hilb { betti: [usize; 5] },
    /// `[A_0^{n+1} / S_{n+1}]`.
    Kummer,
}

pub const ABELIAN_SURFACE_BETTI: [usize; 5] = [1, 4, 6, 4, 1];

impl CaseTag {
    pub fn hilb() -> Self {
        CaseTag::Hilb { betti: ABELIAN_SURFACE_BETTI }
    }

    pub fn hilb_with_betti(betti: [usize; 5]) -> Result<Self> {
        let palindromic = betti[0] == betti[4] && betti[1] == betti[3];
        if !palindromic || betti[0] != 1 {
            return Err(Error::InvalidBetti(format!("{:?}", betti)));
        }
        Ok(CaseTag::Hilb { betti })
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            CaseTag::Hilb { betti } => *betti == ABELIAN_SURFACE_BETTI,
            CaseTag::Kummer => true,
        }
    }

    /// Number of points permuted by the group for parameter `n`.
    pub fn group_degree(&self, n: usize) -> usize {
        match self {
            CaseTag::Hilb { .. } => n,
            CaseTag::Kummer => n + 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::Hilb { .. } => "hilb",
            CaseTag::Kummer => "kummer",
        }
    }
}

/// `age(g)`: `n − |O(g)|` for `S_n` on `S^n`, and `(n+1) − |O(g)|` for
/// `S_{n+1}` on `A_0^{n+1}`. Both equal the degree of `g` minus its number
/// of orbits, since the group acts on its own degree.
pub fn age(g: &Permutation, case: &CaseTag) -> usize {
    let _ = case;
    g.degree() - g.orbits().len()
}

/// Discrete-torsion exponent `ε(g,h) = (age g + age h − age gh) / 2`.
pub fn epsilon(g: &Permutation, h: &Permutation, case: &CaseTag) -> Result<i64> {
    let gh = g.compose(h)?;
    let (a, b, c) = (age(g, case), age(h, case), age(&gh, case));
    let s = a as i64 + b as i64 - c as i64;
    if s % 2 != 0 {
        return Err(Error::NonIntegralEpsilon(a, b, c));
    }
    Ok(s / 2)
}

/// Conjugacy class data of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub partition: Partition,
    pub class_size: u128,
    pub centralizer_order: u128,
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn conjugacy_class_data(n: usize) -> Vec<ClassData> {
    let nf = factorial(n);
    partitions(n)
        .into_iter()
        .map(|p| {
            let c = p.centralizer_order();
            ClassData { partition: p, class_size: nf / c, centralizer_order: c }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(cycle_type(&Permutation::identity(3)).parts(), &[1, 1, 1]);
        assert_eq!(cycle_type(&p("(1 2)(3 4 5)", 5)).parts(), &[3, 2]);
        assert_eq!(cycle_type(&p("(1 2 3 4 5 6)", 6)).parts(), &[6]);
    }

    #[test]
    fn orbit_join_examples() {
        let g = p("(1 2)(3 4 5)", 5);
        assert_eq!(orbit_join(&g, &g).unwrap(), g.orbits());
        let j = orbit_join(&p("(1 2)", 3), &p("(2 3)", 3)).unwrap();
        assert_eq!(j.blocks(), &[vec![0, 1, 2]]);
        let j = orbit_join(&p("(1 2)", 4), &p("(3 4)", 4)).unwrap();
        assert_eq!(j.blocks(), &[vec![0, 1], vec![2, 3]]);
        assert!(orbit_join(&p("(1 2)", 3), &p("(1 2)", 4)).is_err());
    }

    #[test]
    fn age_examples() {
        let c = CaseTag::hilb();
        assert_eq!(age(&Permutation::identity(4), &c), 0);
        for r in 1..=6 {
            let cyc: Vec<usize> = (0..r).collect();
            assert_eq!(age(&Permutation::from_cycles(6, &[&cyc]).unwrap(), &c), r - 1);
        }
        assert_eq!(age(&p("(1 2)(3 4 5)", 5), &c), 3);
        assert_eq!(age(&p("(1 2 3)", 3), &CaseTag::Kummer), 2);
    }

    #[test]
    fn epsilon_examples() {
        let c = CaseTag::hilb();
        for h in all_permutations(3) {
            assert_eq!(epsilon(&Permutation::identity(3), &h, &c).unwrap(), 0);
        }
        let s = p("(1 2)", 2);
        assert_eq!(epsilon(&s, &s, &c).unwrap(), 1);
        assert_eq!(epsilon(&p("(1 2)", 3), &p("(2 3)", 3), &c).unwrap(), 0);
    }

    #[test]
    fn class_data_examples() {
        let d = conjugacy_class_data(3);
        let triples: Vec<(Vec<usize>, u128, u128)> =
            d.iter().map(|c| (c.partition.parts().to_vec(), c.class_size, c.centralizer_order)).collect();
        assert_eq!(triples, vec![(vec![3], 2, 3), (vec![2, 1], 3, 2), (vec![1, 1, 1], 1, 6)]);
        assert_eq!(conjugacy_class_data(1).len(), 1);
        assert_eq!(conjugacy_class_data(1)[0].class_size, 1);
        assert_eq!(conjugacy_class_data(4).iter().map(|c| c.class_size).sum::<u128>(), 24);
    }

    #[test]
    fn class_data_matches_brute_force() {
        for n in 1..=6 {
            let all = all_permutations(n);
            for c in conjugacy_class_data(n) {
                let count = all.iter().filter(|g| cycle_type(g) == c.partition).count() as u128;
                assert_eq!(count, c.class_size);
                assert_eq!(c.class_size * c.centralizer_order, factorial(n));
                let g = all.iter().find(|g| cycle_type(g) == c.partition).unwrap();
                let cent = all.iter().filter(|h| (*h * g) == (g * *h)).count() as u128;
                assert_eq!(cent, c.centralizer_order);
            }
        }
    }

    #[test]
    fn lex_rank_is_position() {
        for (i, g) in all_permutations(4).iter().enumerate() {
            assert_eq!(g.lex_rank(), i);
        }
    }

    #[test]
    fn cycle_notation_round_trip() {
        for g in all_permutations(5) {
            let s = g.to_cycle_string();
            assert_eq!(Permutation::parse_cycles(&s, 5).unwrap(), g);
        }
        assert_eq!(p("id", 3), Permutation::identity(3));
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let g = p("(1 2)", 3);
        let h = p("(2 3)", 3);
        // h sends 1 ↦ 1, then g sends 1 ↦ 2
        assert_eq!((&g * &h).apply(0), 1);
        assert_eq!((&g * &h).to_cycle_string(), "(1 2 3)");
    }

    #[test]
    fn codim_is_twice_age() {
        // fixed locus of g in S^n has complex dim 2|O(g)|, M has 2n
        for n in 1..=5 {
            for g in all_permutations(n) {
                let codim = 2 * n - 2 * g.orbits().len();
                let a = age(&g, &CaseTag::hilb());
                assert_eq!(a + age(&g.inverse(), &CaseTag::hilb()), codim);
            }
        }
    }

    #[test]
    fn age_is_class_function() {
        for n in 1..=5 {
            let all = all_permutations(n);
            for g in &all {
                for h in &all {
                    assert_eq!(age(g, &CaseTag::Kummer), age(&g.conjugate_by(h), &CaseTag::Kummer));
                }
            }
        }
    }

    #[test]
    fn cocycle_exhaustive_up_to_four() {
        for case in [CaseTag::hilb(), CaseTag::Kummer] {
            for n in 1..=4 {
                let all = all_permutations(n);
                for a in &all {
                    for b in &all {
                        let ab = a * b;
                        let e_ab = epsilon(a, b, &case).unwrap();
                        let twice = age(a, &case) as i64 + age(b, &case) as i64 - age(&ab, &case) as i64;
                        assert_eq!(twice, 2 * e_ab);
                        for c in &all {
                            let lhs = e_ab + epsilon(&ab, c, &case).unwrap();
                            let rhs = epsilon(a, &(b * c), &case).unwrap() + epsilon(b, c, &case).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}
