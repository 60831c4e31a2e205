//! Seeded draws of basis vectors.
//!
//! Uniform draws from the global basis land almost entirely in the middle
//! degrees of the identity sector, where triple products overflow the top
//! degree and vanish. Drawing a sector, a component, then a degree, then a
//! vector of that degree reaches the twisted sectors and low degrees.

use orbring_core::linalg::GradedAlgebra;
use orbring_core::ring::{BasisRef, OrbifoldRing};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct BasisSampler<'a> {
    ring: &'a OrbifoldRing,
    /// Per sector, the nonempty lists of local basis vectors of each degree.
    by_degree: Vec<Vec<Vec<usize>>>,
}

impl<'a> BasisSampler<'a> {
    pub fn new(ring: &'a OrbifoldRing) -> Self {
        let by_degree = (0..ring.group_order())
            .map(|g| {
                let a = &ring.locus(g).algebra;
                (0..=a.top_degree()).map(|k| a.basis_of_degree(k)).filter(|v| !v.is_empty()).collect()
            })
            .collect();
        BasisSampler { ring, by_degree }
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let g = rng.gen_range(0..self.ring.group_order());
        let component = rng.gen_range(0..self.ring.locus(g).component_count());
        let degrees = &self.by_degree[g];
        let bucket = &degrees[rng.gen_range(0..degrees.len())];
        let local = bucket[rng.gen_range(0..bucket.len())];
        self.ring.global_index(BasisRef { sector: g, component, local })
    }

    /// `count` triples whose degrees add up to at most the top degree.
    pub fn triples<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<(usize, usize, usize)> {
        let top = self.ring.top_degree();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let (a, b, c) = (self.draw(rng), self.draw(rng), self.draw(rng));
            if self.ring.degree(a) + self.ring.degree(b) + self.ring.degree(c) <= top {
                out.push((a, b, c));
            }
        }
        out
    }

    /// `count` pairs whose degrees add up to at most the top degree.
    pub fn pairs<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<(usize, usize)> {
        let top = self.ring.top_degree();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let (a, b) = (self.draw(rng), self.draw(rng));
            if self.ring.degree(a) + self.ring.degree(b) <= top {
                out.push((a, b));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbring_core::combinatorics::CaseTag;
    use orbring_core::ring::{build_ring, ResourceBounds};

    #[test]
    fn draws_are_seeded_and_reach_twisted_sectors() {
        let ring = build_ring(&CaseTag::hilb(), 3, false, &ResourceBounds::default()).unwrap();
        let s = BasisSampler::new(&ring);
        let a = s.triples(&mut rng(7), 200);
        assert_eq!(a, s.triples(&mut rng(7), 200));
        assert_ne!(a, s.triples(&mut rng(8), 200));
        assert!(a.iter().any(|&(x, _, _)| ring.basis_ref(x).sector != 0));
        assert!(a.iter().all(|&(x, y, z)| ring.degree(x) + ring.degree(y) + ring.degree(z) <= ring.top_degree()));
    }
}
