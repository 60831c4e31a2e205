//! Single products of basis vectors named on the command line.
//!
//! An element spec is `SECTOR[@t1,t2,t3,t4]|BASIS`: the sector in cycle
//! notation (`id` for the identity), an optional torsion component label,
//! and a local basis monomial as printed by the engine, or `#k` for the
//! local index `k`.

use crate::error::AppError;
use orbring_core::linalg::{Rational, SparseVec};
use orbring_core::ring::{OrbifoldElement, OrbifoldRing};
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub a: usize,
    pub b: usize,
    pub g: usize,
    pub h: usize,
    pub gh: usize,
    pub epsilon: i64,
    /// `(−1)^ε` entered the product.
    pub sign_applied: bool,
    pub obstruction_rank: usize,
    pub terms: SparseVec,
}

pub fn multiply(ring: &OrbifoldRing, a: &str, b: &str) -> Result<Expansion, AppError> {
    let ia = ring.parse_basis_label(a)?;
    let ib = ring.parse_basis_label(b)?;
    let (g, h) = (ring.basis_ref(ia).sector, ring.basis_ref(ib).sector);
    let product = ring.star(&OrbifoldElement::basis(ia), &OrbifoldElement::basis(ib))?;
    let epsilon = ring.epsilon(g, h);
    Ok(Expansion {
        a: ia,
        b: ib,
        g,
        h,
        gh: ring.group_mul(g, h),
        epsilon,
        sign_applied: ring.dt() && epsilon % 2 != 0,
        obstruction_rank: ring.obstruction_rank(g, h),
        terms: product.into_terms(),
    })
}

fn coefficient(c: &Rational) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        c.to_fraction_string()
    }
}

pub fn render(ring: &OrbifoldRing, e: &Expansion) -> String {
    let el = |k: usize| ring.elements()[k].to_cycle_string();
    let mut s = String::new();
    let _ = writeln!(s, "{} ⋆ {}", ring.basis_label(e.a), ring.basis_label(e.b));
    let _ = writeln!(s, "sectors: g = {}, h = {}, gh = {}", el(e.g), el(e.h), el(e.gh));
    let sign = if !ring.dt() {
        String::from("no torsion sign (dt off)")
    } else if e.sign_applied {
        String::from("sign -1 applied")
    } else {
        String::from("sign +1")
    };
    let _ = writeln!(s, "ε = {}, {}", e.epsilon, sign);
    let _ = writeln!(s, "obstruction rank {}", e.obstruction_rank);
    if e.terms.is_empty() {
        let reason = if e.obstruction_rank > 0 {
            format!("obstruction rank {}", e.obstruction_rank)
        } else if ring.degree(e.a) + ring.degree(e.b) > ring.top_degree() {
            String::from("degree above the top degree")
        } else {
            String::from("the restricted classes multiply to zero on the common fixed locus")
        };
        let _ = writeln!(s, "= 0 ({reason})");
    } else {
        let parts: Vec<String> =
            e.terms.iter().map(|(k, c)| format!("{} [{}]", coefficient(c), ring.basis_label(*k))).collect();
        let _ = writeln!(s, "= {}", parts.join(" + "));
    }
    s
}
