//! Independent computations used to validate the ring engine.
//!
//! Nothing here touches the algebra models or the star product: the only
//! shared code is the permutation combinatorics.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::combinatorics::{age, all_permutations, orbit_join, CaseTag, Permutation, SetPartition};
use crate::error::{Error, Result};
use crate::poincare::PoincarePolynomial;

fn commuting(g: &Permutation, h: &Permutation) -> bool {
    g * h == h * g
}

/// Orbifold Euler characteristic `(1/|G|) Σ_{gh = hg} χ(M^{<g,h>})`.
///
/// In the Hilbert case `M^{<g,h>} = S^l` for `l` the number of joint orbits,
/// with `χ = χ(S)^l`. In the Kummer case it is a disjoint union of
/// `(l−1)`-dimensional abelian varieties, so `χ = 0` unless the pair is
/// transitive, when it is the `(n+1)⁴` points `{x : (n+1)x = 0}`.
pub fn euler_commuting_pairs(case: &CaseTag, n: usize) -> i128 {
    let deg = case.group_degree(n);
    let group = all_permutations(deg);
    let mut sum: i128 = 0;
    for g in &group {
        for h in &group {
            if !commuting(g, h) {
                continue;
            }
            let l = orbit_join(g, h).expect("same degree").len() as u32;
            sum += match case {
                CaseTag::Hilb { betti } => {
                    let chi =
                        betti[0] as i128 - betti[1] as i128 + betti[2] as i128 - betti[3] as i128 + betti[4] as i128;
                    chi.pow(l)
                }
                CaseTag::Kummer if l == 1 => (deg as i128).pow(4),
                CaseTag::Kummer => 0,
            };
        }
    }
    let order = group.len() as i128;
    assert_eq!(sum % order, 0, "orbifold Euler characteristic is not an integer");
    sum / order
}

/// Polynomial in `t` with signed coefficients, truncated at `len` terms.
type SeriesCoeff = Vec<i128>;

fn poly_mul(a: &[i128], b: &[i128]) -> SeriesCoeff {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Multiplies a power series in `q` (coefficients are polynomials in `t`)
/// by `(1 + s·t^a q^k)^{±1}` raised to `e`, truncated at `q^{n_max}`.
fn series_factor(series: &mut [SeriesCoeff], k: usize, a: usize, sign: i128, inverse: bool, e: usize) {
    let n_max = series.len() - 1;
    let mut mono = vec![0i128; a + 1];
    for _ in 0..e {
        if inverse {
            // 1 / (1 − s t^a q^k) = Σ_m s^m t^{am} q^{km}, applied in place
            // from low to high q-degree
            for m in k..=n_max {
                let prev = series[m - k].clone();
                mono[a] = sign;
                let add = poly_mul(&prev, &mono);
                add_into(&mut series[m], &add);
            }
        } else {
            for m in (k..=n_max).rev() {
                let prev = series[m - k].clone();
                mono[a] = sign;
                let add = poly_mul(&prev, &mono);
                add_into(&mut series[m], &add);
            }
        }
    }
}

fn add_into(a: &mut SeriesCoeff, b: &[i128]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// Betti numbers of the Hilbert schemes `S^{[n]}` for `n = 0..=n_max` from
/// Göttsche's product formula
/// `Σ_n P(S^{[n]}) q^n = Π_{k≥1} Π_i (1 − (−1)^i t^{2k−2+i} q^k)^{−(−1)^i b_i}`.
pub fn gottsche_series(n_max: usize, betti: [usize; 5]) -> Result<Vec<PoincarePolynomial>> {
    if n_max > 6 {
        return Err(Error::InvalidArgument(format!("n_max = {} is above 6", n_max)));
    }
    let mut series: Vec<SeriesCoeff> = vec![Vec::new(); n_max + 1];
    series[0] = vec![1];
    for k in 1..=n_max {
        for (i, &b) in betti.iter().enumerate() {
            let a = 2 * k - 2 + i;
            if i % 2 == 0 {
                series_factor(&mut series, k, a, 1, true, b);
            } else {
                series_factor(&mut series, k, a, 1, false, b);
            }
        }
    }
    series
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let coeffs: Option<Vec<u64>> = c.iter().map(|&x| u64::try_from(x).ok()).collect();
            coeffs
                .map(PoincarePolynomial::new)
                .ok_or_else(|| Error::Invariant(format!("negative Betti number in the series at n = {}", n)))
        })
        .collect()
}

/// Invariant dimension in degree `k` as the trace average
/// `(1/|G|) Σ_g traces[g][k]`.
pub fn molien_dims(traces: &[Vec<i64>], k: usize) -> Result<u64> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument(String::from("no traces supplied")));
    }
    let sum: i128 = traces.iter().map(|t| t.get(k).copied().unwrap_or(0) as i128).sum();
    let order = traces.len() as i128;
    if sum % order != 0 || sum < 0 {
        return Err(Error::Invariant(format!("trace average {}/{} in degree {}", sum, order, k)));
    }
    Ok((sum / order) as u64)
}

/// Orbits of the centralizing element `h` on the orbit set of `g`, as the
/// cycle lengths of the induced permutation.
fn induced_cycle_lengths(g_orbits: &SetPartition, h: &Permutation) -> Vec<usize> {
    let of = g_orbits.block_of();
    let l = g_orbits.len();
    let image: Vec<usize> = g_orbits.blocks().iter().map(|b| of[h.apply(b[0])]).collect();
    let mut seen = vec![false; l];
    let mut out = Vec::new();
    for s in 0..l {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = image[x];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Graded trace of `h` on `H*(M^g)` for `h` centralizing `g`, from closed
/// forms.
///
/// `h` permutes the orbits of `g`. A cycle of length `r` of this
/// permutation acting on `H*(S)^{⊗r}` by the Koszul-signed cyclic shift has
/// graded trace `Σ_k b_k (−1)^{k(r−1)} t^{rk}`. In the Kummer case each
/// component has `H¹ = Q^{4l}/W` with `h` acting trivially on `W`, so the
/// trace of `Λ(H¹)` is `Π_r (1 − (−t)^r)⁴ / (1 + t)⁴`, and `h` fixes each of
/// the `d⁴` components.
pub fn sector_trace(case: &CaseTag, g: &Permutation, h: &Permutation) -> Vec<i64> {
    let orbits = g.orbits();
    let cycles = induced_cycle_lengths(&orbits, h);
    match case {
        CaseTag::Hilb { betti } => {
            let mut p: Vec<i128> = vec![1];
            for &r in &cycles {
                let mut f = vec![0i128; 4 * r + 1];
                for (k, &b) in betti.iter().enumerate() {
                    let s = if k * (r - 1) % 2 == 0 { 1 } else { -1 };
                    f[r * k] += s * b as i128;
                }
                p = poly_mul(&p, &f);
            }
            p.into_iter().map(|x| x as i64).collect()
        }
        CaseTag::Kummer => {
            let mut p: Vec<i128> = vec![1];
            for &r in &cycles {
                // 1 − (−t)^r
                let mut f = vec![0i128; r + 1];
                f[0] = 1;
                f[r] = if r % 2 == 0 { -1 } else { 1 };
                for _ in 0..4 {
                    p = poly_mul(&p, &f);
                }
            }
            for _ in 0..4 {
                p = divide_one_plus_t(&p);
            }
            let comps = orbits.gcd().pow(4) as i128;
            p.into_iter().map(|x| (x * comps) as i64).collect()
        }
    }
}

/// Exact division by `1 + t`.
fn divide_one_plus_t(p: &[i128]) -> Vec<i128> {
    let n = p.len();
    assert!(n >= 2, "not divisible by 1 + t");
    let mut q = vec![0i128; n - 1];
    let mut carry = 0i128;
    for k in 0..n - 1 {
        q[k] = p[k] - carry;
        carry = q[k];
    }
    assert_eq!(p[n - 1], carry, "not divisible by 1 + t");
    q
}

/// Graded traces of every `h ∈ G` on the whole orbifold ring:
/// `Σ_{g : hgh⁻¹ = g} t^{2·age(g)} tr(h | H*(M^g))`. Indexed by `h` in
/// lexicographic order.
pub fn orbifold_traces(case: &CaseTag, n: usize) -> Vec<Vec<i64>> {
    let group = all_permutations(case.group_degree(n));
    let top = match case {
        CaseTag::Hilb { .. } => 4 * n,
        CaseTag::Kummer => 4 * n,
    };
    group
        .iter()
        .map(|h| {
            let mut t = vec![0i64; top + 1];
            for g in &group {
                if !commuting(g, h) {
                    continue;
                }
                let shift = 2 * age(g, case);
                for (k, x) in sector_trace(case, g, h).into_iter().enumerate() {
                    t[k + shift] += x;
                }
            }
            t
        })
        .collect()
}

/// Invariant Poincaré polynomial of the orbifold ring by trace averaging.
pub fn molien_poincare(case: &CaseTag, n: usize) -> Result<PoincarePolynomial> {
    let traces = orbifold_traces(case, n);
    let top = traces[0].len();
    (0..top).map(|k| molien_dims(&traces, k)).collect::<Result<Vec<u64>>>().map(PoincarePolynomial::new)
}

/// Component data of one Kummer-case fixed locus, per coordinate of the
/// four-dimensional torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusCount {
    pub partition: SetPartition,
    pub gcd: usize,
    /// Solutions at the enumeration level, for one coordinate.
    pub solutions: usize,
    /// Cosets of the identity component, for one coordinate.
    pub components: usize,
    /// Whether `Σ (κ_b/d) y_b = t/d` gives a well-defined bijection from
    /// cosets onto `Z/d`.
    pub labels_bijective: bool,
}

impl LocusCount {
    pub fn total_components(&self) -> usize {
        self.components.pow(4)
    }

    pub fn total_solutions(&self) -> usize {
        self.solutions.pow(4)
    }
}

/// Where each component of the joint locus goes under inclusion into a
/// larger locus, per coordinate: `map[t] = t'` on labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    pub target: SetPartition,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub level: usize,
    /// The level exceeded the cap and nothing was enumerated.
    pub skipped: bool,
    /// Loci of `g`, `h`, `gh` and the orbit join, in that order.
    pub loci: Vec<LocusCount>,
    /// Inclusions of the join locus into the loci of `g`, `h` and `gh`.
    pub label_maps: Vec<LabelMap>,
}

pub const TORSION_LEVEL_CAP: usize = 12;

/// A basis of the integer kernel of the row `weights`, by unimodular column
/// reduction.
fn integer_kernel_basis(weights: &[i64]) -> Vec<Vec<i64>> {
    let l = weights.len();
    let mut v = weights.to_vec();
    let mut u: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| (i == j) as i64).collect()).collect();
    // columns of u are stored as u[col]
    for j in 1..l {
        let e = v[0].extended_gcd(&v[j]);
        let (a, b) = (v[0], v[j]);
        if b == 0 {
            continue;
        }
        let g = e.gcd;
        // new col0 = x·col0 + y·colj (weight g), new colj = (b/g)·col0 − (a/g)·colj (weight 0)
        let c0: Vec<i64> = (0..l).map(|i| e.x * u[0][i] + e.y * u[j][i]).collect();
        let cj: Vec<i64> = (0..l).map(|i| (b / g) * u[0][i] - (a / g) * u[j][i]).collect();
        u[0] = c0;
        u[j] = cj;
        v[0] = g;
        v[j] = 0;
    }
    u.into_iter().skip(1).collect()
}

struct Enumerated {
    count: LocusCount,
    /// Canonical coset representative and label of each solution.
    coset_of: BTreeMap<Vec<i64>, (Vec<i64>, usize)>,
}

fn enumerate_locus(p: &SetPartition, level: i64) -> Enumerated {
    let sizes: Vec<i64> = p.sizes().iter().map(|&s| s as i64).collect();
    let l = sizes.len();
    let d = p.gcd() as i64;
    let kernel = integer_kernel_basis(&sizes);
    // identity component at this level: (1/L)·kernel lattice
    let mut sub: Vec<Vec<i64>> = vec![vec![0; l]];
    for k in &kernel {
        let mut next = Vec::new();
        for base in &sub {
            for c in 0..level {
                next.push((0..l).map(|i| (base[i] + c * k[i]).rem_euclid(level)).collect::<Vec<i64>>());
            }
        }
        next.sort();
        next.dedup();
        sub = next;
    }
    let mut solutions = Vec::new();
    let mut z = vec![0i64; l];
    loop {
        let s: i64 = sizes.iter().zip(&z).map(|(a, b)| a * b).sum();
        if s % level == 0 {
            solutions.push(z.clone());
        }
        let mut i = 0;
        while i < l {
            z[i] += 1;
            if z[i] < level {
                break;
            }
            z[i] = 0;
            i += 1;
        }
        if i == l {
            break;
        }
    }
    let label = |z: &[i64]| -> usize {
        let s: i64 = sizes.iter().zip(z).map(|(a, b)| a * b).sum();
        ((s / level).rem_euclid(d)) as usize
    };
    let mut coset_of = BTreeMap::new();
    let mut reps: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut consistent = true;
    for z in &solutions {
        let rep =
            sub.iter().map(|k| (0..l).map(|i| (z[i] - k[i]).rem_euclid(level)).collect::<Vec<i64>>()).min().unwrap();
        let t = label(z);
        match reps.get(&rep) {
            Some(&t0) if t0 != t => consistent = false,
            _ => {
                reps.insert(rep.clone(), t);
            }
        }
        coset_of.insert(z.clone(), (rep, t));
    }
    let mut labels: Vec<usize> = reps.values().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let bijective = consistent && labels.len() == reps.len() && labels.len() == d as usize;
    Enumerated {
        count: LocusCount {
            partition: p.clone(),
            gcd: d as usize,
            solutions: solutions.len(),
            components: reps.len(),
            labels_bijective: bijective,
        },
        coset_of,
    }
}

/// Enumerates torsion points of the Kummer-case fixed loci of `g`, `h`,
/// `gh` and `<g,h>` at level `L = lcm` of their orbit gcds, splits them
/// into cosets of the identity component, and reads off the inclusion maps
/// on component labels.
pub fn torsion_bruteforce(n: usize, g: &Permutation, h: &Permutation) -> Result<TorsionReport> {
    if n > 3 {
        return Err(Error::InvalidArgument(format!("torsion enumeration supports n ≤ 3, got {}", n)));
    }
    if g.degree() != n + 1 || h.degree() != n + 1 {
        return Err(Error::DegreeMismatch(g.degree(), n + 1));
    }
    let gh = g * h;
    let join = orbit_join(g, h)?;
    let parts = [g.orbits(), h.orbits(), gh.orbits(), join];
    let level = parts.iter().fold(1usize, |a, p| a.lcm(&p.gcd()));
    if level > TORSION_LEVEL_CAP {
        return Ok(TorsionReport { level, skipped: true, loci: Vec::new(), label_maps: Vec::new() });
    }
    let enumerated: Vec<Enumerated> = parts.iter().map(|p| enumerate_locus(p, level as i64)).collect();
    let j = &enumerated[3];
    let jp = &parts[3];
    let mut label_maps = Vec::new();
    for (target, te) in parts.iter().zip(&enumerated).take(3) {
        let of = jp.block_of();
        let mut map = vec![usize::MAX; jp.gcd()];
        for (z, (_, t)) in &j.coset_of {
            // a point of the joint locus, read on the blocks of the target
            let y: Vec<i64> = target.blocks().iter().map(|b| z[of[b[0]]]).collect();
            let Some((_, t_target)) = te.coset_of.get(&y) else {
                return Err(Error::Invariant(format!("joint point {:?} is not on the locus of {}", z, target)));
            };
            if map[*t] == usize::MAX {
                map[*t] = *t_target;
            } else if map[*t] != *t_target {
                return Err(Error::Invariant(format!("component {} of {} splits under inclusion", t, jp)));
            }
        }
        label_maps.push(LabelMap { target: target.clone(), map });
    }
    Ok(TorsionReport { level, skipped: false, loci: enumerated.into_iter().map(|e| e.count).collect(), label_maps })
}
