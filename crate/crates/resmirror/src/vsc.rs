//! Virtual structure constants `L̃_n^{N,k,d}` of degree-`k` hypersurfaces in
//! `CP^{N-1}`: the recursive definition through `Poly_d` and the residue formula.

use crate::error::{Error, Result};
use crate::exact::{int, Exps, MultiPoly, RatFunc, Rational};
use crate::geometries::cpn;
use crate::residue::{expect_rational, residue_at, PoleSpec};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Comb type `0 = i_0 < i_1 < … < i_l = d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CombType {
    pub d: u32,
    /// Interior points `i_1 … i_{l-1}`.
    pub interior: Vec<u32>,
}

impl CombType {
    pub fn new(d: u32, interior: Vec<u32>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidComb("d must be positive".into()));
        }
        let ok = interior.windows(2).all(|w| w[0] < w[1]) && interior.iter().all(|&i| i >= 1 && i < d);
        if !ok {
            return Err(Error::InvalidComb(format!("{interior:?} is not increasing inside 1..{}", d - 1)));
        }
        Ok(CombType { d, interior })
    }

    /// Number of segments `l`.
    pub fn len(&self) -> usize {
        self.interior.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `i_0, …, i_l`.
    pub fn points(&self) -> Vec<u32> {
        let mut p = vec![0];
        p.extend(&self.interior);
        p.push(self.d);
        p
    }

    /// Segment lengths `i_j - i_{j-1}`.
    pub fn segments(&self) -> Vec<u32> {
        self.points().windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `δ = α + β + γ + Σ_{j<l} (m_{i_j} - 1) ε_j + m_{i_l} ε_l` for exponents
    /// `m = (m_{i_0}, …, m_{i_l})`.
    pub fn delta(&self, n_minus_k: i64, m: &[u32]) -> Vec<i64> {
        let pts = self.points();
        let l = self.len();
        let d = self.d as i64;
        (1..=l)
            .map(|j| {
                let prev = pts[j - 1] as i64;
                let tail: i64 = (j..l).map(|h| m[h] as i64 - 1).sum::<i64>() + m[l] as i64;
                (l as i64 - d) + (prev - (j as i64 - 1)) + prev * n_minus_k + tail
            })
            .collect()
    }

    /// Every comb type of `d`.
    pub fn all(d: u32) -> Vec<CombType> {
        let inner = d.saturating_sub(1);
        (0u64..1 << inner)
            .map(|mask| CombType { d, interior: (1..d).filter(|i| mask >> (i - 1) & 1 == 1).collect() })
            .collect()
    }
}

/// Drops trailing variables that no longer occur.
fn shrink(p: &MultiPoly, nv: usize) -> MultiPoly {
    MultiPoly::from_terms(nv, p.terms().map(|(e, c)| (Exps::from_slice(&e[..nv]), c.clone())))
}

/// `r_j = 2u_j - u_{j-1} - u_{j+1}` with `u` given by a variable map.
fn r_form(nv: usize, u: &dyn Fn(u32) -> usize, j: u32) -> MultiPoly {
    let two = MultiPoly::var(nv, u(j)).scale(&int(2));
    &(&two - &MultiPoly::var(nv, u(j - 1))) - &MultiPoly::var(nv, u(j + 1))
}

/// Nested residues where the contour of `vars[i]` encloses the roots of the factors
/// `tracked[i]`; those factors follow every earlier substitution.
fn tracked_residues(r: &RatFunc, vars: &[usize], tracked: &[Vec<MultiPoly>]) -> Result<RatFunc> {
    let Some((&v, rest)) = vars.split_first() else {
        return Ok(r.clone());
    };
    let mut locs: Vec<MultiPoly> = Vec::new();
    for f in &tracked[0] {
        let cs = f.coeffs_in(v);
        if cs.len() < 2 {
            continue;
        }
        let lead = (cs.len() == 2).then(|| cs[1].constant_value()).flatten();
        let a = lead.ok_or_else(|| Error::InvalidArgument("tracked factor not linear".into()))?;
        let loc = cs[0].scale(&(-a.recip()));
        if !locs.contains(&loc) {
            locs.push(loc);
        }
    }
    let mut acc = RatFunc::zero(r.nvars());
    for loc in locs {
        let res = residue_at(r, &PoleSpec::at(v, loc.clone()))?;
        if res.is_zero() {
            continue;
        }
        let later: Vec<Vec<MultiPoly>> =
            tracked[1..].iter().map(|fs| fs.iter().map(|f| f.substitute(v, &loc)).collect()).collect();
        acc = acc.add(&tracked_residues(&res, rest, &later)?);
    }
    Ok(acc)
}

/// Decomposition coefficient `f_{(i_1…i_k)}` in `z_0 … z_d` (variable `j` is `z_j`),
/// by its contour-integral formula.
pub fn decomposition_coefficient(d: u32, indices: &[u32]) -> Result<MultiPoly> {
    let comb = CombType::new(d, indices.to_vec())?;
    let nz = d as usize + 1;
    let nv = 2 * d as usize;
    // u_0 = z_0 and u_d = z_d after the two outer residues; u_j sits at d + j
    let u = |j: u32| if j == 0 || j == d { j as usize } else { d as usize + j as usize };
    let mut num = MultiPoly::one(nv);
    let mut den = Vec::new();
    let mut tracked = Vec::new();
    for j in 1..d {
        num = &num * &MultiPoly::var(nv, u(j));
        let r = r_form(nv, &u, j);
        den.push((r.clone(), 1));
        let mut t = vec![r];
        if indices.contains(&j) {
            let p = &MultiPoly::var(nv, u(j)) - &MultiPoly::var(nv, j as usize);
            den.push((p.clone(), 1));
            t.push(p);
        }
        tracked.push(t);
    }
    let vars: Vec<usize> = (1..d).map(u).collect();
    let r = tracked_residues(&RatFunc::new(num, den)?, &vars, &tracked)?.reduce();
    if !r.is_polynomial() {
        return Err(Error::InvalidArgument("decomposition coefficient is not polynomial".into()));
    }
    let scale: u64 = comb.segments().iter().map(|&s| s as u64).product();
    Ok(shrink(r.numerator(), nz).scale(&Rational::from_integer((scale as i64).into())))
}

/// `Poly_d` in `z_0 = x, z_1, …, z_{d-1}, z_d = y` through the decomposition coefficients.
pub fn poly_d(d: u32) -> Result<MultiPoly> {
    let nz = d as usize + 1;
    let mut acc = MultiPoly::zero(nz);
    for comb in CombType::all(d) {
        let f = decomposition_coefficient(d, &comb.interior)?;
        let seg: i64 = comb.segments().iter().map(|&s| s as i64).product();
        let zs = comb.interior.iter().fold(MultiPoly::one(nz), |a, &i| &a * &MultiPoly::var(nz, i as usize));
        acc = &acc + &(&zs * &f).scale(&(int(d as i64) / int(seg)));
    }
    Ok(acc)
}

/// `Poly_d` by direct residues of the defining contour integral; small `d` only.
pub fn poly_d_direct(d: u32) -> Result<MultiPoly> {
    let nz = d as usize + 1;
    let nv = 2 * d as usize;
    let u = |j: u32| if j == 0 || j == d { j as usize } else { d as usize + j as usize };
    let mut num = MultiPoly::one(nv);
    let mut den = Vec::new();
    let mut tracked = Vec::new();
    for j in 1..d {
        num = &num * &MultiPoly::var(nv, u(j)).pow(2);
        let r = r_form(nv, &u, j);
        let p = &MultiPoly::var(nv, u(j)) - &MultiPoly::var(nv, j as usize);
        den.push((r.clone(), 1));
        den.push((p.clone(), 1));
        tracked.push(vec![r, p]);
    }
    let vars: Vec<usize> = (1..d).map(u).collect();
    let r = tracked_residues(&RatFunc::new(num, den)?, &vars, &tracked)?.reduce();
    if !r.is_polynomial() {
        return Err(Error::InvalidArgument("Poly_d is not polynomial".into()));
    }
    Ok(shrink(r.numerator(), nz).scale(&int(d as i64)))
}

/// One term `coef · Π L̃^{N+1,k,deg}_{n+shift}` of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PhiTerm {
    #[serde(with = "crate::exact::serde_rational")]
    pub coef: Rational,
    /// `(degree, subscript shift)` per factor.
    pub factors: Vec<(u32, i64)>,
}

/// `φ(Poly_d)` read monomial by monomial through the comb-type vectors.
pub fn phi_terms(poly: &MultiPoly, d: u32, n_minus_k: i64) -> Result<Vec<PhiTerm>> {
    let mut out = Vec::new();
    for (e, c) in poly.terms() {
        let interior: Vec<u32> = (1..d).filter(|&i| e[i as usize] > 0).collect();
        let comb = CombType::new(d, interior)?;
        let m: Vec<u32> = comb.points().iter().map(|&i| e[i as usize] as u32).collect();
        let delta = comb.delta(n_minus_k, &m);
        let factors = comb.segments().into_iter().zip(delta).collect();
        out.push(PhiTerm { coef: c.clone(), factors });
    }
    Ok(normalize_terms(out))
}

/// The explicit recursion read off the decomposition coefficients; multiplied by `d`.
pub fn rexf_terms(d: u32, n_minus_k: i64) -> Result<Vec<PhiTerm>> {
    let mut out = Vec::new();
    for comb in CombType::all(d) {
        let f = decomposition_coefficient(d, &comb.interior)?;
        let pts = comb.points();
        let segs = comb.segments();
        let l = comb.len();
        let seg_prod: i64 = segs.iter().map(|&s| s as i64).product();
        for (e, c) in f.terms() {
            let m: Vec<i64> = pts.iter().map(|&i| e[i as usize] as i64).collect();
            let factors = (1..=l)
                .map(|j| {
                    let shift = pts[j - 1] as i64 * (n_minus_k + 1) + l as i64 - d as i64 - j as i64
                        + 1
                        + m[j..=l].iter().sum::<i64>();
                    (segs[j - 1], shift)
                })
                .collect();
            out.push(PhiTerm { coef: c * int(d as i64) / int(seg_prod), factors });
        }
    }
    Ok(normalize_terms(out))
}

fn normalize_terms(ts: Vec<PhiTerm>) -> Vec<PhiTerm> {
    let mut m: BTreeMap<Vec<(u32, i64)>, Rational> = BTreeMap::new();
    for t in ts {
        *m.entry(t.factors).or_insert_with(Rational::zero) += t.coef;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).map(|(factors, coef)| PhiTerm { coef, factors }).collect()
}

/// Memoized table of `L̃_n^{N,k,d}` for one `k`.
pub struct VscTable {
    k: u32,
    rows: HashMap<(u32, u32), Vec<Rational>>,
    polys: HashMap<u32, MultiPoly>,
}

impl VscTable {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        Ok(VscTable { k, rows: HashMap::new(), polys: HashMap::new() })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Largest admissible `n`, or `None` when the range is empty.
    pub fn top(&self, n: u32, d: u32) -> Option<u32> {
        let t = n as i64 - 1 - (n as i64 - self.k as i64) * d as i64;
        (t >= 0).then_some(t as u32)
    }

    /// `L̃_n^{N,k,d}`; zero outside `0 ≤ n ≤ N-1-(N-k)d`.
    pub fn value(&mut self, big_n: u32, d: u32, n: i64) -> Result<Rational> {
        if d == 0 {
            return Err(Error::InvalidDegree("degree 0".into()));
        }
        match self.top(big_n, d) {
            Some(t) if n >= 0 && n <= t as i64 => Ok(self.row(big_n, d)?[n as usize].clone()),
            _ => Ok(Rational::zero()),
        }
    }

    /// `L̃_0 … L̃_top` for `(N, d)`.
    pub fn row(&mut self, big_n: u32, d: u32) -> Result<Vec<Rational>> {
        if let Some(r) = self.rows.get(&(big_n, d)) {
            return Ok(r.clone());
        }
        let len = self.top(big_n, d).map_or(0, |t| t as usize + 1);
        let k = self.k;
        let row = if big_n >= 2 * k {
            if d == 1 {
                initial_row(k)
            } else {
                vec![Rational::zero(); len]
            }
        } else {
            if let std::collections::hash_map::Entry::Vacant(e) = self.polys.entry(d) {
                e.insert(poly_d(d)?);
            }
            let terms = phi_terms(&self.polys[&d], d, big_n as i64 - k as i64)?;
            let mut row = Vec::with_capacity(len);
            for n in 0..len as i64 {
                let mut acc = Rational::zero();
                for t in &terms {
                    let mut p = t.coef.clone();
                    for &(dd, s) in &t.factors {
                        if p.is_zero() {
                            break;
                        }
                        p *= self.value(big_n + 1, dd, n + s)?;
                    }
                    acc += p;
                }
                row.push(acc);
            }
            row
        };
        self.rows.insert((big_n, d), row.clone());
        Ok(row)
    }

    /// Snapshot of every computed row.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Vec<Rational>)> {
        self.rows.iter()
    }
}

/// Coefficients of `k·Π_{j=1}^{k-1} (j w + k - j)`.
fn initial_row(k: u32) -> Vec<Rational> {
    let mut c = vec![int(k as i64)];
    for j in 1..k as i64 {
        let mut next = vec![Rational::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i] += a * int(k as i64 - j);
            next[i + 1] += a * int(j);
        }
        c = next;
    }
    c
}

/// `L̃_n^{N,k,d}` by the recursion.
pub fn vsc_recursive(big_n: u32, k: u32, d: u32, n: i64) -> Result<Rational> {
    VscTable::new(k)?.value(big_n, d, n)
}

/// `L̃_n^{N,k,d} = (d/k) · (partition-sum residue integral)` with end exponents
/// `N-2-n` and `n-1+(N-k)d`.
pub fn vsc_residue(big_n: u32, k: u32, d: u32, n: i64) -> Result<Rational> {
    if big_n < 2 || k == 0 || d == 0 {
        return Err(Error::InvalidArgument(format!("N={big_n}, k={k}, d={d}")));
    }
    let a = big_n as i64 - 2 - n;
    let b = n - 1 + (big_n as i64 - k as i64) * d as i64;
    Ok(cpn::residue_integral(big_n, k, d, a, b)? * int(d as i64) / int(k as i64))
}

/// The single-chain contour integral `T_n^{N,k,d}` whose interior contours enclose
/// both `0` and the midpoint `(z_{j-1}+z_{j+1})/2`; equals `L̃_n^{N,k,d}/d`.
pub fn lemma1_contour(big_n: u32, k: u32, d: u32, n: i64) -> Result<Rational> {
    let nv = d as usize + 1;
    let a = big_n as i64 - 2 - n - big_n as i64;
    let b = n - 1 + (big_n as i64 - k as i64) * d as i64 - big_n as i64;
    let z = |j: usize| MultiPoly::var(nv, j);
    let mut num = MultiPoly::one(nv);
    let mut den: Vec<(MultiPoly, u32)> = Vec::new();
    for (v, e) in [(0usize, a), (d as usize, b)] {
        if e >= 0 {
            num = &num * &z(v).pow(e as u32);
        } else {
            den.push((z(v), (-e) as u32));
        }
    }
    for j in 1..=d as usize {
        num = &num * &cpn::e_block(nv, k, 1, j - 1, j);
    }
    let rs: Vec<MultiPoly> = (1..d as usize).map(|j| &(&z(j).scale(&int(2)) - &z(j - 1)) - &z(j + 1)).collect();
    for (j, r) in (1..d as usize).zip(&rs) {
        den.push((z(j), big_n + 1));
        den.push((r.clone(), 1));
    }
    let base = RatFunc::new(num, den)?.scale(&(int(k as i64).pow(1 - d as i32)));
    // each interior contour encloses 0 and the midpoint root of its own r_j
    let vars: Vec<usize> = (1..d as usize).chain([0, d as usize]).collect();
    let mut tracked: Vec<Vec<MultiPoly>> = (1..d as usize).zip(rs).map(|(j, r)| vec![z(j), r]).collect();
    tracked.push(vec![z(0)]);
    tracked.push(vec![z(d as usize)]);
    let total = expect_rational(&tracked_residues(&base, &vars, &tracked)?)?;
    Ok(total / int(k as i64))
}

/// One row of a Theorem-1 comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Row {
    pub n: i64,
    #[serde(with = "crate::exact::serde_rational")]
    pub recursive: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub residue: Rational,
}

/// Comparison of the recursion with the residue formula for every admissible `n`.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub n_big: u32,
    pub k: u32,
    pub d: u32,
    pub rows: Vec<Theorem1Row>,
}

impl Theorem1Report {
    pub fn agrees(&self) -> bool {
        self.rows.iter().all(|r| r.recursive == r.residue)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Theorem1Row> {
        self.rows.iter().filter(|r| r.recursive != r.residue)
    }
}

pub fn check_theorem1(big_n: u32, k: u32, d: u32) -> Result<Theorem1Report> {
    let mut table = VscTable::new(k)?;
    let mut rows = Vec::new();
    if let Some(top) = table.top(big_n, d) {
        for n in 0..=top as i64 {
            rows.push(Theorem1Row {
                n,
                recursive: table.value(big_n, d, n)?,
                residue: vsc_residue(big_n, k, d, n)?,
            });
        }
    }
    Ok(Theorem1Report { n_big: big_n, k, d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn z(nv: usize, j: usize) -> MultiPoly {
        MultiPoly::var(nv, j)
    }

    #[test]
    fn comb_types() {
        assert_eq!(CombType::all(3).len(), 4);
        assert!(matches!(CombType::new(3, vec![2, 1]), Err(Error::InvalidComb(_))));
        assert!(matches!(CombType::new(3, vec![3]), Err(Error::InvalidComb(_))));
        assert!(matches!(decomposition_coefficient(2, &[0]), Err(Error::InvalidComb(_))));
        let c = CombType::new(5, vec![2, 3]).unwrap();
        assert_eq!(c.points(), vec![0, 2, 3, 5]);
        assert_eq!(c.segments(), vec![2, 1, 2]);
    }

    #[test]
    fn degree_two_coefficients() {
        let f0 = decomposition_coefficient(2, &[]).unwrap();
        let half = rat(1, 2);
        assert_eq!(f0, &z(3, 0).scale(&half) + &z(3, 2).scale(&half));
        assert_eq!(decomposition_coefficient(2, &[1]).unwrap(), MultiPoly::constant(3, half));
        assert_eq!(decomposition_coefficient(1, &[]).unwrap(), MultiPoly::one(2));
    }

    /// Independent oracle: `Σ f_I Π_{i∈I} r_i` reproduces `z_1 ⋯ z_{d-1}`.
    #[test]
    fn decomposition_identity() {
        for d in 1..=5u32 {
            let nv = d as usize + 1;
            let mut acc = MultiPoly::zero(nv);
            for comb in CombType::all(d) {
                let f = decomposition_coefficient(d, &comb.interior).unwrap();
                assert_eq!(f.homogeneous_degree().unwrap_or(0), d - 1 - comb.interior.len() as u32);
                let rs = comb.interior.iter().fold(MultiPoly::one(nv), |a, &i| {
                    let i = i as usize;
                    &a * &(&(&z(nv, i).scale(&int(2)) - &z(nv, i - 1)) - &z(nv, i + 1))
                });
                acc = &acc + &(&f * &rs);
            }
            let target = (1..d as usize).fold(MultiPoly::one(nv), |a, i| &a * &z(nv, i));
            assert_eq!(acc, target, "d={d}");
        }
    }

    #[test]
    fn poly_small_degrees() {
        assert_eq!(poly_d(1).unwrap(), MultiPoly::one(2));
        let p2 = &(&z(3, 0) + &z(3, 2)).scale(&rat(1, 2)) + &z(3, 1);
        assert_eq!(poly_d(2).unwrap(), p2);
        for d in 1..=3 {
            assert_eq!(poly_d(d).unwrap(), poly_d_direct(d).unwrap(), "d={d}");
        }
    }

    #[test]
    fn phi_matches_explicit_recursion() {
        for d in 1..=4u32 {
            for nk in [-2i64, 0, 3] {
                let p = poly_d(d).unwrap();
                let a = phi_terms(&p, d, nk).unwrap();
                assert_eq!(a, rexf_terms(d, nk).unwrap(), "d={d}");
                for t in &a {
                    assert_eq!(t.factors.iter().map(|f| f.0).sum::<u32>(), d);
                }
            }
        }
    }

    #[test]
    fn initial_condition() {
        assert_eq!(vsc_recursive(10, 5, 1, 0).unwrap(), int(120));
        let mut t = VscTable::new(4).unwrap();
        for n in 0..8 {
            assert!(t.value(8, 2, n).unwrap().is_zero());
        }
        assert!(vsc_recursive(5, 5, 1, 5).unwrap().is_zero());
    }

    #[test]
    fn quintic_values() {
        assert_eq!(vsc_recursive(5, 5, 1, 1).unwrap(), int(770));
        assert_eq!(vsc_residue(5, 5, 1, 1).unwrap(), int(770));
        assert_eq!(vsc_residue(7, 5, 1, 4).unwrap(), int(120));
        assert_eq!(vsc_residue(5, 5, 2, 1).unwrap(), int(1435650));
        assert_eq!(vsc_recursive(5, 5, 2, 1).unwrap(), int(1435650));
    }

    #[test]
    fn theorem1_small() {
        for (n, k, d) in [(5, 5, 2), (6, 4, 2), (4, 3, 3)] {
            let r = check_theorem1(n, k, d).unwrap();
            assert!(!r.rows.is_empty());
            assert!(r.agrees(), "{:?}", r.mismatches().collect::<Vec<_>>());
        }
    }

    #[test]
    fn lemma1_two_contours() {
        for (n_big, k) in [(5u32, 5u32), (6, 4), (7, 5)] {
            let mut t = VscTable::new(k).unwrap();
            for n in 0..=t.top(n_big, 2).unwrap() as i64 {
                let lhs = lemma1_contour(n_big, k, 2, n).unwrap();
                assert_eq!(lhs * int(2), t.value(n_big, 2, n).unwrap(), "N={n_big} k={k} n={n}");
            }
        }
    }
}
