//! Graded power series in `q_1 = e^{x_1}`, `q_2 = e^{x_2}` with an affine log part;
//! mirror maps, their inversion, mirror transforms, the Picard–Fuchs basis, the
//! generalized mirror transform up to degree 3 and j-function coefficients.

use crate::error::{Error, Result};
use crate::exact::{factorial, fmt_rational, int, parse_rational, rat, Rational};
use crate::geometries::{Degree, Geometry, Insertion};
use crate::partitions::{ordered_partitions, BiDegree};
use crate::vsc::VscTable;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Which bi-degrees survive truncation at `D`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// `d_a + d_b ≤ D`.
    #[default]
    Total,
    /// `max(d_a, d_b) ≤ D`.
    Box,
}

/// `a_1 x_1 + a_2 x_2 + c + Σ_d c_d e^{d_a x_1 + d_b x_2}` truncated at degree `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    /// Coefficients of `x_1`, `x_2` and the constant.
    pub affine: [Rational; 3],
    pub terms: BTreeMap<BiDegree, Rational>,
    pub trunc: u32,
    pub mode: Truncation,
}

impl GradedSeries {
    pub fn zero(trunc: u32) -> Self {
        GradedSeries {
            affine: [Rational::zero(), Rational::zero(), Rational::zero()],
            terms: BTreeMap::new(),
            trunc,
            mode: Truncation::Total,
        }
    }

    pub fn with_mode(mut self, mode: Truncation) -> Self {
        self.mode = mode;
        let t = self.trunc;
        self.terms.retain(|d, _| keeps(mode, t, d));
        self
    }

    pub fn constant(c: Rational, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.affine[2] = c;
        s
    }

    /// The coordinate `x_i` (`i` = 0 or 1).
    pub fn coordinate(i: usize, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.affine[i] = Rational::one();
        s
    }

    /// `c·e^{d·x}`.
    pub fn monomial(d: BiDegree, c: Rational, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.set(d, c);
        s
    }

    fn empty_like(&self) -> Self {
        Self::zero(self.trunc).with_mode(self.mode)
    }

    pub fn keeps(&self, d: &BiDegree) -> bool {
        keeps(self.mode, self.trunc, d)
    }

    /// Coefficient of `e^{d·x}` (zero for `d = 0`; see `affine[2]`).
    pub fn coeff(&self, d: BiDegree) -> Rational {
        if d.is_zero() {
            return self.affine[2].clone();
        }
        self.terms.get(&d).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets a coefficient; out-of-range degrees are dropped.
    pub fn set(&mut self, d: BiDegree, c: Rational) {
        if d.is_zero() {
            self.affine[2] = c;
        } else if !self.keeps(&d) || c.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, c);
        }
    }

    fn add_to(&mut self, d: BiDegree, c: &Rational) {
        let v = self.coeff(d) + c;
        self.set(d, v);
    }

    /// True when the `x_1`, `x_2` parts vanish.
    pub fn is_exponential(&self) -> bool {
        self.affine[0].is_zero() && self.affine[1].is_zero()
    }

    /// True when the whole affine part vanishes.
    pub fn is_pure(&self) -> bool {
        self.is_exponential() && self.affine[2].is_zero()
    }

    /// The series without its affine part.
    pub fn quantum(&self) -> Self {
        let mut s = self.clone();
        s.affine = [Rational::zero(), Rational::zero(), Rational::zero()];
        s
    }

    fn join(&self, o: &Self) -> Self {
        let mut s = self.empty_like();
        s.trunc = self.trunc.min(o.trunc);
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.join(o);
        for i in 0..3 {
            s.affine[i] = &self.affine[i] + &o.affine[i];
        }
        for (d, c) in self.terms.iter().chain(&o.terms) {
            s.add_to(*d, c);
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = self.empty_like();
        for i in 0..3 {
            s.affine[i] = &self.affine[i] * c;
        }
        for (d, v) in &self.terms {
            s.set(*d, v * c);
        }
        s
    }

    /// Product; at most one factor may carry an `x` part, and then the other must be
    /// constant.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if !self.is_exponential() && !o.is_exponential() {
            return Err(Error::InvalidArgument("product of two series with log parts".into()));
        }
        if !self.is_exponential() {
            return o.mul(self);
        }
        if !o.is_exponential() {
            if !self.terms.is_empty() {
                return Err(Error::InvalidArgument("log part times a q-series".into()));
            }
            return Ok(o.scale(&self.affine[2]));
        }
        let mut s = self.join(o);
        let a: Vec<(BiDegree, Rational)> = self.exp_terms();
        let b: Vec<(BiDegree, Rational)> = o.exp_terms();
        for (da, ca) in &a {
            for (db, cb) in &b {
                let d = BiDegree::new(da.da + db.da, da.db + db.db);
                if s.keeps(&d) {
                    s.add_to(d, &(ca * cb));
                }
            }
        }
        Ok(s)
    }

    /// Terms including the constant as degree zero.
    fn exp_terms(&self) -> Vec<(BiDegree, Rational)> {
        let mut v = Vec::with_capacity(self.terms.len() + 1);
        if !self.affine[2].is_zero() {
            v.push((BiDegree::new(0, 0), self.affine[2].clone()));
        }
        v.extend(self.terms.iter().map(|(d, c)| (*d, c.clone())));
        v
    }

    /// Multiplies by `e^{d·x}`; the series must have no `x` part.
    pub fn shift(&self, d: BiDegree) -> Result<Self> {
        self.mul(&Self::monomial(d, Rational::one(), self.trunc))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::constant(Rational::one(), self.trunc).with_mode(self.mode);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `exp(f)` for a pure series.
    pub fn exp(&self) -> Result<Self> {
        if !self.is_pure() {
            return Err(Error::InvalidExp);
        }
        let mut acc = Self::constant(Rational::one(), self.trunc).with_mode(self.mode);
        let mut term = acc.clone();
        // each power of a pure series raises the minimal degree by one
        for m in 1..=self.max_degree() {
            term = term.mul(self)?.scale(&rat(1, m as i64));
            if term.terms.is_empty() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `log(1 + f)` for a pure series.
    pub fn log1p(&self) -> Result<Self> {
        if !self.is_pure() {
            return Err(Error::InvalidExp);
        }
        let mut acc = self.empty_like();
        let mut p = Self::constant(Rational::one(), self.trunc).with_mode(self.mode);
        for m in 1..=self.max_degree() {
            p = p.mul(self)?;
            let sign = if m % 2 == 1 { rat(1, m as i64) } else { rat(-1, m as i64) };
            acc = acc.add(&p.scale(&sign));
        }
        Ok(acc)
    }

    /// `1/f` for an exponential series with nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        if !self.is_exponential() || self.affine[2].is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.affine[2].recip();
        // 1/(c0 (1 + g)) = c0^{-1} Σ (-g)^m
        let g = self.quantum().scale(&c);
        let mut acc = Self::constant(Rational::one(), self.trunc).with_mode(self.mode);
        let mut p = acc.clone();
        for _ in 1..=self.max_degree() {
            p = p.mul(&g.neg())?;
            acc = acc.add(&p);
        }
        Ok(acc.scale(&c))
    }

    fn max_degree(&self) -> u32 {
        match self.mode {
            Truncation::Total => self.trunc,
            Truncation::Box => 2 * self.trunc,
        }
    }

    /// `F(x(t))` where `x_i(t) = t_i + g_i(t)` with pure `g_i`.
    pub fn compose(&self, x: &[GradedSeries]) -> Result<Self> {
        let mut gs = Vec::new();
        for (i, xi) in x.iter().enumerate() {
            let mut expect = [Rational::zero(), Rational::zero(), Rational::zero()];
            expect[i] = Rational::one();
            if xi.affine != expect {
                return Err(Error::InvalidArgument("substitution is not tangent to the identity".into()));
            }
            gs.push(xi.quantum());
        }
        let trunc = self.trunc.min(x.iter().map(|s| s.trunc).min().unwrap_or(self.trunc));
        let mut out = Self::zero(trunc).with_mode(self.mode);
        out.affine[2] = self.affine[2].clone();
        for (i, g) in gs.iter().enumerate() {
            if !self.affine[i].is_zero() {
                out = out.add(&Self::coordinate(i, trunc).add(g).scale(&self.affine[i]));
            }
        }
        if self.terms.is_empty() {
            return Ok(out);
        }
        let e: Vec<GradedSeries> = gs.iter().map(|g| g.exp()).collect::<Result<_>>()?;
        let mut pows: Vec<Vec<GradedSeries>> =
            e.iter().map(|_| vec![Self::constant(Rational::one(), trunc).with_mode(self.mode)]).collect();
        for (d, c) in &self.terms {
            let need = [d.da, d.db];
            let mut f = Self::monomial(*d, c.clone(), trunc).with_mode(self.mode);
            for (i, ei) in e.iter().enumerate() {
                while pows[i].len() <= need[i] as usize {
                    let next = pows[i].last().unwrap().mul(ei)?;
                    pows[i].push(next);
                }
                if need[i] > 0 {
                    f = f.mul(&pows[i][need[i] as usize])?;
                }
            }
            out = out.add(&f);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            affine: AffineJson {
                x1: fmt_rational(&self.affine[0]),
                x2: fmt_rational(&self.affine[1]),
                constant: fmt_rational(&self.affine[2]),
            },
            terms: self.terms.iter().map(|(d, c)| TermJson { d: [d.da, d.db], coef: fmt_rational(c) }).collect(),
            trunc: self.trunc,
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let mut s = Self::zero(j.trunc);
        s.affine = [parse_rational(&j.affine.x1)?, parse_rational(&j.affine.x2)?, parse_rational(&j.affine.constant)?];
        for t in &j.terms {
            s.set(BiDegree::new(t.d[0], t.d[1]), parse_rational(&t.coef)?);
        }
        Ok(s)
    }

    /// Human-readable form; `single` prints `x`, `q^d` for one-variable series.
    pub fn render(&self, single: bool) -> String {
        let mut parts: Vec<(Rational, String)> = Vec::new();
        let names: [&str; 2] = if single { ["x", "x2"] } else { ["x1", "x2"] };
        for (c, name) in self.affine.iter().zip(names) {
            if !c.is_zero() {
                parts.push((c.clone(), name.to_string()));
            }
        }
        if !self.affine[2].is_zero() {
            parts.push((self.affine[2].clone(), String::new()));
        }
        let mut keys: Vec<&BiDegree> = self.terms.keys().collect();
        keys.sort_by_key(|d| (d.total(), std::cmp::Reverse(d.da)));
        for d in keys {
            let m = if single {
                qpow("q", d.da)
            } else {
                [qpow("q1", d.da), qpow("q2", d.db)].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*")
            };
            parts.push((self.terms[d].clone(), m));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (c, m)) in parts.iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            let body = if m.is_empty() {
                fmt_rational(&a)
            } else if a.is_one() {
                m.clone()
            } else {
                format!("{}*{m}", fmt_rational(&a))
            };
            match (i, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

fn qpow(q: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => q.to_string(),
        _ => format!("{q}^{e}"),
    }
}

fn keeps(mode: Truncation, trunc: u32, d: &BiDegree) -> bool {
    match mode {
        Truncation::Total => d.total() <= trunc,
        Truncation::Box => d.da.max(d.db) <= trunc,
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub affine: AffineJson,
    pub terms: Vec<TermJson>,
    pub trunc: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineJson {
    pub x1: String,
    pub x2: String,
    #[serde(rename = "const")]
    pub constant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub d: [u32; 2],
    pub coef: String,
}

/// Source of two-point numbers (direct evaluation or a cache in front of it).
pub trait TwoPointSource: Sync {
    fn two_point(&self, g: &Geometry, d: &Degree, a: &Insertion, b: &Insertion) -> Result<Rational>;
}

/// Evaluates every request from scratch.
pub struct Direct;

impl TwoPointSource for Direct {
    fn two_point(&self, g: &Geometry, d: &Degree, a: &Insertion, b: &Insertion) -> Result<Rational> {
        g.two_point(d, a, b)
    }
}

/// Degrees up to `trunc`, as bi-degrees (`(d, 0)` for one-class targets).
pub fn degrees(g: &Geometry, trunc: u32, mode: Truncation) -> Vec<(BiDegree, Degree)> {
    if g.is_bi() {
        let mut v = Vec::new();
        for da in 0..=trunc {
            for db in 0..=trunc {
                let d = BiDegree::new(da, db);
                if !d.is_zero() && keeps(mode, trunc, &d) {
                    v.push((d, Degree::Bi(d)));
                }
            }
        }
        v
    } else {
        (1..=trunc).map(|d| (BiDegree::new(d, 0), Degree::Single(d))).collect()
    }
}

/// Divisor classes `z, w` (or `h`).
pub fn divisors(g: &Geometry) -> Vec<Insertion> {
    if g.is_bi() {
        vec![Insertion::new(1, 0), Insertion::new(0, 1)]
    } else {
        vec![Insertion::new(1, 0)]
    }
}

/// `C_{abz} x_1 + C_{abw} x_2 + Σ_d w(O_a O_b)_{0,d} e^{d·x}`. Insertions outside the
/// two-point range (the virtual `z^2` of `kf0`) carry no quantum part.
pub fn build_generating_function(
    g: &Geometry,
    a: &Insertion,
    b: &Insertion,
    trunc: u32,
    mode: Truncation,
    src: &dyn TwoPointSource,
) -> Result<GradedSeries> {
    if trunc == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let mut s = GradedSeries::zero(trunc).with_mode(mode);
    for (i, h) in divisors(g).iter().enumerate() {
        s.affine[i] = g.classical_triple(a, b, h)?;
    }
    if g.validate_insertion(a).is_err() || g.validate_insertion(b).is_err() {
        if g.basis().contains(a) && g.basis().contains(b) {
            return Ok(s);
        }
        g.validate_insertion(a)?;
        g.validate_insertion(b)?;
    }
    let ds = degrees(g, trunc, mode);
    let vals: Vec<Rational> = ds.par_iter().map(|(_, d)| src.two_point(g, d, a, b)).collect::<Result<_>>()?;
    for ((bd, _), v) in ds.into_iter().zip(vals) {
        s.set(bd, v);
    }
    Ok(s)
}

/// A mirror map `t(x)` with its inverse `x(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorMap {
    pub t: Vec<GradedSeries>,
    pub x: Vec<GradedSeries>,
}

impl MirrorMap {
    /// Wraps `t(x)` and computes the inverse.
    pub fn new(t: Vec<GradedSeries>) -> Result<Self> {
        let x = invert(&t)?;
        Ok(MirrorMap { t, x })
    }

    pub fn is_single(&self) -> bool {
        self.t.len() == 1
    }

    /// `t(x(t))`, which must equal the identity.
    pub fn round_trip_t(&self) -> Result<Vec<GradedSeries>> {
        self.t.iter().map(|ti| ti.compose(&self.x)).collect()
    }

    /// `x(t(x))`, which must equal the identity.
    pub fn round_trip_x(&self) -> Result<Vec<GradedSeries>> {
        self.x.iter().map(|xi| xi.compose(&self.t)).collect()
    }
}

/// Inverse of a tangent-to-identity map by `x ← t - f(x)`, `f = t(x) - x`.
pub fn invert(t: &[GradedSeries]) -> Result<Vec<GradedSeries>> {
    let n = t.len();
    let trunc = t.iter().map(|s| s.trunc).min().unwrap_or(0);
    let mode = t.first().map(|s| s.mode).unwrap_or_default();
    let id: Vec<GradedSeries> = (0..n).map(|i| GradedSeries::coordinate(i, trunc).with_mode(mode)).collect();
    let mut f = Vec::with_capacity(n);
    for (i, ti) in t.iter().enumerate() {
        let q = ti.sub(&id[i]);
        if !q.is_pure() {
            return Err(Error::InvalidArgument("mirror map is not tangent to the identity".into()));
        }
        f.push(q);
    }
    let mut x = id.clone();
    for _ in 0..=trunc + 1 {
        let next: Vec<GradedSeries> =
            (0..n).map(|i| Ok(id[i].sub(&f[i].compose(&x)?))).collect::<Result<_>>()?;
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// `t_i = η^{H_i α} w(O_α O_1)_0(x)` over the basis.
pub fn mirror_map(g: &Geometry, trunc: u32, mode: Truncation, src: &dyn TwoPointSource) -> Result<MirrorMap> {
    let basis = g.basis();
    let inv = g.inverse_metric()?;
    let mut t = Vec::new();
    for h in divisors(g) {
        let hi = basis.iter().position(|b| *b == h).ok_or(Error::SingularMetric)?;
        let mut ti = GradedSeries::zero(trunc).with_mode(mode);
        for (ai, a) in basis.iter().enumerate() {
            if inv[hi][ai].is_zero() {
                continue;
            }
            let w = build_generating_function(g, a, &Insertion::ONE, trunc, mode, src)?;
            ti = ti.add(&w.scale(&inv[hi][ai]));
        }
        t.push(ti);
    }
    MirrorMap::new(t)
}

/// `F(x(t))`.
pub fn transform(f: &GradedSeries, m: &MirrorMap) -> Result<GradedSeries> {
    f.compose(&m.x)
}

/// Solution `Σ_m x^m c_m(q)` of the Picard–Fuchs equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    /// `c_m` is the coefficient of `x^m`.
    pub coeffs: Vec<GradedSeries>,
}

/// `u_j` for the degree-`k` Calabi–Yau hypersurface in `CP^{k-1}`, to order `q^D`.
pub fn picard_fuchs_basis(k: u32, j: u32, trunc: u32) -> Result<LogSeries> {
    if k < 2 || j + 2 > k.max(2) {
        return Err(Error::InvalidArgument(format!("need k ≥ 2 and j ≤ k-2 (k={k}, j={j})")));
    }
    let len = j as usize + 1;
    let mul = |a: &[Rational], b: &[Rational]| {
        let mut c = vec![Rational::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (l, y) in b.iter().enumerate().take(len - i) {
                c[i + l] += x * y;
            }
        }
        c
    };
    // S(z) = Σ_d q^d (kd)!/(d!)^k Π_{i≤kd}(1 + k z/i) Π_{i≤d}(1 + z/i)^{-k}, z nilpotent
    let mut per_degree: Vec<Vec<Rational>> = Vec::new();
    for d in 0..=trunc as u64 {
        let mut p = vec![Rational::zero(); len];
        p[0] = factorial(k as u64 * d) / factorial(d).pow(k as i32);
        for i in 1..=k as u64 * d {
            let mut f = vec![Rational::zero(); len];
            f[0] = Rational::one();
            if len > 1 {
                f[1] = rat(k as i64, i as i64);
            }
            p = mul(&p, &f);
        }
        for i in 1..=d {
            let mut inv = vec![Rational::zero(); len];
            for (m, c) in inv.iter_mut().enumerate() {
                *c = rat(-1, i as i64).pow(m as i32);
            }
            for _ in 0..k {
                p = mul(&p, &inv);
            }
        }
        per_degree.push(p);
    }
    let mut coeffs = Vec::new();
    for m in 0..=j as usize {
        let mut s = GradedSeries::zero(trunc);
        for (d, p) in per_degree.iter().enumerate() {
            s.set(BiDegree::new(d as u32, 0), &p[j as usize - m] / factorial(m as u64));
        }
        coeffs.push(s);
    }
    Ok(LogSeries { coeffs })
}

/// The mirror map `u_1/u_0` as `x + Σ c_d q^d`.
pub fn picard_fuchs_mirror_map(k: u32, trunc: u32) -> Result<GradedSeries> {
    let u0 = picard_fuchs_basis(k, 0, trunc)?;
    let u1 = picard_fuchs_basis(k, 1, trunc)?;
    let q = u1.coeffs[0].mul(&u0.coeffs[0].recip()?)?;
    Ok(q.add(&GradedSeries::coordinate(0, trunc)))
}

/// One entry of the generalized mirror transform table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GwEntry {
    pub d: u32,
    pub a: u32,
    pub b: u32,
    #[serde(with = "crate::exact::serde_rational")]
    pub value: Rational,
}

/// `⟨O_{h^{N-2-n}} O_{h^{n-1+(N-k)d}}⟩_{0,d}` for `d ≤ 3` on the non-nef side from the
/// virtual structure constants.
pub fn gmt_upto3(big_n: u32, k: u32, table: &mut VscTable) -> Result<Vec<GwEntry>> {
    if big_n >= k {
        return Err(Error::InvalidArgument(format!("requires N < k (N={big_n}, k={k})")));
    }
    let kk = k as i64 - big_n as i64;
    let mut l = |d: u32, n: i64| table.value(big_n, d, n);
    let mut out = Vec::new();
    for d in 1..=3u32 {
        let lo = 1 - (big_n as i64 - k as i64) * d as i64;
        for n in 0..=big_n as i64 - 2 {
            let a = big_n as i64 - 2 - n;
            let b = n - 1 + (big_n as i64 - k as i64) * d as i64;
            if n < lo || b < 0 || b > big_n as i64 - 2 {
                continue;
            }
            let v = match d {
                1 => l(1, n)? - l(1, 1 + kk)?,
                2 => {
                    let mut s = Rational::zero();
                    for j in 0..=kk {
                        s += l(1, n - j)? - l(1, 1 + 2 * kk - j)?;
                    }
                    (l(2, n)? - l(2, 1 + 2 * kk)?) / int(2) - l(1, 1 + kk)? * s
                }
                _ => {
                    let l1k = l(1, 1 + kk)?;
                    let mut s2 = Rational::zero();
                    for j in 0..=kk {
                        s2 += l(2, n - j)? - l(2, 1 + 3 * kk - j)?;
                    }
                    let c = c113(&mut l, kk, n)? - c113(&mut l, kk, 1 + 3 * kk)?;
                    let mut s1 = Rational::zero();
                    let mut sa = Rational::zero();
                    for j in 0..=2 * kk {
                        let diff = l(1, n - j)? - l(1, 1 + 3 * kk - j)?;
                        let aj = if j <= kk { j + 1 } else { 1 + 2 * kk - j };
                        s1 += &diff;
                        sa += diff * int(aj);
                    }
                    (l(3, n)? - l(3, 1 + 3 * kk)?) / int(3) - &l1k * (s2 + c) - l(2, 1 + 2 * kk)? * s1 / int(2)
                        + rat(3, 2) * &l1k * &l1k * sa
                }
            };
            out.push(GwEntry { d, a: a as u32, b: b as u32, value: v * int(k as i64) });
        }
    }
    Ok(out)
}

/// One half of `C_{1,1}^{N,k,3}(n)`; the full value is `c113(n) - c113(1+3(k-N))`.
fn c113(l: &mut impl FnMut(u32, i64) -> Result<Rational>, kk: i64, n: i64) -> Result<Rational> {
    let mut total = Rational::zero();
    for j in 0..kk {
        let mut a = Rational::zero();
        for m in 0..=j {
            a += l(1, n - m)? * l(1, n - 2 * kk + j - m)?;
        }
        let mut b = Rational::zero();
        for m in 0..=2 * kk {
            b += l(1, n - m)?;
        }
        let mut c = Rational::zero();
        for m in j + 1..=2 * kk - j - 1 {
            c += l(1, n - m)?;
        }
        total += a - l(1, kk + 2 + j)? * b + l(1, 1 + kk)? * c;
    }
    Ok(total)
}

/// `w_d` and `j_d` for `d = 1..=dmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JExpansion {
    #[serde(serialize_with = "ser_vec")]
    pub w: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub j: Vec<Rational>,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

/// `j_d = Σ_{σ ∈ OP_d} (-(d-1))^{l-1}/l! Π w_{d_j}`.
pub fn j_from_w(w: &[Rational]) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for d in 1..=w.len() as i64 {
        let mut acc = Rational::zero();
        for p in ordered_partitions(d)? {
            let l = p.len() as i32;
            let mut t = int(-(d - 1)).pow(l - 1) / factorial(l as u64);
            for &x in &p.parts {
                t *= &w[x as usize - 1];
            }
            acc += t;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Inverts `j = q^{-1} + Σ j_d q^{d-1}` into `log q = -log j + Σ w_d j^{-d}`.
pub fn w_from_j(j: &[Rational]) -> Result<Vec<Rational>> {
    let n = j.len() as u32;
    let one = BiDegree::new(1, 0);
    // J(q) = Σ j_d q^d, so q·j = 1 + J(q) and y = 1/j = q/(1 + J(q))
    // q(y) from q = y (1 + J(q))
    let y = GradedSeries::monomial(one, Rational::one(), n);
    let mut q = y.clone();
    for _ in 0..=n {
        let mut jq = GradedSeries::constant(Rational::one(), n);
        let mut p = GradedSeries::constant(Rational::one(), n);
        for c in j {
            p = p.mul(&q)?;
            jq = jq.add(&p.scale(c));
        }
        let next = y.mul(&jq)?;
        if next == q {
            break;
        }
        q = next;
    }
    // log(q j) = log(1 + J(q(y)))
    let mut jy = GradedSeries::zero(n);
    let mut p = GradedSeries::constant(Rational::one(), n);
    for c in j {
        p = p.mul(&q)?;
        jy = jy.add(&p.scale(c));
    }
    let lg = jy.log1p()?;
    Ok((1..=n).map(|d| lg.coeff(BiDegree::new(d, 0))).collect())
}

/// `w_d = w(O_1 O_z)_{0,d}/2` on the K3 and the resulting `j_d`.
pub fn j_coefficients(dmax: u32, src: &dyn TwoPointSource) -> Result<JExpansion> {
    if dmax == 0 {
        return Err(Error::InvalidArgument("dmax must be at least 1".into()));
    }
    let g = Geometry::Wp2;
    let z = Insertion::new(1, 0);
    let w: Vec<Rational> = (1..=dmax)
        .into_par_iter()
        .map(|d| Ok(src.two_point(&g, &Degree::Single(d), &Insertion::ONE, &z)? / int(2)))
        .collect::<Result<_>>()?;
    let j = j_from_w(&w)?;
    Ok(JExpansion { w, j })
}
