use super::{MultiPoly, Rational, VarId, VarSet};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Rational function `num / Π f^m` with the denominator kept as a factor list.
///
/// Each stored factor is non-constant, free of monomial content unless it is a single
/// variable, and has leading coefficient 1. Single-variable factors are cancelled
/// against the numerator eagerly; other factors only by [`RatFunc::reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: MultiPoly,
    den: BTreeMap<MultiPoly, u32>,
}

/// Splits `p` into `scalar · Π factor^mult` with normalized factors.
fn split_factor(p: &MultiPoly) -> Result<(Rational, Vec<(MultiPoly, u32)>)> {
    if p.is_zero() {
        return Err(Error::IdenticallySingular);
    }
    let n = p.nvars();
    let m = p.min_exps();
    let mut out: Vec<(MultiPoly, u32)> = m
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| (MultiPoly::var(n, v), k as u32))
        .collect();
    let q = p.div_monomial(&m);
    if let Some(c) = q.constant_value() {
        return Ok((c, out));
    }
    let lc = q.leading().unwrap().1.clone();
    out.push((q.scale(&lc.recip()), 1));
    Ok((lc, out))
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, v: VarId) -> Self {
        Self::from_poly(MultiPoly::var(nvars, v))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RatFunc { num, den: BTreeMap::new() }
    }

    /// `num / Π f^m`; factors are normalized and merged.
    pub fn new(num: MultiPoly, factors: impl IntoIterator<Item = (MultiPoly, u32)>) -> Result<Self> {
        let mut scalar = Rational::one();
        let mut den = BTreeMap::new();
        for (f, mult) in factors {
            if mult == 0 {
                continue;
            }
            let (s, fs) = split_factor(&f)?;
            scalar *= num_traits::pow(s, mult as usize);
            for (g, k) in fs {
                *den.entry(g).or_insert(0) += k * mult;
            }
        }
        let mut r = RatFunc { num: num.scale(&scalar.recip()), den };
        r.cancel_monomials();
        Ok(r)
    }

    /// `num / Π f^m` where the factors are already normalized.
    fn from_normalized(num: MultiPoly, den: BTreeMap<MultiPoly, u32>) -> Self {
        let mut r = RatFunc { num, den };
        r.cancel_monomials();
        r
    }

    fn cancel_monomials(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        if self.den.is_empty() {
            return;
        }
        let content = self.num.min_exps();
        if content.iter().all(|&k| k == 0) {
            return;
        }
        let n = self.num.nvars();
        let mut strip = super::Exps::from_elem(0, n);
        for v in 0..n {
            if content[v] == 0 {
                continue;
            }
            let x = MultiPoly::var(n, v);
            if let Some(m) = self.den.get_mut(&x) {
                let k = (*m).min(content[v] as u32);
                strip[v] = k as u16;
                *m -= k;
                if *m == 0 {
                    self.den.remove(&x);
                }
            }
        }
        if strip.iter().any(|&k| k > 0) {
            self.num = self.num.div_monomial(&strip);
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&MultiPoly, u32)> {
        self.den.iter().map(|(f, &m)| (f, m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The value if this is a constant.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.num.contains(v) || self.den.keys().any(|f| f.contains(v))
    }

    /// Degree of homogeneity, `None` when the numerator is zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut d = self.num.homogeneous_degree()? as i64;
        for (f, m) in &self.den {
            d -= f.homogeneous_degree()? as i64 * *m as i64;
        }
        Some(d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiplies by a polynomial.
    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        Self::from_normalized(&self.num * p, self.den.clone())
    }

    /// Divides by `f^m` without expanding.
    pub fn div_factor(&self, f: &MultiPoly, m: u32) -> Result<Self> {
        let (s, fs) = split_factor(f)?;
        let mut den = self.den.clone();
        for (g, k) in fs {
            *den.entry(g).or_insert(0) += k * m;
        }
        Ok(Self::from_normalized(self.num.scale(&num_traits::pow(s, m as usize).recip()), den))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn add(&self, o: &RatFunc) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::from_normalized(&self.num + &o.num, self.den.clone());
        }
        let mut den = self.den.clone();
        for (f, &m) in &o.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |r: &RatFunc| {
            let mut p = r.num.clone();
            for (f, &m) in &den {
                let have = r.den.get(f).copied().unwrap_or(0);
                if m > have {
                    p = &p * &f.pow(m - have);
                }
            }
            p
        };
        let num = &lift(self) + &lift(o);
        Self::from_normalized(num, den)
    }

    pub fn sub(&self, o: &RatFunc) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (f, &m) in &o.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        Self::from_normalized(&self.num * &o.num, den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = MultiPoly::one(self.nvars());
        for (f, &m) in &self.den {
            num = &num * &f.pow(m);
        }
        RatFunc::new(num, [(self.num.clone(), 1)])
    }

    pub fn div(&self, o: &RatFunc) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        RatFunc {
            num: self.num.pow(n),
            den: self.den.iter().map(|(f, &m)| (f.clone(), m * n)).collect(),
        }
    }

    /// Replaces `v` by `e`, which must not contain `v`.
    pub fn substitute(&self, v: VarId, e: &RatFunc) -> Result<Self> {
        if e.contains(v) {
            return Err(Error::InvalidArgument("substituted expression contains the variable".into()));
        }
        if !self.contains(v) {
            return Ok(self.clone());
        }
        if e.is_polynomial() {
            let num = self.num.substitute(v, &e.num);
            let mut keep = BTreeMap::new();
            let mut moved = Vec::new();
            for (f, &m) in &self.den {
                if f.contains(v) {
                    moved.push((f.substitute(v, &e.num), m));
                } else {
                    keep.insert(f.clone(), m);
                }
            }
            let r = RatFunc::new(num, moved)?;
            return Ok(r.mul(&RatFunc { num: MultiPoly::one(self.nvars()), den: keep }));
        }
        let mut acc = subst_poly(&self.num, v, e);
        for (f, &m) in &self.den {
            if f.contains(v) {
                let fe = subst_poly(f, v, e);
                let inv = fe.inv().map_err(|_| Error::IdenticallySingular)?;
                acc = acc.mul(&inv.pow(m));
            } else {
                acc = acc.mul(&RatFunc { num: MultiPoly::one(self.nvars()), den: [(f.clone(), m)].into() });
            }
        }
        Ok(acc)
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduce(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (f, &m) in &self.den {
            let mut left = m;
            while left > 0 {
                match num.div_exact(f) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert(f.clone(), left);
            }
        }
        Self::from_normalized(num, den)
    }

    /// Cancels the given factor against the numerator as far as it divides.
    pub fn cancel_factor(&self, f: &MultiPoly) -> Self {
        let Some(&m) = self.den.get(f) else {
            return self.clone();
        };
        let mut num = self.num.clone();
        let mut left = m;
        while left > 0 {
            match num.div_exact(f) {
                Some(q) => {
                    num = q;
                    left -= 1;
                }
                None => break,
            }
        }
        if left == m {
            return self.clone();
        }
        let mut den = self.den.clone();
        if left == 0 {
            den.remove(f);
        } else {
            den.insert(f.clone(), left);
        }
        RatFunc { num, den }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let mut d = Rational::one();
        for (f, &m) in &self.den {
            let x = f.eval(point);
            if x.is_zero() {
                return Err(Error::DivisionByZero);
            }
            d *= num_traits::pow(x, m as usize);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn display(&self, vars: &VarSet) -> String {
        if self.den.is_empty() {
            return self.num.display(vars);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, &m)| {
                let s = if f.len() > 1 { format!("({})", f.display(vars)) } else { f.display(vars) };
                if m > 1 {
                    format!("{s}^{m}")
                } else {
                    s
                }
            })
            .collect();
        format!("({}) / ({})", self.num.display(vars), den.join("*"))
    }
}

/// `p(v = e)` for a rational function `e`, by homogenizing against `e`'s denominator.
fn subst_poly(p: &MultiPoly, v: VarId, e: &RatFunc) -> RatFunc {
    let cs = p.coeffs_in(v);
    let deg = (cs.len() - 1) as u32;
    let mut q = MultiPoly::one(p.nvars());
    for (f, &m) in &e.den {
        q = &q * &f.pow(m);
    }
    let mut num = MultiPoly::zero(p.nvars());
    let mut ppow = MultiPoly::one(p.nvars());
    for (k, c) in cs.iter().enumerate() {
        if !c.is_zero() {
            num = &num + &(&(c * &ppow) * &q.pow(deg - k as u32));
        }
        ppow = &ppow * &e.num;
    }
    RatFunc::from_normalized(num, e.den.iter().map(|(f, &m)| (f.clone(), m * deg)).collect())
}
