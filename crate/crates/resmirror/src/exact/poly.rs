use super::{binomial, fmt_rational, parse_rational, Rational, VarId, VarSet};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector, one entry per variable.
pub type Exps = SmallVec<[u16; 12]>;

/// Sparse polynomial over a fixed number of variables with rational coefficients.
///
/// Terms are kept in a map ordered lexicographically on exponent vectors, which is a
/// monomial order; the last entry is the leading term. No zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exps, Rational>,
}

fn zero_exps(n: usize) -> Exps {
    SmallVec::from_elem(0, n)
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(zero_exps(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, v: VarId) -> Self {
        let mut e = zero_exps(nvars);
        e[v] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Exps, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Linear form `c + Σ coef·var`.
    pub fn linear(nvars: usize, c: Rational, coefs: &[(VarId, Rational)]) -> Self {
        let mut p = Self::constant(nvars, c);
        for (v, a) in coefs {
            let mut e = zero_exps(nvars);
            e[*v] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u16]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn leading(&self) -> Option<(&Exps, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|e| e[v] as u32).max().unwrap_or(0)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    /// Common degree of all terms, `None` when inhomogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn min_exps(&self) -> Exps {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return zero_exps(self.nvars);
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e.iter()) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, e: &Exps, c: &Rational) {
        if let Some(x) = self.terms.get_mut(e) {
            *x += c;
            if x.is_zero() {
                self.terms.remove(e);
            }
        } else if !c.is_zero() {
            self.terms.insert(e.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c·x^e`.
    pub fn mul_monomial(&self, e: &[u16], c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), x * c))
                .collect(),
        }
    }

    /// Divides by `x^e`; every term must be divisible.
    pub fn div_monomial(&self, e: &[u16]) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (k.iter().zip(e).map(|(a, b)| a - b).collect(), x.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Power with a signed exponent; negative exponents are rejected.
    pub fn pow_checked(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return Err(Error::NegativeExponent(n));
        }
        Ok(self.pow(n as u32))
    }

    /// Coefficients of `v^0, v^1, …` as polynomials free of `v`.
    pub fn coeffs_in(&self, v: VarId) -> Vec<MultiPoly> {
        let mut out = vec![Self::zero(self.nvars); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut e2 = e.clone();
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Replaces `v` by the polynomial `e` (which must not contain `v`).
    pub fn substitute(&self, v: VarId, e: &MultiPoly) -> Self {
        if !self.contains(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = cs.last().unwrap().clone();
        for c in cs.iter().rev().skip(1) {
            acc = &(&acc * e) + c;
        }
        acc
    }

    /// Coefficients of `ε^0..=ε^upto` in `self(v = loc + ε)`.
    pub fn expand_at(&self, v: VarId, loc: &MultiPoly, upto: usize) -> Vec<MultiPoly> {
        let cs = self.coeffs_in(v);
        let deg = cs.len() - 1;
        let top = upto.min(deg);
        if loc.is_zero() {
            return cs.into_iter().take(top + 1).collect();
        }
        let mut powers = vec![Self::one(self.nvars)];
        for i in 1..=deg {
            let p = &powers[i - 1] * loc;
            powers.push(p);
        }
        (0..=top)
            .map(|i| {
                let mut acc = Self::zero(self.nvars);
                for (k, ck) in cs.iter().enumerate().skip(i) {
                    if ck.is_zero() {
                        continue;
                    }
                    let b = binomial(k as u64, i as u64);
                    acc = &acc + &(&powers[k - i] * ck).scale(&b);
                }
                acc
            })
            .collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point length");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient `self / f`, or `None` when `f` does not divide `self`.
    pub fn div_exact(&self, f: &MultiPoly) -> Option<MultiPoly> {
        let (le, lc) = f.leading()?;
        let (le, lc) = (le.clone(), lc.clone());
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = r.leading() {
            if e.iter().zip(le.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let m: Exps = e.iter().zip(le.iter()).map(|(a, b)| a - b).collect();
            let coef = c / &lc;
            for (fe, fc) in &f.terms {
                let ee: Exps = fe.iter().zip(m.iter()).map(|(a, b)| a + b).collect();
                r.add_term(ee, -(fc * &coef));
            }
            q.terms.insert(m, coef);
        }
        Some(q)
    }

    /// Renders with the given variable names.
    pub fn display(&self, vars: &VarSet) -> String {
        self.render(|v| vars.name(v).to_string())
    }

    fn render(&self, name: impl Fn(VarId) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { name(v) } else { format!("{}^{}", name(v), k) })
                .collect();
            if mono.is_empty() {
                s.push_str(&fmt_rational(&a));
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{}*", fmt_rational(&a));
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { coef: fmt_rational(c), exps: e.to_vec() })
                .collect(),
        }
    }

    pub fn from_json(nvars: usize, j: &PolyJson) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for t in &j.terms {
            if t.exps.len() != nvars {
                return Err(Error::Parse(format!("exponent vector of length {}", t.exps.len())));
            }
            p.add_term(t.exps.iter().copied().collect(), parse_rational(&t.coef)?);
        }
        Ok(p)
    }
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(|v| format!("x{v}")))
    }
}

/// JSON form `{"terms":[{"coef":"num/den","exps":[..]}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub exps: Vec<u16>,
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (e, c) in &small.terms {
            big.add_term_ref(e, c);
        }
        big
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        if self.is_zero() || o.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        if a.len() == 1 {
            let (e, c) = a.terms.iter().next().unwrap();
            return b.mul_monomial(e, c);
        }
        let mut r = MultiPoly::zero(self.nvars);
        let mut e: Exps = zero_exps(self.nvars);
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                for i in 0..e.len() {
                    e[i] = e1[i] + e2[i];
                }
                let p = c1 * c2;
                if let Some(x) = r.terms.get_mut(&e) {
                    *x += p;
                } else {
                    r.terms.insert(e.clone(), p);
                }
            }
        }
        r.terms.retain(|_, c| !c.is_zero());
        r
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
