//! Integrand kept as a product of rational functions; each residue step multiplies
//! together only the factors that involve the integrated variable.

use crate::error::{Error, Result};
use crate::exact::{int, MultiPoly, RatFunc, Rational, VarId};
use crate::residue::{residue_sum, PoleSpec};
use num_traits::{One, Zero};

pub(crate) struct Chain {
    nv: usize,
    factors: Vec<RatFunc>,
    scalar: Rational,
}

impl Chain {
    pub fn new(nv: usize) -> Self {
        Chain { nv, factors: Vec::new(), scalar: Rational::one() }
    }

    pub fn nvars(&self) -> usize {
        self.nv
    }

    pub fn scale(&mut self, c: &Rational) {
        self.scalar *= c;
    }

    pub fn mul(&mut self, r: RatFunc) {
        if let Some(c) = r.to_rational() {
            self.scalar *= c;
        } else {
            self.factors.push(r);
        }
    }

    fn is_dead(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Substitutes `v = to` in every factor.
    pub fn set(&mut self, v: VarId, to: &MultiPoly) -> Result<()> {
        if self.is_dead() {
            return Ok(());
        }
        let e = RatFunc::from_poly(to.clone());
        for f in &mut self.factors {
            if f.contains(v) {
                *f = f.substitute(v, &e)?;
            }
        }
        self.absorb_constants();
        Ok(())
    }

    /// `v = u` for two variables.
    pub fn set_var(&mut self, v: VarId, u: VarId) -> Result<()> {
        self.set(v, &MultiPoly::var(self.nv, u))
    }

    fn absorb_constants(&mut self) {
        let mut keep = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            match f.to_rational() {
                Some(c) => self.scalar *= c,
                None => keep.push(f),
            }
        }
        self.factors = keep;
    }

    /// Multiplies by `1/Π measure` and sums the residues of `v` at `locs`.
    pub fn integrate(&mut self, v: VarId, measure: &[(MultiPoly, u32)], locs: &[MultiPoly]) -> Result<()> {
        if self.is_dead() {
            return Ok(());
        }
        let mut prod = RatFunc::one(self.nv);
        let mut rest = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            if f.contains(v) {
                prod = prod.mul(&f);
            } else {
                rest.push(f);
            }
        }
        self.factors = rest;
        for (f, m) in measure {
            prod = prod.div_factor(f, *m)?;
        }
        let specs: Vec<PoleSpec> = locs.iter().map(|l| PoleSpec::at(v, l.clone())).collect();
        let r = residue_sum(&prod, &specs)?;
        if r.is_zero() {
            self.scalar = Rational::zero();
            self.factors.clear();
        } else {
            self.mul(r);
        }
        Ok(())
    }

    /// `∮ dv / v^n` at 0.
    pub fn integrate_power(&mut self, v: VarId, n: u32) -> Result<()> {
        let x = self.var(v);
        self.integrate(v, &[(x, n)], &[MultiPoly::zero(self.nv)])
    }

    pub fn var(&self, v: VarId) -> MultiPoly {
        MultiPoly::var(self.nv, v)
    }

    /// `c·v` as a polynomial.
    pub fn scaled_var(&self, v: VarId, c: i64) -> MultiPoly {
        MultiPoly::var(self.nv, v).scale(&int(c))
    }

    pub fn finish(self) -> Result<Rational> {
        if self.is_dead() {
            return Ok(Rational::zero());
        }
        let mut acc = self.scalar;
        for f in self.factors {
            let c = f
                .reduce()
                .to_rational()
                .ok_or_else(|| Error::InvalidArgument("variables left after integration".into()))?;
            acc *= c;
        }
        Ok(acc)
    }
}

/// Linear form `Σ c_i x_{v_i} / den`.
pub(crate) fn lin(nv: usize, terms: &[(VarId, i64)], den: i64) -> MultiPoly {
    let coefs: Vec<(VarId, Rational)> = terms.iter().map(|&(v, c)| (v, crate::exact::rat(c, den))).collect();
    MultiPoly::linear(nv, Rational::zero(), &coefs)
}

/// Product of polynomials.
pub(crate) fn product(nv: usize, ps: impl IntoIterator<Item = MultiPoly>) -> MultiPoly {
    ps.into_iter().fold(MultiPoly::one(nv), |a, p| &a * &p)
}

/// Monomial `x_v^e` (1 when `e == 0`).
pub(crate) fn power(nv: usize, v: VarId, e: u32) -> MultiPoly {
    MultiPoly::var(nv, v).pow(e)
}
