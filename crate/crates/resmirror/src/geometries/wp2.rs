//! K3 hypersurface of degree 6 in `P(1,1,1,3)`.

use super::chain::{lin, power, product, Chain};
use crate::error::{Error, Result};
use crate::exact::{int, rat, MultiPoly, RatFunc, Rational};
use crate::partitions::{ordered_partitions, OrderedPartition};
use num_traits::Zero;
use rayon::prelude::*;

/// Deformation factors of the weight-3 coordinate along a degree-`d` component:
/// `Π_{i=1}^{3d-1} (i x + (3d-i) y)/d`.
pub(crate) fn weight3_factors(nv: usize, x: usize, y: usize, d: i64) -> Vec<(MultiPoly, u32)> {
    (1..3 * d).map(|i| (lin(nv, &[(x, i), (y, 3 * d - i)], d), 1)).collect()
}

fn block(nv: usize, d: i64, z0: usize, z1: usize) -> Result<RatFunc> {
    let num = product(nv, (0..=6 * d).map(|i| lin(nv, &[(z0, i), (z1, 6 * d - i)], d)));
    let mut den: Vec<(MultiPoly, u32)> = (1..d).map(|i| (lin(nv, &[(z0, i), (z1, d - i)], d), 3)).collect();
    den.extend(weight3_factors(nv, z0, z1, d));
    RatFunc::new(num, den)
}

/// Contribution of one ordered partition.
pub fn amplitude(sigma: &OrderedPartition, a: u32, b: u32) -> Result<Rational> {
    let l = sigma.len();
    let nv = l + 1;
    let d = &sigma.parts;
    let mut ch = Chain::new(nv);
    ch.scale(&d.iter().fold(int(1), |acc, &x| acc / int(x as i64)));
    ch.mul(RatFunc::from_poly(&power(nv, 0, a) * &power(nv, l, b)));
    for j in 1..=l {
        ch.mul(block(nv, d[j - 1] as i64, j - 1, j)?);
    }
    for j in 1..l {
        let (d1, d2) = (d[j - 1] as i64, d[j] as i64);
        let node = lin(nv, &[(j, d1 + d2), (j - 1, -d2), (j + 1, -d1)], d1 * d2);
        let six_z = ch.scaled_var(j, 6);
        ch.mul(RatFunc::new(MultiPoly::one(nv), [(node, 1), (six_z, 1)])?);
    }
    for j in 0..=l {
        ch.scale(&rat(1, 3));
        ch.integrate_power(j, 4)?;
    }
    ch.finish()
}

/// `w(O_{z^a} O_{z^b})_{0,d}`.
pub fn two_point_wp2(d: u32, a: u32, b: u32) -> Result<Rational> {
    if d == 0 {
        return Err(Error::InvalidDegree("degree 0".into()));
    }
    if a > 3 || b > 3 {
        return Err(Error::InvalidInsertion(format!("z^{a}, z^{b} outside z^0..z^3")));
    }
    let parts = ordered_partitions(d as i64)?;
    parts
        .par_iter()
        .map(|s| amplitude(s, a, b))
        .try_reduce(Rational::zero, |x, y| Ok(x + y))
}

/// `∫ z^s` over the hypersurface, i.e. `(1/3)∮ dz/z^4 · 6z · z^s`.
pub fn classical_integral(s: u32) -> Rational {
    if s == 2 {
        int(2)
    } else {
        Rational::zero()
    }
}
