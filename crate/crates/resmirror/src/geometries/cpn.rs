//! Degree-`k` hypersurfaces in `CP^{N-1}`.

use super::chain::{lin, power, product, Chain};
use crate::error::{Error, Result};
use crate::exact::{int, rat, MultiPoly, RatFunc, Rational};
use crate::partitions::{ordered_partitions, OrderedPartition};
use num_traits::Zero;
use rayon::prelude::*;

/// `e(k,d;z,w) = Π_{j=0}^{kd} (j z + (kd-j) w)/d`.
pub(crate) fn e_block(nv: usize, k: u32, d: u32, z: usize, w: usize) -> MultiPoly {
    let kd = (k * d) as i64;
    product(nv, (0..=kd).map(|j| lin(nv, &[(z, j), (w, kd - j)], d as i64)))
}

/// Factors of `t(N,d;z,w) = Π_{j=1}^{d-1} ((j z + (d-j) w)/d)^N`.
fn t_block(nv: usize, n: u32, d: u32, z: usize, w: usize) -> Vec<(MultiPoly, u32)> {
    let d = d as i64;
    (1..d).map(|j| (lin(nv, &[(z, j), (w, d - j)], d), n)).collect()
}

/// Contribution of one ordered partition; vertex `j` carries `z_j`, integrated in
/// descending order of `j`.
pub fn amplitude(n: u32, k: u32, sigma: &OrderedPartition, a: u32, b: u32) -> Result<Rational> {
    amplitude_signed(n, k, sigma, a as i64, b as i64)
}

/// [`amplitude`] with end exponents that may be negative.
pub fn amplitude_signed(n: u32, k: u32, sigma: &OrderedPartition, a: i64, b: i64) -> Result<Rational> {
    let l = sigma.len();
    let nv = l + 1;
    let d = &sigma.parts;
    let mut ch = Chain::new(nv);
    ch.scale(&d.iter().fold(int(1), |acc, &x| acc / int(x as i64)));
    let num = &power(nv, 0, a.max(0) as u32) * &power(nv, l, b.max(0) as u32);
    let den = [(0, a), (l, b)]
        .into_iter()
        .filter(|&(_, e)| e < 0)
        .map(|(v, e)| (MultiPoly::var(nv, v), (-e) as u32));
    ch.mul(RatFunc::new(num, den)?);
    for j in 1..=l {
        ch.mul(RatFunc::new(e_block(nv, k, d[j - 1], j - 1, j), t_block(nv, n, d[j - 1], j - 1, j))?);
    }
    for j in 1..l {
        let (d1, d2) = (d[j - 1] as i64, d[j] as i64);
        // (z_j - z_{j-1})/d1 + (z_j - z_{j+1})/d2
        let node = lin(nv, &[(j, d1 + d2), (j - 1, -d2), (j + 1, -d1)], d1 * d2);
        let kz = ch.scaled_var(j, k as i64);
        ch.mul(RatFunc::new(MultiPoly::one(nv), [(node, 1), (kz, 1)])?);
    }
    for j in (0..=l).rev() {
        ch.integrate_power(j, n)?;
    }
    ch.finish()
}

/// `w(O_{h^a} O_{h^b})_{0,d}` summed over ordered partitions.
pub fn two_point_cpn(n: u32, k: u32, d: u32, a: u32, b: u32) -> Result<Rational> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidArgument(format!("N={n}, k={k}")));
    }
    if a > n - 2 || b > n - 2 {
        return Err(Error::InvalidInsertion(format!("h^{a}, h^{b} outside h^0..h^{}", n - 2)));
    }
    let parts = ordered_partitions(d as i64)?;
    parts
        .par_iter()
        .map(|s| amplitude(n, k, s, a, b))
        .try_reduce(Rational::zero, |x, y| Ok(x + y))
}

/// The partition-sum residue integral with end exponents `a`, `b` of either sign.
pub fn residue_integral(n: u32, k: u32, d: u32, a: i64, b: i64) -> Result<Rational> {
    let parts = ordered_partitions(d as i64)?;
    parts
        .par_iter()
        .map(|s| amplitude_signed(n, k, s, a, b))
        .try_reduce(Rational::zero, |x, y| Ok(x + y))
}

/// Degree-`d` mirror-map coefficient `w(O_1 O_{h^{N-3+(N-k)d}})/k` when it is defined.
pub fn mirror_coefficient(n: u32, k: u32, d: u32) -> Result<Rational> {
    let b = n as i64 - 3 + (n as i64 - k as i64) * d as i64;
    if b < 0 || b > n as i64 - 2 {
        return Ok(Rational::zero());
    }
    Ok(two_point_cpn(n, k, d, 0, b as u32)? * rat(1, k as i64))
}
