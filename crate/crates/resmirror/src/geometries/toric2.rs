//! Targets with two Kähler classes: local `F_0`, `F_3`, and the blown-up weighted
//! projective spaces `WP_1` (in `P(1,1,2,2,2)`) and `WP_3` (in `P(1,1,2,2,6)`).
//!
//! Vertex `j` carries `z_j = x_{2j}` and `w_j = x_{2j+1}`; the residue operations run
//! from vertex 0 outward.

use super::chain::{lin, power, product, Chain};
use crate::error::Result;
use crate::exact::{int, rat, MultiPoly, RatFunc, Rational};
use crate::partitions::{BiDegree, BiPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Kf0,
    F3,
    Wp1,
    Wp3,
}

fn z(j: usize) -> usize {
    2 * j
}

fn w(j: usize) -> usize {
    2 * j + 1
}

/// `(i X + (d-i) Y)/d` factors for `i = 1..d-1`, each with multiplicity `m`.
fn interior(nv: usize, x: usize, y: usize, d: i64, m: u32) -> Vec<(MultiPoly, u32)> {
    (1..d).map(|i| (lin(nv, &[(x, i), (y, d - i)], d), m)).collect()
}

/// Block factor `G` of part `p` joining vertices `j-1` and `j`.
fn block(kind: Kind, nv: usize, p: BiDegree, j: usize) -> Result<RatFunc> {
    let d = p.size() as i64;
    let (z0, z1, w0, w1) = (z(j - 1), z(j), w(j - 1), w(j));
    match (kind, p.is_a()) {
        (Kind::Kf0, true) => RatFunc::new(
            product(nv, (1..2 * d).map(|i| lin(nv, &[(z0, -i), (z1, -(2 * d - i)), (w0, -2 * d)], d))),
            interior(nv, z0, z1, d, 2),
        ),
        (Kind::Kf0, false) => RatFunc::new(
            product(nv, (1..2 * d).map(|i| lin(nv, &[(w0, -i), (w1, -(2 * d - i)), (z0, -2 * d)], d))),
            interior(nv, w0, w1, d, 2),
        ),
        (Kind::F3, true) => RatFunc::new(
            product(nv, (1..3 * d).map(|i| lin(nv, &[(z0, -i), (z1, -(3 * d - i)), (w0, d)], d))),
            interior(nv, z0, z1, d, 2),
        ),
        (Kind::F3, false) => {
            let mut den = interior(nv, w0, w1, d, 1);
            for i in 1..d {
                den.push((lin(nv, &[(w0, i), (w1, d - i), (z0, -3 * d)], d), 1));
            }
            RatFunc::new(MultiPoly::one(nv), den)
        }
        (Kind::Wp1 | Kind::Wp3, true) => {
            let c = if kind == Kind::Wp1 { 4 } else { 6 };
            let num = product(nv, (1..2 * d).map(|i| lin(nv, &[(z0, -i), (z1, -(2 * d - i)), (w0, d)], d)));
            RatFunc::new(&num * &lin(nv, &[(w0, c)], 1), interior(nv, z0, z1, d, 2))
        }
        (Kind::Wp1, false) => {
            let num = product(nv, (0..=4 * d).map(|i| lin(nv, &[(w0, i), (w1, 4 * d - i)], d)));
            let mut den = interior(nv, w0, w1, d, 3);
            for i in 1..d {
                den.push((lin(nv, &[(w0, i), (w1, d - i), (z0, -2 * d)], d), 1));
            }
            RatFunc::new(num, den)
        }
        (Kind::Wp3, false) => {
            let num = product(nv, (0..=6 * d).map(|i| lin(nv, &[(w0, i), (w1, 6 * d - i)], d)));
            let mut den = interior(nv, w0, w1, d, 2);
            for i in 1..d {
                den.push((lin(nv, &[(w0, i), (w1, d - i), (z0, -2 * d)], d), 1));
            }
            den.extend(super::wp2::weight3_factors(nv, w0, w1, d));
            RatFunc::new(num, den)
        }
    }
}

/// Node factor `H` at vertex `j` between parts `p1` (on `j-1, j`) and `p2` (on `j, j+1`).
fn node(kind: Kind, nv: usize, p1: BiDegree, p2: BiDegree, j: usize) -> Result<RatFunc> {
    let (d1, d2) = (p1.size() as i64, p2.size() as i64);
    let x = |p: BiDegree, v: usize| if p.is_a() { z(v) } else { w(v) };
    // (X_j - X_{j-1})/d1 + (Y_j - Y_{j+1})/d2
    let (xa, xb) = (x(p1, j), x(p1, j - 1));
    let (ya, yb) = (x(p2, j), x(p2, j + 1));
    let dd = &lin(nv, &[(xa, d2), (xb, -d2)], d1 * d2) + &lin(nv, &[(ya, d1), (yb, -d1)], d1 * d2);
    let aa = p1.is_a() && p2.is_a();
    match kind {
        Kind::Kf0 => RatFunc::new(lin(nv, &[(z(j), -2), (w(j), -2)], 1), [(dd, 1)]),
        Kind::F3 => {
            let num = if aa { lin(nv, &[(z(j), -3), (w(j), 1)], 1) } else { MultiPoly::one(nv) };
            RatFunc::new(num, [(dd, 1)])
        }
        Kind::Wp1 | Kind::Wp3 => {
            let c = if kind == Kind::Wp1 { 4 } else { 6 };
            let num = if aa { lin(nv, &[(z(j), -2), (w(j), 1)], 1) } else { MultiPoly::one(nv) };
            RatFunc::new(num, [(dd, 1), (lin(nv, &[(w(j), c)], 1), 1)])
        }
    }
}

/// Residue operation at vertex `j`; `prev`/`next` are the adjacent parts.
fn vertex_residue(kind: Kind, ch: &mut Chain, j: usize, prev: Option<BiDegree>, next: Option<BiDegree>) -> Result<()> {
    let nv = ch.nvars();
    let zero = MultiPoly::zero(nv);
    let (zj, wj) = (z(j), w(j));
    let wv = ch.var(wj);
    // the w-measure over the fibre, with its second pole
    let (shift, wpow) = match kind {
        Kind::Kf0 => (0, 2),
        Kind::F3 => (3, 1),
        Kind::Wp1 | Kind::Wp3 => (2, 3),
    };
    let second = ch.scaled_var(zj, shift);
    let fibre_factor = &wv - &second;
    let scale = if kind == Kind::Wp3 { rat(1, 3) } else { int(1) };
    let full = |ch: &mut Chain| -> Result<()> {
        ch.scale(&scale);
        ch.integrate(wj, &[(wv.clone(), wpow), (fibre_factor.clone(), 1)], &[zero.clone(), second.clone()])
    };
    match next {
        Some(n) if n.is_a() => {
            if kind == Kind::Kf0 {
                ch.integrate_power(zj, 2)?;
                ch.set_var(wj, w(j + 1))
            } else {
                ch.set_var(wj, w(j + 1))?;
                ch.integrate_power(zj, 2)
            }
        }
        Some(_) => {
            match (kind, prev) {
                (Kind::Kf0, _) => {
                    ch.set_var(zj, z(j + 1))?;
                    return ch.integrate_power(wj, 2);
                }
                (Kind::F3, Some(p)) if p.is_a() => ch.integrate_power(wj, 1)?,
                (Kind::Wp1 | Kind::Wp3, Some(p)) if p.is_a() => {
                    ch.scale(&scale);
                    ch.integrate(wj, &[(wv.clone(), 3)], &[zero.clone(), second.clone()])?
                }
                _ => full(ch)?,
            }
            ch.set_var(zj, z(j + 1))
        }
        None => {
            let last_a = prev.map(|p| p.is_a()).unwrap_or(true);
            match (kind, last_a) {
                (Kind::Kf0, _) => ch.integrate_power(wj, 2)?,
                (Kind::F3, true) => ch.integrate_power(wj, 1)?,
                (Kind::Wp1 | Kind::Wp3, true) => {
                    ch.scale(&scale);
                    ch.integrate(wj, &[(wv.clone(), 3)], &[zero.clone(), second.clone()])?
                }
                _ => full(ch)?,
            }
            ch.integrate_power(zj, 2)
        }
    }
}

/// Contribution of one bi-partition with insertions `z^s w^t` at the two ends.
pub fn amplitude(kind: Kind, sigma: &BiPartition, alpha: (u32, u32), beta: (u32, u32)) -> Result<Rational> {
    let l = sigma.len();
    let nv = 2 * (l + 1);
    let p = &sigma.parts;
    let mut ch = Chain::new(nv);
    ch.scale(&p.iter().fold(int(1), |acc, x| acc / int(x.size() as i64)));
    let ins = product(
        nv,
        [power(nv, z(0), alpha.0), power(nv, w(0), alpha.1), power(nv, z(l), beta.0), power(nv, w(l), beta.1)],
    );
    ch.mul(RatFunc::from_poly(ins));
    for j in 1..=l {
        ch.mul(block(kind, nv, p[j - 1], j)?);
    }
    for j in 1..l {
        ch.mul(node(kind, nv, p[j - 1], p[j], j)?);
    }
    for j in 0..=l {
        let prev = if j == 0 { None } else { Some(p[j - 1]) };
        let next = p.get(j);
        vertex_residue(kind, &mut ch, j, prev, next.copied())?;
    }
    ch.finish()
}

/// Classical integral of the polynomial `z^s w^t` over the ambient space.
pub fn classical_integral(kind: Kind, s: u32, t: u32) -> Result<Rational> {
    let nv = 2;
    let mut ch = Chain::new(nv);
    ch.mul(RatFunc::from_poly(&power(nv, 0, s) * &power(nv, 1, t)));
    let wv = ch.var(1);
    let zero = MultiPoly::zero(nv);
    match kind {
        Kind::Kf0 => ch.integrate_power(1, 2)?,
        Kind::F3 => {
            let second = ch.scaled_var(0, 3);
            ch.integrate(1, &[(wv.clone(), 1), (&wv - &second, 1)], &[zero, second])?
        }
        Kind::Wp1 | Kind::Wp3 => {
            if kind == Kind::Wp3 {
                ch.scale(&rat(1, 3));
            }
            let second = ch.scaled_var(0, 2);
            ch.integrate(1, &[(wv.clone(), 3), (&wv - &second, 1)], &[zero, second])?
        }
    }
    ch.integrate_power(0, 2)?;
    ch.finish()
}
