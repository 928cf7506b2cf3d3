//! Fixed-point amplitudes and two-point numbers for each built-in target.

mod chain;
pub mod cpn;
pub mod toric2;
pub mod wp2;

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::partitions::{ordered_bipartitions, BiDegree, BiPartition, OrderedPartition};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use toric2::Kind;

pub use cpn::two_point_cpn;
pub use wp2::two_point_wp2;

/// A built-in target geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// Degree-`k` hypersurface in `CP^{N-1}`.
    Cpn { n: u32, k: u32 },
    /// Local `F_0`; `k` is the free parameter of the virtual classical ring.
    Kf0 { k: Rational },
    F3,
    Wp1,
    Wp2,
    Wp3,
}

/// Degree of a map: a positive integer or a bi-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Degree {
    Single(u32),
    Bi(BiDegree),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Single(d) => write!(f, "{d}"),
            Degree::Bi(b) => write!(f, "{},{}", b.da, b.db),
        }
    }
}

impl FromStr for Degree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDegree(format!("cannot parse degree {s:?}"));
        match s.split_once(',') {
            None => Ok(Degree::Single(s.trim().parse().map_err(|_| bad())?)),
            Some((a, b)) => Ok(Degree::Bi(BiDegree::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))),
        }
    }
}

/// Either kind of partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Partition {
    Ordered(OrderedPartition),
    Bi(BiPartition),
}

/// Insertion `z^s w^t` (`h^s` for one-class targets).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Insertion {
    pub s: u32,
    pub t: u32,
}

impl Insertion {
    pub const ONE: Insertion = Insertion { s: 0, t: 0 };

    pub const fn new(s: u32, t: u32) -> Self {
        Insertion { s, t }
    }

    pub fn degree(&self) -> u32 {
        self.s + self.t
    }

    pub fn times(&self, o: &Insertion) -> Insertion {
        Insertion::new(self.s + o.s, self.t + o.t)
    }

    /// Label such as `1`, `z`, `zw`, `w2`.
    pub fn label(&self) -> String {
        let part = |c: char, e: u32| match e {
            0 => String::new(),
            1 => c.to_string(),
            _ => format!("{c}{e}"),
        };
        let s = format!("{}{}", part('z', self.s), part('w', self.t));
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Insertion {
    type Err = Error;

    /// Parses `1`, `z`, `w2`, `zw^2`, `z*w`, `h3` (h is an alias of z).
    fn from_str(s: &str) -> Result<Self> {
        let src = s.trim();
        let bad = || Error::InvalidInsertion(format!("cannot parse insertion {src:?}"));
        if src == "1" {
            return Ok(Insertion::ONE);
        }
        let chars: Vec<char> = src.chars().filter(|c| *c != '*' && *c != '^').collect();
        if chars.is_empty() {
            return Err(bad());
        }
        let mut ins = Insertion::ONE;
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let e: u32 = if start == i {
                1
            } else {
                chars[start..i].iter().collect::<String>().parse().map_err(|_| bad())?
            };
            match c {
                'z' | 'h' => ins.s += e,
                'w' => ins.t += e,
                _ => return Err(bad()),
            }
        }
        Ok(ins)
    }
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Cpn { .. } => "cpn",
            Geometry::Kf0 { .. } => "kf0",
            Geometry::F3 => "f3",
            Geometry::Wp1 => "wp1",
            Geometry::Wp2 => "wp2",
            Geometry::Wp3 => "wp3",
        }
    }

    /// Looks up a geometry by name; `n`, `k` are used by `cpn` (and `k` by `kf0`).
    pub fn from_name(name: &str, n: Option<u32>, k: Option<i64>) -> Result<Self> {
        match name {
            "cpn" => {
                let (Some(n), Some(k)) = (n, k) else {
                    return Err(Error::InvalidArgument("cpn needs --N and --k".into()));
                };
                if n < 2 || k < 1 {
                    return Err(Error::InvalidArgument(format!("N={n}, k={k}")));
                }
                Ok(Geometry::Cpn { n, k: k as u32 })
            }
            "kf0" => Ok(Geometry::Kf0 { k: int(k.unwrap_or(1)) }),
            "f3" => Ok(Geometry::F3),
            "wp1" => Ok(Geometry::Wp1),
            "wp2" => Ok(Geometry::Wp2),
            "wp3" => Ok(Geometry::Wp3),
            _ => Err(Error::InvalidArgument(format!("unknown geometry {name:?}"))),
        }
    }

    /// True for targets with two Kähler classes.
    pub fn is_bi(&self) -> bool {
        matches!(self, Geometry::Kf0 { .. } | Geometry::F3 | Geometry::Wp1 | Geometry::Wp3)
    }

    fn kind(&self) -> Option<Kind> {
        match self {
            Geometry::Kf0 { .. } => Some(Kind::Kf0),
            Geometry::F3 => Some(Kind::F3),
            Geometry::Wp1 => Some(Kind::Wp1),
            Geometry::Wp3 => Some(Kind::Wp3),
            _ => None,
        }
    }

    /// Insertion basis of the classical pairing.
    pub fn basis(&self) -> Vec<Insertion> {
        let i = Insertion::new;
        match self {
            Geometry::Cpn { n, .. } => (0..=n - 2).map(|a| i(a, 0)).collect(),
            Geometry::Kf0 { .. } => vec![i(0, 0), i(1, 0), i(0, 1), i(2, 0), i(1, 1), i(3, 0)],
            Geometry::F3 => vec![i(0, 0), i(1, 0), i(0, 1), i(0, 2)],
            Geometry::Wp1 | Geometry::Wp3 => vec![i(0, 0), i(1, 0), i(0, 1), i(1, 1), i(0, 2), i(0, 3)],
            Geometry::Wp2 => vec![i(0, 0), i(1, 0), i(2, 0)],
        }
    }

    /// Checks that `a` is an admissible insertion for two-point numbers.
    pub fn validate_insertion(&self, a: &Insertion) -> Result<()> {
        let ok = match self {
            Geometry::Cpn { n, .. } => a.t == 0 && a.s <= n - 2,
            Geometry::Kf0 { .. } => a.s <= 1 && a.t <= 1,
            Geometry::F3 => matches!((a.s, a.t), (0, 0) | (1, 0) | (0, 1) | (0, 2)),
            Geometry::Wp1 | Geometry::Wp3 => a.s <= 1 && a.t <= 3,
            Geometry::Wp2 => a.t == 0 && a.s <= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInsertion(format!("{a} is not an insertion for {}", self.name())))
        }
    }

    fn validate_degree(&self, d: &Degree) -> Result<()> {
        match (self.is_bi(), d) {
            (true, Degree::Bi(b)) if !b.is_zero() => Ok(()),
            (false, Degree::Single(x)) if *x > 0 => Ok(()),
            _ => Err(Error::InvalidDegree(format!("degree {d} for {}", self.name()))),
        }
    }

    /// Contribution of one partition to the two-point number.
    pub fn amplitude(&self, sigma: &Partition, a: &Insertion, b: &Insertion) -> Result<Rational> {
        self.validate_insertion(a)?;
        self.validate_insertion(b)?;
        match (self, sigma) {
            (Geometry::Cpn { n, k }, Partition::Ordered(p)) => cpn::amplitude(*n, *k, p, a.s, b.s),
            (Geometry::Wp2, Partition::Ordered(p)) => wp2::amplitude(p, a.s, b.s),
            (g, Partition::Bi(p)) if g.is_bi() => toric2::amplitude(g.kind().unwrap(), p, (a.s, a.t), (b.s, b.t)),
            _ => Err(Error::InvalidArgument("partition type does not match the geometry".into())),
        }
    }

    /// `w(O_a O_b)_{0,d}`.
    pub fn two_point(&self, d: &Degree, a: &Insertion, b: &Insertion) -> Result<Rational> {
        self.validate_degree(d)?;
        self.validate_insertion(a)?;
        self.validate_insertion(b)?;
        match (self, d) {
            (Geometry::Cpn { n, k }, Degree::Single(x)) => two_point_cpn(*n, *k, *x, a.s, b.s),
            (Geometry::Wp2, Degree::Single(x)) => two_point_wp2(*x, a.s, b.s),
            (g, Degree::Bi(dd)) => {
                let kind = g.kind().unwrap();
                two_point_bi(kind, *dd, (a.s, a.t), (b.s, b.t))
            }
            _ => unreachable!("degree validated"),
        }
    }

    /// Total insertion degree `deg a + deg b` for which `w(O_a O_b)_{0,d}` can be nonzero.
    pub fn selection_degree(&self, d: &Degree) -> Result<i64> {
        self.validate_degree(d)?;
        Ok(match (self, d) {
            (Geometry::Cpn { n, k }, Degree::Single(x)) => *n as i64 - 3 + (*n as i64 - *k as i64) * *x as i64,
            (Geometry::Wp2, _) => 1,
            (Geometry::F3, Degree::Bi(b)) => 1 - b.da as i64 + 2 * b.db as i64,
            _ => 2,
        })
    }

    /// Admissible insertions for two-point numbers.
    pub fn insertions(&self) -> Vec<Insertion> {
        match self {
            Geometry::Wp2 => (0..=3).map(|s| Insertion::new(s, 0)).collect(),
            Geometry::Wp1 | Geometry::Wp3 => {
                (0..=1).flat_map(|s| (0..=3).map(move |t| Insertion::new(s, t))).collect()
            }
            _ => self.basis().into_iter().filter(|a| self.validate_insertion(a).is_ok()).collect(),
        }
    }

    /// Classical triple intersection `C_{abc}`.
    pub fn classical_triple(&self, a: &Insertion, b: &Insertion, c: &Insertion) -> Result<Rational> {
        let m = a.times(b).times(c);
        Ok(match self {
            Geometry::Cpn { n, k } => {
                if m.t == 0 && m.s + 2 == *n {
                    int(*k as i64)
                } else {
                    Rational::zero()
                }
            }
            Geometry::Kf0 { k } => match (m.s, m.t) {
                (3, 0) => k.clone(),
                (2, 1) => -k.clone(),
                (1, 2) => k - rat(1, 2),
                (0, 3) => rat(1, 2) - k,
                _ => Rational::zero(),
            },
            Geometry::F3 => toric2::classical_integral(Kind::F3, m.s, m.t)?,
            Geometry::Wp1 => int(4) * toric2::classical_integral(Kind::Wp1, m.s, m.t + 1)?,
            Geometry::Wp3 => int(6) * toric2::classical_integral(Kind::Wp3, m.s, m.t + 1)?,
            Geometry::Wp2 => {
                if m.t == 0 {
                    wp2::classical_integral(m.s)
                } else {
                    Rational::zero()
                }
            }
        })
    }

    /// Metric `η_{ab} = C_{1ab}` on [`Geometry::basis`].
    pub fn metric(&self) -> Result<Vec<Vec<Rational>>> {
        let basis = self.basis();
        basis
            .iter()
            .map(|a| basis.iter().map(|b| self.classical_triple(&Insertion::ONE, a, b)).collect())
            .collect()
    }

    /// Inverse metric `η^{ab}`.
    pub fn inverse_metric(&self) -> Result<Vec<Vec<Rational>>> {
        invert(&self.metric()?)
    }
}

/// Two-point number of a two-class target.
fn two_point_bi(kind: Kind, dd: BiDegree, a: (u32, u32), b: (u32, u32)) -> Result<Rational> {
    let parts = ordered_bipartitions(dd)?;
    parts
        .par_iter()
        .map(|s| toric2::amplitude(kind, s, a, b))
        .try_reduce(Rational::zero, |x, y| Ok(x + y))
}

pub fn two_point_kf0(dd: BiDegree, a: &Insertion, b: &Insertion) -> Result<Rational> {
    Geometry::Kf0 { k: int(1) }.two_point(&Degree::Bi(dd), a, b)
}

pub fn two_point_f3(dd: BiDegree, a: &Insertion, b: &Insertion) -> Result<Rational> {
    Geometry::F3.two_point(&Degree::Bi(dd), a, b)
}

pub fn two_point_wp1(dd: BiDegree, a: &Insertion, b: &Insertion) -> Result<Rational> {
    Geometry::Wp1.two_point(&Degree::Bi(dd), a, b)
}

pub fn two_point_wp3(dd: BiDegree, a: &Insertion, b: &Insertion) -> Result<Rational> {
    Geometry::Wp3.two_point(&Degree::Bi(dd), a, b)
}

/// Exact Gauss–Jordan inverse.
pub fn invert(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMetric)?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ins(s: &str) -> Insertion {
        s.parse().unwrap()
    }

    #[test]
    fn insertion_labels() {
        for (s, e) in [("1", (0, 0)), ("z", (1, 0)), ("w2", (0, 2)), ("zw", (1, 1)), ("z*w^2", (1, 2)), ("h3", (3, 0))] {
            assert_eq!(ins(s), Insertion::new(e.0, e.1), "{s}");
        }
        assert_eq!(Insertion::new(1, 2).label(), "zw2");
        assert!("q".parse::<Insertion>().is_err());
        assert!("".parse::<Insertion>().is_err());
    }

    #[test]
    fn degrees_parse() {
        assert_eq!("3".parse::<Degree>().unwrap(), Degree::Single(3));
        assert_eq!("1,2".parse::<Degree>().unwrap(), Degree::Bi(BiDegree::new(1, 2)));
        assert!("x".parse::<Degree>().is_err());
    }

    #[test]
    fn classical_triples() {
        let kf0 = Geometry::Kf0 { k: int(5) };
        assert_eq!(kf0.classical_triple(&ins("1"), &ins("z"), &ins("zw")).unwrap(), int(-5));
        assert_eq!(Geometry::F3.classical_triple(&ins("1"), &ins("1"), &ins("w2")).unwrap(), int(3));
        assert_eq!(Geometry::Wp1.classical_triple(&ins("1"), &ins("1"), &ins("zw2")).unwrap(), int(4));
        assert_eq!(Geometry::Wp1.classical_triple(&ins("1"), &ins("1"), &ins("w3")).unwrap(), int(8));
        assert_eq!(Geometry::Wp3.classical_triple(&ins("1"), &ins("z"), &ins("w2")).unwrap(), int(2));
        assert_eq!(Geometry::Wp3.classical_triple(&ins("1"), &ins("w"), &ins("w2")).unwrap(), int(4));
        assert_eq!(Geometry::Wp2.classical_triple(&ins("1"), &ins("z"), &ins("z")).unwrap(), int(2));
    }

    #[test]
    fn metrics_invert() {
        for g in [
            Geometry::Cpn { n: 5, k: 5 },
            Geometry::Kf0 { k: int(3) },
            Geometry::F3,
            Geometry::Wp1,
            Geometry::Wp2,
            Geometry::Wp3,
        ] {
            let m = g.metric().unwrap();
            let inv = g.inverse_metric().unwrap();
            let n = m.len();
            for i in 0..n {
                for j in 0..n {
                    let s: Rational = (0..n).map(|l| &m[i][l] * &inv[l][j]).sum();
                    assert_eq!(s, if i == j { int(1) } else { int(0) }, "{}", g.name());
                }
            }
        }
    }

    #[test]
    fn kf0_inverse_metric_matches_table() {
        let k = int(3);
        let inv = Geometry::Kf0 { k: k.clone() }.inverse_metric().unwrap();
        // rows/cols: 1, z, w, z^2, zw, z^3
        assert_eq!(inv[0][5], k.recip());
        assert_eq!(inv[1][3], -(int(2) * &k - int(1)) / &k);
        assert_eq!(inv[1][4], int(-2));
        assert_eq!(inv[2][3], int(-2));
        assert_eq!(inv[2][4], int(-2));
    }

    #[test]
    fn singular_metric_detected() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(invert(&m), Err(Error::SingularMetric));
    }

    #[test]
    fn printed_single_partition_values() {
        let a10 = BiPartition { parts: vec![BiDegree::new(1, 0)] };
        let b01 = BiPartition { parts: vec![BiDegree::new(0, 1)] };
        let kf0 = Geometry::Kf0 { k: int(1) };
        assert_eq!(kf0.amplitude(&Partition::Bi(a10.clone()), &ins("z"), &ins("z")).unwrap(), int(-2));
        assert_eq!(Geometry::F3.amplitude(&Partition::Bi(a10), &ins("1"), &ins("1")).unwrap(), int(5));
        assert_eq!(Geometry::F3.amplitude(&Partition::Bi(b01), &ins("w"), &ins("w2")).unwrap(), int(3));
    }
}
