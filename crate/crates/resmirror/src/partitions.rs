//! Ordered partitions of a degree and axis-aligned bi-degree chains.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Composition of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrderedPartition {
    pub parts: Vec<u32>,
}

impl OrderedPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// Bi-degree `(d_a, d_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BiDegree {
    pub da: u32,
    pub db: u32,
}

impl BiDegree {
    pub const fn new(da: u32, db: u32) -> Self {
        BiDegree { da, db }
    }

    pub fn total(&self) -> u32 {
        self.da + self.db
    }

    pub fn is_zero(&self) -> bool {
        self.da == 0 && self.db == 0
    }

    /// Degree of an axis-aligned part.
    pub fn size(&self) -> u32 {
        self.da.max(self.db)
    }

    /// True for a `(d,0)` part.
    pub fn is_a(&self) -> bool {
        self.db == 0
    }

    /// Componentwise partial order.
    pub fn le(&self, o: &BiDegree) -> bool {
        self.da <= o.da && self.db <= o.db
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.da, self.db)
    }
}

/// Sequence of axis-aligned parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BiPartition {
    pub parts: Vec<BiDegree>,
}

impl BiPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn degree(&self) -> BiDegree {
        self.parts.iter().fold(BiDegree::new(0, 0), |a, p| BiDegree::new(a.da + p.da, a.db + p.db))
    }

    pub fn reversed(&self) -> BiPartition {
        BiPartition { parts: self.parts.iter().rev().copied().collect() }
    }
}

/// All `2^(d-1)` compositions of `d`, lexicographic in the part list.
pub fn ordered_partitions(d: i64) -> Result<Vec<OrderedPartition>> {
    if d <= 0 {
        return Err(Error::InvalidDegree(format!("ordered partitions of {d}")));
    }
    fn rec(left: u32, cur: &mut Vec<u32>, out: &mut Vec<OrderedPartition>) {
        if left == 0 {
            out.push(OrderedPartition { parts: cur.clone() });
            return;
        }
        for p in 1..=left {
            cur.push(p);
            rec(left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(1 << (d - 1).min(20));
    rec(d as u32, &mut Vec::new(), &mut out);
    Ok(out)
}

/// All sequences of `(d,0)` / `(0,d)` parts summing to `dd`, lexicographic in the
/// flattened part list.
pub fn ordered_bipartitions(dd: BiDegree) -> Result<Vec<BiPartition>> {
    if dd.is_zero() {
        return Err(Error::InvalidDegree("bi-degree (0,0)".into()));
    }
    fn rec(left: BiDegree, cur: &mut Vec<BiDegree>, out: &mut Vec<BiPartition>) {
        if left.is_zero() {
            out.push(BiPartition { parts: cur.clone() });
            return;
        }
        // flattened order: (0,d) parts sort before (d,0) parts
        for d in 1..=left.db {
            cur.push(BiDegree::new(0, d));
            rec(BiDegree::new(left.da, left.db - d), cur, out);
            cur.pop();
        }
        for d in 1..=left.da {
            cur.push(BiDegree::new(d, 0));
            rec(BiDegree::new(left.da - d, left.db), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dd, &mut Vec::new(), &mut out);
    Ok(out)
}

/// All bi-degrees `dd ≠ (0,0)` with total degree at most `max_total`.
pub fn bidegrees_upto(max_total: u32) -> Vec<BiDegree> {
    let mut out = Vec::new();
    for t in 1..=max_total {
        for da in (0..=t).rev() {
            out.push(BiDegree::new(da, t - da));
        }
    }
    out
}
