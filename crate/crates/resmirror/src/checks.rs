//! Comparison of `F_3` two-point numbers with the printed quantum multiplication
//! matrices `C_z`, `C_w`.

use crate::error::Result;
use crate::exact::{int, rat, Rational};
use crate::geometries::{Degree, Geometry, Insertion};
use crate::partitions::BiDegree;
use crate::series::TwoPointSource;
use serde::Serialize;

/// Which divisor's matrix an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Divisor {
    Z,
    W,
}

/// Coefficient of `q_1^{d_a} q_2^{d_b}` in the `(α, β)` entry of `C_z` or `C_w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixTerm {
    pub divisor: Divisor,
    pub a: Insertion,
    pub b: Insertion,
    pub d: BiDegree,
    #[serde(with = "crate::exact::serde_rational")]
    pub coef: Rational,
}

type Rows = Vec<(Insertion, Insertion, Vec<((u32, u32), Rational)>)>;

/// Every term printed in the `F_3` matrices.
pub fn f3_matrix_terms() -> Vec<MatrixTerm> {
    let i = Insertion::new;
    let (one, z, w, w2) = (i(0, 0), i(1, 0), i(0, 1), i(0, 2));
    let z_rows: Rows = vec![
        (one, one, vec![((1, 0), int(5)), ((3, 1), int(1901))]),
        (one, z, vec![((2, 1), int(-32))]),
        (one, w, vec![((2, 1), int(39))]),
        (one, w2, vec![((1, 1), int(-6)), ((3, 2), rat(-3105, 2))]),
        (z, z, vec![((1, 1), int(1)), ((3, 2), int(192))]),
        (z, w, vec![((1, 1), int(-1)), ((3, 2), int(-288))]),
        (z, w2, vec![((2, 2), int(30))]),
        (w, w, vec![((3, 2), int(413))]),
        (w, w2, vec![((2, 2), int(-36))]),
        (w2, w2, vec![((1, 2), int(9)), ((3, 3), int(1296))]),
    ];
    let w_rows: Rows = vec![
        (one, one, vec![((3, 1), rat(1901, 3))]),
        (one, z, vec![((2, 1), int(-16))]),
        (one, w, vec![((2, 1), rat(39, 2))]),
        (one, w2, vec![((1, 1), int(-6)), ((3, 2), int(-1035))]),
        (z, z, vec![((1, 1), int(1)), ((3, 2), int(128))]),
        (z, w, vec![((1, 1), int(-1)), ((3, 2), int(-192))]),
        (z, w2, vec![((2, 2), int(30))]),
        (w, w, vec![((3, 2), rat(826, 3))]),
        (w, w2, vec![((0, 1), int(3)), ((2, 2), int(-36))]),
        (w2, w2, vec![((1, 2), int(18)), ((3, 3), int(1296))]),
    ];
    let mut out = Vec::new();
    for (div, rows) in [(Divisor::Z, z_rows), (Divisor::W, w_rows)] {
        for (a, b, ts) in rows {
            for ((da, db), coef) in ts {
                out.push(MatrixTerm { divisor: div, a, b, d: BiDegree::new(da, db), coef });
            }
        }
    }
    out
}

/// One comparison `d_a·w` (or `d_b·w`) against a matrix coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjecture2Row {
    pub term: MatrixTerm,
    #[serde(with = "crate::exact::serde_rational")]
    pub computed: Rational,
}

impl Conjecture2Row {
    pub fn agrees(&self) -> bool {
        self.computed == self.term.coef
    }
}

/// Evaluates every printed term.
pub fn check_conjecture2(src: &dyn TwoPointSource) -> Result<Vec<Conjecture2Row>> {
    let g = Geometry::F3;
    f3_matrix_terms()
        .into_iter()
        .map(|term| {
            let w = src.two_point(&g, &Degree::Bi(term.d), &term.a, &term.b)?;
            let m = match term.divisor {
                Divisor::Z => term.d.da,
                Divisor::W => term.d.db,
            };
            Ok(Conjecture2Row { computed: w * int(m as i64), term })
        })
        .collect()
}
