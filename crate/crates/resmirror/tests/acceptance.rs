//! Acceptance suite: one PASS/FAIL line per criterion, exact equality, wall-clock limits.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use resmirror::checks::check_conjecture2;
use resmirror::exact::{int, rat, Rational};
use resmirror::geometries::cpn::two_point_cpn;
use resmirror::geometries::wp2::two_point_wp2;
use resmirror::geometries::{Degree, Geometry, Insertion};
use resmirror::partitions::{ordered_partitions, BiDegree};
use resmirror::series::*;
use resmirror::vsc::{check_theorem1, lemma1_contour, VscTable};
use resmirror::Result;
use std::time::{Duration, Instant};

/// Mismatches collected while checking one criterion.
#[derive(Default)]
struct Log {
    checked: usize,
    failures: Vec<String>,
}

impl Log {
    fn eq(&mut self, what: impl Into<String>, got: &Rational, want: &Rational) {
        self.checked += 1;
        if got != want {
            self.failures.push(format!("{}: got {got}, expected {want}", what.into()));
        }
    }

    fn truth(&mut self, what: impl Into<String>, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn within(&mut self, what: &str, t: Duration, limit: Duration) {
        self.checked += 1;
        if t > limit {
            self.failures.push(format!("{what} took {t:.2?} (limit {limit:?})"));
        }
    }

    fn series(&mut self, name: &str, s: &GradedSeries, affine: Option<[Rational; 3]>, terms: &[((u32, u32), Rational)]) {
        if let Some(a) = affine {
            for (i, (label, v)) in ["x1", "x2", "const"].iter().zip(a.iter()).enumerate() {
                self.eq(format!("{name} {label}"), &s.affine[i], v);
            }
        }
        for ((a, b), c) in terms {
            self.eq(format!("{name} q1^{a} q2^{b}"), &s.coeff(BiDegree::new(*a, *b)), c);
        }
    }
}

fn big(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ins(s: &str) -> Insertion {
    s.parse().unwrap()
}

fn tot() -> Truncation {
    Truncation::Total
}

fn gf(g: &Geometry, a: &str, b: &str, d: u32) -> Result<GradedSeries> {
    build_generating_function(g, &ins(a), &ins(b), d, tot(), &Direct)
}

fn c1() -> Result<Log> {
    let mut log = Log::default();
    let cases = [(1, 1, 5, int(600)), (1, 2, 4, int(3850)), (1, 3, 3, int(6725)), (2, 3, 5, int(528000)), (2, 4, 4, int(1731250)), (3, 5, 5, int(52200000))];
    for (d, a, b, want) in cases {
        let t = Instant::now();
        let got = two_point_cpn(7, 5, d, a, b)?;
        log.within(&format!("w(h{a},h{b})_{d}"), t.elapsed(), Duration::from_secs(10));
        log.eq(format!("N=7 k=5 d={d} (h{a},h{b})"), &got, &want);
    }
    Ok(log)
}

fn c2() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let vals = [
        (1, 0, 2, int(3850)),
        (2, 0, 2, int(3589125)),
        (3, 0, 2, rat(16126540000, 3)),
        (1, 1, 1, int(6725)),
        (2, 1, 1, rat(16482625, 2)),
        (3, 1, 1, rat(44704818125, 3)),
    ];
    for (d, a, b, want) in vals {
        log.eq(format!("N=5 k=5 d={d} (h{a},h{b})"), &two_point_cpn(5, 5, d, a, b)?, &want);
    }
    let g = Geometry::Cpn { n: 5, k: 5 };
    let m = mirror_map(&g, 3, tot(), &Direct)?;
    log.series("t(x)", &m.t[0], Some([int(1), int(0), int(0)]), &[((1, 0), int(770)), ((2, 0), int(717825)), ((3, 0), rat(3225308000, 3))]);
    let f = gf(&g, "h", "h", 3)?;
    let gw = transform(&f, &m)?;
    log.series("GW(h,h)", &gw, Some([int(5), int(0), int(0)]), &[((1, 0), int(2875)), ((2, 0), rat(4876875, 2)), ((3, 0), rat(8564575000, 3))]);
    log.within("quintic pipeline", t.elapsed(), Duration::from_secs(120));
    Ok(log)
}

fn c3() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let vals = [
        (1, 0, 4, int(307250172)),
        (1, 1, 3, int(817713468)),
        (1, 2, 2, int(1122806529)),
        (2, 0, 3, int(75644409992388462)),
        (2, 1, 2, rat(733562379269675757, 4)),
        (3, 0, 2, big("34343397483304162555939158")),
        (3, 1, 1, big("56677396498174471672277559")),
    ];
    for (d, a, b, want) in vals {
        log.eq(format!("N=8 k=9 d={d} (h{a},h{b})"), &two_point_cpn(8, 9, d, a, b)?, &want);
    }
    let mut table = VscTable::new(9)?;
    let e = gmt_upto3(8, 9, &mut table)?;
    let gw = [
        (1, 0, 4, int(0)),
        (1, 1, 3, int(510463296)),
        (1, 2, 2, int(815556357)),
        (2, 0, 3, int(0)),
        (2, 1, 2, rat(319615925538369285, 4)),
        (3, 0, 2, int(0)),
        (3, 1, 1, big("12112667926597160835676659")),
    ];
    for (d, a, b, want) in gw {
        match e.iter().find(|x| x.d == d && x.a == a && x.b == b) {
            Some(x) => log.eq(format!("GW d={d} (h{a},h{b})"), &x.value, &want),
            None => log.truth(format!("GW d={d} (h{a},h{b}) missing"), false),
        }
    }
    log.within("non-nef pipeline", t.elapsed(), Duration::from_secs(300));
    Ok(log)
}

fn c4() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let g = Geometry::Kf0 { k: int(1) };
    let (k, h) = (int(1), rat(1, 2));
    let z = int(0);
    log.series(
        "w(1,zw)",
        &gf(&g, "1", "zw", 4)?,
        Some([-k.clone(), &k - &h, z.clone()]),
        &[
            ((1, 0), int(-1)),
            ((0, 1), int(-1)),
            ((2, 0), rat(-3, 2)),
            ((1, 1), int(-6)),
            ((0, 2), rat(-3, 2)),
            ((3, 0), rat(-10, 3)),
            ((2, 1), int(-30)),
            ((1, 2), int(-30)),
            ((0, 3), rat(-10, 3)),
            ((4, 0), rat(-35, 4)),
            ((3, 1), int(-140)),
            ((2, 2), int(-315)),
            ((1, 3), int(-140)),
            ((0, 4), rat(-35, 4)),
        ],
    );
    let zz = gf(&g, "z", "z", 4)?;
    log.series(
        "w(z,z)",
        &zz,
        Some([k.clone(), -k.clone(), z.clone()]),
        &[
            ((1, 0), int(-2)),
            ((2, 0), int(-5)),
            ((1, 1), int(-8)),
            ((3, 0), rat(-44, 3)),
            ((2, 1), int(-76)),
            ((1, 2), int(-32)),
            ((4, 0), rat(-93, 2)),
            ((3, 1), int(-504)),
            ((2, 2), int(-672)),
            ((1, 3), int(-128)),
        ],
    );
    let zw = gf(&g, "z", "w", 4)?;
    log.series(
        "w(z,w)",
        &zw,
        Some([-k.clone(), &k - &h, z.clone()]),
        &[
            ((1, 0), int(-1)),
            ((0, 1), int(-1)),
            ((2, 0), rat(-3, 2)),
            ((1, 1), int(-10)),
            ((0, 2), rat(-3, 2)),
            ((3, 0), rat(-10, 3)),
            ((2, 1), int(-58)),
            ((1, 2), int(-58)),
            ((0, 3), rat(-10, 3)),
            ((4, 0), rat(-35, 4)),
            ((3, 1), int(-292)),
            ((2, 2), int(-749)),
            ((1, 3), int(-292)),
            ((0, 4), rat(-35, 4)),
        ],
    );
    let aux = gf(&g, "1", "z2", 4)?;
    log.series("w(1,z2)", &aux, Some([k.clone(), -k.clone(), z.clone()]), &[]);
    log.truth("w(1,z2) has no quantum part", aux.terms.is_empty());
    let m = mirror_map(&g, 4, tot(), &Direct)?;
    let q = [
        ((1, 0), int(2)),
        ((0, 1), int(2)),
        ((2, 0), int(3)),
        ((1, 1), int(12)),
        ((0, 2), int(3)),
        ((3, 0), rat(20, 3)),
        ((2, 1), int(60)),
        ((1, 2), int(60)),
        ((0, 3), rat(20, 3)),
        ((4, 0), rat(35, 2)),
        ((3, 1), int(280)),
        ((2, 2), int(630)),
        ((1, 3), int(280)),
        ((0, 4), rat(35, 2)),
    ];
    log.series("t1", &m.t[0], Some([int(1), z.clone(), z.clone()]), &q);
    log.series("t2", &m.t[1], Some([z.clone(), int(1), z.clone()]), &q);
    log.series(
        "GW(z,z)",
        &transform(&zz, &m)?,
        Some([k.clone(), -k.clone(), z.clone()]),
        &[
            ((1, 0), int(-2)),
            ((2, 0), int(-1)),
            ((1, 1), int(-4)),
            ((3, 0), rat(-2, 3)),
            ((2, 1), int(-24)),
            ((1, 2), int(-6)),
            ((4, 0), rat(-1, 2)),
            ((1, 3), int(-8)),
            ((3, 1), int(-72)),
            ((2, 2), int(-130)),
        ],
    );
    log.series(
        "GW(z,w)",
        &transform(&zw, &m)?,
        Some([-k.clone(), &k - &h, z]),
        &[((1, 1), int(-4)), ((2, 1), int(-12)), ((1, 2), int(-12)), ((1, 3), int(-24)), ((2, 2), int(-130)), ((3, 1), int(-24))],
    );
    log.within("local F0 pipeline", t.elapsed(), Duration::from_secs(600));
    Ok(log)
}

fn c5() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let g = Geometry::F3;
    let vals = [
        ((1, 0), "1", "1", int(5)),
        ((0, 1), "w", "w2", int(3)),
        ((1, 1), "1", "w2", int(-6)),
        ((1, 1), "z", "z", int(1)),
        ((1, 1), "z", "w", int(-1)),
        ((2, 1), "1", "z", int(-16)),
        ((2, 1), "1", "w", rat(39, 2)),
        ((3, 1), "1", "1", rat(1901, 3)),
        ((2, 2), "z", "w2", int(15)),
        ((2, 2), "w", "w2", int(-18)),
        ((3, 2), "1", "w2", rat(-1035, 2)),
        ((3, 2), "z", "z", int(64)),
        ((3, 2), "z", "w", int(-96)),
        ((3, 2), "w", "w", rat(413, 3)),
        ((3, 3), "w2", "w2", int(432)),
    ];
    for ((da, db), a, b, want) in vals {
        let got = g.two_point(&Degree::Bi(BiDegree::new(da, db)), &ins(a), &ins(b))?;
        log.eq(format!("w({a},{b})_({da},{db})"), &got, &want);
    }
    for r in check_conjecture2(&Direct)? {
        let m = &r.term;
        log.eq(format!("C_{:?} ({},{}) at ({},{})", m.divisor, m.a, m.b, m.d.da, m.d.db), &r.computed, &m.coef);
    }
    log.within("F3 checks", t.elapsed(), Duration::from_secs(600));
    Ok(log)
}

fn wp_tables(log: &mut Log, g: &Geometry, rows: &[(&str, &str, Option<[i64; 2]>, Vec<((u32, u32), Rational)>)]) -> Result<()> {
    for (a, b, affine, terms) in rows {
        let s = gf(g, a, b, 3)?;
        let aff = affine.map(|[x, y]| [int(x), int(y), int(0)]);
        log.series(&format!("{} w({a},{b})", g.name()), &s, aff, terms);
    }
    Ok(())
}

fn c6() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let g = Geometry::Wp1;
    let one_zw = vec![
        ((0, 1), int(416)),
        ((1, 0), int(-4)),
        ((0, 2), int(39120)),
        ((2, 0), int(-6)),
        ((1, 1), int(192)),
        ((0, 3), rat(16567040, 3)),
        ((3, 0), rat(-40, 3)),
        ((1, 2), int(133920)),
        ((2, 1), int(192)),
    ];
    let mut z_w = one_zw.clone();
    z_w[4].1 = int(832);
    z_w[7].1 = int(375648);
    z_w[8].1 = int(832);
    wp_tables(
        &mut log,
        &g,
        &[
            ("1", "w2", Some([4, 8]), vec![((0, 1), int(1024)), ((0, 2), int(103872)), ((0, 3), rat(46099456, 3)), ((1, 2), int(216576))]),
            ("1", "zw", Some([0, 4]), one_zw),
            ("z", "z", None, vec![((1, 0), int(4)), ((2, 0), int(10)), ((1, 1), int(832)), ((3, 0), rat(88, 3)), ((1, 2), int(199744)), ((2, 1), int(832))]),
            ("w", "w", Some([4, 8]), vec![((0, 1), int(1664)), ((0, 2), int(210880)), ((0, 3), rat(108286976, 3)), ((1, 2), int(486016))]),
            ("z", "w", Some([0, 4]), z_w),
        ],
    )?;
    let m = mirror_map(&g, 3, tot(), &Direct)?;
    log.series(
        "t1",
        &m.t[0],
        Some([int(1), int(0), int(0)]),
        &[
            ((0, 1), int(48)),
            ((0, 2), int(6408)),
            ((0, 3), int(1080448)),
            ((1, 2), int(-12816)),
            ((1, 0), int(2)),
            ((2, 0), int(3)),
            ((1, 1), int(-96)),
            ((3, 0), rat(20, 3)),
            ((2, 1), int(-96)),
        ],
    );
    log.series(
        "t2",
        &m.t[1],
        Some([int(0), int(1), int(0)]),
        &[
            ((0, 1), int(104)),
            ((1, 0), int(-1)),
            ((0, 2), int(9780)),
            ((2, 0), rat(-3, 2)),
            ((1, 1), int(48)),
            ((0, 3), rat(4141760, 3)),
            ((3, 0), rat(-10, 3)),
            ((1, 2), int(33480)),
            ((2, 1), int(48)),
        ],
    );
    // the printed rows, matched to the pairs whose classical terms they carry
    log.series(
        "GW(w,w)",
        &transform(&gf(&g, "w", "w", 3)?, &m)?,
        Some([int(4), int(8), int(0)]),
        &[((0, 1), int(640)), ((0, 2), int(40448)), ((1, 1), int(640)), ((0, 3), rat(7787008, 3)), ((1, 2), int(288896))],
    );
    log.series(
        "GW(z,z)",
        &transform(&gf(&g, "z", "z", 3)?, &m)?,
        Some([int(0), int(0), int(0)]),
        &[((1, 0), int(4)), ((1, 1), int(640)), ((2, 0), int(2)), ((1, 2), int(72224)), ((3, 0), rat(4, 3))],
    );
    log.series(
        "GW(z,w)",
        &transform(&gf(&g, "z", "w", 3)?, &m)?,
        Some([int(0), int(4), int(0)]),
        &[((1, 1), int(640)), ((1, 2), int(144448))],
    );
    log.within("P(1,1,2,2,2) pipeline", t.elapsed(), Duration::from_secs(900));
    Ok(log)
}

fn c7() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let w = [int(744), int(473652), int(451734080), int(510531007770), rat(3169342733223744, 5)];
    for (i, wd) in w.iter().enumerate() {
        let d = i as u32 + 1;
        log.eq(format!("w(1,z)_{d}"), &two_point_wp2(d, 0, 1)?, &(wd * int(2)));
    }
    let e = j_coefficients(6, &Direct)?;
    let j = [744i64, 196884, 21493760, 864299970, 20245856256, 333202640600];
    for (i, jd) in j.iter().enumerate() {
        log.eq(format!("j_{}", i + 1), &e.j[i], &int(*jd));
    }
    log.within("K3 pipeline", t.elapsed(), Duration::from_secs(900));
    Ok(log)
}

fn c8() -> Result<Log> {
    let mut log = Log::default();
    let t = Instant::now();
    let one_zw = vec![
        ((0, 1), int(1488)),
        ((1, 0), int(-2)),
        ((0, 2), int(947304)),
        ((2, 0), int(-3)),
        ((1, 1), int(480)),
        ((0, 3), int(903468160)),
        ((3, 0), rat(-20, 3)),
        ((1, 2), int(2859408)),
        ((2, 1), int(480)),
    ];
    let mut z_w = one_zw.clone();
    z_w[4].1 = int(2976);
    z_w[7].1 = int(9198000);
    z_w[8].1 = int(2976);
    wp_tables(
        &mut log,
        &Geometry::Wp3,
        &[
            ("1", "w2", Some([2, 4]), vec![((0, 1), int(3456)), ((0, 2), int(2335968)), ((0, 3), int(2313054720)), ((1, 2), int(4836096))]),
            ("1", "zw", Some([0, 2]), one_zw),
            ("z", "z", None, vec![((1, 0), int(2)), ((2, 0), int(5)), ((1, 1), int(2976)), ((3, 0), rat(44, 3)), ((1, 2), int(4896288)), ((2, 1), int(2976))]),
            ("w", "w", Some([2, 4]), vec![((0, 1), int(5952)), ((0, 2), int(5089248)), ((0, 3), int(5867470336)), ((1, 2), int(12006720))]),
            ("z", "w", Some([0, 2]), z_w),
        ],
    )?;
    log.within("P(1,1,2,2,6) pipeline", t.elapsed(), Duration::from_secs(900));
    Ok(log)
}

fn c9() -> Result<Log> {
    let mut log = Log::default();
    for (n, k, d) in [(5, 5, 2), (6, 6, 2), (7, 5, 2), (8, 9, 2), (6, 4, 2)] {
        let r = check_theorem1(n, k, d)?;
        log.truth(format!("Theorem 1 at ({n},{k},{d})"), r.agrees() && !r.rows.is_empty());
    }
    for d in 1..=12 {
        log.truth(format!("2^(d-1) compositions at d={d}"), ordered_partitions(d)?.len() == 1 << (d - 1));
    }
    let geos = [
        Geometry::Cpn { n: 5, k: 5 },
        Geometry::Cpn { n: 7, k: 5 },
        Geometry::Cpn { n: 8, k: 9 },
        Geometry::Kf0 { k: int(1) },
        Geometry::F3,
        Geometry::Wp1,
        Geometry::Wp2,
        Geometry::Wp3,
    ];
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for g in &geos {
        let insertions = g.insertions();
        let degrees: Vec<Degree> = if g.is_bi() {
            [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)].iter().map(|&(a, b)| Degree::Bi(BiDegree::new(a, b))).collect()
        } else {
            (1..=3).map(Degree::Single).collect()
        };
        // insertion symmetry over every pair at the two lowest degrees
        for d in degrees.iter().take(2) {
            for a in &insertions {
                for b in &insertions {
                    if a < b {
                        log.eq(format!("{} symmetry {a},{b} at {d}", g.name()), &g.two_point(d, a, b)?, &g.two_point(d, b, a)?);
                    }
                }
            }
        }
        let mut found = 0;
        let mut tries = 0;
        while found < 20 && tries < 10_000 {
            tries += 1;
            let d = degrees[rng.random_range(0..degrees.len())];
            let a = insertions[rng.random_range(0..insertions.len())];
            let b = insertions[rng.random_range(0..insertions.len())];
            if (a.degree() + b.degree()) as i64 == g.selection_degree(&d)? {
                continue;
            }
            found += 1;
            log.eq(format!("{} off-rule w({a},{b})_{d}", g.name()), &g.two_point(&d, &a, &b)?, &int(0));
        }
        log.truth(format!("{}: 20 off-rule samples", g.name()), found == 20);
    }
    for a in 0..=6 {
        for b in 0..=6 {
            log.eq(format!("(8,4) d=2 (h{a},h{b})"), &two_point_cpn(8, 4, 2, a, b)?, &int(0));
        }
    }
    for g in [Geometry::Cpn { n: 5, k: 5 }, Geometry::Kf0 { k: int(1) }, Geometry::Wp1, Geometry::Wp2, Geometry::Wp3] {
        let m = mirror_map(&g, 3, tot(), &Direct)?;
        let id: Vec<GradedSeries> = (0..m.t.len()).map(|i| GradedSeries::coordinate(i, 3)).collect();
        log.truth(format!("{} t∘x = id", g.name()), m.round_trip_t()? == id);
        log.truth(format!("{} x∘t = id", g.name()), m.round_trip_x()? == id);
    }
    let (g1, g7) = (Geometry::Kf0 { k: int(1) }, Geometry::Kf0 { k: int(7) });
    let (m1, m7) = (mirror_map(&g1, 3, tot(), &Direct)?, mirror_map(&g7, 3, tot(), &Direct)?);
    log.truth("kf0 mirror map k-free", m1 == m7);
    for (a, b) in [("z", "z"), ("z", "w"), ("w", "w")] {
        let x1 = transform(&gf(&g1, a, b, 3)?, &m1)?;
        let x7 = transform(&gf(&g7, a, b, 3)?, &m7)?;
        log.truth(format!("kf0 GW({a},{b}) k-free"), x1.terms == x7.terms);
    }
    let e = j_coefficients(6, &Direct)?;
    log.truth("j reversion recovers w", w_from_j(&e.j)? == e.w);
    for (n, k) in [(5, 5), (6, 4), (7, 5)] {
        let mut t = VscTable::new(k)?;
        for i in 0..=t.top(n, 2).map_or(-1, |x| x as i64) {
            log.eq(format!("E-contour ({n},{k},2) n={i}"), &(lemma1_contour(n, k, 2, i)? * int(2)), &t.value(n, 2, i)?);
        }
    }
    Ok(log)
}

fn main() {
    type Criterion = (&'static str, fn() -> Result<Log>);
    let criteria: [Criterion; 9] = [
        ("1 CP^6 degree-5 Fano two-point values", c1),
        ("2 quintic values, mirror map, GW invariants", c2),
        ("3 non-nef N=8 k=9 values and GW invariants", c3),
        ("4 local F0 series, mirror maps, transformed series", c4),
        ("5 F3 values and quantum multiplication matrices", c5),
        ("6 P(1,1,2,2,2) series, mirror maps, GW series", c6),
        ("7 K3 two-point values and j coefficients", c7),
        ("8 P(1,1,2,2,6) series", c8),
        ("9 property suites", c9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let r = f();
        let el = t.elapsed();
        match r {
            Ok(log) if log.failures.is_empty() => {
                println!("PASS  criterion {name}  ({} checks, {el:.2?})", log.checked);
            }
            Ok(log) => {
                failed += 1;
                println!("FAIL  criterion {name}  ({} of {} checks failed, {el:.2?})", log.failures.len(), log.checked);
                for m in &log.failures {
                    println!("      {m}");
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  criterion {name}  (error: {e})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
