//! Acceptance criteria, all at zero tolerance. Prints one line per criterion
//! and fails if any criterion fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use hhpush::pushforward::{route_a, route_b};
use hhpush::suites::{self, Ctx, ToddSign};
use hhpush_core::forms::{Cochain, Form, OMEGA};
use hhpush_core::homology::homology_dims;
use hhpush_core::scene::builtin_scene;
use hhpush_core::{signs, Scene};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const ALL_SCENES: &[&str] = &["A1", "A2", "P1", "A1C", "A1T"];

/// Runs `suite` on each scene and returns the failing check ids.
fn suite_failures(suite: &str, scenes: &[&str]) -> Vec<String> {
    let mut bad = Vec::new();
    for name in scenes {
        let s = builtin_scene(name).unwrap();
        let ctx = Ctx { scene: &s, seed: 0, trunc: s.trunc, window: s.window, todd: ToddSign::Plus, scale: 1.0 };
        let r = suites::run(suites::find(suite).unwrap(), &ctx, false);
        for c in r.checks.iter().filter(|c| !c.passed()) {
            bad.push(format!("{} {}: {:?} {:?}", name, c.id, c.note, c.counterexample));
        }
    }
    bad
}

fn from_suite(suite: &str, scenes: &[&str]) -> Result<String, String> {
    let bad = suite_failures(suite, scenes);
    if bad.is_empty() {
        Ok(format!("scenes {}", scenes.join(" ")))
    } else {
        Err(bad.join("; "))
    }
}

fn c1() -> Result<String, String> {
    from_suite("dsquare", ALL_SCENES)
}

fn c2() -> Result<String, String> {
    from_suite("hkr-xf", ALL_SCENES)
}

fn c3() -> Result<String, String> {
    from_suite("hkr-a", ALL_SCENES)
}

fn c4() -> Result<String, String> {
    from_suite("hkr-y", ALL_SCENES)
}

fn c5() -> Result<String, String> {
    from_suite("hq", &["P1", "A1C", "A1T"])
}

fn c6() -> Result<String, String> {
    from_suite("lax", &["P1", "A1C", "A1T"])
}

fn c7() -> Result<String, String> {
    from_suite("phi", ALL_SCENES)
}

fn c8() -> Result<String, String> {
    from_suite("todd", &["P1", "A2", "A1C", "A1T"])
}

fn c9() -> Result<String, String> {
    let mut works = Vec::new();
    let mut lines = Vec::new();
    for name in ALL_SCENES {
        let s = builtin_scene(name).unwrap();
        let (total, bad, _) = suites::diagram_counts(&s, 3);
        lines.push(format!("{} {} chains, mismatches +{} -{}", name, total, bad[0], bad[1]));
        works.push([bad[0] == 0, bad[1] == 0]);
    }
    let plus = works.iter().all(|w| w[0]);
    let minus = works.iter().all(|w| w[1]);
    match (plus, minus) {
        (true, false) => Ok(format!("todd-sign plus; {}", lines.join(", "))),
        (false, true) => Ok(format!("todd-sign minus; {}", lines.join(", "))),
        (true, true) => Err(format!("both signs work: {}", lines.join(", "))),
        (false, false) => Err(format!("neither sign works: {}", lines.join(", "))),
    }
}

fn c10() -> Result<String, String> {
    let pf = |name: &str| {
        let s = builtin_scene(name).unwrap();
        let p = hhpush::pushforward::pushforward(&s, ToddSign::Plus, s.window).map_err(|e| e.to_string())?;
        Ok::<_, String>((s, p))
    };
    let (a2, p) = pf("A2")?;
    let a = route_a(&a2, ToddSign::Plus).map_err(|e| e.to_string())?;
    if !p.equal || a.is_zero() {
        return Err(format!("A2: equal {} route A {}", p.equal, p.route_a));
    }
    // δ(1) = df ∧ dx/x = (y dx + x dy) ∧ dx/x = dy∧dx
    let r = a2.ring(&[0]).unwrap();
    let oracle = Cochain::single(&[0], Form::dvar(r, 1).wedge(&Form::dvar(r, 0)));
    let sign = if a == oracle {
        "+"
    } else if a == oracle.scale(&signs::of("ses.delta", 1)) {
        "-"
    } else {
        return Err(format!("A2: route A {:?} is not ±dy∧dx", a));
    };
    let (a1, p) = pf("A1")?;
    if !p.equal || !route_b(&a1).map_err(|e| e.to_string())?.is_zero() || !route_a(&a1, ToddSign::Plus).unwrap().is_zero() {
        return Err(format!("A1: routes {} and {}", p.route_a, p.route_b));
    }
    let (_, p) = pf("P1")?;
    if !p.agree || p.stable != Some(true) || p.boundary != Some(true) {
        return Err(format!("P1: agree {} stable {:?} boundary {:?}", p.agree, p.stable, p.boundary));
    }
    Ok(format!("A2 routes equal {}dy∧dx; A1 0 = 0; P1 equal {}, stable, class nonzero {:?}", sign, p.equal, p.class_nonzero))
}

/// Independent windowed homology of `(Ω, −df∧)`: dense matrices over
/// `BigRational`, assembled from per-scene tables of monomial restriction maps.
mod oracle {
    use super::*;

    pub struct Chart {
        pub tuple: Vec<usize>,
        pub weights: Vec<i64>,
        pub inverted: Vec<bool>,
        /// `f` as `(exponents, coefficient)`.
        pub f: Vec<(Vec<i64>, i64)>,
    }

    pub struct Table {
        pub charts: Vec<Chart>,
        /// `(from, to, rows)`: source variable `i` maps to the target monomial with exponents `rows[i]`.
        pub maps: Vec<(Vec<usize>, Vec<usize>, Vec<Vec<i64>>)>,
        pub wf: i64,
    }

    pub fn table(name: &str) -> Table {
        let ch = |tuple: Vec<usize>, weights: Vec<i64>, inverted: Vec<bool>, f: Vec<(Vec<i64>, i64)>| Chart { tuple, weights, inverted, f };
        match name {
            "A1" => Table { charts: vec![ch(vec![0], vec![1], vec![false], vec![(vec![2], 1)])], maps: vec![], wf: 2 },
            "A2" => Table { charts: vec![ch(vec![0], vec![1, 1], vec![false, false], vec![(vec![1, 1], 1)])], maps: vec![], wf: 2 },
            "P1" => Table {
                charts: vec![
                    ch(vec![0], vec![1], vec![false], vec![]),
                    ch(vec![1], vec![-1], vec![false], vec![]),
                    ch(vec![0, 1], vec![1], vec![true], vec![]),
                ],
                maps: vec![(vec![0], vec![0, 1], vec![vec![1]]), (vec![1], vec![0, 1], vec![vec![-1]])],
                wf: 0,
            },
            _ => panic!("no oracle table for {}", name),
        }
    }

    type Key = (usize, u32, Vec<i64>);
    type Vector = BTreeMap<Key, BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// `dx_j ∧ (mask)` or `(mask) ∧ dx_j`, as a sign, `None` if `j ∈ mask`.
    fn insert(mask: u32, j: usize, left: bool) -> Option<(u32, i64)> {
        if mask & (1 << j) != 0 {
            return None;
        }
        let moved = if left { (mask & ((1 << j) - 1)).count_ones() } else { (mask >> (j + 1)).count_ones() };
        Some((mask | (1 << j), if moved % 2 == 0 { 1 } else { -1 }))
    }

    fn add(v: &mut Vector, k: Key, c: BigRational) {
        let e = v.entry(k.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            v.remove(&k);
        }
    }

    /// Pullback of `x^e dx_mask` along a monomial map, as `(mask, exps) -> coefficient`.
    fn pullback(rows: &[Vec<i64>], mask: u32, e: &[i64]) -> Vec<(u32, Vec<i64>, BigRational)> {
        let n = rows[0].len();
        let mut base = vec![0i64; n];
        for (i, row) in rows.iter().enumerate() {
            for j in 0..n {
                base[j] += e[i] * row[j];
            }
        }
        let mut terms = vec![(0u32, base, q(1))];
        for (i, row) in rows.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            // d(x^row) = Σ_j row_j x^(row − e_j) dx_j, wedged on the right
            let mut next = Vec::new();
            for (m, ex, c) in &terms {
                for j in 0..n {
                    if row[j] == 0 {
                        continue;
                    }
                    if let Some((m2, s)) = insert(*m, j, false) {
                        let mut ex2 = ex.clone();
                        for t in 0..n {
                            ex2[t] += row[t];
                        }
                        ex2[j] -= 1;
                        next.push((m2, ex2, c * q(row[j] * s)));
                    }
                }
            }
            terms = next;
        }
        terms
    }

    pub fn dims(name: &str, window: i64) -> (usize, usize) {
        let tb = table(name);
        let weight = |c: &Chart, mask: u32, e: &[i64]| -> i64 {
            let k = mask.count_ones() as i64;
            e.iter().zip(&c.weights).map(|(a, w)| a * w).sum::<i64>()
                + (0..c.weights.len()).filter(|j| mask & (1 << j) != 0).map(|j| c.weights[j]).sum::<i64>()
                - tb.wf * k
        };
        // every monomial form with |W| ≤ window, by brute force over a box
        let bound = window + 2 * tb.wf + 4;
        let mut basis: [Vec<Key>; 2] = [vec![], vec![]];
        for (ci, c) in tb.charts.iter().enumerate() {
            let n = c.weights.len();
            let p = c.tuple.len() as u32 - 1;
            let mut exps: Vec<Vec<i64>> = vec![vec![]];
            for i in 0..n {
                let lo = if c.inverted[i] { -bound } else { 0 };
                exps = exps.into_iter().flat_map(|v| (lo..=bound).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })).collect();
            }
            for mask in 0..(1u32 << n) {
                for e in &exps {
                    if weight(c, mask, e).abs() <= window {
                        basis[((p + mask.count_ones()) % 2) as usize].push((ci, mask, e.clone()));
                    }
                }
            }
        }
        let by_tuple: BTreeMap<Vec<usize>, usize> = tb.charts.iter().enumerate().map(|(i, c)| (c.tuple.clone(), i)).collect();
        let apply = |(ci, mask, e): &Key| -> Vector {
            let c = &tb.charts[*ci];
            let p = c.tuple.len() as i64 - 1;
            let mut out = Vector::new();
            // (−1)^p · (−df ∧ ω)
            for (fe, fc) in &c.f {
                for j in 0..c.weights.len() {
                    if fe[j] == 0 {
                        continue;
                    }
                    if let Some((m2, s)) = insert(*mask, j, true) {
                        let mut e2: Vec<i64> = e.iter().zip(fe).map(|(a, b)| a + b).collect();
                        e2[j] -= 1;
                        let sign = if p % 2 == 0 { -1 } else { 1 };
                        add(&mut out, (*ci, m2, e2), q(sign * s * fc * fe[j]));
                    }
                }
            }
            // Čech: (δω)_T = Σ_m (−1)^m ω_{T∖t_m}|_T
            for (from, to, rows) in &tb.maps {
                if from != &c.tuple {
                    continue;
                }
                let pos = to.iter().position(|x| !from.contains(x)).unwrap() as i64;
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                for (m2, e2, coef) in pullback(rows, *mask, e) {
                    add(&mut out, (by_tuple[to], m2, e2), coef * q(sign));
                }
            }
            out
        };
        let index: [BTreeMap<Key, usize>; 2] = [0, 1].map(|x| basis[x].iter().cloned().enumerate().map(|(i, k)| (k, i)).collect());
        let mut ranks = [0usize; 2];
        for par in 0..2 {
            let cols = basis[par].len();
            let rows = basis[1 - par].len();
            let mut m = vec![vec![BigRational::zero(); cols]; rows];
            for (col, k) in basis[par].iter().enumerate() {
                let img = apply(k);
                // d² = 0 on the oracle's own terms
                let mut dd = Vector::new();
                for (k2, c) in &img {
                    for (k3, c3) in apply(k2) {
                        add(&mut dd, k3, c * &c3);
                    }
                }
                assert!(dd.is_empty(), "oracle d^2 != 0 on {:?}", k);
                for (k2, c) in img {
                    let row = *index[1 - par].get(&k2).unwrap_or_else(|| panic!("{:?} leaves the window", k2));
                    m[row][col] = c;
                }
            }
            ranks[par] = rank(m);
        }
        (basis[0].len() - ranks[0] - ranks[1], basis[1].len() - ranks[0] - ranks[1])
    }

    fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = BigRational::one() / &m[r][c];
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = &m[i][c] * &inv;
                    for j in c..cols {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = |v: &[&[i64]]| v.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<Vec<_>>>();
        assert_eq!(rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert!(q(-3).is_negative());
    }
}

fn c11() -> Result<String, String> {
    let golden = [("A1", (0, 1)), ("A2", (1, 0)), ("P1", (2, 0))];
    let mut out = Vec::new();
    for (name, want) in golden {
        let s: Scene = builtin_scene(name).unwrap();
        let h = homology_dims(&OMEGA, &s, s.window).map_err(|e| e.to_string())?;
        let o = oracle::dims(name, s.window as i64);
        if (h.even, h.odd) != o || o != want || !h.stable {
            return Err(format!("{}: engine {:?} oracle {:?} golden {:?} stable {}", name, (h.even, h.odd), o, want, h.stable));
        }
        out.push(format!("{} {:?}", name, o));
    }
    Ok(out.join(", "))
}

fn sources(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                if p.file_name().map_or(false, |n| n != "target") {
                    stack.push(p);
                }
            } else if p.extension().map_or(false, |e| e == "rs") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Every `signs::of` / `signs::odd` id resolves in the ledger, and no raw
/// `Rat::sign` appears outside the ledger and the rational type itself.
fn c12() -> Result<String, String> {
    let crates = Path::new(env!("CARGO_MANIFEST_DIR")).parent().unwrap();
    let mut refs = 0;
    let mut errs = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for path in sources(crates) {
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.strip_prefix(crates).unwrap().display().to_string();
        for (ln, line) in text.lines().enumerate() {
            for call in ["signs::of(\"", "signs::odd(\""] {
                let mut rest = line;
                while let Some(i) = rest.find(call) {
                    let tail = &rest[i + call.len()..];
                    let id = &tail[..tail.find('"').unwrap_or(0)];
                    refs += 1;
                    used.insert(id.to_string());
                    if signs::lookup(id).is_none() {
                        errs.push(format!("{}:{}: undocumented sign id '{}'", name, ln + 1, id));
                    }
                    rest = tail;
                }
            }
            let exempt = name.ends_with("signs.rs") || name.ends_with("rat.rs") || name.ends_with("acceptance.rs");
            if line.contains("Rat::sign(") && !exempt {
                errs.push(format!("{}:{}: raw sign bypasses the ledger", name, ln + 1));
            }
        }
    }
    if refs == 0 {
        errs.push("no ledger references found".into());
    }
    if errs.is_empty() {
        Ok(format!("{} references to {} of {} ledger entries", refs, used.len(), signs::LEDGER.len()))
    } else {
        Err(errs.join("; "))
    }
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Result<String, String>, Option<Duration>);
    let criteria: [Criterion; 12] = [
        ("differentials square to zero", c1, Some(Duration::from_secs(30))),
        ("HKR_(X,f) is a chain map", c2, None),
        ("HKR_A is a chain map, two-eps vanishing", c3, None),
        ("HKR_A commutes with HKR_Y", c4, None),
        ("h^q lemma", c5, None),
        ("lax chain map and homotopies", c6, None),
        ("phi is a chain map", c7, None),
        ("Todd wedge commutes with d", c8, None),
        ("trace square, exactly one Todd sign", c9, Some(Duration::from_secs(120))),
        ("pushforward routes", c10, None),
        ("homology against a dense oracle", c11, None),
        ("sign ledger completeness", c12, None),
    ];
    let mut failed = Vec::new();
    for (i, (what, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let over = budget.map_or(false, |b| took > b);
        let ok = res.is_ok() && !over;
        let detail = match &res {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        let budget_note = if over { format!(" over budget {:?}", budget.unwrap()) } else { String::new() };
        println!("criterion {:>2} {} {} ({:.2} s{}): {}", i + 1, if ok { "PASS" } else { "FAIL" }, what, took.as_secs_f64(), budget_note, detail);
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
