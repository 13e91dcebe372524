//! Verification suites. Randomized checks draw each case from its own seeded
//! stream; the first mismatch is kept as a replayable counterexample.

use std::fmt::Debug;
use std::time::Instant;

use hhpush_core::cdg::{check_axioms, check_can, check_mf, scalar, AAlg, CdgSheaf, MatAlg, OAlg, AB, MB};
use hhpush_core::forms::*;
use hhpush_core::hochschild::*;
use hhpush_core::homology::homology_dims;
use hhpush_core::sample::{self, Entropy};
use hhpush_core::{signs, Lin, LocPoly, Mono, Rat, Scene};

use crate::report::{Check, Counterexample, Status, SuiteReport};
use crate::rng::{stream, CaseRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ToddSign {
    Plus,
    Minus,
}

impl ToddSign {
    pub fn name(self) -> &'static str {
        match self {
            ToddSign::Plus => "plus",
            ToddSign::Minus => "minus",
        }
    }

    /// `±Td(−Y)⁻¹`.
    pub fn todd(self, scene: &Scene) -> Cochain<Form> {
        let td = todd_inverse(scene);
        match self {
            ToddSign::Plus => td,
            ToddSign::Minus => td.scale(&signs::of("todd.switch", 1)),
        }
    }
}

pub struct Ctx<'a> {
    pub scene: &'a Scene,
    pub seed: u64,
    pub trunc: usize,
    pub window: usize,
    pub todd: ToddSign,
    /// Scales every case count; 1 gives the documented counts.
    pub scale: f64,
}

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    run: fn(&mut Checker),
}

pub const SUITES: &[Suite] = &[
    Suite { name: "cdg", about: "cdg axioms, matrix factorization identities and can", run: cdg_suite },
    Suite { name: "dsquare", about: "every differential squares to zero", run: dsquare },
    Suite { name: "hkr-xf", about: "HKR_(X,±f) is a chain map", run: hkr_xf_suite },
    Suite { name: "hkr-a", about: "HKR_A is a chain map on each element class", run: hkr_a_suite },
    Suite { name: "hkr-y", about: "HKR_A followed by the residue equals HKR_Y", run: hkr_y_suite },
    Suite { name: "hq", about: "the h^q lemma for every q up to the cover size", run: hq_suite },
    Suite { name: "lax", about: "lax chain maps and the three homotopies", run: lax_suite },
    Suite { name: "phi", about: "the trace map is a chain map degreewise", run: phi_suite },
    Suite { name: "todd", about: "wedge with Td(-Y)^-1 commutes with the cone differential", run: todd_suite },
    Suite { name: "diagram", about: "the trace square on all basis chains, for both Todd signs", run: diagram_suite },
    Suite { name: "pushforward", about: "both routes of the pushforward of 1", run: pushforward_suite },
    Suite { name: "homology", about: "windowed homology of (Omega, -df) and its stability", run: homology_suite },
    Suite { name: "signs", about: "the sign ledger is well formed", run: signs_suite },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs one suite; `timed` adds the elapsed time to the report.
pub fn run(suite: &Suite, ctx: &Ctx, timed: bool) -> SuiteReport {
    let index = SUITES.iter().position(|s| s.name == suite.name).expect("registered suite") as u32;
    let start = Instant::now();
    let mut c = Checker { ctx, suite: index, checks: Vec::new() };
    (suite.run)(&mut c);
    let elapsed = start.elapsed().as_millis() as u64;
    SuiteReport { suite: suite.name.to_string(), checks: c.checks, elapsed_ms: timed.then_some(elapsed) }
}

/// A mismatch: serialized input and both sides.
pub type Mismatch = (String, String, String);

pub fn mismatch<T: PartialEq + Debug>(input: &impl Debug, lhs: &T, rhs: &T) -> Option<Mismatch> {
    (lhs != rhs).then(|| (format!("{:?}", input), format!("{:?}", lhs), format!("{:?}", rhs)))
}

pub struct Checker<'a> {
    pub ctx: &'a Ctx<'a>,
    suite: u32,
    checks: Vec<Check>,
}

impl<'a> Checker<'a> {
    fn scene(&self) -> &'a Scene {
        self.ctx.scene
    }

    fn count(&self, n: usize) -> usize {
        ((n as f64 * self.ctx.scale).ceil() as usize).max(1)
    }

    /// `n` seeded cases of one identity.
    pub fn random(&mut self, id: &str, n: usize, mut case: impl FnMut(&mut CaseRng) -> Result<Option<Mismatch>, String>) {
        let slot = self.checks.len() as u32;
        let n = self.count(n);
        let mut fail = None;
        let mut note = None;
        for k in 0..n {
            let s = stream(self.suite, (slot << 16) | k as u32);
            let mut rng = CaseRng::new(self.ctx.seed, s);
            match case(&mut rng) {
                Ok(None) => {}
                Ok(Some((input, lhs, rhs))) => {
                    fail = Some(Counterexample { seed: self.ctx.seed, stream: s, input, lhs, rhs });
                    break;
                }
                Err(e) => {
                    note = Some(format!("case {}: {}", k, e));
                    break;
                }
            }
        }
        let status = if fail.is_none() && note.is_none() { Status::Pass } else { Status::Fail };
        self.checks.push(Check { id: id.to_string(), status, cases: n, note, counterexample: fail });
    }

    /// A deterministic check with an optional note.
    pub fn fixed(&mut self, id: &str, cases: usize, ok: bool, note: Option<String>, cx: Option<Mismatch>) {
        let counterexample = cx.map(|(input, lhs, rhs)| Counterexample { seed: self.ctx.seed, stream: 0, input, lhs, rhs });
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(Check { id: id.to_string(), status, cases, note, counterexample });
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn d2_forms<C: Complex>(cx: &C, s: &Scene, c: &Cochain<C::S>) -> Option<Mismatch> {
    let dd = total_d(cx, s, &total_d(cx, s, c));
    mismatch(c, &dd, &Cochain::new())
}

fn d2_hoch<S: CdgSheaf>(s: &S, c: &CechChain<S::B>, n: usize) -> Result<Option<Mismatch>, String> {
    let dd = cech_hoch_d(s, &cech_hoch_d(s, c, ALL, n).map_err(err)?, ALL, n).map_err(err)?;
    Ok(mismatch(c, &dd, &CechChain::new()))
}

fn monos(s: &Scene, e: &mut CaseRng, k: usize) -> CechChain<Mono> {
    sample::chain(s, e, k, |r, e| sample::mono(r, e, 1))
}

fn a_chain(s: &Scene, e: &mut CaseRng, k: usize) -> CechChain<AB> {
    sample::chain(s, e, k, sample::a_basis)
}

fn m_chain(s: &Scene, e: &mut CaseRng, k: usize) -> CechChain<MB> {
    sample::chain(s, e, k, sample::mat_basis)
}

fn cdg_suite(c: &mut Checker) {
    let s = c.scene();
    let mut errs = Vec::new();
    if let Err(e) = check_mf(s) {
        errs.push(e.to_string());
    }
    let mut cases = 0;
    for t in s.tuples() {
        let ring = s.ring(t).expect("tuple in atlas");
        let n = ring.nvars();
        let mut monos = vec![Mono::one(n)];
        monos.extend((0..n).map(|i| Mono::var(n, i)));
        let a: Vec<AB> = [false, true].iter().flat_map(|&e| monos.iter().map(move |m| (e, m.clone()))).collect();
        let m: Vec<MB> = (0..4u8).flat_map(|rc| monos.iter().map(move |x| (rc / 2, rc % 2, x.clone()))).collect();
        let o: Vec<Mono> = monos.clone();
        errs.extend(check_axioms(&OAlg::new(s, 1), t, &o));
        errs.extend(check_axioms(&OAlg::new(s, -1), t, &o));
        errs.extend(check_axioms(&AAlg { scene: s }, t, &a));
        errs.extend(check_axioms(&MatAlg::end_p(s), t, &m));
        errs.extend(check_axioms(&MatAlg::trivial(s), t, &m));
        errs.extend(check_can(s, t, &a));
        cases += a.len() + m.len() + o.len();
    }
    let ok = errs.is_empty();
    c.fixed("cdg.axioms", cases, ok, errs.first().cloned(), None);
}

fn dsquare(c: &mut Checker) {
    let s = c.scene();
    let n = c.ctx.trunc;
    let k = n.saturating_sub(2);
    c.random("dsquare.omega", 100, |e| Ok(d2_forms(&OMEGA, s, &sample::cochain(s, e, |t, e| sample::form(s.ring(t).unwrap(), e, 2)))));
    c.random("dsquare.log", 100, |e| Ok(d2_forms(&Log1, s, &sample::cochain(s, e, |t, e| sample::log_form(s, t, e)))));
    c.random("dsquare.cone", 100, |e| Ok(d2_forms(&Cone, s, &sample::cochain(s, e, |t, e| sample::cone_form(s, t, e)))));
    c.random("dsquare.y", 100, |e| Ok(d2_forms(&OmegaY, s, &sample::cochain(s, e, |t, e| sample::y_form(s, t, e)))));
    c.random("dsquare.hoch.o_f", 100, |e| d2_hoch(&OAlg::new(s, 1), &monos(s, e, k), n));
    c.random("dsquare.hoch.o_-f", 100, |e| d2_hoch(&OAlg::new(s, -1), &monos(s, e, k), n));
    c.random("dsquare.hoch.a", 100, |e| d2_hoch(&AAlg { scene: s }, &a_chain(s, e, k), n));
    c.random("dsquare.hoch.end_p", 100, |e| d2_hoch(&MatAlg::end_p(s), &m_chain(s, e, k), n));
}

fn hkr_xf_suite(c: &mut Checker) {
    let s = c.scene();
    let n = c.ctx.trunc;
    for (sign, cx, id) in [(1i8, Omega(1), "hkr-xf.o_f"), (-1, OMEGA, "hkr-xf.o_-f")] {
        c.random(id, 100, |e| {
            let ch = monos(s, e, 4.min(n - 1));
            let lhs = hkr_xf(s, &cech_hoch_d(&OAlg::new(s, sign), &ch, ALL, n).map_err(err)?);
            Ok(mismatch(&ch, &lhs, &total_d(&cx, s, &hkr_xf(s, &ch))))
        });
    }
}

/// A chain whose tensors all have `eps` factors from `A^{-1}` (`None`: at least two).
fn a_class_chain(s: &Scene, e: &mut CaseRng, eps: Option<usize>) -> CechChain<AB> {
    let mut c = CechChain::new();
    let tuples: Vec<Vec<usize>> = s.tuples().cloned().collect();
    let pick = e.below(tuples.len() as u64) as usize;
    for (i, t) in tuples.iter().enumerate() {
        if i != pick && e.below(2) == 0 {
            continue;
        }
        let ring = s.ring(t).unwrap();
        let min_len = eps.unwrap_or(2).max(1);
        let len = min_len + e.below(4 - min_len as u64) as usize;
        let count = eps.unwrap_or_else(|| 2 + e.below(len as u64 - 1) as usize);
        let mut v: Vec<AB> = (0..len).map(|_| (false, sample::mono(ring, e, 1))).collect();
        let mut placed = 0;
        while placed < count {
            let p = e.below(len as u64) as usize;
            if !v[p].0 {
                v[p].0 = true;
                placed += 1;
            }
        }
        c.add_at(t, &Lin::single(v, Rat::from_int(e.range(1, 3))));
    }
    c
}

fn hkr_a_suite(c: &mut Checker) {
    let s = c.scene();
    let n = c.ctx.trunc;
    let a = AAlg { scene: s };
    for (eps, id) in [(Some(0), "hkr-a.chain-map.no-eps"), (Some(1), "hkr-a.chain-map.one-eps"), (None, "hkr-a.chain-map.two-or-more-eps")] {
        c.random(id, 100, |e| {
            let ch = a_class_chain(s, e, eps);
            let lhs = hkr_a(s, &cech_hoch_d(&a, &ch, ALL, n).map_err(err)?);
            Ok(mismatch(&ch, &lhs, &total_d(&Cone, s, &hkr_a(s, &ch))))
        });
    }
    let d1 = Parts { d0: false, d1: true, d2: false };
    c.random("hkr-a.vanishing", 100, |e| {
        let ch = a_class_chain(s, e, None);
        if let Some(m) = mismatch(&ch, &hkr_a(s, &ch), &Cochain::new()) {
            return Ok(Some(m));
        }
        let two = a_class_chain(s, e, Some(2));
        Ok(mismatch(&two, &hkr_a(s, &cech_hoch_d(&a, &two, d1, n).map_err(err)?), &Cochain::new()))
    });
}

fn hkr_y_suite(c: &mut Checker) {
    let s = c.scene();
    c.random("hkr-y.square", 100, |e| {
        let ch = a_chain(s, e, 3);
        Ok(mismatch(&ch, &cone_to_y(s, &hkr_a(s, &ch)), &hkr_y(s, &to_y(&ch))))
    });
}

fn hq_suite(c: &mut Checker) {
    let s = c.scene();
    let n = c.ctx.trunc;
    let src = MatAlg::end_p(s);
    let tgt = MatAlg::trivial(s);
    c.random("hq.lemma", 100, |e| {
        let ch = m_chain(s, e, n.saturating_sub(3).min(3));
        for q in 1..=s.ncharts() {
            let lhs = twisted_hoch_d(&tgt, &hq(&src, q, &ch), D2, n + s.ncharts()).map_err(err)?.add(&cech_d(&tgt, &hq(&src, q - 1, &ch)));
            let rhs = hq(&src, q - 1, &cech_d(&src, &ch)).add(&hq(&src, q, &twisted_hoch_d(&src, &ch, D2, n).map_err(err)?));
            if let Some(m) = mismatch(&(q, &ch), &lhs, &rhs) {
                return Ok(Some(m));
            }
        }
        Ok(None)
    });
}

/// `s_I = Π_{a<b ∈ I} u_ab` on a tuple `k ⊇ i`.
pub fn s_of(scene: &Scene, i: &[usize], k: &[usize]) -> LocPoly {
    let mut p = LocPoly::one(scene.ring(k).unwrap());
    for (n, &a) in i.iter().enumerate() {
        for &b in &i[n + 1..] {
            p = &p * &scene.unit_on(a, b, k).unwrap();
        }
    }
    p
}

fn identity<B: Ord + Clone>(_: &[usize], b: &B) -> Lin<B> {
    Lin::single(b.clone(), Rat::one())
}

/// The identities of one lax instance `(id, α)`, `α_{I→J} = s_J / s_I`, with
/// `τ_I = s_I` from `(id, α)` to `(id, 1)`.
fn lax_identities<S: CdgSheaf>(s: &S, c: &CechChain<S::B>, n: usize) -> Result<Vec<(&'static str, Option<Mismatch>)>, String> {
    let scene = s.scene();
    let ratio = |i: &[usize], j: &[usize], inv: bool| {
        let (a, b) = (s_of(scene, j, j), s_of(scene, i, j));
        let p = if inv { &b * &a.inverse().unwrap() } else { &a * &b.inverse().unwrap() };
        scalar(s, j, &p)
    };
    let alpha = |i: &[usize], j: &[usize]| ratio(i, j, false);
    let alpha_inv = |i: &[usize], j: &[usize]| ratio(i, j, true);
    let trivial = |_: &[usize], j: &[usize]| s.unit(j);
    let lax = Lax { src: s, tgt: s, functor: &identity, alpha: &alpha, alpha_inv: &alpha_inv };
    let strict = Lax { src: s, tgt: s, functor: &identity, alpha: &trivial, alpha_inv: &trivial };
    lax.check_cocycle().map_err(err)?;
    let dd = |x: &CechChain<S::B>| cech_hoch_d(s, x, ALL, n).map_err(err);
    let mut out = Vec::new();

    let m = cech_lax_map(&lax, c, n).map_err(err)?;
    out.push(("lax.chain-map", mismatch(c, &dd(&m)?, &cech_lax_map(&lax, &dd(c)?, n).map_err(err)?)));

    let plain = cech_strict_map(&identity, c);
    let with_id = cech_lax_map(&strict, c, n).map_err(err)?;
    out.push(("lax.h1", mismatch(c, &with_id.sub(&plain), &lax_hq(&strict, 1, c, n).map_err(err)?)));

    let h = strict_lax_homotopy(s, s, &identity, c, n).map_err(err)?;
    let hd = strict_lax_homotopy(s, s, &identity, &dd(c)?, n).map_err(err)?;
    out.push(("lax.strict-vs-lax", mismatch(c, &dd(&h)?.add(&hd), &plain.sub(&with_id))));

    let tau = |i: &[usize], k: &[usize]| scalar(s, k, &s_of(scene, i, k));
    let tau_inv = |i: &[usize], k: &[usize]| scalar(s, k, &s_of(scene, i, k).inverse().unwrap());
    let iso = Iso { first: &lax, second: &strict, tau: &tau, tau_inv: &tau_inv };
    let h = iso_homotopy(&iso, c, n).map_err(err)?;
    let hd = iso_homotopy(&iso, &dd(c)?, n).map_err(err)?;
    out.push(("lax.iso", mismatch(c, &dd(&h)?.add(&hd), &with_id.sub(&m))));
    Ok(out)
}

fn lax_suite(c: &mut Checker) {
    let s = c.scene();
    let n = c.ctx.trunc + 2;
    // one check per algebra; a mismatch names the failing identity
    let first = |r: Vec<(&'static str, Option<Mismatch>)>| {
        r.into_iter().find_map(|(id, m)| m.map(|(i, l, rr)| (format!("{}: {}", id, i), l, rr)))
    };
    c.random("lax.o", 50, |e| Ok(first(lax_identities(&OAlg::new(s, 0), &monos(s, e, 2), n)?)));
    c.random("lax.a", 50, |e| Ok(first(lax_identities(&AAlg { scene: s }, &a_chain(s, e, 2), n)?)));
    c.random("lax.end_p", 50, |e| Ok(first(lax_identities(&MatAlg::end_p(s), &m_chain(s, e, 1), n)?)));
    let o = OAlg::new(s, 0);
    c.random("lax.restriction.o", 50, |e| {
        let ratio = |i: &[usize], j: &[usize], inv: bool| {
            let (a, b) = (s_of(s, j, j), s_of(s, i, j));
            let p = if inv { &b * &a.inverse().unwrap() } else { &a * &b.inverse().unwrap() };
            scalar(&o, j, &p)
        };
        let alpha = |i: &[usize], j: &[usize]| ratio(i, j, false);
        let alpha_inv = |i: &[usize], j: &[usize]| ratio(i, j, true);
        let lax = Lax { src: &o, tgt: &o, functor: &identity, alpha: &alpha, alpha_inv: &alpha_inv };
        let k = e.below(3) as usize;
        let a: Lin<Vec<Mono>> = Lin::single(vec![Mono(vec![]); k + 1], Rat::from_int(e.range(1, 3)));
        let h = restriction_homotopy(&lax, &a, n).map_err(err)?;
        let da = hoch_d(&o, &[], &a, ALL, n).map_err(err)?;
        let lhs = cech_hoch_d(&o, &h, ALL, n).map_err(err)?.add(&restriction_homotopy(&lax, &da, n).map_err(err)?);
        let res = restrict_global(&o, &a);
        let rhs = cech_lax_map(&lax, &res, n).map_err(err)?.sub(&res);
        Ok(mismatch(&a, &lhs, &rhs))
    });
}

fn phi_suite(c: &mut Checker) {
    let s = c.scene();
    let n = c.ctx.trunc;
    let m = n.saturating_sub(2);
    let end = MatAlg::end_p(s);
    let o = OAlg::new(s, -1);
    c.random("phi.chain-map", 50, |e| {
        let ch = m_chain(s, e, 2.min(m));
        let lhs = cech_hoch_d(&o, &phi(&end, &ch, m + 1), ALL, m + 2).map_err(err)?.up_to(m);
        let rhs = phi(&end, &cech_hoch_d(&end, &ch, ALL, n + 1).map_err(err)?, m);
        Ok(mismatch(&ch, &lhs, &rhs))
    });
}

fn todd_suite(c: &mut Checker) {
    let s = c.scene();
    let td = todd_inverse(s);
    let same = td == todd_inverse_wedge(s);
    c.fixed("todd.series", 1, same, Some(format!("Td(-Y)^-1 = {:?}", td)), None);
    c.random("todd.commutes", 100, |e| {
        let x = sample::cochain(s, e, |t, e| sample::cone_form(s, t, e));
        let lhs = total_d(&Cone, s, &bar_wedge_cone(s, &x, &td));
        Ok(mismatch(&x, &lhs, &bar_wedge_cone(s, &total_d(&Cone, s, &x), &td)))
    });
}

/// Mismatch counts of the trace square over all basis chains of length at
/// most `max_k`, for `+Td` and `−Td`, with the first mismatch of each.
pub fn diagram_counts(s: &Scene, max_k: usize) -> (usize, [usize; 2], [Option<Mismatch>; 2]) {
    let tds = [ToddSign::Plus.todd(s), ToddSign::Minus.todd(s)];
    let mut total = 0;
    let mut bad = [0; 2];
    let mut first: [Option<Mismatch>; 2] = [None, None];
    for t in s.tuples() {
        for v in basis_tensors(s, t, max_k) {
            let ch: CechChain<AB> = CechChain::single(t, v, Rat::one());
            let top = trace_route(s, &ch);
            total += 1;
            for (i, td) in tds.iter().enumerate() {
                if let Some(m) = mismatch(&ch, &top, &todd_route(s, &ch, td)) {
                    bad[i] += 1;
                    first[i].get_or_insert(m);
                }
            }
        }
    }
    (total, bad, first)
}

fn diagram_suite(c: &mut Checker) {
    let s = c.scene();
    let (total, bad, first) = diagram_counts(s, 3);
    let works = [bad[0] == 0, bad[1] == 0];
    let note = format!("mismatches plus {} minus {}", bad[0], bad[1]);
    c.fixed("diagram.exactly-one-sign", total, works[0] != works[1], Some(note), None);
    let sel = match c.ctx.todd {
        ToddSign::Plus => 0,
        ToddSign::Minus => 1,
    };
    let [f0, f1] = first;
    let cx = if sel == 0 { f0 } else { f1 };
    c.fixed("diagram.selected-sign", total, works[sel], Some(format!("todd-sign {}", c.ctx.todd.name())), cx);
}

fn pushforward_suite(c: &mut Checker) {
    match crate::pushforward::pushforward(c.scene(), c.ctx.todd, c.ctx.window) {
        Ok(p) => {
            let note = format!("equal {} boundary {:?} stable {:?}", p.equal, p.boundary, p.stable);
            let cx = (!p.agree).then(|| (p.input.clone(), p.route_a.clone(), p.route_b.clone()));
            c.fixed("pushforward.routes-agree", 1, p.agree, Some(note), cx);
        }
        Err(e) => c.fixed("pushforward.routes-agree", 1, false, Some(e.to_string()), None),
    }
}

fn homology_suite(c: &mut Checker) {
    match homology_dims(&OMEGA, c.scene(), c.ctx.window) {
        Ok(h) => {
            let note = format!("even {} odd {} at D = {}, ({}, {}) at D + 1", h.even, h.odd, h.window, h.next.0, h.next.1);
            c.fixed("homology.stable", 1, h.stable, Some(note), None);
        }
        Err(e) => c.fixed("homology.stable", 1, false, Some(e.to_string()), None),
    }
}

fn signs_suite(c: &mut Checker) {
    let ledger = signs::LEDGER;
    let unique = ledger.iter().enumerate().all(|(i, e)| ledger[i + 1..].iter().all(|o| o.id != e.id));
    let filled = ledger.iter().all(|e| !e.id.is_empty() && !e.rule.is_empty());
    c.fixed("signs.ledger", ledger.len(), unique && filled, Some(format!("version {}, {} entries", signs::VERSION, ledger.len())), None);
}
