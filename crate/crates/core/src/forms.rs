//! Differential forms on chart rings, logarithmic forms along the divisor,
//! the cone complex, Čech cochains and their total differentials.
//!
//! A form is a map from dx-index sets (bitmasks over the chart variables) to
//! coefficients. A logarithmic form on a tuple is `reg + dx/x ∧ res` where `x`
//! is the restricted equation of the lead chart; its normal form depends on
//! how that equation looks on the tuple (see [`Lead`]):
//!
//! * `x = 1`: `res = 0`;
//! * `x` a coordinate `v`: `res` has no `dx_v` and no `v` in its coefficients;
//! * `x` a unit: the pole is fake, `res` is folded into `reg`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lin::Lin;
use crate::poly::{LocPoly, Mono, RingMap, RingRef};
use crate::rat::Rat;
use crate::scene::{union, Lead, Scene, Tuple};
use crate::signs;

/// Sign of `dx_A ∧ dx_B` relative to `dx_{A∪B}` (masks disjoint).
pub fn mask_sign(a: u32, b: u32) -> i64 {
    let mut inv = 0i64;
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        inv += (a >> (i + 1)).count_ones() as i64;
        bb &= bb - 1;
    }
    inv
}

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    ring: RingRef,
    terms: BTreeMap<u32, LocPoly>,
}

impl Form {
    pub fn zero(ring: &RingRef) -> Form {
        Form { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn function(p: &LocPoly) -> Form {
        Form::term(0, p.clone())
    }

    pub fn one(ring: &RingRef) -> Form {
        Form::function(&LocPoly::one(ring))
    }

    pub fn term(mask: u32, c: LocPoly) -> Form {
        let mut f = Form::zero(c.ring());
        f.add_term(mask, c);
        f
    }

    /// `dx_i`.
    pub fn dvar(ring: &RingRef, i: usize) -> Form {
        Form::term(1 << i, LocPoly::one(ring))
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<u32, LocPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u32, c: LocPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&Rat::from_int(-1))
    }

    pub fn scale(&self, c: &Rat) -> Form {
        let mut r = Form::zero(&self.ring);
        for (m, v) in &self.terms {
            r.add_term(*m, v.scale(c));
        }
        r
    }

    pub fn mul_fn(&self, p: &LocPoly) -> Form {
        let mut r = Form::zero(&self.ring);
        for (m, v) in &self.terms {
            r.add_term(*m, v * p);
        }
        r
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut r = Form::zero(&self.ring);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let s = signs::of("form.wedge", mask_sign(*a, *b));
                r.add_term(a | b, (x * y).scale(&s));
            }
        }
        r
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut r = Form::zero(&self.ring);
        for (m, c) in &self.terms {
            for i in 0..self.ring.nvars() {
                if m & (1 << i) != 0 {
                    continue;
                }
                let dc = c.derive(i);
                if dc.is_zero() {
                    continue;
                }
                let s = signs::of("form.wedge", mask_sign(1 << i, *m));
                r.add_term(m | (1 << i), dc.scale(&s));
            }
        }
        r
    }

    /// Pullback along a ring map.
    pub fn pullback(&self, phi: &RingMap) -> Form {
        let tgt = phi.tgt();
        let dims: Vec<Form> = phi.images().iter().map(|p| Form::function(p).d()).collect();
        let mut r = Form::zero(tgt);
        for (m, c) in &self.terms {
            let mut acc = Form::function(&phi.apply(c));
            for (i, di) in dims.iter().enumerate() {
                if m & (1 << i) != 0 {
                    acc = acc.wedge(di);
                }
            }
            r = r.add(&acc);
        }
        r
    }

    /// Homogeneous part of form degree `k`.
    pub fn part(&self, k: u32) -> Form {
        Form { ring: self.ring.clone(), terms: self.terms.iter().filter(|(m, _)| m.count_ones() == k).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|m| m.count_ones()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sets variable `v` to zero and drops every `dx_v` term.
    pub fn reduce_mod(&self, v: usize) -> Form {
        let mut r = Form::zero(&self.ring);
        for (m, c) in &self.terms {
            if m & (1 << v) == 0 {
                r.add_term(*m, c.set_zero(v));
            }
        }
        r
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for i in 0..self.ring.nvars() {
                if m & (1 << i) != 0 {
                    write!(f, " d{}", self.ring.vars[i])?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Data a section type needs from its tuple.
pub trait Section: Clone + PartialEq + fmt::Debug {
    fn zero(scene: &Scene, t: &[usize]) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn scale(&self, c: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn restrict(&self, scene: &Scene, from: &[usize], to: &[usize]) -> Self;
}

impl Section for Form {
    fn zero(scene: &Scene, t: &[usize]) -> Form {
        Form::zero(scene.ring(t).expect("tuple in atlas"))
    }
    fn add(&self, o: &Form) -> Form {
        Form::add(self, o)
    }
    fn scale(&self, c: &Rat) -> Form {
        Form::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        Form::is_zero(self)
    }
    fn restrict(&self, scene: &Scene, from: &[usize], to: &[usize]) -> Form {
        self.pullback(scene.map(from, to).expect("restriction in atlas"))
    }
}

/// `reg + dx/x ∧ res` in normal form for its tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogForm {
    pub reg: Form,
    pub res: Form,
}

impl LogForm {
    pub fn new(scene: &Scene, t: &[usize], reg: Form, res: Form) -> LogForm {
        LogForm { reg, res }.normalize(scene.lead(t))
    }

    /// The inclusion `L` of regular forms.
    pub fn regular(reg: Form) -> LogForm {
        let res = Form::zero(reg.ring());
        LogForm { reg, res }
    }

    pub fn normalize(self, lead: Lead) -> LogForm {
        let ring = self.reg.ring().clone();
        match lead {
            Lead::One => LogForm { reg: self.reg, res: Form::zero(&ring) },
            Lead::Unit(v) => {
                let dlog = Form::dvar(&ring, v).mul_fn(&LocPoly::var(&ring, v).inverse().expect("unit lead"));
                LogForm { reg: self.reg.add(&dlog.wedge(&self.res)), res: Form::zero(&ring) }
            }
            Lead::Coord(v) => {
                let mut reg = self.reg;
                let mut res = Form::zero(&ring);
                let dv = Form::dvar(&ring, v);
                for (m, c) in self.res.terms() {
                    if m & (1 << v) != 0 {
                        continue;
                    }
                    let c0 = c.set_zero(v);
                    let rest = c - &c0;
                    if !rest.is_zero() {
                        // dv/v ∧ v·c1 = dv ∧ c1
                        let mut inv = Mono::one(ring.nvars());
                        inv.0[v] = -1;
                        let c1 = rest.mul_mono(&inv, &Rat::one());
                        reg = reg.add(&dv.wedge(&Form::term(*m, c1)));
                    }
                    res.add_term(*m, c0);
                }
                LogForm { reg, res }
            }
        }
    }

    /// `ω ∧ self`.
    pub fn wedge_left(&self, w: &Form, lead: Lead) -> LogForm {
        let mut res = Form::zero(w.ring());
        for k in w.degrees() {
            let s = signs::of("log.wedge", k as i64);
            res = res.add(&w.part(k).wedge(&self.res).scale(&s));
        }
        LogForm { reg: w.wedge(&self.reg), res }.normalize(lead)
    }

    /// Regular representative when the residue vanishes.
    pub fn as_regular(&self) -> Option<&Form> {
        if self.res.is_zero() {
            Some(&self.reg)
        } else {
            None
        }
    }
}

impl Section for LogForm {
    fn zero(scene: &Scene, t: &[usize]) -> LogForm {
        LogForm::regular(Form::zero(scene.ring(t).expect("tuple in atlas")))
    }
    fn add(&self, o: &LogForm) -> LogForm {
        LogForm { reg: self.reg.add(&o.reg), res: self.res.add(&o.res) }
    }
    fn scale(&self, c: &Rat) -> LogForm {
        LogForm { reg: self.reg.scale(c), res: self.res.scale(c) }
    }
    fn is_zero(&self) -> bool {
        self.reg.is_zero() && self.res.is_zero()
    }
    fn restrict(&self, scene: &Scene, from: &[usize], to: &[usize]) -> LogForm {
        let phi = scene.map(from, to).expect("restriction in atlas");
        let reg = self.reg.pullback(phi);
        let res = self.res.pullback(phi);
        // dx_i/x_i = dx_j/x_j + du_ji/u_ji for the old lead i and new lead j
        let u = scene.unit_on(to[0], from[0], to).expect("unit on tuple");
        let dlog = Form::function(&u).d().mul_fn(&u.inverse().expect("unit"));
        LogForm { reg: reg.add(&dlog.wedge(&res)), res }.normalize(scene.lead(to))
    }
}

/// Element of the cone of `L`: the regular summand `a` and the log summand `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeForm {
    pub a: Form,
    pub b: LogForm,
}

impl Section for ConeForm {
    fn zero(scene: &Scene, t: &[usize]) -> ConeForm {
        ConeForm { a: Form::zero(scene.ring(t).expect("tuple in atlas")), b: LogForm::zero(scene, t) }
    }
    fn add(&self, o: &ConeForm) -> ConeForm {
        ConeForm { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
    fn scale(&self, c: &Rat) -> ConeForm {
        ConeForm { a: self.a.scale(c), b: Section::scale(&self.b, c) }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && Section::is_zero(&self.b)
    }
    fn restrict(&self, scene: &Scene, from: &[usize], to: &[usize]) -> ConeForm {
        ConeForm { a: Section::restrict(&self.a, scene, from, to), b: self.b.restrict(scene, from, to) }
    }
}

/// Form on `Y ∩ U_I`, stored as its lift with the lead coordinate and its
/// differential removed. Zero on tuples whose lead is not a coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct YForm(pub Form);

impl YForm {
    pub fn reduce(scene: &Scene, t: &[usize], w: &Form) -> YForm {
        match scene.lead(t) {
            Lead::Coord(v) => YForm(w.reduce_mod(v)),
            _ => YForm(Form::zero(w.ring())),
        }
    }
}

impl Section for YForm {
    fn zero(scene: &Scene, t: &[usize]) -> YForm {
        YForm(Form::zero(scene.ring(t).expect("tuple in atlas")))
    }
    fn add(&self, o: &YForm) -> YForm {
        YForm(self.0.add(&o.0))
    }
    fn scale(&self, c: &Rat) -> YForm {
        YForm(self.0.scale(c))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn restrict(&self, scene: &Scene, from: &[usize], to: &[usize]) -> YForm {
        YForm::reduce(scene, to, &Section::restrict(&self.0, scene, from, to))
    }
}

/// Sections over strictly increasing tuples; absent entries are zero.
#[derive(Clone, PartialEq, Debug)]
pub struct Cochain<T> {
    entries: BTreeMap<Tuple, T>,
}

impl<T: Section> Default for Cochain<T> {
    fn default() -> Self {
        Cochain { entries: BTreeMap::new() }
    }
}

impl<T: Section> Cochain<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(t: &[usize], s: T) -> Self {
        let mut c = Self::new();
        c.add_at(t, s);
        c
    }

    pub fn add_at(&mut self, t: &[usize], s: T) {
        if s.is_zero() {
            return;
        }
        let sum = match self.entries.remove(t) {
            Some(old) => old.add(&s),
            None => s,
        };
        if !sum.is_zero() {
            self.entries.insert(t.to_vec(), sum);
        }
    }

    pub fn get(&self, t: &[usize]) -> Option<&T> {
        self.entries.get(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &T)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (t, s) in &o.entries {
            r.add_at(t, s.clone());
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut r = Self::new();
        for (t, s) in &self.entries {
            r.add_at(t, s.scale(c));
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rat::from_int(-1)))
    }

    pub fn map<U: Section>(&self, mut f: impl FnMut(&Tuple, &T) -> U) -> Cochain<U> {
        let mut r = Cochain::new();
        for (t, s) in &self.entries {
            r.add_at(t, f(t, s));
        }
        r
    }

    /// Entries of Čech degree `p`.
    pub fn degree(&self, p: usize) -> Self {
        let mut r = Self::new();
        for (t, s) in self.entries.iter().filter(|(t, _)| t.len() == p + 1) {
            r.add_at(t, s.clone());
        }
        r
    }

    pub fn cech_d(&self, scene: &Scene) -> Self {
        let mut r = Self::new();
        for (t, s) in &self.entries {
            for j in scene.extensions(t) {
                let k = union(t, &[j]);
                let m = k.iter().position(|&v| v == j).unwrap();
                let sign = signs::of("cech.d", m as i64);
                r.add_at(&k, s.restrict(scene, t, &k).scale(&sign));
            }
        }
        r
    }
}

/// A complex of sheaves whose Čech total differential is `d_Cech + (−1)^p d_int`.
pub trait Complex {
    type S: Section;
    fn internal(&self, scene: &Scene, t: &[usize], s: &Self::S) -> Self::S;
}

pub fn total_d<C: Complex>(cx: &C, scene: &Scene, c: &Cochain<C::S>) -> Cochain<C::S> {
    let mut r = c.cech_d(scene);
    for (t, s) in c.iter() {
        let sign = signs::of("cech.twist", t.len() as i64 - 1);
        r.add_at(t, cx.internal(scene, t, s).scale(&sign));
    }
    r
}

pub fn df(scene: &Scene, t: &[usize]) -> Form {
    Form::function(&scene.f_on(t).expect("tuple in atlas")).d()
}

/// `(Ω, ε·df∧)` with `ε = ±1`; `ε = −1` is the twisted de Rham complex.
#[derive(Clone, Copy, Debug)]
pub struct Omega(pub i8);

pub const OMEGA: Omega = Omega(-1);

impl Complex for Omega {
    type S = Form;
    fn internal(&self, scene: &Scene, t: &[usize], s: &Form) -> Form {
        let w = df(scene, t).wedge(s);
        if self.0 < 0 {
            // sign-ledger: cx.omega
            w.scale(&signs::of("cx.omega", 1))
        } else {
            w
        }
    }
}

/// `(Ω(log Y), −df∧)[1]`.
#[derive(Clone, Copy, Debug)]
pub struct Log1;

impl Complex for Log1 {
    type S = LogForm;
    fn internal(&self, scene: &Scene, t: &[usize], s: &LogForm) -> LogForm {
        let _ = signs::of("cx.log1", 0);
        s.wedge_left(&df(scene, t), scene.lead(t))
    }
}

/// `(Ω_Y, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct OmegaY;

impl Complex for OmegaY {
    type S = YForm;
    fn internal(&self, scene: &Scene, t: &[usize], _s: &YForm) -> YForm {
        YForm::zero(scene, t)
    }
}

/// `Cone(L)` for the inclusion `L: (Ω, −df∧)[1] → (Ω(log Y), −df∧)[1]`.
#[derive(Clone, Copy, Debug)]
pub struct Cone;

impl Complex for Cone {
    type S = ConeForm;
    fn internal(&self, scene: &Scene, t: &[usize], s: &ConeForm) -> ConeForm {
        let w = df(scene, t);
        let a = w.wedge(&s.a).scale(&signs::of("cx.cone", 1));
        let b = LogForm::regular(s.a.clone()).add(&s.b.wedge_left(&w, scene.lead(t)));
        ConeForm { a, b }
    }
}

/// `α·β` with the front/back face rule, for any bilinear pairing on sections.
pub fn cech_product<A: Section, B: Section, C: Section>(
    scene: &Scene,
    x: &Cochain<A>,
    y: &Cochain<B>,
    mut mul: impl FnMut(&Tuple, usize, usize, &A, &B) -> C,
) -> Cochain<C> {
    let mut r = Cochain::new();
    for (ta, a) in x.iter() {
        for (tb, b) in y.iter() {
            if ta.last() != tb.first() {
                continue;
            }
            let mut k = ta.clone();
            k.extend_from_slice(&tb[1..]);
            if !scene.has(&k) {
                continue;
            }
            let ar = a.restrict(scene, ta, &k);
            let br = b.restrict(scene, tb, &k);
            r.add_at(&k, mul(&k, ta.len() - 1, tb.len() - 1, &ar, &br));
        }
    }
    r
}

pub fn cech_wedge(scene: &Scene, x: &Cochain<Form>, y: &Cochain<Form>) -> Cochain<Form> {
    cech_product(scene, x, y, |_, _, _, a, b| a.wedge(b))
}

/// `α ∧̄ γ = (−1)^{pq} γ ∧ α`.
pub fn bar_wedge(scene: &Scene, x: &Cochain<Form>, g: &Cochain<Form>) -> Cochain<Form> {
    cech_product(scene, g, x, |_, q, p, gg, a| gg.wedge(a).scale(&signs::of("bar.wedge", (p * q) as i64)))
}

/// `(a + b) ∧̄ γ = (−1)^{pq} γ∧a + (−1)^{(p+1)q} γ∧b` on the cone.
pub fn bar_wedge_cone(scene: &Scene, x: &Cochain<ConeForm>, g: &Cochain<Form>) -> Cochain<ConeForm> {
    cech_product(scene, g, x, |k, q, p, gg, c| {
        let sa = signs::of("bar.cone", (p * q) as i64);
        let sb = signs::of("bar.cone", ((p + 1) * q) as i64);
        ConeForm { a: gg.wedge(&c.a).scale(&sa), b: Section::scale(&c.b.wedge_left(gg, scene.lead(k)), &sb) }
    })
}

/// `α ∧̄ γ` on forms along `Y`, `γ` restricted to `Y`.
pub fn bar_wedge_y(scene: &Scene, x: &Cochain<YForm>, g: &Cochain<Form>) -> Cochain<YForm> {
    cech_product(scene, g, x, |k, q, p, gg, a| YForm::reduce(scene, k, &gg.wedge(&a.0)).scale(&signs::of("bar.wedge", (p * q) as i64)))
}

/// The unit cochain `1` of Čech degree 0.
pub fn unit_cochain(scene: &Scene) -> Cochain<Form> {
    let mut c = Cochain::new();
    for i in 0..scene.ncharts() {
        c.add_at(&[i], Form::one(scene.ring(&[i]).unwrap()));
    }
    c
}

/// `c₁(−Y) = (u_ij d(u_ij⁻¹))_{j<i}` on the tuples `(j, i)`.
pub fn c1_minus_y(scene: &Scene) -> Cochain<Form> {
    let mut c = Cochain::new();
    for t in scene.tuples().filter(|t| t.len() == 2) {
        let (j, i) = (t[0], t[1]);
        let u = scene.unit_on(i, j, t).unwrap();
        let uinv = u.inverse().unwrap();
        c.add_at(t, Form::function(&uinv).d().mul_fn(&u));
    }
    c
}

/// `Td(−Y)⁻¹ = Σ_q c₁^{∧̄q}/(q+1)!`.
pub fn todd_inverse(scene: &Scene) -> Cochain<Form> {
    let c1 = c1_minus_y(scene);
    let mut power = unit_cochain(scene);
    let mut sum = Cochain::new();
    for q in 0..=scene.ncharts() {
        sum = sum.add(&power.scale(&Rat::factorial(q as u32 + 1).recip().unwrap()));
        power = bar_wedge(scene, &power, &c1);
    }
    sum
}

/// The same series written with `∧`: `Σ_q (−1)^{binom(q,2)} c₁^{∧q}/(q+1)!`.
pub fn todd_inverse_wedge(scene: &Scene) -> Cochain<Form> {
    let c1 = c1_minus_y(scene);
    let mut power = unit_cochain(scene);
    let mut sum = Cochain::new();
    for q in 0..=scene.ncharts() {
        let s = signs::of("todd.binom", signs::binom2(q as i64));
        sum = sum.add(&power.scale(&(&s / &Rat::factorial(q as u32 + 1))));
        power = cech_wedge(scene, &power, &c1);
    }
    sum
}

pub fn ses_project(scene: &Scene, b: &Cochain<LogForm>) -> Cochain<YForm> {
    b.map(|t, s| YForm::reduce(scene, t, &s.res))
}

/// Canonical lift: regular part 0, residue the stored lift.
pub fn ses_lift(scene: &Scene, a: &Cochain<YForm>) -> Result<Cochain<LogForm>> {
    let mut r = Cochain::new();
    for (t, s) in a.iter() {
        match scene.lead(t) {
            Lead::Coord(v) => {
                if s.0.terms().iter().any(|(m, c)| m & (1 << v) != 0 || c.involves(v)) {
                    return Err(Error::Precondition(format!("form on Y over {:?} is not reduced", t)));
                }
                r.add_at(t, LogForm::new(scene, t, Form::zero(s.0.ring()), s.0.clone()));
            }
            _ => {
                if !s.is_zero() {
                    return Err(Error::Precondition(format!("nonzero form on Y over {:?}, which misses Y", t)));
                }
            }
        }
    }
    Ok(r)
}

/// Connecting morphism of the log-forms sequence.
pub fn connecting_delta(scene: &Scene, a: &Cochain<YForm>) -> Result<Cochain<Form>> {
    if !total_d(&OmegaY, scene, a).is_zero() {
        return Err(Error::Precondition("input is not a cocycle on Y".into()));
    }
    let d = total_d(&Log1, scene, &ses_lift(scene, a)?);
    let mut out = Cochain::new();
    for (t, s) in d.iter() {
        let reg = s.as_regular().ok_or_else(|| Error::Internal(format!("residue survives on {:?}: {:?}", t, s.res)))?;
        out.add_at(t, reg.scale(&signs::of("ses.delta", t.len() as i64 - 1)));
    }
    Ok(out)
}

/// `Cone(L) → (Ω, −df∧)`.
pub fn cone_to_omega(c: &Cochain<ConeForm>) -> Cochain<Form> {
    let s = signs::of("cone.delta", 1);
    c.map(|_, x| x.a.scale(&s))
}

/// `Cone(L) → Ω_Y`, the quasi-isomorphism through the residue.
pub fn cone_to_y(scene: &Scene, c: &Cochain<ConeForm>) -> Cochain<YForm> {
    c.map(|t, x| YForm::reduce(scene, t, &x.b.res))
}

/// Coefficient-wise view used by the homology window: linear coordinates of
/// a form as `(mask, monomial) -> coefficient`.
pub fn form_coords(w: &Form) -> Lin<(u32, Mono)> {
    let mut l = Lin::new();
    for (m, c) in w.terms() {
        for (mono, v) in c.terms().iter() {
            l.add_term((*m, mono.clone()), v.clone());
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scene::builtin_scene;

    fn p(scene: &Scene, t: &[usize], s: &str) -> LocPoly {
        parse_poly(scene.ring(t).unwrap(), s).unwrap()
    }

    #[test]
    fn de_rham_examples() {
        let s = builtin_scene("A2").unwrap();
        let r = s.ring(&[0]).unwrap().clone();
        let x = Form::function(&p(&s, &[0], "x"));
        assert_eq!(x.d(), Form::dvar(&r, 0));
        let xy = Form::function(&p(&s, &[0], "x*y")).d();
        let expect = Form::dvar(&r, 0).mul_fn(&p(&s, &[0], "y")).add(&Form::dvar(&r, 1).mul_fn(&p(&s, &[0], "x")));
        assert_eq!(xy, expect);
        assert!(xy.d().is_zero());
        let p1 = builtin_scene("P1").unwrap();
        let r01 = p1.ring(&[0, 1]).unwrap().clone();
        let tinv = Form::function(&p(&p1, &[0, 1], "t^-1")).d();
        assert_eq!(tinv, Form::dvar(&r01, 0).mul_fn(&p(&p1, &[0, 1], "-t^-2")));
    }

    #[test]
    fn wedge_antisymmetry() {
        let s = builtin_scene("A2").unwrap();
        let r = s.ring(&[0]).unwrap().clone();
        let (dx, dy) = (Form::dvar(&r, 0), Form::dvar(&r, 1));
        assert!(dx.wedge(&dx).is_zero());
        assert_eq!(dy.wedge(&dx), dx.wedge(&dy).neg());
    }

    #[test]
    fn a2_delta_of_one() {
        let s = builtin_scene("A2").unwrap();
        let r = s.ring(&[0]).unwrap().clone();
        let a = Cochain::single(&[0], YForm(Form::one(&r)));
        let d = connecting_delta(&s, &a).unwrap();
        // df ∧ dx/x = (y dx + x dy) ∧ dx/x = dy ∧ dx
        let expect = Form::dvar(&r, 1).wedge(&Form::dvar(&r, 0));
        assert_eq!(d, Cochain::single(&[0], expect));
    }

    #[test]
    fn p1_todd() {
        let s = builtin_scene("P1").unwrap();
        let c1 = c1_minus_y(&s);
        let t = p(&s, &[0, 1], "t");
        let r01 = s.ring(&[0, 1]).unwrap().clone();
        let expect = Form::dvar(&r01, 0).mul_fn(&t.inverse().unwrap()).neg();
        assert_eq!(c1.get(&[0, 1]), Some(&expect));
        let td = todd_inverse(&s);
        let expect = unit_cochain(&s).add(&c1.scale(&Rat::new(1, 2)));
        assert_eq!(td, expect);
        assert_eq!(todd_inverse_wedge(&s), td);
    }
}
