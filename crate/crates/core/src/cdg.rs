//! Presheaves of one-object curved dg algebras on the atlas.
//!
//! Every algebra is presented by a ℚ-basis `B` of each `A(U_I)`: a basis of
//! the free module over the chart ring times monomials. Multiplication, `d`,
//! curvature and restriction act on basis elements.

use alloc::format;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::error::{Error, Result};
use crate::lin::Lin;
use crate::poly::{LocPoly, Mono, Ring, RingRef};
use crate::rat::Rat;
use crate::scene::Scene;
use crate::signs;

pub trait CdgSheaf {
    type B: Clone + Ord + Debug;
    fn scene(&self) -> &Scene;
    fn name(&self) -> &'static str;
    fn parity(&self, b: &Self::B) -> bool;
    fn mul(&self, t: &[usize], a: &Self::B, b: &Self::B) -> Lin<Self::B>;
    fn d(&self, t: &[usize], a: &Self::B) -> Lin<Self::B>;
    fn curvature(&self, t: &[usize]) -> Lin<Self::B>;
    fn unit(&self, t: &[usize]) -> Lin<Self::B>;
    fn restrict(&self, b: &Self::B, from: &[usize], to: &[usize]) -> Lin<Self::B>;
    /// Elements `p · b` for a ring element `p` and a basis element `b`.
    fn scalar_times(&self, t: &[usize], p: &LocPoly, b: &Self::B) -> Lin<Self::B>;
}

pub fn mul_lin<S: CdgSheaf>(s: &S, t: &[usize], x: &Lin<S::B>, y: &Lin<S::B>) -> Lin<S::B> {
    let mut r = Lin::new();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            r.add_scaled(&s.mul(t, a, b), &(ca * cb));
        }
    }
    r
}

pub fn d_lin<S: CdgSheaf>(s: &S, t: &[usize], x: &Lin<S::B>) -> Lin<S::B> {
    x.map_linear(|b| s.d(t, b))
}

pub fn restrict_lin<S: CdgSheaf>(s: &S, x: &Lin<S::B>, from: &[usize], to: &[usize]) -> Lin<S::B> {
    x.map_linear(|b| s.restrict(b, from, to))
}

fn ring_at(scene: &Scene, t: &[usize]) -> RingRef {
    scene.ring(t).expect("tuple in atlas").clone()
}

fn poly_lin(p: &LocPoly) -> Lin<Mono> {
    p.terms().clone()
}

/// `U ↦ (O(U), 0, σ·f)` with `σ ∈ {−1, 0, 1}`. The empty tuple stands for
/// the global constants, a sub-algebra when `σ = 0`.
#[derive(Clone, Copy)]
pub struct OAlg<'a> {
    pub scene: &'a Scene,
    pub sign: i8,
}

impl<'a> OAlg<'a> {
    pub fn new(scene: &'a Scene, sign: i8) -> Self {
        OAlg { scene, sign }
    }

    pub fn ring(&self, t: &[usize]) -> RingRef {
        if t.is_empty() {
            Ring::new(&[], &[]).unwrap()
        } else {
            ring_at(self.scene, t)
        }
    }

    pub fn poly(&self, t: &[usize], m: &Mono) -> LocPoly {
        LocPoly::monomial(&self.ring(t), m.clone(), Rat::one()).unwrap()
    }
}

impl CdgSheaf for OAlg<'_> {
    type B = Mono;
    fn scene(&self) -> &Scene {
        self.scene
    }
    fn name(&self) -> &'static str {
        match self.sign {
            1 => "O_f",
            -1 => "O_-f",
            _ => "O",
        }
    }
    fn parity(&self, _b: &Mono) -> bool {
        false
    }
    fn mul(&self, _t: &[usize], a: &Mono, b: &Mono) -> Lin<Mono> {
        Lin::single(a.mul(b), Rat::one())
    }
    fn d(&self, _t: &[usize], _a: &Mono) -> Lin<Mono> {
        Lin::new()
    }
    fn curvature(&self, t: &[usize]) -> Lin<Mono> {
        if self.sign == 0 {
            return Lin::new();
        }
        let f = self.scene.f_on(t).expect("tuple in atlas");
        poly_lin(&f).scaled(&Rat::from_int(self.sign as i64))
    }
    fn unit(&self, t: &[usize]) -> Lin<Mono> {
        Lin::single(Mono::one(self.ring(t).nvars()), Rat::one())
    }
    fn restrict(&self, b: &Mono, from: &[usize], to: &[usize]) -> Lin<Mono> {
        if from == to {
            return Lin::single(b.clone(), Rat::one());
        }
        if from.is_empty() {
            return Lin::single(Mono::one(self.ring(to).nvars()), Rat::one());
        }
        poly_lin(&self.scene.map(from, to).expect("restriction in atlas").apply_mono(b))
    }
    fn scalar_times(&self, _t: &[usize], p: &LocPoly, b: &Mono) -> Lin<Mono> {
        poly_lin(&p.mul_mono(b, &Rat::one()))
    }
}

/// Basis element `ε^e · m` of the Koszul algebra.
pub type AB = (bool, Mono);

/// `𝒜 = [O(−Y) → O]`, trivialized on each tuple by `ε` of its lead chart.
#[derive(Clone, Copy)]
pub struct AAlg<'a> {
    pub scene: &'a Scene,
}

impl CdgSheaf for AAlg<'_> {
    type B = AB;
    fn scene(&self) -> &Scene {
        self.scene
    }
    fn name(&self) -> &'static str {
        "A"
    }
    fn parity(&self, b: &AB) -> bool {
        b.0
    }
    fn mul(&self, _t: &[usize], a: &AB, b: &AB) -> Lin<AB> {
        if a.0 && b.0 {
            return Lin::new();
        }
        Lin::single((a.0 || b.0, a.1.mul(&b.1)), Rat::one())
    }
    fn d(&self, t: &[usize], a: &AB) -> Lin<AB> {
        if !a.0 {
            return Lin::new();
        }
        let x = self.scene.x_on(t[0], t).expect("tuple in atlas");
        poly_lin(&x.mul_mono(&a.1, &Rat::one())).map_linear(|m| Lin::single((false, m.clone()), Rat::one()))
    }
    fn curvature(&self, _t: &[usize]) -> Lin<AB> {
        Lin::new()
    }
    fn unit(&self, t: &[usize]) -> Lin<AB> {
        Lin::single((false, Mono::one(ring_at(self.scene, t).nvars())), Rat::one())
    }
    fn restrict(&self, b: &AB, from: &[usize], to: &[usize]) -> Lin<AB> {
        let mut p = self.scene.map(from, to).expect("restriction in atlas").apply_mono(&b.1);
        if b.0 {
            // ε of the old lead is u ε of the new lead
            p = &p * &self.scene.unit_on(to[0], from[0], to).expect("unit on tuple");
        }
        poly_lin(&p).map_linear(|m| Lin::single((b.0, m.clone()), Rat::one()))
    }
    fn scalar_times(&self, _t: &[usize], p: &LocPoly, b: &AB) -> Lin<AB> {
        poly_lin(&p.mul_mono(&b.1, &Rat::one())).map_linear(|m| Lin::single((b.0, m.clone()), Rat::one()))
    }
}

/// Matrix unit `E_rc · m` in the basis `(1, ε)` of `P`.
pub type MB = (u8, u8, Mono);

/// 2×2 matrices over the chart rings. With `twisted` set this is `End(P)`
/// in the lead-chart basis of each tuple, with `d = [δ, −]`; otherwise it is
/// the trivialized category with `δ = 0` and plain restriction.
#[derive(Clone, Copy)]
pub struct MatAlg<'a> {
    pub scene: &'a Scene,
    pub twisted: bool,
}

impl<'a> MatAlg<'a> {
    pub fn end_p(scene: &'a Scene) -> Self {
        MatAlg { scene, twisted: true }
    }

    pub fn trivial(scene: &'a Scene) -> Self {
        MatAlg { scene, twisted: false }
    }

    pub fn entry(&self, r: u8, c: u8, p: &LocPoly) -> Lin<MB> {
        poly_lin(p).map_linear(|m| Lin::single((r, c, m.clone()), Rat::one()))
    }

    /// `δ = [[0, x], [g, 0]]` of the lead chart, or `0`.
    pub fn delta(&self, t: &[usize]) -> Lin<MB> {
        if !self.twisted {
            return Lin::new();
        }
        let x = self.scene.x_on(t[0], t).expect("tuple in atlas");
        let g = self.scene.g_on(t[0], t).expect("tuple in atlas");
        let mut r = self.entry(0, 1, &x);
        r.add_lin(&self.entry(1, 0, &g));
        r
    }

    pub fn identity(&self, t: &[usize]) -> Lin<MB> {
        let one = LocPoly::one(&ring_at(self.scene, t));
        let mut r = self.entry(0, 0, &one);
        r.add_lin(&self.entry(1, 1, &one));
        r
    }

    /// `g_ab = diag(1, u_ab)` on `t`.
    pub fn g(&self, a: usize, b: usize, t: &[usize]) -> Lin<MB> {
        let one = LocPoly::one(&ring_at(self.scene, t));
        let mut r = self.entry(0, 0, &one);
        r.add_lin(&self.entry(1, 1, &self.scene.unit_on(a, b, t).expect("unit on tuple")));
        r
    }

    /// Matrix of an element stored in the basis of chart `from_chart`, expressed
    /// in the basis of chart `to_chart`, both on `t`: `g_{to,from} F g_{to,from}⁻¹`.
    pub fn rebase(&self, b: &MB, from_chart: usize, to_chart: usize, t: &[usize]) -> Lin<MB> {
        let u = self.scene.unit_on(to_chart, from_chart, t).expect("unit on tuple");
        let mut p = LocPoly::monomial(&ring_at(self.scene, t), b.2.clone(), Rat::one()).unwrap();
        if b.0 == 1 {
            p = &p * &u;
        }
        if b.1 == 1 {
            p = &p * &u.inverse().expect("unit");
        }
        self.entry(b.0, b.1, &p)
    }
}

impl CdgSheaf for MatAlg<'_> {
    type B = MB;
    fn scene(&self) -> &Scene {
        self.scene
    }
    fn name(&self) -> &'static str {
        if self.twisted {
            "End(P)"
        } else {
            "F"
        }
    }
    fn parity(&self, b: &MB) -> bool {
        b.0 != b.1
    }
    fn mul(&self, _t: &[usize], a: &MB, b: &MB) -> Lin<MB> {
        if a.1 != b.0 {
            return Lin::new();
        }
        Lin::single((a.0, b.1, a.2.mul(&b.2)), Rat::one())
    }
    fn d(&self, t: &[usize], a: &MB) -> Lin<MB> {
        if !self.twisted {
            return Lin::new();
        }
        let delta = self.delta(t);
        let f = Lin::single(a.clone(), Rat::one());
        let mut r = mul_lin(self, t, &delta, &f);
        let s = signs::of("mat.d", self.parity(a) as i64 + 1);
        r.add_scaled(&mul_lin(self, t, &f, &delta), &s);
        r
    }
    fn curvature(&self, t: &[usize]) -> Lin<MB> {
        let delta = self.delta(t);
        let mut r = mul_lin(self, t, &delta, &delta);
        let f = self.scene.f_on(t).expect("tuple in atlas");
        r.sub_lin(&self.entry(0, 0, &f).add_ref(&self.entry(1, 1, &f)));
        r
    }
    fn unit(&self, t: &[usize]) -> Lin<MB> {
        self.identity(t)
    }
    fn restrict(&self, b: &MB, from: &[usize], to: &[usize]) -> Lin<MB> {
        let p = self.scene.map(from, to).expect("restriction in atlas").apply_mono(&b.2);
        let plain = self.entry(b.0, b.1, &p);
        if !self.twisted {
            return plain;
        }
        plain.map_linear(|x| self.rebase(x, from[0], to[0], to))
    }
    fn scalar_times(&self, _t: &[usize], p: &LocPoly, b: &MB) -> Lin<MB> {
        self.entry(b.0, b.1, &p.mul_mono(&b.2, &Rat::one()))
    }
}

trait AddRef {
    fn add_ref(&self, o: &Self) -> Self;
}

impl<K: Ord + Clone> AddRef for Lin<K> {
    fn add_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_lin(o);
        r
    }
}

/// Left multiplication of `𝒜` on `P`: `m ↦ m·id`, `ε m ↦ m E₁₀`.
pub fn can(b: &AB) -> Lin<MB> {
    let mut r = Lin::new();
    if b.0 {
        r.add_term((1, 0, b.1.clone()), Rat::one());
    } else {
        r.add_term((0, 0, b.1.clone()), Rat::one());
        r.add_term((1, 1, b.1.clone()), Rat::one());
    }
    r
}

/// `p · 1` for a ring element `p` on `t`.
pub fn scalar<S: CdgSheaf>(s: &S, t: &[usize], p: &LocPoly) -> Lin<S::B> {
    s.unit(t).map_linear(|b| s.scalar_times(t, p, b))
}

/// Checks the cdg axioms on the given basis elements of `t`; returns the
/// list of violated identities.
pub fn check_axioms<S: CdgSheaf>(s: &S, t: &[usize], sample: &[S::B]) -> Vec<alloc::string::String> {
    let mut errs = Vec::new();
    let h = s.curvature(t);
    if !d_lin(s, t, &h).is_zero() {
        errs.push(format!("{} on {:?}: d(h) != 0", s.name(), t));
    }
    for a in sample {
        let la = Lin::single(a.clone(), Rat::one());
        let dd = d_lin(s, t, &s.d(t, a));
        let comm = mul_lin(s, t, &h, &la).difference(&mul_lin(s, t, &la, &h));
        if dd != comm {
            errs.push(format!("{} on {:?}: d^2({:?}) != [h, -]", s.name(), t, a));
        }
        for b in sample {
            let lb = Lin::single(b.clone(), Rat::one());
            let lhs = d_lin(s, t, &s.mul(t, a, b));
            let mut rhs = mul_lin(s, t, &s.d(t, a), &lb);
            rhs.add_scaled(&mul_lin(s, t, &la, &s.d(t, b)), &signs::of("parity", s.parity(a) as i64));
            if lhs != rhs {
                errs.push(format!("{} on {:?}: Leibniz fails on {:?}, {:?}", s.name(), t, a, b));
            }
            for c in sample {
                let lc = Lin::single(c.clone(), Rat::one());
                if mul_lin(s, t, &s.mul(t, a, b), &lc) != mul_lin(s, t, &la, &s.mul(t, b, c)) {
                    errs.push(format!("{} on {:?}: not associative on {:?}, {:?}, {:?}", s.name(), t, a, b, c));
                }
            }
        }
    }
    errs
}

/// Matrix factorization identities for `P`: `δ² = f·id` on every tuple and
/// `g_ij δ_j g_ij⁻¹ = δ_i` on every pair.
pub fn check_mf(scene: &Scene) -> Result<()> {
    let e = MatAlg::end_p(scene);
    for t in scene.tuples() {
        if !e.curvature(t).is_zero() {
            return Err(Error::Invalid(alloc::vec![format!("tuple {:?}: delta^2 != f id", t)]));
        }
        for &j in t {
            // δ in the basis of chart j, conjugated back to the lead basis
            let dj = e.entry(0, 1, &scene.x_on(j, t)?).add_ref(&e.entry(1, 0, &scene.g_on(j, t)?));
            let back = dj.map_linear(|b| e.rebase(b, j, t[0], t));
            if back != e.delta(t) {
                return Err(Error::Invalid(alloc::vec![format!("tuple {:?}: g transition fails for chart {}", t, j)]));
            }
        }
    }
    Ok(())
}

/// Checks that `can` is a unital dg algebra map compatible with restriction
/// on the sampled basis elements.
pub fn check_can(scene: &Scene, t: &[usize], sample: &[AB]) -> Vec<alloc::string::String> {
    let a = AAlg { scene };
    let e = MatAlg::end_p(scene);
    let mut errs = Vec::new();
    let can_lin = |x: &Lin<AB>| x.map_linear(can);
    if can_lin(&a.unit(t)) != e.identity(t) {
        errs.push(format!("can(1) != id on {:?}", t));
    }
    for x in sample {
        if can_lin(&a.d(t, x)) != can(x).map_linear(|b| e.d(t, b)) {
            errs.push(format!("can(d {:?}) != d can on {:?}", x, t));
        }
        for y in sample {
            if can_lin(&a.mul(t, x, y)) != mul_lin(&e, t, &can(x), &can(y)) {
                errs.push(format!("can({:?} {:?}) != product on {:?}", x, y, t));
            }
        }
        for j in scene.extensions(t) {
            let k = crate::scene::union(t, &[j]);
            let lhs = can_lin(&a.restrict(x, t, &k));
            let rhs = can(x).map_linear(|b| e.restrict(b, t, &k));
            if lhs != rhs {
                errs.push(format!("can does not commute with restriction {:?} -> {:?} on {:?}", t, k, x));
            }
        }
    }
    errs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{builtin_scene, BUILTIN_NAMES};

    fn sample_a(n: usize) -> Vec<AB> {
        let mut v = Vec::new();
        for e in [false, true] {
            v.push((e, Mono::one(n)));
            for i in 0..n {
                v.push((e, Mono::var(n, i)));
            }
        }
        v
    }

    fn sample_m(n: usize) -> Vec<MB> {
        let mut v = Vec::new();
        for r in 0..2 {
            for c in 0..2 {
                v.push((r, c, Mono::one(n)));
                if n > 0 {
                    v.push((r, c, Mono::var(n, 0)));
                }
            }
        }
        v
    }

    #[test]
    fn axioms_hold_on_builtins() {
        for name in BUILTIN_NAMES {
            let s = builtin_scene(name).unwrap();
            check_mf(&s).unwrap();
            for t in s.tuples() {
                let n = s.ring(t).unwrap().nvars();
                let ms: Vec<Mono> = sample_a(n).into_iter().map(|x| x.1).collect();
                assert!(check_axioms(&OAlg::new(&s, 1), t, &ms).is_empty());
                assert!(check_axioms(&AAlg { scene: &s }, t, &sample_a(n)).is_empty());
                let e = check_axioms(&MatAlg::end_p(&s), t, &sample_m(n));
                assert!(e.is_empty(), "{:?}", e);
                let e = check_axioms(&MatAlg::trivial(&s), t, &sample_m(n));
                assert!(e.is_empty(), "{:?}", e);
                let e = check_can(&s, t, &sample_a(n));
                assert!(e.is_empty(), "{:?}", e);
            }
        }
    }

    #[test]
    fn a2_d_of_e10() {
        let s = builtin_scene("A2").unwrap();
        let e = MatAlg::end_p(&s);
        // d(E10) = δE10 + E10δ = x·id
        let x = s.x_on(0, &[0]).unwrap();
        let want = e.entry(0, 0, &x).add_ref(&e.entry(1, 1, &x));
        assert_eq!(e.d(&[0], &(1, 0, Mono::one(2))), want);
    }
}
