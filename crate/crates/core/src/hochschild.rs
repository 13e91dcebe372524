//! Truncated Čech–Hochschild chains over the presheaves of `cdg`, their
//! differentials, the HKR maps to forms, and the trace map `φ` built from
//! shuffles, the chart-change maps `h^q` and the supertrace.
//!
//! A tensor `a₀[a₁|⋯|a_k]` is stored as the vector of its basis elements and
//! has length `k`. Every operation that would produce a tensor longer than the
//! truncation bound returns [`Error::TruncationOverflow`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cdg::{restrict_lin, CdgSheaf, MatAlg, AB, MB};
use crate::error::{Error, Result};
use crate::forms::{Cochain, ConeForm, Form, LogForm, Section, YForm};
use crate::lin::Lin;
use crate::poly::{LocPoly, Mono};
use crate::rat::Rat;
use crate::scene::{is_subset, union, Scene, Tuple};
use crate::signs;

pub type Chain<B> = Lin<Vec<B>>;

/// Hochschild chains indexed by strictly increasing tuples.
#[derive(Clone, PartialEq, Debug)]
pub struct CechChain<B: Ord> {
    entries: BTreeMap<Tuple, Chain<B>>,
}

impl<B: Ord + Clone> Default for CechChain<B> {
    fn default() -> Self {
        CechChain { entries: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> CechChain<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(t: &[usize], tensor: Vec<B>, c: Rat) -> Self {
        let mut r = Self::new();
        r.add_at(t, &Lin::single(tensor, c));
        r
    }

    pub fn add_at(&mut self, t: &[usize], c: &Chain<B>) {
        let e = self.entries.entry(t.to_vec()).or_default();
        e.add_lin(c);
        if e.is_zero() {
            self.entries.remove(t);
        }
    }

    pub fn add_scaled_at(&mut self, t: &[usize], c: &Chain<B>, s: &Rat) {
        self.add_at(t, &c.scaled(s));
    }

    pub fn get(&self, t: &[usize]) -> Option<&Chain<B>> {
        self.entries.get(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &Chain<B>)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (t, c) in o.iter() {
            r.add_at(t, c);
        }
        r
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut r = Self::new();
        for (t, c) in self.iter() {
            r.add_at(t, &c.scaled(s));
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rat::from_int(-1)))
    }

    /// Longest tensor length `k`, if any.
    pub fn max_len(&self) -> Option<usize> {
        self.iter().flat_map(|(_, c)| c.keys().map(|v| v.len() - 1)).max()
    }

    /// Keeps the tensors of length at most `k`.
    pub fn up_to(&self, k: usize) -> Self {
        let mut r = Self::new();
        for (t, c) in self.iter() {
            r.add_at(t, &c.filter(|v| v.len() <= k + 1));
        }
        r
    }

    pub fn map_tensors<C: Ord + Clone>(&self, mut f: impl FnMut(&Tuple, &[B]) -> Result<CechChain<C>>) -> Result<CechChain<C>> {
        let mut r = CechChain::new();
        for (t, c) in self.iter() {
            for (v, x) in c.iter() {
                r = r.add(&f(t, v)?.scale(x));
            }
        }
        Ok(r)
    }
}

/// Tensor product of linear combinations, expanded into basis tensors.
pub fn tensor_product<B: Ord + Clone>(factors: &[Lin<B>]) -> Chain<B> {
    let mut acc: Chain<B> = Lin::single(Vec::new(), Rat::one());
    for f in factors {
        let mut next = Lin::new();
        for (v, c) in acc.iter() {
            for (b, d) in f.iter() {
                let mut w = v.clone();
                w.push(b.clone());
                next.add_term(w, c * d);
            }
        }
        acc = next;
    }
    acc
}

fn one<B: Ord + Clone>(b: &B) -> Lin<B> {
    Lin::single(b.clone(), Rat::one())
}

/// `pre[i] = |a₀| + ⋯ + |a_i|`.
fn prefix_parity<S: CdgSheaf>(s: &S, a: &[S::B]) -> Vec<i64> {
    let mut acc = 0;
    a.iter()
        .map(|b| {
            acc += s.parity(b) as i64;
            acc
        })
        .collect()
}

fn check_len(len: usize, max: usize) -> Result<()> {
    if len > max {
        Err(Error::TruncationOverflow { len, max })
    } else {
        Ok(())
    }
}

/// Which of `d₀, d₁, d₂` to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parts {
    pub d0: bool,
    pub d1: bool,
    pub d2: bool,
}

pub const ALL: Parts = Parts { d0: true, d1: true, d2: true };
pub const D2: Parts = Parts { d0: false, d1: false, d2: true };

fn hoch_d_tensor<S: CdgSheaf>(s: &S, t: &[usize], a: &[S::B], parts: Parts, max: usize) -> Result<Chain<S::B>> {
    let k = a.len() - 1;
    let pre = prefix_parity(s, a);
    let before = |i: usize| if i == 0 { 0 } else { pre[i - 1] };
    let mut out = Lin::new();
    if parts.d0 {
        let h = s.curvature(t);
        if !h.is_zero() {
            check_len(k + 1, max)?;
            for i in 0..=k {
                let sign = signs::of("hoch.d0", pre[i] + i as i64);
                for (hb, hc) in h.iter() {
                    let mut v = a[..=i].to_vec();
                    v.push(hb.clone());
                    v.extend_from_slice(&a[i + 1..]);
                    out.add_term(v, &sign * hc);
                }
            }
        }
    }
    if parts.d1 {
        for i in 0..=k {
            let sign = signs::of("hoch.d1", before(i) + i as i64);
            for (db, dc) in s.d(t, &a[i]).iter() {
                let mut v = a.to_vec();
                v[i] = db.clone();
                out.add_term(v, &sign * dc);
            }
        }
    }
    if parts.d2 && k >= 1 {
        let mut merge = |i: usize, j: usize, sign: Rat| {
            let (x, y) = (&a[i], &a[j]);
            for (p, pc) in s.mul(t, x, y).iter() {
                let mut v = Vec::with_capacity(k);
                if j == 0 {
                    // a_k a₀ [a₁|⋯|a_{k−1}]
                    v.push(p.clone());
                    v.extend_from_slice(&a[1..k]);
                } else {
                    v.extend_from_slice(&a[..i]);
                    v.push(p.clone());
                    v.extend_from_slice(&a[j + 1..]);
                }
                out.add_term(v, &sign * pc);
            }
        };
        merge(0, 1, signs::of("hoch.d2", pre[0]));
        for i in 1..k {
            merge(i, i + 1, signs::of("hoch.d2", pre[i] + i as i64));
        }
        let last = 1 + (s.parity(&a[k]) as i64 + 1) * (pre[k - 1] + k as i64 - 1);
        merge(k, 0, signs::of("hoch.d2", last));
    }
    Ok(out)
}

/// `d₀ + d₁ + d₂` (restricted to `parts`) on one tuple.
pub fn hoch_d<S: CdgSheaf>(s: &S, t: &[usize], c: &Chain<S::B>, parts: Parts, max: usize) -> Result<Chain<S::B>> {
    let mut out = Lin::new();
    for (v, x) in c.iter() {
        out.add_scaled(&hoch_d_tensor(s, t, v, parts, max)?, x);
    }
    Ok(out)
}

pub fn restrict_chain<S: CdgSheaf>(s: &S, c: &Chain<S::B>, from: &[usize], to: &[usize]) -> Chain<S::B> {
    let mut out = Lin::new();
    for (v, x) in c.iter() {
        let factors: Vec<_> = v.iter().map(|b| s.restrict(b, from, to)).collect();
        out.add_scaled(&tensor_product(&factors), x);
    }
    out
}

pub fn cech_d<S: CdgSheaf>(s: &S, c: &CechChain<S::B>) -> CechChain<S::B> {
    let scene = s.scene();
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        for j in scene.extensions(t) {
            let k = union(t, &[j]);
            let m = k.iter().position(|&v| v == j).unwrap();
            r.add_scaled_at(&k, &restrict_chain(s, ch, t, &k), &signs::of("cech.d", m as i64));
        }
    }
    r
}

/// `d_Cech + (−1)^p (d₀ + d₁ + d₂)`.
pub fn cech_hoch_d<S: CdgSheaf>(s: &S, c: &CechChain<S::B>, parts: Parts, max: usize) -> Result<CechChain<S::B>> {
    let mut r = cech_d(s, c);
    for (t, ch) in c.iter() {
        let sign = signs::of("cech.twist", t.len() as i64 - 1);
        r.add_scaled_at(t, &hoch_d(s, t, ch, parts, max)?, &sign);
    }
    Ok(r)
}

/// The Hochschild part only, twisted by `(−1)^p`.
pub fn twisted_hoch_d<S: CdgSheaf>(s: &S, c: &CechChain<S::B>, parts: Parts, max: usize) -> Result<CechChain<S::B>> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let sign = signs::of("cech.twist", t.len() as i64 - 1);
        r.add_scaled_at(t, &hoch_d(s, t, ch, parts, max)?, &sign);
    }
    Ok(r)
}

fn ring_poly(scene: &Scene, t: &[usize], m: &Mono) -> LocPoly {
    LocPoly::monomial(scene.ring(t).expect("tuple in atlas"), m.clone(), Rat::one()).expect("admissible monomial")
}

/// `(1/k!) a₀ da₁∧⋯∧da_k` for monomials on `t`.
fn hkr_form(scene: &Scene, t: &[usize], a: &[Mono]) -> Form {
    let k = a.len() - 1;
    let mut w = Form::function(&ring_poly(scene, t, &a[0]));
    for m in &a[1..] {
        w = w.wedge(&Form::function(&ring_poly(scene, t, m)).d());
    }
    w.scale(&Rat::factorial(k as u32).recip().expect("nonzero"))
}

/// `HKR_(X,±f)`: `a₀[a₁|⋯|a_k] ↦ (1/k!) a₀da₁∧⋯∧da_k`.
pub fn hkr_xf(scene: &Scene, c: &CechChain<Mono>) -> Cochain<Form> {
    let mut r = Cochain::new();
    for (t, ch) in c.iter() {
        for (v, x) in ch.iter() {
            r.add_at(t, hkr_form(scene, t, v).scale(x));
        }
    }
    r
}

/// `HKR_𝒜` into the cone of `L`.
pub fn hkr_a(scene: &Scene, c: &CechChain<AB>) -> Cochain<ConeForm> {
    let mut r = Cochain::new();
    for (t, ch) in c.iter() {
        let ring = scene.ring(t).expect("tuple in atlas");
        let i0 = t[0];
        let p = t.len() as i64 - 1;
        let x = Form::function(&scene.x_on(i0, t).expect("chart data")).d();
        let g = Form::function(&scene.g_on(i0, t).expect("chart data")).d();
        for (v, coef) in ch.iter() {
            let eps: Vec<usize> = (0..v.len()).filter(|&i| v[i].0).collect();
            let monos: Vec<Mono> = v.iter().map(|b| b.1.clone()).collect();
            let w = hkr_form(scene, t, &monos).scale(coef);
            match eps.len() {
                0 => {
                    let a = x.wedge(&g).wedge(&w);
                    let b = LogForm::new(scene, t, Form::zero(ring), w.clone());
                    r.add_at(t, ConeForm { a, b });
                    for j in (0..i0).filter(|&j| scene.has(&union(t, &[j]))) {
                        let k = union(t, &[j]);
                        let u = scene.unit_on(i0, j, &k).expect("unit on tuple");
                        let dlog = Form::function(&u).d().mul_fn(&u.inverse().expect("unit"));
                        let a = dlog.wedge(&Section::restrict(&w, scene, t, &k)).scale(&signs::of("hkr.a.du", p + 1));
                        r.add_at(&k, ConeForm { a, b: LogForm::zero(scene, &k) });
                    }
                }
                1 => {
                    let l = eps[0];
                    let a = x.wedge(&w).scale(&signs::of("hkr.a.eps", l as i64));
                    r.add_at(t, ConeForm { a, b: LogForm::zero(scene, t) });
                }
                _ => {}
            }
        }
    }
    r
}

/// `𝒜 → O_Y` on chains: drops tensors with an `ε`.
pub fn to_y(c: &CechChain<AB>) -> CechChain<Mono> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let mut out = Lin::new();
        for (v, x) in ch.iter() {
            if v.iter().all(|b| !b.0) {
                out.add_term(v.iter().map(|b| b.1.clone()).collect(), x.clone());
            }
        }
        r.add_at(t, &out);
    }
    r
}

/// `HKR_Y`: the untwisted HKR map followed by restriction to `Y`.
pub fn hkr_y(scene: &Scene, c: &CechChain<Mono>) -> Cochain<YForm> {
    hkr_xf(scene, c).map(|t, w| YForm::reduce(scene, t, w))
}

/// `Č(can)`: entrywise left multiplication on `P`.
pub fn can_chain(c: &CechChain<AB>) -> CechChain<MB> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let mut out = Lin::new();
        for (v, x) in ch.iter() {
            let factors: Vec<_> = v.iter().map(crate::cdg::can).collect();
            out.add_scaled(&tensor_product(&factors), x);
        }
        r.add_at(t, &out);
    }
    r
}

/// Weak compositions of `n` into `parts` parts.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Sh([δ|⋯|δ], a) = Σ a₀[δ^{i₀}|a₁|δ^{i₁}|⋯|a_k|δ^{i_k}]` with `n` copies of `δ`.
pub fn sh<B: Ord + Clone>(delta: &Lin<B>, n: usize, a: &[B], max: usize) -> Result<Chain<B>> {
    let k = a.len() - 1;
    check_len(k + n, max)?;
    let mut out = Lin::new();
    for comp in compositions(n, k + 1) {
        let mut factors = Vec::with_capacity(k + n + 1);
        for (i, b) in a.iter().enumerate() {
            factors.push(one(b));
            for _ in 0..comp[i] {
                factors.push(delta.clone());
            }
        }
        out.add_lin(&tensor_product(&factors));
    }
    Ok(out)
}

/// `Sh` on each tuple with the lead-chart `δ` of `P`.
pub fn sh_chain(e: &MatAlg, n: usize, c: &CechChain<MB>, max: usize) -> Result<CechChain<MB>> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let delta = e.delta(t);
        for (v, x) in ch.iter() {
            r.add_scaled_at(t, &sh(&delta, n, v, max)?, x);
        }
    }
    Ok(r)
}

/// Supertrace of a tensor of 2×2 matrix units in the basis `(1, ε)`.
pub fn s_tr(a: &[MB]) -> Lin<Vec<Mono>> {
    let m = a.len() - 1;
    for i in 0..=m {
        if a[i].1 != a[(i + 1) % (m + 1)].0 {
            return Lin::new();
        }
    }
    let mut sigma = (m as i64 + 1) * a[0].0 as i64;
    for b in &a[1..] {
        sigma += b.0 as i64;
    }
    Lin::single(a.iter().map(|b| b.2.clone()).collect(), signs::of("str.sigma", sigma))
}

pub fn s_tr_chain(c: &CechChain<MB>) -> CechChain<Mono> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let mut out = Lin::new();
        for (v, x) in ch.iter() {
            out.add_scaled(&s_tr(v), x);
        }
        r.add_at(t, &out);
    }
    r
}

/// Nondecreasing `q`-tuples with entries in `0..=k`.
fn splits(q: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(q: usize, lo: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for l in lo..=k {
            cur.push(l);
            go(q, l, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(q, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Increasing `q`-subsets of `0..n`.
fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, q: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in lo..n {
            cur.push(i);
            go(n, q, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, q, 0, &mut Vec::new(), &mut out);
    out
}

/// Ordered `q`-tuples of distinct entries from `pool`.
fn arrangements(pool: &[usize], q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &j) in pool.iter().enumerate() {
        let mut rest = pool.to_vec();
        rest.remove(i);
        for mut tail in arrangements(&rest, q - 1) {
            tail.insert(0, j);
            out.push(tail);
        }
    }
    out
}

/// The segment of each tensor position `1..=k` for split points `l`.
fn segment_of(pos: usize, l: &[usize]) -> usize {
    l.iter().filter(|&&li| pos > li).count()
}

/// `Σ_s (|a₀| + ⋯ + |a_{l_s}| + l_s)`.
fn split_eps(pre: &[i64], l: &[usize]) -> i64 {
    l.iter().map(|&li| pre[li] + li as i64).sum()
}

fn binom2(q: usize) -> i64 {
    signs::binom2(q as i64)
}

/// `h^q` from `End(P)` chains to chains of the trivialized category.
pub fn hq(e: &MatAlg, q: usize, c: &CechChain<MB>) -> CechChain<MB> {
    let scene = e.scene;
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let i0 = t[0];
        let p = t.len() - 1;
        for new in subsets(i0, q) {
            let k_t = union(&new, t);
            if !scene.has(&k_t) {
                continue;
            }
            let chart = |s: usize| if s < q { new[s] } else { i0 };
            let map = scene.map(t, &k_t).expect("restriction in atlas");
            let conj = |b: &MB, c: usize| -> Lin<MB> {
                e.entry(b.0, b.1, &map.apply_mono(&b.2)).map_linear(|x| e.rebase(x, i0, c, &k_t))
            };
            for (v, x) in ch.iter() {
                let k = v.len() - 1;
                let pre = prefix_parity(e, v);
                for l in splits(q, k) {
                    let mut factors = Vec::with_capacity(k + q + 1);
                    factors.push(crate::cdg::mul_lin(e, &k_t, &e.g(i0, chart(0), &k_t), &conj(&v[0], chart(0))));
                    let mut seg = 0;
                    for pos in 1..=k + 1 {
                        let target = if pos <= k { segment_of(pos, &l) } else { q };
                        while seg < target {
                            // g⁻¹_{c(s+1) c(s)} = g_{c(s) c(s+1)}
                            factors.push(e.g(chart(seg), chart(seg + 1), &k_t));
                            seg += 1;
                        }
                        if pos <= k {
                            factors.push(conj(&v[pos], chart(seg)));
                        }
                    }
                    let exp = split_eps(&pre, &l) + (p * q) as i64 + binom2(q);
                    let sign = signs::of("hq.basis", exp);
                    r.add_scaled_at(&k_t, &tensor_product(&factors), &(&sign * x));
                }
            }
        }
    }
    r
}

/// `φ = Σ_{n,q} (−1)^n sTr h^q Sh(δ^n, −)`, keeping output tensors of length
/// at most `max_out`.
pub fn phi(e: &MatAlg, c: &CechChain<MB>, max_out: usize) -> CechChain<Mono> {
    let mut r = CechChain::new();
    let Some(k_min) = c.iter().flat_map(|(_, ch)| ch.keys().map(|v| v.len() - 1)).min() else {
        return r;
    };
    let ncharts = e.scene.ncharts();
    for n in 0..=max_out.saturating_sub(k_min) {
        let shuffled = sh_chain(e, n, &c.up_to(max_out - n), max_out).expect("length bounded by construction");
        for q in 0..ncharts {
            if k_min + n + q > max_out {
                break;
            }
            let h = hq(e, q, &shuffled).up_to(max_out);
            r = r.add(&s_tr_chain(&h).scale(&signs::of("phi.n", n as i64)));
        }
    }
    r
}

/// A lax morphism between presheaves of one-object dg algebras: a functor on
/// each tuple and the components `α_{I→J}` (with inverses) on `J ⊇ I`.
pub struct Lax<'a, C: CdgSheaf, D: CdgSheaf> {
    pub src: &'a C,
    pub tgt: &'a D,
    pub functor: &'a dyn Fn(&[usize], &C::B) -> Lin<D::B>,
    pub alpha: &'a dyn Fn(&[usize], &[usize]) -> Lin<D::B>,
    pub alpha_inv: &'a dyn Fn(&[usize], &[usize]) -> Lin<D::B>,
}

impl<C: CdgSheaf, D: CdgSheaf> Lax<'_, C, D> {
    /// `φ_J(a|_J)|_K` for `a` on `I ⊆ J ⊆ K`.
    fn image(&self, a: &C::B, i: &[usize], j: &[usize], k: &[usize]) -> Lin<D::B> {
        let fa = restrict_lin(self.src, &Lin::single(a.clone(), Rat::one()), i, j).map_linear(|b| (self.functor)(j, b));
        if j == k {
            fa
        } else {
            restrict_lin(self.tgt, &fa, j, k)
        }
    }

    /// Checks `α_{I→K} = α_{J→K} · α_{I→J}|_K` and `α α⁻¹ = 1` on all nested tuples.
    pub fn check_cocycle(&self) -> Result<()> {
        let scene = self.src.scene();
        let tuples: Vec<Tuple> = scene.tuples().cloned().collect();
        for i in &tuples {
            for j in tuples.iter().filter(|j| is_subset(i, j)) {
                let prod = crate::cdg::mul_lin(self.tgt, j, &(self.alpha)(i, j), &(self.alpha_inv)(i, j));
                if prod != self.tgt.unit(j) {
                    return Err(Error::Precondition(format!("alpha {:?} -> {:?} is not invertible", i, j)));
                }
                for k in tuples.iter().filter(|k| is_subset(j, k)) {
                    let lhs = (self.alpha)(i, k);
                    let rhs = crate::cdg::mul_lin(self.tgt, k, &restrict_lin(self.tgt, &(self.alpha)(i, j), j, k), &(self.alpha)(j, k));
                    if lhs != rhs {
                        return Err(Error::Precondition(format!("cocycle condition fails on {:?} -> {:?} -> {:?}", i, j, k)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `σ(I, J)` as an exponent: the inversions of `(j₁,…,j_q, i₀,…,i_p)`.
fn sigma(i: &[usize], j: &[usize]) -> i64 {
    let mut v = j.to_vec();
    v.extend_from_slice(i);
    signs::perm_sign(&v)
}

/// The pieces of one summand of the lax `h^q`: `J_s`, the front factor and
/// the items after it, with the segment index of each item.
struct LaxTerm<B: Ord> {
    front: Lin<B>,
    items: Vec<(Lin<B>, LaxItem)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LaxItem {
    /// `a_i` living in segment `s`.
    A(usize, usize),
    /// `α⁻¹` closing segment `s`.
    AlphaInv(usize),
}

fn j_sets(i: &[usize], j: &[usize]) -> Vec<Tuple> {
    (0..=j.len()).map(|s| union(i, &j[..s])).collect()
}

fn lax_term<C: CdgSheaf, D: CdgSheaf>(lax: &Lax<C, D>, i: &[usize], j: &[usize], a: &[C::B], l: &[usize]) -> LaxTerm<D::B> {
    let q = j.len();
    let js = j_sets(i, j);
    let kt = &js[q];
    let front = crate::cdg::mul_lin(lax.tgt, kt, &(lax.alpha)(i, kt), &lax.image(&a[0], i, kt, kt));
    let mut items = Vec::new();
    let mut seg = 0;
    let k = a.len() - 1;
    for pos in 1..=k + 1 {
        let target = if pos <= k { segment_of(pos, l) } else { q };
        while seg < target {
            let (lo, hi) = (&js[q - seg - 1], &js[q - seg]);
            items.push((restrict_lin(lax.tgt, &(lax.alpha_inv)(lo, hi), hi, kt), LaxItem::AlphaInv(seg)));
            seg += 1;
        }
        if pos <= k {
            items.push((lax.image(&a[pos], i, &js[q - seg], kt), LaxItem::A(pos, seg)));
        }
    }
    LaxTerm { front, items }
}

fn lax_pool(scene: &Scene, i: &[usize]) -> Vec<usize> {
    (0..scene.ncharts()).filter(|c| !i.contains(c)).collect()
}

/// Lax `h^q` on a tuple `i`, with `p` the Čech degree to use in the sign
/// (`−1` for global chains on the empty tuple).
pub fn lax_hq_at<C: CdgSheaf, D: CdgSheaf>(lax: &Lax<C, D>, q: usize, i: &[usize], p: i64, ch: &Chain<C::B>, max: usize) -> Result<CechChain<D::B>> {
    let scene = lax.src.scene();
    let mut r = CechChain::new();
    for j in arrangements(&lax_pool(scene, i), q) {
        let kt = union(i, &j);
        if !scene.has(&kt) {
            continue;
        }
        let sg = sigma(i, &j);
        for (v, x) in ch.iter() {
            let k = v.len() - 1;
            check_len(k + q, max)?;
            let pre = prefix_parity(lax.src, v);
            for l in splits(q, k) {
                let term = lax_term(lax, i, &j, v, &l);
                let mut factors = vec![term.front];
                factors.extend(term.items.into_iter().map(|(f, _)| f));
                let exp = split_eps(&pre, &l) + sg + p * q as i64;
                r.add_scaled_at(&kt, &tensor_product(&factors), &(&signs::of("lax.hq", exp) * x));
            }
        }
    }
    Ok(r)
}

pub fn lax_hq<C: CdgSheaf, D: CdgSheaf>(lax: &Lax<C, D>, q: usize, c: &CechChain<C::B>, max: usize) -> Result<CechChain<D::B>> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        r = r.add(&lax_hq_at(lax, q, t, t.len() as i64 - 1, ch, max)?);
    }
    Ok(r)
}

/// `Č(φ, α) = Σ_q h^q`.
pub fn cech_lax_map<C: CdgSheaf, D: CdgSheaf>(lax: &Lax<C, D>, c: &CechChain<C::B>, max: usize) -> Result<CechChain<D::B>> {
    lax.check_cocycle()?;
    let mut r = CechChain::new();
    for q in 0..lax.src.scene().ncharts() {
        r = r.add(&lax_hq(lax, q, c, max)?);
    }
    Ok(r)
}

/// `Č(φ)` for a strict morphism.
pub fn cech_strict_map<B: Ord + Clone, C: Ord + Clone>(functor: &dyn Fn(&[usize], &B) -> Lin<C>, c: &CechChain<B>) -> CechChain<C> {
    let mut r = CechChain::new();
    for (t, ch) in c.iter() {
        let mut out = Lin::new();
        for (v, x) in ch.iter() {
            let factors: Vec<_> = v.iter().map(|b| functor(t, b)).collect();
            out.add_scaled(&tensor_product(&factors), x);
        }
        r.add_at(t, &out);
    }
    r
}

/// Restriction homotopy `H̃ = Σ_{q≥1} h̃^q` from global chains (the empty tuple) to
/// Čech chains, `h̃^q` being `h^q` with `p = −1`.
pub fn restriction_homotopy<C: CdgSheaf, D: CdgSheaf>(lax: &Lax<C, D>, global: &Chain<C::B>, max: usize) -> Result<CechChain<D::B>> {
    let mut r = CechChain::new();
    for q in 1..=lax.src.scene().ncharts() {
        r = r.add(&lax_hq_at(lax, q, &[], -1, global, max)?);
    }
    Ok(r)
}

/// Global chains restricted to each chart.
pub fn restrict_global<S: CdgSheaf>(s: &S, global: &Chain<S::B>) -> CechChain<S::B> {
    let mut r = CechChain::new();
    for i in 0..s.scene().ncharts() {
        r.add_at(&[i], &restrict_chain(s, global, &[], &[i]));
    }
    r
}

/// Homotopy between `Č(φ, α)` and `Č(ψ, β)` for an isomorphism `τ: φ ⇒ ψ`,
/// with `τ_I` given on every `K ⊇ I` by `tau(I, K)`.
pub struct Iso<'a, C: CdgSheaf, D: CdgSheaf> {
    pub first: &'a Lax<'a, C, D>,
    pub second: &'a Lax<'a, C, D>,
    pub tau: &'a dyn Fn(&[usize], &[usize]) -> Lin<D::B>,
    pub tau_inv: &'a dyn Fn(&[usize], &[usize]) -> Lin<D::B>,
}

pub fn iso_homotopy<C: CdgSheaf, D: CdgSheaf>(iso: &Iso<C, D>, c: &CechChain<C::B>, max: usize) -> Result<CechChain<D::B>> {
    let (phi, psi) = (iso.first, iso.second);
    let scene = phi.src.scene();
    let mut r = CechChain::new();
    for (i, ch) in c.iter() {
        let p = i.len() as i64 - 1;
        for q in 0..scene.ncharts() {
            for j in arrangements(&lax_pool(scene, i), q) {
                let kt = union(i, &j);
                if !scene.has(&kt) {
                    continue;
                }
                let js = j_sets(i, &j);
                let sg = sigma(i, &j);
                for (v, x) in ch.iter() {
                    let k = v.len() - 1;
                    check_len(k + q + 1, max)?;
                    let pre = prefix_parity(phi.src, v);
                    for l in splits(q, k) {
                        let t1 = lax_term(phi, i, &j, v, &l);
                        let t2 = lax_term(psi, i, &j, v, &l);
                        let front = crate::cdg::mul_lin(phi.tgt, &kt, &(iso.tau)(i, &kt), &t1.front);
                        for slot in 0..=k + q {
                            let mut factors = vec![front.clone()];
                            let (mut r_last, mut s_count) = (0usize, 0usize);
                            for (n, ((f1, kind), (f2, _))) in t1.items.iter().zip(t2.items.iter()).enumerate() {
                                if n < slot {
                                    factors.push(f1.clone());
                                    match kind {
                                        LaxItem::A(pos, _) => r_last = *pos,
                                        LaxItem::AlphaInv(_) => s_count += 1,
                                    }
                                } else {
                                    if n == slot {
                                        factors.push((iso.tau_inv)(&js[q - s_count], &kt));
                                    }
                                    factors.push(f2.clone());
                                }
                            }
                            if slot == k + q {
                                factors.push((iso.tau_inv)(&js[q - s_count], &kt));
                            }
                            // the target Čech degree p + q enters on top of ε'
                            let exp = split_eps(&pre, &l) + sg + p * q as i64 + (p + q as i64) + pre[r_last] + r_last as i64 + s_count as i64;
                            r.add_scaled_at(&kt, &tensor_product(&factors), &(&signs::of("lax.iso", exp) * x));
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Homotopy between `Č(φ)` and `Č(φ, id)` for a strict morphism: two unit
/// insertions over each new chart.
pub fn strict_lax_homotopy<C: CdgSheaf, D: CdgSheaf>(
    src: &C,
    tgt: &D,
    functor: &dyn Fn(&[usize], &C::B) -> Lin<D::B>,
    c: &CechChain<C::B>,
    max: usize,
) -> Result<CechChain<D::B>> {
    let scene = src.scene();
    let mut r = CechChain::new();
    for (i, ch) in c.iter() {
        for j in scene.extensions(i) {
            let kt = union(i, &[j]);
            let sg = sigma(i, &[j]);
            let unit = tgt.unit(&kt);
            for (v, x) in ch.iter() {
                let k = v.len() - 1;
                check_len(k + 2, max)?;
                let pre = prefix_parity(src, v);
                let images: Vec<_> = v.iter().map(|b| restrict_lin(src, &one(b), i, &kt).map_linear(|y| functor(&kt, y))).collect();
                for l1 in 0..=k {
                    for l2 in l1..=k {
                        let mut factors = Vec::with_capacity(k + 3);
                        for (n, im) in images.iter().enumerate() {
                            factors.push(im.clone());
                            if n == l1 {
                                factors.push(unit.clone());
                            }
                            if n == l2 {
                                factors.push(unit.clone());
                            }
                        }
                        let exp = pre[l1] + l1 as i64 + pre[l2] + l2 as i64 + sg;
                        r.add_scaled_at(&kt, &tensor_product(&factors), &(&signs::of("lax.strict", exp) * x));
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Top route of the trace square: `HKR_(X,−f) ∘ φ ∘ Č(can)`. Forms vanish
/// above the chart dimension, so `φ` is only expanded that far.
pub fn trace_route(scene: &Scene, c: &CechChain<AB>) -> Cochain<Form> {
    let dim = scene.tuples().map(|t| scene.ring(t).map_or(0, |r| r.nvars())).max().unwrap_or(0);
    hkr_xf(scene, &phi(&MatAlg::end_p(scene), &can_chain(c), dim))
}

/// Bottom route of the trace square: `HKR_𝒜`, then `∧̄ todd`, then the cone
/// projection to `(Ω, −df∧)`.
pub fn todd_route(scene: &Scene, c: &CechChain<AB>, todd: &Cochain<Form>) -> Cochain<Form> {
    crate::forms::cone_to_omega(&crate::forms::bar_wedge_cone(scene, &hkr_a(scene, c), todd))
}

/// Every basis tensor of length at most `max_k` over `t`, with monomials of
/// degree at most one (and inverses of inverted variables).
pub fn basis_tensors(scene: &Scene, t: &[usize], max_k: usize) -> Vec<Vec<AB>> {
    let ring = scene.ring(t).expect("tuple in atlas");
    let n = ring.nvars();
    let mut monos = vec![Mono::one(n)];
    for i in 0..n {
        monos.push(Mono::var(n, i));
        if ring.inverted[i] {
            let mut m = Mono::one(n);
            m.0[i] = -1;
            monos.push(m);
        }
    }
    let basis: Vec<AB> = [false, true].iter().flat_map(|&e| monos.iter().map(move |m| (e, m.clone()))).collect();
    let mut out: Vec<Vec<AB>> = basis.iter().map(|b| vec![b.clone()]).collect();
    let mut last = out.clone();
    for _ in 0..max_k {
        let next: Vec<Vec<AB>> = last
            .iter()
            .flat_map(|v| basis.iter().map(move |b| {
                let mut w = v.clone();
                w.push(b.clone());
                w
            }))
            .collect();
        out.extend(next.iter().cloned());
        last = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{AAlg, OAlg};
    use crate::scene::builtin_scene;

    fn m(v: &[i32]) -> Mono {
        Mono(v.to_vec())
    }

    #[test]
    fn commutative_d2_cancels() {
        let s = builtin_scene("A2").unwrap();
        let o = OAlg::new(&s, 0);
        let c = Lin::single(vec![m(&[0, 0]), m(&[0, 0])], Rat::one());
        assert!(hoch_d(&o, &[0], &c, ALL, 6).unwrap().is_zero());
    }

    #[test]
    fn curvature_insertion() {
        let s = builtin_scene("A2").unwrap();
        let o = OAlg::new(&s, 1);
        let c = Lin::single(vec![m(&[0, 1])], Rat::one());
        let d = hoch_d(&o, &[0], &c, ALL, 6).unwrap();
        // f = xy inserted after y: sign (−1)^{0+0} = +1
        assert_eq!(d, Lin::single(vec![m(&[0, 1]), m(&[1, 1])], Rat::one()));
        assert!(matches!(hoch_d(&o, &[0], &c, ALL, 0), Err(Error::TruncationOverflow { .. })));
    }

    #[test]
    fn hkr_a_examples() {
        let s = builtin_scene("A2").unwrap();
        let r = s.ring(&[0]).unwrap().clone();
        let unit = CechChain::single(&[0], vec![(false, m(&[0, 0]))], Rat::one());
        let h = hkr_a(&s, &unit);
        let c = h.get(&[0]).unwrap();
        let (dx, dy) = (Form::dvar(&r, 0), Form::dvar(&r, 1));
        assert_eq!(c.a, dx.wedge(&dy));
        assert_eq!(c.b, LogForm::new(&s, &[0], Form::zero(&r), Form::one(&r)));
        let one_eps = CechChain::single(&[0], vec![(false, m(&[0, 0])), (true, m(&[0, 1]))], Rat::one());
        assert_eq!(hkr_a(&s, &one_eps).get(&[0]).unwrap().a, dx.wedge(&dy).neg());
        let two_eps = CechChain::single(&[0], vec![(true, m(&[0, 0])), (true, m(&[0, 1]))], Rat::one());
        assert!(hkr_a(&s, &two_eps).is_zero());
    }

    #[test]
    fn supertrace_examples() {
        let z = m(&[0]);
        let mut diag = s_tr(&[(0, 0, z.clone())]);
        diag.add_lin(&s_tr(&[(1, 1, z.clone())]));
        assert!(diag.is_zero());
        assert_eq!(s_tr(&[(1, 1, z.clone())]), Lin::single(vec![z.clone()], Rat::from_int(-1)));
        assert!(s_tr(&[(0, 1, z.clone())]).is_zero());
    }

    #[test]
    fn shuffle_examples() {
        let d = Lin::single('d', Rat::one());
        assert_eq!(sh(&d, 0, &['a', 'b'], 6).unwrap(), Lin::single(vec!['a', 'b'], Rat::one()));
        let mut want = Lin::single(vec!['a', 'd', 'b'], Rat::one());
        want.add_term(vec!['a', 'b', 'd'], Rat::one());
        assert_eq!(sh(&d, 1, &['a', 'b'], 6).unwrap(), want);
        assert_eq!(sh(&d, 2, &['a'], 6).unwrap(), Lin::single(vec!['a', 'd', 'd'], Rat::one()));
        assert!(sh(&d, 2, &['a'], 1).is_err());
    }

    #[test]
    fn hq_single_chart_vanishes() {
        let s = builtin_scene("A2").unwrap();
        let e = MatAlg::end_p(&s);
        let c = CechChain::single(&[0], vec![(0, 1, m(&[0, 0]))], Rat::one());
        assert!(hq(&e, 1, &c).is_zero());
        assert_eq!(hq(&e, 0, &c), c);
    }

    #[test]
    fn a_is_dg() {
        let s = builtin_scene("A1").unwrap();
        let a = AAlg { scene: &s };
        let c = CechChain::single(&[0], vec![(true, m(&[0]))], Rat::one());
        let d = cech_hoch_d(&a, &c, ALL, 4).unwrap();
        assert_eq!(d, CechChain::single(&[0], vec![(false, m(&[1]))], Rat::one()));
    }
}
