//! Windowed ℤ/2-graded homology of the Čech total complexes.
//!
//! Every differential preserves the weight grading
//! `W = (weighted polynomial degree, dx_i weighing like x_i) − w_f · (form degree)`,
//! so the total complex splits into finite slices. The window keeps the
//! slices with `|W| ≤ D`; ranks are computed exactly over ℚ. Forms on `Y`
//! are graded as residues, with `dx/x` adding one to the form degree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forms::{total_d, Cochain, Complex, Cone, ConeForm, Form, LogForm, Omega, OmegaY, YForm};
use crate::lin::Lin;
use crate::matrix::QMatrix;
use crate::poly::{LocPoly, Mono, RingRef};
use crate::rat::Rat;
use crate::scene::{Lead, Scene, Tuple};

/// Variable weights per tuple and the weight of `f`.
#[derive(Clone, Debug)]
pub struct Grading {
    pub wf: i64,
    weights: BTreeMap<Tuple, Vec<i64>>,
}

impl Grading {
    pub fn of(scene: &Scene) -> Result<Grading> {
        let mut weights = BTreeMap::new();
        for t in scene.tuples() {
            let ring = scene.ring(t)?;
            let w: Vec<i64> = ring.vars.iter().map(|v| scene.weight(v) as i64).collect();
            let inverted = ring.inverted.iter().filter(|&&b| b).count();
            if inverted > 0 && ring.nvars() != 1 {
                return Err(Error::Precondition(format!("tuple {:?}: graded slices need a single variable when one is inverted", t)));
            }
            if w.iter().any(|&x| x == 0) || !(w.iter().all(|&x| x > 0) || w.iter().all(|&x| x < 0)) {
                return Err(Error::Precondition(format!("tuple {:?}: weights must be nonzero and of one sign", t)));
            }
            weights.insert(t.clone(), w);
        }
        let mut g = Grading { wf: 0, weights };
        let mut wf = None;
        for i in 0..scene.ncharts() {
            let f = &scene.charts[i].f;
            if f.is_zero() {
                continue;
            }
            let w = g.homogeneous(&[i], f).ok_or_else(|| Error::Precondition(format!("chart {}: f is not homogeneous", i)))?;
            if wf.map_or(false, |x| x != w) {
                return Err(Error::Precondition("f has different weights on different charts".into()));
            }
            wf = Some(w);
        }
        g.wf = wf.unwrap_or(0);
        for t in scene.tuples() {
            for s in scene.tuples().filter(|s| s.len() < t.len() && crate::scene::is_subset(s, t)) {
                let phi = scene.map(s, t)?;
                for (i, im) in phi.images().iter().enumerate() {
                    if g.homogeneous(t, im) != Some(g.weights[s][i]) {
                        return Err(Error::Precondition(format!("restriction {:?} -> {:?}: image of {} is not of matching weight", s, t, phi.src().vars[i])));
                    }
                }
            }
            let i0 = t[0];
            let wx = g.homogeneous(&[i0], &scene.charts[i0].x);
            for &j in t {
                let u = scene.unit_on(i0, j, t)?;
                let wxj = g.homogeneous(&[j], &scene.charts[j].x);
                match (g.homogeneous(t, &u), wx, wxj) {
                    (Some(wu), Some(a), Some(b)) if wu == b - a => {}
                    _ => return Err(Error::Precondition(format!("tuple {:?}: divisor data not homogeneous", t))),
                }
            }
        }
        Ok(g)
    }

    pub fn var_weights(&self, t: &[usize]) -> &[i64] {
        &self.weights[t]
    }

    pub fn mono_weight(&self, t: &[usize], m: &Mono) -> i64 {
        m.0.iter().zip(&self.weights[t]).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn mask_weight(&self, t: &[usize], mask: u32) -> i64 {
        self.weights[t].iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &w)| w).sum()
    }

    /// Weight of a homogeneous element (`0` counts as homogeneous of any weight,
    /// reported as `None` only when terms disagree; the zero element gives `Some(0)`).
    pub fn homogeneous(&self, t: &[usize], p: &LocPoly) -> Option<i64> {
        let mut w = None;
        for (m, _) in p.terms().iter() {
            let x = self.mono_weight(t, m);
            if w.map_or(false, |y| y != x) {
                return None;
            }
            w = Some(x);
        }
        Some(w.unwrap_or(0))
    }

    /// `W` of `m dx_mask` in a form of degree `k` (log forms pass `k` including `dx/x`).
    pub fn form_weight(&self, t: &[usize], mask: u32, m: &Mono, k: u32) -> i64 {
        self.mono_weight(t, m) + self.mask_weight(t, mask) - self.wf * k as i64
    }

    /// Monomials of the ring at `t` with weighted degree `target`.
    pub fn monos(&self, ring: &RingRef, t: &[usize], target: i64) -> Vec<Mono> {
        let w = &self.weights[t];
        let n = ring.nvars();
        if n == 0 {
            return if target == 0 { alloc::vec![Mono(Vec::new())] } else { Vec::new() };
        }
        if ring.inverted[0] && n == 1 {
            return if target % w[0] == 0 { alloc::vec![Mono(alloc::vec![(target / w[0]) as i32])] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let mut cur = alloc::vec![0i32; n];
        fn rec(i: usize, left: i64, w: &[i64], cur: &mut Vec<i32>, out: &mut Vec<Mono>) {
            if i == w.len() {
                if left == 0 {
                    out.push(Mono(cur.clone()));
                }
                return;
            }
            let mut e = 0i32;
            loop {
                let used = e as i64 * w[i];
                // all weights share a sign, so overshooting ends the branch
                if (w[i] > 0 && used > left) || (w[i] < 0 && used < left) {
                    break;
                }
                cur[i] = e;
                rec(i + 1, left - used, w, cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        rec(0, target, w, &mut cur, &mut out);
        out
    }
}

/// Complexes with a finite monomial basis in each weight slice.
pub trait Windowed: Complex {
    type Key: Ord + Clone + core::fmt::Debug;
    fn name(&self) -> &'static str;
    /// Basis keys over `t` of weight `w`, with their ℤ/2 parity.
    fn basis(&self, scene: &Scene, g: &Grading, t: &[usize], w: i64) -> Vec<(Self::Key, bool)>;
    fn element(&self, scene: &Scene, t: &[usize], key: &Self::Key) -> Self::S;
    fn coords(&self, scene: &Scene, t: &[usize], s: &Self::S) -> Lin<Self::Key>;
}

fn form_keys(scene: &Scene, g: &Grading, t: &[usize], w: i64, log_shift: u32, skip: Option<usize>) -> Vec<(u32, Mono, u32)> {
    let ring = scene.ring(t).unwrap();
    let n = ring.nvars();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if skip.map_or(false, |v| mask & (1 << v) != 0) {
            continue;
        }
        let k = mask.count_ones() + log_shift;
        let target = w + g.wf * k as i64 - g.mask_weight(t, mask);
        for m in g.monos(ring, t, target) {
            if skip.map_or(false, |v| m.0[v] != 0) {
                continue;
            }
            out.push((mask, m, k));
        }
    }
    out
}

fn mono_form(ring: &RingRef, mask: u32, m: &Mono) -> Form {
    Form::term(mask, LocPoly::monomial(ring, m.clone(), Rat::one()).unwrap())
}

fn form_lin(w: &Form) -> Lin<(u32, Mono)> {
    crate::forms::form_coords(w)
}

impl Windowed for Omega {
    type Key = (u32, Mono);
    fn name(&self) -> &'static str {
        if self.0 < 0 {
            "omega"
        } else {
            "omega+"
        }
    }
    fn basis(&self, scene: &Scene, g: &Grading, t: &[usize], w: i64) -> Vec<((u32, Mono), bool)> {
        let p = t.len() as u32 - 1;
        form_keys(scene, g, t, w, 0, None).into_iter().map(|(mask, m, k)| ((mask, m), (p + k) % 2 == 1)).collect()
    }
    fn element(&self, scene: &Scene, t: &[usize], key: &(u32, Mono)) -> Form {
        mono_form(scene.ring(t).unwrap(), key.0, &key.1)
    }
    fn coords(&self, _scene: &Scene, _t: &[usize], s: &Form) -> Lin<(u32, Mono)> {
        form_lin(s)
    }
}

impl Windowed for OmegaY {
    type Key = (u32, Mono);
    fn name(&self) -> &'static str {
        "omega_y"
    }
    fn basis(&self, scene: &Scene, g: &Grading, t: &[usize], w: i64) -> Vec<((u32, Mono), bool)> {
        let Lead::Coord(v) = scene.lead(t) else { return Vec::new() };
        let p = t.len() as u32 - 1;
        // graded as the residue of a log form, so δ and the cone map preserve W
        form_keys(scene, g, t, w, 1, Some(v)).into_iter().map(|(mask, m, k)| ((mask, m), (p + k + 1) % 2 == 1)).collect()
    }
    fn element(&self, scene: &Scene, t: &[usize], key: &(u32, Mono)) -> YForm {
        YForm(mono_form(scene.ring(t).unwrap(), key.0, &key.1))
    }
    fn coords(&self, _scene: &Scene, _t: &[usize], s: &YForm) -> Lin<(u32, Mono)> {
        form_lin(&s.0)
    }
}

/// Basis keys of the cone: regular summand, and the regular and residue
/// parts of the logarithmic summand.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ConeKey {
    A(u32, Mono),
    Reg(u32, Mono),
    Res(u32, Mono),
}

impl Windowed for Cone {
    type Key = ConeKey;
    fn name(&self) -> &'static str {
        "cone"
    }
    fn basis(&self, scene: &Scene, g: &Grading, t: &[usize], w: i64) -> Vec<(ConeKey, bool)> {
        let p = t.len() as u32 - 1;
        let mut out = Vec::new();
        for (mask, m, k) in form_keys(scene, g, t, w, 0, None) {
            out.push((ConeKey::A(mask, m.clone()), (p + k) % 2 == 1));
            out.push((ConeKey::Reg(mask, m), (p + k + 1) % 2 == 1));
        }
        if let Lead::Coord(v) = scene.lead(t) {
            for (mask, m, k) in form_keys(scene, g, t, w, 1, Some(v)) {
                out.push((ConeKey::Res(mask, m), (p + k + 1) % 2 == 1));
            }
        }
        out
    }
    fn element(&self, scene: &Scene, t: &[usize], key: &ConeKey) -> ConeForm {
        let ring = scene.ring(t).unwrap();
        let z = Form::zero(ring);
        match key {
            ConeKey::A(mask, m) => ConeForm { a: mono_form(ring, *mask, m), b: LogForm::regular(z) },
            ConeKey::Reg(mask, m) => ConeForm { a: z, b: LogForm::regular(mono_form(ring, *mask, m)) },
            ConeKey::Res(mask, m) => ConeForm { a: z.clone(), b: LogForm::new(scene, t, z, mono_form(ring, *mask, m)) },
        }
    }
    fn coords(&self, _scene: &Scene, _t: &[usize], s: &ConeForm) -> Lin<ConeKey> {
        let mut l = Lin::new();
        for ((mask, m), c) in form_lin(&s.a).iter() {
            l.add_term(ConeKey::A(*mask, m.clone()), c.clone());
        }
        for ((mask, m), c) in form_lin(&s.b.reg).iter() {
            l.add_term(ConeKey::Reg(*mask, m.clone()), c.clone());
        }
        for ((mask, m), c) in form_lin(&s.b.res).iter() {
            l.add_term(ConeKey::Res(*mask, m.clone()), c.clone());
        }
        l
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SliceDims {
    pub weight: i64,
    pub even: usize,
    pub odd: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyDims {
    pub complex: String,
    pub window: usize,
    pub even: usize,
    pub odd: usize,
    /// Dimensions at window `D + 1`.
    pub next: (usize, usize),
    pub stable: bool,
    pub slices: Vec<SliceDims>,
}

/// One weight slice: basis per parity and the two differentials.
pub struct Slice<K> {
    pub basis: [Vec<(Tuple, K)>; 2],
    /// `d[e]` maps parity `e` to parity `1 - e`.
    pub d: [QMatrix; 2],
}

pub fn slice<C: Windowed>(cx: &C, scene: &Scene, g: &Grading, w: i64) -> Result<Slice<C::Key>> {
    let mut basis: [Vec<(Tuple, C::Key)>; 2] = [Vec::new(), Vec::new()];
    for t in scene.tuples() {
        for (k, odd) in cx.basis(scene, g, t, w) {
            basis[odd as usize].push((t.clone(), k));
        }
    }
    let index: [BTreeMap<(Tuple, C::Key), usize>; 2] =
        [0, 1].map(|e| basis[e].iter().cloned().enumerate().map(|(i, k)| (k, i)).collect());
    let mut d = [QMatrix::zeros(basis[1].len(), basis[0].len()), QMatrix::zeros(basis[0].len(), basis[1].len())];
    for e in 0..2 {
        for (col, (t, k)) in basis[e].iter().enumerate() {
            let c = Cochain::single(t, cx.element(scene, t, k));
            for (tt, s) in total_d(cx, scene, &c).iter() {
                for (kk, v) in cx.coords(scene, tt, s).iter() {
                    let row = index[1 - e].get(&(tt.clone(), kk.clone())).ok_or_else(|| {
                        Error::Internal(format!("{}: d({:?} on {:?}) leaves the weight-{} slice at {:?} {:?}", cx.name(), k, t, w, tt, kk))
                    })?;
                    d[e].set(*row, col, v.clone());
                }
            }
        }
    }
    Ok(Slice { basis, d })
}

fn slice_dims<K>(s: &Slice<K>) -> (usize, usize) {
    let r0 = s.d[0].rank();
    let r1 = s.d[1].rank();
    (s.basis[0].len() - r0 - r1, s.basis[1].len() - r1 - r0)
}

pub fn homology_dims<C: Windowed>(cx: &C, scene: &Scene, window: usize) -> Result<HomologyDims> {
    let g = Grading::of(scene)?;
    let d = window as i64;
    let mut slices = Vec::new();
    for w in -(d + 1)..=(d + 1) {
        let (even, odd) = slice_dims(&slice(cx, scene, &g, w)?);
        slices.push(SliceDims { weight: w, even, odd });
    }
    let sum = |lim: i64| {
        slices.iter().filter(|s| s.weight.abs() <= lim).fold((0, 0), |(a, b), s| (a + s.even, b + s.odd))
    };
    let (even, odd) = sum(d);
    let next = sum(d + 1);
    slices.retain(|s| s.weight.abs() <= d && (s.even, s.odd) != (0, 0));
    Ok(HomologyDims { complex: String::from(cx.name()), window, even, odd, next, stable: next == (even, odd), slices })
}

/// Whether `c` is a coboundary in the total complex, decided slice by slice
/// (requires `c` to lie in the window `|W| ≤ D`).
pub fn is_boundary<C: Windowed>(cx: &C, scene: &Scene, c: &Cochain<C::S>, window: usize) -> Result<bool> {
    let g = Grading::of(scene)?;
    let d = window as i64;
    let mut hit = 0usize;
    let total: usize = c.iter().map(|(t, s)| cx.coords(scene, t, s).len()).sum();
    for w in -d..=d {
        let sl = slice(cx, scene, &g, w)?;
        for e in 0..2 {
            // c has components in parity 1 - e; they must be in the image of d[e]
            let rows = &sl.basis[1 - e];
            let index: BTreeMap<&(Tuple, C::Key), usize> = rows.iter().enumerate().map(|(i, k)| (k, i)).collect();
            let mut v = alloc::vec![Rat::zero(); rows.len()];
            let mut any = false;
            for (t, s) in c.iter() {
                for (k, x) in cx.coords(scene, t, s).iter() {
                    if let Some(&i) = index.get(&(t.clone(), k.clone())) {
                        v[i] = x.clone();
                        any = true;
                        hit += 1;
                    }
                }
            }
            if !any {
                continue;
            }
            let m = &sl.d[e];
            let mut aug = QMatrix::zeros(m.rows(), m.cols() + 1);
            for r in 0..m.rows() {
                for col in 0..m.cols() {
                    aug.set(r, col, m.get(r, col).clone());
                }
                aug.set(r, m.cols(), v[r].clone());
            }
            if aug.rank() != m.rank() {
                return Ok(false);
            }
        }
    }
    if hit != total {
        return Err(Error::Precondition("cochain has components outside the homology window".into()));
    }
    Ok(true)
}
