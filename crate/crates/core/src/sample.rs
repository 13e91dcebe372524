//! Random sections drawn from a caller-supplied entropy stream, so the same
//! generators serve the property tests and the seeded CLI suites.

use alloc::vec::Vec;

use crate::cdg::{AB, MB};
use crate::forms::{Cochain, ConeForm, Form, LogForm, Section, YForm};
use crate::hochschild::CechChain;
use crate::lin::Lin;
use crate::poly::{LocPoly, Mono, RingRef};
use crate::rat::Rat;
use crate::scene::{Scene, Tuple};

pub trait Entropy {
    fn next_u64(&mut self) -> u64;

    fn below(&mut self, n: u64) -> u64 {
        if n == 0 {
            0
        } else {
            self.next_u64() % n
        }
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

impl<F: FnMut() -> u64> Entropy for F {
    fn next_u64(&mut self) -> u64 {
        self()
    }
}

/// Entropy that cycles through a fixed list (empty list gives zeros).
pub struct Cycle<'a> {
    data: &'a [u64],
    pos: usize,
}

impl<'a> Cycle<'a> {
    pub fn new(data: &'a [u64]) -> Self {
        Cycle { data, pos: 0 }
    }
}

impl Entropy for Cycle<'_> {
    fn next_u64(&mut self) -> u64 {
        if self.data.is_empty() {
            return 0;
        }
        let v = self.data[self.pos % self.data.len()].wrapping_add((self.pos / self.data.len()) as u64);
        self.pos += 1;
        v
    }
}

pub fn mono(ring: &RingRef, e: &mut impl Entropy, max_exp: i64) -> Mono {
    Mono(
        (0..ring.nvars())
            .map(|i| if ring.inverted[i] { e.range(-max_exp, max_exp) } else { e.range(0, max_exp) } as i32)
            .collect(),
    )
}

pub fn poly(ring: &RingRef, e: &mut impl Entropy, max_terms: u64, max_exp: i64) -> LocPoly {
    let mut p = LocPoly::zero(ring);
    for _ in 0..e.below(max_terms + 1) {
        let m = mono(ring, e, max_exp);
        let c = Rat::from_int(e.range(-3, 3));
        p = &p + &LocPoly::monomial(ring, m, c).expect("sampled monomial is admissible");
    }
    p
}

pub fn form(ring: &RingRef, e: &mut impl Entropy, max_terms: u64) -> Form {
    let mut w = Form::zero(ring);
    for _ in 0..e.below(max_terms + 1) {
        let mask = e.below(1 << ring.nvars()) as u32;
        w.add_term(mask, poly(ring, e, 2, 2));
    }
    w
}

pub fn log_form(scene: &Scene, t: &[usize], e: &mut impl Entropy) -> LogForm {
    let ring = scene.ring(t).expect("tuple in atlas");
    LogForm::new(scene, t, form(ring, e, 2), form(ring, e, 2))
}

pub fn y_form(scene: &Scene, t: &[usize], e: &mut impl Entropy) -> YForm {
    let ring = scene.ring(t).expect("tuple in atlas");
    YForm::reduce(scene, t, &form(ring, e, 2))
}

pub fn cone_form(scene: &Scene, t: &[usize], e: &mut impl Entropy) -> ConeForm {
    let ring = scene.ring(t).expect("tuple in atlas");
    ConeForm { a: form(ring, e, 2), b: log_form(scene, t, e) }
}

/// A cochain with a random section on each tuple (about half left empty).
pub fn cochain<T: Section, E: Entropy>(scene: &Scene, e: &mut E, mut draw: impl FnMut(&Tuple, &mut E) -> T) -> Cochain<T> {
    let tuples: Vec<Tuple> = scene.tuples().cloned().collect();
    let mut c = Cochain::new();
    for t in &tuples {
        if e.below(2) == 0 {
            let s = draw(t, e);
            c.add_at(t, s);
        }
    }
    c
}

pub fn a_basis(ring: &RingRef, e: &mut impl Entropy) -> AB {
    (e.below(3) == 0, mono(ring, e, 1))
}

pub fn mat_basis(ring: &RingRef, e: &mut impl Entropy) -> MB {
    (e.below(2) as u8, e.below(2) as u8, mono(ring, e, 1))
}

/// A Čech–Hochschild chain with one or two tensors of length at most
/// `max_k` on about half the tuples.
pub fn chain<B: Ord + Clone, E: Entropy>(
    scene: &Scene,
    e: &mut E,
    max_k: usize,
    mut draw: impl FnMut(&RingRef, &mut E) -> B,
) -> CechChain<B> {
    let tuples: Vec<Tuple> = scene.tuples().cloned().collect();
    let mut c = CechChain::new();
    for t in &tuples {
        if e.below(2) == 0 {
            let ring = scene.ring(t).expect("tuple in atlas");
            for _ in 0..1 + e.below(2) {
                let k = e.below(max_k as u64 + 1) as usize;
                let v: Vec<B> = (0..=k).map(|_| draw(ring, e)).collect();
                let coef = Rat::from_int(e.range(1, 3) * if e.below(2) == 0 { 1 } else { -1 });
                c.add_at(t, &Lin::single(v, coef));
            }
        }
    }
    c
}
