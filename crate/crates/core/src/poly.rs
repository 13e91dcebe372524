//! Polynomials and monomial localizations of polynomial rings.
//!
//! A chart ring is `ℚ[x_1..x_n][S⁻¹]` where the inverted set `S` is a subset of
//! the variables, so an element is a Laurent polynomial whose negative
//! exponents only touch inverted variables. That representation is the
//! canonical form: common `S`-factors are already cancelled.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::lin::Lin;
use crate::rat::Rat;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<i32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Chart-ring descriptor: variable names and which of them are inverted.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    pub vars: Vec<String>,
    pub inverted: Vec<bool>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(vars: &[&str], inverted: &[&str]) -> Result<RingRef> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let inv: Vec<String> = inverted.iter().map(|s| s.to_string()).collect();
        Ring::from_names(vars, inv)
    }

    pub fn from_names(vars: Vec<String>, inverted: Vec<String>) -> Result<RingRef> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Invalid(vec![alloc::format!("duplicate variable '{}'", v)]));
            }
        }
        for s in &inverted {
            if !vars.contains(s) {
                return Err(Error::Malformed(alloc::format!(
                    "inverted set names '{}', which is not a variable",
                    s
                )));
            }
        }
        let inv = vars.iter().map(|v| inverted.contains(v)).collect();
        Ok(Arc::new(Ring { vars, inverted: inv }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Whether a monomial is allowed (negative exponents only on `S`).
    pub fn admits(&self, m: &Mono) -> bool {
        m.0.len() == self.nvars() && m.0.iter().zip(&self.inverted).all(|(&e, &inv)| e >= 0 || inv)
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Element of a chart ring in canonical (Laurent) form.
#[derive(Clone)]
pub struct LocPoly {
    ring: RingRef,
    terms: Lin<Mono>,
}

/// A fraction `numerator / denominator` with a monomial denominator, as read
/// from input before normalisation.
#[derive(Clone, Debug)]
pub struct RawLoc {
    pub ring: RingRef,
    pub numerator: Lin<Mono>,
    pub denominator: Mono,
}

/// Cancels the denominator into the numerator.
pub fn normal_form(raw: &RawLoc) -> Result<LocPoly> {
    let n = raw.ring.nvars();
    if raw.denominator.0.len() != n || raw.numerator.keys().any(|m| m.0.len() != n) {
        return Err(Error::Malformed("exponent vector length differs from ring".to_string()));
    }
    for (i, &e) in raw.denominator.0.iter().enumerate() {
        if e < 0 {
            return Err(Error::Malformed("negative exponent in denominator".to_string()));
        }
        if e > 0 && !raw.ring.inverted[i] {
            return Err(Error::Malformed(alloc::format!(
                "denominator contains '{}', which is not inverted",
                raw.ring.vars[i]
            )));
        }
    }
    let shift = Mono(raw.denominator.0.iter().map(|e| -e).collect());
    let mut terms = Lin::new();
    for (m, c) in raw.numerator.iter() {
        if m.0.iter().any(|&e| e < 0) {
            return Err(Error::Malformed("negative exponent in numerator".to_string()));
        }
        terms.add_term(m.mul(&shift), c.clone());
    }
    Ok(LocPoly { ring: raw.ring.clone(), terms })
}

impl LocPoly {
    pub fn zero(ring: &RingRef) -> LocPoly {
        LocPoly { ring: ring.clone(), terms: Lin::new() }
    }

    pub fn constant(ring: &RingRef, c: Rat) -> LocPoly {
        LocPoly { ring: ring.clone(), terms: Lin::single(Mono::one(ring.nvars()), c) }
    }

    pub fn one(ring: &RingRef) -> LocPoly {
        LocPoly::constant(ring, Rat::one())
    }

    pub fn var(ring: &RingRef, i: usize) -> LocPoly {
        LocPoly { ring: ring.clone(), terms: Lin::single(Mono::var(ring.nvars(), i), Rat::one()) }
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<LocPoly> {
        let i = ring.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(LocPoly::var(ring, i))
    }

    pub fn monomial(ring: &RingRef, m: Mono, c: Rat) -> Result<LocPoly> {
        if !ring.admits(&m) {
            return Err(Error::Malformed(alloc::format!("monomial {:?} not in ring", m.0)));
        }
        Ok(LocPoly { ring: ring.clone(), terms: Lin::single(m, c) })
    }

    /// Trusted constructor; terms must be admissible.
    pub(crate) fn from_terms(ring: &RingRef, terms: Lin<Mono>) -> LocPoly {
        debug_assert!(terms.keys().all(|m| ring.admits(m)));
        LocPoly { ring: ring.clone(), terms }
    }

    pub fn from_lin(ring: &RingRef, terms: Lin<Mono>) -> Result<LocPoly> {
        if let Some(m) = terms.keys().find(|m| !ring.admits(m)) {
            return Err(Error::Malformed(alloc::format!("monomial {:?} not in ring", m.0)));
        }
        Ok(LocPoly { ring: ring.clone(), terms })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &Lin<Mono> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` when the element is the constant `c`.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Idempotent; the stored form is already canonical.
    pub fn normal_form(&self) -> LocPoly {
        self.clone()
    }

    /// Numerator and monomial denominator with no common `S`-factor.
    pub fn to_raw(&self) -> RawLoc {
        let n = self.ring.nvars();
        let mut den = vec![0i32; n];
        for m in self.terms.keys() {
            for (d, &e) in den.iter_mut().zip(&m.0) {
                *d = (*d).max(-e);
            }
        }
        let den = Mono(den);
        let numerator = self.terms.iter().map(|(m, c)| (m.mul(&den), c.clone())).collect();
        RawLoc { ring: self.ring.clone(), numerator, denominator: den }
    }

    pub fn scale(&self, c: &Rat) -> LocPoly {
        LocPoly { ring: self.ring.clone(), terms: self.terms.scaled(c) }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> LocPoly {
        let mut terms = Lin::new();
        for (k, v) in self.terms.iter() {
            terms.add_term(k.mul(m), v * c);
        }
        LocPoly { ring: self.ring.clone(), terms }
    }

    fn check(&self, other: &LocPoly) {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch: {:?} vs {:?}", self.ring.vars, other.ring.vars);
    }

    /// Returns `Some((c, m))` when the element is a unit `c·m`.
    pub fn as_unit(&self) -> Option<(Rat, Mono)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let ok = m.0.iter().zip(&self.ring.inverted).all(|(&e, &inv)| e == 0 || inv);
        if ok {
            Some((c.clone(), m.clone()))
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<LocPoly> {
        let (c, m) = self.as_unit().ok_or_else(|| Error::NotUnit(self.to_string()))?;
        let inv = Mono(m.0.iter().map(|e| -e).collect());
        Ok(LocPoly { ring: self.ring.clone(), terms: Lin::single(inv, c.recip().unwrap()) })
    }

    pub fn pow(&self, e: i32) -> Result<LocPoly> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = LocPoly::one(&self.ring);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Partial derivative by variable index (quotient rule on inverted factors).
    pub fn derive(&self, i: usize) -> LocPoly {
        let mut terms = Lin::new();
        for (m, c) in self.terms.iter() {
            let e = m.0[i];
            if e != 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                terms.add_term(m2, c * &Rat::from_int(e as i64));
            }
        }
        LocPoly { ring: self.ring.clone(), terms }
    }

    pub fn partial_derive(&self, var: &str) -> Result<LocPoly> {
        let i = self.ring.index_of(var).ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.derive(i))
    }

    /// Substitutes zero for variable `i` (which must not be inverted).
    pub fn set_zero(&self, i: usize) -> LocPoly {
        debug_assert!(!self.ring.inverted[i]);
        LocPoly { ring: self.ring.clone(), terms: self.terms.filter(|m| m.0[i] == 0) }
    }

    /// Whether variable `i` occurs.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] != 0)
    }
}

impl PartialEq for LocPoly {
    fn eq(&self, other: &LocPoly) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for LocPoly {}

impl<'a> Add<&'a LocPoly> for &'a LocPoly {
    type Output = LocPoly;
    fn add(self, rhs: &LocPoly) -> LocPoly {
        self.check(rhs);
        let mut t = self.terms.clone();
        t.add_lin(&rhs.terms);
        LocPoly { ring: self.ring.clone(), terms: t }
    }
}

impl<'a> Sub<&'a LocPoly> for &'a LocPoly {
    type Output = LocPoly;
    fn sub(self, rhs: &LocPoly) -> LocPoly {
        self.check(rhs);
        let mut t = self.terms.clone();
        t.sub_lin(&rhs.terms);
        LocPoly { ring: self.ring.clone(), terms: t }
    }
}

impl<'a> Mul<&'a LocPoly> for &'a LocPoly {
    type Output = LocPoly;
    fn mul(self, rhs: &LocPoly) -> LocPoly {
        self.check(rhs);
        let mut t = Lin::new();
        for (a, x) in self.terms.iter() {
            for (b, y) in rhs.terms.iter() {
                t.add_term(a.mul(b), x * y);
            }
        }
        LocPoly { ring: self.ring.clone(), terms: t }
    }
}

impl Neg for &LocPoly {
    type Output = LocPoly;
    fn neg(self) -> LocPoly {
        LocPoly { ring: self.ring.clone(), terms: self.terms.neg() }
    }
}

impl fmt::Display for LocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        // highest graded-lex term first
        let terms: Vec<_> = self.terms.iter().collect();
        for (idx, (m, c)) in terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -*c } else { (*c).clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(alloc::format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", abs)?;
            } else {
                if !abs.is_one() {
                    if abs.is_integer() {
                        write!(f, "{}*", abs)?;
                    } else {
                        write!(f, "({})*", abs)?;
                    }
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Ring homomorphism between chart rings, given by images of variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    src: RingRef,
    tgt: RingRef,
    images: Vec<LocPoly>,
    inverses: Vec<Option<LocPoly>>,
}

impl RingMap {
    /// Inverted source variables must map to units.
    pub fn new(src: &RingRef, tgt: &RingRef, images: Vec<LocPoly>) -> Result<RingMap> {
        if images.len() != src.nvars() {
            return Err(Error::Invalid(vec![alloc::format!(
                "ring map gives {} images for {} variables",
                images.len(),
                src.nvars()
            )]));
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (i, im) in images.iter().enumerate() {
            if !same_ring(im.ring(), tgt) {
                return Err(Error::RingMismatch("image not in target ring".to_string()));
            }
            if src.inverted[i] {
                let inv = im.inverse().map_err(|_| {
                    Error::NotUnit(alloc::format!(
                        "inverted variable '{}' maps to non-unit {}",
                        src.vars[i],
                        im
                    ))
                })?;
                inverses.push(Some(inv));
            } else {
                inverses.push(im.inverse().ok());
            }
        }
        Ok(RingMap { src: src.clone(), tgt: tgt.clone(), images, inverses })
    }

    pub fn identity(r: &RingRef) -> RingMap {
        let images = (0..r.nvars()).map(|i| LocPoly::var(r, i)).collect();
        RingMap::new(r, r, images).expect("identity map")
    }

    pub fn src(&self) -> &RingRef {
        &self.src
    }

    pub fn tgt(&self) -> &RingRef {
        &self.tgt
    }

    pub fn images(&self) -> &[LocPoly] {
        &self.images
    }

    pub fn apply_mono(&self, m: &Mono) -> LocPoly {
        let mut acc = LocPoly::one(&self.tgt);
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e > 0 {
                &self.images[i]
            } else {
                self.inverses[i].as_ref().expect("inverted variable has unit image")
            };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * base;
            }
        }
        acc
    }

    pub fn apply(&self, p: &LocPoly) -> LocPoly {
        assert!(same_ring(p.ring(), &self.src), "ring map applied outside its source");
        let mut t = Lin::new();
        for (m, c) in p.terms().iter() {
            t.add_scaled(self.apply_mono(m).terms(), c);
        }
        LocPoly::from_terms(&self.tgt, t)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMap) -> RingMap {
        let images = self.images.iter().map(|p| other.apply(p)).collect();
        RingMap::new(&self.src, &other.tgt, images).expect("composite of ring maps")
    }

    pub fn same_as(&self, other: &RingMap) -> bool {
        same_ring(&self.src, &other.src) && same_ring(&self.tgt, &other.tgt) && self.images == other.images
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = Mono(vec![2, 0]);
        let b = Mono(vec![0, 3]);
        let c = Mono(vec![1, 1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn unit_cancellation() {
        let r = Ring::new(&["x"], &["x"]).unwrap();
        let raw = RawLoc { ring: r.clone(), numerator: Lin::single(Mono(vec![1]), Rat::one()), denominator: Mono(vec![1]) };
        assert!(normal_form(&raw).unwrap().is_one());
    }

    #[test]
    fn malformed_denominator() {
        let r = Ring::new(&["x", "y"], &["x"]).unwrap();
        let raw = RawLoc { ring: r, numerator: Lin::single(Mono(vec![0, 0]), Rat::one()), denominator: Mono(vec![0, 1]) };
        assert!(matches!(normal_form(&raw), Err(Error::Malformed(_))));
    }

    #[test]
    fn quotient_rule_example() {
        let r = Ring::new(&["t"], &["t"]).unwrap();
        let t = LocPoly::var(&r, 0);
        let e = &t.pow(-2).unwrap() * &(&t.pow(3).unwrap() + &LocPoly::one(&r));
        let d = e.derive(0);
        // t^-2 * 3t^2 - 2t^-3 * (t^3 + 1) = 1 - 2t^-3
        let expect = &LocPoly::one(&r) - &t.pow(-3).unwrap().scale(&Rat::from_int(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn raw_roundtrip() {
        let r = Ring::new(&["t", "y"], &["t"]).unwrap();
        let t = LocPoly::var(&r, 0);
        let y = LocPoly::var(&r, 1);
        let e = &(&t.pow(-2).unwrap() * &y) + &t;
        let raw = e.to_raw();
        assert_eq!(raw.denominator, Mono(vec![2, 0]));
        assert_eq!(normal_form(&raw).unwrap(), e);
    }
}
