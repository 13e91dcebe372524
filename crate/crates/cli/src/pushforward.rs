//! Both routes of the pushforward of the unit class on `Y`.
//!
//! Route A is `δ(1 ∧̄ ±Td(−Y)⁻¹)`. Route B is `HKR_(X,−f) ∘ φ ∘ Č(can)` applied
//! to the unit chain `Σ_i 1[]`, whose `HKR_𝒜` image restricts to `1` on `Y`.

use anyhow::{bail, Result};
use hhpush_core::cdg::{AAlg, AB};
use hhpush_core::forms::{bar_wedge_y, connecting_delta, total_d, Cochain, Form, OmegaY, YForm, OMEGA};
use hhpush_core::hochschild::{cech_hoch_d, trace_route, CechChain, ALL};
use hhpush_core::homology::{homology_dims, is_boundary};
use hhpush_core::scene::Lead;
use hhpush_core::{Lin, Mono, Rat, Scene};

use crate::report::PushforwardReport;
use crate::suites::ToddSign;

/// `1` on every chart that meets `Y`.
pub fn unit_on_y(scene: &Scene) -> Cochain<YForm> {
    let mut a = Cochain::new();
    for i in 0..scene.ncharts() {
        if let Lead::Coord(_) = scene.lead(&[i]) {
            a.add_at(&[i], YForm(Form::one(scene.ring(&[i]).expect("chart ring"))));
        }
    }
    a
}

/// `Σ_i 1[]` over every chart.
pub fn unit_chain(scene: &Scene) -> CechChain<AB> {
    let mut c = CechChain::new();
    for i in 0..scene.ncharts() {
        let n = scene.ring(&[i]).expect("chart ring").nvars();
        c.add_at(&[i], &Lin::single(vec![(false, Mono::one(n))], Rat::one()));
    }
    c
}

pub fn route_a(scene: &Scene, todd: ToddSign) -> Result<Cochain<Form>> {
    let a = unit_on_y(scene);
    Ok(connecting_delta(scene, &bar_wedge_y(scene, &a, &todd.todd(scene)))?)
}

pub fn route_b(scene: &Scene) -> Result<Cochain<Form>> {
    let c = unit_chain(scene);
    if !cech_hoch_d(&AAlg { scene }, &c, ALL, scene.trunc.max(2))?.is_zero() {
        bail!("the unit chain is not a cycle");
    }
    Ok(trace_route(scene, &c))
}

/// Both routes, whether their difference is a boundary in the homology
/// window, and whether route A represents a nonzero class there.
pub fn pushforward(scene: &Scene, todd: ToddSign, window: usize) -> Result<PushforwardReport> {
    let input = unit_on_y(scene);
    if !total_d(&OmegaY, scene, &input).is_zero() {
        bail!("input is not a cocycle on Y");
    }
    let a = route_a(scene, todd)?;
    let b = route_b(scene)?;
    let diff = a.sub(&b);
    let equal = diff.is_zero();
    // window data is reported whenever the scene is graded
    let boundary = is_boundary(&OMEGA, scene, &diff, window).ok();
    let stable = homology_dims(&OMEGA, scene, window).ok().map(|h| h.stable);
    let class_nonzero = is_boundary(&OMEGA, scene, &a, window).ok().map(|b| !b);
    let agree = equal || (boundary == Some(true) && stable == Some(true));
    Ok(PushforwardReport {
        input: format!("{:?}", input),
        route_a: format!("{:?}", a),
        route_b: format!("{:?}", b),
        difference: format!("{:?}", diff),
        equal,
        boundary,
        stable,
        class_nonzero,
        agree,
    })
}
