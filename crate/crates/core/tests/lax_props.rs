//! Lax morphisms `(id, α)` with `α_{I→J} = s_J / s_I`, `s_I = Π_{a<b ∈ I} u_ab`,
//! on one-object dg presheaves, and the three homotopies built from them.

use hhpush_core::cdg::{scalar, AAlg, CdgSheaf, MatAlg, OAlg};
use hhpush_core::hochschild::*;
use hhpush_core::sample::{self, Cycle, Entropy};
use hhpush_core::scene::{builtin_scene, BUILTIN_NAMES};
use hhpush_core::{Lin, LocPoly, Mono, Rat, Scene};
use proptest::prelude::*;

const N: usize = 8;

fn scenes() -> Vec<Scene> {
    BUILTIN_NAMES.iter().map(|n| builtin_scene(n).unwrap()).collect()
}

fn entropy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 1..40)
}

/// `s_I` on a tuple `k ⊇ i`.
fn s_of(scene: &Scene, i: &[usize], k: &[usize]) -> LocPoly {
    let mut p = LocPoly::one(scene.ring(k).unwrap());
    for (n, &a) in i.iter().enumerate() {
        for &b in &i[n + 1..] {
            p = &p * &scene.unit_on(a, b, k).unwrap();
        }
    }
    p
}

struct Data<'a, S: CdgSheaf> {
    sheaf: &'a S,
}

impl<S: CdgSheaf> Data<'_, S> {
    fn ratio(&self, i: &[usize], j: &[usize], inv: bool) -> Lin<S::B> {
        let scene = self.sheaf.scene();
        let (a, b) = (s_of(scene, j, j), s_of(scene, i, j));
        let p = if inv { &b * &a.inverse().unwrap() } else { &a * &b.inverse().unwrap() };
        scalar(self.sheaf, j, &p)
    }
}

fn identity<B: Ord + Clone>(_: &[usize], b: &B) -> Lin<B> {
    Lin::single(b.clone(), Rat::one())
}

fn run_all<S: CdgSheaf>(s: &S, c: &CechChain<S::B>) -> Result<(), TestCaseError> {
    let scene = s.scene();
    let d = Data { sheaf: s };
    let alpha = |i: &[usize], j: &[usize]| d.ratio(i, j, false);
    let alpha_inv = |i: &[usize], j: &[usize]| d.ratio(i, j, true);
    let trivial = |_: &[usize], j: &[usize]| s.unit(j);
    let lax = Lax { src: s, tgt: s, functor: &identity, alpha: &alpha, alpha_inv: &alpha_inv };
    let strict = Lax { src: s, tgt: s, functor: &identity, alpha: &trivial, alpha_inv: &trivial };
    let dd = |x: &CechChain<S::B>| cech_hoch_d(s, x, ALL, N).unwrap();

    // Č(φ, α) is a chain map
    let m = cech_lax_map(&lax, c, N).unwrap();
    prop_assert_eq!(dd(&m), cech_lax_map(&lax, &dd(c), N).unwrap(), "lax chain map, {} on {}", s.name(), scene.name);

    // Č(φ, id) − Č(φ) = h¹
    let plain = cech_strict_map(&identity, c);
    let with_id = cech_lax_map(&strict, c, N).unwrap();
    prop_assert_eq!(with_id.sub(&plain), lax_hq(&strict, 1, c, N).unwrap(), "h^1 identity, {}", scene.name);

    // D H + H D = Č(φ) − Č(φ, id)
    let h = strict_lax_homotopy(s, s, &identity, c, N).unwrap();
    let hd = strict_lax_homotopy(s, s, &identity, &dd(c), N).unwrap();
    prop_assert_eq!(dd(&h).add(&hd), plain.sub(&with_id), "strict vs lax, {} on {}", s.name(), scene.name);

    // τ_I = s_I from (id, α) to (id, 1)
    let tau = |i: &[usize], k: &[usize]| scalar(s, k, &s_of(scene, i, k));
    let tau_inv = |i: &[usize], k: &[usize]| scalar(s, k, &s_of(scene, i, k).inverse().unwrap());
    let iso = Iso { first: &lax, second: &strict, tau: &tau, tau_inv: &tau_inv };
    let h = iso_homotopy(&iso, c, N).unwrap();
    let hd = iso_homotopy(&iso, &dd(c), N).unwrap();
    prop_assert_eq!(dd(&h).add(&hd), with_id.sub(&m), "iso homotopy, {} on {}", s.name(), scene.name);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lax_maps_and_homotopies(data in entropy()) {
        for scene in scenes() {
            let mut e = Cycle::new(&data);
            let c = sample::chain(&scene, &mut e, 2, |r, e| sample::mono(r, e, 1));
            run_all(&OAlg::new(&scene, 0), &c)?;
            let c = sample::chain(&scene, &mut e, 2, sample::a_basis);
            run_all(&AAlg { scene: &scene }, &c)?;
            let c = sample::chain(&scene, &mut e, 1, sample::mat_basis);
            run_all(&MatAlg::end_p(&scene), &c)?;
        }
    }

    #[test]
    fn restriction_homotopy_identity(data in entropy()) {
        for scene in scenes() {
            let mut e = Cycle::new(&data);
            let o = OAlg::new(&scene, 0);
            let d = Data { sheaf: &o };
            let alpha = |i: &[usize], j: &[usize]| d.ratio(i, j, false);
            let alpha_inv = |i: &[usize], j: &[usize]| d.ratio(i, j, true);
            let lax = Lax { src: &o, tgt: &o, functor: &identity, alpha: &alpha, alpha_inv: &alpha_inv };
            let k = e.below(3) as usize;
            let a: Lin<Vec<Mono>> = Lin::single(vec![Mono(vec![]); k + 1], Rat::from_int(e.range(1, 3)));
            let h = restriction_homotopy(&lax, &a, N).unwrap();
            let da = hoch_d(&o, &[], &a, ALL, N).unwrap();
            let lhs = cech_hoch_d(&o, &h, ALL, N).unwrap().add(&restriction_homotopy(&lax, &da, N).unwrap());
            let rhs = cech_lax_map(&lax, &restrict_global(&o, &a), N).unwrap().sub(&restrict_global(&o, &a));
            prop_assert_eq!(lhs, rhs, "{}", scene.name);
        }
    }
}
