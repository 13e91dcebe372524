use hhpush_core::cdg::{AAlg, CdgSheaf, MatAlg, OAlg, AB, MB};
use hhpush_core::forms::*;
use hhpush_core::hochschild::*;
use hhpush_core::sample::{self, Cycle};
use hhpush_core::scene::{builtin_scene, BUILTIN_NAMES};
use hhpush_core::{Lin, Mono, Rat, Scene};
use proptest::prelude::*;

const N: usize = 6;

fn scenes() -> Vec<Scene> {
    BUILTIN_NAMES.iter().map(|n| builtin_scene(n).unwrap()).collect()
}

fn entropy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 1..40)
}

fn monos(s: &Scene, e: &mut Cycle, k: usize) -> CechChain<Mono> {
    sample::chain(s, e, k, |r, e| sample::mono(r, e, 1))
}

fn a_chain(s: &Scene, e: &mut Cycle, k: usize) -> CechChain<AB> {
    sample::chain(s, e, k, sample::a_basis)
}

fn m_chain(s: &Scene, e: &mut Cycle, k: usize) -> CechChain<MB> {
    sample::chain(s, e, k, sample::mat_basis)
}

fn d_squared<S: CdgSheaf>(s: &S, c: &CechChain<S::B>) -> Result<(), TestCaseError> {
    let dd = cech_hoch_d(s, &cech_hoch_d(s, c, ALL, N).unwrap(), ALL, N).unwrap();
    prop_assert!(dd.is_zero(), "{} on {}: {:?}", s.name(), s.scene().name, dd);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hochschild_differentials_square_to_zero(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            d_squared(&OAlg::new(&s, 1), &monos(&s, &mut e, N - 2))?;
            d_squared(&OAlg::new(&s, -1), &monos(&s, &mut e, N - 2))?;
            d_squared(&AAlg { scene: &s }, &a_chain(&s, &mut e, N - 2))?;
            d_squared(&MatAlg::end_p(&s), &m_chain(&s, &mut e, 3))?;
            d_squared(&MatAlg::trivial(&s), &m_chain(&s, &mut e, 3))?;
        }
    }

    #[test]
    fn hkr_xf_is_a_chain_map(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            for (sign, cx) in [(1i8, Omega(1)), (-1, OMEGA)] {
                let c = monos(&s, &mut e, 3);
                let o = OAlg::new(&s, sign);
                let lhs = hkr_xf(&s, &cech_hoch_d(&o, &c, ALL, N).unwrap());
                prop_assert_eq!(lhs, total_d(&cx, &s, &hkr_xf(&s, &c)), "{} {}", s.name, sign);
            }
        }
    }

    #[test]
    fn hkr_a_is_a_chain_map(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            let c = a_chain(&s, &mut e, 3);
            let a = AAlg { scene: &s };
            let lhs = hkr_a(&s, &cech_hoch_d(&a, &c, ALL, N).unwrap());
            prop_assert_eq!(lhs, total_d(&Cone, &s, &hkr_a(&s, &c)), "{}", s.name);
        }
    }

    #[test]
    fn hkr_a_restricts_to_hkr_y(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            let c = a_chain(&s, &mut e, 3);
            prop_assert_eq!(cone_to_y(&s, &hkr_a(&s, &c)), hkr_y(&s, &to_y(&c)), "{}", s.name);
        }
    }

    #[test]
    fn hq_lemma(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            let c = m_chain(&s, &mut e, 3);
            let src = MatAlg::end_p(&s);
            let tgt = MatAlg::trivial(&s);
            for q in 1..=s.ncharts() {
                let lhs = twisted_hoch_d(&tgt, &hq(&src, q, &c), D2, N + 4).unwrap()
                    .add(&cech_d(&tgt, &hq(&src, q - 1, &c)));
                let rhs = hq(&src, q - 1, &cech_d(&src, &c))
                    .add(&hq(&src, q, &twisted_hoch_d(&src, &c, D2, N).unwrap()));
                prop_assert_eq!(lhs, rhs, "{} q={}", s.name, q);
            }
        }
    }

    #[test]
    fn supertrace_is_a_chain_map(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            let c = m_chain(&s, &mut e, 3);
            let f = MatAlg::trivial(&s);
            let o = OAlg::new(&s, -1);
            let lhs = s_tr_chain(&cech_hoch_d(&f, &c, ALL, N).unwrap());
            prop_assert_eq!(lhs, cech_hoch_d(&o, &s_tr_chain(&c), ALL, N).unwrap(), "{}", s.name);
        }
    }

    #[test]
    fn phi_is_a_chain_map(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            let c = m_chain(&s, &mut e, 1);
            let end = MatAlg::end_p(&s);
            let o = OAlg::new(&s, -1);
            let m = 3;
            let lhs = cech_hoch_d(&o, &phi(&end, &c, m + 1), ALL, m + 2).unwrap().up_to(m);
            let rhs = phi(&end, &cech_hoch_d(&end, &c, ALL, N).unwrap(), m);
            prop_assert_eq!(lhs, rhs, "{}", s.name);
        }
    }

    #[test]
    fn restriction_is_a_cdg_morphism(data in entropy()) {
        for s in scenes() {
            let mut e = Cycle::new(&data);
            let a = AAlg { scene: &s };
            let end = MatAlg::end_p(&s);
            for t in s.tuples() {
                let r = s.ring(t).unwrap();
                for j in s.extensions(t) {
                    let k = hhpush_core::scene::union(t, &[j]);
                    let (x, y) = (sample::a_basis(r, &mut e), sample::a_basis(r, &mut e));
                    morphism(&a, t, &k, &x, &y)?;
                    let (x, y) = (sample::mat_basis(r, &mut e), sample::mat_basis(r, &mut e));
                    morphism(&end, t, &k, &x, &y)?;
                }
            }
        }
    }
}

fn morphism<S: CdgSheaf>(s: &S, t: &[usize], k: &[usize], x: &S::B, y: &S::B) -> Result<(), TestCaseError> {
    use hhpush_core::cdg::{d_lin, mul_lin, restrict_lin};
    let res = |l: &Lin<S::B>| restrict_lin(s, l, t, k);
    let lx = Lin::single(x.clone(), Rat::one());
    let ly = Lin::single(y.clone(), Rat::one());
    prop_assert_eq!(res(&s.mul(t, x, y)), mul_lin(s, k, &res(&lx), &res(&ly)));
    prop_assert_eq!(res(&s.d(t, x)), d_lin(s, k, &res(&lx)));
    prop_assert_eq!(res(&s.curvature(t)), s.curvature(k));
    Ok(())
}

#[test]
fn hkr_a_of_d1_vanishes_on_two_eps() {
    use hhpush_core::hochschild::Parts;
    let d1 = Parts { d0: false, d1: true, d2: false };
    for s in scenes() {
        let a = AAlg { scene: &s };
        for t in s.tuples() {
            for v in basis_tensors(&s, t, 3).into_iter().filter(|v| v.iter().filter(|b| b.0).count() == 2) {
                let c = CechChain::single(t, v, Rat::one());
                assert!(hkr_a(&s, &c).is_zero());
                let h = hkr_a(&s, &cech_hoch_d(&a, &c, d1, N).unwrap());
                assert!(h.is_zero(), "{} {:?}: {:?}", s.name, c, h);
            }
        }
    }
}
