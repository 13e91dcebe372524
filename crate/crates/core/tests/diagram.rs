//! The trace square on basis chains: `HKR ∘ φ ∘ Č(can)` against the cone
//! route through `∧̄ Td(−Y)⁻¹`, for both signs of the Todd factor.

use hhpush_core::cdg::AB;
use hhpush_core::forms::todd_inverse;
use hhpush_core::hochschild::{basis_tensors, todd_route, trace_route, CechChain};
use hhpush_core::scene::builtin_scene;
use hhpush_core::{signs, Rat};

fn mismatches(name: &str, max_k: usize) -> [usize; 2] {
    let s = builtin_scene(name).unwrap();
    let td = todd_inverse(&s);
    let tds = [td.clone(), td.scale(&signs::of("todd.switch", 1))];
    let mut bad = [0; 2];
    for t in s.tuples() {
        for v in basis_tensors(&s, t, max_k) {
            let c: CechChain<AB> = CechChain::single(t, v, Rat::one());
            let top = trace_route(&s, &c);
            for (i, td) in tds.iter().enumerate() {
                if top != todd_route(&s, &c, td) {
                    bad[i] += 1;
                }
            }
        }
    }
    bad
}

#[test]
fn square_commutes_with_the_plus_sign_only() {
    for name in ["A1", "A2", "P1"] {
        let [plus, minus] = mismatches(name, 3);
        assert_eq!(plus, 0, "{}", name);
        assert!(minus > 0, "{}", name);
    }
}
