//! Sign ledger.
//!
//! Every sign the engine applies is looked up here by id through [`of`], so
//! each convention has exactly one documented home. The acceptance suite
//! scans the sources and fails on a sign that bypasses the ledger or names an
//! id missing from [`LEDGER`].

use crate::rat::Rat;

pub const VERSION: &str = "1";

#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub id: &'static str,
    pub rule: &'static str,
}

pub const LEDGER: &[Entry] = &[
    Entry { id: "cech.d", rule: "(d c)_{i0..i(p+1)} = sum_m (-1)^m c_{i0..^im..i(p+1)} restricted" },
    Entry { id: "cech.twist", rule: "internal differential on Cech degree p is multiplied by (-1)^p" },
    Entry { id: "form.wedge", rule: "dx_a ^ dx_b = -dx_b ^ dx_a; product sign is the sign sorting the concatenated index lists" },
    Entry { id: "log.wedge", rule: "w ^ (dx/x ^ r) = (-1)^deg(w) dx/x ^ (w ^ r)" },
    Entry { id: "parity", rule: "parity of a Cech cochain entry of form degree k on a (p+1)-tuple is p + k; log[1] entries add 1; Y-forms use p + k" },
    Entry { id: "cx.omega", rule: "(Omega, -df^): internal differential is -df ^ (-)" },
    Entry { id: "cx.log1", rule: "(Omega(log Y), -df^)[1]: internal differential is +df ^ (-)" },
    Entry { id: "cx.cone", rule: "Cone(L): internal d(a, b) = (-df ^ a, L(a) + df ^ b)" },
    Entry { id: "bar.wedge", rule: "(a barwedge b) = (-1)^(pq) b ^ a, p and q the Cech degrees" },
    Entry { id: "bar.cone", rule: "(a + b) barwedge c = (-1)^(pq) c ^ a + (-1)^((p+1)q) c ^ b" },
    Entry { id: "todd.binom", rule: "c^(barwedge q) = (-1)^binom(q,2) c^(^q) for a Cech 1-cochain c of even total parity" },
    Entry { id: "todd.switch", rule: "Td^-1 enters the square as (+1) or (-1) times the series; --todd-sign selects" },
    Entry { id: "ses.delta", rule: "delta(a)_r = (-1)^r (D_log1(lift a))_r where r is the Cech degree" },
    Entry { id: "cone.delta", rule: "Cone(L) -> (Omega, -df^) sends (a, b) to -a" },
    Entry { id: "hoch.d0", rule: "d0 a0[..] = sum_i (-1)^(|a0|+..+|ai|+i) a0[..|ai|h|a(i+1)|..]" },
    Entry { id: "hoch.d1", rule: "d1 a0[..] = sum_i (-1)^(|a0|+..+|a(i-1)|+i) a0[..|d ai|..]" },
    Entry { id: "hoch.d2", rule: "d2: (-1)^|a0| a0a1[..] + sum_i (-1)^(|a0|+..+|ai|+i) a0[..|ai a(i+1)|..] + (-1)^(1+(|ak|+1)(|a0|+..+|a(k-1)|+k-1)) ak a0[..]" },
    Entry { id: "hkr.xf", rule: "a0[a1|..|ak] -> (1/k!) a0 da1^..^dak; O_f lands in (Omega, +df^), O_(-f) in (Omega, -df^)" },
    Entry { id: "hkr.a.du", rule: "degree-0 class: regular terms -(-1)^p/k! a0 du_(i0 j)/u_(i0 j) ^ da1.. on j u I for j < i0" },
    Entry { id: "hkr.a.eps", rule: "one epsilon at position l: (-1)^l/k! a0 dx ^ da1 ^ .. with a_l replaced by its coefficient" },
    Entry { id: "mf.basis", rule: "P is ordered (1, eps): delta = [[0, x], [g, 0]], g_ij = diag(1, u_ij), can(eps) = [[0, 0], [1, 0]]" },
    Entry { id: "mat.d", rule: "d(F) = delta F - (-1)^|F| F delta" },
    Entry { id: "str.sigma", rule: "sTr sign sigma = (m+1)|e_j0| + |e_j1| + .. + |e_jm|" },
    Entry { id: "hq.basis", rule: "h^q sign (-1)^(eps + pq + binom(q,2)), eps = sum_s (|a0|+..+|a_ls| + l_s)" },
    Entry { id: "phi.n", rule: "phi = sum_(n,q) (-1)^n sTr h^q Sh(delta^n, -)" },
    Entry { id: "lax.hq", rule: "lax h^q sign eps = sum_s (|a0|+..+|a_ls| + l_s) + sigma(I,J) + pq" },
    Entry { id: "lax.sigma", rule: "sigma(I,J) is the sign of the permutation sorting (j1..jq, i0..ip)" },
    Entry { id: "lax.iso", rule: "iso homotopy sign eps' = eps + (p + q) + |a0|+..+|ar| + r + s, p + q the Cech degree of the output" },
    Entry { id: "lax.strict", rule: "strict-vs-lax homotopy sign tau = (|a0|+..+|a_l1| + l1) + (|a0|+..+|a_l2| + l2) + sigma(I,j)" },
    Entry { id: "lax.restrict", rule: "restriction homotopy: h^q with p = -1, output Cech degree q - 1" },
    Entry { id: "homotopy.orient", rule: "D H + H D equals: C(psi,beta) - C(phi,alpha) for the iso homotopy; C(phi) - C(phi,id) for the strict-vs-lax H; C(phi,alpha) res - res phi_X for the restriction H" },
];

pub fn lookup(id: &str) -> Option<&'static Entry> {
    LEDGER.iter().find(|e| e.id == id)
}

/// `(-1)^e` under the convention named by `id`.
#[inline]
pub fn of(id: &'static str, e: i64) -> Rat {
    debug_assert!(lookup(id).is_some(), "sign id '{}' missing from ledger", id);
    Rat::sign(e)
}

/// `e` mod 2 as a boolean, under the convention named by `id`.
#[inline]
pub fn odd(id: &'static str, e: i64) -> bool {
    debug_assert!(lookup(id).is_some(), "sign id '{}' missing from ledger", id);
    e.rem_euclid(2) == 1
}

/// Inversion count of `v`, the exponent of the sign sorting it (entries distinct).
pub fn perm_sign(v: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    inv
}

pub fn binom2(q: i64) -> i64 {
    q * (q - 1) / 2
}
