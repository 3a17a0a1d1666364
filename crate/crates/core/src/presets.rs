//! The two jet-ring alphabets used throughout: the bundle whose `L_e = 1`
//! piece gives vector fields on jet schemes, and the fibre of the associated
//! graded of the chiral de Rham complex.

use std::sync::Arc;

use crate::algebra::{Alphabet, FamilySpec, Parity, Poly, RepLabel};

/// Families `y` (coordinate jets, levels `1..=m`, dual, jet offset 1) and
/// `e` (tangent frame jets, levels `0..=m`, fundamental).
pub fn tj_bundle(n: usize, m: u32) -> Arc<Alphabet> {
    Alphabet::new(vec![
        FamilySpec::new("y", Parity::Even, n as u32)
            .levels(1, Some(m))
            .jet_offset(1)
            .rep(RepLabel::DualFundamental),
        FamilySpec::new("e", Parity::Even, n as u32)
            .levels(0, Some(m))
            .rep(RepLabel::Fundamental),
    ])
    .expect("preset alphabet")
}

/// Untruncated ring `C[∂^k β, ∂^{k+1} γ, ∂^k b, ∂^k c]`. Level `k` of `beta`
/// and `b` is `∂^k`, level `k ≥ 1` of `gamma` is `∂^k γ`. Weights are
/// conformal: `β`, `b` weight 1, `∂γ` weight 1, `c` weight 0.
pub fn cdr_fibre(n: usize) -> Arc<Alphabet> {
    let n = n as u32;
    Alphabet::new(vec![
        FamilySpec::new("beta", Parity::Even, n).weight_offset(1).rep(RepLabel::Fundamental),
        FamilySpec::new("gamma", Parity::Even, n)
            .levels(1, None)
            .jet_offset(1)
            .rep(RepLabel::DualFundamental),
        FamilySpec::new("b", Parity::Odd, n).weight_offset(1).rep(RepLabel::Fundamental),
        FamilySpec::new("c", Parity::Odd, n).rep(RepLabel::DualFundamental),
    ])
    .expect("preset alphabet")
}

pub const EIGHT_NAMES: [&str; 8] = ["Q", "L", "J", "G", "D", "E", "B", "C"];

fn chain(r: &Arc<Alphabet>, n: usize, family: &str, level: u32, swap: Option<(usize, &str, u32)>) -> Poly {
    let vars: Vec<_> = (1..=n)
        .map(|i| match swap {
            Some((j, f, l)) if j == i => r.var(f, i as u32, l).unwrap(),
            _ => r.var(family, i as u32, level).unwrap(),
        })
        .collect();
    Poly::product_of(r, &vars)
}

/// The eight invariants of the chiral de Rham fibre, in the order
/// `Q, L, J, G, D, E, B, C` (named after the vertex sections they symbolize).
pub fn eight_invariants(r: &Arc<Alphabet>, n: usize) -> Vec<(&'static str, Poly)> {
    let sum = |f: &dyn Fn(u32) -> Poly| (1..=n as u32).fold(Poly::zero(r), |acc, i| &acc + &f(i));
    let q = sum(&|i| &Poly::v(r, "beta", i, 0) * &Poly::v(r, "c", i, 0));
    let l = sum(&|i| &Poly::v(r, "beta", i, 0) * &Poly::v(r, "gamma", i, 1));
    let j = -&sum(&|i| &Poly::v(r, "b", i, 0) * &Poly::v(r, "c", i, 0));
    let g = sum(&|i| &Poly::v(r, "b", i, 0) * &Poly::v(r, "gamma", i, 1));
    let d = chain(r, n, "b", 0, None);
    let e = chain(r, n, "c", 0, None);
    let signed = |i: usize, p: Poly| if i.is_multiple_of(2) { -&p } else { p };
    let b = (1..=n).fold(Poly::zero(r), |acc, i| &acc + &signed(i, chain(r, n, "b", 0, Some((i, "beta", 0)))));
    let c = (1..=n).fold(Poly::zero(r), |acc, i| &acc + &signed(i, chain(r, n, "c", 0, Some((i, "gamma", 1)))));
    EIGHT_NAMES.into_iter().zip([q, l, j, g, d, e, b, c]).collect()
}
