//! Independent oracles and worked examples with frozen values.

use num_traits::{One, Zero};

use jetva::algebra::{Grade, Poly};
use jetva::fock::{fock_basis, herm_form, to_modes};
use jetva::invariants::{gap_totals, generation_gap, in_span, invariant_basis, lemma_cri_check};
use jetva::lie::{lie_basis, sym2_intersection, LieAlgebra, LieKind};
use jetva::matrix::Mat;
use jetva::presets::{cdr_fibre, eight_invariants, tj_bundle};
use jetva::rational::{frac, int, Rational};
use jetva::vertex::{
    standard_sections, strong_span_membership, symbol_map, weight_of, zero_mode_lie_action, Engine,
    Kind, State,
};
use jetva::Error;

/// Rank over the integers by fraction-free elimination (Bareiss), kept apart
/// from the library's sparse rational elimination.
fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            for k in c + 1..cols {
                rows[r][k] = (rows[rank][c] * rows[r][k] - rows[r][c] * rows[rank][k]) / prev;
            }
            rows[r][c] = 0;
        }
        prev = rows[rank][c];
        rank += 1;
    }
    rank
}

fn as_int(q: &Rational) -> i128 {
    assert!(q.is_integer());
    q.to_integer().try_into().unwrap()
}

/// dim(V*⊗g ∩ Sym²V*⊗V) = dim A + dim B - dim(A + B) inside V*⊗V*⊗V.
fn intersection_dim_oracle(g: &LieAlgebra) -> usize {
    let n = g.n;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut a = Vec::new();
    for i in 0..n {
        for x in &g.basis {
            let mut v = vec![0i128; n * n * n];
            for j in 0..n {
                for k in 0..n {
                    v[idx(i, j, k)] = as_int(&x[(k, j)]);
                }
            }
            a.push(v);
        }
    }
    let mut b = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut v = vec![0i128; n * n * n];
                v[idx(i, j, k)] = 1;
                v[idx(j, i, k)] = 1;
                b.push(v);
            }
        }
    }
    let ra = integer_rank(a.clone());
    let rb = integer_rank(b.clone());
    a.extend(b);
    ra + rb - integer_rank(a)
}

#[test]
fn intersection_dimensions_match_oracle() {
    for (kind, want) in [(LieKind::Sl(2), 4), (LieKind::Sl(3), 15), (LieKind::Sp(2), 20)] {
        let g = lie_basis(kind).unwrap();
        assert_eq!(intersection_dim_oracle(&g), want, "{kind}");
        assert_eq!(sym2_intersection(&g).len(), want, "{kind}");
    }
    assert!(sym2_intersection(&LieAlgebra::trivial(2)).is_empty());
}

fn sl2() -> LieAlgebra {
    lie_basis(LieKind::Sl(2)).unwrap()
}

#[test]
fn pairing_spans_the_first_invariants() {
    let r = tj_bundle(2, 1);
    let v = &(&Poly::v(&r, "y", 1, 1) * &Poly::v(&r, "e", 1, 0)) + &(&Poly::v(&r, "y", 2, 1) * &Poly::v(&r, "e", 2, 0));
    let rep = invariant_basis(&r, &sl2(), Some(1), &Grade::weight(1).with("e", 1)).unwrap();
    assert_eq!(rep.dim, 1);
    assert!(in_span(&rep.basis, &v));
    let r2 = tj_bundle(2, 2);
    assert_eq!(invariant_basis(&r2, &sl2(), Some(2), &Grade::weight(3).with("e", 1)).unwrap().dim, 0);
    let r3 = tj_bundle(2, 3);
    let dims: Vec<usize> = (1..=5)
        .map(|w| invariant_basis(&r3, &sl2(), Some(3), &Grade::weight(w).with("e", 1)).unwrap().dim)
        .collect();
    assert_eq!(dims, vec![1, 1, 1, 0, 0]);
}

#[test]
fn generation_gap_low_weights() {
    let r = cdr_fibre(2);
    let gens: Vec<Poly> = eight_invariants(&r, 2).into_iter().map(|(_, p)| p).collect();
    let gap = generation_gap(&gens, &r, &sl2(), None, &Grade::weight(0), 1).unwrap();
    assert_eq!(gap_totals(&gap), vec![(0, 2, 2), (1, 4, 4)]);
    // weight 1 invariants named in the worked example
    let inv = invariant_basis(&r, &sl2(), None, &Grade::weight(1)).unwrap();
    let q = &gens[0];
    let j = &gens[2];
    let c12 = &Poly::v(&r, "c", 1, 0) * &Poly::v(&r, "c", 2, 0);
    let dc = jetva::algebra::JetDerivative.apply(&c12).unwrap();
    let cc = &(&Poly::v(&r, "gamma", 1, 1) * &Poly::v(&r, "c", 2, 0)) - &(&Poly::v(&r, "c", 1, 0) * &Poly::v(&r, "gamma", 2, 1));
    for p in [q, j, &dc, &cc] {
        assert!(in_span(&inv.basis, p));
    }
}

#[test]
fn lemma_small_cases() {
    let r = tj_bundle(2, 1);
    let c = lemma_cri_check(&r, &sl2(), Some(1), "y", &Grade::weight(1).with("e", 1)).unwrap();
    assert!(c.iter().all(|c| c.equal));
    assert_eq!(c.iter().map(|c| c.invariant_dim).sum::<usize>(), 1);
    let zero = lemma_cri_check(&r, &sl2(), Some(1), "y", &Grade::weight(0).with("e", 0).with("y", 0)).unwrap();
    assert_eq!(zero.len(), 1);
    assert!(zero[0].equal && zero[0].invariant_dim == 1);
}

fn gen(kind: Kind, i: u32) -> State {
    State::generator(kind, i)
}

#[test]
fn hand_wick_products() {
    let e = Engine::new();
    let s = standard_sections(2, &e);
    assert_eq!(e.nth_product(&gen(Kind::Beta, 1), 0, &gen(Kind::Gamma, 1)), State::vacuum());
    for i in 1..=2 {
        assert_eq!(e.nth_product(&s.q, 0, &gen(Kind::Gamma, i)), gen(Kind::C, i));
        assert_eq!(e.nth_product(&s.q, 0, &gen(Kind::B, i)), gen(Kind::Beta, i));
        assert_eq!(e.lambda_bracket(&s.j, &gen(Kind::B, i)), vec![(0, -&gen(Kind::B, i))]);
    }
    let d_beta = State::derivative_of(Kind::Beta, 1, 1);
    assert_eq!(e.nth_product(&d_beta, 1, &gen(Kind::Gamma, 1)), -&State::vacuum());
    assert!(e.lambda_bracket(&gen(Kind::Beta, 1), &gen(Kind::Beta, 2)).is_empty());
}

#[test]
fn sections_worked_values() {
    let e = Engine::new();
    let s = standard_sections(2, &e);
    assert_eq!(s.d, State::normal_product(&[(Kind::B, 1, 0), (Kind::B, 2, 0)]));
    // B = β¹b² − β²b¹ by one contraction of Q against D
    let b = &State::normal_product(&[(Kind::Beta, 1, 0), (Kind::B, 2, 0)])
        - &State::normal_product(&[(Kind::Beta, 2, 0), (Kind::B, 1, 0)]);
    assert_eq!(s.b, b);
    let c = &State::normal_product(&[(Kind::Gamma, 1, 1), (Kind::C, 2, 0)])
        - &State::normal_product(&[(Kind::Gamma, 2, 1), (Kind::C, 1, 0)]);
    assert_eq!(s.c, c);
    let s1 = standard_sections(1, &e);
    assert_eq!(s1.e, gen(Kind::C, 1));
    assert_eq!(weight_of(&e, &s.ltilde, &s.j), Some(int(1)));
    assert_eq!(weight_of(&e, &s.ltilde, &s.ltilde), Some(int(2)));
    assert_eq!(weight_of(&e, &s.ltilde, &s.q), Some(frac(3, 2)));
    assert_eq!(weight_of(&e, &s.ltilde, &gen(Kind::Gamma, 1)), Some(int(0)));
}

#[test]
fn strong_span_examples() {
    let e = Engine::new();
    let s = standard_sections(2, &e);
    let qg = e.nth_product(&s.q, 0, &s.g);
    assert!(strong_span_membership(&e, &s, &qg, &int(4)).member);
    let c = strong_span_membership(&e, &s, &s.c, &int(4));
    assert!(c.member);
    assert_eq!(c.coordinates, vec![("C".to_string(), "1".to_string())]);
    assert!(!strong_span_membership(&e, &s, &gen(Kind::Beta, 1), &int(4)).member);
}

#[test]
fn symbol_examples() {
    let r = cdr_fibre(2);
    let e = Engine::new();
    let s = standard_sections(2, &e);
    let q = symbol_map(&s.q, &r).unwrap();
    assert_eq!((q.n, q.s), (1, 1));
    assert_eq!(q.poly, eight_invariants(&r, 2)[0].1);
    let d = symbol_map(&s.d, &r).unwrap();
    assert_eq!((d.n, d.s, d.image.as_str()), (2, 0, "1 * b1^(0) b2^(0)"));
    let bb = State::normal_product(&[(Kind::Beta, 1, 0), (Kind::Beta, 1, 0)]);
    let sym = symbol_map(&bb, &r).unwrap();
    assert_eq!((sym.n, sym.s), (2, 2));
    assert_eq!(sym.poly, &Poly::v(&r, "beta", 1, 0) * &Poly::v(&r, "beta", 1, 0));
    assert!(symbol_map(&gen(Kind::Gamma, 1), &r).is_err());
}

#[test]
fn zero_mode_examples() {
    let e = Engine::new();
    let s = standard_sections(2, &e);
    let h = &Mat::unit(2, 0, 0) - &Mat::unit(2, 1, 1);
    assert!(zero_mode_lie_action(&h, &s.q).is_zero());
    assert_eq!(zero_mode_lie_action(&h, &gen(Kind::Beta, 1)), gen(Kind::Beta, 1));
    for x in lie_basis(LieKind::Sl(2)).unwrap().basis {
        assert!(zero_mode_lie_action(&x, &s.d).is_zero());
    }
    let trace = Mat::unit(2, 0, 0);
    assert_eq!(zero_mode_lie_action(&trace, &s.d), s.d);
}

#[test]
fn fock_examples() {
    let beta = to_modes(&gen(Kind::Beta, 1)).unwrap();
    assert_eq!(herm_form(&beta, &beta), Rational::one());
    assert!(herm_form(&beta, &to_modes(&gen(Kind::B, 1)).unwrap()).is_zero());
    assert_eq!(to_modes(&gen(Kind::Gamma, 2)), Err(Error::OutsideBarSubalgebra));
    // norms of single modes: β_{-n} has n, ∂^{k}γ/k! = γ_{-k} has 1/k, fermions 1
    let single_norms = |tw| -> Vec<Rational> {
        fock_basis(1, tw)
            .iter()
            .filter(|s| s.terms()[0].0.len() == 1)
            .map(|s| herm_form(s, s))
            .collect()
    };
    assert_eq!(single_norms(6), vec![int(3), frac(1, 3)]);
    assert_eq!(single_norms(5), vec![int(1), int(1)]);
}
