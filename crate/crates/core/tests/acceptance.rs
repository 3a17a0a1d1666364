//! Acceptance criteria 1–11. Prints one line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use jetva::algebra::{grade_of, variables_up_to, Alphabet, Grade, GradeOf, JetDerivative, Poly};
use jetva::fock::{adjoint_check, gram_matrices, standard_rules};
use jetva::invariants::{
    check_invariant, generation_gap, invariant_basis_with, lemma_cri_check,
};
use jetva::lie::{jet_act, lie_basis, sym2_commutant_dim, GeneratorMode, JetGen, LieKind};
use jetva::presets::{cdr_fibre, eight_invariants, tj_bundle};
use jetva::rational::{fmt_rational, frac, int, Rational};
use jetva::sampling::{self, commutator_defect, derivative_defects, skew_symmetry_defect};
use jetva::vertex::{
    automorphism_check, involution_scales, standard_sections, symbol_map, virasoro_central_charge,
    weight_of, Engine, StrongSpan, SECTION_NAMES,
};

const SEED: u64 = 20240611;
const SAMPLES: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sl2() -> jetva::lie::LieAlgebra {
    lie_basis(LieKind::Sl(2)).unwrap()
}

fn tj_dims(m: u32, mode: GeneratorMode) -> Vec<usize> {
    let r = tj_bundle(2, m);
    (1..=m as i64 + 2)
        .map(|w| invariant_basis_with(&r, &sl2(), Some(m), &Grade::weight(w).with("e", 1), mode).unwrap().dim)
        .collect()
}

fn criterion_1() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for m in 1..=3u32 {
        let dims = tj_dims(m, GeneratorMode::Full);
        let mut want = vec![1; m as usize];
        want.extend([0, 0]);
        pass &= dims == want && dims.iter().sum::<usize>() == m as usize;
        detail.push(format!("m={m} {dims:?}"));
    }
    outcome(pass, detail.join(", "))
}

fn criterion_2() -> Outcome {
    let r = cdr_fibre(2);
    let mut failed = Vec::new();
    for (name, p) in eight_invariants(&r, 2) {
        let GradeOf::Homogeneous(g) = grade_of(&p) else {
            failed.push(name);
            continue;
        };
        if !check_invariant(&p, &sl2(), Some(g.weight as u32)).unwrap().is_empty() {
            failed.push(name);
        }
    }
    outcome(failed.is_empty(), format!("failing: {failed:?}"))
}

fn criterion_3() -> Outcome {
    let r = cdr_fibre(2);
    let gens: Vec<Poly> = eight_invariants(&r, 2).into_iter().map(|(_, p)| p).collect();
    let gap = generation_gap(&gens, &r, &sl2(), None, &Grade::weight(0), 4).unwrap();
    let bad: Vec<String> = gap
        .iter()
        .filter(|g| g.span_dim != g.invariant_dim)
        .map(|g| format!("{} {}<{}", g.grade, g.span_dim, g.invariant_dim))
        .collect();
    let mut totals = BTreeMap::new();
    for g in &gap {
        *totals.entry(g.grade.weight).or_insert(0) += g.invariant_dim;
    }
    outcome(bad.is_empty(), format!("{} grades, invariant dims by weight {:?}, gaps {bad:?}", gap.len(), totals))
}

fn criterion_4() -> Outcome {
    let mut pieces = 0;
    let mut bad = Vec::new();
    let tj = tj_bundle(2, 2);
    for le in 0..=3 {
        for w in 0..=3 {
            for c in lemma_cri_check(&tj, &sl2(), Some(2), "y", &Grade::weight(w).with("e", le)).unwrap() {
                pieces += 1;
                if !c.equal {
                    bad.push(format!("tj {}", c.grade));
                }
            }
        }
    }
    let fibre = cdr_fibre(2);
    for w in 0..=3 {
        for c in lemma_cri_check(&fibre, &sl2(), Some(2), "gamma", &Grade::weight(w)).unwrap() {
            pieces += 1;
            if !c.equal {
                bad.push(format!("fibre {}", c.grade));
            }
        }
    }
    outcome(bad.is_empty(), format!("{pieces} pieces (tj-bundle with L_e <= 3), mismatches {bad:?}"))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    for m in 1..=3 {
        pass &= tj_dims(m, GeneratorMode::Minimal) == tj_dims(m, GeneratorMode::Full);
        let r = tj_bundle(2, m);
        for w in 1..=m as i64 + 2 {
            let grade = Grade::weight(w).with("e", 1);
            let full = invariant_basis_with(&r, &sl2(), Some(m), &grade, GeneratorMode::Full).unwrap();
            let min = invariant_basis_with(&r, &sl2(), Some(m), &grade, GeneratorMode::Minimal).unwrap();
            pass &= full.basis == min.basis;
        }
    }
    let fibre = cdr_fibre(2);
    let mut pieces = 0;
    for w in 0..=4 {
        let full = invariant_basis_with(&fibre, &sl2(), None, &Grade::weight(w), GeneratorMode::Full).unwrap();
        let min = invariant_basis_with(&fibre, &sl2(), None, &Grade::weight(w), GeneratorMode::Minimal).unwrap();
        pass &= full.basis == min.basis;
        pieces += full.dim;
    }
    outcome(pass, format!("tj-bundle m=1..3 windows and fibre weights 0..4 ({pieces} invariants)"))
}

fn criterion_6() -> Outcome {
    let dims: Vec<(String, usize)> = [LieKind::Sl(2), LieKind::Sl(3), LieKind::Sp(2)]
        .into_iter()
        .map(|k| (k.to_string(), sym2_commutant_dim(&lie_basis(k).unwrap()).unwrap()))
        .collect();
    outcome(dims.iter().all(|(_, d)| *d == 1), format!("{dims:?}"))
}

fn criterion_7() -> Outcome {
    let e = Engine::new();
    let s2 = standard_sections(2, &e);
    let s3 = standard_sections(3, &e);
    let c2 = virasoro_central_charge(&e, &s2.ltilde);
    let c3 = virasoro_central_charge(&e, &s3.ltilde);
    let allowed = [int(1), frac(3, 2), int(2)];
    let weights_ok = s2
        .named()
        .iter()
        .all(|(_, x)| weight_of(&e, &s2.ltilde, x).is_some_and(|w| allowed.contains(&w)));
    let span = StrongSpan::of_sections(&e, &s2);
    let mut products = 0;
    let mut outside = Vec::new();
    for (xn, x) in s2.named() {
        for (yn, y) in s2.named() {
            for (n, p) in e.lambda_bracket(x, y) {
                products += 1;
                if !span.membership(&p, &int(4)).member {
                    outside.push(format!("{xn}_({n}){yn}"));
                }
            }
        }
    }
    let pass = c2 == Some(int(6)) && c3 == Some(int(9)) && weights_ok && outside.is_empty();
    outcome(
        pass,
        format!("c(N=2)={} c(N=3)={} weights_ok={weights_ok} {products} products, outside {outside:?}", show(&c2), show(&c3)),
    )
}

fn show(c: &Option<Rational>) -> String {
    c.as_ref().map_or("none".into(), fmt_rational)
}

fn criterion_8() -> Outcome {
    let e = Engine::new();
    let s = standard_sections(2, &e);
    let r = cdr_fibre(2);
    let expected: BTreeMap<&str, String> =
        eight_invariants(&r, 2).into_iter().map(|(k, p)| (k, p.to_string())).collect();
    let labels: BTreeMap<&str, (u32, u32)> =
        [("Q", (1, 1)), ("L", (1, 1)), ("J", (1, 0)), ("G", (1, 0)), ("D", (2, 0)), ("E", (0, 0)), ("B", (2, 1)), ("C", (0, 0))]
            .into_iter()
            .collect();
    let mut bad = Vec::new();
    for (name, x) in s.named() {
        let sym = symbol_map(x, &r).unwrap();
        if sym.image != expected[name] || (sym.n, sym.s) != labels[name] {
            bad.push(format!("{name}: ({}, {}) {}", sym.n, sym.s, sym.image));
        }
    }
    outcome(bad.is_empty(), format!("mismatches {bad:?}"))
}

fn criterion_9() -> Outcome {
    let mut grams = 0;
    let mut pd = true;
    for tw in 0..=4 {
        for g in gram_matrices(2, tw) {
            grams += 1;
            pd &= g.positive_definite;
        }
    }
    let e = Engine::new();
    let s = standard_sections(2, &e);
    let mut failed = Vec::new();
    for rule in standard_rules(2) {
        if !["Q", "G", "J", "L", "D", "E"].contains(&rule.field.as_str()) {
            continue;
        }
        let r = adjoint_check(&e, &s, &rule, 4).unwrap();
        if !r.holds {
            failed.push(rule.field.clone());
        }
    }
    outcome(pd && failed.is_empty(), format!("{grams} Gram blocks positive definite: {pd}; failing rules {failed:?}"))
}

fn criterion_10() -> Outcome {
    let e = Engine::new();
    let s = standard_sections(2, &e);
    let sigma = automorphism_check(&e, &s, &involution_scales(), &int(3));
    let mut mutant: BTreeMap<String, Rational> = SECTION_NAMES.iter().map(|k| (k.to_string(), int(1))).collect();
    mutant.insert("D".into(), int(-1));
    let bad = automorphism_check(&e, &s, &mutant, &int(3));
    outcome(
        sigma.is_empty() && !bad.is_empty(),
        format!("involution failures {}, single-negation failures {}", sigma.len(), bad.len()),
    )
}

fn random_poly(rng: &mut impl Rng, r: &Arc<Alphabet>, vars: &[jetva::algebra::Variable], terms: usize) -> Poly {
    let mut p = Poly::zero(r);
    for _ in 0..terms {
        let len = rng.gen_range(1..=3);
        let chosen: Vec<_> = (0..len).map(|_| vars[rng.gen_range(0..vars.len())]).collect();
        let m = Poly::product_of(r, &chosen).scale(&int(rng.gen_range(-3..=3)));
        p = &p + &m;
    }
    p
}

fn criterion_11() -> Outcome {
    let mut rng = sampling::rng(SEED);
    let e = Engine::new();
    let plain = Engine::without_memo();
    let mut fails: BTreeMap<&str, usize> = BTreeMap::new();
    for i in 0..SAMPLES {
        let a = sampling::random_word(&mut rng, 2, 3, 2);
        let b = sampling::random_word(&mut rng, 2, 3, 2);
        let c = sampling::random_word(&mut rng, 2, 2, 1);
        let n = (i % 5) as i64 - 2;
        if !skew_symmetry_defect(&e, &a, n, &b).is_zero() {
            *fails.entry("skew").or_default() += 1;
        }
        let (d1, d2) = derivative_defects(&e, &a, n, &b);
        if !d1.is_zero() || !d2.is_zero() {
            *fails.entry("derivative").or_default() += 1;
        }
        if !commutator_defect(&e, &a, n + 1, &b, n - 1, &c).is_zero() {
            *fails.entry("commutator").or_default() += 1;
        }
        if e.nth_product(&a, n, &b) != plain.nth_product(&a, n, &b) {
            *fails.entry("memo").or_default() += 1;
        }
    }
    let r = cdr_fibre(2);
    let vars = variables_up_to(&r, 2);
    let g = sl2();
    for _ in 0..SAMPLES {
        let a = random_poly(&mut rng, &r, &vars, 1);
        let b = random_poly(&mut rng, &r, &vars, 1);
        let (pa, pb) = (a.parity().map(|p| p.is_odd()), b.parity().map(|p| p.is_odd()));
        if let (Some(pa), Some(pb)) = (pa, pb) {
            let swapped = if pa && pb { -&(&b * &a) } else { &b * &a };
            if &a * &b != swapped {
                *fails.entry("supercommutative").or_default() += 1;
            }
        }
        let a = random_poly(&mut rng, &r, &vars, 3);
        let b = random_poly(&mut rng, &r, &vars, 3);
        let k = rng.gen_range(0..=3);
        let x = JetGen::new(g.basis[rng.gen_range(0..g.dim())].clone(), k);
        let leibniz = &(&jet_act(&x, &a).unwrap() * &b) + &(&a * &jet_act(&x, &b).unwrap());
        let d = JetDerivative;
        let d_leibniz = &(&d.apply(&a).unwrap() * &b) + &(&a * &d.apply(&b).unwrap());
        if jet_act(&x, &(&a * &b)).unwrap() != leibniz || d.apply(&(&a * &b)).unwrap() != d_leibniz {
            *fails.entry("leibniz").or_default() += 1;
        }
        let lhs = &jet_act(&x, &d.apply(&a).unwrap()).unwrap() - &d.apply(&jet_act(&x, &a).unwrap()).unwrap();
        let rhs = if k == 0 {
            Poly::zero(&r)
        } else {
            jet_act(&JetGen::new(x.element.clone(), k - 1), &a).unwrap().scale(&int(k as i64))
        };
        if lhs != rhs {
            *fails.entry("jet_derivative").or_default() += 1;
        }
    }
    outcome(fails.is_empty(), format!("{SAMPLES} samples per identity, seed {SEED}, failures {fails:?}"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("jet-bundle invariant dimensions", criterion_1),
        ("eight fibre invariants", criterion_2),
        ("generation window up to weight 4", criterion_3),
        ("kernel of g, K1, K2", criterion_4),
        ("minimal generator set", criterion_5),
        ("commutant of the intersection", criterion_6),
        ("central charge, weights, closure", criterion_7),
        ("symbols of the eight sections", criterion_8),
        ("Gram matrices and adjoints", criterion_9),
        ("sign involution", criterion_10),
        ("engine identities", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {:>2} {}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
