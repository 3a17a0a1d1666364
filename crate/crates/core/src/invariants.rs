//! Invariant subspaces of graded jet rings under truncated current algebras.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    grade_of, grade_pieces, Alphabet, Grade, GradeOf, JetDerivative, Monomial, Poly, Variable,
};
use crate::error::{Error, Result};
use crate::lie::{jet_act, jet_generators, GeneratorMode, JetGen, LieAlgebra, LieKind};
use crate::linalg::{self, Echelon, SparseVec};
use crate::matrix::Mat;
use crate::rational::{factorial, Rational};

/// A linear operator on a jet ring, applied term by term.
pub trait RingOperator: Sync {
    fn apply(&self, a: &Poly) -> Result<Poly>;
}

impl RingOperator for JetGen {
    fn apply(&self, a: &Poly) -> Result<Poly> {
        jet_act(self, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub grade: Grade,
    pub dim: usize,
    pub basis: Vec<Poly>,
}

impl Serialize for Grade {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Grade", 2)?;
        st.serialize_field("degrees", &self.degrees)?;
        st.serialize_field("weight", &self.weight)?;
        st.end()
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl InvariantReport {
    /// Builds a report, re-checking that every basis element has the grade
    /// and is killed by every operator.
    pub fn new(grade: Grade, basis: Vec<Poly>, ops: &[&dyn RingOperator]) -> Result<Self> {
        for (i, p) in basis.iter().enumerate() {
            if let GradeOf::Homogeneous(full) = grade_of(p) {
                assert!(grade.selects(&full), "basis element outside {grade}");
            }
            for op in ops {
                if !op.apply(p)?.is_zero() {
                    return Err(Error::NotInvariant(i));
                }
            }
        }
        Ok(InvariantReport { grade, dim: basis.len(), basis })
    }
}

/// Joint kernel of `ops` on the span of `monomials`, as an echelon basis.
pub fn joint_kernel(
    alphabet: &Arc<Alphabet>,
    monomials: &[Monomial],
    ops: &[&dyn RingOperator],
) -> Result<Vec<Poly>> {
    let mut image_index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut rows: Vec<SparseVec> = Vec::new();
    for (col, m) in monomials.iter().enumerate() {
        let x = Poly::monomial(alphabet, m.clone(), Rational::one());
        for (oi, op) in ops.iter().enumerate() {
            for (im, c) in op.apply(&x)?.terms() {
                let next = rows.len();
                let row = *image_index.entry((oi, im.clone())).or_insert(next);
                if row == rows.len() {
                    rows.push(SparseVec::new());
                }
                rows[row].insert(col, c.clone());
            }
        }
    }
    let kernel = linalg::nullspace(rows, monomials.len());
    Ok(kernel.into_iter().map(|v| vector_to_poly(alphabet, monomials, &v)).collect())
}

pub fn vector_to_poly(alphabet: &Arc<Alphabet>, monomials: &[Monomial], v: &SparseVec) -> Poly {
    let mut p = Poly::zero(alphabet);
    for (&i, c) in v {
        p.add_term(monomials[i].clone(), c.clone());
    }
    p
}

pub fn poly_to_vector(index: &HashMap<Monomial, usize>, p: &Poly) -> Option<SparseVec> {
    p.terms()
        .iter()
        .map(|(m, c)| index.get(m).map(|&i| (i, c.clone())))
        .collect()
}

/// Maximum effective jet degree among the variables of the given monomials.
fn max_jet_degree(alphabet: &Alphabet, monomials: &[Monomial]) -> u32 {
    monomials
        .iter()
        .flat_map(|m| m.factors().iter().map(|(v, _)| alphabet.jet_degree(v)))
        .max()
        .unwrap_or(0)
}

/// Jet order to use on a piece: the truncation `m`, or for an untruncated
/// ring the largest jet degree present (higher `g t^k` act by zero).
fn effective_order(alphabet: &Alphabet, monomials: &[Monomial], m: Option<u32>) -> u32 {
    let top = max_jet_degree(alphabet, monomials);
    m.map_or(top, |m| m.min(top))
}

/// Invariants on every fully specified grade inside `grade`.
pub fn invariant_pieces(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    m: Option<u32>,
    grade: &Grade,
    mode: GeneratorMode,
) -> Result<Vec<InvariantReport>> {
    let pieces: Vec<(Grade, Vec<Monomial>)> = grade_pieces(alphabet, grade)?.into_iter().collect();
    pieces
        .into_par_iter()
        .map(|(full, monos)| {
            let gens = jet_generators(g, effective_order(alphabet, &monos, m), mode);
            let ops: Vec<&dyn RingOperator> = gens.iter().map(|x| x as &dyn RingOperator).collect();
            let basis = joint_kernel(alphabet, &monos, &ops)?;
            InvariantReport::new(full, basis, &ops)
        })
        .collect()
}

/// Invariant subspace of the piece selected by `grade` under the full
/// generator set of `g[t]/(t^{m+1})` (`m = None` for the untruncated ring).
pub fn invariant_basis(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    m: Option<u32>,
    grade: &Grade,
) -> Result<InvariantReport> {
    invariant_basis_with(alphabet, g, m, grade, GeneratorMode::Full)
}

pub fn invariant_basis_with(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    m: Option<u32>,
    grade: &Grade,
    mode: GeneratorMode,
) -> Result<InvariantReport> {
    let basis: Vec<Poly> = invariant_pieces(alphabet, g, m, grade, mode)?
        .into_iter()
        .flat_map(|r| r.basis)
        .collect();
    Ok(InvariantReport { grade: grade.clone(), dim: basis.len(), basis })
}

/// One report per weight in `weights`, each over the degrees fixed in `base`.
pub fn invariant_dim_table(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    m: Option<u32>,
    base: &Grade,
    weights: impl IntoIterator<Item = i64>,
) -> Result<Vec<InvariantReport>> {
    weights
        .into_iter()
        .map(|w| {
            let grade = Grade { degrees: base.degrees.clone(), weight: w };
            invariant_basis(alphabet, g, m, &grade)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub generator: JetGen,
    pub image: Poly,
}

/// Every full-mode generator up to `m` (default: the element's jet degree)
/// applied to `a`; returns the nonzero images.
pub fn check_invariant(a: &Poly, g: &LieAlgebra, m: Option<u32>) -> Result<Vec<Violation>> {
    let m = m.unwrap_or_else(|| a.max_jet_degree());
    let mut out = Vec::new();
    for gen in jet_generators(g, m, GeneratorMode::Full) {
        let image = jet_act(&gen, a)?;
        if !image.is_zero() {
            out.push(Violation { generator: gen, image });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationGapReport {
    pub grade: Grade,
    pub span_dim: usize,
    pub invariant_dim: usize,
}

/// Powers of an even weight-0 symbol are followed at most this far when they
/// do not become zero first.
pub const MAX_WEIGHT_ZERO_POWER: usize = 8;

/// Compares, grade by grade up to `max_weight`, the span of all products of
/// jet derivatives of `gens` with the full invariant space.
pub fn generation_gap(
    gens: &[Poly],
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    m: Option<u32>,
    base: &Grade,
    max_weight: i64,
) -> Result<Vec<GenerationGapReport>> {
    // symbols D̃^a(gen) with their weights
    let mut symbols: Vec<(i64, Poly)> = Vec::new();
    for (i, p) in gens.iter().enumerate() {
        if !p.same_alphabet(&Poly::zero(alphabet)) {
            return Err(Error::AlphabetMismatch);
        }
        let GradeOf::Homogeneous(grade) = grade_of(p) else {
            return Err(Error::NotInvariant(i));
        };
        if !check_invariant(p, g, m)?.is_empty() {
            return Err(Error::NotInvariant(i));
        }
        let mut cur = p.clone();
        let mut w = grade.weight;
        while w <= max_weight {
            symbols.push((w, cur.clone()));
            if w == max_weight {
                break;
            }
            cur = JetDerivative.apply(&cur)?;
            w += 1;
        }
    }
    let mut products: BTreeMap<Grade, Vec<Poly>> = BTreeMap::new();
    let mut stack = Vec::new();
    collect_products(&symbols, 0, Poly::one(alphabet), 0, max_weight, &mut stack, &mut products);

    let mut out = Vec::new();
    for w in 0..=max_weight {
        let grade = Grade { degrees: base.degrees.clone(), weight: w };
        for inv in invariant_pieces(alphabet, g, m, &grade, GeneratorMode::Full)? {
            let index: HashMap<Monomial, usize> = grade_pieces(alphabet, &inv.grade)?
                .into_values()
                .flatten()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            let span_dim = products.get(&inv.grade).map_or(0, |ps| {
                linalg::rank(ps.iter().map(|p| poly_to_vector(&index, p).expect("product in piece")))
            });
            assert!(span_dim <= inv.dim, "span exceeds invariants at {}", inv.grade);
            out.push(GenerationGapReport { grade: inv.grade, span_dim, invariant_dim: inv.dim });
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_products(
    symbols: &[(i64, Poly)],
    start: usize,
    current: Poly,
    weight: i64,
    max_weight: i64,
    repeats: &mut Vec<usize>,
    out: &mut BTreeMap<Grade, Vec<Poly>>,
) {
    if let GradeOf::Homogeneous(gr) = grade_of(&current) {
        out.entry(gr).or_default().push(current.clone());
    }
    for (i, (w, s)) in symbols.iter().enumerate().skip(start) {
        if weight + w > max_weight {
            continue;
        }
        let zero_weight_run = repeats.iter().filter(|&&r| r == i).count();
        if *w == 0 && zero_weight_run >= MAX_WEIGHT_ZERO_POWER {
            continue;
        }
        let next = &current * s;
        if next.is_zero() {
            continue;
        }
        repeats.push(i);
        collect_products(symbols, i, next, weight + w, max_weight, repeats, out);
        repeats.pop();
    }
}

/// Sums per weight of a gap table: `(weight, span_dim, invariant_dim)`.
pub fn gap_totals(reports: &[GenerationGapReport]) -> Vec<(i64, usize, usize)> {
    let mut totals: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for r in reports {
        let t = totals.entry(r.grade.weight).or_default();
        t.0 += r.span_dim;
        t.1 += r.invariant_dim;
    }
    totals.into_iter().map(|(w, (s, i))| (w, s, i)).collect()
}

/// `x ↦ Σ coeff_i · (gen_i x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedJetDerivation {
    pub terms: Vec<(Poly, JetGen)>,
}

impl MixedJetDerivation {
    pub fn new(terms: Vec<(Poly, JetGen)>) -> Result<Self> {
        if let Some((first, _)) = terms.first() {
            if terms.iter().any(|(c, _)| !c.same_alphabet(first)) {
                return Err(Error::AlphabetMismatch);
            }
        }
        Ok(MixedJetDerivation { terms })
    }

    /// Commutator `[self, other]`, expanded by the Leibniz rule into the same
    /// form: `Σ a X(b) Y - b Y(a) X + a b [X, Y]`.
    pub fn commutator(&self, other: &MixedJetDerivation) -> Result<MixedJetDerivation> {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let xb = jet_act(x, b)?;
                if !xb.is_zero() {
                    terms.push((a.try_mul(&xb)?, y.clone()));
                }
                let ya = jet_act(y, a)?;
                if !ya.is_zero() {
                    terms.push((-&b.try_mul(&ya)?, x.clone()));
                }
                let xy = x.bracket(y);
                if !xy.element.is_zero() {
                    terms.push((a.try_mul(b)?, xy));
                }
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        Ok(MixedJetDerivation { terms })
    }
}

impl RingOperator for MixedJetDerivation {
    fn apply(&self, x: &Poly) -> Result<Poly> {
        let mut out = Poly::zero(x.alphabet());
        for (c, g) in &self.terms {
            out = out.try_add(&c.try_mul(&jet_act(g, x)?)?)?;
        }
        Ok(out)
    }
}

/// The two elements `g₁`, `g₂` with `g₁ e_1 = e_s`, `g₂ = E_11 - E_ss`,
/// where `s = 2` for `sl` and `s = N + 1` for `sp(2N)`. Returns `(g₁, g₂, s)`.
pub fn lemma_elements(g: &LieAlgebra) -> (Mat, Mat, usize) {
    let n = g.n;
    let s = match g.kind {
        Some(LieKind::Sp(k)) => k + 1,
        _ => 2,
    };
    let g1 = Mat::unit(n, s - 1, 0);
    let g2 = &Mat::unit(n, 0, 0) - &Mat::unit(n, s - 1, s - 1);
    (g1, g2, s)
}

/// `K₁ = Σ_j Y₁^{(j)}/j! g₁ t^j` and
/// `K₂ = -Σ_j Y_s^{(j)}/j! g₁ t^j + Σ_j Y₁^{(j)}/j! g₂ t^j`, for `j = 1..=top`,
/// where `Y` is the coordinate family `coord` (level `j` is `Y^{(j)}`).
pub fn lemma_operators(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    coord: &str,
    top: u32,
) -> Result<(MixedJetDerivation, MixedJetDerivation)> {
    let (g1, g2, s) = lemma_elements(g);
    let fam = alphabet.family(alphabet.family_index(coord)?);
    let top = fam.max_level.map_or(top, |m| top.min(m));
    let y = |i: usize, j: u32| -> Result<Poly> {
        Ok(Poly::var(alphabet, alphabet.var(coord, i as u32, j)?).scale(&factorial(j).recip()))
    };
    let mut k1 = Vec::new();
    let mut k2 = Vec::new();
    for j in 1..=top {
        if !fam.contains_level(j) {
            continue;
        }
        k1.push((y(1, j)?, JetGen::new(g1.clone(), j)));
        k2.push((-&y(s, j)?, JetGen::new(g1.clone(), j)));
        k2.push((y(1, j)?, JetGen::new(g2.clone(), j)));
    }
    Ok((MixedJetDerivation::new(k1)?, MixedJetDerivation::new(k2)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub grade: Grade,
    pub lemma_dim: usize,
    pub invariant_dim: usize,
    pub equal: bool,
}

/// On every full grade in `grade`: whether `ker g ∩ ker K₁ ∩ ker K₂` equals
/// the `g[t]/(t^{m+1})`-invariants.
pub fn lemma_cri_check(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    m: Option<u32>,
    coord: &str,
    grade: &Grade,
) -> Result<Vec<LemmaCheck>> {
    let pieces: Vec<(Grade, Vec<Monomial>)> = grade_pieces(alphabet, grade)?.into_iter().collect();
    pieces
        .into_par_iter()
        .map(|(full, monos)| {
            let order = effective_order(alphabet, &monos, m);
            let gens = jet_generators(g, order, GeneratorMode::Full);
            let full_ops: Vec<&dyn RingOperator> = gens.iter().map(|x| x as &dyn RingOperator).collect();
            let invariant = joint_kernel(alphabet, &monos, &full_ops)?;

            let zero = jet_generators(g, 0, GeneratorMode::Full);
            let (k1, k2) = lemma_operators(alphabet, g, coord, order.max(1))?;
            let mut ops: Vec<&dyn RingOperator> = zero.iter().map(|x| x as &dyn RingOperator).collect();
            ops.push(&k1);
            ops.push(&k2);
            let lemma = joint_kernel(alphabet, &monos, &ops)?;
            Ok(LemmaCheck {
                grade: full,
                lemma_dim: lemma.len(),
                invariant_dim: invariant.len(),
                equal: lemma == invariant,
            })
        })
        .collect()
}

/// Whether `D̃` maps the invariants of weight `w` into those of weight `w + 1`.
pub fn derivative_preserves_invariants(
    alphabet: &Arc<Alphabet>,
    g: &LieAlgebra,
    grade: &Grade,
) -> Result<bool> {
    let low = invariant_basis(alphabet, g, None, grade)?;
    for p in &low.basis {
        let d = JetDerivative.apply(p)?;
        if !check_invariant(&d, g, None)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checked span membership helper: is `p` in the span of `basis`?
pub fn in_span(basis: &[Poly], p: &Poly) -> bool {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for q in basis.iter().chain(std::iter::once(p)) {
        for m in q.terms().keys() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let mut e = Echelon::new();
    for q in basis {
        e.insert(poly_to_vector(&index, q).unwrap());
    }
    e.contains(&poly_to_vector(&index, p).unwrap())
}

#[allow(dead_code)]
fn _assert_variable_ord(_: Variable) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::lie_basis;
    use crate::presets::{cdr_fibre, eight_invariants, tj_bundle};

    fn sl2() -> LieAlgebra {
        lie_basis(LieKind::Sl(2)).unwrap()
    }

    #[test]
    fn pairing_is_the_weight_one_invariant() {
        let r = tj_bundle(2, 1);
        let rep = invariant_basis(&r, &sl2(), Some(1), &Grade::weight(1).with("e", 1)).unwrap();
        assert_eq!(rep.dim, 1);
        let v = &(&Poly::v(&r, "y", 1, 1) * &Poly::v(&r, "e", 1, 0))
            + &(&Poly::v(&r, "y", 2, 1) * &Poly::v(&r, "e", 2, 0));
        assert!(in_span(&rep.basis, &v));
    }

    #[test]
    fn constants_are_invariant() {
        let r = tj_bundle(2, 2);
        let rep = invariant_basis(&r, &sl2(), Some(2), &Grade::weight(0).with("e", 0)).unwrap();
        assert_eq!(rep.dim, 1);
        assert_eq!(rep.basis[0], Poly::one(&r));
    }

    #[test]
    fn single_coordinate_is_not_invariant() {
        let r = tj_bundle(2, 1);
        let v = check_invariant(&Poly::v(&r, "y", 1, 1), &sl2(), Some(1)).unwrap();
        assert!(!v.is_empty());
    }

    #[test]
    fn derivative_of_invariant_is_invariant() {
        let r = cdr_fibre(2);
        let q = eight_invariants(&r, 2)[0].1.clone();
        let d = JetDerivative.apply(&q).unwrap();
        assert!(check_invariant(&d, &sl2(), None).unwrap().is_empty());
    }

    #[test]
    fn k1_kills_pairing() {
        let r = tj_bundle(2, 1);
        let (k1, _) = lemma_operators(&r, &sl2(), "y", 1).unwrap();
        let v = &(&Poly::v(&r, "y", 1, 1) * &Poly::v(&r, "e", 1, 0))
            + &(&Poly::v(&r, "y", 2, 1) * &Poly::v(&r, "e", 2, 0));
        assert!(k1.apply(&v).unwrap().is_zero());
        assert!(k1.apply(&Poly::v(&r, "y", 1, 1)).unwrap().is_zero());
    }

    #[test]
    fn empty_generators_give_constants() {
        let r = cdr_fibre(2);
        let gap = generation_gap(&[], &r, &sl2(), None, &Grade::weight(0), 0).unwrap();
        let totals = gap_totals(&gap);
        // only the constant is spanned; c1 c2 is an invariant not reached
        assert_eq!(totals, vec![(0, 1, 2)]);
        let trivial: Vec<_> = gap.iter().filter(|r| r.grade.degrees["c"] == 0).collect();
        assert_eq!((trivial[0].span_dim, trivial[0].invariant_dim), (1, 1));
    }
}
