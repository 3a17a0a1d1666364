//! Fock realization of the subalgebra generated by `β, ∂γ, b, c`, with its
//! Hermitian form.
//!
//! Bosonic modes are weight-adapted: `β_n = β_(n)` and `γ_n = γ_(n-1)`, so
//! that `[β_m, γ_n] = δ_{m+n,0}`. Fermionic modes keep field indexing,
//! `{b_m, c_n} = δ_{m+n,-1}`. The form is fixed by `(|0⟩, |0⟩) = 1` and
//!
//! ```text
//! β_n† = n γ_{-n}        (that is, β_(n)† = (∂γ)_(-n))
//! γ_n† = -β_{-n} / n     (n ≠ 0)
//! b_n† = c_{-n-1},  c_n† = b_{-n-1}
//! ```
//!
//! The zero modes `β_0`, `γ_0` act by zero on the subalgebra and have no adjoint.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::leading_minors;
use crate::rational::{fmt_rational, frac, int, Rational};
use crate::vertex::{word_twice_tilde_weight, Engine, Kind, Letter, SectionSet, State};

/// A mode in the weight-adapted indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub kind: Kind,
    pub index: u32,
    pub n: i64,
}

impl Mode {
    pub fn new(kind: Kind, index: u32, n: i64) -> Self {
        Mode { kind, index, n }
    }

    /// The same operator in field indexing.
    pub fn field_index(&self) -> i64 {
        match self.kind {
            Kind::Gamma => self.n - 1,
            _ => self.n,
        }
    }

    fn of_letter(l: &Letter) -> Mode {
        let field = -(l.k as i64) - 1;
        let n = if l.kind == Kind::Gamma { field + 1 } else { field };
        Mode::new(l.kind, l.index, n)
    }

    /// `(coefficient, mode)` with `self† = coefficient · mode`, or `None`
    /// for the bosonic zero modes.
    pub fn adjoint(&self) -> Option<(Rational, Mode)> {
        let Mode { kind, index, n } = *self;
        Some(match kind {
            Kind::Beta if n != 0 => (int(n), Mode::new(Kind::Gamma, index, -n)),
            Kind::Gamma if n != 0 => (frac(-1, 1) / int(n), Mode::new(Kind::Beta, index, -n)),
            Kind::B => (Rational::one(), Mode::new(Kind::C, index, -n - 1)),
            Kind::C => (Rational::one(), Mode::new(Kind::B, index, -n - 1)),
            _ => return None,
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}_{{{}}}", self.kind.name(), self.index, self.n)
    }
}

/// A state of the subalgebra in creation-mode form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockState {
    state: State,
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState { state: State::vacuum() }
    }

    pub fn as_state(&self) -> &State {
        &self.state
    }

    pub fn is_zero(&self) -> bool {
        self.state.is_zero()
    }

    /// Terms as sorted creation-mode monomials.
    pub fn terms(&self) -> Vec<(Vec<Mode>, Rational)> {
        self.state
            .terms()
            .iter()
            .map(|(w, c)| (w.iter().map(Mode::of_letter).collect(), c.clone()))
            .collect()
    }

    pub fn apply(&self, m: Mode) -> FockState {
        FockState { state: self.state.apply_mode(m.kind, m.index, m.field_index()) }
    }

    pub fn scale(&self, c: &Rational) -> FockState {
        FockState { state: self.state.scale(c) }
    }

    pub fn twice_weight(&self) -> Option<i64> {
        self.state.twice_tilde_weight()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (modes, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_rational(c))?;
            for m in modes {
                write!(f, " {m}")?;
            }
            write!(f, "|0>")?;
        }
        Ok(())
    }
}

/// Rewrites a state of the vertex algebra in modes; it must not involve an
/// underived `γ`.
pub fn to_modes(a: &State) -> Result<FockState> {
    for w in a.terms().keys() {
        if w.iter().any(|l| l.kind == Kind::Gamma && l.k == 0) {
            return Err(Error::OutsideBarSubalgebra);
        }
    }
    Ok(FockState { state: a.clone() })
}

/// `(A, B)`, computed by moving the creation modes of `A` across as adjoints.
pub fn herm_form(a: &FockState, b: &FockState) -> Rational {
    let mut total = Rational::zero();
    for (modes, c) in a.terms() {
        let mut rhs = b.clone();
        for m in &modes {
            let (coef, adj) = m.adjoint().expect("creation modes have adjoints");
            rhs = rhs.apply(adj).scale(&coef);
            if rhs.is_zero() {
                break;
            }
        }
        total += c * rhs.state.coefficient(&[]);
    }
    total
}

/// Creation monomials of twice-`L̃`-weight `tw` in rank `n`.
pub fn fock_basis(n: u32, tw: i64) -> Vec<FockState> {
    let mut letters = Vec::new();
    for kind in Kind::ALL {
        for index in 1..=n {
            let mut k = if kind == Kind::Gamma { 1 } else { 0 };
            loop {
                let l = Letter::new(kind, index, k);
                if l.twice_tilde_weight() > tw {
                    break;
                }
                letters.push(l);
                k += 1;
            }
        }
    }
    letters.sort();
    let mut out = Vec::new();
    fn go(letters: &[Letter], start: usize, left: i64, cur: &mut Vec<Letter>, out: &mut Vec<FockState>) {
        if left == 0 {
            out.push(FockState { state: State::from_word(cur.clone(), Rational::one()) });
            return;
        }
        for (i, &l) in letters.iter().enumerate().skip(start) {
            let w = l.twice_tilde_weight();
            if w > left || (l.kind.is_odd() && cur.last() == Some(&l)) {
                continue;
            }
            cur.push(l);
            go(letters, i, left - w, cur, out);
            cur.pop();
        }
    }
    go(&letters, 0, tw, &mut Vec::new(), &mut out);
    out
}

/// `(number of bosonic modes, fermion parity)` of a basis monomial.
pub fn sector_of(s: &FockState) -> (usize, usize) {
    let (w, _) = s.state.terms().iter().next().expect("nonzero monomial");
    let bosons = w.iter().filter(|l| !l.kind.is_odd()).count();
    (bosons, (w.len() - bosons) % 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramReport {
    pub weight: String,
    pub sector: (usize, usize),
    pub size: usize,
    pub matrix: Vec<Vec<String>>,
    pub positive_definite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minors: Option<Vec<String>>,
}

pub fn gram_of(states: &[FockState]) -> Vec<Vec<Rational>> {
    states
        .iter()
        .map(|a| states.iter().map(|b| herm_form(a, b)).collect())
        .collect()
}

pub fn is_positive_definite(m: &[Vec<Rational>]) -> bool {
    leading_minors(m).iter().all(|d| d.is_positive())
}

fn report(weight: String, sector: (usize, usize), matrix: Vec<Vec<Rational>>) -> GramReport {
    let minors = leading_minors(&matrix);
    let positive_definite = minors.iter().all(|d| d.is_positive());
    GramReport {
        weight,
        sector,
        size: matrix.len(),
        matrix: matrix.iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
        positive_definite,
        minors: (!positive_definite).then(|| minors.iter().map(fmt_rational).collect()),
    }
}

/// Gram matrices on the monomial basis, one per sector, at twice-weight `tw`.
pub fn gram_matrices(n: u32, tw: i64) -> Vec<GramReport> {
    let mut sectors: BTreeMap<(usize, usize), Vec<FockState>> = BTreeMap::new();
    for s in fock_basis(n, tw) {
        sectors.entry(sector_of(&s)).or_default().push(s);
    }
    let weight = fmt_rational(&frac(tw, 2));
    sectors
        .into_par_iter()
        .map(|(sector, basis)| report(weight.clone(), sector, gram_of(&basis)))
        .collect()
}

/// Gram matrix of a maximal independent family of normally ordered words in
/// the eight sections at twice-weight `tw`.
pub fn section_gram(engine: &Engine, sections: &SectionSet, tw: i64) -> Result<GramReport> {
    let span = crate::vertex::StrongSpan::of_sections(engine, sections);
    let mut chosen: Vec<FockState> = Vec::new();
    let mut echelon = crate::linalg::Echelon::new();
    let mut columns = std::collections::HashMap::new();
    for w in span.words(tw) {
        let s = span.word_state(&w);
        let v = s
            .terms()
            .iter()
            .map(|(word, c)| {
                let next = columns.len();
                (*columns.entry(word.clone()).or_insert(next), c.clone())
            })
            .collect();
        if echelon.insert(v) {
            chosen.push(to_modes(&s)?);
        }
    }
    Ok(report(fmt_rational(&frac(tw, 2)), (0, (tw % 2) as usize), gram_of(&chosen)))
}

/// `n ↦ shift` for an adjoint rule: `a·n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    pub fn at(&self, n: i64) -> i64 {
        self.a * n + self.b
    }

    /// Parses expressions such as `-n+1`, `2-n`, `n`, `-n`.
    pub fn parse(s: &str) -> Result<Affine> {
        let bad = || Error::Parse(format!("bad mode expression {s:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut out = Affine { a: 0, b: 0 };
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if let Some(coef) = term.strip_suffix('n') {
                let c = if coef.is_empty() { 1 } else { coef.trim_end_matches('*').parse::<i64>().map_err(|_| bad())? };
                out.a += sign * c;
            } else {
                out.b += sign * term.parse::<i64>().map_err(|_| bad())?;
            }
        }
        Ok(out)
    }
}

/// One term `coef(n) · Y_(shift(n))` of a claimed adjoint `X_(n)*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointTerm {
    pub target: String,
    pub shift: Affine,
    /// `coef(n) = c0 + c1·n`.
    pub coef: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointRule {
    pub field: String,
    pub terms: Vec<AdjointTerm>,
}

fn term(target: &str, a: i64, b: i64, c0: Rational, c1: Rational) -> AdjointTerm {
    AdjointTerm { target: target.into(), shift: Affine { a, b }, coef: (c0, c1) }
}

/// The adjoint relations for `Q, G, J, L, D, E` and `L̃` in rank `n`.
pub fn standard_rules(n: usize) -> Vec<AdjointRule> {
    let one = Rational::one;
    let zero = Rational::zero;
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { int(1) } else { int(-1) };
    let nn = n as i64;
    vec![
        AdjointRule { field: "Q".into(), terms: vec![term("G", -1, 1, one(), zero())] },
        AdjointRule { field: "G".into(), terms: vec![term("Q", -1, 1, one(), zero())] },
        AdjointRule { field: "J".into(), terms: vec![term("J", -1, 0, one(), zero())] },
        AdjointRule {
            field: "L".into(),
            // L_(-n+2) - (n-1) J_(-n+1)
            terms: vec![term("L", -1, 2, one(), zero()), term("J", -1, 1, one(), -one())],
        },
        AdjointRule { field: "D".into(), terms: vec![term("E", -1, nn - 2, sign.clone(), zero())] },
        AdjointRule { field: "E".into(), terms: vec![term("D", -1, nn - 2, sign, zero())] },
        AdjointRule { field: "Ltilde".into(), terms: vec![term("Ltilde", -1, 2, one(), zero())] },
    ]
}

/// Replaces the shift of every term of the rule for `field`, as in `Q:-n`.
pub fn override_rule(rules: &mut [AdjointRule], spec: &str) -> Result<()> {
    let (field, expr) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("rule {spec:?} is not FIELD:EXPR")))?;
    let shift = Affine::parse(expr)?;
    let rule = rules
        .iter_mut()
        .find(|r| r.field == field.trim())
        .ok_or_else(|| Error::UnknownFamily(field.trim().to_string()))?;
    for t in &mut rule.terms {
        t.shift = shift;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjointWitness {
    pub n: i64,
    pub left: String,
    pub right: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjointReport {
    pub field: String,
    pub pairs_checked: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AdjointWitness>,
}

/// Checks `(X_(n)A, B) = (A, X*_(n) B)` for all basis monomials of weight at
/// most `max_twice_weight / 2` and every `n` that can connect two of them.
pub fn adjoint_check(
    engine: &Engine,
    sections: &SectionSet,
    rule: &AdjointRule,
    max_twice_weight: i64,
) -> Result<AdjointReport> {
    let x = sections
        .get(&rule.field)
        .ok_or_else(|| Error::UnknownFamily(rule.field.clone()))?;
    let xw = x.twice_tilde_weight().expect("sections are homogeneous");
    let basis: Vec<FockState> = (0..=max_twice_weight).flat_map(|tw| fock_basis(sections.n as u32, tw)).collect();
    let apply = |y: &State, n: i64, s: &FockState| -> Result<FockState> {
        to_modes(&engine.nth_product(y, n, s.as_state()))
    };
    let lo = (xw - max_twice_weight) / 2 - 2;
    let hi = (xw + max_twice_weight) / 2 + 1;
    let mut pairs = 0;
    for n in lo..=hi {
        let left: Vec<FockState> = basis.iter().map(|a| apply(x, n, a)).collect::<Result<_>>()?;
        let mut right = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut acc = FockState::default();
            for t in &rule.terms {
                let c = &t.coef.0 + &t.coef.1 * int(n);
                if c.is_zero() {
                    continue;
                }
                let y = sections.get(&t.target).ok_or_else(|| Error::UnknownFamily(t.target.clone()))?;
                let img = apply(y, t.shift.at(n), b)?;
                acc = FockState { state: &acc.state + &img.state.scale(&c) };
            }
            right.push(acc);
        }
        for (a, xa) in basis.iter().zip(&left) {
            for (b, xb) in basis.iter().zip(&right) {
                let lhs = herm_form(xa, b);
                let rhs = herm_form(a, xb);
                pairs += 1;
                if lhs != rhs {
                    let witness = AdjointWitness {
                        n,
                        left: a.to_string(),
                        right: b.to_string(),
                        lhs: fmt_rational(&lhs),
                        rhs: fmt_rational(&rhs),
                    };
                    return Ok(AdjointReport { field: rule.field.clone(), pairs_checked: pairs, holds: false, witness: Some(witness) });
                }
            }
        }
    }
    Ok(AdjointReport { field: rule.field.clone(), pairs_checked: pairs, holds: true, witness: None })
}

/// Twice the weight of a basis monomial.
pub fn twice_weight_of_word(w: &[Letter]) -> i64 {
    word_twice_tilde_weight(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::standard_sections;

    #[test]
    fn generator_modes() {
        let b = to_modes(&State::generator(Kind::Beta, 1)).unwrap();
        assert_eq!(b.terms(), vec![(vec![Mode::new(Kind::Beta, 1, -1)], int(1))]);
        let db = to_modes(&State::derivative_of(Kind::Beta, 1, 1)).unwrap();
        assert_eq!(db.terms(), vec![(vec![Mode::new(Kind::Beta, 1, -2)], int(1))]);
        let dg = to_modes(&State::derivative_of(Kind::Gamma, 1, 1)).unwrap();
        assert_eq!(dg.terms(), vec![(vec![Mode::new(Kind::Gamma, 1, -1)], int(1))]);
        assert_eq!(to_modes(&State::generator(Kind::Gamma, 1)), Err(Error::OutsideBarSubalgebra));
    }

    #[test]
    fn small_values() {
        let vac = FockState::vacuum();
        assert_eq!(herm_form(&vac, &vac), int(1));
        let beta = to_modes(&State::generator(Kind::Beta, 1)).unwrap();
        let b = to_modes(&State::generator(Kind::B, 1)).unwrap();
        assert_eq!(herm_form(&beta, &beta), int(1));
        assert_eq!(herm_form(&beta, &b), int(0));
        let d2b = to_modes(&State::derivative_of(Kind::Beta, 1, 1)).unwrap();
        assert_eq!(herm_form(&d2b, &d2b), int(2));
    }

    #[test]
    fn weight_zero_is_the_vacuum() {
        assert_eq!(fock_basis(2, 0), vec![FockState::vacuum()]);
        assert_eq!(fock_basis(2, 1).len(), 4);
        let reports = gram_matrices(2, 0);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].matrix, vec![vec!["1".to_string()]]);
    }

    #[test]
    fn affine_parse() {
        assert_eq!(Affine::parse("-n+1").unwrap(), Affine { a: -1, b: 1 });
        assert_eq!(Affine::parse("2 - n").unwrap(), Affine { a: -1, b: 2 });
        assert_eq!(Affine::parse("n").unwrap(), Affine { a: 1, b: 0 });
        assert_eq!(Affine::parse("-2n").unwrap(), Affine { a: -2, b: 0 });
        assert!(Affine::parse("x").is_err());
    }

    #[test]
    fn j_rule_holds_at_low_weight() {
        let e = Engine::new();
        let s = standard_sections(2, &e);
        let rules = standard_rules(2);
        let j = rules.iter().find(|r| r.field == "J").unwrap();
        assert!(adjoint_check(&e, &s, j, 2).unwrap().holds);
    }
}
