//! The eight sections `Q, L, J, G, D, E, B, C` and checks built on them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::Serialize;

use super::engine::{canonical, derivative, Engine};
use super::state::{Kind, Letter, State, Word};
use crate::algebra::{Alphabet, Poly};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::matrix::Mat;
use crate::rational::{factorial, fmt_rational, frac, int, Rational};

pub const SECTION_NAMES: [&str; 8] = ["Q", "L", "J", "G", "D", "E", "B", "C"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSet {
    pub n: usize,
    pub q: State,
    pub l: State,
    pub j: State,
    pub g: State,
    pub d: State,
    pub e: State,
    pub b: State,
    pub c: State,
    pub ltilde: State,
}

impl SectionSet {
    /// The eight sections in the order of [`SECTION_NAMES`].
    pub fn named(&self) -> [(&'static str, &State); 8] {
        [
            ("Q", &self.q),
            ("L", &self.l),
            ("J", &self.j),
            ("G", &self.g),
            ("D", &self.d),
            ("E", &self.e),
            ("B", &self.b),
            ("C", &self.c),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&State> {
        match name {
            "Ltilde" => Some(&self.ltilde),
            _ => self.named().into_iter().find(|(k, _)| *k == name).map(|(_, s)| s),
        }
    }
}

fn sum_over(n: u32, f: impl Fn(u32) -> State) -> State {
    (1..=n).fold(State::zero(), |acc, i| &acc + &f(i))
}

/// The sections over the flat frame, with `B = Q_(0)D`, `C = G_(0)E` and
/// `L̃ = L - ½∂J` computed by the engine.
pub fn standard_sections(n: usize, engine: &Engine) -> SectionSet {
    assert!(n >= 1, "rank must be positive");
    let rank = n as u32;
    use Kind::*;
    let q = sum_over(rank, |i| State::normal_product(&[(Beta, i, 0), (C, i, 0)]));
    let l = sum_over(rank, |i| {
        &State::normal_product(&[(Beta, i, 0), (Gamma, i, 1)])
            - &State::normal_product(&[(B, i, 0), (C, i, 1)])
    });
    let j = -&sum_over(rank, |i| State::normal_product(&[(B, i, 0), (C, i, 0)]));
    let g = sum_over(rank, |i| State::normal_product(&[(B, i, 0), (Gamma, i, 1)]));
    let d = State::normal_product(&(1..=rank).map(|i| (B, i, 0)).collect::<Vec<_>>());
    let e = State::normal_product(&(1..=rank).map(|i| (C, i, 0)).collect::<Vec<_>>());
    let b = engine.nth_product(&q, 0, &d);
    let c = engine.nth_product(&g, 0, &e);
    let ltilde = &l - &derivative(&j).scale(&frac(1, 2));
    SectionSet { n, q, l, j, g, d, e, b, c, ltilde }
}

/// The central charge when `[cand_λ cand] = (∂ + 2λ) cand + (c/12) λ³`.
pub fn virasoro_central_charge(engine: &Engine, cand: &State) -> Option<Rational> {
    let products: BTreeMap<i64, State> = engine.lambda_bracket(cand, cand).into_iter().collect();
    let get = |n: i64| products.get(&n).cloned().unwrap_or_default();
    if products.keys().any(|&n| n > 3)
        || get(0) != derivative(cand)
        || get(1) != cand.scale(&int(2))
        || !get(2).is_zero()
    {
        return None;
    }
    let top = get(3);
    let vac: Word = Vec::new();
    if top.terms().keys().any(|w| *w != vac) {
        return None;
    }
    Some(top.coefficient(&vac) * int(2))
}

/// The eigenvalue of `ltilde_(1)` on `a`, if `a` is an eigenvector.
pub fn weight_of(engine: &Engine, ltilde: &State, a: &State) -> Option<Rational> {
    let image = engine.nth_product(ltilde, 1, a);
    let (w, c) = a.terms().iter().next()?;
    let h = image.coefficient(w) / c;
    (image == a.scale(&h)).then_some(h)
}

/// Zero mode of the `gl_N` action: `β, b` transform in the fundamental,
/// `γ, c` in its dual, extended as an even derivation.
pub fn zero_mode_lie_action(g: &Mat, a: &State) -> State {
    let mut out = State::zero();
    for (w, c) in a.terms() {
        for pos in 0..w.len() {
            let l = w[pos];
            let i = l.index as usize - 1;
            for row in 0..g.rows() {
                let coef = match l.kind {
                    Kind::Beta | Kind::B => g[(row, i)].clone(),
                    Kind::Gamma | Kind::C => -g[(i, row)].clone(),
                };
                if coef.is_zero() {
                    continue;
                }
                let mut letters = w.clone();
                letters[pos] = Letter::new(l.kind, row as u32 + 1, l.k);
                if let Some((neg, w2)) = canonical(&letters) {
                    let v = c * coef;
                    out.add_term(w2, if neg { -v } else { v });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolImage {
    pub n: u32,
    pub s: u32,
    pub image: String,
    #[serde(skip)]
    pub poly: Poly,
}

/// Leading symbol for the filtrations by the number of `β, b` and of `β`,
/// transcribed into the commutative fibre ring.
pub fn symbol_map(a: &State, fibre: &Arc<Alphabet>) -> Result<SymbolImage> {
    let count = |w: &Word, kinds: &[Kind]| w.iter().filter(|l| kinds.contains(&l.kind)).count() as u32;
    let n = a.terms().keys().map(|w| count(w, &[Kind::Beta, Kind::B])).max().unwrap_or(0);
    let s = a
        .terms()
        .keys()
        .filter(|w| count(w, &[Kind::Beta, Kind::B]) == n)
        .map(|w| count(w, &[Kind::Beta]))
        .max()
        .unwrap_or(0);
    let mut poly = Poly::zero(fibre);
    for (w, c) in a.terms() {
        if count(w, &[Kind::Beta, Kind::B]) != n || count(w, &[Kind::Beta]) != s {
            continue;
        }
        let mut term = Poly::constant(fibre, c.clone());
        for l in w {
            if l.kind == Kind::Gamma && l.k == 0 {
                return Err(Error::UnknownVariable(format!("underived {l} has no symbol")));
            }
            let var = fibre.var(l.kind.name(), l.index, l.k)?;
            let letter = Poly::var(fibre, var).scale(&(Rational::one() / factorial(l.k)));
            term = term.try_mul(&letter)?;
        }
        poly = poly.try_add(&term)?;
    }
    Ok(SymbolImage { n, s, image: poly.to_string(), poly })
}

/// A product `:∂^{a₁}F₁ (∂^{a₂}F₂ (⋯)):` of named fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldWord(pub Vec<(usize, u32)>);

struct WeightSpan {
    words: Vec<FieldWord>,
    columns: HashMap<Word, usize>,
    echelon: Echelon,
    states: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanMembership {
    pub member: bool,
    pub coordinates: Vec<(String, String)>,
}

/// Normally ordered words in a family of homogeneous fields and their
/// derivatives, sliced by weight.
pub struct StrongSpan<'e> {
    engine: &'e Engine,
    names: Vec<String>,
    fields: Vec<State>,
    twice_weights: Vec<i64>,
    derivatives: Mutex<HashMap<(usize, u32), State>>,
    slices: Mutex<HashMap<i64, Arc<Mutex<WeightSpan>>>>,
}

impl<'e> StrongSpan<'e> {
    pub fn new(engine: &'e Engine, fields: &[(&str, &State)]) -> Self {
        let twice_weights = fields
            .iter()
            .map(|(name, s)| {
                let w = s.twice_tilde_weight().unwrap_or_else(|| panic!("{name} is not homogeneous"));
                assert!(w > 0, "{name} must have positive weight");
                w
            })
            .collect();
        StrongSpan {
            engine,
            names: fields.iter().map(|(n, _)| n.to_string()).collect(),
            fields: fields.iter().map(|(_, s)| (*s).clone()).collect(),
            twice_weights,
            derivatives: Mutex::new(HashMap::new()),
            slices: Mutex::new(HashMap::new()),
        }
    }

    pub fn of_sections(engine: &'e Engine, sections: &SectionSet) -> Self {
        StrongSpan::new(engine, &sections.named())
    }

    fn field_derivative(&self, i: usize, a: u32) -> State {
        if let Some(s) = self.derivatives.lock().unwrap().get(&(i, a)) {
            return s.clone();
        }
        let s = (0..a).fold(self.fields[i].clone(), |s, _| derivative(&s));
        self.derivatives.lock().unwrap().insert((i, a), s.clone());
        s
    }

    /// All words of twice-weight exactly `w`, shorter words first.
    pub fn words(&self, w: i64) -> Vec<FieldWord> {
        let mut letters: Vec<(usize, u32, i64)> = Vec::new();
        for (i, &fw) in self.twice_weights.iter().enumerate() {
            let mut a = 0;
            while fw + 2 * a as i64 <= w {
                letters.push((i, a, fw + 2 * a as i64));
                a += 1;
            }
        }
        letters.sort();
        let mut out = Vec::new();
        fn go(
            letters: &[(usize, u32, i64)],
            start: usize,
            left: i64,
            cur: &mut Vec<(usize, u32)>,
            out: &mut Vec<FieldWord>,
        ) {
            if left == 0 {
                out.push(FieldWord(cur.clone()));
                return;
            }
            for (k, &(i, a, lw)) in letters.iter().enumerate().skip(start) {
                if lw <= left {
                    cur.push((i, a));
                    go(letters, k, left - lw, cur, out);
                    cur.pop();
                }
            }
        }
        go(&letters, 0, w, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.cmp(b)));
        out
    }

    pub fn word_state(&self, word: &FieldWord) -> State {
        word.0.iter().rev().fold(State::vacuum(), |acc, &(i, a)| {
            self.engine.normal_order(&self.field_derivative(i, a), &acc)
        })
    }

    pub fn label(&self, word: &FieldWord) -> String {
        if word.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = word
            .0
            .iter()
            .map(|&(i, a)| match a {
                0 => self.names[i].clone(),
                a => format!("d{a}({})", self.names[i]),
            })
            .collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!(":{}:", parts.join(" "))
        }
    }

    fn slice(&self, w: i64) -> Arc<Mutex<WeightSpan>> {
        if let Some(s) = self.slices.lock().unwrap().get(&w) {
            return s.clone();
        }
        let words = self.words(w);
        let states: Vec<State> = words.iter().map(|x| self.word_state(x)).collect();
        let mut span = WeightSpan { words, columns: HashMap::new(), echelon: Echelon::new(), states };
        for i in 0..span.states.len() {
            let v = to_vector(&mut span.columns, &span.states[i]);
            span.echelon.insert(v);
        }
        let span = Arc::new(Mutex::new(span));
        self.slices.lock().unwrap().entry(w).or_insert(span).clone()
    }

    /// Dimension of the span at twice-weight `w`.
    pub fn rank(&self, w: i64) -> usize {
        self.slice(w).lock().unwrap().echelon.rank()
    }

    pub fn number_of_words(&self, w: i64) -> usize {
        self.slice(w).lock().unwrap().words.len()
    }

    /// Solves `target` against the words of its weight, which must not
    /// exceed `bound` (a weight, not twice a weight).
    pub fn membership(&self, target: &State, bound: &Rational) -> SpanMembership {
        let no = SpanMembership { member: false, coordinates: Vec::new() };
        if target.is_zero() {
            return SpanMembership { member: true, coordinates: Vec::new() };
        }
        let Some(w) = target.twice_tilde_weight() else { return no };
        if int(w) > bound * int(2) || w < 0 {
            return no;
        }
        let slice = self.slice(w);
        let mut span = slice.lock().unwrap();
        let before = span.columns.len();
        let v = to_vector(&mut span.columns, target);
        if span.columns.len() > before {
            span.columns.retain(|_, c| *c < before);
            return no;
        }
        match span.echelon.solve(&v) {
            None => no,
            Some(coords) => SpanMembership {
                member: true,
                coordinates: coords
                    .iter()
                    .map(|(&i, c)| (self.label(&span.words[i]), fmt_rational(c)))
                    .collect(),
            },
        }
    }

    /// Like [`membership`](Self::membership), restricted to the words
    /// accepted by `keep`.
    pub fn in_subspan(&self, target: &State, keep: impl Fn(&FieldWord) -> bool) -> bool {
        if target.is_zero() {
            return true;
        }
        let Some(w) = target.twice_tilde_weight() else { return false };
        let slice = self.slice(w);
        let span = slice.lock().unwrap();
        let mut columns = span.columns.clone();
        let mut e = Echelon::new();
        for (word, s) in span.words.iter().zip(&span.states) {
            if keep(word) {
                e.insert(to_vector(&mut columns, s));
            }
        }
        e.contains(&to_vector(&mut columns, target))
    }
}

fn to_vector(columns: &mut HashMap<Word, usize>, s: &State) -> SparseVec {
    s.terms()
        .iter()
        .map(|(w, c)| {
            let next = columns.len();
            (*columns.entry(w.clone()).or_insert(next), c.clone())
        })
        .collect()
}

/// `target ∈ span` of normally ordered words in the eight sections of weight ≤ `bound`.
pub fn strong_span_membership(
    engine: &Engine,
    sections: &SectionSet,
    target: &State,
    bound: &Rational,
) -> SpanMembership {
    StrongSpan::of_sections(engine, sections).membership(target, bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismFailure {
    pub left: String,
    pub n: i64,
    pub right: String,
}

/// Checks that scaling each section by `scales[name]` is compatible with
/// every `X_(n)Y` of weight at most `bound`: the product must lie in the span
/// of words whose scale is `scales[X]·scales[Y]`.
pub fn automorphism_check(
    engine: &Engine,
    sections: &SectionSet,
    scales: &BTreeMap<String, Rational>,
    bound: &Rational,
) -> Vec<AutomorphismFailure> {
    let named = sections.named();
    let scale = |name: &str| scales.get(name).cloned().unwrap_or_else(Rational::one);
    let span = StrongSpan::of_sections(engine, sections);
    let word_scale = |w: &FieldWord| {
        w.0.iter().fold(Rational::one(), |acc, &(i, _)| acc * scale(named[i].0))
    };
    let mut failures = Vec::new();
    for (xn, x) in named {
        for (yn, y) in named {
            let expected = scale(xn) * scale(yn);
            let wx = x.twice_tilde_weight().unwrap();
            let wy = y.twice_tilde_weight().unwrap();
            for n in 0.. {
                let w = wx + wy - 2 * (n + 1);
                if w < 0 {
                    break;
                }
                if int(w) > bound * int(2) {
                    continue;
                }
                let p = engine.nth_product(x, n, y);
                if !span.in_subspan(&p, |word| word_scale(word) == expected) {
                    failures.push(AutomorphismFailure { left: xn.into(), n, right: yn.into() });
                }
            }
        }
    }
    failures
}

/// The sign map fixing `Q, L, J, G` and negating `B, D, C, E`.
pub fn involution_scales() -> BTreeMap<String, Rational> {
    SECTION_NAMES
        .iter()
        .map(|&k| (k.to_string(), if ["B", "D", "C", "E"].contains(&k) { int(-1) } else { int(1) }))
        .collect()
}
