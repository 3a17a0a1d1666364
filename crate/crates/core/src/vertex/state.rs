//! States of the βγ–bc system as polynomials in creation modes.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, fmt_rational, int, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Beta,
    Gamma,
    B,
    C,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Beta, Kind::Gamma, Kind::B, Kind::C];

    pub fn is_odd(self) -> bool {
        matches!(self, Kind::B | Kind::C)
    }

    /// The partner with a nonzero simple pole.
    pub fn conjugate(self) -> Kind {
        match self {
            Kind::Beta => Kind::Gamma,
            Kind::Gamma => Kind::Beta,
            Kind::B => Kind::C,
            Kind::C => Kind::B,
        }
    }

    /// `[x_(m), y_(-m-1)]` for `y` the conjugate of `x`.
    pub fn pairing(self) -> i64 {
        match self {
            Kind::Gamma => -1,
            _ => 1,
        }
    }

    /// Conformal weight under `L`.
    pub fn weight(self) -> i64 {
        match self {
            Kind::Beta | Kind::B => 1,
            Kind::Gamma | Kind::C => 0,
        }
    }

    /// Twice the conformal weight under `L̃ = L - ½∂J`.
    pub fn twice_tilde_weight(self) -> i64 {
        match self {
            Kind::Beta => 2,
            Kind::Gamma => 0,
            Kind::B | Kind::C => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Beta => "beta",
            Kind::Gamma => "gamma",
            Kind::B => "b",
            Kind::C => "c",
        }
    }
}

/// The creation mode `x_(-k-1)`, i.e. the state `∂^k x / k!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub kind: Kind,
    pub index: u32,
    pub k: u32,
}

impl Letter {
    pub fn new(kind: Kind, index: u32, k: u32) -> Self {
        Letter { kind, index, k }
    }

    pub fn weight(&self) -> i64 {
        self.kind.weight() + self.k as i64
    }

    pub fn twice_tilde_weight(&self) -> i64 {
        self.kind.twice_tilde_weight() + 2 * self.k as i64
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => write!(f, "{}{}", self.kind.name(), self.index),
            k => write!(f, "d{}({}{})", k, self.kind.name(), self.index),
        }
    }
}

/// Sorted product of creation modes applied to the vacuum.
pub type Word = Vec<Letter>;

pub fn word_weight(w: &[Letter]) -> i64 {
    w.iter().map(Letter::weight).sum()
}

pub fn word_twice_tilde_weight(w: &[Letter]) -> i64 {
    w.iter().map(Letter::twice_tilde_weight).sum()
}

pub fn word_is_odd(w: &[Letter]) -> bool {
    w.iter().filter(|l| l.kind.is_odd()).count() % 2 == 1
}

/// Puts the creation mode `x` in front of `w`; `None` if an odd mode repeats.
pub fn create(x: Letter, w: &[Letter]) -> Option<(bool, Word)> {
    let pos = w.partition_point(|l| *l < x);
    if x.kind.is_odd() && w.get(pos) == Some(&x) {
        return None;
    }
    let negative = x.kind.is_odd() && w[..pos].iter().filter(|l| l.kind.is_odd()).count() % 2 == 1;
    let mut out = Vec::with_capacity(w.len() + 1);
    out.extend_from_slice(&w[..pos]);
    out.push(x);
    out.extend_from_slice(&w[pos..]);
    Some((negative, out))
}

/// Commutes the annihilation mode dual to `target` through `w`: the terms
/// `(coefficient, word)` of the (super)derivative with respect to `target`.
pub fn annihilate(target: Letter, w: &[Letter]) -> Option<(Rational, Word)> {
    let pos = w.iter().position(|l| *l == target)?;
    let count = w[pos..].iter().take_while(|l| **l == target).count();
    let mut c = int(count as i64);
    if target.kind.is_odd() && w[..pos].iter().filter(|l| l.kind.is_odd()).count() % 2 == 1 {
        c = -c;
    }
    let mut out = w.to_vec();
    out.remove(pos);
    Some((c, out))
}

/// A finite combination of words with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct State {
    terms: BTreeMap<Word, Rational>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::from_word(Vec::new(), Rational::one())
    }

    pub fn from_word(w: Word, c: Rational) -> Self {
        let mut s = State::zero();
        s.add_term(w, c);
        s
    }

    /// The generator `x^i`.
    pub fn generator(kind: Kind, index: u32) -> Self {
        State::derivative_of(kind, index, 0)
    }

    /// `∂^k x^i`.
    pub fn derivative_of(kind: Kind, index: u32, k: u32) -> Self {
        State::from_word(vec![Letter::new(kind, index, k)], factorial(k))
    }

    /// The normally ordered product `:∂^{k₁}x₁ ⋯ ∂^{k_r}x_r:` of the given
    /// `(kind, index, k)` factors, in the given order.
    pub fn normal_product(factors: &[(Kind, u32, u32)]) -> Self {
        let mut s = State::vacuum();
        for &(kind, index, k) in factors.iter().rev() {
            s = s.create(Letter::new(kind, index, k)).scale(&factorial(k));
        }
        s
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[Letter]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> State {
        let mut out = State::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies the creation mode `x` (a left multiplication).
    pub fn create(&self, x: Letter) -> State {
        let mut out = State::zero();
        for (w, c) in &self.terms {
            if let Some((neg, w2)) = create(x, w) {
                out.add_term(w2, if neg { -c } else { c.clone() });
            }
        }
        out
    }

    /// Applies the mode `x_(m)` of a generator field.
    pub fn apply_mode(&self, kind: Kind, index: u32, m: i64) -> State {
        if m < 0 {
            return self.create(Letter::new(kind, index, (-m - 1) as u32));
        }
        let target = Letter::new(kind.conjugate(), index, m as u32);
        let pairing = int(kind.pairing());
        let mut out = State::zero();
        for (w, c) in &self.terms {
            if let Some((d, w2)) = annihilate(target, w) {
                out.add_term(w2, c * d * &pairing);
            }
        }
        out
    }

    /// Weight under `L` if homogeneous.
    pub fn weight(&self) -> Option<i64> {
        homogeneous(self.terms.keys().map(|w| word_weight(w)))
    }

    /// Twice the `L̃`-weight if homogeneous.
    pub fn twice_tilde_weight(&self) -> Option<i64> {
        homogeneous(self.terms.keys().map(|w| word_twice_tilde_weight(w)))
    }

    /// `Some(true)` for odd, `Some(false)` for even, `None` if mixed or zero.
    pub fn parity(&self) -> Option<bool> {
        homogeneous(self.terms.keys().map(|w| word_is_odd(w)))
    }

    pub fn max_index(&self) -> u32 {
        self.terms.keys().flatten().map(|l| l.index).max().unwrap_or(0)
    }
}

fn homogeneous<T: PartialEq>(mut it: impl Iterator<Item = T>) -> Option<T> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

impl Add for &State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &State {
    type Output = State;
    fn neg(self) -> State {
        self.scale(&-Rational::one())
    }
}

impl Mul<&State> for &Rational {
    type Output = State;
    fn mul(self, rhs: &State) -> State {
        rhs.scale(self)
    }
}

/// Coefficient of a word when written with `∂^k x` factors instead of modes.
fn derivative_form_coefficient(w: &[Letter], c: &Rational) -> Rational {
    w.iter().fold(c.clone(), |acc, l| acc / factorial(l.k))
}

fn fmt_word(w: &[Letter]) -> String {
    match w.len() {
        0 => "1".to_string(),
        1 => w[0].to_string(),
        _ => {
            let inner: Vec<String> = w.iter().map(Letter::to_string).collect();
            format!(":{}:", inner.join(" "))
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = derivative_form_coefficient(w, c);
            if w.is_empty() {
                write!(f, "{}", fmt_rational(&c))?;
            } else {
                write!(f, "{} * {}", fmt_rational(&c), fmt_word(w))?;
            }
        }
        Ok(())
    }
}

fn parse_letter(tok: &str) -> Result<(Kind, u32, u32)> {
    let bad = || Error::Parse(format!("bad letter {tok:?}"));
    let (k, inner) = match tok.strip_prefix('d') {
        Some(rest) if rest.contains('(') => {
            let open = rest.find('(').ok_or_else(bad)?;
            let k = rest[..open].parse::<u32>().map_err(|_| bad())?;
            let inner = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            (k, inner)
        }
        _ => (0, tok),
    };
    let split = inner.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let kind = Kind::ALL
        .into_iter()
        .find(|k| k.name() == &inner[..split])
        .ok_or_else(bad)?;
    let index = inner[split..].parse::<u32>().map_err(|_| bad())?;
    if index == 0 {
        return Err(bad());
    }
    Ok((kind, index, k))
}

/// Parses the output of `Display`: `c * :d2(beta1) b2: + c' * gamma1 + c''`.
pub fn parse_state(s: &str) -> Result<State> {
    let s = s.trim();
    let mut out = State::zero();
    if s == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let (c, word) = match term.split_once(" * ") {
            Some((c, w)) => (parse_rational(c.trim())?, w.trim()),
            None => match parse_rational(term.trim()) {
                Ok(c) => (c, "1"),
                Err(_) => (Rational::one(), term.trim()),
            },
        };
        let word = word.trim_start_matches(':').trim_end_matches(':');
        let factors = if word == "1" {
            Vec::new()
        } else {
            word.split_whitespace().map(parse_letter).collect::<Result<Vec<_>>>()?
        };
        out.add_scaled(&State::normal_product(&factors), &c);
    }
    Ok(out)
}
