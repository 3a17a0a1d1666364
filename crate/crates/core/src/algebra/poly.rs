use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::alphabet::{Alphabet, Parity, Variable};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};

/// Sorted product of variables with exponents; odd variables have exponent 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs already in canonical order.
    pub fn from_sorted(factors: Vec<(Variable, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_odd(&self, alphabet: &Alphabet) -> bool {
        self.odd_count(alphabet) % 2 == 1
    }

    fn odd_count(&self, alphabet: &Alphabet) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| alphabet.parity(v).is_odd())
            .map(|(_, e)| e)
            .sum()
    }

    pub fn weight(&self, alphabet: &Alphabet) -> i64 {
        self.0.iter().map(|(v, e)| alphabet.weight(v) * *e as i64).sum()
    }

    /// Product `self · other` in canonical form with its Koszul sign, or
    /// `None` when an odd variable repeats.
    pub fn mul(&self, other: &Monomial, alphabet: &Alphabet) -> Option<(bool, Monomial)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut negative = false;
        // odd factors of `self` not yet emitted; each odd factor of `other`
        // that is emitted first has to pass all of them.
        let mut pending_odd = self.odd_count(alphabet);
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => {
                    if a.0 == b.0 {
                        if alphabet.parity(&a.0).is_odd() {
                            return None;
                        }
                        out.push((a.0, a.1 + b.1));
                        i += 1;
                        j += 1;
                        continue;
                    }
                    a.0 < b.0
                }
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                let a = self.0[i];
                if alphabet.parity(&a.0).is_odd() {
                    pending_odd -= 1;
                }
                out.push(a);
                i += 1;
            } else {
                let b = other.0[j];
                if alphabet.parity(&b.0).is_odd() && pending_odd % 2 == 1 {
                    negative = !negative;
                }
                out.push(b);
                j += 1;
            }
        }
        Some((negative, Monomial(out)))
    }
}

/// The grade of a homogeneous element: degree in every family, plus weight.
/// As a piece selector, families missing from `degrees` are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub degrees: BTreeMap<String, u32>,
    pub weight: i64,
}

impl Grade {
    pub fn weight(weight: i64) -> Self {
        Grade { degrees: BTreeMap::new(), weight }
    }

    pub fn with(mut self, family: &str, degree: u32) -> Self {
        self.degrees.insert(family.to_string(), degree);
        self
    }

    pub fn of_monomial(m: &Monomial, alphabet: &Alphabet) -> Self {
        let mut degrees: BTreeMap<String, u32> =
            alphabet.families().iter().map(|f| (f.name.clone(), 0)).collect();
        for (v, e) in m.factors() {
            *degrees.get_mut(&alphabet.family(v.family).name).unwrap() += e;
        }
        Grade { degrees, weight: m.weight(alphabet) }
    }

    /// Whether a fully specified grade falls in the piece selected by `self`.
    pub fn selects(&self, full: &Grade) -> bool {
        self.weight == full.weight
            && self
                .degrees
                .iter()
                .all(|(f, d)| full.degrees.get(f).copied().unwrap_or(0) == *d)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (name, d) in &self.degrees {
            write!(f, "{name}={d}, ")?;
        }
        write!(f, "weight={})", self.weight)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradeOf {
    Zero,
    Homogeneous(Grade),
    Inhomogeneous,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        Poly { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alphabet: &Arc<Alphabet>) -> Self {
        Self::monomial(alphabet, Monomial::one(), Rational::one())
    }

    pub fn constant(alphabet: &Arc<Alphabet>, c: Rational) -> Self {
        Self::monomial(alphabet, Monomial::one(), c)
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(alphabet);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(alphabet: &Arc<Alphabet>, v: Variable) -> Self {
        Self::monomial(alphabet, Monomial::var(v), Rational::one())
    }

    /// Convenience for `name_index^(level)`; panics on an unknown variable.
    pub fn v(alphabet: &Arc<Alphabet>, family: &str, index: u32, level: u32) -> Self {
        Self::var(alphabet, alphabet.var(family, index, level).expect("variable in alphabet"))
    }

    /// Product of variables in the given order, with Koszul signs.
    pub fn product_of(alphabet: &Arc<Alphabet>, vars: &[Variable]) -> Self {
        vars.iter().fold(Self::one(alphabet), |acc, v| &acc * &Self::var(alphabet, *v))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn same_alphabet(&self, other: &Poly) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Poly::zero(&self.alphabet);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((neg, m)) = a.mul(b, &self.alphabet) {
                    let c = x * y;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.alphabet);
        }
        Poly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Parity of a homogeneous-parity element; `None` for zero or mixed parity.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.is_odd(&self.alphabet));
        let first = it.next()?;
        it.all(|p| p == first)
            .then_some(if first { Parity::Odd } else { Parity::Even })
    }

    /// Maximum effective jet degree among the variables that occur.
    pub fn max_jet_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| self.alphabet.jet_degree(v)))
            .max()
            .unwrap_or(0)
    }
}

pub fn grade_of(a: &Poly) -> GradeOf {
    let mut grades = a.terms.keys().map(|m| Grade::of_monomial(m, &a.alphabet));
    let Some(first) = grades.next() else {
        return GradeOf::Zero;
    };
    if grades.all(|g| g == first) {
        GradeOf::Homogeneous(first)
    } else {
        GradeOf::Inhomogeneous
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_rational(c))?;
            if !m.is_one() {
                write!(f, " *")?;
                for (v, e) in m.factors() {
                    for _ in 0..*e {
                        write!(f, " {}", self.alphabet.show(v))?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("alphabet mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("alphabet mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("alphabet mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}
