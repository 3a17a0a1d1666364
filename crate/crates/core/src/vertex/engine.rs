//! n-th products in the βγ–bc system.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use super::state::{create, word_is_odd, word_weight, Letter, State, Word};
use crate::rational::{binomial, int, Rational};

type MemoKey = (Word, i64, Word);

/// Computes `a_(n) b`. Products of words are cached unless memoization is
/// switched off; both settings give identical results.
#[derive(Debug, Default)]
pub struct Engine {
    memo: Option<Mutex<HashMap<MemoKey, State>>>,
}

impl Engine {
    pub fn new() -> Self {
        Engine { memo: Some(Mutex::new(HashMap::new())) }
    }

    pub fn without_memo() -> Self {
        Engine { memo: None }
    }

    pub fn memo_size(&self) -> usize {
        self.memo.as_ref().map_or(0, |m| m.lock().unwrap().len())
    }

    pub fn nth_product(&self, a: &State, n: i64, b: &State) -> State {
        let mut out = State::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_scaled(&self.word_product(wa, n, wb), &(ca * cb));
            }
        }
        out
    }

    /// The nonzero `(n, a_(n) b)` for `n ≥ 0`.
    pub fn lambda_bracket(&self, a: &State, b: &State) -> Vec<(i64, State)> {
        let top = max_weight(a) + max_weight(b) - 1;
        (0..=top)
            .map(|n| (n, self.nth_product(a, n, b)))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    /// `:a b:`, the (-1)-st product.
    pub fn normal_order(&self, a: &State, b: &State) -> State {
        self.nth_product(a, -1, b)
    }

    fn word_product(&self, a: &[Letter], n: i64, c: &[Letter]) -> State {
        if a.is_empty() {
            return if n == -1 { State::from_word(c.to_vec(), Rational::one()) } else { State::zero() };
        }
        if n > word_weight(a) + word_weight(c) - 1 {
            return State::zero();
        }
        let key = (a.to_vec(), n, c.to_vec());
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.lock().unwrap().get(&key) {
                return hit.clone();
            }
        }
        let out = self.expand(a, n, c);
        if let Some(memo) = &self.memo {
            memo.lock().unwrap().insert(key, out.clone());
        }
        out
    }

    // (x_(p) a')_(n) c = Σ_j (-1)^j C(p,j) [x_(p-j) a'_(n+j) c - (-1)^p (-1)^{|x||a'|} a'_(p+n-j) x_(j) c]
    fn expand(&self, a: &[Letter], n: i64, c: &[Letter]) -> State {
        let x = a[0];
        let rest = &a[1..];
        let k = x.k as i64;
        let target = State::from_word(c.to_vec(), Rational::one());
        if rest.is_empty() {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            return target.apply_mode(x.kind, x.index, n - k).scale(&(sign * binomial(n, x.k)));
        }
        let p = -k - 1;
        let mut out = State::zero();
        let bound = word_weight(rest) + word_weight(c) - 1;
        for j in 0..=(bound - n).max(-1) {
            let inner = self.word_product(rest, n + j, c);
            if inner.is_zero() {
                continue;
            }
            let coef = alternating(j) * binomial(p, j as u32);
            out.add_scaled(&inner.apply_mode(x.kind, x.index, p - j), &coef);
        }
        let swap_odd = x.kind.is_odd() && word_is_odd(rest);
        let outer_sign = if (p % 2 != 0) != swap_odd { int(1) } else { int(-1) };
        let partner = x.kind.conjugate();
        let js: BTreeSet<i64> = c
            .iter()
            .filter(|l| l.kind == partner && l.index == x.index)
            .map(|l| l.k as i64)
            .collect();
        for j in js {
            let coef = &outer_sign * alternating(j) * binomial(p, j as u32);
            for (w, cw) in target.apply_mode(x.kind, x.index, j).terms() {
                out.add_scaled(&self.word_product(rest, p + n - j, w), &(&coef * cw));
            }
        }
        out
    }

    /// The translation operator `T`, with `T x_(-k-1) = (k+1) x_(-k-2)`.
    pub fn derivative(&self, a: &State) -> State {
        derivative(a)
    }
}

fn alternating(j: i64) -> Rational {
    if j % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn max_weight(a: &State) -> i64 {
    a.terms().keys().map(|w| word_weight(w)).max().unwrap_or(0)
}

/// Rebuilds a word from letters in arbitrary order, tracking Koszul signs.
pub fn canonical(letters: &[Letter]) -> Option<(bool, Word)> {
    let mut negative = false;
    let mut w = Vec::new();
    for &l in letters.iter().rev() {
        let (neg, w2) = create(l, &w)?;
        negative ^= neg;
        w = w2;
    }
    Some((negative, w))
}

pub fn derivative(a: &State) -> State {
    let mut out = State::zero();
    for (w, c) in a.terms() {
        for i in 0..w.len() {
            let mut letters = w.clone();
            letters[i].k += 1;
            if let Some((neg, w2)) = canonical(&letters) {
                let d = c * int(w[i].k as i64 + 1);
                out.add_term(w2, if neg { -d } else { d });
            }
        }
    }
    out
}

/// `∂^j a / j!`.
pub fn divided_derivative(a: &State, j: u32) -> State {
    let mut out = a.clone();
    for _ in 0..j {
        out = derivative(&out);
    }
    out.scale(&(Rational::one() / crate::rational::factorial(j)))
}

#[allow(dead_code)]
fn _zero() -> Rational {
    Rational::zero()
}
