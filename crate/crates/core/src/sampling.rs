//! Seeded random states and the identity checks run on them.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::{binomial, int, Rational};
use crate::vertex::{canonical, derivative, divided_derivative, Engine, Kind, Letter, State};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A single word of at most `max_len` letters with derivative order at most
/// `max_k`, scaled by a small nonzero integer. Parity-homogeneous by construction.
pub fn random_word(rng: &mut impl Rng, n: u32, max_len: usize, max_k: u32) -> State {
    loop {
        let len = rng.gen_range(1..=max_len);
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let kind = Kind::ALL[rng.gen_range(0..4)];
                Letter::new(kind, rng.gen_range(1..=n), rng.gen_range(0..=max_k))
            })
            .collect();
        if let Some((neg, w)) = canonical(&letters) {
            let mut c = int(rng.gen_range(1..=3));
            if neg ^ rng.gen_bool(0.5) {
                c = -c;
            }
            return State::from_word(w, c);
        }
    }
}

fn sign(odd: bool) -> Rational {
    if odd {
        int(-1)
    } else {
        int(1)
    }
}

fn is_odd(a: &State) -> bool {
    a.parity().unwrap_or(false)
}

/// `a_(n)b + (-1)^{|a||b|} Σ_j (-1)^{n+j} ∂^j(b_(n+j)a)/j!`, which must vanish.
pub fn skew_symmetry_defect(e: &Engine, a: &State, n: i64, b: &State) -> State {
    let top = a.weight().unwrap_or(0) + b.weight().unwrap_or(0);
    let mut rhs = State::zero();
    for j in 0..=(top - n).max(0) as u32 {
        let inner = e.nth_product(b, n + j as i64, a);
        let s = sign((n + j as i64) % 2 != 0);
        rhs.add_scaled(&divided_derivative(&inner, j), &s);
    }
    &e.nth_product(a, n, b) + &rhs.scale(&sign(is_odd(a) && is_odd(b)))
}

/// `(∂a)_(n)b + n a_(n-1)b` and `∂(a_(n)b) - (∂a)_(n)b - a_(n)∂b`.
pub fn derivative_defects(e: &Engine, a: &State, n: i64, b: &State) -> (State, State) {
    let da = derivative(a);
    let first = &e.nth_product(&da, n, b) + &e.nth_product(a, n - 1, b).scale(&int(n));
    let second = &(&derivative(&e.nth_product(a, n, b)) - &e.nth_product(&da, n, b))
        - &e.nth_product(a, n, &derivative(b));
    (first, second)
}

/// `[a_(m), b_(n)]c - Σ_j C(m,j) (a_(j)b)_(m+n-j) c`.
pub fn commutator_defect(e: &Engine, a: &State, m: i64, b: &State, n: i64, c: &State) -> State {
    let ab = e.nth_product(a, m, &e.nth_product(b, n, c));
    let ba = e.nth_product(b, n, &e.nth_product(a, m, c));
    let lhs = &ab - &ba.scale(&sign(is_odd(a) && is_odd(b)));
    let mut rhs = State::zero();
    for (j, p) in e.lambda_bracket(a, b) {
        let coef = binomial(m, j as u32);
        rhs.add_scaled(&e.nth_product(&p, m + n - j, c), &coef);
    }
    &lhs - &rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_samples() {
        let mut r1 = rng(7);
        let mut r2 = rng(7);
        for _ in 0..10 {
            assert_eq!(random_word(&mut r1, 2, 3, 2), random_word(&mut r2, 2, 3, 2));
        }
    }

    #[test]
    fn identities_on_generators() {
        let e = Engine::new();
        let beta = State::generator(Kind::Beta, 1);
        let gamma = State::generator(Kind::Gamma, 1);
        assert!(skew_symmetry_defect(&e, &beta, 0, &gamma).is_zero());
        let (d1, d2) = derivative_defects(&e, &beta, 1, &gamma);
        assert!(d1.is_zero() && d2.is_zero());
        assert!(commutator_defect(&e, &beta, 0, &gamma, -1, &beta).is_zero());
    }
}
