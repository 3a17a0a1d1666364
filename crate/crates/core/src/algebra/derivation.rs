use std::collections::BTreeMap;
use std::sync::Arc;

use super::alphabet::{Alphabet, Parity, Variable};
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};
use crate::rational::int;

/// A (super)derivation, determined by its values on variables.
pub trait Derivation {
    fn parity(&self) -> Parity;
    fn image(&self, alphabet: &Arc<Alphabet>, v: &Variable) -> Result<Poly>;
}

/// Applies `d` to `a` by the signed Leibniz rule. An odd derivation picks up
/// `(-1)` for every odd factor it passes.
pub fn apply_derivation<D: Derivation + ?Sized>(d: &D, a: &Poly) -> Result<Poly> {
    let alphabet = a.alphabet();
    let mut out = Poly::zero(alphabet);
    for (m, c) in a.terms() {
        let factors = m.factors();
        let mut prefix_odd = false;
        for (pos, &(v, e)) in factors.iter().enumerate() {
            let image = d.image(alphabet, &v)?;
            if !image.is_zero() {
                let prefix = Monomial::from_sorted(factors[..pos].to_vec());
                let mut rest = factors[pos + 1..].to_vec();
                if e > 1 {
                    rest.insert(0, (v, e - 1));
                }
                let rest = Monomial::from_sorted(rest);
                let mut coef = c * int(e as i64);
                if d.parity().is_odd() && prefix_odd {
                    coef = -coef;
                }
                let left = Poly::monomial(alphabet, prefix, coef);
                let right = Poly::monomial(alphabet, rest, int(1));
                out = &out + &(&(&left * &image) * &right);
            }
            if alphabet.parity(&v).is_odd() {
                prefix_odd = !prefix_odd;
            }
        }
    }
    Ok(out)
}

/// Derivation given by an explicit table; variables absent from the table map to zero.
#[derive(Debug, Clone)]
pub struct DerivationSpec {
    pub parity: Parity,
    pub images: BTreeMap<Variable, Poly>,
}

impl Derivation for DerivationSpec {
    fn parity(&self) -> Parity {
        self.parity
    }

    fn image(&self, alphabet: &Arc<Alphabet>, v: &Variable) -> Result<Poly> {
        match self.images.get(v) {
            Some(p) => {
                if !p.same_alphabet(&Poly::zero(alphabet)) {
                    return Err(Error::AlphabetMismatch);
                }
                for m in p.terms().keys() {
                    for (w, _) in m.factors() {
                        alphabet.check(w)?;
                    }
                }
                Ok(p.clone())
            }
            None => Ok(Poly::zero(alphabet)),
        }
    }
}

/// The jet derivative `D̃`: raises the level of every variable by one.
#[derive(Debug, Clone, Copy, Default)]
pub struct JetDerivative;

impl Derivation for JetDerivative {
    fn parity(&self) -> Parity {
        Parity::Even
    }

    fn image(&self, alphabet: &Arc<Alphabet>, v: &Variable) -> Result<Poly> {
        let next = Variable { level: v.level + 1, ..*v };
        if !alphabet.family(v.family).contains_level(next.level) {
            return Err(Error::TruncationExceeded(alphabet.show(v)));
        }
        Ok(Poly::var(alphabet, next))
    }
}

impl JetDerivative {
    pub fn apply(&self, a: &Poly) -> Result<Poly> {
        apply_derivation(self, a)
    }

    pub fn apply_n(&self, a: &Poly, n: u32) -> Result<Poly> {
        (0..n).try_fold(a.clone(), |acc, _| self.apply(&acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FamilySpec;

    fn ring(m: Option<u32>) -> Arc<Alphabet> {
        Alphabet::new(vec![
            FamilySpec::new("y", Parity::Even, 2).levels(1, m),
            FamilySpec::new("f", Parity::Odd, 2).levels(0, m),
        ])
        .unwrap()
    }

    #[test]
    fn jet_derivative_on_generator() {
        let r = ring(None);
        let d = JetDerivative.apply(&Poly::v(&r, "y", 1, 1)).unwrap();
        assert_eq!(d, Poly::v(&r, "y", 1, 2));
    }

    #[test]
    fn jet_derivative_leibniz() {
        let r = ring(None);
        let a = &Poly::v(&r, "y", 1, 1) * &Poly::v(&r, "f", 1, 0);
        let expect = &(&Poly::v(&r, "y", 1, 2) * &Poly::v(&r, "f", 1, 0))
            + &(&Poly::v(&r, "y", 1, 1) * &Poly::v(&r, "f", 1, 1));
        assert_eq!(JetDerivative.apply(&a).unwrap(), expect);
    }

    #[test]
    fn truncation_is_an_error() {
        let r = ring(Some(2));
        let err = JetDerivative.apply(&Poly::v(&r, "y", 1, 2)).unwrap_err();
        assert!(matches!(err, Error::TruncationExceeded(_)));
    }

    #[test]
    fn odd_derivation_sign() {
        let r = ring(None);
        // d f1^(0) = 1, everything else 0, so d(f2 f1) = -f2
        let f1 = r.var("f", 1, 0).unwrap();
        let d = DerivationSpec {
            parity: Parity::Odd,
            images: [(f1, Poly::one(&r))].into_iter().collect(),
        };
        let a = &Poly::v(&r, "f", 2, 0) * &Poly::v(&r, "f", 1, 0);
        assert_eq!(apply_derivation(&d, &a).unwrap(), -&Poly::v(&r, "f", 2, 0));
    }

    #[test]
    fn image_outside_alphabet_is_an_error() {
        let r = ring(Some(1));
        let y = r.var("y", 1, 1).unwrap();
        let other = ring(None);
        let d = DerivationSpec {
            parity: Parity::Even,
            images: [(y, Poly::v(&other, "y", 1, 5))].into_iter().collect(),
        };
        assert!(apply_derivation(&d, &Poly::var(&r, y)).is_err());
    }
}
