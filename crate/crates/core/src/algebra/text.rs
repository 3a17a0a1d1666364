use std::sync::Arc;

use num_traits::One;

use super::alphabet::{Alphabet, Variable};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

fn parse_var(alphabet: &Alphabet, tok: &str) -> Result<Variable> {
    let bad = || Error::Parse(format!("bad variable token `{tok}`"));
    let (head, level) = tok.split_once("^(").ok_or_else(bad)?;
    let level: u32 = level.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let split = head.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let (name, index) = head.split_at(split);
    let index: u32 = index.parse().map_err(|_| bad())?;
    alphabet.var(name, index, level)
}

/// Parses the canonical text form `c * v1 v2 ... + c * ...`. Variables may
/// appear in any order; the result is re-canonicalized with Koszul signs.
pub fn parse_poly(alphabet: &Arc<Alphabet>, s: &str) -> Result<Poly> {
    let s = s.trim();
    let mut out = Poly::zero(alphabet);
    if s == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let term = term.trim();
        let (coef, vars) = match term.split_once('*') {
            Some((c, v)) => (parse_rational(c)?, v.trim()),
            None if term.contains("^(") => (Rational::one(), term),
            None => (parse_rational(term)?, ""),
        };
        let vars: Vec<Variable> = vars
            .split_whitespace()
            .map(|t| parse_var(alphabet, t))
            .collect::<Result<_>>()?;
        out = &out + &Poly::product_of(alphabet, &vars).scale(&coef);
    }
    Ok(out)
}
