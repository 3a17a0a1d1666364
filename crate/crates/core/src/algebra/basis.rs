use std::collections::BTreeMap;

use super::alphabet::{Alphabet, Variable};
use super::poly::{Grade, Monomial};
use crate::error::{Error, Result};

/// All variables of weight at most `max_weight`, in canonical order.
pub fn variables_up_to(alphabet: &Alphabet, max_weight: i64) -> Vec<Variable> {
    let mut out = Vec::new();
    for (fi, f) in alphabet.families().iter().enumerate() {
        let top = max_weight - f.weight_offset;
        if top < f.min_level as i64 {
            continue;
        }
        let top = match f.max_level {
            Some(m) => top.min(m as i64),
            None => top,
        } as u32;
        for index in 1..=f.index_count {
            for level in f.min_level..=top {
                out.push(Variable { family: fi, index, level });
            }
        }
    }
    out.sort();
    out
}

fn check_finite(alphabet: &Alphabet, selector: &Grade) -> Result<()> {
    for f in alphabet.families() {
        let zero_weight = f.min_level as i64 + f.weight_offset == 0;
        if zero_weight && !f.parity.is_odd() && !selector.degrees.contains_key(&f.name) {
            return Err(Error::InfinitePiece(format!(
                "family {} has even weight-0 variables and no degree bound",
                f.name
            )));
        }
    }
    Ok(())
}

/// Canonical monomial basis of the piece selected by `grade` (families not
/// named in `grade.degrees` are free).
pub fn graded_basis(alphabet: &Alphabet, grade: &Grade) -> Result<Vec<Monomial>> {
    for name in grade.degrees.keys() {
        alphabet.family_index(name)?;
    }
    check_finite(alphabet, grade)?;
    if grade.weight < 0 {
        return Ok(Vec::new());
    }
    let vars = variables_up_to(alphabet, grade.weight);
    let mut remaining: Vec<Option<u32>> = alphabet
        .families()
        .iter()
        .map(|f| grade.degrees.get(&f.name).copied())
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate(alphabet, &vars, 0, grade.weight, &mut remaining, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn enumerate(
    alphabet: &Alphabet,
    vars: &[Variable],
    pos: usize,
    weight_left: i64,
    remaining: &mut Vec<Option<u32>>,
    current: &mut Vec<(Variable, u32)>,
    out: &mut Vec<Monomial>,
) {
    if pos == vars.len() {
        if weight_left == 0 && remaining.iter().all(|r| r.is_none_or(|d| d == 0)) {
            out.push(Monomial::from_sorted(current.clone()));
        }
        return;
    }
    let v = vars[pos];
    let w = alphabet.weight(&v);
    let family_left = remaining[v.family];
    let mut max_e = if alphabet.parity(&v).is_odd() { 1 } else { u32::MAX };
    if let Some(d) = family_left {
        max_e = max_e.min(d);
    }
    if w > 0 {
        max_e = max_e.min((weight_left / w) as u32);
    }
    // weight-0 even variables only occur in degree-bounded families
    debug_assert!(max_e != u32::MAX);
    for e in 0..=max_e {
        if e > 0 {
            current.push((v, e));
        }
        if let Some(d) = family_left {
            remaining[v.family] = Some(d - e);
        }
        enumerate(alphabet, vars, pos + 1, weight_left - w * e as i64, remaining, current, out);
        if e > 0 {
            current.pop();
        }
    }
    remaining[v.family] = family_left;
}

/// Splits the piece selected by `grade` into its fully specified grades.
pub fn grade_pieces(alphabet: &Alphabet, grade: &Grade) -> Result<BTreeMap<Grade, Vec<Monomial>>> {
    let mut pieces: BTreeMap<Grade, Vec<Monomial>> = BTreeMap::new();
    for m in graded_basis(alphabet, grade)? {
        pieces.entry(Grade::of_monomial(&m, alphabet)).or_default().push(m);
    }
    Ok(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FamilySpec, Parity};

    #[test]
    fn two_y_variables_weight_one() {
        let a = Alphabet::new(vec![FamilySpec::new("y", Parity::Even, 2).levels(1, Some(1))]).unwrap();
        assert_eq!(graded_basis(&a, &Grade::weight(1)).unwrap().len(), 2);
    }

    #[test]
    fn one_y_variable_weight_two() {
        let a = Alphabet::new(vec![FamilySpec::new("y", Parity::Even, 1).levels(1, Some(1))]).unwrap();
        let b = graded_basis(&a, &Grade::weight(2)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].degree(), 2);
    }

    #[test]
    fn exterior_piece() {
        let a = Alphabet::new(vec![FamilySpec::new("f", Parity::Odd, 2).levels(0, Some(0))]).unwrap();
        let b = graded_basis(&a, &Grade::weight(0).with("f", 2)).unwrap();
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn infinite_piece_rejected() {
        let a = Alphabet::new(vec![FamilySpec::new("e", Parity::Even, 1)]).unwrap();
        assert!(matches!(graded_basis(&a, &Grade::weight(1)), Err(Error::InfinitePiece(_))));
        assert_eq!(graded_basis(&a, &Grade::weight(1).with("e", 2)).unwrap().len(), 1);
    }
}
