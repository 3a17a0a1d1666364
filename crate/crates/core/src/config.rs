//! Declarative ring descriptions.
//!
//! One directive per line; `#` starts a comment.
//!
//! ```text
//! algebra sl 2            # sl(N): `sl N`;  sp(2N): `sp 2N`
//! jet 2                   # truncation order m (omit for the untruncated ring)
//! family gamma parity=even indices=2 rep=dual min=1 offset=1 weight_offset=0
//! family e parity=even indices=2 rep=fund max=2
//! ```
//!
//! Family keys: `parity` (`even`|`odd`, required), `indices` (required),
//! `rep` (`fund`|`dual`|`trivial`), `min`, `max`, `offset` (jet offset),
//! `weight_offset`. Families are ordered as declared.

use std::sync::Arc;

use crate::algebra::{Alphabet, FamilySpec, Parity, RepLabel};
use crate::error::{Error, Result};
use crate::lie::LieKind;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RingConfig {
    pub algebra: Option<LieKind>,
    pub jet: Option<u32>,
    pub families: Vec<FamilySpec>,
}

impl RingConfig {
    pub fn alphabet(&self) -> Result<Arc<Alphabet>> {
        if self.families.is_empty() {
            return Err(Error::Parse("no families declared".into()));
        }
        Alphabet::new(self.families.clone())
    }
}

/// Parses `sl2`, `sl 3`, `sp4`.
pub fn parse_algebra(s: &str) -> Result<LieKind> {
    let s: String = s.split_whitespace().collect();
    let bad = || Error::Parse(format!("unknown algebra {s:?}"));
    let (head, n) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
    let n: usize = n.parse().map_err(|_| bad())?;
    match head {
        "sl" if n >= 2 => Ok(LieKind::Sl(n)),
        "sp" if n >= 2 && n.is_multiple_of(2) => Ok(LieKind::Sp(n / 2)),
        _ => Err(bad()),
    }
}

fn parse_u32(key: &str, v: &str) -> Result<u32> {
    v.parse().map_err(|_| Error::Parse(format!("{key}={v} is not a non-negative integer")))
}

fn parse_family(name: &str, args: &[&str]) -> Result<FamilySpec> {
    let mut parity = None;
    let mut indices = None;
    let mut spec = FamilySpec::new(name, Parity::Even, 1);
    for arg in args {
        let (k, v) = arg
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {arg:?}")))?;
        match k {
            "parity" => {
                parity = Some(match v {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(Error::Parse(format!("bad parity {v:?}"))),
                })
            }
            "indices" => indices = Some(parse_u32(k, v)?),
            "rep" => {
                spec.rep = Some(match v {
                    "fund" | "fundamental" => RepLabel::Fundamental,
                    "dual" => RepLabel::DualFundamental,
                    "trivial" => RepLabel::Trivial,
                    _ => return Err(Error::Parse(format!("bad rep {v:?}"))),
                })
            }
            "min" => spec.min_level = parse_u32(k, v)?,
            "max" => spec.max_level = Some(parse_u32(k, v)?),
            "offset" => spec.jet_offset = parse_u32(k, v)?,
            "weight_offset" => {
                spec.weight_offset = v.parse().map_err(|_| Error::Parse(format!("bad weight_offset {v:?}")))?
            }
            _ => return Err(Error::Parse(format!("unknown family key {k:?}"))),
        }
    }
    spec.parity = parity.ok_or_else(|| Error::Parse(format!("family {name}: parity missing")))?;
    spec.index_count = indices.ok_or_else(|| Error::Parse(format!("family {name}: indices missing")))?;
    Ok(spec)
}

pub fn parse_config(text: &str) -> Result<RingConfig> {
    let mut cfg = RingConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let at = |e: Error| match e {
            Error::Parse(m) => Error::Parse(format!("line {}: {m}", lineno + 1)),
            e => e,
        };
        match words[0] {
            "algebra" => cfg.algebra = Some(parse_algebra(&words[1..].concat()).map_err(at)?),
            "jet" if words.len() == 2 => cfg.jet = Some(parse_u32("jet", words[1]).map_err(at)?),
            "family" if words.len() >= 2 => cfg.families.push(parse_family(words[1], &words[2..]).map_err(at)?),
            _ => return Err(at(Error::Parse(format!("unknown directive {line:?}")))),
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::cdr_fibre;

    #[test]
    fn fibre_declaration_matches_preset() {
        let text = "\
algebra sl 2
# chiral de Rham fibre
family beta parity=even indices=2 rep=fund weight_offset=1
family gamma parity=even indices=2 rep=dual min=1 offset=1 weight_offset=0
family b parity=odd indices=2 rep=fund weight_offset=1
family c parity=odd indices=2 rep=dual
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.algebra, Some(LieKind::Sl(2)));
        assert_eq!(cfg.jet, None);
        assert_eq!(cfg.alphabet().unwrap(), cdr_fibre(2));
    }

    #[test]
    fn algebra_names() {
        assert_eq!(parse_algebra("sl3").unwrap(), LieKind::Sl(3));
        assert_eq!(parse_algebra("sp4").unwrap(), LieKind::Sp(2));
        assert!(parse_algebra("sp3").is_err());
        assert!(parse_algebra("so3").is_err());
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_config("jet 2\nfamily x parity=weird indices=1").unwrap_err();
        assert_eq!(err, Error::Parse("line 2: bad parity \"weird\"".into()));
        assert!(parse_config("family x indices=1").is_err());
    }
}
