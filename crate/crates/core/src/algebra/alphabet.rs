use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip_if(self, odd: bool) -> Parity {
        match (self, odd) {
            (p, false) => p,
            (Parity::Even, true) => Parity::Odd,
            (Parity::Odd, true) => Parity::Even,
        }
    }
}

/// How the Lie algebra acts on the index of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepLabel {
    /// `g·v_i = Σ_a g_{ai} v_a`
    Fundamental,
    /// `g·u^i = -Σ_a g_{ia} u^a`
    DualFundamental,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub name: String,
    pub parity: Parity,
    pub index_count: u32,
    pub min_level: u32,
    /// `None` means the family is not truncated.
    pub max_level: Option<u32>,
    /// Level `j` has effective jet degree `j - jet_offset`.
    pub jet_offset: u32,
    /// Level `j` has weight `j + weight_offset`.
    pub weight_offset: i64,
    pub rep: Option<RepLabel>,
}

impl FamilySpec {
    pub fn new(name: &str, parity: Parity, index_count: u32) -> Self {
        FamilySpec {
            name: name.to_string(),
            parity,
            index_count,
            min_level: 0,
            max_level: None,
            jet_offset: 0,
            weight_offset: 0,
            rep: None,
        }
    }

    pub fn levels(mut self, min: u32, max: Option<u32>) -> Self {
        self.min_level = min;
        self.max_level = max;
        self
    }

    pub fn jet_offset(mut self, offset: u32) -> Self {
        self.jet_offset = offset;
        self
    }

    pub fn weight_offset(mut self, offset: i64) -> Self {
        self.weight_offset = offset;
        self
    }

    pub fn rep(mut self, rep: RepLabel) -> Self {
        self.rep = Some(rep);
        self
    }

    pub fn contains_level(&self, level: u32) -> bool {
        level >= self.min_level && self.max_level.is_none_or(|m| level <= m)
    }

    fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidFamily(format!("{}: {why}", self.name)));
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
            return bad("name must be alphabetic");
        }
        if self.index_count == 0 {
            return bad("needs at least one index");
        }
        if self.min_level < self.jet_offset {
            return bad("min level below jet offset");
        }
        if self.max_level.is_some_and(|m| m < self.min_level) {
            return bad("max level below min level");
        }
        if self.min_level as i64 + self.weight_offset < 0 {
            return bad("negative weight");
        }
        Ok(())
    }
}

/// Ordered list of variable families. Declaration order drives the total
/// order on variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    families: Vec<FamilySpec>,
}

impl Alphabet {
    pub fn new(families: Vec<FamilySpec>) -> Result<Arc<Self>> {
        for (i, f) in families.iter().enumerate() {
            f.validate()?;
            if families[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::InvalidFamily(format!("duplicate family {}", f.name)));
            }
        }
        Ok(Arc::new(Alphabet { families }))
    }

    pub fn families(&self) -> &[FamilySpec] {
        &self.families
    }

    pub fn family(&self, i: usize) -> &FamilySpec {
        &self.families[i]
    }

    pub fn family_index(&self, name: &str) -> Result<usize> {
        self.families
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    /// Builds a checked variable; `index` is 1-based.
    pub fn var(&self, family: &str, index: u32, level: u32) -> Result<Variable> {
        let f = self.family_index(family)?;
        let v = Variable { family: f, index, level };
        self.check(&v)?;
        Ok(v)
    }

    pub fn check(&self, v: &Variable) -> Result<()> {
        let f = self
            .families
            .get(v.family)
            .ok_or_else(|| Error::UnknownVariable(format!("{v:?}")))?;
        if v.index == 0 || v.index > f.index_count || !f.contains_level(v.level) {
            return Err(Error::UnknownVariable(self.show(v)));
        }
        Ok(())
    }

    pub fn parity(&self, v: &Variable) -> Parity {
        self.families[v.family].parity
    }

    pub fn weight(&self, v: &Variable) -> i64 {
        v.level as i64 + self.families[v.family].weight_offset
    }

    /// Effective jet degree, `level - jet_offset`.
    pub fn jet_degree(&self, v: &Variable) -> u32 {
        v.level - self.families[v.family].jet_offset
    }

    pub fn show(&self, v: &Variable) -> String {
        format!("{}{}^({})", self.families[v.family].name, v.index, v.level)
    }
}

/// A variable `name_index^(level)`. The derived order (family declaration
/// order, then index, then level) is the canonical total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub family: usize,
    pub index: u32,
    pub level: u32,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}_{}^({})", self.family, self.index, self.level)
    }
}
