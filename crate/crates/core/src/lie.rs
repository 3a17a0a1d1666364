//! Matrix Lie algebras `sl(N)`, `sp(2N)`, their truncated current algebras
//! `g[t]/(t^{m+1})`, and the derivation action of `g t^k` on jet rings.
//!
//! Conventions: on a `Fundamental` family `g·v_i = Σ_a g_{ai} v_a`; on a
//! `DualFundamental` family `g·u^i = -Σ_a g_{ia} u^a`. A variable at
//! effective jet degree `d` is sent by `g t^k` to `d!/(d-k)!` times `g`
//! applied to the same family at level `level - k`, and to zero when `d < k`.
//! The symplectic form is `J = [[0, I], [-I, 0]]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{apply_derivation, Alphabet, Derivation, Parity, Poly, RepLabel, Variable};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::matrix::Mat;
use crate::rational::{falling, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LieKind {
    /// `sl(N)`
    Sl(usize),
    /// `sp(2N)`, stored as `N`
    Sp(usize),
}

impl fmt::Display for LieKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieKind::Sl(n) => write!(f, "sl{n}"),
            LieKind::Sp(n) => write!(f, "sp{}", 2 * n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    pub kind: Option<LieKind>,
    /// Dimension of the fundamental representation.
    pub n: usize,
    pub basis: Vec<Mat>,
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The zero algebra acting on an `n`-dimensional space.
    pub fn trivial(n: usize) -> Self {
        LieAlgebra { kind: None, n, basis: Vec::new() }
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is outside the span.
    pub fn coordinates(&self, x: &Mat) -> Option<Vec<Rational>> {
        let mut e = Echelon::new();
        for b in &self.basis {
            e.insert(linalg::dense_to_sparse(b.entries()));
        }
        let sol = e.solve(&linalg::dense_to_sparse(x.entries()))?;
        Some((0..self.dim()).map(|i| sol.get(&i).cloned().unwrap_or_default()).collect())
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.coordinates(x).is_some()
    }

    /// First basis element with a nonzero off-diagonal entry.
    pub fn first_off_diagonal(&self) -> Option<&Mat> {
        self.basis.iter().find(|b| !b.is_diagonal())
    }

    pub fn symplectic_form(n: usize) -> Mat {
        let mut j = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = Rational::one();
            j[(n + i, i)] = -Rational::one();
        }
        j
    }
}

/// Standard basis: off-diagonal matrix units then `E_ii - E_{i+1,i+1}` for
/// `sl`; for `sp` the blocks `[[A, 0], [0, -A^T]]`, `[[0, B], [0, 0]]`,
/// `[[0, 0], [C, 0]]` with `B`, `C` symmetric.
pub fn lie_basis(kind: LieKind) -> Result<LieAlgebra> {
    match kind {
        LieKind::Sl(n) => {
            if n < 2 {
                return Err(Error::InvalidRank(n, "sl"));
            }
            let mut basis = Vec::with_capacity(n * n - 1);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        basis.push(Mat::unit(n, i, j));
                    }
                }
            }
            for i in 0..n - 1 {
                basis.push(&Mat::unit(n, i, i) - &Mat::unit(n, i + 1, i + 1));
            }
            Ok(LieAlgebra { kind: Some(kind), n, basis })
        }
        LieKind::Sp(n) => {
            if n < 1 {
                return Err(Error::InvalidRank(2 * n, "sp"));
            }
            let d = 2 * n;
            let mut basis = Vec::with_capacity(n * (2 * n + 1));
            for i in 0..n {
                for j in 0..n {
                    basis.push(&Mat::unit(d, i, j) - &Mat::unit(d, n + j, n + i));
                }
            }
            for i in 0..n {
                for j in i..n {
                    let b = if i == j {
                        Mat::unit(d, i, n + i)
                    } else {
                        &Mat::unit(d, i, n + j) + &Mat::unit(d, j, n + i)
                    };
                    basis.push(b);
                }
            }
            for i in 0..n {
                for j in i..n {
                    let c = if i == j {
                        Mat::unit(d, n + i, i)
                    } else {
                        &Mat::unit(d, n + i, j) + &Mat::unit(d, n + j, i)
                    };
                    basis.push(c);
                }
            }
            Ok(LieAlgebra { kind: Some(kind), n: d, basis })
        }
    }
}

/// `element · t^degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetGen {
    pub element: Mat,
    pub degree: u32,
}

impl JetGen {
    pub fn new(element: Mat, degree: u32) -> Self {
        JetGen { element, degree }
    }

    /// `[g t^a, h t^b] = [g, h] t^{a+b}`
    pub fn bracket(&self, other: &JetGen) -> JetGen {
        JetGen::new(self.element.commutator(&other.element), self.degree + other.degree)
    }
}

/// Action of a single index under a matrix, per representation label.
pub fn index_action(g: &Mat, rep: RepLabel, i: usize) -> Vec<(usize, Rational)> {
    let n = g.rows();
    match rep {
        RepLabel::Trivial => Vec::new(),
        RepLabel::Fundamental => (0..n)
            .filter(|&a| !g[(a, i)].is_zero())
            .map(|a| (a, g[(a, i)].clone()))
            .collect(),
        RepLabel::DualFundamental => (0..n)
            .filter(|&a| !g[(i, a)].is_zero())
            .map(|a| (a, -g[(i, a)].clone()))
            .collect(),
    }
}

impl Derivation for JetGen {
    fn parity(&self) -> Parity {
        Parity::Even
    }

    fn image(&self, alphabet: &Arc<Alphabet>, v: &Variable) -> Result<Poly> {
        let fam = alphabet.family(v.family);
        let rep = fam.rep.ok_or_else(|| Error::MissingRepLabel(fam.name.clone()))?;
        let d = alphabet.jet_degree(v);
        let k = self.degree;
        let mut out = Poly::zero(alphabet);
        if d < k || rep == RepLabel::Trivial {
            return Ok(out);
        }
        if fam.index_count as usize != self.element.rows() {
            return Err(Error::InvalidFamily(format!(
                "family {} has {} indices but the algebra acts on dimension {}",
                fam.name,
                fam.index_count,
                self.element.rows()
            )));
        }
        let coef = falling(d as i64, k);
        for (a, x) in index_action(&self.element, rep, v.index as usize - 1) {
            let w = Variable { family: v.family, index: a as u32 + 1, level: v.level - k };
            alphabet.check(&w)?;
            out.add_term(crate::algebra::Monomial::var(w), &coef * x);
        }
        Ok(out)
    }
}

pub fn jet_act(g: &JetGen, a: &Poly) -> Result<Poly> {
    apply_derivation(g, a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeneratorMode {
    Full,
    Minimal,
}

/// `Full`: every basis element at every degree `0..=m`. `Minimal`: the basis
/// at degree 0 plus the first off-diagonal basis element at degree 1.
pub fn jet_generators(g: &LieAlgebra, m: u32, mode: GeneratorMode) -> Vec<JetGen> {
    match mode {
        GeneratorMode::Full => (0..=m)
            .flat_map(|k| g.basis.iter().map(move |b| JetGen::new(b.clone(), k)))
            .collect(),
        GeneratorMode::Minimal => {
            let mut out: Vec<JetGen> = g.basis.iter().map(|b| JetGen::new(b.clone(), 0)).collect();
            if m >= 1 {
                if let Some(k) = g.first_off_diagonal() {
                    out.push(JetGen::new(k.clone(), 1));
                }
            }
            out
        }
    }
}

/// Index of `u^i ⊗ u^j ⊗ v_k` in `V* ⊗ V* ⊗ V`.
fn triple(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

/// Basis of `(V* ⊗ g) ∩ (Sym² V* ⊗ V)` inside `V* ⊗ V* ⊗ V`, with `g`
/// embedded in `V* ⊗ V` as `g = Σ g_{ka} u^a ⊗ v_k`.
pub fn sym2_intersection(g: &LieAlgebra) -> Vec<SparseVec> {
    let n = g.n;
    let mut left = Vec::new();
    for i in 0..n {
        for b in &g.basis {
            let mut v = SparseVec::new();
            for a in 0..n {
                for k in 0..n {
                    if !b[(k, a)].is_zero() {
                        v.insert(triple(n, i, a, k), b[(k, a)].clone());
                    }
                }
            }
            left.push(v);
        }
    }
    let mut right = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut v = SparseVec::new();
                v.insert(triple(n, i, j, k), Rational::one());
                v.insert(triple(n, j, i, k), Rational::one());
                right.push(v);
            }
        }
    }
    linalg::intersect(&left, &right, n * n * n)
}

/// Action of a Lie algebra element on `V* ⊗ V* ⊗ V` as an `n³ × n³` matrix.
pub fn triple_tensor_action(x: &Mat) -> Mat {
    let n = x.rows();
    let mut out = Mat::zeros(n * n * n, n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let col = triple(n, i, j, k);
                for (a, c) in index_action(x, RepLabel::DualFundamental, i) {
                    out[(triple(n, a, j, k), col)] += c;
                }
                for (a, c) in index_action(x, RepLabel::DualFundamental, j) {
                    out[(triple(n, i, a, k), col)] += c;
                }
                for (a, c) in index_action(x, RepLabel::Fundamental, k) {
                    out[(triple(n, i, j, a), col)] += c;
                }
            }
        }
    }
    out
}

/// Restricts ambient action matrices to the subspace spanned by `basis`,
/// returning the action in subspace coordinates.
pub fn restrict_action(action: &[Mat], basis: &[SparseVec]) -> Result<Vec<Mat>> {
    let mut e = Echelon::new();
    for b in basis {
        e.insert(b.clone());
    }
    let d = basis.len();
    action
        .iter()
        .map(|x| {
            let mut m = Mat::zeros(d, d);
            for (col, b) in basis.iter().enumerate() {
                let mut img = SparseVec::new();
                for (&c, val) in b {
                    for r in 0..x.rows() {
                        if !x[(r, c)].is_zero() {
                            let entry = img.entry(r).or_insert_with(Rational::zero);
                            *entry += &x[(r, c)] * val;
                        }
                    }
                }
                img.retain(|_, v| !v.is_zero());
                let coords = e.solve(&img).ok_or(Error::NotActionClosed)?;
                for (row, val) in coords {
                    m[(row, col)] = val;
                }
            }
            Ok(m)
        })
        .collect()
}

/// Dimension of `{T : T ρ(x) = ρ(x) T for all x}` for the given action matrices.
pub fn commutant_dim(action: &[Mat]) -> usize {
    let Some(first) = action.first() else {
        return 0;
    };
    let d = first.rows();
    // unknown T_{ab} at column a*d + b
    let mut rows: Vec<SparseVec> = Vec::new();
    for x in action {
        for i in 0..d {
            for j in 0..d {
                // (Tρ - ρT)_{ij} = Σ_k T_{ik} ρ_{kj} - ρ_{ik} T_{kj}
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for k in 0..d {
                    if !x[(k, j)].is_zero() {
                        *row.entry(i * d + k).or_insert_with(Rational::zero) += &x[(k, j)];
                    }
                    if !x[(i, k)].is_zero() {
                        *row.entry(k * d + j).or_insert_with(Rational::zero) -= &x[(i, k)];
                    }
                }
                row.retain(|_, v| !v.is_zero());
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    d * d - linalg::rank(rows)
}

/// Action matrices of the fundamental representation.
pub fn fundamental_action(g: &LieAlgebra) -> Vec<Mat> {
    g.basis.clone()
}

/// Block-diagonal action on a direct sum.
pub fn direct_sum(a: &[Mat], b: &[Mat]) -> Vec<Mat> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let (p, q) = (x.rows(), y.rows());
            let mut m = Mat::zeros(p + q, p + q);
            for i in 0..p {
                for j in 0..p {
                    m[(i, j)] = x[(i, j)].clone();
                }
            }
            for i in 0..q {
                for j in 0..q {
                    m[(p + i, p + j)] = y[(i, j)].clone();
                }
            }
            m
        })
        .collect()
}

/// Commutant dimension of `sym2_intersection(g)` under the induced action.
pub fn sym2_commutant_dim(g: &LieAlgebra) -> Result<usize> {
    let w = sym2_intersection(g);
    if w.is_empty() {
        return Ok(0);
    }
    let ambient: Vec<Mat> = g.basis.iter().map(triple_tensor_action).collect();
    Ok(commutant_dim(&restrict_action(&ambient, &w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FamilySpec;
    use crate::rational::int;

    #[test]
    fn basis_dimensions() {
        assert_eq!(lie_basis(LieKind::Sl(2)).unwrap().dim(), 3);
        assert_eq!(lie_basis(LieKind::Sl(3)).unwrap().dim(), 8);
        assert_eq!(lie_basis(LieKind::Sp(2)).unwrap().dim(), 10);
        assert!(lie_basis(LieKind::Sl(1)).is_err());
    }

    #[test]
    fn basis_membership_conditions() {
        for kind in [LieKind::Sl(2), LieKind::Sl(3)] {
            for b in lie_basis(kind).unwrap().basis {
                assert!(b.trace().is_zero());
            }
        }
        let sp = lie_basis(LieKind::Sp(2)).unwrap();
        let j = LieAlgebra::symplectic_form(2);
        for b in &sp.basis {
            assert!((&(&b.transpose() * &j) + &(&j * b)).is_zero());
        }
    }

    #[test]
    fn bracket_closure() {
        for kind in [LieKind::Sl(2), LieKind::Sl(3), LieKind::Sp(1), LieKind::Sp(2)] {
            let g = lie_basis(kind).unwrap();
            for a in &g.basis {
                for b in &g.basis {
                    assert!(g.contains(&a.commutator(b)), "{kind}");
                }
            }
        }
    }

    fn tj(m: u32) -> Arc<Alphabet> {
        Alphabet::new(vec![
            FamilySpec::new("y", Parity::Even, 2)
                .levels(1, Some(m))
                .jet_offset(1)
                .rep(RepLabel::DualFundamental),
            FamilySpec::new("e", Parity::Even, 2).levels(0, Some(m)).rep(RepLabel::Fundamental),
        ])
        .unwrap()
    }

    #[test]
    fn cartan_on_fundamental() {
        let r = tj(2);
        let h = lie_basis(LieKind::Sl(2)).unwrap().basis[2].clone();
        let out = jet_act(&JetGen::new(h, 0), &Poly::v(&r, "e", 1, 0)).unwrap();
        assert_eq!(out, Poly::v(&r, "e", 1, 0));
    }

    #[test]
    fn cartan_on_dual_with_offset() {
        let r = tj(2);
        let h = lie_basis(LieKind::Sl(2)).unwrap().basis[2].clone();
        let out = jet_act(&JetGen::new(h, 1), &Poly::v(&r, "y", 1, 2)).unwrap();
        assert_eq!(out, -&Poly::v(&r, "y", 1, 1));
    }

    #[test]
    fn degree_above_jet_degree_kills() {
        let r = tj(2);
        for b in lie_basis(LieKind::Sl(2)).unwrap().basis {
            assert!(jet_act(&JetGen::new(b, 2), &Poly::v(&r, "e", 1, 1)).unwrap().is_zero());
        }
    }

    #[test]
    fn falling_factorial_coefficient() {
        let r = tj(3);
        let e = lie_basis(LieKind::Sl(2)).unwrap().basis[0].clone(); // E_12: v_2 -> v_1
        let out = jet_act(&JetGen::new(e, 2), &Poly::v(&r, "e", 2, 3)).unwrap();
        assert_eq!(out, Poly::v(&r, "e", 1, 1).scale(&int(6)));
    }

    #[test]
    fn missing_rep_label() {
        let r = Alphabet::new(vec![FamilySpec::new("x", Parity::Even, 2)]).unwrap();
        let e = lie_basis(LieKind::Sl(2)).unwrap().basis[0].clone();
        assert!(matches!(
            jet_act(&JetGen::new(e, 0), &Poly::v(&r, "x", 1, 0)),
            Err(Error::MissingRepLabel(_))
        ));
    }

    #[test]
    fn generator_counts() {
        let g = lie_basis(LieKind::Sl(2)).unwrap();
        assert_eq!(jet_generators(&g, 1, GeneratorMode::Full).len(), 6);
        assert_eq!(jet_generators(&g, 2, GeneratorMode::Minimal).len(), 4);
        assert_eq!(jet_generators(&g, 0, GeneratorMode::Full).len(), 3);
    }

    #[test]
    fn commutants() {
        let g = lie_basis(LieKind::Sl(2)).unwrap();
        let v = fundamental_action(&g);
        assert_eq!(commutant_dim(&v), 1);
        assert_eq!(commutant_dim(&direct_sum(&v, &v)), 4);
        assert_eq!(sym2_intersection(&LieAlgebra::trivial(2)).len(), 0);
    }
}
