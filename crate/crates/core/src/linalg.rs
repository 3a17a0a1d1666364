//! Exact sparse Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Sparse vector keyed by column.
pub type SparseVec = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseVec, scale: &Rational, row: &SparseVec) {
    for (&c, v) in row {
        let entry = target.entry(c).or_insert_with(Rational::zero);
        *entry += scale * v;
        if entry.is_zero() {
            target.remove(&c);
        }
    }
}

#[derive(Debug, Clone)]
struct PivotRow {
    vec: SparseVec,
    combo: SparseVec,
}

/// Incrementally built echelon form. Every stored row is monic at its pivot
/// (its smallest column) and remembers which inserted vectors produced it.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, PivotRow>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// combination of inserted vectors that was subtracted.
    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut used = SparseVec::new();
        let mut cursor = 0usize;
        while let Some((&c, coef)) = v.range(cursor..).next() {
            if let Some(row) = self.rows.get(&c) {
                let coef = coef.clone();
                axpy(&mut v, &-coef.clone(), &row.vec);
                axpy(&mut used, &coef, &row.combo);
            }
            cursor = c + 1;
        }
        (v, used)
    }

    /// Inserts a vector; returns `true` when it was independent of the rows so far.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (rem, used) = self.reduce(v);
        let Some((&pivot, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let mut combo = SparseVec::new();
        axpy(&mut combo, &-inv.clone(), &used);
        combo.insert(index, inv.clone());
        combo.retain(|_, x| !x.is_zero());
        let vec = rem.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.rows.insert(pivot, PivotRow { vec, combo });
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in their span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, used) = self.reduce(v.clone());
        rem.is_empty().then_some(used)
    }

    /// Fully reduced row echelon form, rows ordered by pivot.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let mut out: Vec<(usize, SparseVec)> = Vec::with_capacity(self.rows.len());
        for (&p, row) in self.rows.iter().rev() {
            let mut v = row.vec.clone();
            for (q, lower) in &out {
                if let Some(coef) = v.get(q).cloned() {
                    axpy(&mut v, &-coef, lower);
                }
            }
            out.push((p, v));
        }
        out.reverse();
        out.into_iter().map(|(_, v)| v).collect()
    }
}

pub fn rank(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : M x = 0}` for the matrix whose rows are given, in
/// `ncols` unknowns. Returned in reduced echelon form.
pub fn nullspace(rows: impl IntoIterator<Item = SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let rref = e.reduced_rows();
    let pivots: Vec<usize> = e.pivots().collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Echelon::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = SparseVec::new();
        v.insert(free, Rational::one());
        for (p, row) in pivots.iter().zip(&rref) {
            if let Some(x) = row.get(&free) {
                v.insert(*p, -x.clone());
            }
        }
        kernel.insert(v);
    }
    kernel.reduced_rows()
}

/// Basis of the intersection of two subspaces of the same ambient space.
pub fn intersect(a: &[SparseVec], b: &[SparseVec], dim: usize) -> Vec<SparseVec> {
    // x in A ∩ B  <=>  x = Σ s_i a_i = Σ t_j b_j; solve for (s, t) in the kernel of [A | -B].
    let na = a.len();
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (i, v) in a.iter().enumerate() {
        for (&c, x) in v {
            rows.entry(c).or_default().insert(i, x.clone());
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (&c, x) in v {
            rows.entry(c).or_default().insert(na + j, -x.clone());
        }
    }
    debug_assert!(rows.keys().all(|&c| c < dim));
    let kernel = nullspace(rows.into_values(), na + b.len());
    let mut out = Echelon::new();
    for k in kernel {
        let mut x = SparseVec::new();
        for (&i, s) in k.range(..na) {
            axpy(&mut x, s, &a[i]);
        }
        out.insert(x);
    }
    out.reduced_rows()
}

/// Leading principal minors of a square dense matrix (Sylvester criterion).
pub fn leading_minors(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut minors = Vec::with_capacity(n);
    for k in 1..=n {
        minors.push(determinant(&m[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()));
    }
    minors
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(c, x)| (c, int(x))).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let k = nullspace([sv(&[(0, 1), (1, 2), (2, 3)])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = v.get(&0).cloned().unwrap_or_default()
                + int(2) * v.get(&1).cloned().unwrap_or_default()
                + int(3) * v.get(&2).cloned().unwrap_or_default();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_reports_coordinates() {
        let mut e = Echelon::new();
        e.insert(sv(&[(0, 1), (1, 1)]));
        e.insert(sv(&[(1, 1), (2, 1)]));
        let c = e.solve(&sv(&[(0, 1), (1, 2), (2, 1)])).unwrap();
        assert_eq!(c, sv(&[(0, 1), (1, 1)]));
        assert!(e.solve(&sv(&[(2, 1)])).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let a = [sv(&[(0, 1)]), sv(&[(1, 1)])];
        let b = [sv(&[(1, 1)]), sv(&[(2, 1)])];
        let i = intersect(&a, &b, 3);
        assert_eq!(i, vec![sv(&[(1, 1)])]);
    }

    #[test]
    fn minors_and_determinant() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(2)]];
        assert_eq!(leading_minors(&m), vec![int(2), int(3)]);
        assert_eq!(determinant(&[vec![int(0), int(1)], vec![int(1), int(0)]]), int(-1));
    }
}
