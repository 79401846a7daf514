//! Truncated bar resolutions of `S` by free graded `σX`-modules.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::chain::{tuples_by_units, UnitBound};
use crate::error::{Error, Result};
use crate::linalg::{homology_at, Homology, SparseIntMatrix};
use crate::space::{Grade, QuasimetricSpace};

/// Which side `σX` acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Basis `(y, x_0, ..., x_n)`, acted on from the left.
    Left,
    /// Basis `(x_0, ..., x_n, y)`, acted on from the right.
    Right,
}

/// Bar resolution `P_•` truncated at degree `n_max` and total grade `lmax`.
///
/// Degree `n` has basis all `(n+2)`-tuples with finite steps and total grade
/// `≤ lmax`, sorted lexicographically. The differential `Σ_{i=0}^n (-1)^i d_i`
/// deletes the `i`-th of the `n+1` "bar" entries when that keeps the total
/// grade and is zero otherwise. Differentials preserve grade, so every
/// graded piece up to `lmax` is complete.
#[derive(Debug, Clone)]
pub struct Resolution {
    space: QuasimetricSpace,
    side: Side,
    n_max: usize,
    lmax: Grade,
    bases: Vec<Vec<Vec<usize>>>,
    units: Vec<Vec<i64>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    boundaries: Vec<SparseIntMatrix>,
}

pub fn bar_resolution(space: &QuasimetricSpace, side: Side, n_max: usize, lmax: &Grade) -> Resolution {
    let limit = (*lmax * Grade::from_integer(space.scale())).floor().to_integer();
    let mut bases = Vec::with_capacity(n_max + 1);
    let mut units = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (b, u): (Vec<Vec<usize>>, Vec<i64>) =
            tuples_by_units(space, n + 2, UnitBound::AtMost(limit), false, None).into_iter().unzip();
        bases.push(b);
        units.push(u);
    }
    let index: Vec<HashMap<Vec<usize>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
    let mut boundaries = vec![SparseIntMatrix::zeros(0, bases[0].len())];
    for n in 1..=n_max {
        let mut d = SparseIntMatrix::zeros(bases[n - 1].len(), bases[n].len());
        for (j, t) in bases[n].iter().enumerate() {
            for i in 0..=n {
                let pos = match side {
                    Side::Right => i,
                    Side::Left => i + 1,
                };
                if !deletion_keeps_grade(space, t, pos) {
                    continue;
                }
                let mut face = t.clone();
                face.remove(pos);
                let row = index[n - 1][&face];
                d.add_to(row, j, &BigInt::from(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        boundaries.push(d);
    }
    Resolution { space: space.clone(), side, n_max, lmax: *lmax, bases, units, index, boundaries }
}

fn deletion_keeps_grade(space: &QuasimetricSpace, t: &[usize], pos: usize) -> bool {
    let u = |a: usize, b: usize| space.units(a, b).expect("finite step");
    let left = (pos > 0).then(|| t[pos - 1]);
    let right = t.get(pos + 1).copied();
    let removed = left.map_or(0, |l| u(l, t[pos])) + right.map_or(0, |r| u(t[pos], r));
    let added = match (left, right) {
        (Some(l), Some(r)) => u(l, r),
        _ => 0,
    };
    removed == added
}

impl Resolution {
    pub fn space(&self) -> &QuasimetricSpace {
        &self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn lmax(&self) -> Grade {
        self.lmax
    }

    pub fn basis(&self, n: usize) -> &[Vec<usize>] {
        &self.bases[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases[n].len()
    }

    pub fn index_of(&self, n: usize, tuple: &[usize]) -> Option<usize> {
        self.index.get(n)?.get(tuple).copied()
    }

    /// Total grade of the `i`-th basis element in degree `n`.
    pub fn grade_of(&self, n: usize, i: usize) -> Grade {
        self.space.units_to_grade(self.units[n][i])
    }

    /// `∂_n : P_n → P_{n-1}`; `∂_0` is the empty map.
    pub fn boundary(&self, n: usize) -> &SparseIntMatrix {
        &self.boundaries[n]
    }

    /// The free generator attached to a tuple `(x_0, ..., x_n)`:
    /// `(x_0, x_0, ..., x_n)` on the left, `(x_0, ..., x_n, x_n)` on the right.
    pub fn generator(&self, tuple: &[usize]) -> Vec<usize> {
        let mut g = tuple.to_vec();
        match self.side {
            Side::Left => g.insert(0, tuple[0]),
            Side::Right => g.push(*tuple.last().unwrap()),
        }
        g
    }

    pub fn is_generator(&self, n: usize, i: usize) -> bool {
        let t = &self.bases[n][i];
        match self.side {
            Side::Left => t[0] == t[1],
            Side::Right => t[t.len() - 1] == t[t.len() - 2],
        }
    }

    /// The bar tuple `(x_0, ..., x_n)` of a basis element.
    pub fn bar_part<'a>(&self, tuple: &'a [usize]) -> &'a [usize] {
        match self.side {
            Side::Left => &tuple[1..],
            Side::Right => &tuple[..tuple.len() - 1],
        }
    }

    /// Augmentation `P_0 → S`: `(x, x) ↦ e_x`, every other pair to zero.
    pub fn augmentation(&self) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zeros(self.space.len(), self.dim(0));
        for x in 0..self.space.len() {
            if let Some(j) = self.index_of(0, &[x, x]) {
                m.add_to(x, j, &BigInt::from(1));
            }
        }
        m
    }

    /// Action of a basis pair of `σX` on the `i`-th basis element in degree
    /// `n`: `(..., y)·(y, z) = (..., z)` on the right and
    /// `(z, y)·(y, x_0, ...) = (z, x_0, ...)` on the left, whenever the grade
    /// adds up; otherwise zero.
    pub fn act(&self, n: usize, i: usize, pair: (usize, usize)) -> Result<Option<usize>> {
        let t = &self.bases[n][i];
        let (a, b) = pair;
        let image = match self.side {
            Side::Right => {
                let len = t.len();
                if t[len - 1] != a || !self.space.between_idx(t[len - 2], a, b) {
                    return Ok(None);
                }
                let mut s = t.clone();
                s[len - 1] = b;
                s
            }
            Side::Left => {
                if t[0] != b || !self.space.between_idx(a, b, t[1]) {
                    return Ok(None);
                }
                let mut s = t.clone();
                s[0] = a;
                s
            }
        };
        self.index_of(n, &image).map(Some).ok_or_else(|| {
            Error::ResolutionTooShort(format!("product leaves the grade window ≤ {}", self.lmax))
        })
    }

    /// Grades carried by some basis element, ascending.
    pub fn grades(&self) -> Vec<Grade> {
        let units: BTreeSet<i64> = self.units.iter().flatten().copied().collect();
        units.into_iter().map(|u| self.space.units_to_grade(u)).collect()
    }

    fn in_grade(&self, n: usize, grade: &Grade) -> Vec<usize> {
        let Some(u) = self.space.grade_to_units(grade) else { return Vec::new() };
        (0..self.dim(n)).filter(|&i| self.units[n][i] == u).collect()
    }

    /// `H_n` of the grade-`grade` piece of `P_•` as a complex of abelian
    /// groups, for `n < n_max`.
    pub fn graded_homology(&self, n: usize, grade: &Grade) -> Result<Homology> {
        if n >= self.n_max {
            return Err(Error::DegreeOutOfRange { n, max: self.n_max.saturating_sub(1) });
        }
        let here = self.in_grade(n, grade);
        let above = self.in_grade(n + 1, grade);
        let out = if n == 0 {
            SparseIntMatrix::zeros(0, here.len())
        } else {
            self.boundaries[n].submatrix(&self.in_grade(n - 1, grade), &here)
        };
        let inc = self.boundaries[n + 1].submatrix(&here, &above);
        homology_at(&out, &inc, here.len())
    }

    /// Bidegrees `(n, grade)` where the truncated resolution fails to be
    /// exact: `H_n ≠ 0` for `1 ≤ n < n_max`, or `H_0` not carried onto `S`
    /// isomorphically by the augmentation.
    pub fn exactness_defects(&self) -> Result<Vec<(usize, Grade)>> {
        let mut out = Vec::new();
        let aug = self.augmentation();
        let aug_ok = self.n_max == 0 || aug.mul(&self.boundaries[1]).is_zero();
        for grade in self.grades() {
            let s_dim = if grade.numer() == &0 { self.space.len() } else { 0 };
            if self.n_max > 0 {
                let h0 = self.graded_homology(0, &grade)?;
                let surjective = s_dim == 0 || (0..self.space.len()).all(|x| self.index_of(0, &[x, x]).is_some());
                if !aug_ok || !surjective || h0 != Homology::free(s_dim) {
                    out.push((0, grade));
                }
            }
            for n in 1..self.n_max {
                if !self.graded_homology(n, &grade)?.is_zero() {
                    out.push((n, grade));
                }
            }
        }
        Ok(out)
    }

    /// `∂∘∂ = 0` through the truncation.
    pub fn is_complex(&self) -> bool {
        (2..=self.n_max).all(|n| self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{digraph_to_space, directed_cycle, Digraph};

    fn x2() -> QuasimetricSpace {
        digraph_to_space(&Digraph::new(&["a", "b"], &[("a", "b")]).unwrap())
    }

    fn g(n: i64) -> Grade {
        Grade::from_integer(n)
    }

    #[test]
    fn right_p0_of_x2() {
        let r = bar_resolution(&x2(), Side::Right, 1, &g(1));
        assert_eq!(r.basis(0), &[vec![0, 0], vec![0, 1], vec![1, 1]]);
        let aug = r.augmentation();
        assert_eq!(aug, SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 0, 1]]));
        assert!(r.exactness_defects().unwrap().is_empty());
    }

    #[test]
    fn graded_dimensions_match_free_decomposition() {
        let space = x2();
        for side in [Side::Left, Side::Right] {
            let r = bar_resolution(&space, side, 2, &g(3));
            for n in 0..=2 {
                for l in 0..=3 {
                    let direct = (0..r.dim(n)).filter(|&i| r.grade_of(n, i) == g(l)).count();
                    // one copy of e_{x}σX (or σX e_x) shifted by |t| per bar tuple t
                    let mut via_generators = 0;
                    for (pts, u) in tuples_by_units(&space, n + 1, UnitBound::AtMost(l), false, None) {
                        let end = match side {
                            Side::Right => *pts.last().unwrap(),
                            Side::Left => pts[0],
                        };
                        via_generators += (0..space.len())
                            .filter(|&y| {
                                let d = match side {
                                    Side::Right => space.units(end, y),
                                    Side::Left => space.units(y, end),
                                };
                                d == Some(l - u)
                            })
                            .count();
                    }
                    assert_eq!(direct, via_generators, "{side:?} n={n} l={l}");
                }
            }
        }
    }

    #[test]
    fn exact_over_c3() {
        let c3 = digraph_to_space(&directed_cycle(3));
        for side in [Side::Left, Side::Right] {
            let r = bar_resolution(&c3, side, 3, &g(2));
            assert!(r.is_complex());
            for l in 0..=2 {
                assert!(r.graded_homology(1, &g(l)).unwrap().is_zero());
            }
            assert!(r.exactness_defects().unwrap().is_empty());
        }
    }

    #[test]
    fn actions() {
        let c3 = digraph_to_space(&directed_cycle(3));
        let r = bar_resolution(&c3, Side::Right, 1, &g(2));
        let i = r.index_of(0, &[0, 0]).unwrap();
        let j = r.act(0, i, (0, 1)).unwrap().unwrap();
        assert_eq!(r.basis(0)[j], vec![0, 1]);
        let k = r.act(0, j, (1, 2)).unwrap().unwrap();
        assert_eq!(r.basis(0)[k], vec![0, 2]);
        assert!(matches!(r.act(0, k, (2, 0)), Ok(None)));
        let i = r.index_of(1, &[0, 2, 2]).unwrap();
        assert!(matches!(r.act(1, i, (2, 0)), Err(Error::ResolutionTooShort(_))));
        let l = bar_resolution(&c3, Side::Left, 1, &g(2));
        let i = l.index_of(0, &[1, 1]).unwrap();
        let j = l.act(0, i, (0, 1)).unwrap().unwrap();
        assert_eq!(l.basis(0)[j], vec![0, 1]);
    }
}
