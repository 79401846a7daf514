//! The distance algebra `σX`, its quotient `S`, bar resolutions, Tor/Ext and
//! the bound-quiver presentation of digraphs.

pub mod derived;
pub mod quiver;
pub mod resolution;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::space::{Grade, QuasimetricSpace};

pub use derived::{ext_bidegree, ext_bidegree_with, tor_bidegree, tor_bidegree_with, tor_dim_over};
pub use quiver::{
    check_bound_quiver_presentation, check_representation_relations, quiver_relations, GradeReport, Path,
    PresentationReport, QuiverRelations, QuiverRepresentation,
};
pub use resolution::{bar_resolution, Resolution, Side};

/// Finite integer combination of basis pairs `(x, y)`.
pub type AlgebraElement = BTreeMap<(usize, usize), BigInt>;

/// `σX`: free on pairs `(x, y)` with `d(x, y) < ∞`, graded by distance, with
/// `(x, y)·(y, z) = (x, z)` when `y` is between `x` and `z` and zero otherwise.
#[derive(Debug, Clone)]
pub struct DistanceAlgebra {
    space: QuasimetricSpace,
    basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

pub fn build_distance_algebra(space: &QuasimetricSpace) -> DistanceAlgebra {
    let n = space.len();
    let basis: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| space.units(x, y).is_some()).collect();
    let index = basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    DistanceAlgebra { space: space.clone(), basis, index }
}

impl DistanceAlgebra {
    pub fn space(&self) -> &QuasimetricSpace {
        &self.space
    }

    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.index.contains_key(&pair)
    }

    pub fn degree(&self, pair: (usize, usize)) -> Option<Grade> {
        self.space.dist(pair.0, pair.1).finite()
    }

    /// Product of two basis pairs.
    pub fn multiply_basis(&self, a: (usize, usize), b: (usize, usize)) -> Option<(usize, usize)> {
        (a.1 == b.0 && self.space.between_idx(a.0, a.1, b.1)).then_some((a.0, b.1))
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::new();
        for (&p, u) in a {
            for (&q, v) in b {
                if let Some(r) = self.multiply_basis(p, q) {
                    let e = out.entry(r).or_insert_with(BigInt::zero);
                    *e += u * v;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn basis_element(&self, pair: (usize, usize)) -> AlgebraElement {
        assert!(self.contains(pair), "({}, {}) is not a basis pair", pair.0, pair.1);
        AlgebraElement::from([(pair, BigInt::one())])
    }

    pub fn idempotent(&self, x: usize) -> AlgebraElement {
        self.basis_element((x, x))
    }

    /// `1 = Σ_x e_x`.
    pub fn unit(&self) -> AlgebraElement {
        (0..self.space.len()).map(|x| ((x, x), BigInt::one())).collect()
    }

    /// Splits an element into homogeneous parts by degree.
    pub fn homogeneous_parts(&self, a: &AlgebraElement) -> BTreeMap<Grade, AlgebraElement> {
        let mut out: BTreeMap<Grade, AlgebraElement> = BTreeMap::new();
        for (&p, v) in a {
            out.entry(self.degree(p).expect("basis pair")).or_default().insert(p, v.clone());
        }
        out
    }

    /// Exhaustive associativity check on basis triples.
    pub fn is_associative(&self) -> bool {
        for &a in &self.basis {
            for &b in &self.basis {
                let ab = self.multiply_basis(a, b);
                for &c in &self.basis {
                    let left = ab.and_then(|ab| self.multiply_basis(ab, c));
                    let right = self.multiply_basis(b, c).and_then(|bc| self.multiply_basis(a, bc));
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Basis pairs spanning `(JX)^k`, where `JX` is spanned by the
    /// positive-degree pairs. Products of basis pairs are basis pairs or zero,
    /// so the span of these pairs is exactly the `k`-th power.
    pub fn radical_power(&self, k: usize) -> BTreeSet<(usize, usize)> {
        let positive: BTreeSet<(usize, usize)> = self.basis.iter().copied().filter(|&(x, y)| x != y).collect();
        if k == 0 {
            return self.basis.iter().copied().collect();
        }
        let mut cur = positive.clone();
        for _ in 1..k {
            let mut next = BTreeSet::new();
            for &p in &cur {
                for &q in &positive {
                    if let Some(r) = self.multiply_basis(p, q) {
                        next.insert(r);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Smallest `k` with `(JX)^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        let mut k = 1;
        while !self.radical_power(k).is_empty() {
            k += 1;
        }
        k
    }

    pub fn quotient_module_s(&self) -> QuotientModuleS {
        QuotientModuleS { points: self.space.len() }
    }
}

/// `S = σX / JX`: one copy of the ground ring per point, in grade 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientModuleS {
    points: usize,
}

impl QuotientModuleS {
    pub fn dim(&self, grade: &Grade) -> usize {
        if grade.numer() == &0 {
            self.points
        } else {
            0
        }
    }

    /// `e_x·(a, b)` in `S`: `Some(x)` (that is, `e_x`) iff `a = b = x`.
    pub fn act_right(&self, x: usize, pair: (usize, usize)) -> Option<usize> {
        (pair.0 == x && pair.1 == x).then_some(x)
    }

    /// `(a, b)·e_x` in `S`.
    pub fn act_left(&self, pair: (usize, usize), x: usize) -> Option<usize> {
        (pair.0 == x && pair.1 == x).then_some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{digraph_to_space, Digraph};

    fn c3() -> DistanceAlgebra {
        build_distance_algebra(&digraph_to_space(
            &Digraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap(),
        ))
    }

    #[test]
    fn c3_products() {
        let alg = c3();
        assert_eq!(alg.multiply_basis((0, 1), (1, 2)), Some((0, 2)));
        assert_eq!(alg.multiply_basis((0, 1), (1, 0)), None);
        assert_eq!(alg.multiply_basis((0, 0), (0, 1)), Some((0, 1)));
        assert_eq!(alg.multiply_basis((0, 1), (1, 1)), Some((0, 1)));
        let mut sum = alg.basis_element((0, 1));
        sum.insert((1, 2), BigInt::one());
        assert_eq!(alg.multiply(&sum, &alg.basis_element((2, 0))), alg.basis_element((1, 0)));
        assert_eq!(alg.degree((0, 2)), Some(Grade::from_integer(2)));
    }

    #[test]
    fn unit_and_associativity() {
        let alg = c3();
        assert!(alg.is_associative());
        for &p in alg.basis() {
            let e = alg.basis_element(p);
            assert_eq!(alg.multiply(&e, &alg.unit()), e);
            assert_eq!(alg.multiply(&alg.unit(), &e), e);
        }
        for x in 0..3 {
            let ex = alg.idempotent(x);
            assert_eq!(alg.multiply(&ex, &ex), ex);
            assert!(alg.multiply(&ex, &alg.idempotent((x + 1) % 3)).is_empty());
        }
    }

    #[test]
    fn nilpotent_radical() {
        let alg = c3();
        assert!(alg.radical_power(3).is_empty());
        assert_eq!(alg.radical_power(2).len(), 3);
        assert_eq!(alg.nilpotency_index(), 3);
    }

    #[test]
    fn module_s() {
        let s = c3().quotient_module_s();
        assert_eq!(s.dim(&Grade::from_integer(0)), 3);
        assert_eq!(s.dim(&Grade::from_integer(1)), 0);
        assert_eq!(s.act_right(0, (0, 0)), Some(0));
        assert_eq!(s.act_right(0, (0, 1)), None);
        assert_eq!(s.act_right(0, (1, 1)), None);
    }
}
