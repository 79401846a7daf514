//! The magnitude cohomology ring over a field: cocycle bases, the cup
//! product, and the Yoneda product through explicit lifts along the left bar
//! resolution.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Resolution, Side};
use crate::chain::{attainable_grades, enumerate_tuples, magnitude_complex, Tuple};
use crate::error::{Error, Result};
use crate::linalg::{dense_kernel, rref, solve, Field, FieldMatrix};
use crate::space::{Grade, QuasimetricSpace};

/// A normalized cochain of bidegree `(n, grade)`, stored by its nonzero values.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<E> {
    space: Arc<QuasimetricSpace>,
    n: usize,
    grade: Grade,
    values: BTreeMap<Vec<usize>, E>,
}

impl<E: Clone + PartialEq> Cochain<E> {
    pub fn zero(space: &Arc<QuasimetricSpace>, n: usize, grade: Grade) -> Self {
        Cochain { space: space.clone(), n, grade, values: BTreeMap::new() }
    }

    /// Builds a cochain from explicit values, rejecting tuples outside the
    /// support of `MC^{n, grade}`.
    pub fn from_values<F: Field<Elem = E>>(
        field: &F,
        space: &Arc<QuasimetricSpace>,
        n: usize,
        grade: Grade,
        values: impl IntoIterator<Item = (Vec<usize>, E)>,
    ) -> Result<Self> {
        let mut c = Cochain::zero(space, n, grade);
        for (t, v) in values {
            let ok = t.len() == n + 1
                && t.iter().all(|&p| p < space.len())
                && t.windows(2).all(|w| w[0] != w[1])
                && space.tuple_grade(&t) == Some(grade);
            if !ok {
                return Err(Error::Input(format!("tuple {t:?} is not a generator of bidegree ({n}, {grade})")));
            }
            c.set(field, t, v);
        }
        Ok(c)
    }

    /// The dual basis cochain of a normalized tuple.
    pub fn dual<F: Field<Elem = E>>(field: &F, space: &Arc<QuasimetricSpace>, tuple: &[usize]) -> Result<Self> {
        let grade = space.tuple_grade(tuple).ok_or_else(|| Error::Input(format!("tuple {tuple:?} has infinite grade")))?;
        Cochain::from_values(field, space, tuple.len() - 1, grade, [(tuple.to_vec(), field.one())])
    }

    /// The unit of the ring: `u(x) = 1` for every point.
    pub fn unit<F: Field<Elem = E>>(field: &F, space: &Arc<QuasimetricSpace>) -> Self {
        let mut c = Cochain::zero(space, 0, Grade::from_integer(0));
        for x in 0..space.len() {
            c.set(field, vec![x], field.one());
        }
        c
    }

    fn set<F: Field<Elem = E>>(&mut self, field: &F, t: Vec<usize>, v: E) {
        if field.is_zero(&v) {
            self.values.remove(&t);
        } else {
            self.values.insert(t, v);
        }
    }

    pub fn space(&self) -> &Arc<QuasimetricSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, E> {
        &self.values
    }

    pub fn get<F: Field<Elem = E>>(&self, field: &F, t: &[usize]) -> E {
        self.values.get(t).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn to_vector<F: Field<Elem = E>>(&self, field: &F, basis: &[Tuple]) -> Vec<E> {
        basis.iter().map(|t| self.get(field, &t.pts)).collect()
    }

    fn from_vector<F: Field<Elem = E>>(
        field: &F,
        space: &Arc<QuasimetricSpace>,
        n: usize,
        grade: Grade,
        basis: &[Tuple],
        v: &[E],
    ) -> Self {
        let mut c = Cochain::zero(space, n, grade);
        for (t, e) in basis.iter().zip(v) {
            c.set(field, t.pts.clone(), e.clone());
        }
        c
    }
}

fn same_space(a: &QuasimetricSpace, b: &QuasimetricSpace) -> Result<()> {
    if a != b {
        return Err(Error::SpaceMismatch("cochains live over different spaces".into()));
    }
    Ok(())
}

/// `δc(z) = Σ_i (-1)^i c(d_i z)` on normalized tuples of degree `n + 1`.
pub fn coboundary<F: Field>(field: &F, c: &Cochain<F::Elem>) -> Cochain<F::Elem> {
    let chain = magnitude_complex(&c.space, &c.grade, c.n);
    let mut out = Cochain::zero(&c.space, c.n + 1, c.grade);
    let rows = chain.basis(c.n);
    for (z, col) in chain.boundary(c.n + 1).columns().into_iter().enumerate() {
        let mut acc = field.zero();
        for (r, v) in col {
            acc = field.add(&acc, &field.mul(&field.from_int(&v), &c.get(field, &rows[r].pts)));
        }
        out.set(field, chain.basis(c.n + 1)[z].pts.clone(), acc);
    }
    out
}

pub fn is_cocycle<F: Field>(field: &F, c: &Cochain<F::Elem>) -> bool {
    coboundary(field, c).is_zero()
}

/// `(ψ·φ)(x_0, ..., x_{m+n}) = ψ(x_0, ..., x_m)·φ(x_m, ..., x_{m+n})`,
/// split after `ψ`'s arity.
pub fn cup<F: Field>(field: &F, psi: &Cochain<F::Elem>, phi: &Cochain<F::Elem>) -> Result<Cochain<F::Elem>> {
    same_space(&psi.space, &phi.space)?;
    let space = &psi.space;
    let mut out = Cochain::zero(space, psi.n + phi.n, psi.grade + phi.grade);
    for (front, a) in &psi.values {
        for (back, b) in phi.values.range(vec![*front.last().unwrap()]..) {
            if back[0] != *front.last().unwrap() {
                break;
            }
            if space.tuple_grade(front) != Some(psi.grade) || space.tuple_grade(back) != Some(phi.grade) {
                continue;
            }
            let mut t = front.clone();
            t.extend_from_slice(&back[1..]);
            let v = field.add(&out.get(field, &t), &field.mul(a, b));
            out.set(field, t, v);
        }
    }
    Ok(out)
}

/// A basis of `MH^{n, grade}` by explicit cocycle representatives.
#[derive(Debug, Clone)]
pub struct CohomologyClassSet<E> {
    space: Arc<QuasimetricSpace>,
    n: usize,
    grade: Grade,
    basis: Vec<Tuple>,
    reps: Vec<Vec<E>>,
    boundaries: Vec<Vec<E>>,
    cocycle_rows: Vec<Vec<E>>,
}

/// Cocycles are a kernel basis of `δ_n` in reduced echelon form; those
/// independent of the coboundaries, taken in order, represent the classes.
pub fn cohomology_classes<F: Field>(
    field: &F,
    space: &Arc<QuasimetricSpace>,
    n: usize,
    grade: &Grade,
) -> Result<CohomologyClassSet<F::Elem>> {
    field.kind().checked()?;
    let chain = magnitude_complex(space, grade, n);
    let basis = chain.basis(n).to_vec();
    let cocycle_rows = chain.boundary(n + 1).transpose().to_field_rows(field);
    let cocycles = dense_kernel(field, &cocycle_rows, basis.len());
    let mut boundaries = chain.boundary(n).to_field_rows(field);
    rref(field, &mut boundaries);
    let mut reps: Vec<Vec<F::Elem>> = Vec::new();
    let mut span = boundaries.clone();
    for z in cocycles {
        let mut trial = span.clone();
        trial.push(z.clone());
        let before = span.len();
        rref(field, &mut trial);
        if trial.len() > before {
            span = trial;
            reps.push(z);
        }
    }
    Ok(CohomologyClassSet { space: space.clone(), n, grade: *grade, basis, reps, boundaries, cocycle_rows })
}

impl<E: Clone + PartialEq + std::fmt::Debug> CohomologyClassSet<E> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative<F: Field<Elem = E>>(&self, field: &F, i: usize) -> Cochain<E> {
        Cochain::from_vector(field, &self.space, self.n, self.grade, &self.basis, &self.reps[i])
    }

    pub fn representatives<F: Field<Elem = E>>(&self, field: &F) -> Vec<Cochain<E>> {
        (0..self.len()).map(|i| self.representative(field, i)).collect()
    }

    fn check_bidegree(&self, c: &Cochain<E>) -> Result<()> {
        same_space(&self.space, &c.space)?;
        if c.n != self.n || c.grade != self.grade {
            return Err(Error::Input(format!(
                "cochain of bidegree ({}, {}) given to classes of bidegree ({}, {})",
                c.n, c.grade, self.n, self.grade
            )));
        }
        Ok(())
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn coordinates<F: Field<Elem = E>>(&self, field: &F, c: &Cochain<E>) -> Result<Vec<E>> {
        self.check_bidegree(c)?;
        let v = c.to_vector(field, &self.basis);
        let delta_zero = self.cocycle_rows.iter().all(|row| {
            let dot = row.iter().zip(&v).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)));
            field.is_zero(&dot)
        });
        if !delta_zero {
            return Err(Error::NotACocycle);
        }
        if self.basis.is_empty() {
            return Ok(Vec::new());
        }
        let columns: Vec<Vec<E>> = self.reps.iter().chain(&self.boundaries).cloned().collect();
        let x = solve(field, &columns, &v).expect("cocycles are spanned by representatives and coboundaries");
        Ok(x[..self.reps.len()].to_vec())
    }

    pub fn is_coboundary<F: Field<Elem = E>>(&self, field: &F, c: &Cochain<E>) -> Result<bool> {
        self.check_bidegree(c)?;
        if self.basis.is_empty() {
            return Ok(true);
        }
        let v = c.to_vector(field, &self.basis);
        Ok(solve(field, &self.boundaries, &v).is_some())
    }
}

/// Whether a cochain lies in the image of `δ`.
pub fn is_coboundary<F: Field>(field: &F, c: &Cochain<F::Elem>) -> Result<bool> {
    cohomology_classes(field, &c.space, c.n, &c.grade)?.is_coboundary(field, c)
}

fn check_left(res: &Resolution, space: &QuasimetricSpace) -> Result<()> {
    if res.side() != Side::Left {
        return Err(Error::Input("Yoneda lifts use the left resolution".into()));
    }
    same_space(res.space(), space)
}

/// `φ̂_k : P_{n+k} → P_k`, `(y, x_0, ..., x_{n+k}) ↦ φ(x_k, ..., x_{n+k})·(y, x_0, ..., x_k)`.
pub fn yoneda_lift<F: Field>(field: &F, res: &Resolution, phi: &Cochain<F::Elem>, k: usize) -> Result<FieldMatrix<F::Elem>> {
    check_left(res, &phi.space)?;
    let n = phi.n;
    if n + k > res.n_max() {
        return Err(Error::ResolutionTooShort(format!("lift needs degree {} but n_max = {}", n + k, res.n_max())));
    }
    let mut m = FieldMatrix::zeros(res.dim(k), res.dim(n + k));
    for (j, t) in res.basis(n + k).iter().enumerate() {
        // t = (y, x_0, ..., x_{n+k}); φ reads x_k..x_{n+k}
        let Some(v) = phi.values.get(&t[k + 1..]) else { continue };
        let target = &t[..k + 2];
        let row = res.index_of(k, target).ok_or_else(|| {
            Error::ResolutionTooShort(format!("lift target {target:?} lies outside the grade window"))
        })?;
        m.add_to(field, row, j, v);
    }
    Ok(m)
}

/// `∂_k ∘ φ̂_k = φ̂_{k-1} ∘ ∂_{n+k}` as an exact matrix identity, `k ≥ 1`.
pub fn check_lift_commutes<F: Field>(field: &F, res: &Resolution, phi: &Cochain<F::Elem>, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Input("the commuting square starts at k = 1".into()));
    }
    let top = yoneda_lift(field, res, phi, k)?;
    let bottom = yoneda_lift(field, res, phi, k - 1)?;
    let dk = FieldMatrix::from_int(field, res.boundary(k));
    let dnk = FieldMatrix::from_int(field, res.boundary(phi.n + k));
    Ok(dk.mul(field, &top).same_as(&bottom.mul(field, &dnk)))
}

/// `[ψ]∘[φ]` at chain level: `ψ̂ ∘ φ̂_m` evaluated on the generators of
/// `P_{n+m}`, where `ψ̂(y, x_0, ..., x_m) = ψ(x_0, ..., x_m)` if `y = x_0`.
pub fn yoneda_product<F: Field>(
    field: &F,
    res: &Resolution,
    psi: &Cochain<F::Elem>,
    phi: &Cochain<F::Elem>,
) -> Result<Cochain<F::Elem>> {
    same_space(&psi.space, &phi.space)?;
    if !is_cocycle(field, psi) || !is_cocycle(field, phi) {
        return Err(Error::NotACocycle);
    }
    let total = psi.grade + phi.grade;
    if total > res.lmax() {
        return Err(Error::ResolutionTooShort(format!("grade {total} exceeds the window {}", res.lmax())));
    }
    let m = psi.n;
    let lift = yoneda_lift(field, res, phi, m)?;
    let psi_hat: Vec<F::Elem> = res
        .basis(m)
        .iter()
        .map(|t| if t[0] == t[1] { psi.get(field, &t[1..]) } else { field.zero() })
        .collect();
    let space = psi.space.clone();
    let mut out = Cochain::zero(&space, m + phi.n, total);
    for t in enumerate_tuples(&space, m + phi.n, &total, true) {
        let g = res.generator(&t.pts);
        let col = res.index_of(m + phi.n, &g).expect("generator within the window");
        let mut acc = field.zero();
        for (r, v) in lift.column(col) {
            acc = field.add(&acc, &field.mul(&psi_hat[*r], v));
        }
        out.set(field, t.pts, acc);
    }
    Ok(out)
}

/// One structure constant block: `lhs · rhs = Σ coeff · class[index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductEntry<E> {
    pub lhs: (usize, Grade, usize),
    pub rhs: (usize, Grade, usize),
    pub result: Vec<(E, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingTable<E> {
    pub classes: BTreeMap<(usize, Grade), usize>,
    pub products: Vec<ProductEntry<E>>,
}

/// Cup products of all representative pairs whose product bidegree stays
/// within `n ≤ n_max`, `grade ≤ lmax`, expanded in the target class basis.
pub fn ring_table<F: Field>(field: &F, space: &QuasimetricSpace, n_max: usize, lmax: &Grade) -> Result<RingTable<F::Elem>> {
    field.kind().checked()?;
    let space = Arc::new(space.clone());
    let grades = attainable_grades(&space, lmax);
    let mut sets: BTreeMap<(usize, Grade), CohomologyClassSet<F::Elem>> = BTreeMap::new();
    for n in 0..=n_max {
        for g in &grades {
            sets.insert((n, *g), cohomology_classes(field, &space, n, g)?);
        }
    }
    let classes = sets.iter().map(|(k, s)| (*k, s.len())).collect();
    let mut products = Vec::new();
    for ((n, l), a) in &sets {
        for ((m, s), b) in &sets {
            if n + m > n_max || *l + *s > *lmax || a.is_empty() || b.is_empty() {
                continue;
            }
            let target = match sets.get(&(n + m, *l + *s)) {
                Some(t) => t.clone(),
                None => cohomology_classes(field, &space, n + m, &(*l + *s))?,
            };
            for i in 0..a.len() {
                let psi = a.representative(field, i);
                for j in 0..b.len() {
                    let phi = b.representative(field, j);
                    let coords = target.coordinates(field, &cup(field, &psi, &phi)?)?;
                    let result = coords.into_iter().enumerate().filter(|(_, c)| !field.is_zero(c)).map(|(k, c)| (c, k)).collect();
                    products.push(ProductEntry { lhs: (*n, *l, i), rhs: (*m, *s, j), result });
                }
            }
        }
    }
    Ok(RingTable { classes, products })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bar_resolution;
    use crate::linalg::{PrimeField, Rationals};
    use crate::space::{digraph_to_space, directed_cycle, Digraph};

    fn k2() -> Arc<QuasimetricSpace> {
        Arc::new(digraph_to_space(&Digraph::new(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap()))
    }

    fn g(n: i64) -> Grade {
        Grade::from_integer(n)
    }

    #[test]
    fn class_counts() {
        let q = Rationals;
        let k2 = k2();
        let c = cohomology_classes(&q, &k2, 1, &g(1)).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(cohomology_classes(&q, &k2, 0, &g(0)).unwrap().len(), 2);
        assert_eq!(cohomology_classes(&q, &k2, 1, &g(2)).unwrap().len(), 0);
        let duals: Vec<Vec<usize>> = c.representatives(&q).iter().map(|r| r.values().keys().next().unwrap().clone()).collect();
        assert_eq!(duals, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn cup_examples() {
        let q = Rationals;
        let k2 = k2();
        let xy = Cochain::dual(&q, &k2, &[0, 1]).unwrap();
        let yx = Cochain::dual(&q, &k2, &[1, 0]).unwrap();
        let p = cup(&q, &xy, &yx).unwrap();
        assert_eq!(p.values().len(), 1);
        assert_eq!(p.get(&q, &[0, 1, 0]), q.one());
        assert!(cup(&q, &xy, &xy).unwrap().is_zero());
        let u = Cochain::unit(&q, &k2);
        assert_eq!(cup(&q, &u, &xy).unwrap(), xy);
        assert_eq!(cup(&q, &xy, &u).unwrap(), xy);
    }

    #[test]
    fn yoneda_agrees_with_cup_on_k2() {
        let q = Rationals;
        let k2 = k2();
        let res = bar_resolution(&k2, Side::Left, 3, &g(3));
        let xy = Cochain::dual(&q, &k2, &[0, 1]).unwrap();
        let yx = Cochain::dual(&q, &k2, &[1, 0]).unwrap();
        assert_eq!(yoneda_product(&q, &res, &xy, &yx).unwrap(), cup(&q, &xy, &yx).unwrap());
        for k in 1..=2 {
            assert!(check_lift_commutes(&q, &res, &xy, k).unwrap());
        }
        let zero = Cochain::zero(&k2, 1, g(1));
        assert!(yoneda_lift(&q, &res, &zero, 1).unwrap().is_zero());
    }

    #[test]
    fn lift_zero_and_too_short() {
        let q = Rationals;
        let k2 = k2();
        let res = bar_resolution(&k2, Side::Left, 1, &g(2));
        let xy = Cochain::dual(&q, &k2, &[0, 1]).unwrap();
        assert!(matches!(yoneda_lift(&q, &res, &xy, 1), Err(Error::ResolutionTooShort(_))));
    }

    #[test]
    fn not_a_cocycle() {
        let q = Rationals;
        let c3 = Arc::new(digraph_to_space(&directed_cycle(3)));
        let ac = Cochain::dual(&q, &c3, &[0, 2]).unwrap();
        assert!(!is_cocycle(&q, &ac));
        let res = bar_resolution(&c3, Side::Left, 3, &g(4));
        assert_eq!(yoneda_product(&q, &res, &ac, &ac), Err(Error::NotACocycle));
        let classes = cohomology_classes(&q, &c3, 1, &g(2)).unwrap();
        assert_eq!(classes.coordinates(&q, &ac), Err(Error::NotACocycle));
    }

    #[test]
    fn k2_ring_table() {
        let q = Rationals;
        let t = ring_table(&q, &k2(), 2, &g(2)).unwrap();
        assert_eq!(t.classes[&(0, g(0))], 2);
        assert_eq!(t.classes[&(1, g(1))], 2);
        assert_eq!(t.classes[&(2, g(2))], 2);
        let hits: Vec<&ProductEntry<_>> = t.products.iter().filter(|p| p.lhs.0 == 1 && p.rhs.0 == 1).collect();
        assert_eq!(hits.len(), 4);
        let nonzero = hits.iter().filter(|p| !p.result.is_empty()).count();
        assert_eq!(nonzero, 2);
        let f2 = PrimeField::new(2).unwrap();
        assert!(ring_table(&f2, &k2(), 2, &g(2)).is_ok());
    }
}
