//! Normalized magnitude chain and cochain complexes in a fixed grade.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::distmod::DistanceModule;
use crate::error::{Error, Result};
use crate::linalg::{field::reduce_mod, homology_at, homology_dim_over, rank_over_field, FieldKind, HomologySummary, SparseIntMatrix};
use crate::space::{format_grade, Grade, QuasimetricSpace};

/// A tuple of points `(x_0, ..., x_n)` with its grade `Σ d(x_i, x_{i+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    pub pts: Vec<usize>,
    pub grade: Grade,
}

impl Tuple {
    pub fn degree(&self) -> usize {
        self.pts.len() - 1
    }

    pub fn is_normalized(&self) -> bool {
        self.pts.windows(2).all(|w| w[0] != w[1])
    }

    pub fn render(&self, space: &QuasimetricSpace) -> String {
        let labels: Vec<&str> = self.pts.iter().map(|&p| space.label(p)).collect();
        format!("({})", labels.join(","))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum UnitBound {
    Exact(i64),
    AtMost(i64),
}

impl UnitBound {
    fn limit(self) -> i64 {
        match self {
            UnitBound::Exact(t) | UnitBound::AtMost(t) => t,
        }
    }
}

/// Depth-first enumeration of `len`-point tuples with finite steps, in
/// lexicographic order of point indices.
pub(crate) fn tuples_by_units(
    space: &QuasimetricSpace,
    len: usize,
    bound: UnitBound,
    normalized: bool,
    start: Option<usize>,
) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    if len == 0 || bound.limit() < 0 {
        return out;
    }
    let min_step = if normalized { space.min_positive_units().unwrap_or(i64::MAX / 4) } else { 0 };
    if normalized && len > 1 && space.min_positive_units().is_none() {
        return out;
    }
    let starts: Vec<usize> = match start {
        Some(s) => vec![s],
        None => (0..space.len()).collect(),
    };
    let mut cur = Vec::with_capacity(len);
    for s in starts {
        cur.clear();
        cur.push(s);
        extend(space, len, bound, normalized, min_step, &mut cur, 0, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    space: &QuasimetricSpace,
    len: usize,
    bound: UnitBound,
    normalized: bool,
    min_step: i64,
    cur: &mut Vec<usize>,
    acc: i64,
    out: &mut Vec<(Vec<usize>, i64)>,
) {
    if cur.len() == len {
        let keep = match bound {
            UnitBound::Exact(t) => acc == t,
            UnitBound::AtMost(t) => acc <= t,
        };
        if keep {
            out.push((cur.clone(), acc));
        }
        return;
    }
    let limit = bound.limit();
    let last = *cur.last().unwrap();
    let steps_after = (len - cur.len() - 1) as i64;
    for y in 0..space.len() {
        if normalized && y == last {
            continue;
        }
        let Some(u) = space.units(last, y) else { continue };
        let a = acc + u;
        if a + steps_after * min_step > limit {
            continue;
        }
        cur.push(y);
        extend(space, len, bound, normalized, min_step, cur, a, out);
        cur.pop();
    }
}

/// Tuples of `n + 1` points of grade exactly `grade`, consecutive-distinct
/// when `normalized`, sorted lexicographically.
pub fn enumerate_tuples(space: &QuasimetricSpace, n: usize, grade: &Grade, normalized: bool) -> Vec<Tuple> {
    let Some(target) = space.grade_to_units(grade) else {
        return Vec::new();
    };
    tuples_by_units(space, n + 1, UnitBound::Exact(target), normalized, None)
        .into_iter()
        .map(|(pts, _)| Tuple { pts, grade: *grade })
        .collect()
}

/// Grades `≤ max_grade` carried by some normalized tuple, ascending.
pub fn attainable_grades(space: &QuasimetricSpace, max_grade: &Grade) -> Vec<Grade> {
    let Some(limit) = floor_units(space, max_grade) else {
        return Vec::new();
    };
    let n = space.len();
    // reach[u] = points at which a normalized tuple of grade u can end
    let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); (limit + 1) as usize];
    reach[0] = (0..n).collect();
    for u in 0..=limit {
        let ends: Vec<usize> = reach[u as usize].iter().copied().collect();
        for x in ends {
            for y in 0..n {
                if y == x {
                    continue;
                }
                if let Some(d) = space.units(x, y) {
                    if u + d <= limit {
                        reach[(u + d) as usize].insert(y);
                    }
                }
            }
        }
    }
    (0..=limit).filter(|&u| !reach[u as usize].is_empty()).map(|u| space.units_to_grade(u)).collect()
}

fn floor_units(space: &QuasimetricSpace, g: &Grade) -> Option<i64> {
    if *g < Grade::from_integer(0) {
        return None;
    }
    Some((*g * Grade::from_integer(space.scale())).floor().to_integer())
}

/// Chain complex of free abelian groups on explicit labelled bases.
///
/// Degrees `0..=n_max + 1` are stored so homology is exact through `n_max`.
#[derive(Debug, Clone)]
pub struct BasedComplex<L> {
    grade: Grade,
    n_max: usize,
    bases: Vec<Vec<L>>,
    boundaries: Vec<SparseIntMatrix>,
}

impl<L> BasedComplex<L> {
    pub(crate) fn from_parts(grade: Grade, n_max: usize, bases: Vec<Vec<L>>, boundaries: Vec<SparseIntMatrix>) -> Self {
        debug_assert_eq!(bases.len(), boundaries.len());
        BasedComplex { grade, n_max, bases, boundaries }
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &[L] {
        &self.bases[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, |b| b.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    /// `∂_n : C_n → C_{n-1}`; `∂_0` is the empty map.
    pub fn boundary(&self, n: usize) -> &SparseIntMatrix {
        &self.boundaries[n]
    }

    pub fn boundaries(&self) -> &[SparseIntMatrix] {
        &self.boundaries
    }

    /// `∂_n ∘ ∂_{n+1} = 0` for every stored pair.
    pub fn is_chain_complex(&self) -> bool {
        (1..self.boundaries.len()).all(|n| self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
    }

    pub fn homology(&self, n: usize) -> Result<HomologySummary> {
        if n > self.n_max {
            return Err(Error::DegreeOutOfRange { n, max: self.n_max });
        }
        let h = homology_at(&self.boundaries[n], &self.boundaries[n + 1], self.dim(n))?;
        Ok(HomologySummary::new(n, self.grade, h))
    }

    pub fn homology_dim(&self, n: usize, field: FieldKind) -> Result<usize> {
        if n > self.n_max {
            return Err(Error::DegreeOutOfRange { n, max: self.n_max });
        }
        homology_dim_over(&self.boundaries[n], &self.boundaries[n + 1], self.dim(n), field)
    }

    /// Euler characteristic `Σ (-1)^n dim C_n` over the stored degrees.
    pub fn euler_characteristic(&self) -> i64 {
        self.bases.iter().enumerate().map(|(n, b)| if n % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) }).sum()
    }
}

fn sign(i: usize) -> BigInt {
    if i % 2 == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// Normalized magnitude chain complex `MC_{•,ℓ}` with integer coefficients.
///
/// `∂ = Σ_{i=1}^{n-1} (-1)^i d_i`, where `d_i` deletes `x_i` when `x_{i-1}`,
/// `x_i`, `x_{i+1}` are collinear in the betweenness sense and is zero
/// otherwise. Outer faces vanish on normalized generators.
pub fn magnitude_complex(space: &QuasimetricSpace, grade: &Grade, n_max: usize) -> BasedComplex<Tuple> {
    let bases: Vec<Vec<Tuple>> = (0..=n_max + 1).map(|n| enumerate_tuples(space, n, grade, true)).collect();
    let index: Vec<HashMap<&[usize], usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, t)| (t.pts.as_slice(), i)).collect())
        .collect();
    let mut boundaries = vec![SparseIntMatrix::zeros(0, bases[0].len())];
    for n in 1..=n_max + 1 {
        let mut d = SparseIntMatrix::zeros(bases[n - 1].len(), bases[n].len());
        let mut face = Vec::with_capacity(n);
        for (j, t) in bases[n].iter().enumerate() {
            for i in 1..n {
                let p = &t.pts;
                if !space.between_idx(p[i - 1], p[i], p[i + 1]) {
                    continue;
                }
                face.clear();
                face.extend_from_slice(&p[..i]);
                face.extend_from_slice(&p[i + 1..]);
                let row = index[n - 1][face.as_slice()];
                d.add_to(row, j, &sign(i));
            }
        }
        boundaries.push(d);
    }
    BasedComplex::from_parts(*grade, n_max, bases, boundaries)
}

/// Generator `m ⊗ (x_0, ..., x_n)` of the complex with coefficients: the
/// `element`-th basis vector of `M(x_0)` in grade `ℓ - |x_0, ..., x_n|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientGenerator {
    pub tuple: Tuple,
    pub element: usize,
}

impl fmt::Display for CoefficientGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}⊗{:?}@{}", self.element, self.tuple.pts, format_grade(&self.tuple.grade))
    }
}

/// Normalized magnitude chain complex `MC_{•,ℓ}(X, M)` with coefficients in a
/// validated distance module.
pub fn magnitude_complex_with_coefficients(
    space: &QuasimetricSpace,
    module: &DistanceModule,
    grade: &Grade,
    n_max: usize,
) -> Result<BasedComplex<CoefficientGenerator>> {
    if !module.is_validated() {
        return Err(Error::UnvalidatedModule);
    }
    if module.space() != space {
        return Err(Error::SpaceMismatch("module is defined over a different space".into()));
    }
    let mut bases: Vec<Vec<CoefficientGenerator>> = Vec::new();
    for n in 0..=n_max + 1 {
        let mut gens = Vec::new();
        for x0 in 0..space.len() {
            for (g, &rank) in module.components(x0) {
                let tuple_grade = *grade - *g;
                let Some(target) = space.grade_to_units(&tuple_grade) else { continue };
                for (pts, _) in tuples_by_units(space, n + 1, UnitBound::Exact(target), true, Some(x0)) {
                    for element in 0..rank {
                        gens.push(CoefficientGenerator { tuple: Tuple { pts: pts.clone(), grade: tuple_grade }, element });
                    }
                }
            }
        }
        gens.sort();
        bases.push(gens);
    }
    let index: Vec<HashMap<(&[usize], usize), usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, g)| ((g.tuple.pts.as_slice(), g.element), i)).collect())
        .collect();
    let mut boundaries = vec![SparseIntMatrix::zeros(0, bases[0].len())];
    for n in 1..=n_max + 1 {
        let mut d = SparseIntMatrix::zeros(bases[n - 1].len(), bases[n].len());
        for (j, gen) in bases[n].iter().enumerate() {
            let p = &gen.tuple.pts;
            // d_0: m ⊗ (x_0, ..., x_n) ↦ (m · x_1) ⊗ (x_1, ..., x_n)
            let coeff_grade = *grade - gen.tuple.grade;
            let action = module.action(p[0], p[1], &coeff_grade).expect("finite step");
            for (r, c, v) in action.iter() {
                if c == gen.element {
                    let row = index[n - 1][&(&p[1..], r)];
                    d.add_to(row, j, v);
                }
            }
            for i in 1..n {
                if !space.between_idx(p[i - 1], p[i], p[i + 1]) {
                    continue;
                }
                let face: Vec<usize> = p[..i].iter().chain(&p[i + 1..]).copied().collect();
                let row = index[n - 1][&(face.as_slice(), gen.element)];
                d.add_to(row, j, &sign(i));
            }
        }
        boundaries.push(d);
    }
    Ok(BasedComplex::from_parts(*grade, n_max, bases, boundaries))
}

/// Cochain complex `Hom(C_•, K)` on dual bases.
#[derive(Debug, Clone)]
pub struct CochainComplex<L> {
    grade: Grade,
    n_max: usize,
    field: FieldKind,
    bases: Vec<Vec<L>>,
    coboundaries: Vec<SparseIntMatrix>,
}

impl<L: Clone> CochainComplex<L> {
    /// Dualizes a chain complex: `δ_n = (∂_{n+1})ᵀ` reduced into the field.
    pub fn dual_of(chain: &BasedComplex<L>, field: FieldKind) -> Result<Self> {
        let field = field.checked()?;
        let coboundaries = (0..=chain.n_max())
            .map(|n| {
                let t = chain.boundary(n + 1).transpose();
                match field {
                    FieldKind::Rationals => t,
                    FieldKind::Prime(p) => t.map_entries(|v| reduce_mod(v, p)),
                }
            })
            .collect();
        Ok(CochainComplex {
            grade: chain.grade(),
            n_max: chain.n_max(),
            field,
            bases: chain.bases.clone(),
            coboundaries,
        })
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn basis(&self, n: usize) -> &[L] {
        &self.bases[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, |b| b.len())
    }

    /// `δ_n : C^n → C^{n+1}` for `n ≤ n_max`.
    pub fn coboundary(&self, n: usize) -> &SparseIntMatrix {
        &self.coboundaries[n]
    }

    pub fn is_cochain_complex(&self) -> bool {
        (1..self.coboundaries.len()).all(|n| {
            let prod = self.coboundaries[n].mul(&self.coboundaries[n - 1]);
            match self.field {
                FieldKind::Rationals => prod.is_zero(),
                FieldKind::Prime(p) => prod.map_entries(|v| reduce_mod(v, p)).is_zero(),
            }
        })
    }

    /// `dim MH^{n,ℓ} = dim C^n - rank δ_n - rank δ_{n-1}`.
    pub fn cohomology_dim(&self, n: usize) -> Result<usize> {
        if n > self.n_max {
            return Err(Error::DegreeOutOfRange { n, max: self.n_max });
        }
        let out = rank_over_field(&self.coboundaries[n], self.field)?;
        let inc = if n == 0 { 0 } else { rank_over_field(&self.coboundaries[n - 1], self.field)? };
        Ok(self.dim(n) - out - inc)
    }
}

/// Normalized magnitude cochain complex `MC^{•,ℓ}` over ℚ or 𝔽_p.
pub fn magnitude_cochain_complex(
    space: &QuasimetricSpace,
    grade: &Grade,
    n_max: usize,
    field: FieldKind,
) -> Result<CochainComplex<Tuple>> {
    CochainComplex::dual_of(&magnitude_complex(space, grade, n_max), field)
}
