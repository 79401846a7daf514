//! Distance modules: point-indexed graded free ℤ-modules with actions of
//! degree `d(x, y)` obeying the betweenness composition law.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, rank_over_field, snf, FieldKind, SparseIntMatrix};
use crate::space::{format_grade, Grade, QuasimetricSpace};

/// One graded piece `M(x)_grade ≅ ℤ^rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedComponent {
    pub grade: Grade,
    pub rank: usize,
}

/// A witnessed failure of the distance-module axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleViolation {
    ShapeMismatch { x: String, y: String, grade: Grade, expected: (usize, usize), found: (usize, usize) },
    IdentityViolation { x: String, grade: Grade },
    CompositionViolation { x: String, y: String, z: String, grade: Grade },
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::ShapeMismatch { x, y, grade, expected, found } => write!(
                f,
                "M({x},{y}) at grade {} should be {}x{}, found {}x{}",
                format_grade(grade),
                expected.0,
                expected.1,
                found.0,
                found.1
            ),
            ModuleViolation::IdentityViolation { x, grade } => {
                write!(f, "M({x},{x}) is not the identity at grade {}", format_grade(grade))
            }
            ModuleViolation::CompositionViolation { x, y, z, grade } => {
                write!(f, "composition law fails for ({x},{y},{z}) at grade {}", format_grade(grade))
            }
        }
    }
}

impl ModuleViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            ModuleViolation::ShapeMismatch { .. } => "ShapeMismatch",
            ModuleViolation::IdentityViolation { .. } => "IdentityViolation",
            ModuleViolation::CompositionViolation { .. } => "CompositionViolation",
        }
    }
}

/// A distance module over a fixed quasimetric space.
///
/// Actions are stored by source grade: `actions[(x, y)][g]` is the matrix of
/// `M(x)_g → M(y)_{g + d(x,y)}`. Unstored actions between distinct points are
/// zero; unstored `M(x, x)` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceModule {
    space: QuasimetricSpace,
    components: Vec<BTreeMap<Grade, usize>>,
    actions: BTreeMap<(usize, usize), BTreeMap<Grade, SparseIntMatrix>>,
    validated: bool,
}

impl DistanceModule {
    /// The zero module; fill it with [`set_component`](Self::set_component)
    /// and [`set_action`](Self::set_action), then [`validate_module`].
    pub fn new(space: &QuasimetricSpace) -> Self {
        DistanceModule {
            space: space.clone(),
            components: vec![BTreeMap::new(); space.len()],
            actions: BTreeMap::new(),
            validated: false,
        }
    }

    pub fn space(&self) -> &QuasimetricSpace {
        &self.space
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Sets `rank M(x)_grade`; rank 0 removes the component.
    pub fn set_component(&mut self, x: usize, grade: Grade, rank: usize) {
        self.validated = false;
        if rank == 0 {
            self.components[x].remove(&grade);
        } else {
            self.components[x].insert(grade, rank);
        }
    }

    /// Stores `M(x, y)` on the source grade `grade`.
    pub fn set_action(&mut self, x: usize, y: usize, grade: Grade, matrix: SparseIntMatrix) -> Result<()> {
        if self.space.units(x, y).is_none() {
            return Err(Error::ShapeMismatch(format!(
                "no action {}->{}: distance is infinite",
                self.space.label(x),
                self.space.label(y)
            )));
        }
        self.validated = false;
        self.actions.entry((x, y)).or_default().insert(grade, matrix);
        Ok(())
    }

    pub fn components(&self, x: usize) -> &BTreeMap<Grade, usize> {
        &self.components[x]
    }

    pub fn graded_components(&self, x: usize) -> Vec<GradedComponent> {
        self.components[x].iter().map(|(&grade, &rank)| GradedComponent { grade, rank }).collect()
    }

    pub fn rank(&self, x: usize, grade: &Grade) -> usize {
        self.components[x].get(grade).copied().unwrap_or(0)
    }

    /// Explicitly stored actions, ordered by `(x, y)` then grade.
    pub fn stored_actions(&self) -> impl Iterator<Item = (usize, usize, &Grade, &SparseIntMatrix)> {
        self.actions.iter().flat_map(|(&(x, y), m)| m.iter().map(move |(g, a)| (x, y, g, a)))
    }

    /// Grades carrying a nonzero component at some point, ascending.
    pub fn grades(&self) -> Vec<Grade> {
        let mut g: Vec<Grade> = self.components.iter().flat_map(|c| c.keys().copied()).collect();
        g.sort();
        g.dedup();
        g
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_empty())
    }

    /// Matrix of `M(x, y)` on `M(x)_grade`; `None` when `d(x, y) = ∞`.
    pub fn action(&self, x: usize, y: usize, grade: &Grade) -> Option<SparseIntMatrix> {
        let d = self.space.dist(x, y).finite()?;
        if let Some(m) = self.actions.get(&(x, y)).and_then(|m| m.get(grade)) {
            return Some(m.clone());
        }
        let src = self.rank(x, grade);
        if x == y {
            return Some(SparseIntMatrix::identity(src));
        }
        Some(SparseIntMatrix::zeros(self.rank(y, &(*grade + d)), src))
    }

    pub(crate) fn mark_validated(mut self) -> Self {
        self.validated = true;
        self
    }
}

/// Every axiom failure of `module`, in a deterministic order: shapes, then
/// identities, then composition over `(x, y, z, grade)`.
pub fn module_violations(module: &DistanceModule) -> Vec<ModuleViolation> {
    let space = &module.space;
    let label = |i: usize| space.label(i).to_string();
    let mut out = Vec::new();
    for (x, y, g, m) in module.stored_actions() {
        let d = space.dist(x, y).finite().expect("stored actions have finite distance");
        let expected = (module.rank(y, &(*g + d)), module.rank(x, g));
        if m.shape() != expected {
            out.push(ModuleViolation::ShapeMismatch { x: label(x), y: label(y), grade: *g, expected, found: m.shape() });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for x in 0..space.len() {
        for g in module.components[x].keys() {
            let a = module.action(x, x, g).unwrap();
            if a != SparseIntMatrix::identity(module.rank(x, g)) {
                out.push(ModuleViolation::IdentityViolation { x: label(x), grade: *g });
            }
        }
    }
    let n = space.len();
    for x in 0..n {
        for y in 0..n {
            let Some(dxy) = space.dist(x, y).finite() else { continue };
            for z in 0..n {
                let Some(_) = space.dist(y, z).finite() else { continue };
                if x == y || y == z {
                    continue;
                }
                for g in module.components[x].keys() {
                    let first = module.action(x, y, g).unwrap();
                    let second = module.action(y, z, &(*g + dxy)).unwrap();
                    let composite = second.mul(&first);
                    let expected = if space.between_idx(x, y, z) {
                        module.action(x, z, g).unwrap()
                    } else {
                        SparseIntMatrix::zeros(composite.rows(), composite.cols())
                    };
                    if composite != expected {
                        out.push(ModuleViolation::CompositionViolation {
                            x: label(x),
                            y: label(y),
                            z: label(z),
                            grade: *g,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Checks identity and composition laws and marks the module validated.
pub fn validate_module(module: DistanceModule) -> Result<DistanceModule> {
    let v = module_violations(&module);
    if v.is_empty() {
        Ok(module.mark_validated())
    } else {
        Err(Error::InvalidModule(v))
    }
}

/// `Triv(ℤ^rank[grade])`: the same free module at every point, zero actions.
pub fn trivial_module(space: &QuasimetricSpace, grade: Grade, rank: usize) -> DistanceModule {
    let mut m = DistanceModule::new(space);
    for x in 0..space.len() {
        m.set_component(x, grade, rank);
    }
    m.mark_validated()
}

/// `M[s]`: every grade raised by `s`.
pub fn shift_module(module: &DistanceModule, s: Grade) -> DistanceModule {
    DistanceModule {
        space: module.space.clone(),
        components: module.components.iter().map(|c| c.iter().map(|(g, &r)| (*g + s, r)).collect()).collect(),
        actions: module
            .actions
            .iter()
            .map(|(&k, m)| (k, m.iter().map(|(g, a)| (*g + s, a.clone())).collect()))
            .collect(),
        validated: module.validated,
    }
}

/// The module `e_x·σX`: `ℤ` at grade `d(x, y)` over each reachable `y`, with
/// `M(y, z)` the identity exactly when `y` lies between `x` and `z`.
pub fn representable_module(space: &QuasimetricSpace, x: usize) -> Result<DistanceModule> {
    if x >= space.len() {
        return Err(Error::UnknownPoint(x.to_string()));
    }
    Ok(representable_window(space, x, |_| true))
}

/// Representable module restricted to the points whose distance from `x`
/// satisfies `keep`; a sub- or quotient module when `keep` selects an upper
/// or lower set of distances.
fn representable_window(space: &QuasimetricSpace, x: usize, keep: impl Fn(Grade) -> bool) -> DistanceModule {
    let mut m = DistanceModule::new(space);
    let kept: Vec<Option<Grade>> =
        (0..space.len()).map(|y| space.dist(x, y).finite().filter(|&d| keep(d))).collect();
    for (y, d) in kept.iter().enumerate() {
        if let Some(d) = d {
            m.set_component(y, *d, 1);
        }
    }
    for y in 0..space.len() {
        for z in 0..space.len() {
            if y == z {
                continue;
            }
            if let (Some(dy), Some(_)) = (kept[y], kept[z]) {
                if space.between_idx(x, y, z) {
                    m.set_action(y, z, dy, SparseIntMatrix::identity(1)).expect("finite distance");
                }
            }
        }
    }
    m.mark_validated()
}

/// One graded piece of `Inv(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantComponent {
    pub grade: Grade,
    pub rank: usize,
    /// ℤ-basis vectors, each supported on a single point.
    pub basis: Vec<(usize, Vec<BigInt>)>,
}

/// One graded piece of `Coinv(M)` as a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinvariantComponent {
    pub grade: Grade,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

/// `Inv(M)_ℓ = ⊕_x {m ∈ M(x)_ℓ : m·y = 0 for all y ≠ x with d(x,y) < ∞}`.
pub fn invariants(module: &DistanceModule) -> Result<Vec<InvariantComponent>> {
    if !module.validated {
        return Err(Error::UnvalidatedModule);
    }
    let space = &module.space;
    let mut by_grade: BTreeMap<Grade, Vec<(usize, Vec<BigInt>)>> = BTreeMap::new();
    for x in 0..space.len() {
        for (g, &rank) in &module.components[x] {
            let blocks: Vec<SparseIntMatrix> = (0..space.len())
                .filter(|&y| y != x)
                .filter_map(|y| module.action(x, y, g))
                .collect();
            let stacked = SparseIntMatrix::vstack(&blocks, rank);
            let entry = by_grade.entry(*g).or_default();
            for v in integer_kernel(&stacked) {
                entry.push((x, v));
            }
        }
    }
    Ok(by_grade
        .into_iter()
        .map(|(grade, basis)| InvariantComponent { grade, rank: basis.len(), basis })
        .collect())
}

/// `Coinv(M)_ℓ = ⊕_x M(x)_ℓ / ⟨m·x : m ∈ M(y)_{ℓ-d(y,x)}, y ≠ x⟩`.
pub fn coinvariants(module: &DistanceModule) -> Result<Vec<CoinvariantComponent>> {
    if !module.validated {
        return Err(Error::UnvalidatedModule);
    }
    let space = &module.space;
    let mut by_grade: BTreeMap<Grade, CoinvariantComponent> = BTreeMap::new();
    for x in 0..space.len() {
        for (g, &rank) in &module.components[x] {
            let blocks: Vec<SparseIntMatrix> = (0..space.len())
                .filter(|&y| y != x)
                .filter_map(|y| {
                    let d = space.dist(y, x).finite()?;
                    module.action(y, x, &(*g - d))
                })
                .collect();
            let image = SparseIntMatrix::hstack(&blocks, rank);
            let factors = snf(&image);
            let entry = by_grade.entry(*g).or_insert_with(|| CoinvariantComponent {
                grade: *g,
                betti: 0,
                torsion: Vec::new(),
            });
            entry.betti += rank - factors.len();
            entry.torsion.extend(factors.into_iter().filter(|f| !f.is_one()));
        }
    }
    Ok(by_grade
        .into_values()
        .map(|mut c| {
            c.torsion = crate::linalg::invariant_factors_of_diagonal(c.torsion);
            c
        })
        .collect())
}

/// Rank of the group of morphisms `Triv(ℤ[ℓ]) → M`, solved directly from the
/// naturality equations `M(x,y)∘φ_x = φ_y∘Triv(x,y)` over all finite pairs.
pub fn hom_from_trivial(module: &DistanceModule, grade: &Grade) -> usize {
    let space = &module.space;
    let n = space.len();
    // unknowns: φ_x ∈ M(x)_ℓ, concatenated by point
    let mut offset = vec![0usize; n + 1];
    for x in 0..n {
        offset[x + 1] = offset[x] + module.rank(x, grade);
    }
    let unknowns = offset[n];
    if unknowns == 0 {
        return 0;
    }
    let mut blocks = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let Some(d) = space.dist(x, y).finite() else { continue };
            let target = module.rank(y, &(*grade + d));
            let mut eq = SparseIntMatrix::zeros(target, unknowns);
            let act = module.action(x, y, grade).expect("finite distance");
            for (r, c, v) in act.iter() {
                eq.add_to(r, offset[x] + c, v);
            }
            // Triv(x, y) = 0, so the φ_y side contributes nothing
            blocks.push(eq);
        }
    }
    let system = SparseIntMatrix::vstack(&blocks, unknowns);
    unknowns - rank_over_field(&system, FieldKind::Rationals).expect("ℚ is a field")
}

/// `M ⊕ N` over the same space, bases concatenated per component.
pub fn direct_sum(a: &DistanceModule, b: &DistanceModule) -> Result<DistanceModule> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch("summands live over different spaces".into()));
    }
    let space = &a.space;
    let mut m = DistanceModule::new(space);
    for x in 0..space.len() {
        for g in a.components[x].keys().chain(b.components[x].keys()) {
            m.set_component(x, *g, a.rank(x, g) + b.rank(x, g));
        }
    }
    for x in 0..space.len() {
        for y in 0..space.len() {
            if x == y {
                continue;
            }
            let Some(d) = space.dist(x, y).finite() else { continue };
            for g in m.components[x].clone().keys() {
                let h = *g + d;
                let (ax, bx, ay) = (a.rank(x, g), b.rank(x, g), a.rank(y, &h));
                let mut block = SparseIntMatrix::zeros(m.rank(y, &h), ax + bx);
                for (r, c, v) in a.action(x, y, g).unwrap().iter() {
                    block.add_to(r, c, v);
                }
                for (r, c, v) in b.action(x, y, g).unwrap().iter() {
                    block.add_to(ay + r, ax + c, v);
                }
                if !block.is_zero() {
                    m.set_action(x, y, *g, block)?;
                }
            }
        }
    }
    m.validated = a.validated && b.validated;
    Ok(m)
}

/// Conjugates by invertible integer matrices `P_{x,g}`: `M'(x,y) = P_y M(x,y) P_x⁻¹`.
/// `change[(x, g)] = (P, P⁻¹)`; missing entries mean the identity.
fn change_basis(
    module: &DistanceModule,
    change: &BTreeMap<(usize, Grade), (SparseIntMatrix, SparseIntMatrix)>,
) -> DistanceModule {
    let space = &module.space;
    let mut m = DistanceModule { actions: BTreeMap::new(), ..module.clone() };
    for x in 0..space.len() {
        for y in 0..space.len() {
            if x == y {
                continue;
            }
            let Some(d) = space.dist(x, y).finite() else { continue };
            for g in module.components[x].keys() {
                let h = *g + d;
                let mut a = module.action(x, y, g).unwrap();
                if let Some((_, inv)) = change.get(&(x, *g)) {
                    a = a.mul(inv);
                }
                if let Some((p, _)) = change.get(&(y, h)) {
                    a = p.mul(&a);
                }
                if !a.is_zero() {
                    m.actions.entry((x, y)).or_default().insert(*g, a);
                }
            }
        }
    }
    m
}

/// Random unimodular `n×n` matrix with its inverse, as a product of
/// elementary operations.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (SparseIntMatrix, SparseIntMatrix) {
    let mut p = SparseIntMatrix::identity(n);
    let mut inv = SparseIntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            let neg = SparseIntMatrix::from_dense(&[vec![-1]]);
            return (neg.clone(), neg);
        }
        return (p, inv);
    }
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k: i64 = rng.gen_range(-2..=2);
        let mut e = SparseIntMatrix::identity(n);
        e.add_to(i, j, &BigInt::from(k));
        let mut e_inv = SparseIntMatrix::identity(n);
        e_inv.add_to(i, j, &BigInt::from(-k));
        p = e.mul(&p);
        inv = inv.mul(&e_inv);
    }
    (p, inv)
}

/// Seeded random valid module: a direct sum of at most `max_rank` pieces,
/// each a shifted representable module, one of its sub- or quotient windows,
/// or a rank-one trivial module, truncated to grades `≤ max_grade` and
/// conjugated by random unimodular base changes.
pub fn random_module<R: Rng>(rng: &mut R, space: &QuasimetricSpace, max_rank: usize, max_grade: Grade) -> DistanceModule {
    let shifts = [Grade::from_integer(0), Grade::new(1, 2), Grade::from_integer(1)];
    let pieces = rng.gen_range(1..=max_rank.max(1));
    let mut m = DistanceModule::new(space).mark_validated();
    for _ in 0..pieces {
        let s = shifts[rng.gen_range(0..shifts.len())];
        let x = rng.gen_range(0..space.len());
        let cut = Grade::new(rng.gen_range(0..=6), 2);
        let piece = match rng.gen_range(0..4) {
            0 => trivial_module(space, s, 1),
            1 => shift_module(&representable_window(space, x, |_| true), s),
            2 => shift_module(&representable_window(space, x, |d| d <= cut), s),
            _ => shift_module(&representable_window(space, x, |d| d > cut), s),
        };
        m = direct_sum(&m, &piece).expect("same space");
    }
    let m = truncate_above(&m, max_grade);
    let mut change = BTreeMap::new();
    for x in 0..space.len() {
        for (g, &r) in &m.components[x] {
            change.insert((x, *g), random_unimodular(rng, r));
        }
    }
    change_basis(&m, &change)
}

/// Quotient by everything in grades above `max_grade`.
fn truncate_above(module: &DistanceModule, max_grade: Grade) -> DistanceModule {
    let mut m = module.clone();
    for c in m.components.iter_mut() {
        c.retain(|g, _| *g <= max_grade);
    }
    let space = module.space.clone();
    for (&(x, y), per) in m.actions.iter_mut() {
        let d = space.dist(x, y).finite().unwrap();
        per.retain(|g, _| *g + d <= max_grade);
    }
    m.actions.retain(|_, per| !per.is_empty());
    m
}
