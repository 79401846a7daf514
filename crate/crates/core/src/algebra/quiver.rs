//! Path algebras of digraphs modulo the shortest-path relations, and graded
//! representations that satisfy them.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::distmod::DistanceModule;
use crate::error::{Error, Result};
use crate::linalg::{rank_over_field, FieldKind, SparseIntMatrix};
use crate::space::{digraph_to_space, format_grade, Digraph, Grade, QuasimetricSpace};

/// A directed path as its vertex sequence; length is `len() - 1`.
pub type Path = Vec<usize>;

/// Generators of the ideal `R(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuiverRelations {
    /// Pairs of distinct shortest paths with the same endpoints, each pair
    /// ordered and the list sorted.
    pub r1: Vec<(Path, Path)>,
    /// Minimal non-shortest paths: not shortest, but both maximal proper
    /// subpaths are.
    pub r2: Vec<Path>,
}

/// All shortest paths of `g`, grouped by endpoints, with lengths `≥ 1`.
fn shortest_paths(g: &Digraph, space: &QuasimetricSpace) -> BTreeMap<(usize, usize), Vec<Path>> {
    let mut out: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
    for s in 0..g.len() {
        let mut frontier: Vec<Path> = vec![vec![s]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in frontier {
                let last = *p.last().unwrap();
                for v in g.successors(last) {
                    if space.units(s, v) == Some(p.len() as i64) {
                        let mut q = p.clone();
                        q.push(v);
                        out.entry((s, v)).or_default().push(q.clone());
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
    }
    for paths in out.values_mut() {
        paths.sort();
    }
    out
}

pub fn quiver_relations(g: &Digraph) -> QuiverRelations {
    let space = digraph_to_space(g);
    let shortest = shortest_paths(g, &space);
    let mut r1 = Vec::new();
    for paths in shortest.values() {
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                r1.push((paths[i].clone(), paths[j].clone()));
            }
        }
    }
    let is_shortest = |p: &[usize]| space.units(p[0], *p.last().unwrap()) == Some(p.len() as i64 - 1);
    let mut r2 = Vec::new();
    for paths in shortest.values() {
        for p in paths {
            for v in g.successors(*p.last().unwrap()) {
                let mut q = p.clone();
                q.push(v);
                if !is_shortest(&q) && is_shortest(&q[1..]) {
                    r2.push(q);
                }
            }
        }
    }
    r1.sort();
    r2.sort();
    QuiverRelations { r1, r2 }
}

impl QuiverRelations {
    /// Relations as integer combinations of paths: `p - q` for R1, `p` for R2.
    pub fn as_combinations(&self) -> Vec<Vec<(Path, i64)>> {
        let mut out: Vec<Vec<(Path, i64)>> =
            self.r1.iter().map(|(p, q)| vec![(p.clone(), 1), (q.clone(), -1)]).collect();
        out.extend(self.r2.iter().map(|p| vec![(p.clone(), 1)]));
        out
    }

    pub fn min_length(&self) -> Option<usize> {
        self.as_combinations().iter().map(|c| c[0].0.len() - 1).min()
    }
}

/// All paths with exactly `len` arcs, sorted.
pub fn paths_of_length(g: &Digraph, len: usize) -> Vec<Path> {
    let mut cur: Vec<Path> = (0..g.len()).map(|v| vec![v]).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &cur {
            for v in g.successors(*p.last().unwrap()) {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        cur = next;
    }
    cur.sort();
    cur
}

/// Rank of `R(G) ∩ KG_len` inside the path basis of length `len`, together
/// with that basis.
fn relation_rank(g: &Digraph, rels: &QuiverRelations, len: usize) -> (Vec<Path>, usize) {
    let basis = paths_of_length(g, len);
    let index: BTreeMap<&Path, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut prefixes: Vec<Vec<Path>> = Vec::with_capacity(len + 1);
    for k in 0..=len {
        prefixes.push(paths_of_length(g, k));
    }
    let mut columns: Vec<Vec<(usize, i64)>> = Vec::new();
    for rel in rels.as_combinations() {
        let rlen = rel[0].0.len() - 1;
        if rlen > len {
            continue;
        }
        let (start, end) = (rel[0].0[0], *rel[0].0.last().unwrap());
        for a in 0..=len - rlen {
            let b = len - rlen - a;
            for p in prefixes[a].iter().filter(|p| *p.last().unwrap() == start) {
                for q in prefixes[b].iter().filter(|q| q[0] == end) {
                    let col = rel
                        .iter()
                        .map(|(r, c)| {
                            let mut w = p.clone();
                            w.extend_from_slice(&r[1..]);
                            w.extend_from_slice(&q[1..]);
                            (index[&w], *c)
                        })
                        .collect();
                    columns.push(col);
                }
            }
        }
    }
    let mut m = SparseIntMatrix::zeros(basis.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for &(i, c) in col {
            m.add_to(i, j, &BigInt::from(c));
        }
    }
    let rank = rank_over_field(&m, FieldKind::Rationals).expect("ℚ is a field");
    (basis, rank)
}

/// One grade of the comparison `dim (KG/R)_ℓ` against `#{(x, y) : d(x, y) = ℓ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeReport {
    pub grade: usize,
    pub paths: usize,
    pub relation_rank: usize,
    pub quotient_dim: usize,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationReport {
    pub grades: Vec<GradeReport>,
    /// `N = 1 +` the longest shortest path; `J^N ⊆ R(G)` is checked here.
    pub exponent: usize,
    pub relations_in_j2: bool,
    pub jn_in_relations: bool,
}

impl PresentationReport {
    pub fn admissible(&self) -> bool {
        self.relations_in_j2 && self.jn_in_relations
    }
}

/// Compares the graded dimensions of `KG/R(G)` with those of `σG` for
/// `ℓ ≤ lmax` and checks `J^N ⊆ R(G) ⊆ J²`.
pub fn check_bound_quiver_presentation(g: &Digraph, lmax: usize) -> Result<PresentationReport> {
    let space = digraph_to_space(g);
    let rels = quiver_relations(g);
    let mut grades = Vec::new();
    for l in 0..=lmax {
        let (basis, rank) = relation_rank(g, &rels, l);
        let pairs = (0..g.len())
            .flat_map(|x| (0..g.len()).map(move |y| (x, y)))
            .filter(|&(x, y)| space.units(x, y) == Some(l as i64))
            .count();
        let quotient = basis.len() - rank;
        if quotient != pairs {
            return Err(Error::DimensionMismatch { grade: l, quotient, pairs });
        }
        grades.push(GradeReport { grade: l, paths: basis.len(), relation_rank: rank, quotient_dim: quotient, pairs });
    }
    let longest = (0..g.len())
        .flat_map(|x| (0..g.len()).map(move |y| (x, y)))
        .filter_map(|(x, y)| space.units(x, y))
        .max()
        .unwrap_or(0) as usize;
    let exponent = longest + 1;
    let (basis, rank) = relation_rank(g, &rels, exponent);
    Ok(PresentationReport {
        grades,
        exponent,
        relations_in_j2: rels.min_length().is_none_or(|m| m >= 2),
        jn_in_relations: rank == basis.len(),
    })
}

/// A graded representation of a digraph: free graded modules at vertices
/// and degree-one maps along arcs. Unset arc maps are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRepresentation {
    digraph: Digraph,
    components: Vec<BTreeMap<Grade, usize>>,
    maps: BTreeMap<(usize, usize), BTreeMap<Grade, SparseIntMatrix>>,
}

impl QuiverRepresentation {
    pub fn new(g: &Digraph) -> Self {
        QuiverRepresentation { digraph: g.clone(), components: vec![BTreeMap::new(); g.len()], maps: BTreeMap::new() }
    }

    /// Restriction of a distance module over the path metric of `g` to arcs.
    pub fn from_module(g: &Digraph, module: &DistanceModule) -> Result<Self> {
        if module.space() != &digraph_to_space(g) {
            return Err(Error::SpaceMismatch("module is not over the path metric of this digraph".into()));
        }
        let mut rep = QuiverRepresentation::new(g);
        for v in 0..g.len() {
            rep.components[v] = module.components(v).clone();
        }
        for &(u, v) in g.arcs() {
            for grade in module.components(u).keys() {
                let a = module.action(u, v, grade).expect("arcs have distance one");
                rep.set_map(u, v, *grade, a)?;
            }
        }
        Ok(rep)
    }

    pub fn set_component(&mut self, v: usize, grade: Grade, rank: usize) {
        if rank == 0 {
            self.components[v].remove(&grade);
        } else {
            self.components[v].insert(grade, rank);
        }
    }

    pub fn set_map(&mut self, u: usize, v: usize, grade: Grade, m: SparseIntMatrix) -> Result<()> {
        if !self.digraph.has_arc(u, v) {
            return Err(Error::Input(format!("no arc {}->{}", self.digraph.vertices()[u], self.digraph.vertices()[v])));
        }
        self.maps.entry((u, v)).or_default().insert(grade, m);
        Ok(())
    }

    pub fn rank(&self, v: usize, grade: &Grade) -> usize {
        self.components[v].get(grade).copied().unwrap_or(0)
    }

    pub fn map(&self, u: usize, v: usize, grade: &Grade) -> SparseIntMatrix {
        self.maps
            .get(&(u, v))
            .and_then(|m| m.get(grade))
            .cloned()
            .unwrap_or_else(|| SparseIntMatrix::zeros(self.rank(v, &(*grade + 1)), self.rank(u, grade)))
    }

    /// Composite along a path starting in `grade`.
    pub fn along(&self, path: &[usize], grade: &Grade) -> SparseIntMatrix {
        let mut acc = SparseIntMatrix::identity(self.rank(path[0], grade));
        let mut g = *grade;
        for w in path.windows(2) {
            acc = self.map(w[0], w[1], &g).mul(&acc);
            g += 1;
        }
        acc
    }
}

fn render_path(g: &Digraph, p: &[usize]) -> String {
    p.iter().map(|&v| g.vertices()[v].as_str()).collect::<Vec<_>>().join("->")
}

/// Every R1 pair must induce equal composites and every R2 path the zero map.
pub fn check_representation_relations(g: &Digraph, rep: &QuiverRepresentation) -> Result<()> {
    let rels = quiver_relations(g);
    for (p, q) in &rels.r1 {
        for grade in rep.components[p[0]].keys() {
            if rep.along(p, grade) != rep.along(q, grade) {
                return Err(Error::RelationViolation {
                    relation: format!("{} = {}", render_path(g, p), render_path(g, q)),
                    grade: format_grade(grade),
                });
            }
        }
    }
    for p in &rels.r2 {
        for grade in rep.components[p[0]].keys() {
            if !rep.along(p, grade).is_zero() {
                return Err(Error::RelationViolation {
                    relation: format!("{} = 0", render_path(g, p)),
                    grade: format_grade(grade),
                });
            }
        }
    }
    Ok(())
}
