//! Finite quasimetric spaces and digraphs.
//!
//! Distances are exact: a nonnegative `Rational64` or infinity. Every space
//! also keeps an integer copy of its distance matrix scaled by the common
//! denominator of all finite entries, so tuple grades can be enumerated and
//! compared as plain integers.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};

/// Exact rational grade (distance sums, module degrees).
pub type Grade = Rational64;

pub fn parse_grade(s: &str) -> Result<Grade> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| Error::BadGrade(s.to_string()))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::BadGrade(s.to_string()))?;
            if q == 0 {
                return Err(Error::BadGrade(s.to_string()));
            }
            Rational64::new(p, q)
        }
        None => Rational64::from_integer(t.parse().map_err(|_| Error::BadGrade(s.to_string()))?),
    };
    Ok(parsed)
}

pub fn format_grade(g: &Grade) -> String {
    if g.is_integer() {
        g.numer().to_string()
    } else {
        format!("{}/{}", g.numer(), g.denom())
    }
}

/// A distance in `[0, ∞]` with exact rational finite values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtDist {
    Finite(Rational64),
    Infinite,
}

impl ExtDist {
    pub const ZERO: ExtDist = ExtDist::Finite(Rational64::new_raw(0, 1));

    pub fn finite(self) -> Option<Rational64> {
        match self {
            ExtDist::Finite(q) => Some(q),
            ExtDist::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn from_integer(n: i64) -> Self {
        ExtDist::Finite(Rational64::from_integer(n))
    }
}

impl Add for ExtDist {
    type Output = ExtDist;
    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
            _ => ExtDist::Infinite,
        }
    }
}

impl PartialOrd for ExtDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.cmp(b),
            (ExtDist::Finite(_), ExtDist::Infinite) => Ordering::Less,
            (ExtDist::Infinite, ExtDist::Finite(_)) => Ordering::Greater,
            (ExtDist::Infinite, ExtDist::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(q) => f.write_str(&format_grade(q)),
            ExtDist::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtDist {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "Inf" | "INF" | "infinity" | "∞") {
            return Ok(ExtDist::Infinite);
        }
        let q = parse_grade(t).map_err(|_| Error::BadDistance(s.to_string()))?;
        if q < Rational64::zero() {
            return Err(Error::BadDistance(s.to_string()));
        }
        Ok(ExtDist::Finite(q))
    }
}

/// A validated finite quasimetric space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasimetricSpace {
    labels: Vec<String>,
    dist: Vec<ExtDist>,
    scale: i64,
    units: Vec<Option<i64>>,
}

/// Checks the quasimetric axioms and builds the space.
///
/// Axioms are checked in order (diagonal, positivity, triangle) and the first
/// failure is reported with its witness points.
pub fn validate_space<S: AsRef<str>>(points: &[S], matrix: Vec<Vec<ExtDist>>) -> Result<QuasimetricSpace> {
    let n = points.len();
    let labels: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
    let mut seen = BTreeSet::new();
    for l in &labels {
        if !seen.insert(l.clone()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    if matrix.len() != n {
        return Err(Error::NotSquare { expected: n, row: matrix.len(), found: matrix.len() });
    }
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { expected: n, row, found: r.len() });
        }
    }
    let dist: Vec<ExtDist> = matrix.into_iter().flatten().collect();
    for x in 0..n {
        if dist[x * n + x] != ExtDist::ZERO {
            return Err(Error::NonzeroDiagonal(labels[x].clone()));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && dist[x * n + y] == ExtDist::ZERO {
                return Err(Error::ZeroOffDiagonal(labels[x].clone(), labels[y].clone()));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if dist[x * n + y] + dist[y * n + z] < dist[x * n + z] {
                    return Err(Error::TriangleViolation(
                        labels[x].clone(),
                        labels[y].clone(),
                        labels[z].clone(),
                    ));
                }
            }
        }
    }
    let mut scale: i64 = 1;
    for d in &dist {
        if let ExtDist::Finite(q) = d {
            scale = scale.lcm(q.denom());
        }
    }
    let units = dist
        .iter()
        .map(|d| match d {
            ExtDist::Finite(q) => {
                let u = q.numer().checked_mul(scale / q.denom()).ok_or(Error::DistanceOverflow)?;
                Ok(Some(u))
            }
            ExtDist::Infinite => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuasimetricSpace { labels, dist, scale, units })
}

impl QuasimetricSpace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn dist(&self, x: usize, y: usize) -> ExtDist {
        self.dist[x * self.len() + y]
    }

    pub fn dist_by_label(&self, x: &str, y: &str) -> Result<ExtDist> {
        Ok(self.dist(self.index_of(x)?, self.index_of(y)?))
    }

    /// Common denominator of all finite distances.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// `dist(x, y) * scale` when finite.
    pub fn units(&self, x: usize, y: usize) -> Option<i64> {
        self.units[x * self.len() + y]
    }

    /// Converts a grade to integer units, or `None` when the grade is not a
    /// multiple of `1/scale` (no tuple can have that grade).
    pub fn grade_to_units(&self, g: &Grade) -> Option<i64> {
        let scaled = *g * Rational64::from_integer(self.scale);
        scaled.is_integer().then(|| scaled.to_integer())
    }

    pub fn units_to_grade(&self, u: i64) -> Grade {
        Rational64::new(u, self.scale)
    }

    /// Index form of [`between`].
    pub fn between_idx(&self, x: usize, y: usize, z: usize) -> bool {
        match (self.units(x, y), self.units(y, z), self.units(x, z)) {
            (Some(a), Some(b), Some(c)) => a + b == c,
            _ => false,
        }
    }

    /// Sum of consecutive distances, in units, or `None` if some step is infinite.
    pub fn tuple_units(&self, pts: &[usize]) -> Option<i64> {
        pts.windows(2).try_fold(0i64, |acc, w| self.units(w[0], w[1]).map(|u| acc + u))
    }

    pub fn tuple_grade(&self, pts: &[usize]) -> Option<Grade> {
        self.tuple_units(pts).map(|u| self.units_to_grade(u))
    }

    /// Distances as a row-major matrix of display strings.
    pub fn dist_strings(&self) -> Vec<Vec<String>> {
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| self.dist(x, y).to_string()).collect())
            .collect()
    }

    /// Smallest nonzero finite distance in units.
    pub fn min_positive_units(&self) -> Option<i64> {
        self.units.iter().flatten().copied().filter(|&u| u > 0).min()
    }
}

/// `d(x,y) + d(y,z) = d(x,z)` with all three distances finite.
pub fn between(space: &QuasimetricSpace, x: &str, y: &str, z: &str) -> Result<bool> {
    let (x, y, z) = (space.index_of(x)?, space.index_of(y)?, space.index_of(z)?);
    Ok(space.between_idx(x, y, z))
}

pub fn opposite_space(space: &QuasimetricSpace) -> QuasimetricSpace {
    let n = space.len();
    let mut dist = vec![ExtDist::Infinite; n * n];
    let mut units = vec![None; n * n];
    for x in 0..n {
        for y in 0..n {
            dist[x * n + y] = space.dist(y, x);
            units[x * n + y] = space.units(y, x);
        }
    }
    QuasimetricSpace { labels: space.labels.clone(), dist, scale: space.scale, units }
}

pub fn min_positive_distance(space: &QuasimetricSpace) -> Result<ExtDist> {
    space
        .min_positive_units()
        .map(|u| ExtDist::Finite(space.units_to_grade(u)))
        .ok_or(Error::NoFiniteDistance)
}

/// A finite digraph without loops or multiple arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertices: Vec<String>,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], arcs: &[(S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        let index: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            let (u, v) = (u.as_ref(), v.as_ref());
            let a = *index.get(u).ok_or_else(|| Error::UnknownPoint(u.to_string()))?;
            let b = *index.get(v).ok_or_else(|| Error::UnknownPoint(v.to_string()))?;
            if a == b {
                return Err(Error::SelfLoop(u.to_string()));
            }
            set.insert((a, b));
        }
        Ok(Digraph { vertices, arcs: set })
    }

    /// Builds a digraph on vertices `0..n` labelled by their index.
    pub fn from_indices(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let vertices: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut set = BTreeSet::new();
        for (a, b) in arcs {
            if a >= n || b >= n {
                return Err(Error::UnknownPoint(a.max(b).to_string()));
            }
            if a == b {
                return Err(Error::SelfLoop(a.to_string()));
            }
            set.insert((a, b));
        }
        Ok(Digraph { vertices, arcs: set })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v)
    }

    /// Adds the reverse of every arc.
    pub fn symmetrized(&self) -> Digraph {
        let mut arcs = self.arcs.clone();
        arcs.extend(self.arcs.iter().map(|&(a, b)| (b, a)));
        Digraph { vertices: self.vertices.clone(), arcs }
    }

    /// Breadth-first shortest path lengths from `source` (None = unreachable).
    pub fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.successors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Path-length quasimetric of a digraph.
pub fn digraph_to_space(g: &Digraph) -> QuasimetricSpace {
    let matrix: Vec<Vec<ExtDist>> = (0..g.len())
        .map(|s| {
            g.bfs(s)
                .into_iter()
                .map(|d| d.map_or(ExtDist::Infinite, |d| ExtDist::from_integer(d as i64)))
                .collect()
        })
        .collect();
    validate_space(g.vertices(), matrix).expect("shortest-path distances form a quasimetric")
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> Digraph {
    Digraph::from_indices(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

/// Complete symmetric digraph on `n` vertices.
pub fn complete_digraph(n: usize) -> Digraph {
    let arcs = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)));
    Digraph::from_indices(n, arcs).expect("valid complete digraph")
}

/// Random quasimetric space on `n` points: grid distances in
/// `{1/2, 1, 3/2, 2, ∞}` closed under min-plus composition.
pub fn random_space<R: Rng>(rng: &mut R, n: usize) -> QuasimetricSpace {
    let grid = [
        ExtDist::Finite(Rational64::new(1, 2)),
        ExtDist::from_integer(1),
        ExtDist::Finite(Rational64::new(3, 2)),
        ExtDist::from_integer(2),
        ExtDist::Infinite,
    ];
    let mut d = vec![vec![ExtDist::Infinite; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        for (y, e) in row.iter_mut().enumerate() {
            *e = if x == y { ExtDist::ZERO } else { grid[rng.gen_range(0..grid.len())] };
        }
    }
    for k in 0..n {
        for x in 0..n {
            for y in 0..n {
                let via = d[x][k] + d[k][y];
                if via < d[x][y] {
                    d[x][y] = via;
                }
            }
        }
    }
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    validate_space(&labels, d).expect("min-plus closure of positive distances is a quasimetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> ExtDist {
        ExtDist::Finite(Rational64::new(n, d))
    }

    fn k2() -> QuasimetricSpace {
        validate_space(&["x", "y"], vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap()
    }

    fn x2() -> QuasimetricSpace {
        digraph_to_space(&Digraph::new(&["a", "b"], &[("a", "b")]).unwrap())
    }

    fn c3() -> QuasimetricSpace {
        digraph_to_space(&Digraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap())
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/2".parse::<ExtDist>().unwrap(), q(3, 2));
        assert_eq!("inf".parse::<ExtDist>().unwrap(), ExtDist::Infinite);
        assert_eq!("4".parse::<ExtDist>().unwrap().to_string(), "4");
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert!("-1".parse::<ExtDist>().is_err());
        assert!("1/0".parse::<ExtDist>().is_err());
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(q(1, 2) + ExtDist::Infinite, ExtDist::Infinite);
        assert!(q(100, 1) < ExtDist::Infinite);
    }

    #[test]
    fn one_point_and_k2_are_valid() {
        let one = validate_space(&["a"], vec![vec![ExtDist::ZERO]]).unwrap();
        assert_eq!(one.len(), 1);
        let k = k2();
        assert_eq!(k.dist_by_label("x", "y").unwrap(), q(1, 1));
    }

    #[test]
    fn axiom_violations() {
        let bad = validate_space(&["x", "y"], vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        assert_eq!(bad.unwrap_err(), Error::NonzeroDiagonal("x".into()));
        let bad = validate_space(&["x", "y"], vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]]);
        assert_eq!(bad.unwrap_err(), Error::ZeroOffDiagonal("x".into(), "y".into()));
        let m = vec![
            vec![q(0, 1), q(1, 1), q(3, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1)],
            vec![q(3, 1), q(1, 1), q(0, 1)],
        ];
        let bad = validate_space(&["x", "y", "z"], m);
        assert_eq!(bad.unwrap_err(), Error::TriangleViolation("x".into(), "y".into(), "z".into()));
        let bad = validate_space(&["x", "y"], vec![vec![q(0, 1)], vec![q(1, 1), q(0, 1)]]);
        assert!(matches!(bad.unwrap_err(), Error::NotSquare { .. }));
    }

    #[test]
    fn digraph_distances() {
        let x2 = x2();
        assert_eq!(x2.dist_by_label("a", "b").unwrap(), q(1, 1));
        assert_eq!(x2.dist_by_label("b", "a").unwrap(), ExtDist::Infinite);
        let c3 = c3();
        assert_eq!(c3.dist_by_label("a", "b").unwrap(), q(1, 1));
        assert_eq!(c3.dist_by_label("a", "c").unwrap(), q(2, 1));
        assert_eq!(c3.dist_by_label("b", "a").unwrap(), q(2, 1));
        let empty = digraph_to_space(&Digraph::new::<&str>(&["a", "b"], &[]).unwrap());
        assert_eq!(empty.dist(0, 1), ExtDist::Infinite);
        assert_eq!(empty.dist(1, 0), ExtDist::Infinite);
    }

    #[test]
    fn digraph_rejects_loops_and_merges_duplicates() {
        assert!(matches!(Digraph::new(&["a"], &[("a", "a")]), Err(Error::SelfLoop(_))));
        let g = Digraph::new(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap();
        assert_eq!(g.arcs().len(), 1);
    }

    #[test]
    fn betweenness_examples() {
        let k = k2();
        assert!(between(&k, "x", "x", "y").unwrap());
        assert!(!between(&k, "x", "y", "x").unwrap());
        assert!(between(&c3(), "a", "b", "c").unwrap());
        assert!(matches!(between(&k, "x", "q", "y"), Err(Error::UnknownPoint(_))));
        let x2 = x2();
        // infinite leg
        assert!(!between(&x2, "b", "a", "b").unwrap());
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(opposite_space(&k2()), k2());
        let op = opposite_space(&x2());
        assert_eq!(op.dist_by_label("b", "a").unwrap(), q(1, 1));
        assert_eq!(op.dist_by_label("a", "b").unwrap(), ExtDist::Infinite);
        assert_eq!(opposite_space(&opposite_space(&c3())), c3());
    }

    #[test]
    fn min_positive_examples() {
        assert_eq!(min_positive_distance(&k2()).unwrap(), q(1, 1));
        let s = validate_space(
            &["a", "b", "c"],
            vec![
                vec![q(0, 1), q(1, 2), ExtDist::Infinite],
                vec![q(3, 1), q(0, 1), ExtDist::Infinite],
                vec![ExtDist::Infinite, ExtDist::Infinite, q(0, 1)],
            ],
        )
        .unwrap();
        assert_eq!(min_positive_distance(&s).unwrap(), q(1, 2));
        let disc = digraph_to_space(&Digraph::new::<&str>(&["a", "b"], &[]).unwrap());
        assert_eq!(min_positive_distance(&disc).unwrap_err(), Error::NoFiniteDistance);
    }

    #[test]
    fn random_spaces_are_valid_and_deterministic() {
        let a = random_space(&mut ChaCha8Rng::seed_from_u64(7), 4);
        let b = random_space(&mut ChaCha8Rng::seed_from_u64(7), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn grade_units() {
        let s = random_space(&mut ChaCha8Rng::seed_from_u64(3), 3);
        let g = Rational64::new(3, 2);
        if s.scale() == 2 {
            assert_eq!(s.grade_to_units(&g), Some(3));
        }
        assert_eq!(k2().grade_to_units(&g), None);
        assert_eq!(k2().units_to_grade(2), Rational64::from_integer(2));
    }
}
