//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's enumeration, boundary or
//! elimination code: distances come from Floyd-Warshall, chains from
//! enumerating every sequence of points, and homology from a dense Smith
//! form over `i128`.
#![allow(dead_code)]

use num_rational::Rational64;

pub type Dist = Vec<Vec<Option<Rational64>>>;

/// All-pairs shortest path lengths of a digraph with unit arcs.
pub fn floyd_warshall(n: usize, arcs: &[(usize, usize)]) -> Dist {
    let mut d: Vec<Vec<Option<i64>>> = (0..n).map(|i| (0..n).map(|j| (i == j).then_some(0)).collect()).collect();
    for &(u, v) in arcs {
        d[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d.into_iter().map(|r| r.into_iter().map(|e| e.map(Rational64::from_integer)).collect()).collect()
}

fn collinear(d: &Dist, x: usize, y: usize, z: usize) -> bool {
    match (d[x][y], d[y][z], d[x][z]) {
        (Some(a), Some(b), Some(c)) => a + b == c,
        _ => false,
    }
}

fn length(d: &Dist, t: &[usize]) -> Option<Rational64> {
    t.windows(2).try_fold(Rational64::from_integer(0), |acc, w| d[w[0]][w[1]].map(|s| acc + s))
}

/// Every sequence of `len` points, in lexicographic order.
pub fn all_sequences(points: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..points).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Normalized generators of degree `n` and length `l`.
pub fn generators(d: &Dist, n: usize, l: Rational64) -> Vec<Vec<usize>> {
    all_sequences(d.len(), n + 1)
        .into_iter()
        .filter(|t| t.windows(2).all(|w| w[0] != w[1]) && length(d, t) == Some(l))
        .collect()
}

/// Dense `∂_n` with rows indexed by degree `n-1` generators.
pub fn boundary(d: &Dist, n: usize, l: Rational64) -> (Vec<Vec<i128>>, usize, usize) {
    let cols = generators(d, n, l);
    if n == 0 {
        return (Vec::new(), 0, cols.len());
    }
    let rows = generators(d, n - 1, l);
    let mut m = vec![vec![0i128; cols.len()]; rows.len()];
    for (j, t) in cols.iter().enumerate() {
        for i in 1..n {
            if collinear(d, t[i - 1], t[i], t[i + 1]) {
                let mut face = t.clone();
                face.remove(i);
                let r = rows.iter().position(|s| *s == face).expect("face is a generator");
                m[r][j] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    (m, rows.len(), cols.len())
}

/// Nonzero diagonal of the Smith form, each dividing the next.
pub fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j))).filter(|&(i, j)| a[i][j] != 0).min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold any entry not divisible by the pivot into row t
            let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % a[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j];
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

pub fn rank_mod(a: &[Vec<i128>], p: i128) -> usize {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, r);
        let inv = (1..p).find(|x| x * m[rank][c] % p == 1).unwrap();
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `MH_{n,l}` over ℤ as `(betti, torsion)`.
pub fn magnitude_homology(d: &Dist, n: usize, l: Rational64) -> (usize, Vec<i128>) {
    let (out, _, dim) = boundary(d, n, l);
    let (inc, _, _) = boundary(d, n + 1, l);
    let r_out = smith_diagonal(out).len();
    let inc_diag = smith_diagonal(inc);
    let torsion = inc_diag.iter().copied().filter(|&v| v > 1).collect();
    (dim - r_out - inc_diag.len(), torsion)
}

/// `dim MH_{n,l}` over `𝔽_p`.
pub fn magnitude_homology_mod(d: &Dist, n: usize, l: Rational64, p: i128) -> usize {
    let (out, _, dim) = boundary(d, n, l);
    let (inc, _, _) = boundary(d, n + 1, l);
    dim - rank_mod(&out, p) - rank_mod(&inc, p)
}

/// `#{(x, y) : d(x, y) = l}`.
pub fn pairs_at(d: &Dist, l: Rational64) -> usize {
    d.iter().flatten().filter(|e| **e == Some(l)).count()
}
