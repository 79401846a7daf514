//! Smith normal form, exact ranks, and integer kernels.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::field::FieldKind;
use crate::linalg::sparse::SparseIntMatrix;

/// Working copy for elimination: rows as sparse maps plus a column index.
struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Work {
    fn new(m: &SparseIntMatrix) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows()];
        let mut cols = vec![BTreeSet::new(); m.cols()];
        for (r, c, v) in m.iter() {
            rows[r].insert(c, v.clone());
            cols[c].insert(r);
        }
        Work { rows, cols }
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// row[target] -= q * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        let src: Vec<(usize, BigInt)> = self.rows[source].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.rows[target].get(&c).cloned().unwrap_or_default();
            self.set(target, c, cur - q * v);
        }
    }

    /// col[target] -= q * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        let src: Vec<(usize, BigInt)> =
            self.cols[source].iter().map(|&r| (r, self.rows[r][&source].clone())).collect();
        for (r, v) in src {
            let cur = self.rows[r].get(&target).cloned().unwrap_or_default();
            self.set(r, target, cur - q * v);
        }
    }

    fn entry(&self, r: usize, c: usize) -> &BigInt {
        &self.rows[r][&c]
    }

    /// Smallest |entry|, ties broken by Markowitz fill-in estimate.
    fn best_pivot(&self, candidates: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        candidates
            .map(|(r, c)| {
                let fill = (self.rows[r].len() - 1) * (self.cols[c].len() - 1);
                ((self.entry(r, c).abs(), fill), (r, c))
            })
            .min()
            .map(|(_, rc)| rc)
    }
}

/// Quotient rounded to nearest, so the remainder satisfies |r| <= |p|/2.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    // r has the sign of p, so the other candidate remainder is r - p
    let (q, r) = a.div_mod_floor(p);
    let twice: BigInt = &r * 2;
    if twice.abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

/// Diagonalizes `m` by unimodular row and column operations; returns the
/// absolute values of the nonzero diagonal entries (not yet a divisibility chain).
fn diagonalize(m: &SparseIntMatrix) -> Vec<BigInt> {
    let mut w = Work::new(m);
    let mut diag = Vec::new();
    loop {
        let all = w.rows.iter().enumerate().flat_map(|(r, row)| row.keys().map(move |&c| (r, c)));
        let Some((mut pr, mut pc)) = w.best_pivot(all) else {
            break;
        };
        loop {
            let p = w.entry(pr, pc).clone();
            let others: Vec<usize> = w.cols[pc].iter().copied().filter(|&r| r != pr).collect();
            for r in others {
                let q = nearest_quotient(w.entry(r, pc), &p);
                w.row_axpy(r, pr, &q);
            }
            if w.cols[pc].len() > 1 {
                let cand = w.cols[pc].iter().copied().filter(|&r| r != pr).map(|r| (r, pc)).collect::<Vec<_>>();
                (pr, pc) = w.best_pivot(cand.into_iter()).expect("remainder entries");
                continue;
            }
            let others: Vec<usize> = w.rows[pr].keys().copied().filter(|&c| c != pc).collect();
            for c in others {
                let q = nearest_quotient(w.entry(pr, c), &p);
                w.col_axpy(c, pc, &q);
            }
            if w.rows[pr].len() > 1 {
                let cand = w.rows[pr].keys().copied().filter(|&c| c != pc).map(|c| (pr, c)).collect::<Vec<_>>();
                (pr, pc) = w.best_pivot(cand.into_iter()).expect("remainder entries");
                continue;
            }
            diag.push(p.abs());
            w.set(pr, pc, BigInt::zero());
            break;
        }
    }
    diag
}

/// Turns a list of nonzero diagonal entries into the invariant factor chain
/// `d_1 | d_2 | ...` of the same diagonal matrix.
pub fn invariant_factors_of_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for v in d.iter_mut() {
        *v = v.abs();
    }
    d.retain(|v| !v.is_zero());
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
    d
}

/// Smith normal form invariant factors `d_1 | d_2 | ... | d_r`, `r` = rank.
pub fn snf(m: &SparseIntMatrix) -> Vec<BigInt> {
    invariant_factors_of_diagonal(diagonalize(m))
}

/// Exact rank over ℚ (fraction-free elimination) or 𝔽_p (modular elimination).
pub fn rank_over_field(m: &SparseIntMatrix, field: FieldKind) -> crate::Result<usize> {
    match field.checked()? {
        FieldKind::Rationals => Ok(rank_rational(m)),
        FieldKind::Prime(p) => Ok(rank_mod_p(m, p)),
    }
}

fn rank_rational(m: &SparseIntMatrix) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows()];
    for (r, c, v) in m.iter() {
        rows[r].insert(c, v.clone());
    }
    rows.retain(|r| !r.is_empty());
    let mut rank = 0;
    while !rows.is_empty() {
        // pivot: shortest row, its leading column
        let (idx, _) = rows.iter().enumerate().min_by_key(|(_, r)| r.len()).unwrap();
        let pivot_row = rows.swap_remove(idx);
        let (&pc, pv) = pivot_row.iter().next().unwrap();
        let pv = pv.clone();
        for row in rows.iter_mut() {
            let Some(a) = row.get(&pc).cloned() else { continue };
            let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
            let keys: BTreeSet<usize> = row.keys().chain(pivot_row.keys()).copied().collect();
            for k in keys {
                let v = row.get(&k).map_or_else(BigInt::zero, |x| x * &pv)
                    - pivot_row.get(&k).map_or_else(BigInt::zero, |y| y * &a);
                if !v.is_zero() {
                    next.insert(k, v);
                }
            }
            let content = next.values().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !content.is_zero() && !content.is_one() {
                for v in next.values_mut() {
                    *v /= &content;
                }
            }
            *row = next;
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    let reduce = |v: &BigInt| v.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m.rows()];
    for (r, c, v) in m.iter() {
        let x = reduce(v);
        if x != 0 {
            rows[r].insert(c, x);
        }
    }
    rows.retain(|r| !r.is_empty());
    let inv = |a: u64| -> u64 {
        let (mut result, mut base, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    };
    let mut rank = 0;
    while !rows.is_empty() {
        let (idx, _) = rows.iter().enumerate().min_by_key(|(_, r)| r.len()).unwrap();
        let pivot_row = rows.swap_remove(idx);
        let (&pc, &pv) = pivot_row.iter().next().unwrap();
        let pinv = inv(pv);
        for row in rows.iter_mut() {
            let Some(&a) = row.get(&pc) else { continue };
            let factor = a * pinv % p;
            for (&k, &y) in &pivot_row {
                let cur = row.get(&k).copied().unwrap_or(0);
                let v = (cur + p - factor * y % p) % p;
                if v == 0 {
                    row.remove(&k);
                } else {
                    row.insert(k, v);
                }
            }
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

/// A ℤ-basis of `{v ∈ ℤ^n : A v = 0}`, computed by unimodular column
/// operations on `A` tracked in a transformation matrix.
pub fn integer_kernel(m: &SparseIntMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols();
    // rows of `at` are columns of A; `tr` tracks the unimodular transform
    let mut at = m.transpose().to_dense();
    let mut tr: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let width = m.rows();
    let mut lead = 0;
    for col in 0..width {
        if lead == n {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (lead..n).filter(|&i| !at[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| at[i][col].abs()).unwrap();
            at.swap(lead, piv);
            tr.swap(lead, piv);
            let mut done = true;
            for i in (lead + 1)..n {
                if at[i][col].is_zero() {
                    continue;
                }
                let q = at[i][col].div_floor(&at[lead][col]);
                for j in 0..width {
                    let v = &at[lead][j] * &q;
                    at[i][j] -= v;
                }
                for j in 0..n {
                    let v = &tr[lead][j] * &q;
                    tr[i][j] -= v;
                }
                if !at[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                lead += 1;
                break;
            }
        }
    }
    (lead..n).map(|i| tr[i].clone()).collect()
}
