//! Coefficient fields (ℚ and 𝔽_p) and dense linear algebra over them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient selector used at the API and CLI boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

impl FieldKind {
    /// Rejects 𝔽_p for composite or too-large `p`.
    pub fn checked(self) -> Result<Self> {
        match self {
            FieldKind::Rationals => Ok(self),
            FieldKind::Prime(p) if is_prime(p) && p < (1 << 31) => Ok(self),
            FieldKind::Prime(p) => Err(Error::InvalidField(format!("{p} is not a supported prime"))),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => f.write_str("Q"),
            FieldKind::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldKind::Rationals);
        }
        let p = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("F"))
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::InvalidField(s.to_string()))?;
        FieldKind::Prime(p).checked()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field arithmetic on an explicit element type.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;
    fn kind(&self) -> FieldKind;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }
}

/// 𝔽_p with `p < 2^31`, elements stored reduced in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldKind::Prime(p).checked()?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced residue")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a % self.p != 0, "inverse of zero");
        // Fermat
        let mut result = 1u64;
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.p == 0
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
}

/// Reduces a big integer into `0..p`.
pub fn reduce_mod(n: &BigInt, p: u64) -> BigInt {
    let r = n.mod_floor(&BigInt::from(p));
    debug_assert!(!r.is_negative());
    r
}

/// Dense row-reduced echelon form in place; returns pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(pv) {
                    *v = field.sub(v, &field.mul(&factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn dense_rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of `{v : A v = 0}` for `A` given by rows with `ncols` columns.
/// Each basis vector has a 1 at one free column and zeros at the others.
pub fn dense_kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    (0..ncols)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Solves `Σ x_i columns[i] = target`; `None` if inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(field: &F, columns: &[Vec<F::Elem>], target: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = columns.len();
    let m = target.len();
    let mut rows: Vec<Vec<F::Elem>> = (0..m)
        .map(|i| {
            let mut row: Vec<F::Elem> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(field, &mut rows);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![field.zero(); n];
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = row[n].clone();
    }
    Some(x)
}
