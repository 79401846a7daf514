//! Bigraded `Tor^{σX}(M̄, S)` and `Ext_{σX}(S, M̄)` from the bar resolutions.
//!
//! `M̄ = ⊕_x M(x)` with `m·(x, y) = M(x, y)(m)`. Each free summand of `P_n`
//! is generated by one bar tuple `t`, so
//! `M̄ ⊗ σX·g_t ≅ M(x_0)[|t|]` and `Hom(h_t·σX, M̄) ≅ M(x_n)[-|t|]`; the
//! differentials are read off the resolution on generator columns and pushed
//! through the module's structure maps.

use std::collections::HashMap;

use crate::distmod::DistanceModule;
use crate::error::{Error, Result};
use crate::linalg::{homology_at, homology_dim_over, rank_over_field, FieldKind, HomologySummary, SparseIntMatrix};
use crate::space::{Grade, QuasimetricSpace};

use super::resolution::{bar_resolution, Resolution, Side};

/// Basis of one degree of a derived complex: generator tuples paired with
/// basis vectors of the coefficient component they carry.
struct DerivedBasis {
    /// `(tuple, generator index in P_n, coefficient grade, element)`
    cells: Vec<(Vec<usize>, usize, Grade, usize)>,
    index: HashMap<(Vec<usize>, usize), usize>,
}

impl DerivedBasis {
    fn len(&self) -> usize {
        self.cells.len()
    }
}

fn check_module(res: &Resolution, module: &DistanceModule) -> Result<()> {
    if !module.is_validated() {
        return Err(Error::UnvalidatedModule);
    }
    if module.space() != res.space() {
        return Err(Error::SpaceMismatch("module and resolution use different spaces".into()));
    }
    Ok(())
}

/// Collects `(t, m)` with `g_t` a generator of `P_n` and `m` running over a
/// basis of the coefficient component in grade `coeff_grade(|t|)`, taken at
/// the point `anchor(t)`.
fn derived_basis(
    res: &Resolution,
    module: &DistanceModule,
    n: usize,
    anchor: impl Fn(&[usize]) -> usize,
    coeff_grade: impl Fn(Grade) -> Grade,
) -> DerivedBasis {
    let mut cells = Vec::new();
    for i in 0..res.dim(n) {
        if !res.is_generator(n, i) {
            continue;
        }
        let t = res.bar_part(&res.basis(n)[i]).to_vec();
        let g = coeff_grade(res.grade_of(n, i));
        let rank = module.rank(anchor(&t), &g);
        for m in 0..rank {
            cells.push((t.clone(), i, g, m));
        }
    }
    let index = cells.iter().enumerate().map(|(k, (t, _, _, m))| ((t.clone(), *m), k)).collect();
    DerivedBasis { cells, index }
}

/// Degrees `0..=n+1` of `M̄ ⊗_{σX} P_•` in grade `ℓ`: the differentials and
/// the rank of degree `n`.
fn tor_complex(res: &Resolution, module: &DistanceModule, n: usize, grade: &Grade) -> Result<(Vec<SparseIntMatrix>, usize)> {
    if res.side() != Side::Left {
        return Err(Error::Input("Tor is computed against a left resolution".into()));
    }
    check_module(res, module)?;
    if n + 1 > res.n_max() {
        return Err(Error::ResolutionTooShort(format!("degree {} exceeds n_max = {}", n + 1, res.n_max())));
    }
    for x in 0..res.space().len() {
        for g in module.components(x).keys() {
            if g <= grade && *grade - *g > res.lmax() {
                return Err(Error::ResolutionTooShort(format!("grade {} exceeds the window {}", *grade - *g, res.lmax())));
            }
        }
    }
    let bases: Vec<DerivedBasis> = (0..=n + 1)
        .map(|d| derived_basis(res, module, d, |t| t[0], |tg| *grade - tg))
        .collect();
    let mut diffs = vec![SparseIntMatrix::zeros(0, bases[0].len())];
    for d in 1..=n + 1 {
        let mut m = SparseIntMatrix::zeros(bases[d - 1].len(), bases[d].len());
        let columns = res.boundary(d).columns();
        for (j, (t, gen, g, elem)) in bases[d].cells.iter().enumerate() {
            let x0 = t[0];
            for (r, c) in &columns[*gen] {
                let face = &res.basis(d - 1)[*r];
                debug_assert_eq!(face[0], x0);
                let target = face[1..].to_vec();
                let action = module.action(x0, face[1], g).expect("finite step");
                for (ri, ci, v) in action.iter() {
                    if ci == *elem {
                        let row = bases[d - 1].index[&(target.clone(), ri)];
                        m.add_to(row, j, &(c * v));
                    }
                }
            }
        }
        diffs.push(m);
    }
    Ok((diffs, bases[n].len()))
}

/// `Tor_{n,ℓ}^{σX}(M̄, S)` over ℤ against a left bar resolution.
pub fn tor_bidegree_with(res: &Resolution, module: &DistanceModule, n: usize, grade: &Grade) -> Result<HomologySummary> {
    let (diffs, dim) = tor_complex(res, module, n, grade)?;
    let h = homology_at(&diffs[n], &diffs[n + 1], dim)?;
    Ok(HomologySummary::new(n, *grade, h))
}

/// `dim Tor_{n,ℓ}^{σX}(M̄ ⊗ K, S ⊗ K)` over a field `K`.
pub fn tor_dim_over(res: &Resolution, module: &DistanceModule, n: usize, grade: &Grade, field: FieldKind) -> Result<usize> {
    let field = field.checked()?;
    let (diffs, dim) = tor_complex(res, module, n, grade)?;
    homology_dim_over(&diffs[n], &diffs[n + 1], dim, field)
}

/// `Tor_{n,ℓ}^{σX}(M̄, S)` with a resolution sized to fit the query.
pub fn tor_bidegree(space: &QuasimetricSpace, module: &DistanceModule, n: usize, grade: &Grade) -> Result<HomologySummary> {
    let lowest = (0..space.len()).flat_map(|x| module.components(x).keys().copied()).min();
    let window = lowest.map_or(Grade::from_integer(0), |g| (*grade - g).max(Grade::from_integer(0)));
    tor_bidegree_with(&bar_resolution(space, Side::Left, n + 1, &window), module, n, grade)
}

/// `dim Ext^{n,ℓ}_{σX}(S, M̄)` over a field against a right bar resolution.
pub fn ext_bidegree_with(
    res: &Resolution,
    module: &DistanceModule,
    n: usize,
    grade: &Grade,
    field: FieldKind,
) -> Result<usize> {
    let field = field.checked()?;
    if res.side() != Side::Right {
        return Err(Error::Input("Ext is computed against a right resolution".into()));
    }
    check_module(res, module)?;
    if n + 1 > res.n_max() {
        return Err(Error::ResolutionTooShort(format!("degree {} exceeds n_max = {}", n + 1, res.n_max())));
    }
    for x in 0..res.space().len() {
        for g in module.components(x).keys() {
            if *grade + *g > res.lmax() {
                return Err(Error::ResolutionTooShort(format!("grade {} exceeds the window {}", *grade + *g, res.lmax())));
            }
        }
    }
    let lo = n.saturating_sub(1);
    let bases: Vec<DerivedBasis> = (0..=n + 1)
        .map(|d| derived_basis(res, module, d, |t| *t.last().unwrap(), |tg| tg - *grade))
        .collect();
    // δ_d : C^d → C^{d+1}, (δf)(h_s) = f(∂h_s) with (..., y) = h_t·(x_d, y)
    let coboundary = |d: usize| -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zeros(bases[d + 1].len(), bases[d].len());
        let columns = res.boundary(d + 1).columns();
        let mut gens: Vec<(usize, &Vec<usize>)> = bases[d + 1].cells.iter().map(|(s, gen, _, _)| (*gen, s)).collect();
        gens.dedup();
        for (gen, s) in gens {
            let y = *s.last().unwrap();
            for (r, c) in &columns[gen] {
                let face = &res.basis(d)[*r];
                let t = face[..face.len() - 1].to_vec();
                let xd = *t.last().unwrap();
                let tg = res.space().tuple_grade(&t).expect("finite tuple");
                let action = module.action(xd, y, &(tg - *grade)).expect("finite step");
                for (ri, ci, v) in action.iter() {
                    let row = bases[d + 1].index[&(s.clone(), ri)];
                    let col = bases[d].index[&(t.clone(), ci)];
                    m.add_to(row, col, &(c * v));
                }
            }
        }
        m
    };
    let out = coboundary(n);
    let inc = if n == 0 { SparseIntMatrix::zeros(bases[0].len(), 0) } else { coboundary(lo) };
    if n > 0 {
        let prod = out.mul(&inc);
        if !prod.is_zero() {
            return Err(Error::NotAComplex);
        }
    }
    Ok(bases[n].len() - rank_over_field(&out, field)? - rank_over_field(&inc, field)?)
}

/// `dim Ext^{n,ℓ}_{σX}(S, M̄)` with a resolution sized to fit the query.
pub fn ext_bidegree(
    space: &QuasimetricSpace,
    module: &DistanceModule,
    n: usize,
    grade: &Grade,
    field: FieldKind,
) -> Result<usize> {
    let highest = (0..space.len()).flat_map(|x| module.components(x).keys().copied()).max();
    let window = highest.map_or(Grade::from_integer(0), |g| (*grade + g).max(Grade::from_integer(0)));
    ext_bidegree_with(&bar_resolution(space, Side::Right, n + 1, &window), module, n, grade, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::magnitude_complex;
    use crate::distmod::{representable_module, trivial_module};
    use crate::space::{digraph_to_space, directed_cycle, Digraph};

    fn g(n: i64) -> Grade {
        Grade::from_integer(n)
    }

    fn k2() -> QuasimetricSpace {
        digraph_to_space(&Digraph::new(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap())
    }

    fn x2() -> QuasimetricSpace {
        digraph_to_space(&Digraph::new(&["a", "b"], &[("a", "b")]).unwrap())
    }

    #[test]
    fn tor_examples() {
        let k2 = k2();
        let s = trivial_module(&k2, g(0), 1);
        assert_eq!(tor_bidegree(&k2, &s, 0, &g(0)).unwrap().betti, 2);
        let res = bar_resolution(&k2, Side::Left, 4, &g(3));
        for n in 1..=3 {
            let t = tor_bidegree_with(&res, &s, n, &g(n as i64)).unwrap();
            assert_eq!((t.betti, t.torsion.len()), (2, 0));
        }
        let x2 = x2();
        assert_eq!(tor_bidegree(&x2, &trivial_module(&x2, g(0), 1), 1, &g(1)).unwrap().betti, 1);
    }

    #[test]
    fn ext_examples() {
        let k2 = k2();
        let s = trivial_module(&k2, g(0), 1);
        assert_eq!(ext_bidegree(&k2, &s, 0, &g(0), FieldKind::Rationals).unwrap(), 2);
        for n in 1..=3 {
            assert_eq!(ext_bidegree(&k2, &s, n, &g(n as i64), FieldKind::Rationals).unwrap(), 2);
        }
        let x2 = x2();
        assert_eq!(ext_bidegree(&x2, &trivial_module(&x2, g(0), 1), 1, &g(1), FieldKind::Prime(2)).unwrap(), 1);
    }

    #[test]
    fn tor_matches_chain_for_c4() {
        let c4 = digraph_to_space(&directed_cycle(4));
        let s = trivial_module(&c4, g(0), 1);
        let res = bar_resolution(&c4, Side::Left, 4, &g(4));
        for l in 0..=4 {
            let chain = magnitude_complex(&c4, &g(l), 3);
            for n in 0..=3 {
                let a = chain.homology(n).unwrap();
                let b = tor_bidegree_with(&res, &s, n, &g(l)).unwrap();
                assert_eq!(a, b, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn tor_with_representable_coefficients() {
        // e_a·σX is projective, so higher Tor vanishes and Tor_0 is its S-quotient
        let x2 = x2();
        let m = representable_module(&x2, 0).unwrap();
        let res = bar_resolution(&x2, Side::Left, 3, &g(2));
        for l in 0..=2 {
            let t0 = tor_bidegree_with(&res, &m, 0, &g(l)).unwrap();
            assert_eq!(t0.betti, usize::from(l == 0));
            for n in 1..=2 {
                assert!(tor_bidegree_with(&res, &m, n, &g(l)).unwrap().homology().is_zero());
            }
        }
    }

    #[test]
    fn too_short() {
        let k2 = k2();
        let s = trivial_module(&k2, g(0), 1);
        let res = bar_resolution(&k2, Side::Left, 2, &g(1));
        assert!(matches!(tor_bidegree_with(&res, &s, 2, &g(1)), Err(Error::ResolutionTooShort(_))));
        assert!(matches!(tor_bidegree_with(&res, &s, 1, &g(2)), Err(Error::ResolutionTooShort(_))));
        let right = bar_resolution(&k2, Side::Right, 2, &g(1));
        assert!(matches!(ext_bidegree_with(&right, &s, 1, &g(2), FieldKind::Rationals), Err(Error::ResolutionTooShort(_))));
        assert!(matches!(ext_bidegree(&k2, &s, 1, &g(1), FieldKind::Prime(4)), Err(Error::InvalidField(_))));
    }
}
