//! Acceptance checks. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use maghom::algebra::{
    bar_resolution, build_distance_algebra, check_bound_quiver_presentation, ext_bidegree_with, tor_bidegree_with, Side,
};
use maghom::chain::{attainable_grades, magnitude_cochain_complex, magnitude_complex, CochainComplex};
use maghom::distmod::{hom_from_trivial, invariants, random_module, trivial_module};
use maghom::linalg::{FieldKind, Rationals};
use maghom::ring::{check_lift_commutes, coboundary, cohomology_classes, cup, is_coboundary, is_cocycle, yoneda_product, Cochain};
use maghom::space::{digraph_to_space, random_space};
use maghom::suite::{digraphs_up_to_isomorphism, k2, suite, SuiteInstance};
use maghom::{Grade, QuasimetricSpace};
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn g(n: i64) -> Grade {
    Grade::from_integer(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const F2: FieldKind = FieldKind::Prime(2);

/// Every chain complex, its duals over ℚ and 𝔽_2, and both bar resolutions
/// square to zero on all digraphs with at most four vertices and on 200
/// random half-integer spaces.
fn complex_validity() -> Outcome {
    let start = Instant::now();
    let mut spaces: Vec<(String, QuasimetricSpace)> = Vec::new();
    for n in 1..=4 {
        for (i, d) in digraphs_up_to_isomorphism(n).iter().enumerate() {
            spaces.push((format!("digraph {n}.{i}"), digraph_to_space(d)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let points = rng.gen_range(1..=4);
        spaces.push((format!("random #{i}"), random_space(&mut rng, points)));
    }
    let lmax = g(5);
    let checked: Result<Vec<usize>, String> = spaces
        .par_iter()
        .map(|(name, s)| {
            let mut count = 0;
            for grade in attainable_grades(s, &lmax) {
                let c = magnitude_complex(s, &grade, 5);
                ensure(c.is_chain_complex(), || format!("{name}: chain complex fails at grade {grade}"))?;
                for field in [FieldKind::Rationals, F2] {
                    let dual = CochainComplex::dual_of(&c, field).map_err(|e| e.to_string())?;
                    ensure(dual.is_cochain_complex(), || format!("{name}: cochain complex over {field} fails at {grade}"))?;
                }
                count += 3;
            }
            for side in [Side::Left, Side::Right] {
                let r = bar_resolution(s, side, 5, &g(2));
                ensure(r.is_complex(), || format!("{name}: {side:?} bar resolution fails"))?;
                count += 1;
            }
            Ok(count)
        })
        .collect();
    let total: usize = checked?.iter().sum();
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}, target 60s"))?;
    Ok(format!("{} spaces, {total} complexes, {:.1}s", spaces.len(), elapsed.as_secs_f64()))
}

/// `MH_{n,n}(K2) = ℤ²` and everything else vanishes, for `n, ℓ ≤ 5`.
fn k2_ladder() -> Outcome {
    let s = digraph_to_space(&k2());
    for l in 0..=5 {
        let c = magnitude_complex(&s, &g(l), 5);
        for n in 0..=5 {
            let h = c.homology(n).map_err(|e| e.to_string())?;
            let want = if n as i64 == l { 2 } else { 0 };
            ensure(h.betti == want && h.torsion.is_empty(), || format!("MH_{{{n},{l}}} = {h:?}"))?;
        }
    }
    Ok("36 bidegrees exact".into())
}

/// Tor against the bar resolution equals chain-level magnitude homology,
/// Betti numbers and torsion, for `n ≤ 3`, `ℓ ≤ 4`.
fn tor_crosscheck(instances: &[SuiteInstance]) -> Outcome {
    let start = Instant::now();
    let results: Result<Vec<usize>, String> = instances
        .par_iter()
        .map(|inst| {
            let res = bar_resolution(&inst.space, Side::Left, 4, &g(4));
            let triv = trivial_module(&inst.space, g(0), 1);
            let mut count = 0;
            for grade in attainable_grades(&inst.space, &g(4)) {
                let c = magnitude_complex(&inst.space, &grade, 3);
                for n in 0..=3 {
                    let mh = c.homology(n).map_err(|e| e.to_string())?;
                    let tor = tor_bidegree_with(&res, &triv, n, &grade).map_err(|e| e.to_string())?;
                    ensure(mh == tor, || format!("{} at ({n},{grade}): MH {mh:?} vs Tor {tor:?}", inst.name))?;
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect();
    let total: usize = results?.iter().sum();
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}, target 5 min"))?;
    Ok(format!("{total} bidegrees over {} instances, {:.1}s", instances.len(), elapsed.as_secs_f64()))
}

/// `dim Ext = dim MH^{n,ℓ} = dim MH_{n,ℓ}` over ℚ and 𝔽_2.
fn cohomology_duality(instances: &[SuiteInstance]) -> Outcome {
    let results: Result<Vec<usize>, String> = instances
        .par_iter()
        .map(|inst| {
            let res = bar_resolution(&inst.space, Side::Right, 4, &g(4));
            let triv = trivial_module(&inst.space, g(0), 1);
            let mut count = 0;
            for grade in attainable_grades(&inst.space, &g(4)) {
                let chain = magnitude_complex(&inst.space, &grade, 3);
                for field in [FieldKind::Rationals, F2] {
                    let cochain = magnitude_cochain_complex(&inst.space, &grade, 3, field).map_err(|e| e.to_string())?;
                    for n in 0..=3 {
                        let ext = ext_bidegree_with(&res, &triv, n, &grade, field).map_err(|e| e.to_string())?;
                        let co = cochain.cohomology_dim(n).map_err(|e| e.to_string())?;
                        let ho = chain.homology_dim(n, field).map_err(|e| e.to_string())?;
                        ensure(ext == co && co == ho, || {
                            format!("{} at ({n},{grade}) over {field}: Ext {ext}, MH^ {co}, MH_ {ho}", inst.name)
                        })?;
                        count += 1;
                    }
                }
            }
            Ok(count)
        })
        .collect();
    Ok(format!("{} bidegree/field checks", results?.iter().sum::<usize>()))
}

type QCochain = Cochain<BigRational>;

/// Cocycles spanning `Z^{n,ℓ}`: class representatives plus the coboundaries
/// of the degree `n-1` dual basis.
fn cocycles(space: &Arc<QuasimetricSpace>, n: usize, grade: &Grade) -> Result<(Vec<QCochain>, Vec<QCochain>), String> {
    let classes = cohomology_classes(&Rationals, space, n, grade).map_err(|e| e.to_string())?;
    let reps = classes.representatives(&Rationals);
    let mut bounds = Vec::new();
    if n > 0 {
        let c = magnitude_complex(space, grade, n - 1);
        for t in c.basis(n - 1) {
            let b = coboundary(&Rationals, &Cochain::dual(&Rationals, space, &t.pts).map_err(|e| e.to_string())?);
            if !b.is_zero() && !bounds.contains(&b) {
                bounds.push(b);
            }
        }
    }
    Ok((reps, bounds))
}

type CocycleTable = BTreeMap<(usize, Grade), (Vec<QCochain>, Vec<QCochain>)>;

fn cocycle_table(space: &Arc<QuasimetricSpace>, n_max: usize, lmax: &Grade) -> Result<CocycleTable, String> {
    let mut out = BTreeMap::new();
    for n in 0..=n_max {
        for grade in attainable_grades(space, lmax) {
            out.insert((n, grade), cocycles(space, n, &grade)?);
        }
    }
    Ok(out)
}

/// Chain-level Yoneda products equal cup products, and every lift commutes
/// with the differentials, for `n + m ≤ 3`, `ℓ + s ≤ 4` over ℚ.
fn yoneda_equals_cup(instances: &[SuiteInstance]) -> Outcome {
    let results: Result<Vec<(usize, usize)>, String> = instances
        .par_iter()
        .map(|inst| {
            let space = Arc::new(inst.space.clone());
            let res = bar_resolution(&space, Side::Left, 3, &g(4));
            let table = cocycle_table(&space, 3, &g(4))?;
            let (mut products, mut lifts) = (0, 0);
            for ((n, l), (reps, bounds)) in &table {
                for phi in reps.iter().chain(bounds) {
                    for k in 1..=3 - n {
                        let ok = check_lift_commutes(&Rationals, &res, phi, k).map_err(|e| e.to_string())?;
                        ensure(ok, || format!("{}: lift {k} of a ({n},{l}) cocycle does not commute", inst.name))?;
                        lifts += 1;
                    }
                }
                for ((m, s), (reps2, bounds2)) in &table {
                    if n + m > 3 || *l + *s > g(4) {
                        continue;
                    }
                    for psi in reps2.iter().chain(bounds2) {
                        for phi in reps.iter().chain(bounds) {
                            let y = yoneda_product(&Rationals, &res, psi, phi).map_err(|e| e.to_string())?;
                            let c = cup(&Rationals, psi, phi).map_err(|e| e.to_string())?;
                            ensure(y == c, || format!("{}: Yoneda and cup differ for ({m},{s}) x ({n},{l})", inst.name))?;
                            products += 1;
                        }
                    }
                }
            }
            Ok((products, lifts))
        })
        .collect();
    let (p, l) = results?.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(format!("{p} products, {l} lift squares"))
}

/// Associativity, the unit, closure of cocycles and the coboundary ideal.
fn ring_axioms(instances: &[SuiteInstance]) -> Outcome {
    let f = &Rationals;
    let results: Result<Vec<usize>, String> = instances
        .par_iter()
        .map(|inst| {
            let space = Arc::new(inst.space.clone());
            let table = cocycle_table(&space, 3, &g(4))?;
            let unit = Cochain::unit(f, &space);
            let err = |e: maghom::Error| e.to_string();
            let mut count = 0;
            let all: Vec<(&(usize, Grade), &QCochain)> =
                table.iter().flat_map(|(k, (r, b))| r.iter().chain(b).map(move |c| (k, c))).collect();
            for &(_, a) in &all {
                ensure(cup(f, &unit, a).map_err(err)? == *a && cup(f, a, &unit).map_err(err)? == *a, || {
                    format!("{}: unit law fails", inst.name)
                })?;
            }
            for &((n, l), a) in &all {
                for &((m, s), b) in &all {
                    if n + m > 3 || *l + *s > g(4) {
                        continue;
                    }
                    let ab = cup(f, a, b).map_err(err)?;
                    ensure(is_cocycle(f, &ab), || format!("{}: cup of cocycles is not a cocycle", inst.name))?;
                    count += 1;
                    let (_, bounds_b) = &table[&(*m, *s)];
                    if bounds_b.contains(b) {
                        ensure(is_coboundary(f, &ab).map_err(err)?, || format!("{}: cocycle x coboundary", inst.name))?;
                    }
                    let (_, bounds_a) = &table[&(*n, *l)];
                    if bounds_a.contains(a) {
                        ensure(is_coboundary(f, &ab).map_err(err)?, || format!("{}: coboundary x cocycle", inst.name))?;
                    }
                    for &((p, t), c) in &all {
                        if n + m + p > 3 || *l + *s + *t > g(4) {
                            continue;
                        }
                        let left = cup(f, &ab, c).map_err(err)?;
                        let right = cup(f, a, &cup(f, b, c).map_err(err)?).map_err(err)?;
                        ensure(left == right, || format!("{}: cup is not associative", inst.name))?;
                        count += 1;
                    }
                }
            }
            Ok(count)
        })
        .collect();
    Ok(format!("{} pair/triple checks", results?.iter().sum::<usize>()))
}

/// `Hom(Triv, M)_ℓ` and `Inv(M)_ℓ` have equal rank for 100 random modules.
fn invariants_as_hom(instances: &[SuiteInstance]) -> Outcome {
    let mut count = 0;
    for seed in 0..100u64 {
        let inst = &instances[seed as usize % instances.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&mut rng, &inst.space, 2, g(3));
        let inv = invariants(&m).map_err(|e| e.to_string())?;
        let mut grades = m.grades();
        grades.extend((0..=6).map(|k| Grade::new(k, 2)));
        grades.sort();
        grades.dedup();
        for grade in grades {
            let rank = inv.iter().find(|c| c.grade == grade).map_or(0, |c| c.rank);
            let hom = hom_from_trivial(&m, &grade);
            ensure(rank == hom, || format!("seed {seed} on {} at {grade}: Inv {rank}, Hom {hom}", inst.name))?;
            count += 1;
        }
    }
    Ok(format!("100 modules, {count} graded comparisons"))
}

/// `dim (KG/R)_ℓ = #{(x, y) : d(x, y) = ℓ}` for `ℓ ≤ 4` and `J^N ⊆ R ⊆ J²`.
fn bound_quiver(instances: &[SuiteInstance]) -> Outcome {
    for inst in instances {
        let report = check_bound_quiver_presentation(&inst.digraph, 4).map_err(|e| format!("{}: {e}", inst.name))?;
        let arcs: Vec<_> = inst.digraph.arcs().iter().copied().collect();
        let d = common::floyd_warshall(inst.digraph.len(), &arcs);
        for gr in &report.grades {
            let pairs = common::pairs_at(&d, Rational64::from_integer(gr.grade as i64));
            ensure(gr.quotient_dim == pairs && gr.pairs == pairs, || {
                format!("{} at {}: quotient {}, pairs {pairs}", inst.name, gr.grade, gr.quotient_dim)
            })?;
        }
        ensure(report.grades.len() == 5, || format!("{}: grades 0..=4 expected", inst.name))?;
        ensure(report.admissible(), || format!("{}: relations not admissible", inst.name))?;
    }
    Ok(format!("{} digraphs, grades 0..=4", instances.len()))
}

/// `(JX)^{|X|} = 0`.
fn nilpotency(instances: &[SuiteInstance]) -> Outcome {
    for inst in instances {
        let alg = build_distance_algebra(&inst.space);
        let n = inst.space.len();
        ensure(alg.radical_power(n).is_empty(), || format!("{}: (JX)^{n} ≠ 0", inst.name))?;
    }
    Ok(format!("{} algebras", instances.len()))
}

/// The truncated bar resolutions are exact in degrees `1..n_max` and
/// resolve `S` in degree 0, grade by grade.
fn resolution_exactness(instances: &[SuiteInstance]) -> Outcome {
    let results: Result<Vec<usize>, String> = instances
        .par_iter()
        .map(|inst| {
            let mut grades = 0;
            for side in [Side::Left, Side::Right] {
                let res = bar_resolution(&inst.space, side, 4, &g(4));
                let defects = res.exactness_defects().map_err(|e| e.to_string())?;
                ensure(defects.is_empty(), || format!("{} {side:?}: not exact at {defects:?}", inst.name))?;
                grades += res.grades().len();
            }
            Ok(grades)
        })
        .collect();
    Ok(format!("{} graded pieces, n_max 4", results?.iter().sum::<usize>()))
}

fn main() -> ExitCode {
    let instances = suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("complex validity", Box::new(complex_validity)),
        ("K2 ladder", Box::new(k2_ladder)),
        ("Tor equals magnitude homology", Box::new(|| tor_crosscheck(&instances))),
        ("cohomology duality", Box::new(|| cohomology_duality(&instances))),
        ("Yoneda product equals cup", Box::new(|| yoneda_equals_cup(&instances))),
        ("ring axioms", Box::new(|| ring_axioms(&instances))),
        ("invariants as Hom from Triv", Box::new(|| invariants_as_hom(&instances))),
        ("bound quiver presentation", Box::new(|| bound_quiver(&instances))),
        ("nilpotent radical", Box::new(|| nilpotency(&instances))),
        ("resolution exactness", Box::new(|| resolution_exactness(&instances))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
