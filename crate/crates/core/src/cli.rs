//! The `maghom` command-line driver.
//!
//! Every subcommand reads one JSON input (digraph, space or module), scans
//! the attainable grades up to `--lmax` and emits a [`Report`]. Failures are
//! written to stderr as `{"error": kind, "message": ...}` with exit code 2;
//! `crosscheck` exits with 1 when the two pipelines disagree.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{
    bar_resolution, check_bound_quiver_presentation, ext_bidegree_with, quiver_relations, tor_bidegree_with, tor_dim_over,
    Side,
};
use crate::chain::{attainable_grades, magnitude_cochain_complex, magnitude_complex, magnitude_complex_with_coefficients};
use crate::distmod::{coinvariants, invariants, random_module, trivial_module, validate_module, DistanceModule};
use crate::error::{Error, Result};
use crate::io::{
    emit, homology_report, load_input, load_module, module_to_json, presentation_to_json,
    relations_to_json, ring_table_to_json, space_to_json, Format, Input, Report,
};
use crate::linalg::{Field, FieldKind, HomologySummary, PrimeField, Rationals};
use crate::ring::ring_table;
use crate::space::{format_grade, parse_grade, random_space, Grade, QuasimetricSpace};

#[derive(Debug, Parser)]
#[command(name = "maghom", version, about = "Exact magnitude homology of quasimetric spaces and digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Job {
    /// Digraph, space or module JSON file.
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    /// Largest grade scanned, as an exact rational such as `3/2`.
    #[arg(long, default_value = "3")]
    pub lmax: String,
    /// `Z`, `Q` or `Fp:P`.
    #[arg(long)]
    pub field: Option<String>,
    /// `json`, `csv` or `table`.
    #[arg(long, default_value = "table")]
    pub format: String,
    /// Distance module to use as coefficients.
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the quasimetric (and module) axioms.
    Validate(Job),
    /// Magnitude homology via the normalized chain complex.
    Mh(Job),
    /// Tor against the bar resolution.
    Tor(Job),
    /// Ext against the bar resolution (field coefficients only).
    Ext(Job),
    /// Compare `mh` with `tor` at every bidegree.
    Crosscheck(Job),
    /// Cup product structure constants on magnitude cohomology.
    Ring(Job),
    /// Shortest-path relations of a digraph and the presentation check.
    Relations(Job),
    /// Invariants of a distance module.
    Inv(Job),
    /// Coinvariants of a distance module.
    Coinv(Job),
    /// Emit a seeded random test instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        points: usize,
        /// `space` or `module`.
        #[arg(long, default_value = "space")]
        kind: String,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

/// Coefficient selector at the command line; `Z` keeps torsion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coeffs {
    Integers,
    Field(FieldKind),
}

impl Coeffs {
    pub fn parse(s: Option<&str>, default: Coeffs) -> Result<Self> {
        match s {
            None => Ok(default),
            Some("Z") => Ok(Coeffs::Integers),
            Some(f) => Ok(Coeffs::Field(f.parse()?)),
        }
    }

    fn field(self) -> Result<FieldKind> {
        match self {
            Coeffs::Field(k) => Ok(k),
            Coeffs::Integers => Err(Error::InvalidField("this command needs a field (Q or Fp:P), not Z".into())),
        }
    }

    fn label(self) -> String {
        match self {
            Coeffs::Integers => "Z".into(),
            Coeffs::Field(k) => k.to_string(),
        }
    }
}

struct Prepared {
    space: QuasimetricSpace,
    input: Input,
    lmax: Grade,
    format: Format,
    module: Option<DistanceModule>,
}

fn prepare(job: &Job) -> Result<Prepared> {
    let format: Format = job.format.parse()?;
    let lmax = parse_grade(&job.lmax)?;
    if lmax < Grade::from_integer(0) {
        return Err(Error::BadGrade(job.lmax.clone()));
    }
    let input = load_input(&job.input)?;
    let space = input.space();
    let module = match (&job.coefficients, &input) {
        (Some(path), _) => Some(load_module(path)?),
        (None, Input::Module(m)) => Some(m.clone()),
        _ => None,
    };
    let module = match module {
        Some(m) => {
            if m.space() != &space {
                return Err(Error::SpaceMismatch("coefficients live on a different space".into()));
            }
            Some(validate_module(m)?)
        }
        None => None,
    };
    Ok(Prepared { space, input, lmax, format, module })
}

fn meta(command: &str, job: &Job, coeffs: Option<Coeffs>, lmax: &Grade) -> Value {
    let mut v = json!({"command": command, "nmax": job.nmax, "lmax": format_grade(lmax)});
    if let Some(c) = coeffs {
        v["field"] = json!(c.label());
    }
    v
}

/// Grades where something can be nonzero: attainable tuple grades, shifted
/// by the module's grades when there are coefficients.
fn scan_grades(space: &QuasimetricSpace, module: Option<&DistanceModule>, lmax: &Grade) -> Vec<Grade> {
    let tuples = attainable_grades(space, lmax);
    let Some(m) = module else { return tuples };
    let mut out: Vec<Grade> =
        m.grades().iter().flat_map(|g| tuples.iter().map(move |t| *t + *g)).filter(|g| g <= lmax).collect();
    out.sort();
    out.dedup();
    out
}

fn over(coeffs: Coeffs, n: usize, grade: Grade, z: impl FnOnce() -> Result<HomologySummary>, f: impl FnOnce(FieldKind) -> Result<usize>) -> Result<HomologySummary> {
    match coeffs {
        Coeffs::Integers => z(),
        Coeffs::Field(k) => Ok(HomologySummary { n, grade, betti: f(k)?, torsion: Vec::new() }),
    }
}

/// `MH_{n,ℓ}` for every scanned grade and `n ≤ nmax`, ordered by `(ℓ, n)`.
pub fn mh_rows(space: &QuasimetricSpace, module: Option<&DistanceModule>, nmax: usize, lmax: &Grade, coeffs: Coeffs) -> Result<Vec<HomologySummary>> {
    let per_grade: Vec<Result<Vec<HomologySummary>>> = scan_grades(space, module, lmax)
        .par_iter()
        .map(|g| {
            let rows = |h: &dyn Fn(usize) -> Result<HomologySummary>| (0..=nmax).map(h).collect::<Result<Vec<_>>>();
            match module {
                None => {
                    let c = magnitude_complex(space, g, nmax);
                    rows(&|n| over(coeffs, n, *g, || c.homology(n), |k| c.homology_dim(n, k)))
                }
                Some(m) => {
                    let c = magnitude_complex_with_coefficients(space, m, g, nmax)?;
                    rows(&|n| over(coeffs, n, *g, || c.homology(n), |k| c.homology_dim(n, k)))
                }
            }
        })
        .collect();
    Ok(per_grade.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn lowest_grade(m: &DistanceModule) -> Grade {
    m.grades().first().copied().unwrap_or_default()
}

/// Tor against one left bar resolution sized for the whole scan.
pub fn tor_rows(space: &QuasimetricSpace, module: Option<&DistanceModule>, nmax: usize, lmax: &Grade, coeffs: Coeffs) -> Result<Vec<HomologySummary>> {
    let triv;
    let m = match module {
        Some(m) => m,
        None => {
            triv = trivial_module(space, Grade::from_integer(0), 1);
            &triv
        }
    };
    let window = (*lmax - lowest_grade(m)).max(Grade::from_integer(0));
    let res = bar_resolution(space, Side::Left, nmax + 1, &window);
    let per_grade: Vec<Result<Vec<HomologySummary>>> = scan_grades(space, Some(m), lmax)
        .par_iter()
        .map(|g| {
            (0..=nmax)
                .map(|n| over(coeffs, n, *g, || tor_bidegree_with(&res, m, n, g), |k| tor_dim_over(&res, m, n, g, k)))
                .collect()
        })
        .collect();
    Ok(per_grade.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

/// `dim Ext^{n,ℓ}` against one right bar resolution.
pub fn ext_rows(space: &QuasimetricSpace, module: Option<&DistanceModule>, nmax: usize, lmax: &Grade, field: FieldKind) -> Result<Vec<HomologySummary>> {
    let triv;
    let m = match module {
        Some(m) => m,
        None => {
            triv = trivial_module(space, Grade::from_integer(0), 1);
            &triv
        }
    };
    let highest = m.grades().last().copied().unwrap_or_default();
    let window = (*lmax + highest).max(Grade::from_integer(0));
    let res = bar_resolution(space, Side::Right, nmax + 1, &window);
    // Ext^{n,ℓ}(S, M) pairs tuples of grade ℓ + g with M in grade g, so the
    // scanned grades are tuple grades minus module grades.
    let tuples = attainable_grades(space, &window);
    let mut grades: Vec<Grade> = m
        .grades()
        .iter()
        .flat_map(|g| tuples.iter().map(move |t| *t - *g))
        .filter(|g| *g >= Grade::from_integer(0) && g <= lmax)
        .collect();
    grades.sort();
    grades.dedup();
    let per_grade: Vec<Result<Vec<HomologySummary>>> = grades
        .par_iter()
        .map(|g| {
            (0..=nmax)
                .map(|n| Ok(HomologySummary { n, grade: *g, betti: ext_bidegree_with(&res, m, n, g, field)?, torsion: Vec::new() }))
                .collect()
        })
        .collect();
    Ok(per_grade.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn torsion_text(t: &[BigInt]) -> String {
    t.iter().map(BigInt::to_string).collect::<Vec<_>>().join(";")
}

fn crosscheck_report(mh: &[HomologySummary], tor: &[HomologySummary], meta: Value) -> (Report, bool) {
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut mismatches = 0;
    for (a, b) in mh.iter().zip(tor) {
        debug_assert_eq!((a.n, a.grade), (b.n, b.grade));
        let agree = a.betti == b.betti && a.torsion == b.torsion;
        mismatches += usize::from(!agree);
        rows.push(vec![
            a.n.to_string(),
            format_grade(&a.grade),
            a.betti.to_string(),
            torsion_text(&a.torsion),
            b.betti.to_string(),
            torsion_text(&b.torsion),
            agree.to_string(),
        ]);
        json_rows.push(json!({
            "n": a.n, "l": format_grade(&a.grade),
            "mh": {"betti": a.betti, "torsion": a.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>()},
            "tor": {"betti": b.betti, "torsion": b.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>()},
            "agree": agree,
        }));
    }
    let ok = mismatches == 0 && mh.len() == tor.len();
    let note = if ok { "all bidegrees agree".to_string() } else { format!("{mismatches} bidegree(s) disagree") };
    let mut json = meta;
    json["rows"] = Value::Array(json_rows);
    json["agree"] = json!(ok);
    json["mismatches"] = json!(mismatches);
    let cols = ["n", "l", "mh_betti", "mh_torsion", "tor_betti", "tor_torsion", "agree"];
    (Report::new(json, &cols, rows).with_note(note), ok)
}

fn ring_report<F: Field>(field: &F, space: &QuasimetricSpace, nmax: usize, lmax: &Grade, meta: Value) -> Result<Report> {
    let table = ring_table(field, space, nmax, lmax)?;
    let mut json = meta;
    let body = ring_table_to_json(field, &table);
    json["classes"] = body["classes"].clone();
    json["products"] = body["products"].clone();
    let rows = table
        .products
        .iter()
        .filter(|p| !p.result.is_empty())
        .map(|p| {
            let result: Vec<String> = p
                .result
                .iter()
                .map(|(c, k)| format!("{}*[{},{},{k}]", field.render(c), p.lhs.0 + p.rhs.0, format_grade(&(p.lhs.1 + p.rhs.1))))
                .collect();
            vec![
                format!("[{},{},{}]", p.lhs.0, format_grade(&p.lhs.1), p.lhs.2),
                format!("[{},{},{}]", p.rhs.0, format_grade(&p.rhs.1), p.rhs.2),
                result.join(" + "),
            ]
        })
        .collect();
    let classes: usize = table.classes.values().sum();
    Ok(Report::new(json, &["lhs", "rhs", "product"], rows)
        .with_note(format!("{classes} class(es), {} product(s) computed", table.products.len())))
}

fn need_module(p: &Prepared) -> Result<&DistanceModule> {
    p.module.as_ref().ok_or_else(|| Error::Input("this command needs a module input or --coefficients".into()))
}

fn homology_cmd(name: &str, job: &Job, p: &Prepared, coeffs: Coeffs, rows: Vec<HomologySummary>) -> Report {
    let mut m = meta(name, job, Some(coeffs), &p.lmax);
    if p.module.is_some() {
        m["coefficients"] = json!("module");
    }
    homology_report(&rows, m)
}

fn execute(command: &Command) -> Result<(String, i32)> {
    let (job, name) = match command {
        Command::Gen { seed, points, kind, format } => return generate(*seed, *points, kind, format).map(|s| (s, 0)),
        Command::Validate(j) => (j, "validate"),
        Command::Mh(j) => (j, "mh"),
        Command::Tor(j) => (j, "tor"),
        Command::Ext(j) => (j, "ext"),
        Command::Crosscheck(j) => (j, "crosscheck"),
        Command::Ring(j) => (j, "ring"),
        Command::Relations(j) => (j, "relations"),
        Command::Inv(j) => (j, "inv"),
        Command::Coinv(j) => (j, "coinv"),
    };
    let p = prepare(job)?;
    let field = job.field.as_deref();
    let report = match command {
        Command::Validate(_) => {
            let mut v = json!({"command": "validate", "kind": p.input.kind(), "points": p.space.len(), "valid": true});
            if p.module.is_some() {
                v["module"] = json!("valid");
            }
            let rows = vec![vec![p.input.kind().to_string(), p.space.len().to_string(), "valid".to_string()]];
            Report::new(v, &["kind", "points", "status"], rows)
        }
        Command::Mh(_) => {
            let coeffs = Coeffs::parse(field, Coeffs::Integers)?;
            homology_cmd(name, job, &p, coeffs, mh_rows(&p.space, p.module.as_ref(), job.nmax, &p.lmax, coeffs)?)
        }
        Command::Tor(_) => {
            let coeffs = Coeffs::parse(field, Coeffs::Integers)?;
            homology_cmd(name, job, &p, coeffs, tor_rows(&p.space, p.module.as_ref(), job.nmax, &p.lmax, coeffs)?)
        }
        Command::Ext(_) => {
            let coeffs = Coeffs::parse(field, Coeffs::Field(FieldKind::Rationals))?;
            let rows = ext_rows(&p.space, p.module.as_ref(), job.nmax, &p.lmax, coeffs.field()?)?;
            homology_cmd(name, job, &p, coeffs, rows)
        }
        Command::Crosscheck(_) => {
            let coeffs = Coeffs::parse(field, Coeffs::Integers)?;
            let (mh, tor) = rayon::join(
                || mh_rows(&p.space, p.module.as_ref(), job.nmax, &p.lmax, coeffs),
                || tor_rows(&p.space, p.module.as_ref(), job.nmax, &p.lmax, coeffs),
            );
            let (report, ok) = crosscheck_report(&mh?, &tor?, meta(name, job, Some(coeffs), &p.lmax));
            return Ok((emit(&report, p.format), if ok { 0 } else { 1 }));
        }
        Command::Ring(_) => {
            let coeffs = Coeffs::parse(field, Coeffs::Field(FieldKind::Rationals))?;
            let m = meta(name, job, Some(coeffs), &p.lmax);
            match coeffs.field()? {
                FieldKind::Rationals => ring_report(&Rationals, &p.space, job.nmax, &p.lmax, m)?,
                FieldKind::Prime(q) => ring_report(&PrimeField::new(q)?, &p.space, job.nmax, &p.lmax, m)?,
            }
        }
        Command::Relations(_) => {
            let Input::Digraph(g) = &p.input else {
                return Err(Error::Input("relations needs a digraph input".into()));
            };
            let rel = quiver_relations(g);
            let top = p.lmax.floor().to_integer().max(0) as usize;
            let pres = check_bound_quiver_presentation(g, top)?;
            let mut v = meta(name, job, None, &p.lmax);
            let body = relations_to_json(g, &rel);
            v["R1"] = body["R1"].clone();
            v["R2"] = body["R2"].clone();
            v["presentation"] = presentation_to_json(&pres);
            let label = |path: &[usize]| path.iter().map(|&i| g.vertices()[i].as_str()).collect::<Vec<_>>().join("->");
            let mut rows: Vec<Vec<String>> =
                rel.r1.iter().map(|(a, b)| vec!["R1".to_string(), format!("{} = {}", label(a), label(b))]).collect();
            rows.extend(rel.r2.iter().map(|a| vec!["R2".to_string(), format!("{} = 0", label(a))]));
            let note = format!("admissible: {}, exponent {}", pres.admissible(), pres.exponent);
            Report::new(v, &["kind", "relation"], rows).with_note(note)
        }
        Command::Inv(_) => {
            let comps = invariants(need_module(&p)?)?;
            let mut v = meta(name, job, None, &p.lmax);
            v["components"] = Value::Array(
                comps
                    .iter()
                    .map(|c| {
                        let basis: Vec<Value> = c
                            .basis
                            .iter()
                            .map(|(x, vec)| json!({"point": p.space.label(*x), "vector": vec.iter().map(BigInt::to_string).collect::<Vec<_>>()}))
                            .collect();
                        json!({"l": format_grade(&c.grade), "rank": c.rank, "basis": basis})
                    })
                    .collect(),
            );
            let rows = comps.iter().map(|c| vec![format_grade(&c.grade), c.rank.to_string()]).collect();
            Report::new(v, &["l", "rank"], rows)
        }
        Command::Coinv(_) => {
            let comps = coinvariants(need_module(&p)?)?;
            let mut v = meta(name, job, None, &p.lmax);
            v["components"] = Value::Array(
                comps
                    .iter()
                    .map(|c| json!({"l": format_grade(&c.grade), "betti": c.betti, "torsion": c.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>()}))
                    .collect(),
            );
            let rows = comps.iter().map(|c| vec![format_grade(&c.grade), c.betti.to_string(), torsion_text(&c.torsion)]).collect();
            Report::new(v, &["l", "betti", "torsion"], rows)
        }
        Command::Gen { .. } => unreachable!("handled above"),
    };
    Ok((emit(&report, p.format), 0))
}

/// Cochain-side dimensions, exposed for the duality checks in examples.
pub fn cohomology_dims(space: &QuasimetricSpace, nmax: usize, lmax: &Grade, field: FieldKind) -> Result<Vec<HomologySummary>> {
    attainable_grades(space, lmax)
        .par_iter()
        .map(|g| {
            let c = magnitude_cochain_complex(space, g, nmax, field)?;
            (0..=nmax).map(|n| Ok(HomologySummary { n, grade: *g, betti: c.cohomology_dim(n)?, torsion: Vec::new() })).collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()
        .map(|v| v.into_iter().flatten().collect())
}

fn generate(seed: u64, points: usize, kind: &str, format: &str) -> Result<String> {
    if format != "json" {
        return Err(Error::UnsupportedFormat(format!("{format} (gen emits json)")));
    }
    if points == 0 {
        return Err(Error::Input("--points must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(&mut rng, points);
    let v = match kind {
        "space" => space_to_json(&space),
        "module" => module_to_json(&random_module(&mut rng, &space, 2, Grade::from_integer(3))),
        other => return Err(Error::Input(format!("unknown instance kind `{other}` (space or module)"))),
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON values serialize")))
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": e.kind(), "message": e.to_string()});
    match e {
        Error::TriangleViolation(x, y, z) => v["witness"] = json!([x, y, z]),
        Error::InvalidModule(vs) => v["violations"] = json!(vs.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        _ => {}
    }
    v
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(&e));
            2
        }
    }
}

/// Convenience for tests and examples: run with captured output.
pub fn run_captured<S: AsRef<str>>(args: &[S]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv: Vec<String> = std::iter::once("maghom".to_string()).chain(args.iter().map(|a| a.as_ref().to_string())).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}
