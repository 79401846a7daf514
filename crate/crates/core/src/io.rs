//! JSON ingestion and report emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::algebra::{PresentationReport, QuiverRelations};
use crate::distmod::DistanceModule;
use crate::error::{Error, Result};
use crate::linalg::{Field, HomologySummary, SparseIntMatrix};
use crate::ring::RingTable;
use crate::space::{digraph_to_space, format_grade, parse_grade, validate_space, Digraph, ExtDist, Grade, QuasimetricSpace};

/// What an input file turned out to describe.
#[derive(Debug, Clone)]
pub enum Input {
    Digraph(Digraph),
    Space(QuasimetricSpace),
    /// An unvalidated module and the file it came from.
    Module(DistanceModule),
}

impl Input {
    /// The underlying space (path metric for digraphs).
    pub fn space(&self) -> QuasimetricSpace {
        match self {
            Input::Digraph(g) => digraph_to_space(g),
            Input::Space(s) => s.clone(),
            Input::Module(m) => m.space().clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Input::Digraph(_) => "digraph",
            Input::Space(_) => "space",
            Input::Module(_) => "module",
        }
    }
}

fn input_err(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| input_err(format!("`{what}` must be an array of strings")))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| input_err(format!("`{what}` must hold strings"))))
        .collect()
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// `{"vertices": [...], "arcs": [[u, v], ...]}`
pub fn parse_digraph(v: &Value) -> Result<Digraph> {
    let vertices = strings(v.get("vertices").ok_or_else(|| input_err("missing `vertices`"))?, "vertices")?;
    let arcs = v
        .get("arcs")
        .and_then(Value::as_array)
        .ok_or_else(|| input_err("missing `arcs` array"))?
        .iter()
        .map(|a| {
            let pair = strings(a, "arcs")?;
            match pair.as_slice() {
                [u, w] => Ok((u.clone(), w.clone())),
                _ => Err(input_err("each arc must be a pair")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Digraph::new(&vertices, &arcs)
}

/// `{"points": [...], "dist": [[entry, ...], ...]}` with entries `"p/q"`,
/// integers or `"inf"`.
pub fn parse_space(v: &Value) -> Result<QuasimetricSpace> {
    let points = strings(v.get("points").ok_or_else(|| input_err("missing `points`"))?, "points")?;
    let rows = v.get("dist").and_then(Value::as_array).ok_or_else(|| input_err("missing `dist` matrix"))?;
    let matrix = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| input_err("`dist` rows must be arrays"))?
                .iter()
                .map(|e| {
                    let s = scalar_text(e).ok_or_else(|| Error::BadDistance(e.to_string()))?;
                    ExtDist::from_str(&s)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    validate_space(&points, matrix)
}

fn parse_space_like(v: &Value, base: &Path) -> Result<QuasimetricSpace> {
    match v {
        Value::String(rel) => match load_input(&base.join(rel))? {
            Input::Module(_) => Err(input_err("a module's space cannot itself be a module")),
            other => Ok(other.space()),
        },
        Value::Object(o) if o.contains_key("vertices") => Ok(digraph_to_space(&parse_digraph(v)?)),
        Value::Object(_) => parse_space(v),
        _ => Err(input_err("`space` must be an object or a relative path")),
    }
}

/// `{"space": ..., "components": {point: [[grade, rank], ...]},
///   "actions": {"x->y": {grade: [[int, ...], ...]}}}`; the result still
/// needs validation.
pub fn parse_module(v: &Value, base: &Path) -> Result<DistanceModule> {
    let space = parse_space_like(v.get("space").ok_or_else(|| input_err("missing `space`"))?, base)?;
    let mut m = DistanceModule::new(&space);
    let empty = Map::new();
    let comps = match v.get("components") {
        Some(c) => c.as_object().ok_or_else(|| input_err("`components` must be an object"))?,
        None => &empty,
    };
    for (point, list) in comps {
        let x = space.index_of(point)?;
        for entry in list.as_array().ok_or_else(|| input_err("component lists must be arrays"))? {
            let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| input_err("components are [grade, rank]"))?;
            let grade = parse_grade(&scalar_text(&pair[0]).ok_or_else(|| Error::BadGrade(pair[0].to_string()))?)?;
            let rank = pair[1].as_u64().ok_or_else(|| input_err("rank must be a nonnegative integer"))? as usize;
            m.set_component(x, grade, rank);
        }
    }
    let acts = match v.get("actions") {
        Some(a) => a.as_object().ok_or_else(|| input_err("`actions` must be an object"))?,
        None => &empty,
    };
    for (key, per_grade) in acts {
        let (a, b) = key.split_once("->").ok_or_else(|| input_err(format!("action key `{key}` must be `x->y`")))?;
        let (x, y) = (space.index_of(a.trim())?, space.index_of(b.trim())?);
        let d = space.dist(x, y).finite().ok_or_else(|| input_err(format!("no action {key}: distance is infinite")))?;
        for (g, rows) in per_grade.as_object().ok_or_else(|| input_err("actions map grades to matrices"))? {
            let grade = parse_grade(g)?;
            let (r, c) = (m.rank(y, &(grade + d)), m.rank(x, &grade));
            let data = rows
                .as_array()
                .ok_or_else(|| input_err("matrices are arrays of rows"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| input_err("matrix rows are arrays"))?
                        .iter()
                        .map(|e| {
                            scalar_text(e)
                                .and_then(|s| BigInt::from_str(&s).ok())
                                .ok_or_else(|| input_err(format!("matrix entry {e} is not an integer")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let matrix = SparseIntMatrix::from_rows(r, c, &data)
                .map_err(|_| input_err(format!("action {key} at grade {g} must be {r}x{c}")))?;
            m.set_action(x, y, grade, matrix)?;
        }
    }
    Ok(m)
}

/// Reads a digraph, space or module file, recognised by its keys.
pub fn load_input(path: &Path) -> Result<Input> {
    let v = read_json(path)?;
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let obj = v.as_object().ok_or_else(|| input_err("input must be a JSON object"))?;
    if obj.contains_key("vertices") {
        Ok(Input::Digraph(parse_digraph(&v)?))
    } else if obj.contains_key("points") {
        Ok(Input::Space(parse_space(&v)?))
    } else if obj.contains_key("space") {
        Ok(Input::Module(parse_module(&v, &base)?))
    } else {
        Err(input_err("unrecognised input: expected `vertices`, `points` or `space`"))
    }
}

pub fn load_module(path: &Path) -> Result<DistanceModule> {
    match load_input(path)? {
        Input::Module(m) => Ok(m),
        other => Err(input_err(format!("expected a module file, found a {}", other.kind()))),
    }
}

pub fn space_to_json(s: &QuasimetricSpace) -> Value {
    json!({"points": s.labels(), "dist": s.dist_strings()})
}

pub fn digraph_to_json(g: &Digraph) -> Value {
    let v = g.vertices();
    let arcs: Vec<[&str; 2]> = g.arcs().iter().map(|&(a, b)| [v[a].as_str(), v[b].as_str()]).collect();
    json!({"vertices": v, "arcs": arcs})
}

pub fn module_to_json(m: &DistanceModule) -> Value {
    let s = m.space();
    let mut comps = Map::new();
    for x in 0..s.len() {
        if m.components(x).is_empty() {
            continue;
        }
        let list: Vec<Value> = m.components(x).iter().map(|(g, r)| json!([format_grade(g), r])).collect();
        comps.insert(s.label(x).to_string(), Value::Array(list));
    }
    let mut acts = Map::new();
    for (x, y, g, a) in m.stored_actions() {
        let rows: Vec<Vec<Value>> =
            a.to_dense().into_iter().map(|r| r.into_iter().map(|e| json!(e.to_string().parse::<i64>().map_or(json!(e.to_string()), |v| json!(v)))).collect()).collect();
        let key = format!("{}->{}", s.label(x), s.label(y));
        acts.entry(key).or_insert_with(|| Value::Object(Map::new())).as_object_mut().unwrap().insert(format_grade(g), json!(rows));
    }
    json!({"space": space_to_json(s), "components": comps, "actions": acts})
}

fn path_labels(g: &Digraph, p: &[usize]) -> Vec<String> {
    p.iter().map(|&v| g.vertices()[v].clone()).collect()
}

pub fn relations_to_json(g: &Digraph, r: &QuiverRelations) -> Value {
    let r1: Vec<Value> = r.r1.iter().map(|(p, q)| json!([path_labels(g, p), path_labels(g, q)])).collect();
    let r2: Vec<Value> = r.r2.iter().map(|p| json!(path_labels(g, p))).collect();
    json!({"R1": r1, "R2": r2})
}

pub fn presentation_to_json(p: &PresentationReport) -> Value {
    let grades: Vec<Value> = p
        .grades
        .iter()
        .map(|g| json!({"l": g.grade, "paths": g.paths, "relation_rank": g.relation_rank, "quotient_dim": g.quotient_dim, "pairs": g.pairs}))
        .collect();
    json!({"grades": grades, "exponent": p.exponent, "relations_in_J2": p.relations_in_j2, "JN_in_relations": p.jn_in_relations})
}

/// `{"classes": {"n,l": k}, "products": [{"lhs": [n,l,i], "rhs": [m,s,j], "result": [[coeff, index], ...]}]}`
pub fn ring_table_to_json<F: Field>(field: &F, t: &RingTable<F::Elem>) -> Value {
    let mut classes = Map::new();
    for ((n, g), k) in &t.classes {
        classes.insert(format!("{n},{}", format_grade(g)), json!(k));
    }
    let products: Vec<Value> = t
        .products
        .iter()
        .map(|p| {
            let result: Vec<Value> = p.result.iter().map(|(c, i)| json!([field.render(c), i])).collect();
            json!({
                "lhs": [p.lhs.0, format_grade(&p.lhs.1), p.lhs.2],
                "rhs": [p.rhs.0, format_grade(&p.rhs.1), p.rhs.2],
                "result": result,
            })
        })
        .collect();
    json!({"classes": classes, "products": products})
}

pub fn homology_row_json(h: &HomologySummary) -> Value {
    let torsion: Vec<String> = h.torsion.iter().map(BigInt::to_string).collect();
    json!({"n": h.n, "l": format_grade(&h.grade), "betti": h.betti, "torsion": torsion})
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

/// A rendered result: a JSON document plus a flat table view.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Trailing line shown under a table.
    pub note: Option<String>,
}

impl Report {
    pub fn new(json: Value, columns: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report { json, columns: columns.iter().map(|c| c.to_string()).collect(), rows, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Deterministic bytes for a report.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            let header: Vec<String> = report.columns.iter().map(|c| csv_cell(c)).collect();
            writeln!(s, "{}", header.join(",")).unwrap();
            for r in &report.rows {
                let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
                writeln!(s, "{}", cells.join(",")).unwrap();
            }
            s
        }
        Format::Table => {
            let mut widths: Vec<usize> = report.columns.iter().map(|c| c.chars().count()).collect();
            for r in &report.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| -> String {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string()
            };
            let mut s = String::new();
            writeln!(s, "{}", line(&report.columns)).unwrap();
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            writeln!(s, "{}", rule.join("  ")).unwrap();
            for r in &report.rows {
                writeln!(s, "{}", line(r)).unwrap();
            }
            if let Some(note) = &report.note {
                writeln!(s, "{note}").unwrap();
            }
            s
        }
    }
}

/// Homology table with columns `n,l,betti,torsion` (torsion `;`-separated).
pub fn homology_report(rows: &[HomologySummary], meta: Value) -> Report {
    let mut json = meta;
    json["rows"] = Value::Array(rows.iter().map(homology_row_json).collect());
    let flat = rows
        .iter()
        .map(|h| {
            let torsion: Vec<String> = h.torsion.iter().map(BigInt::to_string).collect();
            vec![h.n.to_string(), format_grade(&h.grade), h.betti.to_string(), torsion.join(";")]
        })
        .collect();
    Report::new(json, &["n", "l", "betti", "torsion"], flat)
}

/// Grade strings accepted on the command line and in files.
pub fn grade_arg(s: &str) -> Result<Grade> {
    parse_grade(s)
}
