//! JSON formats for rings, complexes, maps, modules and filtrations.
//!
//! Ring elements are polynomial strings. Maps keyed by cohomological index
//! serialize in numeric order, so output is byte-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::algebra::{Backend, LocalAlgebra, Ring};
use crate::complexes::{ChainMap, Complex, FreeModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::KMat;
use crate::matrix::Matrix;
use crate::resolutions::ModulePresentation;
use crate::tate::{DGAlgebra, Filtration, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BackendSpec {
    Named(String),
    Graded { graded: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub backend: BackendSpec,
}

/// A ring given inline or as a path to a ring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Path(String),
    Inline(RingSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingRef>,
    pub support: Option<[i64; 2]>,
    pub terms: BTreeMap<i64, TermSpec>,
    #[serde(default)]
    pub differentials: BTreeMap<i64, Vec<Vec<String>>>,
}

/// A degree-0 chain map; a triangle file is the map whose strict cone it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingRef>,
    pub source: ComplexSpec,
    pub target: ComplexSpec,
    pub components: BTreeMap<i64, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingRef>,
    pub gens: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
    /// `gens` rows; one column per relation.
    pub relations: Vec<Vec<String>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(parse_err)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn ring_spec(r: &LocalAlgebra) -> RingSpec {
    RingSpec {
        field: match r.field() {
            Field::Rationals => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { p },
        },
        vars: r.var_names().to_vec(),
        relations: r.relations().iter().map(|m| m.format(r.var_names())).collect(),
        backend: match r.backend() {
            Backend::Artinian => BackendSpec::Named("artinian".into()),
            Backend::Graded { window } => BackendSpec::Graded { graded: window },
        },
    }
}

pub fn ring_from_spec(s: &RingSpec) -> Result<Ring> {
    let field = match &s.field {
        FieldSpec::Named(q) if q == "Q" => Field::Rationals,
        FieldSpec::Named(other) => return Err(Error::Parse(format!("unknown field `{other}`"))),
        FieldSpec::Prime { p } => Field::prime(*p)?,
    };
    let backend = match &s.backend {
        BackendSpec::Named(a) if a == "artinian" => Backend::Artinian,
        BackendSpec::Named(other) => return Err(Error::UnsupportedBackend(other.clone())),
        BackendSpec::Graded { graded } => Backend::Graded { window: *graded },
    };
    let vars: Vec<&str> = s.vars.iter().map(|v| v.as_str()).collect();
    let rels: Vec<&str> = s.relations.iter().map(|v| v.as_str()).collect();
    LocalAlgebra::with_relations(field, &vars, &rels, backend)
}

/// Resolves paths relative to `base`.
pub fn ring_from_ref(r: &RingRef, base: &Path) -> Result<Ring> {
    match r {
        RingRef::Inline(s) => ring_from_spec(s),
        RingRef::Path(p) => {
            let path: PathBuf = base.join(p);
            ring_from_spec(&from_json(&read_file(&path)?)?)
        }
    }
}

pub fn ring_to_json(r: &LocalAlgebra) -> String {
    to_json(&ring_spec(r))
}

pub fn ring_from_json(s: &str) -> Result<Ring> {
    ring_from_spec(&from_json(s)?)
}

pub fn matrix_strings(m: &Matrix, r: &LocalAlgebra) -> Vec<Vec<String>> {
    m.format(r)
}

pub fn parse_matrix(rows: &[Vec<String>], nrows: usize, ncols: usize, r: &LocalAlgebra, what: &str) -> Result<Matrix> {
    if rows.len() != nrows && !(nrows == 0 && rows.is_empty()) {
        return Err(Error::Shape(format!("{what}: {} rows, expected {nrows}", rows.len())));
    }
    let mut m = Matrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Shape(format!("{what}: row {i} has {} entries, expected {ncols}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            let a = r.parse(e).map_err(|err| Error::Parse(format!("{what} entry ({i}, {j}): {err}")))?;
            m.set(i, j, a);
        }
    }
    Ok(m)
}

pub fn kmat_strings(m: &KMat) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect()).collect()
}

/// Canonical form: nonzero terms and nonzero differentials only.
pub fn complex_spec(c: &Complex, with_ring: bool) -> ComplexSpec {
    let r = c.ring();
    let mut terms = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    if !c.is_zero() {
        for i in c.indices() {
            let m = c.module(i);
            if m.rank > 0 {
                terms.insert(i, TermSpec { rank: m.rank, degrees: m.degrees.clone() });
            }
            let d = c.d(i);
            if !d.is_zero() {
                differentials.insert(i, d.format(r));
            }
        }
    }
    ComplexSpec {
        ring: with_ring.then(|| RingRef::Inline(ring_spec(r))),
        support: c.support().map(|(a, b)| [a, b]),
        terms,
        differentials,
    }
}

/// Builds the complex over `ring`, which overrides any ring named in `s`.
pub fn complex_from_spec(s: &ComplexSpec, ring: &Ring) -> Result<Complex> {
    let c = complex_parts_from_spec(s, ring)?;
    Complex::new(ring, c.terms_map(), c.diffs_map())
}

/// As [`complex_from_spec`] without requiring `d^2 = 0`.
pub fn complex_parts_from_spec(s: &ComplexSpec, ring: &Ring) -> Result<Complex> {
    let mut terms = BTreeMap::new();
    for (i, t) in &s.terms {
        if let Some([lo, hi]) = s.support {
            if t.rank > 0 && (*i < lo || *i > hi) {
                return Err(Error::Shape(format!("term {i} lies outside the declared support [{lo}, {hi}]")));
            }
        }
        let m = match (&t.degrees, ring.is_artinian()) {
            (Some(d), _) => FreeModule { rank: t.rank, degrees: Some(d.clone()) },
            (None, true) => FreeModule::new(t.rank),
            (None, false) => return Err(Error::Invalid(format!("term {i} needs generator degrees on the graded backend"))),
        };
        terms.insert(*i, m);
    }
    let rank = |i: i64| s.terms.get(&i).map(|t| t.rank).unwrap_or(0);
    let mut diffs = BTreeMap::new();
    for (i, rows) in &s.differentials {
        diffs.insert(*i, parse_matrix(rows, rank(i + 1), rank(*i), ring, &format!("d^{i}"))?);
    }
    let c = Complex::from_parts(ring, terms, diffs)?;
    if let Some([lo, hi]) = s.support {
        if c.support().is_some_and(|(a, b)| a != lo || b != hi) {
            return Err(Error::Shape(format!("declared support [{lo}, {hi}] differs from the nonzero terms")));
        }
    }
    Ok(c)
}

pub fn complex_to_json(c: &Complex) -> String {
    to_json(&complex_spec(c, true))
}

/// Parses a complex file; `fallback` supplies the ring when the file has none.
pub fn complex_from_json(s: &str, base: &Path, fallback: Option<&Ring>) -> Result<Complex> {
    let spec: ComplexSpec = from_json(s)?;
    let ring = pick_ring(spec.ring.as_ref(), base, fallback)?;
    complex_from_spec(&spec, &ring)
}

/// The ring named in a file, else `fallback`.
pub fn pick_ring(r: Option<&RingRef>, base: &Path, fallback: Option<&Ring>) -> Result<Ring> {
    match (r, fallback) {
        (Some(r), _) => ring_from_ref(r, base),
        (None, Some(f)) => Ok(f.clone()),
        (None, None) => Err(Error::Parse("no ring given".into())),
    }
}

pub fn map_spec(f: &ChainMap) -> MapSpec {
    let r = f.source.ring();
    MapSpec {
        ring: Some(RingRef::Inline(ring_spec(r))),
        source: complex_spec(&f.source, false),
        target: complex_spec(&f.target, false),
        components: f.comps().iter().filter(|(_, m)| !m.is_zero()).map(|(i, m)| (*i, m.format(r))).collect(),
    }
}

pub fn map_from_json(s: &str, base: &Path, fallback: Option<&Ring>) -> Result<ChainMap> {
    let spec: MapSpec = from_json(s)?;
    let ring = pick_ring(spec.ring.as_ref(), base, fallback)?;
    map_from_spec(&spec, &ring)
}

pub fn map_from_spec(spec: &MapSpec, ring: &Ring) -> Result<ChainMap> {
    let ring = ring.clone();
    let source = complex_from_spec(&spec.source, &ring)?;
    let target = complex_from_spec(&spec.target, &ring)?;
    let mut comps = BTreeMap::new();
    for (i, rows) in &spec.components {
        comps.insert(*i, parse_matrix(rows, target.rank(*i), source.rank(*i), &ring, &format!("component {i}"))?);
    }
    ChainMap::new(&source, &target, comps)
}

pub fn module_from_json(s: &str, base: &Path, fallback: Option<&Ring>) -> Result<ModulePresentation> {
    let spec: ModuleSpec = from_json(s)?;
    let ring = pick_ring(spec.ring.as_ref(), base, fallback)?;
    module_from_spec(&spec, &ring)
}

pub fn module_from_spec(spec: &ModuleSpec, ring: &Ring) -> Result<ModulePresentation> {
    let ring = ring.clone();
    let ncols = spec.relations.first().map(|r| r.len()).unwrap_or(0);
    let rel = parse_matrix(&spec.relations, spec.gens, ncols, &ring, "relations")?;
    ModulePresentation::new(&ring, spec.gens, spec.degrees.clone(), rel)
}

/// `{"parameter": c, "<i>": {"<n>": [words]}}` with numeric keys in order.
pub fn filtration_to_value(f: &Filtration) -> Value {
    let x = &f.algebra;
    let mut out = Map::new();
    out.insert("parameter".into(), json!(f.parameter));
    for (i, p) in f.pieces().iter().enumerate() {
        let mut piece = Map::new();
        for (n, ws) in p.iter().rev() {
            piece.insert(n.to_string(), json!(ws.iter().rev().map(|w| x.format_word(w)).collect::<Vec<_>>()));
        }
        out.insert(i.to_string(), Value::Object(piece));
    }
    Value::Object(out)
}

/// Word syntax of [`DGAlgebra::format_word`]: `1`, `T1*S2_1^(3)`.
pub fn parse_word(x: &DGAlgebra, s: &str) -> Result<Word> {
    let mut w = vec![0u32; x.vars().len()];
    if s.trim() == "1" {
        return Ok(w);
    }
    for part in s.split('*') {
        let part = part.trim();
        let (name, e) = match part.split_once("^(") {
            Some((n, rest)) => {
                let e = rest
                    .strip_suffix(')')
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad divided power `{part}`")))?;
                (n, e)
            }
            None => (part, 1),
        };
        let k = x
            .vars()
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        if w[k] != 0 {
            return Err(Error::Parse(format!("variable `{name}` repeated in `{s}`")));
        }
        w[k] = e;
    }
    Ok(w)
}

pub fn filtration_from_value(x: &DGAlgebra, v: &Value) -> Result<Filtration> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("filtration must be a JSON object".into()))?;
    let parameter = obj
        .get("parameter")
        .and_then(|p| p.as_i64())
        .ok_or_else(|| Error::Parse("filtration needs an integer \"parameter\"".into()))?;
    let mut pieces: BTreeMap<usize, BTreeMap<i64, BTreeSet<Word>>> = BTreeMap::new();
    for (k, p) in obj.iter().filter(|(k, _)| *k != "parameter") {
        let i: usize = k.parse().map_err(|_| Error::Parse(format!("piece index `{k}` is not a number")))?;
        let p = p.as_object().ok_or_else(|| Error::Parse(format!("piece {k} must be an object")))?;
        let mut piece = BTreeMap::new();
        for (n, ws) in p {
            let n: i64 = n.parse().map_err(|_| Error::Parse(format!("degree `{n}` is not a number")))?;
            let ws = ws.as_array().ok_or_else(|| Error::Parse(format!("piece {k} degree {n}: expected a list")))?;
            let mut set = BTreeSet::new();
            for w in ws {
                let w = w.as_str().ok_or_else(|| Error::Parse("words are strings".into()))?;
                set.insert(parse_word(x, w)?);
            }
            piece.insert(n, set);
        }
        pieces.insert(i, piece);
    }
    if pieces.keys().copied().ne(0..pieces.len()) {
        return Err(Error::Parse("piece indices must be 0, 1, ..., n".into()));
    }
    Filtration::new(x, parameter, pieces.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolutions::koszul_on_variables;
    use crate::tate::{tate_filtration, tate_resolve};

    #[test]
    fn ring_round_trip() {
        let s = r#"{"field": {"Fp": 7}, "vars": ["x", "y"], "relations": ["y^2", "x^3", "x*y^4"], "backend": "artinian"}"#;
        let r = ring_from_json(s).unwrap();
        let out = ring_to_json(&r);
        assert_eq!(ring_to_json(&ring_from_json(&out).unwrap()), out);
        assert!(out.contains("\"Fp\": 7"));
        let g = ring_from_json(r#"{"field": "Q", "vars": ["x"], "backend": {"graded": 9}}"#).unwrap();
        assert_eq!(g.window(), Some(9));
        assert!(matches!(ring_from_json(r#"{"field": "Q", "vars": ["x"], "backend": "sheaf"}"#), Err(Error::UnsupportedBackend(_))));
        assert!(matches!(ring_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn complex_round_trip() {
        let r = ring_from_json(r#"{"field": "Q", "vars": ["x", "y"], "relations": ["x^2", "y^2"], "backend": "artinian"}"#)
            .unwrap();
        let k = koszul_on_variables(&r).unwrap();
        let s = complex_to_json(&k);
        let back = complex_from_json(&s, Path::new("."), None).unwrap();
        assert_eq!(back, k);
        assert_eq!(complex_to_json(&back), s);
        let z = Complex::zero(&r);
        assert_eq!(complex_from_json(&complex_to_json(&z), Path::new("."), None).unwrap(), z);

        let g = ring_from_json(r#"{"field": "Q", "vars": ["x"], "backend": {"graded": 6}}"#).unwrap();
        let c = Complex::two_term(&g, -1, &g.parse("x^2").unwrap()).unwrap();
        assert_eq!(complex_from_json(&complex_to_json(&c), Path::new("."), None).unwrap(), c);
    }

    #[test]
    fn complex_errors() {
        let bad = r#"{"ring": {"field": "Q", "vars": ["x"], "relations": ["x^2"], "backend": "artinian"},
            "support": [0, 1], "terms": {"0": {"rank": 1}, "1": {"rank": 1}}, "differentials": {"0": [["1"]], "1": [["x"]]}}"#;
        assert!(complex_from_json(bad, Path::new("."), None).is_err());
        let nonzero_sq = r#"{"ring": {"field": "Q", "vars": ["x"], "relations": ["x^3"], "backend": "artinian"},
            "support": [0, 2], "terms": {"0": {"rank": 1}, "1": {"rank": 1}, "2": {"rank": 1}},
            "differentials": {"0": [["x"]], "1": [["x"]]}}"#;
        assert!(matches!(complex_from_json(nonzero_sq, Path::new("."), None), Err(Error::Invalid(_))));
    }

    #[test]
    fn map_round_trip() {
        let r = ring_from_json(r#"{"field": "Q", "vars": ["x"], "relations": ["x^2"], "backend": "artinian"}"#).unwrap();
        let a = Complex::stalk(&r, 0);
        let f = ChainMap::scalar(&a, &r.var(0));
        let s = to_json(&map_spec(&f));
        let g = map_from_json(&s, Path::new("."), None).unwrap();
        assert_eq!(g.comps(), f.comps());
    }

    #[test]
    fn filtration_round_trip() {
        let r = ring_from_json(r#"{"field": "Q", "vars": ["x"], "relations": ["x^2"], "backend": "artinian"}"#).unwrap();
        let res = tate_resolve(&r, 4).unwrap();
        let f = tate_filtration(&res).unwrap();
        let v = filtration_to_value(&f);
        let g = filtration_from_value(&res.algebra, &v).unwrap();
        assert_eq!(g.pieces(), f.pieces());
        assert_eq!(g.parameter, f.parameter);
        let w = res.algebra.var_word(1, 2);
        assert_eq!(parse_word(&res.algebra, &res.algebra.format_word(&w)).unwrap(), w);
    }
}
