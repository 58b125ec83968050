use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use homforge_core::algebra::{LocalAlgebra, Ring};
use homforge_core::complexes::{ChainMap, Complex};
use homforge_core::error::Error;
use homforge_core::io::{
    complex_from_spec, complex_parts_from_spec, complex_spec, from_json, matrix_strings, ring_from_json, ring_from_spec,
    ring_spec, BackendSpec, ComplexSpec, RingRef,
};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USER: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug)]
pub enum Failure {
    User(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::User(_) => EXIT_USER,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Failure::User(_) => "user-error",
            Failure::Internal(_) => "internal-error",
        }
    }

    pub fn at(self, path: &Path) -> Failure {
        match self {
            Failure::User(m) => Failure::User(format!("{}: {m}", path.display())),
            f => f,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::User(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::User(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Refuted,
}

/// What a command produced: a machine-readable result and summary lines.
pub struct Outcome {
    pub verdict: Verdict,
    pub result: Value,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn ok(result: Value, summary: Vec<String>) -> Outcome {
        Outcome { verdict: Verdict::Ok, result, summary }
    }

    pub fn with_verdict(ok: bool, result: Value, summary: Vec<String>) -> Outcome {
        Outcome { verdict: if ok { Verdict::Ok } else { Verdict::Refuted }, result, summary }
    }
}

/// Global options plus the digests of every file read.
pub struct Ctx {
    pub seed: u64,
    pub window: Option<u32>,
    pub bound: Option<usize>,
    pub inputs: BTreeMap<String, String>,
}

impl Ctx {
    pub fn new(seed: u64, window: Option<u32>, bound: Option<usize>) -> Ctx {
        Ctx { seed, window, bound, inputs: BTreeMap::new() }
    }

    pub fn bound_or(&self, default: usize) -> usize {
        self.bound.unwrap_or(default)
    }

    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))?;
        self.inputs.insert(path.display().to_string(), format!("sha256:{:x}", Sha256::digest(&bytes)));
        String::from_utf8(bytes).map_err(|_| Failure::User(format!("{}: not UTF-8", path.display())))
    }

    pub fn json<T: for<'de> serde::Deserialize<'de>>(&mut self, path: &Path) -> CliResult<T> {
        let s = self.read(path)?;
        from_json(&s).map_err(|e| Failure::from(e).at(path))
    }

    fn windowed(&self, r: Ring) -> CliResult<Ring> {
        match self.window {
            Some(w) if !r.is_artinian() => {
                let mut s = ring_spec(&r);
                s.backend = BackendSpec::Graded { graded: w };
                Ok(ring_from_spec(&s)?)
            }
            _ => Ok(r),
        }
    }

    pub fn ring(&mut self, path: &Path) -> CliResult<Ring> {
        let s = self.read(path)?;
        let r = ring_from_json(&s).map_err(|e| Failure::from(e).at(path))?;
        self.windowed(r)
    }

    pub fn ring_opt(&mut self, path: Option<&PathBuf>) -> CliResult<Option<Ring>> {
        path.map(|p| self.ring(p)).transpose()
    }

    /// The ring named in a file (relative paths resolve next to it), else `fallback`.
    pub fn pick_ring(&mut self, r: Option<&RingRef>, file: &Path, fallback: Option<&Ring>) -> CliResult<Ring> {
        let own = match r {
            Some(RingRef::Path(p)) => Some(self.ring(&base(file).join(p))?),
            Some(RingRef::Inline(s)) => Some(self.windowed(ring_from_spec(s).map_err(|e| Failure::from(e).at(file))?)?),
            None => None,
        };
        match (own, fallback) {
            (Some(a), Some(b)) if a != *b => {
                Err(Failure::User(format!("{}: ring differs from the one given by --ring", file.display())))
            }
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b.clone()),
            (None, None) => Err(Failure::User(format!("{}: no ring in the file; pass --ring", file.display()))),
        }
    }

    pub fn complex(&mut self, path: &Path, ring: Option<&Ring>) -> CliResult<Complex> {
        let spec: ComplexSpec = self.json(path)?;
        let r = self.pick_ring(spec.ring.as_ref(), path, ring)?;
        complex_from_spec(&spec, &r).map_err(|e| Failure::from(e).at(path))
    }

    /// Parses without requiring `d^2 = 0`.
    pub fn complex_parts(&mut self, path: &Path, ring: Option<&Ring>) -> CliResult<Complex> {
        let spec: ComplexSpec = self.json(path)?;
        let r = self.pick_ring(spec.ring.as_ref(), path, ring)?;
        complex_parts_from_spec(&spec, &r).map_err(|e| Failure::from(e).at(path))
    }
}

fn base(file: &Path) -> PathBuf {
    file.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn complex_value(c: &Complex) -> Value {
    serde_json::to_value(complex_spec(c, false)).expect("complex spec serializes")
}

pub fn map_value(f: &ChainMap) -> Value {
    let r = f.source.ring();
    let comps: Map<String, Value> =
        f.comps().iter().filter(|(_, m)| !m.is_zero()).map(|(i, m)| (i.to_string(), json!(matrix_strings(m, r)))).collect();
    json!({ "degree": f.degree, "components": comps })
}

pub fn ranks_line(c: &Complex) -> String {
    if c.is_zero() {
        return "0".into();
    }
    c.indices().map(|i| format!("{i}:{}", c.rank(i))).collect::<Vec<_>>().join(" ")
}

/// `a·id` when every component is `a` times an identity, normalized to a
/// leading coefficient of 1; otherwise `None`.
pub fn scalar_form(f: &ChainMap) -> Option<(String, String)> {
    let r: &LocalAlgebra = f.source.ring();
    let mut a = None;
    for i in f.source.indices() {
        let m = f.comp(i);
        let (rows, cols) = m.shape();
        if rows != cols {
            return None;
        }
        for (p, q, e) in m.entries() {
            if p == q {
                match &a {
                    None => a = Some(e.clone()),
                    Some(b) if b != e => return None,
                    _ => {}
                }
            } else if !e.is_zero() {
                return None;
            }
        }
    }
    let a = a?;
    let (_, lead) = a.terms().iter().next()?;
    let unit = lead.clone();
    let normal = r.scale(&a, &unit.inv());
    Some((format!("{}·id", r.format(&normal)), unit.to_string()))
}
