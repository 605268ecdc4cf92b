//! Problem files: JSON description of a face complex, an optional
//! characteristic function and optional face representatives.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use torquo_core::char_pair::{CharError, CharacteristicFunction, CharacteristicPair};
use torquo_core::face_complex::{Face, FaceComplex};
use torquo_core::lattice::TorusPoint;

/// First error found in a document, located by line/column when it is a
/// syntax or schema error and by field path otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: Option<(usize, usize)>,
    pub path: String,
    pub message: String,
}

impl ParseError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        ParseError {
            position: None,
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((line, column)) = self.position {
            write!(f, "line {line}, column {column}: ")?;
        }
        if !self.path.is_empty() && self.path != "." {
            write!(f, "at `{}`: ", self.path)?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

/// Deserializes `text`, reporting the path of the offending field.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ParseError {
            position: Some((inner.line(), inner.column())),
            path,
            message: strip_position(&inner.to_string()),
        }
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    #[serde(default)]
    facets: Option<Vec<String>>,
    vertices: Vec<Vec<usize>>,
    #[serde(default)]
    lambda: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    contractible_faces: bool,
    #[serde(default)]
    reps: Option<Vec<RawRep>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    face: Vec<usize>,
    t: String,
}

/// A parsed problem; the face complex is always valid, the characteristic
/// function is only checked for shape.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub n: usize,
    pub facets: Option<Vec<String>>,
    pub vertices: Vec<Vec<usize>>,
    pub lambda: Option<Vec<Vec<i64>>>,
    pub contractible_faces: bool,
    pub reps: Option<Vec<(Face, TorusPoint)>>,
    complex: FaceComplex,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let raw: RawProblem = parse_json(text)?;
    let n = raw.n;

    if let Some(names) = &raw.facets {
        let mut seen = HashSet::new();
        for (i, name) in names.iter().enumerate() {
            if !seen.insert(name) {
                return Err(ParseError::at(format!("facets[{i}]"), format!("duplicate facet name {name:?}")));
            }
        }
    }
    if let Some(lambda) = &raw.lambda {
        for (i, row) in lambda.iter().enumerate() {
            if row.len() != n {
                return Err(ParseError::at(
                    format!("lambda[{i}]"),
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
        }
        if let Some(names) = &raw.facets {
            if names.len() != lambda.len() {
                return Err(ParseError::at(
                    "lambda",
                    format!("expected {} rows (one per facet), found {}", names.len(), lambda.len()),
                ));
            }
        }
    }

    let m = match (&raw.facets, &raw.lambda) {
        (Some(names), _) => names.len(),
        (None, Some(lambda)) => lambda.len(),
        (None, None) => raw.vertices.iter().flatten().max().map_or(0, |&i| i + 1),
    };
    let complex = FaceComplex::build(n, m, &raw.vertices).map_err(|e| ParseError::at("vertices", e))?;

    let reps = match raw.reps {
        None => None,
        Some(entries) => {
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(entries.len());
            for (i, rep) in entries.into_iter().enumerate() {
                let face = Face::from_indices(rep.face.iter().copied());
                if face.codim() != rep.face.len() {
                    return Err(ParseError::at(format!("reps[{i}].face"), "repeated facet"));
                }
                if !complex.contains(&face) {
                    return Err(ParseError::at(format!("reps[{i}].face"), format!("{face} is not a face")));
                }
                if !seen.insert(face.clone()) {
                    return Err(ParseError::at(format!("reps[{i}].face"), format!("{face} listed twice")));
                }
                let t: TorusPoint = rep.t.parse().map_err(|e| ParseError::at(format!("reps[{i}].t"), e))?;
                if t.dim() != n {
                    return Err(ParseError::at(
                        format!("reps[{i}].t"),
                        format!("expected {n} coordinates, found {}", t.dim()),
                    ));
                }
                out.push((face, t));
            }
            Some(out)
        }
    };

    Ok(ProblemFile {
        n,
        facets: raw.facets,
        vertices: raw.vertices,
        lambda: raw.lambda,
        contractible_faces: raw.contractible_faces,
        reps,
        complex,
    })
}

/// Why a problem does not yield a characteristic pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairError {
    NoLambda,
    Invalid(CharError),
}

impl fmt::Display for PairError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairError::NoLambda => f.write_str("problem has no lambda"),
            PairError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl ProblemFile {
    pub fn complex(&self) -> &FaceComplex {
        &self.complex
    }

    pub fn characteristic(&self) -> Result<CharacteristicFunction, PairError> {
        let lambda = self.lambda.as_ref().ok_or(PairError::NoLambda)?;
        let rows = lambda
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        CharacteristicFunction::new(self.n, rows).map_err(PairError::Invalid)
    }

    pub fn pair(&self) -> Result<CharacteristicPair, PairError> {
        let chi = self.characteristic()?;
        CharacteristicPair::new(self.complex.clone(), chi)
            .map(|p| p.with_contractible_faces(self.contractible_faces))
            .map_err(PairError::Invalid)
    }

    pub fn reps_map(&self) -> BTreeMap<Face, TorusPoint> {
        self.reps.iter().flatten().cloned().collect()
    }

    /// Canonical text: one field per line, inner arrays on one line.
    pub fn to_canonical_string(&self) -> String {
        let mut fields = vec![format!("\"n\": {}", self.n)];
        if let Some(names) = &self.facets {
            let quoted: Vec<String> = names
                .iter()
                .map(|s| serde_json::to_string(s).expect("strings serialize"))
                .collect();
            fields.push(format!("\"facets\": [{}]", quoted.join(", ")));
        }
        fields.push(format!("\"vertices\": {}", nested(&self.vertices)));
        if let Some(lambda) = &self.lambda {
            fields.push(format!("\"lambda\": {}", nested(lambda)));
        }
        fields.push(format!("\"contractible_faces\": {}", self.contractible_faces));
        if let Some(reps) = &self.reps {
            let items: Vec<String> = reps
                .iter()
                .map(|(face, t)| {
                    let idx: Vec<usize> = face.indices().collect();
                    format!("{{\"face\": {}, \"t\": \"{t}\"}}", flat(&idx))
                })
                .collect();
            fields.push(format!("\"reps\": [{}]", items.join(", ")));
        }
        let mut out = String::from("{\n");
        for (i, field) in fields.iter().enumerate() {
            let sep = if i + 1 < fields.len() { "," } else { "" };
            writeln!(out, "  {field}{sep}").expect("writing to a string");
        }
        out.push_str("}\n");
        out
    }
}

fn flat<T: fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn nested<T: fmt::Display>(rows: &[Vec<T>]) -> String {
    let parts: Vec<String> = rows.iter().map(|r| flat(r)).collect();
    format!("[{}]", parts.join(", "))
}

/// Face-map file for `map-check` and `homotopy-sample`: either the image of
/// each facet or an explicit table over all source faces.
#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    #[serde(default)]
    pub facet_images: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub faces: Option<Vec<FaceEntry>>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct FaceEntry {
    pub face: Vec<usize>,
    pub image: Vec<usize>,
}

pub fn parse_map(text: &str) -> Result<MapFile, ParseError> {
    let map: MapFile = parse_json(text)?;
    match (&map.facet_images, &map.faces) {
        (Some(_), None) | (None, Some(_)) => Ok(map),
        _ => Err(ParseError::at(".", "exactly one of `facet_images` and `faces` is required")),
    }
}

/// `"0,2"` as a face; the empty string is the whole complex.
pub fn parse_face(s: &str) -> Result<Face, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Face::whole());
    }
    let idx = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("malformed face `{s}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let face = Face::from_indices(idx.iter().copied());
    if face.codim() != idx.len() {
        return Err(format!("face `{s}` repeats a facet"));
    }
    Ok(face)
}

/// Row-major integer matrix `"1,0;0,-1"`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<BigInt>>, String> {
    let rows: Vec<Vec<BigInt>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| format!("malformed matrix `{s}`")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(format!("matrix `{s}` is not square"));
    }
    Ok(rows)
}
