use std::collections::BTreeMap;
use std::fs;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;
use torquo_core::char_pair::{validate_characteristic, CharError, CharacteristicPair, ModelPoint};
use torquo_core::classify::{
    enumerate_characteristic, equivalent, group_classes, invariant_signature, ClassifyError,
    EquivalenceWitness, Mode,
};
use torquo_core::face_complex::{Face, FaceComplex};
use torquo_core::lattice::{parse_rational, IntMatrix, TorusPoint, UnimodularMatrix};
use torquo_core::morphism::{CheckedMorphism, Morphism, MorphismError, SkeletalMap};

use crate::problem::{parse_face, parse_map, parse_matrix, parse_problem, PairError, ParseError, ProblemFile};
use crate::{Command, ModeArg, EXIT_NEGATIVE, EXIT_OK};

/// Input errors; all map to exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

/// A finished command: exit code plus both renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Report {
    fn new(code: i32, text: String, json: Value) -> Self {
        Report { code, text, json }
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Validate { file } => validate(&load(file)?),
        Command::Strata { file } => strata(&load_pair(file)?),
        Command::Isotropy { file, face } => isotropy(&load_pair(file)?, face),
        Command::PointEq { file, p, q } => point_eq(&load_pair(file)?, p, q),
        Command::MapCheck { src, dst, phi, sigma } => map_check(src, dst, phi, sigma.as_deref()),
        Command::HomotopySample { src, dst, phi, sigma, p, s } => {
            homotopy_sample(src, dst, phi, sigma.as_deref(), p, s)
        }
        Command::Eq { a, b, mode } => eq(&load_pair(a)?, &load_pair(b)?, *mode),
        Command::Enumerate { file, bound, normalize, group, mode } => {
            enumerate(&load(file)?, *bound, *normalize, group.then_some(*mode))
        }
        Command::Invariants { file } => invariants(&load_pair(file)?),
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn load(path: &str) -> Result<ProblemFile, CliError> {
    parse_problem(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_string(),
        source,
    })
}

/// Commands other than `validate` need a valid pair as input.
fn load_pair(path: &str) -> Result<CharacteristicPair, CliError> {
    load(path)?
        .pair()
        .map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn face_json(face: &Face) -> Value {
    json!(face.indices().collect::<Vec<_>>())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int).collect()))
            .collect(),
    )
}

fn point_json(p: &ModelPoint) -> Value {
    json!({"t": p.t.to_string(), "face": face_json(&p.face), "tag": p.tag})
}

fn validate(problem: &ProblemFile) -> Result<Report, CliError> {
    let chi = match problem.characteristic() {
        Ok(chi) => chi,
        Err(PairError::Invalid(e @ CharError::NotPrimitive(_))) => return Ok(invalid(&e)),
        Err(e) => return Err(CliError::input(e)),
    };
    match validate_characteristic(problem.complex(), &chi) {
        Ok(()) => Ok(Report::new(EXIT_OK, "valid\n".into(), json!({"valid": true}))),
        Err(e @ CharError::Violation(_)) => Ok(invalid(&e)),
        Err(e) => Err(CliError::input(e)),
    }
}

fn invalid(e: &CharError) -> Report {
    let mut json = json!({"valid": false, "reason": e.to_string()});
    match e {
        CharError::Violation(face) => json["face"] = face_json(face),
        CharError::NotPrimitive(facet) => json["facet"] = json!(facet.0),
        _ => {}
    }
    Report::new(EXIT_NEGATIVE, format!("invalid: {e}\n"), json)
}

fn strata(pair: &CharacteristicPair) -> Result<Report, CliError> {
    let rows = pair.orbit_strata();
    let mut text = String::new();
    let mut items = Vec::new();
    for row in &rows {
        text.push_str(&format!(
            "{} codim={} isotropy_rank={} dim={}\n",
            row.face, row.codim, row.isotropy_rank, row.dim
        ));
        items.push(json!({
            "face": face_json(&row.face),
            "codim": row.codim,
            "isotropy_rank": row.isotropy_rank,
            "dim": row.dim,
        }));
    }
    Ok(Report::new(EXIT_OK, text, Value::Array(items)))
}

fn isotropy(pair: &CharacteristicPair, face: &str) -> Result<Report, CliError> {
    let face = parse_face(face).map_err(CliError::Input)?;
    let lattice = pair.isotropy_lattice(&face).map_err(CliError::input)?;
    let text = format!(
        "face: {face}\nrank: {}\nbasis: {lattice}\nsaturated: {}\n",
        lattice.rank(),
        lattice.is_saturated()
    );
    let json = json!({
        "face": face_json(&face),
        "rank": lattice.rank(),
        "basis": matrix_json(lattice.basis()),
        "saturated": lattice.is_saturated(),
    });
    Ok(Report::new(EXIT_OK, text, json))
}

/// `coords|face|tag`; the tag may be omitted.
pub fn parse_point(s: &str) -> Result<ModelPoint, CliError> {
    let mut parts = s.splitn(3, '|');
    let coords = parts.next().unwrap_or_default();
    let face = parts
        .next()
        .ok_or_else(|| CliError::Input(format!("point `{s}` must be written coords|face|tag")))?;
    let tag = parts.next().unwrap_or_default();
    let t: TorusPoint = coords.parse().map_err(CliError::input)?;
    let face = parse_face(face).map_err(CliError::Input)?;
    Ok(ModelPoint::new(t, face, tag))
}

fn point_eq(pair: &CharacteristicPair, p: &str, q: &str) -> Result<Report, CliError> {
    let (p, q) = (parse_point(p)?, parse_point(q)?);
    let equal = pair.model_points_equal(&p, &q).map_err(CliError::input)?;
    let (code, text) = if equal {
        (EXIT_OK, "equal\n")
    } else {
        (EXIT_NEGATIVE, "not equal\n")
    };
    Ok(Report::new(code, text.into(), json!({"equal": equal})))
}

/// Builds and checks the morphism. The outer error is an input error; the
/// inner one is a violation of skeletality or compatibility.
fn checked_morphism(
    src: &CharacteristicPair,
    dst: &CharacteristicPair,
    phi: &str,
    sigma: Option<&str>,
) -> Result<Result<CheckedMorphism, MorphismError>, CliError> {
    let n = src.rank();
    if dst.rank() != n {
        return Err(CliError::Input(format!("rank mismatch: {n} vs {}", dst.rank())));
    }
    let sigma = match sigma {
        None => UnimodularMatrix::identity(n),
        Some(s) => {
            let rows = parse_matrix(s).map_err(CliError::Input)?;
            if rows.len() != n {
                return Err(CliError::Input(format!("sigma must be {n}x{n}")));
            }
            let m = IntMatrix::from_rows(n, &rows).map_err(CliError::input)?;
            UnimodularMatrix::new(m).map_err(CliError::input)?
        }
    };
    let map = parse_map(&read(phi)?).map_err(|source| CliError::Parse {
        path: phi.to_string(),
        source,
    })?;
    let (k, l) = (src.complex().clone(), dst.complex().clone());
    let skeletal = if let Some(images) = &map.facet_images {
        let images = images
            .iter()
            .map(|f| faces_from(f))
            .collect::<Result<Vec<_>, _>>()?;
        SkeletalMap::from_facet_images(k, l, &images)
    } else {
        let mut table = BTreeMap::new();
        for e in map.faces.iter().flatten() {
            table.insert(faces_from(&e.face)?, faces_from(&e.image)?);
        }
        SkeletalMap::new(k, l, table)
    };
    let result = skeletal.and_then(|phi| Morphism::new(sigma, phi).check(src, dst));
    match result {
        Err(e) if !e.is_violation() => Err(CliError::input(e)),
        other => Ok(other),
    }
}

fn faces_from(idx: &[usize]) -> Result<Face, CliError> {
    let face = Face::from_indices(idx.iter().copied());
    if face.codim() != idx.len() {
        return Err(CliError::Input(format!("face {face} repeats a facet")));
    }
    Ok(face)
}

fn violation(e: &MorphismError) -> Report {
    let mut text = format!("violation: {e}\n");
    let mut json = json!({"compatible": false, "reason": e.to_string()});
    if let MorphismError::Incompatible(w) = e {
        text.push_str(&format!(
            "p: {}\np': {}\nimage of p: {}\nimage of p': {}\n",
            w.p, w.p_prime, w.image_p, w.image_p_prime
        ));
        json["facet"] = json!(w.facet.0);
        json["witness"] = json!({
            "p": point_json(&w.p),
            "p_prime": point_json(&w.p_prime),
            "image_p": point_json(&w.image_p),
            "image_p_prime": point_json(&w.image_p_prime),
        });
    }
    Report::new(EXIT_NEGATIVE, text, json)
}

fn map_check(src: &str, dst: &str, phi: &str, sigma: Option<&str>) -> Result<Report, CliError> {
    let (a, b) = (load_pair(src)?, load_pair(dst)?);
    Ok(match checked_morphism(&a, &b, phi, sigma)? {
        Ok(_) => Report::new(EXIT_OK, "compatible\n".into(), json!({"compatible": true})),
        Err(e) => violation(&e),
    })
}

fn homotopy_sample(
    src: &str,
    dst: &str,
    phi: &str,
    sigma: Option<&str>,
    p: &str,
    s: &[String],
) -> Result<Report, CliError> {
    let problem = load(src)?;
    let a = problem.pair().map_err(|e| CliError::Input(format!("{src}: {e}")))?;
    let b = load_pair(dst)?;
    let m = match checked_morphism(&a, &b, phi, sigma)? {
        Ok(m) => m,
        Err(e) => return Ok(violation(&e)),
    };
    if problem.reps.is_none() {
        return Err(CliError::Input(format!("{src}: no reps table")));
    }
    let reps = problem.reps_map();
    match m.check_reps_coherence(&reps) {
        Ok(()) => {}
        Err(e) if e.is_violation() => return Ok(violation(&e)),
        Err(e) => return Err(CliError::input(e)),
    }
    let p = parse_point(p)?;
    let times: Vec<BigRational> = if s.is_empty() {
        ["0", "1/2", "1"].iter().map(|x| parse_rational(x).expect("literal")).collect()
    } else {
        s.iter()
            .map(|x| parse_rational(x.trim()).map_err(CliError::input))
            .collect::<Result<_, _>>()?
    };
    let mut text = String::new();
    let mut items = Vec::new();
    for t in &times {
        let q = m.homotopy_apply(&reps, &p, t).map_err(CliError::input)?;
        text.push_str(&format!("s={t}: {q}\n"));
        let mut item = point_json(&q);
        item["s"] = json!(t.to_string());
        items.push(item);
    }
    Ok(Report::new(EXIT_OK, text, Value::Array(items)))
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Weak => Mode::Weak,
    }
}

fn witness_json(w: &EquivalenceWitness) -> Value {
    json!({
        "phi": w.phi.images(),
        "sigma": matrix_json(w.sigma.matrix()),
        "signs": w.signs,
    })
}

fn eq(a: &CharacteristicPair, b: &CharacteristicPair, m: ModeArg) -> Result<Report, CliError> {
    match equivalent(a, b, mode(m)) {
        Ok(Some(w)) => {
            let mut json = witness_json(&w);
            json["equivalent"] = json!(true);
            Ok(Report::new(EXIT_OK, format!("equivalent\n{w}\n"), json))
        }
        Ok(None) => Ok(Report::new(
            EXIT_NEGATIVE,
            "inequivalent\n".into(),
            json!({"equivalent": false}),
        )),
        Err(ClassifyError::RankMismatch(x, y)) => Ok(Report::new(
            EXIT_NEGATIVE,
            format!("inequivalent: ranks {x} and {y} differ\n"),
            json!({"equivalent": false, "reason": "rank mismatch"}),
        )),
        Err(e) => Err(CliError::input(e)),
    }
}

fn enumerate(
    problem: &ProblemFile,
    bound: u32,
    normalize: bool,
    group: Option<ModeArg>,
) -> Result<Report, CliError> {
    if group.is_some() && !problem.contractible_faces {
        return Err(CliError::Input("--group requires `contractible_faces: true`".into()));
    }
    let complex: &FaceComplex = problem.complex();
    let found = enumerate_characteristic(complex, bound, normalize);
    let mut text = String::new();
    let mut list = Vec::new();
    for (i, chi) in found.iter().enumerate() {
        text.push_str(&format!("{i}: {chi}\n"));
        list.push(Value::Array(
            chi.vectors()
                .iter()
                .map(|v| Value::Array(v.iter().map(int).collect()))
                .collect(),
        ));
    }
    text.push_str(&format!("count: {}\n", found.len()));
    let mut json = json!({"count": found.len(), "functions": list});
    if let Some(m) = group {
        let pairs: Vec<CharacteristicPair> = found
            .into_iter()
            .map(|chi| {
                CharacteristicPair::new(complex.clone(), chi)
                    .expect("enumeration yields valid functions")
                    .with_contractible_faces(true)
            })
            .collect();
        let classes = group_classes(&pairs, mode(m)).map_err(CliError::input)?;
        text.push_str(&format!("classes: {}\n", classes.len()));
        for (i, class) in classes.iter().enumerate() {
            text.push_str(&format!("class {i}: {class:?}\n"));
        }
        json["classes"] = json!(classes);
    }
    Ok(Report::new(EXIT_OK, text, json))
}

fn invariants(pair: &CharacteristicPair) -> Result<Report, CliError> {
    let sig = invariant_signature(pair);
    let json = json!({
        "n": sig.n,
        "facets": sig.facets,
        "face_counts": sig.face_counts,
        "vertex_dets": sig.vertex_dets.iter().map(int).collect::<Vec<_>>(),
        "fixed_points": sig.fixed_points,
    });
    Ok(Report::new(EXIT_OK, format!("{sig}\n"), json))
}
