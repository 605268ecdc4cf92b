#![allow(dead_code)]

use std::path::PathBuf;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Problem files and the exit code of `validate` on each.
pub const CORPUS: &[(&str, i32)] = &[
    ("triangle.json", 0),
    ("square_k0.json", 0),
    ("square_k1.json", 0),
    ("square_km1.json", 0),
    ("prism.json", 0),
    ("pentagon_open.json", 0),
    ("square_bad.json", 2),
    ("not_primitive.json", 2),
    ("malformed.json", 1),
    ("missing_n.json", 1),
    ("short_row.json", 1),
    ("not_simple.json", 1),
];

/// Named invocations with expected exit codes; `@` expands to the data directory.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("validate_triangle", &["validate", "@/triangle.json"], 0),
    ("validate_square_bad", &["validate", "@/square_bad.json"], 2),
    ("validate_square_bad_json", &["--format", "json", "validate", "@/square_bad.json"], 2),
    ("strata_triangle", &["strata", "@/triangle.json"], 0),
    ("isotropy_prism", &["isotropy", "@/prism.json", "--face", "0,3"], 0),
    ("isotropy_missing_face", &["isotropy", "@/square_k0.json", "--face", "0,2"], 1),
    ("point_eq_equal", &["point-eq", "@/square_k1.json", "--p", "1/2,1/3|0|x", "--q", "0,1/3|0|x"], 0),
    ("point_eq_unequal", &["point-eq", "@/square_k1.json", "--p", "1/2,1/3|1|x", "--q", "0,1/3|1|x"], 2),
    ("eq_mirror_weak", &["eq", "@/square_k1.json", "@/square_km1.json", "--mode", "weak"], 0),
    ("eq_mirror_weak_json", &["--format", "json", "eq", "@/square_k1.json", "@/square_km1.json"], 0),
    ("eq_mirror_strict", &["eq", "@/square_k1.json", "@/square_km1.json", "--mode", "strict"], 2),
    ("eq_k0_k1", &["eq", "@/square_k0.json", "@/square_k1.json"], 2),
    ("eq_rank_mismatch", &["eq", "@/triangle.json", "@/prism.json"], 2),
    ("eq_not_contractible", &["eq", "@/pentagon_open.json", "@/pentagon_open.json"], 1),
    ("eq_invalid_input", &["eq", "@/square_bad.json", "@/square_k0.json"], 1),
    ("map_check_identity", &["map-check", "@/square_k1.json", "@/square_k1.json", "--phi", "@/maps/square_identity.json"], 0),
    (
        "map_check_mirror",
        &["map-check", "@/square_k1.json", "@/square_km1.json", "--phi", "@/maps/square_identity.json", "--sigma", "1,0;0,-1"],
        0,
    ),
    ("map_check_incompatible", &["map-check", "@/square_k0.json", "@/square_k1.json", "--phi", "@/maps/square_identity.json"], 2),
    (
        "map_check_collapse",
        &["map-check", "@/square_k0.json", "@/square_k1.json", "--phi", "@/maps/square_collapse.json", "--sigma", "2,1;1,1"],
        0,
    ),
    ("map_check_partial_table", &["map-check", "@/square_k0.json", "@/square_k1.json", "--phi", "@/maps/square_bad_faces.json"], 1),
    (
        "map_check_singular_sigma",
        &["map-check", "@/square_k1.json", "@/square_k1.json", "--phi", "@/maps/square_identity.json", "--sigma", "2,0;0,1"],
        1,
    ),
    (
        "homotopy_sample",
        &[
            "homotopy-sample", "@/square_k1.json", "@/square_k1.json", "--phi", "@/maps/square_identity.json",
            "--p", "1/4,0|0|x", "--s", "0", "--s", "1/2", "--s", "1",
        ],
        0,
    ),
    (
        "homotopy_out_of_range",
        &[
            "homotopy-sample", "@/square_k1.json", "@/square_k1.json", "--phi", "@/maps/square_identity.json",
            "--p", "1/4,0|0|x", "--s", "3/2",
        ],
        1,
    ),
    ("enumerate_triangle_grouped", &["enumerate", "@/triangle.json", "--bound", "1", "--normalize", "--group"], 0),
    ("enumerate_open_grouped", &["enumerate", "@/pentagon_open.json", "--bound", "1", "--group"], 1),
    ("invariants_prism", &["invariants", "@/prism.json"], 0),
    ("invariants_json", &["--format", "json", "invariants", "@/square_k0.json"], 0),
    ("missing_file", &["validate", "@/nope.json"], 1),
    ("unknown_command", &["frobnicate"], 1),
];

pub fn expand(args: &[&str]) -> Vec<String> {
    let dir = data_dir();
    std::iter::once("torquo".to_string())
        .chain(args.iter().map(|a| match a.strip_prefix('@') {
            Some(rest) => format!("{}{rest}", dir.display()),
            None => a.to_string(),
        }))
        .collect()
}

/// Runs the CLI in-process; stdout has the data directory replaced by `@`.
pub fn run_case(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = torquo_cli::run(expand(args), &mut out, &mut err);
    let dir = data_dir().display().to_string();
    let clean = |b: Vec<u8>| String::from_utf8(b).unwrap().replace(&dir, "@");
    (code, clean(out), clean(err))
}
