use std::path::{Path, PathBuf};
use std::process::Command;

use projlift::examples::{make_quadric, QuadricForm};
use projlift::gf::{FieldHom, GaloisField, Matrix};
use projlift::io::{load_geometry, load_semilinear, GeometryFile, MapFile};
use projlift::projective::{build_pg, SemilinearMap};
use projlift::reconstruct::{DeclaredKind, MorphismInstance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_projlift"))
        .args(args)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap(),
        json,
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gf(q: u32) -> &'static GaloisField {
    GaloisField::get(q).unwrap()
}

fn write_instance(dir: &TempDir, inst: &MorphismInstance) -> (PathBuf, PathBuf) {
    let g = p(dir, "x.json");
    let m = p(dir, "map.json");
    std::fs::write(&g, GeometryFile::from_geometry(&inst.x).to_json()).unwrap();
    std::fs::write(
        &m,
        serde_json::to_string(&MapFile::from_instance(inst)).unwrap(),
    )
    .unwrap();
    (g, m)
}

#[test]
fn make_example_point_counts() {
    let (code, v, _) = run(&[
        "make-example",
        "--name",
        "elliptic-quadric",
        "--field",
        "gf(3)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["points"].as_array().unwrap().len(), 10);

    let (code, v, _) = run(&[
        "make-example",
        "--name",
        "affine",
        "--field",
        "gf(4)",
        "--dim",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["points"].as_array().unwrap().len(), 64);
}

#[test]
fn constructor_error_exits_3() {
    let (code, _, err) = run(&[
        "make-example",
        "--name",
        "elliptic-quadric",
        "--field",
        "gf(17)",
    ]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn bad_arguments_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(&["make-example", "--name", "nope", "--field", "gf(2)"]).0,
        2
    );
    assert_eq!(run(&["classify", "--frobnicate"]).0, 2);
    assert_eq!(
        run(&["check", "--geometry", s(&p(&dir, "missing.json"))]).0,
        2
    );

    let bad = p(&dir, "broken.json");
    std::fs::write(&bad, "{\"field\": \"gf(3)\",\n  \"points\": [[1, 0").unwrap();
    let (code, _, err) = run(&["classify", "--geometry", s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn exchange_failure_exits_1_with_witness() {
    let dir = TempDir::new().unwrap();
    let bad = p(&dir, "bad.json");
    assert_eq!(
        run(&[
            "make-example",
            "--name",
            "exchange-failure",
            "--field",
            "gf(2)",
            "--out",
            s(&bad)
        ])
        .0,
        0
    );
    let (code, v, _) = run(&["check", "--axioms", "g", "--geometry", s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(v["ok"], false);
    let g3 = &v["result"]["report"]["g3"];
    assert_eq!(g3["holds"], false);
    assert!(g3["witness"].is_object());
}

#[test]
fn classify_elliptic_quadric() {
    let dir = TempDir::new().unwrap();
    let q = p(&dir, "quadric.json");
    run(&[
        "make-example",
        "--name",
        "elliptic-quadric",
        "--field",
        "gf(3)",
        "--out",
        s(&q),
    ]);
    let (code, v, _) = run(&[
        "classify",
        "--geometry",
        s(&q),
        "--ambient",
        "pg(3,3)",
        "--predicate",
        "mobius,ovoid,locally-affino-projective",
    ]);
    assert_eq!(code, 0);
    let verdicts = &v["result"]["verdicts"];
    assert_eq!(verdicts["mobius"], true);
    assert_eq!(verdicts["ovoid"], true);
    assert_eq!(verdicts["locally_affino_projective"], true);
    assert_eq!(v["inputs"].as_object().unwrap().len(), 1);

    assert_eq!(
        run(&["classify", "--geometry", s(&q), "--ambient", "pg(3,4)"]).0,
        2
    );
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let q = p(&dir, "quadric.json");
    run(&[
        "make-example",
        "--name",
        "hyperbolic-quadric",
        "--field",
        "gf(3)",
        "--out",
        s(&q),
    ]);
    let args = ["--witnesses", "classify", "--geometry", s(&q)];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!(c1, c2);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn reconstruct_lap_fixture() {
    let dir = TempDir::new().unwrap();
    let pg = build_pg(3, gf(4)).unwrap();
    let x = make_quadric(&pg, QuadricForm::Hyperbolic).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::frobenius(gf(4), 1), 4);
    let inst =
        MorphismInstance::from_semilinear(&x, &pg, &phi, DeclaredKind::LocallyAffinoProjective)
            .unwrap();
    let (g, m) = write_instance(&dir, &inst);
    let out = p(&dir, "result.json");
    let (code, v, err) = run(&[
        "reconstruct",
        "--geometry",
        s(&g),
        "--map",
        s(&m),
        "--kind",
        "lap",
        "--out",
        s(&out),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["result"]["result"]["sigma_power"], 1);
    assert_eq!(v["result"]["side_conditions"]["kernel_dim"], 0);
    let back = load_semilinear(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(back.proportional(&phi).is_some());
}

#[test]
fn reconstruct_image_in_plane_exits_1() {
    let dir = TempDir::new().unwrap();
    let pg = build_pg(3, gf(3)).unwrap();
    let mut m = Matrix::identity(gf(3), 4);
    m.set(3, 3, 0);
    let phi = SemilinearMap::linear(m);
    let ag = projlift::examples::affine(3, gf(3)).unwrap();
    // the kernel point (0,0,0,1) lies off AG(3,3)
    let inst =
        MorphismInstance::from_semilinear(&ag, &pg, &phi, DeclaredKind::LocallyProjective).unwrap();
    let (g, mp) = write_instance(&dir, &inst);
    let (code, v, _) = run(&["reconstruct", "--geometry", s(&g), "--map", s(&mp)]);
    assert_eq!(code, 1);
    assert!(v["result"]["error"].as_str().unwrap().contains("plane"));
}

#[test]
fn non_morphism_map_exits_1() {
    let dir = TempDir::new().unwrap();
    let pg = build_pg(2, gf(2)).unwrap();
    let mut inst = MorphismInstance::from_semilinear(
        &pg,
        &pg,
        &SemilinearMap::linear(Matrix::identity(gf(2), 3)),
        DeclaredKind::FullProjective,
    )
    .unwrap();
    // the preimage of point 0 is six points, not a flat
    inst.map = vec![0; 7];
    inst.map[1] = 1;
    let (g, m) = write_instance(&dir, &inst);
    let (code, v, _) = run(&[
        "check",
        "--axioms",
        "morphism",
        "--geometry",
        s(&g),
        "--map",
        s(&m),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["report"]["condition_a"]["holds"], false);
    assert_eq!(
        run(&[
            "reconstruct",
            "--geometry",
            s(&g),
            "--map",
            s(&m),
            "--kind",
            "pg"
        ])
        .0,
        1
    );
}

#[test]
fn oracle_agrees_and_cap_exits_4() {
    let dir = TempDir::new().unwrap();
    let pg = build_pg(3, gf(2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(gf(2)), 4);
    let inst =
        MorphismInstance::from_semilinear(&pg, &pg, &phi, DeclaredKind::FullProjective).unwrap();
    let (g, m) = write_instance(&dir, &inst);
    let (code, v, err) = run(&[
        "oracle",
        "--geometry",
        s(&g),
        "--map",
        s(&m),
        "--kind",
        "pg",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["result"]["equivalent"], true);
    assert_eq!(v["result"]["candidates"].as_array().unwrap().len(), 1);

    let (code, _, _) = run(&[
        "--limit",
        "1000",
        "oracle",
        "--geometry",
        s(&g),
        "--map",
        s(&m),
        "--kind",
        "pg",
    ]);
    assert_eq!(code, 4);
}

#[test]
fn quotient_of_pg32_by_a_point() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "pg.json");
    run(&[
        "make-example",
        "--name",
        "pg",
        "--field",
        "gf(2)",
        "--dim",
        "3",
        "--out",
        s(&g),
    ]);
    let out = p(&dir, "q.json");
    let (code, v, err) = run(&[
        "quotient",
        "--geometry",
        s(&g),
        "--points",
        "0",
        "--out",
        s(&out),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["result"]["classes"], 7);
    let q = load_geometry(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(q.len(), 7);
    assert_eq!(q.dim(), 2);
}
