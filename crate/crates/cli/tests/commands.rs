use std::path::PathBuf;
use std::process::{Command, Output};

use motivic_core::{ChainComplex, Cover, CubeDiagram, FinDiagram, GSet};

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motivic-kit"))
        .args(args)
        .env_remove("MOTIVIC_KIT_MAX_SIZE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = kit(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn comonoid_check_prints_counts() {
    let o = kit(&["verify-mcffe", "--x", "2", "--y", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("9 = 9, PASS"));
}

#[test]
fn enumerate_gives_five_rows() {
    let v = json(&["enumerate-diagrams", "--k", "2", "--bounds", "2,2"]);
    let rows = v["report"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let d = FinDiagram::block(
            &serde_json::from_value::<Vec<usize>>(r["sizes"].clone()).unwrap(),
            &serde_json::from_value::<Vec<Vec<usize>>>(r["maps"].clone()).unwrap(),
        );
        assert!(d.is_ok());
    }
    let o = kit(&["enumerate-diagrams", "--k", "2", "--bounds", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hocolim_on_fixtures() {
    let o = kit(&["hocolim", "--diagram", &data("diagrams/two_component_cover.json")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "H0=3 H1=0");
    let o = kit(&["hocolim", "--diagram", &data("diagrams/circle_cover.json")]);
    assert!(stdout(&o).starts_with("H0=1 H1=1"));
    let o = kit(&["hocolim", "--diagram", &data("diagrams/two_component_cover.json"), "--ambient", "3"]);
    assert!(!stdout(&o).contains("=1") && !stdout(&o).contains("=2"));
}

#[test]
fn hocolim_accepts_cube_json_and_emits_complex() {
    let cover = Cover::literal(4, vec![vec![0, 1], vec![1, 2], vec![3]]).unwrap();
    let cube = cover.to_cube().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.json");
    std::fs::write(&path, serde_json::to_string(&cube).unwrap()).unwrap();
    let back: CubeDiagram = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.n(), 3);
    let o = kit(&["hocolim", "--diagram", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "H0=4 H1=0 H2=0");
    let v = json(&["hocolim", "--diagram", path.to_str().unwrap()]);
    let c: ChainComplex = serde_json::from_value(v["report"]["complex"].clone()).unwrap();
    assert_eq!(c.homology_dim(0), 4);
}

#[test]
fn invalid_inputs_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"points":2,"components":[[0,5]]}"#).unwrap();
    let o = kit(&["hocolim", "--diagram", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("component 0 contains point 5"));

    std::fs::write(&bad, r#"{"sets":[{"size":2},{"size":1}],"maps":[{"dom":2,"cod":1,"values":[0,3]}]}"#).unwrap();
    let o = kit(&["aut", "--diagram", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = kit(&["verify-mcffe", "--x", "7", "--y", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("safety bound"));
}

#[test]
fn env_raises_the_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_motivic-kit"))
        .args(["verify-mcffe", "--x", "7", "--y", "1"])
        .env("MOTIVIC_KIT_MAX_SIZE", "7")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn aut_matches_search() {
    let o = kit(&["aut", "--diagram", &data("diagrams/fork.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("|Aut| = 2 (search 2), PASS\n"));
}

#[test]
fn comonoid_solutions_reparse() {
    let v = json(&["solve-comonoid", "--x", "2", "--y", "2", "--show"]);
    let sols: Vec<motivic_core::CoalgMorphism> = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(sols.len(), 4);
    let v = json(&["solve-comonoid", "--x", "3", "--y", "2"]);
    assert_eq!(v["report"]["count"], 8);
}

#[test]
fn galois_over_fixture_and_files() {
    let o = kit(&["galois-fixed", "--group", &data("groups/c4.json"), "--max-set", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let g = motivic_core::FiniteGroup::cyclic(2);
    let dir = tempfile::tempdir().unwrap();
    let (px, py) = (dir.path().join("x.json"), dir.path().join("y.json"));
    std::fs::write(&px, serde_json::to_string(&GSet::regular(&g)).unwrap()).unwrap();
    std::fs::write(&py, serde_json::to_string(&GSet::trivial(&g, 2).unwrap()).unwrap()).unwrap();
    let v = json(&["galois-fixed", "--group", "c2", "--x", px.to_str().unwrap(), "--y", py.to_str().unwrap()]);
    assert_eq!(v["report"][0]["equivariant_maps"], 2);
    let o = kit(&["galois-fixed", "--group", "s3", "--x", px.to_str().unwrap(), "--y", py.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn monad_equalizer_and_kappa() {
    let o = kit(&["verify-monad", "--k", "1", "--bounds", "3,3"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let o = kit(&["verify-mdffe", "--x", "3", "--y", "2", "--bound", "2"]);
    assert!(stdout(&o).contains("8 = 8 = 8 = 8, PASS"));
    let o = kit(&["kappa", "--components", "A,B", "--ambient", "Xbar", "--dim", "1"]);
    let s = stdout(&o);
    assert!(s.contains("C_*(A∩B)"));
    assert!(s.contains("(-1)[-2]"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--format", "json", "verify-monad", "--k", "2", "--bounds", "2,2,2"][..],
        &["enumerate-diagrams", "--k", "3", "--bounds", "2,2,2"][..],
        &["--format", "json", "galois-fixed", "--group", "v4", "--max-set", "2"][..],
    ] {
        assert_eq!(kit(args).stdout, kit(args).stdout);
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let o = kit(&["--format", "json", "-o", p.to_str().unwrap(), "verify-mcffe", "--x", "1", "--y", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}
