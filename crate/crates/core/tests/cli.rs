use std::collections::BTreeMap;
use std::process::Command;

use ellquad::curve::parse_curve;
use ellquad::quadfield::QuadField;

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ellquad::cli::run(&args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn machine(args: &[&str]) -> BTreeMap<String, String> {
    let mut a = args.to_vec();
    a.extend(["--format", "machine"]);
    let (code, out, err) = run(&a);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("# ellquad "), "missing header: {out}");
    out.lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn invariants_of_congruent_curve() {
    let m = machine(&["invariants", "--curve", "[0,0,0,-1,0]"]);
    assert_eq!(m["disc"], "64");
    assert_eq!(m["j"], "1728");
    assert_eq!(m["c4"], "48");
}

#[test]
fn twist_by_minus_one_of_j1728() {
    let m = machine(&["twist", "--curve", "[0,0,0,-1,0]", "--d", "-1"]);
    assert_eq!(m["twist"], "[0,0,0,-1,0]");
    assert_eq!(m["isomorphic_over_q"], "true");
}

#[test]
fn machine_output_round_trips() {
    let m = machine(&["twist", "--curve", "[1,2,3,4,5]", "--d", "-3"]);
    let k = QuadField::rationals();
    let t = parse_curve(&m["twist"], &k).unwrap();
    let again = machine(&["invariants", "--curve", &m["twist"]]);
    assert_eq!(again["j"], k.parse(&again["j"]).unwrap().to_string());
    assert_eq!(t.j_invariant().to_string(), again["j"]);
}

#[test]
fn torsion_over_quadratic_field() {
    let m = machine(&["torsion", "--curve", "[0,0,0,-1,0]", "--field-d", "-1"]);
    assert_eq!(m["torsion"], "2x4");
    let q = machine(&["torsion", "--curve", "[0,0,0,-1,0]", "--two-torsion-field"]);
    assert_eq!(q["torsion"], "2x2");
    assert_eq!(q["two_torsion_field"], "1");
}

#[test]
fn tate_normal_orders() {
    assert_eq!(machine(&["tate-normal", "--b", "1", "--c", "0"])["order"], "4");
    assert_eq!(machine(&["tate-normal", "--b", "1", "--c", "1"])["order"], "5");
}

#[test]
fn height_and_independence() {
    let h = machine(&["height", "--curve", "[0,0,1,-1,0]", "--point", "(0;0)"]);
    assert!(h["height"].starts_with("0.0511114082399688402358"), "{}", h["height"]);
    let i = machine(&[
        "independence",
        "--curve",
        "[0,0,1,-1,0]",
        "--point",
        "(0;0)",
        "--point",
        "(1;0)",
    ]);
    assert_eq!(i["verdict"], "dependent [2,-1]");
    let x = machine(&["height", "--curve", "[0,0,1,-1,0]", "--point", "(2;?)"]);
    assert_eq!(x["point"], "(2;-3)");
}

#[test]
fn descend_rational_point() {
    let m = machine(&[
        "descend",
        "--curve",
        "[0,0,0,0,17]",
        "--field-d",
        "2",
        "--point",
        "(-2;3)",
    ]);
    assert_eq!(m["plus"], "(8;-23)");
    assert_eq!(m["minus"], "O");
    assert_eq!(m["defect"], "O");
    assert_eq!(m["twist"], "[0,0,0,0,136]");
}

#[test]
fn mn_sum_and_sieve_agree() {
    let s = machine(&["mn-sum", "--curve", "[0,0,1,-1,0]", "--d", "-2", "--pmax", "200"]);
    let (code, out, _) = run(&[
        "sieve",
        "--curve",
        "[0,0,1,-1,0]",
        "--dmin",
        "-50",
        "--dmax",
        "50",
        "--top",
        "3",
        "--pmax",
        "200",
    ]);
    assert_eq!(code, 0);
    let first = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(first, format!("-2\t{}", s["sum"]));
}

#[test]
fn ap_table_lists_primes() {
    let (code, out, _) = run(&["ap", "--curve", "[0,0,1,-1,0]", "--pmax", "20"]);
    assert_eq!(code, 0);
    assert!(out.contains("\n2 -2 1\n"));
    assert!(out.contains("\n19 0 1\n"));
}

#[test]
fn verify_single_record() {
    let m = machine(&["verify", "--only", "z15-7"]);
    assert_eq!(m["record.z15-7.torsion"], "verified");
    assert_eq!(m["record.z15-7.rank"], "verified");
    assert_eq!(m["summary.omitted"], "0");
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, err) = run(&["bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("bogus"));
    let (code, _, err) = run(&["invariants", "--curve", "[0,0,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("[0,0,1"));
    let (code, _, err) = run(&["height", "--curve", "[0,0,1,-1,0]", "--point", "(1;1)"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["sieve", "--curve", "[0,0,1,-1,0]", "--dmin", "5", "--dmax", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ellquad");
    let ok = Command::new(bin)
        .args(["invariants", "--curve", "[0,0,0,-1,0]"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["invariants"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--curve"));
}

#[test]
fn failed_verification_exits_1() {
    let dir = std::env::temp_dir().join(format!("ellquad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.rec");
    std::fs::write(&path, "id=wrong d=1 curve=[0,0,0,-1,0] torsion=4 rank=0\n").unwrap();
    let (code, out, _) = run(&["verify", "--records", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("failed"));
    std::fs::remove_dir_all(&dir).ok();
}
