use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanoatlas")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn invariants_text_and_csv() {
    let o = run(&["invariants", "P(5) ; O(3)"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("h0(-K) (-K)^n: 55 243"), "{s}");
    assert!(s.contains("h11=1 h21=0 h31=1 h22=21"), "{s}");

    let o = run(&["invariants", "P(5) ; O(3)", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("1-55-243-2,1,21,0,55,243,20,P(5),O(3),"));

    let o = run(&["invariants", "P(5) ; O(3)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("1-55-243-2"));
}

#[test]
fn bwb_and_chi() {
    let s = stdout(&run(&["bwb", "P(4)", "S2Q(-5)"]));
    assert!(s.contains("H^3 = 10"), "{s}");
    let s = stdout(&run(&["bwb", "G(2,5)", "U*O(-2)"]));
    assert!(s.contains("acyclic"), "{s}");
    let s = stdout(&run(&["chi", "G(2,5)", "O(1)"]));
    assert!(s.contains("chi = 10"), "{s}");
}

#[test]
fn hilbert_and_discriminant_files() {
    let s = stdout(&run(&["hilbert", &data("en_surface_g24.txt")]));
    assert!(s.contains("chi(O_Z(k)) = 5k^2 - k + 2"), "{s}");
    assert!(s.contains("2σ(2,1)"), "{s}");
    let s = stdout(&run(&["discriminant", &data("conic_g24.txt")]));
    assert!(s.contains("20"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invariants", "P(5) ; O("]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "Q(5) ; O(3)"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--config", "/nonexistent/config.txt"]).status.code(), Some(1));
    assert_eq!(run(&["invariants", "P(2) x P(5) ; O(1,0) + Q[1]"]).status.code(), Some(1));
}
