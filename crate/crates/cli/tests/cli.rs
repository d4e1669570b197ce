use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trapgeom"))
}

fn demo_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../demo/{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn node<'a>(result: &'a Value, id: &str) -> &'a Value {
    result["nodes"].as_array().unwrap().iter().find(|n| n["id"] == id).unwrap()
}

#[test]
fn eval_trapezoid_demo_exact() {
    let out = run(&["eval", demo_path("trapezoid").to_str().unwrap(), "--backend", "exact"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(node(&v, "w")["value"]["point"], serde_json::json!(["0/1", "2/1"]));
}

#[test]
fn eval_powers_demo_has_101_lattice_points() {
    let out = run(&["eval", demo_path("powers").to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(node(&v, "lattice")["value"]["points"].as_array().unwrap().len(), 101);
}

#[test]
fn eval_bad_scene_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"version": 1, "nodes": [{"id": "p", "kind": "Join", "inputs": ["q", "r"]}]}"#).unwrap();
    let out = run(&["eval", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nodes[0]"));
    let out = run(&["eval", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "trapezoid", "--field", "gf6"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_trapezoid_json_is_deterministic() {
    let args = ["verify", "trapezoid", "--samples", "300", "--seed", "7", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "trapezoid");
}

#[test]
fn verify_planes_order_3() {
    let out = run(&["verify", "planes", "--order", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("desargues,") && l.contains(",pass,")));
    assert!(text.lines().filter(|l| l.starts_with("associativity,")).all(|l| l.contains(",pass,")));
}

#[test]
fn verify_table_and_json_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let out = run(&["verify", "matrix", "--field", "gf3", "--samples", "50", "--json-out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).trim_end().ends_with("PASS"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(v["reports"].as_array().unwrap().len() >= 9);
}

#[test]
fn plane_export_round_trips() {
    let out = run(&["plane", "--order", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let plane = trapgeom::planes::FinitePlane::from_json(&v).unwrap();
    assert_eq!(plane.num_points(), 7);
}

fn request(port: u16, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).unwrap();
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut text = String::new();
    stream.read_to_string(&mut text).unwrap();
    let status = text[9..12].parse().unwrap();
    let body = text.split_once("\r\n\r\n").map(|(_, b)| b.to_string()).unwrap_or_default();
    (status, body)
}

#[test]
fn serve_honours_geom_port() {
    let port = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let mut child = bin()
        .args(["serve", "--port", "1"])
        .env("GEOM_PORT", port.to_string())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    stderr.read_line(&mut line).unwrap();
    assert!(line.contains(&format!(":{port}")), "{line}");

    let deadline = Instant::now() + Duration::from_secs(10);
    while TcpStream::connect(("127.0.0.1", port)).is_err() {
        assert!(Instant::now() < deadline, "server did not start");
        std::thread::sleep(Duration::from_millis(50));
    }
    let (status, body) = request(port, "GET", "/api/health", "");
    assert_eq!(status, 200, "{body}");
    let scene = std::fs::read_to_string(demo_path("trapezoid")).unwrap();
    let (status, body) = request(port, "POST", "/api/scenes", &scene);
    assert_eq!(status, 201);
    assert!(body.contains("\"id\""));
    let (status, _) = request(port, "GET", "/api/scenes/unknown", "");
    assert_eq!(status, 404);
    child.kill().unwrap();
    child.wait().unwrap();
}
