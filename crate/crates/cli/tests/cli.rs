use std::fs;
use std::process::{Command, Output};

fn hurwitzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitzlab"))
        .args(args)
        .env_remove("HURWITZLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tables_match_the_fixture() {
    let o = hurwitzlab(&["tables"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "146+22 candidates, 29+5 exceptional, 0 diffs");

    let o = hurwitzlab(&["tables", "--family", "t1"]);
    assert_eq!(stdout(&o).trim(), "22 candidates, 5 exceptional, 0 diffs");
}

#[test]
fn tables_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let o = hurwitzlab(&["tables", "--jobs", jobs, "--output", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let first = fs::read_to_string(&a).unwrap();
    assert_eq!(first, fs::read_to_string(&b).unwrap());
    assert_eq!(first.lines().count(), 169);
    assert!(first.starts_with("number,datum,verdict,layer,evidence,search_nodes"));
}

#[test]
fn enumerate_lists_both_families() {
    let o = hurwitzlab(&["enumerate"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 169);

    let o = hurwitzlab(&["enumerate", "--family", "s4", "--max-degree", "12"]);
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| {
        let d: u32 = l.split(',').nth(1).unwrap().parse().unwrap();
        d <= 12
    }));

    let o = hurwitzlab(&["enumerate", "--family", "t1", "--format", "json"]);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 22);
}

#[test]
fn decide_reports_the_layer() {
    let o = hurwitzlab(&["decide", "--datum", "8:(2,2,2,2)(5,1,1,1)(6,2)"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "exceptional");
    assert_eq!(v["layer"], "VeryEvenData");

    let o = hurwitzlab(&["decide", "--number", "147,168", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("realizable") && text.contains("exceptional"));
}

#[test]
fn count_prints_both_numbers() {
    let o = hurwitzlab(&["count", "--datum", "6:(3,3)(3,3)(4,2)"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("connected 0\n"), "{text}");
    assert!(text.contains("\nall 0\n"), "{text}");

    // a disconnected union of a theta map and a torus map has this datum
    let o = hurwitzlab(&["count", "--datum", "6:(3,2,1)(4,2)(4,1,1)"]);
    assert_eq!(stdout(&o), "datum 6:(4,2)(4,1,1)(3,2,1)\nall 3240\nconnected 2880\n");
}

#[test]
fn malformed_datum_is_a_usage_error() {
    let o = hurwitzlab(&["count", "--datum", "8:(2,2,2,2)(5,1,1)(6,2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());

    let o = hurwitzlab(&["decide"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hurwitzlab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let datum = "5:(2,1,1,1)(4,1)(5)";
    let dot = dir.path().join("map.dot");
    let o = hurwitzlab(&["certify", "--datum", datum, "--dot", dot.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let cert = text.lines().next().unwrap();
    let dessin: serde_json::Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(dessin["edges"], 5);

    let graph = fs::read_to_string(&dot).unwrap();
    assert!(graph.starts_with("graph"));
    assert_eq!(graph.matches(" -- ").count(), 5);

    let path = dir.path().join("cert.json");
    fs::write(&path, cert).unwrap();
    let o = hurwitzlab(&["certify", "--datum", datum, "--verify", path.to_str().unwrap(), "--roles", "2,0,1"]);
    assert!(o.status.success());

    // the certificate does not realize another datum of the same degree
    let o = hurwitzlab(&["certify", "--datum", "5:(3,1,1)(3,1,1)(5)", "--verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = hurwitzlab(&["certify", "--datum", "6:(3,3)(3,3)(4,2)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chars.txt");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_hurwitzlab"))
            .args(args)
            .env("HURWITZLAB_CACHE", &path)
            .output()
            .unwrap()
    };
    let o = run(&["count", "--datum", "12:(2,2,2,2,2,2)(3,3,3,3)(7,3,1,1)"]);
    assert!(o.status.success());
    let stats = stdout(&run(&["cache", "stats"]));
    let complete: usize = stats
        .lines()
        .find_map(|l| l.strip_prefix("complete "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(complete > 0, "{stats}");
    assert!(!stdout(&run(&["cache", "keys"])).is_empty());
    let o = run(&["cache", "compact"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dropped "));

    let o = hurwitzlab(&["cache"]);
    assert_eq!(o.status.code(), Some(1));
}
