use spectral_extremal::cli::run;
use spectral_extremal::graph6;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str], stdin: &str) -> Output {
    let args: Vec<String> = std::iter::once("spectral-extremal").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&args, &mut stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn gen_lines_decode() {
    for args in [
        &["gen", "pineapple", "--n", "9", "--alpha", "4"][..],
        &["gen", "split", "--n", "8", "--k", "3"],
        &["gen", "tree", "--n", "8", "--all"],
        &["gen", "block", "--n", "7", "--all"],
        &["gen", "dh", "--n", "6", "--all"],
        &["gen", "ktree", "--n", "7", "--k", "2", "--all"],
        &["gen", "connected", "--n", "5", "--all"],
    ] {
        let out = cli(args, "");
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        assert!(!out.stdout.is_empty());
        for line in out.stdout.lines() {
            graph6::decode_str(line).unwrap_or_else(|e| panic!("{args:?} emitted {line:?}: {e}"));
        }
    }
    assert_eq!(cli(&["gen", "tree", "--n", "10", "--all"], "").stdout.lines().count(), 106);
}

#[test]
fn gen_piped_into_rho_keeps_order() {
    let trees = cli(&["gen", "tree", "--n", "6", "--all"], "").stdout;
    let out = cli(&["--format", "csv", "rho"], &trees);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("graph6,n,rho,residual"));
    let emitted: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    let input: Vec<&str> = trees.lines().collect();
    assert_eq!(emitted, input);
}

#[test]
fn pineapple_rho_text() {
    let out = cli(&["rho", "F~}C?"], "");
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("F~}C? rho = 4.10548"), "{}", out.stdout);
}

#[test]
fn malformed_input_names_the_line() {
    let out = cli(&["rho"], "Bw\nB!x\n");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    assert!(out.stderr.contains("byte 1"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["bogus"], "").code, 2);
    assert_eq!(cli(&["gen", "pineapple", "--n", "7"], "").code, 2);
    assert_eq!(cli(&["verify", "treewidth-extremal", "--n-max", "5"], "").code, 2);
    assert_eq!(cli(&["rho"], "").code, 2);
    // A disconnected graph has no Perron vector.
    assert_eq!(cli(&["rho", "A?"], "").code, 2);
    assert_eq!(cli(&["--help"], "").code, 0);
}

#[test]
fn help_documents_csv_columns() {
    let out = cli(&["--help"], "");
    assert!(out.stdout.contains("graph6,n,rho,residual"));
    assert!(out.stdout.contains("cioba_v1"));
}

#[test]
fn verify_block_extremal_passes_with_json() {
    let out = cli(&["verify", "block-extremal", "--n-max", "8", "--alpha", "4"], "");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stderr.contains("wall time"));
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["violation_count"], 0);
    assert!(report.get("wall_time").is_none());
}

#[test]
fn verify_reports_violations_with_exit_1() {
    let out = cli(&["verify", "independence-machinery", "--n-max", "6", "--format", "text"], "");
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("identity_without_simplicial"));
}

#[test]
fn verify_output_is_deterministic() {
    let a = cli(&["verify", "dh-lower-bound", "--n-max", "6"], "").stdout;
    let b = cli(&["verify", "dh-lower-bound", "--n-max", "6"], "").stdout;
    assert_eq!(a, b);
}

#[test]
fn bounds_from_params_json_match_graph_input() {
    let params = cli(&["--format", "json", "params", "D?{"], "");
    let doc: serde_json::Value = serde_json::from_str(&params.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let inputs = doc["results"][0].to_string();
    let dir = std::env::temp_dir().join(format!("bounds-params-{}.json", std::process::id()));
    std::fs::write(&dir, &inputs).unwrap();
    let from_params = cli(&["--format", "json", "bounds", "--params", dir.to_str().unwrap()], "");
    std::fs::remove_file(&dir).ok();
    assert_eq!(from_params.code, 0, "{}", from_params.stderr);
    let from_params: serde_json::Value = serde_json::from_str(&from_params.stdout).unwrap();
    let from_graph: serde_json::Value = serde_json::from_str(&cli(&["--format", "json", "bounds", "D?{"], "").stdout).unwrap();
    let value = |doc: &serde_json::Value, name: &str| {
        doc["results"][0]["bounds"]
            .as_array()
            .unwrap()
            .iter()
            .find(|b| b["name"] == name)
            .map(|b| b["value"].as_f64().unwrap())
    };
    for name in ["cioba_v1", "cioba_v2", "dh"] {
        assert_eq!(value(&from_params, name), value(&from_graph, name), "{name}");
    }
}

#[test]
fn edge_list_input() {
    let out = cli(&["--format", "csv", "params", "--edge-list"], "4\n0 1\n1 2\n2 3\n");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.lines().nth(1).unwrap().contains(",4,3,2,1,3,1,2,false"));
}

#[test]
fn recognize_accepts_and_rejects() {
    let yes = cli(&["recognize", "block", "F~}C?"], "");
    assert_eq!(yes.code, 0);
    assert!(yes.stdout.contains("accept"));
    let no = cli(&["recognize", "block", "Cl"], "");
    assert!(no.stdout.contains("reject"), "{}", no.stdout);
    let ktree = cli(&["--format", "json", "recognize", "ktree", "--k", "2", "Bw"], "");
    let doc: serde_json::Value = serde_json::from_str(&ktree.stdout).unwrap();
    assert_eq!(doc["results"][0]["member"], true);
}
