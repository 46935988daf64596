use std::process::{Command, Output};

fn gadc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gadc"))
        .args(args)
        .output()
        .expect("spawn gadc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Rows without the runtime column.
fn value_columns(csv_text: &str) -> Vec<String> {
    csv_text
        .lines()
        .map(|l| {
            l.rsplit_once(',')
                .map(|(head, _)| head.to_string())
                .unwrap()
        })
        .collect()
}

#[test]
fn classical_sweep_cardinality() {
    let o = gadc(&[
        "sweep",
        "--set",
        "classical",
        "--gamma-steps",
        "51",
        "--n-list",
        "0.1,0.25,0.5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("gamma,n,bound_name,kind,value_bits,status,runtime_ms")
    );
    assert_eq!(lines.count(), 51 * 3 * 6);
    assert!(!text.contains('\r'));
}

#[test]
fn rows_are_ordered() {
    let o = gadc(&[
        "sweep",
        "--set",
        "twoway",
        "--gamma-steps",
        "3",
        "--n-list",
        "0.5,0.1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let keys: Vec<(String, String, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].to_string(), f[2].to_string())
        })
        .collect();
    assert_eq!(keys.len(), 3 * 2 * 6);
    assert_eq!(keys[0], ("0".into(), "0.5".into(), "q2_cov".into()));
    assert_eq!(keys[6], ("0".into(), "0.1".into(), "q2_cov".into()));
    assert_eq!(keys[12].0, "0.5");
    for chunk in keys.chunks(6) {
        let names: Vec<&str> = chunk.iter().map(|k| k.2.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}

#[test]
fn deterministic_across_job_counts() {
    let args = |jobs: &'static str| {
        [
            "sweep",
            "--set",
            "all",
            "--gamma-min",
            "0.1",
            "--gamma-max",
            "0.7",
            "--gamma-steps",
            "4",
            "--n-list",
            "0,0.3",
            "--jobs",
            jobs,
        ]
    };
    let a = gadc(&args("1"));
    let b = gadc(&args("8"));
    assert!(a.status.success() && b.status.success());
    assert_eq!(value_columns(&stdout(&a)), value_columns(&stdout(&b)));
}

#[test]
fn writes_output_file() {
    let dir = std::env::temp_dir().join(format!("gadc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let o = gadc(&[
        "sweep",
        "--set",
        "quantum",
        "--gamma-min",
        "0.2",
        "--gamma-max",
        "0.8",
        "--gamma-steps",
        "2",
        "--n-list",
        "0.2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 12);
    assert!(text.contains("0.8,0.2,q_deg1,upper,nan,domain,"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        gadc(&["sweep", "--gamma-steps", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gadc(&["sweep", "--gamma-max", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gadc(&["sweep", "--n-list", "0.1,abc"]).status.code(),
        Some(2)
    );
    assert_eq!(gadc(&["sweep", "--set", "bogus"]).status.code(), Some(2));
    assert_eq!(gadc(&["info", "--gamma", "0.3"]).status.code(), Some(2));
    assert_eq!(
        gadc(&["info", "--gamma", "2", "--n", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(gadc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn info_reports_predicates() {
    let o = gadc(&["info", "--gamma", "0.9", "--n", "0.5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("entanglement-breaking: true"));
    let o = gadc(&["info", "--gamma", "0.5", "--n", "0.2"]);
    let text = stdout(&o);
    assert!(text.contains("anti-degradable: true"));
    assert!(text.contains("thermal: eta = 0.5, N = 0.2"));
    let text = stdout(&gadc(&["info", "--gamma", "0", "--n", "0"]));
    assert!(text.contains("entanglement-breaking: false"));
    assert!(text.contains("C_beta: 1.000000000"));
}

#[test]
fn verify_passes() {
    let o = gadc(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("67 checks, 0 failed"));
}

#[test]
fn injected_fault_fails() {
    let o = gadc(&["verify", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL  eps_cov"));
    assert!(!text.contains("FAIL  beta/zeta"));
}
