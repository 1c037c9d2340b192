use std::path::Path;
use std::process::{Command, Output};

fn bcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcm"))
        .args(args)
        .env_remove("BCM_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(o: &Output) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(o.stdout.as_slice())
        .records()
        .map(Result::unwrap)
        .collect()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("bcm.conf");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_reproduces_published_anchor() {
    let o = bcm(&[
        "solve",
        "--discipline",
        "priority",
        "--n",
        "4",
        "--lambda",
        "0.001",
        "--mu1",
        "0.1",
        "--mu2",
        "0.01",
        "--p",
        "0.8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with(
        "discipline,method,n,lambda,mu1,mu2,p,anbc,anpec,utilization,ci_halfwidth,seed\n"
    ));
    let rec = &records(&o)[0];
    let anbc: f64 = rec[7].parse().unwrap();
    let anpec: f64 = rec[8].parse().unwrap();
    assert!((anbc - 0.07344077).abs() < 1e-8);
    assert!((anpec - (4.0 - anbc)).abs() <= 1e-12);
    assert_eq!(&rec[1], "analytic");
    assert_eq!(&rec[10], "");
    assert_eq!(&rec[11], "");
}

#[test]
fn solve_single_processor_disciplines_agree() {
    let run = |d| {
        let o = bcm(&["solve", "--discipline", d, "--n", "1", "--lambda", "0.004"]);
        assert_eq!(o.status.code(), Some(0));
        records(&o)[0][7].parse::<f64>().unwrap()
    };
    assert!((run("fcfs") - run("priority")).abs() <= 1e-12);
}

#[test]
fn solve_exit_codes() {
    let o = bcm(&["solve", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!stderr(&o).is_empty());
    assert_eq!(bcm(&["solve", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(bcm(&["solve", "--lambda", "abc"]).status.code(), Some(2));
    assert_eq!(bcm(&["solve", "--bogus"]).status.code(), Some(2));
    let o = bcm(&["solve", "--discipline", "fcfs", "--n", "11"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap"), "{}", stderr(&o));
}

#[test]
fn both_solver_methods_agree_through_the_cli() {
    let run = |m| {
        records(&bcm(&[
            "solve",
            "--discipline",
            "fcfs",
            "--n",
            "5",
            "--method",
            m,
        ]))[0][7]
            .parse::<f64>()
            .unwrap()
    };
    assert!((run("direct") - run("iterative")).abs() < 1e-9);
}

#[test]
fn validate_tables_report() {
    let o = bcm(&["validate-tables"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = records(&o);
    assert_eq!(rows.len(), 240);
    let anchor = rows
        .iter()
        .find(|r| &r[0] == "1.a" && &r[3] == "0.001" && &r[4] == "priority")
        .unwrap();
    assert_eq!(&anchor[5], "0.07344077");
    let err = stderr(&o);
    assert!(err.contains("max relative ANBC error"));
    assert!(err.contains("1/150"));

    let strict = bcm(&["validate-tables", "--tolerance", "1e-12"]);
    assert_eq!(strict.status.code(), Some(1));
    assert_eq!(records(&strict).len(), 240, "report is still emitted");
}

#[test]
fn figure_data_defaults_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bcm(&["figure-data", "--out-dir", out, "--svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let listed: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(listed.iter().filter(|l| l.ends_with(".csv")).count(), 4);
    assert_eq!(listed.iter().filter(|l| l.ends_with(".svg")).count(), 4);
    for csv_path in listed.iter().filter(|l| l.ends_with(".csv")) {
        let mut reader = csv::Reader::from_path(csv_path).unwrap();
        assert_eq!(reader.headers().unwrap(), vec!["n", "lambda", "anpec"]);
        let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 12 * 10);
        for r in &rows {
            let n: f64 = r[0].parse().unwrap();
            let anpec: f64 = r[2].parse().unwrap();
            assert!(anpec > 0.0 && anpec <= n);
        }
    }
    let svg =
        std::fs::read_to_string(listed.iter().find(|l| l.ends_with(".svg")).unwrap()).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 10);
    assert!(svg.contains(">ANPEC</text>"));
}

#[test]
fn figure_data_rejects_bad_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        bcm(&["figure-data", "--out-dir", out, "--lambda-list", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bcm(&["figure-data", "--out-dir", out, "--p-list", "1.2"])
            .status
            .code(),
        Some(2)
    );
    let o = bcm(&[
        "figure-data",
        "--out-dir",
        out,
        "--discipline",
        "fcfs",
        "--n-max",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--n-max"));
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let args = [
        "simulate",
        "--discipline",
        "fcfs,priority",
        "--n",
        "3",
        "--lambda",
        "0.005",
        "--horizon",
        "2e5",
        "--warmup",
        "1e4",
        "--reps",
        "5",
        "--seed",
        "42",
    ];
    let a = bcm(&args);
    let b = bcm(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let rows = records(&a);
    assert_eq!(rows.len(), 16);
    let wb = rows
        .iter()
        .find(|r| &r[0] == "priority" && &r[6] == "mean_wait_writeback")
        .unwrap();
    assert_eq!(&wb[7], "0");
}

#[test]
fn simulate_covers_table_point() {
    let o = bcm(&[
        "simulate", "--n", "4", "--lambda", "0.001", "--dist1", "exp:0.1", "--dist2", "exp:0.01",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let anbc = records(&o).into_iter().find(|r| &r[6] == "anbc").unwrap();
    let (lo, hi, exact): (f64, f64, f64) = (
        anbc[9].parse().unwrap(),
        anbc[10].parse().unwrap(),
        anbc[14].parse().unwrap(),
    );
    assert!(lo <= exact && exact <= hi, "{lo} {exact} {hi}");
}

#[test]
fn simulate_general_services_have_no_analytic_column() {
    let o = bcm(&[
        "simulate",
        "--dist1",
        "det:10",
        "--dist2",
        "hyper:0.5,0.5:0.2,0.05",
        "--horizon",
        "1e5",
        "--warmup",
        "1e4",
        "--reps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = records(&o);
    assert!(rows.iter().all(|r| r[14].is_empty()));
    assert_eq!(&rows[0][4], "det:10");
}

#[test]
fn simulate_record_mode() {
    let o = bcm(&[
        "simulate",
        "--record",
        "--dist1",
        "erlang:2:0.2",
        "--horizon",
        "1e5",
        "--warmup",
        "1e4",
        "--reps",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rec = &records(&o)[0];
    assert_eq!(&rec[1], "simulated");
    assert_eq!(&rec[4], "");
    assert_eq!(&rec[5], "0.01");
    assert_eq!(&rec[11], "7");
    let anbc: f64 = rec[7].parse().unwrap();
    let anpec: f64 = rec[8].parse().unwrap();
    assert!((anbc + anpec - 4.0).abs() <= 1e-12);
}

#[test]
fn simulate_rejects_malformed_distribution() {
    for dist in ["det:x", "gamma:1", "erlang:0:1", "hyper:0.3,0.3:1,1"] {
        let o = bcm(&["simulate", "--dist1", dist]);
        assert_eq!(o.status.code(), Some(2), "{dist}");
    }
}

#[test]
fn config_precedence_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# sweep point\nlambda = 0.001\nn = 4\n");
    let from_file = records(&bcm(&["--config", &cfg, "solve"]));
    assert_eq!(&from_file[0][3], "0.001");
    let overridden = records(&bcm(&["solve", "--config", &cfg, "--lambda", "0.002"]));
    assert_eq!(&overridden[0][3], "0.002");
    assert_eq!(&overridden[0][2], "4");

    let empty = write_config(dir.path(), "");
    assert_eq!(
        bcm(&["--config", &empty, "solve"]).stdout,
        bcm(&["solve"]).stdout
    );

    let unknown = write_config(dir.path(), "n = 4\nthinking = 0.1\n");
    let o = bcm(&["--config", &unknown, "solve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("thinking"));

    let broken = write_config(dir.path(), "n = 4\n\nlambda: 0.1\n");
    let o = bcm(&["--config", &broken, "solve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let missing = dir.path().join("absent.conf");
    assert_eq!(
        bcm(&["--config", missing.to_str().unwrap(), "solve"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn thread_cap_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_bcm"))
            .args(["solve", "--n", "3"])
            .env("BCM_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(0));
    assert_eq!(run("2").stdout, bcm(&["solve", "--n", "3"]).stdout);
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}
