use std::process::{Command, Output};

fn grazing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grazing"))
        .args(args)
        .env_remove("GRAZING_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV as header-indexed string maps.
fn rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let body = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, body)
}

fn column(header: &[String], body: &[Vec<String>], name: &str) -> Vec<String> {
    let j = header.iter().position(|h| h == name).unwrap();
    body.iter().map(|r| r[j].clone()).collect()
}

fn numbers(col: Vec<String>) -> Vec<f64> {
    col.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn ray_trace_table() {
    let o = grazing(&["ray", "trace", "--y=-2:2:0.5"]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    assert_eq!(header.join(","), "y,x,t,xi,eta,tau,hamiltonian");
    assert_eq!(body.len(), 9);
    assert!(numbers(column(&header, &body, "hamiltonian"))
        .iter()
        .all(|h| h.abs() <= 1e-12));
    let last = &body[8];
    assert_eq!(last[0].parse::<f64>().unwrap(), 2.0);
    assert_eq!(last[1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn ray_trace_with_initial_data_conserves_the_symbol() {
    // tau0^2 (1 + x0) = xi0^2 + 1 makes the ray null
    let o = grazing(&["ray", "trace", "--y=0:3:0.25", "--x0=0.44", "--xi0=0.3", "--tau0=-0.9"]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    let h = numbers(column(&header, &body, "hamiltonian"));
    assert!(h.iter().all(|v| (v - h[0]).abs() <= 1e-12), "{h:?}");
}

#[test]
fn malformed_range_is_a_usage_error() {
    for args in [
        &["ray", "trace", "--y", "0:1"][..],
        &["graze", "reflected", "--x", ""],
        &["graze", "w", "--x", "1", "--method", "bogus"],
    ] {
        let o = grazing(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
    }
    assert_eq!(grazing(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(grazing(&["--help"]).status.code(), Some(0));
}

#[test]
fn closed_form_row() {
    let o = grazing(&["graze", "w", "--x", "1", "--method", "closed"]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    assert_eq!(
        header.join(","),
        "x,k,method,re_w,im_w,abs_w,re_closed,im_closed,rel_err,quad_err,status"
    );
    assert_eq!(body.len(), 1);
    assert_eq!(column(&header, &body, "k"), vec![""]);
    let abs_w = numbers(column(&header, &body, "abs_w"))[0];
    assert!((abs_w - 0.5 / 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(numbers(column(&header, &body, "rel_err")), vec![0.0]);
    assert_eq!(column(&header, &body, "status"), vec!["ok"]);
}

#[test]
fn u_integral_ladder_approaches_the_closed_form() {
    let o = grazing(&[
        "graze",
        "w",
        "--x",
        "0.5",
        "--k",
        "1e3,1e4,1e5,1e6",
        "--method",
        "u-integral",
    ]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    let rel = numbers(column(&header, &body, "rel_err"));
    assert_eq!(rel.len(), 4);
    assert!(rel.windows(2).all(|p| p[1] < p[0]), "{rel:?}");
}

#[test]
fn spectral_route_is_capped() {
    let o = grazing(&["graze", "w", "--x", "0.5", "--k", "2e4", "--method", "spectral"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn reflected_curve() {
    let o = grazing(&["graze", "reflected", "--x", "1e-4,0.5,1,3"]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    assert_eq!(header.join(","), "x,abs_v,abs_w,abs_v_minus_w,ratio");
    let xs = numbers(column(&header, &body, "x"));
    let abs_w = numbers(column(&header, &body, "abs_w"));
    for (x, w) in xs.iter().zip(&abs_w) {
        assert!((w - 0.5 / (1.0 + x).sqrt()).abs() < 1e-15);
    }
    assert!((numbers(column(&header, &body, "ratio"))[0] - 0.5).abs() <= 0.05);
}

#[test]
fn verify_grazing_set_suite_lists_named_checks() {
    let o = grazing(&["verify", "appendix2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "appendix2");
    assert_eq!(v["overall"], true);
    let names: Vec<String> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap().to_owned())
        .collect();
    for prefix in [
        "r_z@",
        "r_zz@",
        "r_zzz@",
        "r_zzzz@",
        "phi_zzz@",
        "phi_zzzz@",
        "quartic_coeff_re@",
        "quartic_coeff_im@",
    ] {
        assert_eq!(names.iter().filter(|n| n.starts_with(prefix)).count(), 5, "{prefix}");
    }
}

#[test]
fn verify_variational_suite_reports_its_failing_check() {
    let o = grazing(&["verify", "appendix1"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["overall"], false);
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["transport_residual"]);
}

#[test]
fn verify_closedform_passes() {
    let o = grazing(&["verify", "closedform", "--format", "csv"]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    let names = column(&header, &body, "name");
    assert!(names.contains(&"limit_integral_vs_closed_form".to_owned()));
    assert!(names.iter().any(|n| n.starts_with("display_identity")));
    assert!(column(&header, &body, "pass").iter().all(|p| p == "true"));
}

#[test]
fn output_file_and_thread_count_do_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["graze", "w", "--x", "0.5,1", "--k", "1e3,1e4", "--method", "closed,u,z"];
    let mut one = args.to_vec();
    one.extend(["--threads", "1", "--out", a.to_str().unwrap()]);
    assert!(grazing(&one).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_grazing"))
        .args(args)
        .args(["--out", b.to_str().unwrap()])
        .env("GRAZING_THREADS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let o = grazing(&[
        "graze",
        "w",
        "--x",
        "1",
        "--method",
        "closed",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_rows_keep_header_order() {
    let o = grazing(&["beam", "on-ray", "--x", "0,1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["x", "y", "t", "re_v", "im_v", "abs_v"]);
    assert_eq!(v[0]["abs_v"], 1.0);
}

#[test]
fn beam_field_grid() {
    let o = grazing(&[
        "beam",
        "field",
        "--x",
        "0,0.5",
        "--y",
        "1",
        "--t=1:1.2:0.1",
        "--k",
        "50",
    ]);
    assert!(o.status.success());
    let (header, body) = rows(&stdout(&o));
    assert_eq!(header.join(","), "x,y,t,k,re_v,im_v,abs_v");
    assert_eq!(body.len(), 6);
    assert!(numbers(column(&header, &body, "abs_v")).iter().all(|v| v.is_finite()));
}
