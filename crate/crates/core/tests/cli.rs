use std::path::Path;
use std::process::Command;

fn ratcover(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_ratcover"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let cases: &[(&[&str], i32, &str)] = &[
        (&["cover", "--scenario", "circle", "--H", "5"], 0, ""),
        (&["cover", "--scenario", "poly:x^^2"], 2, "parse"),
        (&["cover", "--scenario", "nonesuch"], 2, "unknown scenario"),
        (&["cover"], 2, "--scenario"),
        (&["cover", "--scenario", "circle", "--H", "0"], 2, ""),
        (&["cover", "--scenario", "circle", "--degree", "0"], 2, "degree"),
        (&["cover", "--scenario", "circle", "--eps", "abc"], 2, "eps"),
        (&["cover", "--scenario", "circle", "--bbox", "1,0,0,1"], 2, ""),
        (&["cover", "--scenario", "circle", "--H", "30", "--eps", "0.001", "--degree", "1", "--max-halvings", "0"], 3, "box-requires-higher-degree"),
        (&["bounds", "--suite", "lower", "--H", "10", "--tuples", "20"], 2, "--seed"),
        (&["bounds", "--seed", "1", "--delta", "0.6"], 2, "delta"),
        (&["bounds", "--seed", "1", "--suite", "sideways"], 2, "suite"),
        (&["weierstrass", "--seed", "1", "--f", "w - 1/2", "--vertical-radius", "0.5", "--tuples", "2"], 4, "near-zero-on-boundary"),
        (&["plotdata", "--input", "no/such/report.json"], 2, "missing input"),
        (&["frobnicate"], 2, ""),
    ];
    for (args, code, needle) in cases {
        let (got, err) = ratcover(args, out);
        assert_eq!(got, *code, "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# circle run\nscenario = circle\nH = 3\neps = 1\n").unwrap();
    let out = dir.path().join("o");
    let (code, err) = ratcover(&["cover", "--config", cfg.to_str().unwrap(), "--H", "5"], &out);
    assert_eq!(code, 0, "{err}");
    assert!(out.join("cover_circle_H5.json").exists());
    assert!(!out.join("cover_circle_H3.json").exists());
    std::fs::write(&cfg, "scenario = circle\ncolour = blue\n").unwrap();
    assert_eq!(ratcover(&["cover", "--config", cfg.to_str().unwrap()], &out).0, 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs = |sub: &str| {
        let out = dir.path().join(sub);
        let a: &[&[&str]] = &[
            &["cover", "--scenario", "hyperbola_family", "--H", "6,10", "--eps", "1"],
            &["bounds", "--seed", "11", "--H", "12", "--tuples", "12", "--delta", "0.1"],
            &["weierstrass", "--seed", "5", "--tuples", "6"],
        ];
        for args in a {
            let (code, err) = ratcover(args, &out);
            assert_eq!(code, 0, "{args:?}: {err}");
        }
        out
    };
    let (a, b) = (runs("a"), runs("b"));
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 10);
    for n in names {
        let name = n.to_string_lossy();
        if name.ends_with(".meta.json") {
            continue;
        }
        assert_eq!(read(&a.join(&n)), read(&b.join(&n)), "{name} differs");
    }
}

#[test]
fn cover_report_contents() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = ratcover(&["cover", "--scenario", "circle", "--H", "5", "--degree", "2", "--eps", "1"], dir.path());
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&read(&dir.path().join("cover_circle_H5.json"))).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["points"].as_array().unwrap().len(), 12);
    assert_eq!(v["report"]["hypersurfaces"][0]["coefficients"], serde_json::json!([1, 0, 0, -1, 0, -1]));
    assert_eq!(v["descent"]["transcendental"], 0);
    let csv = read(&dir.path().join("cover_circle_H5_points.csv"));
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("x,y,box,hypersurface,classification\r\n"));
    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("cover.meta.json"))).unwrap();
    assert!(meta["elapsed_ms"].is_number());
}

#[test]
fn plotdata_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    assert_eq!(ratcover(&["cover", "--scenario", "exp_graph", "--H", "10,100", "--eps", "0.5"], out).0, 0);
    assert_eq!(ratcover(&["cover", "--scenario", "circle", "--H", "5,10", "--eps", "0.5"], &out.join("c")).0, 0);
    let inputs = [out.join("cover_exp_graph_H100.json"), out.join("cover_exp_graph_H10.json")];
    let p = out.join("plot");
    let mut args = vec!["plotdata", "--input"];
    let strs: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
    args.extend(strs.iter().map(|s| s.as_str()));
    assert_eq!(ratcover(&args, &p).0, 0);
    let rows: Vec<Vec<f64>> = read(&p.join("plot.csv"))
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[0][1]), (10.0, 1.0));
    assert_eq!((rows[1][0], rows[1][1]), (100.0, 1.0));
    assert!(rows[1][2] >= rows[0][2] && rows.iter().all(|r| r[1] <= r[2]));

    let c = [out.join("c/cover_circle_H5.json"), out.join("c/cover_circle_H10.json")];
    let strs: Vec<String> = c.iter().map(|p| p.display().to_string()).collect();
    let mut args = vec!["plotdata", "--input"];
    args.extend(strs.iter().map(|s| s.as_str()));
    assert_eq!(ratcover(&args, &out.join("cp")).0, 0);
    assert!(read(&out.join("cp/plot.csv")).lines().skip(1).all(|l| l.split(',').nth(1) == Some("0")));

    assert_eq!(ratcover(&["plotdata"], &out.join("empty")).0, 0);
    assert_eq!(read(&out.join("empty/plot.csv")), "H,transcendental,envelope\r\n");
}
