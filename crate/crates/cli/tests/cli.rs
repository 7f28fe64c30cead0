use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_huygens"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("huygens-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn last_point(o: &Output) -> (f64, f64) {
    let r = rows(o);
    let last = r.last().unwrap();
    (last[1].parse().unwrap(), last[2].parse().unwrap())
}

#[test]
fn orbit_reaches_sink() {
    let o = run(&["orbit", "--a", "0.1", "--x0", "1.0", "--y0", "3.0", "--steps", "400"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n,x,y,lyapunov,dist_to_sink\n"));
    let (x, y) = last_point(&o);
    assert!((x - 2.0 * PI / 3.0).abs() < 1e-8 && (y - 4.0 * PI / 3.0).abs() < 1e-8);
    let dist: f64 = rows(&o).last().unwrap()[4].parse().unwrap();
    assert!(dist < 1e-8);
}

#[test]
fn orbits_at_fixed_points_are_constant() {
    for (x0, y0) in [(PI, PI), (0.0, 0.0)] {
        let (sx, sy) = (x0.to_string(), y0.to_string());
        let o = run(&["orbit", "--a", "0.2", "--x0", &sx, "--y0", &sy, "--steps", "50"]);
        assert_eq!(o.status.code(), Some(0));
        for r in rows(&o) {
            let x: f64 = r[1].parse().unwrap();
            let y: f64 = r[2].parse().unwrap();
            assert!((x - x0).abs() < 1e-12 && (y - y0).abs() < 1e-12, "{r:?}");
        }
    }
}

#[test]
fn census_has_six_rows() {
    let o = run(&["fixed-points", "--a", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 6);
    assert_eq!(r.iter().filter(|r| r[2] == "sink").count(), 2);
    assert_eq!(r.iter().filter(|r| r[2] == "saddle").count(), 3);
}

#[test]
fn line_map_census_and_orbit() {
    let o = run(&["fixed-points", "--map", "line", "--a", "0.1"]);
    let r = rows(&o);
    assert_eq!(r.len(), 4);
    let sinks: Vec<_> = r.iter().filter(|r| r[2] == "sink").collect();
    assert_eq!(sinks.len(), 1);
    let (x, y): (f64, f64) = (sinks[0][0].parse().unwrap(), sinks[0][1].parse().unwrap());
    assert!((x - PI).abs() < 1e-9 && (y - PI).abs() < 1e-9);

    let o = run(&["orbit", "--map", "line", "--a", "0.1", "--x0", "0.5", "--y0", "5.5", "--steps", "500"]);
    let (x, y) = last_point(&o);
    assert!((x - PI).abs() < 1e-8 && (y - PI).abs() < 1e-8);
}

#[test]
fn certify_exit_codes() {
    let o = run(&["certify", "--a", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("id,region,target,sign,status,"));
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().skip(1).all(|l| l.contains(",proved,")));

    let o = run(&["certify", "--a", "0.1", "--negative-control"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",refuted,"));

    let o = run(&["certify", "--a", "0.05", "--a-hi", "0.3"]);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(run(&["certify", "--a", "0.4"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--map", "line", "--a", "0.1"]).status.code(), Some(2));
}

#[test]
fn invalid_configuration_exits_two() {
    assert_eq!(run(&["fixed-points"]).status.code(), Some(2));
    assert_eq!(run(&["fixed-points", "--a", "zero"]).status.code(), Some(2));
    assert_eq!(run(&["fixed-points", "--a", "0.1", "--map", "square"]).status.code(), Some(2));
    let o = run(&["fixed-points", "--a", "0.1", "--delta1", "0.01", "--zeta", "none"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["orbit", "--a", "0.1", "--x0", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("run.cfg");
    fs::write(&cfg, "# census settings\nmap = line\na = 0.4\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(run(&["fixed-points", "--config", c]).status.code(), Some(2));
    let o = run(&["fixed-points", "--config", c, "--a", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&o).len(), 4);

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["fixed-points", "--config", c, "--a", "0.1"]).status.code(), Some(2));
}

#[test]
fn basins_writes_tables_and_image() {
    let prefix = scratch("ring");
    let p = prefix.to_str().unwrap();
    let o = run(&["basins", "--a", "0.1", "--resolution", "64", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stdout(&o);
    assert!(summary.starts_with("sink,x,y,count,fraction\n"));
    assert_eq!(summary.lines().count(), 4);
    assert_eq!(fs::read_to_string(format!("{p}.summary.csv")).unwrap(), summary);

    let cells = fs::read_to_string(format!("{p}.cells.csv")).unwrap();
    assert!(cells.starts_with("i,j,label\n"));
    assert_eq!(cells.lines().count(), 64 * 64 + 1);

    let ppm = fs::read_to_string(format!("{p}.ppm")).unwrap();
    let mut tokens = ppm.split_whitespace();
    assert_eq!(tokens.next(), Some("P3"));
    assert_eq!(tokens.next(), Some("64"));
    assert_eq!(tokens.next(), Some("64"));
    assert_eq!(tokens.next(), Some("255"));
    assert_eq!(tokens.count(), 64 * 64 * 3);
}

#[test]
fn perturbed_basins_have_two_sinks() {
    let o = run(&["basins", "--a", "0.1", "--delta1", "0.01", "--delta2", "0.02", "--resolution", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    let total: f64 = r.iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn portrait_rows() {
    let out = scratch("portrait.csv");
    let o = run(&["portrait", "--a", "0.1", "--resolution", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,y,dx,dy\n"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn conjecture_small_grid() {
    let o = run(&["conjecture", "--a", "0.1", "--resolution", "256"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn sweep_table() {
    let o = run(&["sweep", "--points", "0.1;0.2,0.01,0.01", "--resolution", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("a,delta1,delta2,fixed_points,"));
    let r = rows(&o);
    assert_eq!(r.len(), 2);
    assert_eq!(r[0][3], "6");
    assert_eq!(r[0][6], "2");
    assert_eq!(run(&["sweep", "--points", "0.5"]).status.code(), Some(2));
}
