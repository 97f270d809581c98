use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_pursuit-sim");

fn sim(args: &[&str], out: &std::path::Path) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .env("PURSUIT_SIM_OUT", out)
        .output()
        .unwrap()
}

fn write(dir: &std::path::Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn run_writes_artifacts_and_reports_capture() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(&["run", "fig3_chi228"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(
        line.starts_with("fig3_chi228 event=defender_captures_pursuer t_f="),
        "{line}"
    );
    assert!(dir.path().join("fig3_chi228.csv").exists());
    let svg = std::fs::read_to_string(dir.path().join("fig3_chi228.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn dry_run_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(&["run", "fig3_chi180", "--dry-run"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_errors_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let text = pursuit_sim::catalog::source("fig3_chi180")
        .unwrap()
        .replace("chi_star = 180", "chi_star = 60");
    let file = write(dir.path(), "bad.scn", &text);
    let out = sim(&["run", &file], dir.path());
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("line 4") && err.contains("target angle"),
        "{err}"
    );
    let missing = write(dir.path(), "empty.scn", "");
    assert_eq!(sim(&["run", &missing], dir.path()).status.code(), Some(4));
}

#[test]
fn timeout_and_lost_evader_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let base = pursuit_sim::catalog::source("fig3_chi180").unwrap();
    let short = base.replace("t_max = 40", "t_max = 6.5");
    let file = write(dir.path(), "short.scn", &short);
    assert_eq!(
        sim(&["run", &file, "--dt", "0.01"], dir.path())
            .status
            .code(),
        Some(3)
    );
    // A defender far behind the evader cannot get there first.
    let late = base
        .replace("defender.range = 400", "defender.range = 4000")
        .replace("defender.los = -45", "defender.los = 180")
        .replace("defender.a_max = 20", "defender.a_max = 0.5")
        .replace("evader.a_max = 10", "evader.a_max = 0.01")
        .replace("evader.heading = 45", "evader.heading = 0");
    let file = write(dir.path(), "late.scn", &late);
    let out = sim(&["run", &file, "--dt", "0.01"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn sweep_over_target_angles_captures_every_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(
        &[
            "sweep",
            "info_chi180",
            "--vary",
            "chi_star=150,180,200",
            "--jobs",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| l.contains("event=defender_captures_pursuer"))
            .count(),
        3,
        "{text}"
    );
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    assert!(dir.path().join("info_chi180_chi_star=200.csv").exists());
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_ne!(sim(&["accept", "bogus"], dir.path()).status.code(), Some(0));
    assert_ne!(
        sim(&["sweep", "fig3_chi180", "--vary", "nope=1"], dir.path())
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn catalog_lists_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(&["catalog"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), pursuit_sim::catalog::CATALOG.len());
}
