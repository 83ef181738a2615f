use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use descomp::fixtures;
use descomp::io::{parse_problem, read_cg, read_fragment, serialize_problem, Mode, ProblemFile};
use descomp::lts::{bisimilar, Lts};
use descomp::srtf::simulation_equivalent;
use descomp::{Action, Behavior, RunState, Target};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn descomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descomp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The reference mining controller generator restricted to states below
/// `limit`.
fn reference(limit: usize) -> Lts<(Action, usize)> {
    let mut lts = Lts::new(fixtures::MINING_CG_TUPLES.len(), 0);
    for (s, a, j, t) in fixtures::MINING_CG_EDGES {
        if s < limit && t < limit {
            lts.add_edge(s, (Action::from(a), j), t);
        }
    }
    lts.reachable_part()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn unsolvable_problem(dir: &Path) -> PathBuf {
    let (sys, _) = fixtures::mining();
    let t = Target::new(Behavior::new("t", ["s"], "s", [("s", "fly", "s")]).unwrap()).unwrap();
    write(dir, "fly.json", &serialize_problem(&ProblemFile::new(Mode::Compose, &sys, &t, None)))
}

#[test]
fn synthesize_mining_writes_the_reference_cg() {
    let dir = tempfile::tempdir().unwrap();
    let o = descomp(&["--out", path(dir.path()), "synthesize", path(&fixture("mining.json")), "--omega"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("verdict: composition exists"));
    assert!(text.contains("q0 ⟨t0,a0,b0,c0⟩: GoMine {1}, dig {3}"));
    assert!(text.contains("⟨t1,a3,b0,c0⟩: load {2,3}"));
    let cg = read_cg(&std::fs::read_to_string(dir.path().join("cg.json")).unwrap()).unwrap();
    assert!(bisimilar(&cg.to_lts(), &reference(usize::MAX)));
    assert!(std::fs::read_to_string(dir.path().join("cg.dot")).unwrap().starts_with("digraph"));
}

#[test]
fn constrained_mode_keeps_the_first_twelve_states() {
    let dir = tempfile::tempdir().unwrap();
    let o = descomp(&["--out", path(dir.path()), "synthesize", path(&fixture("mining_constrained.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mode: constrained"));
    let cg = read_cg(&std::fs::read_to_string(dir.path().join("cg.json")).unwrap()).unwrap();
    assert!(bisimilar(&cg.to_lts(), &reference(12)));
}

#[test]
fn srtf_mode_writes_a_fragment_equivalent_to_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let o = descomp(&["--out", path(dir.path()), "--quotient", "synthesize", path(&fixture("mining_deterministic.json"))]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("mode: srtf"));
    assert!(text.contains("--[t0,GoMine,t1]/1-->"), "{text}");
    let f = read_fragment(&std::fs::read_to_string(dir.path().join("srtf.json")).unwrap()).unwrap();
    let (_, target) = fixtures::deterministic_mining();
    assert!(simulation_equivalent(&f.target, &target));
    assert!(simulation_equivalent(&f.target, &fixtures::deterministic_mining_fragment()));
}

#[test]
fn mode_flag_overrides_the_file() {
    let o = descomp(&["--mode", "srtf", "synthesize", path(&fixture("mining.json"))]);
    // the mining system is nondeterministic, so the fragment pipeline refuses
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn require_solution_fails_without_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = unsolvable_problem(dir.path());
    let o = descomp(&["synthesize", path(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no composition exists"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: target action `fly`"));
    assert_eq!(descomp(&["--require-solution", "synthesize", path(&p)]).status.code(), Some(1));
}

#[test]
fn check_exit_status_is_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = descomp(&["check", path(&fixture("mining.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "composition exists\n");
    let o = descomp(&["check", path(&unsolvable_problem(dir.path()))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no composition exists\n");
}

#[test]
fn crosscheck_agrees_on_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for p in [fixture("mining.json"), unsolvable_problem(dir.path())] {
        let o = descomp(&["crosscheck", path(&p)]);
        assert!(o.status.success(), "{}", stdout(&o));
        assert!(stdout(&o).ends_with("agreement\n"));
    }
}

fn mining_cg(dir: &Path) -> PathBuf {
    let o = descomp(&["--out", path(dir), "synthesize", path(&fixture("mining.json"))]);
    assert!(o.status.success());
    dir.join("cg.json")
}

#[test]
fn scripted_session_replays_on_the_cg() {
    let dir = tempfile::tempdir().unwrap();
    let cg_path = mining_cg(dir.path());
    let script = write(
        dir.path(),
        "episode.txt",
        "dig,3\nfly\nGoMine,1,a3\nload\n1\n2\nGoDepot,2\nunload,2,b0\nrepair,1\n",
    );
    let transcript = dir.path().join("t.json");
    let o = descomp(&["run", path(&cg_path), "--script", path(&script), "--transcript", path(&transcript)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("`fly` is not a target action here"));
    assert!(text.contains("ω = {2,3}"));
    assert!(text.contains("behavior 1 may not be delegated this request; choose from {2,3}"));
    assert!(text.contains("session ended after 6 steps in state"));
    // the saved transcript replays to a state at the start of the target
    let cg = read_cg(&std::fs::read_to_string(&cg_path).unwrap()).unwrap();
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&transcript).unwrap()).unwrap();
    let steps = serde_json::from_value::<Vec<descomp::cg::Step>>(saved["steps"].clone()).unwrap();
    assert_eq!(steps.len(), 6);
    let run = RunState::replay(&cg, &steps).unwrap();
    assert_eq!(cg.tuple(run.state()).unwrap().target, "t0");
    assert_eq!(saved["final"], run.state());
}

#[test]
fn auto_sessions_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cg_path = mining_cg(dir.path());
    let script = write(dir.path(), "s.txt", "GoMine\nload\nGoDepot\nunload\nrepair\nGoMine\nload\n");
    let go = |seed: &str| stdout(&descomp(&["--seed", seed, "run", path(&cg_path), "--auto", "--script", path(&script)]));
    let first = go("7");
    assert!(first.contains("auto: delegating to 1"));
    assert!(first.contains("session ended after 7 steps"));
    assert_eq!(first, go("7"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for problem in ["mining.json", "mining_constrained.json", "mining_deterministic.json"] {
        for d in [&a, &b] {
            assert!(descomp(&["--out", path(d.path()), "synthesize", path(&fixture(problem))]).status.success());
        }
        for name in ["cg.json", "cg.dot", "srtf.json", "srtf.dot"] {
            let (x, y) = (a.path().join(name), b.path().join(name));
            if x.exists() {
                assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap(), "{problem}: {name}");
            }
        }
    }
}

#[test]
fn export_reproduces_the_machine_listing() {
    let o = descomp(&["export", path(&fixture("machine_G.ads")), "--format", "ads"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("machine_G.ads")).unwrap());
    let o = descomp(&[
        "export",
        path(&fixture("machine_K.ads")),
        "--format",
        "ads",
        "--symbols",
        path(&fixture("machine.symbols.json")),
    ]);
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("machine_K.ads")).unwrap());
}

#[test]
fn export_dot_and_problem() {
    let dir = tempfile::tempdir().unwrap();
    let o = descomp(&["export", path(&fixture("machine_G.ads")), "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph \"G\" {\n") && dot.ends_with("}\n"));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    let o = descomp(&["--out", path(dir.path()), "export", path(&fixture("mining.json")), "--format", "ads"]);
    assert!(o.status.success());
    assert!(dir.path().join("plant.ads").exists() && dir.path().join("plant.symbols.json").exists());
    let o = descomp(&["export", path(&fixture("mining_constrained.json")), "--format", "problem"]);
    let back = parse_problem(&stdout(&o)).unwrap();
    let orig = parse_problem(&std::fs::read_to_string(fixture("mining_constrained.json")).unwrap()).unwrap();
    let (x, y) = (back.validate().unwrap(), orig.validate().unwrap());
    assert_eq!((x.system, x.target, x.mode), (y.system, y.target, y.mode));
    assert_eq!(x.constraint, y.constraint);
    let cg = mining_cg(dir.path());
    assert!(stdout(&descomp(&["export", path(&cg), "--format", "dot"])).contains("label=\"dig,3\""));
}

#[test]
fn export_rejects_unknown_formats() {
    let o = descomp(&["export", path(&fixture("machine_G.ads")), "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("possible values"));
}
