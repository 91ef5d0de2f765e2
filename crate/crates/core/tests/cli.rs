use std::path::Path;

use laneocc::cli::run;

fn laneocc(args: &[&str]) -> i32 {
    run(std::iter::once("laneocc").chain(args.iter().copied()))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(laneocc(&[]), 1);
    assert_eq!(laneocc(&["frobnicate"]), 1);
    assert_eq!(laneocc(&["mapgen", "--seed", "3"]), 1);
    assert_eq!(laneocc(&["eval", "--method", "ukf", "--scenarios", "x", "--horizon", "5", "-o", "m.csv"]), 1);
    assert_eq!(laneocc(&["--help"]), 0);
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(laneocc(&["mapgen", "--template", "roundabout", "-o", &p(dir.path(), "m.json")]), 2);
    let bad = dir.path().join("bad.scenario.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(laneocc(&["eval", "--method", "ukf", "--scenarios", &bad.display().to_string(), "-o", &p(dir.path(), "m.csv")]), 2);
    assert_eq!(laneocc(&["train", "--dataset", &p(dir.path(), "missing.lond"), "-o", &p(dir.path(), "model.lon")]), 2);
}

#[test]
fn mapgen_writes_map_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "map.json");
    assert_eq!(laneocc(&["mapgen", "--template", "four_way", "--seed", "7", "-o", &out]), 0);
    let map = laneocc::lane_graph::LaneGraph::load(Path::new(&out)).unwrap();
    assert!(map.len() >= 8);
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(format!("{out}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seeds"]["map"], 7);
    assert!(manifest["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(manifest["command"].as_str().unwrap().contains("mapgen"));
}

#[test]
fn simulate_behaviors_then_render_and_count_modes() {
    let dir = tempfile::tempdir().unwrap();
    let map = p(dir.path(), "map.json");
    assert_eq!(laneocc(&["mapgen", "--template", "four_way", "-o", &map]), 0);
    let behaviors = dir.path().join("behaviors.json");
    let specs = vec![laneocc::simgen::BehaviorSpec::new(
        "car",
        "in_0",
        10.0,
        laneocc::simgen::Behavior::Turn { choice: laneocc::simgen::TurnChoice::Left },
        8.0,
    )];
    std::fs::write(&behaviors, serde_json::to_string(&specs).unwrap()).unwrap();
    let scenario = p(dir.path(), "turn.scenario.json");
    assert_eq!(laneocc(&["simulate", "--map", &map, "--behaviors", &behaviors.display().to_string(), "--duration", "15", "-o", &scenario]), 0);

    let truth = p(dir.path(), "truth.pgm");
    assert_eq!(laneocc(&["render", "--scenario", &scenario, "--actor", "car", "--t0", "1", "-o", &truth]), 0);
    let grid = laneocc::eval::read_pgm(Path::new(&truth)).unwrap();
    assert!(grid.data.iter().any(|&v| v == 1.0));
    assert_eq!(laneocc(&["render", "--scenario", &scenario, "--layer", "map", "-o", &p(dir.path(), "map.pgm")]), 0);
    assert_eq!(laneocc(&["render", "--scenario", &scenario, "--layer", "truth", "-o", &p(dir.path(), "x.pgm")]), 2);

    let pred = p(dir.path(), "mix.pgm");
    assert_eq!(laneocc(&["predict", "--method", "mixture", "--scenario", &scenario, "--actor", "car", "--t0", "1", "-o", &pred]), 0);
    let sc = laneocc::simgen::Scenario::load(Path::new(&scenario)).unwrap();
    let pose = sc.actors[0].pose_at(1.0).unwrap();
    let modes_out = p(dir.path(), "modes.json");
    let (x, y, h) = (pose.position.x.to_string(), pose.position.y.to_string(), pose.heading.to_string());
    assert_eq!(laneocc(&["modes", "--grid", &pred, "--x", &x, "--y", &y, "--heading", &h, "--radii", "10,30", "-o", &modes_out]), 0);
    let modes: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&modes_out).unwrap()).unwrap();
    assert_eq!(modes["modes"].as_array().unwrap().len(), 2);
    assert_eq!(laneocc(&["predict", "--method", "lon", "--scenario", &scenario, "--actor", "car", "--t0", "1", "-o", &pred]), 2);
}
