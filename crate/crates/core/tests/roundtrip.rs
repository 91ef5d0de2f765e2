use laneocc::lon::io::{load_model, read_dataset, save_model};
use laneocc::lon::{lon_train, LonConfig};
use laneocc::simgen::{emit_dataset, generate_scenarios, scenario_samples, Scenario};

#[test]
fn dataset_file_matches_in_memory_samples() {
    let dir = tempfile::tempdir().unwrap();
    let scenarios = generate_scenarios(2, 9, 12.0).unwrap();
    let cfg = LonConfig::desk();
    let path = dir.path().join("d.lond");
    let n = emit_dataset(&scenarios, 6.0, &cfg, &path).unwrap();
    let (header, loaded) = read_dataset(&path).unwrap();
    assert_eq!((header.raster_size, header.num_cells), (cfg.raster_size, cfg.num_cells));
    let mut direct = Vec::new();
    for sc in &scenarios {
        direct.extend(scenario_samples(sc, 6.0, &cfg).unwrap());
    }
    assert_eq!(n as usize, direct.len());
    assert_eq!(loaded, direct);
    assert!(loaded.iter().all(|s| s.labels.iter().all(|&l| (-1..=1).contains(&l))));
}

#[test]
fn scenario_and_model_survive_files() {
    let dir = tempfile::tempdir().unwrap();
    let sc = &generate_scenarios(1, 4, 10.0).unwrap()[0];
    let sc_path = dir.path().join("s.scenario.json");
    sc.save(&sc_path).unwrap();
    let back = Scenario::load(&sc_path).unwrap();
    assert_eq!(back.actors, sc.actors);

    let mut cfg = LonConfig::desk();
    cfg.iterations = 5;
    cfg.batch_size = 4;
    let samples = scenario_samples(sc, 3.0, &cfg).unwrap();
    let (model, _) = lon_train(&samples, &cfg, |_, _| {}).unwrap();
    let m_path = dir.path().join("m.lon");
    save_model(&model, &m_path).unwrap();
    let loaded = load_model(&m_path).unwrap();
    assert_eq!(loaded, model);
    assert_eq!(loaded.forward(&samples[0].input).unwrap(), model.forward(&samples[0].input).unwrap());
}
