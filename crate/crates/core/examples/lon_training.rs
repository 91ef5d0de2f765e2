//! Trains a small LaneOccupancyNet on a handful of scenarios, saves it, reloads it
//! and predicts per-cell occupancy for one actor.
//!
//! ```text
//! cargo run --release --example lon_training -- [iterations]
//! ```

use laneocc::lane_graph::{discretize_path, DEFAULT_CELL_LENGTH_M, SEED_RADIUS_M};
use laneocc::lon::features::feature_bundle;
use laneocc::lon::io::{load_model, save_model};
use laneocc::lon::{lon_train, LonConfig};
use laneocc::simgen::{generate_scenarios, scenario_samples};

fn main() -> anyhow::Result<()> {
    let mut cfg = LonConfig::desk();
    cfg.iterations = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(400);
    let scenarios = generate_scenarios(12, 5, 20.0)?;
    let mut samples = Vec::new();
    for sc in &scenarios {
        samples.extend(scenario_samples(sc, 9.0, &cfg)?);
    }
    println!("{} samples, {} parameters", samples.len(), laneocc::lon::LonModel::new(cfg.clone())?.weights.num_parameters());

    let (model, report) = lon_train(&samples, &cfg, |it, loss| {
        if it % 100 == 0 {
            println!("iteration {it:4} loss {loss:.4}");
        }
    })?;
    println!("final loss {:.4}", report.losses.last().copied().unwrap_or(f64::NAN));

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("lon.bin");
    save_model(&model, &path)?;
    let model = load_model(&path)?;

    let sc = &scenarios[0];
    let track = &sc.actors[1];
    let t0 = track.first_t() + 2.0;
    let pose = track.pose_at(t0).expect("track covers t0");
    let max_len = cfg.num_cells as f64 * DEFAULT_CELL_LENGTH_M;
    for path in sc.map.roll_out_paths(pose.position, SEED_RADIUS_M, max_len)? {
        let cells = discretize_path(&path, DEFAULT_CELL_LENGTH_M, cfg.num_cells)?;
        let p = model.forward(&feature_bundle(&sc.view(), track, t0, &cells, &cfg))?;
        let strip: String = p.iter().map(|&v| char::from(b"0123456789"[((v * 9.999) as usize).min(9)])).collect();
        println!("{:<26} {strip}", path.lane_sequence.join(">"));
    }
    Ok(())
}
