//! Predicts an actor's occupancy with the UKF and the lane-following mixture,
//! samples both into grids and scores them against the ground truth.
//!
//! ```text
//! cargo run --release --example baseline_grids -- [out_dir]
//! ```

use laneocc::eval::write_pgm;
use laneocc::geometry::GridSpec;
use laneocc::pipeline::{evaluate_frame, EvalSettings, Method};
use laneocc::simgen::{generate_scenario, ScenarioKind};

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    let sc = generate_scenario(ScenarioKind::FourWay, 3, 20.0, "demo")?;
    let actor = 1;
    let t0 = 3.0;
    let settings = EvalSettings::default();
    let track = &sc.actors[actor];
    let pose = track.pose_at(t0).expect("track covers t0");
    let spec = GridSpec::new(pose.position, settings.grid_size_m, settings.grid_resolution)?;
    println!("actor {} at ({:.1}, {:.1}), grid {}x{}", track.id, pose.position.x, pose.position.y, spec.cells, spec.cells);

    for method in [Method::Ukf, Method::Mixture] {
        let (result, grid) = evaluate_frame(method, None, &sc, 0, actor, t0, &settings)?;
        let m = &result.metrics;
        println!(
            "{:<8} overall {:.4}  positive {:.4}  negative {:.4}  modes {:?}",
            method.name(),
            m.overall,
            m.positive.unwrap_or(f64::NAN),
            m.negative.unwrap_or(f64::NAN),
            result.modes
        );
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            write_pgm(&grid, &dir.join(format!("{}.pgm", method.name())))?;
        }
    }
    Ok(())
}
