//! Simulates a turning actor and labels the cells of every candidate path with
//! the footprint it sweeps over the next 9 seconds.

use laneocc::labeling::label_cells;
use laneocc::lane_graph::{discretize_path, DEFAULT_CELL_LENGTH_M, DEFAULT_NUM_CELLS, SEED_RADIUS_M};
use laneocc::simgen::{generate_map, simulate_actor, Behavior, BehaviorSpec, MapSpec, TurnChoice};

fn main() -> anyhow::Result<()> {
    let map = generate_map(&MapSpec::named("four_way", 0)?)?;
    let spec = BehaviorSpec::new("car", "in_0", 20.0, Behavior::Turn { choice: TurnChoice::Left }, 8.0);
    let track = simulate_actor(&map, &spec, 20.0, 0.1)?;
    let t0 = 2.0;
    let pose = track.pose_at(t0).expect("track covers t0");

    let max_len = DEFAULT_CELL_LENGTH_M * DEFAULT_NUM_CELLS as f64;
    for path in map.roll_out_paths(pose.position, SEED_RADIUS_M, max_len)? {
        let cells = discretize_path(&path, DEFAULT_CELL_LENGTH_M, DEFAULT_NUM_CELLS)?;
        let labels = label_cells(&cells, &track, t0, 9.0)?;
        let strip: String = labels
            .labels
            .iter()
            .map(|&l| match l {
                1 => '#',
                0 => '.',
                _ => '?',
            })
            .collect();
        println!("{:<28} {strip}", path.lane_sequence.join(">"));
    }
    println!("# occupied, . free, ? unknown");
    Ok(())
}
