//! Rolls out candidate lane paths from an approach lane of a four-way
//! intersection and cuts each into fixed-length cells.

use laneocc::geometry::Vec2;
use laneocc::lane_graph::{discretize_path, DEFAULT_CELL_LENGTH_M, DEFAULT_NUM_CELLS, SEED_RADIUS_M};
use laneocc::simgen::{generate_map, MapSpec};

fn main() -> anyhow::Result<()> {
    let map = generate_map(&MapSpec::named("four_way", 0)?)?;
    let approach = map.lane("in_0").expect("four-way maps have in_0");
    let start = approach.centerline.point_at(approach.centerline.length() * 0.5);
    println!("seed point ({:.1}, {:.1})", start.x, start.y);

    let max_len = DEFAULT_CELL_LENGTH_M * DEFAULT_NUM_CELLS as f64;
    for path in map.roll_out_paths(start, SEED_RADIUS_M, max_len)? {
        let cells = discretize_path(&path, DEFAULT_CELL_LENGTH_M, DEFAULT_NUM_CELLS)?;
        let end: Vec2 = path.centerline.points().last().copied().unwrap_or(start);
        println!(
            "{:<40} length {:6.1} m, {:2}/{} cells valid, ends at ({:.1}, {:.1})",
            path.lane_sequence.join(" > "),
            path.centerline.length(),
            cells.valid_count(),
            cells.len(),
            end.x,
            end.y
        );
    }
    Ok(())
}
