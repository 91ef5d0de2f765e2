//! Generates each map template and prints its lanes and connectivity.
//!
//! ```text
//! cargo run --example map_generation -- [out_dir]
//! ```

use laneocc::simgen::{generate_map, MapSpec};

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1);
    for name in ["straight", "curve", "three_way", "four_way", "branch", "corridor"] {
        let map = generate_map(&MapSpec::named(name, 7)?)?;
        let connectors = map.lanes().filter(|l| l.successors.len() > 1).count();
        println!("{name:<10} {:>3} lanes, {connectors} with more than one successor", map.len());
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            let path = std::path::Path::new(dir).join(format!("{name}.json"));
            std::fs::write(&path, serde_json::to_string_pretty(&map.to_json_value())?)?;
        }
    }
    Ok(())
}
