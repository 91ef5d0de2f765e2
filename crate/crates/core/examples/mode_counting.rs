//! Counts modes of a synthetic grid with two forward lobes and one faint lobe
//! below the prominence threshold.

use laneocc::eval::{arc_profile, count_modes, count_peaks, DEFAULT_TAU};
use laneocc::geometry::{Grid, GridSpec, Pose2, Vec2};

fn main() -> anyhow::Result<()> {
    let spec = GridSpec::new(Vec2::ZERO, 150.0, 1.0)?;
    let lobes = [(0.5_f64, 0.9), (-0.6, 0.7), (0.0, 0.02)];
    let mut grid = Grid::filled(spec, 0.0);
    for r in 0..spec.cells {
        for c in 0..spec.cells {
            let p = spec.cell_center(r, c);
            let v: f64 = lobes
                .iter()
                .map(|&(bearing, peak)| {
                    let d = p - Vec2::new(30.0 * f64::cos(bearing), 30.0 * f64::sin(bearing));
                    peak * (-d.norm_sq() / 18.0).exp()
                })
                .sum();
            grid.set(r, c, v);
        }
    }
    let pose = Pose2::new(Vec2::ZERO, 0.0);
    let profile = arc_profile(&grid, &pose, 30.0);
    println!("profile max {:.3}", profile.iter().cloned().fold(0.0, f64::max));
    println!("peaks at tau {DEFAULT_TAU}: {}", count_peaks(&profile, DEFAULT_TAU));
    println!("peaks at tau 0.001: {}", count_peaks(&profile, 0.001));
    for r in [10.0, 30.0, 50.0] {
        println!("ring {r:>4} m: {} modes", count_modes(&grid, &pose, r, DEFAULT_TAU)?);
    }
    Ok(())
}
