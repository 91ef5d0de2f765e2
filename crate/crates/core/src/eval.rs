//! Common 2D occupancy representation, converters into it, likelihood metrics
//! and ring-trace multimodality counting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path as FsPath;

use crate::baselines::{cholesky2, Cov2, TrajectoryMixture};
use crate::error::{Error, Result};
use crate::geometry::{for_each_candidate_cell, swept_volume, Grid, GridSpec, Polygon, Pose2, Vec2};
use crate::lane_graph::PathCells;

/// Monte Carlo sample count used for trajectory conversion.
pub const DEFAULT_MC_SAMPLES: usize = 1000;
/// Minimum peak prominence for a mode.
pub const DEFAULT_TAU: f64 = 0.03;
/// Ring radii traced by default, meters.
pub const DEFAULT_RING_RADII: [f64; 7] = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0];

/// Likelihood grid; values in `[0, 1]`.
pub type OccupancyGrid = Grid<f64>;

/// Per-cell occupancy probabilities predicted along one path.
#[derive(Clone, Debug)]
pub struct PathOccupancy {
    pub cells: PathCells,
    pub probabilities: Vec<f64>,
}

const SAMPLES_PER_TASK: usize = 50;

/// Fraction of `n` sampled trajectories whose swept footprint overlaps each cell.
///
/// Each sample draws a mode, then one standard normal `z` shared by every waypoint
/// (`x_t = A_k(t) z + mu_k(t)` with `A_k(t)` the Cholesky factor of `Sigma_k(t)`),
/// and sweeps `footprint` from `start` through the sampled positions. Headings
/// follow consecutive waypoint differences; stationary steps keep the previous
/// heading. Sample `i` draws from stream `i` of a ChaCha generator keyed by `seed`,
/// so the result does not depend on scheduling.
pub fn mc_grid_from_mixture(
    mix: &TrajectoryMixture,
    footprint: &Polygon,
    start: &Pose2,
    spec: &GridSpec,
    n: usize,
    seed: u64,
) -> Result<OccupancyGrid> {
    if n == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let total: f64 = mix.modes.iter().map(|m| m.p).sum();
    if mix.modes.is_empty() || (total - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("mode probabilities sum to {total}")));
    }
    let factors: Vec<Vec<Cov2>> = mix
        .modes
        .iter()
        .enumerate()
        .map(|(k, m)| {
            m.waypoints
                .iter()
                .map(|w| cholesky2(&w.sigma).ok_or(Error::NotPsd { mode: k, t: w.t }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let cumulative: Vec<f64> = mix
        .modes
        .iter()
        .scan(0.0, |acc, m| {
            *acc += m.p;
            Some(*acc)
        })
        .collect();
    let cells = spec.cells * spec.cells;
    let step = 0.5 * spec.resolution;
    let tasks: Vec<usize> = (0..n.div_ceil(SAMPLES_PER_TASK)).collect();
    let counts = tasks
        .par_iter()
        .map(|&task| -> Result<Vec<u32>> {
            let mut counts = vec![0u32; cells];
            let mut stamp = vec![u32::MAX; cells];
            let lo = task * SAMPLES_PER_TASK;
            for i in lo..(lo + SAMPLES_PER_TASK).min(n) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let u: f64 = rng.random();
                let k = cumulative.iter().position(|&c| u < c).unwrap_or(mix.modes.len() - 1);
                let z = Vec2::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                let positions = mix.modes[k].waypoints.iter().zip(&factors[k]).map(|(w, a)| {
                    w.mu + Vec2::new(a[0][0] * z.x + a[0][1] * z.y, a[1][0] * z.x + a[1][1] * z.y)
                });
                let poses = poses_along(start, positions);
                for poly in swept_volume(footprint, &poses, step)? {
                    for_each_candidate_cell(spec, &poly, |idx, overlaps| {
                        if stamp[idx] != i as u32 && overlaps() {
                            stamp[idx] = i as u32;
                            counts[idx] += 1;
                        }
                    });
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut grid = Grid::filled(*spec, 0.0);
    for c in counts {
        for (g, v) in grid.data.iter_mut().zip(c) {
            *g += v as f64;
        }
    }
    for g in &mut grid.data {
        *g /= n as f64;
    }
    Ok(grid)
}

/// Poses through `start` and `positions`, headed along each step of motion.
pub fn poses_along(start: &Pose2, positions: impl IntoIterator<Item = Vec2>) -> Vec<Pose2> {
    let mut poses = vec![*start];
    for p in positions {
        let prev = *poses.last().unwrap();
        let delta = p - prev.position;
        let heading = if delta.norm() > 1e-6 { delta.heading() } else { prev.heading };
        poses.push(Pose2::new(p, heading));
    }
    poses
}

/// Averages, per 2D cell, the probabilities of every path cell overlapping it.
/// Cells touched by no path read 0.
pub fn grid_from_path_occupancy(paths: &[PathOccupancy], spec: &GridSpec) -> Result<OccupancyGrid> {
    let mut sum = vec![0.0; spec.cells * spec.cells];
    let mut count = vec![0u32; spec.cells * spec.cells];
    for po in paths {
        if po.probabilities.len() != po.cells.len() {
            return Err(Error::Shape(format!(
                "{} probabilities for {} cells",
                po.probabilities.len(),
                po.cells.len()
            )));
        }
        for (cell, &p) in po.cells.cells.iter().zip(&po.probabilities) {
            let (true, Some(poly)) = (cell.valid, &cell.polygon) else { continue };
            for_each_candidate_cell(spec, poly, |idx, overlaps| {
                if overlaps() {
                    sum[idx] += p;
                    count[idx] += 1;
                }
            });
        }
    }
    let mut grid = Grid::filled(*spec, 0.0);
    for ((g, s), c) in grid.data.iter_mut().zip(sum).zip(count) {
        if c > 0 {
            *g = s / c as f64;
        }
    }
    Ok(grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Likelihoods {
    pub overall: f64,
    /// Mean over occupied cells; absent when nothing is occupied.
    pub positive: Option<f64>,
    /// Mean over free cells; absent when every cell is occupied.
    pub negative: Option<f64>,
    pub positives: usize,
    pub negatives: usize,
}

/// Bernoulli likelihood of `truth` under `pred`: `p` on occupied cells, `1 - p` on free ones.
pub fn likelihood_metrics(truth: &Grid<bool>, pred: &OccupancyGrid) -> Result<Likelihoods> {
    if !truth.spec.same_layout(&pred.spec) {
        return Err(Error::Invalid("truth and prediction grids differ".into()));
    }
    let (mut pos_sum, mut neg_sum) = (0.0, 0.0);
    let (mut npos, mut nneg) = (0usize, 0usize);
    for (&z, &p) in truth.data.iter().zip(&pred.data) {
        if z {
            pos_sum += p;
            npos += 1;
        } else {
            neg_sum += 1.0 - p;
            nneg += 1;
        }
    }
    Ok(Likelihoods {
        overall: (pos_sum + neg_sum) / (npos + nneg) as f64,
        positive: (npos > 0).then(|| pos_sum / npos as f64),
        negative: (nneg > 0).then(|| neg_sum / nneg as f64),
        positives: npos,
        negatives: nneg,
    })
}

/// Bilinear interpolation between cell centers; 0 outside the grid.
pub fn sample_bilinear(grid: &OccupancyGrid, p: Vec2) -> f64 {
    let spec = &grid.spec;
    let o = spec.origin();
    let u = (p.x - o.x) / spec.resolution - 0.5;
    let v = (p.y - o.y) / spec.resolution - 0.5;
    let g = spec.cells as isize;
    let (c0, r0) = (u.floor() as isize, v.floor() as isize);
    let (fu, fv) = (u - c0 as f64, v - r0 as f64);
    let at = |r: isize, c: isize| -> f64 {
        if r < 0 || c < 0 || r >= g || c >= g {
            0.0
        } else {
            *grid.get(r as usize, c as usize)
        }
    };
    let top = at(r0, c0) * (1.0 - fu) + at(r0, c0 + 1) * fu;
    let bottom = at(r0 + 1, c0) * (1.0 - fu) + at(r0 + 1, c0 + 1) * fu;
    top * (1.0 - fv) + bottom * fv
}

/// Grid values along the forward half circle of `radius` around `pose`, one sample
/// per degree from `heading - 90` to `heading + 90`.
pub fn arc_profile(grid: &OccupancyGrid, pose: &Pose2, radius: f64) -> Vec<f64> {
    (-90..=90)
        .map(|deg| {
            let a = pose.heading + (deg as f64).to_radians();
            sample_bilinear(grid, pose.position + Vec2::from_heading(a) * radius)
        })
        .collect()
}

/// Number of local maxima whose prominence reaches `tau`.
///
/// Prominence is the height above the higher of the two bases, each base being the
/// lowest sample between the peak and the nearest strictly higher sample on that
/// side (or the end of the profile). Flat tops count once; profile endpoints are
/// never peaks.
pub fn count_peaks(profile: &[f64], tau: f64) -> usize {
    let n = profile.len();
    let mut count = 0;
    let mut i = 1;
    while i + 1 < n {
        if profile[i - 1] < profile[i] {
            let mut j = i;
            while j + 1 < n && profile[j + 1] == profile[i] {
                j += 1;
            }
            if j + 1 < n && profile[j + 1] < profile[i] {
                let v = profile[i];
                let mut left_base = v;
                for &x in profile[..i].iter().rev() {
                    if x > v {
                        break;
                    }
                    left_base = left_base.min(x);
                }
                let mut right_base = v;
                for &x in &profile[j + 1..] {
                    if x > v {
                        break;
                    }
                    right_base = right_base.min(x);
                }
                if v - left_base.max(right_base) >= tau {
                    count += 1;
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    count
}

/// Number of spatial modes crossing the forward arc at `radius`.
pub fn count_modes(grid: &OccupancyGrid, pose: &Pose2, radius: f64, tau: f64) -> Result<usize> {
    if !(radius > 0.0) || radius >= grid.spec.half_extent() {
        return Err(Error::Invalid(format!(
            "ring radius {radius} must be in (0, {})",
            grid.spec.half_extent()
        )));
    }
    if !(tau > 0.0) {
        return Err(Error::Invalid("tau must be positive".into()));
    }
    Ok(count_peaks(&arc_profile(grid, pose, radius), tau))
}

/// Writes `grid` as an 8-bit binary PGM (north up) plus a JSON sidecar holding its spec.
pub fn write_pgm(grid: &OccupancyGrid, path: &FsPath) -> Result<()> {
    let g = grid.spec.cells;
    let mut bytes = format!("P5\n{g} {g}\n255\n").into_bytes();
    for row in (0..g).rev() {
        for col in 0..g {
            bytes.push((grid.get(row, col).clamp(0.0, 1.0) * 255.0).round() as u8);
        }
    }
    std::fs::write(path, bytes)?;
    std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&grid.spec)?)?;
    Ok(())
}

pub fn sidecar_path(pgm: &FsPath) -> std::path::PathBuf {
    let mut name = pgm.as_os_str().to_owned();
    name.push(".json");
    std::path::PathBuf::from(name)
}

/// Reads a grid written by [`write_pgm`]; values come back quantized to 1/255.
pub fn read_pgm(path: &FsPath) -> Result<OccupancyGrid> {
    let spec: GridSpec = serde_json::from_str(&std::fs::read_to_string(sidecar_path(path))?)?;
    let bytes = std::fs::read(path)?;
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PGM header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).to_string());
    }
    pos += 1;
    let g = spec.cells;
    if fields[0] != "P5" || fields[1] != g.to_string() || fields[2] != g.to_string() || fields[3] != "255" {
        return Err(Error::Format(format!("PGM header {fields:?} does not match a {g}x{g} grid")));
    }
    let body = &bytes[pos.min(bytes.len())..];
    if body.len() != g * g {
        return Err(Error::Format(format!("PGM body has {} bytes, expected {}", body.len(), g * g)));
    }
    let mut grid = Grid::filled(spec, 0.0);
    for (k, &b) in body.iter().enumerate() {
        let (r, c) = (g - 1 - k / g, k % g);
        grid.set(r, c, b as f64 / 255.0);
    }
    Ok(grid)
}

pub const METRICS_HEADER: &str = "actor_id,frame,method,overall,positive,negative";

/// One evaluated actor-frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub actor_id: String,
    pub frame: String,
    pub method: String,
    pub overall: f64,
    pub positive: Option<f64>,
    pub negative: Option<f64>,
}

impl MetricsRow {
    pub fn new(actor_id: &str, frame: &str, method: &str, l: &Likelihoods) -> Self {
        MetricsRow {
            actor_id: actor_id.into(),
            frame: frame.into(),
            method: method.into(),
            overall: l.overall,
            positive: l.positive,
            negative: l.negative,
        }
    }
}

/// Writes rows under [`METRICS_HEADER`]; absent metrics are empty fields.
pub fn write_metrics_csv(rows: &[MetricsRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{METRICS_HEADER}")?;
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.6},{},{}",
            r.actor_id,
            r.frame,
            r.method,
            r.overall,
            fmt(r.positive),
            fmt(r.negative)
        )?;
    }
    Ok(())
}

/// Median, 25th and 75th percentile (linear interpolation) of `values`.
pub fn quartiles(values: &[f64]) -> Option<(f64, f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let q = |f: f64| {
        let x = f * (v.len() - 1) as f64;
        let (lo, hi) = (x.floor() as usize, x.ceil() as usize);
        v[lo] + (v[hi] - v[lo]) * (x - lo as f64)
    };
    Some((q(0.5), q(0.25), q(0.75)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{Mode, Waypoint};
    use crate::geometry::{rasterize_region, Polyline};
    use crate::lane_graph::{discretize_path, LaneGraph};

    fn spec() -> GridSpec {
        GridSpec::new(Vec2::ZERO, 150.0, 1.0).unwrap()
    }

    fn line_mode(p: f64, y: f64, sigma: f64) -> Mode {
        Mode {
            p,
            waypoints: (1..=18)
                .map(|k| Waypoint {
                    t: k as f64 * 0.5,
                    mu: Vec2::new(2.0 * k as f64, y),
                    sigma: [[sigma, 0.0], [0.0, sigma]],
                })
                .collect(),
        }
    }

    #[test]
    fn perfect_and_uniform_predictors() {
        let s = spec();
        let mut truth = Grid::filled(s, false);
        for c in 70..90 {
            truth.set(75, c, true);
        }
        let perfect = Grid { spec: s, data: truth.data.iter().map(|&z| if z { 1.0 } else { 0.0 }).collect() };
        let l = likelihood_metrics(&truth, &perfect).unwrap();
        assert_eq!((l.overall, l.positive, l.negative), (1.0, Some(1.0), Some(1.0)));
        let half = Grid::filled(s, 0.5);
        let l = likelihood_metrics(&truth, &half).unwrap();
        assert!((l.overall - 0.5).abs() < 1e-12);
        assert!((l.positive.unwrap() - 0.5).abs() < 1e-12 && (l.negative.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overall_recombines_partial_means() {
        let s = GridSpec::new(Vec2::ZERO, 10.0, 1.0).unwrap();
        let truth = Grid { spec: s, data: (0..100).map(|i| i % 7 == 0).collect() };
        let pred = Grid { spec: s, data: (0..100).map(|i| (i as f64 * 0.37).sin().abs()).collect() };
        let l = likelihood_metrics(&truth, &pred).unwrap();
        let recombined = (l.positive.unwrap() * l.positives as f64 + l.negative.unwrap() * l.negatives as f64) / 100.0;
        assert!((recombined - l.overall).abs() < 1e-12);
        let empty = Grid::filled(s, false);
        assert_eq!(likelihood_metrics(&empty, &pred).unwrap().positive, None);
        let other = Grid::filled(GridSpec::new(Vec2::new(1.0, 0.0), 10.0, 1.0).unwrap(), 0.0);
        assert!(likelihood_metrics(&truth, &other).is_err());
    }

    #[test]
    fn degenerate_mixture_equals_mean_sweep() {
        let mix = TrajectoryMixture { modes: vec![line_mode(1.0, 0.3, 0.0)] };
        let fp = Polygon::rectangle(4.5, 1.9).unwrap();
        let start = Pose2::new(Vec2::new(0.0, 0.3), 0.0);
        let s = spec();
        let poses = poses_along(&start, mix.modes[0].waypoints.iter().map(|w| w.mu));
        let direct = rasterize_region(&swept_volume(&fp, &poses, 0.5).unwrap(), &s);
        for n in [1, 7] {
            let g = mc_grid_from_mixture(&mix, &fp, &start, &s, n, 3).unwrap();
            for (a, b) in g.data.iter().zip(&direct.data) {
                assert_eq!(*a, if *b { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn rejects_indefinite_covariance() {
        let mut mode = line_mode(1.0, 0.0, 1.0);
        mode.waypoints[4].sigma = [[1.0, 3.0], [3.0, 1.0]];
        let mix = TrajectoryMixture { modes: vec![mode] };
        let fp = Polygon::rectangle(4.5, 1.9).unwrap();
        match mc_grid_from_mixture(&mix, &fp, &Pose2::new(Vec2::ZERO, 0.0), &spec(), 10, 0) {
            Err(Error::NotPsd { mode, t }) => assert_eq!((mode, t), (0, 2.5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mc_is_deterministic_and_monotone_in_footprint() {
        let mix = TrajectoryMixture { modes: vec![line_mode(0.7, 0.0, 1.0), line_mode(0.3, 8.0, 2.0)] };
        let small = Polygon::rectangle(4.0, 1.8).unwrap();
        let big = Polygon::rectangle(5.0, 2.4).unwrap();
        let start = Pose2::new(Vec2::ZERO, 0.0);
        let a = mc_grid_from_mixture(&mix, &small, &start, &spec(), 200, 9).unwrap();
        let b = mc_grid_from_mixture(&mix, &small, &start, &spec(), 200, 9).unwrap();
        assert_eq!(a, b);
        let c = mc_grid_from_mixture(&mix, &big, &start, &spec(), 200, 9).unwrap();
        for (x, y) in a.data.iter().zip(&c.data) {
            assert!(y >= x);
        }
    }

    fn straight_path_cells(y: f64) -> PathCells {
        let g = LaneGraph::new(vec![(
            "a".into(),
            Polyline::new(vec![Vec2::new(0.0, y), Vec2::new(300.0, y)]).unwrap(),
            4.0,
            vec![],
        )])
        .unwrap();
        let p = &g.roll_out_paths(Vec2::new(0.0, y), 2.0, 192.0).unwrap()[0];
        discretize_path(p, 4.8, 40).unwrap()
    }

    #[test]
    fn path_occupancy_single_cell() {
        let cells = straight_path_cells(0.0);
        let mut probs = vec![0.0; 40];
        probs[0] = 1.0;
        let s = spec();
        let g = grid_from_path_occupancy(&[PathOccupancy { cells: cells.clone(), probabilities: probs }], &s).unwrap();
        let want = rasterize_region(&[cells.cells[0].polygon.clone().unwrap()], &s);
        let neighbor = rasterize_region(&[cells.cells[1].polygon.clone().unwrap()], &s);
        for i in 0..want.data.len() {
            if want.data[i] && !neighbor.data[i] {
                assert_eq!(g.data[i], 1.0);
            } else if !want.data[i] {
                assert_eq!(g.data[i], 0.0);
            }
        }
    }

    #[test]
    fn overlapping_paths_average() {
        let s = spec();
        let a = PathOccupancy { cells: straight_path_cells(0.0), probabilities: vec![0.2; 40] };
        let b = PathOccupancy { cells: straight_path_cells(0.0), probabilities: vec![0.8; 40] };
        let g = grid_from_path_occupancy(&[a, b], &s).unwrap();
        let center = s.cells / 2;
        assert!((g.get(center, center + 10) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn peaks_with_plateaus_and_prominence() {
        assert_eq!(count_peaks(&[0.0; 181], 0.03), 0);
        let two = [0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0];
        assert_eq!(count_peaks(&two, 0.03), 2);
        // a small dip inside one lobe does not split it
        let noisy = [0.0, 0.5, 0.6, 0.59, 0.61, 0.5, 0.0];
        assert_eq!(count_peaks(&noisy, 0.03), 1);
        // monotone toward the end: the endpoint is not a peak
        assert_eq!(count_peaks(&[0.0, 0.1, 0.2, 0.3], 0.03), 0);
    }

    #[test]
    fn two_lobes_two_modes() {
        let s = spec();
        let mut g = Grid::filled(s, 0.0);
        // lobes crossing the 30 m ring at +-40 degrees
        for deg in [-40.0f64, 40.0] {
            for r in 0..s.cells {
                for c in 0..s.cells {
                    let p = s.cell_center(r, c);
                    let a = p.y.atan2(p.x).to_degrees();
                    if (a - deg).abs() < 8.0 && p.norm() > 5.0 {
                        g.set(r, c, 1.0);
                    }
                }
            }
        }
        let pose = Pose2::new(Vec2::ZERO, 0.0);
        assert_eq!(count_modes(&g, &pose, 30.0, DEFAULT_TAU).unwrap(), 2);
        assert!(count_modes(&g, &pose, 80.0, DEFAULT_TAU).is_err());
    }

    #[test]
    fn pgm_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.pgm");
        let s = GridSpec::new(Vec2::new(3.0, -2.0), 20.0, 1.0).unwrap();
        let g = Grid { spec: s, data: (0..400).map(|i| (i % 256) as f64 / 255.0).collect() };
        write_pgm(&g, &path).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!(back, g);
        let raw = std::fs::read(&path).unwrap();
        assert!(raw.starts_with(b"P5\n20 20\n255\n"));
        // first stored row is the northernmost
        assert_eq!(raw[13], (g.get(19, 0) * 255.0).round() as u8);
    }

    #[test]
    fn csv_schema() {
        let l = Likelihoods { overall: 0.9, positive: None, negative: Some(0.95), positives: 0, negatives: 4 };
        let mut out = Vec::new();
        write_metrics_csv(&[MetricsRow::new("a1", "s0:3", "ukf", &l)], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "actor_id,frame,method,overall,positive,negative\na1,s0:3,ukf,0.900000,,0.950000\n");
    }

    #[test]
    fn quartile_values() {
        assert_eq!(quartiles(&[1.0, 2.0, 3.0, 4.0, 5.0]), Some((3.0, 2.0, 4.0)));
        assert_eq!(quartiles(&[]), None);
    }
}
