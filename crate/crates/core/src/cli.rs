//! `laneocc` command line: map generation, simulation, dataset building, training,
//! prediction, evaluation, rendering and mode counting.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for invalid data.
//! Every command writes a `*.manifest.json` run record next to its output.

use std::ffi::OsString;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::eval::{count_modes, read_pgm, write_metrics_csv, write_pgm, DEFAULT_RING_RADII, DEFAULT_TAU};
use crate::geometry::{Grid, GridSpec, Pose2, Vec2};
use crate::labeling::ground_truth_grid;
use crate::lon::io::{load_model, read_dataset, save_model};
use crate::lon::{lon_train, LonConfig};
use crate::pipeline::{evaluate_scenarios, summarize, EvalSettings, Method};
use crate::simgen::{emit_dataset, generate_map, generate_scenario, simulate_actor, BehaviorSpec, MapSpec, Scenario, ScenarioKind, DEFAULT_TICK};

#[derive(Parser, Debug)]
#[command(name = "laneocc", version, about = "Lane-graph occupancy prediction toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a lane map from a template.
    Mapgen(MapgenArgs),
    /// Simulate scenarios: random ones, or given behaviors on a given map.
    Simulate(SimulateArgs),
    /// Build a training dataset from scenarios.
    Dataset(DatasetArgs),
    /// Train LaneOccupancyNet on a dataset.
    Train(TrainArgs),
    /// Predict the occupancy grid of one actor at one time.
    Predict(PredictArgs),
    /// Score a predictor over scenarios and write per-frame metrics.
    Eval(EvalArgs),
    /// Render a scenario's lanes or an actor's ground-truth occupancy as a grid.
    Render(RenderArgs),
    /// Count spatial modes of a grid along forward rings.
    Modes(ModesArgs),
}

fn parse_horizon(s: &str) -> std::result::Result<f64, String> {
    match s {
        "3" | "6" | "9" => Ok(s.parse().unwrap()),
        _ => Err("horizon must be 3, 6 or 9 seconds".into()),
    }
}

#[derive(Args, Debug)]
pub struct MapgenArgs {
    /// straight, curve, n_way_intersection, three_way, four_way, five_way, six_way, branch, corridor
    #[arg(long)]
    pub template: String,
    #[arg(long)]
    pub arms: Option<usize>,
    #[arg(long)]
    pub lanes: Option<usize>,
    #[arg(long)]
    pub lane_width: Option<f64>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub angle_jitter_deg: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KindArg {
    FourWay,
    LaneChange,
    /// Alternate four-way and lane-change scenarios.
    Mixed,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Map file; with `--behaviors`, simulates exactly those actors on it.
    #[arg(long, requires = "behaviors")]
    pub map: Option<PathBuf>,
    /// JSON list of behavior specs.
    #[arg(long, requires = "map")]
    pub behaviors: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "mixed")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 20.0)]
    pub duration: f64,
    #[arg(long, default_value_t = DEFAULT_TICK)]
    pub tick: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for random scenarios, or scenario file with `--behaviors`.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    /// Scenario files or directories of `*.scenario.json` files.
    #[arg(long, num_args = 1.., required = true)]
    pub scenarios: Vec<PathBuf>,
    #[arg(long, default_value = "9", value_parser = parse_horizon)]
    pub horizon: f64,
    /// `desk`, `full`, or a JSON config file.
    #[arg(long, default_value = "desk")]
    pub config: String,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value = "desk")]
    pub config: String,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long, value_enum, default_value = "lon")]
    pub method: Method,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub actor: String,
    #[arg(long)]
    pub t0: f64,
    #[arg(long, default_value = "9", value_parser = parse_horizon)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output PGM; a JSON sidecar with the grid layout is written beside it.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, num_args = 1.., required = true)]
    pub scenarios: Vec<PathBuf>,
    #[arg(long, default_value = "9", value_parser = parse_horizon)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub frame_stride: usize,
    /// Also write every predicted grid as a PGM into this directory.
    #[arg(long)]
    pub pgm_dir: Option<PathBuf>,
    /// Metrics CSV.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    /// Lane surfaces.
    Map,
    /// Cells the actor touches over the horizon.
    Truth,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "truth")]
    pub layer: Layer,
    /// Actor the grid is centered on; required for `truth`.
    #[arg(long)]
    pub actor: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long, default_value = "9", value_parser = parse_horizon)]
    pub horizon: f64,
    #[arg(long, default_value_t = 150.0)]
    pub size: f64,
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct ModesArgs {
    /// PGM grid with its JSON sidecar.
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    /// Radians.
    #[arg(long, allow_hyphen_values = true)]
    pub heading: f64,
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    /// JSON result file; printed to stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// What a run did, written beside its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub seeds: Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub wall_time_s: f64,
}

/// `out.ext` → `out.ext.manifest.json`; directories get `run.manifest.json` inside.
pub fn manifest_path(output: &FsPath) -> PathBuf {
    if output.is_dir() {
        output.join("run.manifest.json")
    } else {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}

fn path_strings(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn load_config(spec: &str) -> Result<LonConfig> {
    let cfg = match spec {
        "desk" => LonConfig::desk(),
        "full" => LonConfig::full(),
        path => serde_json::from_str(&std::fs::read_to_string(path)?)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Scenario files in argument order; directories contribute their
/// `*.scenario.json` files sorted by name.
pub fn collect_scenarios(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.to_string_lossy().ends_with(".scenario.json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(Error::Invalid("no scenario files found".into()));
    }
    Ok(out)
}

fn load_scenarios(inputs: &[PathBuf]) -> Result<(Vec<PathBuf>, Vec<Scenario>)> {
    let files = collect_scenarios(inputs)?;
    let scenarios = files.iter().map(|f| Scenario::load(f)).collect::<Result<Vec<_>>>()?;
    Ok((files, scenarios))
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(f)
}

struct Outcome {
    config: Value,
    seeds: Value,
    inputs: Vec<String>,
    outputs: Vec<String>,
    manifest_at: PathBuf,
}

fn run_command(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Mapgen(a) => {
            let mut spec = MapSpec::named(&a.template, a.seed)?;
            let p = &mut spec.params;
            if let Some(v) = a.arms {
                p.arms = v;
            }
            if let Some(v) = a.lanes {
                p.lanes = v;
            }
            if let Some(v) = a.lane_width {
                p.lane_width = v;
            }
            if let Some(v) = a.length {
                p.length = v;
            }
            if let Some(v) = a.radius {
                p.radius = v;
            }
            if let Some(v) = a.angle_jitter_deg {
                p.angle_jitter_deg = v;
            }
            let map = generate_map(&spec)?;
            std::fs::write(&a.output, serde_json::to_string_pretty(&map.to_json_value())?)?;
            Ok(Outcome {
                config: serde_json::to_value(&spec)?,
                seeds: json!({ "map": a.seed }),
                inputs: vec![],
                outputs: path_strings(std::slice::from_ref(&a.output)),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Simulate(a) => {
            if let (Some(map_path), Some(beh_path)) = (&a.map, &a.behaviors) {
                let map = crate::lane_graph::LaneGraph::load(map_path)?;
                let specs: Vec<BehaviorSpec> = serde_json::from_str(&std::fs::read_to_string(beh_path)?)?;
                let actors = specs.iter().map(|b| simulate_actor(&map, b, a.duration, a.tick)).collect::<Result<Vec<_>>>()?;
                let name = a.output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let map_ref = relative_map_ref(map_path, &a.output);
                let sc = Scenario { name, map, map_ref, sdv_id: None, actors };
                sc.save(&a.output)?;
                return Ok(Outcome {
                    config: json!({ "duration": a.duration, "tick": a.tick, "behaviors": specs }),
                    seeds: json!({ "actors": specs.iter().map(|b| b.seed).collect::<Vec<_>>() }),
                    inputs: path_strings(&[map_path.clone(), beh_path.clone()]),
                    outputs: path_strings(std::slice::from_ref(&a.output)),
                    manifest_at: manifest_path(&a.output),
                });
            }
            if !(a.duration > 0.0) {
                return Err(Error::Invalid("duration must be positive".into()));
            }
            std::fs::create_dir_all(&a.output)?;
            let mut outputs = Vec::new();
            for i in 0..a.count {
                let kind = match a.kind {
                    KindArg::FourWay => ScenarioKind::FourWay,
                    KindArg::LaneChange => ScenarioKind::LaneChange,
                    KindArg::Mixed if i % 2 == 0 => ScenarioKind::FourWay,
                    KindArg::Mixed => ScenarioKind::LaneChange,
                };
                let name = format!("scenario_{i:04}");
                let seed = a.seed.wrapping_mul(7919).wrapping_add(i as u64);
                let sc = generate_scenario(kind, seed, a.duration, name.clone())?;
                let path = a.output.join(format!("{name}.scenario.json"));
                sc.save(&path)?;
                outputs.push(path);
            }
            Ok(Outcome {
                config: json!({ "kind": a.kind, "count": a.count, "duration": a.duration }),
                seeds: json!({ "simulate": a.seed }),
                inputs: vec![],
                outputs: path_strings(&outputs),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Dataset(a) => {
            let cfg = load_config(&a.config)?;
            let (files, scenarios) = load_scenarios(&a.scenarios)?;
            let records = with_jobs(a.jobs, || emit_dataset(&scenarios, a.horizon, &cfg, &a.output))?;
            eprintln!("wrote {records} records to {}", a.output.display());
            Ok(Outcome {
                config: json!({ "horizon": a.horizon, "lon": cfg, "records": records }),
                seeds: json!({}),
                inputs: path_strings(&files),
                outputs: path_strings(std::slice::from_ref(&a.output)),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Train(a) => {
            let mut cfg = load_config(&a.config)?;
            cfg.seed = a.seed;
            if let Some(n) = a.iterations {
                cfg.iterations = n;
            }
            if let Some(lr) = a.learning_rate {
                cfg.learning_rate = lr;
            }
            let (header, samples) = read_dataset(&a.dataset)?;
            if header.raster_size != cfg.raster_size || header.num_cells != cfg.num_cells {
                return Err(Error::Shape(format!(
                    "dataset has raster {} and {} cells; config expects {} and {}",
                    header.raster_size, header.num_cells, cfg.raster_size, cfg.num_cells
                )));
            }
            let every = (cfg.iterations / 20).max(1);
            let (model, report) = lon_train(&samples, &cfg, |it, loss| {
                if it % every == 0 {
                    eprintln!("iteration {it:6}  loss {loss:.5}");
                }
            })?;
            save_model(&model, &a.output)?;
            let mut trace = a.output.as_os_str().to_owned();
            trace.push(".loss.csv");
            let trace = PathBuf::from(trace);
            let mut csv = String::from("iteration,loss\n");
            for (i, l) in report.losses.iter().enumerate() {
                csv.push_str(&format!("{i},{l:.8}\n"));
            }
            std::fs::write(&trace, csv)?;
            Ok(Outcome {
                config: serde_json::to_value(&cfg)?,
                seeds: json!({ "train": a.seed }),
                inputs: path_strings(std::slice::from_ref(&a.dataset)),
                outputs: path_strings(&[a.output.clone(), trace]),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Predict(a) => {
            let model = a.model.as_deref().map(load_model).transpose()?;
            let sc = Scenario::load(&a.scenario)?;
            let actor = sc
                .actors
                .iter()
                .position(|t| t.id == a.actor)
                .ok_or_else(|| Error::Invalid(format!("no actor {} in {}", a.actor, a.scenario.display())))?;
            let settings = EvalSettings { horizon: a.horizon, seed: a.seed, ..Default::default() };
            let track = &sc.actors[actor];
            let pose = track.pose_at(a.t0).ok_or_else(|| Error::Track(format!("t0={} outside track {}", a.t0, a.actor)))?;
            let spec = GridSpec::new(pose.position, settings.grid_size_m, settings.grid_resolution)?;
            let grid = crate::pipeline::predict_grid(a.method, model.as_ref(), &sc, actor, a.t0, &spec, &settings, a.seed)?;
            write_pgm(&grid, &a.output)?;
            let mut inputs = vec![a.scenario.clone()];
            inputs.extend(a.model.clone());
            Ok(Outcome {
                config: json!({ "method": a.method, "actor": a.actor, "t0": a.t0, "horizon": a.horizon }),
                seeds: json!({ "mc": a.seed }),
                inputs: path_strings(&inputs),
                outputs: path_strings(&[a.output.clone(), crate::eval::sidecar_path(&a.output)]),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Eval(a) => {
            let model = a.model.as_deref().map(load_model).transpose()?;
            let (files, scenarios) = load_scenarios(&a.scenarios)?;
            let settings = EvalSettings {
                horizon: a.horizon,
                seed: a.seed,
                mc_samples: a.samples,
                frame_stride: a.frame_stride,
                ..Default::default()
            };
            if let Some(dir) = &a.pgm_dir {
                std::fs::create_dir_all(dir)?;
            }
            let write_grid = |r: &crate::pipeline::FrameResult, g: &crate::eval::OccupancyGrid| -> Result<()> {
                if let Some(dir) = &a.pgm_dir {
                    let name = format!("{}_{}_{}_{:.1}.pgm", a.method.name(), r.scenario, r.actor_id, r.t0);
                    write_pgm(g, &dir.join(name))?;
                }
                Ok(())
            };
            let results = with_jobs(a.jobs, || evaluate_scenarios(a.method, model.as_ref(), &scenarios, &settings, &write_grid))?;
            let rows: Vec<_> = results.iter().map(|r| r.row(a.method)).collect();
            let mut out = std::io::BufWriter::new(std::fs::File::create(&a.output)?);
            write_metrics_csv(&rows, &mut out)?;
            let summary = summarize(&results);
            eprintln!("{}", serde_json::to_string_pretty(&summary)?);
            let mut inputs = files.clone();
            inputs.extend(a.model.clone());
            let mut outputs = vec![a.output.clone()];
            outputs.extend(a.pgm_dir.clone());
            Ok(Outcome {
                config: json!({ "method": a.method, "settings": settings, "summary": summary }),
                seeds: json!({ "mc": a.seed }),
                inputs: path_strings(&inputs),
                outputs: path_strings(&outputs),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Render(a) => {
            let sc = Scenario::load(&a.scenario)?;
            let track = a.actor.as_deref().map(|id| sc.actor(id).ok_or_else(|| Error::Invalid(format!("no actor {id}")))).transpose()?;
            let center = match track {
                Some(t) => t.pose_at(a.t0).ok_or_else(|| Error::Track(format!("t0={} outside track {}", a.t0, t.id)))?.position,
                None => map_center(&sc),
            };
            let spec = GridSpec::new(center, a.size, a.resolution)?;
            let grid = match a.layer {
                Layer::Truth => {
                    let t = track.ok_or_else(|| Error::Invalid("--layer truth needs --actor".into()))?;
                    ground_truth_grid(t, a.t0, a.horizon, &spec)?
                }
                Layer::Map => {
                    let mut g = Grid::filled(spec, false);
                    for lane in sc.map.lanes() {
                        for q in lane.strip_quads() {
                            g.mark_polygon(&q);
                        }
                    }
                    g
                }
            };
            let values = Grid { spec, data: grid.data.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect() };
            write_pgm(&values, &a.output)?;
            Ok(Outcome {
                config: json!({ "layer": a.layer, "actor": a.actor, "t0": a.t0, "horizon": a.horizon, "grid": spec }),
                seeds: json!({}),
                inputs: path_strings(std::slice::from_ref(&a.scenario)),
                outputs: path_strings(&[a.output.clone(), crate::eval::sidecar_path(&a.output)]),
                manifest_at: manifest_path(&a.output),
            })
        }
        Command::Modes(a) => {
            let grid = read_pgm(&a.grid)?;
            let pose = Pose2::new(Vec2::new(a.x, a.y), a.heading);
            let radii = a.radii.clone().unwrap_or_else(|| DEFAULT_RING_RADII.to_vec());
            let counts = radii.iter().map(|&r| count_modes(&grid, &pose, r, a.tau)).collect::<Result<Vec<_>>>()?;
            let result = json!({ "radii": radii, "modes": counts, "tau": a.tau });
            let text = serde_json::to_string_pretty(&result)?;
            let manifest_at = match &a.output {
                Some(p) => {
                    std::fs::write(p, &text)?;
                    manifest_path(p)
                }
                None => {
                    println!("{text}");
                    let mut name = a.grid.as_os_str().to_owned();
                    name.push(".modes.manifest.json");
                    PathBuf::from(name)
                }
            };
            Ok(Outcome {
                config: json!({ "x": a.x, "y": a.y, "heading": a.heading, "tau": a.tau, "radii": radii }),
                seeds: json!({}),
                inputs: path_strings(std::slice::from_ref(&a.grid)),
                outputs: a.output.iter().map(|p| p.display().to_string()).collect(),
                manifest_at,
            })
        }
    }
}

fn relative_map_ref(map: &FsPath, scenario: &FsPath) -> Option<String> {
    let dir = scenario.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(FsPath::new("."));
    let map_dir = map.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(FsPath::new("."));
    (std::fs::canonicalize(dir).ok()? == std::fs::canonicalize(map_dir).ok()?)
        .then(|| map.file_name().map(|f| f.to_string_lossy().into_owned()))
        .flatten()
}

fn map_center(sc: &Scenario) -> Vec2 {
    let pts: Vec<Vec2> = sc.map.lanes().flat_map(|l| l.centerline.points().iter().copied()).collect();
    if pts.is_empty() {
        return Vec2::ZERO;
    }
    let b = crate::geometry::Aabb::of_points(&pts);
    (b.min + b.max) * 0.5
}

/// Runs the command line given by `args` (including the program name) and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    match run_command(&cli.command) {
        Ok(o) => {
            let manifest = RunManifest {
                command: command_line,
                config: o.config,
                seeds: o.seeds,
                inputs: o.inputs,
                outputs: o.outputs,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            let written = serde_json::to_string_pretty(&manifest)
                .map_err(Error::from)
                .and_then(|s| std::fs::write(&o.manifest_at, s).map_err(Error::from));
            if let Err(e) = written {
                eprintln!("error: writing manifest: {e}");
                return 2;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
