//! Seeded experiment driver for the `htlpp` models.
//!
//! Every run writes `manifest.json` (the full [`RunConfig`] and the crate
//! version) next to its CSV outputs. Rerunning a manifest reproduces the data
//! files byte for byte, whatever the number of worker threads.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use htlpp::chains::{lis_profile, max_weight_chain, remainder_bound};
use htlpp::continuum::{airy_measure, airy_values, sample_continuum, theta_at, z_min_for_budget, DEFAULT_POINT_BUDGET};
use htlpp::distributions::WeightDistribution;
use htlpp::exec::map_replicates;
use htlpp::experiments::convergence_ladder;
use htlpp::greedy::{coarse_local_dimensions, greedy_path, measure_cdf, spectrum};
use htlpp::lattice::{geodesic_tree, optimal_path, passage_field, path_to_unit_cube, LatticeGrid};
use htlpp::stable::{
    directed_l, lower_bound, range_sup_weights, simulate_processes_over, tail_estimate, upper_bound, StableSpec,
    DEFAULT_JUMP_RATE,
};
use htlpp::stats::{split_stream, EmpiricalSample};

/// Version string recorded in every manifest.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DistKind {
    Pareto,
    Exponential,
    SlowlyVarying,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct DiscreteParams {
    /// Site-weight law.
    #[arg(long, value_enum, default_value = "pareto")]
    pub dist: DistKind,
    /// Pareto tail index.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Exponential mean.
    #[arg(long, default_value_t = 1.0)]
    pub mean: f64,
    /// Grid side length.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    /// Also write the geodesic tree of replicate 0 (two dimensions only).
    #[arg(long)]
    pub tree: bool,
    /// Also write the optimal path of replicate 0.
    #[arg(long)]
    pub path: bool,
    /// Fixed weights (row-major) instead of random grids; filled from `--weights-file`.
    #[arg(skip)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct ContinuumParams {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Truncation levels; `T_k` and `U_k` are reported for each.
    #[arg(long, value_delimiter = ',', default_values_t = [100usize, 1000])]
    pub k: Vec<usize>,
    /// Points used for the remainder diagnostic `U_k` (at least the largest `k`).
    #[arg(long, default_value_t = 4000)]
    pub k_tail: usize,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct AiryParams {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Half-width of the `u` window; the measure lives on `[0, e^tau]^2`.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Points of the `u` grid on `[-tau, tau]`.
    #[arg(long, default_value_t = 101)]
    pub u_points: usize,
    /// Points per axis of the `Theta` grid on `[-tau, tau]^2`.
    #[arg(long, default_value_t = 5)]
    pub theta_points: usize,
    /// Expected retained points per unit area; sets `z_min` unless given.
    #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
    pub budget: f64,
    #[arg(long)]
    pub z_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct GreedyParams {
    /// Resolution: boxes of diameter below `eps` are not split.
    #[arg(long, default_value_t = 1.0 / 4096.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    /// Evaluation points of `G` on `[0, 1]`.
    #[arg(long, default_value_t = 101)]
    pub g_points: usize,
    /// Ball radius for coarse local exponents (needs `eps <= r/16`).
    #[arg(long, default_value_t = 1.0 / 256.0)]
    pub r: f64,
    /// Evaluation points for coarse local exponents.
    #[arg(long, default_value_t = 200)]
    pub r_points: usize,
    /// Points of the analytic spectrum table on `[0, 6]`.
    #[arg(long, default_value_t = 121)]
    pub spectrum_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct StableParams {
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_plus: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c_minus: f64,
    /// Small-jump cutoff; derived from `jump_rate` when absent.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Expected jumps per unit time when `delta` is absent.
    #[arg(long, default_value_t = DEFAULT_JUMP_RATE)]
    pub jump_rate: f64,
    /// Number of processes.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Time horizon in units; defaults to `n`.
    #[arg(long)]
    pub units: Option<usize>,
    /// Time steps per unit interval.
    #[arg(long, default_value_t = 50)]
    pub m: usize,
    /// Largest positive jumps used by the lower bound; defaults to `n`.
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Points of the tail-estimate curve.
    #[arg(long, default_value_t = 30)]
    pub tail_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct ConvergeParams {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Ladder of lattice sides.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 30, 100])]
    pub ns: Vec<usize>,
    /// Truncation level of the continuum reference.
    #[arg(long, default_value_t = 2000)]
    pub k: usize,
    /// Seed of the continuum reference; defaults to the master seed plus one.
    #[arg(long)]
    pub continuum_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Experiment {
    Discrete(DiscreteParams),
    Continuum(ContinuumParams),
    Airy(AiryParams),
    Greedy(GreedyParams),
    Stable(StableParams),
    Converge(ConvergeParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub master_seed: u64,
    pub replicates: usize,
    pub experiment: Experiment,
}

impl RunConfig {
    /// The same configuration with every derived default written out, so the
    /// manifest records the seeds and sizes actually used.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        // a fixed grid gives the same row every time
        if matches!(&c.experiment, Experiment::Discrete(p) if p.weights.is_some()) {
            c.replicates = c.replicates.min(1);
        }
        match &mut c.experiment {
            Experiment::Converge(p) => {
                p.continuum_seed.get_or_insert(self.master_seed.wrapping_add(1));
            }
            Experiment::Stable(p) => {
                p.units.get_or_insert(p.n);
                p.top_k.get_or_insert(p.n);
            }
            _ => {}
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub master_seed: u64,
    pub config: RunConfig,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Reads whitespace-separated floats.
pub fn read_weights_file(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad weight {t:?} in {}", path.display())))
        .collect()
}

/// Float formatting used in every CSV: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Csv {
    path: PathBuf,
    out: BufWriter<File>,
}

impl Csv {
    fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let path = dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut csv = Self {
            path,
            out: BufWriter::new(file),
        };
        csv.line(header.iter().map(|h| h.to_string()))?;
        Ok(csv)
    }

    fn line<I: IntoIterator<Item = String>>(&mut self, cells: I) -> Result<()> {
        let row: Vec<String> = cells.into_iter().collect();
        writeln!(self.out, "{}", row.join(",")).with_context(|| format!("writing {}", self.path.display()))
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.out.flush().with_context(|| format!("writing {}", self.path.display()))?;
        Ok(self.path)
    }
}

/// Runs `config`, writing `manifest.json` and the data files into `out`.
/// Returns the paths written.
pub fn run(config: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let config = &config.resolved();
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut written = match &config.experiment {
        Experiment::Discrete(p) => run_discrete(config, p, out)?,
        Experiment::Continuum(p) => run_continuum(config, p, out)?,
        Experiment::Airy(p) => run_airy(config, p, out)?,
        Experiment::Greedy(p) => run_greedy(config, p, out)?,
        Experiment::Stable(p) => run_stable(config, p, out)?,
        Experiment::Converge(p) => run_converge(config, p, out)?,
    };
    let manifest = Manifest {
        version: VERSION.to_string(),
        master_seed: config.master_seed,
        config: config.clone(),
    };
    let path = out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    Ok(written)
}

fn distribution(p: &DiscreteParams) -> Result<WeightDistribution> {
    Ok(match p.dist {
        DistKind::Pareto => WeightDistribution::pareto(p.alpha)?,
        DistKind::Exponential => WeightDistribution::exponential(p.mean)?,
        DistKind::SlowlyVarying => WeightDistribution::SlowlyVaryingLog,
    })
}

fn grid_for(p: &DiscreteParams, dist: &WeightDistribution, rng: &mut htlpp::stats::Stream) -> Result<(LatticeGrid, usize)> {
    match &p.weights {
        Some(w) => Ok((LatticeGrid::new(p.dims, p.n, w.clone())?, 0)),
        None => Ok(LatticeGrid::random(p.dims, p.n, dist, rng)?),
    }
}

/// Per-replicate `T^(n)` and `T^(n)/a_{n^d}`; optionally the geodesic tree
/// and optimal path of replicate 0.
pub fn run_discrete(config: &RunConfig, p: &DiscreteParams, out: &Path) -> Result<Vec<PathBuf>> {
    let dist = distribution(p)?;
    ensure!(p.dims == 2 || p.dims == 3, "dims must be 2 or 3");
    ensure!(p.n >= 1, "n must be positive");
    if let Some(w) = &p.weights {
        ensure!(
            w.len() == p.n.pow(p.dims as u32),
            "weights file holds {} values, expected n^d = {}",
            w.len(),
            p.n.pow(p.dims as u32)
        );
    }
    let scale = dist.scale_constant((p.n as u64).pow(p.dims as u32))?;
    grid_for(p, &dist, &mut split_stream(config.master_seed, 0))?;
    let rows = map_replicates(config.master_seed, config.replicates, |_, rng| {
        let (grid, clamped) = grid_for(p, &dist, rng).expect("validated above");
        (htlpp::lattice::passage_time(&grid), clamped)
    });
    let clamped: usize = rows.iter().map(|r| r.1).sum();
    if clamped > 0 {
        eprintln!("warning: {clamped} weight draws overflowed and were clamped to f64::MAX");
    }
    let mut csv = Csv::create(out, "discrete.csv", &["replicate", "n", "T", "T_scaled"])?;
    for (r, (t, _)) in rows.iter().enumerate() {
        csv.line([r.to_string(), p.n.to_string(), fmt_f64(*t), fmt_f64(t / scale)])?;
    }
    let mut written = vec![csv.finish()?];
    if (p.tree || p.path) && config.replicates > 0 {
        let (grid, _) = grid_for(p, &dist, &mut split_stream(config.master_seed, 0))?;
        let field = passage_field(&grid);
        let axes = ["x", "y", "z"];
        if p.tree {
            ensure!(p.dims == 2, "the geodesic tree is written for two-dimensional grids only");
            let mut csv = Csv::create(out, "tree.csv", &["x", "y", "parent_x", "parent_y"])?;
            let unit = |c: usize| fmt_f64((c + 1) as f64 / p.n as f64);
            for (child, parent) in geodesic_tree(&field).edges() {
                csv.line([unit(child[0]), unit(child[1]), unit(parent[0]), unit(parent[1])])?;
            }
            written.push(csv.finish()?);
        }
        if p.path {
            let path = path_to_unit_cube(&optimal_path(&field), p.n)?;
            let mut header = vec!["order"];
            header.extend(&axes[..p.dims]);
            let mut csv = Csv::create(out, "path.csv", &header)?;
            for (i, v) in path.vertices().enumerate() {
                csv.line(std::iter::once(i.to_string()).chain(v.iter().map(|&c| fmt_f64(c))))?;
            }
            written.push(csv.finish()?);
        }
    }
    Ok(written)
}

/// Per-replicate `T_k` and the remainder diagnostic `U_k` for each `k`; the
/// selected chain of replicate 0 at the largest `k`.
pub fn run_continuum(config: &RunConfig, p: &ContinuumParams, out: &Path) -> Result<Vec<PathBuf>> {
    ensure!(!p.k.is_empty(), "at least one k is required");
    ensure!(p.k.iter().all(|&k| k >= 1), "k must be positive");
    let k_max = *p.k.iter().max().expect("nonempty");
    let total = p.k_tail.max(k_max);
    sample_continuum(1, p.alpha, p.dims, &mut split_stream(config.master_seed, 0))?;
    let rows = map_replicates(config.master_seed, config.replicates, |_, rng| {
        let sample = sample_continuum(total, p.alpha, p.dims, rng).expect("validated above");
        let profile = if p.dims == 2 { Some(lis_profile(sample.points()).expect("planar")) } else { None };
        p.k.iter()
            .map(|&k| {
                let t = max_weight_chain(&sample.points().prefix(k)).total;
                let u = profile
                    .as_ref()
                    .map_or(f64::NAN, |pr| remainder_bound(sample.points().weights(), pr, k));
                (k, t, u)
            })
            .collect::<Vec<_>>()
    });
    let mut csv = Csv::create(out, "continuum.csv", &["replicate", "k", "T_k", "U_k"])?;
    for (r, row) in rows.iter().enumerate() {
        for &(k, t, u) in row {
            csv.line([r.to_string(), k.to_string(), fmt_f64(t), fmt_f64(u)])?;
        }
    }
    let mut written = vec![csv.finish()?];
    if config.replicates > 0 {
        let sample = sample_continuum(total, p.alpha, p.dims, &mut split_stream(config.master_seed, 0))?;
        let set = sample.points().prefix(k_max);
        let chain = max_weight_chain(&set);
        let mut header = vec!["order", "index", "weight"];
        header.extend(&["x", "y", "z", "w"][..p.dims.min(4)]);
        let mut csv = Csv::create(out, "chain.csv", &header)?;
        let mut picked: Vec<usize> = chain.indices.clone();
        picked.sort_by(|&a, &b| {
            let (la, lb) = (set.location(a), set.location(b));
            la.iter().zip(lb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        for (order, &i) in picked.iter().enumerate() {
            let cells = [order.to_string(), i.to_string(), fmt_f64(set.weight(i))];
            csv.line(cells.into_iter().chain(set.location(i).iter().take(4).map(|&c| fmt_f64(c))))?;
        }
        written.push(csv.finish()?);
    }
    Ok(written)
}

fn symmetric_grid(tau: f64, points: usize) -> Vec<f64> {
    if points <= 1 || tau == 0.0 {
        return vec![0.0];
    }
    (0..points)
        .map(|i| (-tau + 2.0 * tau * i as f64 / (points - 1) as f64).clamp(-tau, tau))
        .collect()
}

/// Per-replicate traces `H_u` on a `u` grid and samples of `Theta` on a grid.
pub fn run_airy(config: &RunConfig, p: &AiryParams, out: &Path) -> Result<Vec<PathBuf>> {
    ensure!(p.u_points >= 1, "u_points must be positive");
    let z_min = match p.z_min {
        Some(z) => z,
        None => z_min_for_budget(p.budget, p.alpha)?,
    };
    let u_grid = symmetric_grid(p.tau, p.u_points);
    let t_grid = symmetric_grid(p.tau, p.theta_points.max(1));
    let thetas: Vec<(f64, f64)> = t_grid.iter().flat_map(|&u| t_grid.iter().map(move |&v| (u, v))).collect();
    airy_measure(p.tau, &u_grid, z_min, p.alpha, &mut split_stream(config.master_seed, 0))?;
    let rows = map_replicates(config.master_seed, config.replicates, |_, rng| {
        let prm = airy_measure(p.tau, &u_grid, z_min, p.alpha, rng).expect("validated above");
        let h = airy_values(&prm, &u_grid).expect("inside the box");
        // the box is [0, e^tau]^2, so Theta is defined wherever both e^u, e^v fit
        let th = theta_at(&prm, &thetas).expect("inside the box");
        (h, th)
    });
    let mut airy = Csv::create(out, "airy.csv", &["replicate", "u", "H"])?;
    let mut theta = Csv::create(out, "theta.csv", &["replicate", "u", "v", "Theta"])?;
    for (r, (h, th)) in rows.iter().enumerate() {
        for (u, v) in u_grid.iter().zip(h) {
            airy.line([r.to_string(), fmt_f64(*u), fmt_f64(*v)])?;
        }
        for ((u, v), t) in thetas.iter().zip(th) {
            theta.line([r.to_string(), fmt_f64(*u), fmt_f64(*v), fmt_f64(*t)])?;
        }
    }
    Ok(vec![airy.finish()?, theta.finish()?])
}

/// The path of replicate 0, per-replicate evaluations of `G` and coarse
/// local exponents, and the analytic spectrum table.
pub fn run_greedy(config: &RunConfig, p: &GreedyParams, out: &Path) -> Result<Vec<PathBuf>> {
    greedy_path(p.eps, p.dims, &mut split_stream(config.master_seed, 0))?;
    let plane = p.dims == 2;
    if plane {
        ensure!(p.r > 0.0 && p.r < 0.25, "r must lie in (0, 1/4)");
        ensure!(p.eps <= p.r / 16.0, "coarse exponents need eps <= r/16");
    }
    let axes = ["x", "y", "z", "w"];
    ensure!(p.dims <= axes.len(), "at most {} dimensions are written", axes.len());
    let mut written = Vec::new();
    if config.replicates > 0 {
        let path = greedy_path(p.eps, p.dims, &mut split_stream(config.master_seed, 0))?;
        let mut header = vec!["order"];
        header.extend(&axes[..p.dims]);
        let mut csv = Csv::create(out, "greedy_path.csv", &header)?;
        for (i, v) in path.path().vertices().enumerate() {
            csv.line(std::iter::once(i.to_string()).chain(v.iter().map(|&c| fmt_f64(c))))?;
        }
        written.push(csv.finish()?);
    }
    if plane {
        let xs: Vec<f64> = (0..p.g_points)
            .map(|i| if p.g_points == 1 { 0.5 } else { i as f64 / (p.g_points - 1) as f64 })
            .collect();
        let rows = map_replicates(config.master_seed, config.replicates, |_, rng| {
            let path = greedy_path(p.eps, 2, rng).expect("validated above");
            let g: Vec<f64> = xs.iter().map(|&x| measure_cdf(&path, x).expect("x in [0,1]")).collect();
            let e = coarse_local_dimensions(&path, p.r, p.r_points).expect("validated above");
            (path.len(), g, e)
        });
        let mut g_csv = Csv::create(out, "greedy_cdf.csv", &["replicate", "x", "G"])?;
        let mut e_csv = Csv::create(out, "exponents.csv", &["replicate", "r", "x", "a"])?;
        let mut n_csv = Csv::create(out, "greedy_vertices.csv", &["replicate", "eps", "vertices"])?;
        for (r, (len, g, e)) in rows.iter().enumerate() {
            n_csv.line([r.to_string(), fmt_f64(p.eps), len.to_string()])?;
            for (x, v) in xs.iter().zip(g) {
                g_csv.line([r.to_string(), fmt_f64(*x), fmt_f64(*v)])?;
            }
            for (x, a) in e {
                e_csv.line([r.to_string(), fmt_f64(p.r), fmt_f64(*x), fmt_f64(*a)])?;
            }
        }
        written.extend([g_csv.finish()?, e_csv.finish()?, n_csv.finish()?]);
        let mut s_csv = Csv::create(out, "spectrum.csv", &["a", "f", "status"])?;
        let count = p.spectrum_points.max(2);
        for i in 0..count {
            let s = spectrum(6.0 * i as f64 / (count - 1) as f64)?;
            s_csv.line([fmt_f64(s.a), fmt_f64(s.f), s.status.as_str().to_string()])?;
        }
        written.push(s_csv.finish()?);
    }
    Ok(written)
}

/// Per-replicate `L(n, units)` with its rescaling and sandwich bounds, and
/// the tail curve of the range-sup weights pooled over replicates.
pub fn run_stable(config: &RunConfig, p: &StableParams, out: &Path) -> Result<Vec<PathBuf>> {
    let spec = match p.delta {
        Some(d) => StableSpec::new(p.alpha, p.c_plus, p.c_minus, d)?,
        None => StableSpec::with_jump_rate(p.alpha, p.c_plus, p.c_minus, p.jump_rate)?,
    };
    ensure!(p.n >= 1 && p.m >= 1, "n and m must be positive");
    let units = p.units.unwrap_or(p.n);
    ensure!(units >= 1, "units must be positive");
    let top_k = p.top_k.unwrap_or(p.n);
    let scale = spec.rescaling(p.n);
    let rows = map_replicates(config.master_seed, config.replicates, |_, rng| {
        let grid = simulate_processes_over(&spec, p.n, units, p.m, rng).expect("validated above");
        let l = directed_l(&grid);
        (l, lower_bound(&grid, top_k), upper_bound(&grid), range_sup_weights(&grid))
    });
    let mut csv = Csv::create(out, "stable.csv", &["replicate", "n", "m", "L", "L_scaled", "L_lower", "L_upper"])?;
    for (r, (l, lo, up, _)) in rows.iter().enumerate() {
        csv.line([
            r.to_string(),
            p.n.to_string(),
            p.m.to_string(),
            fmt_f64(*l),
            fmt_f64(scale * l),
            fmt_f64(*lo),
            fmt_f64(*up),
        ])?;
    }
    let mut written = vec![csv.finish()?];
    let pooled: Vec<f64> = rows.iter().flat_map(|r| r.3.iter().copied()).collect();
    let mut tail = Csv::create(out, "tail.csv", &["x", "tail"])?;
    if !pooled.is_empty() {
        let sample = EmpiricalSample::new(pooled.clone())?;
        let lo = sample.quantile(0.5)?.max(spec.delta);
        let hi = sample.values()[sample.len() - 1];
        if hi > lo && p.tail_points >= 2 {
            let xs: Vec<f64> = (0..p.tail_points)
                .map(|i| lo * (hi / lo).powf(i as f64 / (p.tail_points - 1) as f64))
                .collect();
            for (x, v) in tail_estimate(&pooled, spec.alpha, &xs)? {
                tail.line([fmt_f64(x), fmt_f64(v)])?;
            }
        }
    }
    written.push(tail.finish()?);
    Ok(written)
}

/// KS distance between the rescaled lattice time and the continuum
/// reference along a ladder of sides.
pub fn run_converge(config: &RunConfig, p: &ConvergeParams, out: &Path) -> Result<Vec<PathBuf>> {
    if config.replicates == 0 {
        bail!("the convergence ladder needs at least one replicate");
    }
    let continuum_seed = p.continuum_seed.unwrap_or(config.master_seed.wrapping_add(1));
    let rows = convergence_ladder(p.alpha, &p.ns, config.replicates, p.k, config.master_seed, continuum_seed)?;
    let mut csv = Csv::create(out, "converge.csv", &["n", "ks", "reps"])?;
    for r in rows {
        csv.line([r.n.to_string(), fmt_f64(r.ks), r.reps.to_string()])?;
    }
    Ok(vec![csv.finish()?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 8.0, 1e-300, f64::MAX, -2.5e17] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_f64(8.0), "8.0000000000000000e0");
    }

    #[test]
    fn manifest_round_trips() {
        let config = RunConfig {
            master_seed: 9,
            replicates: 3,
            experiment: Experiment::Stable(StableParams {
                alpha: 1.5,
                c_plus: 1.0,
                c_minus: 0.0,
                delta: None,
                jump_rate: 20.0,
                n: 4,
                units: None,
                m: 10,
                top_k: None,
                tail_points: 5,
            }),
        };
        let m = Manifest {
            version: VERSION.into(),
            master_seed: 9,
            config: config.clone(),
        };
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"command\":\"stable\""));
        assert!(text.contains("\"c_minus\":0.0"));
        let back: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.config, config);
    }

    #[test]
    fn symmetric_grid_shapes() {
        assert_eq!(symmetric_grid(0.0, 9), vec![0.0]);
        assert_eq!(symmetric_grid(1.0, 3), vec![-1.0, 0.0, 1.0]);
    }
}
