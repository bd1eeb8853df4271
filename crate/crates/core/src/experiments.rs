//! Replicated experiments shared by the command-line driver and the
//! acceptance checks. Replicate `r` of every experiment reads
//! `split_stream(seed, r)` (offset per ladder rung where noted), so results do
//! not depend on the number of worker threads.

use crate::continuum::{sample_continuum, truncated_t};
use crate::distributions::WeightDistribution;
use crate::error::Result;
use crate::exec::{map_indexed, map_replicates};
use crate::lattice::{passage_time, LatticeGrid};
use crate::stable::{directed_l, lower_bound, simulate_processes_over, upper_bound, StableSpec};
use crate::stats::{ks_statistic, split_stream};

/// One replicate of the discrete model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteSample {
    /// `T^(n)`.
    pub t: f64,
    /// `T^(n) / a_{n^d}`.
    pub t_scaled: f64,
    /// Draws that overflowed and were clamped.
    pub clamped: usize,
}

/// `reps` independent passage times on a `side^dims` grid.
pub fn discrete_samples(
    dist: &WeightDistribution,
    dims: usize,
    side: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<DiscreteSample>> {
    let scale = dist.scale_constant((side as u64).pow(dims as u32))?;
    LatticeGrid::random(dims, side, dist, &mut split_stream(seed, 0))?;
    Ok(map_replicates(seed, reps, |_, rng| {
        let (grid, clamped) = LatticeGrid::random(dims, side, dist, rng).expect("validated above");
        let t = passage_time(&grid);
        DiscreteSample {
            t,
            t_scaled: t / scale,
            clamped,
        }
    }))
}

/// `reps` independent values of the truncated continuum time `T_k`.
pub fn continuum_samples(alpha: f64, k: usize, dims: usize, reps: usize, seed: u64) -> Result<Vec<f64>> {
    sample_continuum(k, alpha, dims, &mut split_stream(seed, 0))?;
    Ok(map_replicates(seed, reps, |_, rng| {
        truncated_t(&sample_continuum(k, alpha, dims, rng).expect("validated above")).0
    }))
}

/// A row of the convergence ladder: KS distance at side `n` from `reps`
/// samples of each model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRow {
    pub n: usize,
    pub ks: f64,
    pub reps: usize,
}

/// KS distance between `T^(n) / a_{n^2}` (Pareto `alpha` weights) and the
/// continuum `T_k`, along a ladder of sides `ns`.
///
/// The continuum reference is drawn once from `continuum_seed`; rung `p` of
/// the ladder draws replicate `r` from stream `p * reps + r` of
/// `discrete_seed`.
pub fn convergence_ladder(
    alpha: f64,
    ns: &[usize],
    reps: usize,
    k: usize,
    discrete_seed: u64,
    continuum_seed: u64,
) -> Result<Vec<LadderRow>> {
    let dist = WeightDistribution::pareto(alpha)?;
    let reference = continuum_samples(alpha, k, 2, reps, continuum_seed)?;
    ns.iter()
        .enumerate()
        .map(|(p, &n)| {
            let scale = dist.scale_constant((n * n) as u64)?;
            LatticeGrid::random(2, n, &dist, &mut split_stream(discrete_seed, 0))?;
            let samples = map_indexed(reps, |r| {
                let mut rng = split_stream(discrete_seed, (p * reps + r) as u64);
                let (grid, _) = LatticeGrid::random(2, n, &dist, &mut rng).expect("validated above");
                passage_time(&grid) / scale
            });
            Ok(LadderRow {
                n,
                ks: ks_statistic(samples, reference.clone())?,
                reps,
            })
        })
        .collect()
}

/// One replicate of stable directed percolation with its sandwich bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableSample {
    pub l: f64,
    pub l_scaled: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `reps` replicates of `L(n, units)` on `m` steps per unit time; the lower
/// bound uses the `top_k` largest positive jumps.
pub fn stable_samples(
    spec: &StableSpec,
    n: usize,
    units: usize,
    m: usize,
    top_k: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<StableSample>> {
    StableSpec::new(spec.alpha, spec.c_plus, spec.c_minus, spec.delta)?;
    if n < 1 || units < 1 || m < 1 {
        return Err(crate::Error::Invalid("n, units and m must be positive".into()));
    }
    let scale = spec.rescaling(n);
    Ok(map_replicates(seed, reps, |_, rng| {
        let grid = simulate_processes_over(spec, n, units, m, rng).expect("validated above");
        let l = directed_l(&grid);
        StableSample {
            l,
            l_scaled: scale * l,
            lower: lower_bound(&grid, top_k),
            upper: upper_bound(&grid),
        }
    }))
}
