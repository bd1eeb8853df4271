//! Maximum-weight chains of points in `[0,1]^d`.
//!
//! Two points are compatible when one is below-left of the other
//! (coordinatewise `<=`). A chain is a pairwise compatible subset, and the
//! continuum passage time is the largest total weight of a chain.
//!
//! Among chains of equal total, the solvers return the lexicographically
//! first one: the chain that contains the smallest index on which two optima
//! differ. Weights are nonincreasing in index, so this favours heavier points.

use std::cmp::Ordering;

use crate::distributions::LimitWeightSequence;
use crate::error::{domain, Error, Result};
use crate::stats::MonotonePath;

/// Largest point count accepted by [`brute_force_chain`].
pub const BRUTE_FORCE_MAX_POINTS: usize = 20;

/// Locations with nonincreasing weights; point `i` has rank `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointSet {
    dims: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedPointSet {
    pub fn new(dims: usize, locations: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        let mut coords = Vec::with_capacity(dims * locations.len());
        for loc in locations {
            if loc.len() != dims {
                return Err(Error::DimensionMismatch(dims, loc.len()));
            }
            coords.extend_from_slice(loc);
        }
        Self::from_flat(dims, coords, weights.to_vec())
    }

    /// Row-major coordinates, `dims` per point.
    pub fn from_flat(dims: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dims < 2 {
            return Err(Error::Unsupported {
                dims,
                operation: "WeightedPointSet",
            });
        }
        if coords.len() != dims * weights.len() {
            return Err(Error::Invalid(format!(
                "{} coordinates for {} points in dimension {dims}",
                coords.len(),
                weights.len()
            )));
        }
        if let Some(&c) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(domain("coordinate", c, "[0, 1]"));
        }
        if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(domain("weight", w, "finite and >= 0"));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("weights must be nonincreasing in index".into()));
        }
        let set = Self { dims, coords, weights };
        let mut order: Vec<usize> = (0..set.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(set.location(a), set.location(b)));
        if order.windows(2).any(|w| set.location(w[0]) == set.location(w[1])) {
            return Err(Error::Invalid("duplicate locations".into()));
        }
        Ok(set)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn location(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dims..(i + 1) * self.dims]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The `k` heaviest points.
    pub fn prefix(&self, k: usize) -> Self {
        let k = k.min(self.len());
        Self {
            dims: self.dims,
            coords: self.coords[..k * self.dims].to_vec(),
            weights: self.weights[..k].to_vec(),
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn dominated(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `y ~ y2`: one point is coordinatewise below the other.
pub fn is_compatible(y: &[f64], y2: &[f64]) -> Result<bool> {
    if y.len() != y2.len() {
        return Err(Error::DimensionMismatch(y.len(), y2.len()));
    }
    Ok(dominated(y, y2) || dominated(y2, y))
}

/// A chain: selected indices (ascending) and their total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    pub indices: Vec<usize>,
    pub total: f64,
}

impl ChainResult {
    /// Sorts `indices` and sums their weights in ascending index order.
    fn from_indices(mut indices: Vec<usize>, weights: &[f64]) -> Self {
        indices.sort_unstable();
        let total = indices.iter().fold(0.0, |acc, &i| acc + weights[i]);
        Self { indices, total }
    }
}

/// True when `a` precedes `b` lexicographically as indicator vectors.
fn lex_first(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => return true,
            Ordering::Greater => return false,
        }
    }
    i < a.len()
}

/// Best chain ending at each point, linked through predecessors.
struct ChainDp<'a> {
    weights: &'a [f64],
    value: Vec<f64>,
    pred: Vec<Option<usize>>,
}

impl ChainDp<'_> {
    fn chain(&self, end: usize) -> Vec<usize> {
        let mut out = vec![end];
        let mut cur = end;
        while let Some(p) = self.pred[cur] {
            out.push(p);
            cur = p;
        }
        out.sort_unstable();
        out
    }

    /// Whether the chain ending at `a` beats the one ending at `b`.
    fn better(&self, a: usize, b: usize) -> bool {
        match self.value[a].total_cmp(&self.value[b]) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => a != b && lex_first(&self.chain(a), &self.chain(b)),
        }
    }

    fn pick(&self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if self.better(y, x) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn finish(&self) -> ChainResult {
        let best = (0..self.value.len()).fold(None, |acc, i| self.pick(acc, Some(i)));
        match best {
            Some(end) => ChainResult::from_indices(self.chain(end), self.weights),
            None => ChainResult {
                indices: Vec::new(),
                total: 0.0,
            },
        }
    }
}

/// Dense ranks of `values` (equal values share a rank), starting at 1.
fn dense_ranks(values: &[f64]) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0; values.len()];
    let mut r = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 || values[order[pos - 1]] != values[i] {
            r += 1;
        }
        ranks[i] = r;
    }
    (ranks, r)
}

fn solve_plane(coords: &[f64], weights: &[f64]) -> ChainResult {
    let k = weights.len();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..k).map(|i| (coords[2 * i], coords[2 * i + 1])).unzip();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(ys[a].total_cmp(&ys[b])).then(a.cmp(&b)));
    let (rank, max_rank) = dense_ranks(&ys);

    let mut dp = ChainDp {
        weights,
        value: vec![0.0; k],
        pred: vec![None; k],
    };
    // Fenwick tree of prefix-best chain ends over y-ranks
    let mut tree: Vec<Option<usize>> = vec![None; max_rank + 1];
    for &p in &order {
        let mut best = None;
        let mut r = rank[p];
        while r > 0 {
            best = dp.pick(best, tree[r]);
            r &= r - 1;
        }
        dp.pred[p] = best;
        dp.value[p] = weights[p] + best.map_or(0.0, |b| dp.value[b]);
        let mut r = rank[p];
        while r <= max_rank {
            tree[r] = dp.pick(tree[r], Some(p));
            r += r & r.wrapping_neg();
        }
    }
    dp.finish()
}

fn solve_general(dims: usize, coords: &[f64], weights: &[f64]) -> ChainResult {
    let k = weights.len();
    let loc = |i: usize| &coords[i * dims..(i + 1) * dims];
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| lex_cmp(loc(a), loc(b)).then(a.cmp(&b)));
    let mut dp = ChainDp {
        weights,
        value: vec![0.0; k],
        pred: vec![None; k],
    };
    for (pos, &p) in order.iter().enumerate() {
        let mut best = None;
        for &q in &order[..pos] {
            if dominated(loc(q), loc(p)) {
                best = dp.pick(best, Some(q));
            }
        }
        dp.pred[p] = best;
        dp.value[p] = weights[p] + best.map_or(0.0, |b| dp.value[b]);
    }
    dp.finish()
}

/// Exact maximum-weight chain.
///
/// In the plane this sorts by `(x, y)` and runs a weighted longest
/// nondecreasing subsequence on `y` with a Fenwick tree, `O(k log k)`.
/// In higher dimension it is an `O(k^2)` DP over the dominance order.
pub fn max_weight_chain(set: &WeightedPointSet) -> ChainResult {
    solve_chain(set.dims, &set.coords, &set.weights)
}

pub(crate) fn solve_chain(dims: usize, coords: &[f64], weights: &[f64]) -> ChainResult {
    if dims == 2 {
        solve_plane(coords, weights)
    } else {
        solve_general(dims, coords, weights)
    }
}

/// Value-only planar solver for points already sorted by `(x, y)`, with
/// `ranks` the dense y-ranks (1-based, at most `max_rank`).
pub(crate) fn chain_value_sorted(ranks: &[usize], weights: &[f64], max_rank: usize) -> f64 {
    let mut tree = vec![0.0f64; max_rank + 1];
    let mut best = 0.0f64;
    for (&rk, &w) in ranks.iter().zip(weights) {
        let mut q = 0.0f64;
        let mut r = rk;
        while r > 0 {
            q = q.max(tree[r]);
            r &= r - 1;
        }
        let v = w + q;
        best = best.max(v);
        let mut r = rk;
        while r <= max_rank {
            tree[r] = tree[r].max(v);
            r += r & r.wrapping_neg();
        }
    }
    best
}

/// Exhaustive optimum over all `2^k` subsets (`k <= 20`), with the same
/// lexicographic tie rule as [`max_weight_chain`].
pub fn brute_force_chain(set: &WeightedPointSet) -> Result<ChainResult> {
    let k = set.len();
    if k > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::TooLarge {
            size: k,
            limit: BRUTE_FORCE_MAX_POINTS,
        });
    }
    let compat: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| dominated(set.location(i), set.location(j)) || dominated(set.location(j), set.location(i)))
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let size = 1usize << k;
    let mut valid = vec![false; size];
    let mut total = vec![0.0f64; size];
    valid[0] = true;
    let mut best = 0usize;
    for mask in 1..size {
        let high = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask ^ (1 << high);
        if !valid[rest] || (compat[high as usize] as usize & rest) != rest {
            continue;
        }
        valid[mask] = true;
        // ascending index order, matching ChainResult::from_indices
        total[mask] = total[rest] + set.weights[high as usize];
        let wins = match total[mask].total_cmp(&total[best]) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let diff = mask ^ best;
                mask & diff & diff.wrapping_neg() != 0
            }
        };
        if wins {
            best = mask;
        }
    }
    let indices: Vec<usize> = (0..k).filter(|&i| best >> i & 1 == 1).collect();
    Ok(ChainResult {
        indices,
        total: total[best],
    })
}

/// `L_i`: the largest chain among the first `i` points (unit weights), for
/// `i = 1..=k`.
///
/// Points arrive in rank order at arbitrary locations, so the profile is
/// computed offline: for each chain length `l` we find the smallest prefix
/// containing a chain of that length by a level-by-level Fenwick sweep,
/// `O(L_k k log k)` in total.
pub fn lis_profile(set: &WeightedPointSet) -> Result<Vec<usize>> {
    if set.dims != 2 {
        return Err(Error::Unsupported {
            dims: set.dims,
            operation: "lis_profile",
        });
    }
    let k = set.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| lex_cmp(set.location(a), set.location(b)));
    let ys: Vec<f64> = (0..k).map(|i| set.location(i)[1]).collect();
    let (rank, max_rank) = dense_ranks(&ys);

    // level[p]: smallest prefix length holding a chain of the current length ending at p
    let mut level: Vec<usize> = (0..k).map(|p| p + 1).collect();
    let mut thresholds = vec![1usize];
    loop {
        let mut next = vec![usize::MAX; k];
        let mut tree = vec![usize::MAX; max_rank + 1];
        for &p in &order {
            let mut best = usize::MAX;
            let mut r = rank[p];
            while r > 0 {
                best = best.min(tree[r]);
                r &= r - 1;
            }
            if best != usize::MAX {
                next[p] = best.max(p + 1);
            }
            let mut r = rank[p];
            while r <= max_rank {
                tree[r] = tree[r].min(level[p]);
                r += r & r.wrapping_neg();
            }
        }
        match next.iter().min() {
            Some(&t) if t != usize::MAX => thresholds.push(t),
            _ => break,
        }
        level = next;
    }
    let mut profile = Vec::with_capacity(k);
    let mut l = 0;
    for i in 1..=k {
        while l < thresholds.len() && thresholds[l] <= i {
            l += 1;
        }
        profile.push(l);
    }
    Ok(profile)
}

/// `U_k = sum_{i=k+1}^{K} L_i (M_i - M_{i+1})` with `M_{K+1} = 0`, where
/// `K` is the shorter of the two inputs. Bounds the weight any chain can
/// collect from points of rank `k+1..=K`.
pub fn remainder_bound(weights: &[f64], profile: &[usize], cutoff: usize) -> f64 {
    let big_k = weights.len().min(profile.len());
    (cutoff..big_k)
        .map(|i| {
            let next = if i + 1 < big_k { weights[i + 1] } else { 0.0 };
            profile[i] as f64 * (weights[i] - next)
        })
        .sum()
}

/// [`remainder_bound`] taking the weight sequence directly.
pub fn remainder_bound_for(weights: &LimitWeightSequence, profile: &[usize], cutoff: usize) -> f64 {
    remainder_bound(weights.weights(), profile, cutoff)
}

/// Selected points in increasing order, framed by `(0,0)` and `(1,1)`.
pub fn chain_closure_path(result: &ChainResult, set: &WeightedPointSet) -> Result<MonotonePath> {
    if set.dims != 2 {
        return Err(Error::Unsupported {
            dims: set.dims,
            operation: "chain_closure_path",
        });
    }
    let mut pts: Vec<&[f64]> = result.indices.iter().map(|&i| set.location(i)).collect();
    pts.sort_by(|a, b| lex_cmp(a, b));
    let mut coords = vec![0.0, 0.0];
    for p in pts {
        coords.extend_from_slice(p);
    }
    coords.extend_from_slice(&[1.0, 1.0]);
    MonotonePath::from_flat(2, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::limit_weight_sequence;
    use crate::stats::{split_stream, Stream};
    use proptest::prelude::*;
    use rand::Rng;

    fn random_set(rng: &mut Stream, k: usize, dims: usize) -> WeightedPointSet {
        let seq = limit_weight_sequence(k.max(1), 1.0, rng).unwrap();
        let coords: Vec<f64> = (0..k * dims).map(|_| rng.random()).collect();
        WeightedPointSet::from_flat(dims, coords, seq.weights()[..k].to_vec()).unwrap()
    }

    #[test]
    fn compatibility() {
        assert!(is_compatible(&[0.1, 0.2], &[0.3, 0.9]).unwrap());
        assert!(!is_compatible(&[0.1, 0.9], &[0.3, 0.2]).unwrap());
        assert!(is_compatible(&[0.4, 0.4], &[0.4, 0.4]).unwrap());
        assert!(is_compatible(&[0.1, 0.5], &[0.1, 0.2]).unwrap());
        assert_eq!(is_compatible(&[0.1], &[0.1, 0.2]), Err(Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn three_point_example() {
        // ranks by weight: (0.5,0.1) w=6, (0.2,0.3) w=5, (0.6,0.7) w=4
        let set = WeightedPointSet::new(2, &[vec![0.5, 0.1], vec![0.2, 0.3], vec![0.6, 0.7]], &[6.0, 5.0, 4.0]).unwrap();
        let oracle = brute_force_chain(&set).unwrap();
        assert_eq!(oracle.indices, vec![0, 2]);
        assert_eq!(oracle.total, 10.0);
        assert_eq!(max_weight_chain(&set), oracle);
    }

    #[test]
    fn trivial_sets() {
        let empty = WeightedPointSet::new(2, &[], &[]).unwrap();
        assert_eq!(max_weight_chain(&empty).total, 0.0);
        assert_eq!(brute_force_chain(&empty).unwrap().total, 0.0);

        let one = WeightedPointSet::new(2, &[vec![0.3, 0.3]], &[2.0]).unwrap();
        assert_eq!(brute_force_chain(&one).unwrap().indices, vec![0]);

        let two = WeightedPointSet::new(2, &[vec![0.1, 0.9], vec![0.9, 0.1]], &[2.0, 1.0]).unwrap();
        assert_eq!(brute_force_chain(&two).unwrap().indices, vec![0]);
        assert_eq!(max_weight_chain(&two).indices, vec![0]);

        let stairs: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64 / 8.0, (i as f64 / 8.0).sqrt()]).rev().collect();
        let w: Vec<f64> = (0..8).map(|i| 8.0 - i as f64).collect();
        let s = WeightedPointSet::new(2, &stairs, &w).unwrap();
        let r = max_weight_chain(&s);
        assert_eq!(r.indices, (0..8).collect::<Vec<_>>());
        assert_eq!(r.total, w.iter().sum::<f64>());
    }

    #[test]
    fn shared_coordinates_are_compatible() {
        // lattice-style points sharing a column
        let set = WeightedPointSet::new(2, &[vec![0.5, 0.5], vec![0.5, 1.0], vec![0.5, 0.25], vec![1.0, 0.5]], &[4.0, 3.0, 2.0, 1.0]).unwrap();
        let r = max_weight_chain(&set);
        assert_eq!(r, brute_force_chain(&set).unwrap());
        assert_eq!(r.indices, vec![0, 1, 2]);
    }

    #[test]
    fn ties_take_the_lexicographically_first_chain() {
        // {0} and {1,2} both total 2; {0} wins because it holds index 0
        let set = WeightedPointSet::new(2, &[vec![0.9, 0.1], vec![0.1, 0.2], vec![0.2, 0.9]], &[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(brute_force_chain(&set).unwrap().indices, vec![0]);
        assert_eq!(max_weight_chain(&set).indices, vec![0]);
        let set3 = WeightedPointSet::new(3, &[vec![0.9, 0.1, 0.5], vec![0.1, 0.2, 0.1], vec![0.2, 0.9, 0.2]], &[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(max_weight_chain(&set3).indices, vec![0]);
        // equal weights: {1,2} and {0,3}-style tie resolved toward index 0
        let set = WeightedPointSet::new(2, &[vec![0.6, 0.1], vec![0.1, 0.3], vec![0.2, 0.4], vec![0.7, 0.2]], &[1.0; 4]).unwrap();
        let b = brute_force_chain(&set).unwrap();
        assert_eq!(b.indices, vec![0, 3]);
        assert_eq!(max_weight_chain(&set), b);
    }

    #[test]
    fn set_validation() {
        assert!(WeightedPointSet::new(2, &[vec![0.1, 0.2], vec![0.1, 0.2]], &[2.0, 1.0]).is_err());
        assert!(WeightedPointSet::new(2, &[vec![0.1, 0.2], vec![0.3, 0.2]], &[1.0, 2.0]).is_err());
        assert!(WeightedPointSet::new(2, &[vec![1.1, 0.2]], &[1.0]).is_err());
        assert!(WeightedPointSet::new(1, &[vec![0.1]], &[1.0]).is_err());
        let big = random_set(&mut split_stream(0, 0), 21, 2);
        assert!(matches!(brute_force_chain(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn oracle_equivalence() {
        let mut rng = split_stream(1, 0);
        for t in 0..400 {
            let k = 5 + t % 11;
            let dims = 2 + t % 2;
            let set = random_set(&mut rng, k, dims);
            assert_eq!(max_weight_chain(&set), brute_force_chain(&set).unwrap(), "k={k} d={dims}");
        }
    }

    #[test]
    fn closure_paths() {
        let set = random_set(&mut split_stream(2, 0), 30, 2);
        let empty = ChainResult {
            indices: vec![],
            total: 0.0,
        };
        let p = chain_closure_path(&empty, &set).unwrap();
        assert_eq!(p.len(), 2);
        let single = ChainResult {
            indices: vec![3],
            total: set.weight(3),
        };
        let p = chain_closure_path(&single, &set).unwrap();
        assert_eq!(p.vertex(1), set.location(3));
        let best = max_weight_chain(&set);
        let p = chain_closure_path(&best, &set).unwrap();
        assert_eq!(p.len(), best.indices.len() + 2);
        let set3 = random_set(&mut split_stream(2, 1), 5, 3);
        assert!(chain_closure_path(&empty, &set3).is_err());
    }

    #[test]
    fn lis_profile_small_and_brute() {
        let mut rng = split_stream(3, 0);
        for _ in 0..100 {
            let set = random_set(&mut rng, 12, 2);
            let prof = lis_profile(&set).unwrap();
            assert_eq!(prof[0], 1);
            for i in 1..=12 {
                let unit = WeightedPointSet::from_flat(2, set.coords[..2 * i].to_vec(), vec![1.0; i]).unwrap();
                let l = brute_force_chain(&unit).unwrap().indices.len();
                assert_eq!(prof[i - 1], l);
            }
            assert!(prof.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1));
        }
        let set3 = random_set(&mut rng, 4, 3);
        assert!(lis_profile(&set3).is_err());
    }

    #[test]
    fn remainder_examples() {
        let m = [1.0, 0.5, 1.0 / 3.0];
        let l = [1, 2, 2];
        assert!((remainder_bound(&m, &l, 1) - 1.0).abs() < 1e-15);
        assert_eq!(remainder_bound(&m, &l, 3), 0.0);
        assert_eq!(remainder_bound(&m, &l, 7), 0.0);
        let u: Vec<f64> = (0..=3).map(|k| remainder_bound(&m, &l, k)).collect();
        assert!(u.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn remainder_bounds_truncation_increment() {
        let mut rng = split_stream(4, 0);
        for _ in 0..50 {
            let set = random_set(&mut rng, 300, 2);
            let prof = lis_profile(&set).unwrap();
            let full = max_weight_chain(&set).total;
            let mut prev = 0.0;
            for k in [1, 5, 20, 100, 200] {
                let tk = max_weight_chain(&set.prefix(k)).total;
                assert!(tk >= prev);
                prev = tk;
                let u = remainder_bound(set.weights(), &prof, k);
                assert!(full - tk <= u * (1.0 + 1e-12), "k={k}: {} > {u}", full - tk);
            }
        }
    }

    proptest! {
        #[test]
        fn scaling_equivariance(seed in any::<u64>(), k in 1usize..60, c in 0.01f64..100.0) {
            let set = random_set(&mut split_stream(seed, 0), k, 2);
            let r = max_weight_chain(&set);
            let scaled = WeightedPointSet::from_flat(2, set.coords.clone(), set.weights.iter().map(|w| w * c).collect()).unwrap();
            let s = max_weight_chain(&scaled);
            prop_assert_eq!(&s.indices, &r.indices);
            prop_assert!((s.total - c * r.total).abs() <= 1e-12 * s.total);
        }

        #[test]
        fn permutation_invariance(seed in any::<u64>(), k in 2usize..40) {
            // reorder the presentation of equal-rank (equal-weight) points
            let mut rng = split_stream(seed, 0);
            let coords: Vec<f64> = (0..2 * k).map(|_| rng.random()).collect();
            let weights: Vec<f64> = (0..k).map(|i| ((k - i) / 3) as f64 + 1.0).collect();
            let set = WeightedPointSet::from_flat(2, coords.clone(), weights.clone()).unwrap();
            let mut perm: Vec<usize> = (0..k).collect();
            perm.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then((a * 7919 % 13).cmp(&(b * 7919 % 13))));
            let pc: Vec<f64> = perm.iter().flat_map(|&i| [coords[2 * i], coords[2 * i + 1]]).collect();
            let pw: Vec<f64> = perm.iter().map(|&i| weights[i]).collect();
            let other = WeightedPointSet::from_flat(2, pc, pw).unwrap();
            prop_assert_eq!(max_weight_chain(&set).total, max_weight_chain(&other).total);
        }

        #[test]
        fn selected_points_are_pairwise_compatible(seed in any::<u64>(), k in 0usize..80, dims in 2usize..4) {
            let set = random_set(&mut split_stream(seed, 0), k, dims);
            let r = max_weight_chain(&set);
            for (a, &i) in r.indices.iter().enumerate() {
                for &j in &r.indices[a + 1..] {
                    prop_assert!(is_compatible(set.location(i), set.location(j)).unwrap());
                }
            }
            let sum = r.indices.iter().fold(0.0, |acc, &i| acc + set.weight(i));
            prop_assert_eq!(sum, r.total);
        }
    }

    #[test]
    fn value_only_solver_agrees() {
        let mut rng = split_stream(5, 0);
        for _ in 0..50 {
            let set = random_set(&mut rng, 200, 2);
            let mut order: Vec<usize> = (0..set.len()).collect();
            order.sort_by(|&a, &b| lex_cmp(set.location(a), set.location(b)));
            let ys: Vec<f64> = order.iter().map(|&i| set.location(i)[1]).collect();
            let ws: Vec<f64> = order.iter().map(|&i| set.weight(i)).collect();
            let (ranks, max_rank) = dense_ranks(&ys);
            let v = chain_value_sorted(&ranks, &ws, max_rank);
            assert!((v - max_weight_chain(&set).total).abs() <= 1e-12 * v);
        }
    }
}
