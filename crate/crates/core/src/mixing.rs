//! Total variation, long-run average distributions, Fourier diagnostics and
//! the search for near-uniform instantaneous distributions.
//!
//! Total variation follows the un-halved convention `Σ_s |P(s) - Q(s)|`
//! throughout; [`TvConvention::Half`] converts for reporting.

use num_complex::Complex64;

use crate::error::{invalid, QwalkError, Result};
use crate::fft::{GroupFft, Sign};
use crate::graphs::{Graph, Spectrum};
use crate::parallel::{chunked_vector_sum, map_indexed};
use crate::walk::{Distribution, Walk};

/// Negative probabilities down to this size are treated as rounding noise.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TvConvention {
    /// `Σ |P - Q|`, range [0, 2].
    #[default]
    Full,
    /// `½ Σ |P - Q|`, range [0, 1].
    Half,
}

impl TvConvention {
    pub fn apply(self, tv: f64) -> f64 {
        match self {
            TvConvention::Full => tv,
            TvConvention::Half => 0.5 * tv,
        }
    }
}

/// `Σ_s |P(s) - Q(s)|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return invalid(format!("length mismatch: {} vs {}", p.len(), q.len()));
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

pub fn tv_to_uniform(p: &[f64]) -> f64 {
    let u = 1.0 / p.len() as f64;
    p.iter().map(|x| (x - u).abs()).sum()
}

/// Long-run time average of the instantaneous distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageDistribution {
    pub probs: Vec<f64>,
    /// Ordered pairs `j != k` with `λ_j = λ_k`.
    pub collision_pair_count: usize,
}

impl AverageDistribution {
    pub fn tv_to_uniform(&self) -> f64 {
        tv_to_uniform(&self.probs)
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::from_raw(self.probs.clone())
    }
}

pub fn average_distribution(graph: &Graph) -> Result<AverageDistribution> {
    average_from_spectrum(&graph.spectrum())
}

/// `P̄(ℓ) = (1/N²) Σ_c |Σ_{a ∈ c} χ_a(ℓ)|²` over collision classes `c`.
///
/// Small classes contribute their pairwise differences to a histogram that
/// is transformed once; classes too large for pair enumeration are
/// transformed individually.
pub fn average_from_spectrum(spectrum: &Spectrum) -> Result<AverageDistribution> {
    let group = spectrum.group();
    let n = group.order();
    let collision_pair_count = spectrum.collision_pair_count();
    if spectrum.is_simple() {
        return Ok(AverageDistribution {
            probs: vec![1.0 / n as f64; n],
            collision_pair_count,
        });
    }
    let fft = GroupFft::new(group.factors());
    let log_n = (usize::BITS - n.leading_zeros()) as usize;
    let pair_budget = 4 * n * log_n.max(1);

    let mut diff_hist = vec![0.0; n];
    let mut direct = vec![0.0; n];
    let mut indicator = vec![Complex64::default(); n];
    let sub: Box<dyn Fn(usize, usize) -> usize> = if group.is_cyclic() {
        Box::new(move |a, b| (a + n - b) % n)
    } else {
        let g = group.clone();
        Box::new(move |a, b| g.sub(a, b))
    };
    for class in spectrum.collision_classes() {
        let size = class.len();
        if size == 1 {
            diff_hist[0] += 1.0;
        } else if size * size <= pair_budget {
            for &a in class {
                for &b in class {
                    diff_hist[sub(a, b)] += 1.0;
                }
            }
        } else {
            indicator.iter_mut().for_each(|z| *z = Complex64::default());
            for &a in class {
                indicator[a] = Complex64::new(1.0, 0.0);
            }
            fft.process(&mut indicator, Sign::Positive);
            for (acc, z) in direct.iter_mut().zip(&indicator) {
                *acc += z.norm_sqr();
            }
        }
    }
    let hist_part = fft.transform_real(&diff_hist, Sign::Positive);
    let scale = 1.0 / (n as f64 * n as f64);
    let raw: Vec<f64> = hist_part
        .iter()
        .zip(&direct)
        .map(|(h, d)| (h.re + d) * scale)
        .collect();
    Ok(AverageDistribution {
        probs: clamp_and_normalize(raw)?,
        collision_pair_count,
    })
}

fn clamp_and_normalize(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    for (i, p) in probs.iter_mut().enumerate() {
        if *p < -NEGATIVE_CLAMP {
            return Err(QwalkError::Internal(format!(
                "average probability at vertex {i} is {p}"
            )));
        }
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(probs)
}

fn check_horizon(t_end: f64, steps: usize) -> Result<()> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return invalid(format!("time horizon must be finite and positive, got {t_end}"));
    }
    if steps < 2 {
        return invalid(format!("need at least 2 integration steps, got {steps}"));
    }
    Ok(())
}

/// Composite trapezoidal estimate of `(1/T) ∫_0^T P_t dt` with `steps`
/// subintervals.
pub fn average_distribution_integrated(graph: &Graph, t_end: f64, steps: usize) -> Result<Distribution> {
    check_horizon(t_end, steps)?;
    let walk = Walk::new(graph);
    let h = t_end / steps as f64;
    let sum = chunked_vector_sum(steps + 1, walk.order(), |i, acc| {
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        let p = walk.distribution(i as f64 * h).expect("finite time");
        for (a, v) in acc.iter_mut().zip(p.probs()) {
            *a += w * v;
        }
    });
    Ok(Distribution::from_raw(
        sum.into_iter().map(|v| v * h / t_end).collect(),
    ))
}

/// Running averages `(1/T) ∫_0^T P_t dt` at `T = h·sample_every·(b+1)` for
/// every block `b`, with `h = t_end / steps`. `steps` must be a multiple of
/// `sample_every`.
pub fn running_averages(
    graph: &Graph,
    t_end: f64,
    steps: usize,
    sample_every: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    check_horizon(t_end, steps)?;
    if sample_every == 0 || !steps.is_multiple_of(sample_every) {
        return invalid(format!("sample interval {sample_every} must divide {steps}"));
    }
    let walk = Walk::new(graph);
    let n = walk.order();
    let h = t_end / steps as f64;
    let blocks = steps / sample_every;
    let integrals = map_indexed(blocks, |b| {
        let mut acc = vec![0.0; n];
        let start = b * sample_every;
        for i in start..=start + sample_every {
            let w = if i == start || i == start + sample_every { 0.5 } else { 1.0 };
            let p = walk.distribution(i as f64 * h).expect("finite time");
            for (a, v) in acc.iter_mut().zip(p.probs()) {
                *a += w * h * v;
            }
        }
        acc
    });
    let mut running = vec![0.0; n];
    let mut out = Vec::with_capacity(blocks);
    for (b, block) in integrals.iter().enumerate() {
        for (r, v) in running.iter_mut().zip(block) {
            *r += v;
        }
        let horizon = ((b + 1) * sample_every) as f64 * h;
        out.push((horizon, running.iter().map(|v| v / horizon).collect()));
    }
    Ok(out)
}

/// `P̂(a) = Σ_ℓ P(ℓ) χ_a(ℓ)` for every character index `a`.
pub fn fourier_coefficients(p: &[f64], factors: &[usize]) -> Result<Vec<Complex64>> {
    let group = crate::group::AbelianGroup::new(factors.to_vec())?;
    if p.len() != group.order() {
        return invalid(format!(
            "distribution has {} entries, group order is {}",
            p.len(),
            group.order()
        ));
    }
    Ok(GroupFft::new(factors).transform_real(p, Sign::Positive))
}

/// `(1/4) Σ_{a != 0} |P̂(a)|²`.
pub fn ds_bound(p: &[f64], factors: &[usize]) -> Result<f64> {
    let coeffs = fourier_coefficients(p, factors)?;
    Ok(0.25 * coeffs[1..].iter().map(Complex64::norm_sqr).sum::<f64>())
}

/// True iff the average distribution is within `tol` of uniform.
pub fn is_average_uniform(graph: &Graph, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol < 0.0 {
        return invalid(format!("tolerance must be nonnegative, got {tol}"));
    }
    Ok(average_distribution(graph)?.tv_to_uniform() <= tol)
}

/// Parameters for [`search_min_tv_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub t_max: f64,
    /// Grid points on `[0, t_max]`, endpoints included.
    pub grid: usize,
    /// Golden-section iterations per refined basin.
    pub refine_iters: usize,
    /// Number of grid local minima refined.
    pub candidates: usize,
    /// Refined minima within this much of the best count as ties; the
    /// earliest time wins.
    pub tie_tol: f64,
    /// The walk is evaluated at `time_scale · t`, i.e. with Hamiltonian
    /// `time_scale · A`.
    pub time_scale: f64,
}

impl SearchOptions {
    pub const DEFAULT_REFINE_ITERS: usize = 40;
    pub const DEFAULT_CANDIDATES: usize = 16;
    pub const DEFAULT_TIE_TOL: f64 = 1e-15;
    pub const GRID_POINTS_PER_TURN: f64 = 1e4;

    pub fn new(t_max: f64, grid: usize) -> Self {
        Self {
            t_max,
            grid,
            refine_iters: Self::DEFAULT_REFINE_ITERS,
            candidates: Self::DEFAULT_CANDIDATES,
            tie_tol: Self::DEFAULT_TIE_TOL,
            time_scale: 1.0,
        }
    }

    /// `10^4` grid points per `2π` of search range.
    pub fn default_grid(t_max: f64) -> usize {
        ((Self::GRID_POINTS_PER_TURN * t_max / std::f64::consts::TAU).ceil() as usize).max(2)
    }

    fn validate(&self) -> Result<()> {
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return invalid(format!("t_max must be finite and positive, got {}", self.t_max));
        }
        if self.grid < 2 {
            return invalid(format!("grid needs at least 2 points, got {}", self.grid));
        }
        if self.candidates == 0 {
            return invalid("need at least one refinement candidate");
        }
        if !self.tie_tol.is_finite() || self.tie_tol < 0.0 {
            return invalid(format!("tie tolerance must be nonnegative, got {}", self.tie_tol));
        }
        if !self.time_scale.is_finite() || self.time_scale <= 0.0 {
            return invalid(format!("time scale must be positive, got {}", self.time_scale));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingSearchResult {
    pub t_star: f64,
    pub tv_star: f64,
    pub grid_points: usize,
    pub refinement_iterations: usize,
}

/// Grid scan of `TV(P_t, U)` over `[0, t_max]` followed by golden-section
/// refinement.
pub fn search_min_tv(graph: &Graph, t_max: f64, grid: usize, refine_iters: usize) -> Result<MixingSearchResult> {
    let mut opts = SearchOptions::new(t_max, grid);
    opts.refine_iters = refine_iters;
    search_min_tv_with(graph, &opts)
}

pub fn search_min_tv_with(graph: &Graph, opts: &SearchOptions) -> Result<MixingSearchResult> {
    opts.validate()?;
    let walk = Walk::new(graph);
    let objective = |t: f64| walk.tv_to_uniform_unchecked(t * opts.time_scale);
    let grid = opts.grid;
    let step = opts.t_max / (grid - 1) as f64;
    let time_at = |i: usize| if i == grid - 1 { opts.t_max } else { i as f64 * step };
    let values = map_indexed(grid, |i| objective(time_at(i)));

    let mut minima: Vec<usize> = (0..grid)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i == grid - 1 || values[i] <= values[i + 1];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    minima.truncate(opts.candidates);

    let refined = map_indexed(minima.len(), |c| {
        let i = minima[c];
        let lo = time_at(i.saturating_sub(1));
        let hi = time_at((i + 1).min(grid - 1));
        golden_section(&objective, lo, hi, opts.refine_iters, (time_at(i), values[i]))
    });

    let best = refined
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    let (t_star, tv_star) = refined
        .iter()
        .copied()
        .filter(|&(_, v)| v <= best + opts.tie_tol)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one candidate");
    Ok(MixingSearchResult {
        t_star,
        tv_star,
        grid_points: grid,
        refinement_iterations: opts.refine_iters,
    })
}

/// Minimizes `f` on `[lo, hi]`, returning the best point seen (including
/// `seed`). Ties go to the smaller argument.
fn golden_section(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize, seed: (f64, f64)) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = seed;
    let consider = |t: f64, v: f64, best: &mut (f64, f64)| {
        if v < best.1 || (v == best.1 && t < best.0) {
            *best = (t, v);
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    consider(x1, f1, &mut best);
    consider(x2, f2, &mut best);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            consider(x1, f1, &mut best);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            consider(x2, f2, &mut best);
        }
    }
    best
}
