//! Continuous-time quantum walk `ψ(t) = exp(-itA) |0⟩` evaluated spectrally.
//!
//! The walk always starts at vertex 0. Circulants are vertex-transitive, so
//! the walk from vertex `v` is the walk from 0 translated by `v`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fft::{GroupFft, Sign};
use crate::graphs::{make_cycle, Graph, Spectrum};
use crate::group::root_of_unity;
use crate::parallel::map_indexed;

/// Complex amplitudes over the vertices at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub t: f64,
    pub amps: Vec<Complex64>,
}

impl AmplitudeVector {
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Distribution {
        Distribution {
            probs: self.amps.iter().map(Complex64::norm_sqr).collect(),
        }
    }
}

/// A probability distribution over vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Checks that entries are nonnegative and sum to one within `1e-9`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("distribution is empty");
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return invalid(format!("probability {p} is not a nonnegative real"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// `exp(-iλt)` with the phase reduced modulo 2π.
fn phase(lambda: f64, t: f64) -> Complex64 {
    let theta = (lambda * t).rem_euclid(TAU);
    let (s, c) = theta.sin_cos();
    Complex64::new(c, -s)
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return invalid(format!("time must be finite, got {t}"));
    }
    Ok(())
}

/// Walk engine for one graph: spectrum plus planned transforms.
#[derive(Debug, Clone)]
pub struct Walk {
    spectrum: Spectrum,
    fft: GroupFft,
}

impl Walk {
    pub fn new(graph: &Graph) -> Self {
        Self::from_spectrum(graph.spectrum())
    }

    pub fn from_spectrum(spectrum: Spectrum) -> Self {
        let fft = GroupFft::new(spectrum.group().factors());
        Self { spectrum, fft }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn order(&self) -> usize {
        self.fft.order()
    }

    /// `⟨x|ψ(t)⟩ = (1/N) Σ_a exp(-iλ_a t) χ_a(x)` through the group FFT.
    pub fn amplitudes(&self, t: f64) -> Result<AmplitudeVector> {
        check_time(t)?;
        Ok(AmplitudeVector {
            t,
            amps: self.amplitudes_unchecked(t),
        })
    }

    fn amplitudes_unchecked(&self, t: f64) -> Vec<Complex64> {
        let n = self.order() as f64;
        let mut buf: Vec<Complex64> = self
            .spectrum
            .eigenvalues()
            .iter()
            .map(|&l| phase(l, t))
            .collect();
        self.fft.process(&mut buf, Sign::Positive);
        for z in &mut buf {
            *z /= n;
        }
        buf
    }

    /// Same sum evaluated term by term in O(N²).
    pub fn amplitudes_direct(&self, t: f64) -> Result<AmplitudeVector> {
        check_time(t)?;
        let group = self.spectrum.group();
        let n = group.order();
        let phases: Vec<Complex64> = self
            .spectrum
            .eigenvalues()
            .iter()
            .map(|&l| phase(l, t))
            .collect();
        let amps = (0..n)
            .map(|x| {
                let s: Complex64 = phases
                    .iter()
                    .enumerate()
                    .map(|(a, p)| p * group.character(a, x))
                    .sum();
                s / n as f64
            })
            .collect();
        Ok(AmplitudeVector { t, amps })
    }

    pub fn distribution(&self, t: f64) -> Result<Distribution> {
        Ok(self.amplitudes(t)?.probabilities())
    }

    /// `Σ_x |p_x(t) - 1/N|`.
    pub fn tv_to_uniform(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.tv_to_uniform_unchecked(t))
    }

    pub(crate) fn tv_to_uniform_unchecked(&self, t: f64) -> f64 {
        let u = 1.0 / self.order() as f64;
        self.amplitudes_unchecked(t)
            .iter()
            .map(|z| (z.norm_sqr() - u).abs())
            .sum()
    }

    /// Amplitudes at many times, evaluated in parallel; output order follows
    /// `times` and does not depend on the thread count.
    pub fn amplitudes_batch(&self, times: &[f64]) -> Result<Vec<AmplitudeVector>> {
        times.iter().try_for_each(|&t| check_time(t))?;
        Ok(map_indexed(times.len(), |i| AmplitudeVector {
            t: times[i],
            amps: self.amplitudes_unchecked(times[i]),
        }))
    }

    pub fn distributions_batch(&self, times: &[f64]) -> Result<Vec<Distribution>> {
        Ok(self
            .amplitudes_batch(times)?
            .into_iter()
            .map(|a| a.probabilities())
            .collect())
    }
}

/// Amplitudes of the walk from vertex 0 at time `t`.
pub fn evolve(graph: &Graph, t: f64) -> Result<AmplitudeVector> {
    check_time(t)?;
    Walk::new(graph).amplitudes(t)
}

pub fn instantaneous_distribution(graph: &Graph, t: f64) -> Result<Distribution> {
    Ok(evolve(graph, t)?.probabilities())
}

fn cycle_walk(n: usize) -> Result<Walk> {
    Ok(Walk::new(&make_cycle(n)?.into()))
}

fn check_even_vertex(n: usize, j: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return invalid(format!("n must be even and >= 2, got {n}"));
    }
    if j >= n {
        return invalid(format!("vertex {j} out of range for C_{n}"));
    }
    Ok(())
}

fn cycle_eigenvalue(n: usize, k: usize) -> f64 {
    2.0 * root_of_unity(k, n).re
}

/// Even-cycle amplitude from the half spectrum, pairing `k` with `n - k`:
///
/// `(1/n) { e^{-2it} + (-1)^j e^{2it} + 2 Σ_{1<=k<n/2} e^{-iλ_k t} cos(2πjk/n) }`.
pub fn amplitude_half_spectrum(n: usize, j: usize, t: f64) -> Result<Complex64> {
    check_even_vertex(n, j)?;
    check_time(t)?;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut s = phase(2.0, t) + sign * phase(-2.0, t);
    for k in 1..n / 2 {
        let c = root_of_unity((j * k) % n, n).re;
        s += 2.0 * c * phase(cycle_eigenvalue(n, k), t);
    }
    Ok(s / n as f64)
}

/// Even-cycle amplitude from the quarter spectrum, additionally pairing `k`
/// with `n/2 - k` (λ_{n/2-k} = -λ_k):
///
/// `(1/n) { ε_{j,0} + 2 Σ_{1<=k<n/4} ε_{j,k} cos(2πjk/n) } + [4 | n] (2/n) cos(πj/2)`
///
/// with `ε_{j,k}(t) = e^{-iλ_k t} + (-1)^j e^{iλ_k t}`. The last term is the
/// `k = n/4` eigenvalue (λ = 0), which has no partner.
pub fn amplitude_even_cycle(n: usize, j: usize, t: f64) -> Result<Complex64> {
    check_even_vertex(n, j)?;
    check_time(t)?;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let eps = |lambda: f64| phase(lambda, t) + sign * phase(-lambda, t);
    let mut s = eps(2.0);
    let mut k = 1;
    while 4 * k < n {
        let c = root_of_unity((j * k) % n, n).re;
        s += 2.0 * c * eps(cycle_eigenvalue(n, k));
        k += 1;
    }
    if n.is_multiple_of(4) {
        s += 2.0 * root_of_unity(j % 4, 4).re;
    }
    Ok(s / n as f64)
}

/// Sums of the even-indexed and odd-indexed amplitudes of `C_n`.
pub fn parity_sums(n: usize, t: f64) -> Result<(Complex64, Complex64)> {
    check_even_vertex(n, 0)?;
    let amps = cycle_walk(n)?.amplitudes(t)?.amps;
    let even = amps.iter().step_by(2).sum();
    let odd = amps.iter().skip(1).step_by(2).sum();
    Ok((even, odd))
}

/// Amplitudes of `C_n` summed over residue classes modulo `m`.
pub fn coarse_grain(n: usize, m: usize, t: f64) -> Result<Vec<Complex64>> {
    if n < 2 {
        return invalid(format!("cycle needs n >= 2, got {n}"));
    }
    if m < 2 || !n.is_multiple_of(m) {
        return invalid(format!("m = {m} must be a divisor of n = {n} with m >= 2"));
    }
    let amps = cycle_walk(n)?.amplitudes(t)?.amps;
    let mut out = vec![Complex64::default(); m];
    for (j, z) in amps.iter().enumerate() {
        out[j % m] += z;
    }
    Ok(out)
}

/// `⟨j|ψ_{2n}(t)⟩ + ⟨n-j|ψ_{2n}(t)⟩` for even `n`.
pub fn fold_pair(n: usize, j: usize, t: f64) -> Result<Complex64> {
    check_even_vertex(n, j)?;
    let amps = cycle_walk(2 * n)?.amplitudes(t)?.amps;
    Ok(amps[j] + amps[(n - j) % (2 * n)])
}
