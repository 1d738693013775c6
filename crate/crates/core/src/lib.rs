//! Continuous-time quantum walks on circulant graphs.
//!
//! The walk `ψ(t) = exp(-itA) |0⟩` on a circulant over a finite Abelian group
//! is diagonalized by the group's characters, so every quantity here is
//! computed spectrally: eigenvalues are character sums over the connection
//! set, amplitudes are an inverse group Fourier transform of phases, and
//! long-run averages follow from the classes of equal eigenvalues.
//!
//! Modules:
//! - [`graphs`]: cycles, complete graphs, hypercubes, general group circulants,
//!   spectra and Hadamard matrices.
//! - [`walk`]: amplitude evolution and the reduced forms for even cycles.
//! - [`mixing`]: total variation, average distributions, Fourier bounds and
//!   the instantaneous mixing search.
//! - [`numtheory`]: 2-adic classification of cycle lengths and the
//!   sum-of-two-squares certificate.
//! - [`verify`]: the numerical identity suite run by `qwalk verify`.

pub mod error;
pub mod fft;
pub mod graphs;
pub mod group;
pub mod mixing;
pub mod numtheory;
pub mod parallel;
pub mod specfile;
pub mod verify;
pub mod walk;

pub use error::{QwalkError, Result};
pub use graphs::{
    adjacency_matrix, eigenvalues_circulant, eigenvalues_group, hadamard_matrix, make_circulant,
    make_complete, make_cycle, make_hypercube, repeated_eigenvalue_witness, CirculantSpec, Graph,
    GroupCirculantSpec, HadamardMatrix, Spectrum,
};
pub use group::{character, AbelianGroup};
pub use mixing::{
    average_distribution, average_distribution_integrated, ds_bound, fourier_coefficients,
    is_average_uniform, search_min_tv, tv_distance, AverageDistribution, MixingSearchResult,
    SearchOptions,
};
pub use numtheory::{classify_cycle, diophantine_certificate, two_adic_split, MixingVerdict, Verdict};
pub use walk::{
    amplitude_even_cycle, coarse_grain, evolve, fold_pair, instantaneous_distribution,
    parity_sums, AmplitudeVector, Distribution, Walk,
};
