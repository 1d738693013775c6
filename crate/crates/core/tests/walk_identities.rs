use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use qwalk_core::graphs::{adjacency_matrix, Graph};
use qwalk_core::walk::amplitude_half_spectrum;
use qwalk_core::{
    amplitude_even_cycle, coarse_grain, evolve, fold_pair, make_complete, make_cycle,
    make_hypercube, parity_sums, Walk,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `exp(-iAt) e_0` from a dense symmetric eigendecomposition.
fn dense_evolve(graph: &Graph, t: f64) -> Vec<Complex64> {
    let a: DMatrix<f64> = adjacency_matrix(graph).unwrap();
    let eig = SymmetricEigen::new(a);
    let n = eig.eigenvalues.len();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|k| {
                    let l = eig.eigenvalues[k];
                    let w = eig.eigenvectors[(x, k)] * eig.eigenvectors[(0, k)];
                    Complex64::new((l * t).cos(), -(l * t).sin()) * w
                })
                .sum()
        })
        .collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn spectral_evolution_matches_dense_exponential() {
    let graphs: Vec<Graph> = vec![
        make_cycle(2).unwrap().into(),
        make_cycle(7).unwrap().into(),
        make_cycle(16).unwrap().into(),
        make_complete(9).unwrap().into(),
        make_hypercube(4).unwrap().into(),
        qwalk_core::GroupCirculantSpec::new(vec![2, 4], vec![vec![1, 0], vec![0, 1], vec![0, 3]])
            .unwrap()
            .into(),
    ];
    for g in &graphs {
        for t in [0.0, 0.37, 2.9, 13.1] {
            let fast = evolve(g, t).unwrap().amps;
            assert!(max_diff(&fast, &dense_evolve(g, t)) < 1e-10);
        }
    }
}

#[test]
fn unitarity_over_random_draws() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let g: Graph = match rng.gen_range(0..3) {
            0 => make_cycle(rng.gen_range(2..=1024)).unwrap().into(),
            1 => make_complete(rng.gen_range(2..=256)).unwrap().into(),
            _ => make_hypercube(rng.gen_range(1..=8)).unwrap().into(),
        };
        let t = rng.gen_range(0.0..1000.0);
        let norm = evolve(&g, t).unwrap().norm_sqr();
        assert!((norm - 1.0).abs() <= 1e-10, "{norm}");
    }
}

#[test]
fn even_cycle_parity_structure() {
    let mut rng = StdRng::seed_from_u64(5);
    for n in (2..=128).step_by(2) {
        let w = Walk::new(&make_cycle(n).unwrap().into());
        for _ in 0..5 {
            let amps = w.amplitudes(rng.gen_range(0.0..100.0)).unwrap().amps;
            for (j, z) in amps.iter().enumerate() {
                let off = if j % 2 == 0 { z.im } else { z.re };
                assert!(off.abs() < 1e-10);
            }
        }
    }
}

#[test]
fn decomposition_for_all_divisor_pairs() {
    let mut rng = StdRng::seed_from_u64(21);
    for n in 2..=96 {
        let times: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..100.0)).collect();
        for m in (2..=n).filter(|m| n % m == 0) {
            let wm = Walk::new(&make_cycle(m).unwrap().into());
            for &t in &times {
                let coarse = coarse_grain(n, m, t).unwrap();
                assert!(max_diff(&coarse, &wm.amplitudes(t).unwrap().amps) < 1e-10);
            }
        }
    }
}

#[test]
fn folding_and_reduced_forms() {
    let mut rng = StdRng::seed_from_u64(33);
    for n in (2..=64).step_by(2) {
        let w = Walk::new(&make_cycle(n).unwrap().into());
        for _ in 0..20 {
            let t = rng.gen_range(0.0..100.0);
            let amps = w.amplitudes(t).unwrap().amps;
            for (j, z) in amps.iter().enumerate() {
                assert!((fold_pair(n, j, t).unwrap() - z).norm() < 1e-10);
                assert!((amplitude_even_cycle(n, j, t).unwrap() - z).norm() < 1e-10);
                assert!((amplitude_half_spectrum(n, j, t).unwrap() - z).norm() < 1e-10);
            }
            let (e, o) = parity_sums(n, t).unwrap();
            assert!((e - Complex64::new((2.0 * t).cos(), 0.0)).norm() < 1e-10);
            assert!((o - Complex64::new(0.0, -(2.0 * t).sin())).norm() < 1e-10);
        }
    }
}

#[test]
fn quarter_form_without_middle_term_is_off_by_it() {
    // When 4 | n, dropping the λ = 0 eigenvalue leaves out (2/n) cos(πj/2).
    let n = 8;
    let t = 0.0;
    let full = amplitude_even_cycle(n, 0, t).unwrap();
    assert!((full.re - 1.0).abs() < 1e-15);
    let without_middle = full.re - 2.0 / n as f64;
    assert!((without_middle - 0.75).abs() < 1e-15);
}

#[test]
fn fft_matches_direct_sum() {
    for n in [2, 3, 17, 64, 100, 255, 512] {
        let w = Walk::new(&make_cycle(n).unwrap().into());
        for t in [0.5, 17.25] {
            let a = w.amplitudes(t).unwrap().amps;
            let b = w.amplitudes_direct(t).unwrap().amps;
            assert!(max_diff(&a, &b) < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn large_time_accuracy() {
    // C_4: ⟨0|ψ(t)⟩ = (1 + cos 2t)/2, ⟨1|ψ(t)⟩ = -i sin(2t)/2.
    let w = Walk::new(&make_cycle(4).unwrap().into());
    for t in [1e5, 123456.789, 1e6] {
        let a = w.amplitudes(t).unwrap().amps;
        assert!((a[0] - Complex64::new((1.0 + (2.0 * t).cos()) / 2.0, 0.0)).norm() < 1e-8);
        assert!((a[1] - Complex64::new(0.0, -(2.0 * t).sin() / 2.0)).norm() < 1e-8);
    }
}

#[test]
fn batch_is_order_and_thread_independent() {
    let w = Walk::new(&make_cycle(37).unwrap().into());
    let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.173).collect();
    let one = qwalk_core::parallel::with_threads(1, || w.distributions_batch(&times).unwrap());
    let many = qwalk_core::parallel::with_threads(8, || w.distributions_batch(&times).unwrap());
    assert_eq!(one, many);
    for (t, d) in times.iter().zip(&one) {
        assert_eq!(d, &w.distribution(*t).unwrap());
    }
}

proptest! {
    #[test]
    fn cycle_walk_is_unitary(n in 2usize..300, t in 0.0f64..500.0) {
        let norm = evolve(&make_cycle(n).unwrap().into(), t).unwrap().norm_sqr();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }
}
