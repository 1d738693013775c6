use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use qwalk_core::graphs::{adjacency_matrix, Graph};
use qwalk_core::{
    character, eigenvalues_circulant, eigenvalues_group, hadamard_matrix, make_circulant,
    make_complete, make_cycle, make_hypercube, GroupCirculantSpec,
};

fn dense_eigenvalues(graph: &Graph) -> Vec<f64> {
    let a: DMatrix<f64> = adjacency_matrix(graph).unwrap();
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn assert_multiset_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in sorted(a).iter().zip(sorted(b)) {
        assert!((x - y).abs() < tol, "{x} vs {y}");
    }
}

#[test]
fn cycle_and_complete_spectra_match_dense_eigensolver() {
    for n in 2..=64 {
        for g in [Graph::from(make_cycle(n).unwrap()), make_complete(n).unwrap().into()] {
            assert_multiset_close(g.spectrum().eigenvalues(), &dense_eigenvalues(&g), 1e-9);
        }
    }
}

#[test]
fn hypercube_levels_from_brute_force_character_sums() {
    for d in 1..=8 {
        let spec = make_hypercube(d).unwrap();
        let spectrum = eigenvalues_group(&spec);
        let factors = vec![2; d];
        for a in 0..1usize << d {
            let at = spectrum.group().decode(a);
            // Σ over unit vectors x of (1 - 2 a_j x_j).
            let brute: f64 = (0..d).map(|j| 1.0 - 2.0 * at[j] as f64).sum();
            assert_eq!(spectrum.eigenvalues()[a], brute);
            let by_character: f64 = spec
                .connection()
                .map(|x| character(&factors, &at, x).unwrap().re)
                .sum();
            assert_eq!(by_character, brute);
        }
        if d <= 6 {
            let g: Graph = spec.clone().into();
            assert_multiset_close(spectrum.eigenvalues(), &dense_eigenvalues(&g), 1e-9);
        }
        // d + 1 levels with binomial multiplicities.
        let mut sizes: Vec<usize> = spectrum.collision_classes().iter().map(Vec::len).collect();
        sizes.sort();
        let mut binom: Vec<usize> = (0..=d).map(|k| binomial(d, k)).collect();
        binom.sort();
        assert_eq!(sizes, binom);
        if d >= 2 {
            assert!(spectrum.distinct_count() < 1 << d);
        }
        // Structural classes: equal Hamming weight.
        for c in spectrum.collision_classes() {
            let w = c[0].count_ones();
            assert!(c.iter().all(|a| a.count_ones() == w));
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn cycle_classes_match_structure() {
    for n in 2..=200 {
        let s = eigenvalues_circulant(&make_cycle(n).unwrap());
        for (k, &l) in s.eigenvalues().iter().enumerate() {
            let expect = 2.0 * (std::f64::consts::TAU * k as f64 / n as f64).cos();
            assert!((l - expect).abs() < 1e-12);
            // {k, n-k} is exactly the class of k.
            let class = &s.collision_classes()[s.class_of(k)];
            let mut structural = vec![k, (n - k) % n];
            structural.sort();
            structural.dedup();
            assert_eq!(class, &structural, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn hadamard_rows_are_characters() {
    for d in 1..=6 {
        let h = hadamard_matrix(1 << d).unwrap();
        let g = make_hypercube(d).unwrap();
        let group = g.group();
        for a in 0..1 << d {
            for x in 0..1 << d {
                let chi = group.character(a, x);
                assert_eq!(chi.im, 0.0);
                assert_eq!(chi.re, h.get(a, x) as f64);
            }
        }
        // H Hᵀ = order · I.
        for r in 0..1 << d {
            for s in 0..1 << d {
                let dot: i32 = (0..1 << d).map(|c| (h.get(r, c) * h.get(s, c)) as i32).sum();
                assert_eq!(dot, if r == s { 1 << d } else { 0 });
            }
        }
        assert!(h.row(0).iter().all(|&v| v == 1));
    }
}

#[test]
fn hypercube_witness_pairs_are_equal() {
    let g: Graph = make_hypercube(3).unwrap().into();
    let s = g.spectrum();
    let (a, b) = s.repeated_eigenvalue_witness().unwrap();
    assert_ne!(a, b);
    assert_eq!(s.eigenvalues()[a], s.eigenvalues()[b]);
    assert_eq!((a.count_ones(), b.count_ones()), (1, 1));
}

fn symmetric_conn(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::btree_set(1..n, 1..=n.saturating_sub(1).max(1)).prop_map(move |s| {
        let mut all: Vec<usize> = s.iter().flat_map(|&d| [d, n - d]).collect();
        all.sort();
        all.dedup();
        all
    })
}

fn circulant_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=64).prop_flat_map(|n| (Just(n), symmetric_conn(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_circulants_match_dense((n, conn) in circulant_strategy()) {
        let spec = make_circulant(n, &conn).unwrap();
        let g: Graph = spec.clone().into();
        let s = eigenvalues_circulant(&spec);
        assert_multiset_close(s.eigenvalues(), &dense_eigenvalues(&g), 1e-9);
        for a in 0..n {
            let d = (s.eigenvalues()[a] - s.eigenvalues()[(n - a) % n]).abs();
            prop_assert!(d < 1e-12);
        }
        // Same connection set as a one-factor group circulant.
        let as_group = GroupCirculantSpec::new(vec![n], conn.iter().map(|&d| vec![d])).unwrap();
        let sg = eigenvalues_group(&as_group);
        for (x, y) in s.eigenvalues().iter().zip(sg.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert_eq!(s.eigenvalues()[0], conn.len() as f64);
        // Classes: tight inside, separated across.
        let tol = s.tolerance();
        let mut reps: Vec<f64> = Vec::new();
        for c in s.collision_classes() {
            let vals: Vec<f64> = c.iter().map(|&i| s.eigenvalues()[i]).collect();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(hi - lo <= tol);
            reps.push(lo);
        }
        reps.sort_by(f64::total_cmp);
        for w in reps.windows(2) {
            prop_assert!(w[1] - w[0] > tol);
        }
    }

    #[test]
    fn random_group_circulants_are_inverse_symmetric(
        factors in proptest::collection::vec(2usize..5, 1..4),
        picks in proptest::collection::vec(0usize..1000, 1..6),
    ) {
        let order: usize = factors.iter().product();
        let group = qwalk_core::AbelianGroup::new(factors.clone()).unwrap();
        let mut conn = std::collections::BTreeSet::new();
        for p in picks {
            let x = 1 + p % (order - 1);
            conn.insert(group.decode(x));
            conn.insert(group.decode(group.neg(x)));
        }
        let spec = GroupCirculantSpec::new(factors, conn).unwrap();
        let s = eigenvalues_group(&spec);
        for a in 0..order {
            prop_assert!((s.eigenvalues()[a] - s.eigenvalues()[group.neg(a)]).abs() < 1e-12);
        }
        let g: Graph = spec.into();
        assert_multiset_close(s.eigenvalues(), &dense_eigenvalues(&g), 1e-9);
    }
}
