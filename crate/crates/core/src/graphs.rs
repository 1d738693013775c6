//! Circulant and Abelian group-circulant graphs, their spectra and
//! collision structure.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, QwalkError, Result};
use crate::fft::{GroupFft, Sign};
use crate::group::{root_of_unity, AbelianGroup};

/// Default absolute tolerance for grouping equal eigenvalues.
pub const DEFAULT_COLLISION_TOL: f64 = 1e-9;

/// Largest vertex count accepted by the dense-matrix paths.
pub const DENSE_CAP: usize = 4096;

/// Connection sets at or below this size use direct character sums for the
/// spectrum; larger ones go through the FFT.
const DIRECT_SPECTRUM_MAX_CONN: usize = 64;

/// A circulant graph on `Z_n` given by its symmetric connection set.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    n: usize,
    conn: BTreeMap<usize, f64>,
}

impl CirculantSpec {
    /// Validated spec with unit weights.
    pub fn new(n: usize, conn: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::weighted(n, conn.into_iter().map(|d| (d, 1.0)))
    }

    /// Validated spec with explicit edge weights. Weights must be positive
    /// and agree on `d` and `n - d`.
    pub fn weighted(n: usize, conn: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        if n < 2 {
            return invalid(format!("circulant needs n >= 2, got {n}"));
        }
        let mut map = BTreeMap::new();
        for (d, w) in conn {
            if d == 0 {
                return invalid("connection set contains 0 (self-loop)");
            }
            if d >= n {
                return invalid(format!("connection element {d} is not in [1, {}]", n - 1));
            }
            if !(w.is_finite() && w > 0.0) {
                return invalid(format!("weight {w} on element {d} is not a positive real"));
            }
            if let Some(prev) = map.insert(d, w) {
                if prev != w {
                    return invalid(format!("element {d} listed with two weights"));
                }
            }
        }
        if map.is_empty() {
            return invalid("connection set is empty");
        }
        for (&d, &w) in &map {
            let inv = (n - d) % n;
            match map.get(&inv) {
                None => {
                    return invalid(format!(
                        "connection set is not closed under inverse: element {d} has no inverse {inv}"
                    ))
                }
                Some(&wi) if wi != w => {
                    return invalid(format!(
                        "weights of element {d} and its inverse {inv} differ ({w} vs {wi})"
                    ))
                }
                _ => {}
            }
        }
        Ok(Self { n, conn: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Connection elements in ascending order.
    pub fn connection(&self) -> impl Iterator<Item = usize> + '_ {
        self.conn.keys().copied()
    }

    pub fn weight(&self, d: usize) -> Option<f64> {
        self.conn.get(&d).copied()
    }

    pub fn weights(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.conn.iter().map(|(&d, &w)| (d, w))
    }

    pub fn degree(&self) -> f64 {
        self.conn.values().sum()
    }
}

/// A circulant over `Z_{n1} x ... x Z_{nk}` with a symmetric connection set.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCirculantSpec {
    group: AbelianGroup,
    conn: BTreeSet<Vec<usize>>,
}

impl GroupCirculantSpec {
    pub fn new(factors: Vec<usize>, conn: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let group = AbelianGroup::new(factors)?;
        if group.order() < 2 {
            return invalid(format!("group order must be >= 2, got {}", group.order()));
        }
        let mut set = BTreeSet::new();
        for x in conn {
            group.check_dim(x.len())?;
            for (&xi, &n) in x.iter().zip(group.factors()) {
                if xi >= n {
                    return invalid(format!("element {x:?} is not reduced modulo {:?}", group.factors()));
                }
            }
            if x.iter().all(|&xi| xi == 0) {
                return invalid("connection set contains the identity (self-loop)");
            }
            set.insert(x);
        }
        if set.is_empty() {
            return invalid("connection set is empty");
        }
        for x in &set {
            let inv: Vec<usize> = x
                .iter()
                .zip(group.factors())
                .map(|(&xi, &n)| (n - xi) % n)
                .collect();
            if !set.contains(&inv) {
                return invalid(format!(
                    "connection set is not closed under inverse: element {x:?} has no inverse {inv:?}"
                ));
            }
        }
        Ok(Self { group, conn: set })
    }

    pub fn factors(&self) -> &[usize] {
        self.group.factors()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn connection(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.conn.iter().map(Vec::as_slice)
    }

    pub fn degree(&self) -> f64 {
        self.conn.len() as f64
    }
}

/// Either kind of circulant; everything downstream works on this.
#[derive(Debug, Clone, PartialEq)]
pub enum Graph {
    Circulant(CirculantSpec),
    Group(GroupCirculantSpec),
}

impl From<CirculantSpec> for Graph {
    fn from(s: CirculantSpec) -> Self {
        Graph::Circulant(s)
    }
}

impl From<GroupCirculantSpec> for Graph {
    fn from(s: GroupCirculantSpec) -> Self {
        Graph::Group(s)
    }
}

impl Graph {
    pub fn group(&self) -> AbelianGroup {
        match self {
            Graph::Circulant(s) => AbelianGroup::cyclic(s.n).expect("validated n >= 2"),
            Graph::Group(s) => s.group.clone(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Graph::Circulant(s) => s.n,
            Graph::Group(s) => s.group.order(),
        }
    }

    pub fn factors(&self) -> Vec<usize> {
        match self {
            Graph::Circulant(s) => vec![s.n],
            Graph::Group(s) => s.group.factors().to_vec(),
        }
    }

    /// `(flat index, weight)` for every connection element.
    pub fn connection_weights(&self) -> Vec<(usize, f64)> {
        match self {
            Graph::Circulant(s) => s.weights().collect(),
            Graph::Group(s) => s.connection().map(|x| (s.group.encode(x), 1.0)).collect(),
        }
    }

    pub fn degree(&self) -> f64 {
        match self {
            Graph::Circulant(s) => s.degree(),
            Graph::Group(s) => s.degree(),
        }
    }

    pub fn spectrum(&self) -> Spectrum {
        self.spectrum_with_tol(DEFAULT_COLLISION_TOL)
    }

    pub fn spectrum_with_tol(&self, tol: f64) -> Spectrum {
        let group = self.group();
        let eigenvalues = spectrum_values(&group, &self.connection_weights());
        Spectrum::from_values(group, eigenvalues, tol)
    }
}

/// The cycle `C_n`. For `n = 2` this is the doubled-edge multigraph whose
/// Hamiltonian is `[[0, 2], [2, 0]]`.
pub fn make_cycle(n: usize) -> Result<CirculantSpec> {
    match n {
        0 | 1 => invalid(format!("cycle needs n >= 2, got {n}")),
        2 => CirculantSpec::weighted(2, [(1, 2.0)]),
        _ => CirculantSpec::new(n, [1, n - 1]),
    }
}

/// The complete graph `K_n`.
pub fn make_complete(n: usize) -> Result<CirculantSpec> {
    if n < 2 {
        return invalid(format!("complete graph needs n >= 2, got {n}"));
    }
    CirculantSpec::new(n, 1..n)
}

pub fn make_circulant(n: usize, conn: &[usize]) -> Result<CirculantSpec> {
    CirculantSpec::new(n, conn.iter().copied())
}

/// The `d`-cube as the `Z_2^d`-circulant generated by the unit vectors.
pub fn make_hypercube(d: usize) -> Result<GroupCirculantSpec> {
    if d < 1 {
        return invalid(format!("hypercube needs d >= 1, got {d}"));
    }
    if d >= usize::BITS as usize - 1 {
        return invalid(format!("hypercube dimension {d} is too large"));
    }
    let conn = (0..d).map(|j| {
        let mut x = vec![0; d];
        x[j] = 1;
        x
    });
    GroupCirculantSpec::new(vec![2; d], conn)
}

/// Eigenvalues indexed by character, with collision classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    group: AbelianGroup,
    eigenvalues: Vec<f64>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    tol: f64,
}

impl Spectrum {
    /// Groups `eigenvalues` into classes by sorting and splitting wherever
    /// consecutive values differ by more than `tol`.
    pub fn from_values(group: AbelianGroup, eigenvalues: Vec<f64>, tol: f64) -> Self {
        assert_eq!(group.order(), eigenvalues.len());
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut prev = f64::NAN;
        for &i in &order {
            let v = eigenvalues[i];
            match classes.last_mut() {
                Some(c) if v - prev <= tol => c.push(i),
                _ => classes.push(vec![i]),
            }
            prev = v;
        }
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; eigenvalues.len()];
        for (ci, c) in classes.iter().enumerate() {
            for &i in c {
                class_of[i] = ci;
            }
        }
        Self {
            group,
            eigenvalues,
            classes,
            class_of,
            tol,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Classes of equal eigenvalues, each sorted, ordered by smallest member.
    pub fn collision_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, index: usize) -> usize {
        self.class_of[index]
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn distinct_count(&self) -> usize {
        self.classes.len()
    }

    pub fn is_simple(&self) -> bool {
        self.classes.len() == self.eigenvalues.len()
    }

    /// Ordered pairs `(j, k)`, `j != k`, sharing an eigenvalue.
    pub fn collision_pair_count(&self) -> usize {
        self.classes.iter().map(|c| c.len() * (c.len() - 1)).sum()
    }

    /// A pair of distinct indices with equal eigenvalues, preferring the
    /// structural pair `(a, -a)` with `a != -a`.
    pub fn repeated_eigenvalue_witness(&self) -> Option<(usize, usize)> {
        for a in 0..self.eigenvalues.len() {
            let na = self.group.neg(a);
            if na != a && self.class_of[a] == self.class_of[na] {
                return Some((a.min(na), a.max(na)));
            }
        }
        self.classes
            .iter()
            .filter(|c| c.len() >= 2)
            .map(|c| (c[0], c[1]))
            .min()
    }
}

fn spectrum_values(group: &AbelianGroup, conn: &[(usize, f64)]) -> Vec<f64> {
    let n = group.order();
    if conn.len() <= DIRECT_SPECTRUM_MAX_CONN {
        if group.is_cyclic() {
            return (0..n)
                .map(|j| {
                    conn.iter()
                        .map(|&(k, w)| {
                            let r = ((j as u128 * k as u128) % n as u128) as usize;
                            w * root_of_unity(r, n).re
                        })
                        .sum()
                })
                .collect();
        }
        let decoded: Vec<(Vec<usize>, f64)> =
            conn.iter().map(|&(x, w)| (group.decode(x), w)).collect();
        let factors = group.factors();
        return (0..n)
            .map(|a| {
                let at = group.decode(a);
                decoded
                    .iter()
                    .map(|(x, w)| {
                        let chi = crate::group::character(factors, &at, x).expect("dims agree");
                        w * chi.re
                    })
                    .sum()
            })
            .collect();
    }
    let mut f = vec![0.0; n];
    for &(x, w) in conn {
        f[x] = w;
    }
    let fft = GroupFft::new(group.factors());
    let lam: Vec<Complex64> = fft.transform_real(&f, Sign::Negative);
    let neg = group.negation_table();
    (0..n).map(|a| 0.5 * (lam[a].re + lam[neg[a]].re)).collect()
}

pub fn eigenvalues_circulant(spec: &CirculantSpec) -> Spectrum {
    Graph::Circulant(spec.clone()).spectrum()
}

pub fn eigenvalues_group(spec: &GroupCirculantSpec) -> Spectrum {
    Graph::Group(spec.clone()).spectrum()
}

pub fn repeated_eigenvalue_witness(graph: &Graph) -> Option<(usize, usize)> {
    graph.spectrum().repeated_eigenvalue_witness()
}

/// Dense adjacency matrix `A[s, t] = w(t - s)` under the mixed-radix vertex
/// ordering.
pub fn adjacency_matrix(graph: &Graph) -> Result<DMatrix<f64>> {
    adjacency_matrix_capped(graph, DENSE_CAP)
}

pub fn adjacency_matrix_capped(graph: &Graph, cap: usize) -> Result<DMatrix<f64>> {
    let n = graph.order();
    if n > cap {
        return Err(QwalkError::ResourceLimit {
            what: "dense matrix order",
            requested: n,
            cap,
        });
    }
    let group = graph.group();
    let mut row0 = vec![0.0; n];
    for (x, w) in graph.connection_weights() {
        row0[x] = w;
    }
    Ok(DMatrix::from_fn(n, n, |s, t| row0[group.sub(t, s)]))
}

/// Sylvester-type Hadamard matrix of order `2^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }
}

/// Builds `H_2 = [[1, 1], [1, -1]]` and `H_2m = [[H_m, H_m], [H_m, -H_m]]`.
pub fn hadamard_matrix(order: usize) -> Result<HadamardMatrix> {
    if order < 2 || !order.is_power_of_two() {
        return invalid(format!("Hadamard order must be a power of two >= 2, got {order}"));
    }
    let mut size = 1;
    let mut entries = vec![1i8];
    while size < order {
        let next = size * 2;
        let mut grown = vec![0i8; next * next];
        for r in 0..size {
            for c in 0..size {
                let v = entries[r * size + c];
                grown[r * next + c] = v;
                grown[r * next + c + size] = v;
                grown[(r + size) * next + c] = v;
                grown[(r + size) * next + c + size] = -v;
            }
        }
        entries = grown;
        size = next;
    }
    Ok(HadamardMatrix { order, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_constructors() {
        let c5 = make_cycle(5).unwrap();
        assert_eq!(c5.connection().collect::<Vec<_>>(), vec![1, 4]);
        assert!(c5.weights().all(|(_, w)| w == 1.0));
        let c2 = make_cycle(2).unwrap();
        assert_eq!(c2.weights().collect::<Vec<_>>(), vec![(1, 2.0)]);
        assert!(make_cycle(1).is_err());
        assert!(make_cycle(0).is_err());
    }

    #[test]
    fn complete_constructors() {
        let k4 = make_complete(4).unwrap();
        assert_eq!(k4.connection().collect::<Vec<_>>(), vec![1, 2, 3]);
        let k2 = make_complete(2).unwrap();
        assert_eq!(k2.weights().collect::<Vec<_>>(), vec![(1, 1.0)]);
        assert!(make_complete(0).is_err());
    }

    #[test]
    fn circulant_validation() {
        assert!(make_circulant(8, &[1, 7]).is_ok());
        let err = make_circulant(8, &[1]).unwrap_err().to_string();
        assert!(err.contains("element 1") && err.contains("inverse 7"), "{err}");
        assert!(make_circulant(8, &[0, 1, 7]).is_err());
        assert!(make_circulant(8, &[1, 7, 8]).is_err());
        assert!(CirculantSpec::weighted(6, [(1, 1.0), (5, 2.0)]).is_err());
    }

    #[test]
    fn hypercube_constructor() {
        let q3 = make_hypercube(3).unwrap();
        let conn: Vec<Vec<usize>> = q3.connection().map(<[usize]>::to_vec).collect();
        assert_eq!(conn, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        let q1 = make_hypercube(1).unwrap();
        assert_eq!(q1.connection().count(), 1);
        assert!(make_hypercube(0).is_err());
    }

    #[test]
    fn group_validation() {
        assert!(GroupCirculantSpec::new(vec![2, 4], vec![vec![1, 0], vec![0, 1], vec![0, 3]]).is_ok());
        assert!(GroupCirculantSpec::new(vec![2, 4], vec![vec![0, 1]]).is_err());
        assert!(GroupCirculantSpec::new(vec![2, 4], vec![vec![0, 0]]).is_err());
        assert!(GroupCirculantSpec::new(vec![2, 4], vec![vec![0, 5]]).is_err());
        assert!(GroupCirculantSpec::new(vec![2, 4], vec![vec![1]]).is_err());
    }

    #[test]
    fn small_spectra() {
        let c4 = eigenvalues_circulant(&make_cycle(4).unwrap());
        assert_eq!(c4.eigenvalues(), &[2.0, 0.0, -2.0, 0.0]);
        assert_eq!(c4.collision_classes(), &[vec![0], vec![1, 3], vec![2]]);

        let k4 = eigenvalues_circulant(&make_complete(4).unwrap());
        assert_eq!(k4.eigenvalues(), &[3.0, -1.0, -1.0, -1.0]);
        assert_eq!(k4.collision_classes(), &[vec![0], vec![1, 2, 3]]);

        let c8 = eigenvalues_circulant(&make_cycle(8).unwrap());
        let l = c8.eigenvalues();
        assert!((l[1] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l[2], 0.0);
        assert_eq!(l[4], -2.0);

        let c2 = eigenvalues_circulant(&make_cycle(2).unwrap());
        assert_eq!(c2.eigenvalues(), &[2.0, -2.0]);
    }

    #[test]
    fn hypercube_spectrum_levels() {
        let q3 = eigenvalues_group(&make_hypercube(3).unwrap());
        for (a, &lam) in q3.eigenvalues().iter().enumerate() {
            assert_eq!(lam, 3.0 - 2.0 * a.count_ones() as f64);
        }
        let mult: Vec<usize> = q3.collision_classes().iter().map(Vec::len).collect();
        let mut sorted = mult.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 3, 3]);
    }

    #[test]
    fn trivial_character_gives_degree() {
        let g: Graph = GroupCirculantSpec::new(vec![3, 4], vec![vec![1, 0], vec![2, 0], vec![0, 2]])
            .unwrap()
            .into();
        assert_eq!(g.spectrum().eigenvalues()[0], 3.0);
    }

    #[test]
    fn witnesses() {
        assert_eq!(repeated_eigenvalue_witness(&make_cycle(5).unwrap().into()), Some((1, 4)));
        assert_eq!(repeated_eigenvalue_witness(&make_cycle(4).unwrap().into()), Some((1, 3)));
        assert_eq!(repeated_eigenvalue_witness(&make_hypercube(3).unwrap().into()), Some((1, 2)));
        assert_eq!(repeated_eigenvalue_witness(&make_cycle(2).unwrap().into()), None);
    }

    #[test]
    fn adjacency_layouts() {
        let a = adjacency_matrix(&make_cycle(2).unwrap().into()).unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 0.0]));
        let c4 = adjacency_matrix(&make_cycle(4).unwrap().into()).unwrap();
        #[rustfmt::skip]
        let expect = DMatrix::from_row_slice(4, 4, &[
            0.0, 1.0, 0.0, 1.0,
            1.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 1.0,
            1.0, 0.0, 1.0, 0.0,
        ]);
        assert_eq!(c4, expect);
        // Q_2 under mixed-radix order 00, 01, 10, 11.
        let q2 = adjacency_matrix(&make_hypercube(2).unwrap().into()).unwrap();
        #[rustfmt::skip]
        let expect = DMatrix::from_row_slice(4, 4, &[
            0.0, 1.0, 1.0, 0.0,
            1.0, 0.0, 0.0, 1.0,
            1.0, 0.0, 0.0, 1.0,
            0.0, 1.0, 1.0, 0.0,
        ]);
        assert_eq!(q2, expect);
        let big: Graph = make_cycle(5000).unwrap().into();
        assert!(matches!(adjacency_matrix(&big), Err(QwalkError::ResourceLimit { .. })));
    }

    #[test]
    fn hadamard_examples() {
        let h2 = hadamard_matrix(2).unwrap();
        assert_eq!(h2.row(0), &[1, 1]);
        assert_eq!(h2.row(1), &[1, -1]);
        let h4 = hadamard_matrix(4).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let sign = if r >= 2 && c >= 2 { -1 } else { 1 };
                assert_eq!(h4.get(r, c), sign * h2.get(r % 2, c % 2));
            }
        }
        assert!(hadamard_matrix(3).is_err());
        assert!(hadamard_matrix(1).is_err());
    }

    #[test]
    fn fft_and_direct_spectra_agree() {
        // K_80 has 79 connection elements, so it takes the FFT route.
        let k = eigenvalues_circulant(&make_complete(80).unwrap());
        assert!((k.eigenvalues()[0] - 79.0).abs() < 1e-12);
        assert!(k.eigenvalues()[1..].iter().all(|&l| (l + 1.0).abs() < 1e-12));
        assert_eq!(k.distinct_count(), 2);
    }
}
