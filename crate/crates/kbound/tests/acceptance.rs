//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `--nocapture` to see them). The corpus is the nine named
//! graphs plus 200 seeded random connected graphs on 5..=12 vertices.
//!
//! Every tolerance is pinned here, in code.

use kbound_core::bounds::{
    self, framework_bound, laplacian_kpower_bound, min_rank_bound, minor_polynomial_bound,
    optimal_polynomial_bound, pair_catalogue, preset_polynomials, ratio_type_bound,
    theta_lower_bound, walk_ratio_bound, MatrixVectorPair, Tolerances,
};
use kbound_core::exact::{exact_alpha_k, exact_chi_k, DEFAULT_BUDGET};
use kbound_core::graph::{generators, power_graph, Graph};
use kbound_core::spectral::{
    cluster_spectrum, eigendecompose, group_inverse_psd, matrix_polynomial, Polynomial, SymMatrix,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const CORPUS_SEED: u64 = 0x6b626f756e64; // fixed so every run sees one corpus
const RANDOM_GRAPHS: usize = 200;
const RADII: [usize; 3] = [1, 2, 3];

fn tol() -> Tolerances {
    Tolerances::default()
}

fn named_corpus() -> Vec<(String, Graph)> {
    vec![
        ("K2".into(), generators::complete(2)),
        ("P3".into(), generators::path(3)),
        ("C4".into(), generators::cycle(4)),
        ("C5".into(), generators::cycle(5)),
        ("C6".into(), generators::cycle(6)),
        ("K1,3".into(), generators::star(3)),
        ("K3".into(), generators::complete(3)),
        ("Petersen".into(), generators::petersen()),
        ("Q3".into(), generators::hypercube(3)),
    ]
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let p = rng.random_range(0.25..0.7);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn full_corpus() -> Vec<(String, Graph)> {
    let mut corpus = named_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for i in 0..RANDOM_GRAPHS {
        let n = rng.random_range(5..=12);
        corpus.push((format!("R{i}"), random_connected(&mut rng, n)));
    }
    corpus
}

fn alpha(g: &Graph, k: usize) -> u64 {
    let r = exact_alpha_k(g, k, DEFAULT_BUDGET).expect("oracle within limits");
    assert!(!r.exhausted, "oracle budget must suffice on the corpus");
    r.value as u64
}

/// Criterion 1: every applicable bound's integer part dominates the exact
/// k-independence number on the whole corpus, for k in {1,2,3}.
#[test]
fn c1_soundness_suite() {
    let start = Instant::now();
    let tol = tol();
    let corpus = full_corpus();
    let mut evaluations = 0usize;
    let mut violations = Vec::new();
    let mut check = |name: &str, method: &str, k: usize, int_bound: u64, exact: u64| {
        evaluations += 1;
        if int_bound < exact {
            violations.push(format!("{method} on {name} k={k}: {int_bound} < {exact}"));
        }
    };
    for (name, g) in &corpus {
        for &k in &RADII {
            let exact = alpha(g, k);
            let r = optimal_polynomial_bound(g, k, &tol).unwrap();
            check(name, "optlp", k, r.integer_bound, exact);
            let r = laplacian_kpower_bound(g, k).unwrap();
            check(name, "laplacian", k, r.integer_bound, exact);
            if let Ok(r) = minor_polynomial_bound(g, k, &tol) {
                check(name, "minor", k, r.integer_bound, exact);
            }
            for preset in preset_polynomials(g, k, &tol).unwrap() {
                if let Ok(r) = ratio_type_bound(g, k, &preset.poly, &tol) {
                    check(name, "ratio", k, r.integer_bound, exact);
                }
                let a = SymMatrix::adjacency(g);
                if let Ok(r) = bounds::eigenvector_polynomial_bound(g, &a, 0, k, &preset.poly, &tol)
                {
                    check(name, "eigenpoly", k, r.integer_bound, exact);
                }
            }
            for pair in pair_catalogue(g, k, &tol) {
                let r = framework_bound(g, &pair).unwrap();
                check(name, "framework", k, r.integer_bound, exact);
            }
        }
    }
    assert!(
        violations.is_empty(),
        "acceptance C1 soundness-suite: FAIL — {} violations, first: {}",
        violations.len(),
        violations[0]
    );
    println!(
        "acceptance C1 soundness-suite: PASS — {} graphs, {} bound evaluations, 0 violations, {:.1}s",
        corpus.len(),
        evaluations,
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 2: the named tight cases agree with the oracle to 1e-6 before
/// flooring.
#[test]
fn c2_tightness_cases() {
    const TOL: f64 = 1e-6;
    let tol = tol();
    let petersen = generators::petersen();
    let c6 = generators::cycle(6);

    assert_eq!(alpha(&petersen, 1), 4);
    assert_eq!(alpha(&petersen, 2), 1);
    assert_eq!(alpha(&c6, 2), 2);

    let hoffman = ratio_type_bound(&petersen, 1, &Polynomial::monomial(1), &tol).unwrap();
    assert!(
        (hoffman.value - 4.0).abs() <= TOL,
        "Petersen ratio: {}",
        hoffman.value
    );

    let optlp = optimal_polynomial_bound(&petersen, 2, &tol).unwrap();
    assert!(
        (optlp.value - 1.0).abs() <= TOL,
        "Petersen optlp: {}",
        optlp.value
    );

    let minor = minor_polynomial_bound(&petersen, 1, &tol).unwrap();
    assert!(
        (minor.value - 4.0).abs() <= TOL,
        "Petersen minor: {}",
        minor.value
    );

    let lap = laplacian_kpower_bound(&petersen, 1).unwrap();
    assert!(
        (lap.value - 4.0).abs() <= TOL,
        "Petersen laplacian: {}",
        lap.value
    );

    let quad = Polynomial::new(vec![0.0, 1.0, 1.0]);
    let ratio = ratio_type_bound(&c6, 2, &quad, &tol).unwrap();
    assert!(
        (ratio.value - 2.0).abs() <= TOL,
        "C6 ratio: {}",
        ratio.value
    );

    println!("acceptance C2 tightness-cases: PASS — 5 tight values within 1e-6 of the oracle");
}

/// Criterion 3: the LP-optimized bound never exceeds the ratio-type bound
/// for any of the four presets (it optimizes over every admissible
/// polynomial, presets included).
#[test]
fn c3_lp_dominance() {
    const TOL: f64 = 1e-6;
    let tol = tol();
    let mut compared = 0usize;
    for (name, g) in &full_corpus() {
        for &k in &RADII {
            let presets = preset_polynomials(g, k, &tol).unwrap();
            let mut opt = None;
            for preset in presets {
                let Ok(ratio) = ratio_type_bound(g, k, &preset.poly, &tol) else {
                    continue;
                };
                let opt = opt.get_or_insert_with(|| optimal_polynomial_bound(g, k, &tol).unwrap());
                assert!(
                    opt.value <= ratio.value + TOL,
                    "acceptance C3: FAIL — optlp {} > ratio {} ({name} k={k} preset {})",
                    opt.value,
                    ratio.value,
                    preset.name
                );
                assert!(
                    opt.integer_bound <= ratio.integer_bound,
                    "acceptance C3: FAIL — floored optlp exceeds ratio on {name} k={k}"
                );
                compared += 1;
            }
        }
    }
    assert!(compared > 0);
    println!("acceptance C3 lp-dominance: PASS — {compared} (graph, k, preset) comparisons");
}

/// Criterion 4: the ratio-type bound coincides with the framework bound on
/// the pair (p(A) - lambda(p) I, e), reproducing its derivation.
#[test]
fn c4_ratio_is_a_framework_instance() {
    const TOL: f64 = 1e-7;
    let tol = tol();
    let mut compared = 0usize;
    for (name, g) in &full_corpus() {
        if g.regular_degree().is_none() {
            continue;
        }
        for &k in &RADII {
            for preset in preset_polynomials(g, k, &tol).unwrap() {
                let Ok(ratio) = ratio_type_bound(g, k, &preset.poly, &tol) else {
                    continue;
                };
                let a = SymMatrix::adjacency(g);
                let profile = cluster_spectrum(&eigendecompose(&a).unwrap(), tol.cluster);
                let lambda_p = profile.distinct()[1..]
                    .iter()
                    .map(|&(l, _)| preset.poly.eval(l))
                    .fold(f64::INFINITY, f64::min);
                let m = matrix_polynomial(&a, &preset.poly).add_scaled_identity(-lambda_p);
                let pair = MatrixVectorPair::new(g, m, vec![1.0; g.order()], k, &tol);
                assert!(
                    pair.is_valid(),
                    "shift pair must validate on {name} k={k} preset {}",
                    preset.name
                );
                let fw = framework_bound(g, &pair).unwrap();
                assert!(
                    (ratio.value - fw.value).abs() <= TOL,
                    "acceptance C4: FAIL — ratio {} vs framework {} on {name} k={k} preset {}",
                    ratio.value,
                    fw.value,
                    preset.name
                );
                compared += 1;
            }
        }
    }
    assert!(compared > 0);
    println!(
        "acceptance C4 ratio-framework-equivalence: PASS — {compared} comparisons within 1e-7"
    );
}

/// Random PSD matrix with a rotated controlled spectrum.
fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = if rng.random_bool(0.3) {
            0.0
        } else {
            rng.random_range(0.1..10.0)
        };
    }
    for _ in 0..3 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (s, c) = angle.sin_cos();
        for col in 0..n {
            let a = data[i * n + col];
            let b = data[j * n + col];
            data[i * n + col] = c * a - s * b;
            data[j * n + col] = s * a + c * b;
        }
        for row in 0..n {
            let a = data[row * n + i];
            let b = data[row * n + j];
            data[row * n + i] = c * a - s * b;
            data[row * n + j] = s * a + c * b;
        }
    }
    let copy = data.clone();
    SymMatrix::from_fn(n, |i, j| 0.5 * (copy[i * n + j] + copy[j * n + i]))
}

/// Criterion 5: group-inverse contract and eigenpair transfer on 100 random
/// PSD matrices with n <= 30.
#[test]
fn c5_group_inverse_contract() {
    const CONTRACT_TOL: f64 = 1e-8;
    const TRANSFER_TOL: f64 = 1e-7;
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 5);
    for trial in 0..100 {
        let n = rng.random_range(2..=30);
        let m = random_psd(&mut rng, n);
        let inv = group_inverse_psd(&m).unwrap();
        let scale_m = m.max_abs_entry().max(1.0);
        let scale_inv = inv.max_abs_entry().max(1.0);
        let mmm = m.mul_sym(&inv).mul_sym(&m);
        assert!(
            mmm.sub(&m).max_abs_entry() <= CONTRACT_TOL * scale_m,
            "acceptance C5: FAIL — M M# M != M at trial {trial}"
        );
        let imi = inv.mul_sym(&m).mul_sym(&inv);
        assert!(
            imi.sub(&inv).max_abs_entry() <= CONTRACT_TOL * scale_inv,
            "acceptance C5: FAIL — M# M M# != M# at trial {trial}"
        );
        let dec = eigendecompose(&m).unwrap();
        let top = dec.eigenvalues()[0];
        for i in 0..n {
            let lambda = dec.eigenvalues()[i];
            if lambda <= 1e-6 * top.max(1.0) {
                continue;
            }
            let y = dec.eigenvector(i);
            let got = inv.mul_vec(y);
            for u in 0..n {
                assert!(
                    (got[u] - y[u] / lambda).abs() <= TRANSFER_TOL / lambda,
                    "acceptance C5: FAIL — eigenpair transfer at trial {trial}"
                );
            }
        }
    }
    println!("acceptance C5 group-inverse-contract: PASS — 100 random PSD matrices (n <= 30)");
}

/// Criterion 6: walk-count ratio (exact integers) reconciles with the
/// matrix route `theta_lower_bound(p = x^{2k})` to 1e-9 relative.
#[test]
fn c6_walk_ratio_reconciliation() {
    const TOL: f64 = 1e-9;
    let tol = tol();
    let mut compared = 0usize;
    for (name, g) in &full_corpus() {
        for k in [1usize, 2] {
            let integer_route = walk_ratio_bound(g, k).unwrap().value;
            let matrix_route = theta_lower_bound(g, 2 * k, &Polynomial::monomial(2 * k), &tol)
                .unwrap()
                .value;
            assert!(
                (integer_route - matrix_route).abs() <= TOL * integer_route.abs(),
                "acceptance C6: FAIL — {integer_route} vs {matrix_route} on {name} k={k}"
            );
            compared += 1;
        }
    }
    println!("acceptance C6 walk-ratio-reconciliation: PASS — {compared} comparisons within 1e-9 relative");
}

/// Enumerates every partition of `0..n` via restricted growth strings.
fn for_each_partition(n: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn rec(rgs: &mut Vec<usize>, used: usize, n: usize, f: &mut impl FnMut(&[usize], usize)) {
        if rgs.len() == n {
            f(rgs, used);
            return;
        }
        for class in 0..=used {
            rgs.push(class);
            rec(rgs, used.max(class + 1), n, f);
            rgs.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), 0, n, f);
}

/// Criterion 7: the sum-of-squares coloring inequality holds for every
/// exhaustively generated k-distance coloring of every corpus graph with
/// n <= 8, against every catalogued valid pair.
#[test]
fn c7_coloring_inequality() {
    const TOL: f64 = 1e-7;
    let tol = tol();
    let mut colorings = 0usize;
    for (name, g) in &full_corpus() {
        let n = g.order();
        if n > 8 {
            continue;
        }
        for &k in &RADII {
            let pairs = pair_catalogue(g, k, &tol);
            assert!(!pairs.is_empty(), "catalogue empty on {name} k={k}");
            // Each pair's RHS does not depend on the coloring.
            let min_rhs = pairs
                .iter()
                .map(|pair| {
                    let q = pair.inverse_quadratic_form().unwrap();
                    let sum: f64 = (0..n)
                        .map(|u| pair.matrix.get(u, u) / (pair.vector[u] * pair.vector[u]))
                        .sum();
                    q * sum
                })
                .fold(f64::INFINITY, f64::min);
            for_each_partition(n, &mut |rgs, classes| {
                let mut sizes = vec![0u64; classes];
                for &c in rgs {
                    sizes[c] += 1;
                }
                // Valid k-distance coloring: every class k-independent.
                for u in 0..n {
                    for v in u + 1..n {
                        if rgs[u] == rgs[v] && g.distances().within(u, v, k as u32) {
                            return;
                        }
                    }
                }
                colorings += 1;
                let lhs: u64 = sizes.iter().map(|&s| s * s).sum();
                assert!(
                    lhs as f64 <= min_rhs + TOL,
                    "acceptance C7: FAIL — lhs {lhs} > rhs {min_rhs} on {name} k={k}"
                );
            });
        }
    }
    println!("acceptance C7 coloring-inequality: PASS — {colorings} k-distance colorings checked");
}

/// Criterion 8: oracle self-consistency — alpha_k via the power graph, the
/// chi * alpha pigeonhole, and the cycle closed form.
#[test]
fn c8_exact_oracle_self_consistency() {
    for (name, g) in &full_corpus() {
        for &k in &RADII {
            let direct = alpha(g, k);
            let via_power = alpha(&power_graph(g, k), 1);
            assert_eq!(
                direct, via_power,
                "acceptance C8: FAIL — power identity on {name} k={k}"
            );
            let chi = exact_chi_k(g, k, DEFAULT_BUDGET).unwrap();
            assert!(!chi.exhausted);
            assert!(
                chi.value as u64 * direct >= g.order() as u64,
                "acceptance C8: FAIL — pigeonhole on {name} k={k}"
            );
        }
    }
    // alpha_k(C_n) = floor(n/(k+1)), saturated at 1 once k+1 > n.
    for n in 3..=16 {
        let g = generators::cycle(n);
        for k in 1..=4 {
            assert_eq!(
                alpha(&g, k) as usize,
                (n / (k + 1)).max(1),
                "acceptance C8: FAIL — cycle pattern C{n} k={k}"
            );
        }
    }
    println!("acceptance C8 exact-oracle-self-consistency: PASS — power identity, pigeonhole, cycle pattern");
}

/// Criterion 9: the minimum-rank bound with default settings is sound over
/// GF(2) and GF(3) for k in {1,2}.
#[test]
fn c9_min_rank_soundness() {
    let mut checked = 0usize;
    for (name, g) in &full_corpus() {
        let ones = vec![1u64; g.order()];
        for k in [1usize, 2] {
            let exact = alpha(g, k);
            for field in [2u64, 3] {
                // Default instance: diag of ones, p(x) = x, so p(A) = A + I
                // and the diagonal is everywhere nonzero.
                let rank = min_rank_bound(g, k, field, &ones, &[0, 1]).unwrap() as u64;
                assert!(
                    rank >= exact,
                    "acceptance C9: FAIL — GF({field}) rank {rank} < alpha {exact} on {name} k={k}"
                );
                checked += 1;
            }
        }
    }
    println!(
        "acceptance C9 min-rank-soundness: PASS — {checked} rank evaluations over GF(2) and GF(3)"
    );
}
