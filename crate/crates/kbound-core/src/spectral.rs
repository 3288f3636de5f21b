//! Dense symmetric linear algebra: eigendecomposition by cyclic Jacobi
//! rotations, matrix polynomials, PSD tests, group inverses, and the
//! principal eigenpair of a connected graph.
//!
//! Everything here is deterministic: the Jacobi sweep order is fixed, so
//! identical inputs produce bit-identical decompositions.

use crate::graph::Graph;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use libm::{floor, sqrt};

/// Relative tolerance under which a slightly negative eigenvalue still
/// counts as positive semidefinite.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;
/// Eigenvalues at or below this fraction of the largest eigenvalue are
/// treated as zero when forming a group inverse.
pub const GROUP_INVERSE_RANK_CUTOFF: f64 = 1e-9;
/// Default absolute gap for clustering a spectrum into distinct eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
/// Default Jacobi sweep cap; exceeded only by pathological input.
pub const DEFAULT_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// Entry data length does not match the declared order.
    DimensionMismatch { expected: usize, got: usize },
    /// `entries[i][j] != entries[j][i]` at construction.
    AsymmetricEntry { row: usize, col: usize },
    /// Jacobi iteration failed to converge within the sweep cap.
    NonConvergence { sweeps: usize },
    /// A PSD-only operation received an indefinite matrix.
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    /// The operation requires a connected graph.
    Disconnected,
    /// The operation requires at least one edge.
    Edgeless,
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            SpectralError::AsymmetricEntry { row, col } => {
                write!(f, "entries ({row},{col}) and ({col},{row}) differ")
            }
            SpectralError::NonConvergence { sweeps } => {
                write!(f, "Jacobi iteration did not converge in {sweeps} sweeps")
            }
            SpectralError::NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "matrix is not PSD (min eigenvalue {min_eigenvalue:e})")
            }
            SpectralError::Disconnected => write!(f, "graph is disconnected"),
            SpectralError::Edgeless => write!(f, "graph has no edges"),
        }
    }
}

impl core::error::Error for SpectralError {}

/// A real symmetric matrix stored dense row-major. Symmetry is exact and
/// enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Wraps row-major entries, checking exact symmetry.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self, SpectralError> {
        if data.len() != n * n {
            return Err(SpectralError::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(SpectralError::AsymmetricEntry { row: i, col: j });
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    /// Builds from `f(i, j)` evaluated on `i <= j` and mirrored, so the
    /// result is exactly symmetric whatever `f` does.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// 0/1 adjacency matrix of a graph.
    pub fn adjacency(g: &Graph) -> Self {
        Self::from_fn(g.order(), |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.n + i]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Sum of all entries (`e^T M e`).
    pub fn grand_sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().fold(f64::INFINITY, |m, &x| m.min(x))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.data[i * n + j] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Quadratic form `x^T M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(&self.mul_vec(x), x)
    }

    /// `self + c * I`.
    pub fn add_scaled_identity(&self, c: f64) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// Symmetrized product. For commuting symmetric factors the raw product
    /// is symmetric up to rounding; averaging the two triangles restores
    /// exact symmetry while preserving exact zeros.
    pub fn mul_sym(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let raw = matmul(self.n, &self.data, &other.data);
        symmetrize(self.n, raw)
    }
}

impl fmt::Display for SymMatrix {
    /// Plain row-major text, one row per line (debugging only).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn matmul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn symmetrize(n: usize, mut raw: Vec<f64>) -> SymMatrix {
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (raw[i * n + j] + raw[j * n + i]);
            raw[i * n + j] = m;
            raw[j * n + i] = m;
        }
    }
    SymMatrix { n, data: raw }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

/// Integer power by repeated multiplication (exact for small exponents).
pub(crate) fn powi(x: f64, e: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Eigenvalues sorted descending with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    /// Column-major: eigenvector `i` occupies `vectors[i*n..(i+1)*n]`.
    vectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector paired with the i-th eigenvalue (unit length).
    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    /// `U f(Lambda) U^T` for an arbitrary spectral map `f`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n;
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| {
            let mut acc = 0.0;
            for (idx, &fl) in mapped.iter().enumerate() {
                if fl != 0.0 {
                    acc += fl * self.vectors[idx * n + i] * self.vectors[idx * n + j];
                }
            }
            acc
        })
    }

    /// Reconstructs `U Lambda U^T`; useful for residual checks.
    pub fn reconstruct(&self) -> SymMatrix {
        self.apply(|l| l)
    }
}

/// Decomposes with the default sweep cap.
pub fn eigendecompose(m: &SymMatrix) -> Result<SpectralDecomposition, SpectralError> {
    eigendecompose_with(m, DEFAULT_MAX_SWEEPS)
}

/// Cyclic Jacobi diagonalization with an explicit sweep cap.
pub fn eigendecompose_with(
    m: &SymMatrix,
    max_sweeps: usize,
) -> Result<SpectralDecomposition, SpectralError> {
    let n = m.order();
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut converged = false;
    for sweep in 0..max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].abs();
            }
        }
        if off == 0.0 {
            converged = true;
            break;
        }
        // First sweeps skip rotations on entries below a coarse threshold.
        let tresh = if sweep < 3 {
            0.2 * off / ((n * n) as f64)
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                // Entries negligible against both diagonal values are zeroed.
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + sqrt(1.0 + theta * theta));
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;
                let rotate = |a: &mut [f64], i: usize, j: usize| {
                    let g = a[i];
                    let h = a[j];
                    a[i] = g - s * (h + g * tau);
                    a[j] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut a, j * n + p, j * n + q);
                }
                for j in p + 1..q {
                    rotate(&mut a, p * n + j, j * n + q);
                }
                for j in q + 1..n {
                    rotate(&mut a, p * n + j, q * n + j);
                }
                for j in 0..n {
                    rotate(&mut v, j * n + p, j * n + q);
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    if !converged {
        // Final check: the cap may have been hit exactly at convergence.
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].abs();
            }
        }
        let scale = m.max_abs_entry().max(1.0);
        if off > 1e-12 * scale * (n as f64) {
            return Err(SpectralError::NonConvergence { sweeps: max_sweeps });
        }
    }

    // Sort descending; ties keep the Jacobi order for determinism.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[col * n + row] = v[row * n + src];
        }
    }
    Ok(SpectralDecomposition {
        n,
        eigenvalues,
        vectors,
    })
}

/// Evaluates `p(m)` by Horner iteration on matrices. Exact zero patterns of
/// the input survive: entries of `p(m)` at graph distance beyond `deg p`
/// stay exactly zero.
pub fn matrix_polynomial(m: &SymMatrix, p: &Polynomial) -> SymMatrix {
    let n = m.order();
    let coeffs = p.coefficients();
    if coeffs.is_empty() {
        return SymMatrix::zeros(n);
    }
    let k = coeffs.len() - 1;
    let mut result = SymMatrix::zeros(n).add_scaled_identity(coeffs[k]);
    for idx in (0..k).rev() {
        result = result.mul_sym(m).add_scaled_identity(coeffs[idx]);
    }
    result
}

/// PSD test: true iff the smallest eigenvalue is at least
/// `-tol * max(1, max |eigenvalue|)`.
pub fn is_psd(m: &SymMatrix, tol: f64) -> Result<bool, SpectralError> {
    let dec = eigendecompose(m)?;
    Ok(spectrum_is_psd(dec.eigenvalues(), tol))
}

/// Same test applied to an already computed spectrum.
pub fn spectrum_is_psd(eigenvalues: &[f64], tol: f64) -> bool {
    let scale = eigenvalues.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    eigenvalues.iter().all(|&x| x >= -tol * scale)
}

/// Group inverse of a PSD matrix: inverts eigenvalues above the rank cutoff
/// and annihilates the rest.
pub fn group_inverse_psd(m: &SymMatrix) -> Result<SymMatrix, SpectralError> {
    let dec = eigendecompose(m)?;
    group_inverse_from(&dec)
}

/// Group inverse computed from an existing decomposition of a PSD matrix.
pub fn group_inverse_from(dec: &SpectralDecomposition) -> Result<SymMatrix, SpectralError> {
    let eig = dec.eigenvalues();
    if !spectrum_is_psd(eig, DEFAULT_PSD_TOL) {
        let min = eig.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        return Err(SpectralError::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let largest = eig.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = GROUP_INVERSE_RANK_CUTOFF * largest;
    Ok(dec.apply(|lambda| if lambda > cutoff { 1.0 / lambda } else { 0.0 }))
}

/// Spectral radius and principal (Perron) eigenvector of a connected graph
/// with at least one edge. The vector is unit length with positive entries.
pub fn principal_eigenpair(g: &Graph) -> Result<(f64, Vec<f64>), SpectralError> {
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    if g.edge_count() == 0 {
        return Err(SpectralError::Edgeless);
    }
    let dec = eigendecompose(&SymMatrix::adjacency(g))?;
    let rho = dec.eigenvalues()[0];
    let mut y = dec.eigenvector(0).to_vec();
    if y.iter().sum::<f64>() < 0.0 {
        for v in &mut y {
            *v = -*v;
        }
    }
    Ok((rho, y))
}

/// Distinct eigenvalues with multiplicities, from greedy clustering of a
/// sorted spectrum: a new cluster starts when the gap exceeds `tol`, and the
/// cluster value is the mean of its members.
pub fn cluster_spectrum(dec: &SpectralDecomposition, tol: f64) -> EigenvalueProfile {
    cluster_values(dec.eigenvalues(), tol)
}

/// Clusters any descending-sorted list of values.
pub fn cluster_values(sorted_desc: &[f64], tol: f64) -> EigenvalueProfile {
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    while start < sorted_desc.len() {
        let mut end = start + 1;
        while end < sorted_desc.len() && sorted_desc[end - 1] - sorted_desc[end] <= tol {
            end += 1;
        }
        let sum: f64 = sorted_desc[start..end].iter().sum();
        distinct.push((sum / (end - start) as f64, end - start));
        start = end;
    }
    EigenvalueProfile { distinct }
}

/// The distinct spectrum of a matrix: strictly decreasing values paired with
/// multiplicities summing to the order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueProfile {
    distinct: Vec<(f64, usize)>,
}

impl EigenvalueProfile {
    /// `(value, multiplicity)` pairs, values strictly decreasing.
    pub fn distinct(&self) -> &[(f64, usize)] {
        &self.distinct
    }

    pub fn len(&self) -> usize {
        self.distinct.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distinct.is_empty()
    }

    /// Largest eigenvalue with its multiplicity.
    pub fn top(&self) -> (f64, usize) {
        self.distinct[0]
    }
}

/// Laplacian `L = D - A`.
pub fn laplacian(g: &Graph) -> SymMatrix {
    SymMatrix::from_fn(g.order(), |i, j| {
        if i == j {
            g.degree(i) as f64
        } else if g.has_edge(i, j) {
            -1.0
        } else {
            0.0
        }
    })
}

/// Real polynomial with coefficients stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// From coefficients `c_0, c_1, ...` (lowest degree first). Trailing
    /// zeros are permitted and kept.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "polynomial needs at least one coefficient"
        );
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Polynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree ignoring trailing zero coefficients (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0.0)
                    + other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Polynomial { coeffs }
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        Polynomial { coeffs }
    }

    /// `(a x + b) * self`.
    pub fn mul_linear(&self, a: f64, b: f64) -> Polynomial {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += b * c;
            coeffs[i + 1] += a * c;
        }
        Polynomial { coeffs }
    }
}

impl fmt::Display for Polynomial {
    /// Coefficients lowest degree first, e.g. `[-0.2, 0.1, 0.1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Floors a bound value with a small tolerance so exact-tight values never
/// round down past the true integer.
pub fn floor_with_tol(value: f64, tol: f64) -> u64 {
    let f = floor(value + tol);
    if f < 0.0 {
        0
    } else {
        f as u64
    }
}
