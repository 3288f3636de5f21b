//! Upper bounds on the k-independence number, all derived from one device:
//! a matrix-vector pair `(M, x)` whose matrix vanishes beyond distance `k`
//! in the graph. The group inverse of `M` then certifies
//! `alpha_k <= (x^T M# x) * max_u M_uu / x_u^2`, and every bound here is an
//! instance of that inequality for a particular choice of pair.
//!
//! The polynomial bounds choose `M = p(A)`; the optimal one searches over
//! the coefficients of `p` with a linear program. The PSD constraint
//! `p(A) >= 0` reduces exactly to `p(lambda) >= 0` over the distinct
//! eigenvalues, because `p(A) = U diag(p(lambda_i)) U^T` — this is what
//! turns the semidefinite program into an LP with no loss.

use crate::exact::{is_prime, rank_mod, ExactError};
use crate::graph::{line_graph, walk_counts, ColoringPartition, Graph, GraphError};
use crate::lp::{solve_lp, Constraint, LinearProgram, LpError, LpSolution, Relation, Sense};
use crate::spectral::{
    cluster_spectrum, dot, eigendecompose, floor_with_tol, group_inverse_from, laplacian,
    matrix_polynomial, powi, principal_eigenpair, spectrum_is_psd, EigenvalueProfile, Polynomial,
    SpectralError, SymMatrix, DEFAULT_CLUSTER_TOL, DEFAULT_PSD_TOL,
};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use libm::ceil;

/// Tolerance added before flooring a real bound, so exactly-tight values
/// never round down past the true integer.
pub const FLOOR_TOL: f64 = 1e-9;
/// Relative residual under which `x` counts as lying in the range of `M`.
pub const RANGE_TOL: f64 = 1e-8;
/// Entries of an eigenvector below this fraction of its norm count as zero.
pub const TOTAL_NONZERO_TOL: f64 = 1e-10;

/// Numerical tolerances shared by the bound computations. The CLI can
/// override these; library callers normally use `Tolerances::default()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative PSD slack (eigenvalues above `-psd * scale` pass).
    pub psd: f64,
    /// Absolute gap separating distinct eigenvalues.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psd: DEFAULT_PSD_TOL,
            cluster: DEFAULT_CLUSTER_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Framework,
    EigenPoly,
    OptLp,
    /// `k >= diameter` short-circuit of the optimal polynomial bound.
    Diameter,
    Ratio,
    Minor,
    Laplacian,
    MinRank,
    Theta,
    WalkRatio,
    ChiK,
    ChiKPrime,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Framework => "framework",
            Method::EigenPoly => "eigenpoly",
            Method::OptLp => "optlp",
            Method::Diameter => "diameter",
            Method::Ratio => "ratio",
            Method::Minor => "minor",
            Method::Laplacian => "laplacian",
            Method::MinRank => "minrank",
            Method::Theta => "theta",
            Method::WalkRatio => "walkratio",
            Method::ChiK => "chik",
            Method::ChiKPrime => "chikprime",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundError {
    Graph(GraphError),
    Spectral(SpectralError),
    Lp(LpError),
    Exact(ExactError),
    /// One or more pair validation flags failed, listed by name.
    InvalidPair {
        failed: Vec<&'static str>,
    },
    NotKIndependent,
    InvalidColoring,
    /// The weight matrix has support outside the graph's edges.
    InvalidWeightPattern {
        row: usize,
        col: usize,
    },
    /// The chosen eigenvector has a (numerically) zero entry.
    TotalNonzeroViolation {
        vertex: usize,
    },
    /// `p(A)` is not positive semidefinite; carries the worst mapped value.
    NotPsd {
        min_mapped: f64,
    },
    /// `p` is nonpositive where the bound needs it positive.
    NonPositiveAtEigenvalue {
        value: f64,
    },
    NonPositiveTrace {
        trace: f64,
    },
    /// Two vertices of different degree.
    NotRegular {
        u: usize,
        v: usize,
    },
    /// Disconnected regular graph: the top eigenvalue is not simple.
    MultiplicityAtTop {
        multiplicity: usize,
    },
    /// No non-top eigenvalue exists, so `lambda(p)` is undefined.
    NoSecondEigenvalue,
    /// `p(lambda_1) <= lambda(p)`.
    RatioNotApplicable {
        p_top: f64,
        lambda_p: f64,
    },
    /// Closed walk counts of the given length differ between two vertices.
    NotPartiallyWalkRegular {
        u: usize,
        v: usize,
        length: usize,
    },
    Edgeless,
    /// `deg p` exceeds the radius `k`.
    DegreeTooHigh {
        degree: usize,
        limit: usize,
    },
    /// `p(A)` has zero diagonal entries over the field at these vertices.
    ZeroDiagonal {
        vertices: Vec<usize>,
    },
    DiagonalLength {
        expected: usize,
        got: usize,
    },
    EigenIndexOutOfRange {
        index: usize,
        order: usize,
    },
    EmptySet,
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::Graph(e) => write!(f, "{e}"),
            BoundError::Spectral(e) => write!(f, "{e}"),
            BoundError::Lp(e) => write!(f, "LP solver: {e}"),
            BoundError::Exact(e) => write!(f, "{e}"),
            BoundError::InvalidPair { failed } => {
                write!(f, "pair validation failed:")?;
                for name in failed {
                    write!(f, " {name}")?;
                }
                Ok(())
            }
            BoundError::NotKIndependent => write!(f, "set is not k-independent"),
            BoundError::InvalidColoring => write!(f, "partition is not a k-distance coloring"),
            BoundError::InvalidWeightPattern { row, col } => {
                write!(
                    f,
                    "weight matrix nonzero at non-adjacent pair ({row},{col})"
                )
            }
            BoundError::TotalNonzeroViolation { vertex } => {
                write!(
                    f,
                    "TOTAL_NONZERO_VIOLATION: eigenvector vanishes at vertex {vertex}"
                )
            }
            BoundError::NotPsd { min_mapped } => {
                write!(f, "p(A) is not PSD (min mapped eigenvalue {min_mapped:e})")
            }
            BoundError::NonPositiveAtEigenvalue { value } => {
                write!(
                    f,
                    "polynomial is nonpositive ({value:e}) where positivity is required"
                )
            }
            BoundError::NonPositiveTrace { trace } => {
                write!(f, "tr p(A) = {trace:e} is not positive")
            }
            BoundError::NotRegular { u, v } => {
                write!(f, "graph is not regular: deg({u}) != deg({v})")
            }
            BoundError::MultiplicityAtTop { multiplicity } => {
                write!(
                    f,
                    "MULTIPLICITY_AT_TOP: top eigenvalue has multiplicity {multiplicity}"
                )
            }
            BoundError::NoSecondEigenvalue => {
                write!(f, "spectrum has a single distinct eigenvalue")
            }
            BoundError::RatioNotApplicable { p_top, lambda_p } => {
                write!(
                    f,
                    "p(lambda_1) = {p_top} does not exceed lambda(p) = {lambda_p}"
                )
            }
            BoundError::NotPartiallyWalkRegular { u, v, length } => write!(
                f,
                "closed {length}-walk counts differ at vertices {u} and {v}"
            ),
            BoundError::Edgeless => write!(f, "graph has no edges"),
            BoundError::DegreeTooHigh { degree, limit } => {
                write!(f, "polynomial degree {degree} exceeds k = {limit}")
            }
            BoundError::ZeroDiagonal { vertices } => {
                write!(f, "p(A) has zero diagonal at vertices {vertices:?}")
            }
            BoundError::DiagonalLength { expected, got } => {
                write!(f, "diagonal has {got} entries, expected {expected}")
            }
            BoundError::EigenIndexOutOfRange { index, order } => {
                write!(f, "eigenpair index {index} out of range for order {order}")
            }
            BoundError::EmptySet => write!(f, "vertex set is empty"),
        }
    }
}

impl core::error::Error for BoundError {}

impl From<GraphError> for BoundError {
    fn from(e: GraphError) -> Self {
        BoundError::Graph(e)
    }
}

impl From<SpectralError> for BoundError {
    fn from(e: SpectralError) -> Self {
        BoundError::Spectral(e)
    }
}

impl From<LpError> for BoundError {
    fn from(e: LpError) -> Self {
        BoundError::Lp(e)
    }
}

impl From<ExactError> for BoundError {
    fn from(e: ExactError) -> Self {
        BoundError::Exact(e)
    }
}

/// Validation flags of a matrix-vector pair, in the order the definition
/// states them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairFlags {
    /// `M` is positive semidefinite (within tolerance).
    pub psd_ok: bool,
    /// `M_ij = 0` exactly whenever `d(i,j) > k`.
    pub pattern_ok: bool,
    /// `x` lies in the range of `M`.
    pub range_ok: bool,
    /// Every entry of `x` is nonzero.
    pub nonzero_ok: bool,
}

impl PairFlags {
    pub fn all(&self) -> bool {
        self.psd_ok && self.pattern_ok && self.range_ok && self.nonzero_ok
    }

    pub fn failed(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.psd_ok {
            out.push("psd_ok");
        }
        if !self.pattern_ok {
            out.push("pattern_ok");
        }
        if !self.range_ok {
            out.push("range_ok");
        }
        if !self.nonzero_ok {
            out.push("nonzero_ok");
        }
        out
    }

    pub fn as_list(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("psd_ok", self.psd_ok),
            ("pattern_ok", self.pattern_ok),
            ("range_ok", self.range_ok),
            ("nonzero_ok", self.nonzero_ok),
        ]
    }
}

/// A pair `(M, x)` claimed to lie in the admissible set for radius `k`:
/// `M` PSD with support inside distance `k`, and `x` a total nonzero vector
/// in the range of `M`. Validation happens at construction; the group
/// inverse is cached when `M` is PSD.
#[derive(Debug, Clone)]
pub struct MatrixVectorPair {
    pub matrix: SymMatrix,
    pub vector: Vec<f64>,
    pub k: usize,
    pub validation: PairFlags,
    group_inverse: Option<SymMatrix>,
}

impl MatrixVectorPair {
    pub fn new(g: &Graph, matrix: SymMatrix, vector: Vec<f64>, k: usize, tol: &Tolerances) -> Self {
        let n = g.order();
        assert_eq!(matrix.order(), n, "matrix order must match the graph");
        assert_eq!(vector.len(), n, "vector length must match the graph");
        assert!(k >= 1, "pair radius must be at least 1");

        let mut pattern_ok = true;
        'outer: for i in 0..n {
            for j in i + 1..n {
                if !g.distances().within(i, j, k as u32) && matrix.get(i, j) != 0.0 {
                    pattern_ok = false;
                    break 'outer;
                }
            }
        }

        let nonzero_ok = vector.iter().all(|&x| x != 0.0);

        let (psd_ok, group_inverse) = match eigendecompose(&matrix) {
            Ok(dec) => {
                if spectrum_is_psd(dec.eigenvalues(), tol.psd) {
                    (true, group_inverse_from(&dec).ok())
                } else {
                    (false, None)
                }
            }
            Err(_) => (false, None),
        };

        let range_ok = match &group_inverse {
            Some(minv) => {
                let projected = matrix.mul_vec(&minv.mul_vec(&vector));
                let residual: Vec<f64> =
                    vector.iter().zip(&projected).map(|(x, p)| x - p).collect();
                let norm_x = crate::spectral::norm2(&vector);
                crate::spectral::norm2(&residual) <= RANGE_TOL * norm_x.max(f64::MIN_POSITIVE)
            }
            None => false,
        };

        MatrixVectorPair {
            matrix,
            vector,
            k,
            validation: PairFlags {
                psd_ok,
                pattern_ok,
                range_ok,
                nonzero_ok,
            },
            group_inverse,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validation.all()
    }

    /// `x^T M# x`; available once the pair validated as PSD.
    pub fn inverse_quadratic_form(&self) -> Option<f64> {
        self.group_inverse
            .as_ref()
            .map(|minv| minv.quadratic_form(&self.vector))
    }
}

/// The certificate realizing a bound.
#[derive(Debug, Clone)]
pub enum Certificate {
    Polynomial(Polynomial),
    Pair(Box<MatrixVectorPair>),
    None,
}

impl Certificate {
    pub fn digest(&self) -> String {
        match self {
            Certificate::Polynomial(p) => format!("p={p}"),
            Certificate::Pair(pair) => format!("pair(n={};k={})", pair.matrix.order(), pair.k),
            Certificate::None => String::from("-"),
        }
    }
}

/// A certified upper bound on `alpha_k`, with the certificate that realizes
/// it and the list of preconditions that were checked.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub method: Method,
    pub value: f64,
    /// `floor(value + FLOOR_TOL)`.
    pub integer_bound: u64,
    pub certificate: Certificate,
    pub assumptions_checked: Vec<(&'static str, bool)>,
}

impl BoundReport {
    fn new(
        method: Method,
        value: f64,
        certificate: Certificate,
        assumptions_checked: Vec<(&'static str, bool)>,
    ) -> Self {
        debug_assert!(value.is_finite(), "bound values must be finite");
        BoundReport {
            method,
            value,
            integer_bound: floor_with_tol(value, FLOOR_TOL),
            certificate,
            assumptions_checked,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaTarget {
    Theta,
    ThetaPrime,
}

impl fmt::Display for ThetaTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaTarget::Theta => f.write_str("theta"),
            ThetaTarget::ThetaPrime => f.write_str("theta_prime"),
        }
    }
}

/// A lower bound on the Lovasz (or Schrijver) theta function of the
/// complement of `G^power`.
#[derive(Debug, Clone)]
pub struct ThetaLowerReport {
    pub target: ThetaTarget,
    /// The bound concerns the complement of `G^power`.
    pub power: usize,
    pub value: f64,
    pub certificate: Polynomial,
}

impl ThetaLowerReport {
    pub fn graph_description(&self) -> String {
        format!("complement(G^{})", self.power)
    }
}

/// Lower bounds on the distance-k chromatic number (or index).
#[derive(Debug, Clone)]
pub struct ChiKReport {
    /// `n * p(d) / tr p(A)` — the trace route.
    pub value: f64,
    /// `n / upper-bound-on-alpha_k`, for comparison, when computable.
    pub alpha_route: Option<f64>,
    /// `ceil(value - FLOOR_TOL)`.
    pub integer_lower: u64,
    pub certificate: Polynomial,
}

impl ChiKReport {
    fn new(value: f64, alpha_route: Option<f64>, certificate: Polynomial) -> Self {
        let c = ceil(value - FLOOR_TOL);
        ChiKReport {
            value,
            alpha_route,
            integer_lower: if c < 0.0 { 0 } else { c as u64 },
            certificate,
        }
    }
}

/// Diagonals of `A^0 .. A^t` (exact: the entries are walk counts well below
/// 2^53 for the orders handled here).
fn diag_powers(g: &Graph, t: usize) -> Vec<Vec<f64>> {
    let a = SymMatrix::adjacency(g);
    let mut out = Vec::with_capacity(t + 1);
    let mut cur = SymMatrix::identity(g.order());
    out.push(cur.diag());
    for _ in 0..t {
        cur = cur.mul_sym(&a);
        out.push(cur.diag());
    }
    out
}

fn require_regular(g: &Graph) -> Result<usize, BoundError> {
    let d = g.degree(0);
    for u in 1..g.order() {
        if g.degree(u) != d {
            return Err(BoundError::NotRegular { u: 0, v: u });
        }
    }
    Ok(d)
}

fn check_degree(p: &Polynomial, k: usize) -> Result<(), BoundError> {
    if p.degree() > k {
        return Err(BoundError::DegreeTooHigh {
            degree: p.degree(),
            limit: k,
        });
    }
    Ok(())
}

/// Theorem-level bound from a validated pair:
/// `alpha_k <= (x^T M# x) * max_u M_uu / x_u^2`.
pub fn framework_bound(g: &Graph, pair: &MatrixVectorPair) -> Result<BoundReport, BoundError> {
    assert_eq!(pair.matrix.order(), g.order());
    if !pair.is_valid() {
        return Err(BoundError::InvalidPair {
            failed: pair.validation.failed(),
        });
    }
    let q = pair.inverse_quadratic_form().expect("valid pair has M#");
    let ratio_max = (0..g.order())
        .map(|u| pair.matrix.get(u, u) / (pair.vector[u] * pair.vector[u]))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundReport::new(
        Method::Framework,
        q * ratio_max,
        Certificate::Pair(Box::new(pair.clone())),
        pair.validation.as_list(),
    ))
}

/// Per-set form of the framework inequality: for a k-independent `S`,
/// `|S|^2 <= (x^T M# x) * sum_{u in S} M_uu / x_u^2`. Returns the right
/// hand side.
pub fn set_certificate_bound(
    g: &Graph,
    pair: &MatrixVectorPair,
    s: &[usize],
) -> Result<f64, BoundError> {
    if !pair.is_valid() {
        return Err(BoundError::InvalidPair {
            failed: pair.validation.failed(),
        });
    }
    if !crate::graph::is_k_independent(g, s, pair.k)? {
        return Err(BoundError::NotKIndependent);
    }
    let q = pair.inverse_quadratic_form().expect("valid pair has M#");
    let sum: f64 = s
        .iter()
        .map(|&u| pair.matrix.get(u, u) / (pair.vector[u] * pair.vector[u]))
        .sum();
    let rhs = q * sum;
    let cardinality = s.len() as f64;
    debug_assert!(cardinality * cardinality <= rhs + 1e-7);
    Ok(rhs)
}

/// Outcome of the sum-of-squares coloring inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColoringCheck {
    /// `sum_i |V_i|^2`.
    pub lhs: u64,
    /// `(x^T M# x) * sum_u M_uu / x_u^2`.
    pub rhs: f64,
    pub holds: bool,
}

/// Coloring form of the framework inequality: for any k-distance coloring,
/// `sum |V_i|^2` is at most the full-vertex-sum right hand side.
pub fn coloring_sum_squares_check(
    g: &Graph,
    pair: &MatrixVectorPair,
    part: &ColoringPartition,
) -> Result<ColoringCheck, BoundError> {
    if !pair.is_valid() {
        return Err(BoundError::InvalidPair {
            failed: pair.validation.failed(),
        });
    }
    let at_pair_radius = ColoringPartition {
        classes: part.classes.clone(),
        k: pair.k,
    };
    if !crate::graph::validate_coloring(g, &at_pair_radius)? {
        return Err(BoundError::InvalidColoring);
    }
    let q = pair.inverse_quadratic_form().expect("valid pair has M#");
    let sum: f64 = (0..g.order())
        .map(|u| pair.matrix.get(u, u) / (pair.vector[u] * pair.vector[u]))
        .sum();
    let rhs = q * sum;
    let lhs: u64 = part
        .classes
        .iter()
        .map(|c| (c.len() * c.len()) as u64)
        .sum();
    Ok(ColoringCheck {
        lhs,
        rhs,
        holds: lhs as f64 <= rhs + 1e-7,
    })
}

/// Eigenvector route: for a weight matrix supported on the edges with a
/// total nonzero eigenvector `y` for its `eigen_index`-th eigenvalue, and a
/// degree-<=k polynomial with `p(A)` PSD and `p(lambda) > 0`,
/// `alpha_k <= (y^T y / p(lambda)) * max_u p(A)_uu / y_u^2`.
pub fn eigenvector_polynomial_bound(
    g: &Graph,
    weight: &SymMatrix,
    eigen_index: usize,
    k: usize,
    p: &Polynomial,
    tol: &Tolerances,
) -> Result<BoundReport, BoundError> {
    let n = g.order();
    assert_eq!(weight.order(), n);
    check_degree(p, k)?;
    for i in 0..n {
        for j in i + 1..n {
            if !g.distances().within(i, j, 1) && weight.get(i, j) != 0.0 {
                return Err(BoundError::InvalidWeightPattern { row: i, col: j });
            }
        }
    }
    if eigen_index >= n {
        return Err(BoundError::EigenIndexOutOfRange {
            index: eigen_index,
            order: n,
        });
    }
    let dec = eigendecompose(weight)?;
    let lambda = dec.eigenvalues()[eigen_index];
    let y = dec.eigenvector(eigen_index);
    let norm_y = crate::spectral::norm2(y);
    if let Some(vertex) = (0..n).find(|&u| y[u].abs() <= TOTAL_NONZERO_TOL * norm_y) {
        return Err(BoundError::TotalNonzeroViolation { vertex });
    }
    let p_lambda = p.eval(lambda);
    if p_lambda <= 0.0 {
        return Err(BoundError::NonPositiveAtEigenvalue { value: p_lambda });
    }
    let mapped: Vec<f64> = dec.eigenvalues().iter().map(|&l| p.eval(l)).collect();
    if !spectrum_is_psd(&mapped, tol.psd) {
        let min = mapped.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        return Err(BoundError::NotPsd { min_mapped: min });
    }
    let pa = matrix_polynomial(weight, p);
    let ratio_max = (0..n)
        .map(|u| pa.get(u, u) / (y[u] * y[u]))
        .fold(f64::NEG_INFINITY, f64::max);
    let value = dot(y, y) / p_lambda * ratio_max;
    Ok(BoundReport::new(
        Method::EigenPoly,
        value,
        Certificate::Polynomial(p.clone()),
        vec![
            ("weight_pattern", true),
            ("total_nonzero", true),
            ("p_at_lambda_positive", true),
            ("p_of_A_psd", true),
        ],
    ))
}

/// Optimal polynomial bound on a connected graph: maximizes `p(rho)` over
/// degree-<=k polynomials subject to `p(A)_uu <= y_u^2` and the PSD
/// constraints `p(lambda) >= 0` at the distinct eigenvalues; the bound is
/// one over the optimum. Returns `(value, certificate, used_diameter)`.
fn optimal_polynomial_connected(
    g: &Graph,
    k: usize,
    tol: &Tolerances,
) -> Result<(f64, Option<Polynomial>, bool), BoundError> {
    let n = g.order();
    let diameter = g.diameter().expect("connected graph has a diameter") as usize;
    if k >= diameter {
        // The power graph is complete, so alpha_k = 1 outright.
        return Ok((1.0, None, true));
    }
    let (rho, y) = principal_eigenpair(g)?;
    let dec = eigendecompose(&SymMatrix::adjacency(g))?;
    let profile = cluster_spectrum(&dec, tol.cluster);
    let diags = diag_powers(g, k);

    let objective: Vec<f64> = (0..=k).map(|i| powi(rho, i)).collect();
    let mut constraints = Vec::with_capacity(n + profile.len());
    for u in 0..n {
        let coeffs: Vec<f64> = (0..=k).map(|i| diags[i][u]).collect();
        constraints.push(Constraint::new(coeffs, Relation::Le, y[u] * y[u]));
    }
    for &(lambda, _) in profile.distinct() {
        let coeffs: Vec<f64> = (0..=k).map(|i| powi(lambda, i)).collect();
        constraints.push(Constraint::new(coeffs, Relation::Ge, 0.0));
    }
    let lp = LinearProgram {
        sense: Sense::Maximize,
        objective,
        constraints,
    };
    // Feasible (the constant min_u y_u^2 qualifies) and bounded: the
    // diagonal rows force tr p(A) <= sum y_u^2 = 1, and PSD then caps
    // p(rho) <= tr p(A), so the optimum lies in (0, 1].
    let optimum = match solve_lp(&lp)? {
        LpSolution::Optimal(opt) => opt,
        LpSolution::Infeasible => {
            return Err(BoundError::Lp(LpError::Validation {
                check: "optlp program reported infeasible",
            }))
        }
        LpSolution::Unbounded => {
            return Err(BoundError::Lp(LpError::Validation {
                check: "optlp program reported unbounded",
            }))
        }
    };
    if optimum.value <= 0.0 {
        return Err(BoundError::Lp(LpError::Validation {
            check: "optlp optimum must be positive",
        }));
    }
    Ok((
        1.0 / optimum.value,
        Some(Polynomial::new(optimum.point)),
        false,
    ))
}

/// LP-optimized polynomial bound. Disconnected graphs are bounded per
/// component and summed (`alpha_k` is additive over components); when the
/// graph is connected and `k` reaches its diameter the exact value 1 is
/// reported with the `diameter` method tag.
pub fn optimal_polynomial_bound(
    g: &Graph,
    k: usize,
    tol: &Tolerances,
) -> Result<BoundReport, BoundError> {
    assert!(k >= 1, "optimal_polynomial_bound requires k >= 1");
    let components = g.components();
    if components.len() == 1 {
        let (value, cert, used_diameter) = optimal_polynomial_connected(g, k, tol)?;
        let method = if used_diameter {
            Method::Diameter
        } else {
            Method::OptLp
        };
        let certificate = match cert {
            Some(p) => Certificate::Polynomial(p),
            None => Certificate::None,
        };
        return Ok(BoundReport::new(
            method,
            value,
            certificate,
            vec![("connected", true)],
        ));
    }
    let mut total = 0.0;
    for comp in &components {
        let sub = g.induced_subgraph(comp)?;
        let (value, _, _) = optimal_polynomial_connected(&sub, k, tol)?;
        total += value;
    }
    Ok(BoundReport::new(
        Method::OptLp,
        total,
        Certificate::None,
        vec![("connected", false), ("components_summed", true)],
    ))
}

/// Ratio-type bound for regular graphs:
/// `alpha_k <= n (max_u p(A)_uu - lambda(p)) / (p(lambda_1) - lambda(p))`,
/// where `lambda(p)` is the minimum of `p` over the non-top distinct
/// eigenvalues.
pub fn ratio_type_bound(
    g: &Graph,
    k: usize,
    p: &Polynomial,
    tol: &Tolerances,
) -> Result<BoundReport, BoundError> {
    require_regular(g)?;
    check_degree(p, k)?;
    let dec = eigendecompose(&SymMatrix::adjacency(g))?;
    let profile = cluster_spectrum(&dec, tol.cluster);
    let (lambda1, top_mult) = profile.top();
    if top_mult > 1 {
        return Err(BoundError::MultiplicityAtTop {
            multiplicity: top_mult,
        });
    }
    if profile.len() < 2 {
        return Err(BoundError::NoSecondEigenvalue);
    }
    let lambda_p = profile.distinct()[1..]
        .iter()
        .map(|&(l, _)| p.eval(l))
        .fold(f64::INFINITY, f64::min);
    let p_top = p.eval(lambda1);
    if p_top <= lambda_p {
        return Err(BoundError::RatioNotApplicable { p_top, lambda_p });
    }
    let pa = matrix_polynomial(&SymMatrix::adjacency(g), p);
    let max_diag = pa.diag().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let n = g.order() as f64;
    let value = n * (max_diag - lambda_p) / (p_top - lambda_p);
    Ok(BoundReport::new(
        Method::Ratio,
        value,
        Certificate::Polynomial(p.clone()),
        vec![
            ("regular", true),
            ("simple_top_eigenvalue", true),
            ("p_top_exceeds_lambda_p", true),
        ],
    ))
}

/// Minor-polynomial bound: minimizes `tr f(A)` over degree-<=k polynomials
/// with `f(lambda_1) = 1` and `f >= 0` on the rest of the spectrum. Valid on
/// regular graphs whose closed walk counts of every length up to `k` are
/// vertex-independent (the constant-row-sum hypothesis needs regularity even
/// at k = 1, where the walk-count condition alone is vacuous).
pub fn minor_polynomial_bound(
    g: &Graph,
    k: usize,
    tol: &Tolerances,
) -> Result<BoundReport, BoundError> {
    assert!(k >= 1, "minor_polynomial_bound requires k >= 1");
    require_regular(g)?;
    let diags = diag_powers(g, k);
    for (length, diag) in diags.iter().enumerate().skip(2) {
        if let Some(v) = (1..g.order()).find(|&u| (diag[u] - diag[0]).abs() > 1e-9) {
            return Err(BoundError::NotPartiallyWalkRegular { u: 0, v, length });
        }
    }
    let dec = eigendecompose(&SymMatrix::adjacency(g))?;
    let profile = cluster_spectrum(&dec, tol.cluster);
    let (lambda1, _) = profile.top();

    // minimize sum_j m_j f(lambda_j) over the coefficients of f.
    let objective: Vec<f64> = (0..=k)
        .map(|i| {
            profile
                .distinct()
                .iter()
                .map(|&(l, m)| m as f64 * powi(l, i))
                .sum()
        })
        .collect();
    let mut constraints = Vec::with_capacity(profile.len() + 1);
    constraints.push(Constraint::new(
        (0..=k).map(|i| powi(lambda1, i)).collect(),
        Relation::Eq,
        1.0,
    ));
    for &(lambda, _) in profile.distinct() {
        constraints.push(Constraint::new(
            (0..=k).map(|i| powi(lambda, i)).collect(),
            Relation::Ge,
            0.0,
        ));
    }
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective,
        constraints,
    };
    let optimum = match solve_lp(&lp)? {
        LpSolution::Optimal(opt) => opt,
        _ => {
            return Err(BoundError::Lp(LpError::Validation {
                check: "minor program must have an optimum",
            }))
        }
    };
    Ok(BoundReport::new(
        Method::Minor,
        optimum.value,
        Certificate::Polynomial(Polynomial::new(optimum.point)),
        vec![("regular", true), ("partially_walk_regular", true)],
    ))
}

/// Laplacian route: with `mu` the largest Laplacian eigenvalue, any
/// k-independent `S` obeys `|S| <= n (mu^k - d_k(S)) / mu^k` where `d_k(S)`
/// averages `diag(L^k)` over `S`. The set-free bound scans `s` smallest
/// diagonal entries, which minimize the average over size-s sets.
pub fn laplacian_kpower_bound(g: &Graph, k: usize) -> Result<BoundReport, BoundError> {
    assert!(k >= 1, "laplacian_kpower_bound requires k >= 1");
    if g.edge_count() == 0 {
        return Err(BoundError::Edgeless);
    }
    let (mu_k, diag) = laplacian_power_diag(g, k)?;
    let mut sorted = diag;
    sorted.sort_by(f64::total_cmp);
    let n = g.order() as f64;
    let mut best = 0usize;
    let mut prefix = 0.0;
    for s in 1..=sorted.len() {
        prefix += sorted[s - 1];
        let mean = prefix / s as f64;
        let rhs = n * (mu_k - mean) / mu_k;
        if s as f64 <= rhs + FLOOR_TOL {
            best = s;
        }
    }
    Ok(BoundReport::new(
        Method::Laplacian,
        best as f64,
        Certificate::None,
        vec![("has_edge", true)],
    ))
}

/// Per-set form of the Laplacian bound: returns
/// `n (mu^k - d_k(S)) / mu^k` for a user-supplied nonempty set.
pub fn laplacian_set_bound(g: &Graph, k: usize, s: &[usize]) -> Result<f64, BoundError> {
    assert!(k >= 1);
    if g.edge_count() == 0 {
        return Err(BoundError::Edgeless);
    }
    if s.is_empty() {
        return Err(BoundError::EmptySet);
    }
    for &v in s {
        if v >= g.order() {
            return Err(BoundError::Graph(GraphError::VertexOutOfRange {
                vertex: v,
                order: g.order(),
            }));
        }
    }
    let (mu_k, diag) = laplacian_power_diag(g, k)?;
    let mean = s.iter().map(|&u| diag[u]).sum::<f64>() / s.len() as f64;
    Ok(g.order() as f64 * (mu_k - mean) / mu_k)
}

fn laplacian_power_diag(g: &Graph, k: usize) -> Result<(f64, Vec<f64>), BoundError> {
    let l = laplacian(g);
    let dec = eigendecompose(&l)?;
    let mu = dec.eigenvalues()[0];
    let mut power = l.clone();
    for _ in 1..k {
        power = power.mul_sym(&l);
    }
    Ok((powi(mu, k), power.diag()))
}

/// Theta-function lower bound: for `p(A)` PSD with positive trace,
/// `theta(complement(G^k)) >= e^T p(A) e / tr p(A)`; when `p(A)` is also
/// entrywise nonnegative the same value bounds Schrijver's theta-prime.
pub fn theta_lower_bound(
    g: &Graph,
    k: usize,
    p: &Polynomial,
    tol: &Tolerances,
) -> Result<ThetaLowerReport, BoundError> {
    assert!(k >= 1, "theta_lower_bound requires k >= 1");
    check_degree(p, k)?;
    let a = SymMatrix::adjacency(g);
    let dec = eigendecompose(&a)?;
    let mapped: Vec<f64> = dec.eigenvalues().iter().map(|&l| p.eval(l)).collect();
    if !spectrum_is_psd(&mapped, tol.psd) {
        let min = mapped.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        return Err(BoundError::NotPsd { min_mapped: min });
    }
    let pa = matrix_polynomial(&a, p);
    let trace = pa.trace();
    if trace <= 0.0 {
        return Err(BoundError::NonPositiveTrace { trace });
    }
    let value = pa.grand_sum() / trace;
    let entry_scale = pa.max_abs_entry().max(1.0);
    let target = if pa.min_entry() >= -1e-9 * entry_scale {
        ThetaTarget::ThetaPrime
    } else {
        ThetaTarget::Theta
    };
    Ok(ThetaLowerReport {
        target,
        power: k,
        value,
        certificate: p.clone(),
    })
}

/// Walk-count lower bound on theta-prime of the complement of `G^{2k}`:
/// `w_{2k}(G) / c_{2k}(G)`, computed in exact integers.
pub fn walk_ratio_bound(g: &Graph, k: usize) -> Result<ThetaLowerReport, BoundError> {
    assert!(k >= 1, "walk_ratio_bound requires k >= 1");
    if g.edge_count() == 0 {
        return Err(BoundError::Edgeless);
    }
    let counts = walk_counts(g, 2 * k)?;
    debug_assert!(
        counts.closed > 0,
        "a graph with an edge has closed even walks"
    );
    Ok(ThetaLowerReport {
        target: ThetaTarget::ThetaPrime,
        power: 2 * k,
        value: counts.total as f64 / counts.closed as f64,
        certificate: Polynomial::monomial(2 * k),
    })
}

/// Chromatic lower bound for regular graphs: any k-distance coloring has at
/// least `n p(d) / tr p(A)` classes. The report also carries
/// `n / alpha_k-upper-bound` for comparison.
pub fn chi_k_lower_bound(
    g: &Graph,
    k: usize,
    p: &Polynomial,
    tol: &Tolerances,
) -> Result<ChiKReport, BoundError> {
    assert!(k >= 1, "chi_k_lower_bound requires k >= 1");
    let d = require_regular(g)?;
    check_degree(p, k)?;
    let a = SymMatrix::adjacency(g);
    let dec = eigendecompose(&a)?;
    let mapped: Vec<f64> = dec.eigenvalues().iter().map(|&l| p.eval(l)).collect();
    if !spectrum_is_psd(&mapped, tol.psd) {
        let min = mapped.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        return Err(BoundError::NotPsd { min_mapped: min });
    }
    let p_d = p.eval(d as f64);
    if p_d <= 0.0 {
        return Err(BoundError::NonPositiveAtEigenvalue { value: p_d });
    }
    let trace = matrix_polynomial(&a, p).trace();
    if trace <= 0.0 {
        return Err(BoundError::NonPositiveTrace { trace });
    }
    let n = g.order() as f64;
    let value = n * p_d / trace;
    let alpha_route = optimal_polynomial_bound(g, k, tol)
        .ok()
        .map(|r| n / r.value);
    Ok(ChiKReport::new(value, alpha_route, p.clone()))
}

/// Chromatic-index lower bound via the line graph:
/// `chi'_k(G) = chi_k(L(G))`.
pub fn chi_k_prime_lower_bound(
    g: &Graph,
    k: usize,
    p: &Polynomial,
    tol: &Tolerances,
) -> Result<ChiKReport, BoundError> {
    let line = line_graph(g)?;
    chi_k_lower_bound(&line, k, p, tol)
}

/// Minimum-rank bound over GF(field_char): builds the adjacency matrix with
/// a user diagonal, applies a degree-<=k polynomial over the field, and
/// returns its rank, which upper-bounds `alpha_k` whenever every diagonal
/// entry of `p(A)` is nonzero.
pub fn min_rank_bound(
    g: &Graph,
    k: usize,
    field_char: u64,
    diag: &[u64],
    p_coeffs: &[u64],
) -> Result<usize, BoundError> {
    assert!(k >= 1, "min_rank_bound requires k >= 1");
    if !is_prime(field_char) {
        return Err(BoundError::Exact(ExactError::NotPrime {
            modulus: field_char,
        }));
    }
    let n = g.order();
    if diag.len() != n {
        return Err(BoundError::DiagonalLength {
            expected: n,
            got: diag.len(),
        });
    }
    let q = field_char;
    let coeffs: Vec<u64> = p_coeffs.iter().map(|&c| c % q).collect();
    let degree = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
    if degree > k {
        return Err(BoundError::DegreeTooHigh { degree, limit: k });
    }
    if coeffs.is_empty() {
        return Err(BoundError::ZeroDiagonal {
            vertices: (0..n).collect(),
        });
    }

    // Adjacency over the field, with the user diagonal.
    let a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        diag[i] % q
                    } else if g.has_edge(i, j) {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();

    // Horner over GF(q).
    let mut result: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { coeffs[degree] } else { 0 })
                .collect()
        })
        .collect();
    for idx in (0..degree).rev() {
        let mut next: Vec<Vec<u64>> = vec![vec![0; n]; n];
        for i in 0..n {
            for kk in 0..n {
                let r = result[i][kk];
                if r == 0 {
                    continue;
                }
                for j in 0..n {
                    let add = (r as u128 * a[kk][j] as u128 % q as u128) as u64;
                    next[i][j] = (next[i][j] + add) % q;
                }
            }
        }
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = (row[i] + coeffs[idx]) % q;
        }
        result = next;
    }

    let zero_diag: Vec<usize> = (0..n).filter(|&u| result[u][u] == 0).collect();
    if !zero_diag.is_empty() {
        return Err(BoundError::ZeroDiagonal {
            vertices: zero_diag,
        });
    }
    Ok(rank_mod(result, q))
}

/// A named default polynomial for the non-optimizing entry points.
#[derive(Debug, Clone)]
pub struct PresetPolynomial {
    pub name: &'static str,
    pub poly: Polynomial,
}

/// The preset catalogue for radius `k`: `x^k`, `x^k + x^{k-1}`,
/// `(x - lambda_min)^k`, and a shifted Chebyshev polynomial, the latter two
/// built from the graph's distinct spectrum.
pub fn preset_polynomials(
    g: &Graph,
    k: usize,
    tol: &Tolerances,
) -> Result<Vec<PresetPolynomial>, BoundError> {
    assert!(k >= 1, "presets require k >= 1");
    let dec = eigendecompose(&SymMatrix::adjacency(g))?;
    let profile = cluster_spectrum(&dec, tol.cluster);
    let distinct = profile.distinct();
    let lambda_min = distinct.last().expect("nonempty spectrum").0;

    let mut shifted = Polynomial::constant(1.0);
    for _ in 0..k {
        shifted = shifted.mul_linear(1.0, -lambda_min);
    }

    let cheb = match distinct.get(1) {
        Some(&(lambda2, _)) if lambda2 - lambda_min > 1e-9 => {
            chebyshev_shifted(k, lambda2, lambda_min).add_constant(1.0)
        }
        // Degenerate two-point or one-point spectra fall back to the shift.
        _ => shifted.clone(),
    };

    Ok(vec![
        PresetPolynomial {
            name: "xk",
            poly: Polynomial::monomial(k),
        },
        PresetPolynomial {
            name: "xk+xk-1",
            poly: Polynomial::monomial(k).add(&Polynomial::monomial(k - 1)),
        },
        PresetPolynomial {
            name: "lmin",
            poly: shifted,
        },
        PresetPolynomial {
            name: "cheb",
            poly: cheb,
        },
    ])
}

/// `T_k` composed with the affine map sending `[lambda_min, lambda2]` to
/// `[-1, 1]`.
fn chebyshev_shifted(k: usize, lambda2: f64, lambda_min: f64) -> Polynomial {
    let a = 2.0 / (lambda2 - lambda_min);
    let b = -(lambda2 + lambda_min) / (lambda2 - lambda_min);
    let mut t_prev = Polynomial::constant(1.0);
    if k == 0 {
        return t_prev;
    }
    let mut t_cur = Polynomial::new(vec![b, a]);
    for _ in 1..k {
        let next = t_cur.mul_linear(a, b).scale(2.0).add(&t_prev.scale(-1.0));
        t_prev = t_cur;
        t_cur = next;
    }
    t_cur
}

/// Valid pairs the framework is exercised with by default: `(p(A), e)` for
/// each admissible preset, `(p(A) - lambda(p) I, e)` on regular graphs, and
/// the Laplacian pair `(mu^k I - L^k, e)` whenever the graph has an edge.
/// Only pairs whose four validation flags all pass are returned.
pub fn pair_catalogue(g: &Graph, k: usize, tol: &Tolerances) -> Vec<MatrixVectorPair> {
    let n = g.order();
    let ones = vec![1.0; n];
    let mut out = Vec::new();
    let a = SymMatrix::adjacency(g);

    if let Ok(presets) = preset_polynomials(g, k, tol) {
        let profile = eigendecompose(&a)
            .map(|dec| cluster_spectrum(&dec, tol.cluster))
            .ok();
        for preset in &presets {
            let pa = matrix_polynomial(&a, &preset.poly);
            let pair = MatrixVectorPair::new(g, pa.clone(), ones.clone(), k, tol);
            if pair.is_valid() {
                out.push(pair);
            }
            // The ratio-type shift is PSD by construction on regular graphs.
            if g.regular_degree().is_some() {
                if let Some(profile) = profile.as_ref().filter(|p| p.len() >= 2) {
                    let lambda_p = shifted_min(profile, &preset.poly);
                    let pair = MatrixVectorPair::new(
                        g,
                        pa.add_scaled_identity(-lambda_p),
                        ones.clone(),
                        k,
                        tol,
                    );
                    if pair.is_valid() {
                        out.push(pair);
                    }
                }
            }
        }
    }

    if g.edge_count() > 0 {
        if let Ok((mu_k, _)) = laplacian_power_diag(g, k) {
            let l = laplacian(g);
            let mut power = l.clone();
            for _ in 1..k {
                power = power.mul_sym(&l);
            }
            let m = power.scale(-1.0).add_scaled_identity(mu_k);
            let pair = MatrixVectorPair::new(g, m, ones.clone(), k, tol);
            if pair.is_valid() {
                out.push(pair);
            }
        }
    }
    out
}

fn shifted_min(profile: &EigenvalueProfile, p: &Polynomial) -> f64 {
    profile.distinct()[1..]
        .iter()
        .map(|&(l, _)| p.eval(l))
        .fold(f64::INFINITY, f64::min)
}
