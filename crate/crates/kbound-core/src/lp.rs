//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! The programs solved here are tiny (a handful of polynomial coefficients
//! against one row per vertex plus one per distinct eigenvalue), so the
//! solver favours determinism and auditability over speed: dense tableau,
//! Bland's rule for both pivot choices, no presolve beyond row max-norm
//! scaling. Variables are free by default and split internally into
//! differences of nonnegative parts.
//!
//! Every optimal solve also recovers dual multipliers and verifies primal
//! feasibility, the duality gap, and complementary slackness before the
//! solution is returned.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const TOL_PIVOT: f64 = 1e-9;
const TOL_REDUCED: f64 = 1e-9;
const TOL_FEAS: f64 = 1e-8;
const TOL_DUAL: f64 = 1e-7;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A linear program over sign-unrestricted variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

/// An optimal vertex with its dual multipliers. The duals satisfy
/// `value = duals . rhs` and complementary slackness against the original
/// constraints, in the program's own sense.
#[derive(Debug, Clone)]
pub struct LpOptimal {
    pub point: Vec<f64>,
    pub value: f64,
    pub duals: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum LpSolution {
    Optimal(LpOptimal),
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn optimal(&self) -> Option<&LpOptimal> {
        match self {
            LpSolution::Optimal(o) => Some(o),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    DimensionMismatch {
        constraint: usize,
        expected: usize,
        got: usize,
    },
    /// The basis degenerated numerically; carries the pivot count so far.
    SingularBasis { pivots: usize },
    /// A post-solve validation failed (feasibility, duality gap, slackness).
    Validation { check: &'static str },
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::DimensionMismatch {
                constraint,
                expected,
                got,
            } => write!(
                f,
                "constraint {constraint} has {got} coefficients, expected {expected}"
            ),
            LpError::SingularBasis { pivots } => {
                write!(f, "numerically singular basis after {pivots} pivots")
            }
            LpError::Validation { check } => write!(f, "solution validation failed: {check}"),
        }
    }
}

impl core::error::Error for LpError {}

struct Tableau {
    rows: usize,
    cols: usize, // structural + slack + artificial, excluding rhs
    data: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    obj: Vec<f64>, // reduced costs z_j - c_j
    obj_val: f64,  // current objective value
    art_start: usize,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// Resets the objective row to costs `c` and prices out the basis.
    fn load_costs(&mut self, costs: &[f64]) {
        for j in 0..self.cols {
            self.obj[j] = -costs[j];
        }
        self.obj_val = 0.0;
        for r in 0..self.rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                for j in 0..self.cols {
                    self.obj[j] += cb * self.at(r, j);
                }
                self.obj_val += cb * self.rhs[r];
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.at(row, col);
        for j in 0..self.cols {
            let v = self.at(row, j) / p;
            self.set(row, j, v);
        }
        self.rhs[row] /= p;
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let factor = self.at(r, col);
            if factor == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                let v = self.at(r, j) - factor * self.at(row, j);
                self.set(r, j, v);
            }
            self.rhs[r] -= factor * self.rhs[row];
        }
        let factor = self.obj[col];
        if factor != 0.0 {
            for j in 0..self.cols {
                self.obj[j] -= factor * self.at(row, j);
            }
            self.obj_val -= factor * self.rhs[row];
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs simplex to optimality for the loaded (maximization) costs.
    /// `ban_artificials` excludes artificial columns from entering.
    fn optimize(&mut self, ban_artificials: bool) -> Result<bool, LpError> {
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::SingularBasis {
                    pivots: self.pivots,
                });
            }
            // Bland: smallest improving column index.
            let limit = if ban_artificials {
                self.art_start
            } else {
                self.cols
            };
            let entering = (0..limit).find(|&j| self.obj[j] < -TOL_REDUCED);
            let Some(col) = entering else {
                return Ok(true);
            };
            // Ratio test; ties resolved by smallest basic variable (Bland).
            let mut best: Option<(f64, usize, usize)> = None;
            for r in 0..self.rows {
                let t = self.at(r, col);
                if t > TOL_PIVOT {
                    let ratio = self.rhs[r] / t;
                    let replace = match best {
                        None => true,
                        Some((br, bv, _)) => {
                            ratio < br - 1e-12 || (ratio < br + 1e-12 && self.basis[r] < bv)
                        }
                    };
                    if replace {
                        best = Some((ratio, self.basis[r], r));
                    }
                }
            }
            let Some((_, _, row)) = best else {
                return Ok(false); // unbounded direction
            };
            self.pivot(row, col);
        }
    }
}

/// Solves the program. Optimal solutions return a vertex point, dual
/// multipliers, and pass feasibility/duality validation; infeasible and
/// unbounded programs are reported as such.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let nvars = lp.objective.len();
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != nvars {
            return Err(LpError::DimensionMismatch {
                constraint: i,
                expected: nvars,
                got: c.coeffs.len(),
            });
        }
    }

    // Internal form: maximize over split nonnegative variables.
    let sense_sign = match lp.sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let n_struct = 2 * nvars;
    let split = |coeffs: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(n_struct);
        for &a in coeffs {
            out.push(a);
            out.push(-a);
        }
        out
    };
    let internal_obj: Vec<f64> = split(&lp.objective)
        .into_iter()
        .map(|a| sense_sign * a)
        .collect();

    // Row preprocessing: max-norm scaling, then flip so rhs >= 0.
    // `row_transform[i]` holds the factor internal-dual -> original-dual.
    struct Row {
        coeffs: Vec<f64>,
        relation: Relation,
        rhs: f64,
    }
    let mut rows: Vec<Row> = Vec::new();
    let mut row_transform: Vec<f64> = Vec::new(); // 0.0 marks a dropped row
    for c in &lp.constraints {
        let scale = c.coeffs.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
        if scale == 0.0 {
            // Constant constraint: either trivially satisfiable or infeasible.
            let ok = match c.relation {
                Relation::Le => 0.0 <= c.rhs + TOL_FEAS * (1.0 + c.rhs.abs()),
                Relation::Ge => 0.0 >= c.rhs - TOL_FEAS * (1.0 + c.rhs.abs()),
                Relation::Eq => c.rhs.abs() <= TOL_FEAS * (1.0 + c.rhs.abs()),
            };
            if !ok {
                return Ok(LpSolution::Infeasible);
            }
            row_transform.push(0.0);
            continue;
        }
        let mut coeffs: Vec<f64> = split(&c.coeffs).iter().map(|a| a / scale).collect();
        let mut rhs = c.rhs / scale;
        let mut relation = c.relation;
        let mut transform = 1.0 / scale;
        if rhs < 0.0 {
            for a in &mut coeffs {
                *a = -*a;
            }
            rhs = -rhs;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            transform = -transform;
        }
        rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
        row_transform.push(transform);
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let cols = n_struct + n_slack + n_art;
    let art_start = n_struct + n_slack;

    let mut tab = Tableau {
        rows: m,
        cols,
        data: vec![0.0; m * cols],
        rhs: vec![0.0; m],
        basis: vec![0; m],
        obj: vec![0.0; cols],
        obj_val: 0.0,
        art_start,
        pivots: 0,
    };

    // Per solved row: the column holding its slack/surplus or artificial,
    // used later to read the dual multiplier off the objective row.
    enum DualSource {
        Slack(usize),
        Surplus(usize),
        Artificial(usize),
    }
    let mut dual_source = Vec::with_capacity(m);
    let mut next_slack = n_struct;
    let mut next_art = art_start;
    for (r, row) in rows.iter().enumerate() {
        for (j, &a) in row.coeffs.iter().enumerate() {
            tab.set(r, j, a);
        }
        tab.rhs[r] = row.rhs;
        match row.relation {
            Relation::Le => {
                tab.set(r, next_slack, 1.0);
                tab.basis[r] = next_slack;
                dual_source.push(DualSource::Slack(next_slack));
                next_slack += 1;
            }
            Relation::Ge => {
                tab.set(r, next_slack, -1.0);
                tab.set(r, next_art, 1.0);
                tab.basis[r] = next_art;
                dual_source.push(DualSource::Surplus(next_slack));
                next_slack += 1;
                next_art += 1;
            }
            Relation::Eq => {
                tab.set(r, next_art, 1.0);
                tab.basis[r] = next_art;
                dual_source.push(DualSource::Artificial(next_art));
                next_art += 1;
            }
        }
    }

    // Phase 1: drive the artificials to zero.
    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        for j in art_start..cols {
            phase1[j] = -1.0;
        }
        tab.load_costs(&phase1);
        if !tab.optimize(false)? {
            // Maximizing a bounded-above objective cannot be unbounded.
            return Err(LpError::SingularBasis { pivots: tab.pivots });
        }
        let max_rhs = rows.iter().fold(0.0_f64, |acc, r| acc.max(r.rhs));
        if tab.obj_val < -TOL_FEAS * (1.0 + max_rhs) {
            return Ok(LpSolution::Infeasible);
        }
        // Degenerate pivots remove artificials still sitting in the basis.
        for r in 0..m {
            if tab.basis[r] >= art_start {
                if let Some(col) = (0..art_start).find(|&j| tab.at(r, j).abs() > 1e-7) {
                    tab.pivot(r, col);
                }
            }
        }
    }

    // Phase 2.
    let mut costs = vec![0.0; cols];
    costs[..n_struct].copy_from_slice(&internal_obj);
    tab.load_costs(&costs);
    if !tab.optimize(true)? {
        return Ok(LpSolution::Unbounded);
    }

    // Primal point.
    let mut internal_x = vec![0.0; cols];
    for r in 0..m {
        internal_x[tab.basis[r]] = tab.rhs[r];
    }
    let point: Vec<f64> = (0..nvars)
        .map(|j| internal_x[2 * j] - internal_x[2 * j + 1])
        .collect();
    let value = sense_sign * tab.obj_val;

    // Duals, mapped back through scaling, flips, and the sense.
    let mut duals = Vec::with_capacity(lp.constraints.len());
    let mut solved_iter = dual_source.iter();
    for &transform in &row_transform {
        if transform == 0.0 {
            duals.push(0.0);
            continue;
        }
        let internal = match solved_iter.next().expect("one source per kept row") {
            DualSource::Slack(c) => tab.obj[*c],
            DualSource::Surplus(c) => -tab.obj[*c],
            DualSource::Artificial(c) => tab.obj[*c],
        };
        duals.push(sense_sign * transform * internal);
    }

    let optimal = LpOptimal {
        point,
        value,
        duals,
    };
    validate(lp, &optimal)?;
    Ok(LpSolution::Optimal(optimal))
}

/// Post-solve checks against the original data: primal feasibility, the
/// reported objective, the duality gap, and complementary slackness.
fn validate(lp: &LinearProgram, sol: &LpOptimal) -> Result<(), LpError> {
    let mut dual_value = 0.0;
    for (c, &y) in lp.constraints.iter().zip(&sol.duals) {
        let ax = crate::spectral::dot(&c.coeffs, &sol.point);
        let slack = ax - c.rhs;
        let tol = TOL_FEAS * (1.0 + c.rhs.abs());
        let feasible = match c.relation {
            Relation::Le => slack <= tol,
            Relation::Ge => slack >= -tol,
            Relation::Eq => slack.abs() <= tol,
        };
        if !feasible {
            return Err(LpError::Validation {
                check: "primal feasibility",
            });
        }
        if (y * slack).abs() > TOL_DUAL * (1.0 + c.rhs.abs()) * (1.0 + y.abs()) {
            return Err(LpError::Validation {
                check: "complementary slackness",
            });
        }
        dual_value += y * c.rhs;
    }
    let primal_value = crate::spectral::dot(&lp.objective, &sol.point);
    if (primal_value - sol.value).abs() > 1e-10 * (1.0 + sol.value.abs()) {
        return Err(LpError::Validation {
            check: "objective consistency",
        });
    }
    if (dual_value - sol.value).abs() > TOL_DUAL * (1.0 + sol.value.abs()) {
        return Err(LpError::Validation {
            check: "duality gap",
        });
    }
    Ok(())
}
