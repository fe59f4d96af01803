//! Exact linear programming over the rationals.
//!
//! A dense two-phase simplex with Bland's pivoting rule: exact arithmetic
//! everywhere, guaranteed termination, and certificates for every outcome.
//! Infeasible programs come back with a Farkas multiplier vector that is
//! verified against the original constraints before it is returned, so
//! downstream callers can treat "infeasible" as proven rather than reported.
//!
//! The instances solved here are small (dozens of variables and rows), so a
//! dense tableau is the right tool; no effort is spent on sparsity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// How a constraint row compares its left-hand side to the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<BigRational>,
    relation: Relation,
    rhs: BigRational,
}

/// Outcome of [`LinearProgram::solve`], always with a certificate: an optimal
/// point, an improving ray, or verified Farkas multipliers (one per
/// constraint, in insertion order).
#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
    Unbounded {
        ray: Vec<BigRational>,
    },
    Infeasible {
        multipliers: Vec<BigRational>,
    },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }
}

/// A maximization problem `max c.x` over mixed equality and inequality
/// constraints; variables are free unless marked nonnegative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<BigRational>,
    rows: Vec<Row>,
    nonneg: Vec<bool>,
}

impl LinearProgram {
    /// A feasibility problem (zero objective) over `num_vars` free variables.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![BigRational::zero(); num_vars],
            rows: Vec::new(),
            nonneg: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_objective(&mut self, objective: Vec<BigRational>) {
        debug_assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn require_nonnegative(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<BigRational>,
        relation: Relation,
        rhs: BigRational,
    ) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn add_eq(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        self.add_constraint(coeffs, Relation::Eq, rhs);
    }

    pub fn add_ge(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        self.add_constraint(coeffs, Relation::Ge, rhs);
    }

    pub fn add_le(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        self.add_constraint(coeffs, Relation::Le, rhs);
    }

    /// Convenience for integer data.
    pub fn add_int_constraint(&mut self, coeffs: &[BigInt], relation: Relation, rhs: BigInt) {
        let coeffs = coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        self.add_constraint(coeffs, relation, BigRational::from_integer(rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

/// Column roles in the standard-form tableau.
#[derive(Clone, Copy, Debug)]
enum StdCol {
    /// Contributes `sign * x[var]` to the original variable.
    Var { var: usize, sign: i8 },
    /// Slack or surplus column; never mapped back.
    Slack,
}

struct Tableau {
    cols: Vec<StdCol>,
    /// `rows[i]` holds the constraint coefficients over all columns
    /// (structural columns, then one artificial per row), then the rhs.
    rows: Vec<Vec<BigRational>>,
    /// Sign flips applied to make every rhs nonnegative.
    row_sign: Vec<BigRational>,
    basis: Vec<usize>,
    num_struct: usize,
    /// Stable width of every row: structural + artificial columns + rhs.
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut cols = Vec::new();
        // var_cols[j] = (positive column, optional negated column).
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(lp.num_vars);
        for (j, &nonneg) in lp.nonneg.iter().enumerate() {
            let pos = cols.len();
            cols.push(StdCol::Var { var: j, sign: 1 });
            if nonneg {
                var_cols.push((pos, None));
            } else {
                cols.push(StdCol::Var { var: j, sign: -1 });
                var_cols.push((pos, Some(pos + 1)));
            }
        }
        let slack_base = cols.len();
        for row in &lp.rows {
            if row.relation != Relation::Eq {
                cols.push(StdCol::Slack);
            }
        }
        let num_struct = cols.len();
        let m = lp.rows.len();

        let mut rows = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack_cursor = slack_base;
        for row in &lp.rows {
            let mut line = vec![BigRational::zero(); num_struct + m + 1];
            for (j, c) in row.coeffs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                line[pos] = c.clone();
                if let Some(neg) = neg {
                    line[neg] = -c;
                }
            }
            match row.relation {
                Relation::Eq => {}
                Relation::Ge => {
                    line[slack_cursor] = -BigRational::one();
                    slack_cursor += 1;
                }
                Relation::Le => {
                    line[slack_cursor] = BigRational::one();
                    slack_cursor += 1;
                }
            }
            *line.last_mut().unwrap() = row.rhs.clone();
            let sign = if row.rhs.is_negative() {
                for entry in line.iter_mut() {
                    *entry = -entry.clone();
                }
                -BigRational::one()
            } else {
                BigRational::one()
            };
            rows.push(line);
            row_sign.push(sign);
        }
        // One artificial variable per row, forming the starting basis.
        let mut basis = Vec::with_capacity(m);
        for (i, line) in rows.iter_mut().enumerate() {
            line[num_struct + i] = BigRational::one();
            basis.push(num_struct + i);
        }
        Tableau {
            cols,
            rows,
            row_sign,
            basis,
            num_struct,
            width: num_struct + m + 1,
        }
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    /// Reduced-cost row for objective `d` over all columns; last entry is the
    /// negated objective value.
    fn reduced_costs(&self, d: &[BigRational]) -> Vec<BigRational> {
        let width = self.rhs_col() + 1;
        let mut obj = vec![BigRational::zero(); width];
        obj[..d.len()].clone_from_slice(d);
        for (i, &b) in self.basis.iter().enumerate() {
            if obj[b].is_zero() {
                continue;
            }
            let factor = obj[b].clone();
            for (o, t) in obj.iter_mut().zip(&self.rows[i]) {
                *o -= &factor * t;
            }
        }
        obj
    }

    fn pivot(&mut self, obj: &mut Vec<BigRational>, pr: usize, pc: usize) {
        let pivot = self.rows[pr][pc].clone();
        for entry in self.rows[pr].iter_mut() {
            *entry /= &pivot;
        }
        let pivot_row = self.rows[pr].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == pr || row[pc].is_zero() {
                continue;
            }
            let factor = row[pc].clone();
            for (r, p) in row.iter_mut().zip(&pivot_row) {
                *r -= &factor * p;
            }
        }
        if !obj[pc].is_zero() {
            let factor = obj[pc].clone();
            for (o, p) in obj.iter_mut().zip(&pivot_row) {
                *o -= &factor * p;
            }
        }
        self.basis[pr] = pc;
    }

    /// Bland's rule: smallest improving column, then smallest leaving basic
    /// variable. Returns the objective row at optimality, or the entering
    /// column on unboundedness.
    fn optimize(
        &mut self,
        d: &[BigRational],
        allow: impl Fn(usize) -> bool,
    ) -> std::result::Result<Vec<BigRational>, usize> {
        let rhs_col = self.rhs_col();
        let mut obj = self.reduced_costs(d);
        loop {
            let entering = (0..rhs_col)
                .find(|&j| allow(j) && obj[j].is_positive());
            let pc = match entering {
                Some(pc) => pc,
                None => return Ok(obj),
            };
            let mut best: Option<(BigRational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[pc].is_positive() {
                    continue;
                }
                let ratio = &row[rhs_col] / &row[pc];
                let candidate = (ratio, self.basis[i], i);
                best = match best {
                    None => Some(candidate),
                    Some(cur) => {
                        if candidate.0 < cur.0 || (candidate.0 == cur.0 && candidate.1 < cur.1) {
                            Some(candidate)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
            match best {
                Some((_, _, pr)) => self.pivot(&mut obj, pr, pc),
                None => return Err(pc),
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let m = self.rows.len();
        let rhs_col = self.rhs_col();
        let num_struct = self.num_struct;

        // Phase 1: drive the artificial variables to zero.
        let mut d1 = vec![BigRational::zero(); num_struct + m];
        for entry in d1.iter_mut().skip(num_struct) {
            *entry = -BigRational::one();
        }
        let obj = self
            .optimize(&d1, |_| true)
            .expect("phase-1 objective is bounded above by zero");
        let phase1_value = -obj[rhs_col].clone();
        if phase1_value.is_negative() {
            // Dual solution: y_i = -1 - obj[artificial_i]; map back through
            // the row sign flips to certify the original system.
            let multipliers: Vec<BigRational> = (0..m)
                .map(|i| {
                    let y_std = -BigRational::one() - &obj[num_struct + i];
                    -(&self.row_sign[i] * y_std)
                })
                .collect();
            assert!(
                verify_farkas(lp, &multipliers),
                "internal error: Farkas certificate failed verification"
            );
            return LpOutcome::Infeasible { multipliers };
        }

        // Pivot leftover artificials out of the basis; rows that cannot be
        // pivoted are redundant and get dropped.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < num_struct {
                i += 1;
                continue;
            }
            let pc = (0..num_struct).find(|&j| !self.rows[i][j].is_zero());
            match pc {
                Some(pc) => {
                    let mut dummy = vec![BigRational::zero(); rhs_col + 1];
                    self.pivot(&mut dummy, i, pc);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }

        // Phase 2: the real objective, artificials barred from re-entering.
        let mut d2 = vec![BigRational::zero(); num_struct + m];
        for (j, col) in self.cols.iter().enumerate() {
            if let StdCol::Var { var, sign } = col {
                let c = &lp.objective[*var];
                d2[j] = if *sign > 0 { c.clone() } else { -c };
            }
        }
        match self.optimize(&d2, |j| j < num_struct) {
            Ok(obj) => {
                let mut std_point = vec![BigRational::zero(); num_struct];
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < num_struct {
                        std_point[b] = self.rows[i][self.rows[i].len() - 1].clone();
                    }
                }
                let point = self.to_original(&std_point);
                debug_assert!(point_is_feasible(lp, &point));
                LpOutcome::Optimal {
                    value: -obj[obj.len() - 1].clone(),
                    point,
                }
            }
            Err(pc) => {
                let mut std_ray = vec![BigRational::zero(); num_struct];
                std_ray[pc] = BigRational::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < num_struct {
                        std_ray[b] = -self.rows[i][pc].clone();
                    }
                }
                let ray = self.to_original(&std_ray);
                debug_assert!(ray_is_improving(lp, &ray));
                LpOutcome::Unbounded { ray }
            }
        }
    }

    fn to_original(&self, std_vals: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.original_dim()];
        for (j, col) in self.cols.iter().enumerate() {
            if let StdCol::Var { var, sign } = col {
                if *sign > 0 {
                    out[*var] += &std_vals[j];
                } else {
                    out[*var] -= &std_vals[j];
                }
            }
        }
        out
    }

    fn original_dim(&self) -> usize {
        self.cols
            .iter()
            .filter_map(|c| match c {
                StdCol::Var { var, .. } => Some(var + 1),
                StdCol::Slack => None,
            })
            .max()
            .unwrap_or(0)
    }
}

fn point_is_feasible(lp: &LinearProgram, point: &[BigRational]) -> bool {
    for (j, &nn) in lp.nonneg.iter().enumerate() {
        if nn && point[j].is_negative() {
            return false;
        }
    }
    lp.rows.iter().all(|row| {
        let lhs: BigRational = row
            .coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .sum();
        match row.relation {
            Relation::Eq => lhs == row.rhs,
            Relation::Ge => lhs >= row.rhs,
            Relation::Le => lhs <= row.rhs,
        }
    })
}

fn ray_is_improving(lp: &LinearProgram, ray: &[BigRational]) -> bool {
    let gain: BigRational = lp.objective.iter().zip(ray).map(|(c, x)| c * x).sum();
    if !gain.is_positive() {
        return false;
    }
    for (j, &nn) in lp.nonneg.iter().enumerate() {
        if nn && ray[j].is_negative() {
            return false;
        }
    }
    lp.rows.iter().all(|row| {
        let lhs: BigRational = row.coeffs.iter().zip(ray).map(|(c, x)| c * x).sum();
        match row.relation {
            Relation::Eq => lhs.is_zero(),
            Relation::Ge => !lhs.is_negative(),
            Relation::Le => !lhs.is_positive(),
        }
    })
}

/// Checks a Farkas certificate against the original mixed-form system:
/// multipliers are sign-compatible with the relations, the combined
/// functional vanishes on free variables and is nonpositive on nonnegative
/// ones, yet the combined right-hand side is positive.
pub fn verify_farkas(lp: &LinearProgram, multipliers: &[BigRational]) -> bool {
    if multipliers.len() != lp.rows.len() {
        return false;
    }
    for (row, y) in lp.rows.iter().zip(multipliers) {
        let ok = match row.relation {
            Relation::Eq => true,
            Relation::Ge => !y.is_negative(),
            Relation::Le => !y.is_positive(),
        };
        if !ok {
            return false;
        }
    }
    let mut combined = vec![BigRational::zero(); lp.num_vars];
    let mut rhs = BigRational::zero();
    for (row, y) in lp.rows.iter().zip(multipliers) {
        for (w, c) in combined.iter_mut().zip(&row.coeffs) {
            *w += y * c;
        }
        rhs += y * &row.rhs;
    }
    for (j, w) in combined.iter().enumerate() {
        let ok = if lp.nonneg[j] {
            !w.is_positive()
        } else {
            w.is_zero()
        };
        if !ok {
            return false;
        }
    }
    rhs.is_positive()
}
