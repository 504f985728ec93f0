//! Exact rational simplex.
//!
//! Dense tableau, bounded variables handled natively (nonbasic variables
//! sit at a finite lower or upper bound), two phases with one artificial
//! per row, Bland's rule for both entering and leaving choices.

use num_traits::{One, Signed, Zero};

use crate::data::{project_data, DataCloud, QuantileLevel};
use crate::error::{Error, Result};
use crate::scalar::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `optimize c^T x` subject to row constraints and per-variable bounds.
/// `None` bounds are infinite. New variables default to `0 <= x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraint(mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn bounds(mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn free(self, var: usize) -> Self {
        self.bounds(var, None, None)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::MalformedProgram("bound vectors do not match objective length".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        for j in 0..n {
            if let (Some(lo), Some(hi)) = (&self.lower[j], &self.upper[j]) {
                if lo > hi {
                    return Err(Error::MalformedProgram(format!("variable {j} has lower bound {lo} > upper bound {hi}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver result. When optimal, `duals` holds one multiplier per
/// constraint and `reduced_costs` equals `c - A^T duals`; together they
/// certify optimality (see [`LpOutcome::certifies`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub primal: Vec<Rational>,
    pub duals: Vec<Rational>,
    pub reduced_costs: Vec<Rational>,
    pub pivots: usize,
}

impl LpOutcome {
    fn without_solution(status: LpStatus, pivots: usize) -> Self {
        Self { status, value: None, primal: Vec::new(), duals: Vec::new(), reduced_costs: Vec::new(), pivots }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Checks primal feasibility, dual feasibility, complementary
    /// slackness and equality of primal and dual values, all exactly.
    pub fn certifies(&self, lp: &LinearProgram) -> bool {
        if self.status != LpStatus::Optimal {
            return false;
        }
        let n = lp.num_vars();
        let x = &self.primal;
        if x.len() != n || self.duals.len() != lp.constraints.len() || self.reduced_costs.len() != n {
            return false;
        }
        // Work in the minimization convention.
        let flip = |v: &Rational| if lp.sense == Sense::Maximize { -v.clone() } else { v.clone() };
        let c: Vec<Rational> = lp.objective.iter().map(flip).collect();
        let y: Vec<Rational> = self.duals.iter().map(flip).collect();
        let d: Vec<Rational> = self.reduced_costs.iter().map(flip).collect();

        for ((xj, lo), hi) in x.iter().zip(&lp.lower).zip(&lp.upper) {
            if lo.as_ref().is_some_and(|lo| xj < lo) || hi.as_ref().is_some_and(|hi| xj > hi) {
                return false;
            }
        }
        let mut dual_value = Rational::zero();
        for (con, yi) in lp.constraints.iter().zip(&y) {
            let lhs = dot(&con.coeffs, x);
            let ok = match con.relation {
                Relation::Le => lhs <= con.rhs && !yi.is_positive(),
                Relation::Ge => lhs >= con.rhs && !yi.is_negative(),
                Relation::Eq => lhs == con.rhs,
            };
            if !ok || (!yi.is_zero() && lhs != con.rhs) {
                return false;
            }
            dual_value += yi * &con.rhs;
        }
        for j in 0..n {
            let col_dot: Rational = lp.constraints.iter().zip(&y).map(|(con, yi)| &con.coeffs[j] * yi).sum();
            if d[j] != &c[j] - col_dot {
                return false;
            }
            if d[j].is_positive() {
                match &lp.lower[j] {
                    Some(lo) if &x[j] == lo => dual_value += &d[j] * lo,
                    _ => return false,
                }
            } else if d[j].is_negative() {
                match &lp.upper[j] {
                    Some(hi) if &x[j] == hi => dual_value += &d[j] * hi,
                    _ => return false,
                }
            }
        }
        let primal_value = dot(&c, x);
        self.value.as_ref().is_some_and(|v| flip(v) == primal_value) && dual_value == primal_value
    }
}

/// How an original variable is expressed through internal columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `x = lo + col`
    Shift(usize, Rational),
    /// `x = hi - col`
    Flip(usize, Rational),
    /// `x = pos - neg`
    Split(usize, usize),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basic_values: Vec<Rational>,
    basis: Vec<usize>,
    upper: Vec<Option<Rational>>,
    at_upper: Vec<bool>,
    is_basic: Vec<bool>,
    pivots: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn run(&mut self, cost: &[Rational]) -> PhaseEnd {
        loop {
            let d = self.reduced_costs(cost);
            let entering = (0..d.len()).find(|&j| {
                if self.is_basic[j] || self.upper[j].as_ref().is_some_and(Zero::is_zero) {
                    return false;
                }
                if self.at_upper[j] {
                    d[j].is_positive()
                } else {
                    d[j].is_negative()
                }
            });
            let Some(j) = entering else {
                return PhaseEnd::Optimal;
            };
            let dir = if self.at_upper[j] { -Rational::one() } else { Rational::one() };

            let mut best: Option<(Rational, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let alpha = &row[j] * &dir;
                let limit = if alpha.is_positive() {
                    &self.basic_values[i] / &alpha
                } else if alpha.is_negative() {
                    match &self.upper[self.basis[i]] {
                        Some(hi) => (hi - &self.basic_values[i]) / -&alpha,
                        None => continue,
                    }
                } else {
                    continue;
                };
                let better = match &best {
                    None => true,
                    Some((b, r)) => limit < *b || (limit == *b && self.basis[i] < self.basis[*r]),
                };
                if better {
                    best = Some((limit, i));
                }
            }
            let flip_limit = self.upper[j].clone();
            let (theta, leaving) = match (&flip_limit, best) {
                (None, None) => return PhaseEnd::Unbounded,
                (Some(f), Some((b, r))) if b < *f => (b, Some(r)),
                (Some(f), _) => (f.clone(), None),
                (None, Some((b, r))) => (b, Some(r)),
            };

            let step = &theta * &dir;
            for (value, row) in self.basic_values.iter_mut().zip(&self.rows) {
                if !row[j].is_zero() {
                    *value -= &step * &row[j];
                }
            }
            let start = if self.at_upper[j] { self.upper[j].clone().unwrap() } else { Rational::zero() };
            let entering_value = start + &step;

            match leaving {
                None => {
                    self.at_upper[j] = !self.at_upper[j];
                }
                Some(r) => {
                    let out = self.basis[r];
                    let alpha = &self.rows[r][j] * &dir;
                    self.is_basic[out] = false;
                    self.at_upper[out] = alpha.is_negative();
                    self.pivot(r, j);
                    self.basis[r] = j;
                    self.is_basic[j] = true;
                    self.at_upper[j] = false;
                    self.basic_values[r] = entering_value;
                }
            }
            self.pivots += 1;
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.rows[r][j].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }

    fn value_of(&self, col: usize) -> Rational {
        if self.is_basic[col] {
            let r = self.basis.iter().position(|&b| b == col).unwrap();
            self.basic_values[r].clone()
        } else if self.at_upper[col] {
            self.upper[col].clone().unwrap()
        } else {
            Rational::zero()
        }
    }
}

/// Solves `lp` exactly. Pivoting is deterministic.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.constraints.len();

    // Internal columns: transformed structurals, then slacks, then artificials.
    let mut maps = Vec::with_capacity(n);
    let mut col_upper: Vec<Option<Rational>> = Vec::new();
    let mut col_sign: Vec<(usize, Rational)> = Vec::new();
    let mut rhs: Vec<Rational> = lp.constraints.iter().map(|c| c.rhs.clone()).collect();
    let mut obj_const = Rational::zero();
    for j in 0..n {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(lo), hi) => {
                let col = col_upper.len();
                col_upper.push(hi.as_ref().map(|h| h - lo));
                col_sign.push((j, Rational::one()));
                for (b, con) in rhs.iter_mut().zip(&lp.constraints) {
                    *b -= &con.coeffs[j] * lo;
                }
                obj_const += &lp.objective[j] * lo;
                maps.push(VarMap::Shift(col, lo.clone()));
            }
            (None, Some(hi)) => {
                let col = col_upper.len();
                col_upper.push(None);
                col_sign.push((j, -Rational::one()));
                for (b, con) in rhs.iter_mut().zip(&lp.constraints) {
                    *b -= &con.coeffs[j] * hi;
                }
                obj_const += &lp.objective[j] * hi;
                maps.push(VarMap::Flip(col, hi.clone()));
            }
            (None, None) => {
                let col = col_upper.len();
                col_upper.push(None);
                col_upper.push(None);
                col_sign.push((j, Rational::one()));
                col_sign.push((j, -Rational::one()));
                maps.push(VarMap::Split(col, col + 1));
            }
        }
    }
    let n_struct = col_upper.len();
    let slack_rows: Vec<usize> = (0..m).filter(|&i| lp.constraints[i].relation != Relation::Eq).collect();
    let n_slack = slack_rows.len();
    let n_cols = n_struct + n_slack + m;

    let mut rows = vec![vec![Rational::zero(); n_cols]; m];
    let mut row_sign = vec![Rational::one(); m];
    for (i, con) in lp.constraints.iter().enumerate() {
        for (col, (j, s)) in col_sign.iter().enumerate() {
            rows[i][col] = &con.coeffs[*j] * s;
        }
    }
    for (k, &i) in slack_rows.iter().enumerate() {
        rows[i][n_struct + k] = match lp.constraints[i].relation {
            Relation::Le => Rational::one(),
            _ => -Rational::one(),
        };
    }
    for i in 0..m {
        if rhs[i].is_negative() {
            row_sign[i] = -Rational::one();
            rhs[i] = -rhs[i].clone();
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
        }
        rows[i][n_struct + n_slack + i] = Rational::one();
    }
    col_upper.extend(std::iter::repeat_n(None, n_slack + m));

    let art = n_struct + n_slack;
    let mut is_basic = vec![false; n_cols];
    for i in 0..m {
        is_basic[art + i] = true;
    }
    let mut tab = Tableau {
        rows,
        basic_values: rhs,
        basis: (art..art + m).collect(),
        upper: col_upper,
        at_upper: vec![false; n_cols],
        is_basic,
        pivots: 0,
    };

    let mut phase1 = vec![Rational::zero(); n_cols];
    for c in phase1.iter_mut().skip(art) {
        *c = Rational::one();
    }
    tab.run(&phase1);
    let infeasibility: Rational = (art..art + m).map(|c| tab.value_of(c)).sum();
    if infeasibility.is_positive() {
        return Ok(LpOutcome::without_solution(LpStatus::Infeasible, tab.pivots));
    }
    for c in art..art + m {
        tab.upper[c] = Some(Rational::zero());
    }

    let min_sign = if lp.sense == Sense::Maximize { -Rational::one() } else { Rational::one() };
    let mut cost = vec![Rational::zero(); n_cols];
    for (col, (j, s)) in col_sign.iter().enumerate() {
        cost[col] = &lp.objective[*j] * s * &min_sign;
    }
    if let PhaseEnd::Unbounded = tab.run(&cost) {
        return Ok(LpOutcome::without_solution(LpStatus::Unbounded, tab.pivots));
    }

    let primal: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Shift(c, lo) => lo + tab.value_of(*c),
            VarMap::Flip(c, hi) => hi - tab.value_of(*c),
            VarMap::Split(a, b) => tab.value_of(*a) - tab.value_of(*b),
        })
        .collect();

    // Row multipliers: the artificial columns carry B^{-1}.
    let d = tab.reduced_costs(&cost);
    let duals: Vec<Rational> = (0..m).map(|i| -(&d[art + i]) * &row_sign[i] * &min_sign).collect();
    let reduced_costs: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Shift(c, _) | VarMap::Split(c, _) => &d[*c] * &min_sign,
            VarMap::Flip(c, _) => -(&d[*c]) * &min_sign,
        })
        .collect();
    let value = dot(&lp.objective, &primal);
    debug_assert_eq!(
        value,
        (0..n_struct).map(|c| &cost[c] * tab.value_of(c)).sum::<Rational>() * &min_sign + &obj_const
    );
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        duals,
        reduced_costs,
        pivots: tab.pivots,
    })
}

/// The scalarized primal program over `(u, v)` for data `w^T X`:
/// `max sum a_i (u_i - v_i)`, `0 <= u <= p`, `0 <= v <= 1 - p`,
/// `sum u - sum v = 0`. Variables are `u_1..u_N, v_1..v_N`.
pub fn build_lp(data: &DataCloud, level: &QuantileLevel, w: &[Rational]) -> Result<LinearProgram> {
    let a = project_data(data, w)?;
    level.check_n(a.len())?;
    let n = a.len();
    let mut objective = a.clone();
    objective.extend(a.iter().map(|x| -x.clone()));
    let mut balance = vec![Rational::one(); n];
    balance.extend(std::iter::repeat_n(-Rational::one(), n));
    let mut lp = LinearProgram::new(Sense::Maximize, objective).constraint(balance, Relation::Eq, Rational::zero());
    let q = level.one_minus_p();
    for i in 0..n {
        lp = lp
            .bounds(i, Some(Rational::zero()), Some(level.p().clone()))
            .bounds(n + i, Some(Rational::zero()), Some(q.clone()));
    }
    Ok(lp)
}

/// The check-loss minimization `min_t phi(t)` in standard form with `2N`
/// extra variables: `t` (free, index 0), `s+_i` (indices `1..=N`) and
/// `s-_i` (indices `N+1..=2N`) with `s+_i - s-_i + t = a_i`, minimizing
/// `sum p s+_i + (1 - p) s-_i`.
pub fn build_lp_dual(data: &DataCloud, level: &QuantileLevel, w: &[Rational]) -> Result<LinearProgram> {
    let a = project_data(data, w)?;
    level.check_n(a.len())?;
    Ok(check_loss_program(&a, level))
}

pub(crate) fn check_loss_program(a: &[Rational], level: &QuantileLevel) -> LinearProgram {
    let n = a.len();
    let mut objective = vec![Rational::zero()];
    objective.extend(std::iter::repeat_n(level.p().clone(), n));
    objective.extend(std::iter::repeat_n(level.one_minus_p(), n));
    let mut lp = LinearProgram::new(Sense::Minimize, objective).free(0);
    for (i, ai) in a.iter().enumerate() {
        let mut row = vec![Rational::zero(); 2 * n + 1];
        row[0] = Rational::one();
        row[1 + i] = Rational::one();
        row[1 + n + i] = -Rational::one();
        lp = lp.constraint(row, Relation::Eq, ai.clone());
    }
    lp
}

/// Convenience: simplex optimum `t` of the check-loss program for a raw
/// univariate sample.
pub fn simplex_quantile(sample: &[Rational], level: &QuantileLevel) -> Result<(Rational, Rational)> {
    level.check_n(sample.len())?;
    let lp = check_loss_program(sample, level);
    let out = simplex_solve(&lp)?;
    match out.status {
        LpStatus::Optimal => Ok((out.primal[0].clone(), out.value.unwrap())),
        _ => Err(Error::MalformedProgram("check-loss program is always solvable".into())),
    }
}
