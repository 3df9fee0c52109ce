//! Bounded-variable primal simplex on a dense tableau.
//!
//! Each row `a·x (rel) b` gets an auxiliary column `s` with `a·x + s = b`
//! (`s = 0` for equalities, `s ≥ 0` for `≤`, `s ≤ 0` for `≥`), so the tableau
//! is `B⁻¹[A | I]` and the row multipliers can be read off the auxiliary
//! reduced costs at the end. Rows that start infeasible get an artificial
//! basic variable; phase one drives their sum to zero, after which
//! artificials are never re-entered and their columns are not stored.
//!
//! The same code runs over `f64` (with tolerances) and over exact rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::model::{LpProblem, Relation, Sense};
use super::solution::{Arithmetic, LpSolution, PivotRule, SolverOptions, Status};
use crate::error::Result;

/// Consecutive zero-length steps before Dantzig pricing hands over to Bland.
const DEGENERACY_LIMIT: u32 = 25;
/// Float-mode iterations between recomputations of values and reduced costs.
const REFRESH_EVERY: u32 = 100;
/// Iterative-refinement passes on the final float basis.
const REFINE_ROUNDS: usize = 3;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn render(&self) -> String;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn render(&self) -> String {
        format!("{self:e}")
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

#[derive(Clone, Debug)]
struct Tolerances<T> {
    /// Smallest usable pivot magnitude.
    pivot: T,
    /// Reduced costs within this of zero count as optimal.
    cost: T,
    /// Slack on bounds and on the phase-one objective.
    feas: T,
    /// Entries below this are flushed to zero after a pivot.
    flush: T,
}

/// Basic variable identifiers: `0..ncols` are stored columns, `ncols + i` is
/// the artificial of row `i`.
type VarId = usize;

struct Tableau<T> {
    m: usize,
    n_struct: usize,
    ncols: usize,
    t: Vec<T>,
    /// Reduced costs of the current phase.
    d: Vec<T>,
    cost: Vec<T>,
    lower: Vec<Option<T>>,
    upper: Vec<Option<T>>,
    at_upper: Vec<bool>,
    basic_row: Vec<Option<usize>>,
    basis: Vec<VarId>,
    xb: Vec<T>,
    rhs: Vec<T>,
    /// Original rows, for the end-of-phase self-check.
    rows: Vec<Vec<(usize, T)>>,
    /// Sign of each row's artificial column.
    art_negative: Vec<bool>,
    tol: Tolerances<T>,
    rule: PivotRule,
    degenerate_run: u32,
    /// Float mode: columns whose improving ray had no usable pivot, skipped
    /// until the next basis change.
    rejected: Vec<bool>,
    iterations: u64,
}

enum Step {
    Optimal,
    Unbounded(usize),
    Moved,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    Capped(Status),
}

impl<T: Scalar> Tableau<T> {
    fn new(p: &LpProblem, tol: Tolerances<T>, rule: PivotRule) -> Result<Self> {
        let (m, n) = (p.rows.len(), p.variables.len());
        let ncols = n + m;
        let zero = T::zero();
        let mut lower: Vec<Option<T>> = p
            .variables
            .iter()
            .map(|v| Some(T::from_i64(v.lower)))
            .collect();
        let mut upper: Vec<Option<T>> = p
            .variables
            .iter()
            .map(|v| v.upper.map(T::from_i64))
            .collect();
        for r in &p.rows {
            let (lo, hi) = match r.relation {
                Relation::Eq => (Some(zero.clone()), Some(zero.clone())),
                Relation::Le => (Some(zero.clone()), None),
                Relation::Ge => (None, Some(zero.clone())),
            };
            lower.push(lo);
            upper.push(hi);
        }
        for (v, (lo, hi)) in p.variables.iter().zip(lower.iter().zip(upper.iter())) {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Err(crate::Error::Model(format!(
                        "column {} has empty bounds",
                        v.name
                    )));
                }
            }
        }

        let mut t = vec![zero.clone(); m * ncols];
        let mut at_upper = vec![false; ncols];
        let mut basic_row = vec![None; ncols];
        let mut basis = Vec::with_capacity(m);
        let mut art_negative = vec![false; m];
        let mut xb = Vec::with_capacity(m);
        // structural columns start at their lower bound
        let x0: Vec<T> = lower[..n]
            .iter()
            .map(|l| l.clone().expect("finite lower bound"))
            .collect();
        for (i, r) in p.rows.iter().enumerate() {
            let mut resid = T::from_i64(r.rhs);
            for &(c, a) in &r.coeffs {
                resid = resid - T::from_i64(a) * x0[c].clone();
            }
            let aux = n + i;
            let fits = lower[aux].as_ref().is_none_or(|lo| resid >= *lo)
                && upper[aux].as_ref().is_none_or(|hi| resid <= *hi);
            let row = &mut t[i * ncols..(i + 1) * ncols];
            if fits {
                for &(c, a) in &r.coeffs {
                    row[c] = T::from_i64(a);
                }
                row[aux] = T::from_i64(1);
                basis.push(aux);
                basic_row[aux] = Some(i);
                xb.push(resid);
            } else {
                // aux parks at the bound nearest the residual, the artificial absorbs the rest
                let parked = if lower[aux].as_ref().is_some_and(|lo| resid < *lo) {
                    lower[aux].clone().unwrap()
                } else {
                    at_upper[aux] = true;
                    upper[aux].clone().unwrap()
                };
                let gap = resid - parked;
                let negative = gap < zero;
                art_negative[i] = negative;
                let s = |x: T| if negative { -x } else { x };
                for &(c, a) in &r.coeffs {
                    row[c] = s(T::from_i64(a));
                }
                row[aux] = s(T::from_i64(1));
                basis.push(ncols + i);
                xb.push(gap.abs());
            }
        }
        Ok(Self {
            m,
            n_struct: n,
            ncols,
            t,
            d: vec![zero.clone(); ncols],
            cost: vec![zero; ncols],
            lower,
            upper,
            at_upper,
            basic_row,
            basis,
            xb,
            rhs: p.rows.iter().map(|r| T::from_i64(r.rhs)).collect(),
            rows: p
                .rows
                .iter()
                .map(|r| r.coeffs.iter().map(|&(c, a)| (c, T::from_i64(a))).collect())
                .collect(),
            art_negative,
            tol,
            rule,
            degenerate_run: 0,
            rejected: vec![false; ncols],
            iterations: 0,
        })
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.t[i * self.ncols + j]
    }

    fn is_artificial(&self, v: VarId) -> bool {
        v >= self.ncols
    }

    fn nonbasic_value(&self, j: usize) -> T {
        if self.at_upper[j] {
            self.upper[j]
                .clone()
                .expect("at upper implies finite upper")
        } else {
            self.lower[j]
                .clone()
                .expect("at lower implies finite lower")
        }
    }

    fn basic_bounds(&self, v: VarId, phase_one: bool) -> (Option<T>, Option<T>) {
        if self.is_artificial(v) {
            // free to grow in phase one, pinned at zero afterwards
            let z = Some(T::zero());
            return (z.clone(), if phase_one { None } else { z });
        }
        (self.lower[v].clone(), self.upper[v].clone())
    }

    fn artificial_rows(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&i| self.is_artificial(self.basis[i]))
            .collect()
    }

    fn phase_one_costs(&mut self) {
        let zero = T::zero();
        self.d = vec![zero; self.ncols];
        for i in self.artificial_rows() {
            for j in 0..self.ncols {
                let a = self.at(i, j).clone();
                if a != T::zero() {
                    self.d[j] = self.d[j].clone() - a;
                }
            }
        }
    }

    fn phase_two_costs(&mut self, cost: Vec<T>) {
        let mut d = cost.clone();
        for i in 0..self.m {
            let v = self.basis[i];
            if self.is_artificial(v) {
                continue;
            }
            let cb = cost[v].clone();
            if cb == T::zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                let a = self.at(i, j);
                if *a != T::zero() {
                    *dj = dj.clone() - cb.clone() * a.clone();
                }
            }
        }
        self.cost = cost;
        self.d = d;
    }

    fn phase_one_value(&self) -> T {
        self.artificial_rows()
            .into_iter()
            .fold(T::zero(), |acc, i| acc + self.xb[i].clone())
    }

    fn entering(&self, bland: bool) -> Option<(usize, bool)> {
        let neg_tol = -self.tol.cost.clone();
        let mut best: Option<(usize, bool, T)> = None;
        for j in 0..self.ncols {
            if self.basic_row[j].is_some() || self.rejected[j] {
                continue;
            }
            if let (Some(lo), Some(hi)) = (&self.lower[j], &self.upper[j]) {
                if lo == hi {
                    continue;
                }
            }
            let dj = &self.d[j];
            let increase = if self.at_upper[j] {
                if *dj > self.tol.cost {
                    false
                } else {
                    continue;
                }
            } else if *dj < neg_tol {
                true
            } else if self.lower[j].is_none() && *dj > self.tol.cost {
                false
            } else {
                continue;
            };
            if bland {
                return Some((j, increase));
            }
            let score = dj.abs();
            if best.as_ref().is_none_or(|b| score > b.2) {
                best = Some((j, increase, score));
            }
        }
        best.map(|(j, inc, _)| (j, inc))
    }

    /// One iteration; `phase_one` relaxes the artificials' upper bound.
    fn step(&mut self, phase_one: bool) -> Step {
        let bland = self.rule == PivotRule::Bland || self.degenerate_run >= DEGENERACY_LIMIT;
        let Some((q, increase)) = self.entering(bland) else {
            return Step::Optimal;
        };
        let zero = T::zero();
        let sign = |x: T| if increase { x } else { -x };

        // ratio test; in float mode a Harris pass first finds the longest step
        // that keeps every basic within its bound plus the feasibility slack,
        // then the largest pivot among the rows blocking inside that step wins
        struct Cand<T> {
            row: usize,
            limit: T,
            relaxed: T,
            hits_lower: bool,
            mag: T,
        }
        let mut cands: Vec<Cand<T>> = Vec::new();
        for i in 0..self.m {
            let alpha = self.at(i, q).clone();
            if alpha.abs() <= self.tol.pivot {
                continue;
            }
            // basic moves by -sign(alpha)·θ
            let rate = sign(alpha.clone());
            let (lo, hi) = self.basic_bounds(self.basis[i], phase_one);
            let (slack, hits_lower, speed) = if rate > zero {
                match lo {
                    Some(lo) => (self.xb[i].clone() - lo, true, rate),
                    None => continue,
                }
            } else {
                match hi {
                    Some(hi) => (hi - self.xb[i].clone(), false, -rate),
                    None => continue,
                }
            };
            let limit = slack.clone() / speed.clone();
            let limit = if limit < zero { zero.clone() } else { limit };
            // a basic already past its bound blocks at zero rather than dropping out
            let relaxed = (slack + self.tol.feas.clone()) / speed;
            let relaxed = if relaxed < zero {
                zero.clone()
            } else {
                relaxed
            };
            cands.push(Cand {
                row: i,
                limit,
                relaxed,
                hits_lower,
                mag: alpha.abs(),
            });
        }
        let mut best: Option<(usize, T, bool, T)> = None; // (row, ratio, hits_lower, |alpha|)
        let min_of = |xs: &mut dyn Iterator<Item = T>| xs.reduce(|a, b| if b < a { b } else { a });
        let inexact = self.tol.feas != zero;
        // Bland keeps the textbook minimum-ratio rule (near-ties by index) so
        // float and exact runs walk the same bases
        let cutoff = if bland && inexact {
            min_of(&mut cands.iter().map(|c| c.limit.clone())).map(|t| t + self.tol.feas.clone())
        } else {
            min_of(&mut cands.iter().map(|c| c.relaxed.clone()))
        };
        if let Some(theta_max) = cutoff {
            for c in cands.into_iter().filter(|c| c.limit <= theta_max) {
                let better = match &best {
                    None => true,
                    Some((bi, br, _, ba)) => {
                        if !inexact {
                            // exact: smallest ratio, then the rule's tie-break
                            match c.limit.partial_cmp(br).unwrap_or(Ordering::Equal) {
                                Ordering::Less => true,
                                Ordering::Greater => false,
                                Ordering::Equal => {
                                    if bland {
                                        self.basis[c.row] < self.basis[*bi]
                                    } else {
                                        c.mag > *ba
                                    }
                                }
                            }
                        } else if bland {
                            self.basis[c.row] < self.basis[*bi]
                        } else {
                            c.mag > *ba || (c.mag == *ba && self.basis[c.row] < self.basis[*bi])
                        }
                    }
                };
                if better {
                    best = Some((c.row, c.limit, c.hits_lower, c.mag));
                }
            }
        }

        let own_range = match (&self.lower[q], &self.upper[q]) {
            (Some(lo), Some(hi)) => Some(hi.clone() - lo.clone()),
            _ => None,
        };
        let flip = match (&own_range, &best) {
            (None, None) => return Step::Unbounded(q),
            (Some(_), None) => true,
            (Some(r), Some((_, ratio, _, _))) => r <= ratio,
            (None, Some(_)) => false,
        };
        let theta = if flip {
            own_range.clone().unwrap()
        } else {
            best.as_ref().unwrap().1.clone()
        };

        if theta > self.tol.feas {
            self.degenerate_run = 0;
        } else {
            self.degenerate_run = self.degenerate_run.saturating_add(1);
        }
        self.iterations += 1;

        // move the basics
        if theta != zero {
            for i in 0..self.m {
                let alpha = self.at(i, q).clone();
                if alpha != zero {
                    self.xb[i] = self.xb[i].clone() - sign(alpha) * theta.clone();
                }
            }
        }
        let entering_value = self.nonbasic_value(q) + sign(theta);

        if flip {
            self.at_upper[q] = increase;
            return Step::Moved;
        }
        let (r, _, hits_lower, _) = best.unwrap();
        let leaving = self.basis[r];
        if !self.is_artificial(leaving) {
            self.at_upper[leaving] = !hits_lower;
            self.basic_row[leaving] = None;
        }
        self.pivot(r, q);
        self.xb[r] = entering_value;
        Step::Moved
    }

    /// Makes column `q` basic in row `r`; values are the caller's business.
    fn pivot(&mut self, r: usize, q: usize) {
        let nc = self.ncols;
        let zero = T::zero();
        let piv = self.at(r, q).clone();
        let nz: Vec<usize> = (0..nc).filter(|&j| self.t[r * nc + j] != zero).collect();
        for &j in &nz {
            let v = self.t[r * nc + j].clone() / piv.clone();
            self.t[r * nc + j] = v;
        }
        let prow: Vec<T> = nz.iter().map(|&j| self.t[r * nc + j].clone()).collect();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * nc + q].clone();
            if f == zero {
                continue;
            }
            for (&j, pj) in nz.iter().zip(prow.iter()) {
                let cell = &mut self.t[i * nc + j];
                let v = cell.clone() - f.clone() * pj.clone();
                *cell = if v.abs() <= self.tol.flush {
                    zero.clone()
                } else {
                    v
                };
            }
            self.t[i * nc + q] = zero.clone();
        }
        let f = self.d[q].clone();
        if f != zero {
            for (&j, pj) in nz.iter().zip(prow.iter()) {
                let v = self.d[j].clone() - f.clone() * pj.clone();
                self.d[j] = if v.abs() <= self.tol.flush {
                    zero.clone()
                } else {
                    v
                };
            }
            self.d[q] = zero;
        }
        let old = self.basis[r];
        if old < nc {
            self.basic_row[old] = None;
        }
        self.basis[r] = q;
        self.basic_row[q] = Some(r);
    }

    fn run(&mut self, phase_one: bool, opts: &SolverOptions, start: Option<Instant>) -> PhaseEnd {
        let inexact = self.tol.feas != T::zero();
        let mut since_refresh = 0u32;
        loop {
            if self.iterations >= opts.iteration_cap {
                return PhaseEnd::Capped(Status::IterationCap);
            }
            if let (Some(cap), Some(s)) = (opts.time_cap, start) {
                if s.elapsed() >= cap {
                    return PhaseEnd::Capped(Status::TimeCap);
                }
            }
            if inexact && since_refresh >= REFRESH_EVERY {
                self.refresh(phase_one);
                since_refresh = 0;
            }
            match self.step(phase_one) {
                // trust an optimality verdict only on freshly computed values
                Step::Optimal if inexact && since_refresh > 0 => {
                    self.refresh(phase_one);
                    since_refresh = 0;
                }
                Step::Optimal => return PhaseEnd::Optimal,
                // a ray that only exists through rounding: recompute, then give up on the column
                Step::Unbounded(_) if inexact && since_refresh > 0 => {
                    self.refresh(phase_one);
                    since_refresh = 0;
                }
                Step::Unbounded(q) if inexact && phase_one => self.rejected[q] = true,
                Step::Unbounded(_) => return PhaseEnd::Unbounded,
                Step::Moved => {
                    since_refresh += 1;
                    self.rejected.iter_mut().for_each(|r| *r = false);
                }
            }
        }
    }

    /// Recomputes the basic values from `B⁻¹` (the auxiliary block of the
    /// tableau) and the reduced costs from the current rows, discarding the
    /// drift accumulated by incremental updates.
    fn refresh(&mut self, phase_one: bool) {
        let zero = T::zero();
        let moved: Vec<(usize, T)> = (0..self.ncols)
            .filter(|&j| self.basic_row[j].is_none())
            .map(|j| (j, self.nonbasic_value(j)))
            .filter(|(_, v)| *v != zero)
            .collect();
        for r in 0..self.m {
            let mut v = zero.clone();
            for (i, b) in self.rhs.iter().enumerate() {
                if *b != zero {
                    v = v + self.at(r, self.n_struct + i).clone() * b.clone();
                }
            }
            for (j, x) in &moved {
                v = v - self.at(r, *j).clone() * x.clone();
            }
            self.xb[r] = v;
        }
        if phase_one {
            self.phase_one_costs();
        } else {
            let cost = std::mem::take(&mut self.cost);
            self.phase_two_costs(cost);
        }
    }

    /// Pivots zero-valued artificials out of the basis where the row allows it.
    fn drive_out_artificials(&mut self) {
        for r in self.artificial_rows() {
            let mut pick: Option<(usize, T)> = None;
            for j in 0..self.ncols {
                if self.basic_row[j].is_some() {
                    continue;
                }
                let a = self.at(r, j).abs();
                if a > self.tol.pivot && pick.as_ref().is_none_or(|p| a > p.1) {
                    pick = Some((j, a));
                }
            }
            if let Some((j, _)) = pick {
                let v = self.nonbasic_value(j);
                self.pivot(r, j);
                self.xb[r] = v;
            }
        }
    }

    /// `b_i - (a_i·x + s_i ± t_i)` over the original rows, with every value
    /// read from the current basis.
    fn row_residuals(&self) -> Vec<T> {
        let mut full: Vec<T> = (0..self.ncols)
            .map(|j| match self.basic_row[j] {
                Some(i) => self.xb[i].clone(),
                None => self.nonbasic_value(j),
            })
            .collect();
        let mut art = vec![T::zero(); self.m];
        for (i, &v) in self.basis.iter().enumerate() {
            if v >= self.ncols {
                art[v - self.ncols] = self.xb[i].clone();
            }
        }
        let mut out = Vec::with_capacity(self.m);
        for (i, row) in self.rows.iter().enumerate() {
            let aux = std::mem::replace(&mut full[self.n_struct + i], T::zero());
            let t = if self.art_negative[i] {
                -art[i].clone()
            } else {
                art[i].clone()
            };
            let lhs = row.iter().fold(aux.clone() + t, |acc, (c, a)| {
                acc + a.clone() * full[*c].clone()
            });
            full[self.n_struct + i] = aux;
            out.push(self.rhs[i].clone() - lhs);
        }
        out
    }

    fn row_residual(&self) -> f64 {
        self.row_residuals()
            .iter()
            .map(|r| r.abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// Iterative refinement of the basic values with the tableau's `B⁻¹`.
    fn refine_primal(&mut self, rounds: usize) {
        let zero = T::zero();
        for _ in 0..rounds {
            let r = self.row_residuals();
            let nz: Vec<(usize, T)> = r
                .into_iter()
                .enumerate()
                .filter(|(_, v)| *v != zero)
                .collect();
            if nz.is_empty() {
                return;
            }
            for k in 0..self.m {
                let delta = nz.iter().fold(zero.clone(), |acc, (i, v)| {
                    acc + self.at(k, self.n_struct + i).clone() * v.clone()
                });
                self.xb[k] = self.xb[k].clone() + delta;
            }
        }
    }

    /// Row multipliers `y = c_B B⁻¹`, read off the auxiliary reduced costs and
    /// refined against the basic columns in float mode.
    fn duals(&self, rounds: usize) -> Vec<T> {
        let zero = T::zero();
        let mut y: Vec<T> = (0..self.m)
            .map(|i| -self.d[self.n_struct + i].clone())
            .collect();
        for _ in 0..rounds {
            let mut aty = vec![zero.clone(); self.n_struct];
            for (i, row) in self.rows.iter().enumerate() {
                if y[i] != zero {
                    for (c, a) in row {
                        aty[*c] = aty[*c].clone() + a.clone() * y[i].clone();
                    }
                }
            }
            // residual of y·B = c_B on each basic column
            let rho: Vec<T> = self
                .basis
                .iter()
                .map(|&v| {
                    if v < self.n_struct {
                        self.cost[v].clone() - aty[v].clone()
                    } else if v < self.ncols {
                        self.cost[v].clone() - y[v - self.n_struct].clone()
                    } else {
                        let i = v - self.ncols;
                        if self.art_negative[i] {
                            y[i].clone()
                        } else {
                            -y[i].clone()
                        }
                    }
                })
                .collect();
            if rho.iter().all(|r| *r == zero) {
                break;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                let delta = rho
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| **r != zero)
                    .fold(zero.clone(), |acc, (k, r)| {
                        acc + r.clone() * self.at(k, self.n_struct + i).clone()
                    });
                *yi = yi.clone() + delta;
            }
        }
        y
    }

    fn column_values(&self) -> Vec<T> {
        (0..self.n_struct)
            .map(|j| match self.basic_row[j] {
                Some(i) => self.xb[i].clone(),
                None => self.nonbasic_value(j),
            })
            .collect()
    }

    fn objective(&self) -> T {
        let x = self.column_values();
        x.iter()
            .zip(self.cost.iter())
            .fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone())
    }
}

/// Solves `p` with the primal simplex.
pub fn solve(p: &LpProblem, opts: &SolverOptions) -> Result<LpSolution> {
    p.validate()?;
    opts.validate()?;
    if p.variables
        .iter()
        .any(|v| v.upper.is_some_and(|u| u < v.lower))
    {
        return Ok(blank(p, Status::Infeasible, opts.arithmetic, 0));
    }
    match opts.arithmetic {
        Arithmetic::Float64 => {
            let t = opts.feasibility_tol;
            let tol = Tolerances {
                pivot: 1e-7,
                cost: t,
                feas: t,
                flush: 1e-12,
            };
            solve_with::<f64>(p, opts, tol)
        }
        Arithmetic::ExactRational => {
            let z = <BigRational as Zero>::zero();
            let tol = Tolerances {
                pivot: z.clone(),
                cost: z.clone(),
                feas: z.clone(),
                flush: z,
            };
            solve_with::<BigRational>(p, opts, tol)
        }
    }
}

fn blank(p: &LpProblem, status: Status, arithmetic: Arithmetic, iterations: u64) -> LpSolution {
    let _ = p;
    LpSolution {
        status,
        objective: None,
        objective_exact: None,
        values: BTreeMap::new(),
        values_exact: None,
        duals: BTreeMap::new(),
        basis: Vec::new(),
        iterations,
        arithmetic,
    }
}

fn solve_with<T: Scalar>(
    p: &LpProblem,
    opts: &SolverOptions,
    tol: Tolerances<T>,
) -> Result<LpSolution> {
    let start = opts.time_cap.map(|_| Instant::now());
    let objective = p.objective.expect("validated");
    let mut tab = Tableau::<T>::new(p, tol.clone(), opts.pivot_rule)?;

    // phase one
    if !tab.artificial_rows().is_empty() {
        tab.phase_one_costs();
        match tab.run(true, opts, start) {
            PhaseEnd::Capped(s) => return Ok(blank(p, s, opts.arithmetic, tab.iterations)),
            PhaseEnd::Unbounded => {
                return Err(crate::Error::Internal(
                    "phase one cannot be unbounded".into(),
                ));
            }
            PhaseEnd::Optimal => {}
        }
        let scale = p
            .rows
            .iter()
            .map(|r| r.rhs.unsigned_abs())
            .max()
            .unwrap_or(0)
            .max(1) as i64;
        check_accuracy(&tab, scale, "phase one")?;
        if tab.phase_one_value() > tol.feas.clone() * T::from_i64(scale) {
            return Ok(blank(
                p,
                Status::Infeasible,
                opts.arithmetic,
                tab.iterations,
            ));
        }
        tab.drive_out_artificials();
    }

    // phase two, always as a minimization
    let mut cost = vec![T::zero(); tab.ncols];
    cost[objective.column] = T::from_i64(if objective.sense == Sense::Min { 1 } else { -1 });
    tab.phase_two_costs(cost);
    tab.degenerate_run = 0;
    let status = match tab.run(false, opts, start) {
        PhaseEnd::Optimal => Status::Optimal,
        PhaseEnd::Unbounded => Status::Unbounded,
        PhaseEnd::Capped(s) => s,
    };
    let scale = p
        .rows
        .iter()
        .map(|r| r.rhs.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1) as i64;
    if tab.tol.feas != T::zero() {
        tab.refine_primal(REFINE_ROUNDS);
    }
    check_accuracy(&tab, scale, "phase two")?;
    Ok(report(p, &tab, status, opts.arithmetic))
}

/// Residual allowed on the original rows at the end of a float phase, per
/// unit of the largest right-hand side.
const ACCURACY_PER_UNIT: f64 = 1e-9;

fn check_accuracy<T: Scalar>(tab: &Tableau<T>, scale: i64, phase: &str) -> Result<()> {
    let r = tab.row_residual();
    let exact = tab.tol.feas == T::zero();
    if (exact && r != 0.0) || !(r <= ACCURACY_PER_UNIT * scale as f64) {
        return Err(crate::Error::Numerical(format!(
            "row residual {r:e} after {phase} ({} iterations)",
            tab.iterations
        )));
    }
    Ok(())
}

fn report<T: Scalar>(
    p: &LpProblem,
    tab: &Tableau<T>,
    status: Status,
    arithmetic: Arithmetic,
) -> LpSolution {
    let x = tab.column_values();
    let sense_sign = if p.objective.unwrap().sense == Sense::Min {
        1
    } else {
        -1
    };
    let obj = tab.objective() * T::from_i64(sense_sign);
    let values = p
        .variables
        .iter()
        .zip(x.iter())
        .map(|(v, xi)| (v.name.clone(), xi.to_f64()))
        .collect();
    let values_exact = (arithmetic == Arithmetic::ExactRational).then(|| {
        p.variables
            .iter()
            .zip(x.iter())
            .map(|(v, xi)| (v.name.clone(), xi.render()))
            .collect()
    });
    let rounds = if arithmetic == Arithmetic::Float64 {
        REFINE_ROUNDS
    } else {
        0
    };
    let duals = p
        .rows
        .iter()
        .zip(tab.duals(rounds))
        .map(|(r, y)| (r.name.clone(), y.to_f64()))
        .collect();
    let basis = tab
        .basis
        .iter()
        .map(|&v| {
            if v < tab.n_struct {
                p.variables[v].name.clone()
            } else if v < tab.ncols {
                format!("S:{}", p.rows[v - tab.n_struct].name)
            } else {
                format!("A:{}", p.rows[v - tab.ncols].name)
            }
        })
        .collect();
    LpSolution {
        status,
        objective: (status != Status::Unbounded).then(|| obj.to_f64()),
        objective_exact: (arithmetic == Arithmetic::ExactRational && status != Status::Unbounded)
            .then(|| obj.render()),
        values,
        values_exact,
        duals,
        basis,
        iterations: tab.iterations,
        arithmetic,
    }
}
