//! Numerical certification of the closed-form claims: the vanishing of
//! `g(ρ)` on the Karlsson family, the two trigonometric identities behind it,
//! the per-matrix constraint identities, the spectral counterexample, and the
//! feasibility of genuine MUB sets for the linear programs.
//!
//! Every routine returns a [`VerificationReport`]; random draws come from a
//! seeded ChaCha stream derived per sample, so reports do not depend on the
//! thread count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{self, column_sum_phases, ExponentVector, Phases};
use crate::gamma::arrangements;
use crate::karlsson::{self, ab_blocks, BracketReading, Branches, KarlssonParams, ParamGrid};
use crate::lp::{self, CrossVariant, LpSolution};
use crate::matrix::{
    is_unbiased_pair, root_of_unity, PhaseMatrix, SPECTRAL_EXPONENTS, TOL_UNITARY,
};
use crate::par::map_collect;

pub const DEFAULT_SEED: u64 = 0x006d_7562_6c70;
/// Longest list of failing samples kept in a report.
pub const MAX_LISTED: usize = 20;
/// `|g(S6, ρ)|`, symmetrized over the 20 placements of `ρ`.
pub const SPECTRAL_G_ABS: f64 = 1.5;
/// `|Σ_k Π_i S_ik^{ρ_i}|` for every single placement of `ρ`.
pub const SPECTRAL_PLACEMENT_ABS: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub params: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub seed: Option<u64>,
    pub samples: u64,
    /// Grid points rejected because a Möbius denominator vanished.
    pub singular: u64,
    pub singular_points: Vec<String>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub failures: Vec<Sample>,
    /// Claim-specific auxiliary quantities.
    pub values: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(claim: &str, seed: Option<u64>, tolerance: f64) -> Self {
        Self {
            claim: claim.into(),
            seed,
            samples: 0,
            singular: 0,
            singular_points: Vec::new(),
            max_residual: 0.0,
            tolerance,
            pass: false,
            failures: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, params: impl FnOnce() -> String, residual: f64) {
        self.samples += 1;
        // NaN must fail, so compare in the negated sense
        if !(residual <= self.max_residual) {
            self.max_residual = if residual.is_nan() {
                f64::NAN
            } else {
                residual
            };
        }
        if !(residual <= self.tolerance) && self.failures.len() < MAX_LISTED {
            self.failures.push(Sample {
                params: params(),
                value: residual,
            });
        }
    }

    fn singular_point(&mut self, params: String) {
        self.singular += 1;
        if self.singular_points.len() < MAX_LISTED {
            self.singular_points.push(params);
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.samples > 0 && self.max_residual <= self.tolerance;
        self
    }

    /// One-line human summary with 12 significant digits.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: samples={} singular={} max_residual={:.11e} tol={:e}",
            self.claim,
            if self.pass { "PASS" } else { "FAIL" },
            self.samples,
            self.singular,
            self.max_residual,
            self.tolerance
        )
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// The two placements of `(1,1,1,-1,-1,-1)` singled out by the block structure.
pub fn canonical_rhos() -> [ExponentVector; 2] {
    [
        ExponentVector::new(vec![1, 1, 1, -1, -1, -1]),
        ExponentVector::new(vec![1, -1, 1, -1, 1, -1]),
    ]
}

fn grid_samples(grid: &ParamGrid) -> Vec<KarlssonParams> {
    let mut out = Vec::with_capacity(grid.len() * 8);
    for (t, p, z) in grid.points() {
        for br in Branches::all() {
            out.push(KarlssonParams::new(t, p, z).with_branches(br));
        }
    }
    out
}

fn describe(p: &KarlssonParams) -> String {
    let s = |b: karlsson::Branch| if b.sign() > 0.0 { '+' } else { '-' };
    format!(
        "theta={:.12} phi={:.12} z1_arg={:.12} branches={}{}{}",
        p.theta,
        p.phi,
        p.z1.arg(),
        s(p.branches.z3),
        s(p.branches.z2),
        s(p.branches.z4)
    )
}

enum Outcome {
    Singular,
    Residual(f64),
}

fn fold_outcomes(
    report: &mut VerificationReport,
    samples: &[KarlssonParams],
    outcomes: Vec<Outcome>,
) {
    for (p, o) in samples.iter().zip(outcomes) {
        match o {
            Outcome::Singular => report.singular_point(describe(p)),
            Outcome::Residual(r) => report.record(|| describe(p), r),
        }
    }
}

/// `g(ρ) = 0` on every grid point and branch choice: the symmetrized value
/// and the plain column sums at both canonical placements of `ρ` plus
/// `random_placements` further random ones.
pub fn verify_theorem1(grid: &ParamGrid, tol: f64, seed: u64) -> Result<VerificationReport> {
    verify_theorem1_with(grid, tol, seed, &canonical_rhos(), 5)
}

pub fn verify_theorem1_with(
    grid: &ParamGrid,
    tol: f64,
    seed: u64,
    fixed: &[ExponentVector],
    random_placements: usize,
) -> Result<VerificationReport> {
    check_tol(tol)?;
    if let Some(e) = fixed.iter().find(|e| e.dim() != 6) {
        return Err(Error::Dimension(format!(
            "placement {e} is not of length 6"
        )));
    }
    let samples = grid_samples(grid);
    let indexed: Vec<(u64, &KarlssonParams)> = samples
        .iter()
        .enumerate()
        .map(|(i, p)| (i as u64, p))
        .collect();
    let rho = canonical_rhos()[0].clone();
    let outcomes = map_collect(&indexed, |&(i, p)| -> Result<Outcome> {
        let k = match karlsson::build(p) {
            Ok(k) => k,
            Err(Error::SingularTransform { .. }) => return Ok(Outcome::Singular),
            Err(Error::ConsistencyViolation { residual, .. })
            | Err(Error::ConstructionInvariant { residual }) => {
                return Ok(Outcome::Residual(
                    residual.max(f64::MIN_POSITIVE) * f64::INFINITY,
                ))
            }
            Err(e) => return Err(e),
        };
        let ph = Phases::new(&k);
        let mut worst = fourier::g_phases(&ph, &rho).norm();
        let mut rng = sample_rng(seed, i);
        let mut placement: Vec<i32> = rho.components().to_vec();
        for e in fixed {
            worst = worst.max(column_sum_phases(&ph, e).norm());
        }
        for _ in 0..random_placements {
            placement.shuffle(&mut rng);
            worst =
                worst.max(column_sum_phases(&ph, &ExponentVector::new(placement.clone())).norm());
        }
        Ok(Outcome::Residual(worst))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::new("theorem1", Some(seed), tol);
    fold_outcomes(&mut report, &samples, outcomes);
    report.values.insert(
        "placements_per_sample".into(),
        (1 + fixed.len() + random_placements) as f64,
    );
    report.notes.push(format!(
        "grid {}x{}x{} x 8 branch choices; fixed placements: {}",
        grid.n_theta,
        grid.n_phi,
        grid.n_z1,
        fixed
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    Ok(report.finish())
}

/// Hadamard residual `‖KK† - 6I‖_max` at every regular grid point and branch
/// choice; the consistency residual is reported alongside.
pub fn verify_construction(grid: &ParamGrid, tol: f64) -> Result<VerificationReport> {
    check_tol(tol)?;
    let samples = grid_samples(grid);
    let results = map_collect(&samples, |p| -> Result<Option<(f64, f64)>> {
        match karlsson::blocks(p) {
            Ok(b) => Ok(Some((
                b.assemble().unitarity_residual(),
                b.zs.consistency_residual,
            ))),
            Err(Error::SingularTransform { .. }) => Ok(None),
            Err(Error::ConsistencyViolation { residual, .. }) => {
                Ok(Some((f64::INFINITY, residual)))
            }
            Err(e) => Err(e),
        }
    });
    let mut report = VerificationReport::new("construction", None, tol);
    let mut worst_consistency = 0.0f64;
    for (p, r) in samples.iter().zip(results) {
        match r? {
            None => report.singular_point(describe(p)),
            Some((had, cons)) => {
                worst_consistency = worst_consistency.max(cons);
                report.record(|| describe(p), had);
            }
        }
    }
    report
        .values
        .insert("max_consistency_residual".into(), worst_consistency);
    report
        .values
        .insert("consistency_tolerance".into(), karlsson::TOL_CONSISTENCY);
    let mut report = report.finish();
    report.pass &= worst_consistency <= karlsson::TOL_CONSISTENCY;
    Ok(report)
}

/// The `t0` identity and both readings of the `t1` bracket over the distinct
/// `(θ, φ)` pairs of the grid. Passes when `t0` and exactly one reading stay
/// within `tol`; the report names the reading.
pub fn verify_identities(grid: &ParamGrid, tol: f64) -> Result<VerificationReport> {
    check_tol(tol)?;
    let two_pi = std::f64::consts::TAU;
    let mut pairs = Vec::with_capacity(grid.n_theta * grid.n_phi);
    for i in 0..grid.n_theta {
        for j in 0..grid.n_phi {
            pairs.push((
                two_pi * i as f64 / grid.n_theta as f64,
                two_pi * j as f64 / grid.n_phi as f64,
            ));
        }
    }
    let vals = map_collect(&pairs, |&(t, p)| {
        let ab = ab_blocks(t, p);
        (
            ab.t0_residual().abs(),
            ab.t1_bracket(BracketReading::AsPrinted).norm(),
            ab.t1_bracket(BracketReading::Conjugated).norm(),
        )
    });
    let (mut t0, mut printed, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    for &(a, b, c) in &vals {
        t0 = t0.max(a);
        printed = printed.max(b);
        conj = conj.max(c);
    }
    let mut report = VerificationReport::new("identities", None, tol);
    let vanishing: Vec<(&str, f64)> = [("as-printed", printed), ("conjugated", conj)]
        .into_iter()
        .filter(|&(_, r)| r <= tol)
        .collect();
    let bracket = match vanishing.as_slice() {
        [(name, r)] => {
            report
                .notes
                .push(format!("t1 bracket vanishes for the {name} reading only"));
            *r
        }
        [] => {
            report
                .notes
                .push("neither reading of the t1 bracket vanishes".into());
            printed.min(conj)
        }
        _ => {
            report
                .notes
                .push("both readings of the t1 bracket vanish".into());
            f64::INFINITY
        }
    };
    for (&(t, p), &(a, b, c)) in pairs.iter().zip(&vals) {
        let r = if vanishing.len() == 1 {
            a.max(if vanishing[0].0 == "as-printed" { b } else { c })
        } else {
            a
        };
        report.record(|| format!("theta={t:.12} phi={p:.12}"), r);
    }
    report.max_residual = report.max_residual.max(bracket);
    report.values.insert("t0_max".into(), t0);
    report.values.insert("t1_as_printed_max".into(), printed);
    report.values.insert("t1_conjugated_max".into(), conj);
    Ok(report.finish())
}

/// Oracle for the spectral matrix: exact integer exponent sums of `ω`.
pub fn spectral_placement_oracle(e: &[i32]) -> Complex64 {
    (0..6)
        .map(|k| {
            let s: i64 = (0..6)
                .map(|i| e[i] as i64 * SPECTRAL_EXPONENTS[i][k] as i64)
                .sum();
            root_of_unity(s, 3)
        })
        .sum()
}

/// `g(S6, ρ) ≠ 0`: every placement matches the exact oracle and the
/// symmetrized modulus equals [`SPECTRAL_G_ABS`].
pub fn verify_spectral_counterexample() -> Result<VerificationReport> {
    let tol = 1e-9;
    let s = crate::matrix::spectral_matrix();
    let ph = Phases::new(&s);
    let rho = canonical_rhos()[0].clone();
    let mut report = VerificationReport::new("spectral", None, tol);
    let mut min_abs = f64::INFINITY;
    for e in arrangements(rho.components()) {
        let got = column_sum_phases(&ph, &ExponentVector::new(e.clone()));
        let want = spectral_placement_oracle(&e);
        min_abs = min_abs.min(want.norm());
        let placement = ExponentVector::new(e);
        report.record(
            || format!("placement {placement}"),
            (got - want)
                .norm()
                .max((want.norm() - SPECTRAL_PLACEMENT_ABS).abs()),
        );
    }
    let g = fourier::g_phases(&ph, &rho);
    report.record(|| "symmetrized".into(), (g.norm() - SPECTRAL_G_ABS).abs());
    report.values.insert("g_re".into(), g.re);
    report.values.insert("g_im".into(), g.im);
    report.values.insert("g_abs".into(), g.norm());
    report.values.insert("min_placement_abs".into(), min_abs);
    let mut report = report.finish();
    report.pass &= g.norm() > 0.1;
    Ok(report)
}

/// Random `γ ∈ Z^d` with `|γ|₁ ≤ max_l1`, drawn by rejection from a box.
pub fn random_gamma(rng: &mut impl Rng, d: usize, max_l1: u32) -> ExponentVector {
    let half = (max_l1 as i32 / 2).max(1);
    loop {
        let v: Vec<i32> = (0..d).map(|_| rng.gen_range(-half..=half)).collect();
        let e = ExponentVector::new(v);
        if e.l1() <= max_l1 {
            return e;
        }
    }
}

/// Whether `ms` are `d` pairwise unbiased Hadamard matrices (so that together
/// with the identity they form a complete set).
pub fn is_complete_set(ms: &[PhaseMatrix]) -> Result<bool> {
    let d = ms.first().ok_or(Error::EmptySet)?.dim();
    if ms.len() != d || ms.iter().any(|m| m.dim() != d) {
        return Ok(false);
    }
    if ms
        .iter()
        .any(|m| !crate::matrix::is_hadamard(m, TOL_UNITARY))
    {
        return Ok(false);
    }
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if !is_unbiased_pair(&ms[i], &ms[j], TOL_UNITARY)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-matrix `Σ_r G_j(γ+π_r) = d²` on `samples` random `γ` with `|γ|₁ ≤ 12`;
/// for complete sets additionally `d·G + Σ_{r≠t} F(γ+π_r-π_t) = d⁴`,
/// `F(0) = d⁴`, `G(0) = d³` and `F ≤ d·G`.
pub fn verify_constraint_identities(
    ms: &[PhaseMatrix],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    check_tol(tol)?;
    let d = ms.first().ok_or(Error::EmptySet)?.dim();
    let complete = is_complete_set(ms)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gammas: Vec<ExponentVector> = (0..samples)
        .map(|_| random_gamma(&mut rng, d, 12))
        .collect();
    let (d2, d3, d4) = ((d * d) as f64, (d * d * d) as f64, (d * d * d * d) as f64);

    let rows = map_collect(&gammas, |g| -> Result<Vec<(String, f64)>> {
        let mut out = Vec::new();
        for m in ms {
            let s: f64 = (0..d)
                .map(|r| fourier::g_norm_single(m, &g.shifted(r, 1, 0, 0)))
                .sum::<Result<f64>>()?;
            out.push((format!("{} shift-sum at {g}", m.label()), (s - d2).abs()));
        }
        if complete {
            let (_, gg) = fourier::functionals(ms, g)?;
            let mut cross = 0.0;
            for r in 0..d {
                for t in 0..d {
                    if r != t {
                        cross += fourier::f_norm_set(ms, &g.shifted(r, 1, t, -1))?;
                    }
                }
            }
            out.push((
                format!("complement at {g}"),
                (d as f64 * gg + cross - d4).abs(),
            ));
            let (ff, gg) = fourier::functionals(ms, g)?;
            out.push((
                format!("Cauchy-Schwarz at {g}"),
                (ff - d as f64 * gg).max(0.0),
            ));
        }
        Ok(out)
    });

    let mut report = VerificationReport::new("constraints", Some(seed), tol);
    for row in rows {
        for (what, r) in row? {
            report.record(|| what, r);
        }
    }
    if complete {
        let (f0, g0) = fourier::functionals(ms, &ExponentVector::zero(d))?;
        report.record(|| "F(0)".into(), (f0 - d4).abs());
        report.record(|| "G(0)".into(), (g0 - d3).abs());
        report.notes.push(format!(
            "complete set of {d} unbiased Hadamards: set identities checked"
        ));
    } else {
        report
            .notes
            .push("not a complete set: per-matrix identities only".into());
    }
    Ok(report.finish())
}

/// Plugs the functional values of the explicit complete MUB set in dimension
/// `d` into every row of the `(d, l)` program.
pub fn verify_lp_witness(
    d: usize,
    l: u32,
    variant: CrossVariant,
    tol: f64,
) -> Result<VerificationReport> {
    check_tol(tol)?;
    let set = crate::mub::complete_mub_set(d)?;
    // any objective will do; the check only needs one to report a value
    let p = lp::build_lp(d, l, false, variant)?.set_objective(
        lp::Sense::Min,
        lp::Family::G,
        &crate::gamma::ExponentVector::zero(d),
    )?;
    let x = lp::evaluate_point(&p, &set)?;
    let sol = LpSolution {
        status: lp::Status::Optimal,
        objective: None,
        objective_exact: None,
        values: p
            .variables
            .iter()
            .zip(&x)
            .map(|(v, &xi)| (v.name.clone(), xi))
            .collect(),
        values_exact: None,
        duals: BTreeMap::new(),
        basis: Vec::new(),
        iterations: 0,
        arithmetic: lp::Arithmetic::Float64,
    };
    let check = lp::verify_solution(&p, &sol, tol)?;
    let mut report = VerificationReport::new("witness", None, tol);
    report.samples = p.rows.len() as u64 + p.variables.len() as u64;
    report.max_residual = check.max_row_violation.max(check.max_bound_violation);
    report.failures = check
        .violated_rows
        .iter()
        .take(MAX_LISTED)
        .map(|v| Sample {
            params: v.row.clone(),
            value: v.residual,
        })
        .collect();
    report.notes.push(format!(
        "d={d} l={l} variant={variant} rows={} columns={}",
        p.rows.len(),
        p.variables.len()
    ));
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::karlsson::AbEntries;

    #[test]
    fn small_grid_theorem1_passes() {
        let grid = ParamGrid {
            n_theta: 3,
            n_phi: 3,
            n_z1: 2,
        };
        let r = verify_theorem1(&grid, 1e-9, 7).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.samples + r.singular, 3 * 3 * 2 * 8);
    }

    #[test]
    fn impossible_tolerance_fails_with_listed_samples() {
        let grid = ParamGrid {
            n_theta: 3,
            n_phi: 3,
            n_z1: 2,
        };
        let r = verify_theorem1(&grid, 1e-300, 7).unwrap();
        assert!(!r.pass);
        assert!(!r.failures.is_empty() && r.failures.len() <= MAX_LISTED);
    }

    #[test]
    fn reports_are_seed_reproducible() {
        let grid = ParamGrid {
            n_theta: 2,
            n_phi: 3,
            n_z1: 2,
        };
        assert_eq!(
            verify_theorem1(&grid, 1e-9, 11).unwrap(),
            verify_theorem1(&grid, 1e-9, 11).unwrap()
        );
    }

    #[test]
    fn alternating_placement_alone() {
        let grid = ParamGrid {
            n_theta: 4,
            n_phi: 3,
            n_z1: 2,
        };
        let r = verify_theorem1_with(&grid, 1e-9, 1, &canonical_rhos()[1..], 0).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn t0_by_hand_at_origin() {
        // θ = φ = 0: A11 = -1/2 + i√3 = ..., A12 = -1/2 - i√3/2 + i√3/2·0 ...
        let h = 3f64.sqrt() / 2.0;
        let a11 = Complex64::new(-0.5, h);
        let a12 = Complex64::new(-0.5, -h);
        let ab = AbEntries {
            a11,
            a12,
            b11: -1.0 - a11,
            b12: -1.0 - a12,
        };
        assert!((ab_blocks(0.0, 0.0).a11 - a11).norm() < 1e-15);
        assert!((ab_blocks(0.0, 0.0).a12 - a12).norm() < 1e-15);
        // A11 = ω, A12 = ω̄, B11 = ω̄, B12 = ω: Re(ω²·ω²) - Re(ω̄²·ω̄²) = 0
        assert!(ab.t0_residual().abs() < 1e-15);
    }

    #[test]
    fn identities_pick_one_reading() {
        let r = verify_identities(
            &ParamGrid {
                n_theta: 7,
                n_phi: 5,
                n_z1: 1,
            },
            1e-9,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.values["t1_conjugated_max"] < 1e-9);
        assert!(r.values["t1_as_printed_max"] > 1e-3);
    }

    #[test]
    fn spectral_oracle_and_regression() {
        let r = verify_spectral_counterexample().unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.values["g_abs"] - 1.5).abs() < 1e-9);
        assert_eq!(spectral_placement_oracle(&[0; 6]), Complex64::new(6.0, 0.0));
    }

    #[test]
    fn constraint_identities_small_sets() {
        for d in [2, 3] {
            let set = crate::mub::complete_mub_set(d).unwrap();
            let r = verify_constraint_identities(&set, 10, 3, 1e-7).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.notes[0].contains("complete"));
        }
    }

    #[test]
    fn random_gamma_respects_the_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            assert!(random_gamma(&mut rng, 6, 12).l1() <= 12);
        }
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        assert!(verify_identities(&ParamGrid::default(), 0.0).is_err());
    }
}
