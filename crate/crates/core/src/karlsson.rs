//! Karlsson's three-parameter family of H2-reducible 6×6 Hadamard matrices.
//!
//! A member is fixed by two angles `θ, φ` and a phase `z1`. The angles give
//! the 2×2 block `A` (and `B = -F2 - A`); the remaining phases `z2, z3, z4`
//! follow from `z1` through the Möbius maps `M_A` and `M_B`:
//!
//! ```text
//! z3² = M_A(z1²)    z3² = M_B(z2²)
//! z4² = M_A(z2²)    z4² = M_B(z1²)
//! ```
//!
//! The matrix is assembled from nine 2×2 blocks,
//!
//! ```text
//!     | F2  Z1  Z2 |
//! K = | Z3  a   b  |    a = ½ Z3 A Z1,  b = ½ Z3 B Z2,
//!     | Z4  c   d  |    c = ½ Z4 B Z1,  d = ½ Z4 A Z2.
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{PhaseMatrix, TOL_UNITARY};

pub type Mat2 = [[Complex64; 2]; 2];

/// Denominators below this modulus are treated as singular.
pub const EPS_DENOM: f64 = 1e-12;
/// Allowed residual of the redundant relation `z4² = M_B(z1²)`.
pub const TOL_CONSISTENCY: f64 = 1e-8;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `(αz - β) / (β̄z - ᾱ)`.
pub fn mobius(alpha: Complex64, beta: Complex64, z: Complex64) -> Result<Complex64> {
    let den = beta.conj() * z - alpha.conj();
    if den.norm() <= EPS_DENOM {
        return Err(Error::SingularTransform { z });
    }
    Ok((alpha * z - beta) / den)
}

/// `(ᾱw - β) / (β̄w - α)`, the inverse of [`mobius`].
pub fn mobius_inverse(alpha: Complex64, beta: Complex64, w: Complex64) -> Result<Complex64> {
    let den = beta.conj() * w - alpha;
    if den.norm() <= EPS_DENOM {
        return Err(Error::SingularTransform { z: w });
    }
    Ok((alpha.conj() * w - beta) / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            _ => Err(Error::InvalidParams(format!(
                "branch selector must be ±1, got {s}"
            ))),
        }
    }
}

/// Square-root branch selectors for `z3`, `z2` and `z4`, in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branches {
    pub z3: Branch,
    pub z2: Branch,
    pub z4: Branch,
}

impl Default for Branches {
    fn default() -> Self {
        Self {
            z3: Branch::Plus,
            z2: Branch::Plus,
            z4: Branch::Plus,
        }
    }
}

impl std::str::FromStr for Branches {
    type Err = Error;

    /// Three signs for `z3`, `z2`, `z4`, e.g. `+-+`.
    fn from_str(s: &str) -> Result<Self> {
        let signs: Vec<Branch> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Branch::Plus),
                '-' => Ok(Branch::Minus),
                _ => Err(Error::InvalidParams(format!(
                    "branch string `{s}` must use only + and -"
                ))),
            })
            .collect::<Result<_>>()?;
        match signs[..] {
            [z3, z2, z4] => Ok(Branches { z3, z2, z4 }),
            _ => Err(Error::InvalidParams(format!(
                "branch string `{s}` needs three signs"
            ))),
        }
    }
}

impl std::fmt::Display for Branches {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = |b: Branch| if b == Branch::Plus { '+' } else { '-' };
        write!(f, "{}{}{}", c(self.z3), c(self.z2), c(self.z4))
    }
}

impl Branches {
    /// All eight sign combinations.
    pub fn all() -> Vec<Branches> {
        let b = [Branch::Plus, Branch::Minus];
        let mut out = Vec::with_capacity(8);
        for z3 in b {
            for z2 in b {
                for z4 in b {
                    out.push(Branches { z3, z2, z4 });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KarlssonParams {
    pub theta: f64,
    pub phi: f64,
    pub z1: Complex64,
    pub branches: Branches,
}

impl KarlssonParams {
    /// `z1 = exp(i·z1_arg)`, principal branches everywhere.
    pub fn new(theta: f64, phi: f64, z1_arg: f64) -> Self {
        Self {
            theta,
            phi,
            z1: Complex64::from_polar(1.0, z1_arg),
            branches: Branches::default(),
        }
    }

    pub fn with_branches(mut self, branches: Branches) -> Self {
        self.branches = branches;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.phi.is_finite()) {
            return Err(Error::InvalidParams("θ and φ must be finite".into()));
        }
        if (self.z1.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "|z1| = {} is not 1",
                self.z1.norm()
            )));
        }
        Ok(())
    }
}

/// The entries `A11, A12` and `B11 = -1 - A11, B12 = -1 - A12`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbEntries {
    pub a11: Complex64,
    pub a12: Complex64,
    pub b11: Complex64,
    pub b12: Complex64,
}

/// Which way to read the last term of the `t1` bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BracketReading {
    /// `B11·conj(B12)·A11²`
    AsPrinted,
    /// `B11·conj(B12)·conj(A11²)`
    Conjugated,
}

impl AbEntries {
    pub fn a(&self) -> Mat2 {
        [[self.a11, self.a12], [self.a12.conj(), -self.a11.conj()]]
    }

    /// `B = -F2 - A`.
    pub fn b(&self) -> Mat2 {
        let a = self.a();
        let f2 = f2();
        let mut b = [[Complex64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                b[i][j] = -f2[i][j] - a[i][j];
            }
        }
        b
    }

    pub fn alpha_a(&self) -> Complex64 {
        self.a12 * self.a12
    }

    pub fn beta_a(&self) -> Complex64 {
        self.a11 * self.a11
    }

    pub fn alpha_b(&self) -> Complex64 {
        self.b12 * self.b12
    }

    pub fn beta_b(&self) -> Complex64 {
        self.b11 * self.b11
    }

    /// `Re(A11²·conj(B11²)) - Re(A12²·conj(B12²))`; vanishes identically.
    pub fn t0_residual(&self) -> f64 {
        let sq = |z: Complex64| z * z;
        (sq(self.a11) * sq(self.b11).conj()).re - (sq(self.a12) * sq(self.b12).conj()).re
    }

    /// The bracket multiplying `z4² - 1` in the `t1` coefficient.
    pub fn t1_bracket(&self, reading: BracketReading) -> Complex64 {
        let sq = |z: Complex64| z * z;
        let (a11, a12, b11, b12) = (self.a11, self.a12, self.b11, self.b12);
        let last = match reading {
            BracketReading::AsPrinted => sq(a11),
            BracketReading::Conjugated => sq(a11).conj(),
        };
        2.0 * ONE
            + a11.conj() * a12 * sq(b12).conj()
            + b11.conj() * b12 * sq(a12).conj()
            + a11 * a12.conj() * sq(b11).conj()
            + b11 * b12.conj() * last
    }
}

/// The angle-dependent entries of `A` and `B`.
pub fn ab_blocks(theta: f64, phi: f64) -> AbEntries {
    let h = Complex64::new(0.0, 3f64.sqrt() / 2.0);
    let (s, c) = theta.sin_cos();
    let a11 = Complex64::new(-0.5, 0.0) + h * (c + Complex64::from_polar(s, -phi));
    let a12 = Complex64::new(-0.5, 0.0) + h * (-c + Complex64::from_polar(s, phi));
    AbEntries {
        a11,
        a12,
        b11: -ONE - a11,
        b12: -ONE - a12,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedZs {
    pub z2: Complex64,
    pub z3: Complex64,
    pub z4: Complex64,
    /// `|z4² - M_B(z1²)|`.
    pub consistency_residual: f64,
}

/// Derives `z3`, `z2`, `z4` from `z1` in that order, then checks the
/// redundant relation `z4² = M_B(z1²)`.
pub fn derive_zs(params: &KarlssonParams) -> Result<DerivedZs> {
    params.validate()?;
    derive_from(&ab_blocks(params.theta, params.phi), params)
}

fn derive_from(ab: &AbEntries, params: &KarlssonParams) -> Result<DerivedZs> {
    let (aa, ba, ab_, bb) = (ab.alpha_a(), ab.beta_a(), ab.alpha_b(), ab.beta_b());
    let z1sq = params.z1 * params.z1;
    let br = params.branches;
    let z3 = br.z3.sign() * mobius(aa, ba, z1sq)?.sqrt();
    let z2 = br.z2.sign() * mobius_inverse(ab_, bb, z3 * z3)?.sqrt();
    let z4 = br.z4.sign() * mobius(aa, ba, z2 * z2)?.sqrt();
    let residual = (z4 * z4 - mobius(ab_, bb, z1sq)?).norm();
    if !(residual <= TOL_CONSISTENCY) {
        return Err(Error::ConsistencyViolation {
            residual,
            tolerance: TOL_CONSISTENCY,
        });
    }
    Ok(DerivedZs {
        z2,
        z3,
        z4,
        consistency_residual: residual,
    })
}

/// Every intermediate quantity of the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct KarlssonBlocks {
    pub ab: AbEntries,
    pub z1: Complex64,
    pub zs: DerivedZs,
    pub a_mat: Mat2,
    pub b_mat: Mat2,
    pub f2: Mat2,
    pub z1_blk: Mat2,
    pub z2_blk: Mat2,
    pub z3_blk: Mat2,
    pub z4_blk: Mat2,
    pub a: Mat2,
    pub b: Mat2,
    pub c: Mat2,
    pub d_blk: Mat2,
}

impl KarlssonBlocks {
    pub fn alpha_a(&self) -> Complex64 {
        self.ab.alpha_a()
    }

    pub fn beta_a(&self) -> Complex64 {
        self.ab.beta_a()
    }

    pub fn alpha_b(&self) -> Complex64 {
        self.ab.alpha_b()
    }

    pub fn beta_b(&self) -> Complex64 {
        self.ab.beta_b()
    }

    /// The 6×6 matrix; block `(p, q)` occupies rows `2p..2p+2`, columns `2q..2q+2`.
    pub fn assemble(&self) -> PhaseMatrix {
        let grid = [
            [&self.f2, &self.z1_blk, &self.z2_blk],
            [&self.z3_blk, &self.a, &self.b],
            [&self.z4_blk, &self.c, &self.d_blk],
        ];
        PhaseMatrix::from_fn(6, "karlsson", |i, j| grid[i / 2][j / 2][i % 2][j % 2])
    }
}

pub fn f2() -> Mat2 {
    [[ONE, ONE], [ONE, -ONE]]
}

/// `[[1, 1], [z, -z]]`, the shape of `Z1` and `Z2`.
fn z_row_block(z: Complex64) -> Mat2 {
    [[ONE, ONE], [z, -z]]
}

/// `[[1, z], [1, -z]]`, the shape of `Z3` and `Z4`.
fn z_col_block(z: Complex64) -> Mat2 {
    [[ONE, z], [ONE, -z]]
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[Complex64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn half_triple(l: &Mat2, m: &Mat2, r: &Mat2) -> Mat2 {
    let mut p = mat2_mul(&mat2_mul(l, m), r);
    for row in p.iter_mut() {
        for e in row.iter_mut() {
            *e *= 0.5;
        }
    }
    p
}

/// `‖X X^† - 2 I‖_max` for a 2×2 block with unit-modulus entries.
pub fn mat2_unitarity_residual(x: &Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let s = x[i][0] * x[j][0].conj() + x[i][1] * x[j][1].conj();
            let t = if i == j { 2.0 } else { 0.0 };
            worst = worst.max((s - t).norm());
        }
    }
    worst
}

pub fn blocks(params: &KarlssonParams) -> Result<KarlssonBlocks> {
    params.validate()?;
    let ab = ab_blocks(params.theta, params.phi);
    let zs = derive_from(&ab, params)?;
    let (a_mat, b_mat) = (ab.a(), ab.b());
    let (z1_blk, z2_blk) = (z_row_block(params.z1), z_row_block(zs.z2));
    let (z3_blk, z4_blk) = (z_col_block(zs.z3), z_col_block(zs.z4));
    Ok(KarlssonBlocks {
        a: half_triple(&z3_blk, &a_mat, &z1_blk),
        b: half_triple(&z3_blk, &b_mat, &z2_blk),
        c: half_triple(&z4_blk, &b_mat, &z1_blk),
        d_blk: half_triple(&z4_blk, &a_mat, &z2_blk),
        ab,
        z1: params.z1,
        zs,
        a_mat,
        b_mat,
        f2: f2(),
        z1_blk,
        z2_blk,
        z3_blk,
        z4_blk,
    })
}

/// Assembles the Karlsson matrix and checks it is Hadamard at [`TOL_UNITARY`].
pub fn build(params: &KarlssonParams) -> Result<PhaseMatrix> {
    let m = blocks(params)?.assemble().with_label(label_for(params));
    let residual = m.unitarity_residual().max(m.max_modulus_error().0);
    if !(residual <= TOL_UNITARY) {
        return Err(Error::ConstructionInvariant { residual });
    }
    Ok(m)
}

fn label_for(p: &KarlssonParams) -> String {
    let s = |b: Branch| if b == Branch::Plus { '+' } else { '-' };
    format!(
        "K(theta={:.6},phi={:.6},z1_arg={:.6},branches={}{}{})",
        p.theta,
        p.phi,
        p.z1.arg(),
        s(p.branches.z3),
        s(p.branches.z2),
        s(p.branches.z4)
    )
}

/// A regular (θ, φ, arg z1) sampling grid: `θ, φ ∈ {2πk/n_angle}`, `arg z1 ∈ {2πk/n_z1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_z1: usize,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            n_theta: 20,
            n_phi: 20,
            n_z1: 8,
        }
    }
}

impl ParamGrid {
    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi * self.n_z1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let step = |k: usize, n: usize| 2.0 * PI * k as f64 / n as f64;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            for j in 0..self.n_phi {
                for m in 0..self.n_z1 {
                    out.push((
                        step(i, self.n_theta),
                        step(j, self.n_phi),
                        step(m, self.n_z1),
                    ));
                }
            }
        }
        out
    }
}
