//! Permutation-symmetrized Fourier functionals of matrix columns.
//!
//! For a Hadamard matrix with columns `c_1..c_d` and `γ ∈ Z^d`:
//!
//! ```text
//! g(γ) = 1/d! Σ_σ Σ_k c_k^{σ(γ)}
//! G(γ) = 1/d! Σ_σ Σ_{k,l} (c_k / c_l)^{σ(γ)}
//! ```
//!
//! and over a set of matrices `f = Σ_j g_j`, `G = Σ_j G_j`, with `F` the same
//! double sum as `G_j` taken over all column pairs of the whole set.
//!
//! Averaging over all `d!` permutations equals averaging over the distinct
//! arrangements of `γ`, since each arrangement is hit by the same number of
//! permutations; only the distinct ones are visited. Powers of entries are
//! evaluated in the argument domain: the phase of each column product is
//! accumulated as `Σ_i γ_i·arg(M_ik)`, reduced mod 2π, and exponentiated once.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::arrangements;
use crate::matrix::PhaseMatrix;

pub use crate::gamma::ExponentVector;

/// Imaginary part tolerated in the real-valued double sums.
pub const TOL_REAL: f64 = 1e-9;

/// A matrix reduced to its entry arguments.
#[derive(Clone, Debug)]
pub struct Phases {
    d: usize,
    args: Vec<f64>,
}

impl Phases {
    pub fn new(m: &PhaseMatrix) -> Self {
        Self {
            d: m.dim(),
            args: m.args(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Column phases `Σ_i e_i·arg(M_ik)` for every column, reduced into `[0, 2π)`.
    fn column_phases(&self, e: &[i32], out: &mut Vec<f64>) {
        let d = self.d;
        for k in 0..d {
            let mut acc = 0.0;
            for (i, &p) in e.iter().enumerate() {
                if p != 0 {
                    acc = (acc + (p as f64 * self.args[i * d + k]).rem_euclid(TAU)).rem_euclid(TAU);
                }
            }
            out.push(acc);
        }
    }
}

fn check_dim(d: usize, gamma: &ExponentVector) -> Result<()> {
    if gamma.dim() != d {
        return Err(Error::Dimension(format!(
            "γ has length {}, matrix dimension is {d}",
            gamma.dim()
        )));
    }
    Ok(())
}

fn prepare(ms: &[PhaseMatrix], gamma: &ExponentVector) -> Result<Vec<Phases>> {
    let first = ms.first().ok_or(Error::EmptySet)?;
    let d = first.dim();
    if let Some(m) = ms.iter().find(|m| m.dim() != d) {
        return Err(Error::Dimension(format!(
            "`{}` has dimension {}, expected {d}",
            m.label(),
            m.dim()
        )));
    }
    check_dim(d, gamma)?;
    Ok(ms.iter().map(Phases::new).collect())
}

/// Averages `h(column phases of every matrix)` over the distinct arrangements of `γ`.
fn symmetrize<T, H>(mats: &[Phases], gamma: &ExponentVector, mut h: H) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Div<f64, Output = T> + Default,
    H: FnMut(&[Vec<f64>]) -> T,
{
    let arr = arrangements(gamma.components());
    let mut phases: Vec<Vec<f64>> = vec![Vec::with_capacity(gamma.dim()); mats.len()];
    let mut acc = T::default();
    for e in &arr {
        for (m, buf) in mats.iter().zip(phases.iter_mut()) {
            buf.clear();
            m.column_phases(e, buf);
        }
        acc = acc + h(&phases);
    }
    acc / arr.len() as f64
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Literal `Σ_{u,v} (u/v)^e` over every column pair of the given phase lists.
fn double_sum(phases: &[Vec<f64>]) -> Complex64 {
    let mut s = Complex64::default();
    for pu in phases.iter().flatten() {
        for pv in phases.iter().flatten() {
            s += cis(pu - pv);
        }
    }
    s
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > TOL_REAL * z.re.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "{what} has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `g(γ)` for a single matrix.
pub fn g_single(m: &PhaseMatrix, gamma: &ExponentVector) -> Result<Complex64> {
    check_dim(m.dim(), gamma)?;
    Ok(g_phases(&Phases::new(m), gamma))
}

pub fn g_phases(p: &Phases, gamma: &ExponentVector) -> Complex64 {
    symmetrize(std::slice::from_ref(p), gamma, |ph| {
        ph[0].iter().map(|&t| cis(t)).sum()
    })
}

/// `Σ_k Π_i M_ik^{e_i}` with the exponents in the given placement (no
/// symmetrization).
pub fn column_sum(m: &PhaseMatrix, e: &ExponentVector) -> Result<Complex64> {
    check_dim(m.dim(), e)?;
    Ok(column_sum_phases(&Phases::new(m), e))
}

pub fn column_sum_phases(p: &Phases, e: &ExponentVector) -> Complex64 {
    let mut buf = Vec::with_capacity(p.d);
    p.column_phases(e.components(), &mut buf);
    buf.iter().map(|&t| cis(t)).sum()
}

/// `G_j(γ)`: the symmetrized double column sum (not `|g(γ)|²`).
pub fn g_norm_single(m: &PhaseMatrix, gamma: &ExponentVector) -> Result<f64> {
    check_dim(m.dim(), gamma)?;
    g_norm_phases(&Phases::new(m), gamma)
}

pub fn g_norm_phases(p: &Phases, gamma: &ExponentVector) -> Result<f64> {
    let z = symmetrize(std::slice::from_ref(p), gamma, double_sum);
    real_part(z, "G_j")
}

/// `|g(γ)|²`, exposed for comparison with [`g_norm_single`].
pub fn g_abs_sq_single(m: &PhaseMatrix, gamma: &ExponentVector) -> Result<f64> {
    Ok(g_single(m, gamma)?.norm_sqr())
}

/// `f(γ) = Σ_j g_j(γ)`.
pub fn f_set(ms: &[PhaseMatrix], gamma: &ExponentVector) -> Result<Complex64> {
    let mats = prepare(ms, gamma)?;
    Ok(mats.iter().map(|p| g_phases(p, gamma)).sum())
}

/// `G(γ) = Σ_j G_j(γ)`.
pub fn g_norm_set(ms: &[PhaseMatrix], gamma: &ExponentVector) -> Result<f64> {
    let mats = prepare(ms, gamma)?;
    mats.iter().map(|p| g_norm_phases(p, gamma)).sum()
}

/// `F(γ)`: the symmetrized double sum over all column pairs of the whole set,
/// i.e. `G(γ)` plus the cross-matrix terms.
pub fn f_norm_set(ms: &[PhaseMatrix], gamma: &ExponentVector) -> Result<f64> {
    let mats = prepare(ms, gamma)?;
    let z = symmetrize(&mats, gamma, double_sum);
    real_part(z, "F")
}

/// Both `F(γ)` and `G(γ)` from one pass over the arrangements.
pub fn functionals(ms: &[PhaseMatrix], gamma: &ExponentVector) -> Result<(f64, f64)> {
    let mats = prepare(ms, gamma)?;
    let fg = symmetrize(&mats, gamma, |ph| {
        let per: Complex64 = ph.iter().map(|p| double_sum(std::slice::from_ref(p))).sum();
        FgPair(double_sum(ph), per)
    });
    Ok((real_part(fg.0, "F")?, real_part(fg.1, "G")?))
}

#[derive(Default)]
struct FgPair(Complex64, Complex64);

impl std::ops::Add for FgPair {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FgPair(self.0 + o.0, self.1 + o.1)
    }
}

impl std::ops::Div<f64> for FgPair {
    type Output = Self;
    fn div(self, r: f64) -> Self {
        FgPair(self.0 / r, self.1 / r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::karlsson::{self, KarlssonParams};
    use crate::matrix::{fourier_matrix, spectral_matrix};
    use crate::mub::complete_mub_set;

    fn ev(v: &[i32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    /// All `d!` permutations, including repeats.
    fn all_perms(v: &[i32]) -> Vec<Vec<i32>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in all_perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    /// Column-vector powers `c^e` by repeated complex multiplication.
    fn column_powers(m: &PhaseMatrix, e: &[i32]) -> Vec<Complex64> {
        (0..m.dim())
            .map(|k| (0..m.dim()).map(|i| m.get(i, k).powi(e[i])).product())
            .collect()
    }

    fn naive_g(m: &PhaseMatrix, g: &[i32]) -> Complex64 {
        let perms = all_perms(g);
        perms
            .iter()
            .map(|e| column_powers(m, e).iter().sum::<Complex64>())
            .sum::<Complex64>()
            / perms.len() as f64
    }

    fn naive_pairs(cols: &[Complex64]) -> Complex64 {
        cols.iter()
            .flat_map(|u| cols.iter().map(move |v| u / v))
            .sum()
    }

    fn naive_gg(m: &PhaseMatrix, g: &[i32]) -> Complex64 {
        let perms = all_perms(g);
        perms
            .iter()
            .map(|e| naive_pairs(&column_powers(m, e)))
            .sum::<Complex64>()
            / perms.len() as f64
    }

    fn naive_ff(ms: &[PhaseMatrix], g: &[i32]) -> Complex64 {
        let perms = all_perms(g);
        perms
            .iter()
            .map(|e| {
                naive_pairs(
                    &ms.iter()
                        .flat_map(|m| column_powers(m, e))
                        .collect::<Vec<_>>(),
                )
            })
            .sum::<Complex64>()
            / perms.len() as f64
    }

    fn f2() -> PhaseMatrix {
        fourier_matrix(2)
    }

    #[test]
    fn zero_exponent() {
        for d in 1..7 {
            let m = fourier_matrix(d);
            let z = ExponentVector::zero(d);
            assert!((g_single(&m, &z).unwrap() - d as f64).norm() < 1e-12);
            assert!((g_norm_single(&m, &z).unwrap() - (d * d) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn f2_cancels() {
        assert!(g_single(&f2(), &ev(&[1, -1])).unwrap().norm() < 1e-15);
        // both arrangements of (1,-1) give column products {1, -1}
        let gg = g_norm_single(&f2(), &ev(&[1, -1])).unwrap();
        let want = naive_gg(&f2(), &[1, -1]).re;
        assert!(want.abs() < 1e-12);
        assert!((gg - want).abs() < 1e-12);
        assert!(f_norm_set(&[f2()], &ev(&[1, -1])).unwrap().abs() < 1e-12);
        assert!(g_norm_set(&[f2()], &ev(&[1, -1])).unwrap().abs() < 1e-12);
    }

    #[test]
    fn set_values_at_zero() {
        for d in [2usize, 3] {
            let set = complete_mub_set(d).unwrap();
            let z = ExponentVector::zero(d);
            let r = set.len() as f64;
            let d = d as f64;
            assert!((f_set(&set, &z).unwrap() - r * d).norm() < 1e-12);
            let (f, g) = functionals(&set, &z).unwrap();
            assert!((f - d.powi(4)).abs() < 1e-10);
            assert!((g - d.powi(3)).abs() < 1e-10);
        }
    }

    #[test]
    fn theorem_point_vanishes() {
        let k = karlsson::build(&KarlssonParams::new(0.3, 1.1, 0.7)).unwrap();
        for e in arrangements(&[1, 1, 1, -1, -1, -1]) {
            assert!(g_single(&k, &ev(&e)).unwrap().norm() < 1e-9);
        }
        assert!(
            g_norm_single(&k, &ev(&[1, 1, 1, -1, -1, -1]))
                .unwrap()
                .abs()
                < 1e-8
        );
    }

    #[test]
    fn spectral_differs_from_abs_sq() {
        let s = spectral_matrix();
        let rho = ev(&[1, 1, 1, -1, -1, -1]);
        // every arrangement has |column sum| = 3, the average is 3/2
        assert!((g_norm_single(&s, &rho).unwrap() - 9.0).abs() < 1e-9);
        assert!((g_abs_sq_single(&s, &rho).unwrap() - 2.25).abs() < 1e-9);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            g_single(&f2(), &ev(&[1, 0, 0])),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            f_norm_set(&[], &ev(&[1, 0])),
            Err(Error::EmptySet)
        ));
        assert!(matches!(
            g_norm_set(&[f2(), fourier_matrix(3)], &ev(&[1, 0])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn brute_force_equivalence_small_dims() {
        let mut mats = vec![f2(), fourier_matrix(3)];
        mats.extend(complete_mub_set(3).unwrap());
        let gammas: Vec<Vec<i32>> = vec![
            vec![1, 0],
            vec![2, -1],
            vec![3, 1],
            vec![1, -1, 0],
            vec![2, 1, -1],
            vec![3, -2, 1],
            vec![1, 1, 1],
        ];
        for m in &mats {
            for g in gammas.iter().filter(|g| g.len() == m.dim()) {
                let e = ev(g);
                assert!((g_single(m, &e).unwrap() - naive_g(m, g)).norm() < 1e-12);
                assert!((g_norm_single(m, &e).unwrap() - naive_gg(m, g).re).abs() < 1e-11);
            }
        }
        for d in [2usize, 3] {
            let set = complete_mub_set(d).unwrap();
            for g in gammas.iter().filter(|g| g.len() == d) {
                let (f, gg) = functionals(&set, &ev(g)).unwrap();
                assert!((f - naive_ff(&set, g).re).abs() < 1e-10);
                let want_g: f64 = set.iter().map(|m| naive_gg(m, g).re).sum();
                assert!((gg - want_g).abs() < 1e-10);
                assert!((f - f_norm_set(&set, &ev(g)).unwrap()).abs() < 1e-10);
                assert!((gg - g_norm_set(&set, &ev(g)).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn permutation_invariance_is_exact() {
        let k = karlsson::build(&KarlssonParams::new(1.2, 0.5, 2.2)).unwrap();
        let base = g_single(&k, &ev(&[3, 0, -1, 2, 0, 1])).unwrap();
        for e in [
            [0, 3, -1, 2, 0, 1],
            [1, 0, 2, -1, 0, 3],
            [-1, 0, 0, 1, 2, 3],
        ] {
            assert_eq!(g_single(&k, &ev(&e)).unwrap(), base);
        }
    }
}
