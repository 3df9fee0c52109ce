//! Square matrices of complex phases and the Hadamard / unbiasedness predicates.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default slack on `| |e| - 1 |` for every entry.
pub const TOL_ENTRY: f64 = 1e-10;
/// Default slack on `‖M M^† - d I‖_max`.
pub const TOL_UNITARY: f64 = 1e-9;

/// A `d × d` complex matrix whose entries are meant to be unit-modulus.
///
/// Construction only enforces squareness so that non-Hadamard inputs (the
/// identity, for instance) can still be handed to the predicates. Loading
/// from JSON enforces the unit-modulus invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMatrix {
    d: usize,
    entries: Vec<Complex64>,
    label: String,
}

impl PhaseMatrix {
    pub fn new(rows: Vec<Vec<Complex64>>, label: impl Into<String>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Dimension("matrix has no rows".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {d}",
                r.len()
            )));
        }
        Ok(Self {
            d,
            entries: rows.into_iter().flatten().collect(),
            label: label.into(),
        })
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(
        d: usize,
        label: impl Into<String>,
        f: impl Fn(usize, usize) -> Complex64,
    ) -> Self {
        let entries = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self {
            d,
            entries,
            label: label.into(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, format!("I{d}"), |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.entries.chunks(self.d)
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.d).map(|i| self.get(i, k)).collect()
    }

    /// Entry arguments in `(-π, π]`, row-major.
    pub fn args(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.arg()).collect()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.d, format!("{}^†", self.label), |i, j| {
            self.get(j, i).conj()
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Dimension(format!("{} vs {}", self.d, other.d)));
        }
        let d = self.d;
        Ok(Self::from_fn(
            d,
            format!("{}·{}", self.label, other.label),
            |i, j| (0..d).map(|k| self.get(i, k) * other.get(k, j)).sum(),
        ))
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        for j in 0..self.d {
            out.entries.swap(a * self.d + j, b * self.d + j);
        }
        out
    }

    /// Largest `| |e| - 1 |` over all entries, with its position.
    pub fn max_modulus_error(&self) -> (f64, usize, usize) {
        self.entries
            .iter()
            .enumerate()
            .map(|(n, e)| ((e.norm() - 1.0).abs(), n / self.d, n % self.d))
            .fold((0.0, 0, 0), |acc, x| if x.0 > acc.0 { x } else { acc })
    }

    /// `‖M M^† - d I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let s: Complex64 = (0..d).map(|k| self.get(i, k) * self.get(j, k).conj()).sum();
                let target = if i == j { d as f64 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    pub fn check_phases(&self, tol: f64) -> Result<()> {
        let (err, row, col) = self.max_modulus_error();
        if err > tol {
            return Err(Error::NotUnimodular {
                row,
                col,
                modulus: self.get(row, col).norm(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&MatrixFile::from(self))?)
    }

    /// Parses the JSON matrix format and enforces unit-modulus entries at `tol_entry`.
    pub fn from_json(s: &str, tol_entry: f64) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(s)?;
        let m = file.into_matrix()?;
        m.check_phases(tol_entry)?;
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, TOL_ENTRY)
    }
}

/// On-disk layout: `{"d": 6, "label": "...", "entries": [[[re, im], ...], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: usize,
    pub label: String,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&PhaseMatrix> for MatrixFile {
    fn from(m: &PhaseMatrix) -> Self {
        Self {
            d: m.d,
            label: m.label.clone(),
            entries: m
                .rows()
                .map(|r| r.iter().map(|e| [e.re, e.im]).collect())
                .collect(),
        }
    }
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<PhaseMatrix> {
        if self.entries.len() != self.d {
            return Err(Error::Dimension(format!(
                "declared d = {} but found {} rows",
                self.d,
                self.entries.len()
            )));
        }
        let rows = self
            .entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        PhaseMatrix::new(rows, self.label)
    }
}

/// True iff every entry is unit-modulus and `M M^† = d I`, both within `tol`.
pub fn is_hadamard(m: &PhaseMatrix, tol: f64) -> bool {
    m.max_modulus_error().0 <= tol && m.unitarity_residual() <= tol
}

/// True iff every entry of `M1^† M2` has modulus `√d` within `tol`.
///
/// Both inputs must be Hadamard at `tol`; otherwise the pair is rejected
/// with an error rather than answered.
pub fn is_unbiased_pair(m1: &PhaseMatrix, m2: &PhaseMatrix, tol: f64) -> Result<bool> {
    if m1.dim() != m2.dim() {
        return Err(Error::Dimension(format!("{} vs {}", m1.dim(), m2.dim())));
    }
    for m in [m1, m2] {
        if !is_hadamard(m, tol) {
            return Err(Error::NotHadamard(m.label().to_string()));
        }
    }
    let d = m1.dim();
    let root = (d as f64).sqrt();
    for i in 0..d {
        for j in 0..d {
            let s: Complex64 = (0..d).map(|k| m1.get(k, i).conj() * m2.get(k, j)).sum();
            if (s.norm() - root).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `exp(2πi·k/n)` with `k` reduced mod `n` first.
pub fn root_of_unity(k: i64, n: u32) -> Complex64 {
    let k = k.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// Entry `(j, k)` is `exp(2πi·jk/d)`, zero-based.
pub fn fourier_matrix(d: usize) -> PhaseMatrix {
    PhaseMatrix::from_fn(d, format!("F{d}"), |j, k| {
        root_of_unity((j * k) as i64, d as u32)
    })
}

/// Powers of `ω = exp(2πi/3)` in the isolated spectral matrix `S6`.
pub const SPECTRAL_EXPONENTS: [[u8; 6]; 6] = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 2, 2],
    [0, 1, 0, 2, 2, 1],
    [0, 1, 2, 0, 1, 2],
    [0, 2, 2, 1, 0, 1],
    [0, 2, 1, 2, 1, 0],
];

/// The isolated 6×6 spectral Hadamard matrix over cube roots of unity.
pub fn spectral_matrix() -> PhaseMatrix {
    PhaseMatrix::from_fn(6, "S6", |i, j| {
        root_of_unity(SPECTRAL_EXPONENTS[i][j] as i64, 3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn f2() -> PhaseMatrix {
        PhaseMatrix::new(
            vec![vec![c(1., 0.), c(1., 0.)], vec![c(1., 0.), c(-1., 0.)]],
            "F2",
        )
        .unwrap()
    }

    #[test]
    fn f2_is_hadamard() {
        assert!(is_hadamard(&f2(), TOL_UNITARY));
    }

    #[test]
    fn identity_is_not_hadamard() {
        for d in 2..7 {
            assert!(!is_hadamard(&PhaseMatrix::identity(d), TOL_UNITARY));
        }
        assert!(is_hadamard(&PhaseMatrix::identity(1), TOL_UNITARY));
    }

    #[test]
    fn non_square_rejected() {
        let err = PhaseMatrix::new(vec![vec![c(1., 0.), c(1., 0.)], vec![c(1., 0.)]], "bad");
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn spectral_entries() {
        let s = spectral_matrix();
        assert_eq!(s.get(0, 0), c(1., 0.));
        let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((s.get(1, 2) - omega).norm() < 1e-15);
        assert!(s.max_modulus_error().0 < 1e-15);
        for row in s.rows() {
            for e in row {
                assert!((e.powu(3) - 1.0).norm() < 1e-14);
            }
        }
        assert!(is_hadamard(&s, TOL_UNITARY));
    }

    #[test]
    fn fourier_fixtures() {
        let f = fourier_matrix(2);
        for i in 0..2 {
            for j in 0..2 {
                assert!((f.get(i, j) - f2().get(i, j)).norm() < 1e-15);
            }
        }
        assert_eq!(fourier_matrix(1).get(0, 0), c(1., 0.));
        assert!(is_hadamard(&fourier_matrix(6), TOL_UNITARY));
    }

    #[test]
    fn unbiased_pairs() {
        let h2 = PhaseMatrix::new(
            vec![vec![c(1., 0.), c(1., 0.)], vec![c(0., 1.), c(0., -1.)]],
            "H2",
        )
        .unwrap();
        assert!(!is_unbiased_pair(&f2(), &f2(), 1e-9).unwrap());
        assert!(is_unbiased_pair(&f2(), &h2, 1e-9).unwrap());
        assert!(is_unbiased_pair(&h2, &f2(), 1e-9).unwrap());
        assert!(matches!(
            is_unbiased_pair(&fourier_matrix(6), &PhaseMatrix::identity(6), 1e-9),
            Err(Error::NotHadamard(_))
        ));
        assert!(matches!(
            is_unbiased_pair(&fourier_matrix(6), &f2(), 1e-9),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = spectral_matrix();
        let back = PhaseMatrix::from_json(&s.to_json().unwrap(), TOL_ENTRY).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"d":2,"label":"x","entries":[[[1,0],[0,0]],[[1,0],[-1,0]]]}"#;
        assert!(matches!(
            PhaseMatrix::from_json(bad, TOL_ENTRY),
            Err(Error::NotUnimodular { row: 0, col: 1, .. })
        ));
        let short = r#"{"d":3,"label":"x","entries":[[[1,0]]]}"#;
        assert!(matches!(
            PhaseMatrix::from_json(short, TOL_ENTRY),
            Err(Error::Dimension(_))
        ));
    }
}
