//! Linear programs over the orbit values of `F` and `G`.
//!
//! Columns come in two families, one column per orbit of `Γ_l`. Rows:
//!
//! | kind | constraint | instantiated for |
//! |------|------------|------------------|
//! | R1 | `Σ_r G(γ ± π_r) = d³` | `|γ|₁ ≤ l-1`, both signs |
//! | R2 | `d·G(γ) + Σ_{r≠t} F(γ+π_r-π_t) = d⁴` | `|γ|₁ ≤ l-2` |
//! | R3 | `Σ_{r≠t} F(γ+π_r-π_t) - Σ_{r≠t} G(γ+π_r∓π_t) = 0` | `|γ|₁ ≤ l-2` |
//! | R4 | `F(0) = d⁴`, `G(0) = d³` | always |
//! | R5 | `F(γ) ≤ d·G(γ)` | every orbit |
//! | R7 | `F(ρ) = G(ρ) = 0`, `ρ = (1,1,1,-1,-1,-1)` | Karlsson mode, `d = 6` |
//!
//! Box bounds `0 ≤ F ≤ d⁴`, `0 ≤ G ≤ d³` sit on the columns. All
//! coefficients and right-hand sides are integers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::gamma::{canonicalize, ExponentVector, GammaOrbit, GammaSpace};
use crate::matrix::PhaseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    F,
    G,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::F => "F",
            Family::G => "G",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            _ => Err(Error::Model(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RowKind {
    /// Shift sum over unit vectors, aggregated over the matrices.
    ShiftSum,
    /// `d·G + Σ F = d⁴`.
    Complement,
    /// Cross-matrix terms cancel.
    CrossTerms,
    /// Values at the origin.
    Boundary,
    /// `F ≤ d·G`.
    CauchySchwarz,
    /// Vanishing at the balanced sign vector (Karlsson mode).
    Vanishing,
    /// Rows added by hand or read from a file with an unknown tag.
    Other,
}

impl RowKind {
    pub fn tag(self) -> &'static str {
        match self {
            RowKind::ShiftSum => "R1",
            RowKind::Complement => "R2",
            RowKind::CrossTerms => "R3",
            RowKind::Boundary => "R4",
            RowKind::CauchySchwarz => "R5",
            RowKind::Vanishing => "R7",
            RowKind::Other => "RX",
        }
    }

    pub fn from_tag(tag: &str) -> Self {
        match tag {
            "R1" => RowKind::ShiftSum,
            "R2" => RowKind::Complement,
            "R3" => RowKind::CrossTerms,
            "R4" => RowKind::Boundary,
            "R5" => RowKind::CauchySchwarz,
            "R7" => RowKind::Vanishing,
            _ => RowKind::Other,
        }
    }
}

/// Which shift the `G` half of the cross-term rows uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossVariant {
    /// `G(γ + π_r - π_t)`
    #[default]
    Minus,
    /// `G(γ + π_r + π_t)`
    Plus,
}

impl fmt::Display for CrossVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossVariant::Minus => "minus",
            CrossVariant::Plus => "plus",
        })
    }
}

impl std::str::FromStr for CrossVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(CrossVariant::Minus),
            "plus" => Ok(CrossVariant::Plus),
            _ => Err(Error::Model(format!("unknown cross-term variant `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpVariable {
    pub family: Family,
    pub orbit: GammaOrbit,
    pub name: String,
    pub lower: i64,
    /// `None` means unbounded above.
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub kind: RowKind,
    pub name: String,
    /// `(column, coefficient)`, sorted by column, no zeros.
    pub coeffs: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub sense: Sense,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub d: usize,
    pub l: u32,
    pub karlsson_mode: bool,
    pub cross_variant: CrossVariant,
    pub variables: Vec<LpVariable>,
    pub rows: Vec<Row>,
    pub objective: Option<Objective>,
}

/// The balanced sign vector of the Karlsson vanishing rows.
pub fn balanced_rho() -> ExponentVector {
    ExponentVector::new(vec![1, 1, 1, -1, -1, -1])
}

impl LpProblem {
    /// A problem with no columns or rows.
    pub fn empty(d: usize, l: u32) -> Self {
        Self {
            d,
            l,
            karlsson_mode: false,
            cross_variant: CrossVariant::default(),
            variables: Vec::new(),
            rows: Vec::new(),
            objective: None,
        }
    }

    pub fn add_variable(
        &mut self,
        family: Family,
        orbit: GammaOrbit,
        lower: i64,
        upper: Option<i64>,
    ) -> usize {
        let index = self.variables.iter().filter(|v| v.family == family).count();
        let name = format!("{}_{}_{}", family.prefix(), orbit.l1_norm, index);
        self.variables.push(LpVariable {
            family,
            orbit,
            name,
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    /// Appends a row, merging repeated columns and dropping zero coefficients.
    pub fn add_row(
        &mut self,
        kind: RowKind,
        coeffs: &[(usize, i64)],
        relation: Relation,
        rhs: i64,
    ) -> Result<usize> {
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for &(c, a) in coeffs {
            if c >= self.variables.len() {
                return Err(Error::Model(format!("row references missing column {c}")));
            }
            *merged.entry(c).or_default() += a;
        }
        let index = self.rows.iter().filter(|r| r.kind == kind).count();
        self.rows.push(Row {
            kind,
            name: format!("{}_{}", kind.tag(), index),
            coeffs: merged.into_iter().filter(|&(_, a)| a != 0).collect(),
            relation,
            rhs,
        });
        Ok(self.rows.len() - 1)
    }

    pub fn column(&self, family: Family, gamma: &ExponentVector) -> Option<usize> {
        let rep = canonicalize(gamma).rep;
        self.variables
            .iter()
            .position(|v| v.family == family && v.orbit.rep == rep)
    }

    pub fn column_by_name(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Points the objective at a single column.
    pub fn set_objective(
        &self,
        sense: Sense,
        family: Family,
        rho: &ExponentVector,
    ) -> Result<LpProblem> {
        if rho.dim() != self.d {
            return Err(Error::Dimension(format!(
                "objective point has length {}, d = {}",
                rho.dim(),
                self.d
            )));
        }
        let orbit = canonicalize(rho);
        let column = self
            .column(family, rho)
            .ok_or_else(|| Error::OutsideSpace {
                rep: orbit.rep.components().to_vec(),
                l1: orbit.l1_norm,
                l: self.l,
            })?;
        let mut p = self.clone();
        p.objective = Some(Objective { sense, column });
        Ok(p)
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn stats(&self) -> LpStats {
        let nnz = self.nonzeros();
        let (m, n) = (self.rows.len(), self.variables.len());
        let mut by_kind: BTreeMap<String, usize> = BTreeMap::new();
        for r in &self.rows {
            *by_kind.entry(r.kind.tag().to_string()).or_default() += 1;
        }
        LpStats {
            variables: n,
            rows: m,
            nonzeros: nnz,
            rows_by_kind: by_kind,
            // compressed-column storage: value + row index per nonzero, one pointer per column
            sparse_mb: (nnz * 16 + (n + 1) * 8 + m * 8) as f64 / 1e6,
            dense_mb: (m as f64) * (n as f64) * 8.0 / 1e6,
        }
    }

    /// Checks that every referenced column exists and the objective is set.
    pub fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        for r in &self.rows {
            if let Some(&(c, _)) = r.coeffs.iter().find(|(c, _)| *c >= n) {
                return Err(Error::Model(format!(
                    "row {} references missing column {c}",
                    r.name
                )));
            }
        }
        match self.objective {
            None => Err(Error::Model("objective not set".into())),
            Some(o) if o.column >= n => Err(Error::Model(format!(
                "objective column {} missing",
                o.column
            ))),
            Some(_) => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LpStats {
    pub variables: usize,
    pub rows: usize,
    pub nonzeros: usize,
    pub rows_by_kind: BTreeMap<String, usize>,
    pub sparse_mb: f64,
    pub dense_mb: f64,
}

/// Assembles the program over `Γ_l` (see the module docs for the row set).
pub fn build_lp(
    d: usize,
    l: u32,
    karlsson_mode: bool,
    cross_variant: CrossVariant,
) -> Result<LpProblem> {
    if d < 2 || l < 2 {
        return Err(Error::Model(format!(
            "need d ≥ 2 and l ≥ 2, got d = {d}, l = {l}"
        )));
    }
    if karlsson_mode && d != 6 {
        return Err(Error::Model(format!("Karlsson mode needs d = 6, got {d}")));
    }
    let space = GammaSpace::new(d, l);
    let rho = balanced_rho();
    if karlsson_mode && space.lookup(&rho).is_none() {
        let o = canonicalize(&rho);
        return Err(Error::OutsideSpace {
            rep: o.rep.components().to_vec(),
            l1: o.l1_norm,
            l,
        });
    }

    let (d3, d4) = ((d as i64).pow(3), (d as i64).pow(4));
    let mut p = LpProblem::empty(d, l);
    p.karlsson_mode = karlsson_mode;
    p.cross_variant = cross_variant;
    for o in &space.orbits {
        p.add_variable(Family::G, o.clone(), 0, Some(d3));
    }
    for o in &space.orbits {
        p.add_variable(Family::F, o.clone(), 0, Some(d4));
    }
    let n = space.len();
    let g_col = |v: &ExponentVector| space.lookup(v).expect("shift stays inside Γ_l");
    let f_col = |v: &ExponentVector| n + g_col(v);

    // R1: both γ and -γ; they coincide when the orbit is self-dual.
    for o in space.orbits.iter().filter(|o| o.l1_norm < l) {
        let mut seen: Vec<Vec<(usize, i64)>> = Vec::new();
        for base in [o.rep.clone(), o.rep.neg()] {
            let coeffs: Vec<(usize, i64)> = (0..d)
                .map(|r| (g_col(&base.shifted(r, 1, r, 0)), 1))
                .collect();
            let key = merged(&coeffs);
            if !seen.contains(&key) {
                p.add_row(RowKind::ShiftSum, &coeffs, Relation::Eq, d3)?;
                seen.push(key);
            }
        }
    }

    let inner: Vec<&GammaOrbit> = space.orbits.iter().filter(|o| o.l1_norm + 2 <= l).collect();
    let off_diagonal = |base: &ExponentVector, b: i32| -> Vec<ExponentVector> {
        let mut out = Vec::with_capacity(d * (d - 1));
        for r in 0..d {
            for t in (0..d).filter(|&t| t != r) {
                out.push(base.shifted(r, 1, t, b));
            }
        }
        out
    };

    // R2
    for o in &inner {
        let mut coeffs = vec![(g_col(&o.rep), d as i64)];
        coeffs.extend(off_diagonal(&o.rep, -1).iter().map(|v| (f_col(v), 1)));
        p.add_row(RowKind::Complement, &coeffs, Relation::Eq, d4)?;
    }

    // R3; the plus variant is not negation-symmetric, so both signs are emitted.
    for o in &inner {
        let bases = match cross_variant {
            CrossVariant::Minus => vec![o.rep.clone()],
            CrossVariant::Plus => vec![o.rep.clone(), o.rep.neg()],
        };
        let mut seen: Vec<Vec<(usize, i64)>> = Vec::new();
        for base in bases {
            let mut coeffs: Vec<(usize, i64)> = off_diagonal(&base, -1)
                .iter()
                .map(|v| (f_col(v), 1))
                .collect();
            let g_shift = if cross_variant == CrossVariant::Minus {
                -1
            } else {
                1
            };
            coeffs.extend(off_diagonal(&base, g_shift).iter().map(|v| (g_col(v), -1)));
            let key = merged(&coeffs);
            if !seen.contains(&key) {
                p.add_row(RowKind::CrossTerms, &coeffs, Relation::Eq, 0)?;
                seen.push(key);
            }
        }
    }

    // R4
    let zero = ExponentVector::zero(d);
    p.add_row(RowKind::Boundary, &[(f_col(&zero), 1)], Relation::Eq, d4)?;
    p.add_row(RowKind::Boundary, &[(g_col(&zero), 1)], Relation::Eq, d3)?;

    // R5
    for i in 0..n {
        p.add_row(
            RowKind::CauchySchwarz,
            &[(n + i, 1), (i, -(d as i64))],
            Relation::Le,
            0,
        )?;
    }

    // R7
    if karlsson_mode {
        p.add_row(RowKind::Vanishing, &[(f_col(&rho), 1)], Relation::Eq, 0)?;
        p.add_row(RowKind::Vanishing, &[(g_col(&rho), 1)], Relation::Eq, 0)?;
    }
    Ok(p)
}

fn merged(coeffs: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut m: BTreeMap<usize, i64> = BTreeMap::new();
    for &(c, a) in coeffs {
        *m.entry(c).or_default() += a;
    }
    m.into_iter().filter(|&(_, a)| a != 0).collect()
}

/// Values of `F` and `G` of an explicit matrix set at every column's orbit.
pub fn evaluate_point(p: &LpProblem, set: &[PhaseMatrix]) -> Result<Vec<f64>> {
    let reps: Vec<&ExponentVector> = p.variables.iter().map(|v| &v.orbit.rep).collect();
    let values = crate::par::map_collect(&reps, |rep| fourier::functionals(set, rep));
    p.variables
        .iter()
        .zip(values)
        .map(|(v, fg)| fg.map(|(f, g)| if v.family == Family::F { f } else { g }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn small_instance_shape() {
        let p = build_lp(2, 2, false, CrossVariant::Minus).unwrap();
        assert_eq!(p.variables.len(), 10);
        let r1: Vec<&Row> = p
            .rows
            .iter()
            .filter(|r| r.kind == RowKind::ShiftSum)
            .collect();
        // (0,0) is self-dual and gives one row, (1,0) gives one per sign
        assert_eq!(r1.len(), 3);
        let g = |v: &[i32]| p.column(Family::G, &ev(v)).unwrap();
        assert_eq!(r1[0].coeffs, vec![(g(&[1, 0]), 2)]);
        let mut want = vec![(g(&[2, 0]), 1), (g(&[1, 1]), 1)];
        want.sort();
        assert_eq!(r1[1].coeffs, want);
        let mut want = vec![(g(&[0, 0]), 1), (g(&[1, -1]), 1)];
        want.sort();
        assert_eq!(r1[2].coeffs, want);
        assert_eq!(
            p.rows
                .iter()
                .filter(|r| r.kind == RowKind::Boundary)
                .count(),
            2
        );
        assert_eq!(
            p.rows
                .iter()
                .filter(|r| r.kind == RowKind::CauchySchwarz)
                .count(),
            5
        );
        assert_eq!(p.stats().variables, 10);
        assert_eq!(
            p.stats().nonzeros,
            p.rows.iter().map(|r| r.coeffs.len()).sum::<usize>()
        );
    }

    #[test]
    fn variable_bounds() {
        let p = build_lp(3, 3, false, CrossVariant::Minus).unwrap();
        for v in &p.variables {
            assert_eq!(v.lower, 0);
            assert_eq!(v.upper, Some(if v.family == Family::F { 81 } else { 27 }));
        }
    }

    #[test]
    fn objective_outside_space() {
        let p = build_lp(6, 6, false, CrossVariant::Minus).unwrap();
        let err = p
            .set_objective(Sense::Min, Family::F, &ev(&[6, -6, 0, 0, 0, 0]))
            .unwrap_err();
        assert!(matches!(err, Error::OutsideSpace { l1: 12, l: 6, .. }));
        assert!(p
            .set_objective(Sense::Min, Family::G, &ev(&[3, -3, 0, 0, 0, 0]))
            .is_ok());
    }

    #[test]
    fn karlsson_mode_checks() {
        assert!(build_lp(5, 10, true, CrossVariant::Minus).is_err());
        assert!(matches!(
            build_lp(6, 4, true, CrossVariant::Minus),
            Err(Error::OutsideSpace { .. })
        ));
        let p = build_lp(6, 6, true, CrossVariant::Minus).unwrap();
        let r7: Vec<&Row> = p
            .rows
            .iter()
            .filter(|r| r.kind == RowKind::Vanishing)
            .collect();
        assert_eq!(r7.len(), 2);
        for r in r7 {
            assert_eq!(r.coeffs.len(), 1);
            assert_eq!(p.variables[r.coeffs[0].0].orbit.orbit_size, 20);
        }
    }

    #[test]
    fn every_row_stays_inside() {
        for variant in [CrossVariant::Minus, CrossVariant::Plus] {
            let p = build_lp(3, 5, false, variant).unwrap();
            for r in &p.rows {
                for &(c, _) in &r.coeffs {
                    assert!(p.variables[c].orbit.l1_norm <= 5);
                }
            }
        }
    }

    #[test]
    fn rejects_tiny_instances() {
        assert!(build_lp(1, 4, false, CrossVariant::Minus).is_err());
        assert!(build_lp(3, 1, false, CrossVariant::Minus).is_err());
    }

    #[test]
    fn add_row_merges_and_validates() {
        let mut p = LpProblem::empty(2, 2);
        let x = p.add_variable(Family::G, canonicalize(&ev(&[0, 0])), 0, None);
        p.add_row(RowKind::Other, &[(x, 2), (x, -2)], Relation::Eq, 0)
            .unwrap();
        assert!(p.rows[0].coeffs.is_empty());
        assert!(p
            .add_row(RowKind::Other, &[(5, 1)], Relation::Eq, 0)
            .is_err());
        assert!(p.validate().is_err());
    }
}
