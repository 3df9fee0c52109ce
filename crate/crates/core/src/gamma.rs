//! Exponent vectors and the L1 ball `Γ_l`, reduced by coordinate permutation
//! and global negation.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An integer exponent vector `γ ∈ Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i32>);

impl ExponentVector {
    pub fn new(components: Vec<i32>) -> Self {
        Self(components)
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// The unit vector `π_r` (zero-based `r`).
    pub fn unit(d: usize, r: usize) -> Self {
        let mut v = vec![0; d];
        v[r] = 1;
        Self(v)
    }

    /// `(d, -d, 0, ..., 0)`, the structural objective point.
    pub fn structural(d: usize) -> Self {
        let mut v = vec![0; d];
        v[0] = d as i32;
        if d > 1 {
            v[1] = -(d as i32);
        }
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i32] {
        &self.0
    }

    pub fn l1(&self) -> u32 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    /// `γ + a·π_r + b·π_t`.
    pub fn shifted(&self, r: usize, a: i32, t: usize, b: i32) -> Self {
        let mut v = self.0.clone();
        v[r] += a;
        v[t] += b;
        Self(v)
    }

    fn sorted_desc(&self) -> Vec<i32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(v: Vec<i32>) -> Self {
        Self(v)
    }
}

impl std::str::FromStr for ExponentVector {
    type Err = std::num::ParseIntError;

    /// Comma-separated integers, e.g. `"1,1,1,-1,-1,-1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// The orbit of `γ` under coordinate permutations and `γ ↦ -γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaOrbit {
    pub rep: ExponentVector,
    pub orbit_size: u64,
    pub l1_norm: u32,
}

/// Canonical representative: the lexicographically greater of
/// `sort_desc(γ)` and `sort_desc(-γ)`.
pub fn canonical_rep(gamma: &ExponentVector) -> ExponentVector {
    let a = gamma.sorted_desc();
    let b = gamma.neg().sorted_desc();
    ExponentVector(if a >= b { a } else { b })
}

pub fn canonicalize(gamma: &ExponentVector) -> GammaOrbit {
    let rep = canonical_rep(gamma);
    let self_dual = rep.neg().sorted_desc() == rep.0;
    let orbit_size = distinct_permutations(&rep.0) * if self_dual { 1 } else { 2 };
    let l1_norm = rep.l1();
    GammaOrbit {
        rep,
        orbit_size,
        l1_norm,
    }
}

/// `d! / Π m_v!` for the multiplicities `m_v` of the values in `v`.
pub fn distinct_permutations(v: &[i32]) -> u64 {
    let mut counts: HashMap<i32, u64> = HashMap::new();
    for &x in v {
        *counts.entry(x).or_default() += 1;
    }
    // multinomial built incrementally to stay exact
    let mut acc = 1u64;
    let mut n = 0u64;
    for m in counts.values() {
        for k in 1..=*m {
            n += 1;
            acc = acc * n / k;
        }
    }
    acc
}

/// All distinct arrangements of the multiset `v`, in lexicographic order.
pub fn arrangements(v: &[i32]) -> Vec<Vec<i32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [i32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every member of the orbit of `rep`.
pub fn expand_orbit(rep: &ExponentVector) -> Vec<ExponentVector> {
    let mut out: Vec<ExponentVector> = arrangements(&rep.0)
        .into_iter()
        .map(ExponentVector)
        .collect();
    let neg = rep.neg();
    if neg.sorted_desc() != rep.0 {
        out.extend(arrangements(&neg.0).into_iter().map(ExponentVector));
    }
    out
}

/// Number of lattice points with `|γ|_1 ≤ l` in `Z^d`: `Σ_k C(d,k) C(l,k) 2^k`.
pub fn raw_point_count(d: usize, l: u32) -> u128 {
    let binom = |n: u128, k: u128| -> u128 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    };
    (0..=d.min(l as usize) as u128)
        .map(|k| binom(d as u128, k) * binom(l as u128, k) * (1u128 << k))
        .sum()
}

/// Canonical orbits with `l1 ≤ l`, sorted by L1 norm, then by representative
/// in descending lexicographic order.
pub fn enumerate_gamma(d: usize, l: u32) -> Vec<GammaOrbit> {
    let mut reps = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    descend(d, l as i32, l as i32, &mut prefix, &mut reps);
    let mut orbits: Vec<GammaOrbit> = reps
        .into_iter()
        .filter_map(|v| {
            let e = ExponentVector(v);
            (canonical_rep(&e) == e).then(|| canonicalize(&e))
        })
        .collect();
    orbits.sort_by(|a, b| a.l1_norm.cmp(&b.l1_norm).then_with(|| b.rep.cmp(&a.rep)));
    orbits
}

fn descend(d: usize, max: i32, budget: i32, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if prefix.len() == d {
        out.push(prefix.clone());
        return;
    }
    let mut x = max.min(budget);
    while x >= -budget {
        prefix.push(x);
        descend(d, x, budget - x.abs(), prefix, out);
        prefix.pop();
        x -= 1;
    }
}

/// `Γ_l` as an indexed list of orbits.
#[derive(Clone, Debug)]
pub struct GammaSpace {
    pub d: usize,
    pub l: u32,
    pub orbits: Vec<GammaOrbit>,
    index: HashMap<ExponentVector, usize>,
}

impl GammaSpace {
    pub fn new(d: usize, l: u32) -> Self {
        let orbits = enumerate_gamma(d, l);
        let index = orbits
            .iter()
            .enumerate()
            .map(|(i, o)| (o.rep.clone(), i))
            .collect();
        Self {
            d,
            l,
            orbits,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Orbit index of an arbitrary vector, or `None` if it lies outside `Γ_l`.
    pub fn lookup(&self, gamma: &ExponentVector) -> Option<usize> {
        self.index.get(&canonical_rep(gamma)).copied()
    }

    pub fn stats(&self) -> GammaStats {
        let raw = raw_point_count(self.d, self.l);
        // one i32 per coordinate plus the orbit bookkeeping (size, norm, hash slot)
        let orbit_bytes = self.orbits.len() * (self.d * 4 * 2 + 48);
        GammaStats {
            d: self.d,
            l: self.l,
            orbits: self.orbits.len(),
            raw_points: raw,
            orbit_table_mb: orbit_bytes as f64 / 1e6,
            raw_table_mb: raw as f64 * (self.d * 4) as f64 / 1e6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaStats {
    pub d: usize,
    pub l: u32,
    pub orbits: usize,
    pub raw_points: u128,
    pub orbit_table_mb: f64,
    pub raw_table_mb: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ev(v: &[i32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    /// Every point of the L1 ball, by exhaustive search over the cube.
    fn brute_ball(d: usize, l: i32) -> Vec<Vec<i32>> {
        let mut out = vec![vec![]];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|p| (-l..=l).map(move |x| [p.clone(), vec![x]].concat()))
                .collect();
        }
        out.into_iter()
            .filter(|p| p.iter().map(|x| x.abs()).sum::<i32>() <= l)
            .collect()
    }

    #[test]
    fn canonical_examples() {
        let o = canonicalize(&ev(&[0, -2]));
        assert_eq!((o.rep, o.orbit_size), (ev(&[2, 0]), 4));
        let o = canonicalize(&ev(&[-1, 1, 0]));
        assert_eq!((o.rep, o.orbit_size), (ev(&[1, 0, -1]), 6));
        let o = canonicalize(&ev(&[1, 1]));
        assert_eq!((o.rep, o.orbit_size), (ev(&[1, 1]), 2));
    }

    #[test]
    fn small_ball() {
        let orbits = enumerate_gamma(2, 2);
        let got: Vec<_> = orbits
            .iter()
            .map(|o| (o.rep.components().to_vec(), o.orbit_size))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 0], 1),
                (vec![1, 0], 4),
                (vec![2, 0], 4),
                (vec![1, 1], 2),
                (vec![1, -1], 2)
            ]
        );
        assert_eq!(orbits.iter().map(|o| o.orbit_size).sum::<u64>(), 13);
        assert_eq!(brute_ball(2, 2).len(), 13);
        assert_eq!(raw_point_count(2, 2), 13);
    }

    #[test]
    fn rho_orbit_in_dimension_six() {
        let space = GammaSpace::new(6, 6);
        let idx = space.lookup(&ev(&[1, -1, 1, -1, 1, -1])).unwrap();
        assert_eq!(space.orbits[idx].rep, ev(&[1, 1, 1, -1, -1, -1]));
        assert_eq!(space.orbits[idx].orbit_size, 20);
    }

    #[test]
    fn table_na_cell() {
        let space = GammaSpace::new(6, 22);
        assert!(space.lookup(&ev(&[12, -12, 0, 0, 0, 0])).is_none());
        assert!(space.lookup(&ev(&[6, -6, 0, 0, 0, 0])).is_some());
    }

    #[test]
    fn orbit_soundness_against_brute_force() {
        for (d, l) in [(1, 5), (2, 5), (3, 4), (4, 3)] {
            let orbits = enumerate_gamma(d, l as u32);
            let points = brute_ball(d, l);
            let total: u64 = orbits.iter().map(|o| o.orbit_size).sum();
            assert_eq!(total as usize, points.len());
            assert_eq!(raw_point_count(d, l as u32), points.len() as u128);
            let reps: HashSet<_> = points.iter().map(|p| canonical_rep(&ev(p))).collect();
            assert_eq!(reps.len(), orbits.len());
            for o in &orbits {
                let members = expand_orbit(&o.rep);
                assert_eq!(members.len() as u64, o.orbit_size);
                for m in members {
                    assert_eq!(canonical_rep(&m), o.rep);
                }
            }
        }
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(&[1, 1, 1, -1, -1, -1]).len(), 20);
        assert_eq!(arrangements(&[1, 2, 3]).len(), 6);
        assert_eq!(distinct_permutations(&[0, 0, 0, 0, 0, 0]), 1);
        assert_eq!(distinct_permutations(&[1, 2, 3, 4, 5, 6]), 720);
    }

    #[test]
    fn parse_and_display() {
        let v: ExponentVector = "1, 1,1,-1,-1,-1".parse().unwrap();
        assert_eq!(v.to_string(), "(1,1,1,-1,-1,-1)");
        assert!("1,x".parse::<ExponentVector>().is_err());
    }

    #[test]
    fn orbit_counts_in_dimension_six() {
        assert_eq!(enumerate_gamma(6, 6).len(), 73);
        assert_eq!(enumerate_gamma(6, 12).len(), 1118);
    }
}
