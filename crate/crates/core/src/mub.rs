//! Explicit complete sets of mutually unbiased Hadamard matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{root_of_unity, PhaseMatrix};

/// `d` pairwise unbiased Hadamard matrices which, with the identity, form a
/// complete set of `d + 1` MUBs. Supported for `d = 2` and odd primes.
///
/// For odd prime `p` the matrices are `H_a(j, k) = ω^{a j² + j k}`, `a = 0..p`.
pub fn complete_mub_set(d: usize) -> Result<Vec<PhaseMatrix>> {
    if d == 2 {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        return Ok(vec![
            PhaseMatrix::new(vec![vec![one, one], vec![one, -one]], "F2")?,
            PhaseMatrix::new(vec![vec![one, one], vec![i, -i]], "H2")?,
        ]);
    }
    if d < 3 || !is_prime(d) {
        return Err(Error::InvalidParams(format!(
            "no explicit complete MUB set for d = {d}"
        )));
    }
    Ok((0..d)
        .map(|a| {
            PhaseMatrix::from_fn(d, format!("H{d}_{a}"), |j, k| {
                root_of_unity((a * j * j + j * k) as i64, d as u32)
            })
        })
        .collect())
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}
