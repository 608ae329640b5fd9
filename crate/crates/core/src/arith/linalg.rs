//! Exact linear algebra over the integers by fraction-free (Bareiss) elimination.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch")]
    Dimension,
}

/// Kernel of an integer matrix: its rank and a basis of primitive integer vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelResult {
    pub rank: usize,
    pub basis: Vec<Vec<Integer>>,
}

// Row echelon form in place; returns the pivot columns. Every step divides by
// the previous pivot, which Sylvester's identity guarantees is exact.
fn bareiss_echelon(m: &mut [Vec<Integer>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prev = Integer::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        for i in r + 1..rows {
            let factor = m[i][c].clone();
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &factor * &m[r][j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                m[i][j] = q;
            }
            m[i][c] = Integer::zero();
        }
        // Rows above r keep their entries; they are not needed past this point
        // for back substitution.
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

// Back substitution on an echelon matrix with the given pivots; `rhs` is the
// value of the (already moved) constant column per row.
fn back_substitute(
    m: &[Vec<Integer>],
    pivots: &[usize],
    rhs: &[Integer],
    cols: usize,
    fixed: &[(usize, Rational)],
) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); cols];
    for (c, v) in fixed {
        x[*c] = v.clone();
    }
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::from_integer(rhs[r].clone());
        for j in c + 1..cols {
            if !m[r][j].is_zero() && !x[j].is_zero() {
                acc -= Rational::from_integer(m[r][j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rational::from_integer(m[r][c].clone());
    }
    x
}

/// Solves the square system `a x = b` exactly.
pub fn solve_exact(a: &[Vec<Integer>], b: &[Integer]) -> Result<Vec<Rational>, LinalgError> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(LinalgError::Dimension);
    }
    let mut aug: Vec<Vec<Integer>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = bareiss_echelon(&mut aug, n + 1);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return Err(LinalgError::Singular);
    }
    let rhs: Vec<Integer> = aug.iter().map(|row| row[n].clone()).collect();
    Ok(back_substitute(&aug, &pivots, &rhs, n, &[]))
}

/// Rank and an integer basis of the right kernel of `a` (rows x cols).
pub fn integer_kernel(a: &[Vec<Integer>], cols: usize) -> Result<KernelResult, LinalgError> {
    if a.iter().any(|row| row.len() != cols) {
        return Err(LinalgError::Dimension);
    }
    let mut m = a.to_vec();
    let pivots = bareiss_echelon(&mut m, cols);
    let rank = pivots.len();
    let zeros = vec![Integer::zero(); rank];
    let basis = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let fixed: Vec<(usize, Rational)> = (0..cols)
                .filter(|c| !pivots.contains(c))
                .map(|c| {
                    let v = if c == free { Rational::one() } else { Rational::zero() };
                    (c, v)
                })
                .collect();
            primitive_integer_vector(&back_substitute(&m, &pivots, &zeros, cols, &fixed))
        })
        .collect();
    Ok(KernelResult { rank, basis })
}

/// Scales a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub(crate) fn primitive_integer_vector(v: &[Rational]) -> Vec<Integer> {
    let lcm = v.iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Integer> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(Integer::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -g
    } else {
        g
    };
    ints.into_iter().map(|x| x / &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Integer>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
            .collect()
    }

    #[test]
    fn solves_vandermonde() {
        // f(0)=-2, f(-2)=1, f(1)=-3 for f = c0 + c1 z + c2 z^2
        let a = mat(&[&[1, 0, 0], &[1, -2, 4], &[1, 1, 1]]);
        let b: Vec<Integer> = [-2, 1, -3].iter().map(|&x| x.into()).collect();
        let x = solve_exact(&a, &b).unwrap();
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(x, vec![q(-2, 1), q(-7, 6), q(1, 6)]);
    }

    #[test]
    fn singular_system() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        let b = vec![Integer::from(1), Integer::from(2)];
        assert_eq!(solve_exact(&a, &b), Err(LinalgError::Singular));
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = integer_kernel(&a, 3).unwrap();
        assert_eq!(k.rank, 1);
        assert_eq!(k.basis.len(), 2);
        for v in &k.basis {
            let dot: Integer = a[0].iter().zip(v).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        let k = integer_kernel(&mat(&[&[2, -4, 6]]), 3).unwrap();
        assert_eq!(k.basis[0], vec![Integer::from(2), Integer::from(1), Integer::from(0)]);
    }
}
