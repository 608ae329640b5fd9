//! Rational roots of integer polynomials.
//!
//! Roots are found p-adically: pick a prime `l` for which the squarefree part
//! stays squarefree and keeps its degree, find the roots modulo `l` by
//! exhaustive evaluation, Hensel-lift each simple root past the
//! reconstruction bound and recover the fraction by rational reconstruction.
//! Every candidate is confirmed by exact evaluation, so a returned root is
//! always a root; completeness only fails when no usable prime is found
//! within the search budget, which is reported through [`RootSet::complete`].

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ArithError, IntPoly, Integer, Rational};

/// Number of primes tried before giving up.
const PRIME_BUDGET: usize = 200;
/// Smallest prime tried; larger primes make accidental collisions rare.
const FIRST_PRIME: u64 = 1009;

/// Result of a rational root search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSet {
    /// Distinct rational roots in ascending order.
    pub roots: Vec<Rational>,
    /// `false` when the search budget ran out; `roots` is then a verified subset.
    pub complete: bool,
}

/// Distinct rational roots of a nonzero polynomial.
pub fn rational_roots(p: &IntPoly) -> Result<RootSet, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    // Strip the x^k factor so the trailing coefficient bounds numerators.
    let lowest = p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    if lowest > 0 {
        roots.push(Rational::zero());
    }
    let q = IntPoly::new(p.coeffs()[lowest..].to_vec()).primitive_part();
    let complete = match q.degree() {
        Some(0) => true,
        // A few primes suffice unless q has repeated factors; only then pay
        // for the squarefree part over Z.
        _ => match padic_roots(&q, 3) {
            Some(found) => {
                roots.extend(found);
                true
            }
            None => {
                let sf = q.squarefree_part()?;
                match padic_roots(&sf, PRIME_BUDGET) {
                    Some(found) => {
                        roots.extend(found);
                        true
                    }
                    None => false,
                }
            }
        },
    };
    roots.sort();
    roots.dedup();
    Ok(RootSet { roots, complete })
}

/// Rational roots paired with their multiplicities.
pub fn rational_roots_with_multiplicity(p: &IntPoly) -> Result<(Vec<(Rational, usize)>, bool), ArithError> {
    let set = rational_roots(p)?;
    let mut out = Vec::with_capacity(set.roots.len());
    for r in set.roots {
        let linear = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let mut rest = p.clone();
        let mut mult = 0;
        while let Some(quo) = rest.div_exact(&linear) {
            rest = quo;
            mult += 1;
        }
        out.push((r, mult));
    }
    Ok((out, set.complete))
}

// Roots of a primitive polynomial with nonzero constant term, or None when no
// prime keeps it squarefree (it has repeated factors, or the budget ran out).
fn padic_roots(q: &IntPoly, budget: usize) -> Option<Vec<Rational>> {
    let deg = q.degree()?;
    if deg == 1 {
        return Some(vec![Rational::new(-q.coeff(0), q.coeff(1))]);
    }
    let lead = q.leading().unwrap().abs();
    let trail = q.coeff(0).abs();
    // a/b in lowest terms with q(a/b) = 0 has a | trail and b | lead.
    let bound = Integer::from(2) * &trail * &lead;

    let mut prime = FIRST_PRIME;
    for _ in 0..budget {
        prime = next_prime(prime);
        let l = prime;
        prime += 1;
        if (&lead % l).is_zero() {
            continue;
        }
        let qm = reduce_mod(q, l);
        let dqm = derivative_mod(&qm, l);
        if degree_mod(&gcd_mod(&qm, &dqm, l)) != Some(0) {
            continue;
        }
        let mut found = Vec::new();
        for r in 0..l {
            if eval_mod(&qm, r, l) != 0 {
                continue;
            }
            let lifted = hensel_lift(q, r, l, &bound);
            if let Some(root) = rational_reconstruct(&lifted.0, &lifted.1, &trail, &lead) {
                if q.eval_homogeneous(root.numer(), root.denom(), deg).is_zero() {
                    found.push(root);
                }
            }
        }
        return Some(found);
    }
    None
}

// Newton iteration in Z/l^(2^k); returns (root, modulus) with modulus > bound.
fn hensel_lift(q: &IntPoly, r: u64, l: u64, bound: &Integer) -> (Integer, Integer) {
    let dq = q.derivative();
    let mut modulus = Integer::from(l);
    let mut root = Integer::from(r);
    while &modulus <= bound {
        modulus = &modulus * &modulus;
        let fv = q.eval_int(&root).mod_floor(&modulus);
        let dv = dq.eval_int(&root).mod_floor(&modulus);
        let inv = mod_inverse(&dv, &modulus).expect("simple root has unit derivative");
        root = (root - fv * inv).mod_floor(&modulus);
    }
    (root, modulus)
}

fn mod_inverse(a: &Integer, m: &Integer) -> Option<Integer> {
    let eg = a.extended_gcd(m);
    if eg.gcd.is_one() {
        Some(eg.x.mod_floor(m))
    } else {
        None
    }
}

// Finds a/b with a = b*u (mod m), |a| <= num_bound, 0 < b <= den_bound.
fn rational_reconstruct(u: &Integer, m: &Integer, num_bound: &Integer, den_bound: &Integer) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (Integer::zero(), Integer::one());
    while &r1 > num_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > den_bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn next_prime(mut n: u64) -> u64 {
    loop {
        if is_prime(n) {
            return n;
        }
        n += 1;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

// Small-prime polynomial helpers; coefficients ascending, trimmed.

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn reduce_mod(q: &IntPoly, l: u64) -> Vec<u64> {
    let lb = BigInt::from(l);
    trim(q.coeffs().iter().map(|c| c.mod_floor(&lb).to_u64().unwrap()).collect())
}

fn derivative_mod(q: &[u64], l: u64) -> Vec<u64> {
    trim(
        q.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % l, l))
            .collect(),
    )
}

fn degree_mod(q: &[u64]) -> Option<usize> {
    q.len().checked_sub(1)
}

fn mulmod(a: u64, b: u64, l: u64) -> u64 {
    ((a as u128 * b as u128) % l as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1;
    a %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, l);
        }
        a = mulmod(a, a, l);
        e >>= 1;
    }
    acc
}

fn eval_mod(q: &[u64], x: u64, l: u64) -> u64 {
    q.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, l) + c) % l)
}

fn rem_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = powmod(b[db], l - 2, l);
    while r.len() > db {
        let top = r.len() - 1;
        let f = mulmod(r[top], inv, l);
        if f != 0 {
            for (j, &bc) in b.iter().enumerate() {
                let idx = top - db + j;
                r[idx] = (r[idx] + l - mulmod(f, bc, l)) % l;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn gcd_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem_mod(&a, &b, l);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        let r = rational_roots(&p(&[1, -3, 2])).unwrap();
        assert!(r.complete);
        assert_eq!(r.roots, vec![q(1, 2), q(1, 1)]);
        assert!(rational_roots(&p(&[1, 0, 1])).unwrap().roots.is_empty());
        assert_eq!(
            rational_roots(&p(&[0, -4, 3, 1])).unwrap().roots,
            vec![q(-4, 1), q(0, 1), q(1, 1)]
        );
        assert_eq!(rational_roots(&p(&[])), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn repeated_factors_and_multiplicity() {
        // (2x - 3)^3 (x + 5)^2 (x^2 + 1)
        let f = p(&[-3, 2]).pow(3).mul(&p(&[5, 1]).pow(2)).mul(&p(&[1, 0, 1]));
        let r = rational_roots(&f).unwrap();
        assert!(r.complete);
        assert_eq!(r.roots, vec![q(-5, 1), q(3, 2)]);
        let (m, _) = rational_roots_with_multiplicity(&f).unwrap();
        assert_eq!(m, vec![(q(-5, 1), 2), (q(3, 2), 3)]);
    }

    #[test]
    fn huge_coefficients() {
        // Roots with 60-digit numerators and denominators.
        let a: Integer = Integer::from(10).pow(60) + 7;
        let b: Integer = Integer::from(10).pow(59) * 3 + 1;
        let lin = IntPoly::new(vec![-a.clone(), b.clone()]);
        let f = lin.mul(&p(&[-7, 0, 1])).mul(&p(&[11, 13]));
        let r = rational_roots(&f).unwrap();
        assert_eq!(r.roots, vec![q(-11, 13), Rational::new(a, b)]);
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let r = rational_roots(&p(&[5])).unwrap();
        assert!(r.roots.is_empty() && r.complete);
    }
}
