use num_traits::{One, Zero};

use super::{ArithError, IntPoly, Integer};

/// Resultant of two nonzero integer polynomials, taken with their actual
/// degrees, by the subresultant remainder sequence.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<Integer, ArithError> {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Err(ArithError::ZeroPolynomial);
    };
    if dp == 0 && dq == 0 {
        return Ok(Integer::one());
    }
    if dq == 0 {
        return Ok(q.coeff(0).pow(dp as u32));
    }
    if dp == 0 {
        return Ok(p.coeff(0).pow(dq as u32));
    }

    let (mut a, mut b, mut sign) = if dp < dq {
        (q.clone(), p.clone(), if (dp * dq) % 2 == 1 { -1 } else { 1 })
    } else {
        (p.clone(), q.clone(), 1)
    };

    let ca = a.content();
    let cb = b.content();
    let t = ca.pow(b.degree().unwrap() as u32) * cb.pow(a.degree().unwrap() as u32);
    a = a.div_exact_scalar(&ca);
    b = b.div_exact_scalar(&cb);

    let mut g = Integer::one();
    let mut h = Integer::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b)?;
        a = b;
        let divisor = &g * h.pow(delta as u32);
        b = r.div_exact_scalar(&divisor);
        g = a.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32) / h.pow(delta as u32 - 1)
        };
        match b.degree() {
            None => return Ok(Integer::zero()),
            Some(0) => {
                let da = a.degree().unwrap() as u32;
                let hb = b.coeff(0).pow(da) / h.pow(da - 1);
                return Ok(Integer::from(sign) * t * hb);
            }
            Some(_) => {}
        }
    }
}

/// Resultant of `p` and `q` regarded as polynomials of formal degrees `m`
/// and `n` (the Sylvester determinant of those sizes). Degree drops below the
/// formal degree are accounted for with the usual leading-coefficient factor.
pub fn resultant_with_degrees(p: &IntPoly, m: usize, q: &IntPoly, n: usize) -> Result<Integer, ArithError> {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Ok(Integer::zero());
    };
    assert!(dp <= m && dq <= n, "actual degree exceeds formal degree");
    if dp == m {
        // Res_{m,n}(p, q) = lc(p)^(n - dq) Res(p, q)
        let lead = p.leading().unwrap().pow((n - dq) as u32);
        return Ok(lead * resultant(p, q)?);
    }
    if dq == n {
        let swapped = resultant_with_degrees(q, n, p, m)?;
        return Ok(if (m * n) % 2 == 1 { -swapped } else { swapped });
    }
    // Both leading formal coefficients vanish: common root at infinity.
    Ok(Integer::zero())
}

/// Resultant of the binary forms of degree `d` whose coefficients (ascending in
/// the power of `x`) are `f0` and `f1`. Zero iff the forms share a projective root.
pub fn homogeneous_resultant(f0: &IntPoly, f1: &IntPoly, d: usize) -> Integer {
    resultant_with_degrees(f0, d, f1, d).unwrap_or_else(|_| Integer::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn small_examples() {
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-2, 1])).unwrap(), Integer::from(3));
        assert_eq!(resultant(&p(&[0, 1]), &p(&[0, 1])).unwrap(), Integer::from(0));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-1, 0, 1])).unwrap(), Integer::from(4));
        assert_eq!(resultant(&p(&[]), &p(&[1])), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn constants() {
        assert_eq!(resultant(&p(&[1, 2, 3]), &p(&[5])).unwrap(), Integer::from(25));
        assert_eq!(resultant(&p(&[7]), &p(&[5])).unwrap(), Integer::from(1));
    }

    #[test]
    fn formal_degrees() {
        // x^2 - 1 against 0*x^2 + x - 2: lc(p)^1 * Res = 3.
        assert_eq!(
            resultant_with_degrees(&p(&[-1, 0, 1]), 2, &p(&[-2, 1]), 2).unwrap(),
            Integer::from(3)
        );
        // Both forms vanish at infinity.
        assert_eq!(
            resultant_with_degrees(&p(&[1, 1]), 2, &p(&[-2, 1]), 2).unwrap(),
            Integer::from(0)
        );
        // (x^2 : y^2) is a morphism.
        assert!(!homogeneous_resultant(&p(&[0, 0, 1]), &p(&[1]), 2).is_zero());
    }
}
