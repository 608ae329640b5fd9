//! Fixed-point multiplier invariants, the moduli height built from them, and
//! a conjugacy fingerprint.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{
    parse_rational, rational_height, rational_to_string, resultant_with_degrees, solve_exact, IntPoly, Integer,
    Rational,
};
use crate::dynamics::{DynSystem, Mobius, ProjPoint};

/// `sigma[k - 1]` is the k-th elementary symmetric function of the `d + 1`
/// fixed-point multipliers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaInvariants {
    pub sigma: Vec<Rational>,
}

impl SigmaInvariants {
    pub fn to_strings(&self) -> Vec<String> {
        self.sigma.iter().map(rational_to_string).collect()
    }
}

impl fmt::Display for SigmaInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for SigmaInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SigmaInvariants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let sigma = v
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<_, _>>()?;
        Ok(SigmaInvariants { sigma })
    }
}

/// Primitive part of `F0(z, 1) - z F1(z, 1)`; its degree falls short of
/// `d + 1` by the multiplicity of infinity as a fixed point.
pub fn fixed_point_polynomial(f: &DynSystem) -> IntPoly {
    f.numerator().sub(&f.denominator().shift(1)).primitive_part()
}

/// Elementary symmetric functions of the fixed-point multipliers, with
/// multiplicity.
pub fn sigma_invariants(f: &DynSystem) -> SigmaInvariants {
    let d = f.degree();
    // Move infinity onto a non-fixed point t via z -> t + 1/z.
    let mut t = 0i64;
    loop {
        let p = ProjPoint::from_int(t);
        if f.evaluate(&p) != p {
            break;
        }
        t += 1;
    }
    let g = f.conjugate(&Mobius::new(t, 1, 1, 0).expect("det -1"));
    let g0 = g.numerator();
    let g1 = g.denominator();
    let phi = fixed_point_polynomial(&g);
    debug_assert_eq!(phi.degree(), Some(d + 1));

    // N(z, w) = w G1^2 - (G0' G1 - G0 G1'); P(w) = Res_z(phi, N(., w)) has the
    // multipliers as roots.
    let g1_sq = g1.mul(&g1);
    let wronskian = g0.derivative().mul(&g1).sub(&g0.mul(&g1.derivative()));
    let points: Vec<Integer> = (0..=(d + 1) as i64).map(Integer::from).collect();
    let values: Vec<Integer> = points
        .iter()
        .map(|w| {
            let n = g1_sq.scale(w).sub(&wronskian);
            resultant_with_degrees(&phi, d + 1, &n, 2 * d).expect("phi is nonzero")
        })
        .collect();
    let vandermonde: Vec<Vec<Integer>> = points
        .iter()
        .map(|w| (0..=d + 1).map(|j| w.pow(j as u32)).collect())
        .collect();
    let coeffs = solve_exact(&vandermonde, &values).expect("distinct nodes");
    let lead = coeffs[d + 1].clone();
    debug_assert!(!lead.is_zero());
    let sigma = (1..=d + 1)
        .map(|k| {
            let c = &coeffs[d + 1 - k] / &lead;
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    SigmaInvariants { sigma }
}

/// `max_k h(sigma_k)`.
pub fn moduli_height(f: &DynSystem) -> f64 {
    moduli_height_of(&sigma_invariants(f))
}

pub fn moduli_height_of(s: &SigmaInvariants) -> f64 {
    s.sigma.iter().map(rational_height).fold(0.0, f64::max)
}

/// SHA-256 of the canonical JSON encoding of the sigma invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub [u8; 32]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl Serialize for Fingerprint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Fingerprint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bytes = hex::decode(&s).map_err(serde::de::Error::custom)?;
        let arr: [u8; 32] = bytes
            .try_into()
            .map_err(|_| serde::de::Error::custom("fingerprint must be 32 bytes"))?;
        Ok(Fingerprint(arr))
    }
}

pub fn fingerprint_of(s: &SigmaInvariants) -> Fingerprint {
    let json = serde_json::to_string(&s.to_strings()).expect("strings serialize");
    Fingerprint(Sha256::digest(json.as_bytes()).into())
}

/// Dedup key for conjugacy classes (equal for conjugate maps; distinct keys
/// only suggest non-conjugacy).
pub fn conjugacy_fingerprint(f: &DynSystem) -> Fingerprint {
    fingerprint_of(&sigma_invariants(f))
}

/// Elementary symmetric functions of explicit values; `e_1 .. e_n`.
pub fn elementary_symmetric(values: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::one()];
    for v in values {
        let mut next = e.clone();
        next.push(Rational::zero());
        for k in 1..next.len() {
            next[k] = &e.get(k).cloned().unwrap_or_default() + v * &e[k - 1];
        }
        e = next;
    }
    e.remove(0);
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Flavor;
    use crate::interpolation::Orbit;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn squaring() -> DynSystem {
        DynSystem::from_i64s(&[0, 0, 1], &[1, 0, 0]).unwrap()
    }

    fn degree_four() -> DynSystem {
        DynSystem::from_i64s(&[90, -257, 164, -28, 1], &[30, 0, 0, 0, 0]).unwrap()
    }

    #[test]
    fn fixed_point_polynomials() {
        assert_eq!(fixed_point_polynomial(&squaring()), IntPoly::from_i64s(&[0, -1, 1]));
        let f = Orbit::from_i64s(&[0, 1, -1, 2], 2, Flavor::Polynomial)
            .unwrap()
            .to_map()
            .unwrap();
        assert_eq!(fixed_point_polynomial(&f), IntPoly::from_i64s(&[-2, 5, 1]));
        let g = DynSystem::from_i64s(&[0, 1, 1], &[1, 0, 0]).unwrap();
        assert_eq!(fixed_point_polynomial(&g), IntPoly::from_i64s(&[0, 0, 1]));
    }

    #[test]
    fn squaring_sigma() {
        assert_eq!(sigma_invariants(&squaring()).sigma, vec![q(2, 1), q(0, 1), q(0, 1)]);
        assert!((moduli_height(&squaring()) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn degree_four_sigma() {
        let s = sigma_invariants(&degree_four());
        assert_eq!(
            s.sigma,
            vec![q(200, 1), q(-78823, 90), q(-105643, 45), q(2505080863, 270000), q(0, 1)]
        );
        assert!((moduli_height_of(&s) - 21.6416).abs() < 1e-4);
    }

    #[test]
    fn matches_explicit_multipliers() {
        // (z^2 + 3z) / (2z + 2) fixes 0, 1 and infinity.
        let f = DynSystem::from_i64s(&[0, 3, 1], &[2, 2, 0]).unwrap();
        let mut fixed = vec![q(0, 1), q(1, 1)];
        let mut mults: Vec<Rational> = fixed.drain(..).map(|z| f.derivative_value(&z).unwrap()).collect();
        // Multiplier at infinity: conjugate by 1/z and differentiate at 0.
        let inv = f.conjugate(&Mobius::new(0, 1, 1, 0).unwrap());
        mults.push(inv.derivative_value(&q(0, 1)).unwrap());
        assert_eq!(sigma_invariants(&f).sigma, elementary_symmetric(&mults));
    }

    #[test]
    fn independent_of_auxiliary_point() {
        let f = degree_four();
        let s = sigma_invariants(&f);
        for k in [1, -2, 5] {
            assert_eq!(sigma_invariants(&f.conjugate(&Mobius::translation(k))), s);
        }
        let g = Orbit::from_i64s(&[0, -1, -16, 4, 8, 2], 2, Flavor::Rational)
            .unwrap()
            .to_map()
            .unwrap();
        let sg = sigma_invariants(&g);
        assert_eq!(sigma_invariants(&g.conjugate(&Mobius::new(2, 1, 1, 1).unwrap())), sg);
    }

    #[test]
    fn polynomial_top_sigma_vanishes() {
        let f = Orbit::from_i64s(&[0, 3, -2, 7, 1], 3, Flavor::Polynomial)
            .unwrap()
            .to_map()
            .unwrap();
        assert!(sigma_invariants(&f).sigma.last().unwrap().is_zero());
    }

    #[test]
    fn fingerprints() {
        let f = degree_four();
        assert_eq!(
            conjugacy_fingerprint(&f),
            conjugacy_fingerprint(&f.conjugate(&Mobius::translation(3)))
        );
        assert_ne!(conjugacy_fingerprint(&f), conjugacy_fingerprint(&squaring()));
        let fp = conjugacy_fingerprint(&f);
        let json = serde_json::to_string(&fp).unwrap();
        assert_eq!(serde_json::from_str::<Fingerprint>(&json).unwrap(), fp);
        let s = sigma_invariants(&f);
        let back: SigmaInvariants = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(fingerprint_of(&back), fp);
    }

    #[test]
    fn elementary_symmetric_small() {
        let e = elementary_symmetric(&[q(1, 1), q(2, 1), q(3, 1)]);
        assert_eq!(e, vec![q(6, 1), q(11, 1), q(6, 1)]);
    }
}
