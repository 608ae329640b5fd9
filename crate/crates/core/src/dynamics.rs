//! Points of the projective line over Q, endomorphisms of it, and conjugation
//! by integer Möbius transformations.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{homogeneous_resultant, ln_abs, rational_to_string, IntPoly, Integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("(0 : 0) is not a point")]
    ZeroPoint,
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("expected {expected} coefficients per form, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("forms share a root (homogeneous resultant is 0)")]
    ZeroResultant,
    #[error("{0} is a pole of the map")]
    PoleAt(String),
    #[error("Möbius matrix has zero determinant")]
    SingularMobius,
    #[error("malformed coefficient {0:?}")]
    BadCoefficient(String),
}

/// A point `(x : y)` of the projective line over Q in canonical form:
/// `gcd(x, y) = 1` and `y > 0`, or the point at infinity `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    x: Integer,
    y: Integer,
}

impl ProjPoint {
    pub fn new(x: Integer, y: Integer) -> Result<Self, DynamicsError> {
        if x.is_zero() && y.is_zero() {
            return Err(DynamicsError::ZeroPoint);
        }
        Ok(Self::normalized(x, y))
    }

    // Caller guarantees (x, y) != (0, 0).
    pub(crate) fn normalized(x: Integer, y: Integer) -> Self {
        if y.is_zero() {
            return Self::infinity();
        }
        let mut g = x.gcd(&y);
        if y.is_negative() {
            g = -g;
        }
        ProjPoint { x: x / &g, y: y / g }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            x: Integer::one(),
            y: Integer::zero(),
        }
    }

    pub fn from_int(n: impl Into<Integer>) -> Self {
        ProjPoint {
            x: n.into(),
            y: Integer::one(),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        ProjPoint {
            x: r.numer().clone(),
            y: r.denom().clone(),
        }
    }

    pub fn x(&self) -> &Integer {
        &self.x
    }

    pub fn y(&self) -> &Integer {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// The affine coordinate `x / y`, or `None` at infinity.
    pub fn affine(&self) -> Option<Rational> {
        (!self.is_infinity()).then(|| Rational::new(self.x.clone(), self.y.clone()))
    }

    /// Larger absolute coordinate of the canonical pair.
    pub fn max_abs(&self) -> Integer {
        let ax = self.x.abs();
        if ax > self.y {
            ax
        } else {
            self.y.clone()
        }
    }

    /// Parses `"inf"`, `"∞"`, `"a"` or `"a/b"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" || s.eq_ignore_ascii_case("infinity") {
            return Some(Self::infinity());
        }
        crate::arith::parse_rational(s).map(|r| Self::from_rational(&r))
    }
}

impl Ord for ProjPoint {
    // Numeric order on the affine line with infinity last.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.x * &other.y).cmp(&(&other.x * &self.y)),
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            None => write!(f, "inf"),
            Some(r) => write!(f, "{}", rational_to_string(&r)),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.x, self.y)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ProjPoint::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad point {s:?}")))
    }
}

/// Whether a map is a polynomial (denominator `c * y^d`) or a general rational map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Polynomial,
    Rational,
}

impl Flavor {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "polynomial" | "poly" => Some(Flavor::Polynomial),
            "rational" => Some(Flavor::Rational),
            _ => None,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Polynomial => "polynomial",
            Flavor::Rational => "rational",
        })
    }
}

/// A degree-`d` endomorphism `(F0 : F1)` of the projective line.
///
/// Each form is stored by its `d + 1` coefficients in ascending powers of `x`
/// (coefficient `i` multiplies `x^i y^(d-i)`), which is also the ascending
/// coefficient list of the dehomogenized polynomial `F(z, 1)`. The pair is kept
/// canonical: coefficients coprime and the leading nonzero coefficient of `F1`
/// positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DynSystem {
    degree: usize,
    f0: Vec<Integer>,
    f1: Vec<Integer>,
}

impl DynSystem {
    /// Builds a map from the two coefficient lists; rejects pairs that are not
    /// a morphism of exact degree `d`.
    pub fn new(f0: Vec<Integer>, f1: Vec<Integer>) -> Result<Self, DynamicsError> {
        let d = f0.len().saturating_sub(1);
        if f1.len() != f0.len() {
            return Err(DynamicsError::CoefficientCount {
                expected: f0.len(),
                got: f1.len(),
            });
        }
        if d < 2 {
            return Err(DynamicsError::DegreeTooSmall(d));
        }
        let p0 = IntPoly::new(f0.clone());
        let p1 = IntPoly::new(f1.clone());
        if homogeneous_resultant(&p0, &p1, d).is_zero() {
            return Err(DynamicsError::ZeroResultant);
        }
        Ok(Self::canonical(d, f0, f1))
    }

    pub fn from_i64s(f0: &[i64], f1: &[i64]) -> Result<Self, DynamicsError> {
        Self::new(
            f0.iter().map(|&c| Integer::from(c)).collect(),
            f1.iter().map(|&c| Integer::from(c)).collect(),
        )
    }

    // Assumes a nonzero resultant.
    fn canonical(degree: usize, f0: Vec<Integer>, f1: Vec<Integer>) -> Self {
        let mut g = f0.iter().chain(f1.iter()).fold(Integer::zero(), |acc, c| acc.gcd(c));
        if f1.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        DynSystem {
            degree,
            f0: f0.into_iter().map(|c| c / &g).collect(),
            f1: f1.into_iter().map(|c| c / &g).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator_coeffs(&self) -> &[Integer] {
        &self.f0
    }

    pub fn denominator_coeffs(&self) -> &[Integer] {
        &self.f1
    }

    /// `F0(z, 1)`.
    pub fn numerator(&self) -> IntPoly {
        IntPoly::new(self.f0.clone())
    }

    /// `F1(z, 1)`.
    pub fn denominator(&self) -> IntPoly {
        IntPoly::new(self.f1.clone())
    }

    pub fn flavor(&self) -> Flavor {
        if self.f1[1..].iter().all(Zero::is_zero) {
            Flavor::Polynomial
        } else {
            Flavor::Rational
        }
    }

    pub fn resultant(&self) -> Integer {
        homogeneous_resultant(&self.numerator(), &self.denominator(), self.degree)
    }

    /// `ln` of the largest absolute coefficient.
    pub fn coefficient_height(&self) -> f64 {
        let m = self
            .f0
            .iter()
            .chain(self.f1.iter())
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        ln_abs(&m)
    }

    /// The two forms evaluated at the integer pair `(x, y)`, without reduction.
    pub fn eval_forms(&self, x: &Integer, y: &Integer) -> (Integer, Integer) {
        let d = self.degree;
        (
            self.numerator().eval_homogeneous(x, y, d),
            self.denominator().eval_homogeneous(x, y, d),
        )
    }

    /// Image of a point, reduced to canonical form.
    pub fn evaluate(&self, p: &ProjPoint) -> ProjPoint {
        let (a, b) = self.eval_forms(&p.x, &p.y);
        ProjPoint::normalized(a, b)
    }

    /// `[P, f(P), ..., f^n(P)]`.
    pub fn iterate(&self, p: &ProjPoint, n: usize) -> Vec<ProjPoint> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(p.clone());
        for _ in 0..n {
            let next = self.evaluate(out.last().unwrap());
            out.push(next);
        }
        out
    }

    /// `f'(z)` of the dehomogenized map at a finite non-pole `z`.
    pub fn derivative_value(&self, z: &Rational) -> Result<Rational, DynamicsError> {
        let num = self.numerator();
        let den = self.denominator();
        let dv = den.eval_rational(z);
        if dv.is_zero() {
            return Err(DynamicsError::PoleAt(rational_to_string(z)));
        }
        let nv = num.eval_rational(z);
        let ndv = num.derivative().eval_rational(z);
        let ddv = den.derivative().eval_rational(z);
        Ok((ndv * &dv - nv * ddv) / (&dv * &dv))
    }

    /// `alpha^-1 o f o alpha`, renormalized.
    pub fn conjugate(&self, alpha: &Mobius) -> DynSystem {
        let d = self.degree;
        // (a z + b)^i (c z + d)^(d - i) for each i.
        let top = IntPoly::new(vec![alpha.b.clone(), alpha.a.clone()]);
        let bottom = IntPoly::new(vec![alpha.d.clone(), alpha.c.clone()]);
        let mut f0a = IntPoly::zero();
        let mut f1a = IntPoly::zero();
        for i in 0..=d {
            let basis = top.pow(i as u32).mul(&bottom.pow((d - i) as u32));
            f0a = f0a.add(&basis.scale(&self.f0[i]));
            f1a = f1a.add(&basis.scale(&self.f1[i]));
        }
        // Adjugate of alpha applied on the left.
        let g0 = f0a.scale(&alpha.d).sub(&f1a.scale(&alpha.b));
        let g1 = f1a.scale(&alpha.a).sub(&f0a.scale(&alpha.c));
        let pad = |p: IntPoly| {
            let mut v = p.coeffs().to_vec();
            v.resize(d + 1, Integer::zero());
            v
        };
        Self::canonical(d, pad(g0), pad(g1))
    }

    /// Forms `(G0, G1)` of the `n`-th iterate, each of formal degree `d^n`
    /// (coefficients ascending in `x`), reduced by their common content.
    pub fn iterate_forms(&self, n: u32) -> (IntPoly, IntPoly) {
        let mut g0 = IntPoly::from_i64s(&[0, 1]);
        let mut g1 = IntPoly::from_i64s(&[1]);
        let mut deg = 1usize;
        for _ in 0..n {
            // F(G0, G1) as forms of degree d * deg.
            let mut h0 = IntPoly::zero();
            let mut h1 = IntPoly::zero();
            let mut pow0 = vec![IntPoly::constant(Integer::one())];
            let mut pow1 = vec![IntPoly::constant(Integer::one())];
            for _ in 0..self.degree {
                pow0.push(pow0.last().unwrap().mul(&g0));
                pow1.push(pow1.last().unwrap().mul(&g1));
            }
            for i in 0..=self.degree {
                let basis = pow0[i].mul(&pow1[self.degree - i]);
                h0 = h0.add(&basis.scale(&self.f0[i]));
                h1 = h1.add(&basis.scale(&self.f1[i]));
            }
            let g = h0.content().gcd(&h1.content());
            g0 = h0.div_exact_scalar(&g);
            g1 = h1.div_exact_scalar(&g);
            deg *= self.degree;
        }
        debug_assert!(g0.degree().unwrap_or(0) <= deg && g1.degree().unwrap_or(0) <= deg);
        (g0, g1)
    }

    /// Dehomogenized display, e.g. `1/6z^2 - 7/6z - 2` or `(7z^2 + 31z - 6)/(2z^2 + 6z - 6)`.
    pub fn display_affine(&self) -> String {
        match self.flavor() {
            Flavor::Polynomial => {
                let c = &self.f1[0];
                let coeffs: Vec<Rational> = self.f0.iter().map(|a| Rational::new(a.clone(), c.clone())).collect();
                format_rational_poly(&coeffs)
            }
            Flavor::Rational => format!("({})/({})", self.numerator(), self.denominator()),
        }
    }

    /// `(F0 : F1)` display in `x, y`.
    pub fn display_projective(&self) -> String {
        format!(
            "({} : {})",
            format_form(&self.f0, self.degree),
            format_form(&self.f1, self.degree)
        )
    }
}

impl fmt::Debug for DynSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DynSystem{}", self.display_projective())
    }
}

impl fmt::Display for DynSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_affine())
    }
}

/// Wire form: exact coefficients as decimal strings, ascending powers of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynSystemRecord {
    pub degree: usize,
    pub flavor: Flavor,
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

impl From<&DynSystem> for DynSystemRecord {
    fn from(f: &DynSystem) -> Self {
        DynSystemRecord {
            degree: f.degree,
            flavor: f.flavor(),
            numerator: f.f0.iter().map(ToString::to_string).collect(),
            denominator: f.f1.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<DynSystemRecord> for DynSystem {
    type Error = DynamicsError;

    fn try_from(r: DynSystemRecord) -> Result<Self, Self::Error> {
        let parse = |v: &[String]| -> Result<Vec<Integer>, DynamicsError> {
            v.iter()
                .map(|s| {
                    s.trim()
                        .parse::<Integer>()
                        .map_err(|_| DynamicsError::BadCoefficient(s.clone()))
                })
                .collect()
        };
        let f = DynSystem::new(parse(&r.numerator)?, parse(&r.denominator)?)?;
        if f.degree != r.degree {
            return Err(DynamicsError::CoefficientCount {
                expected: r.degree + 1,
                got: f.degree + 1,
            });
        }
        Ok(f)
    }
}

impl Serialize for DynSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DynSystemRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DynSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = DynSystemRecord::deserialize(d)?;
        DynSystem::try_from(rec).map_err(serde::de::Error::custom)
    }
}

fn format_rational_poly(coeffs: &[Rational]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if i == 0 || !mag.is_one() {
            out.push_str(&rational_to_string(&mag));
        }
        match i {
            0 => {}
            1 => out.push('z'),
            _ => out.push_str(&format!("z^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn format_form(coeffs: &[Integer], d: usize) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut mono = String::new();
        match i {
            0 => {}
            1 => mono.push('x'),
            _ => mono.push_str(&format!("x^{i}")),
        }
        match d - i {
            0 => {}
            1 => mono.push('y'),
            k => mono.push_str(&format!("y^{k}")),
        }
        if !mag.is_one() || mono.is_empty() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Integer Möbius transformation `(x : y) -> (a x + b y : c x + d y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
}

impl Mobius {
    pub fn new(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
        d: impl Into<Integer>,
    ) -> Result<Self, DynamicsError> {
        let m = Mobius {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if m.determinant().is_zero() {
            return Err(DynamicsError::SingularMobius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius::new(1, 0, 0, 1).unwrap()
    }

    /// `z -> z + k`.
    pub fn translation(k: impl Into<Integer>) -> Self {
        Mobius::new(1, k, 0, 1).unwrap()
    }

    pub fn determinant(&self) -> Integer {
        &self.a * &self.d - &self.b * &self.c
    }

    /// The adjugate, which is the inverse up to the scalar `det`.
    pub fn adjugate(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::normalized(&self.a * p.x() + &self.b * p.y(), &self.c * p.x() + &self.d * p.y())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: i64) -> ProjPoint {
        ProjPoint::from_int(n)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn squaring() -> DynSystem {
        DynSystem::from_i64s(&[0, 0, 1], &[1, 0, 0]).unwrap()
    }

    // -1/2 z^2 - 3/2 z + 1, the map interpolating [0, 1, -1, 2].
    fn poonen_like() -> DynSystem {
        DynSystem::from_i64s(&[2, -3, -1], &[2, 0, 0]).unwrap()
    }

    #[test]
    fn point_normalization() {
        let p = ProjPoint::new(1024.into(), (-1024).into()).unwrap();
        assert_eq!((p.x(), p.y()), (&Integer::from(-1), &Integer::from(1)));
        let inf = ProjPoint::new((-5).into(), 0.into()).unwrap();
        assert!(inf.is_infinity());
        assert_eq!(inf.x(), &Integer::one());
        assert_eq!(ProjPoint::new(0.into(), 0.into()), Err(DynamicsError::ZeroPoint));
        assert_eq!(ProjPoint::parse("-3/6").unwrap(), ProjPoint::from_rational(&q(-1, 2)));
        assert!(pt(3) < ProjPoint::infinity() && pt(-7) < pt(2));
    }

    #[test]
    fn evaluation_examples() {
        let p = ProjPoint::new(3.into(), 4.into()).unwrap();
        assert_eq!(squaring().evaluate(&p), ProjPoint::new(9.into(), 16.into()).unwrap());
        assert_eq!(squaring().iterate(&pt(2), 3), vec![pt(2), pt(4), pt(16), pt(256)]);
        assert_eq!(squaring().iterate(&pt(5), 0), vec![pt(5)]);
        assert_eq!(
            poonen_like().iterate(&pt(0), 5),
            vec![pt(0), pt(1), pt(-1), pt(2), pt(-4), pt(-1)]
        );
        // Rational map whose forms at 0 are (1024 : -1024).
        let f = DynSystem::from_i64s(&[1024, -3424, 592], &[-1024, -536, 173]).unwrap();
        assert_eq!(f.eval_forms(&Integer::zero(), &Integer::one()).0, Integer::from(1024));
        assert_eq!(f.evaluate(&pt(0)), pt(-1));
        assert_eq!(squaring().evaluate(&ProjPoint::infinity()), ProjPoint::infinity());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(squaring().derivative_value(&q(1, 1)).unwrap(), q(2, 1));
        assert_eq!(poonen_like().derivative_value(&q(-1, 1)).unwrap(), q(-1, 2));
        // 1 / f(1 / w) for the squaring map is w^2 again; derivative at 1 is 2.
        let inv = squaring().conjugate(&Mobius::new(0, 1, 1, 0).unwrap());
        assert_eq!(inv.derivative_value(&q(1, 1)).unwrap(), q(2, 1));
        let pole = DynSystem::from_i64s(&[1, 0, 1], &[0, 0, 1]).unwrap();
        assert!(matches!(pole.derivative_value(&q(0, 1)), Err(DynamicsError::PoleAt(_))));
    }

    #[test]
    fn conjugation_examples() {
        let f = poonen_like();
        assert_eq!(f.conjugate(&Mobius::identity()), f);
        let g = squaring().conjugate(&Mobius::translation(1));
        assert_eq!(g, DynSystem::from_i64s(&[0, 2, 1], &[1, 0, 0]).unwrap());
    }

    #[test]
    fn canonical_form() {
        let f = DynSystem::from_i64s(&[-4, 6, 2], &[-2, 0, 0]).unwrap();
        assert_eq!(f.denominator_coeffs()[0], Integer::one());
        assert_eq!(f.numerator_coeffs(), &[2.into(), (-3).into(), (-1).into()]);
        assert_eq!(f.flavor(), Flavor::Polynomial);
        assert_eq!(f.display_affine(), "-z^2 - 3z + 2");
    }

    #[test]
    fn rejects_degenerate_pairs() {
        // (x^2 - xy : xy - y^2) share the root x = y.
        assert_eq!(
            DynSystem::from_i64s(&[0, -1, 1], &[-1, 1, 0]),
            Err(DynamicsError::ZeroResultant)
        );
        assert_eq!(
            DynSystem::from_i64s(&[0, 1], &[1, 0]),
            Err(DynamicsError::DegreeTooSmall(1))
        );
    }

    #[test]
    fn iterate_forms_agree_with_iteration() {
        let f = poonen_like();
        let (g0, g1) = f.iterate_forms(3);
        for k in -3..=3 {
            let p = pt(k);
            let direct = f.iterate(&p, 3).pop().unwrap();
            let via = ProjPoint::normalized(
                g0.eval_homogeneous(p.x(), p.y(), 8),
                g1.eval_homogeneous(p.x(), p.y(), 8),
            );
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn serde_round_trip() {
        let f = DynSystem::from_i64s(&[1024, -3424, 592], &[-1024, -536, 173]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"-3424\""));
        let back: DynSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
