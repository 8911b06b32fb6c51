//! Polynomial maps restricted to a disk, their critical data, and the
//! hypothesis checks that make the restriction polynomial-like.

mod exact;
mod restriction;
mod roots;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use exact::{format_rational, parse_decimal, ExactComplex};
pub(crate) use restriction::containment;
pub use restriction::{validate_restriction, CriticalStatus, RestrictionReport};
pub use roots::{approximate_roots, isolate_roots, pellet, taylor_shift, RootDisk};

use crate::rigorous_geom::{exact_rational, hypot_up, Interval, IntervalBox};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("malformed decimal number `{0}`")]
    BadNumber(String),
    #[error("polynomial must have degree at least 2 (got {0})")]
    DegreeTooLow(usize),
    #[error("leading coefficient must be exactly 1")]
    NotMonic,
    #[error("disk radius must be positive")]
    BadRadius,
    #[error("precision exceeded: {0}")]
    PrecisionExceeded(String),
}

/// A critical point enclosure: the disk holds exactly `multiplicity` roots
/// of the derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub disk: RootDisk,
}

impl CriticalPoint {
    pub fn enclosure(&self) -> IntervalBox {
        self.disk.enclosure()
    }

    pub fn multiplicity(&self) -> u32 {
        self.disk.multiplicity
    }

    pub fn center(&self) -> (f64, f64) {
        self.disk.center
    }
}

/// A monic polynomial with exact coefficients.
#[derive(Clone, Debug)]
pub struct PolynomialMap {
    coefficients: Vec<ExactComplex>,
    enclosures: Vec<IntervalBox>,
    critical_points: Vec<CriticalPoint>,
}

impl PartialEq for PolynomialMap {
    fn eq(&self, other: &Self) -> bool {
        self.coefficients == other.coefficients
    }
}

impl PolynomialMap {
    /// Builds the map from ascending coefficients `a_0, ..., a_d` and
    /// isolates its critical points.
    pub fn new(coefficients: Vec<ExactComplex>) -> Result<Self, MapError> {
        if coefficients.len() < 3 {
            return Err(MapError::DegreeTooLow(coefficients.len().saturating_sub(1)));
        }
        if coefficients.last() != Some(&ExactComplex::one()) {
            return Err(MapError::NotMonic);
        }
        let enclosures = coefficients.iter().map(ExactComplex::enclosure).collect();
        let mut map = Self {
            coefficients,
            enclosures,
            critical_points: Vec::new(),
        };
        map.critical_points = derive_critical_points(&map)?;
        Ok(map)
    }

    /// Parses ascending `[re, im]` decimal-string pairs.
    pub fn from_decimal_pairs<S: AsRef<str>>(pairs: &[[S; 2]]) -> Result<Self, MapError> {
        let coeffs = pairs
            .iter()
            .map(|[re, im]| ExactComplex::parse(re.as_ref(), im.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coeffs)
    }

    /// Real polynomial from ascending decimal strings.
    pub fn from_real_decimals(coeffs: &[&str]) -> Result<Self, MapError> {
        let pairs: Vec<[&str; 2]> = coeffs.iter().map(|c| [*c, "0"]).collect();
        Self::from_decimal_pairs(&pairs)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[ExactComplex] {
        &self.coefficients
    }

    pub fn coefficient_enclosures(&self) -> &[IntervalBox] {
        &self.enclosures
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.critical_points
    }

    /// Enclosure of the image of a box: Horner's rule intersected with the
    /// Taylor form at the box center, which stays tight near critical
    /// points where Horner overestimates.
    pub fn eval_box(&self, z: &IntervalBox) -> IntervalBox {
        let n = self.degree();
        let mut acc = self.enclosures[n];
        for i in (0..n).rev() {
            acc = acc * *z + self.enclosures[i];
        }
        if !acc.is_finite() {
            return IntervalBox::ENTIRE;
        }
        if z.re.is_point() && z.im.is_point() {
            return acc;
        }
        let (cx, cy) = z.center();
        let c = IntervalBox::point(cx, cy);
        let b = taylor_shift(&self.enclosures, c);
        let rho = Interval::point((*z - c).mag());
        let mut pow = rho;
        let mut tail = Interval::ZERO;
        for bj in &b[1..] {
            tail = tail + Interval::point(bj.mag()) * pow;
            pow = pow * rho;
        }
        let r = tail.hi();
        let spread = Interval::new(-r, r);
        let taylor = IntervalBox::from_parts(b[0].re + spread, b[0].im + spread);
        if !taylor.is_finite() {
            return acc;
        }
        acc.intersection(&taylor).unwrap_or(acc)
    }

    pub fn eval_exact(&self, z: &ExactComplex) -> ExactComplex {
        let n = self.degree();
        let mut acc = self.coefficients[n].clone();
        for i in (0..n).rev() {
            acc = &(&acc * z) + &self.coefficients[i];
        }
        acc
    }

    /// Taylor coefficients of `f` at an exact point: `f(w + h) = sum t_j h^j`.
    pub fn taylor_exact(&self, w: &ExactComplex) -> Vec<ExactComplex> {
        let mut b = self.coefficients.clone();
        let n = b.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                b[j] = &b[j] + &(w * &b[j + 1]);
            }
        }
        b
    }

    /// Local degree of `f` at an exact point: the order of vanishing of
    /// `f(z) - f(w)` at `w`.
    pub fn local_degree_exact(&self, w: &ExactComplex) -> u32 {
        let t = self.taylor_exact(w);
        (1..t.len()).find(|&j| !t[j].is_zero()).unwrap_or(t.len() - 1) as u32
    }

    /// Ascending interval coefficients of `f - target`.
    pub fn shifted_coefficients(&self, target: &IntervalBox) -> Vec<IntervalBox> {
        let mut c = self.enclosures.clone();
        c[0] = c[0] - *target;
        c
    }

    /// Ascending exact coefficients of the derivative.
    pub fn derivative_exact(&self) -> Vec<ExactComplex> {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| {
                let k = BigRational::from_integer(BigInt::from(i));
                ExactComplex::new(&a.re * &k, &a.im * &k)
            })
            .collect()
    }
}

/// Certified enclosures of the roots of `f'` with multiplicities summing to
/// `d - 1`.
pub fn derive_critical_points(map: &PolynomialMap) -> Result<Vec<CriticalPoint>, MapError> {
    let derivative: Vec<IntervalBox> = map
        .derivative_exact()
        .iter()
        .map(ExactComplex::enclosure)
        .collect();
    let disks = isolate_roots(&derivative)?;
    debug_assert_eq!(
        disks.iter().map(|d| d.multiplicity as usize).sum::<usize>(),
        map.degree() - 1
    );
    Ok(disks.into_iter().map(|disk| CriticalPoint { disk }).collect())
}

/// `R = 1 + sum |a_i|` over the non-leading coefficients, rounded up to a
/// representable value when a modulus is irrational. For `|z| > R` one has
/// `|f(z)| > |z|`, and `|f(z)| >= |z|` on `|z| = R`.
pub fn escape_radius(map: &PolynomialMap) -> BigRational {
    let n = map.degree();
    let mut total = BigRational::one();
    for a in &map.coefficients()[..n] {
        if a.im.is_zero() {
            total += a.re.abs();
        } else if a.re.is_zero() {
            total += a.im.abs();
        } else {
            let enc = a.enclosure();
            let m = hypot_up(enc.re.mag(), enc.im.mag());
            total += exact_rational(m).expect("finite coefficient modulus");
        }
    }
    total
}

/// An open disk `D(center, radius)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainDisk {
    pub center: ExactComplex,
    #[serde(with = "rational_string")]
    pub radius: BigRational,
}

mod rational_string {
    use super::{format_rational, parse_decimal};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_decimal(&text).map_err(serde::de::Error::custom)
    }
}

impl DomainDisk {
    pub fn new(center: ExactComplex, radius: BigRational) -> Result<Self, MapError> {
        if !radius.is_positive() {
            return Err(MapError::BadRadius);
        }
        Ok(Self { center, radius })
    }

    pub fn centered(radius: &str) -> Result<Self, MapError> {
        Self::new(ExactComplex::zero(), parse_decimal(radius)?)
    }

    /// Default domain `D(0, escape_radius)`.
    pub fn default_for(map: &PolynomialMap) -> Self {
        Self {
            center: ExactComplex::zero(),
            radius: escape_radius(map),
        }
    }

    pub fn radius_interval(&self) -> Interval {
        Interval::from_rational(&self.radius)
    }

    pub fn center_enclosure(&self) -> IntervalBox {
        self.center.enclosure()
    }

    /// Certified `b ⊂ U` (open disk).
    pub fn contains_box(&self, b: &IntervalBox) -> bool {
        let rel = *b - self.center_enclosure();
        rel.is_finite() && rel.mag() < self.radius_interval().lo()
    }

    /// Certified `b ∩ closure(U) = ∅`.
    pub fn misses_box(&self, b: &IntervalBox) -> bool {
        let rel = *b - self.center_enclosure();
        rel.mig() > self.radius_interval().hi()
    }

    /// Exact test `|z - c| < R`.
    pub fn contains_exact(&self, z: &ExactComplex) -> bool {
        (z - &self.center).norm_sqr() < &self.radius * &self.radius
    }

    /// Exact test `|z - c| <= R`.
    pub fn closure_contains_exact(&self, z: &ExactComplex) -> bool {
        (z - &self.center).norm_sqr() <= &self.radius * &self.radius
    }

    /// Upper bound on `|z|` over the disk.
    pub fn outer_modulus(&self) -> f64 {
        let c = self.center_enclosure();
        (Interval::point(c.mag()) + self.radius_interval()).hi()
    }

    /// The same disk with radius multiplied by `factor`.
    pub fn shrunk(&self, factor: &BigRational) -> Self {
        Self {
            center: self.center.clone(),
            radius: &self.radius * factor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_critical_point() {
        let f = PolynomialMap::from_real_decimals(&["-6", "0", "1"]).unwrap();
        let crit = f.critical_points();
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].multiplicity(), 1);
        assert!(crit[0].enclosure().contains_point(0.0, 0.0));
    }

    #[test]
    fn cube_has_double_critical_point() {
        let f = PolynomialMap::from_real_decimals(&["0", "0", "0", "1"]).unwrap();
        let crit = f.critical_points();
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].multiplicity(), 2);
        assert!(crit[0].enclosure().contains_point(0.0, 0.0));
    }

    #[test]
    fn cubic_critical_points_near_plus_minus_one() {
        let f = PolynomialMap::from_real_decimals(&["0.1", "-3", "0", "1"]).unwrap();
        let crit = f.critical_points();
        assert_eq!(crit.len(), 2);
        assert!(crit[0].enclosure().contains_point(-1.0, 0.0));
        assert!(crit[1].enclosure().contains_point(1.0, 0.0));
        let total: u32 = crit.iter().map(|c| c.multiplicity()).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn escape_radius_examples() {
        let r = |c: &[&str]| escape_radius(&PolynomialMap::from_real_decimals(c).unwrap());
        assert_eq!(r(&["-6", "0", "1"]), parse_decimal("7").unwrap());
        assert_eq!(r(&["0", "0", "0", "1"]), parse_decimal("1").unwrap());
        assert_eq!(r(&["0.1", "-3", "0", "1"]), parse_decimal("4.1").unwrap());
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert_eq!(
            PolynomialMap::from_real_decimals(&["1", "2"]).unwrap_err(),
            MapError::DegreeTooLow(1)
        );
        assert_eq!(
            PolynomialMap::from_real_decimals(&["1", "0", "2"]).unwrap_err(),
            MapError::NotMonic
        );
        assert!(DomainDisk::centered("0").is_err());
        assert!(DomainDisk::centered("-1").is_err());
    }

    #[test]
    fn local_degree_exact_at_critical_point() {
        let f = PolynomialMap::from_real_decimals(&["3.75", "-6.75", "0", "1"]).unwrap();
        let c = ExactComplex::parse("1.5", "0").unwrap();
        assert_eq!(f.local_degree_exact(&c), 2);
        assert_eq!(f.eval_exact(&c), ExactComplex::parse("-3", "0").unwrap());
        let p = ExactComplex::parse("-3", "0").unwrap();
        assert_eq!(f.local_degree_exact(&p), 1);
        let cube = PolynomialMap::from_real_decimals(&["0", "0", "0", "1"]).unwrap();
        assert_eq!(cube.local_degree_exact(&ExactComplex::zero()), 3);
    }
}
