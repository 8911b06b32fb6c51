//! Parameter search for cubics `z^3 - 3a^2 z + b` whose critical point `a`
//! is strictly preperiodic: `f(a)` is a fixed point different from `a`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use thiserror::Error;

use crate::map_model::{parse_decimal, ExactComplex, MapError, PolynomialMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("Newton iteration did not converge")]
    NoConvergence,
    #[error("no exact parameter found near {0}")]
    NotExact(f64),
    #[error("the critical point is fixed, not strictly preperiodic")]
    Periodic,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Debug)]
pub struct PreperiodicCubic {
    pub a: BigRational,
    pub b: BigRational,
    pub map: PolynomialMap,
    /// `f(a)`, a fixed point.
    pub critical_value: ExactComplex,
}

fn cubic(a2: f64, b: Complex64, z: Complex64) -> Complex64 {
    z * z * z - 3.0 * a2 * z + b
}

/// Newton's method on `g(b) = f_b(f_b(a)) - f_b(a)` starting at `guess`.
pub fn newton_parameter(a: f64, guess: f64) -> Result<f64, SearchError> {
    let a2 = a * a;
    let ac = Complex64::new(a, 0.0);
    let mut b = Complex64::new(guess, 0.0);
    for _ in 0..200 {
        let v = cubic(a2, b, ac);
        let g = cubic(a2, b, v) - v;
        if g.norm() == 0.0 {
            return Ok(b.re);
        }
        // dg/db = f'(v) since both terms depend on b with slope 1
        let dg = 3.0 * v * v - 3.0 * a2;
        if dg.norm() == 0.0 {
            return Err(SearchError::NoConvergence);
        }
        let step = g / dg;
        b -= step;
        if step.norm() <= 1e-15 * (1.0 + b.norm()) {
            return Ok(b.re);
        }
    }
    Err(SearchError::NoConvergence)
}

/// Finds `b` by Newton's method, snaps it to a dyadic rational, and checks
/// `f(f(a)) = f(a) != a` in exact arithmetic.
pub fn search_preperiodic_cubic(a: &str, guess: f64) -> Result<PreperiodicCubic, SearchError> {
    let a_exact = parse_decimal(a)?;
    let a_f = a_exact.to_f64().ok_or(SearchError::NotExact(guess))?;
    let b_f = newton_parameter(a_f, guess)?;
    for bits in 0..=48 {
        let scale = (1u64 << bits) as f64;
        let snapped = (b_f * scale).round() / scale;
        let b = BigRational::from_f64(snapped).ok_or(SearchError::NotExact(b_f))?;
        let three = BigRational::from_integer(3.into());
        let coeffs = vec![
            ExactComplex::real(b.clone()),
            ExactComplex::real(-(three * &a_exact * &a_exact)),
            ExactComplex::zero(),
            ExactComplex::one(),
        ];
        let map = PolynomialMap::new(coeffs)?;
        let c = ExactComplex::real(a_exact.clone());
        let v = map.eval_exact(&c);
        if map.eval_exact(&v) == v {
            if v == c {
                return Err(SearchError::Periodic);
            }
            return Ok(PreperiodicCubic {
                a: a_exact,
                b,
                map,
                critical_value: v,
            });
        }
    }
    Err(SearchError::NotExact(b_f))
}
