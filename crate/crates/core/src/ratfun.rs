//! Exact rational functions over the Gaussian rationals.
//!
//! Canonical form: numerator and denominator coprime, denominator monic,
//! zero represented as 0/1. With that normalization, equality of functions
//! is equality of the stored polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;

/// Denominator magnitudes below this trip the near-pole evaluation error.
const NEAR_POLE_GUARD: f64 = 1e-150;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds `num/den` in lowest terms with a monic denominator.
    ///
    /// Errors with [`Error::ZeroDenominator`] when `den` is identically zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            let (n, _) = num.div_rem(&g)?;
            let (d, _) = den.div_rem(&g)?;
            (n, d)
        };
        let lead_inv = den.leading().unwrap().inv()?;
        num = num.scale(&lead_inv);
        den = den.scale(&lead_inv);
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        RationalFunction::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    /// The identity function `z`.
    pub fn var() -> Self {
        RationalFunction::from_poly(Polynomial::var())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// max(deg num, deg den); 0 for constants and the zero function.
    pub fn map_degree(&self) -> usize {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        dn.max(dd)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// Exact quotient-rule derivative, normalized.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        RationalFunction::new(n, d).expect("den squared nonzero")
    }

    /// Logarithmic derivative f'/f = (n'd - nd')/(nd), in lowest terms.
    ///
    /// The result has only simple poles, so its denominator is square-free.
    pub fn log_derivative(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction("logarithmic derivative"));
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.num * &self.den;
        RationalFunction::new(n, d)
    }

    /// Order of vanishing at the exact point `x` (negative at poles),
    /// by exact repeated division by (z - x).
    pub fn ord_at(&self, x: &GaussianRational) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction("order"));
        }
        Ok(poly_ord_at(&self.num, x) - poly_ord_at(&self.den, x))
    }

    /// Laurent data at the origin: `(n, c)` with `n = ord(f, 0)` and
    /// `c = lim_{z->0} f(z) z^{-n}`, both exact.
    pub fn laurent_leading(&self) -> Result<(i64, GaussianRational)> {
        if self.is_zero() {
            return Err(Error::ZeroFunction("Laurent expansion"));
        }
        let on = self.num.ord_at_zero().unwrap();
        let od = self.den.ord_at_zero().unwrap();
        let c = &self.num.coeff(on) / &self.den.coeff(od);
        Ok((on as i64 - od as i64, c))
    }

    /// Laurent coefficient of `z^m` at the origin for `m <= ord(f, 0)`:
    /// the leading coefficient when `m = ord(f, 0)`, zero below it.
    /// Zero functions report zero.
    pub fn laurent_coeff_at(&self, m: i64) -> GaussianRational {
        match self.laurent_leading() {
            Ok((n, c)) => {
                debug_assert!(m <= n, "only coefficients at or below the order are exact");
                if n == m {
                    c
                } else {
                    GaussianRational::zero()
                }
            }
            Err(_) => GaussianRational::zero(),
        }
    }

    /// Floating evaluation via Horner on numerator and denominator.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.to_float().eval(z)
    }

    /// Snapshot of the coefficients as complex floats, for repeated circle
    /// evaluation.
    pub fn to_float(&self) -> FloatRational {
        FloatRational {
            num: self.num.to_complex_coeffs(),
            den: self.den.to_complex_coeffs(),
        }
    }
}

fn poly_ord_at(p: &Polynomial, x: &GaussianRational) -> i64 {
    debug_assert!(!p.is_zero());
    if x.is_zero() {
        return p.ord_at_zero().unwrap() as i64;
    }
    let linear = Polynomial::new(vec![-x, GaussianRational::one()]);
    let mut ord = 0;
    let mut cur = p.clone();
    while cur.eval(x).is_zero() {
        let (q, r) = cur.div_rem(&linear).expect("linear divisor nonzero");
        debug_assert!(r.is_zero());
        cur = q;
        ord += 1;
    }
    ord
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let d = &self.den * &rhs.den;
        RationalFunction::new(n, d).expect("product of nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let d = &self.den * &rhs.den;
        RationalFunction::new(n, d).expect("product of nonzero denominators")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        let n = &self.num * &rhs.num;
        let d = &self.den * &rhs.den;
        RationalFunction::new(n, d).expect("product of nonzero denominators")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by the zero function; use `inv` to handle it.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        let inv = rhs.inv().expect("division by zero rational function");
        self * &inv
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.degree().unwrap_or(0) > 0 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Complex-float coefficient snapshot of a rational function.
#[derive(Debug, Clone)]
pub struct FloatRational {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl FloatRational {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let n = horner(&self.num, z);
        let d = horner(&self.den, z);
        if d.norm() < NEAR_POLE_GUARD {
            return Err(Error::NearPole { z });
        }
        let v = n / d;
        if !v.is_finite() {
            return Err(Error::NearPole { z });
        }
        Ok(v)
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}
