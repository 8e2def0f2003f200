//! Dense polynomials over the Gaussian rationals.
//!
//! Coefficients are stored lowest degree first; the highest-degree
//! coefficient is nonzero unless the polynomial is zero (empty vector).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients (lowest degree first), trimming
    /// trailing zeros.
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![GaussianRational::one()],
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `z`.
    pub fn var() -> Self {
        Polynomial {
            coeffs: vec![GaussianRational::zero(), GaussianRational::one()],
        }
    }

    /// Convenience constructor from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&n| GaussianRational::from_int(n)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == GaussianRational::one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    /// Order of vanishing at 0: index of the lowest nonzero coefficient.
    /// `None` for the zero polynomial.
    pub fn ord_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(&GaussianRational::one())
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &GaussianRational::from_int(k as i64))
            .collect();
        Polynomial::new(coeffs)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = &rem[rem.len() - 1] * &lead_inv;
            if !factor.is_zero() {
                // the top coefficient cancels exactly, so only subtract below it
                for (j, dc) in d.coeffs.iter().enumerate().take(dd) {
                    let t = &factor * dc;
                    rem[k + j] = &rem[k + j] - &t;
                }
            }
            rem.pop();
            quot[k] = factor;
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Scales so all coefficients are Gaussian integers with no common
    /// integer factor. Controls coefficient growth in the gcd loop.
    fn primitive_part(&self) -> Polynomial {
        use num_bigint::BigInt;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = num_integer::lcm(denom_lcm, c.re.denom().clone());
            denom_lcm = num_integer::lcm(denom_lcm, c.im.denom().clone());
        }
        let scale = BigRational::from_integer(denom_lcm);
        let mut content = BigInt::zero();
        let ints: Vec<(BigInt, BigInt)> = self
            .coeffs
            .iter()
            .map(|c| {
                let re = (&c.re * &scale).to_integer();
                let im = (&c.im * &scale).to_integer();
                content = num_integer::gcd(content.clone(), re.abs());
                content = num_integer::gcd(content.clone(), im.abs());
                (re, im)
            })
            .collect();
        if content.is_zero() {
            content = BigInt::one();
        }
        let coeffs = ints
            .into_iter()
            .map(|(re, im)| {
                GaussianRational::new(
                    BigRational::from_integer(&re / &content),
                    BigRational::from_integer(&im / &content),
                )
            })
            .collect();
        Polynomial { coeffs }
    }

    /// Pseudo-remainder of `self` by `d`: the remainder of lead(d)^k * self
    /// divided by `d`, computed without coefficient division.
    fn pseudo_rem(&self, d: &Polynomial) -> Polynomial {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.leading().unwrap().clone();
        let mut r = self.clone();
        while r.degree().is_some_and(|n| n >= dd) {
            let n = r.degree().unwrap();
            let top = r.leading().unwrap().clone();
            // r <- lead * r - top * z^(n - dd) * d
            let mut coeffs = vec![GaussianRational::zero(); n];
            for (k, c) in r.coeffs.iter().enumerate().take(n) {
                coeffs[k] = c * &lead;
            }
            for (j, dc) in d.coeffs.iter().enumerate().take(dd) {
                let t = &top * dc;
                coeffs[n - dd + j] = &coeffs[n - dd + j] - &t;
            }
            r = Polynomial::new(coeffs);
        }
        r
    }

    /// Monic gcd via the primitive polynomial remainder sequence.
    /// gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree().unwrap_or(0) < b.degree().unwrap_or(0) {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return Polynomial::one();
            }
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients converted to floats for circle evaluation.
    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_complex64()).collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs =
            vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                coeffs[j + k] = &coeffs[j + k] + &t;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    /// Prints in the grammar the expression parser accepts, highest degree
    /// first, e.g. `2*z^3 - z + 1/2` or `(1+2i)*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let printed = c.to_string();
            // negative pure-real/imag coefficients print through their sign
            let (sign, mag) = match printed.strip_prefix('-') {
                Some(rest) if !printed.starts_with("(-") => ("-", rest.to_string()),
                _ => ("+", printed),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit = mag == "1";
            match (k, is_unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_trims_zeros() {
        let p = Polynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn mul_and_div_rem_round_trip() {
        let a = Polynomial::from_ints(&[1, 0, 3, 2]);
        let b = Polynomial::from_ints(&[-1, 1, 1]);
        let prod = &a * &b;
        let (q, r) = prod.div_rem(&b).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    #[test]
    fn div_rem_with_remainder() {
        // z^2 + 1 = (z + 1)(z - 1) + 2
        let p = Polynomial::from_ints(&[1, 0, 1]);
        let d = Polynomial::from_ints(&[1, 1]);
        let (q, r) = p.div_rem(&d).unwrap();
        assert_eq!(q, Polynomial::from_ints(&[-1, 1]));
        assert_eq!(r, Polynomial::from_ints(&[2]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // gcd((z-1)(z+2), (z-1)(z-3)) = z - 1
        let a = &Polynomial::from_ints(&[-1, 1]) * &Polynomial::from_ints(&[2, 1]);
        let b = &Polynomial::from_ints(&[-1, 1]) * &Polynomial::from_ints(&[-3, 1]);
        assert_eq!(a.gcd(&b), Polynomial::from_ints(&[-1, 1]));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = Polynomial::from_ints(&[1, 0, 1]);
        let b = Polynomial::from_ints(&[-1, 1]);
        assert!(a.gcd(&b).is_one());
    }

    #[test]
    fn derivative_basic() {
        // d/dz (z^3 + 2z) = 3z^2 + 2
        let p = Polynomial::from_ints(&[0, 2, 0, 1]);
        assert_eq!(p.derivative(), Polynomial::from_ints(&[2, 0, 3]));
        assert!(Polynomial::from_ints(&[5]).derivative().is_zero());
    }

    #[test]
    fn eval_exact() {
        let p = Polynomial::from_ints(&[-1, 0, 1]); // z^2 - 1
        assert_eq!(p.eval(&GaussianRational::from_int(3)), GaussianRational::from_int(8));
        // (i)^2 - 1 = -2
        assert_eq!(p.eval(&GaussianRational::i()), GaussianRational::from_int(-2));
    }

    #[test]
    fn display_round_readable() {
        let p = Polynomial::from_ints(&[1, -1, 2]);
        assert_eq!(p.to_string(), "2*z^2 - z + 1");
    }
}
