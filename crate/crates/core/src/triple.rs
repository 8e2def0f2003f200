//! Projective points (a : b : c) of meromorphic functions on the line
//! a + b + c = 0.
//!
//! Coordinates are either exact rational functions or oracle-backed
//! meromorphic functions (the oracle supplies zero/pole sites, evaluation,
//! and Laurent leading data at the origin). The two kinds mix freely in one
//! triple, e.g. (sin^2 z, cos^2 z, -1).

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::ratfun::{FloatRational, RationalFunction};
use crate::roots::{signed_roots, SignedRoot};

/// A zero (positive order) or pole (negative order) reported by an oracle.
/// A location of exactly (0, 0) is treated as the exact origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSite {
    pub location: Complex64,
    pub order: i64,
}

type SitesFn = dyn Fn(f64) -> Vec<OracleSite> + Send + Sync;
type EvalFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;

/// A meromorphic function presented by procedures instead of a formula.
///
/// Contract (checked at construction where possible): sites carry exact
/// integer orders, `eval` and `eval_derivative` agree with a central
/// finite difference to 1e-5 relative at sample points, and
/// `laurent_leading = (n, c)` matches `f(z) ~ c z^n` near the origin.
pub struct MeromorphicOracle {
    name: String,
    sites: Box<SitesFn>,
    eval: Box<EvalFn>,
    eval_derivative: Box<EvalFn>,
    laurent_leading: (i64, Complex64),
}

impl fmt::Debug for MeromorphicOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeromorphicOracle")
            .field("name", &self.name)
            .field("laurent_leading", &self.laurent_leading)
            .finish()
    }
}

impl MeromorphicOracle {
    /// Wraps the procedures, verifying the derivative contract by central
    /// finite differences at sample points on a small circle.
    pub fn new(
        name: impl Into<String>,
        sites: Box<SitesFn>,
        eval: Box<EvalFn>,
        eval_derivative: Box<EvalFn>,
        laurent_leading: (i64, Complex64),
    ) -> Result<Self> {
        let oracle = MeromorphicOracle {
            name: name.into(),
            sites,
            eval,
            eval_derivative,
            laurent_leading,
        };
        oracle.check_derivative_contract()?;
        Ok(oracle)
    }

    fn check_derivative_contract(&self) -> Result<()> {
        // radii chosen off the usual lattices; retry in case one hits a pole
        for radius in [0.7321f64, 1.3849, 2.4117] {
            let mut ok = true;
            for k in 0..8 {
                let theta = 0.31 + 2.0 * std::f64::consts::PI * (k as f64) / 8.0;
                let z = Complex64::from_polar(radius, theta);
                let h = 1e-5;
                let fp = (self.eval)(z + h);
                let fm = (self.eval)(z - h);
                let d = (self.eval_derivative)(z);
                if !fp.is_finite() || !fm.is_finite() || !d.is_finite() {
                    ok = false;
                    break;
                }
                let fd = (fp - fm) / Complex64::new(2.0 * h, 0.0);
                let scale = d.norm().max(1e-8);
                if (fd - d).norm() > 1e-5 * scale {
                    return Err(Error::OracleContract(format!(
                        "{}: eval_derivative disagrees with finite difference at z = {z} \
                         (reported {d}, measured {fd})",
                        self.name
                    )));
                }
            }
            if ok {
                return Ok(());
            }
        }
        Err(Error::OracleContract(format!(
            "{}: could not sample eval away from singularities",
            self.name
        )))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sites_in_disk(&self, rho: f64) -> Vec<OracleSite> {
        (self.sites)(rho)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        (self.eval_derivative)(z)
    }

    pub fn laurent_leading(&self) -> (i64, Complex64) {
        self.laurent_leading
    }
}

/// A coordinate of a projective point: exact or oracle-backed.
#[derive(Debug, Clone)]
pub enum FunctionModel {
    Rational(RationalFunction),
    Oracle(Arc<MeromorphicOracle>),
}

impl FunctionModel {
    pub fn rational(f: RationalFunction) -> Self {
        FunctionModel::Rational(f)
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        match self {
            FunctionModel::Rational(f) => Some(f),
            FunctionModel::Oracle(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FunctionModel::Rational(_))
    }

    /// Identically zero? Oracles are nonzero by contract.
    pub fn is_zero(&self) -> bool {
        match self {
            FunctionModel::Rational(f) => f.is_zero(),
            FunctionModel::Oracle(_) => false,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            FunctionModel::Rational(f) => f.evaluate(z),
            FunctionModel::Oracle(o) => {
                let v = o.eval(z);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NearPole { z })
                }
            }
        }
    }

    /// Laurent data (n, c) at the origin with `f(z) ~ c z^n`.
    pub fn laurent_leading(&self) -> Result<(i64, Complex64)> {
        match self {
            FunctionModel::Rational(f) => {
                let (n, c) = f.laurent_leading()?;
                Ok((n, c.to_complex64()))
            }
            FunctionModel::Oracle(o) => Ok(o.laurent_leading()),
        }
    }

    pub fn ord_at_origin(&self) -> Result<i64> {
        Ok(self.laurent_leading()?.0)
    }

    /// Laurent coefficient of `z^m` for `m <= ord(f, 0)`: the leading
    /// coefficient at the order, zero below it.
    pub fn laurent_coeff_at(&self, m: i64) -> Result<Complex64> {
        let (n, c) = self.laurent_leading()?;
        Ok(if n == m { c } else { Complex64::new(0.0, 0.0) })
    }

    /// Evaluator for the logarithmic derivative f'/f.
    pub fn logder_evaluator(&self) -> Result<LogderEval> {
        match self {
            FunctionModel::Rational(f) => Ok(LogderEval::Float(f.log_derivative()?.to_float())),
            FunctionModel::Oracle(o) => Ok(LogderEval::Oracle(Arc::clone(o))),
        }
    }

    /// Snapshot evaluator for repeated circle evaluation (caches the float
    /// coefficients of rational coordinates once).
    pub fn value_evaluator(&self) -> ValueEval {
        match self {
            FunctionModel::Rational(f) => ValueEval::Float(f.to_float()),
            FunctionModel::Oracle(o) => ValueEval::Oracle(Arc::clone(o)),
        }
    }
}

/// Pointwise value of one coordinate.
#[derive(Clone)]
pub enum ValueEval {
    Float(FloatRational),
    Oracle(Arc<MeromorphicOracle>),
}

impl ValueEval {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            ValueEval::Float(f) => f.eval(z),
            ValueEval::Oracle(o) => {
                let v = o.eval(z);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NearPole { z })
                }
            }
        }
    }
}

impl fmt::Display for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionModel::Rational(r) => write!(f, "{r}"),
            FunctionModel::Oracle(o) => write!(f, "<oracle {}>", o.name()),
        }
    }
}

/// Pointwise logarithmic derivative of one coordinate.
#[derive(Clone)]
pub enum LogderEval {
    Float(FloatRational),
    Oracle(Arc<MeromorphicOracle>),
}

impl LogderEval {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            LogderEval::Float(f) => f.eval(z),
            LogderEval::Oracle(o) => {
                let f = o.eval(z);
                let d = o.eval_derivative(z);
                if !f.is_finite() || !d.is_finite() || f.norm() == 0.0 {
                    return Err(Error::NearPole { z });
                }
                let v = d / f;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NearPole { z })
                }
            }
        }
    }
}

/// A projective point (a : b : c) with a + b + c = 0 and no coordinate
/// identically zero.
///
/// Radius-independent derived data (the logder coordinates, the root lists
/// of rational coordinates) is computed once and cached, so repeated
/// evaluations at many radii only pay for quadrature.
#[derive(Debug)]
pub struct MeroTriple {
    a: FunctionModel,
    b: FunctionModel,
    c: FunctionModel,
    nonconstant: bool,
    logder_cache: OnceLock<std::result::Result<Box<MeroTriple>, Error>>,
    root_cache: [OnceLock<std::result::Result<Vec<SignedRoot>, Error>>; 3],
}

impl Clone for MeroTriple {
    fn clone(&self) -> Self {
        MeroTriple {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            nonconstant: self.nonconstant,
            logder_cache: OnceLock::new(),
            root_cache: Default::default(),
        }
    }
}

impl MeroTriple {
    /// Validates and builds a triple. Exact coordinates are checked
    /// symbolically; triples with an oracle coordinate are checked by
    /// sampling (the rest is the oracle's contract).
    ///
    /// Constant points are allowed here (heights are still defined for
    /// them); operations that need nonconstancy reject them.
    pub fn new(a: FunctionModel, b: FunctionModel, c: FunctionModel) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::ZeroCoordinate);
        }
        let all_rational = a.is_rational() && b.is_rational() && c.is_rational();
        if all_rational {
            let (ra, rb, rc) = (
                a.as_rational().unwrap(),
                b.as_rational().unwrap(),
                c.as_rational().unwrap(),
            );
            if !(&(ra + rb) + rc).is_zero() {
                return Err(Error::SumNonzero);
            }
            let nonconstant = !(ra / rb).is_constant() || !(rb / rc).is_constant();
            Ok(MeroTriple::assemble(a, b, c, nonconstant))
        } else {
            check_sum_by_sampling(&a, &b, &c)?;
            let nonconstant = ratio_nonconstant_by_sampling(&a, &b, &c);
            Ok(MeroTriple::assemble(a, b, c, nonconstant))
        }
    }

    fn assemble(a: FunctionModel, b: FunctionModel, c: FunctionModel, nonconstant: bool) -> Self {
        MeroTriple {
            a,
            b,
            c,
            nonconstant,
            logder_cache: OnceLock::new(),
            root_cache: Default::default(),
        }
    }

    /// Builds the triple from exact rational coordinates.
    pub fn from_rationals(
        a: RationalFunction,
        b: RationalFunction,
        c: RationalFunction,
    ) -> Result<Self> {
        MeroTriple::new(
            FunctionModel::Rational(a),
            FunctionModel::Rational(b),
            FunctionModel::Rational(c),
        )
    }

    pub fn a(&self) -> &FunctionModel {
        &self.a
    }

    pub fn b(&self) -> &FunctionModel {
        &self.b
    }

    pub fn c(&self) -> &FunctionModel {
        &self.c
    }

    pub fn coords(&self) -> [&FunctionModel; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn is_exact(&self) -> bool {
        self.a.is_rational() && self.b.is_rational() && self.c.is_rational()
    }

    /// Exact rational coordinates, or an error for oracle-backed triples.
    pub fn exact_coords(&self) -> Result<[&RationalFunction; 3]> {
        match (
            self.a.as_rational(),
            self.b.as_rational(),
            self.c.as_rational(),
        ) {
            (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
            _ => Err(Error::OracleUnsupported("exact coordinate access")),
        }
    }

    /// True iff some coordinate ratio a/b, b/c, c/a is nonconstant.
    pub fn is_nonconstant(&self) -> bool {
        self.nonconstant
    }

    /// The scaled point (λa : λb : λc); exact coordinates only.
    pub fn scaled(&self, lambda: &RationalFunction) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroCoordinate);
        }
        let [a, b, c] = self.exact_coords()?;
        MeroTriple::from_rationals(a * lambda, b * lambda, c * lambda)
    }

    /// The logarithmic-derivative coordinates
    /// ((b/c)'/(b/c), (c/a)'/(c/a), (a/b)'/(a/b)), exact.
    ///
    /// The three coordinates sum to the zero function identically, since
    /// (b/c)(c/a)(a/b) = 1, and the result is the same projective point.
    /// Computed once per triple and cached.
    pub fn logder_triple(&self) -> Result<&MeroTriple> {
        if !self.nonconstant {
            return Err(Error::ConstantPoint);
        }
        let cached = self.logder_cache.get_or_init(|| {
            let [a, b, c] = self.exact_coords()?;
            let la = (b / c).log_derivative()?;
            let lb = (c / a).log_derivative()?;
            let lc = (a / b).log_derivative()?;
            Ok(Box::new(MeroTriple::from_rationals(la, lb, lc)?))
        });
        match cached {
            Ok(t) => Ok(t),
            Err(e) => Err(e.clone()),
        }
    }

    /// Zero/pole list of one coordinate (index 0, 1, 2); cached for rational
    /// coordinates, delegated to the oracle otherwise.
    pub fn coord_roots(
        &self,
        idx: usize,
        query_radius: f64,
        cfg: &NumericConfig,
    ) -> Result<Vec<SignedRoot>> {
        let coord = self.coords()[idx];
        if !coord.is_rational() {
            return signed_roots(coord, query_radius, cfg);
        }
        let cached = self.root_cache[idx].get_or_init(|| signed_roots(coord, query_radius, cfg));
        match cached {
            Ok(v) => Ok(v.clone()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Pointwise evaluators for the logarithmic-derivative coordinates;
    /// works for oracle-backed triples too.
    pub fn logder_value_fns(&self) -> Result<LogderTripleEval> {
        if !self.nonconstant {
            return Err(Error::ConstantPoint);
        }
        Ok(LogderTripleEval {
            a: self.a.logder_evaluator()?,
            b: self.b.logder_evaluator()?,
            c: self.c.logder_evaluator()?,
        })
    }
}

/// Evaluates the logder coordinates ((b/c)^ld, (c/a)^ld, (a/b)^ld) pointwise
/// from per-coordinate logarithmic derivatives.
#[derive(Clone)]
pub struct LogderTripleEval {
    a: LogderEval,
    b: LogderEval,
    c: LogderEval,
}

impl LogderTripleEval {
    pub fn eval(&self, z: Complex64) -> Result<[Complex64; 3]> {
        let la = self.a.eval(z)?;
        let lb = self.b.eval(z)?;
        let lc = self.c.eval(z)?;
        Ok([lb - lc, lc - la, la - lb])
    }
}

impl fmt::Display for MeroTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.a, self.b, self.c)
    }
}

/// True iff P and Q are the same projective point: all cross products
/// a_P b_Q - b_P a_Q, b_P c_Q - c_P b_Q, a_P c_Q - c_P a_Q vanish
/// identically. Exact rational triples only.
pub fn projective_equal(p: &MeroTriple, q: &MeroTriple) -> Result<bool> {
    let [pa, pb, pc] = p.exact_coords()?;
    let [qa, qb, qc] = q.exact_coords()?;
    let cross = |x: &RationalFunction, y: &RationalFunction, u: &RationalFunction, v: &RationalFunction| {
        (&(x * v) - &(y * u)).is_zero()
    };
    Ok(cross(pa, pb, qa, qb) && cross(pb, pc, qb, qc) && cross(pa, pc, qa, qc))
}

fn sample_points() -> Vec<Complex64> {
    // two circles off the common lattices
    let mut pts = Vec::new();
    for &r in &[0.7321f64, 1.6181] {
        for k in 0..4 {
            let theta = 0.41 + 2.0 * std::f64::consts::PI * (k as f64) / 4.0;
            pts.push(Complex64::from_polar(r, theta));
        }
    }
    pts
}

fn check_sum_by_sampling(a: &FunctionModel, b: &FunctionModel, c: &FunctionModel) -> Result<()> {
    let mut checked = 0;
    for z in sample_points() {
        let (va, vb, vc) = match (a.eval(z), b.eval(z), c.eval(z)) {
            (Ok(x), Ok(y), Ok(w)) => (x, y, w),
            _ => continue,
        };
        let scale = va.norm().max(vb.norm()).max(vc.norm()).max(1.0);
        if (va + vb + vc).norm() > 1e-8 * scale {
            return Err(Error::SumNonzero);
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::OracleContract(
            "could not sample coordinates to verify a+b+c=0".into(),
        ));
    }
    Ok(())
}

fn ratio_nonconstant_by_sampling(a: &FunctionModel, b: &FunctionModel, c: &FunctionModel) -> bool {
    let pairs = [(a, b), (b, c), (c, a)];
    for (f, g) in pairs {
        let mut first: Option<Complex64> = None;
        for z in sample_points() {
            let (vf, vg) = match (f.eval(z), g.eval(z)) {
                (Ok(x), Ok(y)) if y.norm() > 1e-12 => (x, y),
                _ => continue,
            };
            let ratio = vf / vg;
            match first {
                None => first = Some(ratio),
                Some(r0) => {
                    if (ratio - r0).norm() > 1e-9 * r0.norm().max(1.0) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// The built-in oracle triple (sin^2 z, cos^2 z, -1): zeros of sin^2 at k*pi
/// and of cos^2 at (k + 1/2)*pi, all of order 2; the third coordinate is the
/// exact constant -1.
pub fn sin_sq_cos_sq_triple() -> MeroTriple {
    use std::f64::consts::PI;
    let sin_sq = MeromorphicOracle::new(
        "sin^2",
        Box::new(|rho: f64| {
            let mut sites = Vec::new();
            let kmax = (rho / PI).ceil() as i64 + 1;
            for k in -kmax..=kmax {
                let x = k as f64 * PI;
                if x.abs() < rho {
                    sites.push(OracleSite {
                        location: Complex64::new(x, 0.0),
                        order: 2,
                    });
                }
            }
            sites
        }),
        Box::new(|z: Complex64| z.sin() * z.sin()),
        Box::new(|z: Complex64| (2.0 * z).sin()),
        (2, Complex64::new(1.0, 0.0)),
    )
    .expect("builtin oracle satisfies its own contract");

    let cos_sq = MeromorphicOracle::new(
        "cos^2",
        Box::new(|rho: f64| {
            let mut sites = Vec::new();
            let kmax = (rho / PI).ceil() as i64 + 1;
            for k in -kmax..=kmax {
                let x = (k as f64 + 0.5) * PI;
                if x.abs() < rho {
                    sites.push(OracleSite {
                        location: Complex64::new(x, 0.0),
                        order: 2,
                    });
                }
            }
            sites
        }),
        Box::new(|z: Complex64| z.cos() * z.cos()),
        Box::new(|z: Complex64| -(2.0 * z).sin()),
        (0, Complex64::new(1.0, 0.0)),
    )
    .expect("builtin oracle satisfies its own contract");

    MeroTriple::new(
        FunctionModel::Oracle(Arc::new(sin_sq)),
        FunctionModel::Oracle(Arc::new(cos_sq)),
        FunctionModel::Rational(RationalFunction::constant(GaussianRational::from_int(-1))),
    )
    .expect("sin^2 + cos^2 - 1 = 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den)).unwrap()
    }

    /// (z, -1, 1-z)
    fn anchor() -> MeroTriple {
        MeroTriple::from_rationals(rf(&[0, 1], &[1]), rf(&[-1], &[1]), rf(&[1, -1], &[1])).unwrap()
    }

    #[test]
    fn constructor_validates_sum() {
        let r = MeroTriple::from_rationals(rf(&[0, 1], &[1]), rf(&[1], &[1]), rf(&[1], &[1]));
        assert!(matches!(r, Err(Error::SumNonzero)));
    }

    #[test]
    fn constructor_rejects_zero_coordinate() {
        let r = MeroTriple::from_rationals(rf(&[0, 1], &[1]), rf(&[0, -1], &[1]), RationalFunction::zero());
        assert!(matches!(r, Err(Error::ZeroCoordinate)));
    }

    #[test]
    fn nonconstancy_flag() {
        assert!(anchor().is_nonconstant());
        let constant =
            MeroTriple::from_rationals(rf(&[1], &[1]), rf(&[1], &[1]), rf(&[-2], &[1])).unwrap();
        assert!(!constant.is_nonconstant());
        // (2z, z, -3z): all ratios constant
        let scaled =
            MeroTriple::from_rationals(rf(&[0, 2], &[1]), rf(&[0, 1], &[1]), rf(&[0, -3], &[1]))
                .unwrap();
        assert!(!scaled.is_nonconstant());
    }

    #[test]
    fn logder_triple_of_anchor() {
        let p = anchor();
        let l = p.logder_triple().unwrap();
        let [la, lb, lc] = l.exact_coords().unwrap();
        // ((b/c)^ld, (c/a)^ld, (a/b)^ld) = (1/(1-z), -1/(z(1-z)), 1/z)
        assert_eq!(*la, rf(&[-1], &[-1, 1]));
        assert_eq!(*lb, rf(&[1], &[0, -1, 1]));
        assert_eq!(*lc, rf(&[1], &[0, 1]));
        // coordinates sum to the zero function exactly
        let sum = &(la + lb) + lc;
        assert!(sum.is_zero());
    }

    #[test]
    fn logder_triple_rejects_constant_point() {
        let constant =
            MeroTriple::from_rationals(rf(&[1], &[1]), rf(&[1], &[1]), rf(&[-2], &[1])).unwrap();
        assert!(matches!(constant.logder_triple(), Err(Error::ConstantPoint)));
    }

    #[test]
    fn height_to_radical_identity_on_anchor() {
        let p = anchor();
        let l = p.logder_triple().unwrap();
        assert!(projective_equal(&p, l).unwrap());
    }

    #[test]
    fn projective_equal_examples() {
        let p = anchor();
        // (z : 1 : -1-z) vs (2z : 2 : -2-2z) -> equal
        let q1 = MeroTriple::from_rationals(rf(&[0, 1], &[1]), rf(&[1], &[1]), rf(&[-1, -1], &[1]))
            .unwrap();
        let q2 = MeroTriple::from_rationals(rf(&[0, 2], &[1]), rf(&[2], &[1]), rf(&[-2, -2], &[1]))
            .unwrap();
        assert!(projective_equal(&q1, &q2).unwrap());
        // (z : -1 : 1-z) vs (z : 1 : -1-z) -> not equal
        assert!(!projective_equal(&p, &q1).unwrap());
    }

    #[test]
    fn mixed_triple_sum_checked_by_sampling() {
        let t = sin_sq_cos_sq_triple();
        let (a, b) = (t.a().clone(), t.b().clone());
        // (sin^2, cos^2, -2) misses the line a + b + c = 0
        let bad = MeroTriple::new(
            a,
            b,
            FunctionModel::Rational(RationalFunction::constant(GaussianRational::from_int(-2))),
        );
        assert!(matches!(bad, Err(Error::SumNonzero)));
    }

    #[test]
    fn builtin_oracle_triple_is_consistent() {
        let t = sin_sq_cos_sq_triple();
        assert!(t.is_nonconstant());
        assert!(!t.is_exact());
        // sites of sin^2 inside rho = 4: -pi, 0, pi
        let sites = match t.a() {
            FunctionModel::Oracle(o) => o.sites_in_disk(4.0),
            _ => unreachable!(),
        };
        assert_eq!(sites.len(), 3);
        assert!(sites.iter().all(|s| s.order == 2));
    }

    #[test]
    fn logder_values_of_builtin_triple_sum_to_zero() {
        let t = sin_sq_cos_sq_triple();
        let ld = t.logder_value_fns().unwrap();
        let z = Complex64::new(0.9, 0.4);
        let [la, lb, lc] = ld.eval(z).unwrap();
        assert!((la + lb + lc).norm() < 1e-12);
        // (b/c)^ld = -2 tan z
        let expect = -2.0 * z.tan();
        assert!((la - expect).norm() < 1e-10);
    }
}
