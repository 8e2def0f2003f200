//! Heights, radicals and the abc inequality for meromorphic triples.
//!
//! The height of P = (a : b : c) at radius rho is
//!
//! ```text
//! h(P, rho) = sum_{|x| < rho} max_i { -ord(f_i, x) log(rho/|x|) }
//!           + ∮ log sqrt(|a|^2 + |b|^2 + |c|^2) dz/(2 pi i z)
//!           - log sqrt(|a_m|^2 + |b_m|^2 + |c_m|^2),
//! ```
//!
//! with m the minimum coordinate order at the origin. The incomplete radical
//! sums site degrees where the coordinate orders differ; the archimedean
//! radical is the circle-integral part of the height of the
//! logarithmic-derivative coordinates minus their Laurent term. The
//! Poisson–Jensen formula makes the height independent of the choice of
//! coordinates, and h <= r_na + r_arch for every rho >= 1.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::quadrature::{
    circle_mean, circle_point, coord_singularity_distance, require_guard, singularity_distance,
};
use crate::ratfun::{FloatRational, RationalFunction};
use crate::roots::{sites_for_coords, signed_roots, ValuationSite};
use crate::triple::{FunctionModel, MeroTriple};

/// Per-site ledger entry: contribution to the height and to the radical.
#[derive(Debug, Clone)]
pub struct SiteContribution {
    pub site: ValuationSite,
    pub height_term: f64,
    pub radical_term: f64,
}

/// The three pieces of the height: total = nonarch + arch_integral - h_inf.
#[derive(Debug, Clone)]
pub struct HeightBreakdown {
    pub rho: f64,
    pub sites: Vec<SiteContribution>,
    pub nonarch: f64,
    pub arch_integral: f64,
    pub h_inf: f64,
    pub total: f64,
    pub quad_error: f64,
}

fn fm_zero() -> FunctionModel {
    FunctionModel::Rational(RationalFunction::zero())
}

fn fm_one() -> FunctionModel {
    FunctionModel::Rational(RationalFunction::one())
}

/// h_inf = log sqrt(sum over coordinates |coeff of z^m|^2), m the minimum
/// coordinate order at the origin. Exact when all coordinates are rational.
fn h_inf_of_coords(coords: [&FunctionModel; 3]) -> Result<f64> {
    let live: Vec<&FunctionModel> = coords.iter().copied().filter(|f| !f.is_zero()).collect();
    let mut m = i64::MAX;
    for f in &live {
        m = m.min(f.ord_at_origin()?);
    }
    if live.iter().all(|f| f.is_rational()) {
        let mut s = BigRational::zero();
        for f in &live {
            let c = f.as_rational().unwrap().laurent_coeff_at(m);
            s += c.norm_sqr();
        }
        Ok(0.5 * s.to_f64().expect("finite").ln())
    } else {
        let mut s = 0.0;
        for f in &live {
            s += f.laurent_coeff_at(m)?.norm_sqr();
        }
        Ok(0.5 * s.ln())
    }
}

/// Height of the point with the given coordinates (zero coordinates allowed
/// for degenerate points like (f : 1 : 0); they contribute nothing).
fn height_of_coords(
    coords: [&FunctionModel; 3],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<HeightBreakdown> {
    if rho < 1.0 {
        return Err(Error::RhoBelowOne(rho));
    }
    let live: Vec<&FunctionModel> = coords.iter().copied().filter(|f| !f.is_zero()).collect();
    let dist = coord_singularity_distance(&live, rho, cfg)?;
    require_guard(dist, rho, cfg)?;

    let sites = sites_for_coords(coords, rho, cfg)?;
    let zero_mask = [coords[0].is_zero(), coords[1].is_zero(), coords[2].is_zero()];
    let mut ledger = Vec::with_capacity(sites.len());
    let mut nonarch = 0.0;
    for site in sites {
        let max_neg_ord = site
            .orders
            .iter()
            .zip(zero_mask.iter())
            .filter(|(_, &z)| !z)
            .map(|(&o, _)| -o)
            .max()
            .unwrap_or(0);
        let height_term = site.degree * max_neg_ord as f64;
        let radical_term = if site.orders_all_equal() { 0.0 } else { site.degree };
        nonarch += height_term;
        ledger.push(SiteContribution {
            site,
            height_term,
            radical_term,
        });
    }

    let evals: Vec<_> = live.iter().map(|f| f.value_evaluator()).collect();
    let out = circle_mean(
        |theta| {
            let z = circle_point(rho, theta);
            let mut s = 0.0;
            for e in &evals {
                s += e.eval(z)?.norm_sqr();
            }
            Ok(0.5 * s.ln())
        },
        rho,
        cfg.quad_tol,
        cfg,
    )?;

    let h_inf = h_inf_of_coords(coords)?;
    Ok(HeightBreakdown {
        rho,
        sites: ledger,
        nonarch,
        arch_integral: out.value,
        h_inf,
        total: nonarch + out.value - h_inf,
        quad_error: out.achieved_error,
    })
}

/// Height of a triple on the line a + b + c = 0.
pub fn height(p: &MeroTriple, rho: f64, cfg: &NumericConfig) -> Result<HeightBreakdown> {
    if rho < 1.0 {
        return Err(Error::RhoBelowOne(rho));
    }
    let dist = singularity_distance(p, rho, cfg)?;
    require_guard(dist, rho, cfg)?;
    height_of_coords([p.a(), p.b(), p.c()], rho, cfg)
}

/// Height of a single function: h(f, rho) = h((f : 1 : 0), rho).
pub fn height_fn(f: &FunctionModel, rho: f64, cfg: &NumericConfig) -> Result<HeightBreakdown> {
    height_of_coords([f, &fm_one(), &fm_zero()], rho, cfg)
}

/// The three terms of the Poisson–Jensen formula and their sum, which is
/// identically zero.
#[derive(Debug, Clone)]
pub struct PjReport {
    pub rho: f64,
    pub nonarch: f64,
    pub circle: f64,
    pub v_inf: f64,
    pub residual: f64,
    pub quad_error: f64,
}

/// Poisson–Jensen residual: sum_{|x|<rho} v_x(f, rho) + ∮ log|f| - v_inf(f).
pub fn pj_residual(f: &FunctionModel, rho: f64, cfg: &NumericConfig) -> Result<PjReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction("Poisson-Jensen residual"));
    }
    let dist = coord_singularity_distance(&[f], rho, cfg)?;
    require_guard(dist, rho, cfg)?;

    let zero = fm_zero();
    let sites = sites_for_coords([f, &zero, &zero], rho, cfg)?;
    let nonarch: f64 = sites
        .iter()
        .map(|s| -(s.orders[0] as f64) * s.degree)
        .sum();

    let eval = f.value_evaluator();
    let out = circle_mean(
        |theta| {
            let z = circle_point(rho, theta);
            Ok(eval.eval(z)?.norm().ln())
        },
        rho,
        cfg.quad_tol,
        cfg,
    )?;

    let v_inf = match f.as_rational() {
        Some(rf) => {
            let (_, c) = rf.laurent_leading()?;
            0.5 * c.norm_sqr().to_f64().expect("finite").ln()
        }
        None => f.laurent_leading()?.1.norm().ln(),
    };
    let residual = nonarch + out.value - v_inf;
    Ok(PjReport {
        rho,
        nonarch,
        circle: out.value,
        v_inf,
        residual,
        quad_error: out.achieved_error,
    })
}

/// The incomplete radical r_na and its site ledger.
#[derive(Debug, Clone)]
pub struct RadicalBreakdown {
    pub value: f64,
    pub sites: Vec<ValuationSite>,
}

/// r_na(P, rho): sum of site degrees where the coordinate orders are not all
/// equal. No quadrature is involved and scaling the coordinates leaves the
/// value unchanged.
pub fn incomplete_radical(p: &MeroTriple, rho: f64, cfg: &NumericConfig) -> Result<RadicalBreakdown> {
    let sites = sites_for_coords([p.a(), p.b(), p.c()], rho, cfg)?;
    let value = sites
        .iter()
        .filter(|s| !s.orders_all_equal())
        .map(|s| s.degree)
        .sum();
    Ok(RadicalBreakdown { value, sites })
}

/// The archimedean radical: circle integral of the logder-coordinate height
/// density minus the Laurent term of the logder coordinates.
#[derive(Debug, Clone)]
pub struct ArchRadicalReport {
    pub value: f64,
    pub integral: f64,
    pub h_inf: f64,
    pub quad_error: f64,
}

enum LogderCoords {
    /// Exact logder triple (all-rational P).
    Exact([FloatRational; 3]),
    /// Pointwise differences of per-coordinate logarithmic derivatives.
    Sampled(crate::triple::LogderTripleEval),
}

impl LogderCoords {
    fn eval(&self, z: Complex64) -> Result<[Complex64; 3]> {
        match self {
            LogderCoords::Exact([a, b, c]) => Ok([a.eval(z)?, b.eval(z)?, c.eval(z)?]),
            LogderCoords::Sampled(e) => e.eval(z),
        }
    }
}

/// h_inf of the logder coordinates for oracle-backed triples, from the
/// coordinate orders at the origin: when the orders differ the logder
/// coordinates have simple poles with residues equal to order differences;
/// when they are all zero the values at the origin are used directly.
fn logder_h_inf_from_orders(p: &MeroTriple, cfg_eval: &LogderCoords) -> Result<f64> {
    let alpha = p.a().ord_at_origin()?;
    let beta = p.b().ord_at_origin()?;
    let gamma = p.c().ord_at_origin()?;
    if !(alpha == beta && beta == gamma) {
        let ra = (beta - gamma) as f64;
        let rb = (gamma - alpha) as f64;
        let rc = (alpha - beta) as f64;
        return Ok(0.5 * (ra * ra + rb * rb + rc * rc).ln());
    }
    if alpha != 0 {
        return Err(Error::OracleUnsupported(
            "logder Laurent data at the origin (equal nonzero coordinate orders)",
        ));
    }
    let [va, vb, vc] = cfg_eval.eval(Complex64::new(0.0, 0.0))?;
    let s = va.norm_sqr() + vb.norm_sqr() + vc.norm_sqr();
    if s < 1e-24 {
        return Err(Error::OracleUnsupported(
            "logder Laurent data at the origin (all logder values vanish)",
        ));
    }
    Ok(0.5 * s.ln())
}

/// r_arch(P, rho). Independent of the choice of coordinates for P, and may
/// be negative. At every quadrature node the bound
/// |a|^2+|b|^2+|c|^2 <= 2(1+|a|^2)(1+|b|^2) for c = -a-b is asserted.
pub fn archimedean_radical(
    p: &MeroTriple,
    rho: f64,
    cfg: &NumericConfig,
) -> Result<ArchRadicalReport> {
    if !p.is_nonconstant() {
        return Err(Error::ConstantPoint);
    }
    let dist = singularity_distance(p, rho, cfg)?;
    require_guard(dist, rho, cfg)?;

    let (coords, h_inf) = if p.is_exact() {
        let logder = p.logder_triple()?;
        let [la, lb, lc] = logder.exact_coords()?;
        let h_inf = h_inf_of_coords([logder.a(), logder.b(), logder.c()])?;
        (
            LogderCoords::Exact([la.to_float(), lb.to_float(), lc.to_float()]),
            h_inf,
        )
    } else {
        let sampled = LogderCoords::Sampled(p.logder_value_fns()?);
        let h_inf = logder_h_inf_from_orders(p, &sampled)?;
        (sampled, h_inf)
    };

    let out = circle_mean(
        |theta| {
            let z = circle_point(rho, theta);
            let [va, vb, vc] = coords.eval(z)?;
            let (na, nb, nc) = (va.norm_sqr(), vb.norm_sqr(), vc.norm_sqr());
            let lhs = na + nb + nc;
            let rhs = 2.0 * (1.0 + na) * (1.0 + nb);
            assert!(
                !(lhs.is_finite() && rhs.is_finite()) || lhs <= rhs * (1.0 + 1e-9),
                "archimedean bound violated at a quadrature node: \
                 |a|^2+|b|^2+|c|^2 = {lhs} > 2(1+|a|^2)(1+|b|^2) = {rhs}"
            );
            Ok(0.5 * lhs.ln())
        },
        rho,
        cfg.quad_tol,
        cfg,
    )?;

    Ok(ArchRadicalReport {
        value: out.value - h_inf,
        integral: out.value,
        h_inf,
        quad_error: out.achieved_error,
    })
}

/// Full report of the inequality h(P, rho) <= r(P, rho) = r_na + r_arch.
#[derive(Debug, Clone)]
pub struct AbcReport {
    pub rho: f64,
    pub height: HeightBreakdown,
    pub r_na: f64,
    pub arch: ArchRadicalReport,
    pub r: f64,
    pub slack: f64,
    pub quad_error: f64,
}

/// Computes h, r_na, r_arch and slack = r - h at radius rho >= 1.
///
/// For points with pairwise-coprime polynomial coordinates whose
/// first-order Wronskian a'b - ab' has no zero inside the disk, the slack
/// vanishes: every site contributes equally to height and radical. Joint
/// interior zeros of the logder coordinates (zeros of the Wronskian away
/// from the sites of P) make the slack strictly positive.
pub fn formal_abc_report(p: &MeroTriple, rho: f64, cfg: &NumericConfig) -> Result<AbcReport> {
    if !p.is_nonconstant() {
        return Err(Error::ConstantPoint);
    }
    if rho < 1.0 {
        return Err(Error::RhoBelowOne(rho));
    }
    let h = height(p, rho, cfg)?;
    let r_na: f64 = h.sites.iter().map(|s| s.radical_term).sum();
    let arch = archimedean_radical(p, rho, cfg)?;
    let r = r_na + arch.value;
    let slack = r - h.total;
    let quad_error = h.quad_error + arch.quad_error;
    Ok(AbcReport {
        rho,
        r_na,
        r,
        slack,
        quad_error,
        height: h,
        arch,
    })
}

/// Proximity value m(f, rho) with its quadrature error.
#[derive(Debug, Clone)]
pub struct ProximityReport {
    pub value: f64,
    pub quad_error: f64,
}

/// m(f, rho) = ∮ log sqrt(1 + |f|^2) dz/(2 pi i z).
pub fn proximity(f: &FunctionModel, rho: f64, cfg: &NumericConfig) -> Result<ProximityReport> {
    if f.is_zero() {
        return Ok(ProximityReport {
            value: 0.0,
            quad_error: 0.0,
        });
    }
    // only poles of f make the integrand singular
    let mut dist = f64::INFINITY;
    if !f.is_rational() {
        dist = 0.5 * rho;
    }
    for root in signed_roots(f, 1.5 * rho, cfg)? {
        if root.order < 0 {
            dist = dist.min((root.location.norm() - rho).abs());
        }
    }
    require_guard(dist, rho, cfg)?;
    let eval = f.value_evaluator();
    let out = circle_mean(
        |theta| {
            let z = circle_point(rho, theta);
            Ok(0.5 * (1.0 + eval.eval(z)?.norm_sqr()).ln())
        },
        rho,
        cfg.quad_tol,
        cfg,
    )?;
    Ok(ProximityReport {
        value: out.value,
        quad_error: out.achieved_error,
    })
}

/// Numeric margin of the lemma on the logarithmic derivative.
#[derive(Debug, Clone)]
pub struct LogderLemmaReport {
    /// m(f'/f, rho)
    pub m: f64,
    /// h(f, rho) = h((f : 1 : 0), rho)
    pub h: f64,
    /// m - log(max(h, e))
    pub margin: f64,
    pub quad_error: f64,
}

/// Computes m((f)^logder, rho), h(f, rho) and the margin
/// m - log(max(h, e)). The lemma bounds m by log h + O(log log h) away from
/// an exceptional set of radii.
pub fn logder_lemma_margin(
    f: &FunctionModel,
    rho: f64,
    cfg: &NumericConfig,
) -> Result<LogderLemmaReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction("logarithmic derivative"));
    }
    if let Some(rf) = f.as_rational() {
        if rf.is_constant() {
            return Err(Error::ConstantPoint);
        }
    }
    let m = match f {
        FunctionModel::Rational(rf) => proximity(
            &FunctionModel::Rational(rf.log_derivative()?),
            rho,
            cfg,
        )?,
        FunctionModel::Oracle(_) => {
            // all sites of f are simple poles of f'/f
            let mut dist = 0.5 * rho;
            for root in signed_roots(f, 1.5 * rho, cfg)? {
                dist = dist.min((root.location.norm() - rho).abs());
            }
            require_guard(dist, rho, cfg)?;
            let ld = f.logder_evaluator()?;
            let out = circle_mean(
                |theta| {
                    let z = circle_point(rho, theta);
                    Ok(0.5 * (1.0 + ld.eval(z)?.norm_sqr()).ln())
                },
                rho,
                cfg.quad_tol,
                cfg,
            )?;
            ProximityReport {
                value: out.value,
                quad_error: out.achieved_error,
            }
        }
    };
    let h = height_fn(f, rho, cfg)?;
    let margin = m.value - h.total.max(std::f64::consts::E).ln();
    Ok(LogderLemmaReport {
        m: m.value,
        h: h.total,
        margin,
        quad_error: m.quad_error + h.quad_error,
    })
}

/// One row of a radius scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub rho: f64,
    pub masked: bool,
    pub h: Option<f64>,
    pub r_na: Option<f64>,
    pub r_arch: Option<f64>,
    pub r: Option<f64>,
    pub slack: Option<f64>,
    /// 2 log h~ + C log log h~ with h~ = max(h, e^2)
    pub bound: Option<f64>,
    pub exceeds: bool,
    /// Summed achieved quadrature error of the row's integrals.
    pub quad_error: Option<f64>,
}

/// Scan summary: rows plus the measure of the empirical exceptional set.
#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub rho_min: f64,
    pub rho_max: f64,
    pub steps: usize,
    pub c_coeff: f64,
    /// Grid cell length (rho_max - rho_min)/steps.
    pub cell_length: f64,
    pub rows: Vec<ScanRow>,
    /// Total length of cells whose row exceeds the bound or was masked.
    pub exceptional_measure: f64,
    pub masked_count: usize,
    pub exceed_count: usize,
    /// Largest per-row quadrature error among unmasked rows.
    pub max_quad_error: f64,
}

/// Scans rho over a uniform grid, reporting h, r_na, r_arch and the bound
/// 2 log h~ + C log log h~ per radius. Radii where the circle guard refuses
/// (or any computation fails) are masked and counted toward the empirical
/// exceptional measure, standing in for the finite-length exceptional set.
pub fn rho_scan(
    p: &MeroTriple,
    rho_min: f64,
    rho_max: f64,
    steps: usize,
    c_coeff: f64,
    workers: usize,
    cfg: &NumericConfig,
) -> Result<ScanSummary> {
    crate::quadrature::check_radius(rho_min)?;
    crate::quadrature::check_radius(rho_max)?;
    if rho_min < 1.0 {
        return Err(Error::RhoBelowOne(rho_min));
    }
    if rho_max < rho_min || steps == 0 {
        return Err(Error::InvalidGrid(format!(
            "need rho_min <= rho_max and steps >= 1 (got [{rho_min}, {rho_max}] x {steps})"
        )));
    }
    if !p.is_nonconstant() {
        return Err(Error::ConstantPoint);
    }
    let grid: Vec<f64> = if steps == 1 {
        vec![rho_min]
    } else {
        (0..steps)
            .map(|i| rho_min + (rho_max - rho_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let cell_length = (rho_max - rho_min) / steps as f64;

    let row_for = |&rho: &f64| -> ScanRow {
        let attempt = (|| -> Result<(f64, f64, f64, f64)> {
            let report = formal_abc_report(p, rho, cfg)?;
            Ok((
                report.height.total,
                report.r_na,
                report.arch.value,
                report.quad_error,
            ))
        })();
        match attempt {
            Ok((h, r_na, r_arch, quad_error)) => {
                let h_reg = h.max(std::f64::consts::E * std::f64::consts::E);
                let bound = 2.0 * h_reg.ln() + c_coeff * h_reg.ln().ln();
                ScanRow {
                    rho,
                    masked: false,
                    h: Some(h),
                    r_na: Some(r_na),
                    r_arch: Some(r_arch),
                    r: Some(r_na + r_arch),
                    slack: Some(r_na + r_arch - h),
                    bound: Some(bound),
                    exceeds: r_arch > bound,
                    quad_error: Some(quad_error),
                }
            }
            Err(_) => ScanRow {
                rho,
                masked: true,
                h: None,
                r_na: None,
                r_arch: None,
                r: None,
                slack: None,
                bound: None,
                exceeds: false,
                quad_error: None,
            },
        }
    };

    let workers = workers.max(1).min(grid.len());
    let rows: Vec<ScanRow> = if workers == 1 {
        grid.iter().map(row_for).collect()
    } else {
        let mut rows: Vec<Option<ScanRow>> = vec![None; grid.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let grid = &grid;
                    let row_for = &row_for;
                    scope.spawn(move || {
                        let mut mine = Vec::new();
                        let mut i = w;
                        while i < grid.len() {
                            mine.push((i, row_for(&grid[i])));
                            i += workers;
                        }
                        mine
                    })
                })
                .collect();
            for handle in handles {
                for (i, row) in handle.join().expect("scan worker") {
                    rows[i] = Some(row);
                }
            }
        });
        rows.into_iter().map(|r| r.expect("all rows filled")).collect()
    };

    let masked_count = rows.iter().filter(|r| r.masked).count();
    let exceed_count = rows.iter().filter(|r| r.exceeds).count();
    let exceptional_measure = cell_length * (masked_count + exceed_count) as f64;
    let max_quad_error = rows
        .iter()
        .filter_map(|r| r.quad_error)
        .fold(0.0f64, f64::max);
    Ok(ScanSummary {
        rho_min,
        rho_max,
        steps,
        c_coeff,
        cell_length,
        rows,
        exceptional_measure,
        masked_count,
        exceed_count,
        max_quad_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_mero_triple, parse_rational};
    use crate::triple::sin_sq_cos_sq_triple;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    fn anchor() -> MeroTriple {
        parse_mero_triple("z", "-1", "1-z").unwrap()
    }

    /// mean over |z| = 2 of (1/2) log(|z|^2 + 1 + |1-z|^2), in closed form
    fn anchor_arch() -> f64 {
        0.5 * ((10.0 + 84f64.sqrt()) / 2.0).ln()
    }

    fn fm(text: &str) -> FunctionModel {
        FunctionModel::Rational(parse_rational(text).unwrap())
    }

    #[test]
    fn pj_examples() {
        // f = z at rho 2: (-log 2) + (log 2) - 0
        let r = pj_residual(&fm("z"), 2.0, &cfg()).unwrap();
        assert!((r.nonarch + 2f64.ln()).abs() < 1e-12);
        assert!((r.circle - 2f64.ln()).abs() < 1e-10);
        assert!(r.v_inf.abs() < 1e-12);
        assert!(r.residual.abs() < 1e-10);

        // f = 2z^2 at rho 3: (-2 log 3) + (log 2 + 2 log 3) - log 2
        let r = pj_residual(&fm("2*z^2"), 3.0, &cfg()).unwrap();
        assert!((r.nonarch + 2.0 * 3f64.ln()).abs() < 1e-12);
        assert!((r.v_inf - 2f64.ln()).abs() < 1e-12);
        assert!(r.residual.abs() < 1e-9);

        // f = z - 1/2 at rho 1: (-log 2) + 0 + log 2
        let r = pj_residual(&fm("z - 1/2"), 1.0, &cfg()).unwrap();
        assert!((r.nonarch + 2f64.ln()).abs() < 1e-12);
        assert!(r.circle.abs() < 1e-10);
        assert!((r.v_inf + 2f64.ln()).abs() < 1e-12);
        assert!(r.residual.abs() < 1e-9);
    }

    #[test]
    fn height_of_single_function_z() {
        // (z : 1 : 0) at rho 2: constant integrand log sqrt(5)
        let h = height_fn(&fm("z"), 2.0, &cfg()).unwrap();
        assert!(h.nonarch.abs() < 1e-12);
        assert!((h.arch_integral - 0.5 * 5f64.ln()).abs() < 1e-10);
        assert!(h.h_inf.abs() < 1e-12);
        assert!((h.total - 0.5 * 5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn height_of_anchor_closed_form() {
        let h = height(&anchor(), 2.0, &cfg()).unwrap();
        assert!(h.nonarch.abs() < 1e-12);
        assert!((h.arch_integral - anchor_arch()).abs() < 1e-9);
        assert!((h.h_inf - 0.5 * 2f64.ln()).abs() < 1e-12);
        let expect = anchor_arch() - 0.5 * 2f64.ln();
        assert!((h.total - expect).abs() < 1e-9, "h = {}, expect {expect}", h.total);
    }

    #[test]
    fn height_is_coordinate_invariant() {
        let p = anchor();
        let lambda = parse_rational("(z+3)/2").unwrap();
        let q = p.scaled(&lambda).unwrap();
        let hp = height(&p, 2.0, &cfg()).unwrap();
        let hq = height(&q, 2.0, &cfg()).unwrap();
        assert!(
            (hp.total - hq.total).abs() < 1e-8,
            "h(P) = {}, h(lambda P) = {}",
            hp.total,
            hq.total
        );
        // the local pieces DO depend on the choice of coordinates
        assert!((hp.arch_integral - hq.arch_integral).abs() > 0.1);
        // the breakdown reassembles to the total exactly
        assert_eq!(hp.total, hp.nonarch + hp.arch_integral - hp.h_inf);
    }

    #[test]
    fn height_invariant_under_random_rational_scalings() {
        use rand::rngs::SmallRng;
        use rand::{Rng, SeedableRng};
        let mut rng = SmallRng::seed_from_u64(17);
        let p = parse_mero_triple("z^2-2i", "1-z", "z-z^2+2i-1").unwrap();
        let rho = 3.3;
        let h = height(&p, rho, &cfg()).unwrap().total;
        let mut tested = 0;
        while tested < 8 {
            let num = crate::poly::Polynomial::new(
                (0..=rng.gen_range(0..=2usize))
                    .map(|_| crate::gaussian::GaussianRational::from_int(rng.gen_range(-4i64..=4)))
                    .collect(),
            );
            let den = crate::poly::Polynomial::new(
                (0..=rng.gen_range(0..=1usize))
                    .map(|_| crate::gaussian::GaussianRational::from_int(rng.gen_range(-4i64..=4)))
                    .collect(),
            );
            if num.is_zero() || den.is_zero() {
                continue;
            }
            let lambda = crate::ratfun::RationalFunction::new(num, den).unwrap();
            if lambda.is_zero() {
                continue;
            }
            let q = p.scaled(&lambda).unwrap();
            let hq = match height(&q, rho, &cfg()) {
                Ok(h) => h.total,
                // lambda may park a root on the circle; skip those choices
                Err(_) => continue,
            };
            assert!(
                (h - hq).abs() < 1e-7,
                "lambda = {lambda}: h = {h}, scaled = {hq}"
            );
            // r_na and r_arch are coordinate-invariant too: r_na exactly,
            // and the logder coordinates are literally unchanged by scaling
            let r_p = incomplete_radical(&p, rho, &cfg()).unwrap().value;
            let r_q = incomplete_radical(&q, rho, &cfg()).unwrap().value;
            assert!((r_p - r_q).abs() < 1e-9);
            let a_p = archimedean_radical(&p, rho, &cfg()).unwrap().value;
            let a_q = archimedean_radical(&q, rho, &cfg()).unwrap().value;
            assert!((a_p - a_q).abs() < 1e-7);
            tested += 1;
        }
    }

    #[test]
    fn height_requires_rho_at_least_one() {
        assert!(matches!(
            height(&anchor(), 0.5, &cfg()),
            Err(Error::RhoBelowOne(_))
        ));
    }

    #[test]
    fn incomplete_radical_examples() {
        let r = incomplete_radical(&anchor(), 2.0, &cfg()).unwrap();
        assert!((r.value - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(r.sites.len(), 2);

        // rho = 1: origin degree log 1 = 0, x = 1 on the circle is excluded
        let r = incomplete_radical(&anchor(), 1.0, &cfg()).unwrap();
        assert_eq!(r.value, 0.0);

        // scaling by (z - w) leaves r_na unchanged (all-equal site contributes 0)
        let scaled = anchor().scaled(&parse_rational("z - 1/2").unwrap()).unwrap();
        let rs = incomplete_radical(&scaled, 2.0, &cfg()).unwrap();
        assert!((rs.value - r_of(&anchor(), 2.0)).abs() < 1e-12);
    }

    fn r_of(p: &MeroTriple, rho: f64) -> f64 {
        incomplete_radical(p, rho, &cfg()).unwrap().value
    }

    #[test]
    fn radical_nonnegative_and_nondecreasing() {
        let p = anchor();
        let mut last = 0.0;
        for rho in [1.0, 1.3, 2.0, 5.0, 9.4, 20.0] {
            let v = r_of(&p, rho);
            assert!(v >= 0.0);
            assert!(v + 1e-12 >= last, "r_na decreased at rho = {rho}");
            last = v;
        }
    }

    #[test]
    fn archimedean_radical_of_anchor() {
        let a = archimedean_radical(&anchor(), 2.0, &cfg()).unwrap();
        // mean splits as the anchor arch integral minus two Jensen means log 2
        let integral = anchor_arch() - 2.0 * 2f64.ln();
        assert!((a.integral - integral).abs() < 1e-9);
        assert!((a.h_inf - 0.5 * 2f64.ln()).abs() < 1e-12);
        let expect = integral - 0.5 * 2f64.ln();
        assert!((a.value - expect).abs() < 1e-9);
        // numerically about -0.60289
        assert!((a.value + 0.60289).abs() < 1e-4);
    }

    #[test]
    fn archimedean_radical_scale_invariant() {
        let p = anchor();
        let five = parse_rational("5").unwrap();
        let q = p.scaled(&five).unwrap();
        let ap = archimedean_radical(&p, 2.0, &cfg()).unwrap();
        let aq = archimedean_radical(&q, 2.0, &cfg()).unwrap();
        // the logder coordinates are identical, so values match exactly
        assert_eq!(ap.value, aq.value);
    }

    #[test]
    fn logder_h_inf_orders_rule_matches_exact_computation() {
        // for the anchor the exact route and the order-residue rule agree
        let p = anchor();
        let logder = p.logder_triple().unwrap();
        let exact = h_inf_of_coords([logder.a(), logder.b(), logder.c()]).unwrap();
        // orders at 0: (1, 0, 0) -> residues (0, -1, 1)
        let rule = 0.5 * 2f64.ln();
        assert!((exact - rule).abs() < 1e-12);
    }

    #[test]
    fn formal_abc_anchor_slack_is_zero() {
        let r = formal_abc_report(&anchor(), 2.0, &cfg()).unwrap();
        assert!((r.height.total - (anchor_arch() - 0.5 * 2f64.ln())).abs() < 1e-9);
        assert!((r.r_na - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(r.slack.abs() < 1e-8, "slack = {}", r.slack);
        assert!((r.r - (r.r_na + r.arch.value)).abs() == 0.0);
    }

    #[test]
    fn formal_abc_at_rho_one_refuses_for_anchor() {
        // the logder coordinates of (z, -1, 1-z) have a pole at x = 1, which
        // sits on the circle |z| = 1: the guard refuses and the caller must
        // perturb rho
        let r = formal_abc_report(&anchor(), 1.0, &cfg());
        assert!(matches!(r, Err(Error::CircleGuard { .. })), "got {r:?}");
        // slightly off the exceptional radius everything works
        let r = formal_abc_report(&anchor(), 1.01, &cfg()).unwrap();
        assert!(r.slack >= -1e-6);
    }

    #[test]
    fn formal_abc_rejects_constant_points() {
        let constant = MeroTriple::from_rationals(
            parse_rational("1").unwrap(),
            parse_rational("1").unwrap(),
            parse_rational("-2").unwrap(),
        )
        .unwrap();
        assert!(matches!(
            formal_abc_report(&constant, 2.0, &cfg()),
            Err(Error::ConstantPoint)
        ));
    }

    #[test]
    fn strict_slack_from_wronskian_zero() {
        // W = a'b - ab' = z^2 - 6z - 1 has the root 3 - sqrt(10) inside the
        // disk; the logder coordinates vanish jointly there, so the slack is
        // strictly positive and equals log(rho / |3 - sqrt(10)|)
        let p = parse_mero_triple("z^2+1", "z-3", "-z^2-z+2").unwrap();
        let rho = 2.5;
        let report = formal_abc_report(&p, rho, &cfg()).unwrap();
        let w_root = 10f64.sqrt() - 3.0;
        let predicted = (rho / w_root).ln();
        assert!(
            (report.slack - predicted).abs() < 1e-7,
            "slack = {}, predicted = {predicted}",
            report.slack
        );
        assert!(report.slack > 2.7);
    }

    #[test]
    fn proximity_examples() {
        let p = proximity(&fm("z"), 2.0, &cfg()).unwrap();
        assert!((p.value - 0.5 * 5f64.ln()).abs() < 1e-10);
        let p = proximity(&fm("1/z"), 2.0, &cfg()).unwrap();
        assert!((p.value - 0.5 * (5.0f64 / 4.0).ln()).abs() < 1e-10);
        let p = proximity(&fm("0"), 2.0, &cfg()).unwrap();
        assert_eq!(p.value, 0.0);
    }

    #[test]
    fn single_function_height_splits_into_counting_and_proximity() {
        use rand::rngs::SmallRng;
        use rand::{Rng, SeedableRng};
        // h((f:1:0), rho) = N(rho, f) + m(f, rho) - h_inf, where N sums
        // -ord * degree over the poles; checked through the independent
        // proximity and site paths
        let mut rng = SmallRng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 12 {
            let num = crate::poly::Polynomial::new(
                (0..=rng.gen_range(0..=4usize))
                    .map(|_| crate::gaussian::GaussianRational::from_int(rng.gen_range(-6i64..=6)))
                    .collect(),
            );
            let den = crate::poly::Polynomial::new(
                (0..=rng.gen_range(0..=3usize))
                    .map(|_| crate::gaussian::GaussianRational::from_int(rng.gen_range(-6i64..=6)))
                    .collect(),
            );
            if num.is_zero() || den.is_zero() {
                continue;
            }
            let f = crate::ratfun::RationalFunction::new(num, den).unwrap();
            if f.is_zero() {
                continue;
            }
            let fm = FunctionModel::Rational(f);
            let rho = [1.7, 2.9, 6.3][checked % 3];
            let h = match height_fn(&fm, rho, &cfg()) {
                Ok(h) => h,
                Err(_) => continue, // singularity too close to this circle
            };
            let m = match proximity(&fm, rho, &cfg()) {
                Ok(m) => m.value,
                Err(_) => continue,
            };
            let zero = fm_zero();
            let counting: f64 = sites_for_coords([&fm, &fm_one(), &zero], rho, &cfg())
                .unwrap()
                .iter()
                .map(|s| s.degree * (-s.orders[0]).max(0) as f64)
                .sum();
            let h_inf = h.h_inf;
            assert!(
                (h.total - (counting + m - h_inf)).abs() < 1e-8,
                "h = {} vs N + m - h_inf = {}",
                h.total,
                counting + m - h_inf
            );
            checked += 1;
        }
    }

    #[test]
    fn logder_lemma_examples() {
        // f = z^4 at rho 10: m = (1/2) log(1 + 16/100), h = log sqrt(10^8 + 1)
        let r = logder_lemma_margin(&fm("z^4"), 10.0, &cfg()).unwrap();
        assert!((r.m - 0.5 * (1.0 + 0.16f64).ln()).abs() < 1e-10);
        assert!((r.h - 0.5 * (1e8 + 1.0f64).ln()).abs() < 1e-9);
        assert!(r.margin < 0.0);

        // f = z at rho e
        let rho = std::f64::consts::E;
        let r = logder_lemma_margin(&fm("z"), rho, &cfg()).unwrap();
        assert!((r.h - 0.5 * (rho * rho + 1.0).ln()).abs() < 1e-9);
        assert!((r.m - 0.5 * (1.0 + rho.powi(-2)).ln()).abs() < 1e-10);
        assert!(r.margin < 0.0);

        // a rational function just runs
        let r = logder_lemma_margin(&fm("(z-1)/(z+1)"), 5.0, &cfg()).unwrap();
        assert!(r.m.is_finite() && r.h.is_finite());

        assert!(matches!(
            logder_lemma_margin(&fm("7"), 2.0, &cfg()),
            Err(Error::ConstantPoint)
        ));
    }

    #[test]
    fn pj_residual_of_oracle_function() {
        // sin^2 z through the oracle interface: at rho = 2 the only interior
        // site is the double zero at 0, and the circle mean of log|sin^2| is
        // 2 log 2 by Jensen, so the formula closes to zero; at rho = 5.5 the
        // zeros at ±pi enter as well
        let t = sin_sq_cos_sq_triple();
        let sin_sq = t.a().clone();
        let r = pj_residual(&sin_sq, 2.0, &cfg()).unwrap();
        assert!((r.nonarch + 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((r.circle - 2.0 * 2f64.ln()).abs() < 1e-9);
        assert!(r.v_inf.abs() < 1e-12);
        assert!(r.residual.abs() < 1e-8, "residual = {:.3e}", r.residual);
        let r = pj_residual(&sin_sq, 5.5, &cfg()).unwrap();
        assert!(r.residual.abs() < 1e-8, "residual = {:.3e}", r.residual);
    }

    #[test]
    fn oracle_triple_formal_abc() {
        let t = sin_sq_cos_sq_triple();
        let r = formal_abc_report(&t, 2.2, &cfg()).unwrap();
        assert!(r.slack >= -1e-6, "slack = {}", r.slack);
        // h_inf of the logder coordinates from the orders rule:
        // orders (2, 0, 0) -> residues (0, -2, 2) -> log sqrt(8)
        assert!((r.arch.h_inf - 0.5 * 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn oracle_arch_radical_two_tolerances_agree() {
        let t = sin_sq_cos_sq_triple();
        let loose = NumericConfig {
            quad_tol: 1e-8,
            ..NumericConfig::default()
        };
        let tight = NumericConfig {
            quad_tol: 1e-12,
            ..NumericConfig::default()
        };
        let a = archimedean_radical(&t, 2.0, &loose).unwrap();
        let b = archimedean_radical(&t, 2.0, &tight).unwrap();
        assert!((a.value - b.value).abs() < 1e-6);
    }

    #[test]
    fn scan_masks_exceptional_radii() {
        let p = anchor();
        let s = rho_scan(&p, 1.0, 3.0, 5, 10.0, 1, &cfg()).unwrap();
        assert_eq!(s.rows.len(), 5);
        // rho = 1 hits the on-circle logder pole: masked
        assert!(s.rows[0].masked);
        assert!(s.rows.iter().skip(1).all(|r| !r.masked));
        assert!(s.rows.iter().all(|r| !r.exceeds));
        assert!((s.cell_length - 0.4).abs() < 1e-12);
        assert!((s.exceptional_measure - 0.4).abs() < 1e-12);
    }

    #[test]
    fn scan_single_point_grid() {
        let p = anchor();
        let s = rho_scan(&p, 2.0, 2.0, 1, 10.0, 1, &cfg()).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert!(!s.rows[0].masked);
        assert_eq!(s.exceptional_measure, 0.0);
        assert!(matches!(
            rho_scan(&p, 0.5, 2.0, 3, 10.0, 1, &cfg()),
            Err(Error::RhoBelowOne(_))
        ));
    }

    #[test]
    fn scan_counts_rows_exceeding_the_bound() {
        // with a large negative log log coefficient the bound drops below
        // r_arch everywhere, so every unmasked row exceeds and the whole
        // interval is exceptional
        let p = anchor();
        let s = rho_scan(&p, 2.0, 3.0, 4, -20.0, 1, &cfg()).unwrap();
        assert_eq!(s.masked_count, 0);
        assert_eq!(s.exceed_count, 4);
        assert!(s.rows.iter().all(|r| r.exceeds));
        assert!((s.exceptional_measure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_worker_count_does_not_change_rows() {
        let p = anchor();
        let one = rho_scan(&p, 1.2, 6.0, 9, 10.0, 1, &cfg()).unwrap();
        let four = rho_scan(&p, 1.2, 6.0, 9, 10.0, 4, &cfg()).unwrap();
        for (x, y) in one.rows.iter().zip(four.rows.iter()) {
            assert_eq!(x.rho, y.rho);
            assert_eq!(x.h, y.h);
            assert_eq!(x.r_arch, y.r_arch);
            assert_eq!(x.masked, y.masked);
        }
    }

    #[test]
    fn degree_scaling_of_quintic_analogue() {
        // h for (z^5, -1, 1-z^5) tracks 5x the degree-1 analogue at large rho
        let p1 = anchor();
        let p5 = parse_mero_triple("z^5", "-1", "1-z^5").unwrap();
        for rho in [50.0, 100.0] {
            let h1 = height(&p1, rho, &cfg()).unwrap().total;
            let h5 = height(&p5, rho, &cfg()).unwrap().total;
            assert!(
                (h5 - 5.0 * h1).abs() < 1e-3,
                "rho = {rho}: h5 = {h5}, 5 h1 = {}",
                5.0 * h1
            );
        }
    }
}
