//! Means over the circle |z| = rho.
//!
//! The integrals here are all of the form ∮ g dz/(2πiz) = (1/2π)∫ g(θ) dθ
//! with smooth periodic integrands, where the trapezoidal rule converges
//! spectrally. Nodes double from 64 until two successive refinements agree
//! to tolerance; accumulation uses pairwise summation in a fixed order, so
//! results are bit-reproducible.
//!
//! When a singularity sits within the guard distance of the circle the
//! computation refuses instead of regularizing; the caller must perturb rho.

use num_complex::Complex64;

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::roots::signed_roots;
use crate::triple::{FunctionModel, MeroTriple};

const START_NODES: usize = 64;

/// Converged circle mean with its error estimate.
#[derive(Debug, Clone)]
pub struct QuadratureOutcome {
    pub value: f64,
    /// |I_2N - I_N| at acceptance.
    pub achieved_error: f64,
    /// Node count of the accepted refinement.
    pub nodes: usize,
    /// Successive |I_2N - I_N| across all doublings, for convergence audits.
    pub diffs: Vec<f64>,
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Rejects radii that are not positive finite reals (NaN would otherwise
/// slip through ordering-based checks).
pub fn check_radius(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(rho))
    }
}

/// Mean of `g` over the circle: trapezoidal rule on N equispaced angles,
/// doubling until |I_2N - I_N| < tol.
pub fn circle_mean<G>(g: G, rho: f64, tol: f64, cfg: &NumericConfig) -> Result<QuadratureOutcome>
where
    G: Fn(f64) -> Result<f64>,
{
    check_radius(rho)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let sample = |theta: f64| -> Result<f64> {
        let v = g(theta)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample { theta })
        }
    };

    let mut samples: Vec<f64> = Vec::with_capacity(START_NODES);
    for k in 0..START_NODES {
        samples.push(sample(two_pi * k as f64 / START_NODES as f64)?);
    }
    let mut mean = pairwise_sum(&samples) / samples.len() as f64;
    let mut diffs = Vec::new();
    loop {
        let n = samples.len();
        let doubled = 2 * n;
        if doubled > cfg.max_quad_nodes {
            let last = diffs.last().copied().unwrap_or(f64::NAN);
            let prev = diffs
                .len()
                .checked_sub(2)
                .map(|i| diffs[i])
                .unwrap_or(f64::NAN);
            return Err(Error::QuadratureNonConvergence {
                nodes: n,
                last_diff: last,
                prev_diff: prev,
            });
        }
        let mut refined = Vec::with_capacity(doubled);
        for (k, &s) in samples.iter().enumerate() {
            refined.push(s);
            refined.push(sample(two_pi * (2 * k + 1) as f64 / doubled as f64)?);
        }
        let refined_mean = pairwise_sum(&refined) / doubled as f64;
        let diff = (refined_mean - mean).abs();
        diffs.push(diff);
        samples = refined;
        mean = refined_mean;
        if diff < tol {
            return Ok(QuadratureOutcome {
                value: mean,
                achieved_error: diff,
                nodes: doubled,
                diffs,
            });
        }
    }
}

/// Collects |x| for every known zero/pole relevant to quadratures over the
/// given coordinates. Oracle coordinates report sites within 1.5 rho, so the
/// returned minimum is capped at 0.5 rho for them.
fn min_circle_distance(
    coords: &[&FunctionModel],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    check_radius(rho)?;
    let mut dist = f64::INFINITY;
    let mut capped = false;
    for f in coords {
        if f.is_zero() {
            continue;
        }
        if !f.is_rational() {
            capped = true;
        }
        for root in signed_roots(f, 1.5 * rho, cfg)? {
            let d = match &root.exact {
                Some(x) => {
                    let abs = num_traits::ToPrimitive::to_f64(&x.norm_sqr())
                        .unwrap_or(f64::NAN)
                        .sqrt();
                    (abs - rho).abs()
                }
                None => (root.location.norm() - rho).abs(),
            };
            if d < dist {
                dist = d;
            }
        }
    }
    if capped {
        dist = dist.min(0.5 * rho);
    }
    Ok(dist)
}

/// Distance from the circle |z| = rho to the nearest zero or pole of any
/// coordinate of P or of its logarithmic-derivative coordinates.
pub fn singularity_distance(p: &MeroTriple, rho: f64, cfg: &NumericConfig) -> Result<f64> {
    let mut dist = triple_circle_distance(p, rho, cfg)?;
    if p.is_exact() && p.is_nonconstant() {
        let logder = p.logder_triple()?;
        dist = dist.min(triple_circle_distance(logder, rho, cfg)?);
    }
    Ok(dist)
}

fn triple_circle_distance(p: &MeroTriple, rho: f64, cfg: &NumericConfig) -> Result<f64> {
    let mut dist = f64::INFINITY;
    let mut capped = false;
    for idx in 0..3 {
        if !p.coords()[idx].is_rational() {
            capped = true;
        }
        for root in p.coord_roots(idx, 1.5 * rho, cfg)? {
            let d = match &root.exact {
                Some(x) => {
                    let abs = num_traits::ToPrimitive::to_f64(&x.norm_sqr())
                        .unwrap_or(f64::NAN)
                        .sqrt();
                    (abs - rho).abs()
                }
                None => (root.location.norm() - rho).abs(),
            };
            if d < dist {
                dist = d;
            }
        }
    }
    if capped {
        dist = dist.min(0.5 * rho);
    }
    Ok(dist)
}

/// Distance from the circle to the singular set of the given coordinates
/// only (no logarithmic derivatives).
pub fn coord_singularity_distance(
    coords: &[&FunctionModel],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    min_circle_distance(coords, rho, cfg)
}

/// Refuses when `distance` is inside the guard band around the circle.
pub fn require_guard(distance: f64, rho: f64, cfg: &NumericConfig) -> Result<()> {
    let required = cfg.guard_distance(rho);
    if distance < required {
        return Err(Error::CircleGuard {
            rho,
            distance,
            required,
        });
    }
    Ok(())
}

/// Evaluates |f(rho e^{i theta})| sample helpers for log-integrands.
pub fn circle_point(rho: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(rho, theta)
}
