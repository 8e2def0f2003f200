//! Polynomial roots with exact multiplicities, and valuation sites of a
//! triple inside a disk.
//!
//! Multiplicities come from an exact square-free decomposition (Yun's
//! algorithm over the Gaussian rationals), never from numeric clustering;
//! the simple roots of each square-free factor are then located by
//! simultaneous Aberth–Ehrlich iteration. Roots at the origin and roots of
//! degree-one factors are carried exactly, which lets boundary membership
//! `|x| < rho` be decided exactly for them.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;
use crate::ratfun::horner;
use crate::triple::{FunctionModel, MeroTriple};

/// A located root. `exact` is set when the value is known exactly (the
/// origin, or the root of a degree-one square-free factor).
#[derive(Debug, Clone)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: u32,
    pub exact: Option<GaussianRational>,
}

/// All roots of a polynomial; the multiplicities sum to its degree.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }
}

trait RationalToF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl RationalToF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Square-free decomposition p = prod q_k^k by Yun's algorithm; the q_k are
/// monic, square-free and pairwise coprime.
pub fn square_free_decomposition(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = p.monic();
    let fp = f.derivative();
    let g = f.gcd(&fp);
    if g.is_constant() {
        return vec![(f, 1)];
    }
    let (mut a, _) = f.div_rem(&g).expect("g nonzero");
    let (mut b, _) = fp.div_rem(&g).expect("g nonzero");
    let mut out = Vec::new();
    let mut k = 1u32;
    loop {
        let c = &b - &a.derivative();
        if c.is_zero() {
            if a.degree().unwrap_or(0) >= 1 {
                out.push((a.monic(), k));
            }
            break;
        }
        let d = a.gcd(&c);
        if d.degree().unwrap_or(0) >= 1 {
            out.push((d.clone(), k));
        }
        let (na, _) = a.div_rem(&d).expect("d nonzero");
        let (nb, _) = c.div_rem(&d).expect("d nonzero");
        a = na;
        b = nb;
        if a.degree().unwrap_or(0) == 0 {
            break;
        }
        k += 1;
    }
    out
}

/// Locates all roots of a square-free polynomial by Aberth–Ehrlich
/// simultaneous iteration. Initial guesses sit on a circle of radius
/// 1.1 x Cauchy bound, rotated by 0.4 rad to break symmetry.
fn aberth_roots(coeffs_in: &[Complex64], cfg: &NumericConfig) -> Result<Vec<Complex64>> {
    let n = coeffs_in.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs_in[n];
    let coeffs: Vec<Complex64> = coeffs_in.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=n)
        .map(|k| coeffs[k] * Complex64::new(k as f64, 0.0))
        .collect();
    let cauchy = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let radius = 1.1 * cauchy;
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();

    for _ in 0..cfg.root_max_iter {
        let mut max_step = 0.0f64;
        for j in 0..n {
            let p = horner(&coeffs, z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let dp = horner(&deriv, z[j]);
            if dp.norm() < 1e-300 {
                // saddle hit; nudge and retry next sweep
                let nudge = 1e-6 * (1.0 + z[j].norm());
                z[j] += Complex64::new(nudge, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let w = p / dp;
            let zj = z[j];
            let mut s = Complex64::new(0.0, 0.0);
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    s += (zj - zk).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let corr = if denom.norm() < 1e-300 { w } else { w / denom };
            z[j] -= corr;
            let rel = corr.norm() / (1.0 + z[j].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < cfg.root_tol {
            z.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
            return Ok(z);
        }
    }
    let residual = z
        .iter()
        .map(|&zj| horner(&coeffs, zj).norm())
        .fold(0.0f64, f64::max);
    Err(Error::RootsNonConvergence {
        iterations: cfg.root_max_iter,
        residual,
    })
}

/// All complex roots of `p` with exact multiplicities.
pub fn roots_with_multiplicity(p: &Polynomial, cfg: &NumericConfig) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroFunction("roots"));
    }
    let mut roots = Vec::new();
    for (factor, mult) in square_free_decomposition(p) {
        let mut factor = factor;
        // the origin divides at most once out of a square-free factor
        if factor.ord_at_zero() == Some(1) {
            roots.push(Root {
                location: Complex64::new(0.0, 0.0),
                multiplicity: mult,
                exact: Some(GaussianRational::zero()),
            });
            let (q, _) = factor
                .div_rem(&Polynomial::var())
                .expect("z divides factor");
            factor = q;
        }
        match factor.degree() {
            None | Some(0) => {}
            Some(1) => {
                let root = &(-&factor.coeff(0)) / &factor.coeff(1);
                roots.push(Root {
                    location: root.to_complex64(),
                    multiplicity: mult,
                    exact: Some(root),
                });
            }
            Some(_) => {
                for loc in aberth_roots(&factor.to_complex_coeffs(), cfg)? {
                    roots.push(Root {
                        location: loc,
                        multiplicity: mult,
                        exact: None,
                    });
                }
            }
        }
    }
    roots.sort_by(|a, b| {
        a.location
            .re
            .partial_cmp(&b.location.re)
            .unwrap()
            .then(a.location.im.partial_cmp(&b.location.im).unwrap())
    });
    Ok(RootSet { roots })
}

/// A zero/pole with signed order (poles negative).
#[derive(Debug, Clone)]
pub struct SignedRoot {
    pub location: Complex64,
    pub order: i64,
    pub exact: Option<GaussianRational>,
}

impl SignedRoot {
    fn abs(&self) -> f64 {
        match &self.exact {
            Some(x) => x.norm_sqr().to_f64_lossy().sqrt(),
            None => self.location.norm(),
        }
    }
}

/// Signed zero/pole list of one coordinate (zeros positive, poles negative).
/// For oracle coordinates the list is whatever the oracle reports within
/// `query_radius`; for rational ones it is all roots of numerator and
/// denominator.
pub fn signed_roots(
    f: &FunctionModel,
    query_radius: f64,
    cfg: &NumericConfig,
) -> Result<Vec<SignedRoot>> {
    match f {
        FunctionModel::Rational(rf) => {
            if rf.is_zero() {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for r in roots_with_multiplicity(rf.num(), cfg)?.roots {
                out.push(SignedRoot {
                    location: r.location,
                    order: i64::from(r.multiplicity),
                    exact: r.exact,
                });
            }
            for r in roots_with_multiplicity(rf.den(), cfg)?.roots {
                out.push(SignedRoot {
                    location: r.location,
                    order: -i64::from(r.multiplicity),
                    exact: r.exact,
                });
            }
            Ok(out)
        }
        FunctionModel::Oracle(o) => Ok(o
            .sites_in_disk(query_radius)
            .into_iter()
            .map(|s| SignedRoot {
                location: s.location,
                order: s.order,
                exact: if s.location == Complex64::new(0.0, 0.0) {
                    Some(GaussianRational::zero())
                } else {
                    None
                },
            })
            .collect()),
    }
}

/// A nonarchimedean valuation site: a point x with per-coordinate orders and
/// degree log(rho/|x|) (log rho at the origin).
#[derive(Debug, Clone)]
pub struct ValuationSite {
    pub x: Complex64,
    pub is_origin: bool,
    pub orders: [i64; 3],
    pub degree: f64,
}

impl ValuationSite {
    pub fn orders_all_equal(&self) -> bool {
        self.orders[0] == self.orders[1] && self.orders[1] == self.orders[2]
    }
}

enum Membership {
    Inside,
    Excluded,
}

/// Strict-inside test. Exact roots are compared exactly (a root exactly on
/// the circle is excluded); numeric roots within the cluster tolerance of
/// the circle are ambiguous and refuse with `SiteOnCircle`.
fn classify(root: &SignedRoot, rho: f64, cluster_abs: f64) -> Result<Membership> {
    if let Some(exact) = &root.exact {
        let rho_sq = BigRational::from_float(rho)
            .map(|r| &r * &r)
            .expect("radius validated as finite");
        return Ok(if exact.norm_sqr() < rho_sq {
            Membership::Inside
        } else {
            Membership::Excluded
        });
    }
    let dist = (root.abs() - rho).abs();
    if dist <= cluster_abs {
        return Err(Error::SiteOnCircle {
            root: root.location,
            rho,
            distance: dist,
        });
    }
    Ok(if root.abs() < rho {
        Membership::Inside
    } else {
        Membership::Excluded
    })
}

/// Union of the zeros and poles of up to three coordinates strictly inside
/// the disk of radius `rho`, merged within the cluster tolerance, with the
/// per-coordinate signed orders. Zero coordinates (of degenerate points like
/// (f : 1 : 0)) contribute nothing.
pub fn sites_for_coords(
    coords: [&FunctionModel; 3],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<Vec<ValuationSite>> {
    let query_radius = site_query_radius(rho, cfg);
    let mut lists: [Vec<SignedRoot>; 3] = Default::default();
    for (idx, f) in coords.iter().enumerate() {
        if !f.is_zero() {
            lists[idx] = signed_roots(f, query_radius, cfg)?;
        }
    }
    assemble_sites(lists, rho, cfg)
}

fn site_query_radius(rho: f64, cfg: &NumericConfig) -> f64 {
    rho * (1.0 + 2.0 * cfg.cluster_tol) + cfg.cluster_distance(rho)
}

fn assemble_sites(
    lists: [Vec<SignedRoot>; 3],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<Vec<ValuationSite>> {
    crate::quadrature::check_radius(rho)?;
    let cluster_abs = cfg.cluster_distance(rho);
    let mut sites: Vec<ValuationSite> = Vec::new();
    for (idx, list) in lists.iter().enumerate() {
        for root in list {
            let origin = root
                .exact
                .as_ref()
                .is_some_and(|x| x.is_zero());
            match classify(root, rho, cluster_abs)? {
                Membership::Excluded => continue,
                Membership::Inside => {}
            }
            let existing = sites.iter_mut().find(|s| {
                if origin {
                    s.is_origin
                } else {
                    !s.is_origin && (s.x - root.location).norm() <= cluster_abs
                }
            });
            match existing {
                Some(site) => site.orders[idx] += root.order,
                None => {
                    let mut orders = [0i64; 3];
                    orders[idx] = root.order;
                    let degree = if origin {
                        rho.ln()
                    } else {
                        (rho / root.abs()).ln()
                    };
                    sites.push(ValuationSite {
                        x: root.location,
                        is_origin: origin,
                        orders,
                        degree,
                    });
                }
            }
        }
    }
    // merging can cancel orders entirely; such points are not sites
    sites.retain(|s| s.orders.iter().any(|&o| o != 0));
    sites.sort_by(|a, b| {
        b.is_origin
            .cmp(&a.is_origin)
            .then(a.x.norm().partial_cmp(&b.x.norm()).unwrap())
            .then(a.x.re.partial_cmp(&b.x.re).unwrap())
            .then(a.x.im.partial_cmp(&b.x.im).unwrap())
    });
    Ok(sites)
}

/// Valuation sites of a triple inside the disk |z| < rho. Root lists of
/// rational coordinates come from the triple's cache.
pub fn sites_in_disk(p: &MeroTriple, rho: f64, cfg: &NumericConfig) -> Result<Vec<ValuationSite>> {
    let query_radius = site_query_radius(rho, cfg);
    let lists = [
        p.coord_roots(0, query_radius, cfg)?,
        p.coord_roots(1, query_radius, cfg)?,
        p.coord_roots(2, query_radius, cfg)?,
    ];
    assemble_sites(lists, rho, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_mero_triple, parse_rational};

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn quadratic_with_imaginary_roots() {
        let p = Polynomial::from_ints(&[1, 0, 1]); // z^2 + 1
        let rs = roots_with_multiplicity(&p, &cfg()).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert_eq!(rs.total_multiplicity(), 2);
        let mut locs: Vec<Complex64> = rs.roots.iter().map(|r| r.location).collect();
        locs.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((locs[0] - Complex64::new(0.0, -1.0)).norm() < 1e-10);
        assert!((locs[1] - Complex64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn constructed_multiplicities_recovered_exactly() {
        // (z-1)^3 (z+3), expanded
        let f = parse_rational("(z-1)^3 * (z+3)").unwrap();
        let rs = roots_with_multiplicity(f.num(), &cfg()).unwrap();
        assert_eq!(rs.total_multiplicity(), 4);
        let at_one = rs
            .roots
            .iter()
            .find(|r| (r.location - Complex64::new(1.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(at_one.multiplicity, 3);
        let at_m3 = rs
            .roots
            .iter()
            .find(|r| (r.location - Complex64::new(-3.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(at_m3.multiplicity, 1);
    }

    #[test]
    fn cube_found_by_square_free_step() {
        // z^3 - 3z^2 + 3z - 1 = (z-1)^3
        let p = Polynomial::from_ints(&[-1, 3, -3, 1]);
        let decomp = square_free_decomposition(&p);
        assert_eq!(decomp.len(), 1);
        assert_eq!(decomp[0].1, 3);
        assert_eq!(decomp[0].0, Polynomial::from_ints(&[-1, 1]));
        let rs = roots_with_multiplicity(&p, &cfg()).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        // degree-one factor roots are exact
        assert!(rs.roots[0].exact.is_some());
    }

    #[test]
    fn square_free_reconstructs_product() {
        let p = parse_rational("(z^2+1)^2 * (z-2) * (z+1/2)^3").unwrap();
        let decomp = square_free_decomposition(p.num());
        let mut prod = Polynomial::one();
        for (q, k) in &decomp {
            prod = &prod * &q.pow(*k);
        }
        assert_eq!(prod, p.num().monic());
    }

    #[test]
    fn random_constructed_roots_recovered() {
        use rand::rngs::SmallRng;
        use rand::{Rng, SeedableRng};
        let mut rng = SmallRng::seed_from_u64(1234);
        for _ in 0..20 {
            // build from known integer roots, degree <= 8
            let n_roots = rng.gen_range(2usize..=4);
            let mut p = Polynomial::one();
            let mut expected: Vec<(Complex64, u32)> = Vec::new();
            let mut used = std::collections::HashSet::new();
            for _ in 0..n_roots {
                let r = loop {
                    let r = rng.gen_range(-5i64..=5);
                    if used.insert(r) {
                        break r;
                    }
                };
                let mult = rng.gen_range(1u32..=2);
                let lin = Polynomial::new(vec![
                    GaussianRational::from_int(-r),
                    GaussianRational::one(),
                ]);
                p = &p * &lin.pow(mult);
                expected.push((Complex64::new(r as f64, 0.0), mult));
            }
            let rs = roots_with_multiplicity(&p, &cfg()).unwrap();
            assert_eq!(rs.total_multiplicity(), p.degree().unwrap());
            for (loc, mult) in expected {
                let found = rs
                    .roots
                    .iter()
                    .find(|r| (r.location - loc).norm() < 1e-9)
                    .unwrap_or_else(|| panic!("missing root {loc}"));
                assert_eq!(found.multiplicity, mult);
            }
        }
    }

    #[test]
    fn anchor_sites_at_rho_two() {
        let t = parse_mero_triple("z", "-1", "1-z").unwrap();
        let sites = sites_in_disk(&t, 2.0, &cfg()).unwrap();
        assert_eq!(sites.len(), 2);
        let origin = &sites[0];
        assert!(origin.is_origin);
        assert_eq!(origin.orders, [1, 0, 0]);
        assert!((origin.degree - 2f64.ln()).abs() < 1e-15);
        let one = &sites[1];
        assert_eq!(one.orders, [0, 0, 1]);
        assert!((one.degree - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn boundary_root_excluded_exactly() {
        // at rho = 1 the root x = 1 of (1 - z) sits exactly on the circle:
        // excluded, not an error, because it is known exactly
        let t = parse_mero_triple("z", "-1", "1-z").unwrap();
        let sites = sites_in_disk(&t, 1.0, &cfg()).unwrap();
        assert_eq!(sites.len(), 1);
        assert!(sites[0].is_origin);
        assert_eq!(sites[0].orders, [1, 0, 0]);
        assert_eq!(sites[0].degree, 0.0); // log 1
    }

    #[test]
    fn numeric_root_near_circle_is_refused() {
        // z^2 - 2 has numeric roots at ±sqrt(2); rho = sqrt(2) is ambiguous
        let t = parse_mero_triple("z^2-2", "-1", "3-z^2").unwrap();
        let r = sites_in_disk(&t, 2f64.sqrt(), &cfg());
        assert!(matches!(r, Err(Error::SiteOnCircle { .. })));
    }

    #[test]
    fn shared_pole_site_orders() {
        // (1/z, -1, (z-1)/z): shared pole at 0 with orders (-1, 0, -1)
        let t = parse_mero_triple("1/z", "-1", "(z-1)/z").unwrap();
        let sites = sites_in_disk(&t, 2.0, &cfg()).unwrap();
        let origin = sites.iter().find(|s| s.is_origin).unwrap();
        assert_eq!(origin.orders, [-1, 0, -1]);
        // and the zero of (z-1)/z at 1
        let one = sites
            .iter()
            .find(|s| (s.x - Complex64::new(1.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(one.orders, [0, 0, 1]);
    }

    #[test]
    fn scaling_by_linear_factor_adds_equal_orders() {
        // lambda = z - 1/2 scales all coordinates: the new site has equal
        // orders and the "not all equal" classification is unchanged
        let p = parse_mero_triple("z", "-1", "1-z").unwrap();
        let q = parse_mero_triple("z*(z-1/2)", "-(z-1/2)", "(1-z)*(z-1/2)").unwrap();
        let sp = sites_in_disk(&p, 2.0, &cfg()).unwrap();
        let sq = sites_in_disk(&q, 2.0, &cfg()).unwrap();
        assert_eq!(sq.len(), sp.len() + 1);
        let half = sq
            .iter()
            .find(|s| (s.x - Complex64::new(0.5, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(half.orders, [1, 1, 1]);
        assert!(half.orders_all_equal());
        let unequal_p: Vec<_> = sp.iter().filter(|s| !s.orders_all_equal()).collect();
        let unequal_q: Vec<_> = sq.iter().filter(|s| !s.orders_all_equal()).collect();
        assert_eq!(unequal_p.len(), unequal_q.len());
    }

    #[test]
    fn oracle_sites_merge_with_rational_ones() {
        let t = crate::triple::sin_sq_cos_sq_triple();
        let sites = sites_in_disk(&t, 2.0, &cfg()).unwrap();
        // 0 (from sin^2) and ±pi/2 (from cos^2)
        assert_eq!(sites.len(), 3);
        assert_eq!(sites[0].orders, [2, 0, 0]);
        assert!(sites[0].is_origin);
        assert!(sites.iter().skip(1).all(|s| s.orders == [0, 2, 0]));
    }
}
