//! The abc test over Q: exact heights and radicals of integer triples
//! a + b + c = 0, the product-formula residual, the psi(h) = 4*sqrt(h)
//! inequality, quality statistics and exhaustive triple scans.
//!
//! Valuations are normalized so that v_p(x) = -ord_p(x) log p and the
//! archimedean one is log|x|; heights sum max contributions over places.
//! For a primitive triple every prime divides at most one coordinate, so
//! the nonarchimedean height vanishes and h = (1/2) log(a^2 + b^2 + c^2).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::NumericConfig;
use crate::error::{Error, Result};

/// A point (a : b : c) on the line a + b + c = 0 with nonzero integer
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl IntTriple {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::ZeroEntry);
        }
        if !(&a + &b + &c).is_zero() {
            return Err(Error::SumNonzero);
        }
        Ok(IntTriple { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        IntTriple::new(BigInt::from(a), BigInt::from(b), BigInt::from(c))
    }

    /// Divides out gcd(|a|, |b|, |c|) and returns the canonical
    /// representative with 0 < a <= b and c < 0.
    pub fn reduce_primitive(&self) -> IntTriple {
        let g = BigInt::from(
            self.a
                .magnitude()
                .gcd(self.b.magnitude())
                .gcd(self.c.magnitude()),
        );
        let mut v = [&self.a / &g, &self.b / &g, &self.c / &g];
        // exactly one coordinate has the minority sign; make the pair positive
        if v.iter().filter(|x| x.is_negative()).count() == 2 {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        v.sort();
        // now v = [negative, small positive, large positive]
        IntTriple {
            a: v[1].clone(),
            b: v[2].clone(),
            c: v[0].clone(),
        }
    }
}

impl fmt::Display for IntTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Prime factorization with strictly increasing primes and exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reconstructs the factored integer.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    /// log of the radical: sum of log p over the distinct primes.
    pub fn radical_log(&self) -> f64 {
        self.factors.iter().map(|(p, _)| ln_biguint(p)).sum()
    }
}

/// log n for arbitrary-size n >= 1, via the top bits when n overflows f64.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().expect("fits f64 range").ln()
    } else {
        let shift = bits - 64;
        let top = (n >> shift).to_u64().expect("64 top bits");
        (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

// ───────────────────────── u64 primality and Pollard rho ─────────────────────────

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full u64 range (12 fixed witnesses).
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One Brent-cycle Pollard rho attempt with polynomial x^2 + c.
fn pollard_rho_brent(n: u64, c: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    let m = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = mul_mod(y, y, n).wrapping_add(c) % n;
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = (mul_mod(y, y, n) + c) % n;
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
        if r > 1 << 24 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = (mul_mod(ys, ys, n) + c) % n;
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn factor_u64_into(n: u64, cfg: &NumericConfig, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        out.push(n);
        return Ok(());
    }
    for c in 1..=u64::from(cfg.rho_max_restarts) {
        if let Some(d) = pollard_rho_brent(n, c) {
            if d > 1 && d < n {
                factor_u64_into(d, cfg, out)?;
                factor_u64_into(n / d, cfg, out)?;
                return Ok(());
            }
        }
    }
    Err(Error::FactorizationGaveUp {
        cofactor: n.to_string(),
    })
}

/// Complete factorization: trial division up to the configured bound, then
/// Pollard rho with deterministic Miller–Rabin on 64-bit-range cofactors.
/// Cofactors beyond 64 bits report [`Error::FactorizationGaveUp`].
pub fn factorize(n: &BigUint, cfg: &NumericConfig) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::MalformedInteger("0".into()));
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut big_primes: Vec<BigUint> = Vec::new();

    if let Some(small) = n.to_u64() {
        // stay in u64 end to end
        let mut m = small;
        let mut d = 2u64;
        while d <= cfg.trial_division_bound && (d as u128) * (d as u128) <= m as u128 {
            while m % d == 0 {
                primes.push(d);
                m /= d;
            }
            d = if d == 2 { 3 } else { d + 2 };
        }
        if m > 1 {
            if (m as u128) <= (cfg.trial_division_bound as u128).pow(2) {
                primes.push(m);
            } else {
                factor_u64_into(m, cfg, &mut primes)?;
            }
        }
    } else {
        let mut m = n.clone();
        let mut d = 2u64;
        while d <= cfg.trial_division_bound {
            let db = BigUint::from(d);
            if &db * &db > m {
                break;
            }
            while (&m % &db).is_zero() {
                primes.push(d);
                m /= &db;
            }
            d = if d == 2 { 3 } else { d + 2 };
        }
        if !m.is_one() {
            match m.to_u64() {
                Some(small) => {
                    if (small as u128) <= (cfg.trial_division_bound as u128).pow(2) {
                        primes.push(small);
                    } else {
                        factor_u64_into(small, cfg, &mut primes)?;
                    }
                }
                None => {
                    // no factor below the trial bound and too big to certify
                    let sq = &m * &m;
                    let bound_sq =
                        BigUint::from(cfg.trial_division_bound) * cfg.trial_division_bound;
                    if sq <= bound_sq {
                        big_primes.push(m);
                    } else {
                        return Err(Error::FactorizationGaveUp {
                            cofactor: m.to_string(),
                        });
                    }
                }
            }
        }
    }

    primes.sort_unstable();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        let pb = BigUint::from(p);
        match factors.last_mut() {
            Some((q, e)) if *q == pb => *e += 1,
            _ => factors.push((pb, 1)),
        }
    }
    for p in big_primes {
        factors.push((p, 1));
    }
    Ok(Factorization { factors })
}

// ───────────────────────── heights, radicals, reports ─────────────────────────

/// Height of the triple over Q: the nonarchimedean part sums, over primes
/// dividing all three coordinates, max{-ord_p log p}; the archimedean part is
/// (1/2) log(a^2 + b^2 + c^2). Invariant under scaling and coordinate order.
pub fn height_q(t: &IntTriple, cfg: &NumericConfig) -> Result<f64> {
    let g = t.a.magnitude().gcd(t.b.magnitude()).gcd(t.c.magnitude());
    let mut nonarch = 0.0;
    if !g.is_one() {
        // ord_p(g) = min over coordinates of ord_p, so the max of
        // -ord_p(coord) log p is -ord_p(g) log p
        for (p, e) in factorize(&g, cfg)?.factors() {
            nonarch -= f64::from(*e) * ln_biguint(p);
        }
    }
    let norm = (&t.a * &t.a + &t.b * &t.b + &t.c * &t.c).to_biguint().unwrap();
    Ok(nonarch + 0.5 * ln_biguint(&norm))
}

/// log rad(abc) of the primitive reduction: sum of log p over primes dividing
/// a*b*c. For a primitive triple each such prime divides exactly one
/// coordinate, hence the orders are not all equal there.
pub fn radical_log(t: &IntTriple, cfg: &NumericConfig) -> Result<f64> {
    let p = t.reduce_primitive();
    let mut total = 0.0;
    // coordinates of a primitive triple are pairwise coprime
    for x in [&p.a, &p.b, &p.c] {
        total += factorize(x.magnitude(), cfg)?.radical_log();
    }
    Ok(total)
}

/// Artin–Whaples residual for nonzero rational x: sum over primes of
/// -ord_p(x) log p, plus log|x|. Identically zero in exact arithmetic.
pub fn product_formula_residual(x: &BigRational, cfg: &NumericConfig) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ZeroEntry);
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let mut finite = 0.0;
    for (p, e) in factorize(num, cfg)?.factors() {
        finite -= f64::from(*e) * ln_biguint(p);
    }
    for (p, e) in factorize(den, cfg)?.factors() {
        finite += f64::from(*e) * ln_biguint(p);
    }
    let arch = ln_biguint(num) - ln_biguint(den);
    Ok(finite + arch)
}

/// Result of the psi(h) = 4 sqrt(h) abc test and quality statistics.
#[derive(Debug, Clone)]
pub struct NtReport {
    pub h: f64,
    pub r_na: f64,
    /// psi(h) = 4 sqrt(h)
    pub psi: f64,
    /// r_na + psi - h; the test holds iff margin >= 0
    pub margin: f64,
    pub holds: bool,
    /// h / r_na
    pub quality_paper: f64,
    /// log max(|a|,|b|,|c|) / log rad(abc)
    pub quality_classical: f64,
}

/// Quality statistics (q_paper, q_classical); errors when the radical is 1.
pub fn quality(t: &IntTriple, cfg: &NumericConfig) -> Result<(f64, f64)> {
    let p = t.reduce_primitive();
    let r_na = radical_log(&p, cfg)?;
    if r_na <= 0.0 {
        return Err(Error::ZeroRadical);
    }
    let h = height_q(&p, cfg)?;
    let max_coord = p
        .a
        .magnitude()
        .max(p.b.magnitude())
        .max(p.c.magnitude())
        .clone();
    Ok((h / r_na, ln_biguint(&max_coord) / r_na))
}

/// Runs the abc test h <= r_na + 4 sqrt(h) on the primitive reduction.
pub fn abc_check(t: &IntTriple, cfg: &NumericConfig) -> Result<NtReport> {
    let p = t.reduce_primitive();
    let h = height_q(&p, cfg)?;
    let r_na = radical_log(&p, cfg)?;
    let psi = 4.0 * h.sqrt();
    let margin = r_na + psi - h;
    let (quality_paper, quality_classical) = quality(&p, cfg)?;
    Ok(NtReport {
        h,
        r_na,
        psi,
        margin,
        holds: margin >= 0.0,
        quality_paper,
        quality_classical,
    })
}

/// One scanned triple with its report.
#[derive(Debug, Clone)]
pub struct ScanHit {
    pub triple: IntTriple,
    pub report: NtReport,
}

/// Outcome of an exhaustive scan of primitive triples with c <= max_c.
#[derive(Debug, Clone)]
pub struct NtScanOutcome {
    pub examined: u64,
    /// Top hits by classical quality (descending, ties by (a, b)).
    pub top: Vec<ScanHit>,
    /// Triples failing the psi test (expected empty).
    pub violations: Vec<ScanHit>,
}

/// Smallest-prime-factor sieve.
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn distinct_primes_spf(mut n: u32, spf: &[u32], out: &mut Vec<u32>) {
    while n > 1 {
        let p = spf[n as usize];
        out.push(p);
        while n % p == 0 {
            n /= p;
        }
    }
}

/// Enumerates primitive triples 0 < a <= b < c = a + b <= max_c with
/// gcd(a, b) = 1, mapped to (a, b, -c). Returns the top `top_k` hits by
/// classical quality plus any psi-test violations.
///
/// The (a, b) range is striped across `workers` threads; the merge sorts by
/// quality then lexicographically, so output is independent of worker count.
pub fn enumerate_scan(max_c: u64, top_k: usize, workers: usize) -> Result<NtScanOutcome> {
    if max_c < 2 {
        return Err(Error::InvalidGrid(format!(
            "scan bound must be >= 2 (got {max_c})"
        )));
    }
    let n = usize::try_from(max_c).map_err(|_| {
        Error::InvalidGrid(format!("scan bound {max_c} too large for this platform"))
    })?;
    let spf = spf_sieve(n);
    let mut ln_p = vec![0.0f64; n + 1];
    for (i, item) in ln_p.iter_mut().enumerate().skip(2) {
        if spf[i] == i as u32 {
            *item = (i as f64).ln();
        }
    }
    let workers = workers.max(1);

    let scan_stripe = |stripe: usize| -> (u64, Vec<ScanHit>, Vec<ScanHit>) {
        let mut examined = 0u64;
        let mut top: Vec<ScanHit> = Vec::new();
        let mut violations: Vec<ScanHit> = Vec::new();
        let mut primes: Vec<u32> = Vec::with_capacity(24);
        let mut a = 1 + stripe;
        while 2 * a <= n {
            for b in a..=(n - a) {
                if gcd_u64(a as u64, b as u64) != 1 {
                    continue;
                }
                let c = a + b;
                examined += 1;
                primes.clear();
                distinct_primes_spf(a as u32, &spf, &mut primes);
                distinct_primes_spf(b as u32, &spf, &mut primes);
                distinct_primes_spf(c as u32, &spf, &mut primes);
                let r_na: f64 = primes.iter().map(|&p| ln_p[p as usize]).sum();
                let aa = (a as f64) * (a as f64);
                let bb = (b as f64) * (b as f64);
                let cc = (c as f64) * (c as f64);
                let h = 0.5 * (aa + bb + cc).ln();
                let psi = 4.0 * h.sqrt();
                let margin = r_na + psi - h;
                let q_classical = (c as f64).ln() / r_na;
                let mut keep = margin < 0.0;
                if top.len() < top_k {
                    keep = true;
                } else if let Some(last) = top.last() {
                    if q_classical > last.report.quality_classical {
                        keep = true;
                    }
                }
                if !keep {
                    continue;
                }
                let hit = ScanHit {
                    triple: IntTriple::from_i64(a as i64, b as i64, -(c as i64))
                        .expect("scan triples are valid"),
                    report: NtReport {
                        h,
                        r_na,
                        psi,
                        margin,
                        holds: margin >= 0.0,
                        quality_paper: h / r_na,
                        quality_classical: q_classical,
                    },
                };
                if margin < 0.0 {
                    violations.push(hit.clone());
                }
                top.push(hit);
                sort_hits(&mut top);
                top.truncate(top_k);
            }
            a += workers;
        }
        (examined, top, violations)
    };

    let results: Vec<(u64, Vec<ScanHit>, Vec<ScanHit>)> = if workers == 1 {
        vec![scan_stripe(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| scope.spawn(move || scan_stripe(w)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker")).collect()
        })
    };

    let mut examined = 0;
    let mut top = Vec::new();
    let mut violations = Vec::new();
    for (count, t, v) in results {
        examined += count;
        top.extend(t);
        violations.extend(v);
    }
    sort_hits(&mut top);
    top.truncate(top_k);
    sort_hits(&mut violations);
    Ok(NtScanOutcome {
        examined,
        top,
        violations,
    })
}

fn sort_hits(hits: &mut [ScanHit]) {
    hits.sort_by(|x, y| {
        y.report
            .quality_classical
            .partial_cmp(&x.report.quality_classical)
            .unwrap()
            .then_with(|| x.triple.a.cmp(&y.triple.a))
            .then_with(|| x.triple.b.cmp(&y.triple.b))
    });
}
