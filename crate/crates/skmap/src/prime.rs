//! Evaluation of the Schottky-Klein prime function `omega(zeta, alpha)`
//! associated with a circular domain, as a level-truncated product over the
//! half set of group words, together with its first-argument derivative,
//! branch-tracked logarithms along paths, and the boundary ratio quantities
//! `beta_j`.
//!
//! The truncated product is
//!
//! ```text
//! omega(z, a) = (z - a) * prod_{w in half set}
//!               [(z - w(a)) (a - w(z))] / [(z - w(z)) (a - w(a))]
//! ```
//!
//! Every factor is invariant under replacing a word by its inverse, which is
//! why any half set yields the same value; tests pin that property.

use num_complex::Complex64;

use crate::domain::CircularDomain;
use crate::error::{Error, Result};
use crate::schottky::WordSet;

/// Evaluator for `omega(zeta, alpha)` at a fixed truncation level.
///
/// Immutable after construction; all evaluations are pure.
#[derive(Debug, Clone)]
pub struct PrimeEvaluator {
    domain: CircularDomain,
    words: WordSet,
    tolerance: f64,
}

/// Precomputed per-word data for a fixed second argument `alpha`:
/// the translate `w(alpha)` and the offset `alpha - w(alpha)`.
#[derive(Debug, Clone)]
pub struct AlphaCache {
    alpha: Complex64,
    translates: Vec<Complex64>,
    offsets: Vec<Complex64>,
}

impl AlphaCache {
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Word translates `w(alpha)` in enumeration order.
    pub fn translates(&self) -> &[Complex64] {
        &self.translates
    }
}

/// Per-point shared data: `w(zeta)`, `w'(zeta)` and `zeta - w(zeta)` for
/// every word. Filling this once per point lets many `alpha` evaluations
/// share the expensive part.
#[derive(Debug, Clone, Default)]
pub struct PointBuf {
    zeta: Complex64,
    theta: Vec<Complex64>,
    theta_prime: Vec<Complex64>,
    offsets: Vec<Complex64>,
}

impl PointBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }
}

/// Product accumulator that pulls magnitude out into an explicit log scale,
/// so long products of near-unit factors never overflow or underflow.
#[derive(Debug, Clone, Copy)]
struct ScaledProduct {
    c: Complex64,
    log_scale: f64,
}

impl ScaledProduct {
    fn one() -> Self {
        Self {
            c: Complex64::ONE,
            log_scale: 0.0,
        }
    }

    #[inline]
    fn mul(&mut self, f: Complex64) {
        self.c *= f;
        let n = self.c.norm_sqr();
        if !(1e-120..=1e120).contains(&n) && n != 0.0 && n.is_finite() {
            let mag = n.sqrt();
            self.c /= mag;
            self.log_scale += mag.ln();
        }
    }

    fn value(&self) -> Result<Complex64> {
        let scale = self.log_scale.exp();
        if !scale.is_finite() {
            return Err(Error::Magnitude {
                log10: self.log_scale / std::f64::consts::LN_10,
            });
        }
        Ok(self.c * scale)
    }

    /// Natural log with argument in `(-pi, pi]`.
    fn log(&self) -> Complex64 {
        Complex64::new(self.c.norm().ln() + self.log_scale, self.c.arg())
    }
}

/// One sample of a continuously tracked logarithm along a path.
#[derive(Debug, Clone, Copy)]
pub struct LogSample {
    pub zeta: Complex64,
    pub log: Complex64,
}

impl PrimeEvaluator {
    /// Builds word caches for the domain at the given truncation level.
    pub fn new(domain: CircularDomain, level: usize) -> Result<Self> {
        let report = domain.validate();
        if !report.is_valid() {
            return Err(Error::InvalidDomain(report.violations));
        }
        let words = WordSet::enumerate(&domain, level)?;
        Ok(Self {
            domain,
            words,
            tolerance: 1e-8,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Rebuilds the evaluator around a different word set (tests use this to
    /// verify representative-choice invariance).
    pub fn with_words(domain: CircularDomain, words: WordSet) -> Self {
        Self {
            domain,
            words,
            tolerance: 1e-8,
        }
    }

    pub fn domain(&self) -> &CircularDomain {
        &self.domain
    }

    pub fn level(&self) -> usize {
        self.words.level()
    }

    pub fn words(&self) -> &WordSet {
        &self.words
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Precomputes the word translates of `alpha`.
    pub fn alpha_cache(&self, alpha: Complex64) -> Result<AlphaCache> {
        let n = self.words.len();
        let mut translates = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for w in self.words.words() {
            // Same arithmetic path as `fill_point`, so that swapping the two
            // arguments of omega reproduces identical factors bit for bit.
            let m = w.map();
            let den = m.c * alpha + m.d;
            if den == Complex64::ZERO {
                return Err(Error::NonFinite {
                    word: w.to_string(),
                });
            }
            let t = (m.a * alpha + m.b) * den.inv();
            let off = alpha - t;
            if !t.is_finite() || !off.is_finite() {
                return Err(Error::NonFinite {
                    word: w.to_string(),
                });
            }
            translates.push(t);
            offsets.push(off);
        }
        Ok(AlphaCache {
            alpha,
            translates,
            offsets,
        })
    }

    /// Fills the shared per-point data for `zeta`.
    pub fn fill_point(&self, zeta: Complex64, buf: &mut PointBuf) -> Result<()> {
        let n = self.words.len();
        buf.zeta = zeta;
        buf.theta.clear();
        buf.theta_prime.clear();
        buf.offsets.clear();
        buf.theta.reserve(n);
        buf.theta_prime.reserve(n);
        buf.offsets.reserve(n);
        for w in self.words.words() {
            let m = w.map();
            let den = m.c * zeta + m.d;
            if den == Complex64::ZERO {
                return Err(Error::NonFinite {
                    word: w.to_string(),
                });
            }
            let inv = den.inv();
            // Unit determinant: w'(z) = 1/(cz+d)^2.
            let t = (m.a * zeta + m.b) * inv;
            let tp = inv * inv;
            if !t.is_finite() || !tp.is_finite() {
                return Err(Error::NonFinite {
                    word: w.to_string(),
                });
            }
            buf.theta.push(t);
            buf.theta_prime.push(tp);
            buf.offsets.push(zeta - t);
        }
        Ok(())
    }

    fn product(&self, buf: &PointBuf, cache: &AlphaCache) -> Result<ScaledProduct> {
        let zeta = buf.zeta;
        let alpha = cache.alpha;
        let mut prod = ScaledProduct::one();
        for (i, w) in self.words.words().iter().enumerate() {
            let num = (zeta - cache.translates[i]) * (alpha - buf.theta[i]);
            let den = buf.offsets[i] * cache.offsets[i];
            let f = num / den;
            if !f.is_finite() {
                return Err(Error::NonFinite {
                    word: w.to_string(),
                });
            }
            prod.mul(f);
        }
        Ok(prod)
    }

    /// Product and the logarithmic derivative sum of the word factors with
    /// respect to `zeta`.
    fn product_and_dsum(
        &self,
        buf: &PointBuf,
        cache: &AlphaCache,
    ) -> Result<(ScaledProduct, Complex64)> {
        let zeta = buf.zeta;
        let alpha = cache.alpha;
        let mut prod = ScaledProduct::one();
        let mut dsum = Complex64::ZERO;
        for (i, w) in self.words.words().iter().enumerate() {
            let zt = zeta - cache.translates[i];
            let at = alpha - buf.theta[i];
            let num = zt * at;
            let den = buf.offsets[i] * cache.offsets[i];
            let f = num / den;
            let tp = buf.theta_prime[i];
            let term = zt.inv() - tp / at - (Complex64::ONE - tp) / buf.offsets[i];
            if !f.is_finite() || !term.is_finite() {
                return Err(Error::NonFinite {
                    word: w.to_string(),
                });
            }
            prod.mul(f);
            dsum += term;
        }
        Ok((prod, dsum))
    }

    /// `omega(zeta, alpha)` using a prepared point and alpha cache.
    pub fn omega_with(&self, buf: &PointBuf, cache: &AlphaCache) -> Result<Complex64> {
        let prod = self.product(buf, cache)?;
        Ok((buf.zeta - cache.alpha) * prod.value()?)
    }

    /// `(omega, d omega/d zeta)` in one pass. The derivative uses the
    /// analytic form `P + (zeta - alpha) P'`, which stays finite on the
    /// diagonal `zeta = alpha`.
    pub fn omega_pair_with(
        &self,
        buf: &PointBuf,
        cache: &AlphaCache,
    ) -> Result<(Complex64, Complex64)> {
        let (prod, dsum) = self.product_and_dsum(buf, cache)?;
        let p = prod.value()?;
        let lead = buf.zeta - cache.alpha;
        Ok((lead * p, p * (Complex64::ONE + lead * dsum)))
    }

    /// Principal-branch logarithm of `omega` (imaginary part in `(-pi, pi]`),
    /// evaluated in log scale so extreme magnitudes stay representable.
    pub fn log_omega_with(&self, buf: &PointBuf, cache: &AlphaCache) -> Result<Complex64> {
        let lead = buf.zeta - cache.alpha;
        if lead == Complex64::ZERO {
            return Err(Error::AtSingularPoint { point: buf.zeta });
        }
        let prod = self.product(buf, cache)?;
        let l = prod.log() + Complex64::new(lead.norm().ln(), lead.arg());
        // Re-wrap the argument into (-pi, pi].
        let im = wrap_angle(l.im);
        Ok(Complex64::new(l.re, im))
    }

    /// Convenience evaluation of the truncated product.
    pub fn omega(&self, zeta: Complex64, alpha: Complex64) -> Result<Complex64> {
        let cache = self.alpha_cache(alpha)?;
        let mut buf = PointBuf::new();
        self.fill_point(zeta, &mut buf)?;
        self.omega_with(&buf, &cache)
    }

    /// Convenience evaluation of the first-argument derivative.
    pub fn omega_deriv(&self, zeta: Complex64, alpha: Complex64) -> Result<Complex64> {
        let cache = self.alpha_cache(alpha)?;
        let mut buf = PointBuf::new();
        self.fill_point(zeta, &mut buf)?;
        Ok(self.omega_pair_with(&buf, &cache)?.1)
    }

    /// Maximum relative change of `omega` between this level and the next,
    /// measured at interior probe points; a data-driven truncation estimate.
    pub fn truncation_estimate(&self) -> Result<f64> {
        let finer = Self::new(self.domain.clone(), self.level() + 1)?;
        let probes = interior_probes(&self.domain, 5)?;
        let alpha = probes[0];
        let mut worst: f64 = 0.0;
        for &z in &probes[1..] {
            let a = self.omega(z, alpha)?;
            let b = finer.omega(z, alpha)?;
            let denom = b.norm().max(1e-300);
            worst = worst.max((a - b).norm() / denom);
        }
        Ok(worst)
    }

    /// Continuous branch of `log omega(., alpha)` along a polyline.
    ///
    /// Steps are subdivided until consecutive samples differ by less than
    /// `0.9 pi` in imaginary part (so the returned chain satisfies the
    /// strict `< pi` contract). The returned samples include every input
    /// point plus the refinement points between them.
    pub fn log_omega_track(
        &self,
        path: &[Complex64],
        alpha: Complex64,
        clearance: f64,
    ) -> Result<Vec<LogSample>> {
        if path.is_empty() {
            return Ok(Vec::new());
        }
        let cache = self.alpha_cache(alpha)?;
        let mut buf = PointBuf::new();
        self.check_clearance(path[0], &cache, clearance)?;
        self.fill_point(path[0], &mut buf)?;
        let mut samples = vec![LogSample {
            zeta: path[0],
            log: self.log_omega_with(&buf, &cache)?,
        }];
        for seg in path.windows(2) {
            self.track_segment(seg[0], seg[1], &cache, clearance, &mut buf, &mut samples)?;
        }
        Ok(samples)
    }

    fn check_clearance(&self, z: Complex64, cache: &AlphaCache, clearance: f64) -> Result<()> {
        if (z - cache.alpha).norm() < clearance {
            return Err(Error::Clearance { point: z });
        }
        for t in &cache.translates {
            if (z - t).norm() < clearance {
                return Err(Error::Clearance { point: z });
            }
        }
        Ok(())
    }

    fn track_segment(
        &self,
        _from: Complex64,
        to: Complex64,
        cache: &AlphaCache,
        clearance: f64,
        buf: &mut PointBuf,
        samples: &mut Vec<LogSample>,
    ) -> Result<()> {
        // Depth-limited stack of pending sub-segments, left to right.
        let mut stack = vec![(to, 0u32)];
        while let Some((target, depth)) = stack.pop() {
            let prev = *samples.last().expect("seeded with the start sample");
            self.check_clearance(target, cache, clearance)?;
            self.fill_point(target, buf)?;
            let raw = self.log_omega_with(buf, cache)?;
            let k = ((prev.log.im - raw.im) / std::f64::consts::TAU).round();
            let log = Complex64::new(raw.re, raw.im + std::f64::consts::TAU * k);
            let d_im = (log.im - prev.log.im).abs();
            let d_re = (log.re - prev.log.re).abs();
            if d_im < 0.9 * std::f64::consts::PI && d_re < 2.5 {
                samples.push(LogSample {
                    zeta: target,
                    log,
                });
            } else {
                if depth >= 48 {
                    return Err(Error::Branch(format!(
                        "argument continuation not resolved after {depth} subdivisions near {target}"
                    )));
                }
                let mid = 0.5 * (prev.zeta + target);
                stack.push((target, depth + 1));
                stack.push((mid, depth + 1));
            }
        }
        Ok(())
    }

    /// Boundary ratio `beta_j(gamma_1, gamma_2)` computed from the word-map
    /// translation behaviour of omega ratios, probed at several interior
    /// points; the probe spread is returned as a quality figure.
    pub fn beta(&self, j: usize, gamma1: Complex64, gamma2: Complex64) -> Result<BetaValue> {
        self.beta_with_tolerance(j, gamma1, gamma2, self.tolerance.max(1e-6))
    }

    pub fn beta_with_tolerance(
        &self,
        j: usize,
        gamma1: Complex64,
        gamma2: Complex64,
        tolerance: f64,
    ) -> Result<BetaValue> {
        self.domain.circle_index_check(j)?;
        if j == 0 {
            // The unit circle carries the identity translation.
            return Ok(BetaValue {
                circle: 0,
                gamma1,
                gamma2,
                value: Complex64::ONE,
                spread: 0.0,
            });
        }
        if gamma1 == gamma2 {
            return Ok(BetaValue {
                circle: j,
                gamma1,
                gamma2,
                value: Complex64::ONE,
                spread: 0.0,
            });
        }
        let theta = self.domain.generator(j)?;
        let c1 = self.alpha_cache(gamma1)?;
        let c2 = self.alpha_cache(gamma2)?;
        let mut buf = PointBuf::new();
        let mut values = Vec::with_capacity(5);
        for probe in interior_probes(&self.domain, 12)? {
            if values.len() == 5 {
                break;
            }
            let image = theta.apply(probe);
            self.fill_point(image, &mut buf)?;
            let (oi1, oi2) = (
                self.omega_with(&buf, &c1)?,
                self.omega_with(&buf, &c2)?,
            );
            self.fill_point(probe, &mut buf)?;
            let (op1, op2) = (
                self.omega_with(&buf, &c1)?,
                self.omega_with(&buf, &c2)?,
            );
            let den = oi2 * op1;
            if den.norm() < 1e-30 {
                continue; // probe hits a zero; take the next candidate
            }
            values.push(oi1 * op2 / den);
        }
        if values.len() < 5 {
            return Err(Error::NoProbes);
        }
        let mean = values.iter().sum::<Complex64>() / values.len() as f64;
        let spread = values
            .iter()
            .map(|v| (v - mean).norm())
            .fold(0.0f64, f64::max)
            / mean.norm().max(1e-300);
        if spread > tolerance {
            return Err(Error::IdentityInconsistent { spread, tolerance });
        }
        Ok(BetaValue {
            circle: j,
            gamma1,
            gamma2,
            value: mean,
            spread,
        })
    }
}

/// `beta_j` for a pair of reference points, with the probe spread kept as a
/// quality figure. Modulus one whenever the points share a boundary circle.
#[derive(Debug, Clone, Copy)]
pub struct BetaValue {
    pub circle: usize,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub value: Complex64,
    pub spread: f64,
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(std::f64::consts::TAU);
    if y > std::f64::consts::PI {
        y -= std::f64::consts::TAU;
    }
    y
}

/// Deterministic interior points clear of every circle, used for probing.
pub(crate) fn interior_probes(domain: &CircularDomain, count: usize) -> Result<Vec<Complex64>> {
    let angles = [0.4, 1.65, 2.9, 4.15, 5.4, 0.9, 2.2, 3.5, 4.8, 6.0];
    let radii = [0.55, 0.7, 0.4, 0.8, 0.25, 0.62, 0.33, 0.88, 0.15, 0.47];
    let mut probes: Vec<Complex64> = Vec::with_capacity(count);
    'outer: for k in 0..(angles.len() * radii.len()) {
        let angle = angles[k % angles.len()] + 0.05 * (k / angles.len()) as f64;
        let r = radii[(k * 7 + 3) % radii.len()];
        let z = r * Complex64::cis(angle);
        if !domain.contains_with_margin(z, 0.04) {
            continue;
        }
        for p in &probes {
            if (z - *p).norm() < 0.05 {
                continue 'outer;
            }
        }
        probes.push(z);
        if probes.len() == count {
            return Ok(probes);
        }
    }
    if probes.is_empty() {
        Err(Error::NoProbes)
    } else {
        Ok(probes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn annulus(q: f64, level: usize) -> PrimeEvaluator {
        let d = CircularDomain::checked(vec![Complex64::ZERO], vec![q]).unwrap();
        PrimeEvaluator::new(d, level).unwrap()
    }

    fn eccentric(level: usize) -> PrimeEvaluator {
        let d = CircularDomain::checked(vec![c(0.3, 0.0)], vec![0.1]).unwrap();
        PrimeEvaluator::new(d, level).unwrap()
    }

    fn two_circle(level: usize) -> PrimeEvaluator {
        let d =
            CircularDomain::checked(vec![c(-0.4, 0.0), c(0.4, 0.0)], vec![0.1, 0.1]).unwrap();
        PrimeEvaluator::new(d, level).unwrap()
    }

    /// Independent classical annulus formula: `-(alpha/C^2) P(zeta/alpha, q)`
    /// with `P(z,q) = (1-z) prod (1-q^{2k} z)(1-q^{2k}/z)` and
    /// `C = prod (1-q^{2k})`.
    mod annulus_oracle {
        use num_complex::Complex64;

        pub fn p_function(z: Complex64, q: f64, terms: usize) -> Complex64 {
            let mut p = Complex64::ONE - z;
            let mut q2k = 1.0;
            for _ in 1..=terms {
                q2k *= q * q;
                p *= (Complex64::ONE - q2k * z) * (Complex64::ONE - q2k / z);
            }
            p
        }

        pub fn p_log_deriv(z: Complex64, q: f64, terms: usize) -> Complex64 {
            let mut s = -(Complex64::ONE - z).inv();
            let mut q2k = 1.0;
            for _ in 1..=terms {
                q2k *= q * q;
                s += -q2k * (Complex64::ONE - q2k * z).inv()
                    + (q2k / (z * z)) * (Complex64::ONE - q2k / z).inv();
            }
            s
        }

        pub fn c_const(q: f64, terms: usize) -> f64 {
            let mut cc = 1.0;
            let mut q2k = 1.0;
            for _ in 1..=terms {
                q2k *= q * q;
                cc *= 1.0 - q2k;
            }
            cc
        }

        pub fn omega(zeta: Complex64, alpha: Complex64, q: f64, terms: usize) -> Complex64 {
            let cc = c_const(q, terms);
            -(alpha / (cc * cc)) * p_function(zeta / alpha, q, terms)
        }

        pub fn omega_deriv(zeta: Complex64, alpha: Complex64, q: f64, terms: usize) -> Complex64 {
            let cc = c_const(q, terms);
            let z = zeta / alpha;
            -(p_function(z, q, terms) * p_log_deriv(z, q, terms)) / (cc * cc)
        }
    }

    #[test]
    fn empty_product_reduces_to_difference() {
        let p = PrimeEvaluator::new(CircularDomain::disc(), 4).unwrap();
        assert_eq!(p.omega(c(2.0, 0.0), c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        let z = c(0.3, -0.7);
        let a = c(-0.1, 0.2);
        assert_eq!(p.omega(z, a).unwrap(), z - a);
        assert_eq!(p.omega_deriv(z, a).unwrap(), Complex64::ONE);
    }

    #[test]
    fn simple_zero_on_diagonal() {
        let p = eccentric(5);
        let a = c(0.52, 0.31);
        assert_eq!(p.omega(a, a).unwrap(), Complex64::ZERO);
        // Derivative stays finite there.
        assert!(p.omega_deriv(a, a).unwrap().is_finite());
    }

    #[test]
    fn antisymmetry_is_exact() {
        let p = two_circle(5);
        let pairs = [
            (c(0.1, 0.6), c(-0.2, -0.5)),
            (c(0.7, 0.1), c(0.05, -0.75)),
            (c(-0.6, 0.4), c(0.62, -0.33)),
        ];
        for (z, a) in pairs {
            let lhs = p.omega(z, a).unwrap();
            let rhs = -p.omega(a, z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-15 * lhs.norm());
        }
    }

    #[test]
    fn annulus_product_matches_classical_formula() {
        for q in [0.1, 0.3] {
            let p = annulus(q, 8);
            let samples = [
                (c(0.55, 0.2), c(-0.4, 0.35)),
                (c(0.0, 0.8), c(0.5, -0.1)),
                (c(-0.62, -0.2), c(0.35, 0.45)),
            ];
            for (z, a) in samples {
                let got = p.omega(z, a).unwrap();
                let want = annulus_oracle::omega(z, a, q, 40);
                assert!(
                    (got - want).norm() <= 1e-8 * want.norm(),
                    "q={q}: {got} vs {want}"
                );
                let dgot = p.omega_deriv(z, a).unwrap();
                let dwant = annulus_oracle::omega_deriv(z, a, q, 40);
                assert!(
                    (dgot - dwant).norm() <= 1e-7 * dwant.norm(),
                    "q={q} deriv: {dgot} vs {dwant}"
                );
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = two_circle(6);
        let a = c(0.15, 0.55);
        let samples = [c(0.6, -0.25), c(-0.15, 0.72), c(0.05, -0.6)];
        let h = 1e-6;
        for z in samples {
            let d = p.omega_deriv(z, a).unwrap();
            // Central differences with one Richardson step.
            let fd = |h: f64| {
                (p.omega(z + c(h, 0.0), a).unwrap() - p.omega(z - c(h, 0.0), a).unwrap())
                    / (2.0 * h)
            };
            let d1 = fd(h);
            let d2 = fd(h / 2.0);
            let extrap = (4.0 * d2 - d1) / 3.0;
            assert!(
                (d - extrap).norm() <= 1e-7 * d.norm().max(1.0),
                "{d} vs {extrap}"
            );
        }
    }

    #[test]
    fn representative_choice_leaves_value_unchanged() {
        let p = eccentric(5);
        let z = c(0.6, 0.3);
        let a = c(-0.3, -0.5);
        let base = p.omega(z, a).unwrap();
        for index in [0, 1, p.words().len() - 1] {
            let flipped = p
                .words()
                .with_flipped_representative(p.domain(), index)
                .unwrap();
            let alt = PrimeEvaluator::with_words(p.domain().clone(), flipped);
            let v = alt.omega(z, a).unwrap();
            assert!((v - base).norm() <= 1e-10 * base.norm());
        }
    }

    #[test]
    fn beta_conventions() {
        let p = eccentric(6);
        let g1 = p.domain().point_on(1, 0.7);
        let g2 = p.domain().point_on(1, 2.3);
        // Unit circle index: identically one.
        let b0 = p.beta(0, g1, g2).unwrap();
        assert_eq!(b0.value, Complex64::ONE);
        // Equal arguments: one, exactly.
        let be = p.beta(1, g1, g1).unwrap();
        assert_eq!(be.value, Complex64::ONE);
        // Same-circle pair: unit modulus.
        let b = p.beta(1, g1, g2).unwrap();
        assert_abs_diff_eq!(b.value.norm(), 1.0, epsilon = 1e-8);
        assert!(b.spread < 1e-8);
    }

    #[test]
    fn beta_modulus_on_annulus() {
        let p = annulus(0.3, 8);
        let g1 = p.domain().point_on(1, 0.4);
        let g2 = p.domain().point_on(1, 1.9);
        let b = p.beta(1, g1, g2).unwrap();
        assert_abs_diff_eq!(b.value.norm(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn log_track_single_point_is_principal() {
        let p = eccentric(4);
        let a = c(0.5, 0.2);
        let z = c(-0.4, 0.6);
        let track = p.log_omega_track(&[z], a, 1e-9).unwrap();
        assert_eq!(track.len(), 1);
        let w = p.omega(z, a).unwrap();
        assert!((track[0].log.exp() - w).norm() <= 1e-12 * w.norm());
        assert!(track[0].log.im <= std::f64::consts::PI);
        assert!(track[0].log.im > -std::f64::consts::PI);
    }

    #[test]
    fn log_track_loop_winding() {
        let p = PrimeEvaluator::new(CircularDomain::disc(), 1).unwrap();
        let a = c(0.2, 0.1);
        let r = 0.3;
        let loop_around = |centred_on: Complex64| -> Vec<Complex64> {
            (0..=8)
                .map(|k| centred_on + r * Complex64::cis(std::f64::consts::TAU * k as f64 / 8.0))
                .collect()
        };
        // Loop around alpha: net change 2 pi.
        let around = p.log_omega_track(&loop_around(a), a, 1e-9).unwrap();
        let net = around.last().unwrap().log.im - around[0].log.im;
        assert_abs_diff_eq!(net, std::f64::consts::TAU, epsilon = 1e-8);
        // Loop elsewhere: net change 0.
        let away = p.log_omega_track(&loop_around(c(-0.45, -0.3)), a, 1e-9).unwrap();
        let net = away.last().unwrap().log.im - away[0].log.im;
        assert_abs_diff_eq!(net, 0.0, epsilon = 1e-10);
        // Successive samples stay under the branch threshold.
        for pair in around.windows(2) {
            assert!((pair[1].log.im - pair[0].log.im).abs() < std::f64::consts::PI);
        }
    }

    #[test]
    fn log_track_consistency_with_values() {
        let p = two_circle(5);
        let a = c(0.2, 0.5);
        let path = [c(0.7, 0.0), c(0.2, -0.6), c(-0.6, -0.1), c(-0.1, 0.7)];
        let track = p.log_omega_track(&path, a, 1e-9).unwrap();
        for s in &track {
            let w = p.omega(s.zeta, a).unwrap();
            assert!((s.log.exp() - w).norm() <= 1e-10 * w.norm().max(1e-30));
        }
    }

    #[test]
    fn log_track_clearance_violation() {
        let p = eccentric(4);
        let a = c(0.5, 0.2);
        let err = p
            .log_omega_track(&[c(-0.5, 0.0), a + c(1e-12, 0.0)], a, 1e-9)
            .unwrap_err();
        assert!(matches!(err, Error::Clearance { .. }));
    }

    #[test]
    fn truncation_estimate_decays_with_level() {
        let d = CircularDomain::checked(vec![c(0.3, 0.0)], vec![0.1]).unwrap();
        let coarse = PrimeEvaluator::new(d.clone(), 2).unwrap();
        let fine = PrimeEvaluator::new(d, 5).unwrap();
        let e_coarse = coarse.truncation_estimate().unwrap();
        let e_fine = fine.truncation_estimate().unwrap();
        assert!(e_fine < e_coarse);
        assert!(e_fine < 1e-10);
    }
}
