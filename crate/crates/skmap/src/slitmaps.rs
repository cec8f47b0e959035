//! Canonical slit maps built from prime-function ratios. Each of them has
//! constant argument (or constant modulus, for the disc variant) on every
//! boundary circle, which is what makes them usable as auxiliary rectilinear
//! domains for the mapping construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::CircularDomain;
use crate::error::{Error, Result};
use crate::prime::{wrap_angle, AlphaCache, LogSample, PointBuf, PrimeEvaluator};

/// Choice of auxiliary slit domain. Selects the prefactor formula and the
/// slit-endpoint root equation used downstream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlitMapKind {
    /// Upper half plane with `M` radial slits; no interior parameters.
    HalfPlaneRadial,
    /// Unit disc with `M` concentric circular-arc slits; `alpha` maps to 0.
    CircularSlitDisc {
        #[serde(with = "crate::serdes::complex_pair")]
        alpha: Complex64,
    },
    /// Whole plane with `M+1` radial slits; `alpha` maps to 0, `beta` to
    /// infinity.
    UnboundedRadial {
        #[serde(with = "crate::serdes::complex_pair")]
        alpha: Complex64,
        #[serde(with = "crate::serdes::complex_pair")]
        beta: Complex64,
    },
}

impl SlitMapKind {
    /// Interior-parameter sanity for a given domain.
    pub fn validate(&self, domain: &CircularDomain) -> Result<()> {
        let check_interior = |p: Complex64, name: &str| -> Result<()> {
            if p == Complex64::ZERO {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be nonzero (its reflection 1/conj({name}) is needed)"
                )));
            }
            if !domain.contains_with_margin(p, 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "{name} = {p} must lie inside the circular domain"
                )));
            }
            Ok(())
        };
        match self {
            Self::HalfPlaneRadial => Ok(()),
            Self::CircularSlitDisc { alpha } => check_interior(*alpha, "alpha"),
            Self::UnboundedRadial { alpha, beta } => {
                check_interior(*alpha, "alpha")?;
                check_interior(*beta, "beta")?;
                if alpha == beta {
                    return Err(Error::InvalidSpec(
                        "alpha and beta must be distinct".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Evaluation result of a slit map: poles are structural points of these
/// maps, not failures, so they are tagged rather than returned as raw
/// non-finite numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlitValue {
    Finite(Complex64),
    Pole,
}

impl SlitValue {
    fn of(v: Complex64) -> Self {
        if v.is_finite() {
            Self::Finite(v)
        } else {
            Self::Pole
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Self::Pole)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Self::Finite(v) => Some(*v),
            Self::Pole => None,
        }
    }

    #[track_caller]
    pub fn unwrap_finite(&self) -> Complex64 {
        self.finite().expect("slit map evaluated at a pole")
    }
}

/// Ratio `omega(z, z1)/omega(z, z2)`: simple zero at `z1`, simple pole at
/// `z2`, constant argument on every circle when `z1, z2` share a circle.
pub struct RatioMap<'a> {
    prime: &'a PrimeEvaluator,
    num: AlphaCache,
    den: AlphaCache,
    buf: std::cell::RefCell<PointBuf>,
}

impl<'a> RatioMap<'a> {
    pub fn new(prime: &'a PrimeEvaluator, zero: Complex64, pole: Complex64) -> Result<Self> {
        Ok(Self {
            prime,
            num: prime.alpha_cache(zero)?,
            den: prime.alpha_cache(pole)?,
            buf: std::cell::RefCell::new(PointBuf::new()),
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let n = self.prime.omega_with(&buf, &self.num)?;
        let d = self.prime.omega_with(&buf, &self.den)?;
        Ok(SlitValue::of(n / d))
    }
}

/// `F_j(z; z1, z2) = omega(z, z1)/omega(z, z2)` for `z1, z2` on circle `j`.
pub fn f_ratio(
    prime: &PrimeEvaluator,
    j: usize,
    z: Complex64,
    z1: Complex64,
    z2: Complex64,
) -> Result<SlitValue> {
    prime.domain().circle_index_check(j)?;
    RatioMap::new(prime, z1, z2)?.eval(z)
}

/// Map onto the upper half plane with `M` radial slits:
/// `lambda(z) = -i omega(z,1)/omega(z,-1)`, with `z = 1 -> 0` and
/// `z = -1 -> infinity`; the unit circle goes to the real axis.
pub struct HalfPlaneMap<'a> {
    prime: &'a PrimeEvaluator,
    plus: AlphaCache,
    minus: AlphaCache,
    buf: std::cell::RefCell<PointBuf>,
}

impl<'a> HalfPlaneMap<'a> {
    pub fn new(prime: &'a PrimeEvaluator) -> Result<Self> {
        Ok(Self {
            prime,
            plus: prime.alpha_cache(Complex64::ONE)?,
            minus: prime.alpha_cache(-Complex64::ONE)?,
            buf: std::cell::RefCell::new(PointBuf::new()),
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let n = self.prime.omega_with(&buf, &self.plus)?;
        let d = self.prime.omega_with(&buf, &self.minus)?;
        Ok(SlitValue::of(-Complex64::I * n / d))
    }

    /// Numerator of the derivative:
    /// `omega_z(z,1) omega(z,-1) - omega_z(z,-1) omega(z,1)`. Its zeros on
    /// the inner circles are the slit-endpoint preimages.
    pub fn deriv_numerator(&self, z: Complex64) -> Result<Complex64> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let (wp, dwp) = self.prime.omega_pair_with(&buf, &self.plus)?;
        let (wm, dwm) = self.prime.omega_pair_with(&buf, &self.minus)?;
        Ok(dwp * wm - dwm * wp)
    }

    /// `d lambda/d z`, a double pole at `z = -1`.
    pub fn deriv(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let (wp, dwp) = self.prime.omega_pair_with(&buf, &self.plus)?;
        let (wm, dwm) = self.prime.omega_pair_with(&buf, &self.minus)?;
        Ok(SlitValue::of(
            -Complex64::I * (dwp * wm - dwm * wp) / (wm * wm),
        ))
    }
}

pub fn lambda_halfplane(prime: &PrimeEvaluator, z: Complex64) -> Result<SlitValue> {
    HalfPlaneMap::new(prime)?.eval(z)
}

pub fn dlambda_halfplane(prime: &PrimeEvaluator, z: Complex64) -> Result<SlitValue> {
    HalfPlaneMap::new(prime)?.deriv(z)
}

/// Map onto the whole plane with `M+1` radial slits:
/// `Q(z; a, b) = omega(z,a) omega(z,1/conj(a)) / [omega(z,b) omega(z,1/conj(b))]`.
pub struct RadialSlitMap<'a> {
    prime: &'a PrimeEvaluator,
    a1: AlphaCache,
    a2: AlphaCache,
    b1: AlphaCache,
    b2: AlphaCache,
    buf: std::cell::RefCell<PointBuf>,
}

impl<'a> RadialSlitMap<'a> {
    pub fn new(prime: &'a PrimeEvaluator, alpha: Complex64, beta: Complex64) -> Result<Self> {
        SlitMapKind::UnboundedRadial { alpha, beta }.validate(prime.domain())?;
        Ok(Self {
            prime,
            a1: prime.alpha_cache(alpha)?,
            a2: prime.alpha_cache(alpha.conj().inv())?,
            b1: prime.alpha_cache(beta)?,
            b2: prime.alpha_cache(beta.conj().inv())?,
            buf: std::cell::RefCell::new(PointBuf::new()),
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let n = self.prime.omega_with(&buf, &self.a1)? * self.prime.omega_with(&buf, &self.a2)?;
        let d = self.prime.omega_with(&buf, &self.b1)? * self.prime.omega_with(&buf, &self.b2)?;
        Ok(SlitValue::of(n / d))
    }

    /// Numerator of `dQ/dz` (the alternating four-term sum); its zeros on
    /// all circles `C_0..C_M` are the slit-endpoint preimages.
    pub fn deriv_numerator(&self, z: Complex64) -> Result<Complex64> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let (wa, dwa) = self.prime.omega_pair_with(&buf, &self.a1)?;
        let (war, dwar) = self.prime.omega_pair_with(&buf, &self.a2)?;
        let (wb, dwb) = self.prime.omega_pair_with(&buf, &self.b1)?;
        let (wbr, dwbr) = self.prime.omega_pair_with(&buf, &self.b2)?;
        Ok(dwa * (wb * war * wbr) - dwb * (wa * war * wbr) + dwar * (wa * wb * wbr)
            - dwbr * (wa * wb * war))
    }

    pub fn deriv(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let (wb, dwb) = self.prime.omega_pair_with(&buf, &self.b1)?;
        let (wbr, dwbr) = self.prime.omega_pair_with(&buf, &self.b2)?;
        let (wa, dwa) = self.prime.omega_pair_with(&buf, &self.a1)?;
        let (war, dwar) = self.prime.omega_pair_with(&buf, &self.a2)?;
        let t = dwa * (wb * war * wbr) - dwb * (wa * war * wbr) + dwar * (wa * wb * wbr)
            - dwbr * (wa * wb * war);
        let den = wb * wbr;
        Ok(SlitValue::of(t / (den * den)))
    }
}

pub fn q_map(
    prime: &PrimeEvaluator,
    z: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Result<SlitValue> {
    RadialSlitMap::new(prime, alpha, beta)?.eval(z)
}

/// Map onto the unit disc with `M` concentric circular-arc slits:
/// `eta(z) = omega(z, a) / (|a| omega(z, 1/conj(a)))`, `a -> 0`.
pub struct DiscSlitMap<'a> {
    prime: &'a PrimeEvaluator,
    num: AlphaCache,
    den: AlphaCache,
    alpha_mod: f64,
    buf: std::cell::RefCell<PointBuf>,
}

impl<'a> DiscSlitMap<'a> {
    pub fn new(prime: &'a PrimeEvaluator, alpha: Complex64) -> Result<Self> {
        SlitMapKind::CircularSlitDisc { alpha }.validate(prime.domain())?;
        Ok(Self {
            prime,
            num: prime.alpha_cache(alpha)?,
            den: prime.alpha_cache(alpha.conj().inv())?,
            alpha_mod: alpha.norm(),
            buf: std::cell::RefCell::new(PointBuf::new()),
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let n = self.prime.omega_with(&buf, &self.num)?;
        let d = self.prime.omega_with(&buf, &self.den)?;
        Ok(SlitValue::of(n / (self.alpha_mod * d)))
    }

    /// Numerator of `d eta/d z`; zeros on the inner circles locate the arc
    /// endpoints.
    pub fn deriv_numerator(&self, z: Complex64) -> Result<Complex64> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let (wn, dwn) = self.prime.omega_pair_with(&buf, &self.num)?;
        let (wd, dwd) = self.prime.omega_pair_with(&buf, &self.den)?;
        Ok(dwn * wd - dwd * wn)
    }

    /// Derivative of the strip variant `log eta`: `eta'/eta`, a map with the
    /// same boundary zeros as `eta'` but no zero at `alpha` itself.
    pub fn strip_deriv(&self, z: Complex64) -> Result<SlitValue> {
        let mut buf = self.buf.borrow_mut();
        self.prime.fill_point(z, &mut buf)?;
        let (wn, dwn) = self.prime.omega_pair_with(&buf, &self.num)?;
        let (wd, dwd) = self.prime.omega_pair_with(&buf, &self.den)?;
        Ok(SlitValue::of((dwn * wd - dwd * wn) / (wn * wd)))
    }

    /// Logarithm of `eta` tracked continuously along a polyline (the strip
    /// variant of the map). The branch is principal at the first path point,
    /// which fixes the cut; deform the path to move it.
    pub fn strip_along(&self, path: &[Complex64]) -> Result<Vec<LogSample>> {
        let ln_num = self
            .prime
            .log_omega_track(path, self.num.alpha(), 1e-12)?;
        let ln_den = self
            .prime
            .log_omega_track(path, self.den.alpha(), 1e-12)?;
        // The two refinements may differ; merge on the numerator chain and
        // re-track the denominator on its points.
        let points: Vec<Complex64> = ln_num.iter().map(|s| s.zeta).collect();
        let ln_den = if ln_den.len() == ln_num.len() {
            ln_den
        } else {
            self.prime.log_omega_track(&points, self.den.alpha(), 1e-12)?
        };
        Ok(ln_num
            .iter()
            .zip(&ln_den)
            .map(|(n, d)| LogSample {
                zeta: n.zeta,
                log: n.log - d.log - self.alpha_mod.ln(),
            })
            .collect())
    }
}

pub fn eta_map(prime: &PrimeEvaluator, z: Complex64, alpha: Complex64) -> Result<SlitValue> {
    DiscSlitMap::new(prime, alpha)?.eval(z)
}

/// Evenly spaced boundary samples, offset half a step so that distinguished
/// points at angle 0 or pi are never hit exactly.
pub fn circle_samples(
    domain: &CircularDomain,
    j: usize,
    count: usize,
) -> Result<Vec<(f64, Complex64)>> {
    domain.circle_index_check(j)?;
    Ok((0..count)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
            (t, domain.point_on(j, t))
        })
        .collect())
}

/// Largest deviation of `arg v` from the circular mean direction, wrapped
/// mod 2 pi. Zero and non-finite entries are skipped.
pub fn arg_spread(values: &[Complex64]) -> f64 {
    let mut mean = Complex64::ZERO;
    let mut used = 0usize;
    for v in values {
        if v.is_finite() && v.norm_sqr() > 0.0 {
            mean += v / v.norm();
            used += 1;
        }
    }
    if used == 0 || mean == Complex64::ZERO {
        return f64::NAN;
    }
    let phi = mean.arg();
    values
        .iter()
        .filter(|v| v.is_finite() && v.norm_sqr() > 0.0)
        .map(|v| wrap_angle(v.arg() - phi).abs())
        .fold(0.0, f64::max)
}

/// Same as [`arg_spread`] but on axial data: arguments are compared mod pi,
/// for maps whose boundary image is a full line through the origin.
pub fn arg_spread_axial(values: &[Complex64]) -> f64 {
    let mut mean = Complex64::ZERO;
    let mut used = 0usize;
    for v in values {
        if v.is_finite() && v.norm_sqr() > 0.0 {
            let u = v / v.norm();
            mean += u * u;
            used += 1;
        }
    }
    if used == 0 || mean == Complex64::ZERO {
        return f64::NAN;
    }
    let phi = 0.5 * mean.arg();
    values
        .iter()
        .filter(|v| v.is_finite() && v.norm_sqr() > 0.0)
        .map(|v| {
            let d = wrap_angle(v.arg() - phi);
            // Fold into (-pi/2, pi/2].
            let d = if d > std::f64::consts::FRAC_PI_2 {
                d - std::f64::consts::PI
            } else if d <= -std::f64::consts::FRAC_PI_2 {
                d + std::f64::consts::PI
            } else {
                d
            };
            d.abs()
        })
        .fold(0.0, f64::max)
}

/// Relative spread `(max - min)/mean` of the moduli.
pub fn modulus_spread(values: &[Complex64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut sum = 0.0;
    let mut used = 0usize;
    for v in values {
        if v.is_finite() {
            let m = v.norm();
            lo = lo.min(m);
            hi = hi.max(m);
            sum += m;
            used += 1;
        }
    }
    if used == 0 {
        return f64::NAN;
    }
    (hi - lo) / (sum / used as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc_prime() -> PrimeEvaluator {
        PrimeEvaluator::new(CircularDomain::disc(), 2).unwrap()
    }

    fn eccentric(level: usize) -> PrimeEvaluator {
        let d = CircularDomain::checked(vec![c(0.3, 0.0)], vec![0.1]).unwrap();
        PrimeEvaluator::new(d, level).unwrap()
    }

    fn two_circle(level: usize) -> PrimeEvaluator {
        let d = CircularDomain::checked(vec![c(-0.4, 0.0), c(0.4, 0.0)], vec![0.1, 0.1]).unwrap();
        PrimeEvaluator::new(d, level).unwrap()
    }

    #[test]
    fn ratio_map_simply_connected_reduction() {
        let p = disc_prime();
        // F(i; 1, -1) = (i-1)/(i+1) = i
        let v = f_ratio(&p, 0, c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0))
            .unwrap()
            .unwrap_finite();
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
        // Zero of the numerator.
        let v = f_ratio(&p, 0, c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0))
            .unwrap()
            .unwrap_finite();
        assert_eq!(v, Complex64::ZERO);
        // Pole of the denominator.
        let v = f_ratio(&p, 0, c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(v.is_pole());
    }

    #[test]
    fn lambda_reductions_and_pole() {
        let p = disc_prime();
        assert_eq!(
            lambda_halfplane(&p, c(1.0, 0.0)).unwrap().unwrap_finite(),
            Complex64::ZERO
        );
        // lambda(i) = -i (i-1)/(i+1) = 1: the unit circle lands on the real axis.
        let v = lambda_halfplane(&p, c(0.0, 1.0)).unwrap().unwrap_finite();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        assert!(lambda_halfplane(&p, c(-1.0, 0.0)).unwrap().is_pole());
        // dlambda = -2i/(z+1)^2; at 0 that is -2i.
        let d = dlambda_halfplane(&p, Complex64::ZERO).unwrap().unwrap_finite();
        assert!((d - c(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn dlambda_matches_finite_differences() {
        let p = two_circle(6);
        let map = HalfPlaneMap::new(&p).unwrap();
        let h = 1e-6;
        for z in [c(0.1, 0.5), c(-0.6, 0.2), c(0.1, -0.72)] {
            let d = map.deriv(z).unwrap().unwrap_finite();
            let fd = (map.eval(z + c(h, 0.0)).unwrap().unwrap_finite()
                - map.eval(z - c(h, 0.0)).unwrap().unwrap_finite())
                / (2.0 * h);
            assert!((d - fd).norm() <= 1e-7 * d.norm().max(1.0), "{d} vs {fd}");
        }
    }

    #[test]
    fn q_map_reduction_and_zero() {
        let p = disc_prime();
        let alpha = c(0.5, 0.0);
        let beta = c(-0.5, 0.0);
        assert_eq!(
            q_map(&p, alpha, alpha, beta).unwrap().unwrap_finite(),
            Complex64::ZERO
        );
        let z = c(0.0, 1.0);
        let got = q_map(&p, z, alpha, beta).unwrap().unwrap_finite();
        // Direct substitution of omega(z, a) = z - a.
        let want = (z - alpha) * (z - alpha.conj().inv())
            / ((z - beta) * (z - beta.conj().inv()));
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn eta_blaschke_reduction() {
        let p = disc_prime();
        let alpha = c(0.4, 0.3);
        assert_eq!(
            eta_map(&p, alpha, alpha).unwrap().unwrap_finite(),
            Complex64::ZERO
        );
        for k in 0..100 {
            let z = Complex64::cis(std::f64::consts::TAU * (k as f64 + 0.5) / 100.0);
            let v = eta_map(&p, z, alpha).unwrap().unwrap_finite();
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn arg_constancy_on_circles() {
        let p = two_circle(6);
        let d = p.domain().clone();
        // F with reference points on circle 1.
        let z1 = d.point_on(1, 0.3);
        let z2 = d.point_on(1, 2.1);
        let f = RatioMap::new(&p, z1, z2).unwrap();
        for l in 0..=2 {
            let vals: Vec<Complex64> = circle_samples(&d, l, 200)
                .unwrap()
                .iter()
                .map(|&(_, z)| f.eval(z).unwrap().unwrap_finite())
                .collect();
            let spread = if l == 1 {
                arg_spread_axial(&vals)
            } else {
                arg_spread(&vals)
            };
            assert!(spread < 1e-6, "F arg spread {spread} on circle {l}");
        }
        // Q with interior parameters.
        let q = RadialSlitMap::new(&p, c(0.1, 0.45), c(0.05, -0.5)).unwrap();
        for l in 0..=2 {
            let vals: Vec<Complex64> = circle_samples(&d, l, 200)
                .unwrap()
                .iter()
                .map(|&(_, z)| q.eval(z).unwrap().unwrap_finite())
                .collect();
            let spread = arg_spread(&vals);
            assert!(spread < 1e-6, "Q arg spread {spread} on circle {l}");
        }
    }

    #[test]
    fn lambda_boundary_geometry() {
        let p = eccentric(6);
        let d = p.domain().clone();
        let map = HalfPlaneMap::new(&p).unwrap();
        // C_0 to the real axis.
        for (_, z) in circle_samples(&d, 0, 400).unwrap() {
            let v = map.eval(z).unwrap().unwrap_finite();
            assert!(v.im.abs() < 1e-8, "Im lambda = {} at {z}", v.im);
        }
        // C_1 to a ray through the origin.
        let vals: Vec<Complex64> = circle_samples(&d, 1, 400)
            .unwrap()
            .iter()
            .map(|&(_, z)| map.eval(z).unwrap().unwrap_finite())
            .collect();
        assert!(arg_spread(&vals) < 1e-6);
        // Interior goes to the (closed) upper half plane.
        for k in 0..200 {
            let z = 0.9
                * Complex64::cis(std::f64::consts::TAU * k as f64 / 200.0)
                * ((k % 9) as f64 / 9.0);
            if d.contains_with_margin(z, 0.02) {
                let v = map.eval(z).unwrap().unwrap_finite();
                assert!(v.im >= -1e-9, "Im lambda = {} at {z}", v.im);
            }
        }
    }

    #[test]
    fn eta_constant_modulus_on_inner_circle() {
        let p = annulus_prime(0.3, 8);
        let alpha = c(0.55, 0.0);
        let map = DiscSlitMap::new(&p, alpha).unwrap();
        let vals: Vec<Complex64> = circle_samples(p.domain(), 1, 200)
            .unwrap()
            .iter()
            .map(|&(_, z)| map.eval(z).unwrap().unwrap_finite())
            .collect();
        assert!(modulus_spread(&vals) < 1e-8);
    }

    fn annulus_prime(q: f64, level: usize) -> PrimeEvaluator {
        let d = CircularDomain::checked(vec![Complex64::ZERO], vec![q]).unwrap();
        PrimeEvaluator::new(d, level).unwrap()
    }

    #[test]
    fn strip_map_boundary_lines() {
        let p = eccentric(6);
        let d = p.domain().clone();
        let alpha = c(-0.45, 0.2);
        let map = DiscSlitMap::new(&p, alpha).unwrap();
        // Strip of the unit circle: real part zero.
        let path: Vec<Complex64> = (0..=60)
            .map(|k| d.point_on(0, 0.3 + 2.0 * k as f64 / 60.0))
            .collect();
        for s in map.strip_along(&path).unwrap() {
            assert!(s.log.re.abs() < 1e-9, "Re strip = {} at {}", s.log.re, s.zeta);
        }
        // Strip of an inner circle: constant real part.
        let path: Vec<Complex64> = (0..=60)
            .map(|k| d.point_on(1, std::f64::consts::TAU * k as f64 / 60.0))
            .collect();
        let logs = map.strip_along(&path).unwrap();
        let res: Vec<f64> = logs.iter().map(|s| s.log.re).collect();
        let (lo, hi) = res
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
                (l.min(x), h.max(x))
            });
        assert!(hi - lo < 1e-8, "strip Re spread {}", hi - lo);
        // Its exponential reproduces eta.
        for s in &logs {
            let eta = map.eval(s.zeta).unwrap().unwrap_finite();
            assert!((s.log.exp() - eta).norm() <= 1e-10 * eta.norm());
        }
    }

    #[test]
    fn slit_kind_validation() {
        let d = CircularDomain::checked(vec![c(0.3, 0.0)], vec![0.1]).unwrap();
        assert!(SlitMapKind::HalfPlaneRadial.validate(&d).is_ok());
        assert!(SlitMapKind::CircularSlitDisc { alpha: c(0.5, 0.5) }
            .validate(&d)
            .is_ok());
        // Zero alpha has no reflection point.
        assert!(SlitMapKind::CircularSlitDisc {
            alpha: Complex64::ZERO
        }
        .validate(&d)
        .is_err());
        // Inside an excised disc.
        assert!(SlitMapKind::CircularSlitDisc { alpha: c(0.3, 0.05) }
            .validate(&d)
            .is_err());
        // Coincident parameters.
        assert!(SlitMapKind::UnboundedRadial {
            alpha: c(0.5, 0.0),
            beta: c(0.5, 0.0)
        }
        .validate(&d)
        .is_err());
    }
}
