//! Slit-endpoint preimages (the `gamma` points, zeros of the slit-map
//! derivative on the boundary circles) and the prefactor functions `S` that
//! multiply the monomial prime-function product in the mapping derivative.
//! One prefactor exists per auxiliary slit domain; all of them represent the
//! same mapping up to a constant factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prime::{AlphaCache, PointBuf, PrimeEvaluator};
use crate::slitmaps::{DiscSlitMap, HalfPlaneMap, RadialSlitMap, SlitMapKind};

/// The two slit-endpoint preimages found on one circle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GammaPair {
    pub circle: usize,
    /// Angles of the roots on the circle parameterization, increasing.
    pub angles: [f64; 2],
    #[serde(with = "crate::serdes::complex_pair")]
    pub gamma1: Complex64,
    #[serde(with = "crate::serdes::complex_pair")]
    pub gamma2: Complex64,
}

impl GammaPair {
    pub fn points(&self) -> [Complex64; 2] {
        [self.gamma1, self.gamma2]
    }
}

/// All slit-endpoint preimages for one slit-map choice, with the worst
/// residual `|d lambda / d zeta|` left at the polished roots.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaSet {
    pub kind: SlitMapKind,
    pub pairs: Vec<GammaPair>,
    pub residual: f64,
}

impl GammaSet {
    pub fn pair_for(&self, circle: usize) -> Option<&GammaPair> {
        self.pairs.iter().find(|p| p.circle == circle)
    }

    /// Flattened γ points over all circles.
    pub fn points(&self) -> Vec<Complex64> {
        self.pairs
            .iter()
            .flat_map(|p| p.points().into_iter())
            .collect()
    }
}

/// Derivative of the chosen slit map, used both for scanning and residuals.
enum SlitDeriv<'a> {
    HalfPlane(HalfPlaneMap<'a>),
    Disc(DiscSlitMap<'a>),
    Radial(RadialSlitMap<'a>),
}

impl<'a> SlitDeriv<'a> {
    fn new(prime: &'a PrimeEvaluator, kind: SlitMapKind) -> Result<Self> {
        kind.validate(prime.domain())?;
        Ok(match kind {
            SlitMapKind::HalfPlaneRadial => Self::HalfPlane(HalfPlaneMap::new(prime)?),
            SlitMapKind::CircularSlitDisc { alpha } => Self::Disc(DiscSlitMap::new(prime, alpha)?),
            SlitMapKind::UnboundedRadial { alpha, beta } => {
                Self::Radial(RadialSlitMap::new(prime, alpha, beta)?)
            }
        })
    }

    /// Full slit-map derivative. For the disc variant this is the strip
    /// derivative `eta'/eta`, whose boundary zeros are the arc endpoints.
    fn deriv(&self, z: Complex64) -> Result<Complex64> {
        let v = match self {
            Self::HalfPlane(m) => m.deriv(z)?.finite(),
            Self::Disc(m) => m.strip_deriv(z)?.finite(),
            Self::Radial(m) => m.deriv(z)?.finite(),
        };
        v.ok_or(Error::AtSingularPoint { point: z })
    }

    fn scan_circles(&self, m: usize) -> Vec<usize> {
        match self {
            Self::HalfPlane(_) | Self::Disc(_) => (1..=m).collect(),
            Self::Radial(_) => (0..=m).collect(),
        }
    }
}

/// Finds the two slit-endpoint preimages on every relevant circle by
/// scanning the phase-aligned real part of the tangential slit-map
/// derivative and polishing each sign change by bisection.
pub fn find_gamma(prime: &PrimeEvaluator, kind: SlitMapKind) -> Result<GammaSet> {
    find_gamma_scanned(prime, kind, 720)
}

pub fn find_gamma_scanned(
    prime: &PrimeEvaluator,
    kind: SlitMapKind,
    scan_samples: usize,
) -> Result<GammaSet> {
    let deriv = SlitDeriv::new(prime, kind)?;
    let domain = prime.domain();
    let mut pairs = Vec::new();
    let mut residual = 0.0f64;
    for j in deriv.scan_circles(domain.inner_count()) {
        let q = domain.radius(j);
        let tangential = |t: f64| -> Result<Complex64> {
            let z = domain.point_on(j, t);
            Ok(deriv.deriv(z)? * (Complex64::I * q * Complex64::cis(t)))
        };
        // Slit direction from the axial mean of the tangential derivative.
        let mut axis = Complex64::ZERO;
        let mut samples = Vec::with_capacity(scan_samples);
        for k in 0..scan_samples {
            let t = std::f64::consts::TAU * (k as f64 + 0.5) / scan_samples as f64;
            let h = tangential(t)?;
            samples.push((t, h));
            if h.norm_sqr() > 0.0 && h.is_finite() {
                let u = h / h.norm();
                axis += u * u;
            }
        }
        if axis == Complex64::ZERO {
            return Err(Error::RootCount {
                circle: j,
                expected: 2,
                found: 0,
                profile: "tangential derivative vanished on every sample".into(),
            });
        }
        let phi = 0.5 * axis.arg();
        let dir = Complex64::cis(-phi);
        let s = |h: Complex64| (dir * h).re;
        // Sign changes over the closed sweep.
        let mut brackets = Vec::new();
        for k in 0..scan_samples {
            let (t0, h0) = samples[k];
            let (t1, h1) = samples[(k + 1) % scan_samples];
            let t1 = if k + 1 == scan_samples {
                t1 + std::f64::consts::TAU
            } else {
                t1
            };
            if s(h0) == 0.0 {
                continue;
            }
            if s(h0) * s(h1) < 0.0 || (s(h1) == 0.0 && s(h0) != 0.0) {
                brackets.push((t0, t1, s(h0)));
            }
        }
        if brackets.len() != 2 {
            let profile = format!(
                "{} sign changes at angles [{}]",
                brackets.len(),
                brackets
                    .iter()
                    .map(|b| format!("{:.4}", 0.5 * (b.0 + b.1)))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            return Err(Error::RootCount {
                circle: j,
                expected: 2,
                found: brackets.len(),
                profile,
            });
        }
        let mut angles = [0.0f64; 2];
        for (i, &(mut lo, mut hi, s_lo)) in brackets.iter().enumerate() {
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let sm = s(tangential(mid)?);
                if sm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (sm > 0.0) == (s_lo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            angles[i] = (0.5 * (lo + hi)).rem_euclid(std::f64::consts::TAU);
        }
        angles.sort_by(f64::total_cmp);
        let g = [domain.point_on(j, angles[0]), domain.point_on(j, angles[1])];
        for p in g {
            residual = residual.max(deriv.deriv(p)?.norm());
        }
        pairs.push(GammaPair {
            circle: j,
            angles,
            gamma1: g[0],
            gamma2: g[1],
        });
    }
    Ok(GammaSet {
        kind,
        pairs,
        residual,
    })
}

/// Prefactor evaluator. Holds the per-point caches for the numerator points
/// of the chosen slit-map derivative and for all `gamma` denominators.
pub struct Prefactor<'a> {
    prime: &'a PrimeEvaluator,
    kind: SlitMapKind,
    num: Vec<AlphaCache>,
    den: Vec<AlphaCache>,
    /// Double-pole factor caches for mappings onto unbounded polygonal
    /// regions: `(zeta_inf, 1/conj(zeta_inf))`.
    pole: Option<(AlphaCache, AlphaCache)>,
}

impl<'a> Prefactor<'a> {
    pub fn new(prime: &'a PrimeEvaluator, gamma: &GammaSet) -> Result<Self> {
        let kind = gamma.kind;
        kind.validate(prime.domain())?;
        let num_points: Vec<Complex64> = match kind {
            SlitMapKind::HalfPlaneRadial => vec![Complex64::ONE, -Complex64::ONE],
            SlitMapKind::CircularSlitDisc { alpha } => vec![alpha, alpha.conj().inv()],
            SlitMapKind::UnboundedRadial { alpha, beta } => vec![
                alpha,
                beta,
                alpha.conj().inv(),
                beta.conj().inv(),
            ],
        };
        let expected: Vec<usize> = match kind {
            SlitMapKind::UnboundedRadial { .. } => (0..=prime.domain().inner_count()).collect(),
            _ => (1..=prime.domain().inner_count()).collect(),
        };
        let scanned: Vec<usize> = gamma.pairs.iter().map(|p| p.circle).collect();
        if scanned != expected {
            return Err(Error::InvalidSpec(format!(
                "gamma set covers circles {scanned:?}, expected {expected:?}"
            )));
        }
        let num = num_points
            .into_iter()
            .map(|p| prime.alpha_cache(p))
            .collect::<Result<_>>()?;
        let den = gamma
            .points()
            .into_iter()
            .map(|p| prime.alpha_cache(p))
            .collect::<Result<_>>()?;
        Ok(Self {
            prime,
            kind,
            num,
            den,
            pole: None,
        })
    }

    /// Extends a half-plane prefactor with the double pole at `zeta_inf`
    /// required for unbounded polygonal images.
    pub fn with_infinity(mut self, zeta_inf: Complex64) -> Result<Self> {
        if self.kind != SlitMapKind::HalfPlaneRadial {
            return Err(Error::InvalidSpec(
                "the unbounded-image prefactor builds on the half-plane slit map".into(),
            ));
        }
        if zeta_inf == Complex64::ZERO {
            return Err(Error::InvalidSpec(
                "zeta_inf must be nonzero; recentre the domain if infinity should sit at 0"
                    .into(),
            ));
        }
        if !self.prime.domain().contains_with_margin(zeta_inf, 0.0) {
            return Err(Error::InvalidSpec(
                "zeta_inf must lie inside the circular domain".into(),
            ));
        }
        self.pole = Some((
            self.prime.alpha_cache(zeta_inf)?,
            self.prime.alpha_cache(zeta_inf.conj().inv())?,
        ));
        Ok(self)
    }

    pub fn kind(&self) -> SlitMapKind {
        self.kind
    }

    /// Evaluates `S` on a prepared point buffer.
    pub fn eval_with(&self, buf: &PointBuf) -> Result<Complex64> {
        let numerator = match self.kind {
            SlitMapKind::HalfPlaneRadial | SlitMapKind::CircularSlitDisc { .. } => {
                let (w0, dw0) = self.prime.omega_pair_with(buf, &self.num[0])?;
                let (w1, dw1) = self.prime.omega_pair_with(buf, &self.num[1])?;
                dw0 * w1 - dw1 * w0
            }
            SlitMapKind::UnboundedRadial { .. } => {
                let (wa, dwa) = self.prime.omega_pair_with(buf, &self.num[0])?;
                let (wb, dwb) = self.prime.omega_pair_with(buf, &self.num[1])?;
                let (war, dwar) = self.prime.omega_pair_with(buf, &self.num[2])?;
                let (wbr, dwbr) = self.prime.omega_pair_with(buf, &self.num[3])?;
                dwa * (wb * war * wbr) - dwb * (wa * war * wbr) + dwar * (wa * wb * wbr)
                    - dwbr * (wa * wb * war)
            }
        };
        let mut value = numerator;
        for cache in &self.den {
            value /= self.prime.omega_with(buf, cache)?;
        }
        if let Some((p1, p2)) = &self.pole {
            let w = self.prime.omega_with(buf, p1)? * self.prime.omega_with(buf, p2)?;
            value /= w * w;
        }
        if !value.is_finite() {
            return Err(Error::AtSingularPoint { point: buf.zeta() });
        }
        Ok(value)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut buf = PointBuf::new();
        self.prime.fill_point(z, &mut buf)?;
        self.eval_with(&buf)
    }
}

/// `S` for the upper half plane with radial slits.
pub fn s_halfplane(prime: &PrimeEvaluator, gamma: &GammaSet, z: Complex64) -> Result<Complex64> {
    expect_kind(gamma, SlitMapKind::HalfPlaneRadial)?;
    Prefactor::new(prime, gamma)?.eval(z)
}

/// `S` for the circular-slit disc with interior parameter `alpha`.
pub fn s_disc(
    prime: &PrimeEvaluator,
    alpha: Complex64,
    gamma: &GammaSet,
    z: Complex64,
) -> Result<Complex64> {
    expect_kind(gamma, SlitMapKind::CircularSlitDisc { alpha })?;
    Prefactor::new(prime, gamma)?.eval(z)
}

/// `S` for the unbounded radial slit plane with parameters `alpha, beta`.
pub fn s_unbounded_radial(
    prime: &PrimeEvaluator,
    alpha: Complex64,
    beta: Complex64,
    gamma: &GammaSet,
    z: Complex64,
) -> Result<Complex64> {
    expect_kind(gamma, SlitMapKind::UnboundedRadial { alpha, beta })?;
    Prefactor::new(prime, gamma)?.eval(z)
}

/// `S` for unbounded polygonal images: the half-plane prefactor divided by
/// `[omega(z, z_inf) omega(z, 1/conj(z_inf))]^2`.
pub fn s_infinity(
    prime: &PrimeEvaluator,
    gamma: &GammaSet,
    zeta_inf: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    expect_kind(gamma, SlitMapKind::HalfPlaneRadial)?;
    Prefactor::new(prime, gamma)?
        .with_infinity(zeta_inf)?
        .eval(z)
}

fn expect_kind(gamma: &GammaSet, kind: SlitMapKind) -> Result<()> {
    if gamma.kind == kind {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "gamma set was solved for {:?}, requested {:?}",
            gamma.kind, kind
        )))
    }
}
