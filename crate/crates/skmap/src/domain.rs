//! Geometry of the circular preimage domain: the unit disc with `M` smaller
//! non-overlapping discs excised, and the elementary Möbius maps pairing each
//! inner circle with its reflection in the unit circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The unit disc minus `M` excised inner discs.
///
/// The unit circle is labelled `C_0` and carries the implicit convention
/// centre `0`, radius `1`. Inner circles `C_1..C_M` are stored by centre
/// `delta_j` and radius `q_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularDomain {
    #[serde(with = "crate::serdes::complex_vec")]
    centres: Vec<Complex64>,
    radii: Vec<f64>,
}

/// Outcome of [`CircularDomain::validate`]: violated constraints (empty iff
/// the domain is admissible), advisory warnings, and a separation
/// figure-of-merit.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    /// Minimum over inner-circle pairs of gap/(sum of radii); infinite when
    /// fewer than two inner circles exist.
    pub separation: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CircularDomain {
    /// Plain constructor; performs no validation so that diagnostic code can
    /// inspect inadmissible configurations. Use [`CircularDomain::checked`]
    /// when an admissible domain is required.
    pub fn new(centres: Vec<Complex64>, radii: Vec<f64>) -> Self {
        assert_eq!(centres.len(), radii.len(), "one radius per centre");
        Self { centres, radii }
    }

    /// Constructor that rejects inadmissible configurations.
    pub fn checked(centres: Vec<Complex64>, radii: Vec<f64>) -> Result<Self> {
        let d = Self::new(centres, radii);
        let report = d.validate();
        if report.is_valid() {
            Ok(d)
        } else {
            Err(Error::InvalidDomain(report.violations))
        }
    }

    /// The simply connected case: no inner circles.
    pub fn disc() -> Self {
        Self::new(Vec::new(), Vec::new())
    }

    /// Number of inner circles `M`.
    pub fn inner_count(&self) -> usize {
        self.centres.len()
    }

    /// Centre of circle `j` (`j = 0` is the unit circle).
    pub fn centre(&self, j: usize) -> Complex64 {
        if j == 0 {
            Complex64::ZERO
        } else {
            self.centres[j - 1]
        }
    }

    /// Radius of circle `j` (`j = 0` is the unit circle).
    pub fn radius(&self, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            self.radii[j - 1]
        }
    }

    pub fn circle_index_check(&self, j: usize) -> Result<()> {
        if j <= self.inner_count() {
            Ok(())
        } else {
            Err(Error::CircleIndex {
                index: j,
                count: self.inner_count(),
            })
        }
    }

    /// Checks the admissibility constraints and computes separation
    /// figures. Reports rather than failing.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut warnings = Vec::new();
        let m = self.inner_count();
        for j in 1..=m {
            let (dj, qj) = (self.centre(j), self.radius(j));
            if !(qj > 0.0) || !qj.is_finite() {
                violations.push(format!("circle {j}: radius must be positive, got {qj}"));
                continue;
            }
            if dj.norm() + qj >= 1.0 {
                violations.push(format!(
                    "circle {j}: |delta|+q >= 1 (|{dj}| + {qj} = {})",
                    dj.norm() + qj
                ));
            }
        }
        let mut separation = f64::INFINITY;
        for j in 1..=m {
            for k in (j + 1)..=m {
                let (dj, qj) = (self.centre(j), self.radius(j));
                let (dk, qk) = (self.centre(k), self.radius(k));
                let gap = (dj - dk).norm() - qj - qk;
                if gap <= 0.0 {
                    violations.push(format!(
                        "circles {j} and {k} overlap or touch (gap {gap:.6})"
                    ));
                } else {
                    let ratio = gap / (qj + qk);
                    separation = separation.min(ratio);
                    if gap < 1.5 * (qj + qk) {
                        warnings.push(format!(
                            "circles {j} and {k}: gap {gap:.4} below 1.5x the radius sum; \
                             truncated products converge slowly here"
                        ));
                    }
                }
            }
        }
        // Proximity to the unit circle strains convergence the same way a
        // nearby mirror-image circle of comparable radius would.
        for j in 1..=m {
            let (dj, qj) = (self.centre(j), self.radius(j));
            let gap = 1.0 - dj.norm() - qj;
            if gap > 0.0 && gap < 1.5 * (2.0 * qj) {
                warnings.push(format!(
                    "circle {j}: gap {gap:.4} to the unit circle below 3x its radius; \
                     truncated products converge slowly here"
                ));
            }
        }
        ValidationReport {
            violations,
            warnings,
            separation,
        }
    }

    /// The Möbius map pairing circle `C_j` with its reflection in the unit
    /// circle: `theta_j(z) = delta_j + q_j^2 z / (1 - conj(delta_j) z)`.
    pub fn generator(&self, j: usize) -> Result<MobiusMap> {
        if j == 0 || j > self.inner_count() {
            return Err(Error::CircleIndex {
                index: j,
                count: self.inner_count(),
            });
        }
        let d = self.centre(j);
        let q = self.radius(j);
        // Coefficients are normalized to unit determinant up front.
        Ok(MobiusMap {
            a: (Complex64::from(q * q) - d * d.conj()) / q,
            b: d / q,
            c: -d.conj() / q,
            d: Complex64::from(1.0 / q),
        })
    }

    /// Point on circle `j` at angle `t`: `delta_j + q_j e^{it}`.
    pub fn boundary_point(&self, j: usize, t: f64) -> Result<BoundaryPoint> {
        self.circle_index_check(j)?;
        let value = self.centre(j) + self.radius(j) * Complex64::cis(t);
        Ok(BoundaryPoint {
            circle: j,
            angle: t,
            value,
        })
    }

    /// Shorthand for `boundary_point(j, t).value` when the index is known
    /// to be in range.
    pub fn point_on(&self, j: usize, t: f64) -> Complex64 {
        self.centre(j) + self.radius(j) * Complex64::cis(t)
    }

    /// True when `z` lies strictly inside the unit disc and strictly outside
    /// every inner circle, with `margin` kept clear of each boundary.
    pub fn contains_with_margin(&self, z: Complex64, margin: f64) -> bool {
        if z.norm() >= 1.0 - margin {
            return false;
        }
        (1..=self.inner_count()).all(|j| (z - self.centre(j)).norm() > self.radius(j) + margin)
    }
}

/// Reflection in the unit circle, `z -> 1/conj(z)`.
pub fn reflect(z: Complex64) -> Result<Complex64> {
    if z == Complex64::ZERO {
        return Err(Error::ReflectOrigin);
    }
    Ok(z.conj().inv())
}

/// A point on one of the domain circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub circle: usize,
    pub angle: f64,
    pub value: Complex64,
}

/// Möbius transformation `z -> (a z + b)/(c z + d)`, kept with unit
/// determinant so that composition stays well scaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// Compensated sum of products `sum_i x_i * y_i` via fused multiply-adds, so
/// that heavy cancellation (e.g. `ad - bc` with large coefficients) does not
/// destroy the result.
fn dot_compensated(xs: &[f64], ys: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let p = x * y;
        comp += f64::mul_add(x, y, -p);
        let t = sum + p;
        // Neumaier branch of Kahan summation.
        comp += if sum.abs() >= p.abs() {
            (sum - t) + p
        } else {
            (p - t) + sum
        };
        sum = t;
    }
    sum + comp
}

impl MobiusMap {
    pub fn identity() -> Self {
        Self {
            a: Complex64::ONE,
            b: Complex64::ZERO,
            c: Complex64::ZERO,
            d: Complex64::ONE,
        }
    }

    /// `ad - bc`, evaluated with compensation: word compositions can have
    /// coefficients of size `10^k` whose determinant is still exactly one,
    /// and the naive expression would lose that to cancellation.
    pub fn determinant(&self) -> Complex64 {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let re = dot_compensated(
            &[a.re, -a.im, -b.re, b.im],
            &[d.re, d.im, c.re, c.im],
        );
        let im = dot_compensated(
            &[a.re, a.im, -b.re, -b.im],
            &[d.im, d.re, c.im, c.re],
        );
        Complex64::new(re, im)
    }

    /// Rescales the coefficients so the determinant is one.
    pub fn normalized(&self) -> Self {
        let k = self.determinant().sqrt().inv();
        Self {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        if den == Complex64::ZERO {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        (self.a * z + self.b) / den
    }

    /// Derivative of the map; equals `1/(cz+d)^2` at unit determinant.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.determinant() / (den * den)
    }

    /// Matrix product: `self.compose(other)` applies `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Self {
        // Inverse of a unit-determinant matrix.
        let k = self.determinant().sqrt().inv();
        Self {
            a: self.d * k,
            b: -self.b * k,
            c: -self.c * k,
            d: self.a * k,
        }
    }
}
