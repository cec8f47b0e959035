//! Complex-valued quadrature over real parameters: an adaptive Gauss-Kronrod
//! driver for smooth segments, and Gauss-Jacobi rules that absorb the
//! `(1-x)^alpha` endpoint behaviour of the mapping integrand at prevertices.

use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// 7-point Gauss / 15-point Kronrod abscissae on the positive half interval.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod pass over `[a, b]`. The integrand is called at the 15
/// nodes in ascending order. Returns the K15 value and an error estimate.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    // Ascending node order: -x[0], -x[1], ..., 0, ..., x[1], x[0].
    let mut values = [Complex64::ZERO; 15];
    for i in 0..7 {
        values[i] = f(mid - half * XGK[i])?;
    }
    values[7] = f(mid)?;
    for i in (0..7).rev() {
        values[14 - i] = f(mid + half * XGK[i])?;
    }
    let mut kronrod = WGK[7] * values[7];
    for i in 0..7 {
        kronrod += WGK[i] * (values[i] + values[14 - i]);
    }
    let mut gauss = WG[3] * values[7];
    for (k, wg) in WG[..3].iter().enumerate() {
        let i = 2 * k + 1;
        gauss += wg * (values[i] + values[14 - i]);
    }
    let err = ((kronrod - gauss) * half).norm();
    Ok((kronrod * half, err))
}

#[derive(Debug, Clone, Copy)]
pub struct QuadValue {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive bisection with a per-interval budget proportional to interval
/// length, so accepted errors sum below the requested tolerance.
pub fn adaptive_gk<F>(
    f: &mut F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
) -> Result<QuadValue>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    // First pass to scale the relative tolerance.
    let (coarse, _) = gk15(f, a, b)?;
    let tol = tol_abs.max(tol_rel * coarse.norm());
    let mut total = Complex64::ZERO;
    let mut err_total = 0.0;
    let mut evals = 15usize;
    let span = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(f, lo, hi)?;
        evals += 15;
        let budget = tol * ((hi - lo).abs() / span);
        if err <= budget || (hi - lo).abs() < 1e-14 * span {
            if err > budget {
                return Err(Error::Quadrature {
                    from: Complex64::from(lo),
                    to: Complex64::from(hi),
                    estimate: err,
                });
            }
            total += val;
            err_total += err;
        } else {
            if depth >= 40 || evals > 400_000 {
                return Err(Error::Quadrature {
                    from: Complex64::from(lo),
                    to: Complex64::from(hi),
                    estimate: err,
                });
            }
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(QuadValue {
        value: total,
        error: err_total,
        evaluations: evals,
    })
}

/// Gauss-Jacobi rule on `(-1, 1)` with weight `(1-x)^alpha`: the singular
/// factor sits at the right endpoint. Nodes come out ascending.
#[derive(Debug, Clone)]
pub struct EndpointRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl EndpointRule {
    pub fn new(degree: usize, alpha: f64) -> Result<Self> {
        let deg = NonZeroUsize::new(degree)
            .ok_or_else(|| Error::QuadratureRule("degree must be positive".into()))?;
        let a = FiniteAboveNegOneF64::new(alpha)
            .ok_or_else(|| Error::QuadratureRule(format!("exponent {alpha} not above -1")))?;
        let zero = FiniteAboveNegOneF64::new(0.0).expect("0 > -1");
        let rule = GaussJacobi::new(deg, a, zero);
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self {
            alpha,
            nodes,
            weights,
        })
    }

    /// Integrates `(1-x)^alpha g(x)` over `(-1, 1)` given the smooth part
    /// `g`; nodes are visited in ascending order.
    pub fn integrate<F>(&self, g: &mut F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let mut sum = Complex64::ZERO;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * g(x)?;
        }
        Ok(sum)
    }
}

/// Plain Gauss-Legendre nodes and weights on `(-1, 1)`, ascending.
pub fn legendre(degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let deg = NonZeroUsize::new(degree)
        .ok_or_else(|| Error::QuadratureRule("degree must be positive".into()))?;
    let rule = GaussLegendre::new(deg);
    let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}
