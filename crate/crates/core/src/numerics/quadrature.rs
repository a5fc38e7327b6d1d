use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// How the integrand behaves at the ends of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointWeight {
    None,
    /// Integrand vanishes like `√(x-a)·√(b-x)`; integrated in `θ` with
    /// `x = a + (b-a)·sin²θ`, which makes it smooth at both ends.
    SqrtBothEnds,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub a: f64,
    pub b: f64,
    pub panels: usize,
    pub endpoint_weight: EndpointWeight,
}

impl QuadratureSpec {
    pub fn new(a: f64, b: f64, panels: usize, endpoint_weight: EndpointWeight) -> Self {
        Self {
            a,
            b,
            panels,
            endpoint_weight,
        }
    }
}

// 5-point Gauss–Legendre on [-1, 1]
const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

fn composite<F>(mut g: F, lo: f64, hi: f64, panels: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * width;
        let mut panel = 0.0;
        for (node, weight) in NODES.iter().zip(WEIGHTS.iter()) {
            panel += weight * g(mid + 0.5 * width * node)?;
        }
        total += 0.5 * width * panel;
    }
    Ok(total)
}

/// Fixed-panel composite Gauss–Legendre integration of `f` over `[a, b]`.
pub fn integrate<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(spec.a < spec.b) || spec.panels < 8 {
        return Err(Error::Domain(format!("invalid quadrature spec {spec:?}")));
    }
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { x, value: v })
        }
    };
    match spec.endpoint_weight {
        EndpointWeight::None => composite(eval, spec.a, spec.b, spec.panels),
        EndpointWeight::SqrtBothEnds => {
            let span = spec.b - spec.a;
            composite(
                |theta: f64| {
                    let s = theta.sin();
                    let x = spec.a + span * s * s;
                    Ok(eval(x)? * span * (2.0 * theta).sin())
                },
                0.0,
                FRAC_PI_2,
                spec.panels,
            )
        }
    }
}
