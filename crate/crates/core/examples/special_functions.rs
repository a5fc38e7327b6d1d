//! Error functions, Brent root finding and the sin²-substituted quadrature.

use mispar::numerics::{brent_root, erf, erf_inv, erfc, integrate, mills_ratio, Bracket, EndpointWeight, QuadratureSpec};
use std::f64::consts::PI;

fn main() -> mispar::Result<()> {
    for x in [0.0, 0.5, 1.0, 2.0, 5.0] {
        println!("x={x:<4} erf={:.15} erfc={:.6e} mills={:.10}", erf(x), erfc(x), mills_ratio(x));
    }
    println!("erf_inv(0.5) = {:.15}", erf_inv(0.5)?);

    let root = brent_root(|x| x.cos() - x, &Bracket::new(0.0, 1.0))?;
    println!("cos x = x at {root:.15}");

    // semicircle: area π/2, square-root zeros at both ends
    let spec = QuadratureSpec::new(-1.0, 1.0, 16, EndpointWeight::SqrtBothEnds);
    let area = integrate(|x| (1.0 - x * x).sqrt(), &spec)?;
    println!("semicircle area {area:.15} (π/2 = {:.15})", PI / 2.0);
    Ok(())
}
