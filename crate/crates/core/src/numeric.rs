//! Small numerical kernels: composite Simpson quadrature, golden-section
//! maximization and evenly spaced grids.

use crate::error::{Error, Result};

/// Default node count for composite Simpson quadrature.
pub const SIMPSON_NODES: usize = 10_001;

/// Relative tolerance for the node-halving convergence check.
pub const SIMPSON_TOLERANCE: f64 = 1e-8;

/// Composite Simpson rule on `[lo, hi]` with `nodes` points (rounded up to odd).
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, nodes: usize) -> f64 {
    if hi == lo {
        return 0.0;
    }
    let nodes = nodes.max(3) | 1;
    let intervals = nodes - 1;
    let h = (hi - lo) / intervals as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + i as f64 * h);
    }
    sum * h / 3.0
}

/// Simpson integration with a convergence check against half the nodes.
///
/// The residual is the gap between the `nodes` and `(nodes + 1) / 2` estimates,
/// relative to the magnitude of the finer one (absolute when that is below one).
pub fn simpson_checked<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    nodes: usize,
    tolerance: f64,
) -> Result<f64> {
    let fine = simpson(&f, lo, hi, nodes);
    let coarse = simpson(&f, lo, hi, nodes.div_ceil(2));
    let residual = (fine - coarse).abs() / fine.abs().max(1.0);
    if residual.is_finite() && residual <= tolerance {
        Ok(fine)
    } else {
        Err(Error::Quadrature {
            residual,
            tolerance,
        })
    }
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
///
/// Returns `(argmax, value)`. The endpoints are compared against the interior
/// optimum so that boundary maxima are located exactly.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while (b - a).abs() > xtol && iterations < 500 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        lo + i as f64 * step
                    }
                })
                .collect()
        }
    }
}

/// `count` geometrically spaced points from `lo` to `hi` inclusive; both must be positive.
pub fn geomspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), count)
        .into_iter()
        .map(f64::exp)
        .collect()
}
