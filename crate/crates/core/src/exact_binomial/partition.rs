use serde::Serialize;

use crate::error::{domain, regime, Error, Result};

/// Lattice rounding of an arbitrary real `(p, eps)` pair: the centre index
/// `m`, the number of lattice points `h` in `[np - n eps, np)` and `g` in
/// `[np, np + n eps]`, and the rounded parameters built from them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuousPartition {
    pub n: u64,
    pub p: f64,
    pub eps: f64,
    pub m: u64,
    pub h: u64,
    pub g: u64,
    pub p_tilde: f64,
    pub eps1_tilde: f64,
    pub eps2_tilde: f64,
    pub theta: f64,
}

impl ContinuousPartition {
    /// Upper limit `n eps / (n eps - 1)` on `theta`.
    pub fn theta_limit(&self) -> f64 {
        let ne = self.n as f64 * self.eps;
        ne / (ne - 1.0)
    }
}

pub fn continuous_partition(n: u64, p: f64, eps: f64) -> Result<ContinuousPartition> {
    if !(p > 0.0 && p < 1.0) {
        return Err(regime("0 < p < 1", format!("p = {p}")));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let nf = n as f64;
    if !(eps * nf > 1.0) {
        return Err(regime(
            "1/n < eps <= min(p, 1-p)",
            format!("eps = {eps} is not above 1/n = {}", 1.0 / nf),
        ));
    }
    let limit = p.min(1.0 - p);
    if eps > limit {
        return Err(Error::OneSidedRegime { eps, limit });
    }
    let centre = nf * p;
    let width = nf * eps;
    // Integers in [centre - width, centre) and in [centre, centre + width].
    let first_right = centre.ceil();
    let h = (first_right - (centre - width).ceil()).max(0.0) as u64;
    let g = ((centre + width).floor() - first_right + 1.0).max(0.0) as u64;
    let m = first_right as u64;
    let eps1_tilde = h as f64 / nf;
    let eps2_tilde = g as f64 / nf;
    Ok(ContinuousPartition {
        n,
        p,
        eps,
        m,
        h,
        g,
        p_tilde: m as f64 / nf,
        eps1_tilde,
        eps2_tilde,
        theta: (eps / eps1_tilde).max(eps / eps2_tilde),
    })
}
