//! The Dirac hopfion, a localized free-electron solution given in momentum
//! space by
//!
//! ```text
//! Ψ̃(p) = e^{-aE}/E · (1, 0, E - p_z, -(p_x + i p_y)),   E = √(1 + p²),
//! ```
//!
//! with `m = 1` and `a` in Compton wavelengths. Internally the profile is
//! multiplied by `e^{a}`, which cancels in every dispersion and keeps large
//! `a` away from underflow.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dirac::{field_dispersion, Bispinor, DispersionReport, FieldSpace, MomentumPoint, RadialMap, SpinorField};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d, QuadConfig};
use crate::specfun::bessel_k;
use crate::table::{SweepRow, SweepTable};
use crate::uncertainty::GAMMA_NONRELATIVISTIC;

pub const A_MIN: f64 = 0.05;
pub const A_MAX: f64 = 100.0;

/// The `a` values used to trace `γ_H(a)`.
pub const REFERENCE_A: [f64; 9] = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];

const PHI_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfionState {
    a: f64,
}

impl HopfionState {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(Self { a })
        } else {
            Err(Error::domain("HopfionState", a, "a > 0"))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Characteristic momentum: `1/(2a)` in the ultrarelativistic regime,
    /// `1/√a` in the nonrelativistic one.
    fn momentum_scale(&self) -> f64 {
        if self.a < 1.0 {
            0.5 / self.a
        } else {
            1.0 / self.a.sqrt()
        }
    }
}

/// `Ψ̃(p)` at a momentum point (unnormalized, unscaled).
pub fn momentum_bispinor(state: &HopfionState, pt: &MomentumPoint) -> Bispinor {
    Profile { a: state.a, shift: 0.0 }.value(pt.cartesian())
}

/// `|Ψ̃(p)|² = 2 e^{-2aE} (E - p_z)/E`.
pub fn density(state: &HopfionState, pt: &MomentumPoint) -> f64 {
    let e = pt.energy(1.0);
    let pz = pt.p * pt.theta.cos();
    2.0 * (-2.0 * state.a * e).exp() * (e - pz) / e
}

/// `Ψ̃ · e^{shift}`.
struct Profile {
    a: f64,
    shift: f64,
}

impl Profile {
    fn weight(&self, e: f64) -> f64 {
        (self.shift - self.a * e).exp() / e
    }
}

impl SpinorField for Profile {
    fn value(&self, p: [f64; 3]) -> Bispinor {
        let e = (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let w = self.weight(e);
        Bispinor([
            Complex64::new(w, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(w * (e - p[2]), 0.0),
            Complex64::new(-w * p[0], -w * p[1]),
        ])
    }

    fn gradient(&self, p: [f64; 3]) -> [Bispinor; 3] {
        let e = (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let w = self.weight(e);
        // dw/dE = -w (a + 1/E)
        let dw_de = -w * (self.a + 1.0 / e);
        std::array::from_fn(|j| {
            let de = p[j] / e;
            let dw = dw_de * de;
            let dz = if j == 2 { 1.0 } else { 0.0 };
            let (dx, dy) = match j {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                _ => (0.0, 0.0),
            };
            Bispinor([
                Complex64::new(dw, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(dw * (e - p[2]) + w * (de - dz), 0.0),
                Complex64::new(-dw * p[0] - w * dx, -dw * p[1] - w * dy),
            ])
        })
    }
}

fn norm_scaled(state: &HopfionState, cfg: &QuadConfig) -> Result<f64> {
    let a = state.a;
    let cfg = cfg.with_decay_scale(state.momentum_scale());
    // φ-independent density, scaled by e^{2a}
    let r = integrate_2d(
        |p, theta| {
            let e = (1.0 + p * p).sqrt();
            let (st, ct) = theta.sin_cos();
            2.0 * (-2.0 * a * (e - 1.0)).exp() * (e - p * ct) / e * p * p * st
        },
        &cfg,
    )?;
    Ok(2.0 * std::f64::consts::PI * r.value)
}

/// `N_H^{-2} = ∫ |Ψ̃|² d³p` by quadrature. Underflows to zero past
/// `a ≈ 350`.
pub fn norm_const(state: &HopfionState, cfg: &QuadConfig) -> Result<f64> {
    Ok(norm_scaled(state, cfg)? * (-2.0 * state.a).exp())
}

/// The ratio of [`norm_const`] to `K₂(2a)/a`. Independent of `a`; equal to
/// `4π`.
pub fn norm_ratio(state: &HopfionState, cfg: &QuadConfig) -> Result<f64> {
    let a = state.a;
    let k2 = bessel_k(2, 2.0 * a)?;
    if k2.underflow {
        return Err(Error::domain("norm_ratio", a, "a <= 350 (K2 underflow)"));
    }
    Ok(norm_scaled(state, cfg)? * (-2.0 * a).exp() / (k2.value / a))
}

/// `√(Δr² Δp²)` of the hopfion with both means subtracted; `a ∈ [0.05, 100]`.
pub fn gamma_h(state: &HopfionState, cfg: &QuadConfig) -> Result<DispersionReport> {
    if !(A_MIN..=A_MAX).contains(&state.a) {
        return Err(Error::domain("gamma_h", state.a, "0.05 <= a <= 100"));
    }
    let field = Profile {
        a: state.a,
        shift: state.a,
    };
    let map = RadialMap::Linear {
        decay_scale: state.momentum_scale(),
    };
    field_dispersion(&field, FieldSpace::Momentum, map, cfg, PHI_POINTS)
}

/// `γ_H` over strictly ascending `a`, evaluated in parallel.
pub fn gamma_h_curve(a_values: &[f64], cfg: &QuadConfig) -> Result<SweepTable> {
    if a_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("a values must be strictly ascending".into()));
    }
    let rows = a_values
        .par_iter()
        .map(|&a| {
            let rep = gamma_h(&HopfionState::new(a)?, cfg)?;
            Ok(SweepRow {
                param: a,
                gamma: rep.gamma,
                err_est: cfg.rel_tol * rep.gamma,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = SweepTable::new("a");
    table.rows = rows;
    table.metadata.insert("gamma_limit".into(), GAMMA_NONRELATIVISTIC);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_point_value() {
        let s = HopfionState::new(1.3).unwrap();
        let b = momentum_bispinor(&s, &MomentumPoint::new(0.0, 0.0, 0.0));
        let w = (-1.3f64).exp();
        let want = [w, 0.0, w, 0.0];
        for (got, want) in b.0.iter().zip(want) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        struct Numeric<'a>(&'a Profile);
        impl SpinorField for Numeric<'_> {
            fn value(&self, x: [f64; 3]) -> Bispinor {
                self.0.value(x)
            }
        }
        for a in [0.1, 1.0, 20.0] {
            let f = Profile { a, shift: a };
            for p in [[0.1, 0.2, -0.3], [1.5, -0.7, 2.0], [0.0, 0.0, 0.4]] {
                let an = f.gradient(p);
                let nu = Numeric(&f).gradient(p);
                for j in 0..3 {
                    let scale = an[j].norm_sqr().sqrt().max(1e-3);
                    assert!((an[j] - nu[j]).norm_sqr().sqrt() < 1e-8 * scale, "a={a} p={p:?} j={j}");
                }
            }
        }
    }

    #[test]
    fn domain_checks() {
        assert!(HopfionState::new(0.0).is_err());
        assert!(HopfionState::new(f64::INFINITY).is_err());
        let cfg = QuadConfig::default();
        assert!(gamma_h(&HopfionState::new(0.01).unwrap(), &cfg).is_err());
        assert!(gamma_h(&HopfionState::new(150.0).unwrap(), &cfg).is_err());
        assert!(gamma_h_curve(&[1.0, 0.5], &cfg).is_err());
    }
}
