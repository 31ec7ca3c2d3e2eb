//! Ground state of a hydrogen-like ion.
//!
//! Lengths in Compton wavelengths, `ħ = m = c = 1`. Here `γ_c = √(1 - α²Z²)`
//! is the Dirac ground-state exponent, unrelated to the uncertainty product
//! itself. The state is
//!
//! ```text
//! ψ = N_G r^{γ_c-1} e^{-λr} (1, 0, iκ cos θ, -iκ e^{iφ} sin θ),
//! λ = √(1 - γ_c²),  κ = √((1 - γ_c)/(1 + γ_c)).
//! ```

use num_complex::Complex64;
use serde::Serialize;

use crate::dirac::{field_dispersion, Bispinor, DispersionReport, FieldSpace, RadialMap, SpinorField};
use crate::error::{Error, Result};
use crate::quadrature::QuadConfig;
use crate::specfun::gamma_fn;

/// CODATA 2018 fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoulombState {
    z: Option<u32>,
    alpha: f64,
    gamma_c: f64,
}

impl CoulombState {
    pub fn new(z: u32) -> Result<Self> {
        Self::with_alpha(z, FINE_STRUCTURE)
    }

    pub fn with_alpha(z: u32, alpha: f64) -> Result<Self> {
        if z == 0 {
            return Err(Error::domain("CoulombState", 0.0, "Z >= 1"));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain("CoulombState", alpha, "alpha > 0"));
        }
        let az = alpha * z as f64;
        if az >= 1.0 {
            return Err(Error::domain("CoulombState", az, "alpha * Z < 1"));
        }
        Ok(Self {
            z: Some(z),
            alpha,
            gamma_c: (1.0 - az * az).sqrt(),
        })
    }

    /// A state labelled directly by its exponent, `0 < γ_c <= 1`. `γ_c = 1`
    /// is the vanishing-field limit.
    pub fn from_gamma(gamma_c: f64) -> Result<Self> {
        if !(gamma_c > 0.0 && gamma_c <= 1.0) {
            return Err(Error::domain("CoulombState", gamma_c, "0 < gamma_c <= 1"));
        }
        Ok(Self {
            z: None,
            alpha: FINE_STRUCTURE,
            gamma_c,
        })
    }

    pub fn z(&self) -> Option<u32> {
        self.z
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    /// `λ = √(1 - γ_c²)`, the inverse decay length.
    pub fn decay_rate(&self) -> f64 {
        ((1.0 - self.gamma_c) * (1.0 + self.gamma_c)).sqrt()
    }

    /// `κ = √((1 - γ_c)/(1 + γ_c))`, the lower-component amplitude.
    pub fn small_ratio(&self) -> f64 {
        ((1.0 - self.gamma_c) / (1.0 + self.gamma_c)).sqrt()
    }

    /// `N_G`. Zero at `γ_c = 1`, where the state is not normalizable.
    pub fn normalization(&self) -> Result<f64> {
        let g = self.gamma_c;
        let num = 2f64.powf(2.0 * g) * (1.0 + g).powf(g + 1.5) * (1.0 - g).powf(g + 0.5);
        Ok((num / (4.0 * std::f64::consts::PI * gamma_fn(1.0 + 2.0 * g)?)).sqrt())
    }

    fn require_finite_momentum(&self, what: &'static str) -> Result<()> {
        if self.gamma_c > 0.5 {
            Ok(())
        } else {
            Err(Error::Divergence {
                what,
                reason: "momentum dispersion is infinite for gamma_c <= 1/2",
            })
        }
    }
}

/// The normalized ground state at `(r, θ, φ)`, `r > 0`.
pub fn ground_bispinor(state: &CoulombState, r: f64, theta: f64, phi: f64) -> Result<Bispinor> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("ground_bispinor", r, "r > 0"));
    }
    let g = state.normalization()? * r.powf(state.gamma_c - 1.0) * (-state.decay_rate() * r).exp();
    let k = state.small_ratio();
    let (st, ct) = theta.sin_cos();
    Ok(Bispinor([
        Complex64::new(g, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, g * k * ct),
        Complex64::new(0.0, -g * k * st) * Complex64::from_polar(1.0, phi),
    ]))
}

/// `√(Δr² Δp²)` in the closed form
/// `√((γ² + 5γ + 2 - γ³) / (2γ(2γ - 1)))`.
///
/// At `γ_c = 1` this gives `√(7/2)`, while the dispersions of the state
/// itself give `√3` there; see [`uncertainty_product_exact`].
pub fn uncertainty_product_closed(state: &CoulombState) -> Result<f64> {
    state.require_finite_momentum("uncertainty_product_closed")?;
    let g = state.gamma_c;
    Ok(((g * g + 5.0 * g + 2.0 - g * g * g) / (2.0 * g * (2.0 * g - 1.0))).sqrt())
}

/// `√(Δr² Δp²)` from the moments of [`ground_bispinor`]:
///
/// ```text
/// Δr² = (γ+1)(2γ+1) / (2λ²),   Δp² = λ² (2-γ) / (γ(2γ-1)).
/// ```
pub fn uncertainty_product_exact(state: &CoulombState) -> Result<f64> {
    state.require_finite_momentum("uncertainty_product_exact")?;
    let g = state.gamma_c;
    Ok(((2.0 - g) * (g + 1.0) * (2.0 * g + 1.0) / (2.0 * g * (2.0 * g - 1.0))).sqrt())
}

/// `d = (2(1+γ)(1-γ)²(2-γ) / (γ(4γ²-1)))^{1/4}`.
pub fn d_parameter(state: &CoulombState) -> Result<f64> {
    state.require_finite_momentum("d_parameter")?;
    let g = state.gamma_c;
    let x = 2.0 * (1.0 + g) * (1.0 - g).powi(2) * (2.0 - g) / (g * (4.0 * g * g - 1.0));
    Ok(x.powf(0.25))
}

/// Largest `Z` with `√(1 - α²Z²) > 1/2`, i.e. `Z < √3/(2α)`. `None` when no
/// finite answer fits in `u32` (including `α → 0`).
pub fn max_z_finite(alpha: f64) -> Option<u32> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return None;
    }
    let bound = 3f64.sqrt() / (2.0 * alpha);
    if bound >= u32::MAX as f64 {
        return None;
    }
    let ok = |z: f64| (1.0 - (alpha * z).powi(2)).sqrt() > 0.5;
    let mut z = bound.floor();
    while z > 0.0 && !ok(z) {
        z -= 1.0;
    }
    while ok(z + 1.0) {
        z += 1.0;
    }
    (z >= 1.0).then_some(z as u32)
}

struct GroundField {
    norm: f64,
    gamma: f64,
    lambda: f64,
    kappa: f64,
}

impl GroundField {
    fn radial(&self, r: f64) -> (f64, f64) {
        // g = N r^{γ-1} e^{-λr} and h = g/r
        let g = self.norm * r.powf(self.gamma - 1.0) * (-self.lambda * r).exp();
        (g, g / r)
    }
}

impl SpinorField for GroundField {
    fn value(&self, x: [f64; 3]) -> Bispinor {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let (g, h) = self.radial(r);
        let k = self.kappa;
        Bispinor([
            Complex64::new(g, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, k * h * x[2]),
            Complex64::new(0.0, -k * h) * Complex64::new(x[0], x[1]),
        ])
    }

    fn gradient(&self, x: [f64; 3]) -> [Bispinor; 3] {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let (g, h) = self.radial(r);
        let dg = g * ((self.gamma - 1.0) / r - self.lambda) / r;
        let dh = h * ((self.gamma - 2.0) / r - self.lambda) / r;
        let k = self.kappa;
        let xy = Complex64::new(x[0], x[1]);
        std::array::from_fn(|j| {
            let dz = if j == 2 { 1.0 } else { 0.0 };
            let dxy = match j {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                _ => Complex64::new(0.0, 0.0),
            };
            Bispinor([
                Complex64::new(dg * x[j], 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, k * (dh * x[j] * x[2] + h * dz)),
                Complex64::new(0.0, -k) * (xy * (dh * x[j]) + dxy * h),
            ])
        })
    }
}

/// Azimuthal points for the oracle; the integrands carry at most `e^{±2iφ}`.
const ORACLE_PHI_POINTS: usize = 8;

/// `Δr²` and `Δp²` of [`ground_bispinor`] by direct three-dimensional
/// quadrature, with `Δp² = ∫ Σ_α |∇ψ_α|² d³r / N²` and both means computed
/// rather than assumed zero.
///
/// The radius is mapped as `r = t^{1/(2γ_c-1)}`, which turns the
/// `r^{2γ_c-2}` behaviour of the momentum integrand at the origin into a
/// constant.
pub fn quadrature_oracle(state: &CoulombState, cfg: &QuadConfig) -> Result<DispersionReport> {
    state.require_finite_momentum("quadrature_oracle")?;
    let lambda = state.decay_rate();
    if lambda == 0.0 {
        return Err(Error::InvalidInput("the gamma_c = 1 state is not normalizable".into()));
    }
    let field = GroundField {
        norm: state.normalization()?,
        gamma: state.gamma_c,
        lambda,
        kappa: state.small_ratio(),
    };
    let map = RadialMap::Power {
        exponent: 1.0 / (2.0 * state.gamma_c - 1.0),
        decay_scale: 1.0 / lambda,
    };
    field_dispersion(&field, FieldSpace::Position, map, cfg, ORACLE_PHI_POINTS)
}
