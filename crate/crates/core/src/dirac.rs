//! Positive-energy Dirac states and their position/momentum dispersions.
//!
//! Units: ħ = c = 1. A state is either given by its two spin amplitudes
//! `f(p, θ, φ, ±)` on the Weyl-basis bispinors `u(p, ±)`, or directly as a
//! four-component field in position or momentum space. Both routes evaluate
//! `N²`, `⟨r⟩`, `⟨p⟩`, `Δr²` and `Δp²` with the adaptive quadrature of
//! [`crate::quadrature`] in `(p, θ)` and a periodic trapezoid rule in `φ`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d_vec, QuadConfig};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub const DEFAULT_PHI_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

/// A momentum in spherical coordinates (units of `mc` when `m = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPoint {
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
}

impl MomentumPoint {
    pub fn new(p: f64, theta: f64, phi: f64) -> Self {
        Self { p, theta, phi }
    }

    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let p = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = if p > 0.0 {
            (v[2] / p).clamp(-1.0, 1.0).acos()
        } else {
            0.0
        };
        Self {
            p,
            theta,
            phi: v[1].atan2(v[0]),
        }
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.p * st * cp, self.p * st * sp, self.p * ct]
    }

    /// `E_p = √(m² + p²)`.
    pub fn energy(&self, mass: f64) -> f64 {
        (mass * mass + self.p * self.p).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bispinor(pub [Complex64; 4]);

impl Bispinor {
    pub const ZERO: Bispinor = Bispinor([Complex64 { re: 0.0, im: 0.0 }; 4]);

    /// `self† other`.
    pub fn inner(&self, other: &Bispinor) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Add for Bispinor {
    type Output = Bispinor;
    fn add(self, rhs: Bispinor) -> Bispinor {
        Bispinor(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for Bispinor {
    type Output = Bispinor;
    fn sub(self, rhs: Bispinor) -> Bispinor {
        Bispinor(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Mul<Complex64> for Bispinor {
    type Output = Bispinor;
    fn mul(self, rhs: Complex64) -> Bispinor {
        Bispinor(self.0.map(|c| c * rhs))
    }
}

impl Mul<f64> for Bispinor {
    type Output = Bispinor;
    fn mul(self, rhs: f64) -> Bispinor {
        Bispinor(self.0.map(|c| c * rhs))
    }
}

fn spinor_parts(p: [f64; 3], spin: Spin, mass: f64) -> (f64, [Complex64; 4]) {
    let [px, py, pz] = p;
    let e = (mass * mass + px * px + py * py + pz * pz).sqrt();
    let me = mass + e;
    let v = match spin {
        Spin::Up => [
            Complex64::new(me + pz, 0.0),
            Complex64::new(px, py),
            Complex64::new(me - pz, 0.0),
            Complex64::new(-px, -py),
        ],
        Spin::Down => [
            Complex64::new(px, -py),
            Complex64::new(me - pz, 0.0),
            Complex64::new(-px, py),
            Complex64::new(me + pz, 0.0),
        ],
    };
    (e, v)
}

/// Weyl-representation positive-energy bispinor `u(p, s)`, normalized so
/// that `u†(p,s) u(p,s') = δ_{ss'}`.
pub fn bispinor_u(pt: &MomentumPoint, spin: Spin, mass: f64) -> Bispinor {
    bispinor_u_cartesian(pt.cartesian(), spin, mass)
}

pub fn bispinor_u_cartesian(p: [f64; 3], spin: Spin, mass: f64) -> Bispinor {
    let (e, v) = spinor_parts(p, spin, mass);
    let c = 1.0 / (4.0 * e * (e + mass)).sqrt();
    Bispinor(v.map(|x| x * c))
}

/// `∂u/∂p_j` for `j = x, y, z`.
pub fn bispinor_u_gradient(p: [f64; 3], spin: Spin, mass: f64) -> [Bispinor; 3] {
    let (e, v) = spinor_parts(p, spin, mass);
    let c = 1.0 / (4.0 * e * (e + mass)).sqrt();
    let dc_de = -c * (2.0 * e + mass) / (2.0 * e * (e + mass));
    let one = Complex64::new(1.0, 0.0);
    std::array::from_fn(|j| {
        let de = p[j] / e;
        let dx = if j == 0 { one } else { Complex64::new(0.0, 0.0) };
        let dy = if j == 1 { I } else { Complex64::new(0.0, 0.0) };
        let dz = if j == 2 { 1.0 } else { 0.0 };
        // ∂v/∂p_j
        let dv = match spin {
            Spin::Up => [
                Complex64::new(de + dz, 0.0),
                dx + dy,
                Complex64::new(de - dz, 0.0),
                -(dx + dy),
            ],
            Spin::Down => [
                dx - dy,
                Complex64::new(de - dz, 0.0),
                -(dx - dy),
                Complex64::new(de + dz, 0.0),
            ],
        };
        Bispinor(std::array::from_fn(|k| v[k] * (dc_de * de) + dv[k] * c))
    })
}

/// Central difference refined by one Richardson step.
fn richardson<T, F>(g: F, x: f64, h: f64) -> T
where
    T: Sub<Output = T> + Mul<f64, Output = T> + Copy,
    F: Fn(f64) -> T,
{
    let d1 = (g(x + h) - g(x - h)) * (0.5 / h);
    let h2 = 0.5 * h;
    let d2 = (g(x + h2) - g(x - h2)) * (0.5 / h2);
    (d2 * 4.0 - d1) * (1.0 / 3.0)
}

#[derive(Clone, Copy)]
struct C(Complex64);

impl Sub for C {
    type Output = C;
    fn sub(self, r: C) -> C {
        C(self.0 - r.0)
    }
}

impl Mul<f64> for C {
    type Output = C;
    fn mul(self, r: f64) -> C {
        C(self.0 * r)
    }
}

/// One spin component `f(p, θ, φ, s)` of an electron amplitude.
pub trait SpinAmplitude: Send + Sync {
    fn value(&self, pt: &MomentumPoint) -> Complex64;

    /// `(∂_p f, ∂_θ f, ∂_φ f)`. The default uses Richardson-refined central
    /// differences with step `max(1e-5, 1e-5·p)`.
    fn partials(&self, pt: &MomentumPoint) -> [Complex64; 3] {
        let h = 1e-5_f64.max(1e-5 * pt.p);
        let hp = h.min(0.25 * pt.p).max(f64::MIN_POSITIVE);
        let dp = richardson(|p| C(self.value(&MomentumPoint { p, ..*pt })), pt.p, hp).0;
        let dt = richardson(|theta| C(self.value(&MomentumPoint { theta, ..*pt })), pt.theta, 1e-5).0;
        let df = richardson(|phi| C(self.value(&MomentumPoint { phi, ..*pt })), pt.phi, 1e-5).0;
        [dp, dt, df]
    }
}

impl<F> SpinAmplitude for F
where
    F: Fn(&MomentumPoint) -> Complex64 + Send + Sync,
{
    fn value(&self, pt: &MomentumPoint) -> Complex64 {
        self(pt)
    }
}

/// The identically vanishing amplitude.
#[derive(Debug, Clone, Copy, Default)]
pub struct Vanishing;

impl SpinAmplitude for Vanishing {
    fn value(&self, _: &MomentumPoint) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn partials(&self, _: &MomentumPoint) -> [Complex64; 3] {
        [Complex64::new(0.0, 0.0); 3]
    }
}

type RealFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A spherically symmetric amplitude `f(p)`, optionally with its derivative.
#[derive(Clone)]
pub struct RadialAmplitude {
    f: Arc<RealFn>,
    df: Option<Arc<RealFn>>,
}

impl RadialAmplitude {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            df: None,
        }
    }

    pub fn with_derivative<F, D>(f: F, df: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
        }
    }
}

impl SpinAmplitude for RadialAmplitude {
    fn value(&self, pt: &MomentumPoint) -> Complex64 {
        Complex64::new((self.f)(pt.p), 0.0)
    }

    fn partials(&self, pt: &MomentumPoint) -> [Complex64; 3] {
        let dp = match &self.df {
            Some(df) => df(pt.p),
            None => {
                let h = 1e-5_f64.max(1e-5 * pt.p).min(0.25 * pt.p);
                richardson(|p| (self.f)(p), pt.p, h)
            }
        };
        [
            Complex64::new(dp, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]
    }
}

/// The two independent amplitudes `f(p, θ, φ, ±)` of a positive-energy
/// electron state.
#[derive(Clone)]
pub struct AmplitudePair {
    pub plus: Arc<dyn SpinAmplitude>,
    pub minus: Arc<dyn SpinAmplitude>,
    /// Trapezoid points for the azimuthal integral.
    pub phi_points: usize,
}

impl AmplitudePair {
    pub fn new(plus: impl SpinAmplitude + 'static, minus: impl SpinAmplitude + 'static) -> Self {
        Self {
            plus: Arc::new(plus),
            minus: Arc::new(minus),
            phi_points: DEFAULT_PHI_POINTS,
        }
    }

    pub fn spin_up(plus: impl SpinAmplitude + 'static) -> Self {
        Self::new(plus, Vanishing)
    }

    /// The same pair with the spin labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            plus: Arc::clone(&self.minus),
            minus: Arc::clone(&self.plus),
            phi_points: self.phi_points,
        }
    }

    pub fn with_phi_points(mut self, n: usize) -> Self {
        self.phi_points = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionReport {
    pub norm_sq: f64,
    pub mean_r: [f64; 3],
    pub mean_p: [f64; 3],
    pub delta_r_sq: f64,
    pub delta_p_sq: f64,
    /// `√(Δr² Δp²)` in units of ħ.
    pub gamma: f64,
}

impl DispersionReport {
    fn from_moments(norm_sq: f64, mean_r: [f64; 3], r2: f64, mean_p: [f64; 3], p2: f64) -> Result<Self> {
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(Error::InvalidInput(format!(
                "state is not normalizable (N² = {norm_sq})"
            )));
        }
        let sq = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
        let delta_r_sq = r2 - sq(mean_r);
        let delta_p_sq = p2 - sq(mean_p);
        Ok(Self {
            norm_sq,
            mean_r,
            mean_p,
            delta_r_sq,
            delta_p_sq,
            gamma: (delta_r_sq * delta_p_sq).sqrt(),
        })
    }

    /// `d = (Δp²/Δr²)^{1/4} / m`.
    pub fn scale_parameter(&self, mass: f64) -> f64 {
        (self.delta_p_sq / self.delta_r_sq).powf(0.25) / mass
    }
}

fn check_phi_points(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("phi_points must be positive".into()))
    } else {
        Ok(())
    }
}

const MOMENTS: usize = 9;

/// Integrates the nine moment densities with the integrand divided by a
/// coarse estimate of `N²`, so that absolute tolerances apply to normalized
/// moments (zero-mean components included) whatever the state's norm.
fn normalized_moments<F>(integrand: F, cfg: &QuadConfig) -> Result<[f64; MOMENTS]>
where
    F: Fn(f64, f64, &mut [f64]),
{
    let coarse = cfg.with_tolerances(1e-300, 1e-4);
    let n0 = integrate_2d_vec(
        |p, t, out: &mut [f64]| {
            let mut buf = [0.0; MOMENTS];
            integrand(p, t, &mut buf);
            out[0] = buf[0];
        },
        1,
        &coarse,
    )?[0]
        .value;
    if !(n0 > 0.0) || !n0.is_finite() {
        return Err(Error::InvalidInput(format!("state is not normalizable (N² = {n0})")));
    }
    let rows = integrate_2d_vec(
        |p, t, out: &mut [f64]| {
            integrand(p, t, out);
            out.iter_mut().for_each(|v| *v /= n0);
        },
        MOMENTS,
        cfg,
    )?;
    Ok(std::array::from_fn(|k| rows[k].value * n0))
}

/// `N²`, `⟨p⟩`, `⟨r⟩`, `Δp²` and `Δr²` of the state `Σ_s u(p,s) f(p,s)`.
///
/// `Δr²` uses the spherical-coordinate functional in terms of `f` alone:
/// gradient terms, the mass term `1 - m/E + m²p²/(4E⁴)`, the spin-diagonal
/// azimuthal current and the `(+,-)` spin-mixing term
/// `(1 - m/E) Re[(-f₊* ↔∂_θ f₋ + i cot θ f₊* ↔∂_φ f₋) e^{-iφ}]`. `⟨r⟩` is the first
/// moment of `i∇_p` on the full four-component wave function.
pub fn dispersion_functional(amp: &AmplitudePair, mass: f64, cfg: &QuadConfig) -> Result<DispersionReport> {
    if !(mass >= 0.0) || !mass.is_finite() {
        return Err(Error::domain("dispersion_functional", mass, "mass >= 0"));
    }
    check_phi_points(amp.phi_points)?;
    let nphi = amp.phi_points;
    let dphi = 2.0 * PI / nphi as f64;
    let spins = [(Spin::Up, &amp.plus), (Spin::Down, &amp.minus)];

    let integrand = |p: f64, theta: f64, out: &mut [f64]| {
        out.fill(0.0);
        if p == 0.0 {
            return;
        }
        let (st, ct) = theta.sin_cos();
        let e = (mass * mass + p * p).sqrt();
        let kinetic = if mass == 0.0 { 1.0 } else { p * p / (e * (e + mass)) };
        let mass_term = kinetic + mass * mass * p * p / (4.0 * e.powi(4));
        let w_bulk = p * p * st * dphi;
        let w_r2 = st * dphi;

        for k in 0..nphi {
            let phi = k as f64 * dphi;
            let (sp, cp) = phi.sin_cos();
            let pt = MomentumPoint { p, theta, phi };
            let cart = [p * st * cp, p * st * sp, p * ct];
            let p_hat = [st * cp, st * sp, ct];
            let t_hat = [ct * cp, ct * sp, -st];
            let f_hat = [-sp, cp, 0.0];

            let mut psi = Bispinor::ZERO;
            let mut dpsi = [Bispinor::ZERO; 3];
            let mut dens = 0.0;
            let mut diag = 0.0;
            let mut vals = [Complex64::new(0.0, 0.0); 2];
            let mut parts = [[Complex64::new(0.0, 0.0); 3]; 2];

            for (idx, (spin, a)) in spins.iter().enumerate() {
                let f = a.value(&pt);
                let [fp, ft, ff] = a.partials(&pt);
                vals[idx] = f;
                parts[idx] = [fp, ft, ff];
                dens += f.norm_sqr();
                diag += p * p * fp.norm_sqr()
                    + ft.norm_sqr()
                    + ff.norm_sqr() / (st * st)
                    + mass_term * f.norm_sqr()
                    + spin.sign() * kinetic * (f.conj() * ff).im;

                let u = bispinor_u_cartesian(cart, *spin, mass);
                let du = bispinor_u_gradient(cart, *spin, mass);
                psi = psi + u * f;
                for j in 0..3 {
                    let df = fp * p_hat[j] + ft * (t_hat[j] / p) + ff * (f_hat[j] / (p * st));
                    dpsi[j] = dpsi[j] + du[j] * f + u * df;
                }
            }

            // Re[(-f₊* ↔∂_θ f₋ + i cot θ f₊* ↔∂_φ f₋) e^{-iφ}]: the connection
            // term (p₋ ↔∂_z - p_z(↔∂_x - i↔∂_y)) / (2E(E+m)) in spherical form
            let [fa, fb] = vals;
            let anti_t = fa.conj() * parts[1][1] - fb * parts[0][1].conj();
            let anti_f = fa.conj() * parts[1][2] - fb * parts[0][2].conj();
            let cross = kinetic * ((-anti_t + I * (ct / st) * anti_f) * Complex64::from_polar(1.0, -phi)).re;

            out[0] += w_bulk * dens;
            for j in 0..3 {
                out[1 + j] += w_bulk * dens * cart[j];
                out[5 + j] -= w_bulk * psi.inner(&dpsi[j]).im;
            }
            out[4] += w_bulk * dens * p * p;
            out[8] += w_r2 * (diag + cross);
        }
    };

    let r = normalized_moments(integrand, cfg)?;
    let n2 = r[0];
    let mean_p = [r[1] / n2, r[2] / n2, r[3] / n2];
    let mean_r = [r[5] / n2, r[6] / n2, r[7] / n2];
    DispersionReport::from_moments(n2, mean_r, r[8] / n2, mean_p, r[4] / n2)
}

/// Whether a [`SpinorField`] lives in position or momentum space. Fixes
/// which of the two conjugate variables is the multiplicative coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpace {
    /// `ψ(r)`: `p = -i∇_r`.
    Position,
    /// `ψ̃(p)`: `r = i∇_p`.
    Momentum,
}

/// Substitution for the radial variable of a field integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialMap {
    /// Plain radius, with the decay length passed to the quadrature.
    Linear { decay_scale: f64 },
    /// `ρ = t^exponent`. With `exponent = 1/(2κ-1)` an `ρ^{2κ-2}` endpoint
    /// singularity of the integrand becomes a constant in `t`.
    Power { exponent: f64, decay_scale: f64 },
}

impl RadialMap {
    fn apply(&self, t: f64) -> (f64, f64) {
        match *self {
            RadialMap::Linear { .. } => (t, 1.0),
            RadialMap::Power { exponent, .. } => {
                if t == 0.0 {
                    return (0.0, 0.0);
                }
                let r = t.powf(exponent);
                (r, exponent * r / t)
            }
        }
    }

    fn decay_scale(&self) -> f64 {
        match *self {
            RadialMap::Linear { decay_scale } => decay_scale,
            RadialMap::Power { exponent, decay_scale } => decay_scale.powf(1.0 / exponent),
        }
    }
}

/// A four-component field `ψ_α(x)` on ℝ³ in Cartesian coordinates.
pub trait SpinorField: Sync {
    fn value(&self, x: [f64; 3]) -> Bispinor;

    /// `∂ψ/∂x_j`. The default uses Richardson-refined central differences.
    fn gradient(&self, x: [f64; 3]) -> [Bispinor; 3] {
        std::array::from_fn(|j| {
            let h = 1e-5 * x[j].abs().max(1.0);
            richardson(
                |t| {
                    let mut y = x;
                    y[j] = t;
                    self.value(y)
                },
                x[j],
                h,
            )
        })
    }
}

/// Moments of a four-component field by direct quadrature: `|ψ|²`, its
/// first and second coordinate moments, the first moment of the conjugate
/// operator `∓i∇` and `Σ_α |∇ψ_α|²`.
pub fn field_dispersion<F>(
    field: &F,
    space: FieldSpace,
    map: RadialMap,
    cfg: &QuadConfig,
    phi_points: usize,
) -> Result<DispersionReport>
where
    F: SpinorField + ?Sized,
{
    check_phi_points(phi_points)?;
    let cfg = cfg.with_decay_scale(map.decay_scale());
    let dphi = 2.0 * PI / phi_points as f64;
    // conjugate first moment: Re Σ ψ* (σ i ∂_j) ψ = -σ Im(ψ* ∂_j ψ)
    let sigma = match space {
        FieldSpace::Momentum => 1.0,
        FieldSpace::Position => -1.0,
    };

    let integrand = |t: f64, theta: f64, out: &mut [f64]| {
        out.fill(0.0);
        let (r, jac) = map.apply(t);
        if r == 0.0 || jac == 0.0 {
            return;
        }
        let (st, ct) = theta.sin_cos();
        let w = r * r * st * jac * dphi;
        for k in 0..phi_points {
            let (sp, cp) = (k as f64 * dphi).sin_cos();
            let x = [r * st * cp, r * st * sp, r * ct];
            let psi = field.value(x);
            let grad = field.gradient(x);
            let dens = psi.norm_sqr();
            out[0] += w * dens;
            for j in 0..3 {
                out[1 + j] += w * dens * x[j];
                out[5 + j] -= w * sigma * psi.inner(&grad[j]).im;
                out[8] += w * grad[j].norm_sqr();
            }
            out[4] += w * dens * r * r;
        }
    };

    let res = normalized_moments(integrand, &cfg)?;
    let n2 = res[0];
    let coord = [res[1] / n2, res[2] / n2, res[3] / n2];
    let conj = [res[5] / n2, res[6] / n2, res[7] / n2];
    let coord2 = res[4] / n2;
    let conj2 = res[8] / n2;
    match space {
        FieldSpace::Momentum => DispersionReport::from_moments(n2, conj, conj2, coord, coord2),
        FieldSpace::Position => DispersionReport::from_moments(n2, coord, coord2, conj, conj2),
    }
}

/// The momentum-space wave function `Σ_s u(p,s) f(p,s)` of an amplitude pair
/// as a [`SpinorField`], with numerical gradients.
pub struct AmplitudeField<'a> {
    pub amp: &'a AmplitudePair,
    pub mass: f64,
}

impl SpinorField for AmplitudeField<'_> {
    fn value(&self, x: [f64; 3]) -> Bispinor {
        let pt = MomentumPoint::from_cartesian(x);
        bispinor_u_cartesian(x, Spin::Up, self.mass) * self.amp.plus.value(&pt)
            + bispinor_u_cartesian(x, Spin::Down, self.mass) * self.amp.minus.value(&pt)
    }
}
