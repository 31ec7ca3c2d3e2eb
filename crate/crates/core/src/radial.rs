//! Ground state of the radial operator
//!
//! ```text
//! (1/2) [ -f'' - (2/q) f' + V(q) f ] = γ f,   q ∈ (0, ∞)
//! ```
//!
//! With `u = q f` this is `-u'' + V u = 2γ u`, `u(0) = 0`. The solver works on
//! a logarithmic grid `q = eˣ` with `u = e^{x/2} w`, which turns the problem
//! into `w'' = [q²(V - 2γ) + 1/4] w` with no first-derivative term. Near the
//! origin `w ∝ q^{s+1/2}`, `s(s+1) = c` for `V ~ c/q²`, so the solution is
//! smooth in `x` even for singular potentials and Numerov's rule keeps its
//! fourth-order accuracy. The eigenvalue is located by bisection on the
//! Dirichlet condition at `q_max` and refined by Richardson extrapolation
//! over a grid doubling.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Inner edge of the logarithmic grid. The neglected interval `(0, Q_MIN)`
/// contributes at relative order `Q_MIN²`.
pub const Q_MIN: f64 = 1e-7;
pub const DEFAULT_Q_MAX: f64 = 10.0;
pub const DEFAULT_GRID: usize = 4000;
pub const DEFAULT_TOL: f64 = 1e-7;
const MAX_GRID: usize = 1 << 18;

type PotentialFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A confining radial potential with `V(q) → c/q²` at the origin and
/// `V(q) → q²` at infinity.
#[derive(Clone)]
pub struct RadialPotential {
    evaluate: Arc<PotentialFn>,
    singular_strength: f64,
}

impl std::fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialPotential")
            .field("singular_strength", &self.singular_strength)
            .finish_non_exhaustive()
    }
}

impl RadialPotential {
    pub fn new<F>(evaluate: F, singular_strength: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            evaluate: Arc::new(evaluate),
            singular_strength,
        }
    }

    /// `V = q²`, the three-dimensional oscillator.
    pub fn harmonic() -> Self {
        Self::new(|q| q * q, 0.0)
    }

    /// `V = l(l+1)/q² + q²`.
    pub fn centrifugal_harmonic(l: u32) -> Self {
        let c = f64::from(l * (l + 1));
        Self::new(move |q| c / (q * q) + q * q, c)
    }

    pub fn evaluate(&self, q: f64) -> f64 {
        (self.evaluate)(q)
    }

    pub fn singular_strength(&self) -> f64 {
        self.singular_strength
    }

    /// Exponent `s` of the regular solution `f ∝ q^s` at the origin.
    pub fn origin_exponent(&self) -> f64 {
        0.5 * (-1.0 + (1.0 + 4.0 * self.singular_strength).sqrt())
    }

    /// `q² V(q)` at `q = 1e-3` and `q = 1e-4`; both approach the declared
    /// singular strength for a consistent potential.
    pub fn sampled_origin_strength(&self) -> [f64; 2] {
        [1e-3, 1e-4].map(|q| q * q * self.evaluate(q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub grid_size: usize,
    pub q_max: f64,
    /// Estimated absolute error of `gamma` from the grid-doubling comparison.
    pub est_error: f64,
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ground-state eigenvalue γ.
    pub gamma: f64,
    /// Logarithmically spaced sample points, ascending.
    pub grid: Vec<f64>,
    /// `f(q)` normalized so that `∫₀^∞ f² q² dq = 1`.
    pub f_values: Vec<f64>,
    /// `df/dq` on the same grid.
    pub df_values: Vec<f64>,
    pub diagnostics: Diagnostics,
    log_step: f64,
    origin_exponent: f64,
}

impl EigenResult {
    /// Number of interior sign changes of the eigenfunction.
    pub fn node_count(&self) -> usize {
        let peak = self.f_values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let floor = 1e-10 * peak;
        let mut last = 0.0_f64;
        let mut nodes = 0;
        for &v in &self.f_values {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
        nodes
    }

    /// `∫₀^∞ weight(q) f(q)² q² dq` from the stored samples.
    ///
    /// Weights more singular than `1/q²` at the origin are rejected.
    pub fn moment<W>(&self, weight: W) -> Result<f64>
    where
        W: Fn(f64) -> f64,
    {
        let (q1, q2) = (1e-6, 1e-7);
        let (w1, w2) = (weight(q1).abs(), weight(q2).abs());
        let power = if w1 > 0.0 && w2 > 0.0 {
            (w2 / w1).ln() / (q1 / q2).ln()
        } else {
            0.0
        };
        if power > 2.0 + 1e-3 || !power.is_finite() {
            return Err(Error::InvalidInput(format!(
                "moment weight grows like q^-{power:.3} at the origin (at most q^-2 allowed)"
            )));
        }
        let values: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.f_values)
            .map(|(&q, &f)| weight(q) * f * f * q * q * q)
            .collect();
        let q0 = self.grid[0];
        let f0 = self.f_values[0];
        let tail = weight(q0) * f0 * f0 * q0.powi(3) / (2.0 * self.origin_exponent + 3.0 - power.max(0.0));
        Ok(trapezoid(&values, self.log_step) + tail)
    }

    /// `∫₀^∞ (df/dq)² q² dq`.
    pub fn kinetic_moment(&self) -> f64 {
        let values: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.df_values)
            .map(|(&q, &d)| d * d * q * q * q)
            .collect();
        let s = self.origin_exponent;
        let q0 = self.grid[0];
        let f0 = self.f_values[0];
        let tail = if s > 0.0 {
            s * s * f0 * f0 * q0 / (2.0 * s + 1.0)
        } else {
            0.0
        };
        trapezoid(&values, self.log_step) + tail
    }

    /// `(1/2)[⟨f'²⟩ + ⟨V f²⟩] / ⟨f²⟩`, all with measure `q² dq`.
    pub fn rayleigh_quotient(&self, pot: &RadialPotential) -> Result<f64> {
        let norm = self.moment(|_| 1.0)?;
        let potential = self.moment(|q| pot.evaluate(q))?;
        Ok(0.5 * (self.kinetic_moment() + potential) / norm)
    }
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => 0.0,
        n => h * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

/// Precomputed `q`, `q²` and `q² V(q)` on a uniform grid in `x = ln q`.
struct LogGrid {
    q: Vec<f64>,
    q2: Vec<f64>,
    q2v: Vec<f64>,
    h: f64,
    start_exponent: f64,
}

impl LogGrid {
    fn new(pot: &RadialPotential, q_max: f64, n: usize) -> Result<Self> {
        let x0 = Q_MIN.ln();
        let x1 = q_max.ln();
        let h = (x1 - x0) / (n - 1) as f64;
        let mut q = Vec::with_capacity(n);
        let mut q2 = Vec::with_capacity(n);
        let mut q2v = Vec::with_capacity(n);
        for i in 0..n {
            let qi = (x0 + h * i as f64).exp();
            let v = pot.evaluate(qi);
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("potential is not finite at q = {qi:e}")));
            }
            q.push(qi);
            q2.push(qi * qi);
            q2v.push(qi * qi * v);
        }
        Ok(Self {
            q,
            q2,
            q2v,
            h,
            start_exponent: pot.origin_exponent() + 0.5,
        })
    }

    fn len(&self) -> usize {
        self.q.len()
    }

    fn numerov_weight(&self, i: usize, energy: f64) -> f64 {
        let g = self.q2v[i] - energy * self.q2[i] + 0.25;
        1.0 - self.h * self.h * g / 12.0
    }

    /// Outward Numerov integration. Returns (sign changes, sign of the
    /// endpoint value).
    fn shoot(&self, energy: f64) -> (usize, f64) {
        let n = self.len();
        let mut w_prev = 1.0;
        let mut w = (self.start_exponent * self.h).exp();
        let mut k_prev = self.numerov_weight(0, energy);
        let mut k = self.numerov_weight(1, energy);
        let mut nodes = 0;
        for i in 1..n - 1 {
            let k_next = self.numerov_weight(i + 1, energy);
            let mut w_next = ((12.0 - 10.0 * k) * w - k_prev * w_prev) / k_next;
            if w_next.abs() > 1e200 {
                w_next *= 1e-200;
                w *= 1e-200;
            }
            if i + 1 < n - 1 && w_next.signum() != w.signum() && w_next != 0.0 {
                nodes += 1;
            }
            w_prev = w;
            w = w_next;
            k_prev = k;
            k = k_next;
        }
        (nodes, w.signum())
    }

    /// The eigenvalue `2γ` of the discrete Dirichlet problem.
    fn lowest_energy(&self) -> Result<f64> {
        let min_v = self
            .q2v
            .iter()
            .zip(&self.q2)
            .map(|(a, b)| a / b)
            .fold(f64::INFINITY, f64::min);
        let below = |e: f64| {
            let (nodes, end) = self.shoot(e);
            nodes == 0 && end > 0.0
        };
        let mut lo = min_v;
        let mut step = 1.0_f64.max(min_v.abs());
        let mut hi = lo + step;
        let mut guard = 0;
        while below(hi) {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
            guard += 1;
            if guard > 200 {
                return Err(Error::NonConvergence {
                    what: "radial_eigensolver (bracketing)",
                    estimate: hi,
                    error: f64::INFINITY,
                    tolerance: 0.0,
                });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenfunction `w` at the given energy: outward to the outer turning
    /// point, inward from the Dirichlet end, joined continuously.
    fn eigenfunction(&self, energy: f64) -> Vec<f64> {
        let n = self.len();
        let turning = (0..n)
            .rev()
            .find(|&i| self.q2v[i] < energy * self.q2[i])
            .unwrap_or(n / 2)
            .clamp(2, n - 3);

        let mut out = vec![0.0; n];
        out[0] = 1.0;
        out[1] = (self.start_exponent * self.h).exp();
        for i in 1..turning {
            let k_prev = self.numerov_weight(i - 1, energy);
            let k = self.numerov_weight(i, energy);
            let k_next = self.numerov_weight(i + 1, energy);
            out[i + 1] = ((12.0 - 10.0 * k) * out[i] - k_prev * out[i - 1]) / k_next;
        }

        let mut inward = vec![0.0; n];
        inward[n - 1] = 0.0;
        inward[n - 2] = 1e-30;
        for i in (turning..n - 1).rev() {
            let k_next = self.numerov_weight(i + 1, energy);
            let k = self.numerov_weight(i, energy);
            let k_prev = self.numerov_weight(i - 1, energy);
            inward[i - 1] = ((12.0 - 10.0 * k) * inward[i] - k_next * inward[i + 1]) / k_prev;
            if inward[i - 1].abs() > 1e250 {
                for v in &mut inward[i - 1..] {
                    *v *= 1e-250;
                }
            }
        }
        let scale = out[turning] / inward[turning];
        for i in turning..n {
            out[i] = inward[i] * scale;
        }
        out
    }
}

fn build_result(
    pot: &RadialPotential,
    grid: &LogGrid,
    energy: f64,
    gamma: f64,
    q_max: f64,
    est_error: f64,
) -> EigenResult {
    let n = grid.len();
    let h = grid.h;
    let mut w = grid.eigenfunction(energy);
    if w.iter().map(|v| v.abs()).fold(0.0, f64::max) > 0.0 && w[n / 2].is_sign_negative() {
        for v in &mut w {
            *v = -*v;
        }
    }
    let s = pot.origin_exponent();

    // ∫ f² q² dq = ∫ w² q² dx, plus the analytic sliver below q[0]
    let dens: Vec<f64> = w.iter().zip(&grid.q2).map(|(a, b)| a * a * b).collect();
    let f0_sq = w[0] * w[0] / grid.q[0];
    let norm = trapezoid(&dens, h) + f0_sq * grid.q[0].powi(3) / (2.0 * s + 3.0);
    let scale = 1.0 / norm.sqrt();

    // w_x by fourth-order central differences, second order at the ends
    let mut wx = vec![0.0; n];
    for i in 0..n {
        wx[i] = if i >= 2 && i + 2 < n {
            (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) / (12.0 * h)
        } else if i == 0 {
            (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h)
        } else if i + 1 == n {
            (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h)
        } else {
            (w[i + 1] - w[i - 1]) / (2.0 * h)
        };
    }

    let mut f_values = Vec::with_capacity(n);
    let mut df_values = Vec::with_capacity(n);
    for i in 0..n {
        let q = grid.q[i];
        let sq = q.sqrt();
        f_values.push(scale * w[i] / sq);
        df_values.push(scale * (wx[i] - 0.5 * w[i]) / (q * sq));
    }

    EigenResult {
        gamma,
        grid: grid.q.clone(),
        f_values,
        df_values,
        diagnostics: Diagnostics {
            grid_size: n,
            q_max,
            est_error,
        },
        log_step: h,
        origin_exponent: s,
    }
}

/// Lowest eigenvalue γ and eigenfunction of
/// `(1/2)[-∂²_q - (2/q)∂_q + V(q)] f = γ f` with `f(q_max) = 0`.
///
/// `n` is the starting number of grid points; the grid is doubled until two
/// successive extrapolated eigenvalues agree within `tol`.
pub fn ground_state(pot: &RadialPotential, q_max: f64, n: usize, tol: f64) -> Result<EigenResult> {
    let c = pot.singular_strength();
    if !(c >= -0.25) {
        return Err(Error::InvalidInput(format!(
            "singular strength {c} < -1/4: operator is unbounded below"
        )));
    }
    if n < 200 {
        return Err(Error::InvalidInput(format!("grid size {n} < 200")));
    }
    if !(q_max > 1.0) || !q_max.is_finite() {
        return Err(Error::domain("ground_state", q_max, "q_max > 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("ground_state", tol, "tol > 0"));
    }

    let mut n = n;
    let mut e_coarse = LogGrid::new(pot, q_max, n)?.lowest_energy()?;
    let mut last_extrapolated = f64::NAN;
    loop {
        let fine_n = 2 * n - 1;
        let fine = LogGrid::new(pot, q_max, fine_n)?;
        let e_fine = fine.lowest_energy()?;
        // Numerov: error ∝ h⁴
        let extrapolated = e_fine + (e_fine - e_coarse) / 15.0;
        let gamma = 0.5 * extrapolated;
        let richardson = 0.5 * (e_fine - e_coarse).abs() / 15.0;
        let est_error = if last_extrapolated.is_finite() {
            richardson.max(0.5 * (extrapolated - last_extrapolated).abs())
        } else {
            richardson
        };

        if est_error <= tol {
            if pot.evaluate(q_max) < 4.0 * gamma {
                return Err(Error::InvalidInput(format!(
                    "q_max = {q_max} too small: V(q_max) = {} < 4γ = {}",
                    pot.evaluate(q_max),
                    4.0 * gamma
                )));
            }
            return Ok(build_result(pot, &fine, e_fine, gamma, q_max, est_error));
        }
        if fine_n > MAX_GRID {
            return Err(Error::NonConvergence {
                what: "radial_eigensolver",
                estimate: gamma,
                error: est_error,
                tolerance: tol,
            });
        }
        last_extrapolated = extrapolated;
        n = fine_n;
        e_coarse = e_fine;
    }
}

/// [`ground_state`] with the default grid (`q_max = 10`, 4000 points).
pub fn ground_state_default(pot: &RadialPotential, tol: f64) -> Result<EigenResult> {
    ground_state(pot, DEFAULT_Q_MAX, DEFAULT_GRID, tol)
}
