//! Optimal vaccination: cost functional, adjoint system, extremal control and
//! the forward-backward sweep.
//!
//! The control problem minimises `J(u) = ∫ w1 I² + w2 u² dt` subject to the
//! controlled SEIQRDP dynamics, `u(t) ∈ [0, 1]`, with free terminal state.

use serde::{Deserialize, Serialize};

use crate::epi::{controlled_rhs_unchecked, CompartmentState, EpidemicParams};
use crate::ode::{integrate, Direction, TimeGrid, Trajectory};
use crate::{Error, Result};

const S: usize = 0;
const E: usize = 1;
const I: usize = 2;
const Q: usize = 3;
const R: usize = 4;
const D: usize = 5;
const P: usize = 6;
const W: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveWeights {
    /// Treatment weight on `I²`.
    pub w1: f64,
    /// Vaccination weight on `u²`.
    pub w2: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self { w1: 1.0, w2: 1.0 }
    }
}

impl ObjectiveWeights {
    pub fn validate(&self) -> Result<()> {
        if !(self.w1.is_finite() && self.w1 >= 0.0) {
            return Err(Error::InvalidArgument(format!("w1 must be >= 0, got {}", self.w1)));
        }
        if !(self.w2.is_finite() && self.w2 > 0.0) {
            return Err(Error::InvalidArgument(format!("w2 must be > 0, got {}", self.w2)));
        }
        Ok(())
    }
}

/// Vaccination fraction at each grid node; linear between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl ControlSignal {
    pub fn zeros(grid: TimeGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: TimeGrid, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        let c = Self { grid, values };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.grid.len() {
            return Err(Error::GridMismatch(format!(
                "control has {} values for {} nodes",
                self.values.len(),
                self.grid.len()
            )));
        }
        if let Some((k, u)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, u)| !(0.0..=1.0).contains(*u))
        {
            return Err(Error::InvalidArgument(format!(
                "control value {u} at node {k} is outside [0, 1]"
            )));
        }
        Ok(())
    }

    pub fn interpolate(&self, t: f64) -> f64 {
        let pos = (t - self.grid.t0()) * self.grid.steps_per_day() as f64;
        let last = self.grid.steps();
        let u = if pos <= 0.0 {
            self.values[0]
        } else if pos >= last as f64 {
            self.values[last]
        } else {
            let k = pos.floor() as usize;
            let frac = pos - k as f64;
            self.values[k] + frac * (self.values[k + 1] - self.values[k])
        };
        u.clamp(0.0, 1.0)
    }

    /// FNV-1a over the bit patterns of the nodal values.
    pub fn fingerprint(&self) -> u64 {
        self.values.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, v| {
            v.to_bits()
                .to_le_bytes()
                .iter()
                .fold(h, |h, b| (h ^ *b as u64).wrapping_mul(0x0000_0100_0000_01b3))
        })
    }
}

/// Costate coordinates `ψ1..ψ8`, stored zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdjointState(pub [f64; 8]);

impl AdjointState {
    pub fn psi1(&self) -> f64 {
        self.0[S]
    }

    pub fn psi8(&self) -> f64 {
        self.0[W]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub weights: ObjectiveWeights,
    /// Blend factor for `u <- (1 - r) u + r u_new`.
    pub relaxation: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            weights: ObjectiveWeights::default(),
            relaxation: 0.5,
            max_iterations: 500,
            tolerance: 1e-6,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "relaxation must be in (0, 1], got {}",
                self.relaxation
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub control: ControlSignal,
    pub state: Trajectory<8>,
    pub adjoint: Trajectory<8>,
    pub cost: f64,
    /// Cost of the `u ≡ 0` starting iterate.
    pub baseline_cost: f64,
    /// Number of accepted control updates.
    pub iterations: usize,
    pub converged: bool,
    /// `max |u_new - u| / (1 + |u|)` at the returned iterate.
    pub fixed_point_residual: f64,
    /// Cost after each accepted iterate, starting with the baseline.
    pub cost_trace: Vec<f64>,
}

/// Trapezoidal quadrature of `w1 I² + w2 u²` over the grid.
pub fn cost_functional(state: &Trajectory<8>, control: &ControlSignal, w: &ObjectiveWeights) -> Result<f64> {
    if state.grid != control.grid || state.values.len() != control.values.len() {
        return Err(Error::GridMismatch(
            "state and control must share one time grid".into(),
        ));
    }
    let h = state.grid.step();
    let n = state.values.len();
    let integrand = |k: usize| {
        let i = state.values[k][I];
        let u = control.values[k];
        w.w1 * i * i + w.w2 * u * u
    };
    let interior: f64 = (1..n - 1).map(integrand).sum();
    Ok(h * (interior + 0.5 * (integrand(0) + integrand(n - 1))))
}

/// `Ā(t, x, u) ψ`, the homogeneous part of the adjoint dynamics.
fn adjoint_linear(t: f64, psi: &[f64; 8], x: &[f64; 8], u: f64, p: &EpidemicParams) -> [f64; 8] {
    let n = p.population;
    let bi = p.beta * x[I] / n;
    let bs = p.beta * x[S] / n;
    let lam = p.recovery_rate(t);
    let kap = p.mortality_rate(t);
    [
        (bi + p.omega + u) * psi[S] - bi * psi[E] - p.omega * psi[P] - u * psi[W],
        p.gamma * psi[E] - p.gamma * psi[I],
        bs * psi[S] - bs * psi[E] + p.delta * psi[I] - p.delta * psi[Q],
        (lam + kap) * psi[Q] - lam * psi[R] - kap * psi[D],
        0.0,
        0.0,
        0.0,
        0.0,
    ]
}

/// `ψ' = -∂H/∂x = Ā(t, x, u) ψ + B̄(x)`.
pub fn adjoint_rhs(
    t: f64,
    psi: &[f64; 8],
    x: &[f64; 8],
    u: f64,
    p: &EpidemicParams,
    w: &ObjectiveWeights,
) -> [f64; 8] {
    let mut d = adjoint_linear(t, psi, x, u, p);
    d[I] -= 2.0 * w.w1 * x[I];
    d
}

/// Hamiltonian `w1 x3² + w2 u² + ψᵀ F(t, x, u)`.
pub fn hamiltonian(
    t: f64,
    x: &[f64; 8],
    psi: &[f64; 8],
    u: f64,
    p: &EpidemicParams,
    w: &ObjectiveWeights,
) -> f64 {
    let f = controlled_rhs_unchecked(t, x, p, u);
    w.w1 * x[I] * x[I] + w.w2 * u * u + psi.iter().zip(&f).map(|(a, b)| a * b).sum::<f64>()
}

/// `∂H/∂u = 2 w2 u + (ψ8 - ψ1) x1`.
pub fn hamiltonian_gradient_u(x: &[f64; 8], psi: &[f64; 8], u: f64, w: &ObjectiveWeights) -> f64 {
    2.0 * w.w2 * u + (psi[W] - psi[S]) * x[S]
}

/// Pointwise minimiser of the Hamiltonian over `u ∈ [0, 1]`.
pub fn extremal_control(x1: f64, psi1: f64, psi8: f64, w2: f64) -> f64 {
    let unclamped = x1 * (psi1 - psi8) / (2.0 * w2);
    if unclamped.is_nan() {
        return 0.0;
    }
    unclamped.clamp(0.0, 1.0)
}

pub fn simulate_uncontrolled(p: &EpidemicParams, x0: &CompartmentState, grid: TimeGrid) -> Result<Trajectory<8>> {
    let mut x0 = x0.to_array();
    x0[W] = 0.0;
    integrate(
        |t, x| crate::epi::uncontrolled_rhs(t, x, p),
        grid,
        x0,
        Direction::Forward,
    )
}

pub fn simulate_controlled(p: &EpidemicParams, x0: &CompartmentState, control: &ControlSignal) -> Result<Trajectory<8>> {
    control.validate()?;
    integrate(
        |t, x| controlled_rhs_unchecked(t, x, p, control.interpolate(t)),
        control.grid,
        x0.to_array(),
        Direction::Forward,
    )
}

/// Integrates the adjoint backward from `ψ(tf) = 0`.
pub fn solve_adjoint(
    p: &EpidemicParams,
    w: &ObjectiveWeights,
    state: &Trajectory<8>,
    control: &ControlSignal,
) -> Result<Trajectory<8>> {
    if state.grid != control.grid {
        return Err(Error::GridMismatch("state and control grids differ".into()));
    }
    integrate(
        |t, psi| adjoint_rhs(t, psi, &state.interpolate(t), control.interpolate(t), p, w),
        state.grid,
        [0.0; 8],
        Direction::Backward,
    )
}

/// Exact gradient `∂J/∂u_k` of the discretised cost with respect to each
/// nodal control value, by reverse-mode sweep through the RK4 steps used in
/// [`simulate_controlled`]. Stage Jacobian products reuse the adjoint matrix.
pub fn cost_gradient(
    p: &EpidemicParams,
    x0: &CompartmentState,
    control: &ControlSignal,
    w: &ObjectiveWeights,
) -> Result<Vec<f64>> {
    let state = simulate_controlled(p, x0, control)?;
    let grid = control.grid;
    let n = grid.steps();
    let h = grid.step();
    let u = &control.values;
    let weight = |k: usize| if k == 0 || k == n { 0.5 * h } else { h };

    // (∂F/∂x)ᵀ v = -Ā v and (∂F/∂u)ᵀ v = x1 (v8 - v1)
    let jx_t = |t: f64, x: &[f64; 8], uu: f64, v: &[f64; 8]| -> [f64; 8] {
        let a = adjoint_linear(t, v, x, uu, p);
        a.map(|c| -c)
    };
    let ju_t = |x: &[f64; 8], v: &[f64; 8]| x[S] * (v[W] - v[S]);
    let f = |t: f64, x: &[f64; 8], uu: f64| controlled_rhs_unchecked(t, x, p, uu);
    let axpy = |x: &[f64; 8], a: f64, k: &[f64; 8]| -> [f64; 8] { std::array::from_fn(|c| x[c] + a * k[c]) };

    let mut grad: Vec<f64> = (0..=n).map(|k| weight(k) * 2.0 * w.w2 * u[k]).collect();
    let mut lam = [0.0; 8];
    lam[I] = weight(n) * 2.0 * w.w1 * state.values[n][I];

    for k in (0..n).rev() {
        let t = grid.time(k);
        let x = &state.values[k];
        let um = 0.5 * (u[k] + u[k + 1]);
        let k1 = f(t, x, u[k]);
        let y2 = axpy(x, 0.5 * h, &k1);
        let k2 = f(t + 0.5 * h, &y2, um);
        let y3 = axpy(x, 0.5 * h, &k2);
        let k3 = f(t + 0.5 * h, &y3, um);
        let y4 = axpy(x, h, &k3);

        let bk1 = lam.map(|c| c * h / 6.0);
        let mut bk2 = lam.map(|c| c * h / 3.0);
        let mut bk3 = lam.map(|c| c * h / 3.0);
        let bk4 = lam.map(|c| c * h / 6.0);
        let mut bx = lam;
        let mut bk1 = bk1;
        let mut g_mid = 0.0;

        let by4 = jx_t(t + h, &y4, u[k + 1], &bk4);
        grad[k + 1] += ju_t(&y4, &bk4);
        bx = axpy(&bx, 1.0, &by4);
        bk3 = axpy(&bk3, h, &by4);

        let by3 = jx_t(t + 0.5 * h, &y3, um, &bk3);
        g_mid += ju_t(&y3, &bk3);
        bx = axpy(&bx, 1.0, &by3);
        bk2 = axpy(&bk2, 0.5 * h, &by3);

        let by2 = jx_t(t + 0.5 * h, &y2, um, &bk2);
        g_mid += ju_t(&y2, &bk2);
        bx = axpy(&bx, 1.0, &by2);
        bk1 = axpy(&bk1, 0.5 * h, &by2);

        let by1 = jx_t(t, x, u[k], &bk1);
        grad[k] += ju_t(x, &bk1);
        bx = axpy(&bx, 1.0, &by1);

        grad[k] += 0.5 * g_mid;
        grad[k + 1] += 0.5 * g_mid;

        bx[I] += weight(k) * 2.0 * w.w1 * x[I];
        lam = bx;
    }
    Ok(grad)
}

fn extremal_update(state: &Trajectory<8>, adjoint: &Trajectory<8>, w2: f64) -> Vec<f64> {
    state
        .values
        .iter()
        .zip(&adjoint.values)
        .map(|(x, psi)| extremal_control(x[S], psi[S], psi[W], w2))
        .collect()
}

fn max_relative_change(new: &[f64], old: &[f64]) -> f64 {
    new.iter()
        .zip(old)
        .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
        .fold(0.0, f64::max)
}

fn ensure_finite(traj: &Trajectory<8>, what: &str) -> Result<()> {
    for (k, v) in traj.values.iter().enumerate() {
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                node: k,
                t: traj.grid.time(k),
                detail: format!("{what} diverged: {v:?}"),
            });
        }
    }
    Ok(())
}

/// Forward-backward sweep starting from `u ≡ 0`.
///
/// Each iteration integrates the state forward, the adjoint backward from
/// zero terminal data, and blends in the clamped extremal control. A blended
/// update that raises the cost is retried with half the relaxation, so the
/// accepted cost trace never increases. Stops when the fixed-point residual
/// and the relative cost change both drop below `cfg.tolerance`.
pub fn forward_backward_sweep(
    p: &EpidemicParams,
    x0: &CompartmentState,
    grid: TimeGrid,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    cfg.validate()?;
    p.validate()?;
    if x0.to_array().iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "initial state must be finite and nonnegative: {x0:?}"
        )));
    }
    let w = &cfg.weights;
    let mut control = ControlSignal::zeros(grid);
    let mut state = simulate_controlled(p, x0, &control)?;
    ensure_finite(&state, "state")?;
    let mut cost = cost_functional(&state, &control, w)?;
    let baseline_cost = cost;
    let mut cost_trace = vec![cost];
    let mut relaxation = cfg.relaxation;
    let mut rel_cost_change = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut adjoint;
    let mut residual;

    loop {
        adjoint = solve_adjoint(p, w, &state, &control)?;
        ensure_finite(&adjoint, "adjoint")?;
        let target = extremal_update(&state, &adjoint, w.w2);
        residual = max_relative_change(&target, &control.values);
        if residual <= cfg.tolerance && rel_cost_change <= cfg.tolerance {
            converged = true;
            break;
        }
        if iterations >= cfg.max_iterations {
            break;
        }

        let mut accepted = None;
        while relaxation >= 1e-8 {
            let values: Vec<f64> = control
                .values
                .iter()
                .zip(&target)
                .map(|(old, new)| ((1.0 - relaxation) * old + relaxation * new).clamp(0.0, 1.0))
                .collect();
            let candidate = ControlSignal { grid, values };
            let cand_state = simulate_controlled(p, x0, &candidate)?;
            ensure_finite(&cand_state, "state")?;
            let cand_cost = cost_functional(&cand_state, &candidate, w)?;
            if cand_cost <= cost * (1.0 + 1e-12) {
                accepted = Some((candidate, cand_state, cand_cost));
                break;
            }
            relaxation *= 0.5;
            log::debug!("sweep: cost rose to {cand_cost:e}, relaxation -> {relaxation}");
        }
        let Some((candidate, cand_state, cand_cost)) = accepted else {
            log::warn!("sweep stalled: no descent at relaxation {relaxation:e}");
            break;
        };
        rel_cost_change = (cost - cand_cost).abs() / cost.abs().max(f64::MIN_POSITIVE);
        control = candidate;
        state = cand_state;
        cost = cand_cost;
        cost_trace.push(cost);
        iterations += 1;
        relaxation = (relaxation * 2.0).min(cfg.relaxation);
    }

    Ok(SweepResult {
        control,
        state,
        adjoint,
        cost,
        baseline_cost,
        iterations,
        converged,
        fixed_point_residual: residual,
        cost_trace,
    })
}
