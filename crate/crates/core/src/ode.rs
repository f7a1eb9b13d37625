//! Fixed-step classical Runge-Kutta integration on a uniform day grid.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_STEPS_PER_DAY: u32 = 10;

/// Uniform grid `t0, t0 + h, ..., tf` with `h = 1 / steps_per_day` days.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t0: f64,
    steps_per_day: u32,
    steps: usize,
}

impl TimeGrid {
    /// `tf - t0` must be a whole multiple of the step.
    pub fn new(t0: f64, tf: f64, steps_per_day: u32) -> Result<Self> {
        if steps_per_day == 0 {
            return Err(Error::InvalidArgument("steps_per_day must be positive".into()));
        }
        if !(t0.is_finite() && tf.is_finite() && tf > t0) {
            return Err(Error::InvalidArgument(format!(
                "time grid needs tf > t0, got [{t0}, {tf}]"
            )));
        }
        let exact = (tf - t0) * steps_per_day as f64;
        let steps = exact.round();
        if (exact - steps).abs() > 1e-9 * exact.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "span {} days is not a multiple of 1/{steps_per_day} day",
                tf - t0
            )));
        }
        Ok(Self {
            t0,
            steps_per_day,
            steps: steps as usize,
        })
    }

    /// Grid covering `days` whole days from day 0.
    pub fn days(days: u32, steps_per_day: u32) -> Result<Self> {
        Self::new(0.0, days as f64, steps_per_day)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tf(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn steps_per_day(&self) -> u32 {
        self.steps_per_day
    }

    pub fn step(&self) -> f64 {
        1.0 / self.steps_per_day as f64
    }

    /// Number of steps (nodes minus one).
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, node: usize) -> f64 {
        self.t0 + node as f64 / self.steps_per_day as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }

    /// Number of whole days spanned.
    pub fn whole_days(&self) -> usize {
        self.steps / self.steps_per_day as usize
    }

    /// Node index of whole day `day` counted from `t0`.
    pub fn day_node(&self, day: usize) -> usize {
        day * self.steps_per_day as usize
    }
}

/// One value per grid node, stored in forward time order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const D: usize> {
    pub grid: TimeGrid,
    pub values: Vec<[f64; D]>,
}

impl<const D: usize> Trajectory<D> {
    pub fn constant(grid: TimeGrid, value: [f64; D]) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn first(&self) -> &[f64; D] {
        &self.values[0]
    }

    pub fn last(&self) -> &[f64; D] {
        self.values.last().expect("trajectory has at least one node")
    }

    /// Component `c` at every node.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[c]).collect()
    }

    /// Piecewise-linear interpolation; clamps outside the grid.
    pub fn interpolate(&self, t: f64) -> [f64; D] {
        let pos = (t - self.grid.t0()) * self.grid.steps_per_day() as f64;
        if pos <= 0.0 {
            return self.values[0];
        }
        let last = self.grid.steps();
        if pos >= last as f64 {
            return self.values[last];
        }
        let k = pos.floor() as usize;
        let frac = pos - k as f64;
        if frac == 0.0 {
            return self.values[k];
        }
        let (a, b) = (&self.values[k], &self.values[k + 1]);
        std::array::from_fn(|c| a[c] + frac * (b[c] - a[c]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// Start from the value at `tf` and step with `-h`.
    Backward,
}

fn axpy<const D: usize>(x: &[f64; D], a: f64, k: &[f64; D]) -> [f64; D] {
    std::array::from_fn(|c| x[c] + a * k[c])
}

fn check_stage<const D: usize>(k: &[f64; D], t: f64, stage: usize) -> Result<()> {
    if k.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            node: 0,
            t,
            detail: format!("RK4 stage {stage} evaluated to {k:?}"),
        })
    }
}

/// One classical RK4 step of size `h` (negative `h` steps backward).
///
/// The `node` of a returned [`Error::NonFinite`] is 0; [`integrate`] replaces
/// it with the index of the node being advanced.
pub fn rk4_step<const D: usize, F>(rhs: &mut F, t: f64, x: &[f64; D], h: f64) -> Result<[f64; D]>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be finite and nonzero, got {h}")));
    }
    let half = 0.5 * h;
    let k1 = rhs(t, x);
    check_stage(&k1, t, 1)?;
    let k2 = rhs(t + half, &axpy(x, half, &k1));
    check_stage(&k2, t + half, 2)?;
    let k3 = rhs(t + half, &axpy(x, half, &k2));
    check_stage(&k3, t + half, 3)?;
    let k4 = rhs(t + h, &axpy(x, h, &k3));
    check_stage(&k4, t + h, 4)?;
    let sixth = h / 6.0;
    Ok(std::array::from_fn(|c| {
        x[c] + sixth * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c])
    }))
}

/// Integrates over every grid node. `x0` is the value at `t0` for
/// [`Direction::Forward`] and at `tf` for [`Direction::Backward`]; the result
/// is always indexed in forward time order.
pub fn integrate<const D: usize, F>(
    mut rhs: F,
    grid: TimeGrid,
    x0: [f64; D],
    direction: Direction,
) -> Result<Trajectory<D>>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    if let Some(v) = x0.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("initial value is not finite ({v})")));
    }
    let n = grid.steps();
    let h = grid.step();
    let mut values = vec![[0.0; D]; grid.len()];
    let relabel = |node: usize| {
        move |e: Error| match e {
            Error::NonFinite { t, detail, .. } => Error::NonFinite { node, t, detail },
            other => other,
        }
    };
    match direction {
        Direction::Forward => {
            values[0] = x0;
            for k in 0..n {
                values[k + 1] = rk4_step(&mut rhs, grid.time(k), &values[k], h).map_err(relabel(k))?;
            }
        }
        Direction::Backward => {
            values[n] = x0;
            for k in (1..=n).rev() {
                values[k - 1] = rk4_step(&mut rhs, grid.time(k), &values[k], -h).map_err(relabel(k))?;
            }
        }
    }
    Ok(Trajectory { grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_is_identity() {
        let x = [1.5, -2.0, 3.25];
        let y = rk4_step(&mut |_, _: &[f64; 3]| [0.0; 3], 4.0, &x, 0.37).unwrap();
        assert_eq!(x, y);
        let grid = TimeGrid::days(5, 4).unwrap();
        let traj = integrate(|_, _: &[f64; 3]| [0.0; 3], grid, x, Direction::Forward).unwrap();
        assert!(traj.values.iter().all(|v| *v == x));
    }

    #[test]
    fn linear_decay_step_matches_stability_polynomial() {
        // 1 - h + h^2/2 - h^3/6 + h^4/24 at h = 0.1, summed by hand
        let expected = 1.0 - 0.1 + 0.005 - 1.0 / 6000.0 + 1.0 / 240000.0;
        let y = rk4_step(&mut |_, x: &[f64; 1]| [-x[0]], 0.0, &[1.0], 0.1).unwrap();
        assert!((y[0] - expected).abs() < 1e-15);
        assert!((y[0] - 0.9048375).abs() < 1e-12);
    }

    #[test]
    fn exact_for_cubic_rates() {
        let y = rk4_step(&mut |t, _: &[f64; 1]| [t], 0.0, &[0.0], 1.0).unwrap();
        assert_eq!(y[0], 0.5);
        // d/dt x = 4 t^3  ->  x(2) - x(0) = 16
        let y = rk4_step(&mut |t, _: &[f64; 1]| [4.0 * t * t * t], 0.0, &[0.0], 2.0).unwrap();
        assert!((y[0] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn backward_indexing_matches_forward_times() {
        let grid = TimeGrid::new(2.0, 5.0, 4).unwrap();
        let fwd = integrate(|t, _: &[f64; 1]| [t], grid, [0.0], Direction::Forward).unwrap();
        let bwd = integrate(|t, _: &[f64; 1]| [t], grid, *fwd.last(), Direction::Backward).unwrap();
        for k in 0..grid.len() {
            assert!((fwd.values[k][0] - bwd.values[k][0]).abs() < 1e-12, "node {k}");
        }
        assert_eq!(grid.len(), 13);
        assert_eq!(grid.tf(), 5.0);
    }

    #[test]
    fn non_finite_stage_reports_node() {
        let grid = TimeGrid::days(3, 2).unwrap();
        let err = integrate(
            |t, x: &[f64; 1]| if t >= 1.0 { [f64::NAN] } else { [x[0]] },
            grid,
            [1.0],
            Direction::Forward,
        )
        .unwrap_err();
        match err {
            Error::NonFinite { node, .. } => assert_eq!(node, 1),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.05, 10).is_err());
        let g = TimeGrid::days(92, 10).unwrap();
        assert_eq!(g.len(), 921);
        assert_eq!(g.whole_days(), 92);
        assert_eq!(g.day_node(3), 30);
    }

    #[test]
    fn interpolation_is_linear_between_nodes() {
        let grid = TimeGrid::days(2, 2).unwrap();
        let traj = Trajectory {
            grid,
            values: vec![[0.0], [1.0], [4.0], [9.0], [16.0]],
        };
        assert_eq!(traj.interpolate(0.25)[0], 0.5);
        assert_eq!(traj.interpolate(1.0)[0], 4.0);
        assert_eq!(traj.interpolate(1.75)[0], 12.5);
        assert_eq!(traj.interpolate(-1.0)[0], 0.0);
        assert_eq!(traj.interpolate(9.0)[0], 16.0);
    }

    #[test]
    fn deterministic() {
        let grid = TimeGrid::days(10, 10).unwrap();
        let f = |t: f64, x: &[f64; 2]| [x[1], -x[0] + (0.3 * t).sin()];
        let a = integrate(f, grid, [1.0, 0.0], Direction::Forward).unwrap();
        let b = integrate(f, grid, [1.0, 0.0], Direction::Forward).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x[0].to_bits() == y[0].to_bits()
            && x[1].to_bits() == y[1].to_bits()));
    }
}
