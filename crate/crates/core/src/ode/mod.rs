//! Quadratic vector fields `x' = x^2` and `x' = x^2 - x` of an algebra.
//!
//! Zeros of the Riccati field are the idempotents and every idempotent ray
//! is invariant under both fields.

mod portrait;
mod singular;

use serde::Serialize;

use crate::algebra::{Algebra, AnyAlgebra};
use crate::linalg::norm;

pub use portrait::{emit_phase_portrait, phase_portrait, render_csv, render_svg, Portrait, PortraitOptions, PortraitSummary, SeedTrajectory};
pub use singular::{
    berlinskii_configuration, classify_singular_points, phase_analysis, BerlinskiiConfig, BerlinskiiShape, PhaseAnalysis,
    SingularLabel, SingularPointClass, StructuralLabel,
};

pub const DEFAULT_DT: f64 = 1e-3;
/// State norm beyond which a trajectory is declared to blow up.
pub const BLOWUP_NORM: f64 = 1e8;
/// Relative step-doubling error beyond which a trajectory is declared to blow up.
pub const STEP_ERROR_LIMIT: f64 = 1e-3;
/// Field norm below which a trajectory has reached a singular point.
pub const SINGULAR_SPEED: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum OdeError {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{0}")]
    NotApplicable(String),
    #[error("degenerate position: {0}")]
    Degenerate(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldKind {
    /// `x' = x^2`.
    Squaring,
    /// `x' = x^2 - x`.
    Riccati,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub kind: FieldKind,
    pub algebra: Algebra<f64>,
}

impl VectorField {
    pub fn new(kind: FieldKind, alg: &AnyAlgebra) -> Self {
        VectorField { kind, algebra: alg.to_f64() }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// `x^2` or `x^2 - x`.
pub fn eval_field(f: &VectorField, x: &[f64]) -> Vec<f64> {
    match f.kind {
        FieldKind::Squaring => f.algebra.square(x),
        FieldKind::Riccati => f.algebra.psi(x),
    }
    .expect("dimension matches the field")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    Completed,
    Blowup,
    EnteredSingularNeighborhood,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.points.last().expect("a trajectory contains its start")
    }
}

/// Classical RK4 with fixed step `dt > 0`.
pub fn integrate(f: &VectorField, x0: &[f64], dt: f64, steps: usize) -> Result<Trajectory, OdeError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(OdeError::Invalid(format!("dt must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(OdeError::Invalid("steps must be at least 1".into()));
    }
    if x0.len() != f.dim() {
        return Err(OdeError::Invalid(format!("start has {} coordinates, field has dimension {}", x0.len(), f.dim())));
    }
    Ok(integrate_signed(f, x0, dt, steps))
}

/// RK4 with a step of either sign; negative steps integrate backward in time.
pub(crate) fn integrate_signed(f: &VectorField, x0: &[f64], dt: f64, steps: usize) -> Trajectory {
    let mut x = x0.to_vec();
    let mut times = vec![0.0];
    let mut points = vec![x.clone()];
    let mut termination = Termination::Completed;
    for k in 1..=steps {
        if norm(&eval_field(f, &x)) < SINGULAR_SPEED {
            termination = Termination::EnteredSingularNeighborhood;
            break;
        }
        let full = rk4_step(f, &x, dt);
        let half = rk4_step(f, &rk4_step(f, &x, dt / 2.0), dt / 2.0);
        let err = full.iter().zip(&half).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() / norm(&half).max(1.0);
        let size = norm(&full);
        if !size.is_finite() || size > BLOWUP_NORM || !(err <= STEP_ERROR_LIMIT) {
            termination = Termination::Blowup;
            break;
        }
        x = full;
        times.push(k as f64 * dt);
        points.push(x.clone());
    }
    Trajectory { times, points, termination }
}

fn rk4_step(f: &VectorField, x: &[f64], h: f64) -> Vec<f64> {
    let shift = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = eval_field(f, x);
    let k2 = eval_field(f, &shift(x, &k1, h / 2.0));
    let k3 = eval_field(f, &shift(x, &k2, h / 2.0));
    let k4 = eval_field(f, &shift(x, &k3, h));
    (0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

/// Largest `|x - proj(x)| / |x|` along squaring-field trajectories started at
/// `t * direction` for each `t` in `samples`, where `proj` is onto the line of
/// `direction`. Idempotent directions give rounding-level values.
pub fn ray_invariance_check(alg: &Algebra<f64>, direction: &[f64], samples: &[f64], dt: f64, steps: usize) -> Result<f64, OdeError> {
    let len = norm(direction);
    if len == 0.0 {
        return Err(OdeError::Invalid("direction must be nonzero".into()));
    }
    let unit: Vec<f64> = direction.iter().map(|x| x / len).collect();
    let field = VectorField { kind: FieldKind::Squaring, algebra: alg.clone() };
    let mut worst: f64 = 0.0;
    for &t in samples {
        let x0: Vec<f64> = direction.iter().map(|x| t * x).collect();
        let traj = integrate(&field, &x0, dt, steps)?;
        for p in &traj.points {
            let dot: f64 = p.iter().zip(&unit).map(|(a, b)| a * b).sum();
            let off = p.iter().zip(&unit).map(|(a, b)| (a - dot * b).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(off / norm(p).max(1e-300));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rr() -> Algebra<f64> {
        Algebra::from_fn(2, |i, j, k| if i == j && j == k { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn field_values() {
        let f = VectorField { kind: FieldKind::Squaring, algebra: rr() };
        assert_eq!(eval_field(&f, &[1.0, 1.0]), vec![1.0, 1.0]);
        let g = VectorField { kind: FieldKind::Riccati, algebra: rr() };
        assert_eq!(eval_field(&g, &[1.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn scalar_riccati_on_a_ray() {
        let f = VectorField { kind: FieldKind::Squaring, algebra: rr() };
        let t = integrate(&f, &[-1.0, -1.0], 1e-3, 1000).unwrap();
        assert_eq!(t.termination, Termination::Completed);
        assert!((t.last()[0] + 0.5).abs() < 1e-9);
        let up = integrate(&f, &[1.0, 1.0], 1e-3, 1000).unwrap();
        assert_eq!(up.termination, Termination::Blowup);
        assert!(*up.times.last().unwrap() < 1.0);
    }

    #[test]
    fn riccati_settles_at_a_stable_node() {
        let f = VectorField { kind: FieldKind::Riccati, algebra: rr() };
        let t = integrate(&f, &[0.1, -0.05], 1e-2, 10_000).unwrap();
        assert_eq!(t.termination, Termination::EnteredSingularNeighborhood);
        assert!(norm(t.last()) < 1e-9);
    }

    #[test]
    fn rejects_bad_steps() {
        let f = VectorField { kind: FieldKind::Squaring, algebra: rr() };
        assert!(integrate(&f, &[0.0, 1.0], 0.0, 10).is_err());
        assert!(integrate(&f, &[0.0, 1.0], 1e-3, 0).is_err());
    }
}
