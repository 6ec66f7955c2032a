//! The beetle antennae search engine.
//!
//! Each iteration draws a random unit direction `b`, probes the objective at
//! the two antenna tips `x + d b` and `x - d b`, and steps a distance `delta`
//! towards the lower tip, projecting back onto the search box. The best
//! centroid seen so far is tracked with a strict improvement test, which
//! makes the best-value trace non-increasing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, BasError, Result};
use crate::objective::Objective;
use crate::params::BasParams;
use crate::space::SearchSpace;

/// Random stream used by every run. ChaCha8 is portable and reproducible
/// across platforms for a given seed.
pub type BasRng = ChaCha8Rng;

/// Draws below this norm are discarded before normalizing.
const MIN_DRAW_NORM: f64 = 1e-12;

/// Samples a unit direction: components i.i.d. uniform on `[-1, 1]`,
/// normalized to unit two-norm.
pub fn sample_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut b = vec![0.0; n];
    fill_direction(&mut b, rng);
    b
}

fn fill_direction<R: Rng + ?Sized>(b: &mut [f64], rng: &mut R) {
    assert!(!b.is_empty(), "direction dimension must be at least 1");
    loop {
        for v in b.iter_mut() {
            *v = rng.random_range(-1.0..=1.0);
        }
        let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm >= MIN_DRAW_NORM {
            b.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// Left and right antenna tips `(x + d b, x - d b)`.
pub fn antennae_points(x: &[f64], d: f64, b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dim(x.len(), b.len())?;
    let left = x.iter().zip(b).map(|(xi, bi)| xi + d * bi).collect();
    let right = x.iter().zip(b).map(|(xi, bi)| xi - d * bi).collect();
    Ok((left, right))
}

/// Advances `(delta, d)` by one iteration of the geometric schedules.
pub fn update_schedules(delta: f64, d: f64, params: &BasParams) -> (f64, f64) {
    (
        params.alpha * delta + params.step_floor,
        params.c * d + params.d0,
    )
}

/// The iterate: centroid position, current step size and antenna length.
#[derive(Debug, Clone, PartialEq)]
pub struct BeetleState {
    pub x: Vec<f64>,
    pub delta: f64,
    pub d: f64,
    pub k: u64,
}

impl BeetleState {
    pub fn new(x0: Vec<f64>, params: &BasParams) -> Self {
        Self {
            x: x0,
            delta: params.delta0,
            d: params.d_init,
            k: 0,
        }
    }
}

fn evaluate<O: Objective + ?Sized>(objective: &O, x: &[f64]) -> Result<f64> {
    let value = objective.eval(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(BasError::NonFinite {
            point: x.to_vec(),
            value,
        })
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Scratch buffers reused across iterations of a run.
struct Workspace {
    b: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self {
            b: vec![0.0; n],
            left: vec![0.0; n],
            right: vec![0.0; n],
        }
    }

    /// Moves `state` one iteration along `self.b`. Two objective evaluations.
    fn advance<O: Objective + ?Sized>(
        &mut self,
        state: &mut BeetleState,
        objective: &O,
        space: &SearchSpace,
        params: &BasParams,
    ) -> Result<()> {
        for (((l, r), &x), &b) in self
            .left
            .iter_mut()
            .zip(self.right.iter_mut())
            .zip(&state.x)
            .zip(&self.b)
        {
            *l = x + state.d * b;
            *r = x - state.d * b;
        }
        let f_left = evaluate(objective, &self.left)?;
        let f_right = evaluate(objective, &self.right)?;
        let s = sign(f_left - f_right);
        for (x, &b) in state.x.iter_mut().zip(&self.b) {
            *x -= state.delta * b * s;
        }
        space.project_in_place(&mut state.x);
        (state.delta, state.d) = update_schedules(state.delta, state.d, params);
        state.k += 1;
        Ok(())
    }
}

fn check_step_inputs<O: Objective + ?Sized>(
    state: &BeetleState,
    objective: &O,
    space: &SearchSpace,
) -> Result<()> {
    check_dim(space.dim(), objective.dimension())?;
    check_dim(space.dim(), state.x.len())
}

/// One projected update with a freshly sampled direction.
pub fn bas_step<O, R>(
    state: &BeetleState,
    objective: &O,
    space: &SearchSpace,
    params: &BasParams,
    rng: &mut R,
) -> Result<BeetleState>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    check_step_inputs(state, objective, space)?;
    let mut ws = Workspace::new(space.dim());
    fill_direction(&mut ws.b, rng);
    let mut next = state.clone();
    ws.advance(&mut next, objective, space, params)?;
    Ok(next)
}

/// One projected update along a caller-supplied unit direction.
pub fn bas_step_with_direction<O: Objective + ?Sized>(
    state: &BeetleState,
    objective: &O,
    space: &SearchSpace,
    params: &BasParams,
    direction: &[f64],
) -> Result<BeetleState> {
    check_step_inputs(state, objective, space)?;
    check_dim(space.dim(), direction.len())?;
    let mut ws = Workspace::new(space.dim());
    ws.b.copy_from_slice(direction);
    let mut next = state.clone();
    ws.advance(&mut next, objective, space, params)?;
    Ok(next)
}

/// Outcome of a single search.
///
/// `trace[0]` is the value at the starting point and `trace[j]` the best
/// value after iteration `j`, so `trace.len() == iterations + 1` and the
/// last entry equals `f_best`. Callers may drop the trace to save memory,
/// in which case it is left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub x_best: Vec<f64>,
    pub f_best: f64,
    pub iterations: u64,
    pub evaluations: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<f64>,
    pub seed: u64,
}

/// Runs the full `k_max` iterations with a stream seeded from `params.seed`.
pub fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    x0: &[f64],
    params: &BasParams,
) -> Result<RunResult> {
    run_until(objective, space, x0, params, |_, _| false)
}

/// Like [`run`], but stops early once `stop(x_best, f_best)` returns true.
/// The predicate is checked before every iteration.
pub fn run_until<O, S>(
    objective: &O,
    space: &SearchSpace,
    x0: &[f64],
    params: &BasParams,
    stop: S,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    S: FnMut(&[f64], f64) -> bool,
{
    let mut rng = BasRng::seed_from_u64(params.seed);
    run_with_rng(objective, space, x0, params, &mut rng, stop).map(|mut r| {
        r.seed = params.seed;
        r
    })
}

/// Core loop on an externally owned random stream. The returned `seed`
/// field is copied from `params.seed`; callers that derive the stream
/// differently should overwrite it.
pub fn run_with_rng<O, R, S>(
    objective: &O,
    space: &SearchSpace,
    x0: &[f64],
    params: &BasParams,
    rng: &mut R,
    mut stop: S,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
    S: FnMut(&[f64], f64) -> bool,
{
    params.validate()?;
    check_dim(space.dim(), objective.dimension())?;
    check_dim(space.dim(), x0.len())?;
    if !space.contains(x0) {
        return Err(BasError::OutOfBounds { point: x0.to_vec() });
    }

    let mut f_best = evaluate(objective, x0)?;
    let mut x_best = x0.to_vec();
    let mut evaluations = 1u64;
    let mut trace = vec![f_best];

    let mut state = BeetleState::new(x0.to_vec(), params);
    let mut ws = Workspace::new(space.dim());
    while state.k < params.k_max && !stop(&x_best, f_best) {
        fill_direction(&mut ws.b, rng);
        ws.advance(&mut state, objective, space, params)?;
        let f = evaluate(objective, &state.x)?;
        evaluations += 3;
        if f < f_best {
            f_best = f;
            x_best.copy_from_slice(&state.x);
        }
        trace.push(f_best);
    }

    Ok(RunResult {
        x_best,
        f_best,
        iterations: state.k,
        evaluations,
        trace,
        seed: params.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::FnObjective;

    fn params() -> BasParams {
        BasParams {
            alpha: 0.95,
            c: 0.95,
            delta0: 1.0,
            d_init: 0.5,
            d0: 0.001,
            step_floor: 0.001,
            k_max: 200,
            seed: 11,
        }
    }

    #[test]
    fn one_dimensional_direction_is_plus_or_minus_one() {
        let mut rng = BasRng::seed_from_u64(3);
        for _ in 0..1000 {
            let b = sample_direction(1, &mut rng);
            assert!(b[0] == 1.0 || b[0] == -1.0, "{b:?}");
        }
    }

    #[test]
    fn antennae_examples() {
        let (l, r) = antennae_points(&[0.0, 0.0, 0.0], 1.0, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(l, vec![1.0, 0.0, 0.0]);
        assert_eq!(r, vec![-1.0, 0.0, 0.0]);

        let (l, r) = antennae_points(&[1.0, 1.0], 2.0, &[1.0, 0.0]).unwrap();
        assert_eq!(l, vec![3.0, 1.0]);
        assert_eq!(r, vec![-1.0, 1.0]);

        let x = [0.3, -2.0];
        let (l, r) = antennae_points(&x, 0.0, &[0.6, 0.8]).unwrap();
        assert_eq!(l, x.to_vec());
        assert_eq!(r, x.to_vec());

        assert!(antennae_points(&[0.0], 1.0, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn schedule_examples() {
        let p = BasParams {
            alpha: 0.95,
            c: 0.94,
            d0: 0.001,
            step_floor: 0.001,
            ..params()
        };
        let (delta, d) = update_schedules(10.0, 10.0, &p);
        assert!((delta - 9.501).abs() < 1e-12);
        assert!((d - 9.401).abs() < 1e-12);

        let fixed = p.step_limit();
        let (delta, _) = update_schedules(fixed, 1.0, &p);
        assert!((delta - fixed).abs() < 1e-15);
    }

    #[test]
    fn tie_leaves_position_unchanged() {
        let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
        let flat = FnObjective::new(2, |_: &[f64]| 5.0);
        let state = BeetleState::new(vec![1.0, -2.0], &params());
        let mut rng = BasRng::seed_from_u64(0);
        let next = bas_step(&state, &flat, &space, &params(), &mut rng).unwrap();
        assert_eq!(next.x, state.x);
        assert_eq!(next.k, 1);
    }

    #[test]
    fn steps_downhill_on_parabola() {
        let space = SearchSpace::unbounded(1).unwrap();
        let parabola = FnObjective::new(1, |x: &[f64]| x[0] * x[0]);
        let p = params();
        let state = BeetleState {
            x: vec![1.0],
            delta: 0.25,
            d: 0.5,
            k: 0,
        };
        let next = bas_step_with_direction(&state, &parabola, &space, &p, &[1.0]).unwrap();
        assert_eq!(next.x, vec![0.75]);
        let (delta, d) = update_schedules(0.25, 0.5, &p);
        assert_eq!((next.delta, next.d), (delta, d));
    }

    #[test]
    fn non_finite_objective_is_reported() {
        let space = SearchSpace::unbounded(1).unwrap();
        let bad = FnObjective::new(1, |x: &[f64]| if x[0] > 1.2 { f64::NAN } else { 0.0 });
        let state = BeetleState {
            x: vec![1.0],
            delta: 0.25,
            d: 0.5,
            k: 0,
        };
        let err = bas_step_with_direction(&state, &bad, &space, &params(), &[1.0]).unwrap_err();
        match err {
            BasError::NonFinite { point, .. } => assert_eq!(point, vec![1.5]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_objective_keeps_start() {
        let space = SearchSpace::uniform(3, -1.0, 1.0).unwrap();
        let flat = FnObjective::new(3, |_: &[f64]| 5.0);
        let x0 = [0.1, 0.2, 0.3];
        let r = run(&flat, &space, &x0, &params()).unwrap();
        assert_eq!(r.f_best, 5.0);
        assert_eq!(r.x_best, x0.to_vec());
        assert_eq!(r.evaluations, 1 + 3 * params().k_max);
    }

    #[test]
    fn zero_iterations() {
        let space = SearchSpace::uniform(1, -1.0, 1.0).unwrap();
        let obj = FnObjective::new(1, |x: &[f64]| x[0] + 3.0);
        let r = run(
            &obj,
            &space,
            &[0.5],
            &BasParams {
                k_max: 0,
                ..params()
            },
        )
        .unwrap();
        assert_eq!(r.f_best, 3.5);
        assert_eq!(r.trace, vec![3.5]);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn rejects_start_outside_box() {
        let space = SearchSpace::uniform(1, -1.0, 1.0).unwrap();
        let obj = FnObjective::new(1, |x: &[f64]| x[0]);
        assert!(matches!(
            run(&obj, &space, &[2.0], &params()),
            Err(BasError::OutOfBounds { .. })
        ));
        assert!(matches!(
            run(&obj, &space, &[0.0, 0.0], &params()),
            Err(BasError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn early_stop_halts_loop() {
        let space = SearchSpace::uniform(2, -10.0, 10.0).unwrap();
        let sphere = FnObjective::new(2, |x: &[f64]| x.iter().map(|v| v * v).sum());
        let p = BasParams {
            k_max: 100_000,
            ..params()
        };
        let r = run_until(&sphere, &space, &[5.0, 5.0], &p, |_, f| f < 1e-2).unwrap();
        assert!(r.f_best < 1e-2);
        assert!(r.iterations < p.k_max);
        assert_eq!(r.evaluations, 1 + 3 * r.iterations);
        assert_eq!(r.trace.len() as u64, r.iterations + 1);
    }

    #[test]
    fn converges_on_sphere() {
        let space = SearchSpace::uniform(2, -10.0, 10.0).unwrap();
        let sphere = FnObjective::new(2, |x: &[f64]| x.iter().map(|v| v * v).sum());
        let r = run(
            &sphere,
            &space,
            &[5.0, -5.0],
            &BasParams {
                k_max: 2000,
                ..params()
            },
        )
        .unwrap();
        assert!(r.f_best < 1e-3, "{}", r.f_best);
        assert_eq!(*r.trace.last().unwrap(), r.f_best);
    }
}
