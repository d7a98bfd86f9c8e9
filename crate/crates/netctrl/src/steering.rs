//! Minimum-input steering of a controllable node group to target states:
//! plan construction through the Grammian minor, and fixed-step RK4
//! verification of the planned input.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::groups::check_group_grammian;
use crate::linalg::{expm_action, grammian, sym_eig};
use crate::system::MasSystem;

pub const DEFAULT_STEPS: usize = 10_000;
const INPUT_SAMPLE_COUNT: usize = 100;

/// A steering plan for one node group: the correction vector z (zero outside
/// the group rows), the induced leader input, and after [`simulate`] the
/// integrated trajectory and per-target errors.
#[derive(Debug, Clone)]
pub struct SteeringPlan {
    pub group: Vec<String>,
    pub t0: f64,
    pub t1: f64,
    pub x0: DVector<f64>,
    pub targets: Vec<(String, f64)>,
    pub z: DVector<f64>,
    /// Final state predicted in closed form: e^{-L T} x0 - W_c z.
    pub final_state_closed_form: DVector<f64>,
    pub input_samples: Vec<(f64, f64)>,
    pub trajectory: Vec<(f64, DVector<f64>)>,
    /// Per-group-member |x(t1) - target| from the simulated trajectory.
    pub target_error: Vec<(String, f64)>,
}

struct InputLaw {
    eigenvalues: Vec<f64>,
    // componentwise products (V^T b)_i (V^T z)_i
    coeffs: Vec<f64>,
    t1: f64,
}

impl InputLaw {
    fn new(l: &DMatrix<f64>, b: &DVector<f64>, z: &DVector<f64>, t1: f64) -> Result<Self> {
        let (eigenvalues, vectors) = sym_eig(l)?;
        let cb = vectors.transpose() * b;
        let cz = vectors.transpose() * z;
        Ok(InputLaw {
            coeffs: cb.iter().zip(cz.iter()).map(|(a, b)| a * b).collect(),
            eigenvalues,
            t1,
        })
    }

    // u(t) = -b^T e^{-L^T (t1 - t)} z
    fn eval(&self, t: f64) -> f64 {
        -self
            .coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, lambda)| c * (-lambda * (self.t1 - t)).exp())
            .sum::<f64>()
    }
}

/// Build a plan driving the group members to their targets at t1. Targets
/// must be keyed exactly by the group; x0 defaults to the zero state.
pub fn plan_steering(
    sys: &MasSystem,
    group: &[impl AsRef<str>],
    x0: Option<&DVector<f64>>,
    targets: &BTreeMap<String, f64>,
    t0: f64,
    t1: f64,
    tol: Option<f64>,
) -> Result<SteeringPlan> {
    let verdict = check_group_grammian(sys, group, t0, t1, tol)?;
    if !verdict.partially_controllable {
        return Err(Error::GroupNotControllable);
    }
    let members = verdict.group;
    if targets.len() != members.len() || members.iter().any(|m| !targets.contains_key(m)) {
        return Err(Error::TargetKeyMismatch);
    }
    let n = sys.node_count();
    let x0 = match x0 {
        Some(v) => v.clone(),
        None => DVector::zeros(n),
    };
    let l = sys.laplacian();
    let b = sys.input_vector();
    let horizon = t1 - t0;
    let free_response = expm_action(&(-&l), horizon, &x0)?;
    let w = grammian(&l, &b, t0, t1)?;
    let idx: Vec<usize> = members
        .iter()
        .map(|m| sys.graph().index_of(m))
        .collect::<Result<_>>()?;
    let minor = DMatrix::from_fn(idx.len(), idx.len(), |i, j| w[(idx[i], idx[j])]);
    let rhs = DVector::from_fn(idx.len(), |i, _| {
        free_response[idx[i]] - targets[&members[i]]
    });
    let z_small = minor
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularMinor)?;
    let mut z = DVector::zeros(n);
    for (k, &i) in idx.iter().enumerate() {
        z[i] = z_small[k];
    }
    let final_state = &free_response - &w * &z;
    let law = InputLaw::new(&l, &b, &z, t1)?;
    let input_samples: Vec<(f64, f64)> = (0..=INPUT_SAMPLE_COUNT)
        .map(|k| {
            let t = t0 + horizon * k as f64 / INPUT_SAMPLE_COUNT as f64;
            (t, law.eval(t))
        })
        .collect();
    let target_error = members
        .iter()
        .zip(&idx)
        .map(|(m, &i)| (m.clone(), (final_state[i] - targets[m]).abs()))
        .collect();
    Ok(SteeringPlan {
        group: members.clone(),
        t0,
        t1,
        x0,
        targets: members
            .iter()
            .map(|m| (m.clone(), targets[m]))
            .collect(),
        z,
        final_state_closed_form: final_state,
        input_samples,
        trajectory: Vec::new(),
        target_error,
    })
}

/// Integrate xdot = -L x + b u(t) with classical fixed-step RK4, evaluating
/// the planned input analytically at the stage times. Fills the trajectory
/// and replaces the closed-form target errors with simulated ones.
pub fn simulate(sys: &MasSystem, plan: &SteeringPlan, steps: usize) -> Result<SteeringPlan> {
    if steps < 10 {
        return Err(Error::TooFewSteps);
    }
    let l = sys.laplacian();
    let b = sys.input_vector();
    let law = InputLaw::new(&l, &b, &plan.z, plan.t1)?;
    let h = (plan.t1 - plan.t0) / steps as f64;
    let deriv = |t: f64, x: &DVector<f64>| -> DVector<f64> { -(&l) * x + &b * law.eval(t) };
    let mut x = plan.x0.clone();
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push((plan.t0, x.clone()));
    for k in 0..steps {
        let t = plan.t0 + k as f64 * h;
        let k1 = deriv(t, &x);
        let k2 = deriv(t + h / 2.0, &(&x + &k1 * (h / 2.0)));
        let k3 = deriv(t + h / 2.0, &(&x + &k2 * (h / 2.0)));
        let k4 = deriv(t + h, &(&x + &k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        trajectory.push((plan.t0 + (k + 1) as f64 * h, x.clone()));
    }
    let target_error = plan
        .targets
        .iter()
        .map(|(m, target)| {
            let i = sys.graph().index_of(m)?;
            Ok((m.clone(), (x[i] - target).abs()))
        })
        .collect::<Result<_>>()?;
    let mut out = plan.clone();
    out.trajectory = trajectory;
    out.target_error = target_error;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use approx::assert_relative_eq;

    fn system(nodes: &[&str], edges: &[(&str, &str, f64)], leader: &str) -> MasSystem {
        MasSystem::new(WeightedGraph::new(nodes, edges).unwrap(), leader).unwrap()
    }

    fn pair() -> MasSystem {
        system(&["v1", "v2"], &[("v1", "v2", 1.0)], "v1")
    }

    #[test]
    fn free_response_targets_need_no_input() {
        let sys = pair();
        let x0 = DVector::from_vec(vec![1.0, 0.5]);
        let free = expm_action(&(-sys.laplacian()), 1.0, &x0).unwrap();
        let targets = BTreeMap::from([
            ("v1".to_string(), free[0]),
            ("v2".to_string(), free[1]),
        ]);
        let plan =
            plan_steering(&sys, &["v1", "v2"], Some(&x0), &targets, 0.0, 1.0, None).unwrap();
        assert!(plan.z.amax() < 1e-9);
        assert!(plan.input_samples.iter().all(|&(_, u)| u.abs() < 1e-9));
    }

    #[test]
    fn scalar_steering_closed_form() {
        let sys = system(&["v1"], &[], "v1");
        let targets = BTreeMap::from([("v1".to_string(), 1.0)]);
        let plan = plan_steering(&sys, &["v1"], None, &targets, 0.0, 1.0, None).unwrap();
        assert_relative_eq!(plan.z[0], -1.0, max_relative = 1e-12);
        assert!(plan.input_samples.iter().all(|&(_, u)| (u - 1.0).abs() < 1e-12));
        let sim = simulate(&sys, &plan, 1000).unwrap();
        assert!(sim.target_error[0].1 < 1e-8);
    }

    #[test]
    fn two_node_group_steering() {
        let sys = pair();
        let targets =
            BTreeMap::from([("v1".to_string(), 1.0), ("v2".to_string(), 1.0)]);
        let plan = plan_steering(&sys, &["v1", "v2"], None, &targets, 0.0, 1.0, None).unwrap();
        let sim = simulate(&sys, &plan, 10_000).unwrap();
        for (_, err) in &sim.target_error {
            assert!(*err < 1e-6, "target error {err}");
        }
        // closed form and simulation agree
        let last = &sim.trajectory.last().unwrap().1;
        assert_relative_eq!(last, &plan.final_state_closed_form, epsilon = 1e-6);
    }

    #[test]
    fn consensus_state_is_stationary_without_input() {
        let sys = system(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v2", "v3", 2.0)],
            "v1",
        );
        let x0 = DVector::from_vec(vec![0.7, 0.7, 0.7]);
        let plan = SteeringPlan {
            group: vec![],
            t0: 0.0,
            t1: 1.0,
            x0: x0.clone(),
            targets: vec![],
            z: DVector::zeros(3),
            final_state_closed_form: x0.clone(),
            input_samples: vec![],
            trajectory: vec![],
            target_error: vec![],
        };
        let sim = simulate(&sys, &plan, 100).unwrap();
        for (_, x) in &sim.trajectory {
            assert_relative_eq!(x, &x0, epsilon = 1e-10);
        }
    }

    #[test]
    fn mean_is_conserved_without_input() {
        let sys = system(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v2", "v3", 2.0)],
            "v1",
        );
        let x0 = DVector::from_vec(vec![1.0, -2.0, 4.0]);
        let plan = SteeringPlan {
            group: vec![],
            t0: 0.0,
            t1: 2.0,
            x0: x0.clone(),
            targets: vec![],
            z: DVector::zeros(3),
            final_state_closed_form: x0.clone(),
            input_samples: vec![],
            trajectory: vec![],
            target_error: vec![],
        };
        let sim = simulate(&sys, &plan, 2000).unwrap();
        let mean0 = x0.mean();
        for (_, x) in &sim.trajectory {
            assert!((x.mean() - mean0).abs() < 1e-9);
        }
    }

    #[test]
    fn dependent_group_rejected() {
        let sys = system(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v1", "v3", 1.0)],
            "v1",
        );
        let targets =
            BTreeMap::from([("v2".to_string(), 1.0), ("v3".to_string(), 2.0)]);
        assert!(matches!(
            plan_steering(&sys, &["v2", "v3"], None, &targets, 0.0, 1.0, None),
            Err(Error::GroupNotControllable)
        ));
    }

    #[test]
    fn target_keys_must_match_group() {
        let sys = pair();
        let targets = BTreeMap::from([("v1".to_string(), 1.0)]);
        assert!(matches!(
            plan_steering(&sys, &["v1", "v2"], None, &targets, 0.0, 1.0, None),
            Err(Error::TargetKeyMismatch)
        ));
    }

    #[test]
    fn too_few_steps_rejected() {
        let sys = pair();
        let targets =
            BTreeMap::from([("v1".to_string(), 0.0), ("v2".to_string(), 0.0)]);
        let plan = plan_steering(&sys, &["v1", "v2"], None, &targets, 0.0, 1.0, None).unwrap();
        assert!(matches!(simulate(&sys, &plan, 5), Err(Error::TooFewSteps)));
    }
}
