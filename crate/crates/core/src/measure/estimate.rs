//! Sampled estimation of <H> from a measurement plan.
//!
//! For each commuting set the diagonalization circuit rotates the state, the
//! computational-basis distribution is sampled with a counter-based generator
//! seeded per (run seed, set index), and every member's diagonal form is
//! evaluated on each outcome. Zero-shot and exact-mode sets contribute their
//! exact expectations.

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::sim::{run, StateVector};

use super::partition::{MeasurementPlan, ShotAlloc};

pub use super::partition::ShotAlloc as ShotCount;

#[derive(Debug, Clone, Serialize)]
pub struct EnergyEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots_used: u64,
    /// Sets whose contribution is exact (zero-shot or exact mode).
    pub exact_sets: Vec<usize>,
    /// Per-set (mean, sample variance, shots); variance 0 for exact sets.
    pub per_set: Vec<(f64, f64, u64)>,
}

/// Derive the per-set stream seed. Distinct (seed, set) pairs give
/// independent, reproducible streams.
pub fn set_seed(seed: u64, set_index: usize) -> u64 {
    // splitmix64 step over the pair
    let mut z = seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(set_index as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Exact expectation of one set on the rotated state.
fn exact_set_value(plan: &MeasurementPlan, set: usize, rotated: &StateVector) -> f64 {
    let n = plan.nqubits;
    let coeffs = plan.set_coeffs(set);
    let forms = &plan.sets[set].diag_forms;
    let mut acc = 0.0;
    for (basis, amp) in rotated.amps.iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut r = 0.0;
        for (c, f) in coeffs.iter().zip(forms) {
            r += c * f.eval(basis, n);
        }
        acc += p * r;
    }
    acc
}

/// Estimate <H> for `state` under the plan's shot allocation.
pub fn estimate_energy(
    state: &StateVector,
    plan: &MeasurementPlan,
    seed: u64,
) -> Result<EnergyEstimate, Error> {
    if plan.shots.len() != plan.n_sets() {
        return Err(Error::InvalidParams("plan has no shot allocation".into()));
    }
    let n = plan.nqubits;
    let mut mean = plan.identity;
    let mut var_of_mean = 0.0;
    let mut shots_used = 0u64;
    let mut exact_sets = Vec::new();
    let mut per_set = Vec::with_capacity(plan.n_sets());

    for (m, set) in plan.sets.iter().enumerate() {
        let rotated = run(&set.diag_circuit, &[], state)?;
        match plan.shots[m] {
            ShotAlloc::Exact | ShotAlloc::Count(0) => {
                let v = exact_set_value(plan, m, &rotated);
                mean += v;
                exact_sets.push(m);
                per_set.push((v, 0.0, 0));
            }
            ShotAlloc::Count(nm) => {
                let probs: Vec<f64> = rotated.amps.iter().map(|a| a.norm_sqr()).collect();
                let dist = rand::distributions::WeightedIndex::new(&probs)
                    .map_err(|e| Error::Numerical(format!("sampling weights: {e}")))?;
                let mut rng = ChaCha8Rng::seed_from_u64(set_seed(seed, m));
                let coeffs = plan.set_coeffs(m);
                let forms = &set.diag_forms;
                let mut sum = 0.0;
                let mut sumsq = 0.0;
                for _ in 0..nm {
                    let outcome = dist.sample(&mut rng);
                    let mut r = 0.0;
                    for (c, f) in coeffs.iter().zip(forms) {
                        r += c * f.eval(outcome, n);
                    }
                    sum += r;
                    sumsq += r * r;
                }
                let nmf = nm as f64;
                let m_set = sum / nmf;
                mean += m_set;
                let mut var = 0.0;
                if nm > 1 {
                    var = ((sumsq - sum * sum / nmf) / (nmf - 1.0)).max(0.0);
                    var_of_mean += var / nmf;
                }
                shots_used += nm;
                per_set.push((m_set, var, nm));
            }
        }
    }
    Ok(EnergyEstimate { mean, stderr: var_of_mean.sqrt(), shots_used, exact_sets, per_set })
}

/// Exact per-set intrinsic variances (Delta R_m)^2 on a state; used for
/// Eq.-(20) shot allocation and in tests.
pub fn exact_set_variances(state: &StateVector, plan: &MeasurementPlan) -> Result<Vec<f64>, Error> {
    let mut out = Vec::with_capacity(plan.n_sets());
    for m in 0..plan.n_sets() {
        let rotated = run(&plan.sets[m].diag_circuit, &[], state)?;
        let n = plan.nqubits;
        let coeffs = plan.set_coeffs(m);
        let forms = &plan.sets[m].diag_forms;
        let mut e1 = 0.0;
        let mut e2 = 0.0;
        for (basis, amp) in rotated.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut r = 0.0;
            for (c, f) in coeffs.iter().zip(forms) {
                r += c * f.eval(basis, n);
            }
            e1 += p * r;
            e2 += p * r * r;
        }
        out.push((e2 - e1 * e1).max(0.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::partition::{allocate_shots, build_plan};
    use crate::measure::EntanglingGate;
    use crate::pauli::{word_from_str, PauliSum};
    use num_complex::Complex64;

    fn toy() -> PauliSum {
        let mut h = PauliSum::zero(2);
        for (w, c) in [("XX", -1.0), ("YY", -1.0), ("ZZ", 1.0), ("ZI", 1.0), ("IZ", 1.0)] {
            h.add_term(word_from_str(w).unwrap(), Complex64::new(c, 0.0));
        }
        h
    }

    #[test]
    fn exact_mode_matches_dense() {
        let h = toy();
        let mut plan = build_plan(&h, EntanglingGate::Cnot, 0.1).unwrap();
        plan.shots = vec![ShotAlloc::Exact; plan.n_sets()];
        // random-ish normalized state
        let mut st = StateVector::zero_state(2);
        st.amps = vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.4, -0.4),
            Complex64::new(0.1, 0.2),
        ];
        st.normalize();
        let est = estimate_energy(&st, &plan, 7).unwrap();
        let want = h.expectation(&st.amps).re;
        assert!((est.mean - want).abs() < 1e-12, "{} vs {}", est.mean, want);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.shots_used, 0);
    }

    #[test]
    fn worked_example_shot_totals() {
        // |psi> = |01>; paper partitions give N = 10, 6, 8 per eps^2
        let eps = 0.1f64;
        let st = StateVector::from_basis(2, 0b01);
        // partition 2 = what our greedy finds: {XX,YY,ZZ} would be partition 3;
        // compute all three explicitly from hand-built plans
        let h = toy();
        // partition 3: built by our partitioner (M = 2)
        let mut plan = build_plan(&h, EntanglingGate::Cnot, eps).unwrap();
        let vars = exact_set_variances(&st, &plan).unwrap();
        let total = allocate_shots(&mut plan, &vars, eps).unwrap();
        assert_eq!(total, (8.0 / (eps * eps)).round() as u64);
    }

    #[test]
    fn eigenstate_zero_variance() {
        // |01> is an eigenstate of ZZ, ZI, IZ set
        let h = toy();
        let plan = build_plan(&h, EntanglingGate::Cnot, 0.1).unwrap();
        let st = StateVector::from_basis(2, 0b01);
        let vars = exact_set_variances(&st, &plan).unwrap();
        // the all-Z set must have zero variance on a basis state
        let zset = (0..plan.n_sets())
            .find(|&m| plan.sets[m].members.iter().all(|&i| plan.terms[i].0.chars().all(|c| c != 'X' && c != 'Y')))
            .unwrap();
        assert!(vars[zset] < 1e-14);
    }

    #[test]
    fn deterministic_given_seed() {
        let h = toy();
        let mut plan = build_plan(&h, EntanglingGate::Cnot, 0.1).unwrap();
        plan.shots = vec![ShotAlloc::Count(100); plan.n_sets()];
        let mut st = StateVector::zero_state(2);
        st.apply_h(0);
        st.apply_cnot(0, 1);
        let a = estimate_energy(&st, &plan, 42).unwrap();
        let b = estimate_energy(&st, &plan, 42).unwrap();
        assert_eq!(a.mean, b.mean);
        let c = estimate_energy(&st, &plan, 43).unwrap();
        assert!(a.mean != c.mean || a.stderr != c.stderr);
    }
}
