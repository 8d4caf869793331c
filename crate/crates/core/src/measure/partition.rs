//! Greedy partition of a Pauli sum into commuting sets and shot allocation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::pauli::{word_weight, words_commute, Axis, PauliSum};
use crate::sim::Circuit;

use super::clifford::{synth_diag_circuit, DiagForm, EntanglingGate};

/// One commuting set with its diagonalization circuit.
#[derive(Debug, Clone, Serialize)]
pub struct CommutingSet {
    /// Indices into the parent term list.
    pub members: Vec<usize>,
    pub diag_circuit: Circuit,
    /// Z/I-only images of the members under the circuit, same order.
    pub diag_forms: Vec<DiagForm>,
}

/// Partition of a Hamiltonian into commuting sets plus the split-off identity.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementPlan {
    pub nqubits: usize,
    /// (word, coefficient) per non-identity term, in partition order.
    pub terms: Vec<(String, f64)>,
    pub sets: Vec<CommutingSet>,
    /// Additive constant from the identity term.
    pub identity: f64,
    /// Per-set shot counts (filled by allocation).
    pub shots: Vec<ShotAlloc>,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ShotAlloc {
    /// Evaluate exactly (infinite-shot sentinel).
    Exact,
    Count(u64),
}

/// Greedy insertion with deterministic ordering: largest support first, then
/// largest |coefficient|, then lexicographic word. Each term goes to the first
/// set whose members all commute with it (full commutation, not bitwise).
pub fn partition(h: &PauliSum) -> (Vec<(Vec<Axis>, f64)>, Vec<Vec<usize>>, f64) {
    let mut identity = 0.0;
    let mut terms: Vec<(Vec<Axis>, f64)> = Vec::new();
    for (w, c) in h.iter() {
        if word_weight(w) == 0 {
            identity += c.re;
        } else {
            terms.push((w.to_vec(), c.re));
        }
    }
    terms.sort_by(|a, b| {
        let wa = word_weight(&a.0);
        let wb = word_weight(&b.0);
        wb.cmp(&wa)
            .then(b.1.abs().partial_cmp(&a.1.abs()).unwrap())
            .then(a.0.cmp(&b.0))
    });
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for (i, (w, _)) in terms.iter().enumerate() {
        let mut placed = false;
        for set in sets.iter_mut() {
            if set.iter().all(|&j| words_commute(w, &terms[j].0)) {
                set.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            sets.push(vec![i]);
        }
    }
    (terms, sets, identity)
}

/// Partition + synthesize diagonalization circuits for every set.
pub fn build_plan(h: &PauliSum, gateset: EntanglingGate, epsilon: f64) -> Result<MeasurementPlan, Error> {
    if h.is_empty() {
        return Err(Error::InvalidParams("cannot partition an empty Pauli sum".into()));
    }
    if h.hermiticity_error() > 1e-10 {
        return Err(Error::InvalidParams("Hamiltonian must be Hermitian".into()));
    }
    let n = h.nqubits();
    let (terms, set_indices, identity) = partition(h);
    let mut sets = Vec::with_capacity(set_indices.len());
    for members in set_indices {
        let words: Vec<Vec<Axis>> = members.iter().map(|&i| terms[i].0.clone()).collect();
        let (circuit, forms) = synth_diag_circuit(&words, n, gateset)?;
        sets.push(CommutingSet { members, diag_circuit: circuit, diag_forms: forms });
    }
    Ok(MeasurementPlan {
        nqubits: n,
        terms: terms.iter().map(|(w, c)| (crate::pauli::word_to_string(w), *c)).collect(),
        sets,
        identity,
        shots: Vec::new(),
        epsilon,
    })
}

impl MeasurementPlan {
    pub fn n_sets(&self) -> usize {
        self.sets.len()
    }

    /// Coefficients of one set's members.
    pub fn set_coeffs(&self, set: usize) -> Vec<f64> {
        self.sets[set].members.iter().map(|&i| self.terms[i].1).collect()
    }

    /// Reconstruct one set's operator R_m as a Pauli sum.
    pub fn set_operator(&self, set: usize) -> PauliSum {
        let mut s = PauliSum::zero(self.nqubits);
        for &i in &self.sets[set].members {
            let w = crate::pauli::word_from_str(&self.terms[i].0).expect("stored word is valid");
            s.add_term(w, Complex64::new(self.terms[i].1, 0.0));
        }
        s
    }

    pub fn total_shots(&self) -> u64 {
        self.shots
            .iter()
            .map(|s| match s {
                ShotAlloc::Exact => 0,
                ShotAlloc::Count(n) => *n,
            })
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

/// Eq.-(20)-style allocation N_m = ceil(M * var_m / eps^2) from per-set
/// intrinsic variances.
pub fn allocate_shots(
    plan: &mut MeasurementPlan,
    variances: &[f64],
    epsilon: f64,
) -> Result<u64, Error> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParams("epsilon must be > 0".into()));
    }
    if variances.len() != plan.n_sets() {
        return Err(Error::InvalidParams(format!(
            "got {} variances for {} sets",
            variances.len(),
            plan.n_sets()
        )));
    }
    if variances.iter().any(|v| *v < 0.0) {
        return Err(Error::InvalidParams("variances must be nonnegative".into()));
    }
    let m = plan.n_sets() as f64;
    plan.epsilon = epsilon;
    plan.shots = variances
        .iter()
        .map(|&v| ShotAlloc::Count((m * v / (epsilon * epsilon)).ceil() as u64))
        .collect();
    Ok(plan.total_shots())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::word_from_str;

    fn toy_hamiltonian() -> PauliSum {
        // H = -XX - YY + ZZ + ZI + IZ
        let mut h = PauliSum::zero(2);
        for (w, c) in [("XX", -1.0), ("YY", -1.0), ("ZZ", 1.0), ("ZI", 1.0), ("IZ", 1.0)] {
            h.add_term(word_from_str(w).unwrap(), Complex64::new(c, 0.0));
        }
        h
    }

    #[test]
    fn toy_partition_is_minimal() {
        let (terms, sets, ident) = partition(&toy_hamiltonian());
        assert_eq!(ident, 0.0);
        assert_eq!(sets.len(), 2);
        // the two-qubit words share a set; the singles share the other
        let set_words = |s: &Vec<usize>| {
            let mut v: Vec<String> =
                s.iter().map(|&i| crate::pauli::word_to_string(&terms[i].0)).collect();
            v.sort();
            v
        };
        let mut all: Vec<Vec<String>> = sets.iter().map(set_words).collect();
        all.sort();
        assert_eq!(all, vec![vec!["IZ", "ZI"], vec!["XX", "YY", "ZZ"]]);
    }

    #[test]
    fn partition_soundness_exhaustive() {
        let (terms, sets, _) = partition(&toy_hamiltonian());
        for set in &sets {
            for (a, &i) in set.iter().enumerate() {
                for &j in set.iter().skip(a + 1) {
                    assert!(words_commute(&terms[i].0, &terms[j].0));
                }
            }
        }
    }

    #[test]
    fn identity_split_off() {
        let mut h = toy_hamiltonian();
        h.add_term(word_from_str("II").unwrap(), Complex64::new(2.5, 0.0));
        let (_, _, ident) = partition(&h);
        assert_eq!(ident, 2.5);
    }

    #[test]
    fn allocation_rule() {
        let mut plan = build_plan(&toy_hamiltonian(), EntanglingGate::Cnot, 0.1).unwrap();
        let m = plan.n_sets() as f64;
        let vars: Vec<f64> = (0..plan.n_sets()).map(|i| i as f64 + 0.5).collect();
        let total = allocate_shots(&mut plan, &vars, 0.1).unwrap();
        let want: u64 = vars.iter().map(|v| (m * v / 0.01).ceil() as u64).sum();
        assert_eq!(total, want);
        // all-zero variances -> zero shots
        let zeros = vec![0.0; plan.n_sets()];
        let total = allocate_shots(&mut plan, &zeros, 0.1).unwrap();
        assert_eq!(total, 0);
        assert!(allocate_shots(&mut plan, &vars, 0.0).is_err());
    }
}
