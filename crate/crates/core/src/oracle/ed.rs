//! Sector-restricted exact diagonalization and ground-state observables.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::encoding::SectorMask;
use crate::error::Error;
use crate::hamiltonian::Model;
use crate::pauli::PauliSum;

/// Eigenpairs in the physical sector, energies ascending.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energies: Vec<f64>,
    /// Column k is the k-th eigenvector over the sector basis (mask order).
    pub states: DMatrix<Complex64>,
    pub mask: SectorMask,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn state(&self, k: usize) -> Vec<Complex64> {
        self.states.column(k).iter().copied().collect()
    }

    /// Expand a sector-basis state to the full 2^n amplitude vector.
    pub fn expand(&self, k: usize) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); 1usize << self.mask.nqubits];
        for (pos, &basis) in self.mask.allowed.iter().enumerate() {
            full[basis] = self.states[(pos, k)];
        }
        full
    }

    pub fn gap(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }
}

/// Project a Pauli sum onto the sector basis. Errors if the operator maps the
/// sector outside itself beyond `leak_tol`.
pub fn sector_matrix(
    h: &PauliSum,
    mask: &SectorMask,
    leak_tol: f64,
) -> Result<DMatrix<Complex64>, Error> {
    let dim = mask.len();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut outside: std::collections::HashMap<usize, Complex64> = std::collections::HashMap::new();
    for (col, &basis) in mask.allowed.iter().enumerate() {
        outside.clear();
        for (image, amp) in h.basis_action(basis) {
            if amp.norm() == 0.0 {
                continue;
            }
            match mask.position(image) {
                Some(row) => m[(row, col)] += amp,
                None => {
                    // individual Pauli words move between magnetization
                    // sectors; only the summed image amplitude must vanish
                    *outside.entry(image).or_insert(Complex64::new(0.0, 0.0)) += amp;
                }
            }
        }
        for (image, amp) in &outside {
            if amp.norm() > leak_tol {
                return Err(Error::Numerical(format!(
                    "operator leaks out of the physical sector ({} -> {}, |amp| = {:.3e})",
                    basis,
                    image,
                    amp.norm()
                )));
            }
        }
    }
    Ok(m)
}

/// Lowest eigenpairs of `h` restricted to the physical sector.
pub fn exact_ground(h: &PauliSum, mask: &SectorMask) -> Result<SpectrumResult, Error> {
    if h.hermiticity_error() > 1e-10 {
        return Err(Error::InvalidParams("exact_ground requires a Hermitian operator".into()));
    }
    let scale = h.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let m = sector_matrix(h, mask, (1e-12 * scale).max(1e-10))?;
    let eig = m.clone().symmetric_eigen();
    // sort ascending
    let mut order: Vec<usize> = (0..mask.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut states = DMatrix::<Complex64>::zeros(mask.len(), mask.len());
    for (k, &i) in order.iter().enumerate() {
        states.set_column(k, &eig.eigenvectors.column(i));
    }
    // residual check on the ground state
    let v: DVector<Complex64> = states.column(0).into();
    let res = (&m * &v - &v * Complex64::new(energies[0], 0.0)).norm();
    if res > 1e-9 * (1.0 + m.norm()) {
        return Err(Error::Numerical(format!("eigen residual {res:.3e} too large")));
    }
    Ok(SpectrumResult { energies, states, mask: mask.clone() })
}

/// <state| box |state> for a sector-basis state.
pub fn plaquette_expval(model: &Model, mask: &SectorMask, state: &[Complex64]) -> Result<f64, Error> {
    let scale = model.plaquette.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let b = sector_matrix(&model.plaquette, mask, (1e-12 * scale).max(1e-10))?;
    let v = DVector::from_column_slice(state);
    let val = (v.adjoint() * &b * &v)[(0, 0)];
    Ok(val.re)
}

/// Renormalized coupling g_ren^2 = g^2 / box^(1/4); absent outside the
/// weak-coupling regime (box <= 0).
pub fn running_coupling(g2inv: f64, box_val: f64) -> Option<f64> {
    if box_val <= 0.0 {
        return None;
    }
    Some((1.0 / g2inv) / box_val.powf(0.25))
}

/// Von Neumann entanglement entropy (natural log) of the reduced state on
/// `span` qubits at the end of the register.
///
/// The full state is split as (rest) x (span); spans used here are the gauge
/// blocks, which are trailing and contiguous by construction.
pub fn entanglement_entropy(full_state: &[Complex64], nqubits: usize, span_len: usize) -> f64 {
    let dim_b = 1usize << span_len;
    let dim_a = 1usize << (nqubits - span_len);
    assert_eq!(full_state.len(), dim_a * dim_b);
    // rho_B = sum_a psi(a,.) psi(a,.)^dag
    let mut rho = DMatrix::<Complex64>::zeros(dim_b, dim_b);
    for a in 0..dim_a {
        let row = &full_state[a * dim_b..(a + 1) * dim_b];
        for i in 0..dim_b {
            if row[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim_b {
                rho[(i, j)] += row[i] * row[j].conj();
            }
        }
    }
    let eig = rho.symmetric_eigen();
    let mut s = 0.0;
    for &p in eig.eigenvalues.iter() {
        if p > 1e-14 {
            s -= p * p.ln();
        }
    }
    s
}

/// |<a|b>|^2 for dense states.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_obc_plaquette, ModelParams};
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_spectrum() {
        let p = ModelParams::new(1.0, 0.1, 5.0, 1);
        let model = build_obc_plaquette(&p).unwrap();
        let mask = model.layout.physical_sector();
        let ident = PauliSum::identity(7, Complex64::new(3.0, 0.0));
        let spec = exact_ground(&ident, &mask).unwrap();
        for e in &spec.energies {
            assert_abs_diff_eq!(*e, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn strong_coupling_ground_is_vacuum() {
        // g^-2 = 1e-3, m = 0.1, Omega = 5: ground state ~ |vvvv>|0>
        let p = ModelParams::new(1e-3, 0.1, 5.0, 1);
        let model = build_obc_plaquette(&p).unwrap();
        let mask = model.layout.physical_sector();
        let spec = exact_ground(&model.hamiltonian, &mask).unwrap();
        let vac = 0b1010010usize;
        let pos = mask.position(vac).unwrap();
        let prob = spec.states[(pos, 0)].norm_sqr();
        assert!(prob > 0.99, "vacuum probability {prob}");
        let bx = plaquette_expval(&model, &mask, &spec.state(0)).unwrap();
        assert!(bx.abs() < 1e-3, "box {bx}");
    }

    #[test]
    fn entropy_conventions() {
        // product state -> 0
        let mut full = vec![Complex64::new(0.0, 0.0); 1 << 3];
        full[0b010] = Complex64::new(1.0, 0.0);
        assert_abs_diff_eq!(entanglement_entropy(&full, 3, 2), 0.0, epsilon = 1e-12);
        // Bell pair across the cut -> ln 2
        let mut full = vec![Complex64::new(0.0, 0.0); 1 << 2];
        full[0b00] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        full[0b11] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert_abs_diff_eq!(entanglement_entropy(&full, 2, 1), std::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn running_coupling_values() {
        assert_abs_diff_eq!(running_coupling(1.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        // box = 0.0625, g^2 = 1 -> g_ren^2 = 1/0.5 = 2
        assert_abs_diff_eq!(running_coupling(1.0, 0.0625).unwrap(), 2.0, epsilon = 1e-12);
        assert!(running_coupling(1.0, 0.0).is_none());
        assert!(running_coupling(1.0, -0.3).is_none());
    }

    #[test]
    fn global_phase_invariance() {
        let a = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let ph = Complex64::from_polar(1.0, 1.234);
        let b: Vec<Complex64> = a.iter().map(|x| x * ph).collect();
        assert_abs_diff_eq!(fidelity(&a, &b), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            entanglement_entropy(&a, 1, 1),
            entanglement_entropy(&b, 1, 1),
            epsilon = 1e-12
        );
    }
}
