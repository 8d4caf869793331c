//! Perturbative tails for the periodic-boundary plaquette.
//!
//! In the strong-coupling region the electric term dominates and the magnetic
//! term is the perturbation; in the weak-coupling region (magnetic
//! representation) the roles reverse. Both solvers run nondegenerate
//! Rayleigh-Schrodinger recursion from the rotator vacuum of the truncated
//! model, so the tails can be compared against exact diagonalization of the
//! same truncation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::encoding::SectorMask;
use crate::error::Error;
use crate::hamiltonian::Model;
use crate::oracle::ed::sector_matrix;

/// Nondegenerate RS recursion from the minimum-diagonal state of `h0`.
/// Returns the corrected, normalized state through the requested order.
pub fn rs_ground_state(
    h0: &[f64],
    v: &DMatrix<Complex64>,
    order: u32,
) -> Result<DVector<Complex64>, Error> {
    let dim = h0.len();
    let mut i0 = 0;
    for i in 1..dim {
        if h0[i] < h0[i0] {
            i0 = i;
        }
    }
    let gap = h0
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != i0)
        .map(|(_, &e)| e - h0[i0])
        .fold(f64::INFINITY, f64::min);
    if gap < 1e-9 {
        return Err(Error::Numerical("perturbative ground state is degenerate".into()));
    }
    let mut denom = vec![0.0f64; dim];
    for i in 0..dim {
        denom[i] = if i == i0 { 0.0 } else { 1.0 / (h0[i0] - h0[i]) };
    }
    let mut psi: Vec<DVector<Complex64>> = vec![DVector::zeros(dim); order as usize + 1];
    psi[0][i0] = Complex64::new(1.0, 0.0);
    let mut energies = vec![0.0f64; order as usize + 1];
    for n in 1..=order as usize {
        let mut en = (psi[0].adjoint() * v * &psi[n - 1])[(0, 0)].re;
        for j in 1..n {
            en -= energies[j] * (psi[0].adjoint() * &psi[n - j])[(0, 0)].re;
        }
        energies[n] = en;
        let mut rhs = v * &psi[n - 1];
        for j in 1..n {
            rhs -= &psi[n - j] * Complex64::new(energies[j], 0.0);
        }
        for i in 0..dim {
            rhs[i] *= Complex64::new(denom[i], 0.0);
        }
        rhs[i0] = Complex64::new(0.0, 0.0);
        psi[n] = rhs;
    }
    let mut state: DVector<Complex64> = DVector::zeros(dim);
    for p in &psi {
        state += p;
    }
    let n = state.norm();
    Ok(state / Complex64::new(n, 0.0))
}

/// Perturbative <box> of the PBC ground state in the model's own truncation.
///
/// For the electric representation the magnetic term is the perturbation
/// (strong coupling, order 4); for the magnetic representation the shift
/// expansion of the electric term is the perturbation (weak coupling, order 2,
/// the series being only semi-convergent nearer the switch point).
pub fn pbc_perturbative_box(model: &Model, mask: &SectorMask, order: u32) -> Result<f64, Error> {
    // split H into the diagonal bare part and the perturbation
    let scale = model.hamiltonian.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let h = sector_matrix(&model.hamiltonian, mask, (1e-12 * scale).max(1e-10))?;
    let b = sector_matrix(&model.plaquette, mask, 1e-9)?;
    let dim = mask.len();
    // bare = diagonal part of H in this basis (both representations have
    // diagonal bare terms in the rotator product basis)
    let mut h0 = vec![0.0f64; dim];
    let mut v = h.clone();
    for i in 0..dim {
        h0[i] = h[(i, i)].re;
        v[(i, i)] = Complex64::new(0.0, 0.0);
    }
    let state = rs_ground_state(&h0, &v, order)?;
    Ok((state.adjoint() * &b * &state)[(0, 0)].re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_pbc, ModelParams, PbcRep};
    use crate::oracle::ed::exact_ground;

    #[test]
    fn strong_tail_matches_ed() {
        for l in [1u32, 2] {
            for g2inv in [0.01, 0.1] {
                let p = ModelParams::new(g2inv, 0.0, 0.0, l);
                let model = build_pbc(&p, PbcRep::Electric).unwrap();
                let mask = model.layout.physical_sector();
                let pt = pbc_perturbative_box(&model, &mask, 4).unwrap();
                let spec = exact_ground(&model.hamiltonian, &mask).unwrap();
                let ed = crate::oracle::ed::plaquette_expval(&model, &mask, &spec.state(0)).unwrap();
                assert!(
                    (pt - ed).abs() / ed.abs().max(1e-12) < 0.01,
                    "l={l} g2inv={g2inv}: pt {pt} vs ed {ed}"
                );
            }
        }
    }

    #[test]
    fn weak_tail_matches_ed() {
        for l in [1u32, 2] {
            for g2inv in [10.0, 30.0, 100.0] {
                let p = ModelParams::new(g2inv, 0.0, 0.0, l);
                let model = build_pbc(&p, PbcRep::Magnetic).unwrap();
                let mask = model.layout.physical_sector();
                let pt = pbc_perturbative_box(&model, &mask, 2).unwrap();
                let spec = exact_ground(&model.hamiltonian, &mask).unwrap();
                let ed = crate::oracle::ed::plaquette_expval(&model, &mask, &spec.state(0)).unwrap();
                assert!(
                    (pt - ed).abs() / ed.abs() < 0.01,
                    "l={l} g2inv={g2inv}: pt {pt} vs ed {ed}"
                );
            }
        }
    }
}
