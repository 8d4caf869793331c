//! Weak-coupling matter state of the plaquette with open boundaries.
//!
//! For g^-2 >> 1 the ground state factorizes into a matter configuration
//! times the gauge ground state of the magnetic term. The matter coefficients
//! minimize the kinetic expectation, a 6x6 Hermitian quadratic form whose only
//! model input is the gauge matrix element v = <GS_b| U |GS_b>. The l -> infinity
//! asymptote v -> 1 makes the minimizer degenerate; the limit vector is fixed
//! by first-order degenerate perturbation theory in (1 - v).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Error;

/// Matter configurations in Table-II order.
pub use super::perturb::MATTER_CONFIGS;

#[derive(Debug, Clone)]
pub struct WeakCouplingState {
    /// Six complex coefficients over {vvvv, epvv, vpev, vvep, evvp, epep},
    /// phase-aligned so the epvv component is real positive.
    pub c: [Complex64; 6],
    /// Gauge matrix element v(l) = <GS_b|U|GS_b> used in the quadratic form.
    pub gauge_elem: f64,
    /// Gauge ground state of -(U + U^dag) over the 2l+1 values, all-positive sign.
    pub gauge_gs: Vec<f64>,
}

/// Ground state of the truncated gauge chain -(U + U^dag): returns (v, amplitudes).
pub fn gauge_ground(l: u32) -> (f64, Vec<f64>) {
    let d = (2 * l + 1) as usize;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 0..d - 1 {
        m[(i, i + 1)] = -1.0;
        m[(i + 1, i)] = -1.0;
    }
    let eig = m.symmetric_eigen();
    let mut k0 = 0;
    for i in 1..d {
        if eig.eigenvalues[i] < eig.eigenvalues[k0] {
            k0 = i;
        }
    }
    let mut gs: Vec<f64> = eig.eigenvectors.column(k0).iter().copied().collect();
    if gs[d / 2] < 0.0 {
        for a in &mut gs {
            *a = -*a;
        }
    }
    // v = <gs| U |gs> = sum_i gs[i] gs[i+1] (U shifts one step down)
    let v = (0..d - 1).map(|i| gs[i] * gs[i + 1]).sum();
    (v, gs)
}

/// The Eq.-(23) quadratic form K(v): E(c) = c^dag K c with the paper's pair
/// couplings; i Omega on the six matter hops and i Omega v on the two
/// gauge-mediated ones. Omega scales out of the minimizer.
fn kinetic_form(v: f64) -> DMatrix<Complex64> {
    let mut k = DMatrix::<Complex64>::zeros(6, 6);
    let pairs: [(usize, usize, f64); 8] = [
        (0, 1, 1.0),
        (0, 4, 1.0),
        (2, 5, 1.0),
        (3, 0, 1.0),
        (3, 5, 1.0),
        (5, 1, 1.0),
        (0, 2, v),
        (4, 5, v),
    ];
    for (a, b, w) in pairs {
        k[(a, b)] += Complex64::new(0.0, w);
        k[(b, a)] += Complex64::new(0.0, -w);
    }
    k
}

fn align_phase(mut c: DVector<Complex64>) -> DVector<Complex64> {
    let ph = c[1] / Complex64::new(c[1].norm(), 0.0);
    if c[1].norm() > 1e-12 {
        c /= ph;
    }
    c
}

/// Minimize the kinetic form at gauge element `v` (must be < 1 for a unique
/// minimizer).
fn minimize_form(v: f64) -> DVector<Complex64> {
    let k = kinetic_form(v);
    let eig = k.symmetric_eigen();
    let mut k0 = 0;
    for i in 1..6 {
        if eig.eigenvalues[i] < eig.eigenvalues[k0] {
            k0 = i;
        }
    }
    align_phase(eig.eigenvectors.column(k0).into())
}

/// The l -> infinity limit: at v = 1 the minimum is two-fold degenerate; the
/// limit of the v -> 1^- minimizers is the dominant eigenvector of -dK/dv
/// restricted to the degenerate space.
fn limit_vector() -> DVector<Complex64> {
    let k1 = kinetic_form(1.0);
    let eig = k1.symmetric_eigen();
    let emin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let cols: Vec<usize> =
        (0..6).filter(|&i| (eig.eigenvalues[i] - emin).abs() < 1e-9).collect();
    let mut p = DMatrix::<Complex64>::zeros(6, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        p.set_column(j, &eig.eigenvectors.column(i));
    }
    // K(1 - delta) = K(1) - delta dK; ground branch maximizes the dK eigenvalue
    let mut dk = DMatrix::<Complex64>::zeros(6, 6);
    for (a, b) in [(0usize, 2usize), (4, 5)] {
        dk[(a, b)] += Complex64::new(0.0, 1.0);
        dk[(b, a)] += Complex64::new(0.0, -1.0);
    }
    let m = p.adjoint() * dk * &p;
    let meig = m.symmetric_eigen();
    let mut kmax = 0;
    for i in 1..meig.eigenvalues.len() {
        if meig.eigenvalues[i] > meig.eigenvalues[kmax] {
            kmax = i;
        }
    }
    align_phase(&p * meig.eigenvectors.column(kmax))
}

/// Weak-coupling matter coefficients at truncation l. `None` requests the
/// l -> infinity asymptote of the gauge matrix element.
pub fn weak_coupling_matter(l: Option<u32>) -> Result<WeakCouplingState, Error> {
    match l {
        Some(l) => {
            if l < 1 {
                return Err(Error::InvalidParams("truncation l must be >= 1".into()));
            }
            let (v, gs) = gauge_ground(l);
            let c = minimize_form(v);
            Ok(WeakCouplingState {
                c: [c[0], c[1], c[2], c[3], c[4], c[5]],
                gauge_elem: v,
                gauge_gs: gs,
            })
        }
        None => {
            let c = limit_vector();
            Ok(WeakCouplingState {
                c: [c[0], c[1], c[2], c[3], c[4], c[5]],
                gauge_elem: 1.0,
                gauge_gs: Vec::new(),
            })
        }
    }
}

/// Relative phases of the paper's fermionic kets against the computational
/// basis bitstrings, derived by matching the encoded kinetic matrix elements
/// to the Eq.-(23) form: s = (1, 1, -1, -1, 1, -1).
pub const BASIS_PHASES: [f64; 6] = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauge_chain_ground() {
        // closed form: v(l) = cos(pi / (2l + 2))
        for l in 1..=6u32 {
            let (v, gs) = gauge_ground(l);
            let want = (std::f64::consts::PI / (2.0 * l as f64 + 2.0)).cos();
            assert_abs_diff_eq!(v, want, epsilon = 1e-12);
            assert!(gs.iter().all(|&a| a > 0.0));
        }
        let (v1, gs1) = gauge_ground(1);
        assert_abs_diff_eq!(v1, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(gs1[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn table_l1_column() {
        let st = weak_coupling_matter(Some(1)).unwrap();
        // (-0.50i, 0.49, -0.073, -0.49, 0.073, -0.50i) to two decimals
        let want = [
            Complex64::new(0.0, -0.50),
            Complex64::new(0.49, 0.0),
            Complex64::new(-0.073, 0.0),
            Complex64::new(-0.49, 0.0),
            Complex64::new(0.073, 0.0),
            Complex64::new(0.0, -0.50),
        ];
        for (got, want) in st.c.iter().zip(&want) {
            assert!((got - want).norm() < 0.005, "{got} vs {want}");
        }
    }

    #[test]
    fn table_l_infinity_column() {
        let st = weak_coupling_matter(None).unwrap();
        let want = [
            Complex64::new(0.0, -0.5),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -0.5),
        ];
        for (got, want) in st.c.iter().zip(&want) {
            assert!((got - want).norm() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn coefficients_normalized() {
        for l in [Some(1), Some(2), Some(5), None] {
            let st = weak_coupling_matter(l).unwrap();
            let n: f64 = st.c.iter().map(|c| c.norm_sqr()).sum();
            assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
        }
    }
}
