//! Arbitrary-order degenerate perturbation theory for the single plaquette.
//!
//! The bare Hamiltonian is the electric plus mass term, diagonal in the basis
//! (matter configuration, untruncated gauge value e); the kinetic term is the
//! perturbation. Corrections are generated through the Bloch effective
//! Hamiltonian recursion on the degenerate subspace: order-k blocks H_eff^(k)
//! on the subspace and wave-operator columns Omega^(k) over the adaptively
//! grown basis. Degeneracies are lifted by the cascade of effective blocks;
//! the order at which a block's eigenvalues first split is the lifting order.
//!
//! The jump coordinate g_c solves E_B^(+) + E_kin^(+) = E_B^(-) + E_kin^(-)
//! over the corrected fully-filled states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;

/// Matter configurations in the paper's ordering.
pub const MATTER_CONFIGS: [&str; 6] = ["vvvv", "epvv", "vpev", "vvep", "evvp", "epep"];

/// (b, c) with H_E(cfg, e) = g^2/2 (4 e^2 + b e + c).
const QFORM: [(f64, f64); 6] =
    [(0.0, 0.0), (-2.0, 1.0), (-6.0, 3.0), (-2.0, 1.0), (2.0, 1.0), (-4.0, 2.0)];

/// Mass-term units: H_m = m * MASS[cfg].
const MASS_U: [f64; 6] = [-2.0, 0.0, 0.0, 0.0, 0.0, 2.0];

/// Kinetic edges (src cfg, dst cfg, gauge shift, sign); each contributes
/// -i * Omega * sign to <dst|H_kin|src>, plus the Hermitian conjugate.
const EDGES: [(usize, usize, i64, f64); 8] = [
    (0, 1, 0, 1.0),
    (3, 5, 0, 1.0),
    (0, 4, 0, 1.0),
    (2, 5, 0, 1.0),
    (0, 3, 0, 1.0),
    (1, 5, 0, 1.0),
    (0, 2, 1, -1.0),
    (4, 5, 1, -1.0),
];

/// Effective single-plaquette model over (matter config, gauge value e).
#[derive(Debug, Clone)]
pub struct EffectiveObcModel {
    pub g2: f64,
    pub mass: f64,
    pub omega: f64,
    pub emin: i64,
    pub emax: i64,
    /// basis[(cfg, e)] order: e-major, cfg-minor
    pub basis: Vec<(usize, i64)>,
}

impl EffectiveObcModel {
    pub fn new(g2inv: f64, mass: f64, omega: f64, emin: i64, emax: i64) -> Self {
        let basis = (emin..=emax).flat_map(|e| (0..6).map(move |c| (c, e))).collect();
        EffectiveObcModel { g2: 1.0 / g2inv, mass, omega, emin, emax, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index(&self, cfg: usize, e: i64) -> Option<usize> {
        if e < self.emin || e > self.emax {
            return None;
        }
        Some(((e - self.emin) as usize) * 6 + cfg)
    }

    pub fn h0_energy(&self, cfg: usize, e: i64) -> f64 {
        let (b, c) = QFORM[cfg];
        let e = e as f64;
        0.5 * self.g2 * (4.0 * e * e + b * e + c) + self.mass * MASS_U[cfg]
    }

    pub fn h0_diag(&self) -> Vec<f64> {
        self.basis.iter().map(|&(c, e)| self.h0_energy(c, e)).collect()
    }

    /// Kinetic perturbation as a dense matrix over the basis.
    pub fn kinetic(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut v = DMatrix::<Complex64>::zeros(d, d);
        let amp = Complex64::new(0.0, -self.omega);
        for &(src, dst, de, sign) in &EDGES {
            for e in self.emin..=self.emax {
                if let (Some(i), Some(j)) = (self.index(src, e), self.index(dst, e + de)) {
                    v[(j, i)] += amp * sign;
                }
            }
        }
        let vh = v.adjoint();
        v + vh
    }

    /// Plaquette operator (U + U^dag)/2: shifts e by one within a configuration.
    pub fn plaquette(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut b = DMatrix::<Complex64>::zeros(d, d);
        for cfg in 0..6 {
            for e in self.emin..self.emax {
                let i = self.index(cfg, e + 1).unwrap();
                let j = self.index(cfg, e).unwrap();
                b[(j, i)] += Complex64::new(0.5, 0.0);
                b[(i, j)] += Complex64::new(0.5, 0.0);
            }
        }
        b
    }

    /// Magnetic term -(U + U^dag)/(2 g^2) = -plaquette/g^2.
    pub fn magnetic(&self) -> DMatrix<Complex64> {
        self.plaquette() * Complex64::new(-1.0 / self.g2, 0.0)
    }
}

/// Initial unperturbed subspaces of Appendix-C interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubspaceLabel {
    /// |vvvv>|0>, non-degenerate.
    Vacuum,
    /// {|epvv>|0>, |vpev>|1>, |vvep>|0>, |evvp>|0>}, four-fold.
    TwoParticle,
    /// {|epep>|0>, |epep>|1>}, two-fold.
    FullyFilled,
}

impl SubspaceLabel {
    pub fn seeds(&self) -> Vec<(usize, i64)> {
        match self {
            SubspaceLabel::Vacuum => vec![(0, 0)],
            SubspaceLabel::TwoParticle => vec![(1, 0), (2, 1), (3, 0), (4, 0)],
            SubspaceLabel::FullyFilled => vec![(5, 0), (5, 1)],
        }
    }

    pub fn member_names(&self) -> Vec<String> {
        self.seeds()
            .iter()
            .map(|&(c, e)| format!("|{}>|{}>", MATTER_CONFIGS[c], e))
            .collect()
    }
}

/// Bloch recursion outputs: effective blocks and wave-operator columns per order.
struct Bloch {
    heff: Vec<DMatrix<Complex64>>,
    omega: Vec<DMatrix<Complex64>>,
}

fn bloch(h0: &[f64], v: &DMatrix<Complex64>, p_idx: &[usize], order: usize) -> Bloch {
    let n = h0.len();
    let d = p_idx.len();
    let e0 = h0[p_idx[0]];
    let mut g = vec![0.0f64; n];
    for i in 0..n {
        g[i] = if p_idx.contains(&i) { 0.0 } else { 1.0 / (e0 - h0[i]) };
    }
    let mut omega: Vec<DMatrix<Complex64>> = Vec::with_capacity(order + 1);
    let mut om0 = DMatrix::<Complex64>::zeros(n, d);
    for (a, &i) in p_idx.iter().enumerate() {
        om0[(i, a)] = Complex64::new(1.0, 0.0);
    }
    omega.push(om0);
    let mut heff: Vec<DMatrix<Complex64>> = vec![DMatrix::zeros(d, d)];
    for k in 1..=order {
        let v_om = v * &omega[k - 1];
        heff.push(omega[0].adjoint() * &v_om);
        let mut rhs = v_om;
        for j in 1..k {
            rhs -= &omega[k - j] * &heff[j];
        }
        for i in 0..n {
            let gi = Complex64::new(g[i], 0.0);
            for a in 0..d {
                rhs[(i, a)] *= gi;
            }
        }
        omega.push(rhs);
    }
    Bloch { heff, omega }
}

/// One corrected branch of a (possibly lifted) degenerate subspace.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Zeroth-order coefficients over the subspace members.
    pub d0: DVector<Complex64>,
    /// Per-order energy corrections E^(k), k = 0..=order (odd entries vanish).
    pub energy_corrections: Vec<f64>,
    /// Energy through the requested order (truncated effective Hamiltonian).
    pub energy: f64,
    /// Corrected, normalized state over the model basis.
    pub state: DVector<Complex64>,
    /// <box> on the corrected state.
    pub plaquette: f64,
    /// Order at which this branch separated from its last degenerate partner,
    /// None when it never separated (flagged symmetric superposition).
    pub lift_order: Option<u32>,
}

/// A recorded lifting event: at `order` the subspace splits into blocks of
/// the listed dimensions.
#[derive(Debug, Clone, Serialize)]
pub struct LiftEvent {
    pub order: u32,
    pub pattern: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PerturbationState {
    pub label: SubspaceLabel,
    pub order: u32,
    pub model: EffectiveObcModel,
    pub branches: Vec<Branch>,
    pub lift_events: Vec<LiftEvent>,
    /// True when some block stayed degenerate through the requested order.
    pub unresolved: bool,
}

/// Run degenerate perturbation theory from the labelled subspace to `order`.
pub fn perturb(
    g2inv: f64,
    mass: f64,
    omega: f64,
    label: SubspaceLabel,
    order: u32,
) -> Result<PerturbationState, Error> {
    if order < 2 {
        return Err(Error::InvalidParams("perturbation order must be >= 2".into()));
    }
    let span = order as i64 / 2 + 2;
    let model = EffectiveObcModel::new(g2inv, mass, omega, -span, span + 1);
    let h0 = model.h0_diag();
    let v = model.kinetic();
    let seeds = label.seeds();
    let p_idx: Vec<usize> = seeds
        .iter()
        .map(|&(c, e)| model.index(c, e).expect("seed inside basis"))
        .collect();
    // degenerate seeds must share the bare energy
    let e0 = h0[p_idx[0]];
    for &i in &p_idx {
        if (h0[i] - e0).abs() > 1e-9 * (1.0 + e0.abs()) {
            return Err(Error::Numerical("subspace seeds are not degenerate".into()));
        }
    }
    let bl = bloch(&h0, &v, &p_idx, order as usize);
    let d = p_idx.len();

    // lifting cascade over even-order effective blocks: a block carries its
    // spanning columns and the order at which it became one-dimensional
    let mut blocks: Vec<(DMatrix<Complex64>, Option<u32>)> =
        vec![(DMatrix::identity(d, d), if d == 1 { Some(0) } else { None })];
    let mut lift_events: Vec<LiftEvent> = Vec::new();
    for k in (2..=order as usize).step_by(2) {
        let hk = &bl.heff[k];
        let mut new_blocks = Vec::new();
        let mut any_split = false;
        for (basis, lifted) in blocks {
            if basis.ncols() == 1 {
                new_blocks.push((basis, lifted));
                continue;
            }
            let sub = basis.adjoint() * hk * &basis;
            let herm = (&sub + sub.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = herm.symmetric_eigen();
            let mut order_idx: Vec<usize> = (0..basis.ncols()).collect();
            order_idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
            let scale = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-12);
            let mut clusters: Vec<Vec<usize>> = vec![vec![order_idx[0]]];
            for w in order_idx.windows(2) {
                let (a, b) = (w[0], w[1]);
                if (eig.eigenvalues[b] - eig.eigenvalues[a]).abs() < 1e-8 * scale {
                    clusters.last_mut().unwrap().push(b);
                } else {
                    clusters.push(vec![b]);
                }
            }
            if clusters.len() > 1 {
                any_split = true;
            }
            for cluster in clusters {
                let mut cb = DMatrix::<Complex64>::zeros(d, cluster.len());
                for (col, &ei) in cluster.iter().enumerate() {
                    cb.set_column(col, &(&basis * eig.eigenvectors.column(ei)));
                }
                let lifted_at = if cluster.len() == 1 { Some(k as u32) } else { None };
                new_blocks.push((cb, lifted_at));
            }
        }
        if any_split {
            lift_events.push(LiftEvent {
                order: k as u32,
                pattern: new_blocks.iter().map(|(b, _)| b.ncols()).collect(),
            });
        }
        blocks = new_blocks;
    }

    // build branches: for unresolved multi-dim blocks return flagged symmetric
    // superpositions of the block basis columns
    let mut unresolved = false;
    let mut branch_vecs: Vec<(DVector<Complex64>, Option<u32>)> = Vec::new();
    for (basis, lifted) in &blocks {
        if basis.ncols() == 1 {
            branch_vecs.push((basis.column(0).into(), *lifted));
        } else {
            unresolved = true;
            let dim = basis.ncols() as f64;
            let mut sym = DVector::<Complex64>::zeros(d);
            for c in 0..basis.ncols() {
                sym += basis.column(c) * Complex64::new(1.0 / dim.sqrt(), 0.0);
            }
            branch_vecs.push((sym, None));
        }
    }

    // total effective Hamiltonian through the requested order
    let mut hsum = DMatrix::<Complex64>::zeros(d, d);
    for k in 2..=order as usize {
        hsum += &bl.heff[k];
    }
    let hsum = (&hsum + hsum.adjoint()) * Complex64::new(0.5, 0.0);
    let boxop = model.plaquette();

    let mut branches = Vec::new();
    for (d0, lift) in branch_vecs {
        let mut energy_corrections = vec![0.0; order as usize + 1];
        energy_corrections[0] = e0;
        for k in 1..=order as usize {
            energy_corrections[k] = (d0.adjoint() * &bl.heff[k] * &d0)[(0, 0)].re;
        }
        let energy = e0 + (d0.adjoint() * &hsum * &d0)[(0, 0)].re;
        let mut state = DVector::<Complex64>::zeros(model.dim());
        for k in 0..=order as usize {
            state += &bl.omega[k] * &d0;
        }
        let norm = state.norm();
        state /= Complex64::new(norm, 0.0);
        let plaquette = (state.adjoint() * &boxop * &state)[(0, 0)].re;
        branches.push(Branch { d0, energy_corrections, energy, state, plaquette, lift_order: lift });
    }
    branches.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());

    Ok(PerturbationState { label, order, model, branches, lift_events, unresolved })
}

/// Quasi-degenerate fully-filled pair refined by joint diagonalization of the
/// truncated effective Hamiltonian: returns (E_kin, <box>, state) per branch.
fn fully_filled_pair(
    g2inv: f64,
    mass: f64,
    omega: f64,
    order: u32,
) -> Result<Vec<(f64, f64)>, Error> {
    let span = order as i64 / 2 + 2;
    let model = EffectiveObcModel::new(g2inv, mass, omega, -span, span + 1);
    let h0 = model.h0_diag();
    let v = model.kinetic();
    let p_idx: Vec<usize> = SubspaceLabel::FullyFilled
        .seeds()
        .iter()
        .map(|&(c, e)| model.index(c, e).unwrap())
        .collect();
    let bl = bloch(&h0, &v, &p_idx, order as usize);
    let mut hsum = DMatrix::<Complex64>::zeros(2, 2);
    for k in 2..=order as usize {
        hsum += &bl.heff[k];
    }
    let hsum = (&hsum + hsum.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hsum.symmetric_eigen();
    let boxop = model.plaquette();
    let mut out = Vec::new();
    for a in 0..2 {
        let dvec: DVector<Complex64> = eig.eigenvectors.column(a).into();
        let mut state = DVector::<Complex64>::zeros(model.dim());
        for k in 0..=order as usize {
            state += &bl.omega[k] * &dvec;
        }
        let n = state.norm();
        state /= Complex64::new(n, 0.0);
        let bx = (state.adjoint() * &boxop * &state)[(0, 0)].re;
        out.push((eig.eigenvalues[a], bx));
    }
    Ok(out)
}

/// Energy balance between the f+ and f- branches; the root in g^-2 is g_c.
fn balance(g2inv: f64, mass: f64, omega: f64, order: u32) -> Result<Option<f64>, Error> {
    let pair = fully_filled_pair(g2inv, mass, omega, order)?;
    let mut plus = None;
    let mut minus = None;
    for (ekin, bx) in pair {
        // E_B = <H_B> = -g^-2 <box>
        let tot = ekin - g2inv * bx;
        if bx > 0.0 {
            plus = Some(tot);
        } else if bx < 0.0 {
            minus = Some(tot);
        }
    }
    Ok(match (plus, minus) {
        (Some(p), Some(m)) => Some(p - m),
        _ => None,
    })
}

/// Estimate the jump coordinate (in g^-2 units) by bisecting the order-n
/// energy-balance function over (0, 1]; the scan starts above the
/// perturbative pole at g^-2 = -1/(4m) and the rightmost crossing is taken.
pub fn estimate_gc(omega: f64, mass: f64, order: u32) -> Result<f64, Error> {
    let lo = if mass < 0.0 { (1.2 / (-4.0 * mass)).max(1e-3) } else { 1e-3 };
    let hi = 1.0;
    let npts = 120;
    let mut grid = Vec::with_capacity(npts);
    for i in 0..npts {
        let t = i as f64 / (npts - 1) as f64;
        grid.push(lo * (hi / lo).powf(t));
    }
    let vals: Vec<Option<f64>> =
        grid.iter().map(|&g| balance(g, mass, omega, order).unwrap_or(None)).collect();
    for i in (0..npts - 1).rev() {
        if let (Some(a), Some(b)) = (vals[i], vals[i + 1]) {
            if a.signum() != b.signum() {
                // bisection to 1e-6 in g^-2 (tolerance well below the 1e-3 scale of g_c)
                let (mut x0, mut x1, mut f0) = (grid[i], grid[i + 1], a);
                for _ in 0..60 {
                    let xm = 0.5 * (x0 + x1);
                    let fm = match balance(xm, mass, omega, order)? {
                        Some(f) => f,
                        None => return Err(Error::Numerical("balance undefined inside bracket".into())),
                    };
                    if fm.signum() == f0.signum() {
                        x0 = xm;
                        f0 = fm;
                    } else {
                        x1 = xm;
                    }
                    if (x1 - x0).abs() < 1e-9 {
                        break;
                    }
                }
                return Ok(0.5 * (x0 + x1));
            }
        }
    }
    Err(Error::Numerical("no balance crossing found in the scanned g range".into()))
}

/// Jump coordinate from exact diagonalization of the l-truncated effective
/// model (magnetic term included): locate the <box> sign flip across the jump.
pub fn ed_anticrossing(mass: f64, omega: f64, l: i64) -> Result<f64, Error> {
    let ed_box = |g2inv: f64| -> f64 {
        let model = EffectiveObcModel::new(g2inv, mass, omega, -l, l);
        let h0 = model.h0_diag();
        let mut h = model.kinetic() + model.magnetic();
        for (i, &e) in h0.iter().enumerate() {
            h[(i, i)] += Complex64::new(e, 0.0);
        }
        let eig = h.symmetric_eigen();
        let mut k0 = 0;
        for i in 1..model.dim() {
            if eig.eigenvalues[i] < eig.eigenvalues[k0] {
                k0 = i;
            }
        }
        let gs: DVector<Complex64> = eig.eigenvectors.column(k0).into();
        (gs.adjoint() * model.plaquette() * &gs)[(0, 0)].re
    };
    let lo = if mass < 0.0 { (1.2 / (-4.0 * mass)).max(1e-3) } else { 1e-3 };
    let npts = 200;
    let grid: Vec<f64> = (0..npts)
        .map(|i| lo * (1.0f64 / lo).powf(i as f64 / (npts - 1) as f64))
        .collect();
    let bx: Vec<f64> = grid.iter().map(|&g| ed_box(g)).collect();
    for i in 0..npts - 1 {
        if bx[i] < -0.3 && bx[i + 1] > 0.3 {
            let (mut x0, mut x1) = (grid[i], grid[i + 1]);
            for _ in 0..60 {
                let xm = 0.5 * (x0 + x1);
                if ed_box(xm) < 0.0 {
                    x0 = xm;
                } else {
                    x1 = xm;
                }
            }
            return Ok(0.5 * (x0 + x1));
        }
    }
    Err(Error::Numerical("no anti-crossing found in the ED scan".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_second_order_matches_ed() {
        // order-2 vacuum energy vs dense ED of an l=3-truncated model
        // at g^-2 = 1e-3, Omega = 0.1, m = -50, within o(Omega^4)
        let (g2inv, mass, omega) = (1e-3, -50.0, 0.1);
        let st = perturb(g2inv, mass, omega, SubspaceLabel::Vacuum, 2).unwrap();
        let e_pt: f64 = st.branches[0].energy;
        let model = EffectiveObcModel::new(g2inv, mass, omega, -3, 3);
        let h0 = model.h0_diag();
        let mut h = model.kinetic();
        for (i, &e) in h0.iter().enumerate() {
            h[(i, i)] += Complex64::new(e, 0.0);
        }
        let eig = h.symmetric_eigen();
        // eigenvalue closest to the bare vacuum energy
        let evac = model.h0_energy(0, 0);
        let e_ed = eig
            .eigenvalues
            .iter()
            .cloned()
            .min_by(|a, b| (a - evac).abs().partial_cmp(&(b - evac).abs()).unwrap())
            .unwrap();
        assert!((e_pt - e_ed).abs() < omega.powi(4), "pt {e_pt} ed {e_ed}");
    }

    #[test]
    fn odd_orders_vanish() {
        let st = perturb(0.012, -50.0, 5.0, SubspaceLabel::FullyFilled, 8).unwrap();
        for b in &st.branches {
            for k in (1..=7).step_by(2) {
                assert_abs_diff_eq!(b.energy_corrections[k], 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn fully_filled_lifts_at_four() {
        let st = perturb(0.012, -50.0, 5.0, SubspaceLabel::FullyFilled, 8).unwrap();
        assert!(!st.unresolved);
        assert_eq!(st.branches.len(), 2);
        assert_eq!(st.lift_events[0].order, 4);
        // zeroth-order parts are (|0> +- |1>)/sqrt(2) up to phase
        for b in &st.branches {
            let a0 = b.d0[0].norm();
            let a1 = b.d0[1].norm();
            assert_abs_diff_eq!(a0, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-6);
            assert_abs_diff_eq!(a1, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-6);
        }
        // f- (box < 0) has the lower kinetic-corrected energy
        let b0 = &st.branches[0];
        assert!(b0.plaquette < -0.4, "box {}", b0.plaquette);
        assert!(st.branches[1].plaquette > 0.4);
    }

    #[test]
    fn two_particle_partial_lift() {
        // the four-fold two-particle degeneracy splits partially at order 2;
        // a two-dimensional block survives to all computed orders (verified
        // against dense diagonalization: the mid pair is exactly degenerate)
        let st = perturb(0.012, -50.0, 5.0, SubspaceLabel::TwoParticle, 8).unwrap();
        assert_eq!(st.lift_events[0].order, 2);
        assert_eq!(st.lift_events[0].pattern, vec![1, 2, 1]);
        assert!(st.unresolved);
        let resolved: Vec<_> = st.branches.iter().filter(|b| b.lift_order.is_some()).collect();
        assert_eq!(resolved.len(), 2);
        for b in &resolved {
            assert_eq!(b.lift_order, Some(2));
        }
        // the flagged branch sits in the protected block: all its energy
        // corrections vanish and the shifted branches sit symmetrically
        let flagged: Vec<_> = st.branches.iter().filter(|b| b.lift_order.is_none()).collect();
        assert_eq!(flagged.len(), 1);
        for k in 2..=8 {
            assert_abs_diff_eq!(flagged[0].energy_corrections[k], 0.0, epsilon = 1e-9);
        }
        let e2: Vec<f64> = resolved.iter().map(|b| b.energy_corrections[2]).collect();
        assert_abs_diff_eq!(e2[0] + e2[1], 0.0, epsilon = 1e-9);
        assert!(e2[0].abs() > 0.1);
    }

    #[test]
    fn two_particle_multiplet_matches_ed() {
        // dense diagonalization of the same model shows the {-2c, 0, 0, +2c}
        // pattern with the protected pair exactly degenerate
        let (g2inv, mass, omega) = (0.012, -50.0, 5.0);
        let st = perturb(g2inv, mass, omega, SubspaceLabel::TwoParticle, 2).unwrap();
        let model = EffectiveObcModel::new(g2inv, mass, omega, -6, 7);
        let h0 = model.h0_diag();
        let mut h = model.kinetic();
        for (i, &e) in h0.iter().enumerate() {
            h[(i, i)] += Complex64::new(e, 0.0);
        }
        let eig = h.symmetric_eigen();
        let seeds: Vec<usize> = SubspaceLabel::TwoParticle
            .seeds()
            .iter()
            .map(|&(c, e)| model.index(c, e).unwrap())
            .collect();
        let bare = h0[seeds[0]];
        let mut shifts: Vec<f64> = Vec::new();
        for k in 0..model.dim() {
            let wt: f64 = seeds.iter().map(|&i| eig.eigenvectors[(i, k)].norm_sqr()).sum();
            if wt > 0.5 {
                shifts.push(eig.eigenvalues[k] - bare);
            }
        }
        shifts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(shifts.len(), 4);
        // protected pair exactly degenerate in ED
        assert_abs_diff_eq!(shifts[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(shifts[2], 0.0, epsilon = 1e-9);
        // outer shifts match the order-2 corrections to o(Omega^4 / gap^3);
        // three branches: the two split ones and the flagged protected pair
        assert_eq!(st.branches.len(), 3);
        let mut e2: Vec<f64> = st.branches.iter().map(|b| b.energy_corrections[2]).collect();
        e2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((shifts[0] - e2[0]).abs() < 0.05, "{} vs {}", shifts[0], e2[0]);
        assert!((shifts[3] - e2[2]).abs() < 0.05, "{} vs {}", shifts[3], e2[2]);
    }

    #[test]
    fn gc_matches_paper_and_ed() {
        let gc8 = estimate_gc(5.0, -50.0, 8).unwrap();
        assert!((0.011..=0.013).contains(&gc8), "gc(8) = {gc8}");
        let gc6 = estimate_gc(5.0, -50.0, 6).unwrap();
        let gc4 = estimate_gc(5.0, -50.0, 4).unwrap();
        // order monotonicity of the convergence
        assert!((gc8 - gc6).abs() < (gc6 - gc4).abs());
        let ed = ed_anticrossing(-50.0, 5.0, 1).unwrap();
        assert!((gc8 - ed).abs() / ed < 0.10, "gc {gc8} vs ed {ed}");
    }
}
