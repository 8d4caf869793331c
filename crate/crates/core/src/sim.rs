//! Dense statevector simulation of the variational circuits.
//!
//! Gate set: NOT, z-rotation, parameterized iSWAP and controlled-iSWAP for the
//! ansatz circuits, plus H/S/CNOT/fixed-iSWAP Cliffords for measurement-basis
//! changes.
//!
//! Matrix conventions (locked by unit tests):
//! - `ISWAP(theta)` acts on span{|01>, |10>} as [[cos t, i sin t], [i sin t, cos t]]
//!   and as the identity on |00>, |11>; theta = 0 is the identity and
//!   theta = pi/2 the full excitation swap with an i phase.
//! - `CISWAP(theta)` applies `ISWAP(theta)` to its two targets when the control
//!   qubit is |1>.
//! - `RZ(theta)` is diag(1, e^{i theta}).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::SectorMask;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Rz,
    Iswap,
    Ciswap,
    H,
    S,
    Cnot,
    /// Fixed full iSWAP (theta = pi/2), used in measurement circuits.
    IswapFixed,
}

/// How a parameterized gate obtains its angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Param {
    /// Clifford / non-parameterized gate.
    None,
    /// Frozen at a fixed angle (not variational).
    Fixed(f64),
    /// Driven by variational slot `slot`, plus a fixed offset.
    Slot { slot: usize, offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    /// 1-3 qubit indices; for `Ciswap` the first entry is the control.
    pub targets: Vec<usize>,
    pub param: Param,
}

impl Gate {
    pub fn x(q: usize) -> Self {
        Gate { kind: GateKind::X, targets: vec![q], param: Param::None }
    }
    pub fn h(q: usize) -> Self {
        Gate { kind: GateKind::H, targets: vec![q], param: Param::None }
    }
    pub fn s(q: usize) -> Self {
        Gate { kind: GateKind::S, targets: vec![q], param: Param::None }
    }
    pub fn cnot(c: usize, t: usize) -> Self {
        Gate { kind: GateKind::Cnot, targets: vec![c, t], param: Param::None }
    }
    pub fn iswap_fixed(a: usize, b: usize) -> Self {
        Gate { kind: GateKind::IswapFixed, targets: vec![a, b], param: Param::None }
    }
    pub fn rz(q: usize, param: Param) -> Self {
        Gate { kind: GateKind::Rz, targets: vec![q], param }
    }
    pub fn iswap(a: usize, b: usize, param: Param) -> Self {
        Gate { kind: GateKind::Iswap, targets: vec![a, b], param }
    }
    pub fn ciswap(c: usize, a: usize, b: usize, param: Param) -> Self {
        Gate { kind: GateKind::Ciswap, targets: vec![c, a, b], param }
    }

    fn angle(&self, params: &[f64]) -> f64 {
        match self.param {
            Param::None => 0.0,
            Param::Fixed(v) => v,
            Param::Slot { slot, offset } => params[slot] + offset,
        }
    }
}

/// Ordered gate list over a fixed qubit count. Serializes to a versioned JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub schema: u32,
    pub nqubits: usize,
    pub gates: Vec<Gate>,
}

pub const CIRCUIT_SCHEMA_VERSION: u32 = 1;

impl Circuit {
    pub fn new(nqubits: usize) -> Self {
        Circuit { schema: CIRCUIT_SCHEMA_VERSION, nqubits, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(g.targets.iter().all(|&q| q < self.nqubits));
        self.gates.push(g);
    }

    /// Number of distinct variational slots referenced.
    pub fn n_slots(&self) -> usize {
        self.gates
            .iter()
            .filter_map(|g| match g.param {
                Param::Slot { slot, .. } => Some(slot + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Circuit depth under greedy ASAP scheduling (each gate occupies its qubits).
    pub fn depth(&self) -> usize {
        let mut busy = vec![0usize; self.nqubits];
        let mut depth = 0;
        for g in &self.gates {
            let start = g.targets.iter().map(|&q| busy[q]).max().unwrap_or(0);
            for &q in &g.targets {
                busy[q] = start + 1;
            }
            depth = depth.max(start + 1);
        }
        depth
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("circuit json: {e}")))
    }
}

/// Dense complex amplitude vector over the computational basis, qubit 0 being
/// the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub nqubits: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(nqubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << nqubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { nqubits, amps }
    }

    pub fn from_basis(nqubits: usize, basis: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << nqubits];
        amps[basis] = Complex64::new(1.0, 0.0);
        StateVector { nqubits, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Squared overlap |<self|other>|^2.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Probability mass outside the sector.
    pub fn leakage(&self, mask: &SectorMask) -> f64 {
        let mut inside = 0.0;
        for &i in &mask.allowed {
            inside += self.amps[i].norm_sqr();
        }
        (self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - inside).max(0.0)
    }

    fn mask(&self, q: usize) -> usize {
        1usize << (self.nqubits - 1 - q)
    }

    pub fn apply_x(&mut self, q: usize) {
        let m = self.mask(q);
        for s in 0..self.amps.len() {
            if s & m == 0 {
                self.amps.swap(s, s | m);
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let m = self.mask(q);
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        for s in 0..self.amps.len() {
            if s & m == 0 {
                let a = self.amps[s];
                let b = self.amps[s | m];
                self.amps[s] = (a + b) * inv;
                self.amps[s | m] = (a - b) * inv;
            }
        }
    }

    pub fn apply_s(&mut self, q: usize) {
        let m = self.mask(q);
        let i = Complex64::new(0.0, 1.0);
        for s in 0..self.amps.len() {
            if s & m != 0 {
                self.amps[s] *= i;
            }
        }
    }

    pub fn apply_rz(&mut self, q: usize, theta: f64) {
        let m = self.mask(q);
        let ph = Complex64::from_polar(1.0, theta);
        for s in 0..self.amps.len() {
            if s & m != 0 {
                self.amps[s] *= ph;
            }
        }
    }

    pub fn apply_cnot(&mut self, c: usize, t: usize) {
        let mc = self.mask(c);
        let mt = self.mask(t);
        for s in 0..self.amps.len() {
            if s & mc != 0 && s & mt == 0 {
                self.amps.swap(s, s | mt);
            }
        }
    }

    pub fn apply_iswap(&mut self, a: usize, b: usize, theta: f64) {
        let ma = self.mask(a);
        let mb = self.mask(b);
        let c = Complex64::new(theta.cos(), 0.0);
        let is = Complex64::new(0.0, theta.sin());
        for s in 0..self.amps.len() {
            if s & ma == 0 && s & mb != 0 {
                let s10 = (s | ma) & !mb;
                let v01 = self.amps[s];
                let v10 = self.amps[s10];
                self.amps[s] = c * v01 + is * v10;
                self.amps[s10] = is * v01 + c * v10;
            }
        }
    }

    pub fn apply_ciswap(&mut self, ctrl: usize, a: usize, b: usize, theta: f64) {
        let mc = self.mask(ctrl);
        let ma = self.mask(a);
        let mb = self.mask(b);
        let c = Complex64::new(theta.cos(), 0.0);
        let is = Complex64::new(0.0, theta.sin());
        for s in 0..self.amps.len() {
            if s & mc != 0 && s & ma == 0 && s & mb != 0 {
                let s10 = (s | ma) & !mb;
                let v01 = self.amps[s];
                let v10 = self.amps[s10];
                self.amps[s] = c * v01 + is * v10;
                self.amps[s10] = is * v01 + c * v10;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, params: &[f64]) {
        match g.kind {
            GateKind::X => self.apply_x(g.targets[0]),
            GateKind::H => self.apply_h(g.targets[0]),
            GateKind::S => self.apply_s(g.targets[0]),
            GateKind::Cnot => self.apply_cnot(g.targets[0], g.targets[1]),
            GateKind::IswapFixed => {
                self.apply_iswap(g.targets[0], g.targets[1], std::f64::consts::FRAC_PI_2)
            }
            GateKind::Rz => self.apply_rz(g.targets[0], g.angle(params)),
            GateKind::Iswap => self.apply_iswap(g.targets[0], g.targets[1], g.angle(params)),
            GateKind::Ciswap => {
                self.apply_ciswap(g.targets[0], g.targets[1], g.targets[2], g.angle(params))
            }
        }
    }
}

/// Run a circuit on an input state. The parameter vector must cover every slot
/// the circuit references.
pub fn run(circuit: &Circuit, params: &[f64], input: &StateVector) -> Result<StateVector, Error> {
    if circuit.n_slots() > params.len() {
        return Err(Error::InvalidParams(format!(
            "circuit references {} parameter slots, got {}",
            circuit.n_slots(),
            params.len()
        )));
    }
    let mut state = input.clone();
    for g in &circuit.gates {
        state.apply_gate(g, params);
    }
    Ok(state)
}

/// Variational circuit plus its parameter bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnsatzTemplate {
    pub circuit: Circuit,
    pub n_params: usize,
}

impl AnsatzTemplate {
    pub fn prepare(&self, params: &[f64]) -> Result<StateVector, Error> {
        if params.len() != self.n_params {
            return Err(Error::InvalidParams(format!(
                "ansatz expects {} parameters, got {}",
                self.n_params,
                params.len()
            )));
        }
        run(&self.circuit, params, &StateVector::zero_state(self.circuit.nqubits))
    }

    /// slot -> indices of gates it drives
    pub fn sharing(&self) -> Vec<Vec<usize>> {
        let mut map = vec![Vec::new(); self.n_params];
        for (i, g) in self.circuit.gates.iter().enumerate() {
            if let Param::Slot { slot, .. } = g.param {
                map[slot].push(i);
            }
        }
        map
    }

    /// Per-slot harmonic bound of <H> along that parameter: each driven
    /// two-qubit gate contributes at most two harmonics, a z-rotation one.
    pub fn slot_harmonics(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.n_params];
        for g in &self.circuit.gates {
            if let Param::Slot { slot, .. } = g.param {
                h[slot] += match g.kind {
                    GateKind::Rz => 1,
                    _ => 2,
                };
            }
        }
        for v in &mut h {
            *v = (*v).max(1);
        }
        h
    }

    /// indices of gates frozen at fixed angles
    pub fn frozen(&self) -> Vec<(usize, f64)> {
        self.circuit
            .gates
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match g.param {
                Param::Fixed(v) => Some((i, v)),
                _ => None,
            })
            .collect()
    }
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

fn slot(slot: usize) -> Param {
    Param::Slot { slot, offset: 0.0 }
}

fn slot_off(s: usize, offset: f64) -> Param {
    Param::Slot { slot: s, offset }
}

/// Ansatz for the OBC plaquette (7 qubits: matter 0-3, gauge 4-6).
///
/// The full template has 21 slots. The reduced template keeps 11 free
/// parameters: the gauge and matter iSWAP layers, the controlled-iSWAP layer
/// (matter qubits 2 and 3 of the paper, indices 1 and 2 here, act as controls)
/// and one second-layer matter iSWAP; the z-rotations on the outer gauge
/// qubits are frozen at -pi/2 and the remaining gates drop out.
pub fn obc_ansatz(reduced: bool) -> AnsatzTemplate {
    let mut c = Circuit::new(7);
    // prepare |vvvv>|0> = |1010 010>
    for q in [0usize, 2, 5] {
        c.push(Gate::x(q));
    }
    if !reduced {
        c.push(Gate::iswap(4, 5, slot(0)));
        c.push(Gate::iswap(5, 6, slot(1)));
        c.push(Gate::iswap(0, 1, slot(2)));
        c.push(Gate::iswap(0, 3, slot(3)));
        c.push(Gate::iswap(2, 3, slot(4)));
        c.push(Gate::iswap(1, 2, slot(5)));
        c.push(Gate::ciswap(1, 4, 5, slot(6)));
        c.push(Gate::ciswap(1, 5, 6, slot(7)));
        c.push(Gate::ciswap(2, 4, 5, slot(8)));
        c.push(Gate::ciswap(2, 5, 6, slot(9)));
        c.push(Gate::iswap(0, 1, slot(10)));
        c.push(Gate::iswap(2, 3, slot(11)));
        c.push(Gate::iswap(0, 3, slot(12)));
        c.push(Gate::iswap(1, 2, slot(13)));
        for q in 0..7 {
            c.push(Gate::rz(q, slot(14 + q)));
        }
        return AnsatzTemplate { circuit: c, n_params: 21 };
    }
    c.push(Gate::iswap(4, 5, slot(0)));
    c.push(Gate::iswap(5, 6, slot(1)));
    c.push(Gate::iswap(0, 1, slot(2)));
    c.push(Gate::iswap(0, 3, slot(3)));
    c.push(Gate::iswap(2, 3, slot(4)));
    c.push(Gate::iswap(1, 2, slot(5)));
    c.push(Gate::ciswap(1, 4, 5, slot(6)));
    c.push(Gate::ciswap(1, 5, 6, slot(7)));
    c.push(Gate::ciswap(2, 4, 5, slot(8)));
    c.push(Gate::ciswap(2, 5, 6, slot(9)));
    // second matter layer shares one variational parameter
    for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
        c.push(Gate::iswap(a, b, slot(10)));
    }
    c.push(Gate::rz(4, Param::Fixed(-HALF_PI)));
    c.push(Gate::rz(6, Param::Fixed(-HALF_PI)));
    AnsatzTemplate { circuit: c, n_params: 11 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PbcAnsatzRep {
    Electric,
    Magnetic,
}

/// Ansatz for the PBC plaquette at l=1 (9 qubits, rotators on 0-2, 3-5, 6-8).
///
/// Full templates have 19 slots (10 two-qubit gates + 9 z-rotations). Reduced
/// templates keep 3 free parameters via the sharing groups; z-rotations on the
/// outer qubits carry the -pi/2 phase (shared with an offset for the electric
/// circuit, frozen for the magnetic one) and the middle-qubit rotations drop.
pub fn pbc_ansatz(rep: PbcAnsatzRep, reduced: bool) -> AnsatzTemplate {
    let mut c = Circuit::new(9);
    for q in [1usize, 4, 7] {
        c.push(Gate::x(q));
    }
    let outer = [0usize, 2, 3, 5, 6, 8];
    match rep {
        PbcAnsatzRep::Electric => {
            if !reduced {
                c.push(Gate::iswap(3, 4, slot(0)));
                c.push(Gate::iswap(4, 5, slot(1)));
                c.push(Gate::iswap(0, 1, slot(2)));
                c.push(Gate::iswap(1, 2, slot(3)));
                c.push(Gate::iswap(6, 7, slot(4)));
                c.push(Gate::iswap(7, 8, slot(5)));
                c.push(Gate::ciswap(3, 0, 1, slot(6)));
                c.push(Gate::ciswap(5, 1, 2, slot(7)));
                c.push(Gate::ciswap(3, 6, 7, slot(8)));
                c.push(Gate::ciswap(5, 7, 8, slot(9)));
                for q in 0..9 {
                    c.push(Gate::rz(q, slot(10 + q)));
                }
                return AnsatzTemplate { circuit: c, n_params: 19 };
            }
            // groups: {rot2 iswaps + all rz} -> 0, {rot1/3 iswaps} -> 1, {ciswaps} -> 2
            c.push(Gate::iswap(3, 4, slot(0)));
            c.push(Gate::iswap(4, 5, slot(0)));
            c.push(Gate::iswap(0, 1, slot(1)));
            c.push(Gate::iswap(1, 2, slot(1)));
            c.push(Gate::iswap(6, 7, slot(1)));
            c.push(Gate::iswap(7, 8, slot(1)));
            c.push(Gate::ciswap(3, 0, 1, slot(2)));
            c.push(Gate::ciswap(5, 1, 2, slot(2)));
            c.push(Gate::ciswap(3, 6, 7, slot(2)));
            c.push(Gate::ciswap(5, 7, 8, slot(2)));
            for q in 0..9 {
                let off = if outer.contains(&q) { -HALF_PI } else { 0.0 };
                c.push(Gate::rz(q, slot_off(0, off)));
            }
            AnsatzTemplate { circuit: c, n_params: 3 }
        }
        PbcAnsatzRep::Magnetic => {
            // controlled-iSWAPs are steered by the outer qubits of rotators 1 and 3
            // and act on rotator 2, cross-pairing the hop directions
            let cis = [(0usize, 4usize, 5usize), (2, 3, 4), (6, 4, 5), (8, 3, 4)];
            if !reduced {
                c.push(Gate::iswap(0, 1, slot(0)));
                c.push(Gate::iswap(1, 2, slot(1)));
                c.push(Gate::iswap(6, 7, slot(2)));
                c.push(Gate::iswap(7, 8, slot(3)));
                for (i, &(ct, a, b)) in cis.iter().enumerate() {
                    c.push(Gate::ciswap(ct, a, b, slot(4 + i)));
                }
                c.push(Gate::iswap(3, 4, slot(8)));
                c.push(Gate::iswap(4, 5, slot(9)));
                for q in 0..9 {
                    c.push(Gate::rz(q, slot(10 + q)));
                }
                return AnsatzTemplate { circuit: c, n_params: 19 };
            }
            c.push(Gate::iswap(0, 1, slot(0)));
            c.push(Gate::iswap(1, 2, slot(0)));
            c.push(Gate::iswap(6, 7, slot(0)));
            c.push(Gate::iswap(7, 8, slot(0)));
            for &(ct, a, b) in &cis {
                c.push(Gate::ciswap(ct, a, b, slot(1)));
            }
            c.push(Gate::iswap(3, 4, slot(2)));
            c.push(Gate::iswap(4, 5, slot(2)));
            for q in outer {
                c.push(Gate::rz(q, Param::Fixed(HALF_PI)));
            }
            AnsatzTemplate { circuit: c, n_params: 3 }
        }
    }
}

/// Report from a sector-confinement scan over random parameter draws.
#[derive(Debug, Clone, Serialize)]
pub struct MagnetizationReport {
    pub trials: usize,
    pub max_leak: f64,
    /// Index of the first gate whose output leaves the sector, if any trial leaked.
    pub offending_gate: Option<usize>,
}

/// Check that the template keeps amplitudes inside the physical sector for
/// `trials` random parameter draws.
pub fn magnetization_check(
    template: &AnsatzTemplate,
    mask: &SectorMask,
    trials: usize,
    seed: u64,
    tol: f64,
) -> MagnetizationReport {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_leak = 0.0f64;
    let mut offending = None;
    for _ in 0..trials {
        let params: Vec<f64> =
            (0..template.n_params).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
        let state = template.prepare(&params).expect("parameter count matches");
        let leak = state.leakage(mask);
        if leak > max_leak {
            max_leak = leak;
        }
        if leak > tol && offending.is_none() {
            // replay gate by gate to name the first offender
            let mut st = StateVector::zero_state(template.circuit.nqubits);
            for (i, g) in template.circuit.gates.iter().enumerate() {
                st.apply_gate(g, &params);
                // X gates in the preparation layer legitimately move between
                // basis states; only flag once the state has nonzero sector
                // weight and leaks beyond it
                if st.leakage(mask) > tol && mask.allowed.iter().any(|&s| st.amps[s].norm_sqr() > 0.0)
                {
                    offending = Some(i);
                    break;
                }
            }
        }
    }
    MagnetizationReport { trials, max_leak, offending_gate: offending }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn iswap_conventions() {
        // theta = 0 -> identity
        let mut st = StateVector::from_basis(2, 0b01);
        st.apply_iswap(0, 1, 0.0);
        assert_abs_diff_eq!((st.amps[0b01] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        // theta = pi/2 -> full swap with i phase
        st.apply_iswap(0, 1, HALF_PI);
        assert_abs_diff_eq!((st.amps[0b10] - Complex64::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-14);
        // |00>, |11> untouched
        let mut st = StateVector::from_basis(2, 0b11);
        st.apply_iswap(0, 1, 1.234);
        assert_abs_diff_eq!((st.amps[0b11] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ciswap_control_on_one() {
        // control |0>: inert
        let mut st = StateVector::from_basis(3, 0b001);
        st.apply_ciswap(0, 1, 2, HALF_PI);
        assert_abs_diff_eq!((st.amps[0b001] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        // control |1>: swaps targets with i
        let mut st = StateVector::from_basis(3, 0b101);
        st.apply_ciswap(0, 1, 2, HALF_PI);
        assert_abs_diff_eq!((st.amps[0b110] - Complex64::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3);
        let input = StateVector::from_basis(3, 5);
        let out = run(&c, &[], &input).unwrap();
        assert_eq!(out, input);
    }

    #[test]
    fn norm_preserved() {
        use rand::{Rng, SeedableRng};
        let t = obc_ansatz(true);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..25 {
            let params: Vec<f64> =
                (0..t.n_params).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
            let st = t.prepare(&params).unwrap();
            assert_abs_diff_eq!(st.norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(obc_ansatz(false).n_params, 21);
        assert_eq!(obc_ansatz(true).n_params, 11);
        for rep in [PbcAnsatzRep::Electric, PbcAnsatzRep::Magnetic] {
            assert_eq!(pbc_ansatz(rep, false).n_params, 19);
            assert_eq!(pbc_ansatz(rep, true).n_params, 3);
        }
    }

    #[test]
    fn param_count_mismatch_rejected() {
        let t = obc_ansatz(true);
        assert!(t.prepare(&[0.0; 5]).is_err());
    }

    #[test]
    fn electric_sharing_groups() {
        let t = pbc_ansatz(PbcAnsatzRep::Electric, true);
        let sharing = t.sharing();
        // slot 0 drives the rotator-2 iSWAPs plus all nine z-rotations
        assert_eq!(sharing[0].len(), 2 + 9);
        assert_eq!(sharing[1].len(), 4);
        assert_eq!(sharing[2].len(), 4);
        // +pi/2-style offsets sit on the six outer qubits
        let off_gates: Vec<_> = t
            .circuit
            .gates
            .iter()
            .filter(|g| matches!(g.param, Param::Slot { offset, .. } if offset != 0.0))
            .collect();
        assert_eq!(off_gates.len(), 6);
    }

    #[test]
    fn initial_layer_prepares_vacuum() {
        // PBC: |010> per rotator
        let t = pbc_ansatz(PbcAnsatzRep::Electric, true);
        let st = t.prepare(&[0.0, 0.0, 0.0]).unwrap();
        let vac = 0b010010010usize;
        assert!(st.amps[vac].norm() > 0.999_999);
        // OBC: |vvvv>|0> = |1010 010> up to the frozen-phase pattern
        let t = obc_ansatz(true);
        let st = t.prepare(&[0.0; 11]).unwrap();
        let vac = 0b1010010usize;
        assert!(st.amps[vac].norm() > 0.999_999);
    }
}
