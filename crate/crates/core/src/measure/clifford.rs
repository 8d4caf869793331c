//! Clifford circuits that rotate a commuting set of Pauli words into Z/I form.
//!
//! Synthesis runs a tableau-style elimination: pick the remaining word with the
//! smallest X-support, normalize its Ys to Xs with S gates, merge the X-support
//! into one pivot with a CNOT fan, and turn the pivot into Z with a Hadamard.
//! Words that are already diagonal can never be spoiled: a diagonal word
//! containing Z on the pivot would anticommute with the processed word right
//! before the Hadamard, contradicting commutativity.
//!
//! The entangling gate is configurable. For the iSWAP set every CNOT becomes
//! local gates plus a single iSWAP and a virtual wire swap, so there is no
//! two-qubit gate overhead; the emitted circuit then diagonalizes the set up to
//! a fixed relabeling, which the recomputed diagonal forms absorb.

use serde::Serialize;

use crate::error::Error;
use crate::pauli::Axis;
use crate::sim::{Circuit, Gate, GateKind, Param};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EntanglingGate {
    Cnot,
    Iswap,
}

/// Z/I-only image of a set member: word plus its +-1 sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagForm {
    pub word: String,
    pub sign: f64,
}

impl DiagForm {
    /// Evaluate the diagonal word on a measured bitstring (qubit 0 = MSB).
    pub fn eval(&self, outcome: usize, nqubits: usize) -> f64 {
        let mut v = self.sign;
        for (q, ch) in self.word.chars().enumerate() {
            if ch == 'Z' && outcome & (1usize << (nqubits - 1 - q)) != 0 {
                v = -v;
            }
        }
        v
    }

    pub fn is_diagonal(&self) -> bool {
        self.word.chars().all(|c| c == 'I' || c == 'Z')
    }
}

/// Pauli word in symplectic form with a tracked sign.
#[derive(Debug, Clone)]
struct SymPauli {
    x: Vec<bool>,
    z: Vec<bool>,
    neg: bool,
}

impl SymPauli {
    fn from_word(w: &[Axis]) -> Self {
        SymPauli {
            x: w.iter().map(|a| matches!(a, Axis::X | Axis::Y)).collect(),
            z: w.iter().map(|a| matches!(a, Axis::Z | Axis::Y)).collect(),
            neg: false,
        }
    }

    fn x_weight(&self) -> usize {
        self.x.iter().filter(|b| **b).count()
    }

    fn word(&self) -> String {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            })
            .collect()
    }

    fn conj_h(&mut self, q: usize) {
        if self.x[q] && self.z[q] {
            self.neg = !self.neg;
        }
        let t = self.x[q];
        self.x[q] = self.z[q];
        self.z[q] = t;
    }

    fn conj_s(&mut self, q: usize) {
        // S X S^dag = Y, S Y S^dag = -X
        if self.x[q] && self.z[q] {
            self.neg = !self.neg;
        }
        self.z[q] ^= self.x[q];
    }

    fn conj_sdg(&mut self, q: usize) {
        // S^dag X S = -Y, S^dag Y S = X
        if self.x[q] && !self.z[q] {
            self.neg = !self.neg;
        }
        self.z[q] ^= self.x[q];
    }

    fn conj_cnot(&mut self, c: usize, t: usize) {
        if self.x[c] && self.z[t] && (self.x[t] == self.z[c]) {
            self.neg = !self.neg;
        }
        self.x[t] ^= self.x[c];
        self.z[c] ^= self.z[t];
    }

    fn conj_swap(&mut self, a: usize, b: usize) {
        self.x.swap(a, b);
        self.z.swap(a, b);
    }

    /// iSWAP = SWAP * CZ * (S x S); CZ realized as H(b) CNOT(a,b) H(b).
    fn conj_iswap(&mut self, a: usize, b: usize) {
        self.conj_s(a);
        self.conj_s(b);
        self.conj_h(b);
        self.conj_cnot(a, b);
        self.conj_h(b);
        self.conj_swap(a, b);
    }

    fn conj_gate(&mut self, g: &Gate) {
        match g.kind {
            GateKind::H => self.conj_h(g.targets[0]),
            GateKind::S => self.conj_s(g.targets[0]),
            GateKind::Cnot => self.conj_cnot(g.targets[0], g.targets[1]),
            GateKind::IswapFixed => self.conj_iswap(g.targets[0], g.targets[1]),
            GateKind::Rz => {
                // only the S^dag special case appears in measurement circuits
                match g.param {
                    Param::Fixed(v) if (v + std::f64::consts::FRAC_PI_2).abs() < 1e-12 => {
                        self.conj_sdg(g.targets[0])
                    }
                    Param::Fixed(v) if (v - std::f64::consts::FRAC_PI_2).abs() < 1e-12 => {
                        self.conj_s(g.targets[0])
                    }
                    _ => panic!("non-Clifford RZ in measurement circuit"),
                }
            }
            _ => panic!("non-Clifford gate {:?} in measurement circuit", g.kind),
        }
    }
}

/// Emits either plain CNOTs or their iSWAP-native equivalent with a virtual
/// wire permutation (no entangling-gate overhead).
struct Emitter {
    gateset: EntanglingGate,
    perm: Vec<usize>,
    gates: Vec<Gate>,
}

impl Emitter {
    fn new(n: usize, gateset: EntanglingGate) -> Self {
        Emitter { gateset, perm: (0..n).collect(), gates: Vec::new() }
    }

    fn h(&mut self, q: usize) {
        self.gates.push(Gate::h(self.perm[q]));
    }

    fn s(&mut self, q: usize) {
        self.gates.push(Gate::s(self.perm[q]));
    }

    fn sdg(&mut self, q: usize) {
        self.gates
            .push(Gate::rz(self.perm[q], Param::Fixed(-std::f64::consts::FRAC_PI_2)));
    }

    fn cnot(&mut self, c: usize, t: usize) {
        match self.gateset {
            EntanglingGate::Cnot => self.gates.push(Gate::cnot(self.perm[c], self.perm[t])),
            EntanglingGate::Iswap => {
                // CNOT(c,t) = H(t) . [SWAP . iSWAP . (Sdg x Sdg)](c,t) . H(t)
                self.h(t);
                self.sdg(c);
                self.sdg(t);
                self.gates.push(Gate::iswap_fixed(self.perm[c], self.perm[t]));
                self.perm.swap(c, t);
                self.h(t);
            }
        }
    }
}

/// Synthesize a Clifford circuit diagonalizing all `words` (which must
/// mutually commute). Returns the circuit and the diagonal images.
pub fn synth_diag_circuit(
    words: &[Vec<Axis>],
    nqubits: usize,
    gateset: EntanglingGate,
) -> Result<(Circuit, Vec<DiagForm>), Error> {
    for (i, a) in words.iter().enumerate() {
        for b in words.iter().skip(i + 1) {
            if !crate::pauli::words_commute(a, b) {
                return Err(Error::InvalidParams(
                    "synth_diag_circuit requires mutually commuting words".into(),
                ));
            }
        }
    }
    let mut terms: Vec<SymPauli> = words.iter().map(|w| SymPauli::from_word(w)).collect();
    let mut em = Emitter::new(nqubits, gateset);

    loop {
        // smallest X-support first keeps the CNOT fans short
        let next = terms
            .iter()
            .enumerate()
            .filter(|(_, t)| t.x_weight() > 0)
            .min_by_key(|(_, t)| (t.x_weight(), t.word()))
            .map(|(i, _)| i);
        let Some(gi) = next else { break };

        let apply_all = |terms: &mut Vec<SymPauli>, em: &mut Emitter, op: &str, a: usize, b: usize| {
            match op {
                "S" => {
                    em.s(a);
                    for t in terms.iter_mut() {
                        t.conj_s(a);
                    }
                }
                "H" => {
                    em.h(a);
                    for t in terms.iter_mut() {
                        t.conj_h(a);
                    }
                }
                "CNOT" => {
                    em.cnot(a, b);
                    for t in terms.iter_mut() {
                        t.conj_cnot(a, b);
                    }
                }
                _ => unreachable!(),
            }
        };

        // Y -> X on the X-support
        let ys: Vec<usize> =
            (0..nqubits).filter(|&q| terms[gi].x[q] && terms[gi].z[q]).collect();
        for q in ys {
            apply_all(&mut terms, &mut em, "S", q, 0);
        }
        let xs: Vec<usize> = (0..nqubits).filter(|&q| terms[gi].x[q]).collect();
        let p = xs[0];
        for &q in &xs[1..] {
            apply_all(&mut terms, &mut em, "CNOT", p, q);
        }
        apply_all(&mut terms, &mut em, "H", p, 0);
        debug_assert_eq!(terms[gi].x_weight(), 0);
    }

    let mut circuit = Circuit::new(nqubits);
    for g in em.gates {
        circuit.push(g);
    }

    // recompute the diagonal images through the emitted circuit so the iSWAP
    // set's virtual permutation is folded in
    let mut forms = Vec::with_capacity(words.len());
    for w in words {
        let mut t = SymPauli::from_word(w);
        for g in &circuit.gates {
            t.conj_gate(g);
        }
        let form = DiagForm { word: t.word(), sign: if t.neg { -1.0 } else { 1.0 } };
        if !form.is_diagonal() {
            return Err(Error::Numerical(format!(
                "synthesis left a non-diagonal image {}",
                form.word
            )));
        }
        forms.push(form);
    }
    Ok((circuit, forms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{word_dense, word_from_str};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn gate_matrix(g: &Gate, n: usize) -> DMatrix<Complex64> {
        // build by applying the gate to every basis state
        let dim = 1usize << n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            let mut st = crate::sim::StateVector::from_basis(n, col);
            st.apply_gate(g, &[]);
            for row in 0..dim {
                m[(row, col)] = st.amps[row];
            }
        }
        m
    }

    fn check_dense(words: &[&str], n: usize, gateset: EntanglingGate) {
        let ws: Vec<_> = words.iter().map(|w| word_from_str(w).unwrap()).collect();
        let (circ, forms) = synth_diag_circuit(&ws, n, gateset).unwrap();
        let dim = 1usize << n;
        let mut c = DMatrix::<Complex64>::identity(dim, dim);
        for g in &circ.gates {
            c = gate_matrix(g, n) * c;
        }
        for (w, f) in ws.iter().zip(&forms) {
            assert!(f.is_diagonal(), "{}", f.word);
            let orig = word_dense(w);
            let got = &c * orig * c.adjoint();
            let want = word_dense(&word_from_str(&f.word).unwrap())
                * Complex64::new(f.sign, 0.0);
            assert!((got - want).norm() < 1e-10, "word {} -> {} sign {}",
                crate::pauli::word_to_string(w), f.word, f.sign);
        }
    }

    #[test]
    fn xx_yy_zz_diagonalizes() {
        check_dense(&["XX", "YY", "ZZ"], 2, EntanglingGate::Cnot);
        check_dense(&["XX", "YY", "ZZ"], 2, EntanglingGate::Iswap);
    }

    #[test]
    fn already_diagonal_is_empty() {
        let ws = vec![word_from_str("ZI").unwrap(), word_from_str("IZ").unwrap()];
        let (circ, forms) = synth_diag_circuit(&ws, 2, EntanglingGate::Cnot).unwrap();
        assert!(circ.gates.is_empty());
        assert_eq!(forms[0].word, "ZI");
        assert_eq!(forms[1].sign, 1.0);
    }

    #[test]
    fn rejects_noncommuting() {
        let ws = vec![word_from_str("XI").unwrap(), word_from_str("ZI").unwrap()];
        assert!(synth_diag_circuit(&ws, 2, EntanglingGate::Cnot).is_err());
    }

    #[test]
    fn mixed_weight_sets() {
        check_dense(&["XYZ", "YXI", "ZZZ", "IIZ"], 3, EntanglingGate::Cnot);
        check_dense(&["XYZ", "YXI", "ZZZ", "IIZ"], 3, EntanglingGate::Iswap);
        check_dense(&["XXXX", "YYXX", "ZZII"], 4, EntanglingGate::Cnot);
        check_dense(&["XXXX", "YYXX", "ZZII"], 4, EntanglingGate::Iswap);
    }

    #[test]
    fn diag_form_eval() {
        let f = DiagForm { word: "ZIZ".into(), sign: -1.0 };
        assert_eq!(f.eval(0b000, 3), -1.0);
        assert_eq!(f.eval(0b100, 3), 1.0);
        assert_eq!(f.eval(0b101, 3), -1.0);
    }
}
