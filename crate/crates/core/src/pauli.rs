//! Pauli-string algebra.
//!
//! A [`PauliSum`] is the universal operator currency of this crate: Hamiltonians,
//! observables and encoded gauge operators are all sums of tensor products of
//! single-qubit Pauli operators with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;

/// Coefficients with magnitude below this are dropped after merging.
pub const MERGE_TOL: f64 = 1e-14;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    /// Product table: returns (power of i, resulting axis) with `self * other = i^k * axis`.
    pub fn mul(self, other: Axis) -> (u8, Axis) {
        use Axis::*;
        match (self, other) {
            (I, a) | (a, I) => (0, a),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    pub fn commutes(self, other: Axis) -> bool {
        self == Axis::I || other == Axis::I || self == other
    }

    pub fn to_char(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Axis, Error> {
        match c {
            'I' => Ok(Axis::I),
            'X' => Ok(Axis::X),
            'Y' => Ok(Axis::Y),
            'Z' => Ok(Axis::Z),
            _ => Err(Error::Parse(format!("invalid Pauli axis '{c}'"))),
        }
    }

    fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Axis::I => [[one, o], [o, one]],
            Axis::X => [[o, one], [one, o]],
            Axis::Y => [[o, -i], [i, o]],
            Axis::Z => [[one, o], [o, -one]],
        }
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Word of single-qubit Paulis; two words multiply qubit-wise with an i-power phase.
pub fn word_mul(a: &[Axis], b: &[Axis]) -> (Complex64, Vec<Axis>) {
    debug_assert_eq!(a.len(), b.len());
    let mut k = 0u8;
    let mut out = Vec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(b) {
        let (p, r) = x.mul(y);
        k = (k + p) % 4;
        out.push(r);
    }
    (i_pow(k), out)
}

/// Full (not bitwise) commutation: words commute iff they anticommute on an
/// even number of qubits.
pub fn words_commute(a: &[Axis], b: &[Axis]) -> bool {
    a.iter().zip(b).filter(|(x, y)| !x.commutes(**y)).count() % 2 == 0
}

pub fn word_to_string(w: &[Axis]) -> String {
    w.iter().map(|a| a.to_char()).collect()
}

pub fn word_from_str(s: &str) -> Result<Vec<Axis>, Error> {
    s.chars().map(Axis::from_char).collect()
}

/// Number of non-identity positions.
pub fn word_weight(w: &[Axis]) -> usize {
    w.iter().filter(|a| **a != Axis::I).count()
}

/// An n-qubit Pauli word with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coeff: Complex64,
    pub axes: Vec<Axis>,
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?} {}", self.coeff.re, self.coeff.im, word_to_string(&self.axes))
    }
}

/// Named span of qubits (a matter block or one gauge register).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// Sum of Pauli strings over a fixed qubit count, with coefficients merged
/// per word. Terms are kept in a sorted map so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    nqubits: usize,
    terms: BTreeMap<Vec<Axis>, Complex64>,
    pub register_map: Vec<Register>,
}

impl PauliSum {
    pub fn zero(nqubits: usize) -> Self {
        PauliSum { nqubits, terms: BTreeMap::new(), register_map: Vec::new() }
    }

    pub fn identity(nqubits: usize, coeff: Complex64) -> Self {
        let mut s = Self::zero(nqubits);
        s.add_term(vec![Axis::I; nqubits], coeff);
        s
    }

    /// Single Pauli operator `axis` on qubit `q`.
    pub fn single(nqubits: usize, q: usize, axis: Axis, coeff: Complex64) -> Self {
        assert!(q < nqubits);
        let mut w = vec![Axis::I; nqubits];
        w[q] = axis;
        let mut s = Self::zero(nqubits);
        s.add_term(w, coeff);
        s
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn add_term(&mut self, word: Vec<Axis>, coeff: Complex64) {
        debug_assert_eq!(word.len(), self.nqubits);
        let e = self.terms.entry(word).or_insert(Complex64::new(0.0, 0.0));
        *e += coeff;
    }

    /// Drop terms with |coeff| <= tol.
    pub fn prune(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn pruned(self) -> Self {
        self.prune(MERGE_TOL)
    }

    /// Iterate (word, coeff) in deterministic (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (&[Axis], Complex64)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), *c))
    }

    pub fn terms(&self) -> Vec<PauliString> {
        self.iter().map(|(w, c)| PauliString { coeff: c, axes: w.to_vec() }).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the identity word (the additive constant).
    pub fn identity_coeff(&self) -> Complex64 {
        self.terms
            .get(&vec![Axis::I; self.nqubits])
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn dag(&self) -> Self {
        let mut out = Self::zero(self.nqubits);
        out.register_map = self.register_map.clone();
        for (w, c) in self.iter() {
            out.add_term(w.to_vec(), c.conj());
        }
        out
    }

    /// Hermitian iff every merged coefficient is real (Pauli words are Hermitian).
    pub fn hermiticity_error(&self) -> f64 {
        self.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn scale(mut self, s: Complex64) -> Self {
        for c in self.terms.values_mut() {
            *c *= s;
        }
        self
    }

    pub fn scale_re(self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Re-embed this operator into a larger space with qubit offset.
    pub fn embed(&self, nqubits: usize, offset: usize) -> Self {
        assert!(offset + self.nqubits <= nqubits);
        let mut out = Self::zero(nqubits);
        for (w, c) in self.iter() {
            let mut word = vec![Axis::I; nqubits];
            word[offset..offset + self.nqubits].copy_from_slice(w);
            out.add_term(word, c);
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.nqubits, other.nqubits);
        let mut out = Self::zero(self.nqubits);
        out.register_map = self.register_map.clone();
        for (w1, c1) in self.iter() {
            for (w2, c2) in other.iter() {
                let (ph, w) = word_mul(w1, w2);
                out.add_term(w, c1 * c2 * ph);
            }
        }
        out
    }

    /// Commutator [self, other]; exact in the Pauli algebra for any qubit count.
    pub fn commutator(&self, other: &Self) -> Self {
        let mut ab = self.matmul(other);
        for (w, c) in other.matmul(self).iter() {
            ab.add_term(w.to_vec(), -c);
        }
        ab.pruned()
    }

    /// Dense matrix (practical for small qubit counts only).
    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.nqubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, c) in self.iter() {
            for col in 0..dim {
                let (row, phase) = word_action(w, col, self.nqubits);
                m[(row, col)] += c * phase;
            }
        }
        m
    }

    /// Apply to a computational basis state; returns (image index, phase).
    /// Basis convention: qubit 0 is the leftmost / most significant bit.
    pub fn basis_action(&self, basis: usize) -> Vec<(usize, Complex64)> {
        self.iter()
            .map(|(w, c)| {
                let (row, ph) = word_action(w, basis, self.nqubits);
                (row, c * ph)
            })
            .collect()
    }

    /// Apply the operator to a dense state vector.
    pub fn apply(&self, state: &[Complex64]) -> Vec<Complex64> {
        let dim = 1usize << self.nqubits;
        assert_eq!(state.len(), dim);
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (w, c) in self.iter() {
            for col in 0..dim {
                if state[col].norm_sqr() == 0.0 {
                    continue;
                }
                let (row, ph) = word_action(w, col, self.nqubits);
                out[row] += c * ph * state[col];
            }
        }
        out
    }

    /// Expectation value on a normalized dense state.
    pub fn expectation(&self, state: &[Complex64]) -> Complex64 {
        let hs = self.apply(state);
        state.iter().zip(&hs).map(|(a, b)| a.conj() * b).sum()
    }
}

impl std::ops::Add for PauliSum {
    type Output = PauliSum;
    fn add(mut self, rhs: PauliSum) -> PauliSum {
        assert_eq!(self.nqubits, rhs.nqubits);
        for (w, c) in rhs.iter() {
            self.add_term(w.to_vec(), c);
        }
        self
    }
}

impl std::ops::Sub for PauliSum {
    type Output = PauliSum;
    fn sub(mut self, rhs: PauliSum) -> PauliSum {
        assert_eq!(self.nqubits, rhs.nqubits);
        for (w, c) in rhs.iter() {
            self.add_term(w.to_vec(), -c);
        }
        self
    }
}

impl std::ops::Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.matmul(rhs)
    }
}

/// Action of a Pauli word on basis state `col`: the image basis index and phase.
///
/// Qubit q maps to bit (n-1-q), so the serialized word reads left to right in
/// qubit order. `Z|1> = -|1>`, `Y|0> = i|1>`, `Y|1> = -i|0>`.
pub fn word_action(w: &[Axis], col: usize, nqubits: usize) -> (usize, Complex64) {
    let mut row = col;
    let mut phase = Complex64::new(1.0, 0.0);
    for (q, &a) in w.iter().enumerate() {
        let mask = 1usize << (nqubits - 1 - q);
        let bit = col & mask != 0;
        match a {
            Axis::I => {}
            Axis::X => row ^= mask,
            Axis::Y => {
                row ^= mask;
                phase *= if bit { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
            }
            Axis::Z => {
                if bit {
                    phase = -phase;
                }
            }
        }
    }
    (row, phase)
}

/// sigma^+ = |0><1| = (X + iY)/2 on qubit q.
pub fn sigma_plus(nqubits: usize, q: usize) -> PauliSum {
    let mut s = PauliSum::single(nqubits, q, Axis::X, Complex64::new(0.5, 0.0));
    s = s + PauliSum::single(nqubits, q, Axis::Y, Complex64::new(0.0, 0.5));
    s
}

/// sigma^- = |1><0| = (X - iY)/2 on qubit q.
pub fn sigma_minus(nqubits: usize, q: usize) -> PauliSum {
    let mut s = PauliSum::single(nqubits, q, Axis::X, Complex64::new(0.5, 0.0));
    s = s + PauliSum::single(nqubits, q, Axis::Y, Complex64::new(0.0, -0.5));
    s
}

// --- text serialization -----------------------------------------------------

/// Serialize: `key=value` header lines followed by one `<re> <im> <word>` line
/// per term. Floats use the shortest round-trip representation, so parsing the
/// output reproduces the sum bit-exactly.
pub fn to_text(sum: &PauliSum, header: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("{k}={v}\n"));
    }
    out.push_str(&format!("nqubits={}\n", sum.nqubits()));
    for (w, c) in sum.iter() {
        out.push_str(&format!("{:?} {:?} {}\n", c.re, c.im, word_to_string(w)));
    }
    out
}

/// Parse the text format produced by [`to_text`]. Returns the sum and header pairs.
pub fn from_text(text: &str) -> Result<(PauliSum, Vec<(String, String)>), Error> {
    let mut header = Vec::new();
    let mut nqubits: Option<usize> = None;
    let mut terms: Vec<(Vec<Axis>, Complex64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            if k == "nqubits" {
                nqubits = Some(
                    v.parse()
                        .map_err(|_| Error::Parse(format!("line {}: bad nqubits", lineno + 1)))?,
                );
            } else {
                header.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let (re, im, word) = (
            parts.next().ok_or_else(|| Error::Parse(format!("line {}: missing re", lineno + 1)))?,
            parts.next().ok_or_else(|| Error::Parse(format!("line {}: missing im", lineno + 1)))?,
            parts.next().ok_or_else(|| Error::Parse(format!("line {}: missing word", lineno + 1)))?,
        );
        let re: f64 =
            re.parse().map_err(|_| Error::Parse(format!("line {}: bad float", lineno + 1)))?;
        let im: f64 =
            im.parse().map_err(|_| Error::Parse(format!("line {}: bad float", lineno + 1)))?;
        terms.push((word_from_str(word)?, Complex64::new(re, im)));
    }
    let n = match nqubits {
        Some(n) => n,
        None => terms.first().map(|(w, _)| w.len()).unwrap_or(0),
    };
    let mut sum = PauliSum::zero(n);
    for (w, c) in terms {
        if w.len() != n {
            return Err(Error::Parse(format!("word length {} != nqubits {}", w.len(), n)));
        }
        sum.add_term(w, c);
    }
    Ok((sum, header))
}

// dense matrix of a single word, used by tests
pub fn word_dense(w: &[Axis]) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::identity(1, 1);
    for a in w {
        let g = a.matrix();
        let g = DMatrix::from_row_slice(2, 2, &[g[0][0], g[0][1], g[1][0], g[1][1]]);
        m = m.kronecker(&g);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn axis_products_match_dense() {
        for a in [Axis::I, Axis::X, Axis::Y, Axis::Z] {
            for b in [Axis::I, Axis::X, Axis::Y, Axis::Z] {
                let (k, c) = a.mul(b);
                let lhs = word_dense(&[a]) * word_dense(&[b]);
                let rhs = word_dense(&[c]) * i_pow(k);
                assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn word_action_matches_dense() {
        let w = word_from_str("XYZI").unwrap();
        let d = word_dense(&w);
        for col in 0..16 {
            let (row, ph) = word_action(&w, col, 4);
            for r in 0..16 {
                let want = if r == row { ph } else { Complex64::new(0.0, 0.0) };
                assert_abs_diff_eq!((d[(r, col)] - want).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn sigma_pm_ladder() {
        // sigma^- |0> = |1>, sigma^+ |1> = |0>
        let sm = sigma_minus(1, 0);
        let sp = sigma_plus(1, 0);
        let v0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let v1 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let r = sm.apply(&v0);
        assert_abs_diff_eq!((r[1] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        let r = sp.apply(&v1);
        assert_abs_diff_eq!((r[0] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn text_roundtrip_bit_exact() {
        let mut s = PauliSum::zero(3);
        s.add_term(word_from_str("ZIZ").unwrap(), Complex64::new(0.1 + 0.2, 0.0));
        s.add_term(word_from_str("XYI").unwrap(), Complex64::new(-1.0 / 3.0, 1e-17));
        let txt = to_text(&s, &[("model".into(), "test".into())]);
        let (back, hdr) = from_text(&txt).unwrap();
        assert_eq!(back, s);
        assert_eq!(hdr[0].0, "model");
        // serialize again: byte-identical
        assert_eq!(to_text(&back, &hdr), txt);
    }

    #[test]
    fn commutation_rule() {
        let a = word_from_str("XXI").unwrap();
        let b = word_from_str("YYI").unwrap();
        let c = word_from_str("XII").unwrap();
        assert!(words_commute(&a, &b));
        assert!(!words_commute(&a, &vec![Axis::Z, Axis::I, Axis::I]));
        assert!(words_commute(&c, &vec![Axis::I, Axis::Z, Axis::Z]));
    }
}
