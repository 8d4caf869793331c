//! Gauge-field truncation, unary qubit encoding and physical-sector masks.
//!
//! A truncated gauge field with values e in [-l, l] is stored in 2l+1 qubits
//! with a single excitation: |-l + j> has the 1 at position j (counting from
//! the left). Matter sites are Jordan-Wigner qubits; the zero-charge sector is
//! fixed by the staggered charge q_i = (sigma_i^z + (-1)^(i+1)) / 2.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::pauli::{sigma_minus, sigma_plus, Axis, PauliSum, Register};

/// Bitstring (leftmost = first qubit of the register) for gauge value `e`.
pub fn encode_gauge_basis(e: i64, l: u32) -> Result<Vec<bool>, Error> {
    let l = l as i64;
    if e.abs() > l {
        return Err(Error::InvalidParams(format!("gauge value {e} outside truncation |e| <= {l}")));
    }
    let len = (2 * l + 1) as usize;
    let mut bits = vec![false; len];
    bits[(e + l) as usize] = true;
    Ok(bits)
}

/// Encoded operators for one gauge register laid out on qubits
/// `offset..offset + 2l+1` of an `nqubits` system.
///
/// `sz` acts as S^z (eigenvalue e on the encoded |e>), `lower` acts as the
/// truncated lowering operator U with U|e> = (1 - delta_{e,-l}) |e-1>.
pub struct GaugeOps {
    pub sz: PauliSum,
    pub lower: PauliSum,
}

/// S^z = (1/2) sum_{i=1}^{2l} prod_{j<=i} sigma_j^z over the register qubits.
pub fn gauge_sz(nqubits: usize, offset: usize, l: u32) -> PauliSum {
    let twol = 2 * l as usize;
    let mut acc = PauliSum::zero(nqubits);
    for i in 1..=twol {
        let mut w = vec![Axis::I; nqubits];
        for j in 0..i {
            w[offset + j] = Axis::Z;
        }
        acc.add_term(w, Complex64::new(0.5, 0.0));
    }
    acc
}

/// U = sum_i sigma_i^- sigma_{i+1}^+ over the register qubits.
pub fn gauge_lower(nqubits: usize, offset: usize, l: u32) -> PauliSum {
    let twol = 2 * l as usize;
    let mut acc = PauliSum::zero(nqubits);
    for i in 0..twol {
        let t = sigma_minus(nqubits, offset + i).matmul(&sigma_plus(nqubits, offset + i + 1));
        acc = acc + t;
    }
    acc
}

pub fn gauge_operators(nqubits: usize, offset: usize, l: u32) -> Result<GaugeOps, Error> {
    if l < 1 {
        return Err(Error::InvalidParams("truncation l must be >= 1".into()));
    }
    Ok(GaugeOps {
        sz: gauge_sz(nqubits, offset, l),
        lower: gauge_lower(nqubits, offset, l),
    })
}

/// Staggered charge q_i = (sigma_i^z + (-1)^(i+1))/2 for 1-based site `site`
/// living on qubit `qubit`.
pub fn charge(nqubits: usize, site: usize, qubit: usize) -> PauliSum {
    let sign = if site % 2 == 1 { 0.5 } else { -0.5 };
    let z = PauliSum::single(nqubits, qubit, Axis::Z, Complex64::new(0.5, 0.0));
    z + PauliSum::identity(nqubits, Complex64::new(sign, 0.0))
}

/// Computational-basis indices spanning the physical sector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectorMask {
    pub nqubits: usize,
    /// Sorted basis indices (qubit 0 = most significant bit).
    pub allowed: Vec<usize>,
}

impl SectorMask {
    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn position(&self, basis: usize) -> Option<usize> {
        self.allowed.binary_search(&basis).ok()
    }

    pub fn contains(&self, basis: usize) -> bool {
        self.position(basis).is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sector mask serializes")
    }
}

/// Layout of a model's qubits: an optional matter block followed by gauge registers.
#[derive(Debug, Clone)]
pub struct RegisterLayout {
    pub nqubits: usize,
    /// Matter block (contiguous from qubit 0), empty for pure gauge models.
    pub matter: usize,
    pub gauge: Vec<Register>,
}

impl RegisterLayout {
    pub fn registers(&self) -> Vec<Register> {
        let mut regs = Vec::new();
        if self.matter > 0 {
            regs.push(Register { name: "matter".into(), start: 0, len: self.matter });
        }
        regs.extend(self.gauge.iter().cloned());
        regs
    }

    /// Enumerate the physical sector: one excitation per gauge register and
    /// zero total staggered charge on the matter block.
    pub fn physical_sector(&self) -> SectorMask {
        let mut matter_states: Vec<usize> = Vec::new();
        if self.matter == 0 {
            matter_states.push(0);
        } else {
            for s in 0..(1usize << self.matter) {
                // charge of site i (1-based): q = (z + (-1)^(i+1))/2 with z = +-1
                let mut q = 0i64;
                for i in 0..self.matter {
                    let bit = (s >> (self.matter - 1 - i)) & 1;
                    let z = if bit == 1 { -1i64 } else { 1i64 };
                    let stag = if (i + 1) % 2 == 1 { 1 } else { -1 };
                    q += (z + stag) / 2;
                }
                if q == 0 {
                    matter_states.push(s);
                }
            }
        }
        let mut allowed = Vec::new();
        let gauge_bits: usize = self.gauge.iter().map(|r| r.len).sum();
        let mut gauge_states: Vec<usize> = vec![0];
        for reg in &self.gauge {
            let mut next = Vec::new();
            for base in &gauge_states {
                for j in 0..reg.len {
                    // position within the concatenated gauge block
                    let pos = reg.start - self.matter + j;
                    next.push(base | (1usize << (gauge_bits - 1 - pos)));
                }
            }
            gauge_states = next;
        }
        for m in &matter_states {
            for g in &gauge_states {
                allowed.push((m << gauge_bits) | g);
            }
        }
        allowed.sort_unstable();
        SectorMask { nqubits: self.nqubits, allowed }
    }
}

/// The matter vacuum bitstring (zero charge everywhere): odd sites |1>, even sites |0>.
pub fn matter_vacuum_bits(nsites: usize) -> Vec<bool> {
    (0..nsites).map(|i| (i + 1) % 2 == 1).collect()
}

/// Basis index of a full bitstring (qubit 0 leftmost).
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unary_encoding_l1() {
        // paper examples: |1> = 001, |0> = 010, |-1> = 100
        assert_eq!(encode_gauge_basis(1, 1).unwrap(), vec![false, false, true]);
        assert_eq!(encode_gauge_basis(0, 1).unwrap(), vec![false, true, false]);
        assert_eq!(encode_gauge_basis(-1, 1).unwrap(), vec![true, false, false]);
        // leftmost excitation at e = -l
        assert_eq!(encode_gauge_basis(-2, 2).unwrap(), vec![true, false, false, false, false]);
        assert!(encode_gauge_basis(2, 1).is_err());
    }

    #[test]
    fn gauge_ops_on_encoded_states() {
        let l = 1u32;
        let n = 3;
        let ops = gauge_operators(n, 0, l).unwrap();
        for e in -1..=1i64 {
            let bits = encode_gauge_basis(e, l).unwrap();
            let idx = bits_to_index(&bits);
            let mut v = vec![Complex64::new(0.0, 0.0); 8];
            v[idx] = Complex64::new(1.0, 0.0);
            // Sz eigenvalue e
            let sv = ops.sz.apply(&v);
            assert_abs_diff_eq!((sv[idx] - Complex64::new(e as f64, 0.0)).norm(), 0.0, epsilon = 1e-13);
            // U lowers, annihilates at e = -l
            let uv = ops.lower.apply(&v);
            if e == -1 {
                let norm: f64 = uv.iter().map(|c| c.norm_sqr()).sum();
                assert_abs_diff_eq!(norm, 0.0, epsilon = 1e-26);
            } else {
                let down = bits_to_index(&encode_gauge_basis(e - 1, l).unwrap());
                assert_abs_diff_eq!((uv[down] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn commutation_sz_lower() {
        // [Sz, U] = -U on the encoded space, exactly in the Pauli algebra after
        // projecting onto the single-excitation subspace; dense check for l <= 3
        for l in 1..=3u32 {
            let n = (2 * l + 1) as usize;
            let ops = gauge_operators(n, 0, l).unwrap();
            let comm = ops.sz.commutator(&ops.lower);
            let want = ops.lower.clone().scale_re(-1.0);
            // compare action on encoded basis states
            for e in -(l as i64)..=(l as i64) {
                let idx = bits_to_index(&encode_gauge_basis(e, l).unwrap());
                let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
                v[idx] = Complex64::new(1.0, 0.0);
                let a = comm.apply(&v);
                let b = want.apply(&v);
                let err: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).sum();
                assert_abs_diff_eq!(err, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn udag_u_projector_identity() {
        // U^dag U = 1 - |-l><-l| on the encoded subspace (dense check, l <= 3)
        for l in 1..=3u32 {
            let n = (2 * l + 1) as usize;
            let ops = gauge_operators(n, 0, l).unwrap();
            let udu = ops.lower.dag().matmul(&ops.lower);
            for e in -(l as i64)..=(l as i64) {
                let idx = bits_to_index(&encode_gauge_basis(e, l).unwrap());
                let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
                v[idx] = Complex64::new(1.0, 0.0);
                let a = udu.apply(&v);
                let want = if e == -(l as i64) { 0.0 } else { 1.0 };
                assert_abs_diff_eq!((a[idx] - Complex64::new(want, 0.0)).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sector_sizes() {
        // OBC plaquette l=1: 6 matter x 3 gauge = 18
        let layout = RegisterLayout {
            nqubits: 7,
            matter: 4,
            gauge: vec![Register { name: "gauge1".into(), start: 4, len: 3 }],
        };
        assert_eq!(layout.physical_sector().len(), 18);
        // PBC l=1: 27 ; l=2: 125
        let pbc = |l: usize| RegisterLayout {
            nqubits: 3 * (2 * l + 1),
            matter: 0,
            gauge: (0..3)
                .map(|i| Register {
                    name: format!("rotator{}", i + 1),
                    start: i * (2 * l + 1),
                    len: 2 * l + 1,
                })
                .collect(),
        };
        assert_eq!(pbc(1).physical_sector().len(), 27);
        assert_eq!(pbc(2).physical_sector().len(), 125);
    }

    #[test]
    fn bit_flip_leaves_sector() {
        for l in 1..=2usize {
            let layout = RegisterLayout {
                nqubits: 4 + 2 * l + 1,
                matter: 4,
                gauge: vec![Register { name: "gauge1".into(), start: 4, len: 2 * l + 1 }],
            };
            let mask = layout.physical_sector();
            for &s in &mask.allowed {
                for q in 0..layout.nqubits {
                    let flipped = s ^ (1 << (layout.nqubits - 1 - q));
                    assert!(!mask.contains(flipped), "bit flip stayed in sector");
                }
            }
        }
    }

    #[test]
    fn vacuum_has_zero_charge() {
        let bits = matter_vacuum_bits(4);
        assert_eq!(bits, vec![true, false, true, false]);
        let mut q = 0i64;
        for (i, &b) in bits.iter().enumerate() {
            let z = if b { -1 } else { 1 };
            let stag = if (i + 1) % 2 == 1 { 1 } else { -1 };
            q += (z + stag) / 2;
        }
        assert_eq!(q, 0);
    }
}
