//! Model Hamiltonians as encoded Pauli sums.
//!
//! Builders substitute the unary gauge encoding and the staggered-charge
//! operators directly into the effective Hamiltonians (single OBC plaquette,
//! OBC ladder of N plaquettes, PBC plaquette in electric and magnetic
//! representations). Each model also carries its plaquette observable.

use num_complex::Complex64;

use crate::encoding::{charge, gauge_lower, gauge_sz, RegisterLayout};
use crate::error::Error;
use crate::pauli::{sigma_minus, sigma_plus, PauliSum, Register};
use crate::special::{digamma, trigamma};

/// Couplings and truncations shared by all builders.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    /// Value of 1/g^2 (must be positive).
    pub g2inv: f64,
    /// Fermion mass m (may be negative).
    pub mass: f64,
    /// Kinetic strength Omega (>= 0).
    pub omega: f64,
    /// Gauge truncation l >= 1.
    pub trunc_l: u32,
    /// Cyclic-group parameter L for the magnetic representation; defaults to 10.
    pub group_l: Option<u32>,
}

impl ModelParams {
    pub fn new(g2inv: f64, mass: f64, omega: f64, trunc_l: u32) -> Self {
        ModelParams { g2inv, mass, omega, trunc_l, group_l: None }
    }

    pub fn g2(&self) -> f64 {
        1.0 / self.g2inv
    }

    /// L defaults to 10 (never below the truncation).
    pub fn effective_group_l(&self) -> u32 {
        self.group_l.unwrap_or(10).max(self.trunc_l)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.g2inv > 0.0) {
            return Err(Error::InvalidParams(format!("g2inv must be > 0, got {}", self.g2inv)));
        }
        if self.trunc_l < 1 {
            return Err(Error::InvalidParams("trunc_l must be >= 1".into()));
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidParams("omega must be >= 0".into()));
        }
        if let Some(gl) = self.group_l {
            if gl < self.trunc_l {
                return Err(Error::InvalidParams(format!(
                    "group_L = {gl} must be >= trunc_l = {}",
                    self.trunc_l
                )));
            }
        }
        Ok(())
    }
}

/// Which Hamiltonian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelKind {
    ObcPlaquette,
    ObcLadder(u32),
    PbcElectric,
    PbcMagnetic,
}

impl ModelKind {
    pub fn name(&self) -> String {
        match self {
            ModelKind::ObcPlaquette => "obc-plaquette".into(),
            ModelKind::ObcLadder(n) => format!("obc-ladder-{n}"),
            ModelKind::PbcElectric => "pbc-electric".into(),
            ModelKind::PbcMagnetic => "pbc-magnetic".into(),
        }
    }
}

/// A built model: Hamiltonian, plaquette observable and qubit layout.
#[derive(Debug, Clone)]
pub struct Model {
    pub kind: ModelKind,
    pub params: ModelParams,
    pub hamiltonian: PauliSum,
    /// Plaquette operator (box); mean over plaquettes where applicable.
    pub plaquette: PauliSum,
    pub layout: RegisterLayout,
}

impl Model {
    pub fn nqubits(&self) -> usize {
        self.layout.nqubits
    }

    pub fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![
            ("model".to_string(), self.kind.name()),
            ("g2inv".to_string(), format!("{:?}", self.params.g2inv)),
            ("mass".to_string(), format!("{:?}", self.params.mass)),
            ("omega".to_string(), format!("{:?}", self.params.omega)),
            ("l".to_string(), self.params.trunc_l.to_string()),
        ];
        if matches!(self.kind, ModelKind::PbcMagnetic) {
            h.push(("L".to_string(), self.params.effective_group_l().to_string()));
        }
        h
    }
}

pub fn build(kind: ModelKind, params: &ModelParams) -> Result<Model, Error> {
    params.validate()?;
    match kind {
        ModelKind::ObcPlaquette => build_obc_plaquette(params),
        ModelKind::ObcLadder(n) => build_obc_ladder(params, n),
        ModelKind::PbcElectric => build_pbc(params, PbcRep::Electric),
        ModelKind::PbcMagnetic => build_pbc(params, PbcRep::Magnetic),
    }
}

/// Single plaquette with open boundaries: 4 matter qubits + one gauge register.
pub fn build_obc_plaquette(params: &ModelParams) -> Result<Model, Error> {
    params.validate()?;
    let l = params.trunc_l;
    let d = (2 * l + 1) as usize;
    let n = 4 + d;
    let g2 = params.g2();

    let e = gauge_sz(n, 4, l);
    let u = gauge_lower(n, 4, l);
    let q1 = charge(n, 1, 0);
    let q2 = charge(n, 2, 1);
    let q3 = charge(n, 3, 2);

    // H_E = g^2/2 [E^2 + (E+q2)^2 + (E-q3)^2 + (E+q1+q2)^2]
    let sq = |a: &PauliSum| a.matmul(a);
    let t1 = sq(&e);
    let t2 = sq(&(e.clone() + q2.clone()));
    let t3 = sq(&(e.clone() - q3.clone()));
    let t4 = sq(&(e.clone() + q1.clone() + q2.clone()));
    let h_e = (t1 + t2 + t3 + t4).scale_re(0.5 * g2);

    // H_B = -(U + U^dag) / (2 g^2)
    let h_b = (u.clone() + u.dag()).scale_re(-0.5 / g2);

    // H_m = m/2 (Z1 - Z2 + Z3 - Z4)
    let mut h_m = PauliSum::zero(n);
    for (i, sign) in [(0usize, 1.0), (1, -1.0), (2, 1.0), (3, -1.0)] {
        h_m = h_m
            + PauliSum::single(n, i, crate::pauli::Axis::Z, Complex64::new(0.5 * params.mass * sign, 0.0));
    }

    // H_kin = -i Omega [s1+ s2- + s1+ s4- + s4- s3+ - s2- U^dag s3+] + H.c.
    let sp = |q: usize| sigma_plus(n, q);
    let sm = |q: usize| sigma_minus(n, q);
    let t = sp(0).matmul(&sm(1)) + sp(0).matmul(&sm(3)) + sm(3).matmul(&sp(2))
        - sm(1).matmul(&u.dag()).matmul(&sp(2));
    let minus_i_om = Complex64::new(0.0, -params.omega);
    let h_kin = t.clone().scale(minus_i_om) + t.dag().scale(minus_i_om.conj());

    let mut h = (h_e + h_b + h_m + h_kin).pruned();
    let layout = RegisterLayout {
        nqubits: n,
        matter: 4,
        gauge: vec![Register { name: "gauge1".into(), start: 4, len: d }],
    };
    h.register_map = layout.registers();

    let plaquette = (u.clone() + u.dag()).scale_re(0.5);
    Ok(Model { kind: ModelKind::ObcPlaquette, params: *params, hamiltonian: h, plaquette, layout })
}

/// Ladder of N plaquettes with open boundaries: 2N+2 matter qubits and one
/// gauge register per plaquette.
pub fn build_obc_ladder(params: &ModelParams, nplaq: u32) -> Result<Model, Error> {
    params.validate()?;
    if nplaq < 1 {
        return Err(Error::InvalidParams("ladder needs N >= 1 plaquettes".into()));
    }
    let l = params.trunc_l;
    let d = (2 * l + 1) as usize;
    let nmat = 2 * nplaq as usize + 2;
    let n = nmat + nplaq as usize * d;
    let g2 = params.g2();

    let reg_off = |k: usize| nmat + (k - 1) * d; // plaquette k is 1-based
    let s: Vec<PauliSum> = (1..=nplaq as usize).map(|k| gauge_sz(n, reg_off(k), l)).collect();
    let v: Vec<PauliSum> = (1..=nplaq as usize).map(|k| gauge_lower(n, reg_off(k), l)).collect();
    let q: Vec<PauliSum> = (1..=nmat).map(|i| charge(n, i, i - 1)).collect();
    let qsum = |hi: usize| -> PauliSum {
        let mut acc = PauliSum::zero(n);
        for qi in q.iter().take(hi) {
            acc = acc + qi.clone();
        }
        acc
    };

    let sq = |a: &PauliSum| a.matmul(a);
    let mut h_e = PauliSum::zero(n);
    for k in 1..=nplaq as usize {
        let sk = &s[k - 1];
        h_e = h_e + sq(sk) + sq(&(sk.clone() + qsum(2 * k)));
    }
    for k in 1..nplaq as usize {
        let t = s[k - 1].clone() + s[k].clone() + qsum(2 * k) + q[2 * k + 1].clone();
        h_e = h_e + sq(&t);
    }
    h_e = h_e + sq(&(s[0].clone() + q[1].clone()));
    h_e = h_e + sq(&(s[nplaq as usize - 1].clone() - q[2 * nplaq as usize].clone()));
    let h_e = h_e.scale_re(0.5 * g2);

    let mut h_b = PauliSum::zero(n);
    for vk in &v {
        h_b = h_b + vk.clone() + vk.dag();
    }
    let h_b = h_b.scale_re(-0.5 / g2);

    let mut h_m = PauliSum::zero(n);
    for i in 1..=nmat {
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        h_m = h_m
            + PauliSum::single(n, i - 1, crate::pauli::Axis::Z, Complex64::new(0.5 * params.mass * sign, 0.0));
    }

    // H_kin per the ladder form: the (2n-1, 2n+2) hop keeps its Jordan-Wigner string.
    let sp = |i: usize| sigma_plus(n, i - 1); // 1-based site index
    let sm = |i: usize| sigma_minus(n, i - 1);
    let zz = |a: usize, b: usize| {
        PauliSum::single(n, a - 1, crate::pauli::Axis::Z, Complex64::new(1.0, 0.0))
            .matmul(&PauliSum::single(n, b - 1, crate::pauli::Axis::Z, Complex64::new(1.0, 0.0)))
    };
    let mut t = sp(1).matmul(&sm(2));
    for k in 1..=nplaq as usize {
        t = t + sm(2 * k).matmul(&v[k - 1].dag()).matmul(&sp(2 * k + 1));
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        t = t + sp(2 * k + 1).matmul(&sm(2 * k + 2)).scale_re(sign);
        t = t - sp(2 * k - 1).matmul(&zz(2 * k, 2 * k + 1)).matmul(&sm(2 * k + 2));
    }
    let minus_i_om = Complex64::new(0.0, -params.omega);
    let h_kin = t.clone().scale(minus_i_om) + t.dag().scale(minus_i_om.conj());

    let mut h = (h_e + h_b + h_m + h_kin).pruned();
    let layout = RegisterLayout {
        nqubits: n,
        matter: nmat,
        gauge: (1..=nplaq as usize)
            .map(|k| Register { name: format!("gauge{k}"), start: reg_off(k), len: d })
            .collect(),
    };
    h.register_map = layout.registers();

    let mut plaq = PauliSum::zero(n);
    for vk in &v {
        plaq = plaq + vk.clone() + vk.dag();
    }
    let plaquette = plaq.scale_re(0.5 / nplaq as f64);
    Ok(Model { kind: ModelKind::ObcLadder(nplaq), params: *params, hamiltonian: h, plaquette, layout })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbcRep {
    Electric,
    Magnetic,
}

/// Fourier coefficients (f_s, f_c) of the cyclic-group construction, closed
/// polygamma forms. Valid for 1 <= nu <= 2L.
pub fn fourier_coeffs(nu: u32, group_l: u32) -> Result<(f64, f64), Error> {
    if nu < 1 || nu > 2 * group_l {
        return Err(Error::InvalidParams(format!("nu = {nu} outside 1..=2L (L = {group_l})")));
    }
    let d = (2 * group_l + 1) as f64;
    let a = nu as f64 / (2.0 * d);
    let b = (d + nu as f64) / (2.0 * d);
    let sgn_s = if nu % 2 == 1 { 1.0 } else { -1.0 };
    let fs = sgn_s / (2.0 * std::f64::consts::PI) * (digamma(b) - digamma(a));
    let fc = -sgn_s / (4.0 * std::f64::consts::PI.powi(2)) * (trigamma(a) - trigamma(b));
    Ok((fs, fc))
}

/// Convert a diagonal operator (values per computational basis state) into
/// Z/I Pauli words via the Walsh-Hadamard transform.
pub fn diagonal_to_pauli(values: &[f64], nqubits: usize) -> PauliSum {
    let dim = 1usize << nqubits;
    assert_eq!(values.len(), dim);
    let mut v = values.to_vec();
    for q in 0..nqubits {
        let mask = 1usize << (nqubits - 1 - q);
        for s in 0..dim {
            if s & mask == 0 {
                let a = v[s];
                let b = v[s | mask];
                v[s] = a + b;
                v[s | mask] = a - b;
            }
        }
    }
    let scale = 1.0 / dim as f64;
    let mut out = PauliSum::zero(nqubits);
    for (s, &coeff) in v.iter().enumerate() {
        let c = coeff * scale;
        if c.abs() <= crate::pauli::MERGE_TOL {
            continue;
        }
        let word: Vec<crate::pauli::Axis> = (0..nqubits)
            .map(|q| {
                if s & (1usize << (nqubits - 1 - q)) != 0 {
                    crate::pauli::Axis::Z
                } else {
                    crate::pauli::Axis::I
                }
            })
            .collect();
        out.add_term(word, Complex64::new(c, 0.0));
    }
    out
}

/// Plaquette with periodic boundaries: three rotator registers, no matter.
pub fn build_pbc(params: &ModelParams, rep: PbcRep) -> Result<Model, Error> {
    params.validate()?;
    if rep == PbcRep::Magnetic && params.group_l.is_none() {
        // allowed: the documented default L = 10 applies, but magnetic explicitly
        // benefits from a recorded choice; keep going with the default.
    }
    let l = params.trunc_l;
    let d = (2 * l + 1) as usize;
    let n = 3 * d;
    let g2 = params.g2();

    let layout = RegisterLayout {
        nqubits: n,
        matter: 0,
        gauge: (0..3)
            .map(|i| Register { name: format!("rotator{}", i + 1), start: i * d, len: d })
            .collect(),
    };

    let r: Vec<PauliSum> = (0..3).map(|i| gauge_sz(n, i * d, l)).collect();
    let p: Vec<PauliSum> = (0..3).map(|i| gauge_lower(n, i * d, l)).collect();

    let model = match rep {
        PbcRep::Electric => {
            // H_E = 2 g^2 [R1^2 + R2^2 + R3^2 - R2 (R1 + R3)]
            let h_e = (r[0].matmul(&r[0]) + r[1].matmul(&r[1]) + r[2].matmul(&r[2])
                - r[1].matmul(&(r[0].clone() + r[2].clone())))
            .scale_re(2.0 * g2);
            // H_B = -(P1 + P2 + P3 + P1 P2 P3 + H.c.) / (2 g^2)
            let t = p[0].clone() + p[1].clone() + p[2].clone() + p[0].matmul(&p[1]).matmul(&p[2]);
            let tt = t.clone() + t.dag();
            let h_b = tt.clone().scale_re(-0.5 / g2);
            let mut h = (h_e + h_b).pruned();
            h.register_map = layout.registers();
            let plaquette = tt.scale_re(1.0 / 8.0);
            Model { kind: ModelKind::PbcElectric, params: *params, hamiltonian: h, plaquette, layout }
        }
        PbcRep::Magnetic => {
            let big_l = params.effective_group_l();
            // operator powers taken in the truncated rotator space: (P)^nu = 0 for nu > 2l
            let mut ppow: Vec<Vec<PauliSum>> = Vec::new();
            for pi in &p {
                let mut pows = vec![PauliSum::identity(n, Complex64::new(1.0, 0.0))];
                for nu in 1..=(2 * l) as usize {
                    pows.push(pows[nu - 1].matmul(pi).pruned());
                }
                ppow.push(pows);
            }
            let mut h_e = PauliSum::zero(n);
            for nu in 1..=(2 * l).min(2 * big_l) {
                let (fs_nu, fc_nu) = fourier_coeffs(nu, big_l)?;
                let nu = nu as usize;
                h_e = h_e
                    + (ppow[0][nu].clone() + ppow[1][nu].clone() + ppow[2][nu].clone())
                        .scale_re(fc_nu);
                let mut inner = PauliSum::zero(n);
                for mu in 1..=(2 * l).min(2 * big_l) {
                    let (fs_mu, _) = fourier_coeffs(mu, big_l)?;
                    let mu = mu as usize;
                    inner = inner + (ppow[0][mu].clone() + ppow[2][mu].clone()).scale_re(fs_mu);
                }
                let anti = ppow[1][nu].clone() - ppow[1][nu].dag();
                h_e = h_e + anti.matmul(&inner).scale_re(0.5 * fs_nu);
            }
            let h_e = h_e.scale_re(g2);
            let mut h_e = h_e.clone() + h_e.dag();
            // nu = 0 band of the three R^2 terms: 2 g^2 * 3 * L(L+1)/3
            let c0 = 2.0 * g2 * (big_l as f64) * (big_l as f64 + 1.0);
            h_e = h_e + PauliSum::identity(n, Complex64::new(c0, 0.0));

            // H_B diagonal: cosines of the encoded rotator values
            let dim = 1usize << n;
            let sz_vals = |reg: usize| -> Vec<f64> {
                let mut vals = vec![0.0f64; dim];
                for (s, val) in vals.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    let mut zprod = 1.0;
                    for j in 0..(2 * l as usize) {
                        let q = reg * d + j;
                        let bit = s & (1usize << (n - 1 - q)) != 0;
                        zprod *= if bit { -1.0 } else { 1.0 };
                        acc += zprod;
                    }
                    *val = 0.5 * acc;
                }
                vals
            };
            let v0 = sz_vals(0);
            let v1 = sz_vals(1);
            let v2 = sz_vals(2);
            let denom = (2 * big_l + 1) as f64;
            let tau = 2.0 * std::f64::consts::PI / denom;
            let mut cosvals = vec![0.0f64; dim];
            for s in 0..dim {
                cosvals[s] = (tau * v0[s]).cos()
                    + (tau * v1[s]).cos()
                    + (tau * v2[s]).cos()
                    + (tau * (v0[s] + v1[s] + v2[s])).cos();
            }
            let box_diag = diagonal_to_pauli(&cosvals, n);
            let h_b = box_diag.clone().scale_re(-1.0 / g2);
            let plaquette = box_diag.scale_re(0.25);

            let mut h = (h_e + h_b).pruned();
            h.register_map = layout.registers();
            Model { kind: ModelKind::PbcMagnetic, params: *params, hamiltonian: h, plaquette, layout }
        }
    };
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{word_to_string, Axis};

    fn params(g2inv: f64, mass: f64, omega: f64, l: u32) -> ModelParams {
        ModelParams::new(g2inv, mass, omega, l)
    }

    #[test]
    fn rejects_bad_params() {
        assert!(build_obc_plaquette(&params(-1.0, 0.1, 5.0, 1)).is_err());
        assert!(build_obc_plaquette(&params(0.0, 0.1, 5.0, 1)).is_err());
        assert!(build_obc_plaquette(&params(1.0, 0.1, 5.0, 0)).is_err());
        assert!(build_obc_ladder(&params(1.0, 0.1, 5.0, 1), 0).is_err());
        let mut p = params(1.0, 0.0, 0.0, 2);
        p.group_l = Some(1);
        assert!(build_pbc(&p, PbcRep::Magnetic).is_err());
        assert!(fourier_coeffs(0, 10).is_err());
        assert!(fourier_coeffs(21, 10).is_err());
    }

    #[test]
    fn obc_plaquette_shape() {
        let m = build_obc_plaquette(&params(0.7368, 0.1234, 4.987, 1)).unwrap();
        assert_eq!(m.nqubits(), 7);
        // mass term coefficient on sigma_1^z is +m/2
        let z1: Vec<Axis> = "ZIIIIII".chars().map(|c| Axis::from_char(c).unwrap()).collect();
        let c = m.hamiltonian.iter().find(|(w, _)| *w == z1.as_slice()).map(|(_, c)| c).unwrap();
        assert!((c.re - 0.1234 / 2.0).abs() < 1e-12, "sigma_1^z coeff {c}");
        assert!(m.hamiltonian.hermiticity_error() < 1e-12);
    }

    #[test]
    fn pbc_qubit_counts() {
        let m = build_pbc(&params(1.0, 0.0, 0.0, 1), PbcRep::Electric).unwrap();
        assert_eq!(m.nqubits(), 9);
        assert_eq!(m.layout.gauge[0].range(), 0..3);
        assert_eq!(m.layout.gauge[1].range(), 3..6);
        assert_eq!(m.layout.gauge[2].range(), 6..9);
        let m2 = build_pbc(&params(1.0, 0.0, 0.0, 2), PbcRep::Electric).unwrap();
        assert_eq!(m2.nqubits(), 15);
        let mb = build_pbc(&params(1.0, 0.0, 0.0, 1), PbcRep::Magnetic).unwrap();
        assert_eq!(mb.nqubits(), 9);
    }

    #[test]
    fn fourier_sign_patterns() {
        for big_l in [3u32, 10] {
            for nu in 1..=2 * big_l {
                let (fs, fc) = fourier_coeffs(nu, big_l).unwrap();
                let want_s = if nu % 2 == 1 { 1.0 } else { -1.0 };
                assert_eq!(fs.signum(), want_s, "fs sign at nu={nu}, L={big_l}");
                assert_eq!(fc.signum(), -want_s, "fc sign at nu={nu}, L={big_l}");
            }
        }
    }

    #[test]
    fn diagonal_roundtrip() {
        let vals: Vec<f64> = (0..16).map(|i| (i as f64).sin()).collect();
        let ps = diagonal_to_pauli(&vals, 4);
        for (s, &v) in vals.iter().enumerate() {
            let mut acc = 0.0;
            for (w, c) in ps.iter() {
                let mut z = 1.0;
                for (q, a) in w.iter().enumerate() {
                    if *a == Axis::Z && s & (1 << (3 - q)) != 0 {
                        z = -z;
                    }
                    assert!(*a == Axis::Z || *a == Axis::I, "{}", word_to_string(w));
                }
                acc += c.re * z;
            }
            assert!((acc - v).abs() < 1e-12);
        }
    }
}
