use lgt_core::hamiltonian::{build, ModelKind, ModelParams};
use lgt_core::opt::{minimize_seeded, CostSample, OptimizerConfig};
use lgt_core::oracle::ed::{exact_ground, fidelity};
use lgt_core::sim::obc_ansatz;

fn main() {
    for g2inv in [0.01, 1.0, 2.18, 3.16] {
        let p = ModelParams::new(g2inv, 0.1, 5.0, 1);
        let m = build(ModelKind::ObcPlaquette, &p).unwrap();
        let mask = m.layout.physical_sector();
        let spec = exact_ground(&m.hamiltonian, &mask).unwrap();
        let gs = spec.expand(0);
        let t = obc_ansatz(true);
        let tt = t.clone();
        let h = m.hamiltonian.clone();
        let cost = move |params: &[f64], _e: u64, _c: u64| {
            let st = tt.prepare(params).unwrap();
            CostSample { mean: h.expectation(&st.amps).re, stderr: 0.0, shots: 1 }
        };
        let mut cfg = OptimizerConfig::angles(11, 3000, 5);
        cfg.max_evals = 3000;
        cfg.line_harmonics = t.slot_harmonics();
        let seeds = vec![vec![0.0; 11]];
        let rec = minimize_seeded(&cost, &cfg, &seeds);
        let st = t.prepare(&rec.best_params).unwrap();
        println!(
            "g2inv {g2inv:6.2}: noiseless best E {:ilde$.4} vs ED {:.4}, fid {:.4}, evals {}",
            rec.best_value, spec.ground_energy(), fidelity(&gs, &st.amps), rec.evals, ilde = 9
        );
    }
}
