use lgt_core::hamiltonian::{build, ModelKind, ModelParams};
use lgt_core::opt::{minimize_seeded, CostSample, OptimizerConfig};
use lgt_core::oracle::ed::{exact_ground, fidelity};
use lgt_core::sim::obc_ansatz;

fn solve_noiseless(g2inv: f64, seeds: &[Vec<f64>], evals: u64) -> (f64, Vec<f64>, f64) {
    let p = ModelParams::new(g2inv, 0.1, 5.0, 1);
    let m = build(ModelKind::ObcPlaquette, &p).unwrap();
    let mask = m.layout.physical_sector();
    let spec = exact_ground(&m.hamiltonian, &mask).unwrap();
    let gs = spec.expand(0);
    let t = obc_ansatz(true);
    let tt = t.clone();
    let h = m.hamiltonian.clone();
    let cost = move |params: &[f64], _e: u64, _c: u64| CostSample {
        mean: h.expectation(&tt.prepare(params).unwrap().amps).re,
        stderr: 0.0,
        shots: 1,
    };
    let mut cfg = OptimizerConfig::angles(11, evals, 5);
    cfg.max_evals = evals;
    cfg.line_harmonics = t.slot_harmonics();
    let rec = minimize_seeded(&cost, &cfg, seeds);
    let st = t.prepare(&rec.best_params).unwrap();
    (fidelity(&gs, &st.amps), rec.best_params, rec.best_value - spec.ground_energy())
}

fn main() {
    // chain down from 10.0 through the transition
    let mut seeds = vec![vec![0.0; 11]];
    for g2inv in [10.0, 5.0, 4.0, 3.16, 2.7, 2.18, 1.5, 1.0] {
        let (fid, best, de) = solve_noiseless(g2inv, &seeds, 2500);
        println!("g2inv {g2inv:6.2}: fid {fid:.4}  dE {de:+.4}");
        seeds = vec![best, vec![0.0; 11]];
    }
}
