use lgt_core::hamiltonian::{build, ModelKind, ModelParams};
use lgt_core::opt::{minimize_seeded, CostSample, OptimizerConfig};
use lgt_core::oracle::ed::{exact_ground, fidelity};
use lgt_core::sim::{AnsatzTemplate, Circuit, Gate, Param};
use rand::{Rng, SeedableRng};

const HALF: f64 = std::f64::consts::FRAC_PI_2;

fn slot(s: usize) -> Param {
    Param::Slot { slot: s, offset: 0.0 }
}

fn variant(name: &str) -> (String, AnsatzTemplate) {
    let mut c = Circuit::new(7);
    for q in [0usize, 2, 5] {
        c.push(Gate::x(q));
    }
    let mut k = 0usize;
    let mut ns = || {
        k += 1;
        k - 1
    };
    match name {
        "V8" => {
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (1, 5, 6), (2, 4, 5), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            let shared = ns();
            for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, Param::Slot { slot: shared, offset: 0.0 }));
            }
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        "V9" => {
            // interleaved: matter, cis, matter, cis with pairwise sharing
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (2, 3)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            for (a, b) in [(0, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 5, 6), (2, 4, 5)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            c.push(Gate::iswap(1, 2, slot(ns())));
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        "V0" => {
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (1, 5, 6), (2, 4, 5), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            c.push(Gate::iswap(1, 2, slot(ns())));
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        "V2" => {
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (1, 5, 6), (2, 4, 5), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            c.push(Gate::iswap(0, 1, slot(ns())));
            c.push(Gate::iswap(2, 3, slot(ns())));
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        "V3" => {
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (1, 5, 6), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            c.push(Gate::iswap(1, 2, slot(ns())));
            c.push(Gate::iswap(0, 3, slot(ns())));
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        "V5" => {
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (1, 5, 6), (2, 4, 5), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            c.push(Gate::rz(1, slot(ns())));
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        "V6" => {
            c.push(Gate::iswap(4, 5, slot(ns())));
            c.push(Gate::iswap(5, 6, slot(ns())));
            for (a, b) in [(0, 1), (2, 3)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            for (ct, a, b) in [(1, 4, 5), (1, 5, 6), (2, 4, 5), (2, 5, 6)] {
                c.push(Gate::ciswap(ct, a, b, slot(ns())));
            }
            for (a, b) in [(0, 1), (0, 3), (2, 3), (1, 2)] {
                c.push(Gate::iswap(a, b, slot(ns())));
            }
            c.push(Gate::rz(4, Param::Fixed(-HALF)));
            c.push(Gate::rz(6, Param::Fixed(-HALF)));
        }
        _ => unreachable!(),
    }
    (name.to_string(), AnsatzTemplate { circuit: c, n_params: k })
}

fn main() {
    for name in ["V8", "V9", "V0"] {
        let (nm, t) = variant(name);
        print!("{nm}: ");
        for g2inv in [2.18, 3.16, 4.0, 5.0, 100.0] {
            let p = ModelParams::new(g2inv, 0.1, 5.0, 1);
            let m = build(ModelKind::ObcPlaquette, &p).unwrap();
            let mask = m.layout.physical_sector();
            let spec = exact_ground(&m.hamiltonian, &mask).unwrap();
            let gs = spec.expand(0);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
            let tries = 8;
            let mut fids: Vec<f64> = Vec::new();
            for _ in 0..tries {
                let seed: Vec<f64> =
                    (0..t.n_params).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
                let tt = t.clone();
                let h = m.hamiltonian.clone();
                let cost = move |params: &[f64], _e: u64, _c: u64| CostSample {
                    mean: h.expectation(&tt.prepare(params).unwrap().amps).re,
                    stderr: 0.0,
                    shots: 1,
                };
                let mut cfg = OptimizerConfig::angles(t.n_params, 600, 5);
                cfg.max_evals = 600;
                cfg.line_harmonics = t.slot_harmonics();
                let rec = minimize_seeded(&cost, &cfg, &[seed]);
                let st = t.prepare(&rec.best_params).unwrap();
                fids.push(fidelity(&gs, &st.amps));
            }
            fids.sort_by(|a, b| a.partial_cmp(b).unwrap());
            print!(" {g2inv}:[med {:.3} max {:.3}]", fids[tries / 2], fids[tries - 1]);
        }
        println!();
    }
}
