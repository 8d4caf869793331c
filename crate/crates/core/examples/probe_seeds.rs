use lgt_core::hamiltonian::{build, ModelKind, ModelParams};
use lgt_core::oracle::ed::{exact_ground, fidelity};
use lgt_core::sim::obc_ansatz;

fn main() {
    let t = obc_ansatz(true);
    let mut seeds: Vec<(String, Vec<f64>)> = vec![("zero".into(), vec![0.0; 11])];
    let mut s = vec![0.0; 11];
    s[0] = std::f64::consts::FRAC_PI_6;
    s[1] = 0.61548;
    s[2] = std::f64::consts::FRAC_PI_4;
    s[4] = std::f64::consts::FRAC_PI_4;
    seeds.push(("weak".into(), s));
    for (name, th1) in [("f-", 7.0 * std::f64::consts::FRAC_PI_4), ("f+", std::f64::consts::FRAC_PI_4)] {
        let mut f = vec![0.0; 11];
        f[1] = th1;
        f[2] = std::f64::consts::FRAC_PI_2;
        f[4] = std::f64::consts::FRAC_PI_2;
        seeds.push((name.into(), f));
    }
    for g2inv in [0.01, 0.1, 1.0, 2.18, 3.16, 5.0, 100.0] {
        let p = ModelParams::new(g2inv, 0.1, 5.0, 1);
        let m = build(ModelKind::ObcPlaquette, &p).unwrap();
        let mask = m.layout.physical_sector();
        let spec = exact_ground(&m.hamiltonian, &mask).unwrap();
        let gs = spec.expand(0);
        print!("g2inv {g2inv:8.3}: ");
        for (name, th) in &seeds {
            let st = t.prepare(th).unwrap();
            print!(" {name}={:.4}", fidelity(&gs, &st.amps));
        }
        println!();
    }
}
