use lgt_core::vqe::{sweep, SweepConfig};

fn main() {
    let t0 = std::time::Instant::now();
    let seeds: Vec<u64> = std::env::args()
        .nth(1)
        .map(|s| s.split(',').map(|x| x.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![7, 8, 9]);
    let mut grid: Vec<f64> = Vec::new();
    let mut fids: Vec<Vec<f64>> = Vec::new();
    for &sd in &seeds {
        let cfg = SweepConfig::fig4(10_000_000, sd);
        let out = sweep(&cfg).unwrap();
        grid = out.points.iter().map(|p| p.g2inv).collect();
        fids.push(out.points.iter().map(|p| p.fidelity).collect());
        println!(
            "seed {sd}: {}",
            out.points.iter().map(|p| format!("{:.3}", p.fidelity)).collect::<Vec<_>>().join(" ")
        );
    }
    print!("worst : ");
    for j in 0..grid.len() {
        let w = fids.iter().map(|f| f[j]).fold(f64::INFINITY, f64::min);
        print!("{w:.3} ");
    }
    println!("\nelapsed {:.1?}", t0.elapsed());
}
