//! Derivative-free global minimization for the hybrid loop.
//!
//! A DIRECT-style divider: the search box is tiled by hypercells, each holding
//! one sampled cost value. Potentially-optimal cells are selected on the
//! (size, value) convex hull and trisected along their longest sides. Sampled
//! values are noisy, so cell selection uses mean - stderr (optimistic under
//! uncertainty), and every K divisions a Nelder-Mead polish refines the
//! incumbent. Budget accounting is exact: the loop stops before any
//! evaluation that would exceed the shot budget.

use serde::Serialize;

/// One noisy cost evaluation: mean, standard error, shots consumed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CostSample {
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
}

/// The cost function contract: reentrant, seedable per call. `shots_cap` is
/// the remaining budget; implementations must not consume more than that.
pub trait CostFn: Sync {
    fn eval(&self, params: &[f64], eval_index: u64, shots_cap: u64) -> CostSample;
}

impl<F: Fn(&[f64], u64, u64) -> CostSample + Sync> CostFn for F {
    fn eval(&self, params: &[f64], eval_index: u64, shots_cap: u64) -> CostSample {
        self(params, eval_index, shots_cap)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizerConfig {
    /// Per-parameter [lo, hi) intervals; defaults to [0, 2pi) per angle.
    pub bounds: Vec<(f64, f64)>,
    /// Treat each coordinate as periodic over its interval.
    pub periodic: bool,
    /// Total measurement-shot budget.
    pub budget: u64,
    /// Hard cap on cost evaluations (0 = unlimited).
    pub max_evals: u64,
    pub seed: u64,
    /// Stop when the largest remaining cell edge is below this fraction of the box.
    pub refine_threshold: f64,
    /// Run a Nelder-Mead polish on the incumbent every this many division rounds.
    pub polish_every: u32,
    /// Per-dimension harmonic bound of the cost along that coordinate
    /// (angles driving k two-qubit gates have at most 2k harmonics).
    /// Empty disables trigonometric line search.
    pub line_harmonics: Vec<usize>,
}

impl OptimizerConfig {
    pub fn angles(n: usize, budget: u64, seed: u64) -> Self {
        OptimizerConfig {
            bounds: vec![(0.0, std::f64::consts::TAU); n],
            periodic: true,
            budget,
            max_evals: 0,
            seed,
            refine_threshold: 1e-6,
            polish_every: 20,
            line_harmonics: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRecord {
    pub params: Vec<f64>,
    pub value: f64,
    pub stderr: f64,
    pub shots: u64,
    pub eval_index: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub best_stderr: f64,
    pub shots_spent: u64,
    pub evals: u64,
    pub eval_log: Vec<EvalRecord>,
    /// Distinct candidate optima collected along the way (newest last);
    /// callers may re-measure them precisely before choosing.
    pub candidates: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
struct Cell {
    /// Center in normalized [0,1]^d coordinates.
    center: Vec<f64>,
    /// Per-dimension trisection depth.
    levels: Vec<u32>,
    value: f64,
    stderr: f64,
}

impl Cell {
    /// Cell size measure: half-diagonal in normalized coordinates.
    fn size(&self) -> f64 {
        self.levels
            .iter()
            .map(|&l| {
                let w = 3f64.powi(-(l as i32));
                (w / 2.0) * (w / 2.0)
            })
            .sum::<f64>()
            .sqrt()
    }

    fn selection_value(&self) -> f64 {
        self.value - self.stderr
    }
}

struct Driver<'a> {
    cost: &'a dyn CostFn,
    bounds: &'a [(f64, f64)],
    periodic: bool,
    budget: u64,
    max_evals: u64,
    log: Vec<EvalRecord>,
    shots_spent: u64,
    evals: u64,
    best: Option<(Vec<f64>, f64, f64)>,
}

impl<'a> Driver<'a> {
    fn to_actual(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.bounds)
            .map(|(&t, &(lo, hi))| {
                let mut v = lo + t * (hi - lo);
                if self.periodic {
                    let w = hi - lo;
                    v = lo + (v - lo).rem_euclid(w);
                }
                v.clamp(lo.min(hi), hi.max(lo))
            })
            .collect()
    }

    fn remaining(&self) -> bool {
        self.shots_spent < self.budget && (self.max_evals == 0 || self.evals < self.max_evals)
    }

    /// Evaluate at normalized coordinates; returns None when the budget is exhausted.
    fn eval(&mut self, xnorm: &[f64]) -> Option<CostSample> {
        if !self.remaining() {
            return None;
        }
        let params = self.to_actual(xnorm);
        let cap = self.budget - self.shots_spent;
        let s = self.cost.eval(&params, self.evals, cap);
        debug_assert!(s.shots <= cap, "cost exceeded its shot cap");
        self.evals += 1;
        self.shots_spent = self.shots_spent.saturating_add(s.shots.min(cap));
        self.log.push(EvalRecord {
            params: params.clone(),
            value: s.mean,
            stderr: s.stderr,
            shots: s.shots,
            eval_index: self.evals - 1,
        });
        // incumbent selection is confidence-aware: a candidate replaces the
        // best only when its mean plus one standard error undercuts it
        let better = match &self.best {
            None => true,
            Some((_, bv, bs)) => s.mean + s.stderr < *bv + *bs,
        };
        if better {
            self.best = Some((params, s.mean, s.stderr));
        }
        Some(s)
    }
}

/// Indices of potentially-optimal cells: the lower-right convex hull of
/// (size, selection value) with larger-or-equal size dominating.
fn potentially_optimal(cells: &[Cell]) -> Vec<usize> {
    if cells.is_empty() {
        return Vec::new();
    }
    // group by size; keep per-size best value
    let mut pts: Vec<(f64, f64, usize)> =
        cells.iter().enumerate().map(|(i, c)| (c.size(), c.selection_value(), i)).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    // best (lowest value) per distinct size
    let mut best_per_size: Vec<(f64, f64, usize)> = Vec::new();
    for p in pts {
        match best_per_size.last() {
            Some(&(s, v, _)) if (p.0 - s).abs() < 1e-15 => {
                if p.1 < v {
                    best_per_size.pop();
                    best_per_size.push(p);
                }
            }
            _ => best_per_size.push(p),
        }
    }
    // lower convex hull from largest size downwards
    let mut hull: Vec<(f64, f64, usize)> = Vec::new();
    for &p in best_per_size.iter().rev() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep b only if it is below the a-p line
            let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // hull runs from the largest cell to the smallest; drop tail cells that are
    // worse than the incumbent by a margin (standard epsilon test skipped:
    // noisy costs already carry an uncertainty margin)
    hull.iter().map(|&(_, _, i)| i).collect()
}

/// Minimize a noisy cost over the configured box.
pub fn minimize(cost: &dyn CostFn, cfg: &OptimizerConfig) -> RunRecord {
    let d = cfg.bounds.len();
    assert!(d > 0, "bounds must be nonempty");
    assert!(cfg.budget > 0, "budget must be positive");
    let mut dr = Driver {
        cost,
        bounds: &cfg.bounds,
        periodic: cfg.periodic,
        budget: cfg.budget,
        max_evals: cfg.max_evals,
        log: Vec::new(),
        shots_spent: 0,
        evals: 0,
        best: None,
    };
    direct_loop(&mut dr, cfg, u64::MAX);
    // final polish while budget remains
    if dr.remaining() {
        if let Some((bp, _, _)) = dr.best.clone() {
            nelder_mead(&mut dr, &bp, 0.03, 80);
        }
    }
    dr.into_record(d)
}

/// The DIRECT division loop; stops when the budget, the eval cap, the cell
/// floor or `shot_stop` is reached.
fn direct_loop(dr: &mut Driver, cfg: &OptimizerConfig, shot_stop: u64) {
    let d = cfg.bounds.len();
    let mut cells: Vec<Cell> = Vec::new();
    let c0 = vec![0.5; d];
    if let Some(s) = dr.eval(&c0) {
        cells.push(Cell { center: c0, levels: vec![0; d], value: s.mean, stderr: s.stderr });
    }

    let mut rounds: u32 = 0;
    'outer: while dr.remaining() && dr.shots_spent < shot_stop {
        let candidates = potentially_optimal(&cells);
        if candidates.is_empty() {
            break;
        }
        let mut divided_any = false;
        for idx in candidates {
            let max_level = *cells[idx].levels.iter().min().unwrap();
            let width = 3f64.powi(-(max_level as i32));
            if width < cfg.refine_threshold {
                continue;
            }
            divided_any = true;
            // trisect along all longest dimensions, Jones-style: sample two
            // points per dimension, then assign smallest cells to best values
            let long_dims: Vec<usize> =
                (0..d).filter(|&j| cells[idx].levels[j] == max_level).collect();
            let delta = width / 3.0;
            let mut samples: Vec<(usize, Cell, Cell)> = Vec::new();
            for &j in &long_dims {
                let mut lo = cells[idx].center.clone();
                let mut hi = cells[idx].center.clone();
                lo[j] -= delta;
                hi[j] += delta;
                let slo = match dr.eval(&lo) {
                    Some(s) => s,
                    None => break 'outer,
                };
                let shi = match dr.eval(&hi) {
                    Some(s) => s,
                    None => break 'outer,
                };
                let mk = |center: Vec<f64>, s: CostSample| Cell {
                    center,
                    levels: cells[idx].levels.clone(),
                    value: s.mean,
                    stderr: s.stderr,
                };
                samples.push((j, mk(lo, slo), mk(hi, shi)));
            }
            // dimensions with better children divide first (their cells stay bigger)
            samples.sort_by(|a, b| {
                let va = a.1.value.min(a.2.value);
                let vb = b.1.value.min(b.2.value);
                va.partial_cmp(&vb).unwrap()
            });
            for (j, mut lo, mut hi) in samples {
                // all cells produced so far in this division (parent + earlier children)
                cells[idx].levels[j] += 1;
                let lvl = cells[idx].levels[j];
                lo.levels = cells[idx].levels.clone();
                hi.levels = cells[idx].levels.clone();
                lo.levels[j] = lvl;
                hi.levels[j] = lvl;
                cells.push(lo);
                cells.push(hi);
            }
        }
        rounds += 1;
        if cfg.polish_every > 0 && rounds % cfg.polish_every == 0 {
            if let Some((bp, _, _)) = dr.best.clone() {
                nelder_mead(dr, &bp, 0.08, 40);
            }
        }
        if !divided_any {
            // cell floor reached everywhere
            break;
        }
    }
}

impl<'a> Driver<'a> {
    fn into_record(self, d: usize) -> RunRecord {
        let (best_params, best_value, best_stderr) =
            self.best.unwrap_or((vec![0.0; d], f64::INFINITY, 0.0));
        RunRecord {
            best_params,
            best_value,
            best_stderr,
            shots_spent: self.shots_spent,
            evals: self.evals,
            eval_log: self.log,
            candidates: Vec::new(),
        }
    }

    fn norm_coords(&self, p: &[f64]) -> Vec<f64> {
        p.iter()
            .zip(self.bounds)
            .map(|(&v, &(lo, hi))| {
                let w = hi - lo;
                if self.periodic {
                    ((v - lo).rem_euclid(w)) / w
                } else {
                    ((v - lo) / w).clamp(0.0, 1.0)
                }
            })
            .collect()
    }
}

/// One coordinate-descent sweep with exact trigonometric line minimization.
///
/// The cost along a single angle with the others held fixed is a trig
/// polynomial with bounded harmonics, so uniform sampling over the period
/// interpolates it exactly and the line minimum is found without further
/// cost evaluations. Returns false when the budget ran out mid-sweep.
fn trig_sweep(dr: &mut Driver, cfg: &OptimizerConfig, current: &mut Vec<f64>) -> bool {
    let d = cfg.bounds.len();
    for j in 0..d {
        let h = cfg.line_harmonics.get(j).copied().unwrap_or(2).max(1);
        let npts = 2 * h + 1;
        let (lo, hi) = cfg.bounds[j];
        let width = hi - lo;
        // absolute uniform grid over the period
        let mut samples = Vec::with_capacity(npts);
        let mut noise = 0.0f64;
        for k in 0..npts {
            let theta = lo + width * (k as f64) / (npts as f64);
            let mut x = current.clone();
            x[j] = theta;
            let xn = dr.norm_coords(&x);
            match dr.eval(&xn) {
                Some(s) => {
                    samples.push(s.mean);
                    noise = noise.max(s.stderr);
                }
                None => return false,
            }
        }
        // trigonometric interpolation: coefficients by discrete Fourier sums
        let n = npts as f64;
        let mut a = vec![0.0f64; h + 1];
        let mut b = vec![0.0f64; h + 1];
        for m in 0..=h {
            let mut ca = 0.0;
            let mut cb = 0.0;
            for (k, &e) in samples.iter().enumerate() {
                let ang = std::f64::consts::TAU * (m * k) as f64 / n;
                ca += e * ang.cos();
                cb += e * ang.sin();
            }
            a[m] = 2.0 * ca / n;
            b[m] = 2.0 * cb / n;
        }
        a[0] /= 2.0;
        let f = |t: f64| -> f64 {
            // t in grid units: theta = lo + width * t, t in [0,1)
            let mut v = a[0];
            for m in 1..=h {
                let ang = std::f64::consts::TAU * m as f64 * t;
                v += a[m] * ang.cos() + b[m] * ang.sin();
            }
            v
        };
        // dense scan + ternary refine
        let mut tbest = 0.0;
        let mut fbest = f64::INFINITY;
        let scan = (16 * npts).max(64);
        for k in 0..scan {
            let t = k as f64 / scan as f64;
            let v = f(t);
            if v < fbest {
                fbest = v;
                tbest = t;
            }
        }
        let (mut t0, mut t1) = (tbest - 1.0 / scan as f64, tbest + 1.0 / scan as f64);
        for _ in 0..40 {
            let m1 = t0 + (t1 - t0) / 3.0;
            let m2 = t1 - (t1 - t0) / 3.0;
            if f(m1) < f(m2) {
                t1 = m2;
            } else {
                t0 = m1;
            }
        }
        let tmin = 0.5 * (t0 + t1);
        let _ = noise;
        current[j] = lo + width * tmin.rem_euclid(1.0);
    }
    // re-measure the swept point so the incumbent bookkeeping sees it
    let xn = dr.norm_coords(current);
    dr.eval(&xn).is_some()
}

/// Minimize with candidate seeds: triage the given seeds plus short
/// Nelder-Mead probes from random starts, explore with DIRECT, then polish
/// the incumbent with shrinking scales. Suits small budgets where good
/// starting points are available but local minima abound.
pub fn minimize_seeded(cost: &dyn CostFn, cfg: &OptimizerConfig, seeds: &[Vec<f64>]) -> RunRecord {
    use rand::{Rng, SeedableRng};
    let d = cfg.bounds.len();
    assert!(d > 0 && cfg.budget > 0);
    let mut dr = Driver {
        cost,
        bounds: &cfg.bounds,
        periodic: cfg.periodic,
        budget: cfg.budget,
        max_evals: cfg.max_evals,
        log: Vec::new(),
        shots_spent: 0,
        evals: 0,
        best: None,
    };
    let use_trig = !cfg.line_harmonics.is_empty();
    let mut leaderboard: Vec<Vec<f64>> = Vec::new();
    let remember = |board: &mut Vec<Vec<f64>>, p: &[f64]| {
        let far = board.iter().all(|q| {
            q.iter()
                .zip(p)
                .map(|(a, b)| (a - b).abs().min(std::f64::consts::TAU - (a - b).abs()))
                .sum::<f64>()
                > 0.3
        });
        if far {
            board.push(p.to_vec());
            if board.len() > 8 {
                board.remove(0);
            }
        }
    };
    if use_trig {
        // rank the seeds with one evaluation each, descend the best two with
        // coordinate sweeps, then refine the incumbent until the budget ends
        // (the cost grows its own precision late in the budget)
        let mut ranked: Vec<(f64, Vec<f64>)> = Vec::new();
        for s in seeds {
            let sn = dr.norm_coords(s);
            match dr.eval(&sn) {
                Some(v) => ranked.push((v.mean, dr.to_actual(&sn))),
                None => return dr.into_record(d),
            }
        }
        ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let descend_stop = (cfg.budget as f64 * 0.62) as u64;
        let per_seed = descend_stop / ranked.len().min(2).max(1) as u64;
        for (_, seed_pt) in ranked.iter().take(2) {
            let stage_stop = (dr.shots_spent + per_seed).min(descend_stop);
            let mut cur = seed_pt.clone();
            while dr.remaining() && dr.shots_spent < stage_stop {
                let before = dr.evals;
                if !trig_sweep(&mut dr, cfg, &mut cur) {
                    break;
                }
                if dr.evals == before {
                    break;
                }
            }
            remember(&mut leaderboard, &cur);
            if !dr.remaining() {
                break;
            }
        }
        // random restarts while under 75%: two sweeps each, promoted with two
        // more when the probe lands near the incumbent's value
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
        let probe_stop = (cfg.budget as f64 * 0.75) as u64;
        while dr.remaining() && dr.shots_spent < probe_stop {
            let mut x: Vec<f64> = (0..d)
                .map(|j| {
                    let (lo, hi) = cfg.bounds[j];
                    lo + rng.gen::<f64>() * (hi - lo)
                })
                .collect();
            let before = dr.evals;
            for _ in 0..2 {
                if !trig_sweep(&mut dr, cfg, &mut x) {
                    break;
                }
            }
            // promote probes whose final sample competes with the incumbent
            let snapshot = dr.log.last().map(|l| (l.value, l.stderr));
            if let (Some((lv, ls)), Some((_, bv, bs))) = (snapshot, dr.best.clone()) {
                if lv < bv + 2.0 * bs.max(0.0) + 2.0 * ls {
                    for _ in 0..2 {
                        if !trig_sweep(&mut dr, cfg, &mut x) {
                            break;
                        }
                    }
                }
            }
            remember(&mut leaderboard, &x);
            if dr.evals == before {
                break;
            }
        }
        // refine the incumbent to the end of the budget; the noise-limited
        // endpoint jitter is beaten down by averaging the sweep iterates
        // (circular mean per coordinate)
        let mut tail: Vec<Vec<f64>> = Vec::new();
        while dr.remaining() {
            let before = dr.evals;
            if let Some((bp, _, _)) = dr.best.clone() {
                let mut cur = bp;
                if !trig_sweep(&mut dr, cfg, &mut cur) {
                    break;
                }
                remember(&mut leaderboard, &cur);
                tail.push(cur);
                if tail.len() > 6 {
                    tail.remove(0);
                }
                if tail.len() >= 3 {
                    let mean: Vec<f64> = (0..d)
                        .map(|j| {
                            let (lo, hi) = cfg.bounds[j];
                            let w = hi - lo;
                            let (mut sx, mut sy) = (0.0, 0.0);
                            for t in &tail {
                                let a = (t[j] - lo) / w * std::f64::consts::TAU;
                                sx += a.cos();
                                sy += a.sin();
                            }
                            lo + sy.atan2(sx).rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU * w
                        })
                        .collect();
                    remember(&mut leaderboard, &mean);
                    // hold a slot for the rolling mean near the board's end
                    if leaderboard.len() > 1 {
                        let n = leaderboard.len();
                        leaderboard.swap(n - 1, n - 2);
                    }
                }
            }
            if dr.evals == before {
                break;
            }
        }
    } else {
        // simplex pipeline for costs without known line structure
        let per_seed = ((cfg.budget as f64 * 0.45) as u64 / seeds.len().max(1) as u64).max(1);
        for s in seeds {
            let stage_stop = (dr.shots_spent + per_seed).min(cfg.budget);
            let sn = dr.norm_coords(s);
            if dr.eval(&sn).is_none() {
                return dr.into_record(d);
            }
            let cur = dr.to_actual(&sn);
            nelder_mead(&mut dr, &cur, 0.04, 25);
            remember(&mut leaderboard, &cur);
            if dr.shots_spent >= stage_stop && !dr.remaining() {
                break;
            }
        }
        let explore_stop = (cfg.budget as f64 * 0.75) as u64;
        if dr.remaining() && dr.shots_spent < explore_stop {
            direct_loop(&mut dr, cfg, explore_stop);
        }
        while dr.remaining() {
            let before = dr.evals;
            if let Some((bp, _, _)) = dr.best.clone() {
                nelder_mead(&mut dr, &bp, 0.02, 60);
            }
            if dr.evals == before {
                break;
            }
        }
    }
    if let Some((bp, _, _)) = dr.best.clone() {
        remember(&mut leaderboard, &bp);
    }
    let mut rec = dr.into_record(d);
    rec.candidates = leaderboard;
    rec
}

/// Nelder-Mead polish in actual coordinates; respects the budget through the driver.
fn nelder_mead(dr: &mut Driver, start: &[f64], scale: f64, max_iter: usize) {
    let d = start.len();
    let widths: Vec<f64> = dr.bounds.iter().map(|&(lo, hi)| hi - lo).collect();
    let norm = |p: &[f64]| -> Vec<f64> {
        p.iter()
            .zip(dr.bounds)
            .map(|(&v, &(lo, hi))| (v - lo) / (hi - lo))
            .collect()
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let x0 = norm(start);
    match dr.eval(&x0) {
        Some(s) => simplex.push((x0.clone(), s.mean)),
        None => return,
    }
    for j in 0..d {
        let mut x = x0.clone();
        x[j] += scale * widths[j].signum();
        if !dr.periodic {
            x[j] = x[j].clamp(0.0, 1.0);
        }
        match dr.eval(&x) {
            Some(s) => simplex.push((x, s.mean)),
            None => return,
        }
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let reflect: Vec<f64> =
            (0..d).map(|j| centroid[j] + alpha * (centroid[j] - worst.0[j])).collect();
        let periodic = dr.periodic;
        let clampx = move |mut x: Vec<f64>| -> Vec<f64> {
            if !periodic {
                for v in &mut x {
                    *v = v.clamp(0.0, 1.0);
                }
            }
            x
        };
        let reflect = clampx(reflect);
        let fr = match dr.eval(&reflect) {
            Some(s) => s.mean,
            None => return,
        };
        if fr < simplex[0].1 {
            let expand: Vec<f64> =
                (0..d).map(|j| centroid[j] + gamma * (reflect[j] - centroid[j])).collect();
            let expand = clampx(expand);
            let fe = match dr.eval(&expand) {
                Some(s) => s.mean,
                None => return,
            };
            simplex[d] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (reflect, fr);
        } else {
            let contract: Vec<f64> =
                (0..d).map(|j| centroid[j] + rho * (worst.0[j] - centroid[j])).collect();
            let contract = clampx(contract);
            let fc = match dr.eval(&contract) {
                Some(s) => s.mean,
                None => return,
            };
            if fc < worst.1 {
                simplex[d] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for k in 1..=d {
                    let x: Vec<f64> = (0..d)
                        .map(|j| best[j] + sigma * (simplex[k].0[j] - best[j]))
                        .collect();
                    let f = match dr.eval(&x) {
                        Some(s) => s.mean,
                        None => return,
                    };
                    simplex[k] = (x, f);
                }
            }
        }
    }
}

/// Warm-started minimize: seeds the search with an extra evaluation at
/// `start` and an immediate local polish around it before the global phase.
pub fn minimize_warm(cost: &dyn CostFn, cfg: &OptimizerConfig, start: &[f64]) -> RunRecord {
    let d = cfg.bounds.len();
    let mut dr = Driver {
        cost,
        bounds: &cfg.bounds,
        periodic: cfg.periodic,
        budget: cfg.budget,
        max_evals: cfg.max_evals,
        log: Vec::new(),
        shots_spent: 0,
        evals: 0,
        best: None,
    };
    // wrap the seed into the box
    let seed_norm: Vec<f64> = start
        .iter()
        .zip(&cfg.bounds)
        .map(|(&v, &(lo, hi))| {
            let w = hi - lo;
            if cfg.periodic {
                ((v - lo).rem_euclid(w)) / w
            } else {
                ((v - lo) / w).clamp(0.0, 1.0)
            }
        })
        .collect();
    let seed_actual = dr.to_actual(&seed_norm);
    if dr.eval(&seed_norm).is_some() {
        nelder_mead(&mut dr, &seed_actual, 0.05, 60);
    }
    let warm_budget_used = dr.shots_spent;
    let warm_evals = dr.evals;
    let warm_log = dr.log.clone();
    let warm_best = dr.best.clone();

    let mut sub = cfg.clone();
    sub.budget = cfg.budget.saturating_sub(warm_budget_used);
    if sub.budget == 0 {
        let (bp, bv, bs) = warm_best.unwrap_or((vec![0.0; d], f64::INFINITY, 0.0));
        return RunRecord {
            best_params: bp,
            best_value: bv,
            best_stderr: bs,
            shots_spent: warm_budget_used,
            evals: warm_evals,
            eval_log: warm_log,
            candidates: Vec::new(),
        };
    }
    let mut rec = minimize(cost, &sub);
    rec.shots_spent += warm_budget_used;
    rec.evals += warm_evals;
    let mut log = warm_log;
    log.extend(rec.eval_log);
    rec.eval_log = log;
    if let Some((bp, bv, bs)) = warm_best {
        if bv < rec.best_value {
            rec.best_params = bp;
            rec.best_value = bv;
            rec.best_stderr = bs;
        }
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noiseless(f: impl Fn(&[f64]) -> f64 + Sync) -> impl CostFn {
        move |p: &[f64], _, _| CostSample { mean: f(p), stderr: 0.0, shots: 1 }
    }

    #[test]
    fn quadratic_converges() {
        let target = [1.3f64, 4.0, 2.2];
        let cost = noiseless(move |p| {
            p.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        });
        let mut cfg = OptimizerConfig::angles(3, 500, 1);
        cfg.max_evals = 500;
        let rec = minimize(&cost, &cfg);
        for (a, b) in rec.best_params.iter().zip(&target) {
            assert!((a - b).abs() < 1e-2, "best {:?}", rec.best_params);
        }
        assert!(rec.evals <= 500);
    }

    #[test]
    fn styblinski_tang_3d() {
        // global minimum at x_i = -2.903534, f = -117.4985
        let st = noiseless(|p: &[f64]| {
            0.5 * p
                .iter()
                .map(|&x| x.powi(4) - 16.0 * x * x + 5.0 * x)
                .sum::<f64>()
        });
        let mut hits = 0;
        for seed in 0..10 {
            let cfg = OptimizerConfig {
                bounds: vec![(-5.0, 5.0); 3],
                periodic: false,
                budget: 2000,
                max_evals: 2000,
                seed,
                refine_threshold: 1e-7,
                polish_every: 20,
                line_harmonics: Vec::new(),
            };
            let rec = minimize(&st, &cfg);
            if (rec.best_value + 117.4985).abs() < 0.05 {
                hits += 1;
            }
        }
        assert!(hits >= 9, "found global minimum in {hits}/10 runs");
    }

    #[test]
    fn budget_accounting_exact() {
        let cost = |p: &[f64], _, cap: u64| CostSample {
            mean: p.iter().sum::<f64>(),
            stderr: 0.1,
            shots: 37.min(cap),
        };
        let cfg = OptimizerConfig::angles(2, 1000, 3);
        let rec = minimize(&cost, &cfg);
        let total: u64 = rec.eval_log.iter().map(|e| e.shots).sum();
        assert_eq!(total, rec.shots_spent);
        assert!(rec.shots_spent <= 1000, "never exceeds the budget");
        // best-value trace is non-increasing
        let mut best = f64::INFINITY;
        for e in &rec.eval_log {
            best = best.min(e.value);
        }
        assert_eq!(best, rec.best_value);
    }

    #[test]
    fn deterministic_given_seed() {
        let cost = |p: &[f64], _, _| CostSample {
            mean: (p[0] - 2.0).powi(2) + (p[1] - 1.0).powi(2),
            stderr: 0.0,
            shots: 1,
        };
        let cfg = OptimizerConfig::angles(2, 300, 9);
        let a = minimize(&cost, &cfg);
        let b = minimize(&cost, &cfg);
        assert_eq!(a.best_params, b.best_params);
        assert_eq!(a.evals, b.evals);
    }
}
