//! Bounded Nelder–Mead simplex search.

/// Stopping rules and budget for one simplex run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Converged once every vertex lies within this distance of the best one.
    pub x_tol: f64,
    /// Converged once the value spread across the simplex drops below this.
    pub f_tol: f64,
    pub max_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimises `f` from `start` inside the box `[lo, hi]`.
///
/// Dimensions with `lo == hi` are held fixed. Trial points are projected onto
/// the box. When a run converges the search restarts from the best vertex
/// with a fresh, smaller simplex until a restart no longer improves the value,
/// which keeps the method from stalling on kinks.
pub fn minimize<F>(
    mut f: F,
    start: &[f64],
    lo: &[f64],
    hi: &[f64],
    initial_step: &[f64],
    opts: &SimplexOptions,
) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let free: Vec<usize> = (0..start.len()).filter(|&i| hi[i] > lo[i]).collect();
    let embed = |y: &[f64]| {
        let mut x = start.to_vec();
        for (&i, &v) in free.iter().zip(y) {
            x[i] = v.clamp(lo[i], hi[i]);
        }
        x
    };
    let evaluations = std::cell::Cell::new(0usize);
    let mut eval = |y: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        let v = f(&embed(y));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_y: Vec<f64> = free.iter().map(|&i| start[i].clamp(lo[i], hi[i])).collect();
    let mut best_f = eval(&best_y);
    if free.is_empty() {
        return SimplexResult {
            x: embed(&best_y),
            value: best_f,
            evaluations: 1,
            converged: true,
        };
    }
    let mut steps: Vec<f64> = free.iter().map(|&i| initial_step[i]).collect();
    let mut converged;
    loop {
        let budget = opts.max_evaluations.saturating_sub(evaluations.get());
        let run = nelder_mead(
            &mut eval, &best_y, best_f, &steps, budget, opts, &free, lo, hi,
        );
        let improved = run.value < best_f - opts.f_tol;
        best_y = run.y;
        best_f = run.value;
        converged = run.converged;
        if !run.converged || !improved {
            break;
        }
        // restart with a simplex a little larger than the collapsed one
        let scale = (run.diameter * 10.0).max(opts.x_tol * 10.0);
        for s in steps.iter_mut() {
            *s = scale.min(*s);
        }
    }
    SimplexResult {
        x: embed(&best_y),
        value: best_f,
        evaluations: evaluations.get(),
        converged,
    }
}

struct Run {
    y: Vec<f64>,
    value: f64,
    converged: bool,
    diameter: f64,
}

#[allow(clippy::too_many_arguments)]
fn nelder_mead<E>(
    eval: &mut E,
    start: &[f64],
    start_f: f64,
    steps: &[f64],
    budget: usize,
    opts: &SimplexOptions,
    free: &[usize],
    lo: &[f64],
    hi: &[f64],
) -> Run
where
    E: FnMut(&[f64]) -> f64,
{
    let d = start.len();
    let project = |y: &mut Vec<f64>| {
        for (k, &i) in free.iter().enumerate() {
            y[k] = y[k].clamp(lo[i], hi[i]);
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), start_f)];
    for k in 0..d {
        let mut y = start.to_vec();
        let i = free[k];
        // step toward whichever side of the box has room
        y[k] += if y[k] + steps[k] <= hi[i] {
            steps[k]
        } else {
            -steps[k]
        };
        project(&mut y);
        let v = eval(&y);
        simplex.push((y, v));
    }
    let mut used = d + 1;
    let spread = |s: &[(Vec<f64>, f64)]| s[s.len() - 1].1 - s[0].1;
    let diameter = |s: &[(Vec<f64>, f64)]| {
        s[1..]
            .iter()
            .map(|(y, _)| {
                y.iter()
                    .zip(&s[0].0)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    };
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diam = diameter(&simplex);
        if diam < opts.x_tol || (spread(&simplex) < opts.f_tol && simplex[0].1.is_finite()) {
            return Run {
                y: simplex[0].0.clone(),
                value: simplex[0].1,
                converged: true,
                diameter: diam,
            };
        }
        if used >= budget {
            return Run {
                y: simplex[0].0.clone(),
                value: simplex[0].1,
                converged: false,
                diameter: diam,
            };
        }
        let mut centroid = vec![0.0; d];
        for (y, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(y) {
                *c += v / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let along = |t: f64| {
            let mut y: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            project(&mut y);
            y
        };
        let yr = along(1.0);
        let fr = eval(&yr);
        used += 1;
        if fr < simplex[0].1 {
            let ye = along(2.0);
            let fe = eval(&ye);
            used += 1;
            simplex[d] = if fe < fr { (ye, fe) } else { (yr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (yr, fr);
        } else {
            let (yc, fc) = if fr < worst.1 {
                let y = along(0.5);
                let v = eval(&y);
                (y, v)
            } else {
                let y = along(-0.5);
                let v = eval(&y);
                (y, v)
            };
            used += 1;
            if fc < worst.1.min(fr) {
                simplex[d] = (yc, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let mut y: Vec<f64> = best
                        .iter()
                        .zip(&entry.0)
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    project(&mut y);
                    let v = eval(&y);
                    *entry = (y, v);
                }
                used += d;
            }
        }
    }
}
