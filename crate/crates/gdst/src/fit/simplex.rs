//! Bounded Nelder-Mead simplex descent.
//!
//! Every trial point is clamped into the box, comparisons break ties by
//! vertex index, and no randomness enters anywhere, so a given start
//! always yields the same result.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop when the spread of simplex function values falls below this.
    pub tol: f64,
    pub max_iters: usize,
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fmin: f64,
    pub iters: usize,
    pub converged: bool,
}

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

fn clamp(x: &mut [f64], lo: f64, hi: f64) {
    for v in x.iter_mut() {
        *v = v.clamp(lo, hi);
    }
}

pub fn minimize<F>(f: F, x0: &[f64], bounds: (f64, f64), opts: SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let (lo, hi) = bounds;
    let span = hi - lo;

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    verts.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = 0.05 * span;
        v[i] = if v[i] + step <= hi { v[i] + step } else { v[i] - step };
        verts.push(v);
    }
    for v in &mut verts {
        clamp(v, lo, hi);
    }
    let mut fvals: Vec<f64> = verts.iter().map(|v| f(v)).collect();

    let mut iters = 0;
    let mut converged = false;
    while iters < opts.max_iters {
        // order by (f, index); index tie-break keeps ordering deterministic
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap().then(a.cmp(&b)));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if fvals[worst] - fvals[best] <= opts.tol {
            converged = true;
            break;
        }
        iters += 1;

        let mut centroid = vec![0.0; n];
        for &i in order.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(&verts[i]) {
                *c += x / n as f64;
            }
        }

        let point = |coef: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&verts[worst])
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            clamp(&mut p, lo, hi);
            p
        };

        let reflected = point(ALPHA);
        let fr = f(&reflected);
        if fr < fvals[best] {
            let expanded = point(GAMMA);
            let fe = f(&expanded);
            if fe < fr {
                verts[worst] = expanded;
                fvals[worst] = fe;
            } else {
                verts[worst] = reflected;
                fvals[worst] = fr;
            }
            continue;
        }
        if fr < fvals[second_worst] {
            verts[worst] = reflected;
            fvals[worst] = fr;
            continue;
        }
        let contracted = if fr < fvals[worst] { point(ALPHA * RHO) } else { point(-RHO) };
        let fc = f(&contracted);
        if fc < fvals[worst].min(fr) {
            verts[worst] = contracted;
            fvals[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best_v = verts[best].clone();
        for (i, v) in verts.iter_mut().enumerate() {
            if i == best {
                continue;
            }
            for (x, b) in v.iter_mut().zip(&best_v) {
                *x = b + SIGMA * (*x - b);
            }
            clamp(v, lo, hi);
            fvals[i] = f(v);
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if fvals[i] < fvals[best] {
            best = i;
        }
    }
    SimplexResult {
        x: verts[best].clone(),
        fmin: fvals[best],
        iters,
        converged,
    }
}
