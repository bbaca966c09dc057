//! Derivative-free minimization: grid scan plus Nelder–Mead refinement.

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Nelder–Mead with standard coefficients. Stops when the simplex diameter
/// falls below `size_tol` or after `max_iter` iterations.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, start: &[f64], step: f64, size_tol: f64, max_iter: usize) -> Minimum {
    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut iterations = 0;

    while iterations < max_iter {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < size_tol {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|p| p[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[dim] {
            let c = along(0.5);
            let v = f(&c);
            (c, v)
        } else {
            let c = along(-0.5);
            let v = f(&c);
            (c, v)
        };
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=dim {
            simplex[i] = simplex[i].iter().zip(&best).map(|(p, b)| b + 0.5 * (p - b)).collect();
            values[i] = f(&simplex[i]);
        }
    }
    let best = (0..=dim).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum {
        point: simplex[best].clone(),
        value: values[best],
        iterations,
    }
}

/// Evaluates `f` on the Cartesian product of `axes` in parallel. Returns the
/// lexicographically first point among those with the smallest value.
pub fn grid_min<F: Fn(&[f64]) -> f64 + Sync>(f: F, axes: &[Vec<f64>]) -> Minimum {
    let total: usize = axes.iter().map(Vec::len).product();
    let point_at = |mut idx: usize| -> Vec<f64> {
        let mut p = vec![0.0; axes.len()];
        for (d, axis) in axes.iter().enumerate().rev() {
            p[d] = axis[idx % axis.len()];
            idx /= axis.len();
        }
        p
    };
    let values: Vec<f64> = (0..total).into_par_iter().map(|i| f(&point_at(i))).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v.total_cmp(&values[best]).is_lt() {
            best = i;
        }
    }
    Minimum {
        point: point_at(best),
        value: values[best],
        iterations: 0,
    }
}

/// `start, start + step, …` strictly below `end`.
pub fn axis(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step - 1e-9).ceil() as usize;
    (0..n).map(|i| start + step * i as f64).collect()
}
