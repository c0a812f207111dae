//! Derivative-free simplex minimization.
//!
//! A standard Nelder-Mead loop (reflection 1, expansion 2, contraction 0.5,
//! shrink 0.5) over an unconstrained parameter vector. The likelihoods this
//! crate optimizes are smooth in their encoded coordinates but their
//! gradients are not available in closed form, and the Monte Carlo
//! likelihood is only piecewise-smooth in the draw weights, which is exactly
//! the regime where a simplex method is the pragmatic choice.
//!
//! Non-finite objective values are treated as infinitely bad rather than
//! errors, so the simplex walks back out of any region where the decoded
//! parameters overflow.

pub(crate) struct NmOptions {
    /// Converged when the value spread across the simplex drops below
    /// `tol * (1 + |best|)`.
    pub tol: f64,
    /// Hard cap on main-loop iterations.
    pub max_iter: usize,
}

pub(crate) struct NmOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sanitize(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

/// Minimizes `f` starting from `x0`. The initial simplex perturbs each
/// coordinate by 10% of its magnitude, with a floor of 0.1, taken in the
/// positive direction.
pub(crate) fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NmOptions) -> NmOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert!(dim > 0, "cannot optimize a zero-length parameter vector");

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        let step = 0.1 * v[i].abs().max(1.0);
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| sanitize(f(v))).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;

        // Order the simplex by objective value, best first.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let second_worst = order[dim - 1];
        let worst = order[dim];

        let spread = values[worst] - values[best];
        if spread.is_finite() && spread <= opts.tol * (1.0 + values[best].abs()) {
            converged = true;
            break;
        }

        // Centroid of every vertex except the worst.
        let mut centroid = vec![0.0; dim];
        for (vi, vertex) in simplex.iter().enumerate() {
            if vi == worst {
                continue;
            }
            for (c, &x) in centroid.iter_mut().zip(vertex.iter()) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(simplex[worst].iter())
            .map(|(&c, &w)| c + (c - w))
            .collect();
        let f_reflect = sanitize(f(&reflect));

        if f_reflect < values[best] {
            // Try to go further in the same direction.
            let expand: Vec<f64> = centroid
                .iter()
                .zip(simplex[worst].iter())
                .map(|(&c, &w)| c + 2.0 * (c - w))
                .collect();
            let f_expand = sanitize(f(&expand));
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
            continue;
        }

        if f_reflect < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
            continue;
        }

        // Contract, outside or inside depending on where the reflection
        // landed relative to the worst vertex.
        let (target, f_target) = if f_reflect < values[worst] {
            (reflect.clone(), f_reflect)
        } else {
            (simplex[worst].clone(), values[worst])
        };
        let contract: Vec<f64> = centroid
            .iter()
            .zip(target.iter())
            .map(|(&c, &t)| c + 0.5 * (t - c))
            .collect();
        let f_contract = sanitize(f(&contract));
        if f_contract <= f_target {
            simplex[worst] = contract;
            values[worst] = f_contract;
            continue;
        }

        // Shrink everything toward the best vertex.
        let best_vertex = simplex[best].clone();
        for vi in 0..=dim {
            if vi == best {
                continue;
            }
            for (x, &b) in simplex[vi].iter_mut().zip(best_vertex.iter()) {
                *x = b + 0.5 * (*x - b);
            }
            values[vi] = sanitize(f(&simplex[vi]));
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if values[i] < values[best] {
            best = i;
        }
    }
    NmOutcome {
        x: simplex.swap_remove(best),
        value: values[best],
        iterations,
        converged,
    }
}
