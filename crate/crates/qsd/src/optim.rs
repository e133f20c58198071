//! Small deterministic optimizers for low-dimensional searches.

/// Golden-section minimization of a unimodal function on [lo, hi], to an
/// argument tolerance `xtol`. Returns (argmin, min).
pub(crate) fn golden_section_min(
    f: &mut impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> (f64, f64) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Nelder-Mead simplex minimization with a fixed iteration budget and
/// deterministic tie handling. The initial simplex offsets each coordinate
/// of `x0` by `step`.
pub(crate) fn nelder_mead(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iter {
        // Stable sort keeps the run deterministic under value ties.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        if (values[n] - values[0]).abs() < 1e-14 {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n)
            .map(|k| centroid[k] + alpha * (centroid[k] - worst[k]))
            .collect();
        let fr = f(&reflect);

        if fr < values[0] {
            let expand: Vec<f64> = (0..n)
                .map(|k| centroid[k] + gamma * (reflect[k] - centroid[k]))
                .collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|k| centroid[k] + rho * (worst[k] - centroid[k]))
                .collect();
            let fc = f(&contract);
            if fc < values[n] {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for p in simplex.iter_mut().skip(1) {
                    for k in 0..n {
                        p[k] = best[k] + sigma * (p[k] - best[k]);
                    }
                }
                for i in 1..=n {
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0usize;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}
