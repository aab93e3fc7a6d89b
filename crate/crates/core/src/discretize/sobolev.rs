/// `((cosh l + 1)/sinh l)^{1/2}`, the norm of `f ↦ (f(0), f(l))` on `W¹₂(0, l)`.
pub fn trace_norm_closed_form(l: f64) -> f64 {
    ((l.cosh() + 1.0) / l.sinh()).sqrt()
}

/// Solves the tridiagonal system with sub/super-diagonal `off` (symmetric) and
/// diagonal `diag` by the Thomas algorithm.
fn solve_symmetric_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = if n > 1 { off[0] / diag[0] } else { 0.0 };
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / m;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Discrete norm of the trace map `f ↦ (f(0), f(l))` from `W¹₂(0, l)` to `K²`.
///
/// The `W¹₂` norm is discretized on `n` uniform points as `f†(M + K)f` with the
/// trapezoidal mass `M` and the stiffness `K = D₁†·W·D₁`. The result is the
/// square root of the largest eigenvalue of `T·(M + K)⁻¹·T†`.
pub fn trace_operator_norm(l: f64, n: usize) -> f64 {
    assert!(l > 0.0 && n >= 2, "trace_operator_norm needs l > 0 and n ≥ 2");
    let h = l / (n - 1) as f64;
    let mut diag = vec![2.0 / h + h; n];
    diag[0] = 1.0 / h + 0.5 * h;
    diag[n - 1] = 1.0 / h + 0.5 * h;
    let off = vec![-1.0 / h; n - 1];
    let mut e0 = vec![0.0; n];
    e0[0] = 1.0;
    let mut e1 = vec![0.0; n];
    e1[n - 1] = 1.0;
    let y0 = solve_symmetric_tridiagonal(&diag, &off, &e0);
    let y1 = solve_symmetric_tridiagonal(&diag, &off, &e1);
    // T·Y is the symmetric 2×2 matrix [[a, b], [b, d]].
    let (a, b, d) = (y0[0], y1[0], y1[n - 1]);
    let mean = 0.5 * (a + d);
    let lambda_max = mean + (0.25 * (a - d).powi(2) + b * b).sqrt();
    lambda_max.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert!((trace_norm_closed_form(1.0) - 1.471_04).abs() < 1e-5);
        // The closed form tends to 1 from above as l grows.
        assert!(trace_norm_closed_form(20.0) > 1.0);
        assert!(trace_norm_closed_form(20.0) - 1.0 < 1e-8);
    }

    #[test]
    fn tridiagonal_solver_matches_dense_solve() {
        let diag = [4.0, 5.0, 6.0, 7.0];
        let off = [1.0, -2.0, 0.5];
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = solve_symmetric_tridiagonal(&diag, &off, &rhs);
        let m = nalgebra::DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        });
        let expected = m.lu().solve(&nalgebra::DVector::from_row_slice(&rhs)).unwrap();
        for i in 0..4 {
            assert!((x[i] - expected[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn converges_to_closed_form() {
        for l in [0.5, 1.0, 2.0] {
            let exact = trace_norm_closed_form(l);
            let approx = trace_operator_norm(l, 2000);
            assert!((approx - exact).abs() < 0.01 * exact, "l = {l}: {approx} vs {exact}");
        }
    }
}
