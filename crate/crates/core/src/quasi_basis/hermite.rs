//! Hermite functions at complex arguments.

use num_complex::Complex64;

/// `g_0(z), …, g_{count−1}(z)` by
/// `g_{n+1} = √(2/(n+1)) z g_n − √(n/(n+1)) g_{n−1}`,
/// `g_0 = π^{−1/4} e^{−z²/2}`.
pub fn hermite_table(z: Complex64, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let g0 = (-z * z / 2.0).exp() * std::f64::consts::PI.powf(-0.25);
    out.push(g0);
    if count == 1 {
        return out;
    }
    out.push(z * g0 * std::f64::consts::SQRT_2);
    for n in 1..count - 1 {
        let nf = n as f64;
        let next = z * out[n] * (2.0 / (nf + 1.0)).sqrt() - out[n - 1] * (nf / (nf + 1.0)).sqrt();
        out.push(next);
    }
    out
}

/// `g_n'` from `g_n' = √(n/2) g_{n−1} − √((n+1)/2) g_{n+1}`; `table` must
/// reach index `n + 1`.
pub fn derivative(table: &[Complex64], n: usize) -> Complex64 {
    let down = if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        table[n - 1] * (n as f64 / 2.0).sqrt()
    };
    down - table[n + 1] * ((n as f64 + 1.0) / 2.0).sqrt()
}

/// `g_n''` by applying the derivative identity twice; `table` must reach
/// index `n + 2`.
pub fn second_derivative(table: &[Complex64], n: usize) -> Complex64 {
    let down = if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        derivative(table, n - 1) * (n as f64 / 2.0).sqrt()
    };
    down - derivative(table, n + 1) * ((n as f64 + 1.0) / 2.0).sqrt()
}
