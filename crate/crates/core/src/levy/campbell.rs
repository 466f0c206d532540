use std::collections::BTreeMap;

use super::jumps::JumpMeasure;
use crate::error::{param, Result};

/// Highest derivative order with a coefficient table.
pub const MAX_ORDER: usize = 6;

/// Pairs `(omega, c(n, omega))`, `omega[i-1]` the power of the `i`-th derivative
/// of the exponent, sorted by `omega`.
pub type Coefficients = Vec<(Vec<usize>, u64)>;

/// Coefficients of `Phi^(n) = Phi sum_omega c(n, omega) prod_i m_i^omega_i`,
/// built by differentiating level by level: the factor `Phi` contributes
/// `m_1` (raise `omega_1`), each `m_j^omega_j` contributes `omega_j m_{j+1}`.
pub fn coefficient_table(n: usize) -> Result<Coefficients> {
    if n == 0 || n > MAX_ORDER {
        return Err(param("n", format!("{n} outside 1..={MAX_ORDER}")));
    }
    let mut level: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    level.insert(vec![1], 1);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for (w, c) in &level {
            let mut w = w.clone();
            w.resize(m, 0);
            let mut up = w.clone();
            up[0] += 1;
            *next.entry(up).or_insert(0) += c;
            for j in 0..m - 1 {
                if w[j] > 0 {
                    let mut s = w.clone();
                    s[j] -= 1;
                    s[j + 1] += 1;
                    *next.entry(s).or_insert(0) += c * w[j] as u64;
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().collect())
}

/// `n! / prod_i (omega_i! (i!)^omega_i)`, the number of set partitions of
/// `{1..n}` with `omega_i` blocks of size `i`.
pub fn bell_coefficient(omega: &[usize]) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    let n: usize = omega.iter().enumerate().map(|(i, w)| (i + 1) * w).sum();
    let den: u64 = omega
        .iter()
        .enumerate()
        .map(|(i, &w)| fact(w) * fact(i + 1).pow(w as u32))
        .product();
    fact(n) / den
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda <= 0.0) {
        return Err(param("lambda", format!("{lambda} must be <= 0")));
    }
    Ok(())
}

/// Composite Simpson over `s = ln y` in `[ln delta, ln C]`.
fn log_quad(m: &JumpMeasure, g: impl Fn(f64) -> f64) -> f64 {
    const PANELS: usize = 4096;
    let a = m.delta.ln();
    let b = m.c.ln();
    let h = (b - a) / PANELS as f64;
    let mut acc = g(a) + g(b);
    for i in 1..PANELS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `m_i = dt int |y|^{2i} exp(lambda |y|^2) mu(dy)`, the `i`-th derivative of
/// the exponent of `Phi`.
pub fn jump_moment(i: usize, lambda: f64, dt: f64, m: &JumpMeasure) -> Result<f64> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(dt * m.abs_moment(2.0 * i as f64));
    }
    let e = 2.0 * i as f64 - m.alpha;
    Ok(dt * 2.0 * m.k * log_quad(m, |s| (e * s + lambda * (2.0 * s).exp()).exp()))
}

/// `Phi(lambda) = E exp(lambda sum |y|^2) = exp(dt int (e^{lambda y^2} - 1) mu(dy))`.
pub fn mgf(lambda: f64, dt: f64, m: &JumpMeasure) -> Result<f64> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let expo = dt * 2.0 * m.k * log_quad(m, |s| (lambda * (2.0 * s).exp()).exp_m1() * (-m.alpha * s).exp());
    Ok(expo.exp())
}

/// `Phi^(n)(lambda)`; at `lambda = 0` the moment `E[(sum |y|^2)^n]`.
pub fn campbell_moment(n: usize, lambda: f64, dt: f64, m: &JumpMeasure) -> Result<f64> {
    let table = coefficient_table(n)?;
    let mi = (1..=n).map(|i| jump_moment(i, lambda, dt, m)).collect::<Result<Vec<_>>>()?;
    let sum: f64 = table
        .iter()
        .map(|(w, c)| *c as f64 * w.iter().zip(&mi).map(|(&p, x)| x.powi(p as i32)).product::<f64>())
        .sum();
    Ok(mgf(lambda, dt, m)? * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_up_to_three() {
        assert_eq!(coefficient_table(1).unwrap(), vec![(vec![1], 1)]);
        assert_eq!(coefficient_table(2).unwrap(), vec![(vec![0, 1], 1), (vec![2, 0], 1)]);
        assert_eq!(
            coefficient_table(3).unwrap(),
            vec![(vec![0, 0, 1], 1), (vec![1, 1, 0], 3), (vec![3, 0, 0], 1)]
        );
    }

    #[test]
    fn recursion_matches_partition_count() {
        for n in 1..=MAX_ORDER {
            let t = coefficient_table(n).unwrap();
            for (w, c) in &t {
                let weight: usize = w.iter().enumerate().map(|(i, x)| (i + 1) * x).sum();
                assert_eq!(weight, n);
                assert_eq!(*c, bell_coefficient(w));
            }
            // sum of all coefficients is the Bell number
            let bell = [1u64, 2, 5, 15, 52, 203][n - 1];
            assert_eq!(t.iter().map(|(_, c)| c).sum::<u64>(), bell);
        }
        assert!(coefficient_table(7).is_err());
    }

    #[test]
    fn quadrature_agrees_with_closed_form_near_zero() {
        let m = JumpMeasure::new(1.0, 1.5, 0.5).unwrap();
        for i in 1..=3 {
            let q = jump_moment(i, -1e-12, 0.1, &m).unwrap();
            let e = jump_moment(i, 0.0, 0.1, &m).unwrap();
            assert!((q - e).abs() < 1e-8 * e, "{i}: {q} {e}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
        let (dt, l, h) = (0.2, -0.5, 1e-4);
        let d = (mgf(l + h, dt, &m).unwrap() - mgf(l - h, dt, &m).unwrap()) / (2.0 * h);
        let c = campbell_moment(1, l, dt, &m).unwrap();
        assert!((d - c).abs() < 1e-6 * c.abs());
        let d2 = (campbell_moment(1, l + h, dt, &m).unwrap() - campbell_moment(1, l - h, dt, &m).unwrap()) / (2.0 * h);
        let c2 = campbell_moment(2, l, dt, &m).unwrap();
        assert!((d2 - c2).abs() < 1e-6 * c2.abs());
    }

    #[test]
    fn positive_lambda_rejected() {
        let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
        assert!(campbell_moment(2, 0.1, 1.0, &m).is_err());
    }
}
