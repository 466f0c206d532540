use super::young::drift_product;
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::spectral::{Field, TimeField};

/// Reference solver for band-limited data: exponential midpoint stepping
/// backward from `u_T`,
/// `u(t) = P_h u(t+h) + phi1(h) g(t + h/2)`, `g = V.grad u - f`,
/// with the midpoint value predicted by a half exponential Euler step.
pub fn classical_solve(v: &[TimeField], f: &TimeField, terminal: &Field, sg: &Semigroup) -> Result<TimeField> {
    let times = f.times();
    for c in v {
        if c.times() != times {
            return Err(Error::InconsistentGrids("drift and forcing time grids differ".into()));
        }
    }
    let psi = sg.psi_table();
    let phi1 = |h: f64| {
        move |l: f64| {
            let x = l * h;
            if x < 1e-8 {
                h * (1.0 - 0.5 * x)
            } else {
                -(-x).exp_m1() / l
            }
        }
    };
    let g_at = |k: usize, w: f64, u: &Field| -> Result<Field> {
        // drift and forcing linear in time between nodes k and k + 1 (weight w of node k + 1)
        let mix = |tf: &TimeField| -> Result<Field> {
            if w == 0.0 {
                Ok(tf.value(k).clone())
            } else {
                tf.value(k).scale(1.0 - w).axpy(w, tf.value(k + 1))
            }
        };
        let vs = v.iter().map(mix).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Field> = vs.iter().collect();
        drift_product(u, &refs)?.sub(&mix(f)?)
    };
    let m = times.len() - 1;
    let mut out = vec![Field::zeros(terminal.grid()); m + 1];
    out[m] = terminal.clone();
    for i in (0..m).rev() {
        let h = times[i + 1] - times[i];
        let u1 = &out[i + 1];
        let g1 = if i + 1 == m { g_at(m - 1, 1.0, u1)? } else { g_at(i + 1, 0.0, u1)? };
        let ph = phi1(0.5 * h);
        let mid = sg.apply(0.5 * h, u1)?.add(&g1.map_multiplier(|k| ph(psi[k]).into()))?;
        let gm = g_at(i, 0.5, &mid)?;
        let pf = phi1(h);
        out[i] = sg.apply(h, u1)?.add(&gm.map_multiplier(|k| pf(psi[k]).into()))?;
    }
    TimeField::new(times.to_vec(), out, 0.0)
}
