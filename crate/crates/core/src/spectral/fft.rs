use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Unnormalized in-place DFT over a row-major cube of side `n` in dimension `d`.
/// `inverse` uses `exp(+2 pi i ...)`, which turns coefficients into samples.
pub(crate) fn fft_nd(data: &mut [Complex64], d: usize, n: usize, inverse: bool) {
    let p = plan(n, inverse);
    p.process(data);
    if d == 2 {
        let mut col = vec![Complex64::default(); n];
        for c in 0..n {
            for r in 0..n {
                col[r] = data[r * n + c];
            }
            p.process(&mut col);
            for r in 0..n {
                data[r * n + c] = col[r];
            }
        }
    }
}
