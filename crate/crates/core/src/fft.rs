//! Thin wrapper around `rustfft` for in-place 1-D and 2-D transforms on
//! row-major buffers. Plans are cached process-wide.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanKey = (usize, bool);

fn plans() -> &'static Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>> {
    static PLANS: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    PLANS.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut map = plans().lock().expect("fft plan cache poisoned");
    map.entry((len, forward))
        .or_insert_with(|| {
            let dir = if forward {
                FftDirection::Forward
            } else {
                FftDirection::Inverse
            };
            FftPlanner::new().plan_fft(len, dir)
        })
        .clone()
}

/// Unnormalized DFT `X_d = sum_i x_i e^{∓2πi d i / m}` along every axis.
pub fn dft_inplace(buf: &mut [Complex64], m: usize, dim: usize, forward: bool) {
    let p = plan(m, forward);
    if dim == 1 {
        p.process(buf);
        return;
    }
    buf.par_chunks_mut(m).for_each(|row| p.process(row));
    let mut cols = transpose(buf, m);
    cols.par_chunks_mut(m).for_each(|col| p.process(col));
    let back = transpose(&cols, m);
    buf.copy_from_slice(&back);
}

fn transpose(buf: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); buf.len()];
    for i in 0..m {
        for j in 0..m {
            out[j * m + i] = buf[i * m + j];
        }
    }
    out
}
