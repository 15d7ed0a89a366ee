use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Field;
use crate::grid::{norm, Grid};
use num_complex::Complex64;

/// Seeded mix of translated bumps, chirps and modulated wave packets, all
/// well localized on the torus. Entries cycle through the three kinds.
pub fn mixed_suite(grid: &Grid, count: usize, seed: u64) -> Vec<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = (grid.length() / 4.0).min(6.0);
    let top = (grid.nyquist() / 4.0).min(6.0);
    (0..count)
        .map(|i| {
            let n = grid.dim();
            let mut centre = [0.0; 2];
            let mut freq = [0.0; 2];
            for k in 0..n {
                centre[k] = rng.gen_range(-reach..reach);
                freq[k] = rng.gen_range(-top..top);
            }
            let width = rng.gen_range(0.5..2.0);
            let amp = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..6.3));
            let kind = i % 3;
            let chirp = rng.gen_range(-0.5..0.5);
            Field::from_fn(*grid, move |x| {
                let d = [x[0] - centre[0], x[1] - centre[1]];
                let r = norm(&d) / width;
                let env = (-0.5 * r * r).exp();
                let phase = match kind {
                    0 => 0.0,
                    1 => chirp * r * r,
                    _ => freq[0] * x[0] + freq[1] * x[1],
                };
                amp * env * Complex64::from_polar(1.0, phase)
            })
        })
        .collect()
}
