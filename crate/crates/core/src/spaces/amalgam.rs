use std::collections::BTreeMap;

use super::lq_sum;
use crate::error::{Error, Result};
use crate::field::Field;

/// `(L^p, ℓ^q)` norm over the unit cubes `ν + [-1/2, 1/2)^n` tiling the torus.
pub fn amalgam_norm(f: &Field, p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::InvalidExponent(format!(
            "amalgam exponents p={p}, q={q} must be >= 1"
        )));
    }
    let g = *f.grid();
    let l = g.length();
    if (l - l.round()).abs() > 1e-9 || l.round() < 1.0 {
        return Err(Error::InvalidGrid(format!(
            "amalgam norm needs an integer period, got {l}"
        )));
    }
    let cells = l.round() as i64;
    let cube = |t: f64| -> i64 {
        let nu = (t + 0.5).floor() as i64;
        // wrap onto the torus so the cube straddling ±L/2 is counted once
        let half = cells / 2;
        (nu + half).rem_euclid(cells) - half
    };
    let mut local: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    for (i, z) in f.samples().iter().enumerate() {
        let x = g.point(i);
        let key = (cube(x[0]), if g.dim() == 2 { cube(x[1]) } else { 0 });
        let v = if p.is_infinite() {
            z.norm()
        } else {
            z.norm().powf(p)
        };
        let e = local.entry(key).or_insert(0.0);
        if p.is_infinite() {
            *e = e.max(v);
        } else {
            *e += v;
        }
    }
    let cell = g.cell();
    let per_cube = local.values().map(|&s| {
        if p.is_infinite() {
            s
        } else {
            (cell * s).powf(1.0 / p)
        }
    });
    lq_sum(per_cube, q)
}
