use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::constants::smallest_constants;
use crate::error::{Error, Result};
use crate::field::{inverse_transform, Field, Spectrum};
use crate::grid::{norm, Grid, Point};
use crate::operator::{SymbolClass, SymbolSpec};
use crate::partitions::{cutoff, plateau};
use num_complex::Complex64;

pub type Reference = Arc<dyn Fn(&Point) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    PLower,
    PUpper,
    Rademacher,
    Prop13,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [FamilyTag::PLower, FamilyTag::PUpper, FamilyTag::Rademacher, FamilyTag::Prop13];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::PLower => "p_lower",
            FamilyTag::PUpper => "p_upper",
            FamilyTag::Rademacher => "rademacher",
            FamilyTag::Prop13 => "prop13",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParam {
    J(u32),
    N(u32),
    Rademacher { seed: u64, epsilon: f64 },
}

/// A generated member of one of the explicit families.
#[derive(Clone)]
pub struct FamilyInstance {
    pub tag: FamilyTag,
    pub param: FamilyParam,
    pub symbol: Option<SymbolSpec>,
    pub fields: Vec<Field>,
    /// Closed-form value of the operator output (or of the field itself for `prop13`).
    pub reference: Option<Reference>,
}

impl fmt::Debug for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyInstance")
            .field("tag", &self.tag)
            .field("param", &self.param)
            .field("symbol", &self.symbol)
            .field("fields", &self.fields.len())
            .field("reference", &self.reference.is_some())
            .finish()
    }
}

/// Relative spectral mass allowed in the outer 10% of the lattice.
pub const TAIL_GUARD: f64 = 1e-12;

pub(crate) fn guarded(s: Spectrum) -> Result<Field> {
    let t = s.tail_mass();
    if t > TAIL_GUARD {
        return Err(Error::Aliasing { mass: t });
    }
    Ok(inverse_transform(&s))
}

/// `(2π)^{-1} ∫ m(|ξ|) e^{iyξ} dξ` for an even profile supported in `lo ≤ |ξ| ≤ hi`,
/// by the trapezoid rule. The profile must be flat to all orders at both ends
/// (vanishing there, or even about `lo = 0`).
pub fn even_inverse_1d(m: &(dyn Fn(f64) -> f64 + Sync), lo: f64, hi: f64, y: f64) -> f64 {
    let q = 4000 + (2.0 * (hi - lo) * y.abs()).ceil() as usize;
    let d = (hi - lo) / q as f64;
    let mut acc = 0.5 * (m(lo) * (y * lo).cos() + m(hi) * (y * hi).cos());
    for i in 1..q {
        let t = lo + i as f64 * d;
        acc += m(t) * (y * t).cos();
    }
    acc * d / PI
}


/// `σ = 1` on `|(ξ1, ξ2)| ≤ 1`; `f̂_{i,j}(ξ) = 2^{jn/2} φ(2^j ξ)` with `supp φ ⊂ {|ξ| ≤ 1}`.
pub fn family_p_lower(j: u32, grid: &Grid) -> Result<FamilyInstance> {
    let max_j = grid.length().log2().floor() - 2.0;
    if j < 1 || j as f64 > max_j {
        return Err(Error::OutOfRange(format!("j = {j} outside 1..={max_j}")));
    }
    let n = grid.dim() as i32;
    let phi = |r: f64| cutoff(r, 0.0, 1.0);
    let s = 2f64.powi(j as i32);
    let amp = s.powf(n as f64 / 2.0);
    let spec = Spectrum::from_fn(*grid, |xi| Complex64::new(amp * phi(s * norm(xi)), 0.0));
    let f = guarded(spec)?;
    let sigma = SymbolSpec::real_multiplier("p_lower", SymbolClass::Joint(-(n as f64) / 2.0), |a, b| {
        let r = (norm(a).powi(2) + norm(b).powi(2)).sqrt();
        cutoff(r, 1.0, 2.0)
    });
    let reference: Option<Reference> = if n == 1 {
        let inv = 1.0 / s;
        let period = grid.length();
        // sampling f̂ on the lattice periodizes f; keep the nearest images
        Some(Arc::new(move |x: &Point| {
            let v: f64 = (-3..=3).map(|m| even_inverse_1d(&phi, 0.0, 1.0, inv * (x[0] + m as f64 * period))).sum();
            Complex64::new(inv * v * v, 0.0)
        }))
    } else {
        None
    };
    Ok(FamilyInstance { tag: FamilyTag::PLower, param: FamilyParam::J(j), symbol: Some(sigma), fields: vec![f.clone(), f], reference })
}

/// Profiles of the upper family, radial in `|ξ|`.
#[derive(Debug, Clone, Copy)]
pub struct UpperProfiles {
    j0: i32,
}

impl UpperProfiles {
    pub fn new(n: usize) -> Self {
        Self { j0: smallest_constants(n).j0 as i32 }
    }

    /// `supp ψ ⊂ {2^{-1/8} ≤ r ≤ 2^{1/8}}`, equal to 1 at `r = 1`.
    pub fn psi(&self, r: f64) -> f64 {
        let e = 2f64.powf(0.125);
        plateau(r, 1.0 / e, 1.0, 1.0, e)
    }

    /// `ψ̃ = 1` on `supp ψ`, `supp ψ̃ ⊂ {2^{-1/4} ≤ r ≤ 2^{1/4}}`.
    pub fn psi_tilde(&self, r: f64) -> f64 {
        plateau(r, 2f64.powf(-0.25), 2f64.powf(-0.125), 2f64.powf(0.125), 2f64.powf(0.25))
    }

    /// `supp φ ⊂ {r ≤ 2^{-j0}}`.
    pub fn phi(&self, r: f64) -> f64 {
        cutoff(r, 0.0, 2f64.powi(-self.j0))
    }

    /// `φ̃ = 1` on `supp φ`, `supp φ̃ ⊂ {r ≤ 2^{-j0+1}}`.
    pub fn phi_tilde(&self, r: f64) -> f64 {
        cutoff(r, 2f64.powi(-self.j0), 2f64.powi(1 - self.j0))
    }
}

/// `σ = Σ_k 2^{-kn/2} ψ̃(2^{-k} ξ1) φ̃(2^{-k} ξ2)`, `f̂_1 = 2^{-jn/2} ψ(2^{-j}·)`,
/// `f̂_2 = 2^{-jn/2} φ(2^{-j}·)`.
pub fn family_p_upper(j: u32, grid: &Grid) -> Result<FamilyInstance> {
    let n = grid.dim();
    let pr = UpperProfiles::new(n);
    let top = 2f64.powf(j as f64 + 0.125);
    if j < 1 || top >= 0.9 * grid.nyquist() {
        return Err(Error::OutOfRange(format!("j = {j}: shell 2^j not resolved below Nyquist")));
    }
    let s = 2f64.powi(j as i32);
    let amp = s.powf(-(n as f64) / 2.0);
    let f1 = guarded(Spectrum::from_fn(*grid, |xi| Complex64::new(amp * pr.psi(norm(xi) / s), 0.0)))?;
    let f2 = guarded(Spectrum::from_fn(*grid, |xi| Complex64::new(amp * pr.phi(norm(xi) / s), 0.0)))?;
    let half_n = n as f64 / 2.0;
    let sigma = SymbolSpec::real_multiplier("p_upper", SymbolClass::Joint(-half_n), move |a, b| {
        let r1 = norm(a);
        if r1 <= 0.0 {
            return 0.0;
        }
        // the ψ̃ supports are disjoint, so only the nearest shell contributes
        let k = r1.log2().round();
        if k < 1.0 {
            return 0.0;
        }
        let t = 2f64.powf(-k);
        2f64.powf(-k * half_n) * pr.psi_tilde(t * r1) * pr.phi_tilde(t * norm(b))
    });
    let reference: Option<Reference> = if n == 1 {
        let (lo, hi) = (2f64.powf(-0.125), 2f64.powf(0.125));
        let phi_hi = 2f64.powi(-(pr.j0));
        let psi = move |r: f64| pr.psi(r);
        let phi = move |r: f64| pr.phi(r);
        Some(Arc::new(move |x: &Point| {
            let y = s * x[0];
            let v = even_inverse_1d(&psi, lo, hi, y) * even_inverse_1d(&phi, 0.0, phi_hi, y);
            Complex64::new(s.sqrt() * v, 0.0)
        }))
    } else {
        None
    };
    Ok(FamilyInstance { tag: FamilyTag::PUpper, param: FamilyParam::J(j), symbol: Some(sigma), fields: vec![f1, f2], reference })
}
