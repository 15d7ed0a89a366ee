use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl SchurBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12)
    }
}

/// Both sides of the Schur test for a nonnegative kernel `a[k1][k2]`:
/// `Σ a b c` and `√(sup row sum) √(sup column sum) ‖b‖₂ ‖c‖₂`.
pub fn schur_bound(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<SchurBound> {
    let rows = a.len();
    if rows != b.len() || a.iter().any(|r| r.len() != c.len()) {
        return Err(Error::OutOfRange(
            "kernel shape does not match the sequences".into(),
        ));
    }
    let check = |v: f64, what: &str| {
        if !v.is_finite() {
            Err(Error::NonFinite(what.into()))
        } else if v < 0.0 {
            Err(Error::Negative(format!("{what} = {v}")))
        } else {
            Ok(())
        }
    };
    for row in a {
        for &v in row {
            check(v, "kernel entry")?;
        }
    }
    for &v in b.iter().chain(c) {
        check(v, "sequence entry")?;
    }
    let mut lhs = 0.0;
    for (k1, row) in a.iter().enumerate() {
        for (k2, &v) in row.iter().enumerate() {
            lhs += v * b[k1] * c[k2];
        }
    }
    let row_sup = a.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
    let col_sup = (0..c.len())
        .map(|k2| a.iter().map(|r| r[k2]).sum::<f64>())
        .fold(0.0, f64::max);
    let l2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rhs = row_sup.sqrt() * col_sup.sqrt() * l2(b) * l2(c);
    let out = SchurBound { lhs, rhs };
    debug_assert!(out.holds(), "Schur bound violated: {out:?}");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_cauchy_schwarz() {
        let a: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let b = [1.0, 2.0, 0.5, 0.0, 3.0];
        let c = [0.3, 0.1, 4.0, 2.0, 1.0];
        let r = schur_bound(&a, &b, &c).unwrap();
        let dot: f64 = b.iter().zip(&c).map(|(x, y)| x * y).sum();
        assert!((r.lhs - dot).abs() < 1e-14);
        assert!(r.holds());
    }

    #[test]
    fn geometric_kernel_random_draws() {
        let n = 64;
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| 2f64.powi(-((i as i32 - j as i32).abs())))
                    .collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let b: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            assert!(schur_bound(&a, &b, &c).unwrap().holds());
        }
    }

    #[test]
    fn zero_sequences_and_negative_entries() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(schur_bound(&a, &[0.0, 0.0], &[0.0, 0.0]).unwrap().lhs, 0.0);
        assert!(matches!(
            schur_bound(&a, &[-1.0, 0.0], &[0.0, 0.0]),
            Err(Error::Negative(_))
        ));
    }
}
