use std::f64::consts::PI;

use bilinlab_core::constructions::mixed_suite;
use bilinlab_core::spaces::*;
use bilinlab_core::*;

fn direct_dft(f: &[Complex64], g: &Grid) -> Vec<Complex64> {
    // F(ξ) = h Σ f(x) e^{-ixξ}, no FFT
    (0..g.len())
        .map(|c| {
            let xi = g.frequency(c)[0];
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in f.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -g.point(i)[0] * xi);
            }
            acc * g.h()
        })
        .collect()
}

fn direct_idft(s: &[Complex64], g: &Grid) -> Vec<Complex64> {
    (0..g.len())
        .map(|i| {
            let x = g.point(i)[0];
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in s.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, x * g.frequency(c)[0]);
            }
            acc / g.length()
        })
        .collect()
}

#[test]
fn besov_of_zero_is_zero() {
    let g = Grid::new(1, 16.0, 256).unwrap();
    let part = build_dyadic(Flavor::Standard, &g).unwrap();
    let p = BesovParams::new(0.0, 2.0, 2.0).unwrap();
    assert_eq!(besov_norm(&Field::zeros(g), p, &part).unwrap(), 0.0);
}

#[test]
fn besov_single_shell_equals_lp() {
    let g = Grid::new(1, 64.0, 1024).unwrap();
    let part = build_dyadic(Flavor::Sharp, &g).unwrap();
    let l = 3usize;
    let (lo, hi) = (2f64.powf(l as f64 - 0.25), 2f64.powf(l as f64 + 0.25));
    let s = Spectrum::from_fn(g, |xi| {
        let r = xi[0].abs();
        Complex64::new(partitions::plateau(r, lo, lo + 0.5, hi - 0.5, hi), 0.0)
    });
    let f = inverse_transform(&s);
    for &p in &[1.0, 2.0, 4.0] {
        for &q in &[0.5, 1.0, f64::INFINITY] {
            let b = besov_norm(&f, BesovParams::new(0.0, p, q).unwrap(), &part).unwrap();
            let n = lp_norm(&f, p).unwrap();
            assert!((b - n).abs() <= 1e-10 * n, "p={p} q={q}: {b} vs {n}");
        }
    }
}

#[test]
fn besov_gaussian_matches_direct_summation() {
    let g = Grid::new(1, 16.0, 256).unwrap();
    let part = build_dyadic(Flavor::Standard, &g).unwrap();
    let f = Field::from_real_fn(g, |x| (-0.5 * x[0] * x[0]).exp());
    let fhat = direct_dft(f.samples(), &g);
    let mut sum = 0.0;
    for l in 0..=part.max_shell() {
        let piece: Vec<Complex64> = fhat
            .iter()
            .enumerate()
            .map(|(c, v)| v * part.psi(l, &g.frequency(c)))
            .collect();
        let block = direct_idft(&piece, &g);
        sum += g.h() * block.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    let oracle = sum.sqrt();
    let b = besov_norm(&f, BesovParams::new(0.0, 2.0, 2.0).unwrap(), &part).unwrap();
    assert!((b - oracle).abs() < 1e-8 * oracle, "{b} vs {oracle}");
}

#[test]
fn besov_aliasing_guard() {
    let g = Grid::new(1, 16.0, 256).unwrap();
    let part = build_dyadic(Flavor::Standard, &g).unwrap();
    let f = Field::from_real_fn(g, |x| (-50.0 * x[0] * x[0]).exp());
    let r = besov_norm(&f, BesovParams::new(0.0, 2.0, 2.0).unwrap(), &part);
    assert!(matches!(r, Err(Error::Aliasing { .. })));
}

#[test]
fn amalgam_single_cube_and_diagonal() {
    let g = Grid::new(1, 16.0, 512).unwrap();
    let one = Field::from_real_fn(g, |x| {
        if x[0].abs() < 0.45 {
            (1.0 - 4.0 * x[0] * x[0]).max(0.0)
        } else {
            0.0
        }
    });
    let a = amalgam_norm(&one, 2.0, 1.0).unwrap();
    let n = lp_norm(&one, 2.0).unwrap();
    assert!((a - n).abs() < 1e-10 * n);
    for f in mixed_suite(&g, 6, 3) {
        for &p in &[1.0, 2.0, 3.0] {
            let a = amalgam_norm(&f, p, p).unwrap();
            let n = lp_norm(&f, p).unwrap();
            assert!((a - n).abs() < 1e-10 * n);
        }
    }
    assert!(matches!(
        amalgam_norm(&one, 2.0, 1.0 - 1e-3),
        Err(Error::InvalidExponent(_))
    ));
    let odd = Grid::new(1, 10.5, 256).unwrap();
    assert!(matches!(
        amalgam_norm(&Field::zeros(odd), 2.0, 1.0),
        Err(Error::InvalidGrid(_))
    ));
}

#[test]
fn lebesgue_below_amalgam() {
    for (n, l, m) in [(1usize, 32.0, 512usize), (2, 8.0, 64)] {
        let g = Grid::new(n, l, m).unwrap();
        for f in mixed_suite(&g, 50, 7 + n as u64) {
            let a = amalgam_norm(&f, 2.0, 1.0).unwrap();
            for &r in &[1.0, 1.5, 2.0] {
                assert!(lp_norm(&f, r).unwrap() <= a * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn wiener_modulation_ratio_is_fixed() {
    let g = Grid::self_dual(1, 64).unwrap();
    let w = default_window(&g);
    let wf = inverse_transform(&as_spectrum(&w));
    let mut ratios = Vec::new();
    for f in mixed_suite(&g, 20, 21) {
        let lhs = wiener_norm(&f, 1.0, 2.0, &w).unwrap();
        let finv = inverse_transform(&as_spectrum(&f));
        let rhs = modulation_norm(&finv, 2.0, 1.0, &wf).unwrap();
        ratios.push(lhs / rhs);
    }
    let r0 = ratios[0];
    assert!((r0 - 2.0 * PI).abs() < 1e-6 * 2.0 * PI, "{r0}");
    for r in ratios {
        assert!((r - r0).abs() < 1e-6 * r0);
    }
}

#[test]
fn discrete_wiener_equivalence_band() {
    let g = Grid::new(1, 32.0, 256).unwrap();
    let w = default_window(&g);
    let unif = build_uniform(1).unwrap();
    let ratios: Vec<f64> = mixed_suite(&g, 50, 5)
        .iter()
        .map(|f| {
            wiener_norm(f, 1.0, 2.0, &w).unwrap() / uniform_wiener_norm(f, 1.0, 2.0, &unif).unwrap()
        })
        .collect();
    let rep = RatioReport::from_ratios(ratios).unwrap();
    println!(
        "W12 / discrete: min {:.4} max {:.4} spread {:.4}",
        rep.min,
        rep.max,
        rep.spread()
    );
    assert!(rep.spread() <= 4.0);
}

#[test]
fn amalgam_wiener_spread_is_bounded() {
    let g = Grid::new(1, 32.0, 256).unwrap();
    let rep = amalgam_wiener_equivalence_report(&mixed_suite(&g, 50, 9)).unwrap();
    println!(
        "(L2,l1) / W12: min {:.4} max {:.4} spread {:.4}",
        rep.min,
        rep.max,
        rep.spread()
    );
    assert!(rep.spread() <= 8.0);
}
