use std::f64::consts::PI;

use bilinlab_core::constructions::mixed_suite;
use bilinlab_core::operator::*;
use bilinlab_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_multiplier(rng: &mut ChaCha8Rng) -> SymbolSpec {
    let coef: Vec<(f64, f64, f64, f64)> =
        (0..4).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..6.0))).collect();
    let width = rng.gen_range(4.0..20.0);
    SymbolSpec::multiplier("random", SymbolClass::Joint(0.0), move |a, b| {
        let env = (-(a[0] * a[0] + a[1] * a[1] + b[0] * b[0] + b[1] * b[1]) / width).exp();
        coef.iter()
            .map(|&(c, u, v, ph)| Complex64::from_polar(c * env, u * (a[0] - a[1]) + v * (b[0] + 0.5 * b[1]) + ph))
            .sum()
    })
}

fn random_tensor(rng: &mut ChaCha8Rng) -> SymbolSpec {
    let terms = (0..2)
        .map(|_| {
            let (p, s, w) = (rng.gen_range(0.0..6.0), rng.gen_range(1.0..3.0), rng.gen_range(-1.0..1.0));
            RankTerm::new(
                XFactor::func(move |x| Complex64::new(1.0 + 0.5 * (x[0] + p).cos(), w * (x[1] - p).sin())),
                move |xi| Complex64::new(1.0 / (1.0 + (xi[0] * xi[0] + xi[1] * xi[1]) / s), 0.0),
                move |xi| Complex64::from_polar(1.0, w * xi[0]),
            )
        })
        .collect();
    SymbolSpec::tensor("random-rank", SymbolClass::Split(0.0, 0.0), terms)
}

fn rel(a: &Field, b: &Field) -> f64 {
    a.rel_max_diff(b).unwrap()
}

#[test]
fn unit_symbol_is_pointwise_product() {
    for (n, m) in [(1usize, 256usize), (2, 32)] {
        let g = Grid::new(n, 16.0, m).unwrap();
        let fs = mixed_suite(&g, 2, 1);
        let prod = fs[0].mul(&fs[1]).unwrap();
        let one = SymbolSpec::one();
        assert!(rel(&apply_fast(&one, &fs[0], &fs[1]).unwrap(), &prod) < 1e-10);
        assert!(rel(&apply_direct(&one, &fs[0], &fs[1]).unwrap(), &prod) < 1e-10);
    }
}

#[test]
fn fast_matches_direct_1d() {
    let g = Grid::new(1, 16.0, 256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20u64 {
        let sigma = if case % 4 == 3 { random_tensor(&mut rng) } else { random_multiplier(&mut rng) };
        let fs = mixed_suite(&g, 2, 100 + case);
        let d = apply_direct(&sigma, &fs[0], &fs[1]).unwrap();
        let f = apply_fast(&sigma, &fs[0], &fs[1]).unwrap();
        assert!(rel(&f, &d) < 1e-10, "case {case}: {}", rel(&f, &d));
    }
}

#[test]
fn fast_matches_direct_2d() {
    let g = Grid::new(2, 8.0, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..5u64 {
        let sigma = if case == 4 { random_tensor(&mut rng) } else { random_multiplier(&mut rng) };
        let fs = mixed_suite(&g, 2, 300 + case);
        let d = apply_direct(&sigma, &fs[0], &fs[1]).unwrap();
        let f = apply_fast(&sigma, &fs[0], &fs[1]).unwrap();
        assert!(rel(&f, &d) < 1e-10, "case {case}: {}", rel(&f, &d));
    }
}

#[test]
fn direct_path_refuses_large_grids() {
    let g = Grid::new(1, 16.0, 1024).unwrap();
    let f = Field::zeros(g);
    assert!(matches!(apply_direct(&SymbolSpec::one(), &f, &f), Err(Error::DirectTooLarge(1024))));
}

#[test]
fn bilinear_in_first_slot() {
    let g = Grid::new(1, 16.0, 256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sigma = random_multiplier(&mut rng);
    let fs = mixed_suite(&g, 3, 8);
    let alpha = Complex64::new(0.3, -1.2);
    let lhs = apply_fast(&sigma, &fs[0].scale(alpha).add(&fs[1]).unwrap(), &fs[2]).unwrap();
    let rhs = apply_fast(&sigma, &fs[0], &fs[2]).unwrap().scale(alpha).add(&apply_fast(&sigma, &fs[1], &fs[2]).unwrap()).unwrap();
    assert!(rel(&lhs, &rhs) < 1e-10);
}

#[test]
fn refinement_stability() {
    // band-limited inputs built spectrally, so halving h only pads the spectrum
    let sigma = SymbolSpec::real_multiplier("g", SymbolClass::Joint(0.0), |a, b| (-(a[0] * a[0] + b[0] * b[0]) / 8.0).exp());
    let make = |m: usize| {
        let g = Grid::new(1, 32.0, m).unwrap();
        let bump = |c: f64| {
            Spectrum::from_fn(g, move |xi| Complex64::new(partitions::cutoff((xi[0] - c).abs(), 0.0, 2.0), 0.0))
        };
        apply_fast(&sigma, &inverse_transform(&bump(1.0)), &inverse_transform(&bump(-0.5))).unwrap()
    };
    let (coarse, fine) = (make(256), make(512));
    let mut worst: f64 = 0.0;
    for (i, v) in coarse.samples().iter().enumerate() {
        worst = worst.max((v - fine.samples()[2 * i]).norm());
    }
    assert!(worst < 1e-6 * coarse.max_abs());
}

#[test]
fn peak_operator_of_constant() {
    let g = Grid::new(1, 64.0, 1024).unwrap();
    let one = Field::from_real_fn(g, |_| 1.0);
    for r in [1.0, 4.0] {
        let s = peak_operator(&one, r, 2.0).unwrap();
        for v in s.samples() {
            assert!((v.re - 2.0).abs() < 1e-6, "{}", v.re);
        }
    }
    assert_eq!(peak_operator(&Field::zeros(g), 4.0, 2.0).unwrap().max_abs(), 0.0);
    assert!(peak_operator(&one, 4.0, 1.0).is_err());
}

#[test]
fn peak_operator_matches_direct_sum() {
    for (n, l, m) in [(1usize, 32.0, 256usize), (2, 8.0, 16)] {
        let g = Grid::new(n, l, m).unwrap();
        for f in mixed_suite(&g, 3, 40) {
            let fast = peak_operator(&f, 2.0, n as f64 + 1.0).unwrap();
            let direct = peak_operator_direct(&f, 2.0, n as f64 + 1.0);
            assert!(rel(&fast, &direct) < 1e-10);
            assert!(fast.samples().iter().all(|v| v.re > 0.0));
        }
    }
}

#[test]
fn seminorm_trivial_and_gaussian() {
    let g = Grid::new(1, 16.0, 256).unwrap();
    let win = SampleWindow::for_grid(&g, 6.0);
    for order in 0..=3 {
        assert!((seminorm_estimate(&SymbolSpec::one(), order, &win).unwrap() - 1.0).abs() < 1e-12);
    }
    let gauss = SymbolSpec::real_multiplier("gauss", SymbolClass::Joint(0.0), |a, b| (-a[0] * a[0] - b[0] * b[0]).exp());
    // max |d^k e^{-t^2}| for k = 0, 1, 2 is 1, √2 e^{-1/2}, 2
    let maxima = [1.0, 2f64.sqrt() * (-0.5f64).exp(), 2.0];
    for order in 0..=2 {
        let exact = (0..=order).flat_map(|a| (0..=order).map(move |b| maxima[a] * maxima[b])).fold(0.0, f64::max);
        let est = seminorm_estimate(&gauss, order, &win).unwrap();
        assert!((est - exact).abs() < 1e-3, "N={order}: {est} vs {exact}");
    }
    let mut prev = 0.0;
    for order in 0..=4 {
        let v = seminorm_estimate(&gauss, order, &win).unwrap();
        assert!(v >= prev);
        prev = v;
    }
    let singular = SymbolSpec::real_multiplier("s", SymbolClass::Joint(0.0), |a, _| 1.0 / a[0]);
    assert!(seminorm_estimate(&singular, 1, &win).is_err());
}

#[test]
fn seminorm_of_x_dependent_rank_one() {
    let g = Grid::new(1, 2.0 * PI, 256).unwrap();
    let sigma = SymbolSpec::tensor(
        "cos",
        SymbolClass::Split(0.0, 0.0),
        vec![RankTerm::new(XFactor::func(|x| Complex64::new(x[0].cos(), 0.0)), |_| Complex64::new(1.0, 0.0), |_| {
            Complex64::new(1.0, 0.0)
        })],
    );
    let v = seminorm_estimate(&sigma, 4, &SampleWindow::for_grid(&g, 2.0)).unwrap();
    assert!((v - 1.0).abs() < 1e-3, "{v}");
}

#[test]
fn decomposition_of_x_independent_symbol() {
    let g = Grid::new(1, 32.0, 256).unwrap();
    let part = build_dyadic(Flavor::Standard, &g).unwrap();
    let unif = build_uniform(1).unwrap();
    let sigma = SymbolSpec::real_multiplier("m", SymbolClass::Joint(0.0), |a, b| 1.0 / (1.0 + a[0] * a[0] + 0.5 * b[0] * b[0]));
    let x = [0.3, 0.0];
    let points: Vec<(Point, Point)> =
        [(0.2, -0.7), (1.9, 3.1), (-5.3, 0.6), (5.7, -6.4)].iter().map(|&(a, b)| ([a, 0.0], [b, 0.0])).collect();
    let nus = nu_window(&g);
    for (a, b) in &points {
        let mut acc = Complex64::new(0.0, 0.0);
        for k1 in 0..=part.max_shell() {
            for k2 in 0..=part.max_shell() {
                for nu1 in nus.iter().filter(|nu| (nu[0] as f64 - a[0]).abs() <= 1.0) {
                    for nu2 in nus.iter().filter(|nu| (nu[0] as f64 - b[0]).abs() <= 1.0) {
                        let p = decompose(&sigma, &part, &unif, &g, 0, [k1, k2], [*nu1, *nu2]).unwrap();
                        let v = p.piece.eval(&x, a, b);
                        if v.norm() > 0.0 {
                            assert!(p.in_declared_support(&part, a, b));
                        }
                        acc += v;
                        let higher = decompose(&sigma, &part, &unif, &g, 2, [k1, k2], [*nu1, *nu2]).unwrap();
                        assert_eq!(higher.piece.eval(&x, a, b).norm(), 0.0);
                    }
                }
            }
        }
        let exact = sigma.eval(&x, a, b);
        assert!((acc - exact).norm() < 1e-10, "{acc} vs {exact}");
    }
}

#[test]
fn decomposition_of_x_dependent_symbol() {
    let g = Grid::new(1, 2.0 * PI * 4.0, 256).unwrap();
    let part = build_dyadic(Flavor::Standard, &g).unwrap();
    let unif = build_uniform(1).unwrap();
    let sigma = SymbolSpec::tensor(
        "rank1",
        SymbolClass::Split(0.0, 0.0),
        vec![RankTerm::new(
            // Fourier coefficients 0.2^{|k|}, resolved well inside the partition
            XFactor::func(|x| Complex64::new(1.0 / (1.04 - 0.4 * x[0].cos()), 0.0)),
            |xi| Complex64::new((-0.1 * xi[0] * xi[0]).exp(), 0.0),
            |xi| Complex64::new(1.0 / (1.0 + xi[0] * xi[0]), 0.0),
        )],
    );
    let nus = nu_window(&g);
    let (a, b) = ([1.3, 0.0], [-2.2, 0.0]);
    for &i in &[0usize, 37, 128, 201] {
        let x = g.point(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=part.max_shell() {
            for k1 in 0..=part.max_shell() {
                for k2 in 0..=part.max_shell() {
                    for nu1 in nus.iter().filter(|nu| (nu[0] as f64 - a[0]).abs() <= 1.0) {
                        for nu2 in nus.iter().filter(|nu| (nu[0] as f64 - b[0]).abs() <= 1.0) {
                            let p = decompose(&sigma, &part, &unif, &g, j, [k1, k2], [*nu1, *nu2]).unwrap();
                            acc += p.piece.eval(&x, &a, &b);
                        }
                    }
                }
            }
        }
        let exact = sigma.eval(&x, &a, &b);
        assert!((acc - exact).norm() < 1e-10 * exact.norm(), "{acc} vs {exact}");
    }
}
