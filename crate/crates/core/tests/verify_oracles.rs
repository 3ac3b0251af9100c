//! Operator identities, analytic characteristic functionals and
//! goodness-of-fit oracles.

use approx::assert_abs_diff_eq;
use levyspline::exponents::{contraction_holds, log_grid};
use levyspline::operators::{apply_t, AdjointInverse};
use levyspline::synthesis::{ensemble, Generator};
use levyspline::verify::{
    analytic_cf, convergence_study, gof, psd_min_eigenvalue, self_consistency, TargetLaw, TestFunctionBank,
};
use levyspline::{Domain, Grid, JumpLaw, LevyExponent, OperatorSpec};

fn line(h: f64) -> Grid {
    Grid::on(&Domain::interval(0.0, 10.0).unwrap(), h).unwrap()
}

#[test]
fn left_inverse_of_adjoint_on_bump_bank() {
    let g1 = line(1e-3);
    let g2 = Grid::on(&Domain::cube(2, 0.0, 1.0).unwrap(), 1.0 / 256.0).unwrap();
    let ops = [
        OperatorSpec::Derivative { order: 1 },
        OperatorSpec::Derivative { order: 2 },
        OperatorSpec::DerivativeAlpha { alpha: 0.1 },
        OperatorSpec::FractionalLaplacian { gamma: 1.5, dim: 1 },
        OperatorSpec::SeparableD { dim: 2 },
        OperatorSpec::SeparableDAlpha { alpha: 0.1 },
        OperatorSpec::FractionalLaplacian { gamma: 1.5, dim: 2 },
    ];
    for op in ops {
        let grid = if op.dim() == 1 { &g1 } else { &g2 };
        let bank = TestFunctionBank::bumps(grid).unwrap();
        let pair = AdjointInverse::new(op).unwrap();
        for phi in bank.functions() {
            let r = pair.identity_residual(grid, &phi.values).unwrap();
            assert!(r < 1e-3, "{} {}: {r}", op.to_compact(), phi.name);
        }
    }
}

#[test]
fn tail_integral_of_indicator() {
    let g = Grid::on(&Domain::interval(-2.0, 3.0).unwrap(), 1e-3).unwrap();
    let phi = TestFunctionBank::indicator(&g, 0.0, 1.0).unwrap();
    let t = apply_t(&OperatorSpec::Derivative { order: 1 }, &g, &phi.values).unwrap();
    for (j, v) in t.iter().enumerate() {
        let x = g.coord(0, j);
        let want = if x <= 0.0 { 1.0 } else if x >= 1.0 { 0.0 } else { 1.0 - x };
        assert!((v - want).abs() <= 2e-3, "x={x}: {v} vs {want}");
    }
    assert!(apply_t(&OperatorSpec::Derivative { order: 1 }, &g, &vec![0.0; g.len()]).unwrap().iter().all(|v| *v == 0.0));
}

#[test]
fn analytic_cf_of_indicator() {
    // Tφ is 1 on [0,2] and 3 − x on [2,3]: ∫(Tφ)² = 2 + 1/3, ∫|Tφ| = 2 + 1/2
    let g = line(1e-3);
    let phi = TestFunctionBank::indicator(&g, 2.0, 3.0).unwrap();
    let op = OperatorSpec::Derivative { order: 1 };
    let gauss = analytic_cf(&LevyExponent::gaussian(1.0).unwrap(), &op, &g, &phi.values, None).unwrap();
    assert_abs_diff_eq!(gauss.value.re, (-7.0f64 / 6.0).exp(), epsilon = 1e-3);
    let cauchy = analytic_cf(&LevyExponent::cauchy(1.0).unwrap(), &op, &g, &phi.values, None).unwrap();
    assert_abs_diff_eq!(cauchy.value.re, (-2.5f64).exp(), epsilon = 1e-3);
}

#[test]
fn cf_matrix_is_positive_semidefinite() {
    let g = line(0.01);
    let bank = TestFunctionBank::bumps(&g).unwrap();
    let f = bank.functions();
    for exponent in [LevyExponent::gaussian(1.0).unwrap(), LevyExponent::cauchy(2.0).unwrap()] {
        for op in [OperatorSpec::Derivative { order: 1 }, OperatorSpec::DerivativeAlpha { alpha: 0.3 }] {
            let min = psd_min_eigenvalue(&exponent, &op, &g, [&f[0].values, &f[1].values, &f[3].values], None).unwrap();
            assert!(min >= -1e-10, "{min}");
        }
    }
}

#[test]
fn contraction_for_acceptance_orders() {
    let grid = log_grid(1e-3, 1e3, 200);
    for f in [
        LevyExponent::gaussian(1.0).unwrap(),
        LevyExponent::laplace(1.0).unwrap(),
        LevyExponent::cauchy(2.0).unwrap(),
    ] {
        for n in [1.0, 10.0, 100.0] {
            assert!(contraction_holds(&f, n, &grid).unwrap());
        }
    }
}

#[test]
fn reference_paths_match_analytic_cf() {
    let bank = TestFunctionBank::derivative_bumps(&line(0.01)).unwrap();
    for f in [LevyExponent::gaussian(1.0).unwrap(), LevyExponent::cauchy(1.0).unwrap(), LevyExponent::laplace(1.0).unwrap()] {
        for row in self_consistency(&f, 4000, &bank, 21).unwrap() {
            assert!(row.abs_err() <= 4.0 * row.empirical.se, "{f:?} {}: {} > 4·{}", row.phi, row.abs_err(), row.empirical.se);
        }
    }
}

#[test]
fn gaussian_reference_marginal() {
    let f = LevyExponent::gaussian(1.0).unwrap();
    let gen = Generator::Reference { family: f, op: OperatorSpec::Derivative { order: 1 }, grid: line(0.01) };
    let paths = ensemble(&gen, 2000, 4).unwrap();
    let values = levyspline::verify::marginal_values(&paths, 5.0).unwrap();
    assert!(gof(&values, &TargetLaw::Normal { variance: 5.0 }).unwrap().p_value > 1e-3);
}

#[test]
fn compound_sum_oracle_has_atom_at_zero() {
    let mut rng = levyspline::RngStream::new(8, 0);
    let draws = levyspline::verify::compound_sum_draws(5.0, &JumpLaw::Gaussian { variance: 2.0 }, 20_000, &mut rng);
    let zeros = draws.iter().filter(|v| **v == 0.0).count() as f64 / draws.len() as f64;
    let p0 = (-5.0f64).exp();
    assert!((zeros - p0).abs() < 4.0 * (p0 / 20_000.0).sqrt() + 1e-4);
}

#[test]
fn study_rejects_short_or_unsorted_ladders() {
    let bank = TestFunctionBank::bumps(&line(0.1)).unwrap();
    let f = LevyExponent::gaussian(1.0).unwrap();
    let op = OperatorSpec::Derivative { order: 1 };
    assert!(convergence_study(&f, &op, &[4.0], 100, &bank, 0).is_err());
    assert!(convergence_study(&f, &op, &[1.0, 16.0, 4.0], 100, &bank, 0).is_err());
}
