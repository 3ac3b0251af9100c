//! Random L-spline structure, recursion against direct summation, and
//! realization file round trips.

use approx::assert_abs_diff_eq;
use levyspline::operators::apply_l_discrete;
use levyspline::synthesis::{
    ensemble, impulse_bins, synthesize_direct, synthesize_spline, Generator, PoissonSpec,
};
use levyspline::{Domain, Grid, GridRealization, ImpulseField, JumpLaw, OperatorSpec};
use proptest::prelude::*;

const D: OperatorSpec = OperatorSpec::Derivative { order: 1 };
const DXDY: OperatorSpec = OperatorSpec::SeparableD { dim: 2 };

fn line(h: f64) -> Grid {
    Grid::on(&Domain::interval(0.0, 10.0).unwrap(), h).unwrap()
}

fn single(domain: Domain, x: Vec<f64>, a: f64) -> ImpulseField {
    ImpulseField::from_impulses(domain, 1.0, 0, 0, &[(x, a)]).unwrap()
}

#[test]
fn single_step() {
    let g = line(0.5);
    let f = single(Domain::interval(0.0, 10.0).unwrap(), vec![2.0], 3.0);
    let s = synthesize_spline(&f, &D, &g).unwrap();
    for (j, v) in s.samples().iter().enumerate() {
        let x = g.coord(0, j);
        assert_eq!(*v, if x >= 2.0 { 3.0 } else { 0.0 }, "x={x}");
    }
}

#[test]
fn single_exponential() {
    let op = OperatorSpec::DerivativeAlpha { alpha: 0.1 };
    let g = line(0.5);
    let noise = op.noise_domain(&g, None).unwrap();
    let f = single(noise, vec![1.0], 2.0);
    let s = synthesize_spline(&f, &op, &g).unwrap();
    assert_abs_diff_eq!(s.samples()[10], 2.0 * (-0.4f64).exp(), epsilon = 1e-12);
    assert_abs_diff_eq!(s.samples()[10], 1.3406400, epsilon = 1e-7);
}

#[test]
fn single_quadrant() {
    let g = Grid::on(&Domain::cube(2, 0.0, 3.0).unwrap(), 0.5).unwrap();
    let f = single(Domain::cube(2, 0.0, 3.0).unwrap(), vec![1.0, 1.0], 1.0);
    let s = synthesize_spline(&f, &DXDY, &g).unwrap();
    for k in 0..g.len() {
        let p = g.point(k);
        let want = if p[0] >= 1.0 && p[1] >= 1.0 { 1.0 } else { 0.0 };
        assert_eq!(s.samples()[k], want, "{p:?}");
    }
}

fn poisson(op: OperatorSpec, grid: Grid, rate: f64) -> PoissonSpec {
    PoissonSpec {
        op,
        grid,
        rate,
        jumps: JumpLaw::Gaussian { variance: 1.0 },
        margin: None,
    }
}

#[test]
fn derivative_paths_are_piecewise_constant() {
    let spec = poisson(D, line(0.01), 3.0);
    for seed in 0..50 {
        let (field, s) = spec.realize_with_field(seed, 0).unwrap();
        let expected: Vec<usize> = {
            let mut b: Vec<usize> = impulse_bins(&field, &spec.grid).into_iter().flatten().collect();
            b.sort_unstable();
            b.dedup();
            b
        };
        let got = s.jump_bins();
        assert!(got.len() <= expected.len());
        for j in &got {
            assert!(expected.iter().any(|e| e.abs_diff(*j) <= 1), "seed {seed}: jump at {j}");
        }
        let l = apply_l_discrete(&D, &spec.grid, s.samples()).unwrap();
        let nonzero = l.iter().filter(|v| **v != 0.0).count();
        assert_eq!(nonzero, got.len());
    }
}

#[test]
fn separable_discrete_operator_recovers_impulse_bins() {
    let g = Grid::on(&Domain::cube(2, 0.0, 10.0).unwrap(), 0.1).unwrap();
    let spec = poisson(DXDY, g.clone(), 0.3);
    for seed in 0..10 {
        let (field, s) = spec.realize_with_field(seed, 0).unwrap();
        let l = apply_l_discrete(&DXDY, &g, s.samples()).unwrap();
        let peak = l.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut got: Vec<usize> = (0..l.len()).filter(|&k| l[k].abs() > 1e-9 * peak).collect();
        got.sort_unstable();
        let mut want: Vec<usize> = impulse_bins(&field, &g)
            .into_iter()
            .filter(|b| b[0] + 1 < g.shape()[0] && b[1] + 1 < g.shape()[1])
            .map(|b| g.index(&b))
            .collect();
        want.sort_unstable();
        want.dedup();
        assert_eq!(got, want, "seed {seed}");
    }
}

#[test]
fn ensembles_are_reproducible_and_ordered() {
    let gen = Generator::Poisson(poisson(OperatorSpec::DerivativeAlpha { alpha: 0.5 }, line(0.1), 2.0));
    let a = ensemble(&gen, 100, 11).unwrap();
    let b = ensemble(&gen, 100, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0], gen.realize(11, 0).unwrap());
    assert_eq!(a[57], gen.realize(11, 57).unwrap());
}

// α ≥ 0.5 keeps the exponential margins within the direct-sum impulse budget
fn arb_operator() -> impl Strategy<Value = OperatorSpec> {
    prop_oneof![
        (1u32..4).prop_map(|order| OperatorSpec::Derivative { order }),
        (0.5f64..2.0).prop_map(|alpha| OperatorSpec::DerivativeAlpha { alpha }),
        Just(DXDY),
        (0.5f64..2.0).prop_map(|alpha| OperatorSpec::SeparableDAlpha { alpha }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursion_matches_direct_sum(op in arb_operator(), seed in 0u64..1000, rate in 0.2f64..3.0) {
        let dom = Domain::cube(op.dim(), 0.0, 4.0).unwrap();
        let grid = Grid::on(&dom, 0.1).unwrap();
        let spec = PoissonSpec { op, grid: grid.clone(), rate, jumps: JumpLaw::Laplace { scale: 1.0 }, margin: None };
        let field = spec.field(seed, 0).unwrap();
        let fast = synthesize_spline(&field, &op, &grid).unwrap();
        let slow = synthesize_direct(&field, &op, &grid).unwrap();
        let scale = slow.samples().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in fast.samples().iter().zip(slow.samples()) {
            prop_assert!((a - b).abs() <= 1e-9 * scale, "{} vs {}", a, b);
        }
    }

    #[test]
    fn csv_and_binary_round_trip(op in arb_operator(), seed in 0u64..1000) {
        let dom = Domain::cube(op.dim(), -1.0, 2.0).unwrap();
        let grid = Grid::on(&dom, 0.25).unwrap();
        let s = Generator::Poisson(PoissonSpec {
            op, grid, rate: 1.5, jumps: JumpLaw::Cauchy { scale: 0.3 }, margin: None,
        }).realize(seed, 2).unwrap();
        prop_assert_eq!(&GridRealization::from_csv(&s.to_csv()).unwrap(), &s);
        let (hdr, bytes) = s.to_bin();
        prop_assert_eq!(&GridRealization::from_bin(&hdr, &bytes).unwrap(), &s);
    }

    #[test]
    fn window_impulses_do_not_depend_on_margin(seed in 0u64..1000, extra in 0.0f64..30.0) {
        let op = OperatorSpec::DerivativeAlpha { alpha: 1.0 };
        let grid = line(0.5);
        let base = PoissonSpec { op, grid: grid.clone(), rate: 2.0, jumps: JumpLaw::Gaussian { variance: 1.0 }, margin: None };
        let required = op.required_margin(&grid.domain());
        let wider = PoissonSpec { margin: Some(required + extra), ..base.clone() };
        let a = base.field(seed, 0).unwrap();
        let b = wider.field(seed, 0).unwrap();
        let window = grid.domain();
        let inside = |f: &ImpulseField| f.iter().filter(|(x, _)| window.contains(x)).map(|(x, a)| (x[0], a)).collect::<Vec<_>>();
        prop_assert_eq!(inside(&a), inside(&b));
    }
}
