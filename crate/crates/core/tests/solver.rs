use gridgauge_core::solver::{
    defect_correction_solve, exact_solution, jacobian_low_order, l1, residual_second_order,
    solution_error_l1, Discretization, Forcing, ProblemSpec, SolveStatus,
};
use gridgauge_core::{generate, GenSpec, Grid, GridKind, StencilMode, Weighting};

fn quad(n: usize) -> Grid {
    generate(&GenSpec::new(GridKind::Quad, n, n)).unwrap()
}

fn solve(g: &Grid, spec: &ProblemSpec) -> gridgauge_core::SolveReport {
    defect_correction_solve(g, spec, Weighting::Unweighted, StencilMode::Face).unwrap()
}

fn injected_residual(g: &Grid, theta: f64) -> f64 {
    let u: Vec<f64> = g.cells().iter().map(|c| exact_solution(c.centroid())).collect();
    l1(&residual_second_order(g, &ProblemSpec::new(theta), Weighting::Unweighted, StencilMode::Face, &u))
}

#[test]
fn injected_exact_solution_residual_is_second_order() {
    for theta in [0.0, 30.0] {
        let ratio = injected_residual(&quad(17), theta) / injected_residual(&quad(33), theta);
        assert!((3.2..=4.8).contains(&ratio), "θ={theta}: {ratio}");
    }
}

#[test]
fn interior_fluxes_cancel() {
    let g = generate(&GenSpec {
        seed: 9,
        ..GenSpec::new(GridKind::TriIrregular, 12, 12)
    })
    .unwrap();
    let spec = ProblemSpec {
        forcing: Forcing::Homogeneous,
        ..ProblemSpec::new(25.0)
    };
    let u: Vec<f64> = (0..g.ncells()).map(|i| ((i * 37 % 11) as f64).sin()).collect();
    let d = Discretization::new(&g, &spec, Weighting::Unweighted, StencilMode::Face);
    let total: f64 = d.residual(&u).iter().sum();
    // Boundary faces only: zero data, so every boundary flux is the outflow part.
    let grads = d.gradients_with(&gridgauge_core::Serial, &u);
    let a = spec.velocity();
    let boundary: f64 = g
        .faces()
        .iter()
        .filter(|f| f.is_boundary())
        .map(|f| {
            let ul = u[f.left] + grads[f.left].dot(f.midpoint - g.cells()[f.left].centroid());
            gridgauge_core::solver::upwind_flux(a.dot(f.normal), ul, 0.0) * f.length
        })
        .sum();
    assert!((total - boundary).abs() < 1e-12, "{total} vs {boundary}");
}

#[test]
fn jacobian_structure() {
    let g = generate(&GenSpec {
        seed: 2,
        ..GenSpec::new(GridKind::TriIrregular, 10, 10)
    })
    .unwrap();
    let j = jacobian_low_order(&g, ProblemSpec::new(40.0).velocity());
    for c in 0..g.ncells() {
        let mut pattern: Vec<usize> = g
            .cell_faces(c)
            .iter()
            .filter_map(|&f| g.faces()[f].other(c))
            .chain([c])
            .collect();
        pattern.sort_unstable();
        let cols: Vec<usize> = j.row(c).map(|(k, _)| k).collect();
        assert_eq!(cols, pattern);
        let off: f64 = j.row(c).filter(|&(k, _)| k != c).map(|(_, v)| v.abs()).sum();
        assert!(j.diagonal(c) >= 0.0);
        assert!(j.diagonal(c) >= off - 1e-14);
        assert!(j.row(c).all(|(k, v)| k == c || v <= 0.0));
    }
}

#[test]
fn jacobian_is_derivative_of_first_order_residual() {
    let g = generate(&GenSpec {
        seed: 4,
        ..GenSpec::new(GridKind::TriIrregular, 6, 6)
    })
    .unwrap();
    let spec = ProblemSpec {
        first_order: true,
        ..ProblemSpec::new(60.0)
    };
    let d = Discretization::new(&g, &spec, Weighting::Unweighted, StencilMode::Face);
    let j = d.jacobian();
    let base = vec![0.1; g.ncells()];
    let r0 = d.residual(&base);
    for col in [0, 7, 19] {
        let mut u = base.clone();
        u[col] += 1.0;
        let r1 = d.residual(&u);
        for row in 0..g.ncells() {
            let fd = r1[row] - r0[row];
            let exact = j.get(row, col).unwrap_or(0.0);
            assert!((fd - exact).abs() < 1e-12, "({row},{col}) {fd} {exact}");
        }
    }
}

#[test]
fn first_order_mode_converges_in_two_iterations() {
    for kind in [GridKind::Quad, GridKind::TriRegular] {
        let g = generate(&GenSpec::new(kind, 33, 33)).unwrap();
        let rep = solve(
            &g,
            &ProblemSpec {
                first_order: true,
                ..ProblemSpec::new(30.0)
            },
        );
        assert!(rep.converged());
        assert!(rep.iterations_to_tol.unwrap() <= 2, "{kind}: {:?}", rep.iterations_to_tol);
    }
}

#[test]
fn quad_33_baseline() {
    let rep = solve(&quad(33), &ProblemSpec::new(30.0));
    assert_eq!(rep.status, SolveStatus::Converged);
    assert_eq!(rep.iterations_to_tol, Some(33));
    assert_eq!(rep.history[0].residual_norm, 1.0);
    assert_eq!(rep.history.len(), 34);
    // Monotone after the first iteration.
    assert!(rep.history[1..].windows(2).all(|w| w[1].residual_norm < w[0].residual_norm));
    assert_eq!(rep, solve(&quad(33), &ProblemSpec::new(30.0)));
}

#[test]
fn converged_solution_is_second_order_accurate() {
    let spec = ProblemSpec::new(30.0);
    let errs: Vec<f64> = [9, 17, 33]
        .iter()
        .map(|&n| {
            let g = quad(n);
            solution_error_l1(&g, &solve(&g, &spec).solution)
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.8, "{errs:?}");
    }
}

#[test]
fn quad_converges_before_irregular_triangles() {
    let spec = ProblemSpec {
        tolerance: 1e-8,
        ..ProblemSpec::new(30.0)
    };
    let q = solve(&quad(33), &spec);
    let irr = solve(
        &generate(&GenSpec {
            seed: 42,
            ..GenSpec::new(GridKind::TriIrregular, 33, 33)
        })
        .unwrap(),
        &spec,
    );
    let its = |r: &gridgauge_core::SolveReport| r.iterations_to_tol.unwrap_or(usize::MAX);
    assert!(q.converged());
    assert!(its(&q) < its(&irr));
}

#[test]
fn iteration_cap_is_reported() {
    let g = generate(&GenSpec {
        seed: 42,
        ..GenSpec::new(GridKind::TriIrregular, 17, 17)
    })
    .unwrap();
    let rep = solve(
        &g,
        &ProblemSpec {
            max_outer: 1,
            ..ProblemSpec::new(30.0)
        },
    );
    assert_eq!(rep.status, SolveStatus::MaxIterations);
    assert_eq!(rep.iterations_to_tol, None);
    assert_eq!(rep.history.len(), 2);
    assert!(rep.work_units > 1.0);
}

#[test]
fn work_units_are_cumulative() {
    let rep = solve(&quad(9), &ProblemSpec::new(0.0));
    assert_eq!(rep.history[0].work_units, 1.0);
    assert!(rep.history.windows(2).all(|w| w[1].work_units >= w[0].work_units + 2.0));
    assert_eq!(rep.work_units, rep.history.last().unwrap().work_units);
}
