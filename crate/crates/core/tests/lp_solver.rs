use mublp::gamma::{canonicalize, ExponentVector};
use mublp::lp::model::Objective;
use mublp::lp::{
    build_lp, solve, verify_solution, Arithmetic, CrossVariant, Family, LpProblem, PivotRule,
    Relation, RowKind, Sense, SolverOptions, Status,
};

fn ev(v: &[i32]) -> ExponentVector {
    ExponentVector::new(v.to_vec())
}

fn one_column(d: usize, lower: i64, upper: Option<i64>) -> (LpProblem, usize) {
    let mut p = LpProblem::empty(d, 2);
    let c = p.add_variable(
        Family::G,
        canonicalize(&ExponentVector::zero(d)),
        lower,
        upper,
    );
    (p, c)
}

fn exact_bland() -> SolverOptions {
    SolverOptions {
        pivot_rule: PivotRule::Bland,
        ..SolverOptions::exact()
    }
}

fn float_bland() -> SolverOptions {
    SolverOptions {
        pivot_rule: PivotRule::Bland,
        ..SolverOptions::default()
    }
}

#[test]
fn trivial_equality() {
    let (mut p, x) = one_column(3, 0, None);
    p.add_row(RowKind::Other, &[(x, 1)], Relation::Eq, 81)
        .unwrap();
    p.objective = Some(Objective {
        sense: Sense::Min,
        column: x,
    });
    for opts in [SolverOptions::default(), SolverOptions::exact()] {
        let s = solve(&p, &opts).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.objective, Some(81.0));
    }
    assert_eq!(
        solve(&p, &SolverOptions::exact())
            .unwrap()
            .objective_exact
            .as_deref(),
        Some("81")
    );
}

#[test]
fn contradictory_rows_are_infeasible() {
    let (mut p, g0) = one_column(2, 0, Some(8));
    p.add_row(RowKind::Boundary, &[(g0, 1)], Relation::Eq, 8)
        .unwrap();
    p.add_row(RowKind::Boundary, &[(g0, 1)], Relation::Eq, 0)
        .unwrap();
    p.objective = Some(Objective {
        sense: Sense::Min,
        column: g0,
    });
    for opts in [SolverOptions::default(), SolverOptions::exact()] {
        assert_eq!(solve(&p, &opts).unwrap().status, Status::Infeasible);
    }
}

#[test]
fn unbounded_direction_is_reported() {
    let (mut p, x) = one_column(2, 0, None);
    p.add_row(RowKind::Other, &[(x, 1)], Relation::Ge, 1)
        .unwrap();
    p.objective = Some(Objective {
        sense: Sense::Max,
        column: x,
    });
    assert_eq!(
        solve(&p, &SolverOptions::default()).unwrap().status,
        Status::Unbounded
    );
}

#[test]
fn bound_flip_without_pivot() {
    // max x with 0 ≤ x ≤ 5 and a slack row that never binds
    let (mut p, x) = one_column(2, 0, Some(5));
    p.add_row(RowKind::Other, &[(x, 1)], Relation::Le, 100)
        .unwrap();
    p.objective = Some(Objective {
        sense: Sense::Max,
        column: x,
    });
    let s = solve(&p, &SolverOptions::exact()).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert_eq!(s.objective_exact.as_deref(), Some("5"));
}

#[test]
fn iteration_cap_is_a_status() {
    let p = build_lp(2, 4, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Min, Family::G, &ev(&[2, -2]))
        .unwrap();
    let s = solve(
        &p,
        &SolverOptions {
            iteration_cap: 1,
            ..SolverOptions::default()
        },
    )
    .unwrap();
    assert_eq!(s.status, Status::IterationCap);
}

#[test]
fn zero_caps_are_rejected() {
    let p = build_lp(2, 2, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Min, Family::G, &ev(&[1, -1]))
        .unwrap();
    assert!(solve(
        &p,
        &SolverOptions {
            iteration_cap: 0,
            ..SolverOptions::default()
        }
    )
    .is_err());
    let no_objective = build_lp(2, 2, false, CrossVariant::Minus).unwrap();
    assert!(solve(&no_objective, &SolverOptions::default()).is_err());
}

#[test]
fn d2_structural_minimum_is_exact() {
    let p = build_lp(2, 4, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Min, Family::G, &ev(&[2, -2]))
        .unwrap();
    let exact = solve(&p, &exact_bland()).unwrap();
    assert_eq!(exact.status, Status::Optimal);
    assert_eq!(exact.objective_exact.as_deref(), Some("8"));
    assert_eq!(exact.arithmetic, Arithmetic::ExactRational);

    let float = solve(&p, &float_bland()).unwrap();
    assert_eq!(float.status, Status::Optimal);
    assert!((float.objective.unwrap() - 8.0).abs() < 1e-9);
    assert_eq!(
        float.basis, exact.basis,
        "float and exact runs end in different bases"
    );

    let dantzig = solve(&p, &SolverOptions::default()).unwrap();
    assert!((dantzig.objective.unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn optimal_solutions_check_out() {
    let p = build_lp(2, 4, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Min, Family::G, &ev(&[2, -2]))
        .unwrap();

    let float = solve(&p, &SolverOptions::default()).unwrap();
    let c = verify_solution(&p, &float, 1e-9).unwrap();
    assert!(c.pass, "{c:?}");
    assert!(c.max_row_violation < 1e-9);
    let gap = (c.objective - c.dual_bound.unwrap()).abs();
    assert!(gap <= 1e-7, "duality gap {gap}");

    let exact = solve(&p, &SolverOptions::exact()).unwrap();
    let c = verify_solution(&p, &exact, 1e-9).unwrap();
    assert_eq!(c.exact_feasible, Some(true));
    assert_eq!(c.max_row_violation, 0.0);
    assert_eq!(c.dual_bound, Some(8.0));
}

#[test]
fn perturbed_solution_names_rows() {
    let p = build_lp(2, 4, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Min, Family::G, &ev(&[2, -2]))
        .unwrap();
    let mut s = solve(&p, &SolverOptions::default()).unwrap();
    let g0 = p.column(Family::G, &ev(&[0, 0])).unwrap();
    *s.values.get_mut(&p.variables[g0].name).unwrap() += 0.5;
    let c = verify_solution(&p, &s, 1e-9).unwrap();
    assert!(!c.pass);
    assert!(c.violated_rows.iter().any(|v| v.row.starts_with("R4_")));
    assert!(c.violated_rows.iter().all(|v| v.residual > 1e-9));
}

#[test]
fn d3_structural_minimum() {
    let p = build_lp(3, 6, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Min, Family::G, &ev(&[3, -3, 0]))
        .unwrap();
    let s = solve(&p, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!(
        (s.objective.unwrap() - 27.0).abs() < 1e-6,
        "{:?}",
        s.objective
    );
    let c = verify_solution(&p, &s, 1e-9).unwrap();
    assert!(c.pass);
    assert!((c.objective - c.dual_bound.unwrap()).abs() <= 1e-7);
}

#[test]
fn solution_file_round_trip() {
    let p = build_lp(2, 4, false, CrossVariant::Minus).unwrap();
    let p = p
        .set_objective(Sense::Max, Family::F, &ev(&[1, -1]))
        .unwrap();
    let s = solve(&p, &SolverOptions::exact()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.json");
    s.save(&path).unwrap();
    let back = mublp::lp::LpSolution::load(&path).unwrap();
    assert_eq!(back, s);
    assert!(verify_solution(&p, &back, 1e-9).unwrap().pass);
}

/// Pins every column to the value of the explicit complete MUB set; phase
/// one must then find the pinned point feasible.
fn pinned_to_witness(d: usize, l: u32) -> LpProblem {
    let set = mublp::mub::complete_mub_set(d).unwrap();
    let mut p = build_lp(d, l, false, CrossVariant::Minus)
        .unwrap()
        .set_objective(Sense::Min, Family::G, &ExponentVector::structural(d))
        .unwrap();
    let x = mublp::lp::evaluate_point(&p, &set).unwrap();
    for (v, xi) in p.variables.iter_mut().zip(x) {
        let k = xi.round();
        assert!((xi - k).abs() < 1e-9, "{} = {xi} is not integral", v.name);
        v.lower = k as i64;
        v.upper = Some(k as i64);
    }
    p
}

#[test]
fn witness_passes_phase_one() {
    for (d, l) in [(2, 4), (3, 6)] {
        let p = pinned_to_witness(d, l);
        let s = solve(&p, &SolverOptions::exact()).unwrap();
        assert_eq!(s.status, Status::Optimal, "d={d}");
        assert_eq!(
            s.objective_exact.as_deref(),
            Some(&*(d * d * d).to_string())
        );

        let mut off = p.clone();
        let g0 = off.column(Family::G, &ExponentVector::zero(d)).unwrap();
        off.variables[g0].lower -= 1;
        off.variables[g0].upper = Some(off.variables[g0].lower);
        assert_eq!(
            solve(&off, &SolverOptions::exact()).unwrap().status,
            Status::Infeasible,
            "d={d}"
        );
    }
}
