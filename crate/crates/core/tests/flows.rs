use chazy::halphen::{admissible_rules, integrate_w, triple_jet_from_w, AngleTriple, WState};
use chazy::odeint::{self, linspace};
use chazy::roots::PolySpec;
use chazy::sampling::{random_triple, random_wstate, trial_rng};
use chazy::system::hybrid_distance;
use chazy::transforms::{catalog, implicit_root_derivative, lookup, BranchMapper};
use chazy::verify::{audit, integrate_system, transform_residual, verify_trajectory, AuditOptions};
use chazy::{Parameter, SystemSpec, Triple, C64};
use num_rational::Rational64;

fn source_trajectory(spec: &SystemSpec, trial: u64) -> odeint::Trajectory<3> {
    let ic = random_triple(&mut trial_rng(99, trial));
    integrate_system(spec, &ic, -0.125, 0.125, 1e-10).unwrap()
}

#[test]
fn integrated_trajectories_verify_at_hundred_tol() {
    for kk in ["2", "3", "4", "9", "18", "3/2", "2/3", "inf"] {
        let spec = SystemSpec::new(kk.parse().unwrap());
        for trial in 0..25 {
            let traj = source_trajectory(&spec, trial);
            let r = verify_trajectory(&spec, &traj, 200, 1e-8);
            assert!(r.passed(), "k={kk} trial {trial}: {r:?}");
        }
    }
}

#[test]
fn analytic_and_finite_difference_derivatives_agree() {
    let h = 1e-5;
    for e in catalog() {
        let spec = SystemSpec::new(e.source);
        let traj = source_trajectory(&spec, e.id.number() as u64);
        let variant = e.variants.last().unwrap().name;
        for b in 0..e.branch_count() {
            let mut mapper = BranchMapper::new(e, variant, b).unwrap();
            for x in linspace(-0.12, 0.12, 25) {
                let t = Triple::from_array(traj.sample(x).unwrap());
                let (_, dimg) = mapper.map(x, &t, &spec.rhs(&t)).unwrap();
                let side = |xx: f64| {
                    let mut m = mapper.clone();
                    m.map_value(xx, &Triple::from_array(traj.sample(xx).unwrap()))
                        .unwrap()
                };
                let fd = (side(x + h) - side(x - h)) * (0.5 / h);
                let rel = hybrid_distance(&fd, &dimg);
                assert!(rel < 1e-4, "{} {variant} branch {b} x={x}: {rel:e}", e.id);
            }
        }
    }
}

#[test]
fn evolved_root_stays_on_defining_polynomial() {
    for id in ["T1", "T2", "T4", "T6", "T10", "T13", "T15", "T17", "T19"] {
        let e = lookup(id).unwrap();
        let spec = SystemSpec::new(e.source);
        let ic = random_triple(&mut trial_rng(5, 0));
        let roots = e.defining_poly(ic.q, ic.r).unwrap().unwrap().roots();
        for root0 in roots {
            let rhs = |y: &[C64; 4]| {
                let t = Triple::new(y[0], y[1], y[2]);
                let dt = spec.rhs(&t);
                let dm = implicit_root_derivative(e, &t, &dt, y[3]).unwrap();
                [dt.p, dt.q, dt.r, dm]
            };
            let traj =
                odeint::integrate(rhs, [ic.p, ic.q, ic.r, root0], -0.125, 0.125, 1e-11).unwrap();
            assert!(traj.is_completed());
            for (_, y) in traj.iter() {
                let poly = e.defining_poly(y[1], y[2]).unwrap().unwrap();
                let f = poly.eval(y[3]).norm();
                assert!(f <= 1e-8, "{id}: |F| = {f:e}");
            }
        }
    }
}

#[test]
fn aux_values_close_along_trajectories() {
    for id in ["T4", "T10", "T15", "T17"] {
        let e = lookup(id).unwrap();
        let spec = SystemSpec::new(e.source);
        let traj = source_trajectory(&spec, 3);
        for b in 0..e.branch_count() {
            let mut mapper = BranchMapper::new(e, "statement", b).unwrap();
            for x in linspace(-0.125, 0.125, 50) {
                let t = Triple::from_array(traj.sample(x).unwrap());
                mapper.map_value(x, &t).unwrap();
                let root = mapper.current_root().unwrap();
                let aux = e.aux_value(root, t.q, t.r).unwrap();
                let poly = PolySpec::new((e.aux_poly.unwrap())(t.q, t.r)).unwrap();
                let resid = poly.eval(aux).norm() / poly.eval_scale(aux);
                assert!(resid <= 1e-8, "{id} branch {b}: {resid:e}");
            }
        }
    }
}

#[test]
fn audits_are_deterministic() {
    for id in ["T5", "T13"] {
        let opts = AuditOptions::new(12, 7);
        let a = audit(id.parse().unwrap(), &opts).unwrap();
        let b = audit(id.parse().unwrap(), &opts).unwrap();
        assert_eq!(a, b);
        let ja = serde_json::to_string(&a).unwrap();
        assert_eq!(ja, serde_json::to_string(&b).unwrap());
        let other = audit(id.parse().unwrap(), &AuditOptions::new(12, 8)).unwrap();
        assert_eq!(other.variants[0].branches[0].trials, 12);
    }
}

#[test]
fn audit_report_schema() {
    let rep = audit("T3".parse().unwrap(), &AuditOptions::new(5, 1)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["entry"], "T3");
    let variants = v["variants"].as_array().unwrap();
    assert_eq!(variants.len(), 2);
    for var in variants {
        assert!(var["name"].is_string());
        assert!(var["verdict"].is_string());
        for b in var["branches"].as_array().unwrap() {
            let n = |k: &str| b[k].as_u64().unwrap();
            assert_eq!(n("trials"), n("passes") + n("failures") + n("degenerate"));
            assert!(b["worst_residual"].as_f64().unwrap() >= 0.0);
            assert!(b["index"].is_u64());
        }
    }
    assert!(v["exceptional"].is_array());
}

#[test]
fn statement_variants_are_rejected_by_residual() {
    for (id, bad) in [
        ("T3", "statement"),
        ("T16", "statement"),
        ("T17", "statement"),
        ("T18", "statement"),
        ("T19", "statement"),
    ] {
        let e = lookup(id).unwrap();
        let traj = source_trajectory(&SystemSpec::new(e.source), 1);
        for b in 0..e.branch_count() {
            let r = transform_residual(e, bad, b, &traj, 100, 1e-6).unwrap();
            assert!(
                !r.passed() && !r.is_degenerate(),
                "{id} {bad} branch {b}: {r:?}"
            );
        }
    }
}

#[test]
fn equal_w_flow_is_a_pole() {
    let angles = AngleTriple::new(
        Rational64::new(1, 2),
        Rational64::new(1, 3),
        Rational64::new(1, 7),
    )
    .unwrap();
    let traj = integrate_w(&angles, &WState::real(1.0, 1.0, 1.0), 0.0, 0.5, 1e-10).unwrap();
    let end = traj.states().last().unwrap();
    for w in end {
        assert!((w - C64::new(2.0 / 3.0, 0.0)).norm() < 1e-9);
    }
    let zero = integrate_w(&angles, &WState::default(), 0.0, 0.5, 1e-10).unwrap();
    assert!(zero
        .states()
        .iter()
        .all(|s| s.iter().all(|z| z.norm() == 0.0)));
}

#[test]
fn halphen_taylor_start() {
    let zero = AngleTriple::new(
        Rational64::from(0),
        Rational64::from(0),
        Rational64::from(0),
    )
    .unwrap();
    let h = 1e-4;
    let traj = integrate_w(&zero, &WState::real(1.0, 0.0, -1.0), 0.0, h, 1e-12).unwrap();
    let end = traj.states().last().unwrap();
    let first_order = [1.0 + h, -h, -1.0 + h];
    for (w, want) in end.iter().zip(first_order) {
        assert!((w.re - want).abs() < 1e-7);
    }
}

#[test]
fn halphen_triple_derivative_matches_flow() {
    // the analytic triple derivative agrees with differencing the triple along the w-flow
    let k = Parameter::integer(3).unwrap();
    let h = 1e-5;
    for (i, rule) in admissible_rules(&k).iter().enumerate().step_by(5) {
        let ic = random_wstate(&mut trial_rng(2, i as u64));
        let traj = integrate_w(&rule.angles, &ic, 0.0, 0.25, 1e-12).unwrap();
        for x in linspace(0.01, 0.24, 10) {
            let at =
                |xx: f64| triple_jet_from_w(rule, &WState::from_array(traj.sample(xx).unwrap()));
            let (_, dt) = at(x);
            let fd = (at(x + h).0 - at(x - h).0) * (0.5 / h);
            assert!(hybrid_distance(&fd, &dt) < 1e-4);
        }
    }
}
