//! End-to-end integration: a mixed run over a small cubic configuration,
//! exercising the public pipeline exactly as a library consumer would.

use fsmaps_core::census;
use fsmaps_core::curve::{build_curves, solve_disc_data, CurveRole, Potential};
use fsmaps_core::extract;
use fsmaps_core::rational::{rat_frac, rat_i64};
use fsmaps_core::recursion::{Engine, Form, MultiDiff};
use fsmaps_core::table::TableKind;

#[test]
fn cubic_pipeline_matches_census_on_small_instances() {
    // non-unit coupling: counts must still come out as bare integers
    let v = Potential::new(&[(3, rat_frac(1, 2))]).unwrap();
    let d = solve_disc_data(&v, 24).unwrap();
    let (ord, exc) = build_curves(&v, &d, 24).unwrap();
    for curve in [&ord, &exc] {
        let kind = match curve.role {
            CurveRole::Ordinary => TableKind::Ordinary,
            CurveRole::Exchanged => TableKind::FullySimple,
        };
        let mut engine = Engine::new(curve, 1).unwrap();
        let m11 = engine.omega(1, 1).unwrap().clone();
        let disc = MultiDiff {
            g: 0,
            n: 1,
            role: curve.role,
            form: Form::Disc,
        };
        for (md, ks) in [
            (&disc, vec![3usize]),
            (&disc, vec![5]),
            (&m11, vec![1]),
            (&m11, vec![3]),
        ] {
            let tr = extract::boundary_table(&v, curve, md, &ks).unwrap();
            let oracle = census::oracle_counts(kind, md.g, &ks, &[3], 10).unwrap();
            for ((vv, prof), cnt) in &oracle.entries {
                assert_eq!(
                    tr.get(*vv, prof),
                    cnt.clone(),
                    "{} g={} ks={ks:?} V={vv} {prof:?}",
                    kind.name(),
                    md.g
                );
            }
        }
    }
}

#[test]
fn degenerate_and_error_paths_surface_properly() {
    // free potential: exchanged curve must be rejected, ordinary disc fine
    let v = Potential::gaussian();
    let d = solve_disc_data(&v, 12).unwrap();
    assert!(build_curves(&v, &d, 12).is_err());
    // mixed couplings: per-profile grading is refused rather than mis-graded
    let v2 = Potential::new(&[(3, rat_i64(1)), (4, rat_i64(1))]).unwrap();
    let d2 = solve_disc_data(&v2, 12).unwrap();
    let (ord2, _) = build_curves(&v2, &d2, 12).unwrap();
    let disc = MultiDiff {
        g: 0,
        n: 1,
        role: CurveRole::Ordinary,
        form: Form::Disc,
    };
    assert!(extract::boundary_table(&v2, &ord2, &disc, &[3]).is_err());
    // but the raw graded series is still available
    let s = extract::boundary_series(&ord2, &disc, &[3]).unwrap();
    assert!(s.even_exponents_only());
}

#[test]
fn rest_coefficients_require_a_nonempty_request() {
    let v = Potential::new(&[(4, rat_i64(1))]).unwrap();
    let d = solve_disc_data(&v, 20).unwrap();
    let (_, exc) = build_curves(&v, &d, 20).unwrap();
    let mut engine = Engine::new(&exc, 1).unwrap();
    let m11 = engine.omega(1, 1).unwrap().clone();
    assert!(extract::rest_coefficients(&exc, &m11, 0).is_err());
    let rests = extract::rest_coefficients(&exc, &m11, 4).unwrap();
    assert_eq!(rests.len(), 4);
}
