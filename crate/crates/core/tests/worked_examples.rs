//! Hand-checkable values on the two-task example and the worst-case
//! constructions. Values marked as derived are recomputed here with the
//! brute-force oracles rather than typed in.

mod common;

use std::collections::BTreeMap;

use itertools::Itertools;
use taskshare::analysis::{
    appendix_closed_forms, build_scenario_instance, deviation_search, dummy_move_delta, lemma1_predictions, sevb_bound,
    standard_misreport_family, BoundScenario, Role,
};
use taskshare::fixtures::example1;
use taskshare::harness::{run_experiment, ExperimentConfig, PmfStyle};
use taskshare::io::parse_instance;
use taskshare::mechanisms::Evaluator;
use taskshare::rational::ratio;
use taskshare::*;

fn p(id: u32) -> PlayerId {
    PlayerId(id)
}

fn truthful() -> (Instance, ReportProfile) {
    let inst = example1();
    let r = ReportProfile::truthful(&inst);
    (inst, r)
}

#[test]
fn example_file_matches_fixture() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/example1.json")).unwrap();
    assert_eq!(parse_instance(&text).unwrap(), example1());
}

#[test]
fn convolution_values() {
    let (inst, _) = truthful();
    let f = |i| inst.true_pmf(p(i)).unwrap();
    assert_eq!(deadline_probability(&[f(1), f(3)], 2), ratio(9, 16));
    assert_eq!(deadline_probability(&[f(2), f(4)], 2), ratio(1, 16));
    assert_eq!(degenerate_pmf(1).unwrap(), Pmf::new([(1, Rational::one())]).unwrap());
}

#[test]
fn fixed_assignment_with_a_point_mass() {
    let (inst, _) = truthful();
    let a = Assignment::new(vec![Some(p(1)), Some(p(3))]);
    let mut dists = inst.distributions().clone();
    assert_eq!(assignment_value(&inst, &a, &dists).unwrap(), ratio(9, 16));
    dists.insert(p(1), degenerate_pmf(1).unwrap());
    let want = common::joint_probability(&[&dists[&p(1)], &dists[&p(3)]], 2);
    assert_eq!(want, ratio(3, 4));
    assert_eq!(assignment_value(&inst, &a, &dists).unwrap(), want);
}

#[test]
fn grand_assignment_and_small_coalitions() {
    let (inst, r) = truthful();
    let c = |ids: &[u32]| inst.coalition(ids.iter().map(|i| p(*i))).unwrap();
    assert_eq!(optimal_assignment(&inst, &r, &inst.grand_coalition()).unwrap().slots(), &[Some(p(1)), Some(p(3))]);
    assert_eq!(coalition_value(&inst, &r, &c(&[1, 2])).unwrap(), Rational::zero());
    let single = coalition_value(&inst, &r, &c(&[2, 4])).unwrap();
    assert_eq!(single, common::value(&inst, inst.distributions(), &[p(2), p(4)]));
    assert_eq!(adaptive_upper_bound(&inst, &r, &c(&[2, 4])).unwrap(), single);
}

#[test]
fn sev_on_the_example() {
    let (inst, r) = truthful();
    let eval = Evaluator::new(&inst, &r).unwrap();
    let slow = eval.realized(MechanismKind::Sev, &"1=3,3=1".parse().unwrap()).unwrap();
    assert!(slow[p(1)].is_negative());
    for e in [1, 3] {
        for e3 in [1, 3] {
            let x = eval.realized(MechanismKind::Sev, &format!("1={e},3={e3}").parse().unwrap()).unwrap();
            assert_eq!(x[p(2)], ratio(7, 192));
            assert_eq!(x[p(4)], ratio(7, 192));
        }
    }
    assert_eq!(eval.expected(MechanismKind::Sev).unwrap()[p(1)], ratio(47, 192));
    assert_eq!(common::sev_expected(&inst, p(1)), ratio(47, 192));
}

#[test]
fn sevb_substitution_on_the_example() {
    let (inst, r) = truthful();
    let x = expected_rewards(MechanismKind::Sevb, &inst, &r).unwrap();
    let mut subst: BTreeMap<PlayerId, Pmf> = inst.distributions().clone();
    subst.insert(p(2), inst.true_pmf(p(1)).unwrap().clone());
    assert_eq!(x[p(2)], common::shapley(&inst, &subst)[&p(2)]);
    assert!(x[p(2)] > ratio(7, 192));
}

#[test]
fn vcgev_on_the_example() {
    let (inst, r) = truthful();
    let x = expected_rewards(MechanismKind::Vcgev, &inst, &r).unwrap();
    let dists = inst.distributions();
    let f1 = inst.true_pmf(p(1)).unwrap();
    let v_rest = common::value(&inst, dists, &[p(2), p(3), p(4)]);
    let by_realization: Rational = f1
        .iter()
        .map(|(e, q)| {
            let point = degenerate_pmf(e).unwrap();
            q * (common::joint_probability(&[&point, &dists[&p(3)]], 2) - &v_rest)
        })
        .sum();
    assert_eq!(by_realization, ratio(6, 16));
    assert_eq!(x[p(1)], by_realization);
    assert!(x[p(2)].is_zero());
}

#[test]
fn equal_split_against_joint_realizations() {
    let (inst, r) = truthful();
    let x = expected_rewards(MechanismKind::EqualSplit, &inst, &r).unwrap();
    let (f1, f3) = (inst.true_pmf(p(1)).unwrap(), inst.true_pmf(p(3)).unwrap());
    let oracle: Rational = f1
        .iter()
        .cartesian_product(f3.iter().collect::<Vec<_>>())
        .map(|((e1, q1), (e3, q3))| {
            let share = equal_split_rewards(&inst, e1 + e3 <= 2)[p(1)].clone();
            q1 * q3 * share
        })
        .sum();
    assert_eq!(oracle, ratio(9, 64));
    assert!(x.iter().all(|(_, v)| *v == oracle));
    assert!(equal_split_rewards(&inst, false).iter().all(|(_, v)| v.is_zero()));
}

#[test]
fn incentive_checks_on_the_example() {
    let (inst, _) = truthful();
    for pl in inst.players() {
        let family = standard_misreport_family(&inst, pl, 3, 20).unwrap();
        for kind in [MechanismKind::Sevb, MechanismKind::Vcgev] {
            let report = deviation_search(&inst, pl, kind, &family).unwrap();
            assert!(!report.profitable(), "{kind} player {pl}: {report:?}");
        }
    }
    let family = standard_misreport_family(&inst, p(2), 0, 1).unwrap();
    assert!(family.contains(inst.true_pmf(p(1)).unwrap()));
}

#[test]
fn bound_values() {
    let pv = ratio(3, 5);
    assert_eq!(sevb_bound(3, 2, &pv).unwrap(), ratio(7, 6) * &pv);
    assert!(sevb_bound(4, 2, &pv).unwrap() >= ratio(8, 6) * &pv);
    assert_eq!(dummy_move_delta(5, 2, &ratio(1, 10)), Rational::zero());
    assert_eq!(dummy_move_delta(6, 2, &ratio(1, 10)), ratio(1, 20));
}

#[test]
fn lemma_one_values() {
    let pv = ratio(9, 16);
    let s = BoundScenario::new(3, 2, 1, pv.clone(), Rational::zero()).unwrap();
    let pred = lemma1_predictions(&s).unwrap();
    assert_eq!(
        (pred.assigned.clone(), pred.others.clone(), pred.extra.clone()),
        (ratio(9, 32), ratio(9, 32), ratio(9, 96))
    );
    let best = pred.sevb_total(2);
    assert_eq!(best, ratio(7, 6) * &pv);
    for eps in [ratio(1, 100), ratio(1, 20)] {
        let s = BoundScenario::new(3, 2, 1, pv.clone(), eps).unwrap();
        assert!(lemma1_predictions(&s).unwrap().sevb_total(2) < best);
    }
}

#[test]
fn lemma_one_against_the_engine() {
    for eps in [Rational::zero(), ratio(1, 24)] {
        let s = BoundScenario::new(3, 2, 1, ratio(3, 4), eps).unwrap();
        let built = build_scenario_instance(&s, 4).unwrap();
        let pred = lemma1_predictions(&s).unwrap();
        let shap = shapley_values(&built.instance, &built.reports).unwrap();
        let sevb = expected_rewards(MechanismKind::Sevb, &built.instance, &built.reports).unwrap();
        let inst = &built.instance;
        let extra =
            built.roles.iter().find(|(_, r)| matches!(r, Role::Extra | Role::Dummy)).map(|(pl, _)| *pl).unwrap();
        let extra_task = inst.task_of(extra).unwrap();
        for pl in inst.players() {
            if pl == extra {
                assert_eq!(sevb[pl], pred.extra);
            } else if inst.task_of(pl).unwrap() == extra_task {
                assert_eq!(shap[pl], pred.assigned);
            } else {
                assert_eq!(shap[pl], pred.others);
            }
        }
        assert_eq!(sevb.total(), pred.sevb_total(2));
    }
}

#[test]
fn closed_form_shapes() {
    for m in 2..=4usize {
        let pv = ratio(2, 3);
        let one =
            appendix_closed_forms(&BoundScenario::new(m + 1, m, 1, pv.clone(), Rational::zero()).unwrap()).unwrap();
        assert_eq!(one.normal, &pv / Rational::from_integer(m));
        let two =
            appendix_closed_forms(&BoundScenario::new(m + 2, m, 2, pv.clone(), Rational::zero()).unwrap()).unwrap();
        assert_eq!(two.contested, &pv / Rational::from_integer((m + 1) * m));
        for k in 1..=3usize {
            let f =
                appendix_closed_forms(&BoundScenario::new(m + k, m, k, pv.clone(), Rational::zero()).unwrap()).unwrap();
            assert_eq!(&f.normal * Rational::from_integer(m - 1) + &f.contested * Rational::from_integer(k), pv);
        }
    }
}

#[test]
fn scenario_totals_against_the_engine() {
    let pv = ratio(1, 2);
    let one = BoundScenario::new(3, 2, 1, pv.clone(), Rational::zero()).unwrap();
    let built = build_scenario_instance(&one, 3).unwrap();
    let total = expected_rewards(MechanismKind::Sevb, &built.instance, &built.reports).unwrap().total();
    assert_eq!(total, ratio(7, 6) * &pv);

    let two = BoundScenario::new(5, 2, 2, pv, Rational::zero()).unwrap();
    let built = build_scenario_instance(&two, 3).unwrap();
    let total = expected_rewards(MechanismKind::Sevb, &built.instance, &built.reports).unwrap().total();
    assert_eq!(total, appendix_closed_forms(&two).unwrap().total);
}

#[test]
fn experiment_examples() {
    let rows = run_experiment(&ExperimentConfig::new(vec![2, 2], 3, 12, 21)).unwrap();
    for row in rows.iter().filter(|r| r.mechanism == MechanismKind::Sevb && r.assumption_ok) {
        if let Some(ratio) = &row.ratio {
            assert!(*ratio >= Rational::one(), "row {row:?}");
            assert!(*ratio <= sevb_bound(4, 2, &Rational::one()).unwrap(), "row {row:?}");
        }
    }

    let mut cfg = ExperimentConfig::new(vec![2, 2], 3, 3, 1);
    cfg.style = PmfStyle::Uniform;
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows.iter().any(|r| r.mechanism == MechanismKind::Vcgev && r.ratio == Some(Rational::zero())));

    let mut cfg = ExperimentConfig::new(vec![2, 2], 3, 4, 1);
    cfg.mechanisms = vec![MechanismKind::EqualSplit];
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.ratio.as_ref().is_none_or(|x| *x == Rational::one())));
}
