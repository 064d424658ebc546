mod common;

use common::{coin_sequences, instances, Coins};
use deg2_core::algorithms::{greedy, half_half, water_level, AlgorithmId};
use deg2_core::certificate::{
    advance_pair, advance_single, certify_fractional_run, certify_integral_run, eta, Level,
};
use deg2_core::lowerbound::{estimate_ratio, InstanceDistribution};
use deg2_core::numeric::{int, ratio, to_f64};
use deg2_core::oracle::{exact_expected_half_half, half_half_distribution, max_matching};
use deg2_core::{Arrival, RandomSource, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_is_maximal_and_half_competitive(inst in instances(12, 20)) {
        let m = greedy(&inst);
        m.validate(&inst).unwrap();
        prop_assert!(m.is_online_maximal(&inst));
        prop_assert!(2 * m.size() >= max_matching(&inst).0);
    }

    #[test]
    fn half_half_is_maximal(inst in instances(12, 20), seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed).stream(0);
        let m = half_half(&inst, &mut rng);
        m.validate(&inst).unwrap();
        prop_assert!(m.is_online_maximal(&inst));
    }

    #[test]
    fn water_level_invariants(inst in instances(12, 24)) {
        let f = water_level(&inst);
        for x in f.vertex_loads() {
            prop_assert!(*x >= Rational::zero() && *x <= Rational::one());
        }
        for t in 0..inst.arrival_count() {
            prop_assert!(f.online_load(t) <= Rational::one());
        }
        let opt = max_matching(&inst).0;
        prop_assert!(f.value() * int(4) >= int(3 * opt as i64));
        prop_assert!(f.value() <= int(opt as i64));
    }

    #[test]
    fn fractional_certificate_holds(inst in instances(16, 30)) {
        let r = certify_fractional_run(&inst).unwrap();
        prop_assert_eq!(r.summary.opt, max_matching(&inst).0);
    }

    #[test]
    fn integral_certificate_holds(inst in instances(10, 16)) {
        certify_integral_run(&inst).unwrap();
    }

    #[test]
    fn half_half_beats_eta_in_expectation(inst in instances(10, 14)) {
        let e = exact_expected_half_half(&inst).unwrap();
        let opt = max_matching(&inst).0 as i64;
        // eta is below its upper enclosure, so comparing against that is stronger
        prop_assert!(e >= eta(6).value * int(opt));
    }

    #[test]
    fn coin_enumeration_matches_exact_expectation(inst in instances(6, 8)) {
        let t = inst.arrival_count();
        let total: usize = coin_sequences(t)
            .map(|c| {
                let mut coins = Coins(c.into_iter());
                half_half(&inst, &mut coins).size()
            })
            .sum();
        let brute = Rational::new(total.into(), (1u64 << t).into());
        prop_assert_eq!(brute, exact_expected_half_half(&inst).unwrap());
    }

    #[test]
    fn pair_survival_is_bounded_by_levels(inst in instances(10, 14)) {
        let mut levels = vec![Level::ZERO; inst.offline_count()];
        let mut before = Vec::new();
        half_half_distribution(&inst, Default::default(), |t, d| {
            if let Arrival::Two(a, b) = inst.arrivals()[t] {
                before.push((a, b, d.both_unmatched(a, b)));
            }
        })
        .unwrap();
        let mut pairs = before.into_iter();
        for a in inst.arrivals() {
            match *a {
                Arrival::Two(x, y) => {
                    let (_, _, both) = pairs.next().unwrap();
                    let (lx, ly) = (levels[x as usize], levels[y as usize]);
                    prop_assert!(both <= lx.residual() * ly.residual());
                    let adv = advance_pair(lx, ly);
                    levels[x as usize] = adv.level;
                    levels[y as usize] = adv.level;
                }
                Arrival::One(x) => levels[x as usize] = advance_single(levels[x as usize]).level,
            }
        }
    }
}

#[test]
fn monte_carlo_agrees_with_exact_expectation() {
    for seed in [3u64, 11, 29] {
        let inst = deg2_core::instance::gen_random(8, 10, 0.7, seed).unwrap();
        let opt = max_matching(&inst).0;
        let exact = to_f64(&exact_expected_half_half(&inst).unwrap()) / opt as f64;
        let est = estimate_ratio(
            AlgorithmId::HalfHalf,
            &InstanceDistribution::Fixed(inst),
            20_000,
            seed,
        )
        .unwrap();
        assert!(
            (est.mean - exact).abs() <= est.half_width + 1e-12,
            "seed {seed}: {} vs {exact} (half width {})",
            est.mean,
            est.half_width
        );
    }
}

#[test]
fn greedy_is_deterministic_in_the_estimator() {
    let inst =
        deg2_core::instance::parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
    let est = estimate_ratio(
        AlgorithmId::Greedy,
        &InstanceDistribution::Fixed(inst),
        500,
        1,
    )
    .unwrap();
    assert_eq!(est.mean, 0.5);
    assert_eq!(est.half_width, 0.0);
}

#[test]
fn two_vertex_values() {
    let inst =
        deg2_core::instance::parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
    assert_eq!(water_level(&inst).value(), ratio(3, 2));
    assert_eq!(exact_expected_half_half(&inst).unwrap(), ratio(3, 2));
}
