//! Randomized invariants.

use chargemagic::analytics::{mean_sp2, variance_sp2};
use chargemagic::harness::{
    format_float, ExperimentConfig, ExperimentKind, OutputFormat, SummaryStats,
};
use chargemagic::magic::{participation_entropy, stabilizer_entropy, stabilizer_purity_fast};
use chargemagic::sampler::{constrained_haar_state_direct, constrained_haar_state_direct_in_frame, haar_state};
use chargemagic::sectors::{binomial_u128, enumerate_sector, sector_dimension, Direction, Frame};
use num_traits::Signed;
use proptest::prelude::*;

fn close(a: &SummaryStats, b: &SummaryStats) -> bool {
    let tol = |x: f64, y: f64| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()));
    a.count == b.count && tol(a.mean, b.mean) && tol(a.variance(), b.variance()) && a.min == b.min && a.max == b.max
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summary_merge_is_associative(
        v in prop::collection::vec(-1e3f64..1e3, 3..200),
        cut1 in 0usize..200,
        cut2 in 0usize..200,
    ) {
        let (i, j) = (cut1.min(cut2) % v.len(), cut1.max(cut2) % v.len());
        let (i, j) = (i.min(j), i.max(j));
        let a = SummaryStats::from_slice(&v[..i]);
        let b = SummaryStats::from_slice(&v[i..j]);
        let c = SummaryStats::from_slice(&v[j..]);
        let whole = SummaryStats::from_slice(&v);
        prop_assert!(close(&a.merge(&b).merge(&c), &whole));
        prop_assert!(close(&a.merge(&b.merge(&c)), &whole));
    }

    #[test]
    fn sector_rank_round_trips(l in 1usize..=14, k in 0usize..=14) {
        let k = k.min(l);
        let q = l as i64 - 2 * k as i64;
        let map = enumerate_sector(l, q);
        prop_assert_eq!(map.len() as u128, binomial_u128(l, k));
        prop_assert_eq!(map.len() as u128, sector_dimension(l, q));
        for (i, &x) in map.members().iter().enumerate() {
            prop_assert_eq!(x.count_ones() as usize, k);
            prop_assert_eq!(map.position(x), Some(i));
        }
    }

    #[test]
    fn exact_moments_are_charge_symmetric(l in 1usize..=12, k in 0usize..=12) {
        let q = l as i64 - 2 * k.min(l) as i64;
        prop_assert_eq!(mean_sp2(l, q).unwrap(), mean_sp2(l, -q).unwrap());
        prop_assert_eq!(variance_sp2(l, q).unwrap(), variance_sp2(l, -q).unwrap());
        prop_assert!(!variance_sp2(l, q).unwrap().is_negative());
    }

    #[test]
    fn purity_bounds_and_sre_relation(l in 1usize..=8, seed in any::<u64>()) {
        let s = haar_state(l, seed).unwrap();
        let xi = stabilizer_purity_fast(&s, 2.0).unwrap();
        prop_assert!(xi <= 1.0 + 1e-12 && xi >= 0.5f64.powi(l as i32) - 1e-12);
        let m2 = stabilizer_entropy(&s, 2.0).unwrap();
        let s2 = participation_entropy(&s, 2.0).unwrap();
        prop_assert!(m2 <= 2.0 * s2 + 1e-10);
    }

    #[test]
    fn clifford_frames_preserve_purity(l in 1usize..=8, k in 0usize..=8, seed in any::<u64>()) {
        let q = l as i64 - 2 * k.min(l) as i64;
        let z = constrained_haar_state_direct(l, q, seed).unwrap();
        let xz = stabilizer_purity_fast(&z, 2.0).unwrap();
        for f in [Frame::X, Frame::Y] {
            let s = constrained_haar_state_direct_in_frame(l, q, &f, seed).unwrap();
            prop_assert!((stabilizer_purity_fast(&s, 2.0).unwrap() - xz).abs() < 1e-12);
        }
    }

    #[test]
    fn config_round_trips(
        l in 1usize..20,
        qs in prop::collection::vec(-20i64..20, 0..4),
        thetas in prop::collection::vec(-10.0f64..10.0, 0..4),
        window in prop::option::of(0.0f64..2.0),
        seed in any::<u64>(),
        theta in 0.0f64..std::f64::consts::PI,
    ) {
        let c = ExperimentConfig {
            n_qubits: l,
            charges: qs,
            thetas,
            window,
            seed,
            frame: Frame::Tilted(Direction::from_theta(theta)),
            format: OutputFormat::Json,
            ..ExperimentConfig::new(ExperimentKind::PeCheck)
        };
        prop_assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn record_floats_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }
}
