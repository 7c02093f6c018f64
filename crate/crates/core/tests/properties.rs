use proptest::prelude::*;

use unimodal::bijection::{dm_to_overpartition, overpartition_to_dm, BijectionCase};
use unimodal::counting::{count_family, gf_coefficients, peak_bounded_count};
use unimodal::curves::{CurveFamily, LimitCurve};
use unimodal::geometry::{overpartition_profile, renormalized_vertices};
use unimodal::model::classify;
use unimodal::sampling::{sample_rng, Sampler, SamplerConfig};
use unimodal::svg::{overpartition_svg, parse_columns, sequence_svg};
use unimodal::{Family, Overpartition, UnimodalSequence};

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn unimodal_family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::UNIMODAL.to_vec())
}

/// A weakly increasing run followed by a weakly decreasing run.
fn unimodal_parts() -> impl Strategy<Value = Vec<u32>> {
    (prop::collection::vec(1u32..12, 0..8), 1u32..12, prop::collection::vec(1u32..12, 0..8)).prop_map(
        |(mut left, peak, mut right)| {
            left.retain(|&p| p <= peak);
            right.retain(|&p| p <= peak);
            left.sort_unstable();
            right.sort_unstable_by(|a, b| b.cmp(a));
            left.push(peak);
            left.extend(right);
            left
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_match_generating_functions(f in family(), n in 0usize..120) {
        let gf = gf_coefficients(f, n).unwrap();
        prop_assert_eq!(count_family(f, n).unwrap(), gf[n].clone());
    }

    #[test]
    fn peak_bound_is_monotone_and_saturates(f in unimodal_family(), n in 1usize..80, k in 1usize..80) {
        let a = peak_bounded_count(f, n, k).unwrap();
        let b = peak_bounded_count(f, n, k + 1).unwrap();
        prop_assert!(a <= b);
        prop_assert_eq!(peak_bounded_count(f, n, n).unwrap(), count_family(f, n).unwrap());
    }

    #[test]
    fn vertices_reconstruct_parts(parts in unimodal_parts()) {
        let seq = UnimodalSequence::new(parts.clone()).unwrap();
        prop_assert_eq!(renormalized_vertices(&seq).reconstruct_parts().unwrap(), parts);
    }

    #[test]
    fn classification_is_consistent(parts in unimodal_parts()) {
        let m = classify(&parts).unwrap();
        prop_assert!(m.unrestricted);
        prop_assert!(!m.strong || m.semi_strict);
        let peak = *parts.iter().max().unwrap();
        let copies = parts.iter().filter(|&&p| p == peak).count();
        if m.strong {
            prop_assert_eq!(copies, 1);
        }
    }

    #[test]
    fn samples_have_the_right_size_and_family(f in family(), n in 1usize..90, seed in any::<u64>()) {
        let s = Sampler::new(SamplerConfig::new(f, n, seed)).unwrap();
        let x = s.sample_at(0);
        prop_assert_eq!(x.size(), n as u64);
        if let Some(seq) = x.as_sequence() {
            prop_assert!(seq.membership().contains(f));
        }
        prop_assert_eq!(s.sample_at(3), s.sample_at(3));
    }

    #[test]
    fn bijection_round_trips_on_samples(n in 0usize..70, seed in any::<u64>()) {
        let s = Sampler::new(SamplerConfig::new(Family::Overpartition, n, seed)).unwrap();
        let op = s.sample_at(0).as_overpartition().unwrap().clone();
        let (seq, case) = overpartition_to_dm(&op);
        let expected = case.source_size(n as u64);
        prop_assert_eq!(seq.size(), expected);
        prop_assert!(seq.membership().semi_strict);
        prop_assert_eq!(dm_to_overpartition(&seq, case).unwrap(), op);
    }

    #[test]
    fn case_a_marks_the_peak(n in 1usize..60, seed in any::<u64>()) {
        let mut rng = sample_rng(seed, 0);
        let seq = unimodal::sampling::sample(Family::SemiStrict, n, &mut rng).unwrap();
        let op = dm_to_overpartition(&seq, BijectionCase::A).unwrap();
        let left: u64 = seq.left_parts().iter().map(|&p| p as u64).sum();
        prop_assert_eq!(op.marked_weight(), left + seq.peak_info().peak_value as u64);
    }

    #[test]
    fn diagrams_round_trip(parts in unimodal_parts()) {
        let seq = UnimodalSequence::new(parts.clone()).unwrap();
        let (back, marks) = parse_columns(&sequence_svg(&seq, None)).unwrap();
        prop_assert_eq!(back, parts);
        prop_assert!(marks.iter().all(|m| !m));
    }

    #[test]
    fn overpartition_diagrams_and_profiles(n in 1usize..40, seed in any::<u64>()) {
        let s = Sampler::new(SamplerConfig::new(Family::Overpartition, n, seed)).unwrap();
        let op = s.sample_at(0).as_overpartition().unwrap().clone();
        let (parts, marked) = parse_columns(&overpartition_svg(&op, None)).unwrap();
        prop_assert_eq!(&Overpartition::new(parts.clone(), marked).unwrap(), &op);
        prop_assert_eq!(overpartition_profile(&op).unwrap().reconstruct_parts().unwrap(), parts);
        let json = serde_json::to_string(&op).unwrap();
        prop_assert_eq!(serde_json::from_str::<Overpartition>(&json).unwrap(), op);
    }

    #[test]
    fn curve_inverse_round_trip(x in 0.001f64..6.0, which in 0usize..5) {
        let c = LimitCurve::new(CurveFamily::ALL[which]);
        for p in c.pieces() {
            let (inner, outer) = p.interval();
            let sign = if outer < inner { -1.0 } else { 1.0 };
            let u = match p.outer {
                Some(o) => o.abs() * (x / 6.0),
                None => x,
            };
            let xs = sign * u;
            if !p.contains(xs) {
                continue;
            }
            let y = c.eval(xs).unwrap();
            let back = c.inverse(p.branch, y).unwrap();
            prop_assert!((back - xs).abs() < 1e-9, "{} x={} back={}", c.name(), xs, back);
        }
    }
}
