use proptest::prelude::*;

use borelreg::borel::{is_borel_type_star, is_strongly_stable};
use borelreg::generate::{generate, generate_borel_parts, instance_rng, GenParams, InstanceKind};
use borelreg::verify::{run_verify, VerifyConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instances_satisfy_their_kind(seed in any::<u64>(), stream in 0u64..1000) {
        let params = GenParams::default();
        for kind in InstanceKind::ALL {
            let ideal = generate(kind, &params, &mut instance_rng(seed, stream)).unwrap();
            prop_assert!(ideal.is_proper_nonzero());
            prop_assert!(params.n_range.contains(&ideal.nvars()));
            match kind {
                InstanceKind::BorelClosure => prop_assert!(is_strongly_stable(&ideal).unwrap()),
                InstanceKind::Artinian => prop_assert!(ideal.is_artinian()),
                InstanceKind::RandomMonomial => {}
                _ => prop_assert!(is_borel_type_star(&ideal).unwrap().verdict),
            }
            let again = generate(kind, &params, &mut instance_rng(seed, stream)).unwrap();
            prop_assert_eq!(&ideal, &again);
        }
    }

    #[test]
    fn parts_share_a_ring(seed in any::<u64>()) {
        let parts = generate_borel_parts(&GenParams::default(), &mut instance_rng(seed, 0)).unwrap();
        prop_assert!((2..=3).contains(&parts.len()));
        for p in &parts {
            prop_assert_eq!(p.nvars(), parts[0].nvars());
            prop_assert!(is_borel_type_star(p).unwrap().verdict);
        }
    }
}

#[test]
fn streams_are_independent_of_each_other() {
    let params = GenParams::default();
    let a: Vec<_> = (0..20)
        .map(|k| {
            generate(
                InstanceKind::RandomMonomial,
                &params,
                &mut instance_rng(5, k),
            )
            .unwrap()
        })
        .collect();
    let b: Vec<_> = (0..20)
        .rev()
        .map(|k| {
            generate(
                InstanceKind::RandomMonomial,
                &params,
                &mut instance_rng(5, k),
            )
            .unwrap()
        })
        .collect();
    assert!(a.iter().eq(b.iter().rev()));
    assert!(a.windows(2).any(|w| w[0] != w[1]));
}

#[test]
fn identical_configs_give_identical_reports() {
    let config = VerifyConfig {
        count: 40,
        ..VerifyConfig::default()
    };
    let a = serde_json::to_vec(&run_verify(&config).unwrap()).unwrap();
    let b = serde_json::to_vec(&run_verify(&config).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = VerifyConfig { seed: 1, ..config };
    let c = serde_json::to_vec(&run_verify(&other).unwrap()).unwrap();
    assert_ne!(a, c);
}
