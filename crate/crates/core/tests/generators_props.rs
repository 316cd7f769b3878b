use leakbound_core::generators::crowds::crowds_channel;
use leakbound_core::generators::random::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_channels_hit_their_noise(seed in any::<u64>(), n_in in 1usize..=8, n_out in 2usize..=8, frac in 0.0f64..=1.0) {
        let noise = frac * max_noise(n_out);
        let c = random_channel(n_in, n_out, noise, seed).unwrap();
        prop_assert!((measured_noise(&c) - noise).abs() < 1e-9);
        prop_assert_eq!(c, random_channel(n_in, n_out, noise, seed).unwrap());
    }

    #[test]
    fn crowds_channels_are_stochastic(seed in any::<u64>(), n in 3usize..=8, pf in 0.0f64..0.95) {
        let t = random_crowd(n, 1, 0.6, pf, seed).unwrap();
        match crowds_channel(&t) {
            Ok(c) => {
                prop_assert_eq!(c.n_inputs(), n - 1);
                for r in c.rows() {
                    prop_assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                    prop_assert!(r.iter().all(|&v| v >= 0.0));
                }
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
