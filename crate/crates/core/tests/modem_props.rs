mod common;

use proptest::prelude::*;
use relaylink::channel::{draw_awgn, RngState};
use relaylink::modem::{demodulate_ml, modulate, Modulation};
use relaylink::Complex;

#[test]
fn ml_demapping_matches_exhaustive_search() {
    let mut rng = RngState::new(2718, 0);
    for kind in Modulation::ALL {
        let c = kind.constellation();
        for _ in 0..10_000 {
            let idx = rng.index(c.order());
            let gain = 0.1 + 2.0 * (rng.index(1000) as f64 / 1000.0);
            let noise = draw_awgn(&mut rng, 0.5 * gain, 1).unwrap()[0];
            let stat = c.points()[idx] * gain + noise;
            let scaled: Vec<Complex> = c.points().iter().map(|p| p * gain).collect();
            let want = c.labels()[common::nearest_index(&scaled, stat)];
            assert_eq!(demodulate_ml(stat, gain, &c), want, "{kind}");
        }
    }
}

fn modulation() -> impl Strategy<Value = Modulation> {
    prop::sample::select(Modulation::ALL.to_vec())
}

proptest! {
    #[test]
    fn round_trip_through_bits(kind in modulation(), seed: u64, gain in 1e-3f64..1e3) {
        let c = kind.constellation();
        let bits = RngState::new(seed, 0).bits(c.bits_per_symbol() * 16);
        let symbols = modulate(&bits, &c).unwrap();
        let mut back = Vec::new();
        for s in symbols {
            c.push_label_bits(demodulate_ml(s * gain, gain, &c), &mut back);
        }
        prop_assert_eq!(back, bits);
    }

    #[test]
    fn decisions_are_scale_invariant(
        kind in modulation(),
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
        gain in 0.01f64..10.0,
        lambda in 0.01f64..100.0,
    ) {
        let c = kind.constellation();
        let stat = Complex::new(re, im);
        prop_assert_eq!(
            demodulate_ml(stat, gain, &c),
            demodulate_ml(stat * lambda, gain * lambda, &c)
        );
    }
}
