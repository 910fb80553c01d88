use proptest::prelude::*;
use relaylink::channel::{draw_channel, RngState};
use relaylink::modem::Modulation;
use relaylink::relayselect::{
    metric_rule1, metric_rule2, relay_metrics, select_best, FirstHopMetric, SelectionRule,
};
use relaylink::simulator::{SimConfig, Simulator};

proptest! {
    #[test]
    fn harmonic_mean_is_between_min_and_twice_min(a in 0.0f64..1e3, b in 0.0f64..1e3) {
        let lo = metric_rule1(a, b);
        let hm = metric_rule2(a, b);
        prop_assert!(lo <= hm * (1.0 + 1e-12) + 1e-300);
        prop_assert!(hm <= 2.0 * lo * (1.0 + 1e-12));
    }

    #[test]
    fn argmax_is_scale_invariant(m in prop::collection::vec(0.0f64..10.0, 1..12), lambda in 1e-3f64..1e3) {
        let scaled: Vec<f64> = m.iter().map(|x| x * lambda).collect();
        prop_assert_eq!(select_best(&m).unwrap(), select_best(&scaled).unwrap());
    }

    #[test]
    fn rule1_metric_bounds(seed: u64, r in 1usize..8, t in prop::sample::select(vec![1usize, 2, 4])) {
        let ch = draw_channel(&mut RngState::new(seed, 0), r, t, 1.0, 1.0).unwrap();
        for rule in [SelectionRule::Rule1, SelectionRule::Rule2] {
            let m = relay_metrics(&ch, rule, FirstHopMetric::MeanAmplitude).unwrap();
            for i in 0..r {
                let a2 = m.alpha_si[i].powi(2);
                let d2 = m.alpha_id[i].powi(2);
                prop_assert!(m.alpha_si[i] >= 0.0 && m.alpha_id[i] >= 0.0 && m.h_metric[i] >= 0.0);
                match rule {
                    SelectionRule::Rule1 => prop_assert_eq!(m.h_metric[i], a2.min(d2)),
                    _ => prop_assert!(m.h_metric[i] <= 2.0 * a2.min(d2) * (1.0 + 1e-12)),
                }
            }
        }
    }
}

#[test]
fn selection_ignores_noise_and_data() {
    // Same channel draws at wildly different SNRs pick the same relay.
    let mut cfg = SimConfig::new(2, 5, Modulation::Qpsk, vec![0.0]);
    cfg.seed = 8;
    let sim = Simulator::new(cfg.clone()).unwrap();
    for i in 0..500 {
        let low = sim.run_trial(0.5, i);
        let high = sim.run_trial(1e6, i);
        assert_eq!(low.selected_relay, high.selected_relay);
        let ch = draw_channel(&mut RngState::new(cfg.seed, i), 5, 2, 1.0, 1.0).unwrap();
        let m = relay_metrics(&ch, SelectionRule::Rule1, FirstHopMetric::MeanAmplitude).unwrap();
        assert_eq!(low.selected_relay, select_best(&m.h_metric).unwrap());
    }
}

#[test]
fn metric_switch_uses_combining_gain() {
    let ch = draw_channel(&mut RngState::new(1, 1), 3, 4, 1.0, 1.0).unwrap();
    let m = relay_metrics(&ch, SelectionRule::Rule1, FirstHopMetric::CombiningGain).unwrap();
    for (i, row) in ch.h_sr.rows().into_iter().enumerate() {
        let gain: f64 = row.iter().map(|h| h.norm_sqr()).sum();
        assert!((m.h_metric[i] - gain.min(ch.g_rd[i].norm_sqr())).abs() < 1e-12);
    }
}
