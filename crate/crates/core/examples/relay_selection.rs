//! Shows the per-relay metrics behind both selection rules for a few
//! channel draws and which relay each rule picks.

use relaylink::channel::{draw_channel, RngState};
use relaylink::relayselect::{relay_metrics, select_best, FirstHopMetric, SelectionRule};

fn main() -> relaylink::Result<()> {
    for draw in 0..3 {
        let mut rng = RngState::new(11, draw);
        let ch = draw_channel(&mut rng, 4, 2, 1.0, 1.0)?;
        println!("draw {draw}");
        for rule in [SelectionRule::Rule1, SelectionRule::Rule2] {
            let m = relay_metrics(&ch, rule, FirstHopMetric::MeanAmplitude)?;
            let best = select_best(&m.h_metric)?;
            let h: Vec<String> = m.h_metric.iter().map(|v| format!("{v:.3}")).collect();
            println!("  {rule}: metrics [{}] -> relay {best}", h.join(", "));
        }
    }
    Ok(())
}
