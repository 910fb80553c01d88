//! Compares relay counts and selection rules for 16QAM, where only the
//! simulation is available.

use relaylink::modem::Modulation;
use relaylink::relayselect::SelectionRule;
use relaylink::simulator::{SimConfig, Simulator};

fn main() -> relaylink::Result<()> {
    let grid = vec![5.0, 10.0, 15.0, 20.0];
    let setups = [
        (1, SelectionRule::Rule1),
        (2, SelectionRule::Rule1),
        (4, SelectionRule::Rule1),
        (4, SelectionRule::Rule2),
        (4, SelectionRule::Random),
    ];
    print!("{:>16}", "relays/rule");
    for snr in &grid {
        print!(" {:>10}", format!("{snr} dB"));
    }
    println!();
    for (r, rule) in setups {
        let mut cfg = SimConfig::new(2, r, Modulation::Qam16, grid.clone());
        cfg.rule = rule;
        cfg.trials = 100_000;
        cfg.max_errors = 500;
        cfg.seed = 5;
        let curve = Simulator::new(cfg)?.sweep()?;
        print!("{:>16}", format!("r={r} {rule}"));
        for p in &curve.simulated {
            print!(" {:>10.3e}", p.ber);
        }
        println!();
    }
    Ok(())
}
