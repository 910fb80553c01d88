//! Exact single-hop and end-to-end BER curves for Gray M-PSK, computed by
//! numerical integration over the phase density and the SNR law.

use relaylink::analytic::{ber_mpsk_hop, e2e_ber, HopStatistics};
use relaylink::modem::Modulation;
use relaylink::ostbc::CodeSpec;
use relaylink::simulator::db_to_linear;

fn main() -> relaylink::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "snr", "mod", "t=1", "t=2", "t=4");
    for kind in [Modulation::Bpsk, Modulation::Qpsk, Modulation::Psk8] {
        let c = kind.constellation();
        for snr in (0..=30).step_by(10) {
            let rho = db_to_linear(snr as f64);
            let mut row = format!("{snr:>6} {kind:>10}");
            for t in [1, 2, 4] {
                let spec = CodeSpec::for_antennas(t)?;
                let first = ber_mpsk_hop(&HopStatistics::first_hop(spec, c.order(), 1.0, rho), &c)?;
                let second = ber_mpsk_hop(&HopStatistics::second_hop(c.order(), 1.0, rho), &c)?;
                row.push_str(&format!(" {:>10.3e}", e2e_ber(first, second)));
            }
            println!("{row}");
        }
    }
    Ok(())
}
