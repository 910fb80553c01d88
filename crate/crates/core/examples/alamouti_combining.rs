//! Encodes QPSK symbols with each space-time code, sends them through a
//! noisy flat-fading channel and recovers them with linear combining.

use ndarray::Array1;
use relaylink::channel::RngState;
use relaylink::modem::{demodulate_ml, modulate, Modulation};
use relaylink::ostbc::{combine, encode, CodeSpec};
use relaylink::Complex;

fn main() -> relaylink::Result<()> {
    let c = Modulation::Qpsk.constellation();
    let noise = 0.05;
    for spec in [CodeSpec::SISO, CodeSpec::ALAMOUTI, CodeSpec::RATE_3_4] {
        let mut rng = RngState::new(3, spec.antennas() as u64);
        let blocks = 2000;
        let mut symbol_errors = 0;
        for _ in 0..blocks {
            let bits = rng.bits(spec.symbols() * c.bits_per_symbol());
            let symbols = modulate(&bits, &c)?;
            let x = encode(&symbols, spec)?;
            let alpha: Array1<Complex> =
                (0..spec.antennas()).map(|_| rng.complex_gaussian(1.0)).collect();
            let y = alpha.dot(&x).mapv(|v| v + rng.complex_gaussian(noise));
            let out = combine(y.view(), alpha.view(), spec)?;
            for (stat, sent) in out.statistics.iter().zip(&symbols) {
                let label = demodulate_ml(*stat, out.gain, &c);
                if c.point_for_label(label) != *sent {
                    symbol_errors += 1;
                }
            }
        }
        println!(
            "t={} rate {:.2}: {symbol_errors} symbol errors in {} symbols",
            spec.antennas(),
            spec.rate(),
            blocks * spec.symbols()
        );
    }
    Ok(())
}
