//! Prints each constellation with its Gray labels and round-trips random
//! bits through modulation and noiseless ML detection.

use relaylink::channel::RngState;
use relaylink::modem::{demodulate_ml, modulate, Modulation};

fn main() -> relaylink::Result<()> {
    let mut rng = RngState::new(1, 0);
    for kind in Modulation::ALL {
        let c = kind.constellation();
        println!("{kind} ({} bits/symbol)", c.bits_per_symbol());
        for (p, label) in c.points().iter().zip(c.labels()) {
            println!("  {label:0w$b}  {:+.4} {:+.4}j", p.re, p.im, w = c.bits_per_symbol());
        }

        let bits = rng.bits(c.bits_per_symbol() * 1000);
        let symbols = modulate(&bits, &c)?;
        let mut decoded = Vec::with_capacity(bits.len());
        for s in &symbols {
            c.push_label_bits(demodulate_ml(*s, 1.0, &c), &mut decoded);
        }
        assert_eq!(decoded, bits);
        let energy = symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / symbols.len() as f64;
        println!("  1000 symbols round-trip, mean energy {energy:.3}\n");
    }
    Ok(())
}
