//! Draws Rayleigh channel realizations and checks their second moments.
//!
//! `cargo run --example fading_channel`

use relaylink::channel::{draw_channel, RngState};

fn main() -> relaylink::Result<()> {
    let (r, t) = (4, 2);
    let (beta1, beta2) = (1.0, 0.5);
    let draws = 100_000;

    let mut first = 0.0;
    let mut second = 0.0;
    for i in 0..draws {
        let mut rng = RngState::new(7, i);
        let ch = draw_channel(&mut rng, r, t, beta1, beta2)?;
        first += ch.h_sr.iter().map(|h| h.norm_sqr()).sum::<f64>();
        second += ch.g_rd.iter().map(|g| g.norm_sqr()).sum::<f64>();
    }
    let n = draws as f64;
    println!("E|h|^2 = {:.4} (expected {beta1})", first / (n * (r * t) as f64));
    println!("E|g|^2 = {:.4} (expected {beta2})", second / (n * r as f64));

    let mut rng = RngState::new(7, 0);
    let ch = draw_channel(&mut rng, r, t, beta1, beta2)?;
    println!("\nfirst realization, source-to-relay rows:");
    for (k, row) in ch.h_sr.rows().into_iter().enumerate() {
        let mags: Vec<String> = row.iter().map(|h| format!("{:.3}", h.norm())).collect();
        println!("  relay {k}: |h| = [{}], |g| = {:.3}", mags.join(", "), ch.g_rd[k].norm());
    }
    Ok(())
}
