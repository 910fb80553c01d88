//! Parses an experiment file, runs it through the same path as the CLI and
//! prints the resulting comparison table.

use relaylink::cli::{run, table, Overrides};

const CONFIG: &str = r#"
[experiment.r1]
t = 2
r = 1
modulation = "QPSK"
snr_db = [0, 10, 20]
trials = 50000
seed = 9

[experiment.r4]
t = 2
r = 4
modulation = "QPSK"
snr_db = [0, 10, 20]
trials = 50000
seed = 9
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("relaylink-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("demo.toml");
    std::fs::write(&path, CONFIG)?;

    let overrides = Overrides {
        out: Some(dir.join("out")),
        ..Overrides::default()
    };
    let report = run(&path, &overrides).map_err(|e| e.to_string())?;
    println!("manifest: {}", report.manifest.display());
    println!("{}", table(&report.csv_files).map_err(|e| e.to_string())?);
    Ok(())
}
