//! Runs a built-in figure preset, prints the SNR needed by each curve at a
//! target outage and writes the CSV/JSON pair.
//!
//!     cargo run --example figure_sweep -- fig3 1e-4 /tmp/linklab

use linklab::analytics::Method;
use linklab::harness::{crossings, run_sweep, write_outputs, Overrides, Preset, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset = args.next().and_then(|p| Preset::parse(&p)).unwrap_or(Preset::Fig3);
    let target: f64 = args.next().map(|t| t.parse()).transpose()?.unwrap_or(1e-4);
    let out_dir = args.next().unwrap_or_else(|| std::env::temp_dir().join("linklab").display().to_string());

    let method = if preset == Preset::Fig5 { Method::Quadrature } else { Method::Closed };
    let cfg = RunConfig { methods: vec![method], ..preset.config() }.resolve(&Overrides::default())?;
    let record = run_sweep(&cfg)?;

    let found = crossings(&record, method, target);
    let reference = found[0].gamma_avg_db;
    println!("{preset}: average SNR at {target:e}");
    for c in &found {
        match (c.gamma_avg_db, reference) {
            (Some(x), Some(r)) => println!("  {:<10} {x:6.2} dB  ({:+.2} dB)", c.curve, x - r),
            (Some(x), None) => println!("  {:<10} {x:6.2} dB", c.curve),
            (None, _) => println!("  {:<10} no crossing", c.curve),
        }
    }
    let (csv, json) = write_outputs(&record, std::path::Path::new(&out_dir))?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}
