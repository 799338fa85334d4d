//! Audit tabulated protocols. Pass a directory to also write the built-in
//! protocols there as JSON files accepted by `doublecap check-protocol`.
//!
//! ```bash
//! cargo run --example audit_protocol
//! cargo run --example audit_protocol -- /tmp/protocols
//! ```

use std::path::PathBuf;

use doublecap::hilbert::RandomStream;
use doublecap::protocol::{audit, fixtures, AuditConfig, SharedPair, TabulatedProtocol};

fn main() -> doublecap::Result<()> {
    let mut rng = RandomStream::new(11, 0);
    let grid = fixtures::antipodal_bloch_grid(250);
    let lunes = fixtures::tb_lunes(&SharedPair::sample(&mut rng), &grid)?;

    let protocols: Vec<(&str, TabulatedProtocol)> = vec![
        ("identity-grid", fixtures::identity_grid()),
        ("orthogonal-support", fixtures::orthogonal_support()),
        ("single-message", fixtures::single_message()),
        ("hemisphere", fixtures::hemisphere_cover()),
        ("lunes-500", lunes),
    ];

    let out_dir = std::env::args_os().nth(1).map(PathBuf::from);
    for (name, tp) in &protocols {
        println!("== {name}");
        let report = audit(tp, &AuditConfig::default())?;
        for c in &report.checks {
            println!("  {:<14} {:<8} {}", c.check, c.status, c.detail);
        }
        if let Some(dir) = &out_dir {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{name}.json")), tp.to_json_string()?)?;
        }
    }
    Ok(())
}
