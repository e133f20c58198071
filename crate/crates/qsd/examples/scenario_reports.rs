//! The file-based front door, driven as a library: write a scenario, run
//! it, inspect the report, then run the bundled suite and print its CSV.
//! The same machinery backs the qsd binary.
//!
//! Run with: cargo run --example scenario_reports

use qsd::scenario::{parse_scenario, run_scenario, run_suite, OutputFormat};

fn main() -> qsd::Result<()> {
    // A minimal scenario: task name, schema tag, states as Bloch vectors.
    let text = r#"{
        "schema": "qsd-scenario/1",
        "task": "min-error",
        "ensemble": {
            "priors": [0.5, 0.5],
            "states": [
                {"bloch": [0.0, 0.0, 1.0]},
                {"bloch": [1.0, 0.0, 0.0]}
            ]
        },
        "options": {"tol": 1e-7, "seed": 1}
    }"#;
    let dir = std::env::temp_dir().join("qsd-example-scenarios");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("pair.json");
    std::fs::write(&path, text)?;

    let scenario = parse_scenario(&path)?;
    let report = run_scenario(&scenario)?;
    println!("=== json report ===");
    println!("{}", report.render(OutputFormat::Json)?);

    println!("=== human rendering ===");
    println!("{}", report.render(OutputFormat::Human)?);

    // The bundled scenarios next to this crate cover every task; the suite
    // runner aggregates one CSV row per file and never stops at a failure.
    let bundled = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let outcome = run_suite(&bundled, None, 1)?;
    println!("=== bundled suite ===");
    print!("{}", outcome.csv);
    println!("suite exit code: {}", outcome.exit_code);

    Ok(())
}
