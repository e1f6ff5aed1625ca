//! Running a lab experiment from code instead of the CLI.

use dualball::lab::{run, ExperimentConfig};

fn main() -> dualball::Result<()> {
    let config = ExperimentConfig::from_json(
        r#"{"experiment":"bpb","space":{"kind":"lp","p":3,"dim":5},
            "grid":[0.05,0.2,0.5],"samples":200,"seed":11,"output_path":"out/bpb.csv"}"#,
    )?;
    let report = run(&config)?;
    print!("{}", report.csv);
    println!("{} rows, {} failing", report.rows, report.failures);
    Ok(())
}
