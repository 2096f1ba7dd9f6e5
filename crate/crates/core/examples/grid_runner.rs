//! The batch runner used by the `qmet bounds` command, driven from code.

use qmet::cli::{run, RawConfig};

fn main() -> qmet::Result<()> {
    let cfg = RawConfig::parse(
        "scenario = field-sensing\n\
         n = 2\n\
         gamma = 0:0.5:0.25\n\
         bounds = J2,J4,Ssym4,S3d4\n",
    )?
    .build()?;
    let report = run(&cfg)?;
    print!("{}", report.csv());
    eprintln!("exit code would be {}", report.exit_code());
    Ok(())
}
