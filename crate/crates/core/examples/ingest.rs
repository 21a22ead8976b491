//! Load designs from CSV with column roles, scale them, and write them back.

use std::collections::HashMap;

use design_eval::data::{read_design_set, scale_features, write_design_set, ObjectiveDirection, Role, ScaleMethod, Schema};
use design_eval::Result;

const CSV: &str = "\
id,width,height,mass,stiffness,feasible
a,1.0,2.0,5.0,10.0,1
b,2.0,1.0,4.0,12.0,1
c,1.5,1.5,6.0,9.0,0
d,3.0,0.5,3.0,15.0,1
";

fn main() -> Result<()> {
    let schema = Schema::new()
        .with("id", Role::Ignore)
        .with("width", Role::Design)
        .with("height", Role::Design)
        .with("mass", Role::Performance)
        .with("stiffness", Role::Performance)
        .with("feasible", Role::Valid);
    let directions = HashMap::from([("mass".to_string(), ObjectiveDirection::Minimize)]);
    let set = read_design_set(CSV.as_bytes(), &schema, &directions)?;
    println!("{} designs, {} design columns", set.len(), set.dim());
    // minimized objectives are stored negated so larger is always better
    println!("performance (maximization frame): {:?}", set.performance().unwrap().to_rows());
    println!("valid: {:?}", set.valid().unwrap());

    let scaled = scale_features(&set, ScaleMethod::MinMax, None)?;
    println!("min-max scaled designs: {:?}", scaled.set.designs().to_rows());

    let mut out = Vec::new();
    write_design_set(&mut out, &set, &directions)?;
    print!("round trip:\n{}", String::from_utf8_lossy(&out));
    Ok(())
}
