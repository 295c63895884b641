//! Presentations in the text DSL, normal forms and the diamond check.

use qwh::presentations::{builtin, parse_presentation};

const PLANE: &str = "\
algebra plane
params q
generators y > x
rel y x = q x y
";

fn main() -> qwh::Result<()> {
    let plane = parse_presentation(PLANE)?;
    let sys = plane.system()?;
    let p = plane.parse_expr("y^2 x + x y")?;
    println!("{}: nf(y^2 x + x y) = {}", plane.name, sys.render(&sys.normal_form(&p)));
    println!("{}", sys.diamond_check("plane").to_text());

    let tt7 = builtin("TT7")?;
    let sys = tt7.system()?;
    println!("TT7 has {} rules, {} overlaps", sys.len(), sys.overlaps().len());
    let p = tt7.parse_expr("T13 T23")?;
    println!("nf(T13 T23) = {}", sys.render(&sys.normal_form(&p)));
    println!("confluent: {}", sys.is_confluent());

    // A deliberately incomplete system: completion adds the missing rule.
    let broken = parse_presentation("algebra broken\ngenerators a > b\nrel a a = b\nrel a b = b a + b\n")?;
    let sys = broken.system()?;
    println!("broken confluent: {}", sys.is_confluent());
    match sys.complete(4) {
        Ok(done) => println!("completed: {}", done.render_rules()),
        Err(e) => print!("{e}"),
    }
    Ok(())
}
