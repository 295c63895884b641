//! Derivatives on the x-space and the twisted Leibniz rule.

use qwh::diffcalc::{twisted_leibniz_check, WzCalculus};
use qwh::linalg::rhat_builtin;

fn main() -> qwh::Result<()> {
    let calc = WzCalculus::new(&rhat_builtin())?;
    for rel in ["d1 x1", "d2 x1", "d3 x1", "d1 xi2"] {
        let p = calc.parse(rel)?;
        println!("{rel} = {}", calc.render(&calc.system.normal_form(&p)));
    }
    for (i, e) in [(1, "x1 x2"), (3, "x1 x2"), (3, "x3^3"), (2, "x2 x1 x1")] {
        let p = calc.system.normal_form(&calc.parse(e)?);
        println!("d{i}({e}) = {}", calc.render(&calc.apply_derivative(i, &p)));
    }
    let rep = twisted_leibniz_check(&calc, 7, 10);
    println!("twisted Leibniz on 10 random pairs: {}", rep.status);
    Ok(())
}
