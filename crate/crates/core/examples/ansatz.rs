//! Solving for the one-form relations from a graded ansatz.

use qwh::coaction::{ansatz_solve, pin_free_unknowns, Ansatz};
use qwh::linalg::rhat_builtin;
use qwh::presentations::builtin;
use qwh::{Param, Scalar};

fn main() -> qwh::Result<()> {
    let group = builtin("TT7")?;
    let a = Ansatz::builtin("ansatz_xi")?;
    for t in &a.templates {
        println!("template: {}", a.presentation.render(&a.relation(t)));
    }
    let cs = ansatz_solve(&a, &group)?;
    print!("{}", cs.render());

    let xspace = builtin("xspace")?.substitute(&[(Param::Q, Scalar::upow(2))])?;
    let pin = pin_free_unknowns(&a, &cs, &rhat_builtin(), &xspace)?;
    println!("confluence of the joint system ({} ambiguities) gives:", pin.ambiguities);
    print!("{}", pin.constraints.render());

    let variant = ansatz_solve(&Ansatz::builtin("ansatz_xi_variant")?, &group)?;
    for w in variant.inconsistency.iter().flat_map(|w| w.split("; ")) {
        println!("variant: {w}");
    }
    Ok(())
}
