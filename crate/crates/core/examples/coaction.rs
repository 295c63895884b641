//! Coaction of the seven-generator matrix on the x-space, and the group
//! relations it forces.

use qwh::coaction::{comodule_check, derive_group_constraints, MixedAlgebra};
use qwh::presentations::builtin;
use qwh::quantumgroup::Shape;
use qwh::{Param, Scalar};

fn main() -> qwh::Result<()> {
    let xspace = builtin("xspace")?.substitute(&[(Param::Q, Scalar::upow(2))])?;
    let tt7 = builtin("TT7")?;
    let mixed = MixedAlgebra::for_presentations(&tt7, &xspace);
    let x1 = xspace.parse_expr("x1")?;
    println!("delta(x1) = {}", mixed.render(&mixed.coact(&x1, Shape::Seven)?));

    print!("{}", comodule_check(&xspace, &tt7.system()?, Shape::Seven)?.to_text());

    let derived = derive_group_constraints(&xspace, Shape::Seven)?;
    println!("{} constraints on T; the first few:", derived.len());
    let free = qwh::coaction::free_group(Shape::Seven);
    for c in derived.iter().take(4) {
        println!("  {} = 0", free.render(c));
    }

    let generic = builtin("xspace_generic_q")?;
    let rep = comodule_check(&generic, &tt7.system()?, Shape::Seven)?;
    println!("with q free the comodule check is {}", rep.status);
    Ok(())
}
