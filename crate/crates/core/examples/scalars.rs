//! Exact arithmetic in Q(u, s, ...) and specialization to rationals.

use qwh::{Param, Scalar};

fn main() -> qwh::Result<()> {
    let a = Scalar::parse("(u^2 - 1)/(u + 1)")?;
    println!("(u^2 - 1)/(u + 1) = {a}");

    let b = Scalar::parse("s u^(-2)")?;
    let c = &a * &b;
    println!("({a}) * ({b}) = {c}");
    println!("inverse: {}", c.inv()?);

    let at = c.substitute(&[(Param::U, Scalar::from_ratio(3, 2)), (Param::S, Scalar::from_int(4))])?;
    println!("at u = 3/2, s = 4: {at}");

    match Scalar::parse("1/(u - u)") {
        Ok(v) => println!("unexpected: {v}"),
        Err(e) => println!("1/(u - u): {e}"),
    }
    Ok(())
}
