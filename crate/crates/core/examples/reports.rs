//! Running registered suites and emitting reports.

use qwh::scalar::Param;
use qwh::suites::{run_suite, Context, SUITES};
use qwh::Scalar;

fn main() -> qwh::Result<()> {
    let ctx = Context::symbolic();
    for name in SUITES {
        let rep = run_suite(name, &ctx)?;
        println!("{name:<12} {} ({} items)", rep.status, rep.items.len());
    }
    let special = ctx.with_bindings(vec![(Param::U, Scalar::from_int(2)), (Param::S, Scalar::from_int(3))]);
    println!("{}", run_suite("rtt-7", &special)?.to_json_untimed());
    Ok(())
}
