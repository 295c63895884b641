//! The braid matrix: Yang-Baxter, involution and its two eigenspaces.

use qwh::linalg::{eigensplit, eigenspace_identification, involution_check, rhat_builtin, ybe_check};

fn main() -> qwh::Result<()> {
    let r = rhat_builtin();
    println!("{r}");
    print!("{}", ybe_check(&r)?.to_text());
    print!("{}", involution_check(&r)?.to_text());
    let split = eigensplit(&r)?;
    println!("eigenvalue +1: dim {}, eigenvalue -1: dim {}", split.plus.len(), split.minus.len());
    print!("{}", eigenspace_identification()?.to_text());
    Ok(())
}
