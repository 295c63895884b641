//! The seven- and nine-generator Hopf algebras.

use qwh::quantumgroup::{
    det_commutation_derive, hopf_check, inverse_check, subalgebra_check, QuantumGroup, Which,
};

fn main() -> qwh::Result<()> {
    let h8 = QuantumGroup::new(Which::H8)?;
    println!("D = {}", h8.render(&h8.determinant()));
    for ((i, j), c) in &h8.factors {
        let c = if c.is_one() { String::new() } else { format!("{c} ") };
        println!("  T{i}{j} Dinv = {c}Dinv T{i}{j}");
    }
    print!("{}", inverse_check(&h8).to_text());
    let hopf = hopf_check(&h8);
    println!("hopf H8: {} ({} items)", hopf.status, hopf.items.len());

    let h10 = QuantumGroup::new(Which::H10)?;
    println!("d = {}", h10.render(&h10.determinant()));
    print!("{}", det_commutation_derive(&h10)?.to_text());
    let hopf = hopf_check(&h10);
    println!("hopf H10: {} ({} items)", hopf.status, hopf.items.len());
    print!("{}", subalgebra_check(&h8, &h10).to_text());
    Ok(())
}
