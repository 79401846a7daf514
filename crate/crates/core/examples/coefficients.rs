//! Distance modules as coefficients: representables, invariants,
//! coinvariants, and magnitude homology with coefficients.

use maghom::chain::magnitude_complex_with_coefficients;
use maghom::distmod::{coinvariants, hom_from_trivial, invariants, representable_module, validate_module, DistanceModule};
use maghom::space::{directed_cycle, format_grade};
use maghom::suite::x2;
use maghom::{digraph_to_space, Grade, SparseIntMatrix};
use num_bigint::BigInt;

fn main() -> maghom::Result<()> {
    let space = digraph_to_space(&x2());
    let rep = representable_module(&space, 0)?;
    for c in invariants(&rep)? {
        println!("Inv(e_a) in grade {}: rank {}", format_grade(&c.grade), c.rank);
    }
    println!("Hom(Triv, e_a) in grade 1: rank {}", hom_from_trivial(&rep, &Grade::from_integer(1)));

    // same shape, but the action multiplies by 2
    let mut doubled = DistanceModule::new(&space);
    doubled.set_component(0, Grade::from_integer(0), 1);
    doubled.set_component(1, Grade::from_integer(1), 1);
    doubled.set_action(0, 1, Grade::from_integer(0), SparseIntMatrix::from_rows(1, 1, &[vec![BigInt::from(2)]])?)?;
    let doubled = validate_module(doubled)?;
    for c in coinvariants(&doubled)? {
        let mut parts: Vec<String> = c.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if c.betti > 0 {
            parts.insert(0, format!("Z^{}", c.betti));
        }
        println!("Coinv in grade {}: {}", format_grade(&c.grade), if parts.is_empty() { "0".into() } else { parts.join(" + ") });
    }

    let c3 = digraph_to_space(&directed_cycle(3));
    let m = representable_module(&c3, 0)?;
    for l in 0..=3 {
        let complex = magnitude_complex_with_coefficients(&c3, &m, &Grade::from_integer(l), 2)?;
        let row: Vec<String> = (0..=2).map(|n| complex.homology(n).map(|h| h.betti.to_string())).collect::<Result<_, _>>()?;
        println!("C3 with e_a coefficients, grade {l}: betti by degree [{}]", row.join(", "));
    }
    Ok(())
}
