//! The magnitude cohomology ring: cocycle bases, cup products, and the
//! Yoneda product computed through explicit lifts along the bar resolution.

use std::sync::Arc;

use maghom::algebra::{bar_resolution, Side};
use maghom::io::ring_table_to_json;
use maghom::ring::{check_lift_commutes, cohomology_classes, cup, ring_table, yoneda_product, Cochain};
use maghom::suite::k2;
use maghom::{digraph_to_space, Grade, Rationals};

fn main() -> maghom::Result<()> {
    let q = Rationals;
    let space = Arc::new(digraph_to_space(&k2()));
    let psi = Cochain::dual(&q, &space, &[0, 1])?;
    let phi = Cochain::dual(&q, &space, &[1, 0])?;
    let product = cup(&q, &psi, &phi)?;
    for (t, v) in product.values() {
        println!("(dual(x,y) . dual(y,x))({:?}) = {v}", t);
    }

    let res = bar_resolution(&space, Side::Left, 2, &Grade::from_integer(2));
    let yoneda = yoneda_product(&q, &res, &psi, &phi)?;
    println!("Yoneda product equals cup: {}", yoneda == product);
    println!("lift of dual(y,x) commutes: {}", check_lift_commutes(&q, &res, &phi, 1)?);

    let classes = cohomology_classes(&q, &space, 1, &Grade::from_integer(1))?;
    println!("MH^(1,1)(K2) has {} classes", classes.len());

    let table = ring_table(&q, &space, 2, &Grade::from_integer(2))?;
    println!("{}", serde_json::to_string(&ring_table_to_json(&q, &table)).unwrap());
    Ok(())
}
