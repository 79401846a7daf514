//! The distance algebra and the bar resolution of its semisimple quotient.

use maghom::algebra::{bar_resolution, build_distance_algebra, Side};
use maghom::space::{directed_cycle, format_grade};
use maghom::suite::x2;
use maghom::{digraph_to_space, Grade};

fn main() -> maghom::Result<()> {
    let c3 = digraph_to_space(&directed_cycle(3));
    let alg = build_distance_algebra(&c3);
    println!("C3: {} basis pairs, associative: {}", alg.basis().len(), alg.is_associative());
    for k in 1..=3 {
        println!("  (J)^{k} spanned by {} pairs", alg.radical_power(k).len());
    }
    println!("  nilpotency index {}", alg.nilpotency_index());

    let space = digraph_to_space(&x2());
    let res = bar_resolution(&space, Side::Right, 2, &Grade::from_integer(1));
    let p0: Vec<String> = res.basis(0).iter().map(|t| format!("{t:?}")).collect();
    println!("X2 right P_0: {}", p0.join(" "));

    let res = bar_resolution(&c3, Side::Left, 4, &Grade::from_integer(3));
    for grade in res.grades() {
        let dims: Vec<String> = (0..4).map(|n| res.graded_homology(n, &grade).map(|h| h.betti.to_string())).collect::<Result<_, _>>()?;
        println!("C3 left resolution, grade {}: H_n ranks [{}]", format_grade(&grade), dims.join(", "));
    }
    println!("exactness defects: {:?}", res.exactness_defects()?);
    Ok(())
}
