//! Magnitude homology over ℤ from the normalized chain complex, grade by
//! grade, for a few small digraphs.

use maghom::chain::{attainable_grades, enumerate_tuples, magnitude_complex};
use maghom::space::{directed_cycle, format_grade};
use maghom::suite::{diamond, k2};
use maghom::{digraph_to_space, Digraph, Grade};

fn table(name: &str, g: &Digraph, n_max: usize, lmax: i64) -> maghom::Result<()> {
    let space = digraph_to_space(g);
    println!("{name}: nonzero MH_(n,l) for n <= {n_max}, l <= {lmax}");
    for grade in attainable_grades(&space, &Grade::from_integer(lmax)) {
        let complex = magnitude_complex(&space, &grade, n_max);
        for n in 0..=n_max {
            let h = complex.homology(n)?;
            if h.betti > 0 || !h.torsion.is_empty() {
                let torsion: Vec<String> = h.torsion.iter().map(|t| format!("Z/{t}")).collect();
                println!("  ({n}, {}): Z^{} {}", format_grade(&grade), h.betti, torsion.join(" "));
            }
        }
    }
    Ok(())
}

fn main() -> maghom::Result<()> {
    let space = digraph_to_space(&k2());
    let gens: Vec<String> = enumerate_tuples(&space, 2, &Grade::from_integer(2), true).iter().map(|t| t.render(&space)).collect();
    println!("K2 generators of degree 2 and grade 2: {}", gens.join(" "));

    table("K2", &k2(), 4, 4)?;
    table("C3", &directed_cycle(3), 4, 5)?;
    table("C5", &directed_cycle(5), 3, 4)?;
    table("diamond", &diamond(), 3, 3)?;
    Ok(())
}
