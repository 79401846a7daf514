//! The derived-functor route: Tor and Ext against bar resolutions, compared
//! with the chain and cochain complexes at every bidegree.

use maghom::algebra::{bar_resolution, ext_bidegree_with, tor_bidegree_with, Side};
use maghom::chain::{attainable_grades, magnitude_cochain_complex, magnitude_complex};
use maghom::distmod::trivial_module;
use maghom::space::format_grade;
use maghom::suite::suite;
use maghom::{FieldKind, Grade};

fn main() -> maghom::Result<()> {
    let (n_max, lmax) = (3, Grade::from_integer(4));
    for inst in suite().into_iter().take(6) {
        let triv = trivial_module(&inst.space, Grade::from_integer(0), 1);
        let left = bar_resolution(&inst.space, Side::Left, n_max + 1, &lmax);
        let right = bar_resolution(&inst.space, Side::Right, n_max + 1, &lmax);
        let (mut agree, mut total) = (0, 0);
        for grade in attainable_grades(&inst.space, &lmax) {
            let chain = magnitude_complex(&inst.space, &grade, n_max);
            let cochain = magnitude_cochain_complex(&inst.space, &grade, n_max, FieldKind::Prime(2))?;
            for n in 0..=n_max {
                let tor = tor_bidegree_with(&left, &triv, n, &grade)?;
                let ext = ext_bidegree_with(&right, &triv, n, &grade, FieldKind::Prime(2))?;
                total += 1;
                if tor == chain.homology(n)? && ext == cochain.cohomology_dim(n)? {
                    agree += 1;
                } else {
                    println!("  {}: mismatch at ({n}, {})", inst.name, format_grade(&grade));
                }
            }
        }
        println!("{:8} Tor = MH and Ext = MH^ (over F2) at {agree}/{total} bidegrees", inst.name);
    }
    Ok(())
}
