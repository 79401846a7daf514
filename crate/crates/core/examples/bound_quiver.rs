//! Digraphs as bound quivers: shortest-path relations, the graded
//! dimension check of the presented algebra, and relations on
//! representations coming from distance modules.

use maghom::algebra::{check_bound_quiver_presentation, check_representation_relations, quiver_relations, QuiverRepresentation};
use maghom::distmod::representable_module;
use maghom::space::directed_cycle;
use maghom::suite::diamond;
use maghom::{digraph_to_space, Digraph, Grade, SparseIntMatrix};

fn show(name: &str, g: &Digraph) -> maghom::Result<()> {
    let label = |p: &[usize]| p.iter().map(|&v| g.vertices()[v].as_str()).collect::<Vec<_>>().join("->");
    let rels = quiver_relations(g);
    println!("{name}:");
    for (p, q) in &rels.r1 {
        println!("  {} = {}", label(p), label(q));
    }
    for p in &rels.r2 {
        println!("  {} = 0", label(p));
    }
    let report = check_bound_quiver_presentation(g, 4)?;
    for gr in &report.grades {
        println!("  grade {}: {} paths, relations of rank {}, quotient {} = {} pairs", gr.grade, gr.paths, gr.relation_rank, gr.quotient_dim, gr.pairs);
    }
    println!("  admissible with exponent {}: {}", report.exponent, report.admissible());
    Ok(())
}

fn main() -> maghom::Result<()> {
    show("diamond", &diamond())?;
    show("C3", &directed_cycle(3))?;

    let g = diamond();
    let m = representable_module(&digraph_to_space(&g), 0)?;
    let rep = QuiverRepresentation::from_module(&g, &m)?;
    println!("representable at a satisfies the relations: {}", check_representation_relations(&g, &rep).is_ok());

    let mut bad = rep.clone();
    bad.set_map(1, 3, Grade::from_integer(1), SparseIntMatrix::zeros(1, 1))?;
    println!("after killing b->d: {}", check_representation_relations(&g, &bad).unwrap_err());
    Ok(())
}
