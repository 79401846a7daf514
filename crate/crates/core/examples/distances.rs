//! Quasimetric spaces: path metrics of digraphs, explicit rational
//! distance matrices, betweenness and the opposite space.

use maghom::space::{opposite_space, ExtDist};
use maghom::{between, digraph_to_space, validate_space, Digraph};

fn main() -> maghom::Result<()> {
    let c3 = Digraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")])?;
    let space = digraph_to_space(&c3);
    println!("path metric of the directed 3-cycle:");
    for x in space.labels() {
        let row: Vec<String> = space.labels().iter().map(|y| space.dist_by_label(x, y).unwrap().to_string()).collect();
        println!("  {x}: {}", row.join(" "));
    }
    println!("a, b, c collinear: {}", between(&space, "a", "b", "c")?);
    println!("b, a, c collinear: {}", between(&space, "b", "a", "c")?);

    let op = opposite_space(&space);
    println!("opposite: d(a,b) = {}", op.dist_by_label("a", "b")?);

    let d = |s: &str| s.parse::<ExtDist>().unwrap();
    let half = validate_space(
        &["p", "q", "r"],
        vec![vec![d("0"), d("1/2"), d("1")], vec![d("inf"), d("0"), d("1/2")], vec![d("inf"), d("inf"), d("0")]],
    )?;
    println!("half steps: d(p,r) = {}, p,q,r collinear: {}", half.dist_by_label("p", "r")?, between(&half, "p", "q", "r")?);

    let broken = validate_space(
        &["a", "b", "c"],
        vec![vec![d("0"), d("1"), d("5")], vec![d("1"), d("0"), d("1")], vec![d("5"), d("1"), d("0")]],
    );
    println!("a matrix breaking the triangle inequality: {}", broken.unwrap_err());
    Ok(())
}
