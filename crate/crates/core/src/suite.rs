//! Standard test instances and exhaustive digraph enumeration.

use std::collections::BTreeSet;

use crate::space::{digraph_to_space, directed_cycle, Digraph, QuasimetricSpace};

/// A named digraph with its path-length quasimetric.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub name: String,
    pub digraph: Digraph,
    pub space: QuasimetricSpace,
}

impl SuiteInstance {
    pub fn new(name: impl Into<String>, digraph: Digraph) -> Self {
        let space = digraph_to_space(&digraph);
        SuiteInstance { name: name.into(), digraph, space }
    }
}

/// Single arc `a → b`.
pub fn x2() -> Digraph {
    Digraph::new(&["a", "b"], &[("a", "b")]).expect("valid digraph")
}

/// Two points joined both ways.
pub fn k2() -> Digraph {
    Digraph::new(&["x", "y"], &[("x", "y"), ("y", "x")]).expect("valid digraph")
}

/// `a → b → d`, `a → c → d`.
pub fn diamond() -> Digraph {
    Digraph::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "d"), ("a", "c"), ("c", "d")]).expect("valid digraph")
}

/// The eight labelled tournaments on three vertices: bit `i` of the index
/// reverses the `i`-th of the pairs `(0,1)`, `(0,2)`, `(1,2)`.
pub fn tournaments3() -> Vec<Digraph> {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    (0..8u32)
        .map(|mask| {
            let arcs = pairs.iter().enumerate().map(|(i, &(u, v))| if mask >> i & 1 == 1 { (v, u) } else { (u, v) });
            Digraph::from_indices(3, arcs).expect("valid tournament")
        })
        .collect()
}

/// X2, K2, the directed cycles C3–C5, the diamond and all tournaments on
/// three vertices.
pub fn suite() -> Vec<SuiteInstance> {
    let mut out = vec![
        SuiteInstance::new("X2", x2()),
        SuiteInstance::new("K2", k2()),
        SuiteInstance::new("C3", directed_cycle(3)),
        SuiteInstance::new("C4", directed_cycle(4)),
        SuiteInstance::new("C5", directed_cycle(5)),
        SuiteInstance::new("diamond", diamond()),
    ];
    for (i, t) in tournaments3().into_iter().enumerate() {
        out.push(SuiteInstance::new(format!("T3.{i}"), t));
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative of every isomorphism class of loopless digraphs on
/// `n` vertices, chosen as the arc set with the smallest bitmask.
pub fn digraphs_up_to_isomorphism(n: usize) -> Vec<Digraph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    let slot_of = |u: usize, v: usize| slots.iter().position(|&s| s == (u, v)).unwrap();
    let perms = permutations(n);
    let relabel: Vec<Vec<usize>> =
        perms.iter().map(|p| slots.iter().map(|&(u, v)| slot_of(p[u], p[v])).collect()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let canonical = relabel
            .iter()
            .map(|r| (0..slots.len()).filter(|&i| mask >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << r[i]))
            .min()
            .unwrap();
        if seen.insert(canonical) && canonical == mask {
            let arcs = (0..slots.len()).filter(|&i| mask >> i & 1 == 1).map(|i| slots[i]);
            out.push(Digraph::from_indices(n, arcs).expect("loopless"));
        }
    }
    out
}
