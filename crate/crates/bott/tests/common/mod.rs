#![allow(dead_code)] // each test target links its own subset

//! Brute-force oracles shared by the integration suites. These never touch
//! the canonical-form machinery they are used to check.

use bott::Digraph;

/// Every labeled acyclic digraph on n vertices, by filtering all
/// 2^(n(n-1)) arc subsets.
pub fn all_labeled_dags(n: usize) -> Vec<Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let arcs = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p);
        if let Ok(d) = Digraph::from_arcs(n, arcs) {
            out.push(d);
        }
    }
    out
}

fn visit_permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        visit_permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut items: Vec<usize> = (0..n).collect();
    visit_permutations(&mut items, 0, &mut visit);
}

/// Isomorphism-class signature by exhaustive relabeling: the minimum row
/// vector over all n! permutations.
pub fn brute_iso_signature(d: &Digraph) -> Vec<u16> {
    let n = d.n();
    let mut best: Option<Vec<u16>> = None;
    for_each_permutation(n, |image| {
        let p = bott::Permutation::from_image(image).unwrap();
        let h = d.relabel(&p).unwrap();
        let rows: Vec<u16> = (0..n).map(|v| h.row(v)).collect();
        if best.as_ref().is_none_or(|b| rows < *b) {
            best = Some(rows);
        }
    });
    best.unwrap()
}

/// Number of isomorphism classes of acyclic digraphs on n vertices, by
/// brute force.
pub fn brute_class_count(n: usize) -> usize {
    let mut signatures: Vec<Vec<u16>> =
        all_labeled_dags(n).iter().map(brute_iso_signature).collect();
    signatures.sort_unstable();
    signatures.dedup();
    signatures.len()
}

/// True iff some bijection maps the arcs of `d` exactly onto those of `h`.
pub fn brute_isomorphic(d: &Digraph, h: &Digraph) -> bool {
    if d.n() != h.n() {
        return false;
    }
    let mut found = false;
    for_each_permutation(d.n(), |image| {
        if found {
            return;
        }
        let p = bott::Permutation::from_image(image).unwrap();
        if d.relabel(&p).unwrap() == *h {
            found = true;
        }
    });
    found
}

/// Left half of the classic 5-vertex pair: inequivalent digraphs whose
/// invariant fingerprints coincide.
pub fn collision_pair_left() -> Digraph {
    Digraph::from_arcs(5, [(0, 1), (0, 4), (2, 3), (3, 4)]).unwrap()
}

pub fn collision_pair_right() -> Digraph {
    Digraph::from_arcs(5, [(0, 1), (2, 1), (2, 3), (3, 4)]).unwrap()
}
