//! Recognition of the isomorphism types of induced Dynkin sub-diagrams.
//!
//! A subset `J` of simple roots induces a principal submatrix of the Cartan
//! matrix; its connected components are Dynkin diagrams again. Each component
//! is identified in two steps: cheap invariants (node count, bond multiset,
//! degree sequence) narrow the candidates, and a node-permutation match of
//! the induced Cartan matrix against the catalogue confirms the type. The
//! invariants alone cannot tell B from C (the arrow direction), which is why
//! the permutation match is not optional.

use super::{cartan_matrix, Family, RootSystem, SimpleType};
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

/// Types of the connected sub-diagrams induced by `subset` (1-based
/// indices), as a sorted multiset. The empty subset yields an empty list.
pub fn classify_subset(rs: &RootSystem, subset: &BTreeSet<u16>) -> Vec<SimpleType> {
    classify_subset_cartan(rs.cartan(), subset)
}

/// Same, working directly on an ambient Cartan matrix; recognition never
/// needs the roots themselves.
pub fn classify_subset_cartan(cartan: &[Vec<i32>], subset: &BTreeSet<u16>) -> Vec<SimpleType> {
    let nodes: Vec<usize> = subset.iter().map(|&i| i as usize - 1).collect();
    let mut types = Vec::new();
    for comp in connected_components(&nodes, cartan) {
        let sub = induced_matrix(&comp, cartan);
        types.push(identify_component(&sub));
    }
    types.sort();
    types
}

fn connected_components(nodes: &[usize], cartan: &[Vec<i32>]) -> Vec<Vec<usize>> {
    let mut taken = vec![false; nodes.len()];
    let mut components = Vec::new();
    for start in 0..nodes.len() {
        if taken[start] {
            continue;
        }
        taken[start] = true;
        let mut comp = vec![nodes[start]];
        let mut frontier = vec![nodes[start]];
        while let Some(v) = frontier.pop() {
            for (w_pos, &w) in nodes.iter().enumerate() {
                if !taken[w_pos] && cartan[v][w] != 0 {
                    taken[w_pos] = true;
                    comp.push(w);
                    frontier.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

fn induced_matrix(nodes: &[usize], cartan: &[Vec<i32>]) -> Vec<Vec<i32>> {
    nodes
        .iter()
        .map(|&i| nodes.iter().map(|&j| cartan[i][j]).collect())
        .collect()
}

type Invariants = (usize, Vec<i32>, Vec<usize>);

struct CatalogueEntry {
    cartan: Vec<Vec<i32>>,
    invariants: Invariants,
}

/// Catalogue matrices and their invariants for all ranks up to 31, built
/// once; components larger than that fall back to building matrices on the
/// fly.
fn catalogue() -> &'static HashMap<SimpleType, CatalogueEntry> {
    static CATALOGUE: OnceLock<HashMap<SimpleType, CatalogueEntry>> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        let mut map = HashMap::new();
        for k in 1..=31u16 {
            for candidate in candidates(k) {
                let cartan = cartan_matrix(candidate);
                let invariants = invariants(&cartan);
                map.insert(candidate, CatalogueEntry { cartan, invariants });
            }
        }
        map
    })
}

/// Identifies a connected induced Cartan matrix against the catalogue.
///
/// Connected sub-diagrams of valid Dynkin diagrams are always catalogue
/// members, so a failed identification indicates a corrupted matrix and
/// panics.
fn identify_component(sub: &[Vec<i32>]) -> SimpleType {
    let k = sub.len() as u16;
    let inv = invariants(sub);
    for candidate in candidates(k) {
        if k <= 31 {
            let entry = &catalogue()[&candidate];
            if inv == entry.invariants && isomorphic(sub, &entry.cartan) {
                return candidate;
            }
        } else {
            let reference = cartan_matrix(candidate);
            if inv == invariants(&reference) && isomorphic(sub, &reference) {
                return candidate;
            }
        }
    }
    panic!("induced sub-diagram of size {k} matches no catalogue type: {sub:?}");
}

fn candidates(k: u16) -> Vec<SimpleType> {
    let mut out = Vec::new();
    let mut push = |family, rank| {
        if let Ok(t) = SimpleType::new(family, rank) {
            out.push(t);
        }
    };
    push(Family::A, k);
    if k >= 2 {
        push(Family::B, k);
    }
    if k >= 3 {
        push(Family::C, k);
    }
    if k >= 4 {
        push(Family::D, k);
    }
    if (6..=8).contains(&k) {
        push(Family::E, k);
    }
    if k == 4 {
        push(Family::F, k);
    }
    if k == 2 {
        push(Family::G, k);
    }
    out
}

/// (node count, sorted bond-multiplicity multiset, sorted degree sequence)
fn invariants(m: &[Vec<i32>]) -> (usize, Vec<i32>, Vec<usize>) {
    let k = m.len();
    let mut bonds = Vec::new();
    let mut degrees = vec![0usize; k];
    for i in 0..k {
        for j in (i + 1)..k {
            if m[i][j] != 0 {
                bonds.push(m[i][j] * m[j][i]);
                degrees[i] += 1;
                degrees[j] += 1;
            }
        }
    }
    bonds.sort_unstable();
    degrees.sort_unstable();
    (k, bonds, degrees)
}

/// Exhaustive node-permutation match with pruning: searches for a bijection
/// `sigma` with `a[i][j] == b[sigma(i)][sigma(j)]` for all `i, j`.
fn isomorphic(a: &[Vec<i32>], b: &[Vec<i32>]) -> bool {
    let k = a.len();
    if b.len() != k {
        return false;
    }
    // Visit nodes of `a` so that each one (after the first) touches an
    // already-placed node; on connected diagrams this lets the partial
    // checks prune almost everything.
    let order = dfs_order(a);
    let mut assignment: Vec<Option<usize>> = vec![None; k];
    let mut used = vec![false; k];
    extend(a, b, &order, 0, &mut assignment, &mut used)
}

fn dfs_order(a: &[Vec<i32>]) -> Vec<usize> {
    let k = a.len();
    let mut order = Vec::with_capacity(k);
    let mut seen = vec![false; k];
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        order.push(v);
        for w in 0..k {
            if !seen[w] && a[v][w] != 0 {
                stack.push(w);
            }
        }
    }
    for v in 0..k {
        if !seen[v] {
            order.push(v);
        }
    }
    order
}

fn extend(
    a: &[Vec<i32>],
    b: &[Vec<i32>],
    order: &[usize],
    depth: usize,
    assignment: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let i = order[depth];
    'candidates: for target in 0..b.len() {
        if used[target] {
            continue;
        }
        for &placed in &order[..depth] {
            let t = assignment[placed].unwrap();
            if a[i][placed] != b[target][t] || a[placed][i] != b[t][target] {
                continue 'candidates;
            }
        }
        assignment[i] = Some(target);
        used[target] = true;
        if extend(a, b, order, depth + 1, assignment, used) {
            return true;
        }
        assignment[i] = None;
        used[target] = false;
    }
    false
}
