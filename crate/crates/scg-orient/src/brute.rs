//! Slow reference implementations kept deliberately independent of the
//! production code paths. The test suites cross-check the fast algorithms
//! against these on small inputs; nothing here is used by the library
//! itself.

use std::collections::BTreeSet;

use crate::pdag::Pdag;
use crate::unrolled::{UnrolledGraph, Vertex};

/// d-separation by exhaustive path enumeration: walk every simple
/// undirected path between `x` and `y` and apply the blocking rules node by
/// node. A path connects iff every collider on it has a descendant in `z`
/// (or is in `z`) and no non-collider lies in `z`.
pub fn d_separated_by_paths(g: &UnrolledGraph, x: Vertex, y: Vertex, z: &[Vertex]) -> bool {
    let xi = g.vertex_id(x);
    let yi = g.vertex_id(y);
    let zi: BTreeSet<u32> = z.iter().map(|&w| g.vertex_id(w)).collect();
    // Ancestors of z, including z.
    let mut anc = zi.clone();
    let mut stack: Vec<u32> = zi.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for &p in g.parent_ids(v) {
            if anc.insert(p) {
                stack.push(p);
            }
        }
    }
    let mut on_path = vec![false; g.n_vertices() as usize];
    on_path[xi as usize] = true;
    !walk(g, &zi, &anc, &mut on_path, &mut vec![xi], yi)
}

/// Depth-first search over simple paths; true once a d-connecting path to
/// `target` is found.
fn walk(
    g: &UnrolledGraph,
    z: &BTreeSet<u32>,
    anc_z: &BTreeSet<u32>,
    on_path: &mut Vec<bool>,
    path: &mut Vec<u32>,
    target: u32,
) -> bool {
    let last = *path.last().unwrap();
    let neighbors: Vec<u32> = {
        let mut ns: Vec<u32> = g.parent_ids(last).to_vec();
        ns.extend_from_slice(g.child_ids(last));
        ns.sort_unstable();
        ns.dedup();
        ns
    };
    for next in neighbors {
        if on_path[next as usize] {
            continue;
        }
        if next == target {
            path.push(next);
            let ok = path_connects(g, z, anc_z, path);
            path.pop();
            if ok {
                return true;
            }
            continue;
        }
        path.push(next);
        on_path[next as usize] = true;
        let found = walk(g, z, anc_z, on_path, path, target);
        on_path[next as usize] = false;
        path.pop();
        if found {
            return true;
        }
    }
    false
}

fn path_connects(
    g: &UnrolledGraph,
    z: &BTreeSet<u32>,
    anc_z: &BTreeSet<u32>,
    path: &[u32],
) -> bool {
    for i in 1..path.len() - 1 {
        let (prev, mid, next) = (path[i - 1], path[i], path[i + 1]);
        let into_from_prev = g.child_ids(prev).binary_search(&mid).is_ok();
        let into_from_next = g.child_ids(next).binary_search(&mid).is_ok();
        let collider = into_from_prev && into_from_next;
        if collider {
            if !anc_z.contains(&mid) {
                return false;
            }
        } else if z.contains(&mid) {
            return false;
        }
    }
    true
}

/// Equivalence-class representative by explicit enumeration: list every
/// acyclic orientation of the skeleton with the same unshielded colliders
/// as `g`; an edge is directed in the result iff all of them agree on it.
pub fn cpdag_by_enumeration(g: &UnrolledGraph) -> Pdag {
    let nv = g.n_vertices();
    let mut skeleton: Vec<(u32, u32)> = Vec::new();
    for u in 0..nv {
        for &v in g.child_ids(u) {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !skeleton.contains(&(a, b)) {
                skeleton.push((a, b));
            }
        }
    }
    let reference_colliders = colliders_of(&edge_list(g), nv, &skeleton);
    let mut agree_forward = vec![true; skeleton.len()];
    let mut agree_backward = vec![true; skeleton.len()];
    let mut members = 0u64;
    for mask in 0u64..(1 << skeleton.len()) {
        let edges: Vec<(u32, u32)> = skeleton
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 0 { (a, b) } else { (b, a) })
            .collect();
        if !acyclic(&edges, nv) {
            continue;
        }
        if colliders_of(&edges, nv, &skeleton) != reference_colliders {
            continue;
        }
        members += 1;
        for (i, &(a, b)) in skeleton.iter().enumerate() {
            if edges[i] == (a, b) {
                agree_backward[i] = false;
            } else {
                agree_forward[i] = false;
            }
        }
    }
    debug_assert!(members > 0, "the input itself is always a member");
    let mut p = Pdag::new(g.n_series(), g.window_len());
    for (i, &(a, b)) in skeleton.iter().enumerate() {
        if agree_forward[i] {
            p.insert_directed(a, b);
        } else if agree_backward[i] {
            p.insert_directed(b, a);
        } else {
            p.insert_undirected(a, b);
        }
    }
    p
}

fn edge_list(g: &UnrolledGraph) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for u in 0..g.n_vertices() {
        for &v in g.child_ids(u) {
            out.push((u, v));
        }
    }
    out
}

fn acyclic(edges: &[(u32, u32)], nv: u32) -> bool {
    let mut indeg = vec![0u32; nv as usize];
    for &(_, v) in edges {
        indeg[v as usize] += 1;
    }
    let mut queue: Vec<u32> = (0..nv).filter(|&v| indeg[v as usize] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop() {
        seen += 1;
        for &(a, b) in edges {
            if a == u {
                indeg[b as usize] -= 1;
                if indeg[b as usize] == 0 {
                    queue.push(b);
                }
            }
        }
    }
    seen == nv
}

/// Unshielded colliders as sorted (parent, parent, child) triples.
fn colliders_of(
    edges: &[(u32, u32)],
    nv: u32,
    skeleton: &[(u32, u32)],
) -> BTreeSet<(u32, u32, u32)> {
    let adjacent = |a: u32, b: u32| {
        let key = if a < b { (a, b) } else { (b, a) };
        skeleton.contains(&key)
    };
    let mut out = BTreeSet::new();
    for c in 0..nv {
        let parents: Vec<u32> = edges
            .iter()
            .filter(|&&(_, v)| v == c)
            .map(|&(u, _)| u)
            .collect();
        for (i, &p1) in parents.iter().enumerate() {
            for &p2 in &parents[i + 1..] {
                if !adjacent(p1, p2) {
                    let (a, b) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
                    out.insert((a, b, c));
                }
            }
        }
    }
    out
}
