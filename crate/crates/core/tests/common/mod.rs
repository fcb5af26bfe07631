//! Brute-force references shared by the integration tests. Nothing here
//! calls into the library's solvers; graphs are turned into adjacency
//! bitmasks and everything is recomputed from scratch.
#![allow(dead_code)]

use tlc_core::graph::{Edge, Graph, Vertex};

/// Vertex ids in increasing order and the adjacency masks over their
/// positions.
pub struct Masks {
    pub ids: Vec<Vertex>,
    pub adj: Vec<u64>,
}

pub fn masks(g: &Graph) -> Masks {
    let ids: Vec<Vertex> = g.vertices().collect();
    assert!(ids.len() <= 64);
    let pos = |v: Vertex| ids.iter().position(|&x| x == v).unwrap();
    let mut adj = vec![0u64; ids.len()];
    for e in g.edges() {
        let (a, b) = (pos(e.lo()), pos(e.hi()));
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    Masks { ids, adj }
}

pub fn connected_mask(adj: &[u64], set: u64) -> bool {
    if set == 0 {
        return true;
    }
    let mut seen = set & set.wrapping_neg();
    loop {
        let mut grow = seen;
        let mut rest = seen;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow |= adj[i] & set;
        }
        if grow == seen {
            return seen == set;
        }
        seen = grow;
    }
}

/// Calls `f` with the block index of every element, once per set partition
/// of `0..n`.
pub fn for_each_partition<F: FnMut(&[usize], usize)>(n: usize, f: &mut F) {
    fn go<F: FnMut(&[usize], usize)>(i: usize, blocks: usize, cur: &mut Vec<usize>, f: &mut F) {
        if i == cur.len() {
            f(cur, blocks);
            return;
        }
        for b in 0..=blocks {
            cur[i] = b;
            go(i + 1, blocks.max(b + 1), cur, f);
        }
    }
    let mut cur = vec![0; n];
    go(0, 0, &mut cur, f);
}

/// Whether the partition given by `block` (with `blocks` blocks) has
/// connected blocks and a connected quotient with at most
/// `blocks - 1 + ell` edges.
pub fn partition_works(m: &Masks, block: &[usize], blocks: usize, ell: u32) -> bool {
    let n = block.len();
    let mut bag = vec![0u64; blocks];
    for (i, &b) in block.iter().enumerate() {
        bag[b] |= 1 << i;
    }
    if !bag.iter().all(|&s| connected_mask(&m.adj, s)) {
        return false;
    }
    let mut qadj = vec![0u64; blocks];
    for a in 0..n {
        for b in a + 1..n {
            if m.adj[a] >> b & 1 == 1 && block[a] != block[b] {
                qadj[block[a]] |= 1 << block[b];
                qadj[block[b]] |= 1 << block[a];
            }
        }
    }
    let qedges: u32 = qadj.iter().map(|x| x.count_ones()).sum::<u32>() / 2;
    let full = if blocks == 64 { u64::MAX } else { (1u64 << blocks) - 1 };
    connected_mask(&qadj, full) && (qedges as usize) < blocks + ell as usize
}

/// Minimum `sum(|bag| - 1)` over all witness structures into `T_ell`,
/// by enumerating every set partition. Only for small graphs.
pub fn brute_opt(g: &Graph, ell: u32) -> Option<usize> {
    let m = masks(g);
    let n = m.ids.len();
    assert!(n <= 9, "partition brute force is for tiny graphs");
    let mut best: Option<usize> = None;
    for_each_partition(n, &mut |block, blocks| {
        let cost = n - blocks;
        if best.is_some_and(|b| b <= cost) {
            return;
        }
        if partition_works(&m, block, blocks, ell) {
            best = Some(cost);
        }
    });
    best
}

/// Checks an edge set directly: contract it with union-find and count the
/// quotient.
pub fn solution_works(g: &Graph, f: &[Edge], ell: u32, k: i64) -> bool {
    if f.len() as i64 > k || f.iter().any(|e| !g.contains_edge(*e)) {
        return false;
    }
    let m = masks(g);
    let pos = |v: Vertex| m.ids.iter().position(|&x| x == v).unwrap();
    let n = m.ids.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in f {
        let (a, b) = (find(&mut parent, pos(e.lo())), find(&mut parent, pos(e.hi())));
        parent[a] = b;
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut ids: Vec<usize> = roots.clone();
    ids.sort();
    ids.dedup();
    let block: Vec<usize> = roots.iter().map(|r| ids.binary_search(r).unwrap()).collect();
    partition_works(&m, &block, ids.len(), ell)
}

/// Size of a minimum connected vertex cover; the empty set covers a graph
/// without edges.
pub fn brute_cvc(g: &Graph) -> usize {
    let m = masks(g);
    let n = m.ids.len();
    assert!(n <= 20);
    let mut best = n;
    for set in 0u64..(1 << n) {
        let size = set.count_ones() as usize;
        if size >= best {
            continue;
        }
        let covers = (0..n).all(|i| set >> i & 1 == 1 || m.adj[i] & !set == 0);
        if covers && connected_mask(&m.adj, set) {
            best = size;
        }
    }
    best
}

pub fn is_vertex_cover(g: &Graph, c: &std::collections::BTreeSet<Vertex>) -> bool {
    g.edges().all(|e| c.contains(&e.lo()) || c.contains(&e.hi()))
}

/// Chromatic number by trying every coloring with `c` colors, `c = 1, 2, ...`.
pub fn brute_chromatic(g: &Graph) -> usize {
    let m = masks(g);
    let n = m.ids.len();
    if n == 0 {
        return 0;
    }
    for c in 1..=n {
        let mut col = vec![0usize; n];
        if color_from(&m.adj, 0, c, &mut col) {
            return c;
        }
    }
    n
}

fn color_from(adj: &[u64], i: usize, c: usize, col: &mut [usize]) -> bool {
    if i == col.len() {
        return true;
    }
    for x in 0..c {
        if (0..i).all(|j| adj[i] >> j & 1 == 0 || col[j] != x) {
            col[i] = x;
            if color_from(adj, i + 1, c, col) {
                return true;
            }
        }
    }
    false
}

/// `2 * ceil(sqrt(ell)) + 2`, computed with integer search.
pub fn color_bound(ell: u32) -> usize {
    let mut r = 0u32;
    while r * r < ell {
        r += 1;
    }
    2 * r as usize + 2
}

pub fn in_t_ell(g: &Graph, ell: u32) -> bool {
    g.is_connected() && g.edge_count() < g.vertex_count() + ell as usize
}

pub fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |c, j| c * (n - j) / (j + 1))
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
