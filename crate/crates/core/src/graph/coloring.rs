use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Edge, Graph, GraphError, Vertex};

/// Total vertex coloring with colors `0..q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: BTreeMap<Vertex, u32>,
}

impl Coloring {
    pub fn new(colors: BTreeMap<Vertex, u32>) -> Coloring {
        Coloring { colors }
    }

    /// Assigns `values[i]` to the `i`-th smallest vertex of `g`.
    pub fn from_slice(g: &Graph, values: &[u32]) -> Coloring {
        assert_eq!(values.len(), g.vertex_count(), "one color per vertex");
        Coloring {
            colors: g.vertices().zip(values.iter().copied()).collect(),
        }
    }

    pub fn color(&self, v: Vertex) -> Option<u32> {
        self.colors.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.colors.iter().map(|(&v, &c)| (v, c))
    }

    pub fn distinct_colors(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    pub fn is_total_on(&self, g: &Graph) -> bool {
        g.vertices().all(|v| self.colors.contains_key(&v))
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().all(|e| self.color(e.lo()) != self.color(e.hi()))
    }
}

/// Smallest `r` with `r * r >= x`.
pub fn ceil_sqrt(x: u32) -> u32 {
    let mut r = (x as f64).sqrt() as u32;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Number of colors `2 * ceil(sqrt(ell)) + 2` used for graphs in `T_ell`.
pub fn color_budget(ell: u32) -> u32 {
    2 * ceil_sqrt(ell) + 2
}

/// Proper coloring of a graph in `T_ell` with at most `color_budget(ell)`
/// colors.
///
/// Fixes a BFS spanning tree, colors the endpoints of the non-tree edges with
/// at most `2 * ceil(sqrt(ell))` colors, then 2-colors the remaining forest
/// with two fresh colors.
pub fn proper_color_t_ell(g: &Graph, ell: u32) -> Result<Coloring, GraphError> {
    if !g.is_in_t_ell(ell) {
        return Err(GraphError::NotInClass { ell });
    }
    let tree: BTreeSet<Edge> = g.spanning_forest().into_iter().collect();
    let marked: BTreeSet<Vertex> = g
        .edges()
        .filter(|e| !tree.contains(e))
        .flat_map(|e| [e.lo(), e.hi()])
        .collect();
    let inner_budget = 2 * ceil_sqrt(ell);
    let mut colors = color_exactly(&g.induced_subgraph(&marked), inner_budget)
        .ok_or(GraphError::NotInClass { ell })?;

    // The rest induces a forest: every non-tree edge has both ends marked.
    let rest = g.without_vertices(&marked);
    for root in rest.vertices() {
        if colors.contains_key(&root) {
            continue;
        }
        colors.insert(root, inner_budget);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let c = colors[&v];
            for u in rest.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = colors.entry(u) {
                    e.insert(if c == inner_budget { inner_budget + 1 } else { inner_budget });
                    queue.push_back(u);
                }
            }
        }
    }
    Ok(Coloring { colors })
}

// Backtracking search for a proper coloring with at most `cap` colors,
// trying the fewest colors first.
fn color_exactly(g: &Graph, cap: u32) -> Option<BTreeMap<Vertex, u32>> {
    if g.vertex_count() == 0 {
        return Some(BTreeMap::new());
    }
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for limit in 1..=cap {
        let mut assign = BTreeMap::new();
        if extend(g, &order, 0, limit, &mut assign) {
            return Some(assign);
        }
    }
    None
}

fn extend(
    g: &Graph,
    order: &[Vertex],
    at: usize,
    limit: u32,
    assign: &mut BTreeMap<Vertex, u32>,
) -> bool {
    let Some(&v) = order.get(at) else {
        return true;
    };
    let used: BTreeSet<u32> = g.neighbors(v).filter_map(|u| assign.get(&u).copied()).collect();
    // new colors are symmetric; only try the first unused one
    let fresh = assign.values().max().map_or(0, |m| m + 1);
    for c in 0..limit.min(fresh + 1) {
        if used.contains(&c) {
            continue;
        }
        assign.insert(v, c);
        if extend(g, order, at + 1, limit, assign) {
            return true;
        }
        assign.remove(&v);
    }
    false
}
