use std::collections::{BTreeMap, BTreeSet};

use super::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub components: Vec<BTreeSet<Vertex>>,
    pub cut_vertices: BTreeSet<Vertex>,
    pub is_two_connected: bool,
}

/// Components, articulation points and 2-connectivity in one pass.
///
/// A graph is 2-connected here when it is connected, has at least three
/// vertices and no cut vertex.
pub fn analyze_connectivity(g: &Graph) -> Connectivity {
    let components = g.components();
    let cut_vertices = articulation_points(g);
    let is_two_connected =
        components.len() == 1 && g.vertex_count() >= 3 && cut_vertices.is_empty();
    Connectivity {
        components,
        cut_vertices,
        is_two_connected,
    }
}

impl Graph {
    pub fn cut_vertices(&self) -> BTreeSet<Vertex> {
        articulation_points(self)
    }

    pub fn is_two_connected(&self) -> bool {
        self.vertex_count() >= 3 && self.is_connected() && articulation_points(self).is_empty()
    }
}

// Iterative Hopcroft-Tarjan lowpoint computation.
fn articulation_points(g: &Graph) -> BTreeSet<Vertex> {
    let ids: Vec<Vertex> = g.vertices().collect();
    let index: BTreeMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = ids
        .iter()
        .map(|&v| g.neighbors(v).map(|u| index[&u]).collect())
        .collect();
    let n = ids.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0;

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < adj[v].len() {
                let u = adj[v][*pos];
                *pos += 1;
                if disc[u] == usize::MAX {
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else if u != parent {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&i| is_cut[i]).map(|i| ids[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Graph {
        // x = 1, triangles {1,2,3} and {1,4,5}
        Graph::from_edges([(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)]).unwrap()
    }

    fn brute_cut_vertices(g: &Graph) -> BTreeSet<Vertex> {
        let base = g.components().len();
        g.vertices()
            .filter(|&v| g.without_vertices(&BTreeSet::from([v])).components().len() > base)
            .collect()
    }

    #[test]
    fn cycle_is_two_connected() {
        let c = analyze_connectivity(&Graph::cycle(4));
        assert_eq!(c.components.len(), 1);
        assert!(c.cut_vertices.is_empty());
        assert!(c.is_two_connected);
    }

    #[test]
    fn bowtie_has_one_cut_vertex() {
        let c = analyze_connectivity(&bowtie());
        assert_eq!(c.cut_vertices, BTreeSet::from([1]));
        assert!(!c.is_two_connected);
    }

    #[test]
    fn two_disjoint_edges() {
        let g = Graph::from_edges([(1, 2), (3, 4)]).unwrap();
        let c = analyze_connectivity(&g);
        assert_eq!(c.components.len(), 2);
        assert!(!c.is_two_connected);
    }

    #[test]
    fn k2_is_not_two_connected() {
        assert!(!Graph::path(2).is_two_connected());
    }

    #[test]
    fn tarjan_matches_removal_definition() {
        let graphs = [
            bowtie(),
            Graph::path(6),
            Graph::star(4),
            Graph::complete(5),
            Graph::from_edges([(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4), (7, 8)])
                .unwrap(),
        ];
        for g in &graphs {
            assert_eq!(g.cut_vertices(), brute_cut_vertices(g), "{g:?}");
        }
    }
}
