//! Finite binary relations and the order machinery shared by every
//! rationalizability test in this crate.
//!
//! A [`Relation`] is a directed graph over an ordered vertex type. The three
//! operations that matter downstream are:
//!
//! * [`Relation::find_cycle`] — a certificate-producing acyclicity check,
//! * [`Relation::linear_extension`] — a deterministic topological sort that
//!   turns any acyclic relation into a [`LinearOrder`] containing it,
//! * [`Relation::transitive_closure`] — reachability by at least one edge.
//!
//! Everything is deterministic: vertices and edges live in B-tree sets, so
//! iteration follows the vertex type's `Ord`, ties in the extension are broken
//! toward the canonically smallest vertex, and reported cycles are rotated to
//! start at their smallest vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A finite binary relation, viewed as a directed graph.
///
/// Vertices may be isolated; adding an edge implicitly adds its endpoints.
/// Self-loops are representable (and reported as length-1 cycles); the
/// constructions in this crate never create them, but the checks do not
/// assume their absence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Relation<V: Ord + Clone> {
    vertices: BTreeSet<V>,
    edges: BTreeSet<(V, V)>,
}

impl<V: Ord + Clone> Relation<V> {
    pub fn new() -> Self {
        Relation { vertices: BTreeSet::new(), edges: BTreeSet::new() }
    }

    /// A relation with the given vertices and no edges.
    pub fn with_vertices(vertices: impl IntoIterator<Item = V>) -> Self {
        Relation { vertices: vertices.into_iter().collect(), edges: BTreeSet::new() }
    }

    pub fn add_vertex(&mut self, v: V) {
        self.vertices.insert(v);
    }

    /// Inserts the edge `from -> to`, adding both endpoints as vertices.
    pub fn add_edge(&mut self, from: V, to: V) {
        self.vertices.insert(from.clone());
        self.vertices.insert(to.clone());
        self.edges.insert((from, to));
    }

    pub fn contains_vertex(&self, v: &V) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_edge(&self, from: &V, to: &V) -> bool
    where
        V: Clone,
    {
        self.edges.contains(&(from.clone(), to.clone()))
    }

    /// Vertices in canonical (ascending) order.
    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        self.vertices.iter()
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> impl Iterator<Item = &(V, V)> {
        self.edges.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True when no vertex relates to itself.
    pub fn is_irreflexive(&self) -> bool {
        self.edges.iter().all(|(a, b)| a != b)
    }

    /// Sorted vertex list plus adjacency lists over vertex indices.
    ///
    /// Because both underlying sets are B-trees, the vertex list is sorted and
    /// every adjacency list is sorted, which pins down the traversal order of
    /// every algorithm below.
    fn adjacency(&self) -> (Vec<&V>, Vec<Vec<usize>>) {
        let verts: Vec<&V> = self.vertices.iter().collect();
        let index: BTreeMap<&V, usize> =
            verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        for (a, b) in &self.edges {
            adj[index[a]].push(index[b]);
        }
        (verts, adj)
    }

    /// Searches for a directed cycle and returns it as a closed walk
    /// (first vertex repeated at the end), or `None` when the relation is
    /// acyclic.
    ///
    /// The walk is rotated so that it starts at its canonically smallest
    /// vertex, making the output independent of where the search entered the
    /// cycle.
    pub fn find_cycle(&self) -> Option<Vec<V>> {
        let (verts, adj) = self.adjacency();
        let n = verts.len();
        // 0 = unvisited, 1 = on the current path, 2 = fully explored.
        let mut color = vec![0u8; n];
        let mut path: Vec<usize> = Vec::new();

        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            // Iterative DFS: (vertex, position of the next neighbour to try).
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = 1;
            path.push(start);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let w = adj[v][*next];
                    *next += 1;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            path.push(w);
                            stack.push((w, 0));
                        }
                        1 => {
                            // Back edge: the cycle is the path suffix from w.
                            let pos = path.iter().position(|&p| p == w).expect(
                                "vertex on the current path must appear in it",
                            );
                            let mut cycle: Vec<usize> = path[pos..].to_vec();
                            // Rotate so the smallest index (and therefore the
                            // canonically smallest vertex) comes first.
                            let min_pos = cycle
                                .iter()
                                .enumerate()
                                .min_by_key(|(_, &ix)| ix)
                                .map(|(p, _)| p)
                                .expect("cycle is nonempty");
                            cycle.rotate_left(min_pos);
                            let mut walk: Vec<V> =
                                cycle.iter().map(|&ix| verts[ix].clone()).collect();
                            walk.push(verts[cycle[0]].clone());
                            return Some(walk);
                        }
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    path.pop();
                    stack.pop();
                }
            }
        }
        None
    }

    /// The transitive closure: `(a, b)` is in the result exactly when `b` is
    /// reachable from `a` along one or more edges. Vertices are preserved.
    /// Cycles therefore induce self-loops in the closure.
    pub fn transitive_closure(&self) -> Relation<V> {
        let (verts, adj) = self.adjacency();
        let n = verts.len();
        let mut closure = Relation::with_vertices(self.vertices.iter().cloned());
        for start in 0..n {
            // BFS from the successors of `start`.
            let mut seen = vec![false; n];
            let mut queue: Vec<usize> = adj[start].clone();
            for &w in &queue {
                seen[w] = true;
            }
            while let Some(w) = queue.pop() {
                closure.edges.insert((verts[start].clone(), verts[w].clone()));
                for &x in &adj[w] {
                    if !seen[x] {
                        seen[x] = true;
                        queue.push(x);
                    }
                }
            }
        }
        closure
    }

    /// Extends the relation to a [`LinearOrder`] containing every edge, or
    /// returns a witnessing cycle when none exists.
    ///
    /// Deterministic: among the vertices currently available, the canonically
    /// smallest is ranked next. An empty relation over `{a, b}` therefore
    /// yields the ranking `[a, b]`.
    pub fn linear_extension(&self) -> Result<LinearOrder<V>, CyclicInput<V>> {
        let (verts, adj) = self.adjacency();
        let n = verts.len();
        let mut indegree = vec![0usize; n];
        for targets in &adj {
            for &w in targets {
                indegree[w] += 1;
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut ranking: Vec<V> = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            ranking.push(verts[v].clone());
            for &w in &adj[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if ranking.len() < n {
            let cycle = self
                .find_cycle()
                .expect("peeling left vertices, so a cycle must exist");
            return Err(CyclicInput { cycle });
        }
        Ok(LinearOrder::from_ranking(ranking))
    }
}

/// A strict linear order over a finite vertex set, stored as a ranking with
/// the highest-ranked (most preferred) vertex first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder<V: Ord + Clone> {
    ranking: Vec<V>,
    position: BTreeMap<V, usize>,
}

impl<V: Ord + Clone> LinearOrder<V> {
    /// Builds an order from a ranking, highest first.
    ///
    /// # Panics
    ///
    /// Panics if the ranking contains a repeated vertex.
    pub fn from_ranking(ranking: Vec<V>) -> Self {
        let mut position = BTreeMap::new();
        for (i, v) in ranking.iter().enumerate() {
            let previous = position.insert(v.clone(), i);
            assert!(previous.is_none(), "ranking contains a repeated vertex");
        }
        LinearOrder { ranking, position }
    }

    /// The ranked vertices, highest first.
    pub fn ranking(&self) -> &[V] {
        &self.ranking
    }

    /// Position of `v` in the ranking (0 = highest), if ranked.
    pub fn rank_of(&self, v: &V) -> Option<usize> {
        self.position.get(v).copied()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.position.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    /// True when `a` strictly outranks `b`. Both vertices must be ranked.
    ///
    /// # Panics
    ///
    /// Panics if either vertex is not part of the order.
    pub fn prefers(&self, a: &V, b: &V) -> bool {
        let ra = self.rank_of(a).expect("left vertex is not ranked");
        let rb = self.rank_of(b).expect("right vertex is not ranked");
        ra < rb
    }

    /// True when every edge `(a, b)` of `relation` has `a` outranking `b`
    /// (in particular, both endpoints must be ranked).
    pub fn contains_relation(&self, relation: &Relation<V>) -> bool {
        relation.edges().all(|(a, b)| {
            matches!((self.rank_of(a), self.rank_of(b)), (Some(ra), Some(rb)) if ra < rb)
        })
    }
}

/// Error returned by [`Relation::linear_extension`] on cyclic input, carrying
/// a witnessing cycle as a closed walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicInput<V> {
    pub cycle: Vec<V>,
}

impl<V: fmt::Display> fmt::Display for CyclicInput<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation is cyclic: ")?;
        for (i, v) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl<V: fmt::Display + fmt::Debug> std::error::Error for CyclicInput<V> {}
