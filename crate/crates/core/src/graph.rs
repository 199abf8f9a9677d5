//! Finite simple graphs, rooted decorations, and the decorated product.
//!
//! A decoration glues one copy of a rooted graph to every vertex of a base
//! graph, identifying the vertex with the copy's root. Edges split into the
//! "field" (base edges between root copies) and the "kites" (edges inside
//! each glued copy). Graphs carry sparsity only; hopping amplitudes live in
//! operators.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::operator::SymmetricOperator;
use crate::Result;

/// Finite simple graph: `n` vertices, edges as unordered pairs `{i, j}`
/// stored with `i < j`, sorted, deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates and normalizes the edge list. Self-loops and out-of-range
    /// endpoints are rejected; duplicates collapse (set semantics).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let v = a.max(b);
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self { n, edges: normalized })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Path on `n` vertices: 0-1-2-…-(n-1).
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path is valid")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is valid")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
            .expect("complete graph is valid")
    }

    /// Star with the center at vertex 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is valid")
    }

    /// Negative discrete Laplacian `-Δ = degree - adjacency`: diagonal
    /// `deg(x)`, off-diagonal `-1` per edge. With this sign the operator is
    /// positive semidefinite and `-Δ` of a decorated graph equals the
    /// decorated assembly of the factor Laplacians.
    pub fn laplacian(&self) -> SymmetricOperator {
        let mut op = SymmetricOperator::zeros(self.n);
        for &(a, b) in &self.edges {
            op.add_sym(a, b, -1.0);
            op.add_sym(a, a, 1.0);
            op.add_sym(b, b, 1.0);
        }
        op
    }
}

/// Graph with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    graph: Graph,
    root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        if root >= graph.vertex_count() {
            return Err(Error::RootOutOfRange {
                root,
                n: graph.vertex_count(),
            });
        }
        Ok(Self { graph, root })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }
}

/// The decorated product of a base graph with a rooted decoration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedGraph {
    base: Graph,
    decoration: RootedGraph,
    product: Graph,
}

impl DecoratedGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn decoration(&self) -> &RootedGraph {
        &self.decoration
    }

    pub fn product(&self) -> &Graph {
        &self.product
    }

    pub fn into_product(self) -> Graph {
        self.product
    }

    /// Index of product vertex `(x, u)`: lexicographic, base-major.
    pub fn vertex_index(&self, x: usize, u: usize) -> usize {
        x * self.decoration.graph().vertex_count() + u
    }
}

/// Glues a copy of the decoration to every base vertex, identifying the
/// vertex with the copy's root. Product vertex `(x, u)` gets index
/// `x * n_G + u`; the edge set is the field edges (base edges between root
/// copies) plus the kite edges (decoration edges inside each copy).
pub fn decorate(base: &Graph, decoration: &RootedGraph) -> DecoratedGraph {
    let n_g = decoration.graph().vertex_count();
    let root = decoration.root();
    let mut edges = Vec::with_capacity(
        base.edge_count() + base.vertex_count() * decoration.graph().edge_count(),
    );
    for &(x, y) in base.edges() {
        edges.push((x * n_g + root, y * n_g + root));
    }
    for x in 0..base.vertex_count() {
        for &(u, v) in decoration.graph().edges() {
            edges.push((x * n_g + u, x * n_g + v));
        }
    }
    let product =
        Graph::new(base.vertex_count() * n_g, edges).expect("product of valid graphs is valid");
    DecoratedGraph {
        base: base.clone(),
        decoration: decoration.clone(),
        product,
    }
}

/// Returns the first off-diagonal entry of `op` that is nonzero off the edge
/// set of `g`, or `None` when `op` is compatible with `g`.
pub fn compatibility_violation(
    op: &SymmetricOperator,
    g: &Graph,
) -> Result<Option<(usize, usize, f64)>> {
    if op.dim() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: op.dim(),
        });
    }
    for i in 0..op.dim() {
        for j in (i + 1)..op.dim() {
            let v = op.get(i, j);
            if v != 0.0 && !g.has_edge(i, j) {
                return Ok(Some((i, j, v)));
            }
        }
    }
    Ok(None)
}

/// True iff every off-diagonal entry outside the edge set is exactly zero.
pub fn check_compatibility(op: &SymmetricOperator, g: &Graph) -> Result<bool> {
    Ok(compatibility_violation(op, g)?.is_none())
}

/// JSON form of a graph: `{"n": …, "edges": [[i,j], …], "root": …?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
}

impl GraphSpec {
    pub fn new(n: usize, edges: Vec<[usize; 2]>, root: Option<usize>) -> Self {
        Self { n, edges, root }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }

    /// Requires the `root` field; used where a decoration is expected.
    pub fn to_rooted(&self) -> Result<RootedGraph> {
        let root = self.root.ok_or(Error::RootOutOfRange {
            root: usize::MAX,
            n: self.n,
        })?;
        RootedGraph::new(self.to_graph()?, root)
    }
}

impl From<&Graph> for GraphSpec {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.vertex_count(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            root: None,
        }
    }
}

impl From<&RootedGraph> for GraphSpec {
    fn from(g: &RootedGraph) -> Self {
        Self {
            n: g.graph().vertex_count(),
            edges: g.graph().edges().iter().map(|&(a, b)| [a, b]).collect(),
            root: Some(g.root()),
        }
    }
}
