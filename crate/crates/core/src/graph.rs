//! Multigraphs and directed multigraphs on at most 32 vertices.
//!
//! Vertices carry 1-based external labels `1..=n`.  Internally a vertex `v`
//! is the bit `v - 1` of a [`VertexSet`] mask, so subset-indexed tables are
//! dense arrays of length `2^n`.  Loops and parallel edges are allowed
//! everywhere and are kept with multiplicity.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashSet;

/// Hard cap on the vertex count; masks must fit in a `u32`.
pub const MAX_VERTICES: usize = 32;

/// A set of vertices encoded as a bitmask (bit `v-1` stands for vertex `v`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The full set `{1, .., n}`.
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        VertexSet(((1u64 << n) - 1) as u32)
    }

    /// Singleton set of the vertex with 0-based index `v`.
    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1 << v)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Membership by 0-based vertex index.
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(self, v: usize) -> VertexSet {
        VertexSet(self.0 | 1 << v)
    }

    pub fn remove(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1 << v))
    }

    /// Smallest 0-based vertex index, if any.
    pub fn min_vertex(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Iterate 0-based vertex indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    /// Index into a `2^n`-sized table.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An undirected multigraph: loops and parallel edges allowed.
///
/// Immutable after construction, so references can be shared freely across
/// worker threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    /// Edges as parsed, 0-based endpoint indices, order preserved.
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    /// Build from 1-based endpoint pairs.
    pub fn new(n: usize, edges_1based: &[(usize, usize)]) -> Result<Multigraph> {
        if n < 1 {
            return Err(Error::Invalid("graph must have at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!(
                "vertex count {n} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        let mut edges = Vec::with_capacity(edges_1based.len());
        for &(u, v) in edges_1based {
            if u < 1 || u > n || v < 1 || v > n {
                return Err(Error::Invalid(format!(
                    "edge endpoint out of range: ({u}, {v}) with n = {n}"
                )));
            }
            edges.push((u - 1, v - 1));
        }
        Ok(Multigraph { n, edges })
    }

    /// Parse the plain edge-list format: the first non-comment line is `n`,
    /// every following non-comment line is `u v` with 1-based labels.
    /// Lines whose first non-blank character is `#` are comments; blank
    /// lines are skipped; CRLF input is accepted.
    pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
        let (n, edges) = parse_pairs(text)?;
        Ok(Multigraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges with 0-based endpoints, in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Neighbour mask of vertex `v` (no loops, multiplicity collapsed).
    pub fn adjacency_mask(&self, v: usize) -> u32 {
        let mut mask = 0u32;
        for &(a, b) in &self.edges {
            if a == v && b != v {
                mask |= 1 << b;
            } else if b == v && a != v {
                mask |= 1 << a;
            }
        }
        mask
    }

    fn adjacency_masks(&self) -> Vec<u32> {
        let mut masks = vec![0u32; self.n];
        for &(a, b) in &self.edges {
            if a != b {
                masks[a] |= 1 << b;
                masks[b] |= 1 << a;
            }
        }
        masks
    }

    /// Number of edges of `G[X]`, loops and multiplicity included.
    pub fn induced_edge_count(&self, x: VertexSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| x.contains(a) && x.contains(b))
            .count()
    }

    /// Dense table of `induced_edge_count` over all `2^n` subsets, built
    /// incrementally: e(X) = e(X \ {i}) + deg_{X \ {i}}(i) + loops(i) where
    /// `i` is the lowest vertex of `X`.
    pub fn induced_edge_count_table(&self) -> Vec<u32> {
        // Per-vertex incidence lists: (other endpoint, multiplicity); a loop
        // at v is recorded once under v with its own multiplicity.
        let mut incident: Vec<Vec<(usize, u32)>> = vec![Vec::new(); self.n];
        let mut add = |v: usize, u: usize| {
            if let Some(entry) = incident[v].iter_mut().find(|e| e.0 == u) {
                entry.1 += 1;
            } else {
                incident[v].push((u, 1));
            }
        };
        for &(a, b) in &self.edges {
            if a == b {
                add(a, a);
            } else {
                add(a, b);
                add(b, a);
            }
        }
        let size = 1usize << self.n;
        let mut table = vec![0u32; size];
        for mask in 1..size {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut e = table[rest];
            for &(u, mult) in &incident[i] {
                if u == i || rest >> u & 1 == 1 {
                    e += mult;
                }
            }
            table[mask] = e;
        }
        table
    }

    /// Connected components, sorted by their minimum vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_of_subset(self.full_set())
    }

    /// Connected components of the induced subgraph `G[X]`, sorted by
    /// minimum vertex.  Isolated vertices of `X` are singleton components.
    pub fn components_of_subset(&self, x: VertexSet) -> Vec<VertexSet> {
        let adj = self.adjacency_masks();
        self.components_with(&adj, x)
    }

    fn components_with(&self, adj: &[u32], x: VertexSet) -> Vec<VertexSet> {
        let mut remaining = x.0;
        let mut out = Vec::new();
        while remaining != 0 {
            let start = remaining.trailing_zeros() as usize;
            let mut comp = 1u32 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u32;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= adj[v] & x.0 & !comp;
                }
                comp |= next;
                frontier = next;
            }
            out.push(VertexSet(comp));
            remaining &= !comp;
        }
        out
    }

    /// Is `G[X]` connected?  The empty set is not connected.
    pub fn is_connected_subset(&self, x: VertexSet) -> bool {
        !x.is_empty() && self.components_of_subset(x).len() == 1
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_subset(self.full_set())
    }

    /// Number of spanning trees, exactly, via an integer-preserving
    /// (fraction-free) elimination of the reduced Laplacian.  Loops are
    /// ignored; parallel edges contribute multiplicity; a disconnected graph
    /// has no spanning tree and yields 0.
    pub fn spanning_tree_count(&self) -> num_bigint::BigUint {
        let n = self.n;
        if n == 1 {
            return num_bigint::BigUint::from(1u32);
        }
        // Reduced Laplacian: drop the last row and column.
        let d = n - 1;
        let mut lap = vec![vec![BigInt::zero(); d]; d];
        for &(a, b) in &self.edges {
            if a == b {
                continue;
            }
            if a < d {
                lap[a][a] += 1;
            }
            if b < d {
                lap[b][b] += 1;
            }
            if a < d && b < d {
                lap[a][b] -= 1;
                lap[b][a] -= 1;
            }
        }
        let det = bareiss_determinant(&mut lap);
        debug_assert!(!det.is_negative(), "Laplacian minor must be nonnegative");
        det.to_biguint().unwrap_or_default()
    }

    /// Number of nonempty vertex subsets inducing a connected subgraph.
    ///
    /// Enumerates connected sets by breadth-first growth from singletons, so
    /// the cost is proportional to the answer times `n` (a graph can have up
    /// to `2^n - 1` connected sets, so this is exponential in the worst
    /// case).
    pub fn count_connected_sets(&self) -> u64 {
        let adj = self.adjacency_masks();
        let mut seen: HashSet<u32> = HashSet::new();
        let mut stack: Vec<u32> = Vec::new();
        for v in 0..self.n {
            let s = 1u32 << v;
            seen.insert(s);
            stack.push(s);
        }
        while let Some(x) = stack.pop() {
            let mut boundary = 0u32;
            let mut rest = x;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                boundary |= adj[v];
            }
            boundary &= !x;
            while boundary != 0 {
                let u = boundary.trailing_zeros() as usize;
                boundary &= boundary - 1;
                let y = x | 1 << u;
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() as u64
    }

    /// The subgraph induced by `X`, with vertices relabelled compactly in
    /// ascending order of their original index.  Edge order is preserved.
    pub fn induced_subgraph(&self, x: VertexSet) -> Multigraph {
        let mut rank = vec![usize::MAX; self.n];
        for (i, v) in x.iter().enumerate() {
            rank[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| x.contains(a) && x.contains(b))
            .map(|&(a, b)| (rank[a], rank[b]))
            .collect();
        Multigraph { n: x.len(), edges }
    }

    /// Relabel vertices: `perm[v]` is the new 0-based index of old vertex
    /// `v`.  `perm` must be a permutation of `0..n`.
    pub fn permute(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut check = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !check[p], "not a permutation");
            check[p] = true;
        }
        let edges = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Multigraph { n: self.n, edges }
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph { n, edges }
    }

    /// Cycle `C_n` (for n = 1 a single loop, for n = 2 a parallel pair).
    pub fn cycle(n: usize) -> Multigraph {
        let edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Multigraph { n, edges }
    }

    /// Path on `n` vertices (`n - 1` edges).
    pub fn path(n: usize) -> Multigraph {
        let edges = (0..n.saturating_sub(1)).map(|v| (v, v + 1)).collect();
        Multigraph { n, edges }
    }

    /// The Petersen graph (outer 5-cycle, spokes, inner pentagram).
    pub fn petersen() -> Multigraph {
        let mut edges = Vec::new();
        for v in 0..5 {
            edges.push((v, (v + 1) % 5)); // outer cycle
            edges.push((v, v + 5)); // spoke
            edges.push((v + 5, (v + 2) % 5 + 5)); // inner pentagram
        }
        Multigraph { n: 10, edges }
    }
}

/// A directed multigraph: loops and parallel arcs allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    /// Arcs `(tail, head)` with 0-based indices, order preserved.
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    /// Build from 1-based `(tail, head)` pairs.
    pub fn new(n: usize, arcs_1based: &[(usize, usize)]) -> Result<Digraph> {
        let g = Multigraph::new(n, arcs_1based)?;
        Ok(Digraph { n: g.n, arcs: g.edges })
    }

    /// Parse the same edge-list format as [`Multigraph::parse_edge_list`];
    /// each line `u v` is the arc `u -> v`.
    pub fn parse_edge_list(text: &str) -> Result<Digraph> {
        let (n, arcs) = parse_pairs(text)?;
        Ok(Digraph { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Arc multiplicity matrix `a[tail][head]`.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.n]; self.n];
        for &(a, b) in &self.arcs {
            m[a][b] += 1;
        }
        m
    }

    /// Relabel vertices; `perm[v]` is the new 0-based index of old `v`.
    pub fn permute(&self, perm: &[usize]) -> Digraph {
        let g = Multigraph { n: self.n, edges: self.arcs.clone() }.permute(perm);
        Digraph { n: g.n, arcs: g.edges }
    }
}

/// Shared edge-list parser; returns `(n, 0-based pairs)`.
fn parse_pairs(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                if tokens.len() != 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected the vertex count alone, got {:?}", line),
                    });
                }
                let value: i64 = tokens[0].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("vertex count is not an integer: {:?}", tokens[0]),
                })?;
                if value < 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("vertex count must be at least 1, got {value}"),
                    });
                }
                if value as usize > MAX_VERTICES {
                    return Err(Error::Capacity(format!(
                        "line {line_no}: vertex count {value} exceeds the supported maximum {MAX_VERTICES}"
                    )));
                }
                n = Some(value as usize);
            }
            Some(n) => {
                if tokens.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected an edge `u v`, got {:?}", line),
                    });
                }
                let mut pair = [0usize; 2];
                for (k, tok) in tokens.iter().enumerate() {
                    let value: i64 = tok.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("endpoint is not an integer: {:?}", tok),
                    })?;
                    if value < 1 || value as usize > n {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("endpoint {value} out of range 1..={n}"),
                        });
                    }
                    pair[k] = value as usize - 1;
                }
                edges.push((pair[0], pair[1]));
            }
        }
    }
    match n {
        Some(n) => Ok((n, edges)),
        None => Err(Error::Parse { line: 1, msg: "empty input: missing vertex count".into() }),
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
/// Consumes the matrix.  The empty matrix has determinant 1.
fn bareiss_determinant(a: &mut [Vec<BigInt>]) -> BigInt {
    let d = a.len();
    if d == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..d - 1 {
        if a[k][k].is_zero() {
            // Pivot: swap with a lower row that has a nonzero entry.
            let swap = (k + 1..d).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Bareiss: division by the previous pivot is exact.
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[d - 1][d - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}
