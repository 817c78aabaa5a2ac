//! Cohomology of finite oriented graphs.
//!
//! Vertex functions and cochains are generic over [`Coefficient`]; the
//! Laplacian and its Green operator are rational matrices, so the same exact
//! solve handles ℚ-valued and ℚ_p[Λ]-valued data.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::linalg::{self, Matrix};
use crate::scalar::{combine, Coefficient};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    NoVertices,
    DuplicateVertex(String),
    DuplicateEdge(String),
    UnknownVertex(String),
    UnknownEdge(String),
    SelfLoop(String),
    MultiEdge {
        first: String,
        second: String,
    },
    Disconnected,
    /// `Σ_v g(v) ≠ 0`, so `Δf = g` has no solution.
    Unsolvable,
    LengthMismatch {
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NoVertices => f.write_str("graph has no vertices"),
            GraphError::DuplicateVertex(v) => write!(f, "duplicate vertex {v:?}"),
            GraphError::DuplicateEdge(e) => write!(f, "duplicate edge id {e:?}"),
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex {v:?}"),
            GraphError::UnknownEdge(e) => write!(f, "unknown edge {e:?}"),
            GraphError::SelfLoop(e) => write!(f, "edge {e:?} is a self-loop"),
            GraphError::MultiEdge { first, second } => {
                write!(f, "edges {first:?} and {second:?} join the same pair of vertices")
            }
            GraphError::Disconnected => f.write_str("graph is not connected"),
            GraphError::Unsolvable => f.write_str("right-hand side does not sum to zero over the vertices"),
            GraphError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
        }
    }
}

impl core::error::Error for GraphError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// An edge together with a direction: `forward` means the stored one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn reversed(self) -> Self {
        Self { forward: !self.forward, ..self }
    }
}

/// A connected simple graph with labelled vertices and oriented edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: BTreeMap<String, usize>,
    edge_index: BTreeMap<String, usize>,
}

impl DualGraph {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut out = Vec::new();
        let mut edge_index = BTreeMap::new();
        let mut pairs: BTreeMap<(usize, usize), String> = BTreeMap::new();
        for (id, tail, head) in edges {
            let t = *vertex_index.get(&tail).ok_or(GraphError::UnknownVertex(tail))?;
            let h = *vertex_index.get(&head).ok_or(GraphError::UnknownVertex(head))?;
            if t == h {
                return Err(GraphError::SelfLoop(id));
            }
            if let Some(first) = pairs.insert((t.min(h), t.max(h)), id.clone()) {
                return Err(GraphError::MultiEdge { first, second: id });
            }
            if edge_index.insert(id.clone(), out.len()).is_some() {
                return Err(GraphError::DuplicateEdge(id));
            }
            out.push(Edge { id, tail: t, head: h });
        }
        let g = Self { vertices, edges: out, vertex_index, edge_index };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Builds a graph from vertex count and index pairs; vertices are named
    /// `v0, v1, …` and edges `e0, e1, …`.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let names: Vec<String> = (0..n).map(|i| alloc::format!("v{i}")).collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(k, &(t, h))| {
                let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| alloc::format!("v{i}"));
                (alloc::format!("e{k}"), name(t), name(h))
            })
            .collect::<Vec<_>>();
        Self::new(names.clone(), edges)
    }

    /// The cycle `v0 → v1 → … → v(n−1) → v0`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_indices(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_indices(n, &edges)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut adj = alloc::vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        let mut seen = BTreeSet::from([0]);
        let mut stack = alloc::vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, label: &str) -> Result<usize, GraphError> {
        self.vertex_index.get(label).copied().ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index.get(id).copied().ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn tail(&self, e: OrientedEdge) -> usize {
        let edge = &self.edges[e.edge];
        if e.forward {
            edge.tail
        } else {
            edge.head
        }
    }

    pub fn head(&self, e: OrientedEdge) -> usize {
        self.tail(e.reversed())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.tail == v || e.head == v).count()
    }

    /// Oriented edges whose tail is `v`.
    pub fn outgoing(&self, v: usize) -> impl Iterator<Item = OrientedEdge> + '_ {
        self.edges.iter().enumerate().filter_map(move |(i, e)| {
            if e.tail == v {
                Some(OrientedEdge { edge: i, forward: true })
            } else if e.head == v {
                Some(OrientedEdge { edge: i, forward: false })
            } else {
                None
            }
        })
    }

    /// The matrix of `d`, rows indexed by stored edges.
    pub fn coboundary_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.edges.len(), self.vertices.len());
        for (i, e) in self.edges.iter().enumerate() {
            m.set(i, e.tail, Rational::from_integer(1.into()));
            m.set(i, e.head, Rational::from_integer((-1).into()));
        }
        m
    }

    pub fn laplacian_matrix(&self) -> Matrix {
        let d = self.coboundary_matrix();
        d.transpose().mul(&d)
    }

    pub fn h1_dimension(&self) -> usize {
        self.edges.len() - linalg::rank(&self.coboundary_matrix())
    }

    pub fn d<C: Coefficient>(&self, f: &VertexFn<C>) -> Cochain<C> {
        let values = self.edges.iter().map(|e| f.values[e.tail].clone() - f.values[e.head].clone()).collect();
        Cochain { values }
    }

    pub fn d_star<C: Coefficient>(&self, c: &Cochain<C>) -> VertexFn<C> {
        let mut values = alloc::vec![C::zero_value(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            values[e.tail] = values[e.tail].clone() + c.values[i].clone();
            values[e.head] = values[e.head].clone() - c.values[i].clone();
        }
        VertexFn { values }
    }

    pub fn laplacian<C: Coefficient>(&self, f: &VertexFn<C>) -> VertexFn<C> {
        self.d_star(&self.d(f))
    }

    pub fn green(&self, anchor: usize) -> GreenOperator {
        GreenOperator::new(self, anchor)
    }

    pub fn solve_poisson<C: Coefficient>(&self, g: &VertexFn<C>, anchor: usize) -> Result<VertexFn<C>, GraphError> {
        self.green(anchor).solve(g)
    }

    /// Splits `c = harmonic + dγ` with `γ(anchor) = 0`.
    pub fn harmonic_project<C: Coefficient>(
        &self,
        c: &Cochain<C>,
        anchor: usize,
    ) -> Result<(Cochain<C>, VertexFn<C>), GraphError> {
        self.check_cochain(c)?;
        let gamma = self.solve_poisson(&self.d_star(c), anchor)?;
        let harmonic = c.clone() - self.d(&gamma);
        Ok((harmonic, gamma))
    }

    pub fn check_vertex_fn<C>(&self, f: &VertexFn<C>) -> Result<(), GraphError> {
        check_len(self.vertices.len(), f.values.len())
    }

    pub fn check_cochain<C>(&self, c: &Cochain<C>) -> Result<(), GraphError> {
        check_len(self.edges.len(), c.values.len())
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), GraphError> {
    if expected == found {
        Ok(())
    } else {
        Err(GraphError::LengthMismatch { expected, found })
    }
}

/// The inverse of the Laplacian on functions vanishing at `anchor`.
#[derive(Debug, Clone)]
pub struct GreenOperator {
    anchor: usize,
    others: Vec<usize>,
    inverse: Matrix,
}

impl GreenOperator {
    fn new(graph: &DualGraph, anchor: usize) -> Self {
        let n = graph.vertex_count();
        assert!(anchor < n, "anchor out of range");
        let others: Vec<usize> = (0..n).filter(|&v| v != anchor).collect();
        let reduced = graph.laplacian_matrix().select(&others, &others);
        // The reduced Laplacian of a connected graph is nonsingular.
        let inverse = linalg::inverse(&reduced).expect("reduced Laplacian of a connected graph");
        Self { anchor, others, inverse }
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// Solves `Δf = g` with `f(anchor) = 0`.
    pub fn solve<C: Coefficient>(&self, g: &VertexFn<C>) -> Result<VertexFn<C>, GraphError> {
        let n = self.others.len() + 1;
        check_len(n, g.values.len())?;
        let total = g.values.iter().cloned().fold(C::zero_value(), |a, b| a + b);
        if !total.is_negligible() {
            return Err(GraphError::Unsolvable);
        }
        let rhs: Vec<C> = self.others.iter().map(|&v| g.values[v].clone()).collect();
        let mut values = alloc::vec![C::zero_value(); n];
        for (row, &v) in self.others.iter().enumerate() {
            values[v] = combine(self.inverse.row(row), &rhs);
        }
        Ok(VertexFn { values })
    }

    /// Green's function entry `G(v, w)`; zero on the anchor row and column.
    pub fn entry(&self, v: usize, w: usize) -> Rational {
        let pos = |x: usize| self.others.iter().position(|&o| o == x);
        match (pos(v), pos(w)) {
            (Some(i), Some(j)) => self.inverse.get(i, j).clone(),
            _ => Rational::zero(),
        }
    }
}

/// A function on vertices, indexed like [`DualGraph::vertices`].
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFn<C> {
    pub values: Vec<C>,
}

impl<C: Coefficient> VertexFn<C> {
    pub fn new(values: Vec<C>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: alloc::vec![C::zero_value(); n] }
    }

    pub fn delta(n: usize, v: usize, value: C) -> Self {
        let mut f = Self::zeros(n);
        f.values[v] = value;
        f
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(C::is_negligible)
    }

    pub fn map<D>(&self, f: impl FnMut(&C) -> D) -> VertexFn<D> {
        VertexFn { values: self.values.iter().map(f).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }
}

/// An antisymmetric edge function stored on the chosen orientations.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<C> {
    pub values: Vec<C>,
}

impl<C: Coefficient> Cochain<C> {
    pub fn new(values: Vec<C>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: alloc::vec![C::zero_value(); n] }
    }

    /// Value on an oriented edge: `c(−e) = −c(e)`.
    pub fn at(&self, e: OrientedEdge) -> C {
        let v = self.values[e.edge].clone();
        if e.forward {
            v
        } else {
            -v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(C::is_negligible)
    }

    pub fn map<D>(&self, f: impl FnMut(&C) -> D) -> Cochain<D> {
        Cochain { values: self.values.iter().map(f).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }
}

macro_rules! pointwise {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl<C: Coefficient> core::ops::$trait for $ty<C> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                assert_eq!(self.values.len(), rhs.values.len(), "length mismatch");
                let values = self.values.into_iter().zip(rhs.values).map(|(a, b)| a.$method(b)).collect();
                $ty { values }
            }
        }
    };
}

pointwise!(VertexFn, Add, add);
pointwise!(VertexFn, Sub, sub);
pointwise!(Cochain, Add, add);
pointwise!(Cochain, Sub, sub);

impl<C: Coefficient> core::ops::Neg for VertexFn<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

impl<C: Coefficient> core::ops::Neg for Cochain<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

/// Standard inner product `Σ a_i b_i` over ℚ.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
