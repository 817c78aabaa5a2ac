//! The discrete part of the local height pairing on a semi-stable model.
//!
//! A degree-zero divisor `D` is corrected by rational multiples `a_v` of the
//! special-fibre components so that it meets every component trivially; then
//! `D̃·E = D·E + Σ_v a_v deg_{U_v}E`. Intersection products are normalized with
//! coefficient 1.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::graph::{DualGraph, GraphError, GreenOperator, VertexFn};
use crate::linalg::Matrix;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightError {
    Graph(GraphError),
    ComponentOutOfRange { label: String, component: usize },
    DuplicatePoint(String),
    NonzeroDegree { degree: i64 },
    CrossComponent { d_point: String, e_point: String },
    ConflictingPairing { d_point: String, e_point: String },
}

impl fmt::Display for HeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightError::Graph(e) => write!(f, "{e}"),
            HeightError::ComponentOutOfRange { label, component } => {
                write!(f, "point {label:?} lies on nonexistent component {component}")
            }
            HeightError::DuplicatePoint(l) => write!(f, "point {l:?} listed twice"),
            HeightError::NonzeroDegree { degree } => write!(f, "divisor has degree {degree}, expected 0"),
            HeightError::CrossComponent { d_point, e_point } => {
                write!(f, "horizontal pairing of {d_point:?} and {e_point:?}, which reduce to different components")
            }
            HeightError::ConflictingPairing { d_point, e_point } => {
                write!(f, "conflicting horizontal pairings given for ({d_point:?}, {e_point:?})")
            }
        }
    }
}

impl core::error::Error for HeightError {}

impl From<GraphError> for HeightError {
    fn from(e: GraphError) -> Self {
        HeightError::Graph(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorPoint {
    pub label: String,
    pub multiplicity: i64,
    /// Vertex of the component the point reduces to.
    pub component: usize,
}

/// A divisor `Σ n_P (P)` with reduction data, plus horizontal intersection
/// numbers `P·Q` against points `Q` of the divisor it will be paired with.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorPlacement {
    pub points: Vec<DivisorPoint>,
    /// Keyed by (own point label, other divisor's point label).
    pub horizontal: BTreeMap<(String, String), Rational>,
}

impl DivisorPlacement {
    pub fn new(points: impl IntoIterator<Item = (String, i64, usize)>) -> Self {
        let points = points
            .into_iter()
            .map(|(label, multiplicity, component)| DivisorPoint { label, multiplicity, component })
            .collect();
        Self { points, horizontal: BTreeMap::new() }
    }

    pub fn with_pairing(mut self, own: &str, other: &str, value: Rational) -> Self {
        self.horizontal.insert((own.into(), other.into()), value);
        self
    }

    pub fn degree(&self) -> i64 {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn validate(&self, graph: &DualGraph) -> Result<(), HeightError> {
        let mut seen = BTreeSet::new();
        for p in &self.points {
            if p.component >= graph.vertex_count() {
                return Err(HeightError::ComponentOutOfRange { label: p.label.clone(), component: p.component });
            }
            if !seen.insert(&p.label) {
                return Err(HeightError::DuplicatePoint(p.label.clone()));
            }
        }
        match self.degree() {
            0 => Ok(()),
            degree => Err(HeightError::NonzeroDegree { degree }),
        }
    }

    /// `v ↦ deg_{U_v} D`.
    pub fn degree_profile(&self, graph: &DualGraph) -> VertexFn<Rational> {
        let mut f = VertexFn::zeros(graph.vertex_count());
        for p in &self.points {
            f.values[p.component] += Rational::from_integer(p.multiplicity.into());
        }
        f
    }
}

/// `T_v · T_w`: 1 for adjacent components, `−deg(w)` on the diagonal.
pub fn intersection_matrix(graph: &DualGraph) -> Matrix {
    graph.laplacian_matrix().scale(&Rational::from_integer((-1).into()))
}

/// The multiples `a_v` with `(D + Σ a_v T_v)·T_w = 0` for all `w` and `a(anchor) = 0`.
pub fn vertical_correction(
    graph: &DualGraph,
    d: &DivisorPlacement,
    anchor: usize,
) -> Result<VertexFn<Rational>, HeightError> {
    d.validate(graph)?;
    Ok(graph.solve_poisson(&d.degree_profile(graph), anchor)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightReport {
    pub value: Rational,
    pub vertical: Rational,
    pub horizontal: Rational,
    pub anchor: usize,
    pub correction: VertexFn<Rational>,
}

/// Horizontal pairings from both placements, keyed (D point, E point).
fn merged_pairings(
    d: &DivisorPlacement,
    e: &DivisorPlacement,
) -> Result<BTreeMap<(String, String), Rational>, HeightError> {
    let mut out = d.horizontal.clone();
    for ((own, other), v) in &e.horizontal {
        let key = (other.clone(), own.clone());
        match out.get(&key) {
            Some(existing) if existing != v => {
                return Err(HeightError::ConflictingPairing { d_point: key.0, e_point: key.1 });
            }
            _ => {
                out.insert(key, v.clone());
            }
        }
    }
    Ok(out)
}

fn horizontal_part(d: &DivisorPlacement, e: &DivisorPlacement) -> Result<Rational, HeightError> {
    let pairings = merged_pairings(d, e)?;
    let mut total = Rational::zero();
    for p in &d.points {
        for q in &e.points {
            let Some(value) = pairings.get(&(p.label.clone(), q.label.clone())) else {
                continue;
            };
            if value.is_zero() {
                continue;
            }
            if p.component != q.component {
                return Err(HeightError::CrossComponent { d_point: p.label.clone(), e_point: q.label.clone() });
            }
            total += value * Rational::from_integer((p.multiplicity * q.multiplicity).into());
        }
    }
    Ok(total)
}

/// `D̃·E` with the correction of `D` normalized at `anchor`.
pub fn discrete_height(
    graph: &DualGraph,
    d: &DivisorPlacement,
    e: &DivisorPlacement,
    anchor: usize,
) -> Result<HeightReport, HeightError> {
    discrete_height_with(graph, &graph.green(anchor), d, e)
}

/// As [`discrete_height`], reusing a precomputed Green operator.
pub fn discrete_height_with(
    graph: &DualGraph,
    green: &GreenOperator,
    d: &DivisorPlacement,
    e: &DivisorPlacement,
) -> Result<HeightReport, HeightError> {
    d.validate(graph)?;
    e.validate(graph)?;
    let correction = green.solve(&d.degree_profile(graph))?;
    let profile = e.degree_profile(graph);
    let vertical: Rational = correction.values.iter().zip(&profile.values).map(|(a, b)| a * b).sum();
    let horizontal = horizontal_part(d, e)?;
    Ok(HeightReport { value: &vertical + &horizontal, vertical, horizontal, anchor: green.anchor(), correction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use alloc::format;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn pts(v: &[(&str, i64, usize)]) -> DivisorPlacement {
        DivisorPlacement::new(v.iter().map(|&(l, m, c)| (l.into(), m, c)))
    }

    #[test]
    fn intersection_matrix_examples() {
        let path = DualGraph::path(2).unwrap();
        assert_eq!(intersection_matrix(&path), Matrix::from_i64(&[&[-1, 1], &[1, -1]]));
        let tri = DualGraph::cycle(3).unwrap();
        assert_eq!(intersection_matrix(&tri), Matrix::from_i64(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]]));
        let point = DualGraph::from_indices(1, &[]).unwrap();
        assert_eq!(intersection_matrix(&point), Matrix::from_i64(&[&[0]]));
    }

    #[test]
    fn vertical_correction_examples() {
        let sq = DualGraph::cycle(4).unwrap();
        let local = pts(&[("P", 1, 2), ("Q", -1, 2)]);
        assert!(vertical_correction(&sq, &local, 0).unwrap().is_zero());
        let d = pts(&[("P", 1, 1), ("O", -1, 0)]);
        let a = vertical_correction(&sq, &d, 0).unwrap();
        assert_eq!(a.values, vec![rational(0, 1), rational(3, 4), rational(1, 2), rational(1, 4)]);
        // Every component meets the corrected divisor trivially.
        let m = intersection_matrix(&sq);
        let meet = m.apply(&a.values);
        for (w, x) in d.degree_profile(&sq).values.iter().zip(meet) {
            assert!((w + x).is_zero());
        }
        let tri = DualGraph::cycle(3).unwrap();
        let a = vertical_correction(&tri, &pts(&[("A", 1, 0), ("B", -1, 1)]), 2).unwrap();
        assert_eq!(a.values, vec![rational(1, 3), rational(-1, 3), rational(0, 1)]);
    }

    #[test]
    fn height_examples() {
        let sq = DualGraph::cycle(4).unwrap();
        let d = pts(&[("P", 1, 1), ("O", -1, 0)]);
        let e = pts(&[("Q", 1, 2), ("O'", -1, 0)]);
        let r = discrete_height(&sq, &d, &e, 0).unwrap();
        assert_eq!(r.value, rational(1, 2));
        assert_eq!(discrete_height(&sq, &e, &d, 0).unwrap().value, rational(1, 2));

        let d = pts(&[("P", 1, 3), ("R", -1, 3)]).with_pairing("P", "Q", rational(2, 1));
        let e = pts(&[("Q", 1, 3), ("S", -1, 3)]).with_pairing("S", "R", rational(5, 1));
        let r = discrete_height(&sq, &d, &e, 1).unwrap();
        assert_eq!((r.vertical, r.horizontal.clone()), (rational(0, 1), rational(7, 1)));
        assert_eq!(r.value, r.horizontal);
    }

    #[test]
    fn height_errors() {
        let sq = DualGraph::cycle(4).unwrap();
        let good = pts(&[("A", 1, 0), ("B", -1, 1)]);
        assert_eq!(discrete_height(&sq, &pts(&[("A", 2, 0)]), &good, 0), Err(HeightError::NonzeroDegree { degree: 2 }));
        let d = good.clone().with_pairing("A", "C", rational(1, 1));
        let e = pts(&[("C", 1, 2), ("D", -1, 0)]);
        assert!(matches!(discrete_height(&sq, &d, &e, 0), Err(HeightError::CrossComponent { .. })));
        let d = good.clone().with_pairing("A", "D", rational(1, 1));
        let e2 = e.clone().with_pairing("D", "A", rational(2, 1));
        assert!(matches!(discrete_height(&sq, &d, &e2, 0), Err(HeightError::ConflictingPairing { .. })));
        assert!(matches!(
            discrete_height(&sq, &pts(&[("A", 1, 9), ("B", -1, 0)]), &e, 0),
            Err(HeightError::ComponentOutOfRange { .. })
        ));
    }

    /// A path through all vertices plus chords, so always connected.
    fn graph_strategy() -> impl Strategy<Value = DualGraph> {
        (2usize..8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..6).prop_map(move |chords| {
                let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
                for (a, b) in chords {
                    let (a, b) = (a.min(b), a.max(b));
                    if b > a + 1 && !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                }
                DualGraph::from_indices(n, &edges).unwrap()
            })
        })
    }

    /// Degree-zero divisor from (multiplicity, component) seeds, balanced on component 0.
    fn divisor(tag: &str, seeds: &[(i64, usize)], n: usize) -> DivisorPlacement {
        let mut points: Vec<(String, i64, usize)> =
            seeds.iter().enumerate().map(|(i, &(m, c))| (format!("{tag}{i}"), m, c % n)).collect();
        let total: i64 = points.iter().map(|p| p.1).sum();
        points.push((format!("{tag}_"), -total, 0));
        DivisorPlacement::new(points)
    }

    fn seeds() -> impl Strategy<Value = Vec<(i64, usize)>> {
        proptest::collection::vec((-3i64..=3, 0usize..8), 1..4)
    }

    proptest! {
        #[test]
        fn height_is_symmetric_bilinear_and_anchor_free(g in graph_strategy(), a in seeds(), b in seeds(), c in seeds()) {
            let n = g.vertex_count();
            let (d1, d2, e) = (divisor("a", &a, n), divisor("b", &b, n), divisor("c", &c, n));
            let h = |x: &DivisorPlacement, y: &DivisorPlacement, anchor: usize| discrete_height(&g, x, y, anchor).unwrap().value;
            let base = h(&d1, &e, 0);
            for anchor in 0..n {
                prop_assert_eq!(h(&d1, &e, anchor), base.clone());
            }
            prop_assert_eq!(h(&e, &d1, 0), base.clone());
            let sum = DivisorPlacement { points: d1.points.iter().chain(&d2.points).cloned().collect(), horizontal: BTreeMap::new() };
            prop_assert_eq!(h(&sum, &e, 0), base + h(&d2, &e, 0));
            // D̃·D = aᵀΔa with Δ positive semidefinite.
            prop_assert!(h(&d1, &d1, 0) >= rational(0, 1));
        }
    }
}
