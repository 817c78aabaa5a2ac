//! Vologodsky integrals assembled from local Coleman data on a dual graph,
//! and their derivatives with respect to the branch parameter Λ.
//!
//! Orientation convention: the annulus of a stored edge `e` carries the
//! coordinate `z` of its tail `e⁺`, which sits on the inner side. The raw
//! difference cochain is `c(e) = G^{e⁻} − G^{e⁺} = C_head − C_tail − a_0 Λ`,
//! i.e. the negative of [`cross_annulus_jump`], and `Nω(e) = a_0`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Cochain, DualGraph, GraphError, OrientedEdge, VertexFn};
use crate::loglaurent::{cross_annulus_jump, AnnulusForm};
use crate::padic::{derive_at_zero, PadicError, UniversalScalar};
use crate::scalar::{rational, Coefficient, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VologError {
    Graph(GraphError),
    Scalar(PadicError),
    MissingEdgeData(String),
    DuplicateEdgeData(String),
    /// A cochain required to be harmonic has nonzero flux at a vertex.
    NotHarmonic {
        name: &'static str,
        vertex: String,
    },
    /// The right-hand side of the iterated-integral Poisson problem does not
    /// sum to zero over the vertices.
    InconsistentData,
}

impl fmt::Display for VologError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VologError::Graph(e) => write!(f, "{e}"),
            VologError::Scalar(e) => write!(f, "{e}"),
            VologError::MissingEdgeData(e) => write!(f, "no local data for edge {e:?}"),
            VologError::DuplicateEdgeData(e) => write!(f, "edge {e:?} has local data twice"),
            VologError::NotHarmonic { name, vertex } => write!(f, "{name} is not harmonic at vertex {vertex:?}"),
            VologError::InconsistentData => {
                f.write_str("iterated-integral right-hand side does not sum to zero over the vertices")
            }
        }
    }
}

impl core::error::Error for VologError {}

impl From<GraphError> for VologError {
    fn from(e: GraphError) -> Self {
        VologError::Graph(e)
    }
}

impl From<PadicError> for VologError {
    fn from(e: PadicError) -> Self {
        VologError::Scalar(e)
    }
}

impl VologError {
    pub fn kind(&self) -> crate::ErrorKind {
        match self {
            VologError::Scalar(e) => e.kind(),
            _ => crate::ErrorKind::Precondition,
        }
    }
}

/// What is known about a form on one annulus, in the tail's coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeData {
    /// The local expansion and the constants of the Coleman primitives on the
    /// tail and head sides.
    Form { form: AnnulusForm, c_tail: UniversalScalar, c_head: UniversalScalar },
    /// A precomputed difference `G^{e⁻} − G^{e⁺}` and the annulus residue.
    Raw { raw_c: UniversalScalar, residue: UniversalScalar },
}

impl EdgeData {
    pub fn raw_c(&self) -> Result<UniversalScalar, PadicError> {
        match self {
            EdgeData::Form { form, c_tail, c_head } => Ok(-cross_annulus_jump(form, c_tail, c_head)?),
            EdgeData::Raw { raw_c, .. } => Ok(raw_c.clone()),
        }
    }

    pub fn residue(&self) -> UniversalScalar {
        match self {
            EdgeData::Form { form, .. } => form.residue(),
            EdgeData::Raw { residue, .. } => residue.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalColemanData {
    pub graph: DualGraph,
    /// Indexed like `graph.edges()`.
    pub edges: Vec<EdgeData>,
}

impl LocalColemanData {
    /// Matches edge data to graph edges by id.
    pub fn new(graph: DualGraph, data: impl IntoIterator<Item = (String, EdgeData)>) -> Result<Self, VologError> {
        let mut by_id = BTreeMap::new();
        for (id, d) in data {
            let idx = graph.edge(&id)?;
            if by_id.insert(idx, d).is_some() {
                return Err(VologError::DuplicateEdgeData(id));
            }
        }
        let mut edges = Vec::with_capacity(graph.edge_count());
        for (i, e) in graph.edges().iter().enumerate() {
            edges.push(by_id.remove(&i).ok_or_else(|| VologError::MissingEdgeData(e.id.clone()))?);
        }
        Ok(Self { graph, edges })
    }

    /// Data given directly as cochains.
    pub fn from_raw(
        graph: DualGraph,
        raw: &Cochain<UniversalScalar>,
        residues: &Cochain<UniversalScalar>,
    ) -> Result<Self, VologError> {
        graph.check_cochain(raw)?;
        graph.check_cochain(residues)?;
        let edges = raw
            .values
            .iter()
            .zip(&residues.values)
            .map(|(c, r)| EdgeData::Raw { raw_c: c.clone(), residue: r.clone() })
            .collect();
        Ok(Self { graph, edges })
    }

    pub fn raw_cochain(&self) -> Result<Cochain<UniversalScalar>, VologError> {
        Ok(Cochain::new(self.edges.iter().map(EdgeData::raw_c).collect::<Result<_, _>>()?))
    }

    /// `Nω(e) = res_e ω`.
    pub fn residue_cochain(&self) -> Cochain<UniversalScalar> {
        Cochain::new(self.edges.iter().map(EdgeData::residue).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssembledIntegral {
    pub raw: Cochain<UniversalScalar>,
    pub harmonic: Cochain<UniversalScalar>,
    /// Subtracted from the local primitives: `F^v = G^v − γ(v)`.
    pub gamma: VertexFn<UniversalScalar>,
    pub residues: Cochain<UniversalScalar>,
    pub anchor: usize,
}

impl AssembledIntegral {
    /// `d/dΛ γ` at Λ = 0, per vertex.
    pub fn gamma_derivative(&self) -> VertexFn<UniversalScalar> {
        self.gamma.map(|g| UniversalScalar::constant(derive_at_zero(g)))
    }

    /// `d/dΛ F^v` at Λ = 0 for Λ-free local constants: `−d/dΛ γ(v)`.
    pub fn branch_derivative(&self) -> VertexFn<UniversalScalar> {
        -self.gamma_derivative()
    }
}

/// Decomposes the raw cochain as `c = c_ω + dγ` with `γ(anchor) = 0`.
pub fn assemble(data: &LocalColemanData, anchor: usize) -> Result<AssembledIntegral, VologError> {
    let raw = data.raw_cochain()?;
    let (harmonic, gamma) = data.graph.harmonic_project(&raw, anchor)?;
    Ok(AssembledIntegral { raw, harmonic, gamma, residues: data.residue_cochain(), anchor })
}

/// `c + δ·Nω`: the difference cochain for the branch shifted by `δ`.
pub fn branch_shift<C: Scalar>(c: &Cochain<C>, delta: &C, n_omega: &Cochain<C>) -> Result<Cochain<C>, PadicError> {
    assert_eq!(c.values.len(), n_omega.values.len(), "cochain length mismatch");
    let values = c
        .values
        .iter()
        .zip(&n_omega.values)
        .map(|(a, n)| Ok(a.clone() + delta.try_mul(n)?))
        .collect::<Result<_, PadicError>>()?;
    Ok(Cochain::new(values))
}

/// Solves `Δu = residues` with `u(anchor) = 0`; `residues(v)` is the total
/// residue of the form on `U_v`.
pub fn derivative_vertex_function<C: Coefficient>(
    graph: &DualGraph,
    residues: &VertexFn<C>,
    anchor: usize,
) -> Result<VertexFn<C>, VologError> {
    Ok(graph.solve_poisson(residues, anchor)?)
}

/// Local index values `⟨∫η, ∫ω⟩_e` for both orientations of every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexData<C> {
    pub forward: Vec<C>,
    pub reverse: Vec<C>,
}

impl<C: Coefficient> IndexData<C> {
    pub fn zeros(edges: usize) -> Self {
        Self { forward: alloc::vec![C::zero_value(); edges], reverse: alloc::vec![C::zero_value(); edges] }
    }

    /// Index data with `⟨·,·⟩_{−e} = −⟨·,·⟩_e`.
    pub fn antisymmetric(forward: Vec<C>) -> Self {
        let reverse = forward.iter().map(|c| -c.clone()).collect();
        Self { forward, reverse }
    }

    pub fn at(&self, e: OrientedEdge) -> C {
        if e.forward {
            self.forward[e.edge].clone()
        } else {
            self.reverse[e.edge].clone()
        }
    }
}

/// Data of one iterated integral `∫(ω ∫η)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedData<C> {
    pub c_omega: Cochain<C>,
    pub c_eta: Cochain<C>,
    pub res_omega: Cochain<C>,
    pub res_eta: Cochain<C>,
    pub index: IndexData<C>,
}

impl<C: Scalar> IteratedData<C> {
    /// `RHS(v) = ½ Σ_{e⁺=v} (c_η(e) res_e ω − c_ω(e) res_e η) − Σ_{e⁺=v} ⟨∫η, ∫ω⟩_e`.
    pub fn rhs(&self, graph: &DualGraph) -> Result<VertexFn<C>, VologError> {
        for c in [&self.c_omega, &self.c_eta, &self.res_omega, &self.res_eta] {
            graph.check_cochain(c)?;
        }
        graph.check_cochain(&Cochain::new(self.index.forward.clone()))?;
        graph.check_cochain(&Cochain::new(self.index.reverse.clone()))?;
        let half = rational(1, 2);
        let mut values = Vec::with_capacity(graph.vertex_count());
        for v in 0..graph.vertex_count() {
            let mut cross = C::zero_value();
            let mut index = C::zero_value();
            for e in graph.outgoing(v) {
                cross = cross + self.c_eta.at(e).try_mul(&self.res_omega.at(e))?
                    - self.c_omega.at(e).try_mul(&self.res_eta.at(e))?;
                index = index + self.index.at(e);
            }
            values.push(cross.scale(&half) - index);
        }
        Ok(VertexFn::new(values))
    }
}

fn check_harmonic<C: Coefficient>(graph: &DualGraph, c: &Cochain<C>, name: &'static str) -> Result<(), VologError> {
    let flux = graph.d_star(c);
    match flux.values.iter().position(|x| !x.is_negligible()) {
        None => Ok(()),
        Some(v) => Err(VologError::NotHarmonic { name, vertex: graph.vertices()[v].clone() }),
    }
}

/// Per-vertex `d/dΛ` of `∫(ω ∫η)`, normalized to vanish at `anchor`.
pub fn iterated_derivative<C: Scalar>(
    graph: &DualGraph,
    data: &IteratedData<C>,
    anchor: usize,
) -> Result<VertexFn<C>, VologError> {
    check_harmonic(graph, &data.c_omega, "c_omega")?;
    check_harmonic(graph, &data.c_eta, "c_eta")?;
    let rhs = data.rhs(graph)?;
    match graph.solve_poisson(&rhs, anchor) {
        Err(GraphError::Unsolvable) => Err(VologError::InconsistentData),
        other => Ok(other?),
    }
}

/// The Vologodsky valuation of a section whose log function has
/// `d log = Σ ω_i ∫η_i + γ`: the sum of the iterated-integral derivatives and
/// the derivative coming from the residues of `γ`.
pub fn bundle_valuation<C: Scalar>(
    graph: &DualGraph,
    terms: &[IteratedData<C>],
    gamma_residues: &VertexFn<C>,
    anchor: usize,
) -> Result<VertexFn<C>, VologError> {
    let mut total = derivative_vertex_function(graph, gamma_residues, anchor)?;
    for t in terms {
        total = total + iterated_derivative(graph, t, anchor)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicNumber;
    use crate::Rational;
    use alloc::vec;

    const P: u32 = 7;
    const N: u32 = 16;

    fn s(n: i64, d: i64) -> UniversalScalar {
        PadicNumber::from_rational(P, &rational(n, d), N).unwrap().into()
    }

    fn lambda() -> UniversalScalar {
        UniversalScalar::lambda(P, N).unwrap()
    }

    fn ucochain(v: &[(i64, i64)]) -> Cochain<UniversalScalar> {
        Cochain::new(v.iter().map(|&(n, d)| s(n, d)).collect())
    }

    fn q(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| rational(n, d)).collect()
    }

    #[test]
    fn tree_has_no_harmonic_part() {
        let tree = DualGraph::from_indices(3, &[(0, 1), (0, 2)]).unwrap();
        let data =
            LocalColemanData::from_raw(tree, &ucochain(&[(2, 1), (-5, 3)]), &ucochain(&[(0, 1), (0, 1)])).unwrap();
        let a = assemble(&data, 0).unwrap();
        assert!(a.harmonic.is_zero());
    }

    #[test]
    fn second_kind_cycle() {
        let tri = DualGraph::cycle(3).unwrap();
        let data =
            LocalColemanData::from_raw(tri, &ucochain(&[(1, 1), (0, 1), (0, 1)]), &ucochain(&[(0, 1); 3])).unwrap();
        let a = assemble(&data, 0).unwrap();
        assert_eq!(a.harmonic, ucochain(&[(1, 3); 3]));
    }

    /// `dz/z` on each annulus of the oriented triangle, all constants zero.
    /// With the difference taken head minus tail, the raw cochain is `−Λ` on
    /// every edge and is already harmonic.
    #[test]
    fn dlog_cycle() {
        let tri = DualGraph::cycle(3).unwrap();
        let zero = UniversalScalar::zero();
        let data = LocalColemanData::new(
            tri,
            (0..3).map(|i| {
                let d = EdgeData::Form { form: AnnulusForm::dlog(s(1, 1)), c_tail: zero.clone(), c_head: zero.clone() };
                (alloc::format!("e{i}"), d)
            }),
        )
        .unwrap();
        let a = assemble(&data, 0).unwrap();
        assert_eq!(a.harmonic, Cochain::new(vec![-lambda(); 3]));
        assert!(a.gamma.is_zero());
    }

    #[test]
    fn missing_and_duplicate_edge_data() {
        let path = DualGraph::path(2).unwrap();
        let raw = EdgeData::Raw { raw_c: s(1, 1), residue: s(0, 1) };
        assert_eq!(LocalColemanData::new(path.clone(), vec![]), Err(VologError::MissingEdgeData("e0".into())));
        assert_eq!(
            LocalColemanData::new(path, vec![("e0".into(), raw.clone()), ("e0".into(), raw)]),
            Err(VologError::DuplicateEdgeData("e0".into()))
        );
    }

    #[test]
    fn branch_shift_examples() {
        let c = ucochain(&[(1, 2), (3, 1), (-1, 1)]);
        let n = ucochain(&[(1, 1); 3]);
        assert_eq!(branch_shift(&c, &s(0, 1), &n).unwrap(), c);
        assert_eq!(branch_shift(&c, &s(5, 1), &Cochain::zeros(3)).unwrap(), c);
        let zero = Cochain::zeros(3);
        assert_eq!(branch_shift(&zero, &s(2, 1), &n).unwrap(), ucochain(&[(2, 1); 3]));
    }

    #[test]
    fn derivative_vertex_function_examples() {
        let tri = DualGraph::cycle(3).unwrap();
        let u = derivative_vertex_function(&tri, &VertexFn::new(q(&[(1, 1), (-1, 1), (0, 1)])), 2).unwrap();
        assert_eq!(u.values, q(&[(1, 3), (-1, 3), (0, 1)]));
        assert!(derivative_vertex_function(&tri, &VertexFn::<Rational>::zeros(3), 0).unwrap().is_zero());
    }

    #[test]
    fn assembled_derivative_matches_green_solve() {
        let sq = DualGraph::cycle(4).unwrap();
        let residues = [(1, 1), (0, 1), (-2, 1), (3, 1)];
        let consts = [(0, 1), (1, 2), (-1, 1), (2, 3)];
        let data = LocalColemanData::new(
            sq.clone(),
            (0..4).map(|i| {
                let form = AnnulusForm::new([(0, s(residues[i].0, 1)), (2, s(1, 1)), (-1, s(3, 1))]);
                let d = EdgeData::Form {
                    form,
                    c_tail: s(consts[i].0, consts[i].1),
                    c_head: s(consts[(i + 1) % 4].0, consts[(i + 1) % 4].1),
                };
                (alloc::format!("e{i}"), d)
            }),
        )
        .unwrap();
        let a = assemble(&data, 0).unwrap();
        let flux = sq.d_star(&a.residues);
        assert_eq!(sq.laplacian(&a.gamma_derivative()), -flux.clone());
        assert_eq!(a.branch_derivative(), derivative_vertex_function(&sq, &flux, 0).unwrap());
    }

    #[test]
    fn iterated_trivial_inputs() {
        let tri = DualGraph::cycle(3).unwrap();
        let zero = Cochain::<Rational>::zeros(3);
        let data = IteratedData {
            c_omega: Cochain::new(q(&[(1, 1); 3])),
            c_eta: zero.clone(),
            res_omega: Cochain::new(q(&[(2, 1), (0, 1), (5, 1)])),
            res_eta: zero.clone(),
            index: IndexData::zeros(3),
        };
        assert!(iterated_derivative(&tri, &data, 0).unwrap().is_zero());
    }

    #[test]
    fn iterated_rejects_non_harmonic_and_unsolvable() {
        let tri = DualGraph::cycle(3).unwrap();
        let zero = Cochain::<Rational>::zeros(3);
        let mut data = IteratedData {
            c_omega: zero.clone(),
            c_eta: Cochain::new(q(&[(1, 1), (0, 1), (0, 1)])),
            res_omega: zero.clone(),
            res_eta: zero.clone(),
            index: IndexData::zeros(3),
        };
        assert!(matches!(iterated_derivative(&tri, &data, 0), Err(VologError::NotHarmonic { name: "c_eta", .. })));
        data.c_eta = Cochain::new(q(&[(1, 1); 3]));
        data.res_omega = Cochain::new(q(&[(1, 1); 3]));
        assert_eq!(data.rhs(&tri).unwrap().values, q(&[(1, 1); 3]));
        assert_eq!(iterated_derivative(&tri, &data, 0), Err(VologError::InconsistentData));
    }

    /// Index data computed from actual primitives on both sides of each
    /// annulus: `⟨·,·⟩_{−e} = −⟨·,·⟩_e − c_η(e) res_e ω`.
    #[test]
    fn iterated_with_side_consistent_indices() {
        let sq = DualGraph::cycle(4).unwrap();
        let c_eta = Cochain::new(q(&[(1, 1); 4]));
        let c_omega = Cochain::new(q(&[(2, 1); 4]));
        let res_omega = Cochain::new(q(&[(1, 1); 4]));
        let res_eta = Cochain::new(q(&[(1, 1); 4]));
        let forward = q(&[(1, 1), (0, 1), (-1, 1), (3, 1)]);
        let reverse = forward.iter().enumerate().map(|(i, f)| -f - &c_eta.values[i] * &res_omega.values[i]).collect();
        let data = IteratedData { c_omega, c_eta, res_omega, res_eta, index: IndexData { forward, reverse } };
        let rhs = data.rhs(&sq).unwrap();
        let total: Rational = rhs.values.iter().sum();
        // Σ_e (c_η res ω − c_ω res η) + Σ_e c_η res ω = 4·(1 − 2) + 4 = 0.
        assert_eq!(total, rational(0, 1));
        let u = iterated_derivative(&sq, &data, 0).unwrap();
        assert_eq!(sq.laplacian(&u), rhs);
    }

    #[test]
    fn bundle_valuation_is_additive() {
        let tri = DualGraph::cycle(3).unwrap();
        let gamma = VertexFn::new(q(&[(1, 1), (-1, 1), (0, 1)]));
        assert_eq!(bundle_valuation(&tri, &[], &gamma, 2).unwrap().values, q(&[(1, 3), (-1, 3), (0, 1)]));
        assert!(bundle_valuation(&tri, &[], &VertexFn::<Rational>::zeros(3), 0).unwrap().is_zero());

        let term = IteratedData {
            c_omega: Cochain::new(q(&[(1, 1); 3])),
            c_eta: Cochain::new(q(&[(0, 1); 3])),
            res_omega: Cochain::new(q(&[(0, 1); 3])),
            res_eta: Cochain::new(q(&[(0, 1); 3])),
            index: IndexData { forward: q(&[(1, 1), (0, 1), (0, 1)]), reverse: q(&[(0, 1), (-1, 1), (0, 1)]) },
        };
        let combined = bundle_valuation(&tri, core::slice::from_ref(&term), &gamma, 2).unwrap();
        let rhs = term.rhs(&tri).unwrap() + gamma.clone();
        assert_eq!(combined, tri.solve_poisson(&rhs, 2).unwrap());
    }
}
