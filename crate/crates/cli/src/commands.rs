use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};
use volog_core::fpn::{self, Filtration, FpnModule, NormalCase, StTriple};
use volog_core::graph::{Cochain, DualGraph, VertexFn};
use volog_core::heights::{self, DivisorPlacement};
use volog_core::loglaurent::AnnulusForm;
use volog_core::padic::{derive_at_zero, iwasawa_log, PadicNumber};
use volog_core::volog::{self, EdgeData, IndexData, IteratedData, LocalColemanData};
use volog_core::{Coefficient, Rational};

use crate::error::CliError;
use crate::format::*;

type Result<T> = std::result::Result<T, CliError>;

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Settings {
    pub precision: u32,
    pub lambda_cap: usize,
    pub anchor: Option<String>,
}

impl Settings {
    fn ctx(&self, job: &Value) -> Result<Ctx> {
        let prime = match job.get("p") {
            None => None,
            Some(p) => Some(u32::try_from(integer(p, "p")?).map_err(|_| CliError::parse("p out of range"))?),
        };
        Ok(Ctx { prime, precision: self.precision, lambda_cap: self.lambda_cap })
    }

    fn anchor(&self, job: &Value, g: &DualGraph) -> Result<usize> {
        let label = match (&self.anchor, job.get("anchor")) {
            (Some(a), _) => a.clone(),
            (None, Some(a)) => string(a, "anchor")?.to_owned(),
            (None, None) => return Ok(0),
        };
        Ok(g.vertex(&label)?)
    }
}

fn q(r: &Rational) -> Value {
    rational_json(r)
}

pub fn padic_log(p: u32, num: &BigInt, den: &BigInt, s: &Settings) -> Result<Value> {
    let z = PadicNumber::from_ratio(p, num, den, s.precision)?;
    let log = iwasawa_log(&z)?.with_cap(s.lambda_cap)?;
    let derivative = derive_at_zero(&log);
    Ok(json!({
        "p": p,
        "precision": s.precision,
        "input": { "num": num.to_string(), "den": den.to_string() },
        "val": z.valuation(),
        "unit": z.unit(),
        "log": universal_json(&log),
        "constant": padic_json(&log.constant_term()),
        "lambda_coeff": derivative.to_small_integer(),
    }))
}

pub fn graph_project(job: &Value, s: &Settings) -> Result<Value> {
    let g = graph(field(job, "graph")?)?;
    let c = rational_cochain(field(job, "cochain")?, &g, "cochain")?;
    let anchor = s.anchor(job, &g)?;
    let (harmonic, gamma) = g.harmonic_project(&c, anchor)?;
    Ok(json!({
        "anchor": g.vertices()[anchor],
        "h1_dimension": g.h1_dimension(),
        "harmonic": edge_json(&g, &harmonic, q),
        "exact": edge_json(&g, &g.d(&gamma), q),
        "gamma": vertex_json(&g, &gamma, q),
    }))
}

fn edge_data(v: &Value, ctx: &Ctx) -> Result<EdgeData> {
    if let Some(form) = v.get("form") {
        let coeffs = object(form, "form")?
            .iter()
            .map(|(k, c)| {
                let k: i64 =
                    k.parse().map_err(|_| CliError::parse(format!("form: \"{k}\" is not an integer exponent")))?;
                Ok((k, universal(c, ctx)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let zero = || Value::from(0);
        let c_tail = universal(v.get("c_tail").unwrap_or(&zero()), ctx)?;
        let c_head = universal(v.get("c_head").unwrap_or(&zero()), ctx)?;
        Ok(EdgeData::Form { form: AnnulusForm::new(coeffs), c_tail, c_head })
    } else {
        Ok(EdgeData::Raw { raw_c: universal(field(v, "raw_c")?, ctx)?, residue: universal(field(v, "residue")?, ctx)? })
    }
}

pub fn volog_assemble(job: &Value, s: &Settings) -> Result<Value> {
    let ctx = s.ctx(job)?;
    ctx.prime()?;
    let g = graph(field(job, "graph")?)?;
    let data = edge_values(field(job, "edges")?, &g, "edges", |v| edge_data(v, &ctx))?;
    let anchor = s.anchor(job, &g)?;
    let ids = g.edges().iter().map(|e| e.id.clone());
    let local = LocalColemanData::new(g.clone(), ids.zip(data))?;
    let a = volog::assemble(&local, anchor)?;
    let u = universal_json;
    Ok(json!({
        "p": ctx.prime,
        "anchor": g.vertices()[anchor],
        "raw": edge_json(&g, &a.raw, u),
        "harmonic": edge_json(&g, &a.harmonic, u),
        "residues": edge_json(&g, &a.residues, u),
        "gamma": vertex_json(&g, &a.gamma, u),
        "branch_derivative": vertex_json(&g, &a.branch_derivative(), u),
    }))
}

pub fn volog_ddlog(job: &Value, s: &Settings) -> Result<Value> {
    let g = graph(field(job, "graph")?)?;
    let residues = match (job.get("residues"), job.get("edge_residues")) {
        (Some(r), None) => VertexFn::new(vertex_values(r, &g, "residues", rational)?),
        (None, Some(r)) => g.d_star(&rational_cochain(r, &g, "edge_residues")?),
        _ => return Err(CliError::parse("give exactly one of \"residues\" (per vertex) or \"edge_residues\"")),
    };
    let anchor = s.anchor(job, &g)?;
    let u = volog::derivative_vertex_function(&g, &residues, anchor)?;
    Ok(json!({
        "anchor": g.vertices()[anchor],
        "residues": vertex_json(&g, &residues, q),
        "derivative": vertex_json(&g, &u, q),
    }))
}

fn index_data(v: &Value, g: &DualGraph) -> Result<IndexData<Rational>> {
    let pairs = edge_values(v, g, "index", |x| match x {
        Value::Object(_) => Ok((rational(field(x, "forward")?)?, rational(field(x, "reverse")?)?)),
        other => {
            let f = rational(other)?;
            Ok((f.clone(), -f))
        }
    })?;
    let (forward, reverse) = pairs.into_iter().unzip();
    Ok(IndexData { forward, reverse })
}

pub fn volog_iterated(job: &Value, s: &Settings) -> Result<Value> {
    let g = graph(field(job, "graph")?)?;
    let cochain = |name: &str| -> Result<Cochain<Rational>> {
        match job.get(name) {
            Some(v) => rational_cochain(v, &g, name),
            None => Ok(Cochain::zeros(g.edge_count())),
        }
    };
    let index = match job.get("index") {
        Some(v) => index_data(v, &g)?,
        None => IndexData::zeros(g.edge_count()),
    };
    let data = IteratedData {
        c_omega: cochain("c_omega")?,
        c_eta: cochain("c_eta")?,
        res_omega: cochain("res_omega")?,
        res_eta: cochain("res_eta")?,
        index,
    };
    let anchor = s.anchor(job, &g)?;
    let rhs = data.rhs(&g)?;
    let total: Rational = rhs.values.iter().sum();
    let derivative = volog::iterated_derivative(&g, &data, anchor).map_err(|e| {
        CliError::from(e).with_details(json!({ "rhs": vertex_json(&g, &rhs, q), "rhs_sum": q(&total) }))
    })?;
    Ok(json!({
        "anchor": g.vertices()[anchor],
        "rhs": vertex_json(&g, &rhs, q),
        "derivative": vertex_json(&g, &derivative, q),
    }))
}

fn placement(v: &Value, g: &DualGraph) -> Result<DivisorPlacement> {
    let points = vector(field(v, "points")?, "points", |p| {
        let label = string(field(p, "label")?, "label")?.to_owned();
        let mult = integer(field(p, "multiplicity")?, "multiplicity")?;
        let comp = g.vertex(string(field(p, "component")?, "component")?)?;
        Ok((label, mult, comp))
    })?;
    let mut d = DivisorPlacement::new(points);
    if let Some(pairs) = v.get("pairings") {
        for x in array(pairs, "pairings")? {
            let own = string(field(x, "point")?, "point")?;
            let other = string(field(x, "other")?, "other")?;
            d = d.with_pairing(own, other, rational(field(x, "value")?)?);
        }
    }
    Ok(d)
}

pub fn height_local(job: &Value, s: &Settings) -> Result<Value> {
    let g = graph(field(job, "graph")?)?;
    let d = placement(field(job, "d")?, &g)?;
    let e = placement(field(job, "e")?, &g)?;
    let anchor = s.anchor(job, &g)?;
    let r = heights::discrete_height(&g, &d, &e, anchor)?;
    Ok(json!({
        "anchor": g.vertices()[r.anchor],
        "value": q(&r.value),
        "vertical": q(&r.vertical),
        "horizontal": q(&r.horizontal),
        "correction": vertex_json(&g, &r.correction, q),
        "normalization": "intersection product with coefficient 1",
    }))
}

fn module(v: &Value, ctx: &Ctx) -> Result<FpnModule> {
    let mut steps = BTreeMap::new();
    if let Some(f) = v.get("filtration") {
        for (i, basis) in object(f, "filtration")? {
            let i: i32 =
                i.parse().map_err(|_| CliError::parse(format!("filtration: \"{i}\" is not an integer index")))?;
            steps.insert(i, matrix(basis, "filtration")?);
        }
    }
    Ok(FpnModule {
        prime: ctx.prime()?,
        phi: matrix(field(v, "phi")?, "phi")?,
        monodromy: matrix(field(v, "monodromy")?, "monodromy")?,
        weights: vector(field(v, "weights")?, "weights", |w| {
            i32::try_from(integer(w, "weight")?).map_err(|_| CliError::parse("weight out of range"))
        })?,
        filtration: Filtration { steps },
        comparison: matrix(field(v, "comparison")?, "comparison")?,
    })
}

fn triple_json<C>(t: &StTriple<C>, f: impl Fn(&C) -> Value + Copy) -> Value {
    let enc = |v: &[C]| v.iter().map(f).collect::<Vec<_>>();
    json!({ "x": enc(&t.x), "y": enc(&t.y), "z": enc(&t.z) })
}

fn split<C: Coefficient>(m: &FpnModule, t: &StTriple<C>, f: impl Fn(&C) -> Value + Copy) -> Result<Value> {
    let nf = fpn::normalize_class(m, t)?;
    let report = fpn::synderi_check(m, t)?;
    let enc = |v: &[C]| v.iter().map(f).collect::<Vec<_>>();
    let case = match nf.case {
        NormalCase::NoWeightZero => "no_weight_zero",
        NormalCase::MonodromyIsomorphism => "monodromy_isomorphism",
    };
    Ok(json!({
        "case": case,
        "normal_form": triple_json(&nf.triple, f),
        "beta": enc(&nf.beta),
        "rho": enc(&nf.rho),
        "synderi": {
            "holds": report.holds,
            "derivative": enc(&report.derivative),
            "expected": enc(&report.expected),
            "ell_independent": report.ell_independent,
        },
    }))
}

pub fn fpn_split(job: &Value, s: &Settings) -> Result<Value> {
    let ctx = s.ctx(job)?;
    let p = ctx.prime()?;
    if let Some(x) = job.get("kummer") {
        let x = padic(x, &ctx)?;
        let t = fpn::kummer_class(&x)?;
        return split(&fpn::kummer_module(p), &t, universal_json);
    }
    let rationals = |v: &Value, what: &str| vector(v, what, rational);
    if let Some(ext) = job.get("extension") {
        let e = module(field(ext, "module")?, &ctx)?;
        let a = rationals(field(ext, "a")?, "a")?;
        let b = rationals(field(ext, "b")?, "b")?;
        let t = fpn::ext_to_triple(&e, &a, &b)?;
        return split(&fpn::extension_submodule(&e), &t, q);
    }
    let m = module(field(job, "module")?, &ctx)?;
    let class = field(job, "class")?;
    let t = StTriple {
        x: rationals(field(class, "x")?, "x")?,
        y: rationals(field(class, "y")?, "y")?,
        z: rationals(field(class, "z")?, "z")?,
    };
    split(&m, &t, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> Settings {
        Settings { precision: 20, lambda_cap: 4, anchor: None }
    }

    fn triangle() -> Value {
        json!({
            "vertices": ["v1", "v2", "v3"],
            "edges": [
                {"id": "e1", "tail": "v1", "head": "v2"},
                {"id": "e2", "tail": "v2", "head": "v3"},
                {"id": "e3", "tail": "v3", "head": "v1"},
            ],
        })
    }

    #[test]
    fn padic_log_of_ten() {
        let out = padic_log(5, &10.into(), &1.into(), &settings()).unwrap();
        assert_eq!(out["val"], json!(1));
        assert_eq!(out["lambda_coeff"], json!(1));
    }

    #[test]
    fn projection_on_triangle() {
        let job = json!({"graph": triangle(), "cochain": {"e1": 1, "e2": 0, "e3": 0}});
        let out = graph_project(&job, &settings()).unwrap();
        assert_eq!(out["harmonic"], json!({"e1": "1/3", "e2": "1/3", "e3": "1/3"}));
        assert_eq!(out["exact"], json!({"e1": "2/3", "e2": "-1/3", "e3": "-1/3"}));
    }

    #[test]
    fn ddlog_with_anchor_override() {
        let job = json!({"graph": triangle(), "residues": {"v1": 1, "v2": -1, "v3": 0}});
        let s = Settings { anchor: Some("v3".into()), ..settings() };
        let out = volog_ddlog(&job, &s).unwrap();
        assert_eq!(out["derivative"], json!({"v1": "1/3", "v2": "-1/3", "v3": "0"}));
    }

    #[test]
    fn iterated_inconsistency_carries_rhs() {
        let ones = json!({"e1": 1, "e2": 1, "e3": 1});
        let job = json!({"graph": triangle(), "c_eta": ones, "res_omega": ones});
        let err = volog_iterated(&job, &settings()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert_eq!(err.to_json()["error"]["details"]["rhs_sum"], json!("3"));
    }

    #[test]
    fn kummer_split() {
        let job = json!({"p": 5, "kummer": 10});
        let out = fpn_split(&job, &settings()).unwrap();
        assert_eq!(out["case"], json!("no_weight_zero"));
        assert_eq!(out["synderi"]["holds"], json!(true));
        assert_eq!(out["rho"][0]["coeffs"][0]["unit"], json!(1));
    }
}
