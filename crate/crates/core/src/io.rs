//! JSON documents for Dirichlet polynomials, torus polynomials, polytopes and
//! transference plans.
//!
//! ```text
//! dirichlet: [{"n": 2, "re": 1.0, "im": 0.0}, ...]
//! torus:     {"dims": 2, "terms": [{"alpha": [1, 0], "re": 1.0, "im": 0.0}, ...]}
//! polytope:  {"dims": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}
//! plan:      the serde form of TransferencePlan
//! ```
//!
//! Saving canonicalizes (sorted terms, zero coefficients dropped, hull
//! vertices), so `save(load(x)) == x` for canonical documents.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::DirichletPolynomial;
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::torus::TorusPolynomial;
use crate::transference::TransferencePlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Dirichlet,
    Torus,
    Polytope,
    Plan,
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Kind::Dirichlet),
            "torus" => Ok(Kind::Torus),
            "polytope" => Ok(Kind::Polytope),
            "plan" => Ok(Kind::Plan),
            other => Err(Error::invalid(format!("unknown document kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Dirichlet(DirichletPolynomial),
    Torus(TorusPolynomial),
    Polytope(LatticePolytope),
    Plan(TransferencePlan),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirichletTerm {
    n: u64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusTerm {
    alpha: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusDoc {
    dims: usize,
    terms: Vec<TorusTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeDoc {
    dims: usize,
    vertices: Vec<Vec<i64>>,
}

fn parse<'a, T: Deserialize<'a>>(kind: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{kind} document, line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize infallibly");
    s.push('\n');
    s
}

pub fn dirichlet_from_str(text: &str) -> Result<DirichletPolynomial> {
    let terms: Vec<DirichletTerm> = parse("dirichlet", text)?;
    DirichletPolynomial::new(terms.into_iter().map(|t| (t.n, Complex64::new(t.re, t.im))))
}

pub fn dirichlet_to_string(f: &DirichletPolynomial) -> String {
    let terms: Vec<DirichletTerm> = f
        .terms()
        .iter()
        .map(|&(n, c)| DirichletTerm { n, re: c.re, im: c.im })
        .collect();
    render(&terms)
}

pub fn torus_from_str(text: &str) -> Result<TorusPolynomial> {
    let doc: TorusDoc = parse("torus", text)?;
    TorusPolynomial::from_terms(doc.dims, doc.terms.into_iter().map(|t| (t.alpha, Complex64::new(t.re, t.im))))
}

pub fn torus_to_string(f: &TorusPolynomial) -> String {
    render(&TorusDoc {
        dims: f.dims(),
        terms: f
            .dense_terms()
            .into_iter()
            .map(|(alpha, c)| TorusTerm { alpha, re: c.re, im: c.im })
            .collect(),
    })
}

pub fn polytope_from_str(text: &str) -> Result<LatticePolytope> {
    let doc: PolytopeDoc = parse("polytope", text)?;
    LatticePolytope::hull(doc.dims, &doc.vertices)
}

pub fn polytope_to_string(e: &LatticePolytope) -> String {
    render(&PolytopeDoc {
        dims: e.dims(),
        vertices: e.vertices().to_vec(),
    })
}

/// Parses and re-validates the stored certificate.
pub fn plan_from_str(text: &str) -> Result<TransferencePlan> {
    let plan: TransferencePlan = parse("plan", text)?;
    plan.validate()?;
    Ok(plan)
}

pub fn plan_to_string(plan: &TransferencePlan) -> String {
    render(plan)
}

pub fn from_str(kind: Kind, text: &str) -> Result<Document> {
    Ok(match kind {
        Kind::Dirichlet => Document::Dirichlet(dirichlet_from_str(text)?),
        Kind::Torus => Document::Torus(torus_from_str(text)?),
        Kind::Polytope => Document::Polytope(polytope_from_str(text)?),
        Kind::Plan => Document::Plan(plan_from_str(text)?),
    })
}

pub fn to_string(doc: &Document) -> String {
    match doc {
        Document::Dirichlet(f) => dirichlet_to_string(f),
        Document::Torus(f) => torus_to_string(f),
        Document::Polytope(e) => polytope_to_string(e),
        Document::Plan(p) => plan_to_string(p),
    }
}

pub fn load(path: impl AsRef<Path>, kind: Kind) -> Result<Document> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    from_str(kind, &text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{}: {context}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn save(path: impl AsRef<Path>, doc: &Document) -> Result<()> {
    fs::write(path, to_string(doc))?;
    Ok(())
}
