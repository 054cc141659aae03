//! The `report` summary of a metric Lie algebra.

use serde::Serialize;

use crate::classify::{classify_ricci, type_i_decomposition, type_ii_canonical_basis, RicciClassification, RicciType, TypeIResiduals};
use crate::geometry::{AdInvariance, MetricLieAlgebra, ParallelCheck};
use crate::lie::StructureReport;
use crate::linalg::{Signature, Tolerance};

use super::file::rows;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Serialize)]
pub struct EinsteinSummary {
    pub constant: Option<f64>,
    pub candidate: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatSummary {
    pub value: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeIPayload {
    pub lambda: f64,
    pub mu: f64,
    pub j: Vec<Vec<f64>>,
    pub einstein_metric: Vec<Vec<f64>>,
    pub residuals: TypeIResiduals,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeIIPayload {
    pub basis: Vec<Vec<f64>>,
    pub sign: f64,
    pub gram_residual: f64,
    pub ricci_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub tolerance: Tolerance,
    pub dim: usize,
    pub jacobi_residual: f64,
    pub structure: StructureReport,
    pub signature: Signature,
    pub einstein: EinsteinSummary,
    pub ricci_flat: FlatSummary,
    pub ricci_parallel: ParallelCheck,
    pub ad_invariant: AdInvariance,
    pub scalar_curvature: f64,
    pub classification: RicciClassification,
    pub ricci_eigenvalues: Vec<Eigenvalue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_i: Option<TypeIPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_ii: Option<TypeIIPayload>,
    /// Steps that could not be completed, such as a normal form whose
    /// verification failed.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Eigenvalues of the Ricci operator sorted by real then imaginary part,
/// with tiny imaginary parts and signed zeros cleaned up.
fn ricci_eigenvalues(m: &MetricLieAlgebra, tol: &Tolerance) -> Vec<Eigenvalue> {
    let ric = &m.ricci().operator;
    let cut = tol.threshold(crate::linalg::max_abs(ric).max(1.0));
    let mut ev: Vec<Eigenvalue> = ric
        .complex_eigenvalues()
        .iter()
        .map(|z| {
            let clean = |x: f64| if x.abs() <= cut { 0.0 } else { x };
            Eigenvalue { re: clean(z.re), im: clean(z.im) }
        })
        .collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

pub fn build_report(m: &MetricLieAlgebra, tol: &Tolerance) -> crate::error::Result<Report> {
    let signature = m.signature(tol)?;
    let einstein = m.is_einstein(tol);
    let classification = classify_ricci(m, tol);
    let mut notes = Vec::new();

    let type_i = match classification.tag {
        RicciType::TypeI { .. } => match type_i_decomposition(m, &classification, tol) {
            Ok(d) => Some(TypeIPayload {
                lambda: d.lambda,
                mu: d.mu,
                j: rows(&d.j),
                einstein_metric: rows(d.einstein_metric.gram()),
                residuals: d.residuals,
            }),
            Err(e) => {
                notes.push(format!("type I decomposition: {e}"));
                None
            }
        },
        _ => None,
    };
    let type_ii = match classification.tag {
        RicciType::TypeII if signature.is_lorentz() => match type_ii_canonical_basis(m, tol) {
            Ok(c) => Some(TypeIIPayload {
                basis: rows(&c.basis),
                sign: c.sign,
                gram_residual: c.gram_residual,
                ricci_residual: c.ricci_residual,
            }),
            Err(e) => {
                notes.push(format!("type II canonical basis: {e}"));
                None
            }
        },
        _ => None,
    };

    Ok(Report {
        tool_version: TOOL_VERSION,
        tolerance: *tol,
        dim: m.dim(),
        jacobi_residual: m.algebra().jacobi_residual(),
        structure: m.algebra().structure_report(tol),
        signature,
        einstein: EinsteinSummary { constant: einstein.constant, candidate: einstein.candidate, residual: einstein.residual },
        ricci_flat: FlatSummary { value: einstein.ricci_flat, residual: einstein.flat_residual },
        ricci_parallel: m.is_ricci_parallel(tol),
        ad_invariant: m.is_ad_invariant(tol),
        scalar_curvature: m.ricci().scalar,
        classification,
        ricci_eigenvalues: ricci_eigenvalues(m, tol),
        type_i,
        type_ii,
        notes,
    })
}

fn describe(tag: &RicciType) -> String {
    match tag {
        RicciType::Einstein { constant } => format!("Einstein (c = {constant})"),
        RicciType::TypeI { lambda, mu } => format!("type I (lambda = {lambda}, mu = {mu})"),
        RicciType::TypeII => "type II".into(),
        RicciType::Other => "other".into(),
    }
}

impl Report {
    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let s = &self.structure;
        let mut out = String::new();
        let mut line = |l: String| {
            out.push_str(&l);
            out.push('\n');
        };
        line(format!("dimension        {}", self.dim));
        line(format!("signature        ({}, {})", self.signature.p, self.signature.q));
        line(format!(
            "structure        nilpotent={} solvable={} unimodular={} center={} derived={}",
            s.is_nilpotent, s.is_solvable, s.is_unimodular, s.center_dim, s.derived_dim
        ));
        line(format!("jacobi residual  {:.3e}", self.jacobi_residual));
        match self.einstein.constant {
            Some(c) => line(format!("einstein         yes, c = {c} (residual {:.3e})", self.einstein.residual)),
            None => line(format!("einstein         no (residual {:.3e})", self.einstein.residual)),
        }
        line(format!("ricci flat       {} (residual {:.3e})", self.ricci_flat.value, self.ricci_flat.residual));
        line(format!(
            "ricci parallel   {} (commutator {:.3e}, nabla ric {:.3e})",
            self.ricci_parallel.passed, self.ricci_parallel.commutator_residual, self.ricci_parallel.nabla_ric_residual
        ));
        line(format!("ad-invariant     {} (residual {:.3e})", self.ad_invariant.passed, self.ad_invariant.residual));
        line(format!("classification   {}", describe(&self.classification.tag)));
        let ev: Vec<String> = self
            .ricci_eigenvalues
            .iter()
            .map(|e| if e.im == 0.0 { format!("{}", e.re) } else { format!("{}{:+}i", e.re, e.im) })
            .collect();
        line(format!("ricci spectrum   [{}]", ev.join(", ")));
        if let Some(t) = &self.type_i {
            line(format!(
                "type I           reconstruction {:.3e}, J² + I {:.3e}, einstein constant {}",
                t.residuals.reconstruction, t.residuals.j_squared, t.residuals.einstein_constant
            ));
        }
        if let Some(t) = &self.type_ii {
            line(format!("type II basis    sign {} (metric {:.3e}, ricci {:.3e})", t.sign, t.gram_residual, t.ricci_residual));
        }
        for n in &self.notes {
            line(format!("note             {n}"));
        }
        out
    }
}
