//! JSON analysis reports and their re-verification.

use serde::{Deserialize, Serialize};

use crate::coding::SymbolicCoding;
use crate::error::{Error, Result};
use crate::mapfile::{load_map, MapIdentity};
use crate::orbits::{StefanAnalysis, StefanTurbulence};
use crate::plmap::PLMap;
use crate::scramble::{recheck_certificate, InvariantSample, LiYorkeCertificate, LiftedSample};
use crate::turbulence::{check_witness, CanonicalQuadruple, TurbulenceWitness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// How to read the numbers in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub numbers: String,
    pub tie_break: String,
    pub itinerary: String,
    pub seed: String,
    pub horizon: String,
    pub widths: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            numbers: "exact rationals written \"p/q\" (integers as \"p\")".into(),
            tie_break: "coding intervals use the shortest onto-preimage, leftmost on ties".into(),
            itinerary: "a point lying in both I(0) and I(1) is coded 0 and flagged".into(),
            seed: "the transitive seed is 0 1 00 01 10 11 000 ... (length-lexicographic)".into(),
            horizon: "events are reported for times 0..=horizon only; no limit is claimed".into(),
            widths:
                "enclosure widths are reported; degeneracy of coding intervals is not certified"
                    .into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Turbulent,
    NotTurbulent,
    HypothesisNotMet,
    PairOnly,
    Stefan,
    NotStefan,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Turbulent | Verdict::PairOnly | Verdict::Stefan => 0,
            Verdict::NotTurbulent | Verdict::HypothesisNotMet | Verdict::NotStefan => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAnalysis {
    pub certificate: LiYorkeCertificate,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StefanReport {
    pub analysis: StefanAnalysis,
    pub turbulence: Option<StefanTurbulence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub map: MapIdentity,
    /// Analyses run on `f^power`; certificates in `lifted` are for `f`.
    pub power: usize,
    pub conventions: Conventions,
    pub verdict: Verdict,
    pub hint: Option<String>,
    pub witness: Option<TurbulenceWitness>,
    pub quadruple: Option<CanonicalQuadruple>,
    pub sample: Option<InvariantSample>,
    pub lifted: Option<LiftedSample>,
    pub pair: Option<PairAnalysis>,
    pub stefan: Option<StefanReport>,
}

impl AnalysisReport {
    pub fn new(map: MapIdentity, power: usize, verdict: Verdict) -> Self {
        AnalysisReport {
            tool: ToolInfo::default(),
            map,
            power,
            conventions: Conventions::default(),
            verdict,
            hint: None,
            witness: None,
            quadruple: None,
            sample: None,
            lifted: None,
            pair: None,
            stefan: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Reloads the map a report names, checking a file's hash.
pub fn reload_map(identity: &MapIdentity) -> Result<PLMap> {
    match identity {
        MapIdentity::Builtin { name } => Ok(load_map(name)?.0),
        MapIdentity::File { path, sha256 } => {
            let (map, again) = load_map(path)?;
            match again {
                MapIdentity::File { sha256: now, .. } if &now == sha256 => Ok(map),
                _ => Err(Error::Parse(format!(
                    "{path} changed since the report was written"
                ))),
            }
        }
    }
}

/// Re-runs every witness and certificate in `report` against the map it
/// names. Returns the list of failures (empty when everything re-verifies).
pub fn verify_report(report: &AnalysisReport, cap: usize) -> Result<Vec<String>> {
    let f = reload_map(&report.map)?;
    let g = if report.power > 1 {
        f.power(report.power, cap)?
    } else {
        f.clone()
    };
    let mut failures = Vec::new();
    if let Some(w) = &report.witness {
        match check_witness(&g, &w.j0, &w.j1)?.witness() {
            Some(again) if &again == w => {}
            _ => failures.push("turbulence witness does not re-verify".to_string()),
        }
    }
    let coding = match &report.quadruple {
        Some(q) => {
            if let Err(e) = q.verify(&g) {
                failures.push(format!("quadruple: {e}"));
            }
            Some(SymbolicCoding::new(g.clone(), q.clone()))
        }
        None => None,
    };
    if let Some(sample) = &report.sample {
        for p in sample.certificates.iter().chain(&sample.fixed_point) {
            if !recheck_certificate(&g, coding.as_ref(), &p.certificate)? {
                failures.push(format!("sample certificate ({}, {}) differs", p.a, p.b));
            }
        }
    }
    if let Some(lifted) = &report.lifted {
        for p in &lifted.certificates {
            if !recheck_certificate(&f, coding.as_ref(), &p.certificate)? {
                failures.push(format!("lifted certificate ({}, {}) differs", p.a, p.b));
            }
        }
    }
    if let Some(pair) = &report.pair {
        if !recheck_certificate(&f, None, &pair.certificate)? {
            failures.push("pair certificate differs".to_string());
        }
    }
    if let Some(st) = &report.stefan {
        if let Some(t) = &st.turbulence {
            let f2 = f.power(2, cap)?;
            let ok = check_witness(&f2, &t.square_witness.j0, &t.square_witness.j1)?
                .witness()
                .is_some_and(|w| w.strict);
            if !ok {
                failures.push("strict witness for f² does not re-verify".to_string());
            }
        }
    }
    Ok(failures)
}
