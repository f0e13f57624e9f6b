//! ω sequences, scrambled-point enclosures and finite-horizon Li-Yorke
//! certificates.
//!
//! A certificate never claims a limit. It lists the times `n <= horizon` at
//! which two orbit enclosures were provably at least `delta - tol` apart
//! (separations) or provably within `tol` of each other (proximities).

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coding::{CodeEnclosure, SymbolicCoding};
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::plmap::{PLMap, DEFAULT_NODE_BUDGET};
use crate::rational::{abs_diff, int, pow2_neg, serde_rat, Rational};
use crate::stream::{omega_block_start, BinaryStream, SymbolWord};

/// `m(m+1)(2m+7)/6`, the index where ω block `m` starts.
pub fn block_offset(m: u64) -> u64 {
    omega_block_start(m)
}

pub fn default_tol() -> Rational {
    pow2_neg(20)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSpec {
    pub alpha: BinaryStream,
    pub beta: BinaryStream,
}

impl OmegaSpec {
    /// ω over the length-lex seed.
    pub fn new(beta: BinaryStream) -> Self {
        OmegaSpec {
            alpha: BinaryStream::seed(),
            beta,
        }
    }

    pub fn stream(&self) -> BinaryStream {
        BinaryStream::omega(self.alpha.clone(), self.beta.clone())
    }
}

/// Blocks `0 .. blocks` of ω, of total length `block_offset(blocks)`.
pub fn omega_prefix(spec: &OmegaSpec, blocks: u64) -> Result<SymbolWord> {
    if blocks == 0 {
        return Err(Error::BadParam("need at least one block".into()));
    }
    spec.stream().prefix(block_offset(blocks))
}

/// Enclosure of the scrambled point coded by ω at the given depth.
pub fn locate_point(
    coding: &SymbolicCoding,
    spec: &OmegaSpec,
    depth: usize,
) -> Result<CodeEnclosure> {
    coding.code_enclosure(&spec.stream(), depth)
}

/// Something whose orbit can be enclosed step by step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertPoint {
    /// An exact rational point, iterated exactly.
    Exact {
        #[serde(with = "serde_rat")]
        x: Rational,
    },
    /// Every point of an interval, iterated by exact images.
    Interval { interval: RatInterval },
    /// `f^phase` of the point coded by `stream` under `g = f^power`. At time
    /// `t` it lies in `f^r(I_g(σ^q stream | depth))` with
    /// `t + phase = q * power + r`.
    Coded {
        stream: BinaryStream,
        depth: usize,
        power: usize,
        phase: usize,
    },
}

impl CertPoint {
    pub fn coded(stream: BinaryStream, depth: usize) -> Self {
        CertPoint::Coded {
            stream,
            depth,
            power: 1,
            phase: 0,
        }
    }
}

/// Enclosures of `point`'s orbit at times `0 ..= horizon`. Coded points
/// need the coding of `f^power`.
pub fn orbit_enclosures(
    f: &PLMap,
    coding: Option<&SymbolicCoding>,
    point: &CertPoint,
    horizon: u64,
) -> Result<Vec<RatInterval>> {
    let steps = horizon as usize + 1;
    match point {
        CertPoint::Exact { x } => Ok(f
            .iterate(x, horizon as usize)?
            .into_iter()
            .map(RatInterval::point)
            .collect()),
        CertPoint::Interval { interval } => {
            let full = f.domain().width();
            let start_full = interval.width() >= full;
            let mut out = Vec::with_capacity(steps);
            out.push(interval.clone());
            for step in 1..steps {
                let next = f.image(out.last().expect("nonempty"))?;
                if !start_full && !next.is_degenerate() && next.width() >= full {
                    return Err(Error::Blowup { step });
                }
                out.push(next);
            }
            Ok(out)
        }
        CertPoint::Coded {
            stream,
            depth,
            power,
            phase,
        } => {
            let coding = coding.ok_or_else(|| {
                Error::BadParam("coded points need the symbolic coding of the map".into())
            })?;
            if *power == 0 || *depth == 0 {
                return Err(Error::BadParam("power and depth must be at least 1".into()));
            }
            let mut out = Vec::with_capacity(steps);
            let mut cached: Option<(usize, RatInterval)> = None;
            for t in 0..steps {
                let u = t + phase;
                let (q, r) = (u / power, u % power);
                let base = match &cached {
                    Some((cq, e)) if *cq == q => e.clone(),
                    _ => {
                        let word = stream.window(q as u64, *depth as u64)?;
                        let e = coding.refine(&word)?;
                        cached = Some((q, e.clone()));
                        e
                    }
                };
                out.push(f.image_iter(&base, r)?);
            }
            Ok(out)
        }
    }
}

/// `[n, bound]` in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event(pub u64, #[serde(with = "serde_rat")] pub Rational);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiYorkeCertificate {
    pub horizon: u64,
    #[serde(with = "serde_rat")]
    pub delta: Rational,
    #[serde(with = "serde_rat")]
    pub tol: Rational,
    pub point_a: CertPoint,
    pub point_b: CertPoint,
    /// `|f^n x - f^n y| >= bound` for all represented `x`, `y`.
    pub separations: Vec<Event>,
    /// `|f^n x - f^n y| <= bound` for all represented `x`, `y`.
    pub proximities: Vec<Event>,
    /// Smallest guaranteed distance over `0 ..= horizon`.
    #[serde(with = "serde_rat")]
    pub min_gap: Rational,
    /// Largest guaranteed distance over `0 ..= horizon`.
    #[serde(with = "serde_rat")]
    pub max_gap: Rational,
    /// Smallest upper bound on the distance over `0 ..= horizon`.
    #[serde(with = "serde_rat")]
    pub min_spread: Rational,
}

impl LiYorkeCertificate {
    pub fn best_separation(&self) -> Option<&Rational> {
        self.separations.iter().map(|e| &e.1).max()
    }

    pub fn best_proximity(&self) -> Option<&Rational> {
        self.proximities.iter().map(|e| &e.1).min()
    }
}

/// Compares two enclosure sequences of equal length.
pub fn certify_sequences(
    point_a: CertPoint,
    seq_a: &[RatInterval],
    point_b: CertPoint,
    seq_b: &[RatInterval],
    delta: &Rational,
    tol: &Rational,
) -> Result<LiYorkeCertificate> {
    if seq_a.len() != seq_b.len() || seq_a.is_empty() {
        return Err(Error::BadParam(
            "enclosure sequences must have equal nonzero length".into(),
        ));
    }
    let threshold = delta - tol;
    let mut separations = Vec::new();
    let mut proximities = Vec::new();
    let mut min_gap: Option<Rational> = None;
    let mut max_gap = Rational::zero();
    let mut min_spread: Option<Rational> = None;
    for (n, (ea, eb)) in seq_a.iter().zip(seq_b).enumerate() {
        let gap = ea.gap(eb);
        let spread = ea.spread(eb);
        if gap >= threshold && delta > &Rational::zero() {
            separations.push(Event(n as u64, gap.clone()));
        }
        if &spread <= tol {
            proximities.push(Event(n as u64, spread.clone()));
        }
        if min_gap.as_ref().is_none_or(|m| &gap < m) {
            min_gap = Some(gap.clone());
        }
        if gap > max_gap {
            max_gap = gap;
        }
        if min_spread.as_ref().is_none_or(|m| &spread < m) {
            min_spread = Some(spread);
        }
    }
    Ok(LiYorkeCertificate {
        horizon: seq_a.len() as u64 - 1,
        delta: delta.clone(),
        tol: tol.clone(),
        point_a,
        point_b,
        separations,
        proximities,
        min_gap: min_gap.expect("nonempty"),
        max_gap,
        min_spread: min_spread.expect("nonempty"),
    })
}

/// Certificate for two tracked points under `f`.
pub fn certify_pair(
    f: &PLMap,
    coding: Option<&SymbolicCoding>,
    a: &CertPoint,
    b: &CertPoint,
    horizon: u64,
    delta: &Rational,
    tol: &Rational,
) -> Result<LiYorkeCertificate> {
    let seq_a = orbit_enclosures(f, coding, a, horizon)?;
    let seq_b = orbit_enclosures(f, coding, b, horizon)?;
    certify_sequences(a.clone(), &seq_a, b.clone(), &seq_b, delta, tol)
}

/// Recomputes a certificate from its own description and compares.
pub fn recheck_certificate(
    f: &PLMap,
    coding: Option<&SymbolicCoding>,
    cert: &LiYorkeCertificate,
) -> Result<bool> {
    let again = certify_pair(
        f,
        coding,
        &cert.point_a,
        &cert.point_b,
        cert.horizon,
        &cert.delta,
        &cert.tol,
    )?;
    Ok(&again == cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub horizon: u64,
    #[serde(with = "crate::rational::serde_rat_opt")]
    pub delta: Option<Rational>,
    #[serde(with = "crate::rational::serde_rat_opt")]
    pub tol: Option<Rational>,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            horizon: 500,
            delta: None,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleMember {
    pub beta: BinaryStream,
    pub shift: u64,
    pub point: CertPoint,
    /// `I(σ^shift ω_β | depth)`.
    pub enclosure: CodeEnclosure,
    /// `f^shift` applied to the unshifted enclosure.
    pub image_enclosure: RatInterval,
    /// Whether the two enclosures above meet.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceCheck {
    pub beta: usize,
    pub shift: u64,
    /// `f(I(σ^shift ω | depth))`.
    pub image: RatInterval,
    /// `I(σ^{shift+1} ω | depth - 1)`.
    pub target: RatInterval,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub a: usize,
    pub b: usize,
    pub certificate: LiYorkeCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSample {
    pub depth: usize,
    pub horizon: u64,
    #[serde(with = "serde_rat")]
    pub delta: Rational,
    #[serde(with = "serde_rat")]
    pub tol: Rational,
    pub members: Vec<SampleMember>,
    pub invariance: Vec<InvarianceCheck>,
    pub certificates: Vec<PairCertificate>,
    /// Each member against the fixed point `z`, with `delta = |b - z| / 2`.
    pub fixed_point: Vec<PairCertificate>,
}

impl InvariantSample {
    pub fn invariance_holds(&self) -> bool {
        self.invariance.iter().all(|c| c.holds) && self.members.iter().all(|m| m.consistent)
    }
}

fn certify_all_pairs(
    points: &[CertPoint],
    seqs: &[Vec<RatInterval>],
    delta: &Rational,
    tol: &Rational,
) -> Result<Vec<PairCertificate>> {
    let pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|a| (a + 1..points.len()).map(move |b| (a, b)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| {
            certify_sequences(
                points[a].clone(),
                &seqs[a],
                points[b].clone(),
                &seqs[b],
                delta,
                tol,
            )
            .map(|certificate| PairCertificate { a, b, certificate })
        })
        .collect()
}

/// Enclosures of `f^i(x_β)` for every β and `i < shifts`, the invariance
/// checks linking them, and certificates for every pair and against `z`.
pub fn build_invariant_sample(
    coding: &SymbolicCoding,
    betas: &[BinaryStream],
    depth: usize,
    shifts: u64,
    opts: &SampleOptions,
) -> Result<InvariantSample> {
    if depth < 2 {
        return Err(Error::BadParam("sample depth must be at least 2".into()));
    }
    if shifts == 0 || betas.is_empty() {
        return Err(Error::BadParam("need at least one β and one shift".into()));
    }
    for i in 0..betas.len() {
        for j in i + 1..betas.len() {
            if betas[i].prefix(depth as u64)? == betas[j].prefix(depth as u64)? {
                return Err(Error::BetaIndistinguishable(i, j, depth));
            }
        }
    }
    let f = coding.map();
    let quad = coding.quadruple();
    let delta = opts.delta.clone().unwrap_or_else(|| quad.delta());
    let tol = opts.tol.clone().unwrap_or_else(default_tol);

    let mut members = Vec::new();
    let mut invariance = Vec::new();
    for (bi, beta) in betas.iter().enumerate() {
        let omega = OmegaSpec::new(beta.clone()).stream();
        let base = coding.code_enclosure(&omega, depth)?;
        for i in 0..shifts {
            let shifted = omega.shifted(i);
            let enclosure = coding.code_enclosure(&shifted, depth)?;
            let image_enclosure = f.image_iter(&base.interval, i as usize)?;
            let consistent = image_enclosure.intersect(&enclosure.interval).is_some();
            let image = f.image(&enclosure.interval)?;
            let target = coding.refine(&omega.window(i + 1, depth as u64 - 1)?)?;
            invariance.push(InvarianceCheck {
                beta: bi,
                shift: i,
                holds: target.contains_interval(&image),
                image,
                target,
            });
            members.push(SampleMember {
                beta: beta.clone(),
                shift: i,
                point: CertPoint::coded(shifted, depth),
                enclosure,
                image_enclosure,
                consistent,
            });
        }
    }

    let points: Vec<CertPoint> = members.iter().map(|m| m.point.clone()).collect();
    let seqs: Vec<Vec<RatInterval>> = points
        .par_iter()
        .map(|p| orbit_enclosures(f, Some(coding), p, opts.horizon))
        .collect::<Result<_>>()?;
    let certificates = certify_all_pairs(&points, &seqs, &delta, &tol)?;

    let z_point = CertPoint::Exact { x: quad.z.clone() };
    let z_seq = orbit_enclosures(f, None, &z_point, opts.horizon)?;
    let half_delta = quad.delta() / int(2);
    let fixed_point = points
        .iter()
        .zip(&seqs)
        .enumerate()
        .map(|(a, (p, s))| {
            certify_sequences(p.clone(), s, z_point.clone(), &z_seq, &half_delta, &tol).map(
                |certificate| PairCertificate {
                    a,
                    b: points.len(),
                    certificate,
                },
            )
        })
        .collect::<Result<_>>()?;

    Ok(InvariantSample {
        depth,
        horizon: opts.horizon,
        delta,
        tol,
        members,
        invariance,
        certificates,
        fixed_point,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedSample {
    pub power: usize,
    pub horizon: u64,
    /// Largest `delta` for which every pair shows a separation event.
    #[serde(with = "serde_rat")]
    pub empirical_delta: Rational,
    #[serde(with = "serde_rat")]
    pub tol: Rational,
    /// `f^phase` of the sample points, for `phase < power`.
    pub members: Vec<CertPoint>,
    pub certificates: Vec<PairCertificate>,
}

/// Moves a sample built for `g = f^power` back to `f`: the set
/// `W = ∪_{j < power} f^j(S)` is tracked under `f` itself.
pub fn lift_certificates(
    f: &PLMap,
    power: usize,
    g_coding: &SymbolicCoding,
    g_sample: &InvariantSample,
    horizon: u64,
) -> Result<LiftedSample> {
    let z = &g_coding.quadruple().z;
    if &f.eval(z)? != z {
        return Err(Error::Hypothesis(format!(
            "z = {} is not a fixed point of the base map",
            crate::rational::fmt_rat(z)
        )));
    }
    if power == 0 {
        return Err(Error::BadParam("power must be at least 1".into()));
    }
    if power == 1 {
        return Ok(LiftedSample {
            power,
            horizon: g_sample.horizon,
            empirical_delta: g_sample.delta.clone(),
            tol: g_sample.tol.clone(),
            members: g_sample.members.iter().map(|m| m.point.clone()).collect(),
            certificates: g_sample.certificates.clone(),
        });
    }
    if &f.power(power, DEFAULT_NODE_BUDGET)? != g_coding.map() {
        return Err(Error::Hypothesis(format!(
            "the coded map is not the {power}-th iterate of the base map"
        )));
    }
    let mut members = Vec::new();
    for m in &g_sample.members {
        if let CertPoint::Coded { stream, depth, .. } = &m.point {
            for phase in 0..power {
                members.push(CertPoint::Coded {
                    stream: stream.clone(),
                    depth: *depth,
                    power,
                    phase,
                });
            }
        }
    }
    let seqs: Vec<Vec<RatInterval>> = members
        .par_iter()
        .map(|p| orbit_enclosures(f, Some(g_coding), p, horizon))
        .collect::<Result<_>>()?;
    let tol = g_sample.tol.clone();
    // First pass with delta = 0 to measure the largest separations.
    let probe = certify_all_pairs(&members, &seqs, &Rational::zero(), &tol)?;
    let empirical_delta = probe
        .iter()
        .map(|p| p.certificate.max_gap.clone())
        .min()
        .unwrap_or_else(Rational::zero);
    let certificates = certify_all_pairs(&members, &seqs, &empirical_delta, &tol)?;
    Ok(LiftedSample {
        power,
        horizon,
        empirical_delta,
        tol,
        members,
        certificates,
    })
}

/// Whether two exact points stay at least `min_gap` apart at every step up
/// to `horizon`, and the certificate showing it.
pub fn opposite_sides(
    f: &PLMap,
    x: &Rational,
    y: &Rational,
    horizon: u64,
    tol: &Rational,
) -> Result<LiYorkeCertificate> {
    let a = CertPoint::Exact { x: x.clone() };
    let b = CertPoint::Exact { x: y.clone() };
    let delta = abs_diff(x, y).min(int(1));
    certify_pair(f, None, &a, &b, horizon, &delta, tol)
}
