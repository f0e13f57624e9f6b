//! Periodic points, the Sharkovsky order, Štefan orbits and the turbulence
//! they force.

use serde::{Deserialize, Serialize};

use crate::builtins::stefan;
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::plmap::PLMap;
use crate::rational::{fmt_rat, int, rat, serde_rat, serde_rat_vec, Rational};
use crate::turbulence::{check_witness, find_strict_turbulence, TurbulenceWitness, WitnessCheck};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPoints {
    /// Isolated solutions of `f^n(x) = x`, plus the endpoints of solution
    /// intervals, in increasing order.
    #[serde(with = "serde_rat_vec")]
    pub points: Vec<Rational>,
    /// Maximal intervals on which `f^n` is the identity.
    pub coincidence: Vec<RatInterval>,
}

/// All solutions of `f^n(x) = x`.
pub fn periodic_points(f: &PLMap, n: usize, cap: usize) -> Result<PeriodicPoints> {
    let g = f.power(n, cap)?;
    let comps = g.fixed_points(g.domain());
    let mut points = Vec::new();
    let mut coincidence = Vec::new();
    for c in comps {
        points.push(c.lo().clone());
        if !c.is_degenerate() {
            points.push(c.hi().clone());
            coincidence.push(c);
        }
    }
    Ok(PeriodicPoints {
        points,
        coincidence,
    })
}

/// Least `m <= max_n` with `f^m(x) = x`.
pub fn least_period(f: &PLMap, x: &Rational, max_n: usize) -> Result<Option<usize>> {
    let mut cur = x.clone();
    for m in 1..=max_n {
        cur = f.eval(&cur)?;
        if &cur == x {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn split_two_power(mut p: u64) -> (u32, u64) {
    let mut a = 0;
    while p.is_multiple_of(2) {
        p /= 2;
        a += 1;
    }
    (a, p)
}

/// True when `p` comes strictly before `q` in
/// `3, 5, 7, ..., 2·3, 2·5, ..., 4·3, ..., 8, 4, 2, 1`.
pub fn sharkovsky_precedes(p: u64, q: u64) -> bool {
    assert!(p >= 1 && q >= 1, "periods start at 1");
    let (a, m) = split_two_power(p);
    let (b, k) = split_two_power(q);
    match (m > 1, k > 1) {
        (true, true) => a < b || (a == b && m < k),
        (true, false) => true,
        (false, true) => false,
        (false, false) => a > b,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    /// `x, f(x), ..., f^{m-1}(x)` in orbit order.
    #[serde(with = "serde_rat_vec")]
    pub points: Vec<Rational>,
    pub least_period: usize,
}

impl PeriodicOrbit {
    /// Completes the orbit of `x`, which must have least period `period`.
    pub fn from_point(f: &PLMap, x: &Rational, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::BadOrbit("period must be at least 1".into()));
        }
        let orbit = f.iterate(x, period)?;
        match least_period(f, x, period)? {
            Some(m) if m == period => Ok(PeriodicOrbit {
                points: orbit[..period].to_vec(),
                least_period: period,
            }),
            Some(m) => Err(Error::BadOrbit(format!(
                "{} has least period {m}, not {period}",
                fmt_rat(x)
            ))),
            None => Err(Error::BadOrbit(format!(
                "{} does not return after {period} steps",
                fmt_rat(x)
            ))),
        }
    }

    pub fn sorted(&self) -> Vec<Rational> {
        let mut s = self.points.clone();
        s.sort();
        s
    }

    fn reflect(&self) -> PeriodicOrbit {
        PeriodicOrbit {
            points: self.points.iter().map(|x| -x).collect(),
            least_period: self.least_period,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StefanAnalysis {
    pub orbit: PeriodicOrbit,
    #[serde(with = "serde_rat")]
    pub xs: Rational,
    pub is_stefan: bool,
    /// `f^{m-1}(x_s), f^{m-3}(x_s), ..., x_s, f(x_s), ..., f^{m-2}(x_s)`.
    #[serde(with = "serde_rat_vec")]
    pub chain: Vec<Rational>,
    /// The spiral runs right to left (a Štefan orbit of the reflected map).
    pub mirrored: bool,
}

fn chain_from(f: &PLMap, xs: &Rational, m: usize) -> Result<Vec<Rational>> {
    let it = f.iterate(xs, m)?;
    // Even iterates descending from m-1, then odd ones ascending.
    let mut chain: Vec<Rational> = (0..m)
        .rev()
        .filter(|k| k % 2 == 0)
        .map(|k| it[k].clone())
        .collect();
    chain.extend((1..m).step_by(2).map(|k| it[k].clone()));
    Ok(chain)
}

fn analyze_oriented(f: &PLMap, orbit: &PeriodicOrbit) -> Result<(Rational, Vec<Rational>, bool)> {
    let m = orbit.least_period;
    let mut xs: Option<Rational> = None;
    for x in &orbit.points {
        if x < &f.eval(x)? && xs.as_ref().is_none_or(|best| x > best) {
            xs = Some(x.clone());
        }
    }
    let xs = xs.ok_or_else(|| Error::BadOrbit("no orbit point moves right".into()))?;
    let chain = chain_from(f, &xs, m)?;
    let ok = chain.windows(2).all(|w| w[0] < w[1]);
    Ok((xs, chain, ok))
}

/// Checks the alternating spiral around `x_s = max{x ∈ P : x < f(x)}`, and
/// the mirrored spiral when the direct one fails.
pub fn stefan_analyze(f: &PLMap, orbit: &PeriodicOrbit) -> Result<StefanAnalysis> {
    let m = orbit.least_period;
    if m < 3 || m.is_multiple_of(2) || orbit.points.len() != m {
        return Err(Error::BadOrbit(format!(
            "Štefan analysis needs an odd period of at least 3, got {m}"
        )));
    }
    let x0 = &orbit.points[0];
    if PeriodicOrbit::from_point(f, x0, m)? != *orbit {
        return Err(Error::BadOrbit("points do not form an orbit of f".into()));
    }
    let (xs, chain, ok) = analyze_oriented(f, orbit)?;
    if ok {
        return Ok(StefanAnalysis {
            orbit: orbit.clone(),
            xs,
            is_stefan: true,
            chain,
            mirrored: false,
        });
    }
    let (mxs, mchain, mok) = analyze_oriented(&f.reflect(), &orbit.reflect())?;
    if mok {
        return Ok(StefanAnalysis {
            orbit: orbit.clone(),
            xs: -mxs,
            is_stefan: true,
            chain: mchain.iter().rev().map(|x| -x).collect(),
            mirrored: true,
        });
    }
    Ok(StefanAnalysis {
        orbit: orbit.clone(),
        xs,
        is_stefan: false,
        chain,
        mirrored: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StefanTurbulence {
    /// Strict witness for `f²`.
    pub square_witness: TurbulenceWitness,
    /// Fixed point of `f` between `x_s` and `f(x_s)`.
    #[serde(with = "serde_rat")]
    pub z: Rational,
    /// `(w, u, v)` of the spiral construction; absent for period 3.
    #[serde(with = "serde_rat_vec")]
    pub spiral_points: Vec<Rational>,
    /// Period 3 used the orbit-gap route.
    pub fallback: bool,
    /// `f^{m-2}([x_s, f x_s]) ∩ f^{m-1}([f^{m-1} x_s, f^{m-3} x_s])`.
    pub covering: RatInterval,
    /// Whether `covering ⊇ [min P, max P]`.
    pub covering_holds: bool,
}

fn interval_between(a: &Rational, b: &Rational) -> RatInterval {
    RatInterval::hull_of(a.clone(), b.clone())
}

fn covering_check(
    f: &PLMap,
    xs: &Rational,
    m: usize,
    orbit: &PeriodicOrbit,
) -> Result<(RatInterval, bool)> {
    let it = f.iterate(xs, m)?;
    let left = f.image_iter(&interval_between(xs, &it[1]), m - 2)?;
    let right = f.image_iter(&interval_between(&it[m - 1], &it[m - 3]), m - 1)?;
    let sorted = orbit.sorted();
    let hull = interval_between(&sorted[0], &sorted[m - 1]);
    match left.intersect(&right) {
        Some(common) => {
            let holds = common.contains_interval(&hull);
            Ok((common, holds))
        }
        None => Ok((RatInterval::point(xs.clone()), false)),
    }
}

fn all_points(comps: &[RatInterval]) -> Vec<Rational> {
    let mut out = Vec::new();
    for c in comps {
        out.push(c.lo().clone());
        if !c.is_degenerate() {
            out.push(c.hi().clone());
        }
    }
    out
}

/// The spiral construction for `m >= 5` on a direct (non-mirrored) orbit.
fn spiral_witness(
    f: &PLMap,
    g: &PLMap,
    xs: &Rational,
    m: usize,
) -> Result<(Rational, Vec<Rational>, TurbulenceWitness)> {
    let it = f.iterate(xs, m)?;
    let z = f
        .fixed_points(&interval_between(xs, &it[1]))
        .first()
        .map(|c| c.lo().clone())
        .ok_or_else(|| Error::Construction("no fixed point between x_s and f(x_s)".into()))?;
    let (pivot, outer) = (&it[m - 4], &it[m - 2]);
    let w_candidates = all_points(&g.preimages(&z, &interval_between(pivot, outer)));
    for w in w_candidates.iter().rev() {
        if w <= pivot {
            continue;
        }
        let us: Vec<Rational> = all_points(&g.preimages(w, &interval_between(&z, pivot)))
            .into_iter()
            .filter(|u| u > &z && u < pivot)
            .collect();
        let vs: Vec<Rational> = all_points(&g.preimages(w, &interval_between(pivot, w)))
            .into_iter()
            .filter(|v| v > pivot && v < w)
            .collect();
        let (Some(u), Some(v)) = (us.first(), vs.last()) else {
            continue;
        };
        let j0 = interval_between(&z, u);
        let j1 = interval_between(v, w);
        if let WitnessCheck::Accepted(wit) = check_witness(g, &j0, &j1)? {
            if wit.strict {
                return Ok((z, vec![w.clone(), u.clone(), v.clone()], wit));
            }
        }
    }
    Err(Error::Construction(format!(
        "no strict witness for f² from the spiral around x_s = {}",
        fmt_rat(xs)
    )))
}

/// Strict turbulence of `f²` forced by a Štefan orbit, and the covering
/// that makes `f^n` strictly turbulent for `n >= m - 1`.
pub fn stefan_turbulence(
    f: &PLMap,
    analysis: &StefanAnalysis,
    cap: usize,
) -> Result<StefanTurbulence> {
    if !analysis.is_stefan {
        return Err(Error::BadOrbit("orbit is not a Štefan orbit".into()));
    }
    if analysis.mirrored {
        let mf = f.reflect();
        let morbit = analysis.orbit.reflect();
        let manalysis = StefanAnalysis {
            xs: -&analysis.xs,
            chain: analysis.chain.iter().rev().map(|x| -x).collect(),
            orbit: morbit,
            is_stefan: true,
            mirrored: false,
        };
        let r = stefan_turbulence(&mf, &manalysis, cap)?;
        let wit = check_witness(
            &f.power(2, cap)?,
            &r.square_witness.j1.reflect(),
            &r.square_witness.j0.reflect(),
        )?
        .witness()
        .ok_or_else(|| Error::Construction("reflected witness failed to verify".into()))?;
        return Ok(StefanTurbulence {
            square_witness: wit,
            z: -r.z,
            spiral_points: r.spiral_points.iter().map(|x| -x).collect(),
            fallback: r.fallback,
            covering: r.covering.reflect(),
            covering_holds: r.covering_holds,
        });
    }
    let m = analysis.orbit.least_period;
    let xs = &analysis.xs;
    let g = f.power(2, cap)?;
    let (covering, covering_holds) = covering_check(f, xs, m, &analysis.orbit)?;
    if m >= 5 {
        let (z, spiral_points, square_witness) = spiral_witness(f, &g, xs, m)?;
        return Ok(StefanTurbulence {
            square_witness,
            z,
            spiral_points,
            fallback: false,
            covering,
            covering_holds,
        });
    }
    // Period 3: the two gaps of the orbit already give a witness for f²;
    // a disjoint one is then searched for directly.
    let sorted = analysis.orbit.sorted();
    let gap_left = interval_between(&sorted[0], &sorted[1]);
    let gap_right = interval_between(&sorted[1], &sorted[2]);
    if !check_witness(&g, &gap_left, &gap_right)?.is_accepted() {
        return Err(Error::Construction(
            "orbit gaps do not cover under f²".into(),
        ));
    }
    let square_witness = find_strict_turbulence(&g)
        .ok_or_else(|| Error::Construction("no strict witness for f² found".into()))?;
    let z = f
        .fixed_points(&interval_between(xs, &f.eval(xs)?))
        .first()
        .map(|c| c.lo().clone())
        .ok_or_else(|| Error::Construction("no fixed point between x_s and f(x_s)".into()))?;
    Ok(StefanTurbulence {
        square_witness,
        z,
        spiral_points: Vec::new(),
        fallback: true,
        covering,
        covering_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StefanFamilyCheck {
    pub i: i64,
    pub least_period: Option<usize>,
    /// `f_i²` is the identity on `[i + 4/3, i + 5/3]`.
    pub square_is_identity_on_middle: bool,
    /// `min |f_i(x) - x|` over `[1, i + 4/3] ∪ [i + 5/3, 2i + 1]`.
    #[serde(with = "serde_rat")]
    pub min_displacement_outside: Rational,
}

/// The listed properties of `f_i`, computed exactly.
pub fn stefan_family_check(i: i64, cap: usize) -> Result<StefanFamilyCheck> {
    let f = stefan(i)?;
    let lo_mid = int(i) + rat(4, 3);
    let hi_mid = int(i) + rat(5, 3);
    let middle = RatInterval::new(lo_mid.clone(), hi_mid.clone())?;
    let square_is_identity_on_middle = f.power(2, cap)?.is_identity_on(&middle)?;
    let left = RatInterval::new(int(1), lo_mid)?;
    let right = RatInterval::new(hi_mid, int(2 * i + 1))?;
    let min_displacement_outside = f
        .min_abs_displacement(&left)?
        .min(f.min_abs_displacement(&right)?);
    Ok(StefanFamilyCheck {
        i,
        least_period: least_period(&f, &int(1), (2 * i + 1) as usize)?,
        square_is_identity_on_middle,
        min_displacement_outside,
    })
}
