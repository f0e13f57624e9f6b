//! Turbulence witnesses, the canonical quadruple `z < c <= a < b`, and
//! periodic points following cycles of intervals.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::plmap::{PLMap, DEFAULT_NODE_BUDGET};
use crate::rational::{abs_diff, serde_rat, Rational};

/// Two closed intervals, at most one common point, whose images both cover
/// their union. `j0` is the left one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurbulenceWitness {
    pub j0: RatInterval,
    pub j1: RatInterval,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Why a candidate pair is not a witness: the image of one interval misses
/// part of the union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub side: Side,
    pub image: RatInterval,
    pub required: RatInterval,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let which = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(
            f,
            "image {} of the {which} interval does not contain {}",
            self.image, self.required
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessCheck {
    Accepted(TurbulenceWitness),
    Rejected(Rejection),
}

impl WitnessCheck {
    pub fn witness(self) -> Option<TurbulenceWitness> {
        match self {
            WitnessCheck::Accepted(w) => Some(w),
            WitnessCheck::Rejected(_) => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, WitnessCheck::Accepted(_))
    }
}

/// Checks `f(J0) ∩ f(J1) ⊇ J0 ∪ J1` exactly.
pub fn check_witness(f: &PLMap, j0: &RatInterval, j1: &RatInterval) -> Result<WitnessCheck> {
    let (left, right) = if j0.lo() <= j1.lo() {
        (j0, j1)
    } else {
        (j1, j0)
    };
    if let Some(common) = left.intersect(right) {
        if !common.is_degenerate() {
            return Err(Error::Overlap {
                j0: left.to_string(),
                j1: right.to_string(),
            });
        }
    }
    let union = left.hull(right);
    for (side, j) in [(Side::Left, left), (Side::Right, right)] {
        let image = f.image(j)?;
        if !image.contains_interval(&union) {
            return Ok(WitnessCheck::Rejected(Rejection {
                side,
                image,
                required: union,
            }));
        }
    }
    Ok(WitnessCheck::Accepted(TurbulenceWitness {
        j0: left.clone(),
        j1: right.clone(),
        strict: left.intersect(right).is_none(),
    }))
}

/// Whether the quadruple runs left to right (`z < b`) or mirrored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Increasing,
    Decreasing,
}

/// Points with `f(z) = z = f(b)` and `f(c) = b = f(a)`, ordered
/// `z < c <= a < b` (or the mirror image), and the coding intervals
/// `I(0) = [z : c]`, `I(1) = [a : b]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalQuadruple {
    #[serde(with = "serde_rat")]
    pub z: Rational,
    #[serde(with = "serde_rat")]
    pub c: Rational,
    #[serde(with = "serde_rat")]
    pub a: Rational,
    #[serde(with = "serde_rat")]
    pub b: Rational,
    pub i0: RatInterval,
    pub i1: RatInterval,
    pub orientation: Orientation,
}

impl CanonicalQuadruple {
    fn from_points(z: Rational, c: Rational, a: Rational, b: Rational) -> Self {
        let orientation = if z < b {
            Orientation::Increasing
        } else {
            Orientation::Decreasing
        };
        CanonicalQuadruple {
            i0: RatInterval::hull_of(z.clone(), c.clone()),
            i1: RatInterval::hull_of(a.clone(), b.clone()),
            z,
            c,
            a,
            b,
            orientation,
        }
    }

    fn reflect(&self) -> Self {
        CanonicalQuadruple::from_points(-&self.z, -&self.c, -&self.a, -&self.b)
    }

    /// `|b - z|`, the scrambling constant.
    pub fn delta(&self) -> Rational {
        abs_diff(&self.b, &self.z)
    }

    /// True when `c = a`, i.e. `I(0)` and `I(1)` touch.
    pub fn touching(&self) -> bool {
        self.c == self.a
    }

    /// Re-checks the defining equations, the ordering and the covering
    /// property against `f`.
    pub fn verify(&self, f: &PLMap) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::Construction(format!(
                "quadruple check failed: {what}"
            )))
        };
        let ordered = match self.orientation {
            Orientation::Increasing => self.z < self.c && self.c <= self.a && self.a < self.b,
            Orientation::Decreasing => self.b < self.a && self.a <= self.c && self.c < self.z,
        };
        if !ordered {
            return fail("points out of order");
        }
        if f.eval(&self.z)? != self.z || f.eval(&self.b)? != self.z {
            return fail("f(z) = z = f(b)");
        }
        if f.eval(&self.c)? != self.b || f.eval(&self.a)? != self.b {
            return fail("f(c) = b = f(a)");
        }
        if !check_witness(f, &self.i0, &self.i1)?.is_accepted() {
            return fail("f(I0) ∩ f(I1) ⊇ I0 ∪ I1");
        }
        Ok(())
    }
}

fn component_points(components: &[RatInterval]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for c in components {
        out.push(c.lo().clone());
        if !c.is_degenerate() {
            out.push(c.hi().clone());
        }
    }
    out
}

/// Fixed points, their preimages, and preimages of those, as exact points
/// (flat components contribute their endpoints).
pub fn candidate_points(f: &PLMap) -> Vec<Rational> {
    let dom = f.domain();
    let fixed = component_points(&f.fixed_points(dom));
    let mut all = fixed.clone();
    let mut frontier = fixed;
    for _ in 0..2 {
        let mut next = Vec::new();
        for y in &frontier {
            next.extend(component_points(&f.preimages(y, dom)));
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.sort();
    all.dedup();
    all
}

#[derive(Debug, Clone)]
struct RawQuad {
    z: Rational,
    c: Rational,
    a: Rational,
    b: Rational,
}

impl RawQuad {
    fn strict(&self) -> bool {
        self.c != self.a
    }

    fn increasing(&self) -> bool {
        self.z < self.b
    }

    fn intervals(&self) -> (RatInterval, RatInterval) {
        (
            RatInterval::hull_of(self.z.clone(), self.c.clone()),
            RatInterval::hull_of(self.a.clone(), self.b.clone()),
        )
    }

    /// Preference: larger `|b - z|`, then strict, then increasing, then
    /// leftmost `z`, then leftmost `b`.
    fn preference(&self, other: &RawQuad) -> Ordering {
        abs_diff(&other.b, &other.z)
            .cmp(&abs_diff(&self.b, &self.z))
            .then(other.strict().cmp(&self.strict()))
            .then(other.increasing().cmp(&self.increasing()))
            .then(self.z.cmp(&other.z))
            .then(self.b.cmp(&other.b))
    }
}

/// Every quadruple built from exact fixed points `z`, preimages `b` of `z`
/// and preimages `c`, `a` of `b` strictly between them, restricted to
/// `window`. For each `(z, b)` the preimage of `b` nearest `z` becomes `c`
/// and the one nearest `b` becomes `a`.
fn raw_quadruples(f: &PLMap, window: &RatInterval) -> Vec<RawQuad> {
    let mut out = Vec::new();
    for z in component_points(&f.fixed_points(window)) {
        for b in component_points(&f.preimages(&z, window)) {
            if b == z {
                continue;
            }
            let between = RatInterval::hull_of(z.clone(), b.clone());
            let mut inner: Vec<Rational> = component_points(&f.preimages(&b, &between))
                .into_iter()
                .filter(|x| x != &z && x != &b)
                .collect();
            if inner.is_empty() {
                continue;
            }
            inner.sort();
            let (near_z, near_b) = if z < b {
                (inner[0].clone(), inner[inner.len() - 1].clone())
            } else {
                (inner[inner.len() - 1].clone(), inner[0].clone())
            };
            out.push(RawQuad {
                z: z.clone(),
                c: near_z,
                a: near_b,
                b,
            });
        }
    }
    out.sort_by(RawQuad::preference);
    out
}

fn witness_from_raw(f: &PLMap, q: &RawQuad) -> Option<TurbulenceWitness> {
    let (i0, i1) = q.intervals();
    check_witness(f, &i0, &i1).ok()?.witness()
}

/// Searches the finite candidate set for a turbulence witness. Every
/// returned witness passes [`check_witness`].
pub fn find_turbulence(f: &PLMap) -> Option<TurbulenceWitness> {
    raw_quadruples(f, f.domain())
        .iter()
        .find_map(|q| witness_from_raw(f, q))
}

/// As [`find_turbulence`], but only disjoint witnesses qualify.
pub fn find_strict_turbulence(f: &PLMap) -> Option<TurbulenceWitness> {
    raw_quadruples(f, f.domain())
        .iter()
        .filter(|q| q.strict())
        .find_map(|q| witness_from_raw(f, q))
}

fn max_point(components: &[RatInterval]) -> Option<Rational> {
    components.last().map(|c| c.hi().clone())
}

fn min_point(components: &[RatInterval]) -> Option<Rational> {
    components.first().map(|c| c.lo().clone())
}

/// The extremal construction on the increasing side: given `u < v` with
/// `f(u) <= u`, `f(v) >= v`, and a point of `[v, top]` mapped at or below
/// every fixed point of `[u, v]`:
/// `z = max Fix ∩ [u, v]`, `b = min f⁻¹(z) ∩ [v, top]`,
/// `c = min f⁻¹(b) ∩ (z, v]`, `a = max f⁻¹(b) ∩ [v, b]`.
fn extremal_increasing(
    f: &PLMap,
    u: &Rational,
    v: &Rational,
    top: &Rational,
) -> Result<CanonicalQuadruple> {
    let missing = |what: &str| Error::Construction(format!("empty solution set for {what}"));
    let uv = RatInterval::new(u.clone(), v.clone())?;
    let z = max_point(&f.fixed_points(&uv)).ok_or_else(|| missing("z"))?;
    let b = min_point(&f.preimages(&z, &RatInterval::new(v.clone(), top.clone())?))
        .ok_or_else(|| missing("b"))?;
    if b <= z {
        return Err(Error::Construction("b does not lie right of z".into()));
    }
    let c = f
        .preimages(&b, &RatInterval::new(z.clone(), v.clone())?)
        .iter()
        .find_map(|comp| {
            if comp.lo() > &z {
                Some(comp.lo().clone())
            } else if comp.hi() > &z {
                Some(z.clone())
            } else {
                None
            }
        })
        .filter(|c| c > &z)
        .ok_or_else(|| missing("c"))?;
    let a = max_point(&f.preimages(&b, &RatInterval::new(v.clone(), b.clone())?))
        .ok_or_else(|| missing("a"))?;
    let quad = CanonicalQuadruple::from_points(z, c, a, b);
    quad.verify(f)?;
    Ok(quad)
}

/// The construction starting from a witness whose left interval carries
/// points `u < v` with `f(u) = min J0` and `f(v) = max J1`.
fn from_left_home(
    f: &PLMap,
    left: &RatInterval,
    right: &RatInterval,
) -> Option<CanonicalQuadruple> {
    let us = component_points(&f.preimages(left.lo(), left));
    let vs = component_points(&f.preimages(right.hi(), left));
    let u = us.iter().min()?;
    let v = vs.iter().max()?;
    if u >= v {
        return None;
    }
    extremal_increasing(f, u, v, right.hi()).ok()
}

/// Canonical quadruple for a verified witness.
///
/// Tries the extremal construction from `J0` directly, then on the mirrored
/// map, and finally tightens the best quadruple found inside `J0 ∪ J1` by the
/// same extremal steps (with `u = z`, `v = c`, upper bound `b`).
pub fn canonical_quadruple(
    f: &PLMap,
    j0: &RatInterval,
    j1: &RatInterval,
) -> Result<CanonicalQuadruple> {
    let witness = match check_witness(f, j0, j1)? {
        WitnessCheck::Accepted(w) => w,
        WitnessCheck::Rejected(r) => {
            return Err(Error::Construction(format!(
                "not a turbulence witness: {r}"
            )))
        }
    };
    let (left, right) = (&witness.j0, &witness.j1);
    if let Some(q) = from_left_home(f, left, right) {
        return Ok(q);
    }
    let mirror = f.reflect();
    if let Some(q) = from_left_home(&mirror, &right.reflect(), &left.reflect()) {
        let q = q.reflect();
        q.verify(f)?;
        return Ok(q);
    }
    let window = left.hull(right);
    for raw in raw_quadruples(f, &window) {
        let tightened = if raw.increasing() {
            extremal_increasing(f, &raw.z, &raw.c, &raw.b)
        } else {
            extremal_increasing(&mirror, &-&raw.z, &-&raw.c, &-&raw.b).map(|q| q.reflect())
        };
        if let Ok(q) = tightened {
            q.verify(f)?;
            return Ok(q);
        }
    }
    Err(Error::Construction(format!(
        "no quadruple found for witness {left}, {right}"
    )))
}

/// Closed intervals `J_0 ... J_{n-1}` with `f(J_i) ⊇ J_{i+1 mod n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    intervals: Vec<RatInterval>,
}

impl CycleWitness {
    pub fn new(f: &PLMap, intervals: Vec<RatInterval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::BadParam(
                "a cycle needs at least one interval".into(),
            ));
        }
        let n = intervals.len();
        for i in 0..n {
            let image = f.image(&intervals[i])?;
            let next = &intervals[(i + 1) % n];
            if !image.contains_interval(next) {
                return Err(Error::BadParam(format!(
                    "f(J_{i}) = {image} does not cover J_{} = {next}",
                    (i + 1) % n
                )));
            }
        }
        Ok(CycleWitness { intervals })
    }

    pub fn intervals(&self) -> &[RatInterval] {
        &self.intervals
    }

    pub fn period(&self) -> usize {
        self.intervals.len()
    }
}

/// A point `y` with `f^n(y) = y` and `f^i(y) ∈ J_i`, found by pulling `J_0`
/// back along the cycle through leftmost minimal onto-preimages and taking
/// the leftmost fixed point of the resulting branch of `f^n`.
pub fn follow_cycle(f: &PLMap, cycle: &CycleWitness) -> Result<Rational> {
    let js = cycle.intervals();
    let n = js.len();
    let mut pulled: Vec<RatInterval> = vec![js[0].clone(); n + 1];
    for i in (0..n).rev() {
        pulled[i] = f
            .onto_preimage_components(&pulled[i + 1], &js[i])
            .into_iter()
            .next()
            .ok_or_else(|| Error::Construction(format!("pullback through J_{i} is empty")))?;
    }
    let base = &pulled[0];
    let y = if base.is_degenerate() {
        base.lo().clone()
    } else {
        let mut branch = f.restrict(base)?;
        for k in &pulled[1..n] {
            branch = PLMap::compose(&f.restrict(k)?, &branch, DEFAULT_NODE_BUDGET)?;
        }
        branch
            .fixed_points(base)
            .first()
            .map(|c| c.lo().clone())
            .ok_or_else(|| Error::Construction("branch of f^n has no fixed point".into()))?
    };
    let orbit = f.iterate(&y, n)?;
    debug_assert_eq!(orbit[n], y);
    for (i, j) in js.iter().enumerate() {
        if !j.contains(&orbit[i]) {
            return Err(Error::Construction(format!(
                "periodic point leaves J_{i} at step {i}"
            )));
        }
    }
    if orbit[n] != y {
        return Err(Error::Construction("pullback did not close up".into()));
    }
    Ok(y)
}
