//! Continuous piecewise-linear maps of a compact interval.
//!
//! A [`PLMap`] is the linear interpolant through finitely many exact nodes.
//! All queries (evaluation, images, level sets, composition) are exact.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::rational::{fmt_rat, Rational};

/// Default cap on the node count produced by [`PLMap::power`] and
/// [`PLMap::compose`].
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub x: Rational,
    pub y: Rational,
}

impl Node {
    pub fn new(x: Rational, y: Rational) -> Self {
        Node { x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    domain: RatInterval,
    nodes: Vec<Node>,
    self_map: bool,
}

impl PLMap {
    /// Builds the interpolant through `nodes`; the domain is spanned by the
    /// first and last abscissae.
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMap("at least two nodes are required".into()));
        }
        for w in nodes.windows(2) {
            if w[0].x >= w[1].x {
                return Err(Error::InvalidMap(format!(
                    "node abscissae must increase strictly ({} then {})",
                    fmt_rat(&w[0].x),
                    fmt_rat(&w[1].x)
                )));
            }
        }
        let domain = RatInterval::new(nodes[0].x.clone(), nodes[nodes.len() - 1].x.clone())?;
        let self_map = nodes.iter().all(|n| domain.contains(&n.y));
        Ok(PLMap {
            domain,
            nodes,
            self_map,
        })
    }

    /// Like [`PLMap::new`] but also checks the nodes against a declared domain.
    pub fn with_domain(domain: RatInterval, nodes: Vec<Node>) -> Result<Self> {
        let map = PLMap::new(nodes)?;
        if map.domain != domain {
            return Err(Error::InvalidMap(format!(
                "declared domain {domain} does not match node span {}",
                map.domain
            )));
        }
        Ok(map)
    }

    pub fn from_pairs<I: IntoIterator<Item = (Rational, Rational)>>(pairs: I) -> Result<Self> {
        PLMap::new(pairs.into_iter().map(|(x, y)| Node::new(x, y)).collect())
    }

    pub fn domain(&self) -> &RatInterval {
        &self.domain
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_self_map(&self) -> bool {
        self.self_map
    }

    fn require_self_map(&self) -> Result<()> {
        if self.self_map {
            return Ok(());
        }
        let bad = self
            .nodes
            .iter()
            .find(|n| !self.domain.contains(&n.y))
            .expect("non-self-map has an escaping node");
        Err(Error::SelfMap {
            value: fmt_rat(&bad.y),
        })
    }

    fn check_in_domain(&self, x: &Rational) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::domain(x, self.domain.lo(), self.domain.hi()))
        }
    }

    fn check_sub_domain(&self, j: &RatInterval) -> Result<()> {
        self.check_in_domain(j.lo())?;
        self.check_in_domain(j.hi())
    }

    /// Index `i` of the segment `[x_i, x_{i+1}]` containing `x`.
    fn segment_of(&self, x: &Rational) -> usize {
        let p = self.nodes.partition_point(|n| &n.x <= x);
        p.saturating_sub(1).min(self.nodes.len() - 2)
    }

    fn eval_on_segment(&self, i: usize, x: &Rational) -> Rational {
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        if x == &a.x {
            return a.y.clone();
        }
        if x == &b.x {
            return b.y.clone();
        }
        &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.check_in_domain(x)?;
        Ok(self.eval_on_segment(self.segment_of(x), x))
    }

    /// Orbit `x, f(x), ..., f^n(x)`.
    pub fn iterate(&self, x: &Rational, n: usize) -> Result<Vec<Rational>> {
        self.check_in_domain(x)?;
        let mut orbit = Vec::with_capacity(n + 1);
        orbit.push(x.clone());
        for _ in 0..n {
            let next = self.eval(orbit.last().expect("nonempty"))?;
            if !self.domain.contains(&next) {
                return Err(Error::SelfMap {
                    value: fmt_rat(&next),
                });
            }
            orbit.push(next);
        }
        Ok(orbit)
    }

    /// `f^n(x)` without keeping the orbit.
    pub fn iterate_point(&self, x: &Rational, n: usize) -> Result<Rational> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.eval(&cur)?;
        }
        Ok(cur)
    }

    /// Exact image `f(J)`.
    pub fn image(&self, j: &RatInterval) -> Result<RatInterval> {
        self.check_sub_domain(j)?;
        let mut lo = self.eval(j.lo())?;
        let mut hi = lo.clone();
        let mut consider = |v: Rational| {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        };
        consider(self.eval(j.hi())?);
        for n in &self.nodes {
            if j.lo() < &n.x && &n.x < j.hi() {
                consider(n.y.clone());
            }
        }
        RatInterval::new(lo, hi)
    }

    /// `f^k(J)` by repeated exact images.
    pub fn image_iter(&self, j: &RatInterval, k: usize) -> Result<RatInterval> {
        let mut cur = j.clone();
        for _ in 0..k {
            cur = self.image(&cur)?;
        }
        Ok(cur)
    }

    /// Solution set of `f(x) = slope * x + offset` inside `j`, as disjoint
    /// closed intervals ordered left to right.
    fn solve_against_line(
        &self,
        slope: &Rational,
        offset: &Rational,
        j: &RatInterval,
    ) -> Vec<RatInterval> {
        let Some(j) = j.intersect(&self.domain) else {
            return Vec::new();
        };
        let line = |x: &Rational| slope * x + offset;
        let first = self.segment_of(j.lo());
        let mut out: Vec<RatInterval> = Vec::new();
        for i in first..self.nodes.len() - 1 {
            let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
            if &a.x > j.hi() {
                break;
            }
            let s = (&a.x).max(j.lo()).clone();
            let t = (&b.x).min(j.hi()).clone();
            if s > t {
                continue;
            }
            let hs = self.eval_on_segment(i, &s) - line(&s);
            let ht = self.eval_on_segment(i, &t) - line(&t);
            let found = if hs.is_zero() && ht.is_zero() {
                Some(RatInterval::hull_of(s, t))
            } else if hs.is_zero() {
                Some(RatInterval::point(s))
            } else if ht.is_zero() {
                Some(RatInterval::point(t))
            } else if hs.is_positive() != ht.is_positive() {
                let root = &s + &hs * (&t - &s) / (&hs - &ht);
                Some(RatInterval::point(root))
            } else {
                None
            };
            if let Some(k) = found {
                push_merged(&mut out, k);
            }
        }
        out
    }

    /// Exact solution set of `f(x) = y` within `j`.
    pub fn preimages(&self, y: &Rational, j: &RatInterval) -> Vec<RatInterval> {
        self.solve_against_line(&Rational::zero(), y, j)
    }

    /// Exact solution set of `f(x) = x` within `j`; laps lying on the
    /// diagonal come back as nondegenerate intervals.
    pub fn fixed_points(&self, j: &RatInterval) -> Vec<RatInterval> {
        self.solve_against_line(&Rational::one(), &Rational::zero(), j)
    }

    /// All inclusion-minimal closed `K ⊆ P` with `f(K) = Q`, left to right.
    ///
    /// For nondegenerate `Q` these are exactly the intervals spanning the gap
    /// between consecutive hits of opposite endpoints of `Q`. For degenerate
    /// `Q` every solution point is minimal; one point per solution component
    /// (its left end) is returned.
    pub fn onto_preimage_components(&self, q: &RatInterval, p: &RatInterval) -> Vec<RatInterval> {
        if q.is_degenerate() {
            return self
                .preimages(q.lo(), p)
                .into_iter()
                .map(|c| RatInterval::point(c.lo().clone()))
                .collect();
        }
        let mut hits: Vec<(RatInterval, bool)> = self
            .preimages(q.lo(), p)
            .into_iter()
            .map(|c| (c, false))
            .chain(self.preimages(q.hi(), p).into_iter().map(|c| (c, true)))
            .collect();
        hits.sort_by(|a, b| a.0.lo().cmp(b.0.lo()));
        hits.windows(2)
            .filter(|w| w[0].1 != w[1].1)
            .map(|w| RatInterval::hull_of(w[0].0.hi().clone(), w[1].0.lo().clone()))
            .collect()
    }

    /// Restriction of `f` to a nondegenerate subinterval of its domain.
    pub fn restrict(&self, j: &RatInterval) -> Result<PLMap> {
        self.check_sub_domain(j)?;
        if j.is_degenerate() {
            return Err(Error::BadParam(format!(
                "cannot restrict to degenerate interval {j}"
            )));
        }
        let mut nodes = vec![Node::new(j.lo().clone(), self.eval(j.lo())?)];
        nodes.extend(
            self.nodes
                .iter()
                .filter(|n| j.lo() < &n.x && &n.x < j.hi())
                .cloned(),
        );
        nodes.push(Node::new(j.hi().clone(), self.eval(j.hi())?));
        PLMap::new(nodes)
    }

    /// Conjugate by `x -> -x`: the map `x -> -f(-x)` on the reflected domain.
    pub fn reflect(&self) -> PLMap {
        let nodes = self
            .nodes
            .iter()
            .rev()
            .map(|n| Node::new(-&n.x, -&n.y))
            .collect();
        PLMap::new(nodes).expect("reflection preserves validity")
    }

    /// Drops interior nodes that sit on the line through their neighbours.
    pub fn simplified(&self) -> PLMap {
        let mut out: Vec<Node> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                let collinear = (&b.y - &a.y) * (&n.x - &b.x) == (&n.y - &b.y) * (&b.x - &a.x);
                if collinear {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(n.clone());
        }
        PLMap::new(out).expect("simplification preserves validity")
    }

    /// `outer ∘ inner`; `inner`'s range must lie in `outer`'s domain.
    pub fn compose(outer: &PLMap, inner: &PLMap, cap: usize) -> Result<PLMap> {
        if let Some(bad) = inner.nodes.iter().find(|n| !outer.domain.contains(&n.y)) {
            return Err(Error::SelfMap {
                value: fmt_rat(&bad.y),
            });
        }
        // Each inner segment is split where it crosses a level of an outer node.
        let crossings = |a: &Node, b: &Node| -> Vec<usize> {
            let (lo, hi) = if a.y <= b.y {
                (&a.y, &b.y)
            } else {
                (&b.y, &a.y)
            };
            let start = outer.nodes.partition_point(|n| &n.x <= lo);
            let end = outer.nodes.partition_point(|n| &n.x < hi);
            let mut idx: Vec<usize> = (start..end.max(start)).collect();
            if a.y > b.y {
                idx.reverse();
            }
            idx
        };
        let needed: usize = inner.nodes.len()
            + inner
                .nodes
                .windows(2)
                .map(|w| crossings(&w[0], &w[1]).len())
                .sum::<usize>();
        if needed > cap {
            return Err(Error::Budget { needed, cap });
        }
        let mut nodes = Vec::with_capacity(needed);
        for (i, a) in inner.nodes.iter().enumerate() {
            nodes.push(Node::new(a.x.clone(), outer.eval(&a.y)?));
            if let Some(b) = inner.nodes.get(i + 1) {
                for k in crossings(a, b) {
                    let level = &outer.nodes[k];
                    let x = &a.x + (&level.x - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                    nodes.push(Node::new(x, level.y.clone()));
                }
            }
        }
        Ok(PLMap::new(nodes)?.simplified())
    }

    /// `f^n` as an exact PL map, with collinear nodes merged.
    pub fn power(&self, n: usize, cap: usize) -> Result<PLMap> {
        if n == 0 {
            return Err(Error::BadParam("power requires n >= 1".into()));
        }
        self.require_self_map()?;
        let mut acc = self.simplified();
        if acc.node_count() > cap {
            return Err(Error::Budget {
                needed: acc.node_count(),
                cap,
            });
        }
        for _ in 1..n {
            acc = PLMap::compose(self, &acc, cap)?;
        }
        Ok(acc)
    }

    /// True when `f(x) = x` for every `x` in `j`.
    pub fn is_identity_on(&self, j: &RatInterval) -> Result<bool> {
        self.check_sub_domain(j)?;
        if j.is_degenerate() {
            return Ok(&self.eval(j.lo())? == j.lo());
        }
        Ok(self.restrict(j)?.nodes.iter().all(|n| n.x == n.y))
    }

    /// Exact `min_{x in J} |f(x) - x|`.
    pub fn min_abs_displacement(&self, j: &RatInterval) -> Result<Rational> {
        self.check_sub_domain(j)?;
        if j.is_degenerate() {
            return Ok((self.eval(j.lo())? - j.lo()).abs());
        }
        let r = self.restrict(j)?;
        let h: Vec<Rational> = r.nodes.iter().map(|n| &n.y - &n.x).collect();
        let crosses = h.iter().any(Zero::is_zero)
            || h.windows(2)
                .any(|w| w[0].is_positive() != w[1].is_positive());
        if crosses {
            return Ok(Rational::zero());
        }
        Ok(h.into_iter().map(|v| v.abs()).min().expect("nonempty"))
    }
}

fn push_merged(out: &mut Vec<RatInterval>, k: RatInterval) {
    if let Some(last) = out.last_mut() {
        if k.lo() <= last.hi() {
            *last = last.hull(&k);
            return;
        }
    }
    out.push(k);
}
