//! Named example maps and the square-root construction.

use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::plmap::{Node, PLMap};
use crate::rational::{int, rat, Rational};

/// `T(x) = 1 - |2x - 1|` on `[0, 1]`.
pub fn tent() -> PLMap {
    PLMap::from_pairs([(int(0), int(0)), (rat(1, 2), int(1)), (int(1), int(0))])
        .expect("tent nodes are valid")
}

/// The non-turbulent map on `[-1, 1]`: `2x+2`, then `-2x`, then `-x`.
/// Its second iterate restricted to `[0, 1]` is the tent map.
pub fn remark1() -> PLMap {
    PLMap::from_pairs([
        (int(-1), int(0)),
        (rat(-1, 2), int(1)),
        (int(0), int(0)),
        (int(1), int(-1)),
    ])
    .expect("remark1 nodes are valid")
}

/// The map `f_i` on `[1, 2i+1]`: `{1, ..., 2i+1}` is a Štefan orbit of least
/// period `2i+1`, while `f_i^2` is the identity on `[i+4/3, i+5/3]`.
pub fn stefan(i: i64) -> Result<PLMap> {
    if i < 1 {
        return Err(Error::BadParam(format!("stefan map needs i >= 1, got {i}")));
    }
    let third = |k: i64| int(i + 1) + rat(k, 3);
    let candidates = [
        (int(1), int(i + 1)),
        (int(2), int(2 * i + 1)),
        (int(i + 1), int(i + 2)),
        (third(1), third(2)),
        (third(2), third(1)),
        (int(i + 2), int(i)),
        (int(2 * i + 1), int(1)),
    ];
    // For i = 1 the points 2 = i+1 and i+2 = 2i+1 coincide (with equal values).
    let mut nodes: Vec<Node> = Vec::with_capacity(candidates.len());
    for (x, y) in candidates {
        match nodes.last() {
            Some(last) if last.x == x => {
                debug_assert_eq!(last.y, y);
            }
            _ => nodes.push(Node::new(x, y)),
        }
    }
    PLMap::new(nodes)
}

/// Resolves a builtin by name: `tent`, `remark1`, `stefan` (with `param`).
pub fn builtin(name: &str, param: Option<i64>) -> Result<PLMap> {
    match name {
        "tent" => no_param(name, param).map(|_| tent()),
        "remark1" => no_param(name, param).map(|_| remark1()),
        "stefan" => stefan(
            param.ok_or_else(|| Error::BadParam("stefan requires a parameter i >= 1".into()))?,
        ),
        other => Err(Error::UnknownMap(other.to_string())),
    }
}

fn no_param(name: &str, param: Option<i64>) -> Result<()> {
    match param {
        None => Ok(()),
        Some(p) => Err(Error::BadParam(format!(
            "{name} takes no parameter (got {p})"
        ))),
    }
}

/// Parses `tent`, `remark1`, `stefan:3` style references.
pub fn builtin_from_ref(spec: &str) -> Result<PLMap> {
    match spec.split_once(':') {
        Some((name, p)) => {
            let param = p
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::BadParam(format!("bad builtin parameter `{p}`")))?;
            builtin(name.trim(), Some(param))
        }
        None => builtin(spec.trim(), None),
    }
}

/// The square root `F` on `[0, 3]` of a self-map `f` of `[0, 1]`:
/// `F = f + 2` on `[0,1]`, `(2 - x)(f(1) + 2)` on `[1, 2]`, `x - 2` on `[2, 3]`.
pub fn square_root(f: &PLMap) -> Result<PLMap> {
    let unit = RatInterval::new(int(0), int(1))?;
    if f.domain() != &unit {
        return Err(Error::domain(f.domain().lo(), &int(0), &int(1)));
    }
    if !f.is_self_map() {
        return Err(Error::BadParam(
            "square root needs a self-map of [0, 1]".into(),
        ));
    }
    let two = int(2);
    let mut nodes: Vec<Node> = f
        .nodes()
        .iter()
        .map(|n| Node::new(n.x.clone(), &n.y + &two))
        .collect();
    nodes.push(Node::new(two.clone(), int(0)));
    nodes.push(Node::new(int(3), int(1)));
    PLMap::new(nodes)
}

/// `f(1) + 2`, the value of the square root at `x = 1`.
pub fn square_root_peak(f: &PLMap) -> Result<Rational> {
    Ok(f.eval(&int(1))? + int(2))
}
