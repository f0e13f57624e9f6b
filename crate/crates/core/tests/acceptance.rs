//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Expected values come from hand-derivable facts or from oracles coded
//! here independently of the library (block sums, verbal constructions,
//! explicit ordering tables, exact orbit iteration).

use std::time::{Duration, Instant};

use chaoscope::builtins::{remark1, square_root, stefan, tent};
use chaoscope::coding::SymbolicCoding;
use chaoscope::interval::iv;
use chaoscope::orbits::{
    periodic_points, sharkovsky_precedes, stefan_analyze, stefan_family_check, stefan_turbulence,
    PeriodicOrbit,
};
use chaoscope::rational::{abs_diff, int, pow2_neg, rat};
use chaoscope::scramble::{
    block_offset, build_invariant_sample, certify_pair, omega_prefix, CertPoint, OmegaSpec,
    SampleOptions,
};
use chaoscope::sigma2::{sigma_scrambled_check, tau_density_offset};
use chaoscope::stream::{BinaryStream, SymbolWord};
use chaoscope::turbulence::{canonical_quadruple, check_witness, find_turbulence};
use chaoscope::DEFAULT_NODE_BUDGET;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn stream(s: &str) -> BinaryStream {
    BinaryStream::parse(s).expect("valid descriptor")
}

fn tent_quadruple() -> Outcome {
    let t = tent();
    let w = check_witness(&t, &iv(int(0), rat(1, 2)), &iv(rat(1, 2), int(1)))
        .map_err(|e| e.to_string())?
        .witness()
        .ok_or("tent halves rejected")?;
    let q = canonical_quadruple(&t, &w.j0, &w.j1).map_err(|e| e.to_string())?;
    let got = (q.z.clone(), q.c.clone(), q.a.clone(), q.b.clone());
    ensure(
        got == (int(0), rat(1, 2), rat(1, 2), int(1)),
        format!("quadruple {got:?}"),
    )?;
    ensure(q.delta() == int(1), "delta != 1")?;
    Ok("(z,c,a,b) = (0,1/2,1/2,1), delta = 1".into())
}

fn remark1_lift_hypothesis() -> Outcome {
    let f = remark1();
    ensure(find_turbulence(&f).is_none(), "remark1 reported turbulent")?;
    let g = f.power(2, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let unit = g.restrict(&iv(int(0), int(1))).map_err(|e| e.to_string())?;
    ensure(unit.nodes() == tent().nodes(), "f²|[0,1] differs from tent")?;
    let w = find_turbulence(&g).ok_or("f² not found turbulent")?;
    let q = canonical_quadruple(&g, &w.j0, &w.j1).map_err(|e| e.to_string())?;
    ensure(q.z == int(0), format!("z = {}", q.z))?;
    ensure(
        f.eval(&q.z).map_err(|e| e.to_string())? == q.z,
        "z not fixed by f",
    )?;
    Ok("f not turbulent; f² turbulent with z = 0 = f(0); f²|[0,1] = tent".into())
}

fn stefan_family() -> Outcome {
    for i in 1..=5i64 {
        let f = stefan(i).map_err(|e| e.to_string())?;
        let m = (2 * i + 1) as usize;
        // Oracle: direct iteration, first return of 1.
        let mut x = int(1);
        let mut first_return = None;
        for n in 1..=m {
            x = f.eval(&x).map_err(|e| e.to_string())?;
            if x == int(1) {
                first_return = Some(n);
                break;
            }
        }
        ensure(
            first_return == Some(m),
            format!("i={i}: first return {first_return:?}"),
        )?;
        let orbit = PeriodicOrbit::from_point(&f, &int(1), m).map_err(|e| e.to_string())?;
        let a = stefan_analyze(&f, &orbit).map_err(|e| e.to_string())?;
        ensure(a.is_stefan, format!("i={i}: not Štefan"))?;
        let c = stefan_family_check(i, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(
            c.square_is_identity_on_middle,
            format!("i={i}: f² not identity"),
        )?;
        ensure(
            c.min_displacement_outside >= rat(1, 3),
            format!("i={i}: min |f(x)-x| = {}", c.min_displacement_outside),
        )?;
    }
    Ok("i = 1..5: period 2i+1, Štefan, f² = id on middle, |f(x)-x| >= 1/3 outside".into())
}

fn stefan_period_five() -> Outcome {
    let f = stefan(2).map_err(|e| e.to_string())?;
    let orbit = PeriodicOrbit::from_point(&f, &int(1), 5).map_err(|e| e.to_string())?;
    let a = stefan_analyze(&f, &orbit).map_err(|e| e.to_string())?;
    let t = stefan_turbulence(&f, &a, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let g = f.power(2, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let w = check_witness(&g, &t.square_witness.j0, &t.square_witness.j1)
        .map_err(|e| e.to_string())?
        .witness()
        .ok_or("witness rejected on f²")?;
    ensure(w.strict, "witness not strict")?;
    ensure(w.j0.intersect(&w.j1).is_none(), "intervals meet")?;
    // Covering recomputed here from the orbit itself.
    let it = f.iterate(&a.xs, 5).map_err(|e| e.to_string())?;
    let left = f
        .image_iter(&iv(a.xs.clone(), it[1].clone()), 3)
        .map_err(|e| e.to_string())?;
    let right = f
        .image_iter(&iv(it[4].clone(), it[2].clone()), 4)
        .map_err(|e| e.to_string())?;
    let common = left.intersect(&right).ok_or("images disjoint")?;
    ensure(
        common.contains_interval(&iv(int(1), int(5))),
        format!("covering {common}"),
    )?;
    ensure(t.covering_holds, "library covering flag false")?;
    Ok(format!(
        "strict f² witness {}, {}; covering {common}",
        w.j0, w.j1
    ))
}

fn block_offsets() -> Outcome {
    for m in 1..=100u64 {
        let oracle: u64 = (0..m).map(|k| (k + 1) * (k + 3)).sum();
        ensure(block_offset(m) == oracle, format!("m={m}"))?;
    }
    Ok("s(m) = block sums for m <= 100".into())
}

/// ω built from its verbal description.
fn omega_oracle(alpha: &str, beta: &BinaryStream, blocks: u64) -> String {
    let mut out = String::new();
    for k in 0..blocks {
        out.push_str(&alpha[..=k as usize]);
        for j in 0..=k {
            out.push_str(&beta.symbol(j).to_string());
            out.push_str(&"0".repeat(k as usize));
        }
        out.push('1');
        out.push_str(&"0".repeat(k as usize));
    }
    out
}

fn length_lex_seed(len: usize) -> String {
    let mut out = String::new();
    let mut l = 1;
    while out.len() < len {
        for v in 0..1u32 << l {
            out.push_str(&format!("{v:0l$b}"));
        }
        l += 1;
    }
    out
}

fn omega_positions() -> Outcome {
    let alpha = length_lex_seed(64);
    for beta in [
        stream("const:1"),
        stream("const:0"),
        stream("periodic:01"),
        stream("periodic:110"),
    ] {
        let oracle = omega_oracle(&alpha, &beta, 9);
        let built = omega_prefix(&OmegaSpec::new(beta.clone()), 9)
            .map_err(|e| e.to_string())?
            .to_string();
        ensure(built == oracle, format!("omega prefix differs for {beta}"))?;
        for m in 1..=6u64 {
            for k in 0..=m {
                let at = (block_offset(m) + (k + 1) * (m + 1)) as usize;
                let want = format!("{}{}", beta.symbol(k), "0".repeat(m as usize));
                let found = oracle.get(at..at + want.len()).unwrap_or("");
                ensure(
                    found == want,
                    format!("{beta} m={m} k={k}: {found} != {want}"),
                )?;
            }
        }
    }
    Ok("β_k 0^m at s(m)+(k+1)(m+1) for m <= 6, k <= m".into())
}

fn tent_certificates() -> Outcome {
    let t = tent();
    let w = find_turbulence(&t).ok_or("tent not turbulent")?;
    let q = canonical_quadruple(&t, &w.j0, &w.j1).map_err(|e| e.to_string())?;
    let coding = SymbolicCoding::new(t, q);
    let betas = [stream("const:0"), stream("const:1"), stream("periodic:01")];
    let threshold = pow2_neg(8);
    let opts = SampleOptions {
        horizon: 5000,
        delta: Some(int(1)),
        tol: Some(threshold.clone()),
    };
    let s = build_invariant_sample(&coding, &betas, 40, 4, &opts).map_err(|e| e.to_string())?;
    ensure(s.members.len() == 12, "expected 12 sample points")?;
    ensure(s.certificates.len() == 66, "expected 66 pairs")?;
    let floor = int(1) - &threshold;
    for p in &s.certificates {
        let c = &p.certificate;
        let sep = c
            .best_separation()
            .ok_or(format!("pair {}-{}: no separation", p.a, p.b))?;
        let prox = c
            .best_proximity()
            .ok_or(format!("pair {}-{}: no proximity", p.a, p.b))?;
        ensure(
            sep >= &floor,
            format!("pair {}-{}: separation {sep}", p.a, p.b),
        )?;
        ensure(
            prox <= &threshold,
            format!("pair {}-{}: proximity {prox}", p.a, p.b),
        )?;
    }
    ensure(
        s.invariance.iter().all(|c| c.holds),
        "invariance inclusion failed",
    )?;
    ensure(
        s.members.iter().all(|m| m.consistent),
        "image and coded enclosures disjoint",
    )?;
    Ok("66 pairs (3 betas x shifts 0..3): separation >= 1-2^-8, proximity <= 2^-8; invariance holds".into())
}

fn square_root_obstruction() -> Outcome {
    let big = square_root(&tent()).map_err(|e| e.to_string())?;
    let xs = [int(0), rat(1, 3), rat(1, 2), rat(5, 7), int(1)];
    let ys = [int(2), rat(7, 3), rat(5, 2), rat(20, 7), int(3)];
    for x in &xs {
        for y in &ys {
            // Exact orbits, compared step by step.
            let (mut u, mut v) = (x.clone(), y.clone());
            for n in 0..=1000 {
                ensure(
                    abs_diff(&u, &v) >= int(1),
                    format!("{x},{y}: gap < 1 at n={n}"),
                )?;
                u = big.eval(&u).map_err(|e| e.to_string())?;
                v = big.eval(&v).map_err(|e| e.to_string())?;
            }
            let cert = certify_pair(
                &big,
                None,
                &CertPoint::Exact { x: x.clone() },
                &CertPoint::Exact { x: y.clone() },
                1000,
                &int(1),
                &pow2_neg(20),
            )
            .map_err(|e| e.to_string())?;
            ensure(
                cert.proximities.is_empty(),
                format!("{x},{y}: proximity found"),
            )?;
        }
    }
    let halves = certify_pair(
        &big,
        None,
        &CertPoint::Interval {
            interval: iv(int(0), int(1)),
        },
        &CertPoint::Interval {
            interval: iv(int(2), int(3)),
        },
        1000,
        &int(1),
        &pow2_neg(20),
    )
    .map_err(|e| e.to_string())?;
    ensure(
        halves.proximities.is_empty() && halves.min_gap >= int(1),
        "interval pair",
    )?;
    Ok("25 exact pairs and [0,1] vs [2,3]: gap >= 1 for n <= 1000, no proximities".into())
}

/// Sharkovsky positions from an explicitly listed order.
fn sharkovsky_table(limit: u64) -> Vec<usize> {
    let mut order = Vec::new();
    let mut two = 1;
    while two * 3 <= limit {
        order.extend((3..=limit / two).step_by(2).map(|odd| odd * two));
        two *= 2;
    }
    let mut powers: Vec<u64> = std::iter::successors(Some(1u64), |p| Some(p * 2))
        .take_while(|p| *p <= limit)
        .collect();
    powers.reverse();
    order.extend(powers);
    let mut rank = vec![usize::MAX; limit as usize + 1];
    for (r, p) in order.into_iter().enumerate() {
        rank[p as usize] = r;
    }
    rank
}

fn periodic_structure() -> Outcome {
    let t = tent();
    for n in 1..=12usize {
        let p = periodic_points(&t, n, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(
            p.points.len() == 1 << n,
            format!("n={n}: {} points", p.points.len()),
        )?;
    }
    let rank = sharkovsky_table(256);
    ensure(
        rank[1..].iter().all(|&r| r != usize::MAX),
        "table incomplete",
    )?;
    for p in 1..=64u64 {
        for q in 1..=64u64 {
            let want = rank[p as usize] < rank[q as usize];
            ensure(sharkovsky_precedes(p, q) == want, format!("({p},{q})"))?;
        }
    }
    for p in 1..=256u64 {
        ensure(!sharkovsky_precedes(p, p), format!("reflexive at {p}"))?;
        for q in 1..=256u64 {
            if p != q {
                ensure(
                    sharkovsky_precedes(p, q) != sharkovsky_precedes(q, p),
                    format!("not total/antisymmetric at ({p},{q})"),
                )?;
            }
        }
    }
    for p in 1..=64u64 {
        for q in 1..=64u64 {
            if !sharkovsky_precedes(p, q) {
                continue;
            }
            for r in 1..=64u64 {
                if sharkovsky_precedes(q, r) {
                    ensure(sharkovsky_precedes(p, r), format!("({p},{q},{r})"))?;
                }
            }
        }
    }
    Ok("2^n solutions for n <= 12; order matches table and is a strict total order".into())
}

/// τ_β symbol from the verbal block description, with block lengths counted
/// part by part.
fn tau_symbol_oracle(seed: &str, beta: &BinaryStream, mut n: u64) -> u8 {
    let mut k = 1u64;
    loop {
        let tail: u64 = (1..=k).map(|j| k * 2 * j).sum();
        let len = k + k * k + tail;
        if n < len {
            break;
        }
        n -= len;
        k += 1;
    }
    if n < k {
        return seed.as_bytes()[n as usize] - b'0';
    }
    n -= k;
    if n < k * k {
        return beta.symbol(n / k);
    }
    n -= k * k;
    let mut j = 1;
    while n >= 2 * j * k {
        n -= 2 * j * k;
        j += 1;
    }
    u8::from(n % (2 * j) >= j)
}

fn sigma2_checks() -> Outcome {
    let (a, b) = (stream("const:0"), stream("const:1"));
    for m in 1..=8u32 {
        let r = sigma_scrambled_check(&a, &b, (0, 0), m, 10_000_000).map_err(|e| e.to_string())?;
        ensure(
            r.separation.bound >= int(1) - pow2_neg(m),
            format!("m={m}: separation"),
        )?;
        ensure(
            r.proximity.bound <= pow2_neg(m),
            format!("m={m}: proximity"),
        )?;
    }
    let seed = length_lex_seed(5000);
    let beta = stream("const:1");
    let mut checked = 0;
    for len in 1..=8u32 {
        for v in 0..1u32 << len {
            let word = format!("{v:0w$b}", w = len as usize);
            let w = SymbolWord::parse(&word).map_err(|e| e.to_string())?;
            let offset = tau_density_offset(&w).map_err(|e| e.to_string())?;
            let seen: String = (0..len as u64)
                .map(|i| char::from(b'0' + tau_symbol_oracle(&seed, &beta, offset + i)))
                .collect();
            ensure(seen == word, format!("{word} not at {offset}"))?;
            checked += 1;
        }
    }
    Ok(format!(
        "m <= 8 bounds met; {checked} words of length <= 8 begin shifts of τ"
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("tent quadruple", tent_quadruple, Duration::from_secs(1)),
        (
            "non-turbulent map, turbulent square",
            remark1_lift_hypothesis,
            Duration::from_secs(1),
        ),
        (
            "Štefan family properties",
            stefan_family,
            Duration::from_secs(5),
        ),
        (
            "period-5 strict turbulence of f²",
            stefan_period_five,
            Duration::from_secs(5),
        ),
        (
            "block offset formula",
            block_offsets,
            Duration::from_secs(1),
        ),
        ("ω positional law", omega_positions, Duration::from_secs(1)),
        (
            "Li-Yorke certificates, tent",
            tent_certificates,
            Duration::from_secs(60),
        ),
        (
            "square-root obstruction",
            square_root_obstruction,
            Duration::from_secs(10),
        ),
        (
            "periodic structure",
            periodic_structure,
            Duration::from_secs(30),
        ),
        (
            "full shift scrambling and density",
            sigma2_checks,
            Duration::from_secs(30),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; too slow ({took:.2?} > {budget:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("acceptance {:>2} PASS  {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
