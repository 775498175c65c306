//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one `PASS`/`FAIL` line, even on success.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use loopkex::core::attack::{break_key, recover_exponent};
use loopkex::core::c_groupoid::{AxiomStatus, Witness};
use loopkex::core::general_extension::{
    beta_by_recursion, beta_closed_form, beta_gyro_closed_form, beta_twisted_closed_form, ext_pow,
    power_sequence,
};
use loopkex::core::protocol::run_exchange;
use loopkex::core::{
    AxiomConfig, CGroupoid, ClassifyConfig, ExtElement, GroupPresentation, LoopKind, Perm, PublicParams,
    RightLoop, RoundTripConfig,
};
use loopkex::transcript::TranscriptFile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LOOPS: u64 = 60;
const PAIRS: usize = 5;
const MAX_POWER: usize = 30;

/// A seeded loop with its c-groupoid and a handful of public pairs.
struct Instance {
    name: String,
    lp: RightLoop,
    c: Arc<CGroupoid>,
    pairs: Vec<(usize, Perm)>,
}

fn instance(name: String, lp: RightLoop, seed: u64) -> Instance {
    let c = Arc::new(CGroupoid::from_right_loop(&lp));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let torsion = lp.torsion();
    let pairs = (0..PAIRS)
        .map(|_| {
            let x = rng.random_range(1..lp.size());
            // prefer a non-trivial a; trivial torsion leaves only the identity
            let mut a = torsion.random_element(&mut rng);
            for _ in 0..20 {
                if !a.is_identity() {
                    break;
                }
                a = torsion.random_element(&mut rng);
            }
            (x, a)
        })
        .collect();
    Instance { name, lp, c, pairs }
}

fn corpus() -> Vec<Instance> {
    (0..LOOPS)
        .map(|seed| {
            let n = 3 + (seed % 6) as usize;
            let lp = RightLoop::random(n, seed).unwrap();
            instance(format!("random({n}, {seed})"), lp, 1000 + seed)
        })
        .collect()
}

/// Right loops of known shape: example loops and cyclic groups are right
/// gyrogroups; the tables below are twisted.
fn fixtures() -> Vec<Instance> {
    let twisted: [&[&[usize]]; 4] = [
        &[&[0, 1, 2, 3], &[1, 0, 1, 1], &[2, 3, 3, 0], &[3, 2, 0, 2]],
        &[&[0, 1, 2, 3, 4], &[1, 0, 1, 1, 1], &[2, 2, 0, 2, 2], &[3, 4, 4, 4, 0], &[4, 3, 3, 0, 3]],
        &[&[0, 1, 2, 3, 4], &[1, 2, 0, 2, 2], &[2, 0, 1, 1, 1], &[3, 4, 4, 4, 0], &[4, 3, 3, 0, 3]],
        &[&[0, 1, 2, 3, 4], &[1, 2, 1, 0, 1], &[2, 3, 3, 1, 0], &[3, 0, 4, 2, 2], &[4, 4, 0, 4, 3]],
    ];
    let mut out = Vec::new();
    for (k, rows) in twisted.iter().enumerate() {
        let n = rows.len();
        let labels: Vec<String> = (0..n).map(|i| if i == 0 { "e".into() } else { format!("x{i}") }).collect();
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(|&v| labels[v].as_str()).collect()).collect();
        let lp = RightLoop::validate(&labels, &rows).unwrap();
        out.push(instance(format!("twisted#{k}"), lp, 2000 + k as u64));
    }
    for n in [4, 5, 6, 8] {
        out.push(instance(format!("example({n})"), RightLoop::example(n).unwrap(), 3000 + n as u64));
        out.push(instance(format!("cyclic({n})"), RightLoop::cyclic(n).unwrap(), 4000 + n as u64));
    }
    out
}

fn example16() -> (RightLoop, PublicParams) {
    let lp = RightLoop::example(16).unwrap();
    let c = Arc::new(CGroupoid::from_right_loop(&lp));
    let a = Perm::parse_cycles("(x3 x4 x1 x9 x8 x7)", c.domain()).unwrap();
    let x = lp.domain().lookup("x3").unwrap();
    let params = PublicParams::new(c, x, a).unwrap();
    (lp, params)
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn criterion1() -> Result<String, String> {
    let start = Instant::now();
    let (lp, params) = example16();
    let c = params.cgroupoid();
    let perm = |s: &str| Perm::parse_cycles(s, c.domain()).unwrap();
    let label = |l: &str| lp.domain().lookup(l).unwrap();

    let seq = power_sequence(c, params.x(), params.a(), 3).map_err(|e| e.to_string())?;
    ensure(seq.beta(2) == label("x4"), || format!("beta^2 = {}", lp.label(seq.beta(2))))?;
    ensure(*seq.g(2) == perm("(x3 x1 x8 x4 x9 x7)"), || format!("g^2 = {}", seq.g(2)))?;
    ensure(*seq.g(3) == perm("(x1 x7 x4 x8 x3 x9)"), || format!("g^3 = {}", seq.g(3)))?;
    let t = run_exchange(&params, 2, 3).map_err(|e| e.to_string())?;
    ensure(t.message_a_to_b == label("x4") && t.message_b_to_a == label("x1"), || {
        format!("messages {} / {}", lp.label(t.message_a_to_b), lp.label(t.message_b_to_a))
    })?;
    ensure(t.agreed && t.key_a == label("x8"), || format!("key {}", lp.label(t.key_a)))?;
    within(start, Duration::from_secs(1))?;
    Ok("messages x4/x1, shared key x8".into())
}

fn criterion2() -> Result<String, String> {
    let start = Instant::now();
    let (lp, _) = example16();
    let generators = lp.torsion_generators();
    let order = lp.torsion().order();
    ensure(order.to_string() == "1307674368000", || format!("order {order}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} generators, order {order}", generators.len()))
}

fn criterion3(corpus: &[Instance]) -> Result<String, String> {
    let start = Instant::now();
    let mut checked = 0;
    for inst in corpus {
        for (x, a) in &inst.pairs {
            let seq = power_sequence(&inst.c, *x, a, MAX_POWER).unwrap();
            let base = ExtElement::new(a.clone(), *x);
            for n in 1..=MAX_POWER {
                let fast = ext_pow(&inst.c, &base, n as u64).unwrap();
                ensure(fast.h == *seq.g(n) && fast.x == seq.beta(n), || {
                    format!("{} x={x} a={a} n={n}", inst.name)
                })?;
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} loops, {checked} powers", corpus.len()))
}

fn criterion4(corpus: &[Instance]) -> Result<String, String> {
    let mut checked = 0;
    for inst in corpus {
        let c = &inst.c;
        for (x, a) in &inst.pairs {
            let seq = power_sequence(c, *x, a, MAX_POWER).unwrap();
            for m in 1..MAX_POWER {
                for n in 1..=MAX_POWER - m {
                    let (bm, bn, gm, gn) = (seq.beta(m), seq.beta(n), seq.g(m), seq.g(n));
                    let lhs = c.op(c.theta(bm, gn), bn);
                    let rhs = c.op(c.theta(bn, gm), bm);
                    ensure(lhs == seq.beta(m + n) && rhs == seq.beta(m + n), || {
                        format!("beta law {} x={x} a={a} m={m} n={n}", inst.name)
                    })?;
                    let first = gn.then(&c.sigma(bn, gm).unwrap()).then(c.f(c.theta(bn, gm), bm));
                    let second = gm.then(&c.sigma(bm, gn).unwrap()).then(c.f(c.theta(bm, gn), bn));
                    ensure(first == *seq.g(m + n) && second == *seq.g(m + n), || {
                        format!("g law {} x={x} a={a} m={m} n={n}", inst.name)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (m, n) pairs"))
}

fn criterion5(corpus: &[Instance], fixtures: &[Instance]) -> Result<String, String> {
    let (mut gyro, mut twisted) = (0, 0);
    for inst in corpus.iter().chain(fixtures) {
        let class = inst.lp.classify(&ClassifyConfig::default());
        for (x, a) in &inst.pairs {
            for m in 2..=MAX_POWER as u64 {
                let expected = beta_by_recursion(&inst.c, *x, a, m);
                let closed = beta_closed_form(&inst.c, *x, a, m).unwrap();
                ensure(closed == expected, || format!("closed form {} x={x} a={a} m={m}", inst.name))?;
                match class.kind {
                    LoopKind::RightGyrogroup => {
                        let v = beta_gyro_closed_form(&inst.c, *x, a, m).unwrap();
                        ensure(v == expected, || format!("gyro form {} x={x} a={a} m={m}", inst.name))?;
                    }
                    LoopKind::TwistedRightGyrogroup { .. } => {
                        let eta_a = class.eta(&inst.lp, a).unwrap();
                        let v = beta_twisted_closed_form(&inst.c, *x, a, &eta_a, m).unwrap();
                        ensure(v == expected, || format!("twisted form {} x={x} a={a} m={m}", inst.name))?;
                    }
                    LoopKind::Generic => {}
                }
            }
            match class.kind {
                LoopKind::RightGyrogroup => gyro += 1,
                LoopKind::TwistedRightGyrogroup { .. } => twisted += 1,
                LoopKind::Generic => {}
            }
        }
    }
    ensure(gyro > 0 && twisted > 0, || format!("gyro pairs {gyro}, twisted pairs {twisted}"))?;
    Ok(format!("gyro pairs {gyro}, twisted pairs {twisted}"))
}

fn criterion6(corpus: &[Instance], fixtures: &[Instance]) -> Result<String, String> {
    let mut exhaustive = 0;
    for inst in corpus.iter().chain(fixtures) {
        let report = inst.c.check_axioms(&AxiomConfig::default());
        ensure(report.all_hold(), || format!("{}: {report}", inst.name))?;
        ensure(report.exhaustive(), || format!("{} was only sampled", inst.name))?;
        exhaustive += 1;
    }
    let (_, params) = example16();
    let report = params.cgroupoid().check_axioms(&AxiomConfig {
        samples: 200,
        ..AxiomConfig::default()
    });
    ensure(report.all_hold(), || format!("example(16): {report}"))?;
    Ok(format!("{exhaustive} loops exhaustive, example(16) sampled"))
}

fn s3() -> GroupPresentation {
    // permutations of {1,2,3}, composed left to right
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0]];
    let labels = ["id", "(12)", "(123)", "(132)", "(23)", "(13)"];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let rows: Vec<Vec<&str>> = perms
        .iter()
        .map(|p| perms.iter().map(|q| labels[index([q[p[0]], q[p[1]], q[p[2]]])]).collect())
        .collect();
    GroupPresentation::new(&labels, &rows, &["id", "(12)"], &["id", "(123)", "(132)"]).unwrap()
}

fn criterion7(corpus: &[Instance], fixtures: &[Instance]) -> Result<String, String> {
    let config = RoundTripConfig::default();
    let mut done = 0;
    for inst in corpus.iter().chain(fixtures) {
        let fits = inst
            .lp
            .torsion()
            .order_u64()
            .is_some_and(|o| o * inst.lp.size() as u64 <= config.max_elements);
        if fits {
            let ok = inst.c.extension_round_trip(&config).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{} did not round trip", inst.name))?;
            done += 1;
        }
    }
    let c = CGroupoid::from_group_transversal(&s3()).map_err(|e| e.to_string())?;
    ensure(c.check_axioms(&AxiomConfig::default()).all_hold(), || "S3 axioms".into())?;
    ensure(c.extension_round_trip(&config).map_err(|e| e.to_string())?, || "S3 round trip".into())?;
    ensure(done >= 10, || format!("only {done} materializable loops"))?;
    Ok(format!("{done} loops plus S3"))
}

/// Seeded runs over corpus loops with non-trivial torsion.
fn seeded_runs(corpus: &[Instance], runs: usize, max_exponent: u64, seed: u64) -> Vec<(usize, PublicParams, u64, u64)> {
    let usable: Vec<(usize, usize)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(i, inst)| (0..inst.pairs.len()).filter(move |&k| !inst.pairs[k].1.is_identity()).map(move |k| (i, k)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..runs)
        .map(|_| {
            let (i, k) = usable[rng.random_range(0..usable.len())];
            let (x, a) = corpus[i].pairs[k].clone();
            let params = PublicParams::new(Arc::clone(&corpus[i].c), x, a).unwrap();
            (i, params, rng.random_range(1..=max_exponent), rng.random_range(1..=max_exponent))
        })
        .collect()
}

fn transcripts(corpus: &[Instance]) -> Result<Vec<String>, String> {
    seeded_runs(corpus, 1000, 1 << 20, 8)
        .into_iter()
        .map(|(i, params, m, n)| {
            let t = run_exchange(&params, m, n).map_err(|e| format!("{}: {e}", corpus[i].name))?;
            ensure(t.agreed, || format!("{} m={m} n={n} disagree", corpus[i].name))?;
            Ok(TranscriptFile::new(&corpus[i].lp, &t, false).to_text())
        })
        .collect()
}

fn criterion8(corpus: &[Instance]) -> Result<String, String> {
    let first = transcripts(corpus)?;
    let second = transcripts(corpus)?;
    ensure(first == second, || "transcripts differ between executions".into())?;
    Ok(format!("{} runs agree, transcripts byte-identical", first.len()))
}

fn criterion9(corpus: &[Instance]) -> Result<String, String> {
    let runs = seeded_runs(corpus, 200, 10_000, 9);
    for (i, params, m, n) in &runs {
        let t = run_exchange(params, *m, *n).map_err(|e| e.to_string())?;
        let hit = recover_exponent(params, t.message_a_to_b, *m);
        let r = hit.exponent.ok_or_else(|| format!("{}: no exponent up to m={m}", corpus[*i].name))?;
        let key = break_key(params, r, t.message_b_to_a).map_err(|e| e.to_string())?;
        ensure(key == t.key_a, || format!("{}: broken key differs (r={r}, m={m})", corpus[*i].name))?;
        let earlier = (1..r).any(|s| params.power(s).unwrap().x == t.message_a_to_b);
        ensure(!earlier, || format!("{}: r={r} is not minimal", corpus[*i].name))?;
    }
    Ok(format!("{} transcripts broken, exponents minimal", runs.len()))
}

fn criterion10() -> Result<String, String> {
    let (lp, params) = example16();
    let c = params.cgroupoid();
    let n = c.size();
    let config = AxiomConfig {
        samples: 4,
        ..AxiomConfig::default()
    };
    let swap = Perm::transposition(c.domain(), 1, 2);
    for y in 0..n {
        for z in 0..n {
            let bad = c.clone().with_f(y, z, c.f(y, z).then(&swap));
            let report = bad.check_axioms(&config);
            let refuted = if y == 0 || z == 0 {
                let w = report.axioms[3].counterexample.as_deref();
                matches!(w, Some([Witness::Element(x)]) if !bad.f(*x, 0).is_identity() || !bad.f(0, *x).is_identity())
            } else {
                match report.axioms[5].counterexample.as_deref() {
                    Some([Witness::Element(x), Witness::Element(p), Witness::Element(q)]) => {
                        bad.op(bad.op(*x, *p), *q) != bad.op(bad.theta(*x, bad.f(*p, *q)), bad.op(*p, *q))
                    }
                    _ => false,
                }
            };
            let status = if y == 0 || z == 0 { &report.axioms[3] } else { &report.axioms[5] };
            ensure(refuted && status.status == AxiomStatus::Fail, || format!("f({y}, {z}) mutation: {report}"))?;
        }
    }

    let mut cells = 0;
    for i in 0..n {
        for j in 0..n {
            for v in (0..n).filter(|&v| v != lp.mul(i, j)) {
                let rows: Vec<Vec<&str>> = (0..n)
                    .map(|r| (0..n).map(|s| lp.label(if (r, s) == (i, j) { v } else { lp.mul(r, s) })).collect())
                    .collect();
                ensure(RightLoop::validate(lp.domain().labels(), &rows).is_err(), || {
                    format!("cell ({i}, {j}) := {v} accepted")
                })?;
                cells += 1;
            }
        }
    }
    Ok(format!("{} f entries, {cells} cell mutations rejected", n * n))
}

fn main() -> ExitCode {
    // keep failures to the one-line report
    panic::set_hook(Box::new(|_| {}));
    let corpus = corpus();
    let fixtures = fixtures();
    type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("example regression", Box::new(criterion1)),
        ("torsion order", Box::new(criterion2)),
        ("power law", Box::new(|| criterion3(&corpus))),
        ("addition laws", Box::new(|| criterion4(&corpus))),
        ("closed forms", Box::new(|| criterion5(&corpus, &fixtures))),
        ("c-groupoid axioms", Box::new(|| criterion6(&corpus, &fixtures))),
        ("extension round trip", Box::new(|| criterion7(&corpus, &fixtures))),
        ("protocol agreement", Box::new(|| criterion8(&corpus))),
        ("attack soundness", Box::new(|| criterion9(&corpus))),
        ("mutation detection", Box::new(criterion10)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({ms} ms)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
