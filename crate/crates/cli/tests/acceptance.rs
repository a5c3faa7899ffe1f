//! Acceptance suite: one PASS/FAIL line per property, non-zero exit on any
//! failure. Runs under `cargo test` (custom harness).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use whitney_core::actions::{
    average_poly, average_poly_circle, check_inv1, check_inv2, extend_invariant, group_closure, groupoid_arrows,
    orbit_cloud, required_nodes, standard, CircleAction, FiniteGroup,
};
use whitney_core::combinatorics::{lambda_solutions, set_partitions};
use whitney_core::invariants::{catalog, hilbert_pullback, sample_orbit_cloud, HilbertEntry};
use whitney_core::jetcalc::{
    jet_mul, jet_of_poly, remainder, restrict, vf_apply, whitney_seminorm, JetField, PointCloud,
};
use whitney_core::pullback::{chain_rule_terms, image_cloud, plan, pullback_comb, pullback_multi};
use whitney_core::random;
use whitney_core::scalar::rational;
use whitney_core::symbolic::{generic_rank, PolyMap, Polynomial};
use whitney_core::{Error, MultiIndex, Rational};

type Q = Rational;
type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: whitney_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{} ({})", e, e.kind()))
}

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_whitney"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(bin()).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "whitney {:?} exited with {}: {}",
            args,
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    serde_json::from_slice(&cli(args)?).map_err(|e| e.to_string())
}

/// Chain rule by multi-indices and by set partitions agree with each other
/// and with the jet of the composite.
fn faa_di_bruno_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut components = 0usize;
    for case in 0..100 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let deg_phi = rng.gen_range(1..=3);
        let order = rng.gen_range(0..=4);
        let phi = random::poly_map::<Q>(&mut rng, n, m, deg_phi, 3);
        let f = random::polynomial::<Q>(&mut rng, m, 3, 3);
        let source = random::cloud::<Q>(&mut rng, n, 2);
        let target = ok(image_cloud(&phi, &source))?;
        let p = ok(plan(phi.clone(), &source, &target, 0.0))?;
        let jf = ok(jet_of_poly(&f, &target, order))?;
        let multi = ok(pullback_multi(&p, &jf, order))?;
        let comb = ok(pullback_comb(&p, &jf, order))?;
        let direct = ok(jet_of_poly(&ok(f.compose(&phi))?, &source, order))?;
        ensure!(multi == comb, "case {case}: multi-index and partition sums differ");
        ensure!(multi == direct, "case {case}: pullback differs from the jet of f o phi");
        components += multi.len() * multi.indices().len();
    }
    Ok(format!("100 instances, {components} components equal exactly"))
}

fn hand_anchored_composite() -> Outcome {
    let x = Polynomial::<Q>::var(1, 0);
    let one = ok(PointCloud::new(1, vec![vec![rational(1, 1)]]))?;
    let f = ok(jet_of_poly(&x.pow(3), &one, 2))?;
    let p = ok(plan(ok(PolyMap::new(1, vec![x.pow(2)]))?, &one, &one, 0.0))?;
    let beta = MultiIndex::from([2]);
    let value = ok(pullback_multi(&p, &f, 2))?.get(0, &beta);
    let terms: Vec<Q> = ok(chain_rule_terms(&p, &f, 0, &beta))?.into_iter().map(|t| t.value).collect();
    ensure!(value == rational(30, 1), "got {value}");
    ensure!(terms == vec![rational(24, 1), rational(6, 1)], "term split {terms:?}");
    Ok("d^2 (x^2)^3 at 1 = 30 = 24 + 6".into())
}

/// Partition numbers by the standard recurrence over largest parts.
fn partition_numbers(max: usize) -> Vec<u64> {
    let mut p = vec![0u64; max + 1];
    p[0] = 1;
    for part in 1..=max {
        for total in part..=max {
            p[total] += p[total - part];
        }
    }
    p
}

fn combinatorics_counts() -> Outcome {
    let bell: Vec<usize> = (1..=6).map(|l| set_partitions(l).map(|v| v.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(bell == [1, 2, 5, 15, 52, 203], "partition counts {bell:?}");
    let expected = partition_numbers(8);
    for b in 0..=8u32 {
        let count = ok(lambda_solutions(1, 1, &MultiIndex::from([b])))?.len();
        ensure!(count as u64 == expected[b as usize], "Lambda count for beta={b}: {count}");
    }
    Ok(format!("Bell 1..6 = {bell:?}; Lambda counts = p(0..8) = {expected:?}"))
}

fn jet_algebra_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for case in 0..100 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=4);
        let c = random::cloud::<Q>(&mut rng, n, 2);
        let f = random::polynomial::<Q>(&mut rng, n, 3, 4);
        let g = random::polynomial::<Q>(&mut rng, n, 3, 4);
        let lhs = ok(jet_of_poly(&ok(f.mul(&g))?, &c, m))?;
        let rhs = ok(jet_mul(&ok(jet_of_poly(&f, &c, m))?, &ok(jet_of_poly(&g, &c, m))?))?;
        ensure!(lhs == rhs, "case {case}: J(fg) != J(f) J(g)");

        let (a, b, d) = (
            random::jet_field(&mut rng, &c, m),
            random::jet_field(&mut rng, &c, m),
            random::jet_field(&mut rng, &c, m),
        );
        let left = ok(jet_mul(&ok(jet_mul(&a, &b))?, &d))?;
        let right = ok(jet_mul(&a, &ok(jet_mul(&b, &d))?))?;
        ensure!(left == right, "case {case}: product not associative");

        let xi = random::poly_map::<Q>(&mut rng, n, n, 2, 3);
        let lhs = ok(vf_apply(&xi, &ok(jet_mul(&a, &b))?))?;
        let rhs = ok(ok(jet_mul(&ok(vf_apply(&xi, &a))?, &ok(b.truncate(m - 1))?))?
            .add(&ok(jet_mul(&ok(a.truncate(m - 1))?, &ok(vf_apply(&xi, &b))?))?))?;
        ensure!(lhs == rhs, "case {case}: vector field is not a derivation");
    }
    Ok("homomorphism, associativity, derivation: 100 instances each, exact".into())
}

fn whitney_seminorm_fixture() -> Outcome {
    let doc: whitney_cli::formats::JetDoc =
        serde_json::from_str(&std::fs::read_to_string(fixture("jet1_x2.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let f: JetField<Q> = ok(doc.to_field(0.0))?;
    let w = ok(whitney_seminorm(&f, &[0, 1], 1))?;
    ensure!(w.sup == 2.0 && w.quotient_sup == 2.0 && w.total == 4.0, "got {w:?}");
    let out = cli_json(&["--in", fixture("jet1_x2.json").to_str().unwrap(), "seminorm", "--k", "1"])?;
    ensure!(out["total"] == "4.0000000000000000e0", "cli total {}", out["total"]);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for case in 0..50 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=3);
        let m = k + rng.gen_range(0..=2);
        let c = random::cloud::<Q>(&mut rng, n, 3);
        let f = random::polynomial::<Q>(&mut rng, n, k, 5);
        let jet = ok(jet_of_poly(&f, &c, m))?;
        for a in c.points() {
            ensure!(ok(remainder(&jet, a, k))?.is_zero(), "case {case}: nonzero remainder");
        }
    }
    Ok("||J1(x^2)||_{0,1},1 = 2 + 2 = 4 (library and CLI); 50 polynomial remainders vanish".into())
}

fn check_entry_field(e: &HilbertEntry<Q>, f: &JetField<Q>) -> Result<(), String> {
    let acting = e.acting_finite();
    let arrows = ok(groupoid_arrows(&acting, f.cloud(), 0.0))?;
    ensure!(ok(check_inv1(&acting, &arrows, f, 0.0))?.holds, "{}: groupoid invariance fails", e.name);
    if f.order() >= 1 {
        ensure!(ok(check_inv2(&e.lie_generators, f, 0.0))?.holds, "{}: infinitesimal invariance fails", e.name);
    }
    Ok(())
}

fn equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut pulled = 0;
    for e in catalog::<Q>() {
        for k in 0..50 {
            let z = ok(sample_orbit_cloud(&mut rng, &e.finite, 1, 2, 0.0))?;
            let target = ok(image_cloud(&e.invariants, &z))?;
            let m = if e.dim() > 4 { 1 + k % 2 } else { 1 + k % 3 };
            let h = random::jet_field(&mut rng, &target, m);
            let out = ok(hilbert_pullback(&e, &h, &z, m, 0.0))?;
            check_entry_field(&e, &out)?;
            pulled += 1;
        }
        // averaging: idempotent, and the result is invariant
        let f = random::polynomial::<Q>(&mut rng, e.dim(), 3, 4);
        let z = ok(sample_orbit_cloud(&mut rng, &e.finite, 2, 2, 0.0))?;
        match &e.group {
            whitney_core::invariants::GroupSpec::Circle(c) => {
                let avg = ok(average_poly_circle(c, &f, required_nodes(c, &f)))?;
                let again = ok(average_poly_circle(c, &avg, required_nodes(c, &avg)))?;
                ensure!(again.near(&avg, 1e-9), "circle average not idempotent");
                for m in 1..=4 {
                    let jet = ok(jet_of_poly(&avg, &z.to_f64(), m))?;
                    ensure!(ok(check_inv2(&[c.generator::<f64>()], &jet, 1e-9))?.holds, "circle average not invariant");
                }
            }
            _ => {
                let avg = ok(average_poly(&e.finite, &f))?;
                ensure!(ok(average_poly(&e.finite, &avg))? == avg, "{}: average not idempotent", e.name);
                for m in 1..=4 {
                    check_entry_field(&e, &ok(jet_of_poly(&avg, &z, m))?)?;
                }
            }
        }
    }
    let c = CircleAction::planar();
    let x2 = Polynomial::<f64>::var(2, 0).pow(2);
    let avg = ok(average_poly_circle(&c, &x2, 3))?;
    let half = ok(avg.eval(&[1.0, 0.0]))?;
    let expected = ok(Polynomial::<f64>::var(2, 0).pow(2).add(&Polynomial::var(2, 1).pow(2)))?.scale(&0.5);
    ensure!((half - 0.5).abs() <= 1e-9 && avg.near(&expected, 1e-9), "circle average of x^2: {avg}");
    Ok(format!(
        "{pulled} Hilbert pullbacks invariant; averages idempotent and invariant; circle mean of cos^2 = {half:.12}"
    ))
}

fn small_groups() -> Vec<(&'static str, FiniteGroup<Q>)> {
    vec![
        ("Z2", group_closure(&standard::sign(1), 0.0, 10).unwrap()),
        ("Z4", group_closure(&standard::quarter_turn(), 0.0, 10).unwrap()),
        ("S3", group_closure(&standard::permutations(3), 0.0, 10).unwrap()),
    ]
}

/// A cloud of `size` points made of a few random points and some of their
/// translates, so that it carries non-unit arrows.
fn mixed_cloud(rng: &mut ChaCha8Rng, g: &FiniteGroup<Q>, size: usize) -> PointCloud<Q> {
    let mut pts: Vec<Vec<Q>> = Vec::new();
    while pts.len() < size {
        let z = random::point::<Q>(rng, g.dim());
        for _ in 0..rng.gen_range(1..=3) {
            let h = g.element(rng.gen_range(0..g.order())).apply(&z).unwrap();
            if pts.len() < size && !pts.contains(&h) {
                pts.push(h);
            }
        }
    }
    PointCloud::new(g.dim(), pts).unwrap()
}

/// `count` points in distinct orbits, each with trivial isotropy.
fn free_representatives(rng: &mut ChaCha8Rng, g: &FiniteGroup<Q>, count: usize) -> PointCloud<Q> {
    let mut reps: Vec<Vec<Q>> = Vec::new();
    while reps.len() < count {
        let z = random::point::<Q>(rng, g.dim());
        let orbit: Vec<Vec<Q>> = g.elements().iter().map(|e| e.apply(&z).unwrap()).collect();
        let free = orbit.iter().skip(1).all(|h| h != &z);
        if free && !reps.iter().any(|r| orbit.contains(r)) {
            reps.push(z);
        }
    }
    PointCloud::new(g.dim(), reps).unwrap()
}

fn extension_isomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut cases = 0;
    for (name, g) in small_groups() {
        for size in 1..=6 {
            for m in 0..=3 {
                let z = mixed_cloud(&mut rng, &g, size);
                let orbit = ok(orbit_cloud(&g, &z, 0.0))?.cloud;

                // invariant polynomial data
                let f = ok(average_poly(&g, &random::polynomial::<Q>(&mut rng, g.dim(), 3, 4)))?;
                let full = ok(jet_of_poly(&f, &orbit, m))?;
                let on_z = ok(restrict(&full, &z))?;
                let ext = ok(extend_invariant(&g, &z, &on_z, 0.0))?;
                ensure!(ext == full, "{name} |Z|={size} m={m}: extend o restrict != id");
                ensure!(ok(restrict(&ext, &z))? == on_z, "{name} |Z|={size} m={m}: restrict o extend != id");

                // invariant field that is not a polynomial jet: extend random
                // data from orbit representatives with trivial isotropy
                let reps = free_representatives(&mut rng, &g, 2);
                let rep_field = random::jet_field(&mut rng, &reps, m);
                let hat = ok(extend_invariant(&g, &reps, &rep_field, 0.0))?;
                let sub: Vec<usize> = (0..hat.len()).filter(|_| rng.gen_bool(0.5)).collect();
                let mut picks: Vec<Vec<Q>> = sub.iter().map(|&i| hat.cloud().point(i).to_vec()).collect();
                picks.extend(reps.points().iter().cloned());
                let picks = ok(PointCloud::dedup(g.dim(), picks, 0.0))?;
                let back = ok(extend_invariant(&g, &picks, &ok(restrict(&hat, &picks))?, 0.0))?;
                ensure!(
                    ok(back.reindexed(hat.cloud().clone()))? == hat,
                    "{name} m={m}: extension of a restricted invariant field differs"
                );
                cases += 1;
            }
        }
    }
    // fault injection: perturb one component at a point whose translate is also in Z
    let (_, z4) = &small_groups()[1];
    let z = ok(PointCloud::new(2, vec![vec![rational(1, 1), rational(2, 1)], vec![rational(-2, 1), rational(1, 1)]]))?;
    let f = ok(jet_of_poly(&ok(Polynomial::var(2, 0).pow(2).add(&Polynomial::var(2, 1).pow(2)))?, &z, 2))?;
    let mut bad = f.clone();
    let alpha = MultiIndex::from([1, 0]);
    ok(bad.set(1, &alpha, bad.get(1, &alpha) + rational(1, 1)))?;
    ensure!(ok(extend_invariant(z4, &z, &f, 0.0)).is_ok(), "clean input rejected");
    match extend_invariant(z4, &z, &bad, 0.0) {
        Err(Error::Conflict { .. }) => {}
        other => return Err(format!("fault injection not detected: {other:?}")),
    }
    Ok(format!("{cases} (group, |Z|, order) cases exact; injected fault raises a conflict"))
}

fn worked_examples() -> Outcome {
    let cot = cli_json(&["demo", "cotangent", "--n", "2"])?;
    let strata: Vec<&str> = cot["samples"]
        .as_array()
        .ok_or("no samples")?
        .iter()
        .map(|s| s["label"]["tag"].as_str().unwrap_or("?"))
        .collect();
    ensure!(strata == ["full", "intermediate", "trivial"], "cotangent tags {strata:?}");
    let classes: Vec<&str> = cot["samples"].as_array().unwrap().iter().map(|s| s["label"]["class"].as_str().unwrap_or("?")).collect();
    ensure!(classes == ["O2", "O1", "e"], "cotangent classes {classes:?}");

    let circle = cli_json(&["demo", "circle"])?;
    let arrows = circle["arrows"].as_array().ok_or("no arrows")?;
    ensure!(arrows.len() == 1 && arrows[0]["unit"] == true, "circle arrows {arrows:?}");
    let checks = circle["checks"].as_array().ok_or("no checks")?;
    ensure!(checks[0]["inv2"]["holds"] == true, "r^2 jet should pass");
    ensure!(checks[1]["inv2"]["holds"] == false, "y jet should fail");
    let first = &checks[1]["inv2"]["violations"][0];
    ensure!(first["alpha"] == serde_json::json!([1, 0]) && first["value"] == "1", "y violation {first}");
    ensure!(circle["note"].as_str().is_some_and(|s| s.contains("(2,0) component")), "discrepancy note missing");
    Ok("cotangent strata (G),(O1),(e); circle: unit arrow only, r^2 passes, y fails at (1,0) with 1".into())
}

fn gabrielov_ranks() -> Outcome {
    let mut seen = Vec::new();
    for e in catalog::<Q>() {
        let rank = ok(generic_rank(&e.invariants, 8, 0x5eed_0009))?;
        let expected = match e.group {
            whitney_core::invariants::GroupSpec::Permutation(n) => n,
            whitney_core::invariants::GroupSpec::OrthogonalCotangent(_) => 3,
            _ => 1,
        };
        ensure!(rank == expected, "{}: rank {rank}, expected {expected}", e.name);
        seen.push(format!("{}={rank}", e.name));
    }
    let out = cli_json(&["rank", "--map", "x1^2 + x2^2 + x3^2; x1*x4 + x2*x5 + x3*x6; x4^2 + x5^2 + x6^2"])?;
    ensure!(out["rank"] == 3, "cli rank {}", out["rank"]);
    Ok(seen.join(", "))
}

fn determinism() -> Outcome {
    let fx = fixture("jet1_x2.json");
    let fx = fx.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["hilbert", "list", "--seed", "7"],
        vec!["--mode", "float", "hilbert", "list", "--seed", "7"],
        vec!["rank", "--map", "x1^2; x1*x2; x2^2", "--seed", "3"],
        vec!["demo", "circle"],
        vec!["demo", "cotangent", "--n", "3"],
        vec!["--in", fx, "seminorm"],
        vec!["--mode", "float", "--in", fx, "pullback", "--map", "x1^2", "--points", "0;1;-1"],
        vec!["--order", "3", "check-comm", "--poly", "x1^3 - x1*x2", "--map", "x1 + x2; x1*x2", "--points", "1,2;0,1"],
    ];
    for args in &runs {
        let a = cli(args)?;
        let b = cli(args)?;
        ensure!(a == b, "output differs between runs for {args:?}");
    }
    Ok(format!("{} command lines byte-identical across two runs", runs.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("chain rule cross-validation", faa_di_bruno_cross_validation),
        ("hand-anchored composite", hand_anchored_composite),
        ("partition and Lambda counts", combinatorics_counts),
        ("jet algebra laws", jet_algebra_laws),
        ("Whitney seminorm fixture", whitney_seminorm_fixture),
        ("equivariance of pullbacks and averages", equivariance),
        ("invariant extension round trip", extension_isomorphism),
        ("circle and cotangent examples", worked_examples),
        ("generic ranks of Hilbert maps", gabrielov_ranks),
        ("CLI determinism", determinism),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("acceptance {:>2} {name}: PASS ({secs:.1}s) {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} {name}: FAIL ({secs:.1}s) {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
