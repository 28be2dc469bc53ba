//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use negacirc_core::arith::{mult_order, pow_mod};
use negacirc_core::bounds::{entropy, expurgation_margin, inverse_entropy};
use negacirc_core::census::{
    census_double, census_four, check_round_trips, containment_count, diagonal_solutions, double_formula,
    exhaustive_double, four_formula, h_from_index, make_crt_context, random_low_weight_vectors, DoubleMode, FourMode,
};
use negacirc_core::field::{field_of_order, make_field};
use negacirc_core::nega::{
    build_double, build_four, double_criterion, four_criterion, nega_matrix, negacyclic_mul, prime_map, LinearCode,
};
use negacirc_core::{classify, Poly};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn negacirc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_negacirc"))
        .args(args)
        .env_remove("NEGACIRC_SEED")
        .env("RUST_LOG", "error")
        .output()
        .expect("negacirc runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn golden_text(doc: &Value) -> String {
    let r = &doc["result"];
    let mut s = format!("n={} q={} case={}\n", r["n"], r["q"], r["case"].as_str().unwrap_or("?"));
    for f in r["factors"]["factors"].as_array().into_iter().flatten() {
        s.push_str(f["poly"].as_str().unwrap_or("?"));
        s.push('\n');
    }
    s
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = [
        (7, 3, "x14_q3.txt", 0),
        (11, 7, "x22_q7.txt", 0),
        (3, 11, "x6_q11.txt", 0),
        (11, 3, "x22_q3.txt", 1),
        (7, 11, "x14_q11.txt", 1),
    ];
    for (p, q, file, code) in cases {
        let golden = std::fs::read_to_string(dir.join(file)).map_err(|e| e.to_string())?;
        let (status, out) = negacirc(&["classify", "--p", &p.to_string(), "--q", &q.to_string(), "--workers", "1"]);
        ensure(status == code, || format!("classify {p} {q}: exit {status}, expected {code}"))?;
        let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let got = golden_text(&doc);
        ensure(got == golden, || format!("{file}: got\n{got}expected\n{golden}"))?;

        // the golden factors multiply back to x^n + 1
        let field = field_of_order(q).map_err(|e| e.to_string())?;
        let mut prod = Poly::one(&field);
        for line in golden.lines().skip(1) {
            prod = prod.try_mul(&Poly::parse(&field, line).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        }
        ensure(prod == Poly::xn_plus_one(&field, 2 * p as usize), || format!("{file}: product is not x^n+1"))?;
    }
    let elapsed = start.elapsed();
    Ok(format!("5 factorizations byte-exact ({:.2?} including process start-up)", elapsed))
}

fn criterion_2() -> Check {
    let orders = [
        (3, 28, 6),
        (3, 7, 6),
        (7, 44, 10),
        (7, 11, 10),
        (11, 12, 2),
        (11, 3, 2),
        (3, 44, 10),
        (3, 11, 5),
        (11, 28, 6),
        (11, 7, 3),
        (27, 44, 10),
        (27, 11, 5),
    ];
    for (base, m, want) in orders {
        let got = mult_order(base, m).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("ord_{m}({base}) = {got}, expected {want}"))?;
    }
    for (p, q, witness) in [(7u64, 3u64, Some(3u64)), (11, 7, Some(5)), (3, 11, Some(1)), (11, 3, None), (7, 11, None)] {
        let r = classify(p, q).map_err(|e| e.to_string())?;
        let v = &r.oddly_good;
        ensure(v.odd_witness == witness, || format!("({}, {q}): odd witness {:?}, expected {witness:?}", 4 * p, v.odd_witness))?;
        if let Some(i) = witness {
            ensure(pow_mod(q, i, 4 * p) == 4 * p - 1, || format!("{q}^{i} != -1 mod {}", 4 * p))?;
        } else {
            // exhaustive over odd i in [0, p-2]
            let none = (1..=p - 2).step_by(2).all(|i| pow_mod(q, i, 4 * p) != 4 * p - 1);
            ensure(none && !v.is_oddly_good, || format!("({}, {q}) should not be oddly good", 4 * p))?;
        }
    }
    Ok("12 orders and 5 oddly-good verdicts exact".into())
}

fn criterion_3() -> Check {
    let mut notes = Vec::new();
    for (p, q, want) in [(3u64, 11u64, 1728u32), (7, 3, 3136)] {
        let start = Instant::now();
        let ctx = make_crt_context(&classify(p, q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let r = census_double(&ctx, DoubleMode::Exhaustive).map_err(|e| e.to_string())?;
        let want = BigUint::from(want);
        ensure(r.formula_count == want, || format!("({p},{q}) formula {}", r.formula_count))?;
        ensure(r.constructive_count.as_ref() == Some(&want), || format!("({p},{q}) constructive {:?}", r.constructive_count))?;
        ensure(r.exhaustive_count.as_ref() == Some(&want), || format!("({p},{q}) exhaustive {:?}", r.exhaustive_count))?;
        ensure(r.sets_match == Some(true), || format!("({p},{q}) h-sets differ"))?;
        let elapsed = start.elapsed();
        ensure(elapsed.as_secs() < 60, || format!("({p},{q}) took {elapsed:.1?}"))?;
        notes.push(format!("({p},{q}) {want} in {elapsed:.1?}"));
    }
    Ok(notes.join(", "))
}

/// Pairs `(a, b)` in `F_{q^2}` with `a^{q+1} + b^{q+1} = -1`, by brute force.
fn diagonal_oracle(p0: u64) -> u64 {
    let f = make_field(p0, 2).unwrap();
    let q2 = f.order();
    let norms: Vec<u32> = (0..q2).map(|a| f.pow_raw(a, p0 as u128 + 1)).collect();
    let minus_one = f.minus_one_raw();
    let mut count = 0;
    for &na in &norms {
        for &nb in &norms {
            if f.add_raw(na, nb) == minus_one {
                count += 1;
            }
        }
    }
    count
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (q, want) in [(3u64, 24u64), (7, 336), (11, 1320)] {
        let field = field_of_order(q).map_err(|e| e.to_string())?;
        let g = Poly::xn_plus_one(&field, 2);
        let (count, _) = diagonal_solutions(&g, q as u128).map_err(|e| e.to_string())?;
        let oracle = diagonal_oracle(q);
        ensure(count == want && oracle == want, || format!("F_{}: library {count}, oracle {oracle}, expected {want}", q * q))?;
        notes.push(format!("F_{}: {count}", q * q));
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:.2?}"))?;
    Ok(format!("{} ({elapsed:.2?})", notes.join(", ")))
}

fn criterion_5() -> Check {
    let expected: [(u64, u64, [u64; 3], u64); 2] =
        [(3, 11, [1320, 1320, 1320], 11), (7, 3, [(3 + 1) * (9 - 3), (27 + 1) * (729 - 27), (27 + 1) * (729 - 27)], 7)];
    let mut notes = Vec::new();
    for (p, q, counts, seed) in expected {
        let ctx = make_crt_context(&classify(p, q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let r = census_four(&ctx, FourMode::SampleLift, 1000, seed).map_err(|e| e.to_string())?;
        ensure(r.component_counts == counts, || format!("({p},{q}) components {:?}", r.component_counts))?;
        let product: BigUint = counts.iter().map(|&c| BigUint::from(c)).product();
        ensure(product == four_formula(p, q), || format!("({p},{q}) product {product} != formula"))?;
        ensure(r.constructive_count.as_ref() == Some(&product), || format!("({p},{q}) constructive count"))?;
        let s = r.samples.ok_or("no samples")?;
        ensure(s.size == 1000 && s.self_dual == 1000 && s.prop21 == 1000, || format!("({p},{q}) samples {s:?}"))?;
        notes.push(format!("({p},{q}) {counts:?} -> {product}"));
    }
    Ok(format!("{}, 1000 lifts each self-dual", notes.join("; ")))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let ctx = make_crt_context(&classify(3, 11).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut worst = 0;
    for u in random_low_weight_vectors(ctx.field(), 12, 6, 200, 2024) {
        let weight = u.iter().filter(|&&c| c != 0).count();
        ensure((1..6).contains(&weight), || format!("weight {weight}"))?;
        let c = containment_count(&ctx, &u).map_err(|e| e.to_string())?;
        ensure(c.bound == BigUint::from(1452u32), || format!("bound {}", c.bound))?;
        ensure(c.count <= 1452, || format!("u = {u:?}: {} codes", c.count))?;
        worst = worst.max(c.count);
    }
    // codewords of known self-dual codes lie in at least one of them
    let field = ctx.field().clone();
    let (mut hits, mut probes) = (0, 0);
    let light = exhaustive_double(&field, 6)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|idx| h_from_index(&field, 6, idx))
        .filter(|h| h.raw().iter().filter(|&&c| c != 0).count() <= 4);
    for h in light.take(12) {
        let mut u = vec![0u32; 12];
        u[0] = 1;
        u[6..].copy_from_slice(&h.raw_padded(6));
        let c = containment_count(&ctx, &u).map_err(|e| e.to_string())?;
        ensure((1..=1452).contains(&c.count), || format!("codeword {u:?}: {} codes", c.count))?;
        hits = hits.max(c.count);
        probes += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs() < 300, || format!("took {elapsed:.1?}"))?;
    Ok(format!("200 vectors, max count {worst} <= 1452; {probes} light codewords each in 1..={hits} codes ({elapsed:.1?})"))
}

fn criterion_7() -> Check {
    let err = |e: negacirc_core::Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for (p, q) in [(3u64, 11u64), (7, 3), (11, 7), (3, 23)] {
        let ctx = make_crt_context(&classify(p, q).map_err(err)?).map_err(err)?;
        check_round_trips(&ctx, 50, p * q).map_err(err)?;
    }

    for q in [3u64, 5, 9, 11] {
        let f = field_of_order(q).map_err(err)?;
        for n in 1..=6usize {
            for _ in 0..20 {
                let mut rand_poly = || Poly::from_raw(&f, (0..n).map(|_| rng.gen_range(0..q as u32)).collect());
                let (a, b) = (rand_poly(), rand_poly());
                let ma = nega_matrix(&a, n).map_err(err)?.matrix;
                let mb = nega_matrix(&b, n).map_err(err)?.matrix;
                let mab = nega_matrix(&negacyclic_mul(&a, &b, n).map_err(err)?, n).map_err(err)?.matrix;
                ensure(ma.try_mul(&mb).map_err(err)? == mab, || format!("homomorphism fails q={q} n={n}"))?;
                let sum = nega_matrix(&a.try_add(&b).map_err(err)?, n).map_err(err)?.matrix;
                ensure(ma.try_add(&mb).map_err(err)? == sum, || format!("additivity fails q={q} n={n}"))?;
                let a1 = prime_map(&a, n).map_err(err)?;
                ensure(ma.transpose() == nega_matrix(&a1, n).map_err(err)?.matrix, || format!("transpose law q={q} n={n}"))?;
                ensure(prime_map(&a1, n).map_err(err)? == a, || format!("involution q={q} n={n}"))?;

                let g = build_double(&a, n).map_err(err)?;
                ensure(g.is_self_dual() == double_criterion(&a, n).map_err(err)?, || format!("double forms q={q} n={n}"))?;
                let g4 = build_four(&a, &b, n).map_err(err)?;
                ensure(g4.is_self_dual() == four_criterion(&a, &b, n).map_err(err)?, || format!("four forms q={q} n={n}"))?;
            }
        }
    }

    let ctx = make_crt_context(&classify(3, 11).map_err(err)?).map_err(err)?;
    let r = census_double(&ctx, DoubleMode::Exhaustive).map_err(err)?;
    ensure(r.injective == Some(true), || "h -> C_h not injective on (3,11)".into())?;
    ensure(r.formula_count == double_formula(3, 11), || "formula".into())?;

    for q in [2u64, 3, 7, 11, 27, 121] {
        for i in 0..=200 {
            let y = i as f64 / 200.0;
            let t = inverse_entropy(q, y, 1e-12).map_err(err)?.delta;
            let back = entropy(q, t).map_err(err)?;
            ensure((back - y).abs() <= 1e-12, || format!("H_{q}(H^-1({y})) = {back}"))?;
        }
    }

    // exact sides of the expurgation inequality, recomputed with u128
    let lhs = |p: u128, q: u128, d: u32| -> u128 {
        let n = 2 * p;
        let mut sum = 0u128;
        let mut binom = 1u128;
        for i in 0..=d as u128 {
            if i > 0 {
                binom = binom * (n - i + 1) / i;
            }
            sum += binom * (q - 1).pow(i as u32);
        }
        q * q * (q.pow(((p - 1) / 2) as u32) + 1) * sum
    };
    let m = expurgation_margin(3, 11).map_err(err)?;
    ensure(m.d_n.is_none(), || format!("(3,11) should give no guarantee, got {:?}", m.d_n))?;
    ensure(m.lhs == BigUint::from(lhs(3, 11, 0)) && m.rhs == BigUint::from(11u128.pow(3)), || format!("(3,11) sides {} {}", m.lhs, m.rhs))?;
    ensure(lhs(3, 11, 0) >= 11u128.pow(3), || "(3,11) inequality".into())?;
    for (p, q) in [(7u64, 3u64), (11, 7), (19, 3), (23, 3)] {
        let m = expurgation_margin(p, q).map_err(err)?;
        let rhs = (q as u128).pow(p as u32);
        ensure(m.rhs == BigUint::from(rhs), || format!("({p},{q}) rhs"))?;
        let oracle = (0..=2 * p as u32).take_while(|&d| lhs(p as u128, q as u128, d) < rhs).last();
        ensure(m.d_n == oracle.map(u64::from), || format!("({p},{q}) d_n {:?} vs {oracle:?}", m.d_n))?;
        if let Some(d) = oracle {
            ensure(m.lhs == BigUint::from(lhs(p as u128, q as u128, d)), || format!("({p},{q}) lhs"))?;
        }
    }
    Ok("CRT round-trips, ring/transpose/involution laws, injectivity, self-duality forms, entropy, expurgation".into())
}

fn strip_workers(doc: &mut Value) {
    if let Some(cfg) = doc.get_mut("config").and_then(Value::as_object_mut) {
        cfg.remove("workers");
    }
}

fn criterion_8() -> Check {
    let commands: Vec<Vec<&str>> = vec![
        vec!["classify", "--p", "11", "--q", "7"],
        vec!["factor", "--q", "9", "--n", "10"],
        vec!["census-double", "--p", "3", "--q", "11", "--mode", "exhaustive"],
        vec!["census-four", "--p", "3", "--q", "11", "--mode", "sample", "--samples", "300", "--seed", "99"],
        vec!["census-four", "--p", "7", "--q", "3", "--mode", "sample", "--samples", "200"],
        vec!["mindist", "--q", "3", "--n", "7", "--a", "1,1,0,1", "--b", "2,0,1"],
        vec!["bound", "--q", "3", "--index", "4", "--p", "19"],
        vec!["survey", "--q", "27", "--p-max", "2000", "--format", "csv"],
        vec!["survey", "--q", "3", "--p-max", "500"],
    ];
    for args in &commands {
        let mut outputs = Vec::new();
        for workers in ["1", "1", "4", "4"] {
            let mut full = args.clone();
            full.extend(["--workers", workers]);
            let (status, out) = negacirc(&full);
            ensure(status == 0, || format!("{args:?} exited {status}"))?;
            outputs.push(out);
        }
        let joined = args.join(" ");
        ensure(outputs[0] == outputs[1] && outputs[2] == outputs[3], || format!("`{joined}` differs between runs"))?;
        let normalized: Vec<String> = outputs
            .iter()
            .map(|o| match serde_json::from_str::<Value>(o) {
                Ok(mut v) => {
                    strip_workers(&mut v);
                    v.to_string()
                }
                Err(_) => o.lines().filter(|l| !l.starts_with("# schema_version")).collect::<Vec<_>>().join("\n"),
            })
            .collect();
        ensure(normalized[0] == normalized[2], || format!("`{joined}` depends on the worker count"))?;
    }
    Ok(format!("{} commands bit-identical across runs and worker counts 1/4", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("factorization golden files", criterion_1),
        ("orders and oddly-good witnesses", criterion_2),
        ("double-negacirculant census", criterion_3),
        ("diagonal pair counts", criterion_4),
        ("four-negacirculant component products", criterion_5),
        ("containment bound", criterion_6),
        ("structural properties", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
