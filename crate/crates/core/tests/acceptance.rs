//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_embed::almost_regular::{check_almost_regular, embed_almost_regular, realize_almost_regular, AlmostRegularMatrix};
use torus_embed::delta::product_embed;
use torus_embed::gen::{generate, GenKind};
use torus_embed::geometry::{is_simplex, squared_distances, PointSet, DEFAULT_RANK_TOL};
use torus_embed::pipeline::{construct, schoenberg_decompose, DEFAULT_ACCEPT_TOL};
use torus_embed::regular::{embed_regular_simplex, regular_simplex};
use torus_embed::torus::{materialize, shift, torus_distance, torus_distance_squared, PolygonSpec};
use torus_embed::{verify_certificate, EmbeddingCertificate, PipelineConfig, TorusPoint, TorusSpec};

const REGULAR_TOL: f64 = 1e-12;
const ALMOST_REGULAR_TOL: f64 = 1e-10;
const DELTA: f64 = 1e-2;
const DECOMPOSITION_TOL: f64 = 1e-10;
const MATERIALIZE_TOL: f64 = 1e-12;
const MATERIALIZE_MAX_M: u32 = 10_000;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn rel(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        (actual - expected).abs() / expected.abs()
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn regular_exactness() -> Outcome {
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for n in 2..=10 {
        for m in [2u32, 3, 4, 6, 12] {
            for alpha in [0.1, 1.0, 10.0] {
                let (t, pts) = embed_regular_simplex(n, alpha, &BigUint::from(m)).unwrap();
                for (i, j) in pairs(n) {
                    worst = worst.max(rel(torus_distance(&t, &pts[i], &pts[j]).unwrap(), alpha));
                }
                cases += 1;
            }
        }
    }
    Outcome::new(worst <= REGULAR_TOL, format!("{cases} cases, max rel error {worst:.3e} (tol {REGULAR_TOL:e})"))
}

/// Squared entries `A^2 - b_ij^2` with `sum b_ij^2 < A^2`, so the matrix is almost regular.
fn random_almost_regular(rng: &mut ChaCha8Rng, n: usize) -> AlmostRegularMatrix {
    let a2: f64 = rng.gen_range(0.1..10.0);
    let used: f64 = rng.gen_range(0.0..0.95);
    let w: Vec<f64> = pairs(n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = w.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    let mut rows = vec![vec![0.0; n]; n];
    for ((i, j), wk) in pairs(n).zip(&w) {
        let v = (a2 - used * a2 * wk / total).sqrt();
        rows[i][j] = v;
        rows[j][i] = v;
    }
    AlmostRegularMatrix::from_rows(&rows).unwrap()
}

fn almost_regular_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_z = 0.0_f64;
    let mut worst_torus = 0.0_f64;
    let mut bad = Vec::new();
    for trial in 0..200 {
        let n = rng.gen_range(2..=7);
        let a = random_almost_regular(&mut rng, n);
        if !check_almost_regular(a.as_matrix()).unwrap().valid {
            bad.push(format!("trial {trial}: generator produced an invalid matrix"));
            continue;
        }
        let (z, _) = realize_almost_regular(&a).unwrap();
        if !is_simplex(&z, DEFAULT_RANK_TOL) {
            bad.push(format!("trial {trial}: Z is not a simplex"));
        }
        let dz = squared_distances(&z);
        let (t, pts) = embed_almost_regular(&a, &BigUint::from(4u32)).unwrap();
        for (i, j) in pairs(n) {
            let target = a.get(i, j).powi(2);
            worst_z = worst_z.max(rel(dz.get(i, j), target));
            worst_torus = worst_torus.max(rel(torus_distance_squared(&t, &pts[i], &pts[j]).unwrap(), target));
        }
    }
    let passed = bad.is_empty() && worst_z <= ALMOST_REGULAR_TOL && worst_torus <= ALMOST_REGULAR_TOL;
    let mut detail = format!(
        "200 matrices, max rel error Z {worst_z:.3e}, torus {worst_torus:.3e} (tol {ALMOST_REGULAR_TOL:e})"
    );
    if !bad.is_empty() {
        detail += &format!("; {}", bad.join("; "));
    }
    Outcome::new(passed, detail)
}

fn random_spread_set(rng: &mut ChaCha8Rng, k: usize, size: usize, gap: f64) -> PointSet {
    loop {
        let pts: Vec<Vec<f64>> = (0..size).map(|_| (0..k).map(|_| rng.gen_range(0.0..=1.0)).collect()).collect();
        let p = PointSet::with_dim(pts, k).unwrap();
        if squared_distances(&p).min_off_diagonal().is_some_and(|d| d.sqrt() >= gap) {
            return p;
        }
    }
}

fn big_ratio(num: BigInt, den: &BigUint) -> f64 {
    Ratio::new(num, BigInt::from(den.clone())).to_f64().unwrap()
}

fn delta_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_pair = 0.0_f64;
    let mut worst_snap = 0.0_f64;
    let mut worst_bend = 0.0_f64;
    let mut max_bits = 0;
    let mut bad = Vec::new();
    for trial in 0..100 {
        let k = rng.gen_range(1..=4);
        let size = rng.gen_range(2..=6);
        let x = random_spread_set(&mut rng, k, size, 0.05);
        let e = product_embed(&x, DELTA).unwrap();
        if !e.is_injective() {
            bad.push(format!("trial {trial}: not injective"));
        }
        let p = &e.params;
        max_bits = max_bits.max(p.m.bits());
        let n0 = BigInt::from(p.n0.clone());
        let n2 = p.n.pow(2);
        if p.m != p.n.pow(3) || rel(p.r, p.n0.to_f64().unwrap() * p.n.to_f64().unwrap() / (2.0 * PI)) > 1e-15 {
            bad.push(format!("trial {trial}: polygon parameters inconsistent"));
        }
        let torus = TorusSpec::new(vec![PolygonSpec::new(p.m.clone(), p.r).unwrap(); e.kept_coordinates.len()]).unwrap();
        for (i, j) in pairs(size) {
            let d2: f64 = x.point(i).iter().zip(x.point(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            let t2 = torus_distance_squared(&torus, &e.assignment[i], &e.assignment[j]).unwrap();
            let err = (d2 - t2).abs();
            worst_pair = worst_pair.max(err / DELTA);
            if !(err < DELTA && err < e.delta) {
                bad.push(format!("trial {trial}: pair ({i}, {j}) error {err:e}"));
            }
        }
        for (slot, &c) in e.kept_coordinates.iter().enumerate() {
            for (i, j) in pairs(size) {
                let (ji, jj) = (&e.assignment[i].indices[slot], &e.assignment[j].indices[slot]);
                if ji > &n2 || jj > &n2 {
                    bad.push(format!("trial {trial}: index above n^2"));
                }
                let dj = BigInt::from(ji.clone()) - BigInt::from(jj.clone());
                let dy = big_ratio(&dj * &n0, &n2);
                let dx = x.point(i)[c] - x.point(j)[c];
                let steps = dj.magnitude() % &p.m;
                let steps = steps.clone().min(&p.m - &steps);
                let chord = 2.0 * p.r * (PI * big_ratio(BigInt::from(steps), &p.m)).sin();
                let snap = (dy * dy - dx * dx).abs();
                let bend = (chord * chord - dy * dy).abs();
                worst_snap = worst_snap.max(snap / (e.budget / 2.0));
                worst_bend = worst_bend.max(bend / (e.budget / 2.0));
                if !(snap < e.budget / 2.0 && bend < e.budget / 2.0) {
                    bad.push(format!("trial {trial}: coordinate {c} pair ({i}, {j}) snap {snap:e} bend {bend:e}"));
                }
            }
        }
    }
    let detail = format!(
        "100 sets, worst pair error {worst_pair:.3e} of delta, worst snapping {worst_snap:.3e} and bending {worst_bend:.3e} of half-budget, m up to {max_bits} bits{}",
        if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
    );
    Outcome::new(bad.is_empty(), detail)
}

fn decomposition_roundtrip() -> Outcome {
    let mut worst = 0.0_f64;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 7);
        let y = generate(GenKind::Random, n, 1000 + seed).unwrap();
        let dec = schoenberg_decompose(&y, DEFAULT_RANK_TOL).unwrap();
        let (dy, dx) = (squared_distances(&y), squared_distances(&dec.base));
        let a2 = dec.alpha * dec.alpha;
        for (i, j) in pairs(n) {
            worst = worst.max(rel(dx.get(i, j) + a2, dy.get(i, j)));
        }
    }
    let mut worst_alpha = 0.0_f64;
    for n in 2..=8 {
        for side in [0.5, 1.0, 3.0] {
            let dec = schoenberg_decompose(&regular_simplex(n, side).unwrap(), DEFAULT_RANK_TOL).unwrap();
            worst_alpha = worst_alpha.max(rel(dec.alpha, side / SQRT_2));
        }
    }
    Outcome::new(
        worst <= DECOMPOSITION_TOL && worst_alpha <= DECOMPOSITION_TOL,
        format!("200 simplices, max rel error {worst:.3e}; regular alpha vs side/sqrt2 {worst_alpha:.3e} (tol {DECOMPOSITION_TOL:e})"),
    )
}

fn generated_kind(i: usize) -> GenKind {
    match i % 3 {
        0 => GenKind::Regular,
        1 => GenKind::Random,
        _ => GenKind::Perturbed { noise: 0.01 },
    }
}

fn end_to_end() -> Outcome {
    let cfg = PipelineConfig::default();
    let mut worst = 0.0_f64;
    let mut min_margin = f64::INFINITY;
    let mut max_bits = 0;
    let mut bad = Vec::new();
    for i in 0..50 {
        let n = 2 + (i / 3) % 6;
        let y = generate(generated_kind(i), n, i as u64).unwrap();
        match construct(&squared_distances(&y), Some(&y), &cfg) {
            Ok(c) => {
                let mut stripped = c.certificate.clone();
                stripped.parameters = Default::default();
                let report = verify_certificate(&stripped, DEFAULT_ACCEPT_TOL).unwrap();
                let check = check_almost_regular(c.correction.as_matrix()).unwrap();
                worst = worst.max(report.max_rel);
                min_margin = min_margin.min(check.margin);
                max_bits = max_bits.max(c.delta_embedding.params.m.bits());
                if !report.passed || !check.valid || check.margin <= 0.0 {
                    bad.push(format!("run {i}: verify {} margin {:e}", report.passed, check.margin));
                }
            }
            Err(e) => bad.push(format!("run {i} (n = {n}): {e}")),
        }
    }
    let detail = format!(
        "50 simplices, max rel error {worst:.3e} (tol {DEFAULT_ACCEPT_TOL:e}), min margin {min_margin:.3e}, m up to {max_bits} bits{}",
        if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
    );
    Outcome::new(bad.is_empty(), detail)
}

fn random_biguint(rng: &mut ChaCha8Rng, max_bits: u32) -> BigUint {
    let bits = rng.gen_range(1..=max_bits);
    let digits: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
    BigUint::new(digits) >> (bits.div_ceil(32) * 32 - bits)
}

fn random_below(rng: &mut ChaCha8Rng, m: &BigUint) -> BigUint {
    random_biguint(rng, m.bits() as u32 + 16) % m
}

fn shift_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=5);
        let factors: Vec<PolygonSpec> = (0..k)
            .map(|_| {
                let m = if rng.gen_bool(0.5) {
                    BigUint::from(rng.gen_range(2u32..=64))
                } else {
                    random_biguint(&mut rng, 200) + 2u32
                };
                PolygonSpec::new(m, rng.gen_range(0.01..100.0)).unwrap()
            })
            .collect();
        let t = TorusSpec::new(factors).unwrap();
        let point = |rng: &mut ChaCha8Rng| TorusPoint::new(t.factors.iter().map(|f| random_below(rng, &f.m)).collect());
        let (p, q) = (point(&mut rng), point(&mut rng));
        let offsets: Vec<BigInt> = (0..k)
            .map(|_| {
                let sign = if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus };
                BigInt::from_biguint(sign, random_biguint(&mut rng, 300))
            })
            .collect();
        let before = torus_distance(&t, &p, &q).unwrap();
        let after = torus_distance(&t, &shift(&t, &p, &offsets).unwrap(), &shift(&t, &q, &offsets).unwrap()).unwrap();
        if before.to_bits() != after.to_bits() {
            mismatches += 1;
        }
    }
    Outcome::new(mismatches == 0, format!("1000 triples, {mismatches} bitwise mismatches"))
}

struct TamperTarget {
    cert: EmbeddingCertificate,
    slots: Vec<usize>,
}

impl TamperTarget {
    /// Slots whose one-step change is resolvable: a `+1` move on a polygon of
    /// side `s` changes some squared distance by at least `s^2`.
    fn resolvable(cert: EmbeddingCertificate, slots: impl Iterator<Item = usize>) -> (Self, usize) {
        let max_d2 = cert.input.squared_distances.iter().flatten().fold(0.0_f64, |a, &b| a.max(b));
        let floor = 2.0 * cert.meta.accept_tol * max_d2;
        let all: Vec<usize> = slots.collect();
        let total = all.len();
        let slots = all.into_iter().filter(|&s| cert.torus.factors[s].side().powi(2) > floor).collect();
        (Self { cert, slots }, total)
    }
}

fn tamper(cert: &EmbeddingCertificate, point: usize, slot: usize) -> bool {
    let mut c = cert.clone();
    let m = c.torus.factors[slot].m.clone();
    let idx = &mut c.assignment[point].indices[slot];
    *idx = (&*idx + 1u32) % m;
    !verify_certificate(&c, c.meta.accept_tol).unwrap().passed
}

fn tamper_detection() -> Outcome {
    let cfg = PipelineConfig::default();
    let mut targets = Vec::new();
    let (mut eligible, mut total) = (0, 0);
    for i in 0..12 {
        let y = generate(generated_kind(i), 3 + i % 4, 50 + i as u64).unwrap();
        let cert = construct(&squared_distances(&y), Some(&y), &cfg).unwrap().certificate;
        let len = cert.torus.len();
        let (t, all) = TamperTarget::resolvable(cert, 0..len);
        eligible += t.slots.len();
        total += all;
        targets.push(t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=6 {
        let a = random_almost_regular(&mut rng, n);
        let (t, pts) = embed_almost_regular(&a, &BigUint::from(4u32)).unwrap();
        let d2: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j).powi(2)).collect()).collect();
        let d = torus_embed::SquaredDistanceMatrix::from_rows(&d2).unwrap();
        let len = t.len();
        targets.push(TamperTarget::resolvable(EmbeddingCertificate::from_parts(&d, t, pts, DEFAULT_ACCEPT_TOL), 0..len).0);
    }
    for (n, m) in [(3, 4u32), (5, 6), (7, 12)] {
        let (t, pts) = embed_regular_simplex(n, 1.0, &BigUint::from(m)).unwrap();
        let d = squared_distances(&regular_simplex(n, 1.0).unwrap());
        targets.push(TamperTarget::resolvable(EmbeddingCertificate::from_parts(&d, t, pts, DEFAULT_ACCEPT_TOL), 0..n).0);
    }
    let mut detected = 0;
    for _ in 0..100 {
        let t = targets.choose(&mut rng).unwrap();
        let point = rng.gen_range(0..t.cert.assignment.len());
        if tamper(&t.cert, point, *t.slots.choose(&mut rng).unwrap()) {
            detected += 1;
        }
    }
    Outcome::new(
        detected == 100,
        format!(
            "{detected}/100 detected; pipeline certificates have {eligible} of {total} slots on polygons whose side^2 exceeds 2 tol max|d|^2, the rest move distances below the tolerance"
        ),
    )
}

fn materialize_sources() -> Vec<(String, TorusSpec, Vec<TorusPoint>)> {
    let mut out = Vec::new();
    for m in [2u32, 3, 4, 6, 12, 997, 10_000] {
        let (t, p) = embed_regular_simplex(5, 1.3, &BigUint::from(m)).unwrap();
        out.push((format!("regular m={m}"), t, p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 3..=6 {
        let a = random_almost_regular(&mut rng, n);
        let (t, p) = embed_almost_regular(&a, &BigUint::from(4u32)).unwrap();
        out.push((format!("almost-regular n={n}"), t, p));
    }
    for (label, pts, delta) in [
        ("pair", vec![vec![0.0], vec![1.0]], 0.9),
        ("square", vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]], 0.99),
        ("diagonal", vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]], 2.9),
        ("cube", (0..8).map(|v| (0..3).map(|b| f64::from((v >> b) & 1)).collect()).collect(), 0.99),
    ] {
        let e = product_embed(&PointSet::new(pts).unwrap(), delta).unwrap();
        out.push((format!("delta {label} m={}", e.params.m), e.torus, e.assignment));
    }
    out
}

fn materialization_consistency() -> Outcome {
    let sources = materialize_sources();
    let mut worst = 0.0_f64;
    let mut bad = Vec::new();
    let limit = BigUint::from(MATERIALIZE_MAX_M);
    for (label, t, pts) in &sources {
        if t.factors.iter().any(|f| f.m > limit) {
            bad.push(format!("{label}: m above {MATERIALIZE_MAX_M}"));
            continue;
        }
        let cart: Vec<Vec<f64>> = pts.iter().map(|p| materialize(t, p).unwrap()).collect();
        if cart.iter().any(|c| c.len() != t.ambient_dim()) {
            bad.push(format!("{label}: wrong ambient dimension"));
        }
        for (i, j) in pairs(pts.len()) {
            let euclid = cart[i].iter().zip(&cart[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let chords = torus_distance(t, &pts[i], &pts[j]).unwrap();
            if chords.is_zero() && euclid.is_zero() {
                continue;
            }
            worst = worst.max(rel(euclid, chords));
        }
    }
    let passed = bad.is_empty() && worst <= MATERIALIZE_TOL;
    Outcome::new(
        passed,
        format!(
            "{} tori, max rel error {worst:.3e} (tol {MATERIALIZE_TOL:e}){}",
            sources.len(),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 regular-simplex exactness", regular_exactness, Some(Duration::from_secs(1))),
        ("2 almost-regular realization", almost_regular_identity, Some(Duration::from_secs(5))),
        ("3 delta-embedding guarantee", delta_guarantee, Some(Duration::from_secs(5))),
        ("4 Schoenberg decomposition", decomposition_roundtrip, Some(Duration::from_secs(3))),
        ("5 end-to-end certificates", end_to_end, Some(Duration::from_secs(30))),
        ("6 shift invariance", shift_invariance, None),
        ("7 tamper detection", tamper_detection, None),
        ("8 materialization consistency", materialization_consistency, None),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > b {
                outcome.passed = false;
                outcome.detail += &format!("; over the {:.0} s budget", b.as_secs_f64());
            }
        }
        if !outcome.passed {
            failed += 1;
        }
        println!(
            "{} {name}: {} [{:.2} s]",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{}/8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
