//! Deterministic verification suites, one per area of the library. Each
//! suite collects [`Verdict`]s and a few notes; nothing here measures time,
//! so two runs with the same seed produce identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amplify::{self, FiniteGroup, GroupSpec};
use crate::arith::{self, Modulus};
use crate::bridge::{self, Interval, IntervalSetup, SmoothWindow};
use crate::counting::{self, CountInstance};
use crate::error::{Error, Result};
use crate::experiments::{self, AvgModulusCase, NormCase};
use crate::kloosterman;
use crate::matrix::ComplexMatrix;
use crate::rep::{self, GroupFunction, PermRep};
use crate::sl2::{self, ProjectiveLine, Sl2};
use crate::verdict::Verdict;

/// Number of suites run by [`run`].
pub const SUITES: u8 = 10;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    /// Names of failing checks with both sides, at most 20.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

fn summarize(id: u8, name: &str, verdicts: &[Verdict], notes: Vec<String>) -> SuiteReport {
    let failing: Vec<&Verdict> = verdicts.iter().filter(|v| !v.passed).collect();
    SuiteReport {
        id,
        name: name.to_string(),
        passed: failing.is_empty() && !verdicts.is_empty(),
        checks: verdicts.len(),
        failures: failing
            .iter()
            .take(20)
            .map(|v| format!("{}: lhs={:.6e} rhs={:.6e} {}", v.name, v.lhs, v.rhs, v.detail))
            .collect(),
        notes,
    }
}

/// Run every suite in order.
pub fn run(seed: u64) -> Result<SelftestReport> {
    let suites = (1..=SUITES).map(|id| run_suite(id, seed)).collect::<Result<Vec<_>>>()?;
    Ok(SelftestReport { seed, passed: suites.iter().all(|s| s.passed), suites })
}

/// Run one suite by number.
pub fn run_suite(id: u8, seed: u64) -> Result<SuiteReport> {
    match id {
        1 => kloosterman_suite(seed),
        2 => group_suite(seed),
        3 => projection_suite(seed),
        4 => bridge_suite(seed),
        5 => schatten_suite(seed),
        6 => amplification_suite(seed),
        7 => counting_suite(),
        8 => character_suite(seed),
        9 => norm_suite(),
        10 => avg_modulus_suite(seed),
        _ => Err(Error::Usage(format!("no suite {id}; suites are 1..={SUITES}"))),
    }
}

/// Identities of `S(m, n; c)` for every `c <= 100` on 200 seeded pairs each.
pub fn kloosterman_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdicts = Vec::new();
    let mut worst_weil: f64 = 0.0;
    for c in 1..=100u64 {
        let span = 3 * c as i64;
        for _ in 0..200 {
            let (m, n) = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
            let report = kloosterman::full_report(m, n, c)?;
            for v in &report.verdicts {
                if v.name == "weil" {
                    worst_weil = worst_weil.max(v.lhs / v.rhs);
                }
            }
            verdicts.extend(report.verdicts.into_iter().map(|v| named(v, &format!("c={c}, m={m}, n={n}"))));
        }
    }
    let notes = vec![format!("largest |S| / Weil envelope: {worst_weil:.6}")];
    Ok(summarize(1, "kloosterman identities", &verdicts, notes))
}

fn named(mut v: Verdict, context: &str) -> Verdict {
    v.name = format!("{}[{context}]", v.name);
    v
}

fn exact(name: String, lhs: u128, rhs: u128) -> Verdict {
    Verdict::close(name, lhs as f64, rhs as f64, 0.0).with_detail(format!("{lhs} vs {rhs}"))
}

/// Group orders, congruence subgroup orders, `|P^1|`, the left action and
/// the orbit bijection.
pub fn group_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdicts = Vec::new();
    for c in 1..=30u64 {
        let modulus = Modulus::new(c)?;
        // Brute force over all quadruples.
        let mut brute = 0u128;
        for a in 0..c {
            for b in 0..c {
                for cc in 0..c {
                    for d in 0..c {
                        if (a * d + c * c - (b * cc) % c) % c == 1 % c {
                            brute += 1;
                        }
                    }
                }
            }
        }
        let elements: Vec<Sl2> = sl2::enumerate_group(c)?.collect();
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        sorted.dedup();
        verdicts.push(exact(format!("sl2_order_brute[c={c}]"), brute, sl2::group_order(&modulus)));
        verdicts.push(exact(format!("sl2_enumeration[c={c}]"), sorted.len() as u128, brute));

        let line = ProjectiveLine::new(c)?;
        for d in modulus.divisors() {
            let kernel = elements.iter().filter(|g| g.is_identity_mod(d)).count() as u128;
            let lazy = sl2::enumerate_gamma(c, d)?.count() as u128;
            verdicts.push(exact(format!("gamma_order[c={c}, d={d}]"), kernel, sl2::gamma_order(c, d)?));
            verdicts.push(exact(format!("gamma_enumeration[c={c}, d={d}]"), lazy, kernel));
            verdicts.push(orbit_bijection(&line, d)?);
        }
        let mut ok = true;
        for _ in 0..100 {
            let (g, h) = (sl2::random_element(c, &mut rng), sl2::random_element(c, &mut rng));
            let u = rng.gen_range(0..line.len());
            ok &= line.act(&g, line.act(&h, u)) == line.act(&g.mul(&h), u);
        }
        verdicts.push(Verdict::close(format!("left_action[c={c}]"), ok as u8 as f64, 1.0, 0.0));
    }
    for c in 1..=60u64 {
        // Primitive pairs counted directly, divided by the number of units.
        let primitive =
            (0..c).flat_map(|x| (0..c).map(move |y| (x, y))).filter(|&(x, y)| arith::gcd3(x, y, c) == 1).count();
        let units = arith::euler_phi(c)? as usize;
        let line = ProjectiveLine::new(c)?;
        verdicts.push(exact(format!("p1_size[c={c}]"), line.len() as u128, (primitive / units) as u128));
        verdicts.push(exact(format!("p1_formula[c={c}]"), sl2::p1_size(&Modulus::new(c)?) as u128, line.len() as u128));
    }
    Ok(summarize(2, "group and projective line", &verdicts, vec![]))
}

/// `Gamma_c(d)`-orbits are the fibres of reduction modulo `d`.
fn orbit_bijection(line: &ProjectiveLine, d: u64) -> Result<Verdict> {
    let c = line.c();
    let orbits = line.gamma_orbits(d)?;
    let reductions = line.reductions(d)?;
    let mut images = Vec::new();
    let mut constant = true;
    for orbit in &orbits {
        let r = reductions[orbit[0]];
        constant &= orbit.iter().all(|&u| reductions[u] == r);
        images.push(r);
    }
    images.sort_unstable();
    images.dedup();
    let target = sl2::p1_size(&Modulus::new(d)?) as usize;
    let ok = constant && images.len() == orbits.len() && orbits.len() == target;
    let transitive = d != 1 || orbits.len() == 1;
    Ok(Verdict::close(format!("orbit_bijection[c={c}, d={d}]"), (ok && transitive) as u8 as f64, 1.0, 0.0)
        .with_detail(format!("{} orbits, |P^1(Z/{d}Z)| = {target}", orbits.len())))
}

/// `max |(P rho(g))[i, j] - (rho(g) P)[i, j]|` for the permutation of `g`.
fn commutator_defect(p: &ComplexMatrix, perm: &[usize]) -> f64 {
    let n = perm.len();
    let mut inverse = vec![0; n];
    for (i, &pi) in perm.iter().enumerate() {
        inverse[pi] = i;
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((p[(i, perm[j])] - p[(inverse[i], j)]).norm());
        }
    }
    worst
}

/// Level projections of one modulus against their group averages, plus
/// idempotence, self-adjointness, commutation with `samples` random
/// elements, traces and (for composite moduli) the CRT factorization.
pub fn projection_checks(rep: &PermRep, samples: usize, rng: &mut impl Rng) -> Result<Vec<Verdict>> {
    let c = rep.c();
    let tol = 1e-9;
    let mut verdicts = Vec::new();
    let perms: Vec<Vec<usize>> = (0..samples).map(|_| rep.line().permutation(&sl2::random_element(c, rng))).collect();
    for d in rep.modulus().divisors() {
        let p = rep.projection_level(d)?;
        let tag = format!("c={c}, d={d}");
        verdicts.push(Verdict::residual(
            format!("projection_average[{tag}]"),
            p.max_abs_diff(&rep.projection_level_by_averaging(d)?),
            tol,
        ));
        verdicts.push(Verdict::residual(format!("projection_idempotent[{tag}]"), (&p * &p).max_abs_diff(&p), tol));
        verdicts.push(Verdict::residual(format!("projection_self_adjoint[{tag}]"), p.hermitian_defect(), tol));
        let worst = perms.iter().map(|g| commutator_defect(&p, g)).fold(0.0, f64::max);
        verdicts.push(Verdict::residual(format!("projection_commutes[{tag}]"), worst, tol));
        let orbits = sl2::p1_size(&Modulus::new(d)?) as f64;
        verdicts.push(Verdict::close(format!("projection_trace[{tag}]"), p.trace().re, orbits, tol));
    }
    let sifted = rep.projection_sifted()?;
    let dim = rep::sifted_dimension(rep.modulus())? as f64;
    verdicts.push(Verdict::close(format!("sifted_trace[c={c}]"), sifted.trace().re, dim, tol));
    verdicts.push(Verdict::residual(
        format!("sifted_idempotent[c={c}]"),
        (&sifted * &sifted).max_abs_diff(&sifted),
        tol,
    ));
    if rep.modulus().factors.len() > 1 {
        let tensor = rep.projection_sifted_tensor()?;
        verdicts.push(Verdict::residual(format!("sifted_crt[c={c}]"), sifted.max_abs_diff(&tensor), tol));
    }
    Ok(verdicts)
}

/// [`projection_checks`] for `c` in `{4, 8, 9, 12, 20, 45}`.
pub fn projection_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdicts = Vec::new();
    for c in [4u64, 8, 9, 12, 20, 45] {
        verdicts.extend(projection_checks(&PermRep::new(c)?, 100, &mut rng)?);
    }
    Ok(summarize(3, "level projections", &verdicts, vec![]))
}

/// The Kloosterman-to-Fourier identity and inequality on seeded `psi`, and
/// the interval variant with two windows.
pub fn bridge_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for c in [12u64, 45, 49] {
        let rep = PermRep::new(c)?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let psi1 = bridge::random_psi(c, &mut rng);
            let psi2 = bridge::random_psi(c, &mut rng);
            verdicts.push(named(bridge::verify_identity_kl_unitary(c, &psi1, &psi2)?, &format!("c={c}")));
            let report = bridge::verify_bridge_with(&rep, &psi1, &psi2)?;
            worst = worst.max(report.kloosterman_norm / report.sifted_bound);
            verdicts.extend(report.verdicts.into_iter().map(|v| named(v, &format!("c={c}"))));
        }
        notes.push(format!("c={c}: largest ||K|| / (c ||F^(rho^o)||) = {worst:.6}"));
    }
    for (c, m, a, r, s) in [(49u64, 7u64, 1i64, 0i64, 0i64), (49, 7, 3, 2, 5), (121, 11, 1, 0, 0), (121, 11, 5, 3, 1)] {
        for window in [SmoothWindow::standard(), SmoothWindow::narrow()] {
            let setup = IntervalSetup { c, a, i: Interval::new(r, m), j: Interval::new(s, m), eps: 0.05 };
            let report = bridge::verify_bridge_intervals(&setup, &window)?;
            let tag = format!("c={c}, a={a}, ramp={}", window.ramp());
            notes.push(format!(
                "{tag}: ||K_I|| = {:.4}, window bound = {:.4}, slack = {:.3e}",
                report.interval_norm, report.window_bound, report.slack
            ));
            verdicts.extend(report.verdicts.into_iter().map(|v| named(v, &tag)));
        }
    }
    Ok(summarize(4, "kloosterman to fourier bridge", &verdicts, notes))
}

/// Schatten powers of `F^(rho_c)` split over an invariant decomposition.
pub fn schatten_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for c in [3u64, 4, 5, 8, 9] {
        let rep = PermRep::new(c)?;
        let decomposition = rep.decompose(false, seed)?;
        notes.push(format!("c={c}: block dimensions {:?}", decomposition.report.dims()));
        for _ in 0..5 {
            let f = GroupFunction::random(c, 12, &mut rng)?;
            let fhat = rep.fourier_coeff(&f)?;
            for q in [2.0, 4.0, 6.0] {
                verdicts
                    .push(named(rep::blockwise_schatten_check(&fhat, &decomposition.blocks, q)?, &format!("c={c}")));
            }
        }
    }
    Ok(summarize(5, "schatten decomposition", &verdicts, notes))
}

/// The amplification inequality over every normal subgroup, block, seeded
/// function and `q`, the equality case and character orthogonality.
pub fn amplification_suite(seed: u64) -> Result<SuiteReport> {
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for spec in [GroupSpec::Sl2(3), GroupSpec::Sl2(4), GroupSpec::Cyclic(8), GroupSpec::Cyclic(12)] {
        let group = FiniteGroup::new(spec)?;
        let blocks = amplify::regular_irreducibles(&group, seed)?;
        let table = amplify::character_table(&blocks);
        verdicts.extend(amplify::character_orthogonality(&group, &table, 1e-5));
        let functions = amplify::seeded_functions(&group, 10, seed);
        let subgroups = group.normal_subgroups()?;
        let mut worst: f64 = 0.0;
        for subgroup in &subgroups {
            for block in &blocks {
                for f in &functions {
                    for q in [2, 4, 6] {
                        let check = amplify::verify_amplification(&group, block, subgroup, f, q)?;
                        worst = worst.max(check.lhs / check.rhs);
                        verdicts.push(check.verdict);
                    }
                }
            }
        }
        for block in &blocks {
            verdicts.push(amplify::amplification_equality(&group, block)?);
        }
        notes.push(format!(
            "{spec:?}: {} blocks, {} characters, {} subgroups, largest lhs/rhs {worst:.6}",
            blocks.len(),
            table.len(),
            subgroups.len()
        ));
    }
    Ok(summarize(6, "amplification", &verdicts, notes))
}

/// Instances for the three-way counting comparison.
pub fn counting_grid() -> Vec<CountInstance> {
    let mut grid = Vec::new();
    for c in [5u64, 7, 9, 12, 16, 25, 30] {
        let units: Vec<i64> = arith::units(c).into_iter().map(|u| u as i64).collect();
        let a = units[units.len() / 2];
        for (q, boxes) in [(2usize, [(3u64, 8u64), (8, 8)]), (4, [(2, 5), (4, 8)]), (6, [(1, 3), (3, 4)])] {
            for (h1, h2) in boxes {
                grid.push(CountInstance::new(c, q, a, 1, h1, h2).expect("valid grid instance"));
            }
        }
    }
    grid
}

/// Brute force, meet-in-the-middle and (for `q = 6`) the congruence route
/// agree; hand values, witnesses and the envelope gates.
pub fn counting_suite() -> Result<SuiteReport> {
    let mut verdicts = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let grid = counting_grid();
    for inst in &grid {
        let tag = format!("c={}, q={}, a={}, H=({}, {})", inst.c, inst.q, inst.a1, inst.h1, inst.h2);
        let brute = counting::count_brute(inst)?;
        let mitm = counting::count_mitm(inst)?;
        verdicts.push(exact(format!("mitm[{tag}]"), mitm as u128, brute as u128));
        if inst.q == 6 {
            let congruence = counting::count_congruence_q6(inst)?;
            verdicts.push(exact(format!("congruence[{tag}]"), congruence as u128, brute as u128));
        }
        if inst.q == 4 || inst.q == 6 {
            let witnesses = counting::witnesses_lower_bound(inst)?;
            verdicts.push(Verdict::le(format!("witnesses[{tag}]"), witnesses.len() as f64, brute as f64));
        }
        let report = counting::check_counting_bounds(inst, brute)?;
        if inst.q != 2 {
            worst_ratio = worst_ratio.max(report.ratio);
        }
        if let Some(v) = report.verdict {
            verdicts.push(named(v, &tag));
        }
    }
    for (c, expected) in [(7u64, 1u64), (3, 9)] {
        let inst = CountInstance::new(c, 2, 1, 1, 3, 3)?;
        let count = counting::count_brute(&inst)?;
        verdicts.push(exact(format!("hand_value[c={c}]"), count as u128, expected as u128));
    }
    let notes = vec![format!("{} instances, largest count / envelope (q = 4, 6) {worst_ratio:.6}", grid.len())];
    Ok(summarize(7, "word counting", &verdicts, notes))
}

/// Squared character sums over `Gamma_c(d)`, fixed-point envelopes on all of
/// `SL_2(Z/cZ)` and the translation sharpness witnesses.
pub fn character_suite(seed: u64) -> Result<SuiteReport> {
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for (c, d, dp, e) in [(9u64, 3u64, 3u64, 1u64), (25, 5, 5, 1), (8, 4, 2, 1), (12, 3, 1, 4), (12, 6, 2, 1)] {
        let rep = PermRep::new(c)?;
        let decomposition = rep.decompose(true, seed)?;
        let report = amplify::squared_char_sum_check(&rep, &decomposition.blocks, d, dp, e)?;
        let least = report.ratios.iter().copied().fold(f64::INFINITY, f64::min);
        notes.push(format!("c={c}, d={d}: smallest ratio {least:.6}"));
        verdicts.extend(report.verdicts);
    }
    for c in [8u64, 9, 12] {
        let rep = PermRep::new(c)?;
        for g in sl2::enumerate_group(c)? {
            verdicts.push(amplify::fixed_point_level_check(&rep, &g)?.verdict);
        }
    }
    for (p, k) in [(2u64, 3u32), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
        for j in 0..k {
            verdicts.push(amplify::translation_sharpness(p, k, j)?);
        }
    }
    Ok(summarize(8, "character sums and fixed points", &verdicts, notes))
}

/// Moduli and lengths of the norm experiment.
pub fn norm_cases() -> Vec<NormCase> {
    [(25u64, 5u64), (49, 7), (121, 11), (169, 13)].iter().map(|&(c, m)| NormCase { c, m, n: m, a: 1 }).collect()
}

/// Exact norms against the unconditional bounds, and the saving trend.
pub fn norm_suite() -> Result<SuiteReport> {
    let sweep = experiments::experiment_norm_sweep(&norm_cases(), experiments::DEFAULT_DELTA)?;
    let mut verdicts = sweep.verdicts.clone();
    verdicts.extend(experiments::saving_trend(&sweep.rows));
    let csv = sweep.to_csv()?;
    verdicts.push(Verdict::close("csv_rows", csv.lines().count() as f64, sweep.rows.len() as f64 + 1.0, 0.0));
    let notes = sweep
        .rows
        .iter()
        .map(|r| format!("c={}: ||K|| = {:.6}, saving exponent {:.6}", r.c, r.norm_exact, r.saving_exponent))
        .collect();
    Ok(summarize(9, "norm experiment", &verdicts, notes))
}

/// Configurations of the averaged-moduli experiment.
pub fn avg_modulus_cases() -> Vec<AvgModulusCase> {
    [
        (25u64, 5u64, 5u64, 1u64, 100u64, 10u64, 10u64),
        (9, 3, 3, 1, 60, 8, 8),
        (12, 4, 1, 3, 120, 12, 10),
        (49, 7, 7, 1, 200, 20, 15),
        (15, 5, 1, 3, 150, 12, 12),
    ]
    .iter()
    .map(|&(q, d, dp, e, big_c, m, n)| AvgModulusCase { q, d, dp, e, big_c, m, n })
    .collect()
}

/// The averaged-moduli sum against its envelope on five configurations.
pub fn avg_modulus_suite(seed: u64) -> Result<SuiteReport> {
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for case in avg_modulus_cases() {
        let r = experiments::experiment_avg_modulus(&case, seed, 1.0)?;
        let tag = format!("q={}, C={}", r.q, r.big_c);
        verdicts.push(Verdict::le(format!("avg_modulus_gate[{tag}]"), r.lhs, 1e3 * r.envelope));
        notes.push(format!("{tag}: {} moduli, lhs {:.6e}, ratio {:.6e}", r.moduli, r.lhs, r.ratio));
    }
    Ok(summarize(10, "averaged moduli", &verdicts, notes))
}
