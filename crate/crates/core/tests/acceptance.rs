//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fail.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use tfcalc::closedform::{closed_tf, e_sequence};
use tfcalc::consistency::{
    crosscheck, obstruction_search, sample_rep, verify_witness, CheckConfig, CheckReport, Obstruction, ObstructionProblem,
};
use tfcalc::hotfss::{e1_page, tf};
use tfcalc::mackey::{evaluate_level, lewis_diagram, mackey_e1, warmup_tables, MackeySymbol};
use tfcalc::{theta, CyclicIdeal, GradedGroup, GoldMonomial, PrismKind, PrismScalar, Shift, VirtualRep};

use PrismKind::{Crystalline, Transversal};

type Outcome = Result<String, String>;

fn rep(s: &str) -> VirtualRep {
    s.parse().unwrap()
}

fn odd(s: &str) -> VirtualRep {
    rep(s).with_shift(Shift::MinusOne)
}

fn phis(f: &[(u32, u64)]) -> PrismScalar {
    f.iter().fold(PrismScalar::one(Transversal), |acc, (i, e)| acc.mul(&PrismScalar::phi(*i, *e)).unwrap())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `Σ^{-1} ϑ_r`
fn s_theta(alpha: &VirtualRep, r: i64) -> GoldMonomial {
    theta(alpha, r).unwrap().with_suspension(Shift::MinusOne)
}

fn expect_group(got: &GradedGroup, want: Vec<(CyclicIdeal, GoldMonomial)>, what: &str) -> Result<(), String> {
    let mut want = want;
    want.sort();
    ensure(got.multiset() == want, || format!("{what}: got {got}, want {want:?}"))
}

fn median_time(mut f: impl FnMut()) -> Duration {
    f();
    let mut t: Vec<Duration> = (0..5)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed()
        })
        .collect();
    t.sort();
    t[2]
}

fn criterion_1() -> Outcome {
    let a = rep("(1,1,-1,2,-1,1;0)");
    let b = rep("(2,1,-1,1,0,2;-1)");
    let even_a = GoldMonomial::u(0, 1).times_u(1, 1).times_a(2, 1).times_u(3, 2).times_a(4, 1).times_u(5, 1);
    let cases = vec![
        (a.clone(), vec![(CyclicIdeal::zero(), even_a)]),
        (
            odd("(1,1,-1,2,-1,1;0)"),
            vec![
                (CyclicIdeal::pair(phis(&[(0, 1), (1, 1)]), phis(&[(2, 1), (4, 1)])), s_theta(&a, 1)),
                (CyclicIdeal::pair(phis(&[(3, 2)]), phis(&[(4, 1)])), s_theta(&a, 3)),
            ],
        ),
        (
            odd("(2,1,-1,1,0,2;-1)"),
            vec![
                (CyclicIdeal::principal(phis(&[(0, 2), (1, 1)])), s_theta(&b, 1)),
                (CyclicIdeal::principal(phis(&[(3, 1), (5, 2)])), s_theta(&b, 5)),
            ],
        ),
    ];
    let mut slowest = Duration::ZERO;
    for (alpha, want) in cases {
        let closed = closed_tf(&alpha, Transversal).map_err(|e| e.to_string())?;
        let engine = tf(&alpha, Transversal).map_err(|e| e.to_string())?;
        expect_group(&closed, want.clone(), &format!("closed form at {alpha}"))?;
        expect_group(&engine, want, &format!("engine at {alpha}"))?;
        for t in [
            median_time(|| drop(closed_tf(&alpha, Transversal))),
            median_time(|| drop(tf(&alpha, Transversal))),
        ] {
            slowest = slowest.max(t);
        }
    }
    ensure(slowest < Duration::from_millis(10), || format!("slowest call {slowest:?} >= 10ms"))?;
    Ok(format!("3 groups exact in both paths, slowest call {slowest:?}"))
}

fn criterion_2() -> Outcome {
    let a = rep("(1,1,-1,2,-1,1;0)");
    let b = rep("(2,-1,2,-1,1;-1)");
    let g = rep("(2,1,-1,1;-1)");
    let e = e_sequence(&a).map_err(|e| e.to_string())?;
    ensure(e.e == vec![0, 1, -1, 1, -1, 0], || format!("e sequence {:?}", e.e))?;
    let p = |k| CyclicIdeal::principal(PrismScalar::p(k));
    let even_a = GoldMonomial::u(0, 1)
        .times_a(1, -1)
        .times_a(2, 1)
        .times_u(3, 1)
        .times_a(3, -1)
        .times_a(4, 1)
        .times_u(5, 1);
    let cases = vec![
        (a.clone(), vec![(CyclicIdeal::zero(), even_a)]),
        (odd("(1,1,-1,2,-1,1;0)"), vec![(p(2), s_theta(&a, 3))]),
        (odd("(2,-1,2,-1,1;-1)"), vec![(p(3), s_theta(&b, 4)), (p(2), s_theta(&b, 2))]),
        (odd("(2,1,-1,1;-1)"), vec![(p(1), s_theta(&g, 3)), (p(3), s_theta(&g, 1))]),
    ];
    for (alpha, want) in cases {
        let closed = closed_tf(&alpha, Crystalline).map_err(|e| e.to_string())?;
        let engine = tf(&alpha, Crystalline).map_err(|e| e.to_string())?;
        expect_group(&closed, want.clone(), &format!("closed form at {alpha}"))?;
        expect_group(&engine, want, &format!("engine at {alpha}"))?;
    }
    Ok("e sequence and 4 groups exact in both paths".into())
}

fn criterion_3() -> Outcome {
    let mut cells = 0;
    for f in &common::FIGURES {
        let (text, latex) = common::render_figure(f);
        common::check_golden(f.stem, "txt", &text)?;
        common::check_golden(f.stem, "tex", &latex)?;
        cells += text.lines().filter(|l| l.contains('⟨')).count();
    }
    Ok(format!("8 figures, {cells} cells and links match text and LaTeX goldens"))
}

fn big_config() -> CheckConfig {
    CheckConfig {
        samples: 10_000,
        seed: 2024,
        max_len: 8,
        max_coeff: 5,
        max_dinf: 3,
        kinds: vec![Transversal, Crystalline],
    }
}

fn criterion_4(report: &CheckReport, elapsed: Duration) -> Outcome {
    let a = &report.agreement;
    ensure(a.checked == 40_000, || format!("expected 40000 comparisons, ran {}", a.checked))?;
    ensure(a.failed == 0, || {
        let first: Vec<_> = report.mismatches.iter().filter(|m| m.check == "agreement").take(3).collect();
        format!("{} mismatches, first {first:?}", a.failed)
    })?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} comparisons, 0 mismatches, {elapsed:.2?}", a.checked))
}

fn criterion_5(report: &CheckReport) -> Outcome {
    let d = &report.degree;
    ensure(d.checked > 0 && d.failed == 0, || format!("{} of {} summands off degree", d.failed, d.checked))?;
    Ok(format!("{} summands, all in the requested degree", d.checked))
}

fn annihilators(g: &GradedGroup) -> Vec<CyclicIdeal> {
    let mut v = g.annihilators();
    v.sort();
    v
}

fn renamed(g: &GradedGroup, from: usize, to: usize) -> Vec<(CyclicIdeal, GoldMonomial)> {
    let mut v: Vec<_> = g
        .summands()
        .iter()
        .map(|s| {
            let mut m = s.generator.clone();
            for n in from..to {
                m = m.canonicalize_padding(n as i32 - 1);
            }
            (s.ideal.clone(), m)
        })
        .collect();
    v.sort();
    v
}

fn criterion_6() -> Outcome {
    let cfg = CheckConfig {
        samples: 1000,
        seed: 6,
        ..CheckConfig::default()
    };
    let mut compared = 0;
    for i in 0..cfg.samples {
        let base = sample_rep(&cfg, i);
        let extra = 1 + i % 3;
        for kind in [Transversal, Crystalline] {
            for shift in [Shift::Zero, Shift::MinusOne] {
                let alpha = base.clone().with_shift(shift);
                let padded = base.pad(base.len() + extra).unwrap().with_shift(shift);
                let g = tf(&alpha, kind).map_err(|e| e.to_string())?;
                let h = tf(&padded, kind).map_err(|e| e.to_string())?;
                ensure(annihilators(&g) == annihilators(&h), || format!("{alpha} vs {padded} ({kind:?}): {g} vs {h}"))?;
                ensure(renamed(&g, base.len(), padded.len()) == h.multiset(), || {
                    format!("names differ at {alpha} vs {padded} ({kind:?}): {g} vs {h}")
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("1000 representations, {compared} padded comparisons, 0 exceptions"))
}

fn criterion_7() -> Outcome {
    let cfg = CheckConfig {
        seed: 7,
        ..CheckConfig::default()
    };
    let (mut found, mut i) = (0, 0);
    while found < 1000 {
        let base = sample_rep(&cfg, i);
        i += 1;
        if base.d_inf() >= 0 {
            continue;
        }
        found += 1;
        let g = tf(&base.clone().with_shift(Shift::MinusOne), Crystalline).map_err(|e| e.to_string())?;
        let want: u64 = base.dims().iter().filter(|d| **d > 0).map(|d| *d as u64).sum();
        ensure(g.p_length() == Some(want), || format!("{base}: {g} has length {:?}, want {want}", g.p_length()))?;
    }
    Ok(format!("1000 representations with d_inf < 0 (of {i} drawn), 0 exceptions"))
}

/// `∏_{lo ≤ i ≤ hi} φ^i(ξ)` as text, `None` if empty.
fn phi_run(lo: u32, hi: i64) -> Option<String> {
    let parts: Vec<String> = (lo as i64..=hi)
        .map(|i| match i {
            0 => "xi".to_string(),
            1 => "phi(xi)".to_string(),
            _ => format!("phi^{i}(xi)"),
        })
        .collect();
    match parts.len() {
        0 => None,
        _ => Some(parts.join(" ")),
    }
}

fn quotient(s: Option<String>) -> String {
    match s {
        None => "0".into(),
        Some(s) if s.contains(' ') => format!("A/({s})"),
        Some(s) => format!("A/{s}"),
    }
}

fn pow(base: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    }
}

fn mono(parts: &[(&str, i64)], suspended: bool) -> String {
    let mut v: Vec<String> = Vec::new();
    if suspended {
        v.push("S^-1".into());
    }
    v.extend(parts.iter().map(|(b, e)| pow(b, *e)).filter(|s| !s.is_empty()));
    if v.is_empty() {
        "1".into()
    } else {
        v.join(" ")
    }
}

fn p_pow(e: i64) -> Option<String> {
    (e > 0).then(|| pow("p", e))
}

fn criterion_8() -> Outcome {
    // Lewis diagrams of the four hieroglyphs
    let lewis = |sym: MackeySymbol| -> Result<(String, String, String, String), String> {
        let d = lewis_diagram(&sym).map_err(|e| e.to_string())?;
        let label = |s: &Option<PrismScalar>| s.as_ref().map_or(String::new(), |s| s.to_string());
        let ideal = |v: &tfcalc::mackey::LevelValue| v.ideal().map_or("?".to_string(), |i| if i.is_unit() { "0".into() } else { i.to_string() });
        Ok((ideal(&d.top), ideal(&d.bottom), label(&d.res), label(&d.tr)))
    };
    let s = |a: &str, b: &str, c: &str, d: &str| (a.to_string(), b.to_string(), c.to_string(), d.to_string());
    let figure = [
        (MackeySymbol::W, s("A/(xi phi(xi))", "A/xi", "1", "phi(xi)")),
        (MackeySymbol::Tr(0), s("A/xi", "A/xi", "p", "1")),
        (MackeySymbol::Phi(0), s("A/phi(xi)", "0", "", "")),
        (MackeySymbol::phi_quot(0, PrismScalar::phi(0, 3)), s("A/(phi(xi), xi^3)", "0", "", "")),
    ];
    for (sym, want) in figure {
        let got = lewis(sym.clone())?;
        ensure(got == want, || format!("Lewis diagram of {sym}: {got:?}, want {want:?}"))?;
    }

    // level-n tables
    let mut tables = 0;
    for d0 in -3i64..=3 {
        for dinf in -2i64..=2 {
            let alpha = VirtualRep::new(vec![d0], dinf).unwrap();
            let u = mono(&[("u_0", d0), ("u_l0", dinf)], false);
            let a = mono(&[("a_0", -d0), ("u_l0", dinf)], false);
            let sa = mono(&[("a_0", -d0), ("u_l0", dinf)], true);
            for n in 0..=4i64 {
                for kind in [Transversal, Crystalline] {
                    let t = warmup_tables(&alpha, n as u32, kind).map_err(|e| e.to_string())?;
                    let cell = |m: String, g: &str| if m == "0" { "0".to_string() } else { format!("{m}⟨{g}⟩") };
                    let (hf, tate, even, oddg) = match kind {
                        Transversal => {
                            let fq = phi_run(1, n);
                            let hf = if d0 >= 0 { cell(quotient(phi_run(0, n)), &u) } else { cell(quotient(fq.clone()), &a) };
                            let (even, oddg) = if d0 < 0 {
                                ("0".to_string(), "0".to_string())
                            } else {
                                let coeff = fq.clone().map_or(u.clone(), |f| format!("{f} {u}"));
                                let o = match (&fq, d0) {
                                    (Some(f), d) if d > 0 => {
                                        cell(format!("A/({f}, {})", pow("xi", d)), &sa)
                                    }
                                    _ => "0".into(),
                                };
                                (format!("A/xi⟨{coeff}⟩"), o)
                            };
                            (hf, cell(quotient(fq), &a), even, oddg)
                        }
                        Crystalline => {
                            let hf = if d0 >= 0 { cell(quotient(p_pow(n + 1)), &u) } else { cell(quotient(p_pow(n)), &a) };
                            let (even, oddg) = if d0 < 0 {
                                ("0".to_string(), "0".to_string())
                            } else {
                                let k = n.min(d0);
                                let coeff = p_pow(n - k).map_or(u.clone(), |c| format!("{c} {u}"));
                                (format!("{}⟨{coeff}⟩", quotient(p_pow(k + 1))), cell(quotient(p_pow(k)), &sa))
                            };
                            (hf, cell(quotient(p_pow(n)), &a), even, oddg)
                        }
                    };
                    let got = (
                        t.homotopy_fixed.to_string(),
                        t.tate.to_string(),
                        t.orbits_even.to_string(),
                        t.orbits_odd.to_string(),
                    );
                    let want = (hf, tate, even, oddg);
                    ensure(got == want, || format!("({d0};{dinf}) n={n} {kind:?}: got {got:?}, want {want:?}"))?;
                    tables += 1;
                }
            }
        }
    }

    // crystalline level values used by the tables
    for n in 0..=4u32 {
        let w = evaluate_level(&MackeySymbol::W, n, Crystalline);
        ensure(w.ideal() == Some(&CyclicIdeal::principal(PrismScalar::p(n as u64 + 1))), || format!("W at level {n}: {w}"))?;
    }

    // E¹ with the Mackey structure erased
    let cfg = CheckConfig {
        samples: 1000,
        seed: 8,
        ..CheckConfig::default()
    };
    for i in 0..cfg.samples {
        let alpha = sample_rep(&cfg, i);
        for kind in [Transversal, Crystalline] {
            let m = mackey_e1(&alpha, kind).map_err(|e| e.to_string())?;
            let h = e1_page(&alpha, kind).map_err(|e| e.to_string())?;
            let want: BTreeMap<usize, (CyclicIdeal, GoldMonomial)> =
                h.torsion.iter().map(|(f, s)| (*f, (s.ideal.clone(), s.generator.clone()))).collect();
            ensure(m.erased_torsion() == want, || format!("{alpha} ({kind:?}): Mackey E1 torsion differs"))?;
        }
    }
    Ok(format!("4 Lewis diagrams, {tables} level tables, 1000 erased E1 pages agree"))
}

fn criterion_9() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut infeasible = 0;
    let mut run = |prob: &ObstructionProblem| -> Result<Obstruction, String> {
        let start = Instant::now();
        let r = obstruction_search(prob).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        Ok(r)
    };
    for p in [2u64, 3] {
        for s in 0..4u32 {
            let source = vec![2 + (s & 1), 2 + (s >> 1)];
            for t in 0..8u32 {
                let target = vec![2 + (t & 1), 2 + ((t >> 1) & 1), 2 + (t >> 2)];
                let prob = ObstructionProblem::uniform(p, source.clone(), target.clone(), 1);
                let r = run(&prob)?;
                ensure(matches!(r, Obstruction::Infeasible { .. }), || {
                    format!("p={p} source {source:?} target {target:?}: unexpected {r:?}")
                })?;
                infeasible += 1;
            }
        }
    }
    let mut witnesses = 0;
    for p in [2u64, 3] {
        for d0 in 1..=3u32 {
            for d4 in 1..=3u32 {
                let prob = ObstructionProblem::uniform(p, vec![2, d0 + d4], vec![d0, 2, d4], 1);
                let r = run(&prob)?;
                match (&r, d0 == 1 || d4 == 1) {
                    (Obstruction::Witness { witness, .. }, true) => {
                        ensure(verify_witness(&prob, witness), || format!("bad witness for {prob:?}"))?;
                        witnesses += 1;
                    }
                    (Obstruction::Infeasible { .. }, false) => infeasible += 1,
                    _ => return Err(format!("p={p} d0={d0} d4={d4}: unexpected {r:?}")),
                }
            }
        }
    }
    ensure(slowest < Duration::from_secs(10), || format!("slowest search {slowest:?}"))?;
    Ok(format!("{infeasible} infeasible, {witnesses} witnesses, slowest search {slowest:.2?}"))
}

fn criterion_10() -> Outcome {
    let cfg = CheckConfig {
        samples: 1000,
        seed: 10,
        ..CheckConfig::default()
    };
    for i in 0..cfg.samples {
        let alpha = sample_rep(&cfg, i);
        let t = e1_page(&alpha, Transversal).map_err(|e| e.to_string())?;
        let c = e1_page(&alpha, Crystalline).map_err(|e| e.to_string())?;
        let spec = |s: &tfcalc::hotfss::Summand| (s.filtration, s.ideal.specialize(), s.generator.clone());
        let want: Vec<_> = t.torsion.values().map(spec).collect();
        let got: Vec<_> = c.torsion.values().map(|s| (s.filtration, s.ideal.clone(), s.generator.clone())).collect();
        ensure(want == got, || format!("{alpha}: torsion differs"))?;
        ensure(t.free.as_ref().map(spec) == c.free.as_ref().map(|s| (s.filtration, s.ideal.clone(), s.generator.clone())), || {
            format!("{alpha}: free row differs")
        })?;
    }
    Ok("1000 E1 pages agree after specialization".into())
}

fn main() {
    let start = Instant::now();
    let report = crosscheck(&big_config());
    let elapsed = start.elapsed();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "transversal theorem examples", criterion_1()),
        (2, "crystalline theorem examples", criterion_2()),
        (3, "figure reproduction", criterion_3()),
        (
            4,
            "closed form against spectral sequence",
            report.as_ref().map_err(|e| e.to_string()).and_then(|r| criterion_4(r, elapsed)),
        ),
        (5, "degree invariant", report.as_ref().map_err(|e| e.to_string()).and_then(criterion_5)),
        (6, "padding invariance", criterion_6()),
        (7, "crystalline length conservation", criterion_7()),
        (8, "Mackey and warm-up goldens", criterion_8()),
        (9, "obstruction search", criterion_9()),
        (10, "E1 specialization", criterion_10()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
