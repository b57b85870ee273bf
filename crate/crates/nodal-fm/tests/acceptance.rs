use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nodal_fm::cli_io::{emit_dot, parse_torsion};
use nodal_fm::fm::{
    apply_mat2, band_catalog, build_eval_presentation, check_relations, cohomology, default_basis, fm_dual_check,
    fm_forward, parse_word, sl2_matrix, string_catalog, verify_fm, GlueSpec, Topology, VerifyOptions, VerifyReport,
};
use nodal_fm::identify::{identify, Identified};
use nodal_fm::labels::{jordan, BandLabel, ModuleLabel, StringLabel};
use nodal_fm::linalg::{q, qf, Matrix, Q};
use nodal_fm::module::{
    direct_sum, is_isomorphic, label_module, matlis_dual, stability_check, twisted_matlis, FiniteLengthModule,
};
use nodal_fm::sheaf::{BandDesc, SheafDesc, StringDesc, TorsionDesc};

type Verdict = Result<String, Vec<String>>;

const MAX_N: usize = 8;
const BAND_EXAMPLE: [i64; 15] = [1, 0, -1, 0, 1, 0, 0, -1, 0, 0, 0, 1, -1, 0, 0];

fn lambdas() -> [Q; 3] {
    [q(2), q(-1), qf(1, 3)]
}

fn band(d: &[i64], m: usize, l: Q) -> SheafDesc {
    SheafDesc::Band(BandDesc::new(d.to_vec(), m, l).expect("catalog band"))
}

fn string(d: &[i64]) -> SheafDesc {
    SheafDesc::String(StringDesc::new(d.to_vec()).expect("catalog string"))
}

fn band_descs() -> Vec<SheafDesc> {
    let mut out = Vec::new();
    for n in 1..=MAX_N {
        for d in band_catalog(n) {
            for m in 1..=3 {
                for l in lambdas() {
                    out.push(band(&d, m, l));
                }
            }
        }
    }
    out
}

fn string_descs() -> Vec<SheafDesc> {
    (1..=MAX_N).flat_map(string_catalog).map(|d| string(&d)).collect()
}

/// `f` over `items` on all available cores, keeping the order of `items`.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn verdict(label: &str, cases: usize, failures: Vec<String>) -> Verdict {
    if failures.is_empty() {
        Ok(format!("{cases} {label}"))
    } else {
        Err(failures)
    }
}

fn run_verify(descs: &[SheafDesc]) -> (Vec<VerifyReport>, Vec<String>) {
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (d, outcome) in descs.iter().zip(par_map(descs, |d| verify_fm(d, VerifyOptions::default()))) {
        match outcome {
            Ok(r) => {
                if !r.passed() {
                    failures.push(format!("{d}: expected {}, got {:?}", r.expected, r.identified));
                }
                reports.push(r);
            }
            Err(e) => failures.push(format!("{d}: {e}")),
        }
    }
    (reports, failures)
}

fn band_oracle(reports: &mut Vec<VerifyReport>) -> Verdict {
    let descs = band_descs();
    let (rs, mut failures) = run_verify(&descs);
    for r in &rs {
        let SheafDesc::Band(b) = &r.desc else { continue };
        let big_n = b.d().iter().filter(|&&v| v == 1).count();
        let sign = if (b.d().len() + big_n) % 2 == 0 { q(1) } else { q(-1) };
        let want = sign * b.lambda();
        match &r.expected {
            TorsionDesc::SingularBand(l) if *l.lambda() == want && l.m() == b.m() => {}
            other => failures.push(format!("{}: parameter of {other} is not {want}", r.desc)),
        }
    }
    reports.extend(rs);
    verdict("band descriptors", descs.len(), failures)
}

fn string_oracle(reports: &mut Vec<VerifyReport>) -> Verdict {
    let descs = string_descs();
    let (rs, mut failures) = run_verify(&descs);
    reports.extend(rs);
    match fm_forward(&string(&[-1])) {
        Ok(t) if t.to_string() == "Nq[0()0]" => {}
        other => failures.push(format!("S(-1) gave {other:?}")),
    }
    verdict("string descriptors", descs.len(), failures)
}

fn iso_to(t: &TorsionDesc, label: &str) -> Result<(), String> {
    let want = parse_torsion(label).map_err(|e| e.to_string())?;
    let (Some(a), Some(b)) = (t.label(), want.label()) else { return Err(format!("{t} is not at the node")) };
    if is_isomorphic(&label_module(&a), &label_module(&b)).is_true() {
        Ok(())
    } else {
        Err(format!("{t} is not isomorphic to {label}"))
    }
}

fn worked_examples() -> Verdict {
    let mut cases = vec![
        (string(&[-1, 0, 1, 0, 0, -1, 0, 1, -1]), "Nq[2(3,2)1]".to_owned()),
        (string(&[0, -1, 0, 1, 0, 0, -1, 0, 0]), "Nq[0(1,2)(3,2)0]".to_owned()),
    ];
    for m in 1..=2 {
        cases.push((band(&BAND_EXAMPLE, m, q(2)), format!("Mq[(2,2)(3,4)(1,3);m={m};l=2]")));
    }
    let mut failures = Vec::new();
    for (d, want) in &cases {
        let check = fm_forward(d).map_err(|e| e.to_string()).and_then(|t| iso_to(&t, want));
        let oracle = verify_fm(d, VerifyOptions::default()).map_err(|e| e.to_string());
        if let Err(e) = check {
            failures.push(format!("{d}: {e}"));
        }
        match oracle {
            Ok(r) if r.passed() => {}
            Ok(r) => failures.push(format!("{d}: oracle found {:?}", r.identified)),
            Err(e) => failures.push(format!("{d}: {e}")),
        }
    }
    verdict("worked examples", cases.len(), failures)
}

fn duality() -> Verdict {
    let mut failures = Vec::new();
    let descs: Vec<SheafDesc> = band_descs().into_iter().chain(string_descs()).collect();
    for (d, outcome) in descs.iter().zip(par_map(&descs, |d| fm_dual_check(d, 7))) {
        match outcome {
            Ok(r) if r.passed() => {}
            Ok(r) => failures.push(format!("{d}: F(E^v) = {} but {:?}", r.dual_image, r.outcome)),
            Err(e) => failures.push(format!("{d}: {e}")),
        }
    }
    let mut pairs = vec![("Nq[2(3,2)1]".to_owned(), "Nq[0(1,2)(3,2)0]".to_owned())];
    for m in 1..=2 {
        pairs.push((format!("Mq[(2,2)(3,4)(1,3);m={m};l=2]"), format!("Mq[(1,4)(3,2)(2,3);m={m};l=2]")));
    }
    for (a, b) in &pairs {
        let ta = parse_torsion(a).expect("example").label().expect("node");
        let tb = parse_torsion(b).expect("example").label().expect("node");
        if !is_isomorphic(&matlis_dual(&label_module(&ta)), &label_module(&tb)).is_true() {
            failures.push(format!("Matlis dual of {a} is not {b}"));
        }
    }
    verdict("descriptors and 3 quoted dual pairs", descs.len(), failures)
}

fn length_is_rank(reports: &mut Vec<VerifyReport>) -> Verdict {
    let mut failures = Vec::new();
    if reports.is_empty() {
        let descs: Vec<SheafDesc> = band_descs().into_iter().chain(string_descs()).collect();
        let (rs, fails) = run_verify(&descs);
        reports.extend(rs);
        failures.extend(fails);
    }
    let bab = sl2_matrix(&parse_word("BAB").expect("word"));
    for r in reports.iter() {
        let image = r.expected.length() as i64;
        if !r.length_matches || image != r.rank {
            failures.push(format!("{}: rank {} but lengths {} and {image}", r.desc, r.rank, r.length));
        }
        let c = r.desc.charge();
        if c.degree != 0 || apply_mat2(&bab, c.rank, c.degree) != (0, r.rank) {
            failures.push(format!("{}: charge {c:?} does not map to (0, {})", r.desc, r.rank));
        }
    }
    for rel in check_relations() {
        if !rel.holds {
            failures.push(format!("{}: {:?} != {:?}", rel.name, rel.lhs, rel.rhs));
        }
    }
    verdict("descriptors plus sl2 relations", reports.len(), failures)
}

fn random_glue(rng: &mut ChaCha8Rng, m: usize) -> Matrix {
    if rng.gen_bool(0.5) {
        return jordan(m, &qf(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3)));
    }
    loop {
        let mut g = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                g[(i, j)] = q(rng.gen_range(-3..=3));
            }
        }
        if g.is_invertible() {
            return g;
        }
    }
}

fn cohomology_criterion() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0_40);
    let mut failures = Vec::new();
    let trials = 100;
    for _ in 0..trials {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=3);
        let topo = if rng.gen_bool(0.5) { Topology::Cycle } else { Topology::Chain };
        let d: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let g = GlueSpec::new(topo, d, random_glue(&mut rng, m)).expect("invertible glue");
        let c = cohomology(&g);
        if c.h0 as i64 - c.h1 as i64 != g.euler_characteristic() {
            failures.push(format!("{g:?}: h0 {} h1 {} chi {}", c.h0, c.h1, g.euler_characteristic()));
        }
    }
    let mut formula_cases = 0;
    for n in 1..=4 {
        for m in 1..=2 {
            for topo in [Topology::Cycle, Topology::Chain] {
                for _ in 0..4 {
                    let mut d: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                    if d.iter().all(|&v| v == 0) {
                        d[0] = 1;
                    }
                    let sum: i64 = d.iter().sum();
                    let g = GlueSpec::new(topo, d, random_glue(&mut rng, m)).expect("invertible glue");
                    let c = cohomology(&g);
                    let want = match topo {
                        Topology::Cycle => (m as i64 * sum, 0),
                        Topology::Chain => (m as i64 * (1 + sum), 0),
                    };
                    if (c.h0 as i64, c.h1 as i64) != want {
                        failures.push(format!("{g:?}: got ({}, {}), want {want:?}", c.h0, c.h1));
                    }
                    formula_cases += 1;
                }
            }
        }
    }
    verdict(&format!("random specs and {formula_cases} nonnegative ones"), trials, failures)
}

fn random_label(rng: &mut ChaCha8Rng) -> ModuleLabel {
    loop {
        if rng.gen_bool(0.45) {
            let len = rng.gen_range(1..=3);
            let w: Vec<(usize, usize)> = (0..len).map(|_| (rng.gen_range(1..=3), rng.gen_range(1..=3))).collect();
            let num = rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let l = qf(num, rng.gen_range(1..=5));
            if let Ok(b) = BandLabel::new(w, rng.gen_range(1..=2), l) {
                return ModuleLabel::Band(b);
            }
        } else {
            let pairs: Vec<(usize, usize)> =
                (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(1..=3), rng.gen_range(1..=3))).collect();
            if let Ok(s) = StringLabel::new(rng.gen_range(0..=3), pairs, rng.gen_range(0..=3)) {
                return ModuleLabel::String(s);
            }
        }
    }
}

fn scramble(m: &FiniteLengthModule, rng: &mut ChaCha8Rng) -> FiniteLengthModule {
    let n = m.dim();
    loop {
        let mut p = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] = q(rng.gen_range(-2..=2));
            }
        }
        if p.is_invertible() {
            return m.conjugate(&p).expect("invertible");
        }
    }
}

fn classification() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a_17);
    let trials = 200;
    let mut cases = Vec::new();
    for _ in 0..trials {
        let mut labels: Vec<ModuleLabel> = loop {
            let k = rng.gen_range(1..=3);
            let mut ls: Vec<ModuleLabel> = (0..k).map(|_| random_label(&mut rng)).collect();
            if k > 1 && rng.gen_bool(0.15) {
                ls[1] = ls[0].clone();
            }
            if ls.iter().map(ModuleLabel::dim).sum::<usize>() <= 24 {
                break ls;
            }
        };
        let m = scramble(&direct_sum(&labels.iter().map(label_module).collect::<Vec<_>>()), &mut rng);
        labels.sort_by_key(ModuleLabel::sort_key);
        cases.push((labels, m));
    }
    let mut failures = Vec::new();
    for (t, ((labels, _), got)) in cases.iter().zip(par_map(&cases, |(_, m)| identify(m))).enumerate() {
        match got {
            Identified::Labels(got) if got == *labels => {}
            Identified::Labels(got) => failures.push(format!("trial {t}: {labels:?} identified as {got:?}")),
            Identified::Unidentified(d) => failures.push(format!("trial {t}: {labels:?} undecided: {d:?}")),
        }
    }
    verdict("scrambled sums", trials, failures)
}

fn involutions_and_truncation() -> Verdict {
    let descs: Vec<SheafDesc> = band_descs().into_iter().chain(string_descs()).collect();
    let involution = |d: &SheafDesc| -> Result<(), String> {
        let l = fm_forward(d).ok().and_then(|t| t.label()).ok_or_else(|| format!("{d}: no label"))?;
        let m = label_module(&l);
        if !is_isomorphic(&matlis_dual(&matlis_dual(&m)), &m).is_true() {
            return Err(format!("{l}: Matlis dual is not an involution"));
        }
        if !is_isomorphic(&twisted_matlis(&twisted_matlis(&m)), &m).is_true() {
            return Err(format!("{l}: twisted Matlis dual is not an involution"));
        }
        Ok(())
    };
    let mut failures: Vec<String> = par_map(&descs, involution).into_iter().filter_map(Result::err).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e_57);
    let sample: Vec<&SheafDesc> = descs.choose_multiple(&mut rng, 50).collect();
    let truncation = |d: &&SheafDesc| -> Result<(), String> {
        let d: &SheafDesc = d;
        let outcome = (|| -> Result<(), String> {
            let base = verify_fm(d, VerifyOptions::default()).map_err(|e| e.to_string())?;
            let at = |order| verify_fm(d, VerifyOptions { order: Some(order), ..VerifyOptions::default() });
            let a = at(base.order).map_err(|e| e.to_string())?;
            let b = at(base.order + 1).map_err(|e| e.to_string())?;
            if a.identified != b.identified || !a.passed() || !b.passed() {
                return Err(format!("orders {} and {} disagree: {:?} vs {:?}", a.order, b.order, a.identified, b.identified));
            }
            let p = build_eval_presentation(d, default_basis(d), None).map_err(|e| e.to_string())?;
            let s = stability_check(&p);
            if !s.is_stable() {
                return Err(format!("{s:?}"));
            }
            Ok(())
        })();
        outcome.map_err(|e| format!("{d}: {e}"))
    };
    failures.extend(par_map(&sample, truncation).into_iter().filter_map(Result::err));
    verdict(&format!("modules, {} truncation samples", sample.len()), descs.len(), failures)
}

fn dot_counts() -> Verdict {
    let mut failures = Vec::new();
    let cases = [("Nq[2(3,2)1]", 9, 8, 0), ("Mq[(2,2)(3,4)(1,3);m=1;l=2]", 15, 15, 1)];
    for (label, nodes, edges, jordan_edges) in cases {
        let t = parse_torsion(label).expect("example");
        let dot = match emit_dot(&t) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let got_edges = dot.lines().filter(|l| l.contains("->")).count();
        let got_nodes = dot.lines().filter(|l| l.trim_start().starts_with('v') && !l.contains("->")).count();
        let got_j = dot.lines().filter(|l| l.contains("J_")).count();
        if (got_nodes, got_edges, got_j) != (nodes, edges, jordan_edges) {
            failures.push(format!(
                "{label}: {got_nodes} nodes, {got_edges} edges, {got_j} Jordan edges; want {nodes}, {edges}, {jordan_edges}"
            ));
        }
    }
    verdict("diagrams", cases.len(), failures)
}

fn main() -> ExitCode {
    let mut reports = Vec::new();
    let mut criteria: Vec<(&str, Box<dyn FnMut(&mut Vec<VerifyReport>) -> Verdict>)> = vec![
        ("band oracle", Box::new(band_oracle)),
        ("string oracle", Box::new(string_oracle)),
        ("worked examples", Box::new(|_: &mut Vec<VerifyReport>| worked_examples())),
        ("duality", Box::new(|_: &mut Vec<VerifyReport>| duality())),
        ("length equals rank", Box::new(length_is_rank)),
        ("line bundle cohomology", Box::new(|_: &mut Vec<VerifyReport>| cohomology_criterion())),
        ("classification round trip", Box::new(|_: &mut Vec<VerifyReport>| classification())),
        ("involutions and truncation", Box::new(|_: &mut Vec<VerifyReport>| involutions_and_truncation())),
        ("diagram counts", Box::new(|_: &mut Vec<VerifyReport>| dot_counts())),
    ];
    // `cargo test --test acceptance -- 1 7` runs only the listed criteria.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter_mut().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let result = check(&mut reports);
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(summary) => println!("PASS {} {name}: {summary} ({secs:.1}s)", i + 1),
            Err(fails) => {
                failed += 1;
                println!("FAIL {} {name}: {} failures ({secs:.1}s)", i + 1, fails.len());
                for f in fails.iter().take(5) {
                    println!("    {f}");
                }
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
