//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use karekurucu::clueforge::{GenerateOptions, MockTransport, RemoteProvider, RetryPolicy};
use karekurucu::corpus::{filter_keyword, filter_text_record, FilterConfig, KeywordVerdict, RejectRule, TextRecord};
use karekurucu::evalkit::{
    acceptability_rate, corpus_rouge, rouge_l_tokens, rouge_n_tokens, Aggregation, Metric, RatingRecord,
};
use karekurucu::gridengine::{
    generate, number_and_render, recompute, Direction, GenConfig, Layout, Placement, TerminationReason,
};
use karekurucu::interface::{create_session, request_clues, select_and_generate, SessionStatus, SessionStore};
use karekurucu::textnorm::NormalizedWord;

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

fn random_tokens(rng: &mut StdRng) -> Vec<String> {
    let n = rng.gen_range(0..=14);
    (0..n).map(|_| TURKISH_VOCAB.choose(rng).unwrap().to_string()).collect()
}

fn rouge_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut checked = 0;
    for case in 0..200 {
        let c = random_tokens(&mut rng);
        let r = random_tokens(&mut rng);
        for n in [1, 2] {
            let (o, cu, ru) = oracle_ngram(&c, &r, n);
            let (p, rc, f) = oracle_prf(o, cu, ru);
            let got = rouge_n_tokens(&c, &r, n);
            ensure(close(got.precision, p) && close(got.recall, rc) && close(got.f1, f), || {
                format!("case {case} rouge-{n}: got {got:?}, oracle ({p}, {rc}, {f})")
            })?;
        }
        let (p, rc, f) = oracle_prf(oracle_lcs(&c, &r), c.len(), r.len());
        let got = rouge_l_tokens(&c, &r);
        ensure(close(got.precision, p) && close(got.recall, rc) && close(got.f1, f), || {
            format!("case {case} rouge-l: got {got:?}, oracle ({p}, {rc}, {f})")
        })?;
        checked += 1;
    }
    let identity: Vec<(String, String)> = (0..20)
        .map(|_| {
            let mut t = random_tokens(&mut rng);
            t.push("son".into());
            t.push("kelime".into());
            let s = t.join(" ");
            (s.clone(), s)
        })
        .collect();
    let rep = corpus_rouge(&identity, Aggregation::PairMean).map_err(|e| e.to_string())?;
    for m in Metric::ALL {
        ensure(rep.f1_percent(m) == "100.00", || format!("identity {} = {}", m.name(), rep.f1_percent(m)))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} sequence pairs match the oracle; identity 100.00/100.00/100.00; {elapsed:.2?}"))
}

const GRID_WORDS: [&str; 24] = [
    "kedi", "ev", "ada", "araba", "kar", "masa", "elma", "at", "ana", "dere", "ekmek", "kalem", "saat", "taş",
    "ağaç", "iki", "dağ", "arı", "ala", "deniz", "kitap", "kara", "erik", "tam",
];

fn words() -> Vec<NormalizedWord> {
    GRID_WORDS.iter().map(|s| w(s)).collect()
}

fn oracle_counts(layout: &Layout) -> (usize, usize, usize) {
    let g = OracleGrid::build(layout.width(), layout.height(), layout.placements());
    let mut filled = 0;
    let mut crossings = 0;
    for r in 0..layout.height() {
        for c in 0..layout.width() {
            if g.letters[r][c].is_some() {
                filled += 1;
                if g.across[r][c] && g.down[r][c] {
                    crossings += 1;
                }
            }
        }
    }
    (layout.placements().len(), crossings, filled)
}

fn score_consistency() -> Outcome {
    // hand case
    let mut l = Layout::new(5, 5).map_err(|e| e.to_string())?;
    l.apply(Placement::new(w("kedi"), 0, 0, Direction::Across)).map_err(|e| e.to_string())?;
    l.apply(Placement::new(w("ev"), 0, 1, Direction::Down)).map_err(|e| e.to_string())?;
    let s = l.score(0.5);
    ensure(
        (s.words, s.crossings, s.filled) == (2, 1, 5) && s.fill_ratio == 0.2 && s.crossing_density == 0.2 && s.score == 0.1,
        || format!("hand case gave {s:?}"),
    )?;

    let vocab = words();
    let mut rng = StdRng::seed_from_u64(7);
    let mut mutations = 0;
    let mut layouts = 0;
    while mutations < 10_000 {
        let (wd, ht) = (rng.gen_range(3..=9), rng.gen_range(3..=9));
        let mut layout = Layout::new(wd, ht).map_err(|e| e.to_string())?;
        layouts += 1;
        for _ in 0..50 {
            let remove = !layout.is_empty() && rng.gen_bool(0.3);
            if remove {
                let victim = layout.placements().choose(&mut rng).unwrap().word.clone();
                layout.remove(&victim).map_err(|e| e.to_string())?;
            } else {
                let word = vocab.choose(&mut rng).unwrap();
                let legal = layout.legal_placements(word);
                let Some(p) = legal.choose(&mut rng) else { continue };
                layout.apply(p.clone()).map_err(|e| e.to_string())?;
            }
            mutations += 1;
            let inc = layout.score(0.5);
            let full = recompute(&layout, 0.5);
            let (fw, ll, filled) = oracle_counts(&layout);
            let area = (wd * ht) as f64;
            let fr = filled as f64 / area;
            let lr = if filled == 0 { 0.0 } else { ll as f64 / filled as f64 };
            let oracle = (fw as f64 + 0.5 * ll as f64) * fr * lr;
            ensure(
                (inc.words, inc.crossings, inc.filled) == (fw, ll, filled)
                    && close(inc.score, full.score)
                    && close(inc.score, oracle)
                    && close(inc.fill_ratio, fr)
                    && close(inc.crossing_density, lr),
                || format!("mutation {mutations}: incremental {inc:?}, recomputed {full:?}, oracle {oracle}"),
            )?;
            if mutations >= 10_000 {
                break;
            }
        }
    }
    Ok(format!("hand case 0.1 exact; {mutations} mutations over {layouts} layouts agree within 1e-9"))
}

fn legality_oracle() -> Outcome {
    let start = Instant::now();
    let vocab = words();
    let mut rng = StdRng::seed_from_u64(11);
    let mut total_legal = 0;
    for case in 0..500 {
        let (wd, ht) = (rng.gen_range(2..=9), rng.gen_range(2..=9));
        let mut layout = Layout::new(wd, ht).map_err(|e| e.to_string())?;
        let steps = rng.gen_range(0..12);
        for _ in 0..steps {
            if !layout.is_empty() && rng.gen_bool(0.15) {
                let victim = layout.placements().choose(&mut rng).unwrap().word.clone();
                layout.remove(&victim).map_err(|e| e.to_string())?;
                continue;
            }
            let word = vocab.choose(&mut rng).unwrap();
            if let Some(p) = layout.legal_placements(word).choose(&mut rng) {
                layout.apply(p.clone()).map_err(|e| e.to_string())?;
            }
        }
        let query = vocab.choose(&mut rng).unwrap();
        let got: BTreeSet<(usize, usize, Direction)> =
            layout.legal_placements(query).iter().map(|p| (p.row, p.col, p.direction)).collect();
        let expect = brute_force_legal(wd, ht, layout.placements(), query);
        ensure(got == expect, || {
            format!(
                "case {case}: {query} on {wd}x{ht} with {:?}\n  only engine: {:?}\n  only oracle: {:?}",
                layout.placements().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                got.difference(&expect).collect::<Vec<_>>(),
                expect.difference(&got).collect::<Vec<_>>()
            )
        })?;
        total_legal += got.len();
    }
    // empty 5x5 and a four-letter word
    let empty = Layout::new(5, 5).map_err(|e| e.to_string())?;
    let n = empty.legal_placements(&w("kedi")).len();
    ensure(n == 20, || format!("empty 5x5 KEDİ gave {n} placements"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("500 cases equal to brute force ({total_legal} legal placements); {elapsed:.2?}"))
}

fn generation_fuzz() -> Outcome {
    let pairs = fixture_30();
    let clues: BTreeMap<NormalizedWord, String> = pairs.iter().map(|p| (p.answer.clone(), p.clue.clone())).collect();
    let start = Instant::now();
    let mut at_least_five = 0;
    let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
    let runs = 1000;
    for seed in 0..runs {
        let cfg = GenConfig { width: 11, height: 11, seed, max_adjustments: 40, time_budget_ms: 2000, ..Default::default() };
        let g = generate(&pairs, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        validate_layout(&g.layout).map_err(|e| format!("seed {seed}: {e}"))?;
        let doc = number_and_render(&g.layout, &clues).map_err(|e| format!("seed {seed}: {e}"))?;
        validate_document(&doc).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(g.adjustments <= cfg.max_adjustments, || format!("seed {seed}: {} adjustments", g.adjustments))?;
        if g.reason == TerminationReason::MaxAdjustmentsExhausted {
            ensure(g.adjustments == cfg.max_adjustments, || format!("seed {seed}: stopped at {}", g.adjustments))?;
        }
        ensure(g.elapsed <= cfg.time_budget() + g.max_cycle, || {
            format!("seed {seed}: elapsed {:?} > budget + {:?}", g.elapsed, g.max_cycle)
        })?;
        if g.score.words >= 5 {
            at_least_five += 1;
        }
        *reasons.entry(format!("{:?}", g.reason)).or_default() += 1;
    }
    // unreachable word target: runs must stop exactly at the adjustment cap
    for seed in 0..50u64 {
        let cfg = GenConfig { width: 11, height: 11, seed, min_words: 31, max_adjustments: 15, time_budget_ms: 600_000, ..Default::default() };
        let g = generate(&pairs, &cfg).map_err(|e| format!("cap seed {seed}: {e}"))?;
        validate_layout(&g.layout).map_err(|e| format!("cap seed {seed}: {e}"))?;
        ensure(g.reason == TerminationReason::MaxAdjustmentsExhausted && g.adjustments == 15, || {
            format!("cap seed {seed}: {:?} after {}", g.reason, g.adjustments)
        })?;
        *reasons.entry(format!("{:?}", g.reason)).or_default() += 1;
    }
    // clock-bound runs: tiny budgets, effectively unlimited adjustments
    for seed in 0..20u64 {
        let cfg = GenConfig {
            width: 11,
            height: 11,
            seed,
            min_words: 31,
            max_adjustments: usize::MAX / 2,
            time_budget_ms: 1 + seed % 5,
            ..Default::default()
        };
        let g = generate(&pairs, &cfg).map_err(|e| format!("budget seed {seed}: {e}"))?;
        validate_layout(&g.layout).map_err(|e| format!("budget seed {seed}: {e}"))?;
        ensure(g.elapsed <= cfg.time_budget() + g.max_cycle, || {
            format!("budget seed {seed}: elapsed {:?} > {:?} + {:?}", g.elapsed, cfg.time_budget(), g.max_cycle)
        })?;
    }
    let share = at_least_five as f64 / runs as f64;
    ensure(share >= 0.95, || format!("only {:.1}% of runs placed >= 5 words", share * 100.0))?;
    Ok(format!(
        "{runs} seeds valid; {:.1}% placed >= 5 words; stop reasons {reasons:?}; {:.2?}",
        share * 100.0,
        start.elapsed()
    ))
}

fn determinism() -> Outcome {
    let pairs = fixture_30();
    let clues: BTreeMap<NormalizedWord, String> = pairs.iter().map(|p| (p.answer.clone(), p.clue.clone())).collect();
    let mut rng = StdRng::seed_from_u64(99);
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get().clamp(2, 8));
    for trial in 0..50u64 {
        let k = rng.gen_range(8..=30);
        let mut subset = pairs.clone();
        subset.shuffle(&mut rng);
        subset.truncate(k);
        let size = rng.gen_range(9..=13);
        let base = GenConfig {
            width: size,
            height: size,
            seed: rng.gen(),
            max_adjustments: 30,
            time_budget_ms: 600_000,
            ..Default::default()
        };
        let render = |n: usize, words: &[karekurucu::corpus::AnswerCluePair]| -> Result<String, String> {
            let cfg = GenConfig { workers: n, ..base.clone() };
            let g = generate(words, &cfg).map_err(|e| e.to_string())?;
            Ok(number_and_render(&g.layout, &clues).map_err(|e| e.to_string())?.to_json())
        };
        let one = render(1, &subset)?;
        let many = render(workers, &subset)?;
        ensure(one == many, || format!("trial {trial}: 1 vs {workers} workers differ"))?;
        let mut reordered = subset.clone();
        reordered.reverse();
        let again = render(workers, &reordered)?;
        ensure(one == again, || format!("trial {trial}: input order changed the result"))?;
    }
    Ok(format!("50 trials byte-identical for 1 vs {workers} workers"))
}

fn filter_golden() -> Outcome {
    let cfg = FilterConfig::default();
    let suite = keyword_golden();
    ensure(suite.len() == 50, || format!("suite has {} keywords", suite.len()))?;
    for (kw, expect) in &suite {
        let got = match filter_keyword(kw, &cfg) {
            KeywordVerdict::Accept(_) => None,
            KeywordVerdict::Reject(r) => Some(r),
        };
        ensure(got == *expect, || format!("{kw:?}: got {got:?}, expected {expect:?}"))?;
    }
    let record = |words: usize| TextRecord {
        title: "Metin".into(),
        text: vec!["kelime"; words].join(" "),
        keyword: "tarih".into(),
        category: "Tarih".into(),
        views: 10,
        relevance: 1.0,
        url: "https://ornek.org".into(),
    };
    let expected = [
        (49, Err(RejectRule::TooFewWords)),
        (50, Ok(())),
        (982, Ok(())),
        (983, Err(RejectRule::TooManyWords)),
    ];
    for (n, expect) in expected {
        let got = filter_text_record(&record(n), &cfg).map(|_| ());
        ensure(got == expect, || format!("{n} words: got {got:?}, expected {expect:?}"))?;
    }
    Ok("50 keywords and text lengths 49/50/982/983 classified as expected".into())
}

fn acceptability() -> Outcome {
    let ratings: Vec<RatingRecord> = (0..2135)
        .map(|i| RatingRecord {
            candidate_id: format!("c{i}"),
            model_id: if i % 2 == 0 { "a".into() } else { "b".into() },
            accepted: i < 1106,
            rater: "r".into(),
        })
        .collect();
    let rep = acceptability_rate(&ratings).map_err(|e| e.to_string())?;
    ensure(rep.overall.accepted == 1106 && rep.overall.total == 2135, || format!("{:?}", rep.overall))?;
    ensure(rep.overall.display() == "51.8%", || format!("displayed {}", rep.overall.display()))?;
    let weighted: f64 = rep.per_model.iter().map(|r| r.rate() * r.total as f64).sum::<f64>() / 2135.0;
    ensure(close(weighted, rep.overall.rate()), || "per-model rows do not recombine".into())?;
    Ok(format!("1106/2135 -> {}", rep.overall.display()))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let store = SessionStore::open(dir.path()).map_err(|e| e.to_string())?;
    let provider = RemoteProvider::new("mock", Box::new(MockTransport::new(data_dir().join("fixtures"))), "mock")
        .with_retry(RetryPolicy { max_retries: 0, base_delay: Duration::ZERO, max_delay: Duration::ZERO });
    let requests_path = data_dir().join("samples/requests.tsv");
    let text = std::fs::read_to_string(&requests_path).map_err(|e| e.to_string())?;
    let inputs: Vec<_> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            karekurucu::clueforge::ClueRequest::for_text(f[1], w(f[0]), Some(f[2].to_string()), 3)
        })
        .collect();
    ensure(inputs.len() == 3, || format!("{} inputs", inputs.len()))?;
    let s = create_session(&store, inputs, 100).map_err(|e| e.to_string())?;
    let s = request_clues(&store, &s.id, &provider, GenerateOptions::default()).map_err(|e| e.to_string())?;
    ensure(s.candidates.len() == 9 && s.failures.is_empty(), || {
        format!("{} candidates, {} failures", s.candidates.len(), s.failures.len())
    })?;
    let picks: Vec<String> = (0..3).map(|i| format!("c{i}-0")).collect();
    let cfg = GenConfig { width: 11, height: 11, ..Default::default() };
    let s = select_and_generate(&store, &s.id, &picks, &cfg).map_err(|e| e.to_string())?;
    ensure(s.status == SessionStatus::Generated, || format!("status {:?}", s.status))?;
    let doc = s.puzzle.clone().ok_or("no puzzle")?;
    validate_document(&doc)?;
    let json = doc.to_json();
    let parsed = karekurucu::gridengine::PuzzleDocument::from_json(&json).map_err(|e| e.to_string())?;
    ensure(parsed == doc, || "puzzle JSON does not round-trip".into())?;
    let placed: BTreeSet<&str> = doc.answers().into_iter().collect();
    let selected: BTreeSet<&str> = s.selections.keys().map(String::as_str).collect();
    ensure(!placed.is_empty() && placed.is_subset(&selected), || format!("placed {placed:?} vs selected {selected:?}"))?;
    s.check_invariants()?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("3 inputs -> 9 candidates -> {} placed answers in valid puzzle JSON; {elapsed:.2?}", placed.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("ROUGE oracle equivalence", rouge_oracle),
        ("Score-formula consistency", score_consistency),
        ("Placement-legality oracle", legality_oracle),
        ("Generation validity fuzz", generation_fuzz),
        ("Determinism", determinism),
        ("Filter golden suite", filter_golden),
        ("Acceptability arithmetic", acceptability),
        ("End-to-end with mock provider", end_to_end),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", 8 - failed, 8);
    if failed > 0 {
        std::process::exit(1);
    }
}
