//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::process::Command;
use std::time::{Duration, Instant};

use ackn_core::{
    aggregate, analyze, classify_acknowledgments, parse_exchanges, parse_transcript,
    serialize_dialogue, utterance_coverage, ClassifyOptions, Dialogue, DialogueState, PatternId,
    SpeechActTag,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{
    dialogue_from_acts, fixture_path, golden, load_fixture, oracle, random_dialogue, FIXTURES,
};

const SEED: u64 = 0x5eed_ac4e;
const RANDOM_DIALOGUES: usize = 10_000;
const MAX_TURNS: usize = 10;

const LIMIT_GOLDEN: Duration = Duration::from_secs(1);
const LIMIT_PARTITION: Duration = Duration::from_secs(30);
const LIMIT_ORACLE: Duration = Duration::from_secs(10);
const RATIO_TOLERANCE: f64 = 0.0;
const DETERMINISM_RUNS: usize = 3;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn fixtures() -> Vec<Dialogue> {
    FIXTURES.iter().map(|n| load_fixture(n)).collect()
}

fn random_set() -> Vec<Dialogue> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..RANDOM_DIALOGUES)
        .map(|_| random_dialogue(&mut rng, MAX_TURNS))
        .collect()
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn golden_fixtures() -> Outcome {
    let start = Instant::now();
    for name in FIXTURES {
        let d = load_fixture(name);
        let t = parse_exchanges(&d);
        let got: Vec<(String, String, bool)> = classify_acknowledgments(&t, &d)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| (c.class.to_string(), c.pattern.to_string(), c.embedded))
            .collect();
        let want: Vec<(String, String, bool)> = golden(name)
            .into_iter()
            .map(|(c, p, e)| (c.to_string(), p.to_string(), e))
            .collect();
        if got != want {
            return Err(format!("{name}: got {got:?}, want {want:?}"));
        }
    }
    let took = within(start, LIMIT_GOLDEN)?;
    Ok(format!("{} fixtures exact in {took:?}", FIXTURES.len()))
}

fn partition(random: &[Dialogue]) -> Outcome {
    let start = Instant::now();
    let corpus = fixtures();
    let mut utterances = 0;
    for d in corpus.iter().chain(random) {
        let t = parse_exchanges(d);
        let roles = utterance_coverage(&t, d).map_err(|e| format!("{}: {e}", d.id))?;
        if roles.len() != d.utterance_count() {
            return Err(format!(
                "{}: {} roles for {} utterances",
                d.id,
                roles.len(),
                d.utterance_count()
            ));
        }
        utterances += roles.len();
    }
    let took = within(start, LIMIT_PARTITION)?;
    Ok(format!(
        "{} dialogues, {utterances} utterances, 0 violations in {took:?}",
        corpus.len() + random.len()
    ))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for seq in oracle::exhaustive_sequences() {
        for first in 0..2 {
            let turns: Vec<Vec<SpeechActTag>> =
                seq.iter().map(|a| vec![a.parse().unwrap()]).collect();
            let d = dialogue_from_acts(first, &turns);
            let t = parse_exchanges(&d);
            let got: Vec<(usize, String, String, bool)> = classify_acknowledgments(&t, &d)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|c| {
                    (
                        c.site.turn,
                        c.class.to_string(),
                        c.pattern.to_string(),
                        c.embedded,
                    )
                })
                .collect();
            let tagged: Vec<(usize, &str)> = seq
                .iter()
                .enumerate()
                .map(|(i, &a)| ((first + i) % 2, a))
                .collect();
            let want: Vec<(usize, String, String, bool)> = oracle::classify(&tagged)
                .into_iter()
                .map(|(k, c, p, e)| (k, c.to_string(), p, e))
                .collect();
            if got != want {
                return Err(format!("{seq:?} first={first}: got {got:?}, want {want:?}"));
            }
            checked += 1;
        }
    }
    if checked != 240 {
        return Err(format!("checked {checked} dialogues, expected 240"));
    }
    let took = within(start, LIMIT_ORACLE)?;
    Ok(format!("{checked} dialogues, 0 disagreements in {took:?}"))
}

fn predictor(random: &[Dialogue]) -> Outcome {
    let corpus = fixtures();
    let mut predicted = 0;
    for d in corpus.iter().chain(random) {
        let tree = parse_exchanges(d);
        let classes = classify_acknowledgments(&tree, d).map_err(|e| e.to_string())?;
        let [a, b] = d.speakers.clone();
        let mut state = DialogueState::new(a, b).map_err(|e| e.to_string())?;
        for (site, turn, u) in d.sites() {
            let expected = state
                .expected_acts(&turn.speaker)
                .map_err(|e| e.to_string())?;
            if let Some(c) = classes.iter().find(|c| c.site == site) {
                if c.pattern != PatternId::Unclassified {
                    let hit = expected
                        .iter()
                        .any(|e| e.act == SpeechActTag::Ackn && e.class_if_ackn == Some(c.class));
                    if !hit {
                        return Err(format!(
                            "{}: ackn at {site} ({}) not predicted",
                            d.id, c.pattern
                        ));
                    }
                    predicted += 1;
                }
            }
            state.advance(&turn.speaker, u).map_err(|e| e.to_string())?;
        }
        if state.tree() != tree {
            return Err(format!(
                "{}: incremental tree differs from batch parse",
                d.id
            ));
        }
    }
    Ok(format!(
        "{} replays equal batch parse, {predicted} classified acknowledgments predicted",
        corpus.len() + random.len()
    ))
}

fn statistics(random: &[Dialogue]) -> Outcome {
    let analysed: Vec<_> = fixtures()
        .into_iter()
        .map(|d| {
            let (t, c) = analyze(&d, ClassifyOptions::default()).unwrap();
            (d, t, c)
        })
        .collect();
    let r = aggregate(analysed.iter().map(|(d, t, c)| (d, t, c.as_slice())));
    let ratio = r.ackn_per_turn().ok_or("no turns")?;
    if r.turn_count != 14 || r.ackn_count != 7 || (ratio - 0.5).abs() > RATIO_TOLERANCE {
        return Err(format!(
            "fixtures: turns {} ackn {} ratio {ratio:.4}",
            r.turn_count, r.ackn_count
        ));
    }

    let mut corpora = 0;
    for chunk in random.chunks(100) {
        let analysed: Vec<_> = chunk
            .iter()
            .map(|d| {
                let (t, c) = analyze(d, ClassifyOptions::default()).unwrap();
                (d, t, c)
            })
            .collect();
        let r = aggregate(analysed.iter().map(|(d, t, c)| (*d, t, c.as_slice())));
        let classes: usize = r.per_class.values().sum();
        let patterns: usize = r.per_pattern.values().sum();
        if classes != r.ackn_count || patterns != r.ackn_count {
            return Err(format!(
                "corpus {corpora}: per_class {classes}, per_pattern {patterns}, ackn {}",
                r.ackn_count
            ));
        }
        corpora += 1;
    }
    Ok(format!(
        "fixtures turns=14 ackn=7 ackn_per_turn={ratio:.4}; sums hold on {corpora} random corpora"
    ))
}

fn round_trip_and_determinism() -> Outcome {
    for name in FIXTURES {
        let d = load_fixture(name);
        let text = serialize_dialogue(&d);
        let again = parse_transcript(&text).map_err(|e| format!("{name}: {e}"))?;
        if again != d || serialize_dialogue(&again) != text {
            return Err(format!("{name}: round trip differs"));
        }
    }
    for name in FIXTURES {
        let mut outputs = Vec::new();
        for _ in 0..DETERMINISM_RUNS {
            let out = Command::new(env!("CARGO_BIN_EXE_ackn"))
                .arg("analyze")
                .arg("--json")
                .arg(fixture_path(name))
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{name}: analyze exited {:?}", out.status.code()));
            }
            outputs.push(out.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!(
                "{name}: analyze --json output differs between runs"
            ));
        }
    }
    Ok(format!(
        "{} fixtures round-trip; analyze --json byte-identical over {DETERMINISM_RUNS} runs",
        FIXTURES.len()
    ))
}

fn main() {
    let random = random_set();
    let criteria: Vec<(&str, Check)> = vec![
        ("golden fixtures", Box::new(golden_fixtures)),
        ("partition invariant", Box::new(|| partition(&random))),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        (
            "predictor replay and completeness",
            Box::new(|| predictor(&random)),
        ),
        ("statistics identities", Box::new(|| statistics(&random))),
        (
            "round trip and determinism",
            Box::new(round_trip_and_determinism),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
