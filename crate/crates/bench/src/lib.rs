//! Seeded synthetic corpora for benchmarks.

use ackn_core::{Dialogue, Speaker, SpeechActTag, Turn, Utterance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` dialogues of `turns` turns each, 1 to 3 utterances per turn.
pub fn corpus(seed: u64, count: usize, turns: usize) -> Vec<Dialogue> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = [Speaker::new("W").unwrap(), Speaker::new("U").unwrap()];
    (0..count)
        .map(|i| {
            let turns = (0..turns)
                .map(|t| {
                    let n = rng.gen_range(1..=3);
                    let utterances = (0..n)
                        .map(|_| Utterance::new(*SpeechActTag::ALL.choose(&mut rng).unwrap()))
                        .collect();
                    Turn::new(pair[t % 2].clone(), utterances)
                })
                .collect();
            Dialogue::new(format!("bench-{i}"), pair.clone(), turns)
        })
        .collect()
}
