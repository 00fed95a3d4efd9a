//! Replays the checked-in fuzz corpus, plus byte-level mutations of it,
//! through the parsers on stable. Parsers must return errors, never panic, and
//! whatever they accept must survive a write/read round trip.

use std::fs;
use std::path::PathBuf;

use qaga_core::bench::{read_records_csv, records_to_csv};
use qaga_core::ising::io::{model_from_json, model_to_json, sampleset_from_json};
use qaga_core::IsingModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus {}", dir.display());
    files.iter().map(|p| fs::read(p).unwrap()).collect()
}

fn mutations(seeds: &[Vec<u8>], count: usize) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let alphabet = b"{}[]\",:-+.0123456789eE truefalsn\n";
    (0..count)
        .map(|_| {
            let mut bytes = seeds[rng.gen_range(0..seeds.len())].clone();
            for _ in 0..rng.gen_range(1..4) {
                let at = rng.gen_range(0..=bytes.len());
                match rng.gen_range(0..3) {
                    0 if at < bytes.len() => bytes[at] = alphabet[rng.gen_range(0..alphabet.len())],
                    1 if at < bytes.len() => {
                        bytes.remove(at);
                    }
                    _ => bytes.insert(at, alphabet[rng.gen_range(0..alphabet.len())]),
                }
            }
            bytes
        })
        .collect()
}

fn inputs(target: &str) -> Vec<String> {
    let seeds = corpus(target);
    let mut all = seeds.clone();
    all.extend(mutations(&seeds, 3000));
    all.into_iter()
        .filter_map(|b| String::from_utf8(b).ok())
        .collect()
}

#[test]
fn model_documents() {
    let mut accepted = 0;
    for text in inputs("model_json") {
        if let Ok((model, offset)) = model_from_json(&text) {
            accepted += 1;
            let (again, again_offset) = model_from_json(&model_to_json(&model, offset)).unwrap();
            assert_eq!(again, model, "{text}");
            assert_eq!(again_offset.to_bits(), offset.to_bits());
        }
    }
    assert!(accepted > 0);
}

#[test]
fn sample_set_documents() {
    for text in inputs("sampleset_json") {
        if let Ok(parsed) = sampleset_from_json(&text) {
            let mut model = IsingModel::new();
            if let Some(first) = parsed.samples.first() {
                for l in first.labels() {
                    model.add_variable(l);
                }
            }
            let _ = parsed.validate(&model);
        }
    }
}

#[test]
fn record_files() {
    let mut accepted = 0;
    for text in inputs("records_csv") {
        if let Ok(records) = read_records_csv(&text) {
            accepted += 1;
            let again = read_records_csv(&records_to_csv(&records).unwrap()).unwrap();
            assert_eq!(again.len(), records.len());
        }
    }
    assert!(accepted > 0);
}
