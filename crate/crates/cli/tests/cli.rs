use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use rlzap::io::encode_symbols;
use rlzap::synth::{self, MutationRates};
use rlzap::Alphabet;
use serde_json::Value;
use tempfile::TempDir;

const R: &str = "ACATCATTCGAGGACAGGTATAGCTACAGTTAGAA";
const S: &str = "ACATGATTCGACGACAGGTACTAGCTACAGTAGAA";
const SCHEMES: [&str; 4] = ["rlzap", "rlz", "gdc", "relptr"];

fn rlzap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlzap")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = rlzap(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    rlzap(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_slice(&ok(args)).unwrap()
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, bytes: &[u8]) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, bytes).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }

    fn compress(&self, scheme: &str, r: &str, s: &str, alphabet: &str) -> String {
        let out = self.path(&format!("{}.{scheme}", Path::new(s).file_name().unwrap().to_str().unwrap()));
        ok(&[
            "compress", "--scheme", scheme, "--ref", r, "--input", s, "--output", &out, "--alphabet", alphabet,
        ]);
        out
    }
}

fn example(w: &Work) -> (String, String) {
    (w.file("r.txt", R.as_bytes()), w.file("s.txt", S.as_bytes()))
}

#[test]
fn worked_example_rlz_has_eight_phrases() {
    let w = Work::new();
    let (r, s) = example(&w);
    let out = w.path("a");
    let v = json(&["compress", "--scheme", "rlz", "--ref", &r, "--input", &s, "--output", &out, "--json"]);
    assert_eq!(v["report"]["phrases"], 8);
    let text = String::from_utf8(ok(&["compress", "--scheme", "rlz", "--ref", &r, "--input", &s, "--output", &out]))
        .unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["phrases", "8"]), "{text}");
}

#[test]
fn identical_input_is_one_phrase() {
    let w = Work::new();
    let (r, _) = example(&w);
    let out = w.path("a");
    let v = json(&["compress", "--ref", &r, "--input", &r, "--output", &out, "--json"]);
    assert_eq!(v["report"]["phrases"], 1);
    assert_eq!(v["report"]["literals"], 0);
    let info = json(&["info", "--archive", &out, "--json"]);
    assert!(info["report"]["payload_bits"].is_null());
    let payload: u64 = info["report"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["payload_bits"].as_u64().unwrap())
        .sum();
    assert!(payload < 64, "{payload} payload bits");
}

#[test]
fn extract_worked_example() {
    let w = Work::new();
    let (r, s) = example(&w);
    for scheme in SCHEMES {
        let a = w.compress(scheme, &r, &s, "dna");
        assert_eq!(ok(&["extract", "--archive", &a, "--ref", &r, "--pos", "21", "--len", "5"]), b"CTAGC");
        assert_eq!(ok(&["extract", "--archive", &a, "--ref", &r, "--pos", "1", "--len", "35"]), S.as_bytes());
        assert_eq!(ok(&["extract", "--archive", &a, "--ref", &r]), S.as_bytes());
    }
}

#[test]
fn round_trip_through_the_binary() {
    let w = Work::new();
    let mut rng = synth::rng(77);
    for (k, alphabet) in [(0, Alphabet::Dna), (1, Alphabet::Int32), (2, Alphabet::Dna), (3, Alphabet::Int32)] {
        let rates = MutationRates {
            block_substitution: 1e-3,
            ..MutationRates::GENOMIC
        };
        let (r, s) = match alphabet {
            Alphabet::Dna => synth::dna_pair(k, 20_000, &rates),
            Alphabet::Int32 => synth::int_pair(k, 20_000, &rates),
        };
        let rb = encode_symbols(&r, alphabet);
        let sb = encode_symbols(&s, alphabet);
        let rp = w.file(&format!("r{k}"), &rb);
        let sp = w.file(&format!("s{k}"), &sb);
        for scheme in SCHEMES {
            let a = w.compress(scheme, &rp, &sp, alphabet.name());
            assert_eq!(ok(&["extract", "--archive", &a, "--ref", &rp]), sb, "{scheme} {k}");
            for _ in 0..5 {
                let pos = rng.gen_range(0..s.len());
                let len = rng.gen_range(0..=(s.len() - pos).min(500));
                let got = ok(&[
                    "extract",
                    "--archive",
                    &a,
                    "--ref",
                    &rp,
                    "--pos",
                    &(pos + 1).to_string(),
                    "--len",
                    &len.to_string(),
                ]);
                assert_eq!(got, encode_symbols(&s[pos..pos + len], alphabet));
            }
        }
    }
}

#[test]
fn concat_joins_inputs_in_order() {
    let w = Work::new();
    let (r, s) = example(&w);
    let t = w.file("t.txt", b"GATTACA");
    let out = w.path("a");
    assert_eq!(code(&["compress", "--ref", &r, "--input", &s, "--input", &t, "--output", &out]), 2);
    ok(&["compress", "--ref", &r, "--input", &s, "--input", &t, "--output", &out, "--concat"]);
    assert_eq!(ok(&["extract", "--archive", &out, "--ref", &r]), format!("{S}GATTACA").as_bytes());
}

#[test]
fn lowercase_input_is_normalized() {
    let w = Work::new();
    let (r, _) = example(&w);
    let s = w.file("lower.txt", S.to_lowercase().as_bytes());
    let a = w.compress("rlzap", &r, &s, "dna");
    assert_eq!(ok(&["extract", "--archive", &a, "--ref", &r]), S.as_bytes());
}

#[test]
fn exit_codes() {
    let w = Work::new();
    let (r, s) = example(&w);
    let a = w.compress("rlzap", &r, &s, "dna");
    let out = w.path("o");

    // usage
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["compress", "--scheme", "lz78", "--ref", &r, "--input", &s, "--output", &out]), 2);
    assert_eq!(code(&["compress", "--ref", &r, "--input", &s, "--output", &out, "--max-lit", "3"]), 2);
    assert_eq!(code(&["compress", "--ref", &r, "--input", &s, "--output", &out, "--delta-bits", "0"]), 2);

    // ingestion
    let bad = w.file("bad.txt", b"ACGU");
    assert_eq!(code(&["compress", "--ref", &r, "--input", &bad, "--output", &out]), 3);
    let odd = w.file("odd.bin", &[1, 2, 3]);
    assert_eq!(code(&["compress", "--ref", &odd, "--input", &odd, "--output", &out, "--alphabet", "int32"]), 3);

    // format
    let bytes = std::fs::read(&a).unwrap();
    let mut broken = bytes.clone();
    broken[0] = b'Z';
    let magic = w.file("magic", &broken);
    assert_eq!(code(&["info", "--archive", &magic]), 4);
    assert_eq!(code(&["extract", "--archive", &magic, "--ref", &r]), 4);
    let cut = w.file("cut", &bytes[..bytes.len() - 3]);
    assert_eq!(code(&["info", "--archive", &cut]), 4);

    // checksum: corrupted content, and the wrong reference
    let mut flipped = bytes.clone();
    let n = flipped.len();
    flipped[n - 20] ^= 4;
    let flipped = w.file("flipped", &flipped);
    assert_eq!(code(&["extract", "--archive", &flipped, "--ref", &r]), 5);
    let other = w.file("other.txt", b"ACATCATTCGAGGACAGGTATAGCTACAGTTAGAT");
    let out = rlzap(&["extract", "--archive", &a, "--ref", &other]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reference mismatch"));

    // range
    assert_eq!(code(&["extract", "--archive", &a, "--ref", &r, "--pos", "30", "--len", "7"]), 6);
    assert_eq!(code(&["extract", "--archive", &a, "--ref", &r, "--pos", "0", "--len", "1"]), 6);
    assert_eq!(code(&["bench", "--archive", &a, "--ref", &r, "--lengths", "64"]), 6);
}

#[test]
fn info_lists_sections() {
    let w = Work::new();
    let (r, s) = example(&w);
    for scheme in SCHEMES {
        let a = w.compress(scheme, &r, &s, "dna");
        let v = json(&["info", "--archive", &a, "--json"]);
        let sections = v["sections"].as_array().unwrap();
        let components = v["report"]["components"].as_array().unwrap();
        assert_eq!(sections.len(), components.len());
        assert!(sections.iter().all(|e| e["length"].as_u64().unwrap() > 0));
        let body: u64 = sections.iter().map(|e| e["length"].as_u64().unwrap()).sum();
        let total = v["total_bytes"].as_u64().unwrap();
        assert_eq!(body + v["header_bytes"].as_u64().unwrap() + 8, total);
        assert_eq!(total, std::fs::metadata(&a).unwrap().len());

        // Stats match what the library reports for the same input.
        let lib = rlzap::SchemeRegistry::builtin()
            .get(scheme)
            .unwrap()
            .compress(
                &S.bytes().map(|b| b as u32).collect::<Vec<_>>(),
                &rlzap::Reference::from_bytes(R.as_bytes()),
                Alphabet::Dna,
                &rlzap::ParseParams::DNA,
            )
            .unwrap()
            .report();
        assert_eq!(v["report"], serde_json::to_value(&lib).unwrap());

        let text = String::from_utf8(ok(&["info", "--archive", &a])).unwrap();
        for c in components {
            assert!(text.contains(c["name"].as_str().unwrap()), "{text}");
        }
    }
}

fn timing_free(text: &str) -> Vec<String> {
    // Drop the per-length columns; everything else is deterministic.
    text.lines()
        .map(|l| l.split_whitespace().take(3).collect::<Vec<_>>().join(" "))
        .collect()
}

#[test]
fn bench_is_deterministic_and_aligned() {
    let w = Work::new();
    let (r, s) = synth::dna_pair(3, 50_000, &MutationRates::GENOMIC);
    let rp = w.file("r", &encode_symbols(&r, Alphabet::Dna));
    let sp = w.file("s", &encode_symbols(&s, Alphabet::Dna));
    let a = w.compress("rlz", &rp, &sp, "dna");
    let b = w.compress("rlzap", &rp, &sp, "dna");
    let args = [
        "bench", "--archive", &a, "--archive", &b, "--ref", &rp, "--queries", "4096", "--seed", "9",
    ];
    let t1 = String::from_utf8(ok(&args)).unwrap();
    let t2 = String::from_utf8(ok(&args)).unwrap();
    assert_eq!(timing_free(&t1), timing_free(&t2));
    let lines: Vec<&str> = t1.lines().collect();
    assert_eq!(lines.len(), 4, "{t1}");
    assert!(lines[0].starts_with("Extraction times per character"));
    assert!(lines[2].starts_with("rlz ") && lines[3].starts_with("rlzap "));
    // Columns line up: every row is as wide as the header.
    assert_eq!(lines[1].len(), lines[2].len());
    assert_eq!(lines[2].len(), lines[3].len());

    let mut json_args = args.to_vec();
    json_args.push("--json");
    let v = json(&json_args);
    assert_eq!(v["lengths"], serde_json::json!([1, 4, 16, 64, 256, 1024]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["timings"][0]["extractions"], 4096);
    assert_eq!(rows[1]["timings"][5]["extractions"], 4);
}

fn substitution_only_sizes() -> [u64; 4] {
    let w = Work::new();
    let (r, s) = synth::substitution_pair(11, 1 << 20, 0.01, 1);
    let rp = w.file("r", &encode_symbols(&r, Alphabet::Dna));
    let sp = w.file("s", &encode_symbols(&s, Alphabet::Dna));
    let size = |scheme: &str| std::fs::metadata(PathBuf::from(w.compress(scheme, &rp, &sp, "dna"))).unwrap().len();
    ["rlzap", "relptr", "gdc", "rlz"].map(size)
}

#[test]
fn substitution_only_baseline_ordering() {
    let [rlzap, relptr, gdc, rlz] = substitution_only_sizes();
    assert!(relptr < gdc && gdc < rlz, "{relptr} {gdc} {rlz}");
    assert!(rlzap < gdc, "{rlzap} {gdc}");
}

// With no indels there is a single pointer run, so relptr pays only for
// phrase ends and mismatches while rlzap also stores a flag, a delta and a
// literal count per phrase. Measured: rlzap about 13% larger than relptr.
#[test]
#[ignore = "rlzap is larger than relptr when the target has no indels"]
fn substitution_only_full_ordering() {
    let [rlzap, relptr, gdc, rlz] = substitution_only_sizes();
    assert!(rlzap < relptr && relptr < gdc && gdc < rlz, "{rlzap} {relptr} {gdc} {rlz}");
}
