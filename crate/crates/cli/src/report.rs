//! Text and JSON renderings of command output.

use std::fmt::Write;

use rlzap::bench::BenchRow;
use rlzap::io::container::{SectionEntry, TRAILER_LEN};
use rlzap::io::ContainerInfo;
use rlzap::scheme::{ArchiveMeta, SizeReport};
use rlzap::CompressedTarget;
use serde::Serialize;

#[derive(Serialize)]
pub struct CompressSummary {
    pub scheme: &'static str,
    pub alphabet: &'static str,
    pub input_symbols: u64,
    pub input_bytes: u64,
    pub archive_bytes: u64,
    pub payload_bits: u64,
    pub bits_per_symbol: f64,
    pub report: SizeReport,
}

impl CompressSummary {
    pub fn new(archive: &dyn CompressedTarget, input_bytes: u64, archive_bytes: u64) -> Self {
        let report = archive.report();
        CompressSummary {
            scheme: archive.scheme().name(),
            alphabet: archive.meta().alphabet.name(),
            input_symbols: archive.len() as u64,
            input_bytes,
            archive_bytes,
            payload_bits: report.payload_bits(),
            bits_per_symbol: report.bits_per_symbol(),
            report,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<16}{}", "scheme", self.scheme);
        let _ = writeln!(s, "{:<16}{}", "alphabet", self.alphabet);
        let _ = writeln!(s, "{:<16}{} symbols, {} bytes", "input", self.input_symbols, self.input_bytes);
        let _ = writeln!(s, "{:<16}{} bytes", "archive", self.archive_bytes);
        let _ = writeln!(s, "{:<16}{:.4} ({} payload bits)", "bits/symbol", self.bits_per_symbol, self.payload_bits);
        write_phrase_stats(&mut s, &self.report);
        s.push('\n');
        write_components(&mut s, &self.report, None);
        s
    }
}

fn write_phrase_stats(s: &mut String, r: &SizeReport) {
    match (r.explicit_phrases, r.adaptive_phrases) {
        (Some(e), Some(a)) => {
            let _ = writeln!(s, "{:<16}{} ({e} explicit, {a} adaptive)", "phrases", r.phrases);
        }
        _ => {
            let _ = writeln!(s, "{:<16}{}", "phrases", r.phrases);
        }
    }
    let _ = writeln!(s, "{:<16}{}", "literals", r.literals);
}

fn write_components(s: &mut String, r: &SizeReport, sections: Option<&[SectionEntry]>) {
    let _ = write!(s, "{:<18}", "section");
    if sections.is_some() {
        let _ = write!(s, "{:>4}{:>12}", "id", "offset");
    }
    let _ = writeln!(s, "{:>12}{:>16}", "bytes", "payload bits");
    for (k, c) in r.components.iter().enumerate() {
        let _ = write!(s, "{:<18}", c.name);
        if let Some(entry) = sections.and_then(|t| t.get(k)) {
            let _ = write!(s, "{:>4}{:>12}", entry.id, entry.offset);
        }
        let _ = writeln!(s, "{:>12}{:>16}", c.serialized_bytes, c.payload_bits);
    }
    let _ = write!(s, "{:<18}", "total");
    if sections.is_some() {
        let _ = write!(s, "{:>16}", "");
    }
    let _ = writeln!(s, "{:>12}{:>16}", r.serialized_bytes(), r.payload_bits());
}

#[derive(Serialize)]
pub struct InfoSummary {
    pub version: u8,
    pub total_bytes: u64,
    pub header_bytes: u64,
    pub trailer_bytes: u64,
    pub meta: ArchiveMeta,
    pub sections: Vec<SectionEntry>,
    pub bits_per_symbol: f64,
    pub report: SizeReport,
}

impl InfoSummary {
    pub fn new(header: &ContainerInfo, archive: &dyn CompressedTarget) -> Self {
        let report = archive.report();
        InfoSummary {
            version: header.version,
            total_bytes: header.total_len,
            header_bytes: header.header_len,
            trailer_bytes: TRAILER_LEN as u64,
            meta: header.meta,
            sections: header.sections.clone(),
            bits_per_symbol: report.bits_per_symbol(),
            report,
        }
    }

    pub fn to_text(&self) -> String {
        let m = &self.meta;
        let p = &m.params;
        let mut s = String::new();
        let _ = writeln!(s, "{:<16}{}", "format version", self.version);
        let _ = writeln!(s, "{:<16}{}", "scheme", m.scheme.name());
        let _ = writeln!(s, "{:<16}{}", "alphabet", m.alphabet.name());
        let _ = writeln!(
            s,
            "{:<16}{} bytes ({} header, {} sections, {} checksum)",
            "size",
            self.total_bytes,
            self.header_bytes,
            self.report.serialized_bytes(),
            self.trailer_bytes
        );
        let _ = writeln!(s, "{:<16}{:#018x} ({} symbols)", "reference", m.reference.checksum, m.reference.len);
        let _ = writeln!(s, "{:<16}{} symbols", "target", m.target_len);
        let _ = writeln!(
            s,
            "{:<16}delta-bits {} look-ahead {} min-explicit {} max-lit {} sample-interval {} chunk-len {} sigma-bits {}",
            "params",
            p.delta_bits,
            p.look_ahead,
            p.min_explicit_len,
            p.max_lit,
            p.sample_interval,
            p.chunk_len,
            p.sigma_bits
        );
        write_phrase_stats(&mut s, &self.report);
        let _ = writeln!(s, "{:<16}{:.4}", "bits/symbol", self.bits_per_symbol);
        s.push('\n');
        write_components(&mut s, &self.report, Some(&self.sections));
        s
    }
}

#[derive(Serialize)]
pub struct BenchLine {
    pub scheme: &'static str,
    pub archive: String,
    pub target_len: usize,
    pub timings: Vec<BenchRow>,
}

#[derive(Serialize)]
pub struct BenchTable {
    pub queries: u64,
    pub seed: u64,
    pub lengths: Vec<usize>,
    pub rows: Vec<BenchLine>,
}

impl BenchTable {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Extraction times per character (ns), {} symbols per length, seed {}",
            self.queries, self.seed
        );
        let name_w = self.rows.iter().map(|r| r.archive.len()).max().unwrap_or(0).max(7) + 2;
        let _ = write!(s, "{:<8}{:<name_w$}{:>12}", "scheme", "archive", "symbols");
        for l in &self.lengths {
            let _ = write!(s, "{:>10}", l);
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(s, "{:<8}{:<name_w$}{:>12}", r.scheme, r.archive, r.target_len);
            for t in &r.timings {
                let _ = write!(s, "{:>10.1}", t.ns_per_symbol);
            }
            s.push('\n');
        }
        s
    }
}
