//! Sweep orchestration and the command implementations behind the `lchi`
//! binary: checkpointed prime-range sweeps, CSV persistence, bound
//! verification, statistics, plot-data emission, and the random-model
//! front end.

use crate::arith::{is_prime, sieve_primes, CharacterTable};
use crate::chartransform::Parity;
use crate::lderiv::{
    logderiv_spectrum, mq_record, EscalationAudit, MqRecord, ESCALATION_THRESHOLD,
};
use crate::scalar::{Dd, Precision, Qf, Real};
use crate::special::cache::{cache_path, read_table, write_table, TripleSplitExt};
use crate::special::SpecialValueTable;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

pub const CACHE_DIR_ENV: &str = "LCHI_CACHE_DIR";

/// One CSV row of sweep output. Column order is fixed:
/// q,m_q,argmin_j,argmin_parity,M_q,ek,m_q_normalized,precision_used,escalated
#[derive(Clone, Debug, PartialEq)]
pub struct MqCsvRow {
    pub q: u64,
    pub m_q: f64,
    pub argmin_j: usize,
    pub argmin_parity: Parity,
    pub big_m_q: f64,
    pub ek: f64,
    pub m_q_normalized: f64,
    pub precision_used: Precision,
    pub escalated: bool,
}

pub const CSV_HEADER: &str =
    "q,m_q,argmin_j,argmin_parity,M_q,ek,m_q_normalized,precision_used,escalated";

impl MqCsvRow {
    pub fn from_record(r: &MqRecord) -> MqCsvRow {
        MqCsvRow {
            q: r.q,
            m_q: r.m_q,
            argmin_j: r.argmin_j,
            argmin_parity: r.argmin_parity,
            big_m_q: r.big_m_q,
            ek: r.ek,
            m_q_normalized: r.m_q_normalized,
            precision_used: r.precision_used,
            escalated: r.escalated,
        }
    }

    /// Shortest-round-trip float formatting, so parse(emit(row)) == row.
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.q,
            self.m_q,
            self.argmin_j,
            self.argmin_parity.as_str(),
            self.big_m_q,
            self.ek,
            self.m_q_normalized,
            self.precision_used.as_str(),
            self.escalated
        )
    }

    pub fn parse_line(line: &str, lineno: usize) -> Result<MqCsvRow> {
        let err = |msg: &str| Error::Malformed {
            line: lineno,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 9 {
            return Err(err(&format!("expected 9 fields, got {}", fields.len())));
        }
        Ok(MqCsvRow {
            q: fields[0].parse().map_err(|_| err("bad q"))?,
            m_q: fields[1].parse().map_err(|_| err("bad m_q"))?,
            argmin_j: fields[2].parse().map_err(|_| err("bad argmin_j"))?,
            argmin_parity: Parity::parse(fields[3]).ok_or_else(|| err("bad parity"))?,
            big_m_q: fields[4].parse().map_err(|_| err("bad M_q"))?,
            ek: fields[5].parse().map_err(|_| err("bad ek"))?,
            m_q_normalized: fields[6].parse().map_err(|_| err("bad m_q_normalized"))?,
            precision_used: Precision::parse(fields[7]).ok_or_else(|| err("bad precision"))?,
            escalated: match fields[8] {
                "true" => true,
                "false" => false,
                _ => return Err(err("bad escalated flag")),
            },
        })
    }
}

pub fn write_csv(path: &Path, rows: &[MqCsvRow]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<MqCsvRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("q,") {
            continue;
        }
        rows.push(MqCsvRow::parse_line(trimmed, i + 1)?);
    }
    Ok(rows)
}

/// Sweep configuration: range, precision policy, workers, and I/O paths.
#[derive(Clone, Debug)]
pub struct SweepManifest {
    pub q_min: u64,
    pub q_max: u64,
    pub precision: Precision,
    /// 0 = rayon default
    pub threads: usize,
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Default)]
pub struct ComputeSummary {
    pub computed: usize,
    pub reused: usize,
    pub failed: Vec<(u64, String)>,
    pub escalated: usize,
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

/// Table construction with the optional on-disk cache.
pub fn build_table_cached<T>(q: u64) -> Result<SpecialValueTable<T>>
where
    T: Real + TripleSplitExt,
{
    if let Some(dir) = cache_dir() {
        let p = cache_path(&dir, q, T::precision());
        if p.exists() {
            if let Ok(t) = read_table::<T>(&p) {
                if t.q == q {
                    return Ok(t);
                }
            }
        }
        let t = SpecialValueTable::<T>::build(q)?;
        std::fs::create_dir_all(&dir)?;
        write_table(&p, &t)?;
        return Ok(t);
    }
    SpecialValueTable::<T>::build(q)
}

fn record_at<T>(q: u64) -> Result<MqRecord>
where
    T: Real + TripleSplitExt,
{
    let ct = CharacterTable::build(q)?;
    let st = build_table_cached::<T>(q)?;
    let spec = logderiv_spectrum(&ct, &st)?;
    mq_record(&spec)
}

/// One sweep unit: extended64 evaluation plus the escalation policy
/// (rebuild at quad113 when m_q < 1e-5), or a straight quad113 run.
pub fn compute_row(q: u64, precision: Precision) -> Result<MqRecord> {
    match precision {
        Precision::Quad113 => record_at::<Qf>(q),
        Precision::Extended64 => {
            let rec = record_at::<Dd>(q)?;
            if rec.m_q < ESCALATION_THRESHOLD {
                let mut quad = record_at::<Qf>(q)?;
                quad.escalated = true;
                quad.audit = Some(EscalationAudit {
                    extended_m_q: rec.m_q,
                    quad_m_q: quad.m_q,
                    unstable: (rec.m_q - quad.m_q).abs() > 1e-8,
                });
                Ok(quad)
            } else {
                Ok(rec)
            }
        }
    }
}

/// Checkpointed sweep over every odd prime in [q_min, q_max]. Rerunning
/// with a complete checkpoint recomputes nothing; the final CSV is sorted
/// by q, deduplicated, and identical for any worker count.
pub fn run_compute(manifest: &SweepManifest) -> Result<ComputeSummary> {
    if manifest.q_min < 3 || manifest.q_min > manifest.q_max {
        return Err(Error::InvalidInput(format!(
            "bad range [{}, {}]",
            manifest.q_min, manifest.q_max
        )));
    }
    let mut done: BTreeMap<u64, MqCsvRow> = BTreeMap::new();
    if let Some(ck) = &manifest.checkpoint {
        if ck.exists() {
            for row in read_csv(ck)? {
                done.insert(row.q, row);
            }
        }
    }
    let primes: Vec<u64> = sieve_primes(manifest.q_max as usize)
        .into_iter()
        .filter(|&p| p >= manifest.q_min.max(3))
        .collect();
    let todo: Vec<u64> = primes.iter().copied().filter(|q| !done.contains_key(q)).collect();
    let reused = primes.len() - todo.len();

    let ck_writer = match &manifest.checkpoint {
        Some(ck) => {
            let f = std::fs::OpenOptions::new().create(true).append(true).open(ck)?;
            Some(Mutex::new(std::io::BufWriter::new(f)))
        }
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(manifest.threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let precision = manifest.precision;
    let results: Vec<(u64, std::result::Result<MqCsvRow, String>)> = pool.install(|| {
        todo.par_iter()
            .map(|&q| {
                let out = compute_row(q, precision)
                    .map(|r| MqCsvRow::from_record(&r))
                    .map_err(|e| e.to_string());
                if let (Some(w), Ok(row)) = (&ck_writer, &out) {
                    let mut guard = w.lock().unwrap();
                    let _ = writeln!(guard, "{}", row.to_line());
                    let _ = guard.flush();
                }
                (q, out)
            })
            .collect()
    });
    drop(ck_writer);

    let mut summary = ComputeSummary {
        reused,
        ..Default::default()
    };
    for (q, res) in results {
        match res {
            Ok(row) => {
                if row.escalated {
                    summary.escalated += 1;
                }
                summary.computed += 1;
                done.insert(q, row);
            }
            Err(msg) => summary.failed.push((q, msg)),
        }
    }
    let rows: Vec<MqCsvRow> = primes
        .iter()
        .filter_map(|q| done.get(q).cloned())
        .collect();
    write_csv(&manifest.out, &rows)?;
    if !summary.failed.is_empty() {
        let side = manifest.out.with_extension("failed");
        let mut w = std::io::BufWriter::new(std::fs::File::create(side)?);
        for (q, msg) in &summary.failed {
            writeln!(w, "{q},{msg}")?;
        }
    }
    Ok(summary)
}

/// Bound-verification report for 21/(200q) < m_q < 5/sqrt(q) (constants
/// configurable).
#[derive(Debug)]
pub struct BoundsReport {
    pub checked: usize,
    pub violations: Vec<(u64, f64, f64, f64)>, // (q, m_q, lower, upper)
    /// smallest m_q/(c1/q) and its q
    pub tightest_lower: Option<(u64, f64)>,
    /// largest m_q/(c2/sqrt(q)) and its q
    pub tightest_upper: Option<(u64, f64)>,
}

pub fn cmd_verify_bounds(
    csv: &Path,
    c1_num: u64,
    c1_den: u64,
    c2: f64,
) -> Result<BoundsReport> {
    let rows = read_csv(csv)?;
    let c1 = c1_num as f64 / c1_den as f64;
    let mut report = BoundsReport {
        checked: 0,
        violations: Vec::new(),
        tightest_lower: None,
        tightest_upper: None,
    };
    for r in &rows {
        let lower = c1 / r.q as f64;
        let upper = c2 / (r.q as f64).sqrt();
        report.checked += 1;
        if !(lower < r.m_q && r.m_q < upper) {
            report.violations.push((r.q, r.m_q, lower, upper));
        }
        let lo_ratio = r.m_q / lower;
        let up_ratio = r.m_q / upper;
        if report.tightest_lower.map_or(true, |(_, v)| lo_ratio < v) {
            report.tightest_lower = Some((r.q, lo_ratio));
        }
        if report.tightest_upper.map_or(true, |(_, v)| up_ratio > v) {
            report.tightest_upper = Some((r.q, up_ratio));
        }
    }
    Ok(report)
}

#[derive(Debug)]
pub struct StatsReport {
    pub rows: usize,
    pub odd_minimizers: usize,
    pub even_minimizers: usize,
    pub escalated: usize,
    pub max_m_q: Option<(u64, f64)>,
    pub min_m_q: Option<(u64, f64)>,
    pub min_normalized: Option<(u64, f64)>,
    pub max_normalized: Option<(u64, f64)>,
}

pub fn cmd_stats(csv: &Path) -> Result<StatsReport> {
    let rows = read_csv(csv)?;
    let mut rep = StatsReport {
        rows: rows.len(),
        odd_minimizers: 0,
        even_minimizers: 0,
        escalated: 0,
        max_m_q: None,
        min_m_q: None,
        min_normalized: None,
        max_normalized: None,
    };
    for r in &rows {
        match r.argmin_parity {
            Parity::Odd => rep.odd_minimizers += 1,
            Parity::Even => rep.even_minimizers += 1,
        }
        if r.escalated {
            rep.escalated += 1;
        }
        if rep.max_m_q.map_or(true, |(_, v)| r.m_q > v) {
            rep.max_m_q = Some((r.q, r.m_q));
        }
        if rep.min_m_q.map_or(true, |(_, v)| r.m_q < v) {
            rep.min_m_q = Some((r.q, r.m_q));
        }
        if rep.min_normalized.map_or(true, |(_, v)| r.m_q_normalized < v) {
            rep.min_normalized = Some((r.q, r.m_q_normalized));
        }
        if rep.max_normalized.map_or(true, |(_, v)| r.m_q_normalized > v) {
            rep.max_normalized = Some((r.q, r.m_q_normalized));
        }
    }
    Ok(rep)
}

/// Per-decade scatter data plus reference-curve overlays, gnuplot-ready.
pub fn cmd_plotdata(csv: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let rows = read_csv(csv)?;
    std::fs::create_dir_all(out_dir)?;
    let mut by_decade: BTreeMap<u32, Vec<&MqCsvRow>> = BTreeMap::new();
    for r in &rows {
        let d = (r.q as f64).log10().floor() as u32;
        by_decade.entry(d).or_default().push(r);
    }
    let mut written = Vec::new();
    for (d, rows) in by_decade {
        let lo = 10u64.pow(d);
        let hi = 10u64.pow(d + 1);
        let tag = format!("{lo}_{hi}");
        let files = [
            ("mq", &tag),
            ("mq_norm", &tag),
            ("curve_5_over_sqrtq", &tag),
            ("const_one", &tag),
        ];
        let mut writers: Vec<std::io::BufWriter<std::fs::File>> = files
            .iter()
            .map(|(stem, tag)| {
                let p = out_dir.join(format!("{stem}_{tag}.dat"));
                written.push(p.clone());
                std::fs::File::create(p).map(std::io::BufWriter::new)
            })
            .collect::<std::io::Result<_>>()?;
        for r in rows {
            writeln!(writers[0], "{} {}", r.q, r.m_q)?;
            writeln!(writers[1], "{} {}", r.q, r.m_q_normalized)?;
            writeln!(writers[2], "{} {}", r.q, 5.0 / (r.q as f64).sqrt())?;
            writeln!(writers[3], "{} 1", r.q)?;
        }
        for w in &mut writers {
            w.flush()?;
        }
    }
    Ok(written)
}

/// Single-q report at quad113 with digit-controlled output; the Table-1
/// reproduction path.
#[derive(Debug)]
pub struct SingleReport {
    pub q: u64,
    pub m_q: String,
    pub argmin_j: usize,
    pub argmin_parity: Parity,
    pub big_m_q: f64,
    pub ek: String,
    pub m_q_normalized: f64,
    pub digits: usize,
    pub achievable_digits: usize,
}

pub fn cmd_single(q: u64, digits: usize) -> Result<SingleReport> {
    if q < 3 || !is_prime(q) {
        return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
    }
    if digits > 30 {
        return Err(Error::InvalidInput("digits capped at 30".into()));
    }
    let ct = CharacterTable::build(q)?;
    let st = build_table_cached::<Qf>(q)?;
    let spec = logderiv_spectrum(&ct, &st)?;
    let rec = mq_record(&spec)?;
    // worst-case propagation of the table tolerance through the character
    // sums and the quotient
    let err_est = st.tol * (q as f64) * 8.0 + 1e-36;
    let achievable = (rec.m_q / err_est).log10().floor().max(0.0) as usize;
    if digits > achievable {
        return Err(Error::Precision(format!(
            "{digits} digits requested but only {achievable} are reliable at quad113 for q = {q}"
        )));
    }
    Ok(SingleReport {
        q,
        m_q: round_decimal(&rec.m_q_dec, digits),
        argmin_j: rec.argmin_j,
        argmin_parity: rec.argmin_parity,
        big_m_q: rec.big_m_q,
        ek: round_decimal(&rec.ek_dec, digits.min(20)),
        m_q_normalized: rec.m_q_normalized,
        digits,
        achievable_digits: achievable,
    })
}

/// Round a plain decimal string (no exponent) to `digits` significant
/// digits.
pub fn round_decimal(s: &str, digits: usize) -> String {
    let f = rug::Float::with_val(192, rug::Float::parse(s).expect("decimal literal"));
    crate::scalar::format_qf(&f, digits)
}
