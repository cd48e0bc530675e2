//! CSV and JSON output for experiment rows, plus the per-cell winner summary.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use colorfilt_core::metrics::{PEAK, SR_TILE};
use colorfilt_core::noise::RNG_ALGORITHM;
use colorfilt_core::{Approach, ColorSpace, FilterKind};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::{BenchResult, ExperimentConfig, NoiseId};

pub const CSV_HEADER: [&str; 11] = ["image", "space", "filter", "approach", "noise", "seed", "psnr_db", "sr", "rsc", "ms", "error"];

/// Format with six significant digits, `%g` style; infinity prints as `inf`.
pub fn sig6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // the exponent after rounding to six digits decides the notation
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_default()
}

/// Write rows as CSV. The `ms` column stays empty unless `with_timing`.
pub fn emit_csv<W: Write>(rows: &[BenchResult], with_timing: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.image.clone(),
            r.space.to_string(),
            r.filter.to_string(),
            r.approach.to_string(),
            r.noise.to_string(),
            r.seed.to_string(),
            opt(r.metrics.psnr),
            opt(r.metrics.sr),
            opt(r.metrics.rsc),
            if with_timing { sig6(r.ms) } else { String::new() },
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e.into(),
        other => crate::Error::Config(format!("csv: {other:?}")),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParameter {
    pub noise: NoiseId,
    pub model: String,
    pub parameter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub rng: String,
    pub psnr_peak: f64,
    pub sr_tile: usize,
    pub rsc_segment: usize,
    pub noise_parameters: Vec<NoiseParameter>,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub meta: RunMeta,
    pub results: Vec<BenchResult>,
}

impl RunReport {
    pub fn new(config: &ExperimentConfig, results: Vec<BenchResult>) -> Self {
        let noise_parameters = NoiseId::TABLE
            .into_iter()
            .filter_map(|id| {
                let spec = config.noise_spec(id, 0)?;
                Some(NoiseParameter { noise: id, model: spec.kind.to_string(), parameter: spec.parameter })
            })
            .collect();
        RunReport {
            meta: RunMeta {
                rng: RNG_ALGORITHM.into(),
                psnr_peak: PEAK,
                sr_tile: SR_TILE,
                rsc_segment: config.rsc_segment,
                noise_parameters,
                config: config.clone(),
            },
            results,
        }
    }
}

pub fn emit_json<W: Write>(config: &ExperimentConfig, rows: &[BenchResult], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &RunReport::new(config, rows.to_vec()))?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Psnr,
    Sr,
    Rsc,
}

impl Metric {
    /// Whether larger values are better.
    pub const fn higher_is_better(self) -> bool {
        !matches!(self, Metric::Sr)
    }

    fn of(self, row: &BenchResult) -> Option<f64> {
        match self {
            Metric::Psnr => row.metrics.psnr,
            Metric::Sr => row.metrics.sr,
            Metric::Rsc => row.metrics.rsc,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Psnr => "psnr",
            Metric::Sr => "sr",
            Metric::Rsc => "rsc",
        })
    }
}

/// Mean of one metric per approach for a (filter, noise, space) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub filter: FilterKind,
    pub noise: NoiseId,
    pub space: ColorSpace,
    pub metric: Metric,
    pub means: BTreeMap<Approach, f64>,
    pub winner: Approach,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cells: Vec<CellSummary>,
    /// For each metric, the fraction of cells each approach wins.
    pub win_fractions: BTreeMap<Metric, BTreeMap<Approach, f64>>,
}

impl Summary {
    pub fn winner(&self, filter: FilterKind, noise: NoiseId, space: ColorSpace, metric: Metric) -> Option<Approach> {
        self.cells
            .iter()
            .find(|c| c.filter == filter && c.noise == noise && c.space == space && c.metric == metric)
            .map(|c| c.winner)
    }
}

/// Pick the best mean; exact ties go to the earlier of M, V, MV, VM.
fn pick_winner(means: &BTreeMap<Approach, f64>, metric: Metric) -> Option<Approach> {
    let mut best: Option<(Approach, f64)> = None;
    for approach in Approach::ALL {
        let Some(&m) = means.get(&approach) else { continue };
        let better = match best {
            None => true,
            Some((_, b)) if metric.higher_is_better() => m > b,
            Some((_, b)) => m < b,
        };
        if better {
            best = Some((approach, m));
        }
    }
    best.map(|(a, _)| a)
}

/// Average each metric over images and seeds, then name the winning approach
/// of every (filter, noise, space, metric) cell. Rows with errors or without
/// the metric are skipped.
pub fn summarize(rows: &[BenchResult]) -> Summary {
    type CellKey = (FilterKind, NoiseId, ColorSpace, Metric);
    let mut sums: BTreeMap<CellKey, BTreeMap<Approach, (f64, usize)>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.error.is_none()) {
        for metric in [Metric::Psnr, Metric::Sr, Metric::Rsc] {
            if let Some(v) = metric.of(row) {
                let slot = sums.entry((row.filter, row.noise, row.space, metric)).or_default().entry(row.approach).or_default();
                slot.0 += v;
                slot.1 += 1;
            }
        }
    }

    let mut summary = Summary::default();
    let mut wins: BTreeMap<Metric, BTreeMap<Approach, usize>> = BTreeMap::new();
    for ((filter, noise, space, metric), per_approach) in sums {
        let means: BTreeMap<Approach, f64> = per_approach.into_iter().map(|(a, (s, n))| (a, s / n as f64)).collect();
        let Some(winner) = pick_winner(&means, metric) else { continue };
        *wins.entry(metric).or_default().entry(winner).or_default() += 1;
        summary.cells.push(CellSummary { filter, noise, space, metric, means, winner });
    }
    for (metric, counts) in wins {
        let total: usize = counts.values().sum();
        let fractions = Approach::ALL
            .into_iter()
            .map(|a| (a, counts.get(&a).copied().unwrap_or(0) as f64 / total as f64))
            .collect();
        summary.win_fractions.insert(metric, fractions);
    }
    summary
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14} {:<7} {:<5} {:<6} {:>12} {:>12} {:>12} {:>12}  winner", "filter", "noise", "space", "metric", "marginal", "vector", "mv", "vm")?;
        for c in &self.cells {
            write!(f, "{:<14} {:<7} {:<5} {:<6}", c.filter.to_string(), c.noise.to_string(), c.space.to_string(), c.metric.to_string())?;
            for a in Approach::ALL {
                let cell = c.means.get(&a).map(|&v| sig6(v)).unwrap_or_else(|| "-".into());
                write!(f, " {cell:>12}")?;
            }
            writeln!(f, "  {}", c.winner)?;
        }
        for (metric, fractions) in &self.win_fractions {
            write!(f, "wins by {metric}:")?;
            for (a, share) in fractions {
                write!(f, " {a}={:.1}%", share * 100.0)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use colorfilt_core::MetricReport;

    fn row(filter: FilterKind, approach: Approach, psnr: f64, sr: f64) -> BenchResult {
        BenchResult {
            image: "page".into(),
            space: ColorSpace::Rgb,
            filter,
            approach,
            noise: NoiseId::Model(1),
            seed: 0,
            metrics: MetricReport { psnr: Some(psnr), sr: Some(sr), rsc: None },
            ms: 1.5,
            error: None,
        }
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(sig6(23.359172), "23.3592");
        assert_eq!(sig6(0.00173066123), "0.00173066");
        assert_eq!(sig6(1950.75), "1950.75");
        assert_eq!(sig6(2.0), "2");
        assert_eq!(sig6(123456789.0), "1.23457e+08");
        assert_eq!(sig6(0.0000123456), "1.23456e-05");
        assert_eq!(sig6(999999.7), "1e+06");
        assert_eq!(sig6(f64::INFINITY), "inf");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-3.5), "-3.5");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        emit_csv(&[], false, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "image,space,filter,approach,noise,seed,psnr_db,sr,rsc,ms,error\n");

        let mut r = row(FilterKind::Median, Approach::MarginalThenVector, f64::INFINITY, 0.01);
        r.error = Some("bad, really".into());
        let mut buf = Vec::new();
        emit_csv(&[r.clone()], false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "page,rgb,median,mv,noise1,0,inf,0.01,,,\"bad, really\"");
        let mut buf = Vec::new();
        emit_csv(&[r], true, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(",,1.5,"));
    }

    #[test]
    fn winners_and_ties() {
        let rows = vec![
            row(FilterKind::Median, Approach::Marginal, 30.0, 0.02),
            row(FilterKind::Median, Approach::Vector, 31.0, 0.02),
            row(FilterKind::Median, Approach::MarginalThenVector, 29.0, 0.03),
            row(FilterKind::Median, Approach::VectorThenMarginal, 31.0, 0.01),
        ];
        let s = summarize(&rows);
        assert_eq!(s.winner(FilterKind::Median, NoiseId::Model(1), ColorSpace::Rgb, Metric::Psnr), Some(Approach::Vector));
        assert_eq!(s.winner(FilterKind::Median, NoiseId::Model(1), ColorSpace::Rgb, Metric::Sr), Some(Approach::VectorThenMarginal));
        for fractions in s.win_fractions.values() {
            assert!((fractions.values().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(s.to_string().contains("winner"));
    }

    #[test]
    fn errored_rows_are_ignored() {
        let mut bad = row(FilterKind::Median, Approach::Vector, 99.0, 0.0);
        bad.error = Some("x".into());
        let s = summarize(&[row(FilterKind::Median, Approach::Marginal, 30.0, 0.02), bad]);
        assert_eq!(s.cells[0].means.len(), 1);
    }
}
