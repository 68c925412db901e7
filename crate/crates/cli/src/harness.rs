//! Statistics reports with measured ratio columns, and size sweeps.
//!
//! Ratios divide an exact count by the shape of a known asymptotic bound.
//! They are reported, never asserted: the constants are unknown. Natural
//! logarithms throughout; a ratio is `null` when its denominator vanishes.

use std::collections::BTreeMap;

use bisector_core::stats::{ReportOptions, StatsReport};
use bisector_core::{ConfigSpec, Executor, PointSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::formats::{carrier_json, field_json, float_json, point_json, scalar_json, spec_json, u128_json};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("a sweep needs at least 3 distinct sizes, got {0}")]
    InsufficientPoints(usize),
    #[error(transparent)]
    Core(#[from] bisector_core::Error),
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    let r = num / den;
    (den > 0.0 && r.is_finite()).then_some(r)
}

/// Global ratio columns of one report.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Ratios {
    /// `𝒬 / (M N² + N^{5/2} (ln N)^{1/2})`.
    pub thm2: Option<f64>,
    /// `𝒬 / N^{110/37}`.
    pub dich_q: Option<f64>,
    /// `M / N^{27/37}`.
    pub dich_m: Option<f64>,
    /// `Σ m_r² / (N³ ln N)`.
    pub sum_mr2: Option<f64>,
    /// distinct bisectors `/ (N^{3/2} (ln N)^{1/2})`.
    pub distinct_bisectors: Option<f64>,
    /// `Δ_pin_no0 / N^{20/37}`.
    pub pinned: Option<f64>,
}

/// Per-distance ratio columns.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DistanceRatios {
    /// `I / (m + M^{2/3} m^{4/3} + m^{5/3})`.
    pub pvi: Option<f64>,
    /// `I_M / (M m + m^{3/2} + m^{1/2} m)`.
    pub rpv: Option<f64>,
}

impl Ratios {
    pub fn of(r: &StatsReport) -> Self {
        let n = r.n as f64;
        let ln = n.ln();
        let m = f64::from(r.m);
        let q = r.energy.full as f64;
        Ratios {
            thm2: ratio(q, m * n * n + n.powf(2.5) * ln.sqrt()),
            dich_q: ratio(q, n.powf(110.0 / 37.0)),
            dich_m: ratio(m, n.powf(27.0 / 37.0)),
            sum_mr2: ratio(r.sum_mr2 as f64, n.powi(3) * ln),
            distinct_bisectors: ratio(r.distinct_bisectors as f64, n.powf(1.5) * ln.sqrt()),
            pinned: ratio(r.pinned.no_zero as f64, n.powf(20.0 / 37.0)),
        }
    }
}

impl DistanceRatios {
    pub fn of(m_cap: u32, m_r: u64, i_nondeg: u64, i_m: u64) -> Self {
        let (mc, m) = (f64::from(m_cap), m_r as f64);
        DistanceRatios {
            pvi: ratio(i_nondeg as f64, m + mc.powf(2.0 / 3.0) * m.powf(4.0 / 3.0) + m.powf(5.0 / 3.0)),
            rpv: ratio(i_m as f64, mc * m + m.powf(1.5) + m.sqrt() * m),
        }
    }
}

/// A [`StatsReport`] with its spec (when generated) and ratio columns.
#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub spec: Option<ConfigSpec>,
    pub stats: StatsReport,
    pub ratios: Ratios,
    pub distance_ratios: Vec<DistanceRatios>,
}

impl HarnessReport {
    pub fn is_ok(&self) -> bool {
        self.stats.is_ok()
    }
}

pub fn stats_for_set(
    spec: Option<ConfigSpec>,
    set: &PointSet,
    opts: &ReportOptions,
    exec: &impl Executor,
) -> Result<HarnessReport, HarnessError> {
    let stats = StatsReport::compute_with(set, opts, exec)?;
    let ratios = Ratios::of(&stats);
    let distance_ratios = stats
        .incidences
        .iter()
        .map(|rec| DistanceRatios::of(stats.cap, rec.m_r, rec.counts.nondeg, rec.counts.m_nondeg))
        .collect();
    Ok(HarnessReport { spec, stats, ratios, distance_ratios })
}

pub fn run_stats(spec: &ConfigSpec, opts: &ReportOptions, exec: &impl Executor) -> Result<HarnessReport, HarnessError> {
    let set = spec.generate()?;
    stats_for_set(Some(*spec), &set, opts, exec)
}

pub fn report_json(h: &HarnessReport) -> Value {
    let r = &h.stats;
    let m_r: Vec<Value> =
        r.distances.nonzero.iter().map(|(k, v)| json!({"r": scalar_json(k), "m_r": v})).collect();
    let dyadic: Vec<Value> = r
        .dyadic
        .iter()
        .map(|b| json!({"k": b.k, "lines": b.lines, "incidences": b.incidences, "b_sum": b.pairs}))
        .collect();
    let incidences: Vec<Value> = r
        .incidences
        .iter()
        .zip(&h.distance_ratios)
        .map(|(rec, dr)| {
            json!({
                "r": scalar_json(&rec.r),
                "m_r": rec.m_r,
                "I_nondeg": rec.counts.nondeg,
                "I_deg": rec.counts.degenerate,
                "I_M": rec.counts.m_nondeg,
                "ratio_pvi": float_json(dr.pvi),
                "ratio_rpv": float_json(dr.rpv),
            })
        })
        .collect();
    let checks: Vec<Value> =
        r.checks.iter().map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail})).collect();
    let ratios = &h.ratios;
    json!({
        "spec": h.spec.as_ref().map(spec_json),
        "field": field_json(r.field),
        "n": r.n,
        "m_r": m_r,
        "m_0": r.distances.zero,
        "delta": r.delta,
        "delta_pin_with0": r.pinned.with_zero,
        "delta_pin_no0": r.pinned.no_zero,
        "pin_index": r.pinned.pin,
        "pin_point": point_json(&r.pin_point),
        "q_full": r.energy.full,
        "q_diag": r.energy.diag,
        "q_null": r.energy.null,
        "q_work": r.energy.work,
        "q_m": r.q_m,
        "cap": r.cap,
        "t": r.isosceles.total,
        "t_strict": r.isosceles.strict,
        "t_null_apex": r.null_apex,
        "sum_ib": r.sum_ib,
        "sum_mr2": u128_json(r.sum_mr2),
        "M": r.m,
        "witness": r.witness.as_ref().map(carrier_json),
        "iso_max": r.iso_max,
        "distinct_bisectors": r.distinct_bisectors,
        "null_pairs": r.null_pairs,
        "dyadic": dyadic,
        "incidences": incidences,
        "ratios": {
            "ratio_thm2": float_json(ratios.thm2),
            "ratio_dich_q": float_json(ratios.dich_q),
            "ratio_dich_m": float_json(ratios.dich_m),
            "sum_mr2_ratio": float_json(ratios.sum_mr2),
            "distinct_bisector_ratio": float_json(ratios.distinct_bisectors),
            "pinned_ratio": float_json(ratios.pinned),
            "log": "natural",
        },
        "checks": checks,
        "status": r.status(),
    })
}

/// One CSV row per point set.
#[derive(Debug, Serialize)]
pub struct CsvRow {
    pub family: String,
    pub field: String,
    pub n: usize,
    pub m_0: u64,
    pub delta: usize,
    pub delta_pin_with0: usize,
    pub delta_pin_no0: usize,
    pub q_full: u64,
    pub q_diag: u64,
    pub q_null: u64,
    pub q_work: u64,
    pub q_m: u64,
    pub cap: u32,
    pub t: u64,
    pub t_strict: u64,
    pub sum_mr2: String,
    pub m: u32,
    pub iso_max: u32,
    pub distinct_bisectors: usize,
    pub null_pairs: u64,
    pub ratio_thm2: Option<f64>,
    pub ratio_dich_q: Option<f64>,
    pub ratio_dich_m: Option<f64>,
    pub sum_mr2_ratio: Option<f64>,
    pub distinct_bisector_ratio: Option<f64>,
    pub pinned_ratio: Option<f64>,
    pub status: &'static str,
}

impl CsvRow {
    pub fn of(h: &HarnessReport) -> Self {
        let r = &h.stats;
        CsvRow {
            family: h.spec.map_or("points", |s| s.family()).to_string(),
            field: r.field.to_string(),
            n: r.n,
            m_0: r.distances.zero,
            delta: r.delta,
            delta_pin_with0: r.pinned.with_zero,
            delta_pin_no0: r.pinned.no_zero,
            q_full: r.energy.full,
            q_diag: r.energy.diag,
            q_null: r.energy.null,
            q_work: r.energy.work,
            q_m: r.q_m,
            cap: r.cap,
            t: r.isosceles.total,
            t_strict: r.isosceles.strict,
            sum_mr2: r.sum_mr2.to_string(),
            m: r.m,
            iso_max: r.iso_max,
            distinct_bisectors: r.distinct_bisectors,
            null_pairs: r.null_pairs,
            ratio_thm2: h.ratios.thm2,
            ratio_dich_q: h.ratios.dich_q,
            ratio_dich_m: h.ratios.dich_m,
            sum_mr2_ratio: h.ratios.sum_mr2,
            distinct_bisector_ratio: h.ratios.distinct_bisectors,
            pinned_ratio: h.ratios.pinned,
            status: r.status(),
        }
    }
}

pub fn write_csv<W: std::io::Write>(rows: &[HarnessReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(CsvRow::of(row))?;
    }
    w.flush()?;
    Ok(())
}

/// Statistics whose growth in `N` gets a fitted log-log slope.
pub const SLOPE_STATS: [&str; 6] = ["q_full", "t", "sum_mr2", "M", "distinct_bisectors", "delta_pin_no0"];

fn slope_value(r: &StatsReport, name: &str) -> f64 {
    match name {
        "q_full" => r.energy.full as f64,
        "t" => r.isosceles.total as f64,
        "sum_mr2" => r.sum_mr2 as f64,
        "M" => f64::from(r.m),
        "distinct_bisectors" => r.distinct_bisectors as f64,
        "delta_pin_no0" => r.pinned.no_zero as f64,
        _ => unreachable!("unknown slope statistic {name}"),
    }
}

/// Least-squares slope of `ln y` against `ln x` over points with `x, y > 0`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if logs.len() < 2 {
        return None;
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<HarnessReport>,
    pub slopes: BTreeMap<&'static str, Option<f64>>,
}

impl SweepReport {
    pub fn is_ok(&self) -> bool {
        self.rows.iter().all(HarnessReport::is_ok)
    }
}

/// Rows run through `exec` and are sorted by `N` (ties keep input order).
pub fn sweep(specs: &[ConfigSpec], opts: &ReportOptions, exec: &impl Executor) -> Result<SweepReport, HarnessError> {
    let sets = specs.iter().map(ConfigSpec::generate).collect::<Result<Vec<_>, _>>()?;
    let mut sizes: Vec<usize> = sets.iter().map(PointSet::len).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(HarnessError::InsufficientPoints(sizes.len()));
    }
    // rows fan out through `exec`; each row runs its own kernels sequentially
    let rows = exec.map(specs.len(), |i| stats_for_set(Some(specs[i]), &sets[i], opts, &bisector_core::Sequential));
    let mut rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|r| r.stats.n);
    let slopes = SLOPE_STATS
        .iter()
        .map(|&name| {
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.stats.n as f64, slope_value(&r.stats, name))).collect();
            (name, log_log_slope(&pts))
        })
        .collect();
    Ok(SweepReport { rows, slopes })
}

pub fn sweep_json(s: &SweepReport) -> Value {
    let slopes: serde_json::Map<String, Value> =
        s.slopes.iter().map(|(k, v)| (k.to_string(), float_json(*v))).collect();
    json!({
        "rows": s.rows.iter().map(report_json).collect::<Vec<_>>(),
        "slopes": slopes,
        "status": if s.is_ok() { "ok" } else { "violated" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bisector_core::{FieldSpec, Sequential};

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0].iter().map(|&x| (x, 5.0 * x.powi(3))).collect();
        assert!((log_log_slope(&pts).unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(log_log_slope(&[(2.0, 1.0)]), None);
        assert_eq!(log_log_slope(&[(2.0, 1.0), (2.0, 3.0)]), None);
    }

    #[test]
    fn collinear_three_report() {
        let spec = ConfigSpec::Collinear { field: FieldSpec::Rational, n: 3 };
        let h = run_stats(&spec, &ReportOptions::default(), &Sequential).unwrap();
        let r = &h.stats;
        assert_eq!((r.energy.full, r.isosceles.total, r.m, r.pinned.no_zero, r.distinct_bisectors), (12, 8, 3, 2, 3));
        assert!(h.is_ok());
        let v = report_json(&h);
        assert_eq!(v["q_full"], 12);
        assert_eq!(v["status"], "ok");
        assert_eq!(v["m_r"], json!([{"r": "1", "m_r": 4}, {"r": "4", "m_r": 2}]));
    }

    #[test]
    fn grid_report_and_bad_field() {
        let h = run_stats(&ConfigSpec::Grid { p: 3, s: 3 }, &ReportOptions::default(), &Sequential).unwrap();
        assert_eq!(h.stats.pinned.with_zero, 3);
        let err = run_stats(&ConfigSpec::Grid { p: 2, s: 1 }, &ReportOptions::default(), &Sequential);
        assert!(matches!(err, Err(HarnessError::Core(bisector_core::Error::CharacteristicTwo))));
    }

    #[test]
    fn sweep_rules() {
        let opts = ReportOptions::default();
        let one = [ConfigSpec::CircleRational { n: 8 }];
        assert!(matches!(sweep(&one, &opts, &Sequential), Err(HarnessError::InsufficientPoints(1))));
        let specs: Vec<ConfigSpec> = [16, 8, 32].iter().map(|&n| ConfigSpec::CircleRational { n }).collect();
        let s = sweep(&specs, &opts, &Sequential).unwrap();
        let ns: Vec<usize> = s.rows.iter().map(|r| r.stats.n).collect();
        assert_eq!(ns, [8, 16, 32]);
        assert!(s.rows.iter().all(|r| r.stats.m as usize == r.stats.n));
    }
}
