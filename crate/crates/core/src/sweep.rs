//! Parameter sweeps over the state families and their serialization.
//!
//! Rows are computed independently per grid point, optionally on a worker
//! pool, and always emitted in `(N, parameter)` order.

use crate::oracle::{
    check_appendix, check_basis, check_closed_forms, check_contraction, check_roundtrip,
    pdc_epsilon_average, OracleReport,
};
use crate::states::{
    acstark_state, default_photon_outcomes, maximally_entangled, pdc_weight, szsz_state,
};
use crate::basis::{build_gellmann, HermitianBasis};
use crate::witness::CriterionReport;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::str::FromStr;

pub const DEFAULT_MAX_N: usize = 20;
pub const HARD_MAX_N: usize = 40;
pub const PDC_TRUNCATION: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Szsz,
    Acstark,
    Pdc,
    Maxent,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Szsz => "szsz",
            Family::Acstark => "acstark",
            Family::Pdc => "pdc",
            Family::Maxent => "maxent",
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "szsz" => Ok(Family::Szsz),
            "acstark" => Ok(Family::Acstark),
            "pdc" => Ok(Family::Pdc),
            "maxent" => Ok(Family::Maxent),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}'"))),
        }
    }
}

/// `steps` points starting at `lo`; half-open `[lo, hi)` unless `inclusive`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub inclusive: bool,
}

impl Grid {
    pub fn half_open(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps, inclusive: false }
    }

    pub fn inclusive(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps, inclusive: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidArgument("grid needs at least one step".into()));
        }
        let ordered = self.hi > self.lo || (self.steps == 1 && self.hi >= self.lo);
        if !ordered {
            return Err(Error::InvalidArgument(format!(
                "grid upper bound {} must exceed lower bound {}",
                self.hi, self.lo
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let denom = if self.inclusive {
            self.steps.saturating_sub(1).max(1)
        } else {
            self.steps
        } as f64;
        let h = (self.hi - self.lo) / denom;
        (0..self.steps).map(|i| self.lo + i as f64 * h).collect()
    }

    /// Parses `lo:hi:steps`; bounds accept plain numbers and multiples or
    /// fractions of `pi` (`pi`, `pi/2`, `0.25*pi`, `3pi/4`).
    pub fn parse(s: &str, inclusive: bool) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!("grid '{s}' is not lo:hi:steps")));
        }
        let steps = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad step count '{}'", parts[2])))?;
        let g = Self {
            lo: parse_bound(parts[0])?,
            hi: parse_bound(parts[1])?,
            steps,
            inclusive,
        };
        g.validate()?;
        Ok(g)
    }
}

fn parse_bound(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("bad grid bound '{s}'"));
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let factor = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(prefix) => prefix.trim_end_matches('*').trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    Ok(factor * std::f64::consts::PI / den)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: Family,
    pub n_values: Vec<usize>,
    /// `τ` for szsz, `t` for acstark.
    pub grid: Grid,
    /// acstark only: evaluate the single point `t = value / N` per `N`.
    pub t_over_n: Option<f64>,
    pub outcomes: Option<(u32, u32)>,
    pub k_grid: Grid,
    pub seed: u64,
    pub jobs: usize,
    /// Lifts the `N` cap from 20 to 40.
    pub allow_large: bool,
}

impl SweepConfig {
    pub fn new(family: Family) -> Self {
        let n_values = match family {
            Family::Szsz | Family::Acstark | Family::Pdc => (1..=8).collect(),
            Family::Maxent => (1..=10).collect(),
        };
        Self {
            family,
            n_values,
            grid: Grid::half_open(0.0, FRAC_PI_2, 128),
            t_over_n: None,
            outcomes: None,
            k_grid: Grid::inclusive(0.05, 1.5, 30),
            seed: 0,
            jobs: 1,
            allow_large: false,
        }
    }

    /// Checks the configuration and returns any warnings to surface.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.n_values.is_empty() {
            return Err(Error::InvalidArgument("no N values given".into()));
        }
        let cap = if self.allow_large { HARD_MAX_N } else { DEFAULT_MAX_N };
        for &n in &self.n_values {
            if n == 0 {
                return Err(Error::InvalidArgument("N must be >= 1".into()));
            }
            if n > cap {
                return Err(Error::ScaleLimit(format!(
                    "N = {n} exceeds the cap of {cap}{}",
                    if self.allow_large { "" } else { " (pass --allow-large for up to 40)" }
                )));
            }
        }
        if let Some(&n) = self.n_values.iter().filter(|&&n| n > DEFAULT_MAX_N).max() {
            warnings.push(format!("N up to {n} is above {DEFAULT_MAX_N}; expect long runtimes"));
        }
        self.grid.validate()?;
        self.k_grid.validate()?;
        if self.family == Family::Pdc && self.k_grid.lo <= 0.0 {
            return Err(Error::InvalidArgument("K grid must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidArgument("jobs must be >= 1".into()));
        }
        Ok(warnings)
    }

    fn expect_family(&self, family: Family) -> Result<()> {
        if self.family != family {
            return Err(Error::InvalidArgument(format!(
                "config is for '{}', not '{}'",
                self.family.name(),
                family.name()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub param: f64,
    pub t_norm: f64,
    pub t_max: f64,
    pub epsilon: f64,
    pub bloch_sq: f64,
    pub entropy: f64,
    pub spin_t_norm: f64,
    pub spin_t_max: f64,
    pub spin_epsilon: Option<f64>,
    /// acstark: squared norm of the projected state.
    pub weight: Option<f64>,
}

impl SweepRow {
    pub fn from_report(family: Family, n: usize, param: f64, r: &CriterionReport, weight: Option<f64>) -> Self {
        Self {
            family: family.name().to_string(),
            n,
            param,
            t_norm: r.t_norm,
            t_max: r.t_max,
            epsilon: r.epsilon,
            bloch_sq: r.bloch_len_a,
            entropy: r.entropy,
            spin_t_norm: r.spin_t_norm,
            spin_t_max: r.spin_t_max,
            spin_epsilon: r.spin_epsilon,
            weight,
        }
    }
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// One basis per distinct `N`, shared read-only by the workers.
fn bases_for(n_values: &[usize]) -> Result<BTreeMap<usize, HermitianBasis>> {
    let mut map = BTreeMap::new();
    for &n in n_values {
        if let std::collections::btree_map::Entry::Vacant(e) = map.entry(n) {
            e.insert(build_gellmann(n + 1)?);
        }
    }
    Ok(map)
}

fn grid_pairs(config: &SweepConfig) -> Vec<(usize, f64)> {
    let pts = config.grid.points();
    config
        .n_values
        .iter()
        .flat_map(|&n| pts.iter().map(move |&p| (n, p)))
        .collect()
}

pub fn run_szsz(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.expect_family(Family::Szsz)?;
    config.validate()?;
    let pairs = grid_pairs(config);
    let bases = bases_for(&config.n_values)?;
    in_pool(config.jobs, || {
        pairs
            .par_iter()
            .map(|&(n, tau)| {
                let r = CriterionReport::evaluate_in(&szsz_state(n, tau)?, &bases[&n])?;
                Ok(SweepRow::from_report(Family::Szsz, n, tau, &r, None))
            })
            .collect()
    })?
}

pub fn run_acstark(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.expect_family(Family::Acstark)?;
    config.validate()?;
    let pairs: Vec<(usize, f64)> = match config.t_over_n {
        Some(c) => config.n_values.iter().map(|&n| (n, c / n as f64)).collect(),
        None => grid_pairs(config),
    };
    let outcomes = config.outcomes;
    let bases = bases_for(&config.n_values)?;
    in_pool(config.jobs, || {
        pairs
            .par_iter()
            .map(|&(n, t)| {
                let (nc, nd) = outcomes.unwrap_or_else(|| default_photon_outcomes(n));
                let out = acstark_state(n, t, nc, nd)?;
                let r = CriterionReport::evaluate_in(&out.state, &bases[&n])?;
                Ok(SweepRow::from_report(Family::Acstark, n, t, &r, Some(out.norm_weight)))
            })
            .collect()
    })?
}

pub fn run_maxent(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.expect_family(Family::Maxent)?;
    config.validate()?;
    in_pool(config.jobs, || {
        config
            .n_values
            .par_iter()
            .map(|&n| {
                let r = CriterionReport::evaluate(&maximally_entangled(n)?)?;
                Ok(SweepRow::from_report(Family::Maxent, n, 0.0, &r, None))
            })
            .collect()
    })?
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdcRow {
    /// `pdc` for per-`N` rows, `pdc_avg` for the per-`K` aggregate.
    pub family: String,
    pub k: f64,
    pub n: Option<usize>,
    /// `p_N`, or `Σ p_N` on aggregate rows.
    pub weight: f64,
    pub epsilon: Option<f64>,
    pub epsilon_avg_series: Option<f64>,
    pub epsilon_avg_closed: Option<f64>,
}

pub const PDC_NOTE: &str =
    "epsilon_avg is a statistical aggregate over post-selected photon numbers, not a single-run observable";

pub fn run_pdc(config: &SweepConfig) -> Result<Vec<PdcRow>> {
    config.expect_family(Family::Pdc)?;
    config.validate()?;
    let eps: Vec<f64> = in_pool(config.jobs, || {
        config
            .n_values
            .par_iter()
            .map(|&n| Ok(CriterionReport::evaluate(&maximally_entangled(n)?)?.epsilon))
            .collect::<Result<Vec<f64>>>()
    })??;
    let mut rows = Vec::new();
    for k in config.k_grid.points() {
        let avg = pdc_epsilon_average(k, PDC_TRUNCATION)?;
        for (&n, &e) in config.n_values.iter().zip(&eps) {
            rows.push(PdcRow {
                family: "pdc".into(),
                k,
                n: Some(n),
                weight: pdc_weight(n, k),
                epsilon: Some(e),
                epsilon_avg_series: None,
                epsilon_avg_closed: None,
            });
        }
        rows.push(PdcRow {
            family: "pdc_avg".into(),
            k,
            n: None,
            weight: avg.weight_sum,
            epsilon: None,
            epsilon_avg_series: Some(avg.series),
            epsilon_avg_closed: Some(avg.closed),
        });
    }
    Ok(rows)
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub const CSV_HEADER: &str =
    "family,n,param,t_norm,t_max,epsilon,bloch_sq,entropy,spin_t_norm,spin_t_max,spin_epsilon,weight";
pub const PDC_CSV_HEADER: &str = "family,k,n,weight,epsilon,epsilon_avg_series,epsilon_avg_closed";

pub fn write_csv(rows: &[SweepRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.n,
            format_float(r.param),
            format_float(r.t_norm),
            format_float(r.t_max),
            format_float(r.epsilon),
            format_float(r.bloch_sq),
            format_float(r.entropy),
            format_float(r.spin_t_norm),
            format_float(r.spin_t_max),
            opt(r.spin_epsilon),
            opt(r.weight),
        )?;
    }
    Ok(())
}

pub fn write_pdc_csv(rows: &[PdcRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "# {PDC_NOTE}")?;
    writeln!(w, "{PDC_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.family,
            format_float(r.k),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            format_float(r.weight),
            opt(r.epsilon),
            opt(r.epsilon_avg_series),
            opt(r.epsilon_avg_closed),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonDoc<'a, R: Serialize> {
    family: &'a str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
    rows: &'a [R],
}

pub fn write_json<R: Serialize>(
    family: Family,
    seed: u64,
    rows: &[R],
    mut w: impl Write,
) -> std::io::Result<()> {
    let doc = JsonDoc {
        family: family.name(),
        seed,
        note: (family == Family::Pdc).then_some(PDC_NOTE),
        rows,
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}

/// Runs the configured sweep and writes it in the requested format.
pub fn run_and_write(config: &SweepConfig, format: OutputFormat, w: impl Write) -> Result<()> {
    match config.family {
        Family::Pdc => {
            let rows = run_pdc(config)?;
            match format {
                OutputFormat::Csv => write_pdc_csv(&rows, w)?,
                OutputFormat::Json => write_json(config.family, config.seed, &rows, w)?,
            }
        }
        family => {
            let rows = match family {
                Family::Szsz => run_szsz(config)?,
                Family::Acstark => run_acstark(config)?,
                _ => run_maxent(config)?,
            };
            match format {
                OutputFormat::Csv => write_csv(&rows, w)?,
                OutputFormat::Json => write_json(config.family, config.seed, &rows, w)?,
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSelector {
    Basis,
    Appendix,
    ClosedForms,
    Roundtrip,
    All,
}

impl FromStr for CheckSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis" => Ok(CheckSelector::Basis),
            "appendix" => Ok(CheckSelector::Appendix),
            "closed-forms" => Ok(CheckSelector::ClosedForms),
            "roundtrip" => Ok(CheckSelector::Roundtrip),
            "all" => Ok(CheckSelector::All),
            other => Err(Error::InvalidArgument(format!("unknown check selector '{other}'"))),
        }
    }
}

pub const CHECK_SEED: u64 = 20_150_601;

/// Runs a verification suite; `dims` restricts the basis checks (default `2..=12`).
pub fn run_checks(selector: CheckSelector, dims: Option<&[usize]>) -> Result<Vec<OracleReport>> {
    let default_dims: Vec<usize> = (2..=12).collect();
    let dims = dims.unwrap_or(&default_dims);
    let mut out = Vec::new();
    let want = |s: CheckSelector| selector == s || selector == CheckSelector::All;
    if want(CheckSelector::Basis) {
        for &d in dims {
            out.extend(check_basis(d)?);
        }
    }
    if want(CheckSelector::Appendix) {
        out.extend(check_appendix());
    }
    if want(CheckSelector::ClosedForms) {
        out.extend(check_closed_forms()?);
    }
    if want(CheckSelector::Roundtrip) {
        out.extend(check_roundtrip(CHECK_SEED)?);
        out.push(check_contraction(4)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(3.0), "3");
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(7.0 / 3.0), "2.33333333333");
        assert_eq!(format_float(123456.789), "123456.789");
        assert_eq!(format_float(1.5e-17), "1.5e-17");
        assert_eq!(format_float(-2.5e13), "-2.5e13");
        assert_eq!(format_float(0.99999999999999), "1");
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn grid_parsing() {
        let g = Grid::parse("0:pi/2:4", false).unwrap();
        assert_eq!(g.points(), vec![0.0, FRAC_PI_2 / 4.0, FRAC_PI_2 / 2.0, 3.0 * FRAC_PI_2 / 4.0]);
        let g = Grid::parse("0.1:0.3:3", true).unwrap();
        let p = g.points();
        assert!((p[2] - 0.3).abs() < 1e-15);
        assert!((parse_bound("3pi/4").unwrap() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((parse_bound("0.25*pi").unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(Grid::parse("0:1", false).is_err());
        assert!(Grid::parse("0:1:0", false).is_err());
        assert!(Grid::parse("1:0:5", false).is_err());
        assert!(Grid::parse("0:tau:5", false).is_err());
    }

    #[test]
    fn config_caps() {
        let mut c = SweepConfig::new(Family::Szsz);
        c.n_values = vec![21];
        assert!(matches!(c.validate(), Err(Error::ScaleLimit(_))));
        c.allow_large = true;
        assert_eq!(c.validate().unwrap().len(), 1);
        c.n_values = vec![41];
        assert!(c.validate().is_err());
        c.n_values = vec![0];
        assert!(c.validate().is_err());
        let c = SweepConfig::new(Family::Acstark);
        assert!(run_szsz(&c).is_err());
    }

    #[test]
    fn selectors() {
        assert_eq!("closed-forms".parse::<CheckSelector>().unwrap(), CheckSelector::ClosedForms);
        assert!("nope".parse::<CheckSelector>().is_err());
        assert_eq!("maxent".parse::<Family>().unwrap(), Family::Maxent);
    }
}
