//! Design-space exploration: parameter sweeps, technology comparison
//! tables, and break-even solving between technologies.

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::machine::InterconnectTech;
use crate::sizing::SizingReport;

/// Which knob a sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Aggregate performance Θ; the sweep adjusts the node count at fixed
    /// clock and word widths, re-resolving the network diameter per point.
    Theta,
    /// Node clock frequency f0.
    ClockFrequency,
    /// Node count Q.
    NodeCount,
}

impl SweepParameter {
    /// Column key used in emitted tables.
    pub fn key(self) -> &'static str {
        match self {
            SweepParameter::Theta => "theta",
            SweepParameter::ClockFrequency => "f0",
            SweepParameter::NodeCount => "q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Grid of swept values.
#[derive(Debug, Clone)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepRange {
    fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(Error::invalid("range", "min must be finite and strictly below max"));
        }
        if self.points < 2 {
            return Err(Error::invalid("points", "must be >= 2"));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::invalid("range", "log spacing needs a positive min"));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let v = match self.spacing {
                Spacing::Linear => self.min + t * (self.max - self.min),
                Spacing::Log => self.min * (self.max / self.min).powf(t),
            };
            values.push(v);
        }
        // The endpoints are the requested bounds exactly, whatever the
        // interpolation rounding did.
        values[0] = self.min;
        values[n - 1] = self.max;
        values
    }
}

/// Full sweep description. `outputs` selects and orders the emitted
/// columns (any sizing-report field plus `threads`); `None` emits all.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub range: SweepRange,
    /// Freeze the network diameter at the base configuration's value so
    /// the square-root scaling laws show without ceil(log2 Q) kinks.
    pub pin_diameter: bool,
    pub outputs: Option<Vec<String>>,
}

/// One evaluated sweep point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// The swept parameter's value at this point.
    pub value: f64,
    pub report: SizingReport,
    /// Propagation-dominated thread requirement at the installation
    /// diameter.
    pub threads: f64,
}

/// Sweep result: rows ordered by ascending swept value.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub outputs: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// All selectable table columns, in emission order.
pub const OUTPUT_FIELDS: [&str; 11] = [
    "n_wires",
    "theta_ops",
    "l_static_m",
    "l_dynamic_m",
    "l_driver_m",
    "l_power_m",
    "l_packing_m",
    "l_installation_m",
    "binding",
    "variant",
    "threads",
];

fn validate_outputs(outputs: &Option<Vec<String>>) -> Result<Vec<String>> {
    match outputs {
        None => Ok(OUTPUT_FIELDS.iter().map(|s| s.to_string()).collect()),
        Some(names) => {
            if names.is_empty() {
                return Err(Error::invalid("outputs", "must select at least one column"));
            }
            for name in names {
                if !OUTPUT_FIELDS.contains(&name.as_str()) {
                    return Err(Error::InvalidConfig {
                        field: "outputs".into(),
                        reason: format!("unknown column {name:?}"),
                    });
                }
            }
            Ok(names.clone())
        }
    }
}

/// Evaluates `base` across the swept grid.
pub fn run_sweep(base: &Bundle, spec: &SweepSpec) -> Result<SweepTable> {
    spec.range.validate()?;
    let outputs = validate_outputs(&spec.outputs)?;
    base.validate()?;
    let pinned = if spec.pin_diameter {
        Some(base.machine.effective_diameter().map_err(|e| e.in_section("machine"))?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(spec.range.points);
    for (index, value) in spec.range.grid().into_iter().enumerate() {
        let mut point = base.clone();
        match spec.parameter {
            SweepParameter::Theta => {
                // Θ = Q·f0·W/W0 inverted for Q at fixed f0, W, W0.
                point.machine.node_count = value * base.machine.reference_word_width
                    / (base.machine.clock_frequency * base.machine.word_width);
            }
            SweepParameter::ClockFrequency => point.machine.clock_frequency = value,
            SweepParameter::NodeCount => point.machine.node_count = value,
        }
        if let Some(d) = pinned {
            point.machine.network_diameter_override = Some(d);
        }
        let context = format!("sweep point {index} ({}={value:.6e})", spec.parameter.key());
        let report = point.size().map_err(|e| e.in_section(&context))?;
        let threads = point
            .propagation_threads(report.l_installation_m)
            .map_err(|e| e.in_section(&context))?;
        rows.push(SweepRow { value, report, threads });
    }
    Ok(SweepTable { parameter: spec.parameter, outputs, rows })
}

/// Fields that get a ratio-vs-baseline column in comparison tables, in
/// emission order.
pub const RATIO_FIELDS: [&str; 9] = [
    "n_wires",
    "theta_ops",
    "l_static_m",
    "l_dynamic_m",
    "l_driver_m",
    "l_power_m",
    "l_packing_m",
    "l_installation_m",
    "threads",
];

/// Successful evaluation of one technology column.
#[derive(Debug, Clone)]
pub struct ComparisonValues {
    pub report: SizingReport,
    pub threads: f64,
    /// Ratio against the baseline column for each `RATIO_FIELDS` entry;
    /// `None` when the baseline failed or the ratio is not finite.
    pub ratios: Vec<Option<f64>>,
}

/// One technology column: either its values or the error that felled it.
#[derive(Debug, Clone)]
pub struct ComparisonColumn {
    pub name: String,
    pub outcome: std::result::Result<ComparisonValues, String>,
}

/// Comparison result; the first column is the baseline.
#[derive(Debug, Clone)]
pub struct ComparisonTable {
    pub columns: Vec<ComparisonColumn>,
}

fn ratio_inputs(report: &SizingReport, threads: f64) -> [f64; 9] {
    [
        report.n_wires,
        report.theta_ops,
        report.l_static_m,
        report.l_dynamic_m,
        report.l_driver_m,
        report.l_power_m,
        report.l_packing_m,
        report.l_installation_m,
        threads,
    ]
}

/// Outcome of sizing one technology column: the sizing report paired with
/// the thread requirement at the installation diameter, or the error text.
type ColumnOutcome = std::result::Result<(SizingReport, f64), String>;

/// Sizes `base` once per technology and tabulates results plus ratios
/// against the first (baseline) technology. A technology that fails to
/// evaluate is marked failed without aborting the table.
pub fn compare_technologies(
    base: &Bundle,
    technologies: &[(String, InterconnectTech)],
) -> Result<ComparisonTable> {
    if technologies.len() < 2 {
        return Err(Error::invalid("technologies", "need at least two to compare"));
    }
    let evaluated: Vec<(String, ColumnOutcome)> = technologies
        .iter()
        .map(|(name, tech)| {
            let bundle = base.with_technology(tech.clone());
            let outcome = bundle
                .size()
                .and_then(|report| {
                    let threads = bundle.propagation_threads(report.l_installation_m)?;
                    Ok((report, threads))
                })
                .map_err(|e| e.to_string());
            (name.clone(), outcome)
        })
        .collect();

    let baseline = evaluated[0].1.as_ref().ok().map(|(r, t)| ratio_inputs(r, *t));
    let columns = evaluated
        .iter()
        .map(|(name, outcome)| ComparisonColumn {
            name: name.clone(),
            outcome: outcome.as_ref().map_err(|e| e.clone()).map(|(report, threads)| {
                let values = ratio_inputs(report, *threads);
                let ratios = match &baseline {
                    None => vec![None; RATIO_FIELDS.len()],
                    Some(base_values) => values
                        .iter()
                        .zip(base_values)
                        .map(|(v, b)| {
                            if v == b {
                                Some(1.0)
                            } else {
                                let r = v / b;
                                r.is_finite().then_some(r)
                            }
                        })
                        .collect(),
                };
                ComparisonValues { report: report.clone(), threads: *threads, ratios }
            }),
        })
        .collect();
    Ok(ComparisonTable { columns })
}

/// What quantity two technologies must agree on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakEvenMetric {
    PackingCore,
    InstallationDiameter,
    RequiredThreads,
}

impl BreakEvenMetric {
    pub fn key(self) -> &'static str {
        match self {
            BreakEvenMetric::PackingCore => "packing",
            BreakEvenMetric::InstallationDiameter => "installation",
            BreakEvenMetric::RequiredThreads => "threads",
        }
    }
}

/// Which candidate-technology field the solver may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParameter {
    PackingCrossSection,
    EmitterFootprint,
    LinkBandwidth,
    SignalSpeed,
}

impl FreeParameter {
    pub fn key(self) -> &'static str {
        match self {
            FreeParameter::PackingCrossSection => "sigma",
            FreeParameter::EmitterFootprint => "sigma_le",
            FreeParameter::LinkBandwidth => "bandwidth",
            FreeParameter::SignalSpeed => "signal_speed",
        }
    }
}

/// A break-even solve: find the candidate's free-parameter value where
/// its metric equals the baseline's.
#[derive(Debug, Clone)]
pub struct BreakEvenQuery {
    pub metric: BreakEvenMetric,
    pub free_parameter: FreeParameter,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone)]
pub struct BreakEvenSolution {
    /// Free-parameter value at metric parity.
    pub parameter_value: f64,
    /// The baseline's metric value (the target).
    pub baseline_metric: f64,
    /// The candidate's metric at `parameter_value`.
    pub candidate_metric: f64,
}

fn eval_metric(bundle: &Bundle, metric: BreakEvenMetric) -> Result<f64> {
    let report = bundle.size()?;
    match metric {
        BreakEvenMetric::PackingCore => Ok(report.l_packing_m),
        BreakEvenMetric::InstallationDiameter => Ok(report.l_installation_m),
        BreakEvenMetric::RequiredThreads => {
            bundle.propagation_threads(report.l_installation_m)
        }
    }
}

fn with_free_parameter(bundle: &Bundle, parameter: FreeParameter, value: f64) -> Bundle {
    let mut out = bundle.clone();
    match parameter {
        FreeParameter::PackingCrossSection => {
            out.technology.packing_cross_section = Some(value)
        }
        FreeParameter::EmitterFootprint => out.technology.emitter_footprint = Some(value),
        FreeParameter::LinkBandwidth => out.technology.link_bandwidth = value,
        FreeParameter::SignalSpeed => out.technology.signal_speed = value,
    }
    out
}

/// Relative width at which bisection stops.
const BREAK_EVEN_TOLERANCE: f64 = 1e-6;

/// Bisects the candidate's free parameter until its metric matches the
/// baseline's, to relative tolerance 1e-6. The interval must bracket the
/// crossing: the metric difference must change sign between `lo` and
/// `hi`, otherwise a no-crossing error reports both endpoint values.
pub fn break_even(
    baseline: &Bundle,
    candidate: &Bundle,
    query: &BreakEvenQuery,
) -> Result<BreakEvenSolution> {
    if !query.lo.is_finite() || !query.hi.is_finite() || query.lo >= query.hi {
        return Err(Error::invalid(
            "search_interval",
            "lo must be finite and strictly below hi",
        ));
    }
    let target = eval_metric(baseline, query.metric)?;
    let f = |x: f64| -> Result<f64> {
        let moved = with_free_parameter(candidate, query.free_parameter, x);
        Ok(eval_metric(&moved, query.metric)? - target)
    };

    let (mut lo, mut hi) = (query.lo, query.hi);
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(BreakEvenSolution {
            parameter_value: lo,
            baseline_metric: target,
            candidate_metric: target,
        });
    }
    if f_hi == 0.0 {
        return Ok(BreakEvenSolution {
            parameter_value: hi,
            baseline_metric: target,
            candidate_metric: target,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoCrossing { lo, hi, f_lo, f_hi });
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= BREAK_EVEN_TOLERANCE * mid.abs() {
            mid = 0.5 * (lo + hi);
            break;
        }
    }

    let candidate_metric =
        eval_metric(&with_free_parameter(candidate, query.free_parameter, mid), query.metric)?;
    Ok(BreakEvenSolution { parameter_value: mid, baseline_metric: target, candidate_metric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{assert_rel, copper_tech, htsc_tech, tvhc_bundle};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn theta_sweep(min: f64, max: f64, points: usize, pin: bool) -> SweepSpec {
        SweepSpec {
            parameter: SweepParameter::Theta,
            range: SweepRange { min, max, points, spacing: Spacing::Log },
            pin_diameter: pin,
            outputs: None,
        }
    }

    #[test]
    fn reference_sweep_contains_the_petaop_golden_row() {
        let base = tvhc_bundle(copper_tech());
        let table = run_sweep(&base, &theta_sweep(1e12, 1e16, 41, false)).unwrap();
        assert_eq!(table.rows.len(), 41);
        let row = table
            .rows
            .iter()
            .find(|r| (r.value - 1e15).abs() / 1e15 < 1e-9)
            .expect("grid should hit 1e15");
        assert_rel(row.report.l_installation_m, 9.737_289_911_202_954, 1e-9);
        assert_rel(row.threads, 69_242.950_479_665_45, 1e-9);
    }

    #[test]
    fn pinned_sweep_shows_the_square_root_law() {
        let base = tvhc_bundle(copper_tech());
        let table = run_sweep(&base, &theta_sweep(1e13, 1e14, 11, true)).unwrap();
        let first = &table.rows[0];
        let last = &table.rows[10];
        let slope = (last.report.l_installation_m / first.report.l_installation_m).ln()
            / (last.value / first.value).ln();
        assert!((slope - 0.5).abs() <= 1e-6, "slope {slope}");

        let spec = SweepSpec {
            parameter: SweepParameter::Theta,
            range: SweepRange { min: 2.5e14, max: 1e15, points: 2, spacing: Spacing::Linear },
            pin_diameter: true,
            outputs: None,
        };
        let table = run_sweep(&base, &spec).unwrap();
        assert_rel(
            table.rows[1].report.l_installation_m,
            2.0 * table.rows[0].report.l_installation_m,
            1e-12,
        );
        assert_rel(table.rows[1].threads, 2.0 * table.rows[0].threads, 1e-12);
    }

    #[test]
    fn sweep_identifies_the_offending_point() {
        let base = tvhc_bundle(copper_tech());
        let spec = SweepSpec {
            parameter: SweepParameter::NodeCount,
            range: SweepRange { min: 1.0, max: 10.0, points: 3, spacing: Spacing::Linear },
            pin_diameter: false,
            outputs: None,
        };
        let err = run_sweep(&base, &spec).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("sweep point 0"), "got: {message}");
        assert!(message.contains("node_count"), "got: {message}");
    }

    #[test]
    fn sweep_rejects_invalid_ranges_and_columns() {
        let base = tvhc_bundle(copper_tech());
        let mut spec = theta_sweep(1e12, 1e16, 41, false);
        spec.range.points = 1;
        assert!(run_sweep(&base, &spec).is_err());

        let mut spec = theta_sweep(1e12, 1e16, 5, false);
        spec.range.min = 1e16;
        assert!(run_sweep(&base, &spec).is_err());

        let mut spec = theta_sweep(0.0, 1e16, 5, false);
        spec.range.spacing = Spacing::Log;
        assert!(run_sweep(&base, &spec).is_err());

        let mut spec = theta_sweep(1e12, 1e16, 5, false);
        spec.outputs = Some(vec!["no_such_column".into()]);
        let err = run_sweep(&base, &spec).unwrap_err();
        assert!(err.to_string().contains("no_such_column"));
    }

    #[test]
    fn output_selection_orders_columns() {
        let base = tvhc_bundle(copper_tech());
        let mut spec = theta_sweep(1e14, 1e15, 2, false);
        spec.outputs = Some(vec!["threads".into(), "l_installation_m".into()]);
        let table = run_sweep(&base, &spec).unwrap();
        assert_eq!(table.outputs, vec!["threads", "l_installation_m"]);
    }

    #[test]
    fn copper_htsc_comparison_reproduces_reference_ratios() {
        let base = tvhc_bundle(copper_tech());
        let table = compare_technologies(
            &base,
            &[("copper".into(), copper_tech()), ("htsc".into(), htsc_tech())],
        )
        .unwrap();
        let htsc = table.columns[1].outcome.as_ref().unwrap();
        let packing_idx = RATIO_FIELDS.iter().position(|f| *f == "l_packing_m").unwrap();
        let threads_idx = RATIO_FIELDS.iter().position(|f| *f == "threads").unwrap();
        assert_rel(htsc.ratios[packing_idx].unwrap(), 0.6, 1e-12);
        assert_rel(htsc.ratios[threads_idx].unwrap(), 0.27, 1e-12);
    }

    #[test]
    fn self_comparison_yields_unit_ratios() {
        let base = tvhc_bundle(copper_tech());
        let table = compare_technologies(
            &base,
            &[("a".into(), copper_tech()), ("b".into(), copper_tech())],
        )
        .unwrap();
        for column in &table.columns {
            let values = column.outcome.as_ref().unwrap();
            assert!(values.ratios.iter().all(|r| *r == Some(1.0)));
        }
    }

    #[test]
    fn failed_technology_marks_its_column_only() {
        let base = tvhc_bundle(copper_tech());
        let mut broken = htsc_tech();
        broken.packing_cross_section = None;
        let table = compare_technologies(
            &base,
            &[("copper".into(), copper_tech()), ("broken".into(), broken)],
        )
        .unwrap();
        assert!(table.columns[0].outcome.is_ok());
        let failure = table.columns[1].outcome.as_ref().unwrap_err();
        assert!(failure.contains("packing_cross_section"), "got: {failure}");

        assert!(compare_technologies(&base, &[("only".into(), copper_tech())]).is_err());
    }

    #[test]
    fn packing_ratio_matches_the_analytic_form_on_random_pairs() {
        let base = tvhc_bundle(copper_tech());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut a = copper_tech();
            a.packing_cross_section = Some(10f64.powf(rng.gen_range(-9.0..-6.0)));
            a.link_bandwidth = 10f64.powf(rng.gen_range(8.5..10.5));
            let mut b = copper_tech();
            b.packing_cross_section = Some(10f64.powf(rng.gen_range(-9.0..-6.0)));
            b.link_bandwidth = 10f64.powf(rng.gen_range(8.5..10.5));

            let expected = ((b.packing_cross_section.unwrap() / a.packing_cross_section.unwrap())
                * (a.link_bandwidth / b.link_bandwidth))
                .sqrt();
            let table = compare_technologies(
                &base,
                &[("a".into(), a.clone()), ("b".into(), b.clone())],
            )
            .unwrap();
            let packing_idx = RATIO_FIELDS.iter().position(|f| *f == "l_packing_m").unwrap();
            let ratio = table.columns[1].outcome.as_ref().unwrap().ratios[packing_idx].unwrap();
            assert_rel(ratio, expected, 1e-12);
        }
    }

    #[test]
    fn packing_break_even_matches_the_closed_form() {
        let baseline = tvhc_bundle(copper_tech());
        let candidate = tvhc_bundle(htsc_tech());
        let query = BreakEvenQuery {
            metric: BreakEvenMetric::PackingCore,
            free_parameter: FreeParameter::PackingCrossSection,
            lo: 1e-8,
            hi: 1e-5,
        };
        let solution = break_even(&baseline, &candidate, &query).unwrap();
        assert_rel(solution.parameter_value, 2.777_777_777_777_777_6e-7, 1e-4);
        assert_rel(solution.candidate_metric, solution.baseline_metric, 1e-5);
    }

    #[test]
    fn thread_break_even_matches_the_closed_form() {
        let baseline = tvhc_bundle(copper_tech());
        let candidate = tvhc_bundle(htsc_tech());
        let query = BreakEvenQuery {
            metric: BreakEvenMetric::RequiredThreads,
            free_parameter: FreeParameter::PackingCrossSection,
            lo: 1e-8,
            hi: 1e-5,
        };
        let solution = break_even(&baseline, &candidate, &query).unwrap();
        assert_rel(solution.parameter_value, 1.371_742_112_482_853_3e-6, 1e-4);
        assert_rel(solution.candidate_metric, solution.baseline_metric, 1e-5);
    }

    #[test]
    fn identical_bundles_break_even_at_the_current_value() {
        let baseline = tvhc_bundle(copper_tech());
        let query = BreakEvenQuery {
            metric: BreakEvenMetric::PackingCore,
            free_parameter: FreeParameter::PackingCrossSection,
            lo: 5e-8,
            hi: 2e-7,
        };
        let solution = break_even(&baseline, &baseline, &query).unwrap();
        assert_rel(solution.parameter_value, 1e-7, 1e-5);
    }

    #[test]
    fn missing_bracket_reports_both_endpoints() {
        let baseline = tvhc_bundle(copper_tech());
        let candidate = tvhc_bundle(htsc_tech());
        let query = BreakEvenQuery {
            metric: BreakEvenMetric::PackingCore,
            free_parameter: FreeParameter::PackingCrossSection,
            lo: 1e-9,
            hi: 2e-9,
        };
        let err = break_even(&baseline, &candidate, &query).unwrap_err();
        match err {
            Error::NoCrossing { f_lo, f_hi, .. } => {
                assert!(f_lo < 0.0 && f_hi < 0.0);
            }
            other => panic!("expected NoCrossing, got {other}"),
        }

        let bad = BreakEvenQuery {
            metric: BreakEvenMetric::PackingCore,
            free_parameter: FreeParameter::PackingCrossSection,
            lo: 1e-5,
            hi: 1e-8,
        };
        assert!(break_even(&baseline, &candidate, &bad).is_err());
    }
}
