//! Acceptance gate: ten criteria covering reference-figure reproduction,
//! scaling laws, algebraic identities, simulator behavior, break-even
//! solving, and the CLI contract. Each test prints one
//! `ACCEPTANCE Cn PASS` line (visible with `--nocapture`).

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypersizer::bundle::Bundle;
use hypersizer::config::ConfigFile;
use hypersizer::explorer::{
    break_even, run_sweep, BreakEvenMetric, BreakEvenQuery, FreeParameter, Spacing,
    SweepParameter, SweepRange, SweepSpec,
};
use hypersizer::machine::{
    wire_count, CoolingModel, DriverModel, FormulaVariant, InterconnectTech, MachineConfig,
    Medium, TrafficModel, MEAN_DISTANCE_COEFFICIENT,
};
use hypersizer::parallelism::{required_threads, threads_from_performance};
use hypersizer::report::FullReport;
use hypersizer::simulator::{find_knee, run_simulation, utilization_curve, SimConfig};
use hypersizer::sizing::{packing_diameter, static_core_diameter, static_power, Binding, EnergyModel};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn preset_path(name: &str) -> PathBuf {
    workspace_root().join("presets").join(name)
}

fn load_preset(name: &str) -> Bundle {
    ConfigFile::load(&preset_path(name)).unwrap().bundle(None).unwrap()
}

fn rel_diff(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}

#[track_caller]
fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    let diff = rel_diff(actual, expected);
    assert!(
        diff <= tol,
        "{what}: got {actual:.9e}, want {expected:.9e} within {tol:.1e} (off by {diff:.3e})"
    );
}

/// A random, always-valid guided-volume design point.
fn random_guided_bundle(rng: &mut ChaCha8Rng) -> Bundle {
    let variant = if rng.gen_bool(0.5) {
        FormulaVariant::PaperSimplified
    } else {
        FormulaVariant::Exact
    };
    let driver = if rng.gen_bool(0.5) {
        DriverModel::CurrentVoltage {
            signal_current: 10f64.powf(rng.gen_range(-3.0..-1.0)),
            drive_voltage: rng.gen_range(0.5..2.0),
        }
    } else {
        DriverModel::FixedPower { per_driver_power: 10f64.powf(rng.gen_range(-6.0..-1.0)) }
    };
    Bundle {
        machine: MachineConfig {
            node_count: rng.gen_range(2.0_f64..1e6).round().max(2.0),
            clock_frequency: 10f64.powf(rng.gen_range(8.0..11.0)),
            word_width: rng.gen_range(8.0_f64..256.0).round(),
            reference_word_width: rng.gen_range(8.0_f64..256.0).round(),
            hop_processing_cycles: rng.gen_range(0.0_f64..20.0).round(),
            memory_response_time: 10f64.powf(rng.gen_range(-9.5..-8.0)),
            network_diameter_override: None,
        },
        traffic: TrafficModel {
            load_rate: 1.32,
            store_rate: 0.78,
            saturation_load: rng.gen_range(0.1..1.0),
            traffic_factor: variant.traffic_factor(),
        },
        cooling: CoolingModel {
            surface_power_density: 10f64.powf(rng.gen_range(4.0..6.0)),
            vertical_pitch: 10f64.powf(rng.gen_range(-3.0..-2.0)),
        },
        energy: EnergyModel { energy_per_op: 10f64.powf(rng.gen_range(-11.0..-9.0)) },
        technology: InterconnectTech {
            medium: Medium::GuidedVolume,
            link_bandwidth: 10f64.powf(rng.gen_range(8.0..11.0)),
            signal_speed: 10f64.powf(rng.gen_range(7.0..8.4)),
            resistivity: Some(10f64.powf(rng.gen_range(-9.0..-7.0))),
            electrical_cross_section: Some(10f64.powf(rng.gen_range(-9.0..-7.0))),
            packing_cross_section: Some(10f64.powf(rng.gen_range(-8.0..-6.0))),
            emitter_footprint: None,
            driver,
        },
        variant,
    }
}

#[test]
fn c01_copper_golden_numbers() {
    let bundle = load_preset("tvhc-copper.json");
    let report = bundle.size().unwrap();

    assert_eq!(report.theta_ops, 1e15, "theta must be exactly 1e15 op/s");
    assert_close(report.l_dynamic_m, 0.798, 0.01, "copper dynamic core");
    assert_close(report.l_driver_m, 4.91, 0.01, "copper driver core");
    assert_close(report.l_packing_m, 9.74, 0.015, "copper packing core");
    assert_eq!(report.binding, Binding::Packing, "copper binding constraint");
    assert_eq!(report.l_installation_m, report.l_packing_m);

    let threads = bundle.propagation_threads(report.l_installation_m).unwrap();
    assert_close(threads, 69_240.0, 0.02, "copper latency-hiding threads");

    println!(
        "ACCEPTANCE C1 PASS: copper reference point (theta 1e15, L_dyn 0.798 m, \
         L_dr 4.91 m, L_g 9.74 m, packing-bound, T ~69.2k)"
    );
}

#[test]
fn c02_optical_preset() {
    let bundle = load_preset("tvhc-optical.json");
    let report = bundle.size().unwrap();

    // Direct arithmetic, independent of the library's own formula code:
    // N = f0 * W * Q * D / (B_w * alpha).
    let n_expected = 2e10 * 128.0 * 5e4 * 16.0 / (4e10 * 0.6);
    assert_close(report.n_wires, n_expected, 0.001, "optical wire count");
    assert_close(report.n_wires, 8.533e7, 0.001, "optical wire count (quoted)");
    assert_close(report.l_packing_m, 2.08, 0.005, "optical packing core");
    assert_close(report.l_packing_m, 2.0, 0.05, "optical packing core vs round reference");
    assert_close(report.l_driver_m, 3.30, 0.01, "optical driver core at 0.1 W/emitter");
    assert_eq!(report.binding, Binding::Driver, "optical binding constraint");

    println!(
        "ACCEPTANCE C2 PASS: optical reference point (N 8.533e7, L_g 2.08 m, \
         L_dr 3.30 m, driver-bound)"
    );
}

#[test]
fn c03_htsc_preset() {
    let copper = load_preset("tvhc-copper.json");
    let htsc = load_preset("tvhc-htsc.json");
    let copper_report = copper.size().unwrap();
    let htsc_report = htsc.size().unwrap();

    let packing_ratio = htsc_report.l_packing_m / copper_report.l_packing_m;
    assert!(
        (packing_ratio - 0.600).abs() <= 1e-3,
        "packing ratio {packing_ratio} should be 0.600 +/- 1e-3"
    );

    let copper_threads = copper.propagation_threads(copper_report.l_installation_m).unwrap();
    let htsc_threads = htsc.propagation_threads(htsc_report.l_installation_m).unwrap();
    let thread_ratio = htsc_threads / copper_threads;
    assert!(
        (thread_ratio - 0.27).abs() <= 0.01,
        "thread ratio {thread_ratio} should be 0.27 +/- 0.01"
    );

    assert_close(htsc_report.l_driver_m, 0.066, 0.02, "HTSC driver core at 10 uW/driver");

    println!(
        "ACCEPTANCE C3 PASS: HTSC vs copper (packing ratio 0.600, thread ratio 0.27, \
         L_dr 0.066 m)"
    );
}

#[test]
fn c04_discrepancy_ledger_golden_files() {
    for preset in ["tvhc-copper", "tvhc-optical", "tvhc-htsc"] {
        let bundle = load_preset(&format!("{preset}.json"));
        let report = FullReport::evaluate(&bundle, Default::default()).unwrap();
        let json = report.to_json();

        let golden_path = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(format!("{preset}.json"));
        let golden = std::fs::read_to_string(&golden_path).unwrap();
        assert_eq!(
            json.trim_end(),
            golden.trim_end(),
            "{preset}: report drifted from {}",
            golden_path.display()
        );

        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let entries = parsed["discrepancies"].as_array().unwrap();
        let entry = |id: &str| -> &serde_json::Value {
            entries
                .iter()
                .find(|e| e["id"] == id)
                .unwrap_or_else(|| panic!("{preset}: missing ledger entry {id}"))
        };
        let check = |id: &str, model: f64, reference: f64| {
            let e = entry(id);
            assert_close(e["model_value"].as_f64().unwrap(), model, 1e-5, id);
            assert_close(e["reference_value"].as_f64().unwrap(), reference, 1e-5, id);
            assert!(
                !e["note"].as_str().unwrap().is_empty(),
                "{id} must explain the conflict"
            );
        };

        check("network_latency_reference", 8e-9, 5e-9);
        match preset {
            "tvhc-copper" => check("static_core_reference", 5.15249e-2, 8e-3),
            "tvhc-optical" => check("emitter_power_reference", 0.1, 1e-4),
            "tvhc-htsc" => {
                check("driver_core_reference", 6.59241e-2, 0.5);
                check("break_even_packing_reference", 2.77778e-7, 6e-7);
                check("break_even_threads_reference", 1.37174e-6, 6e-7);
                check("thread_reduction_reference", 0.27, 0.40);
            }
            _ => unreachable!(),
        }
    }

    println!(
        "ACCEPTANCE C4 PASS: discrepancy ledger (static core, hop latency, emitter \
         power, HTSC driver core, break-even) carries both values in every report"
    );
}

#[test]
fn c05_scaling_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let mut base = random_guided_bundle(&mut rng);
        // Pin the diameter on both legs so only sqrt(theta) scaling remains.
        let d = base.machine.effective_diameter().unwrap();
        base.machine.network_diameter_override = Some(d);
        let mut quadrupled = base.clone();
        quadrupled.machine.node_count *= 4.0;

        let r0 = base.size().unwrap();
        let r1 = quadrupled.size().unwrap();
        assert_eq!(r1.theta_ops, 4.0 * r0.theta_ops, "case {case}: theta x4");

        for (name, a, b) in [
            ("l_static_m", r1.l_static_m, r0.l_static_m),
            ("l_dynamic_m", r1.l_dynamic_m, r0.l_dynamic_m),
            ("l_driver_m", r1.l_driver_m, r0.l_driver_m),
            ("l_power_m", r1.l_power_m, r0.l_power_m),
            ("l_packing_m", r1.l_packing_m, r0.l_packing_m),
            ("l_installation_m", r1.l_installation_m, r0.l_installation_m),
        ] {
            if b == 0.0 {
                assert_eq!(a, 0.0, "case {case}: {name} zero stays zero");
            } else {
                assert_close(a, 2.0 * b, 1e-9, &format!("case {case}: {name} doubles"));
            }
        }

        let t0 = base.propagation_threads(r0.l_installation_m).unwrap();
        let t1 = quadrupled.propagation_threads(r1.l_installation_m).unwrap();
        assert_close(t1, 2.0 * t0, 1e-9, &format!("case {case}: threads double"));
    }

    // Log-log slope over two decades of a pinned-diameter sweep.
    let bundle = load_preset("tvhc-copper.json");
    let table = run_sweep(
        &bundle,
        &SweepSpec {
            parameter: SweepParameter::Theta,
            range: SweepRange { min: 1e14, max: 1e16, points: 21, spacing: Spacing::Log },
            pin_diameter: true,
            outputs: Some(vec!["l_installation_m".into(), "threads".into()]),
        },
    )
    .unwrap();
    for pair in table.rows.windows(2) {
        let slope_l = (pair[1].report.l_installation_m / pair[0].report.l_installation_m).ln()
            / (pair[1].value / pair[0].value).ln();
        assert!(
            (slope_l - 0.5).abs() <= 1e-6,
            "installation log-log slope {slope_l} should be 0.5 +/- 1e-6"
        );
        let slope_t =
            (pair[1].threads / pair[0].threads).ln() / (pair[1].value / pair[0].value).ln();
        assert!(
            (slope_t - 0.5).abs() <= 1e-6,
            "thread log-log slope {slope_t} should be 0.5 +/- 1e-6"
        );
    }

    println!(
        "ACCEPTANCE C5 PASS: quadrupling theta at pinned diameter doubles every \
         core and the thread count (100 random configs, 1e-9); log-log slope 0.5 +/- 1e-6"
    );
}

#[test]
fn c06_algebraic_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    for case in 0..100 {
        let bundle = random_guided_bundle(&mut rng);
        let cfg = &bundle.machine;
        let tech = &bundle.technology;
        let traffic = &bundle.traffic;

        let theta = cfg.node_count * cfg.clock_frequency
            * (cfg.word_width / cfg.reference_word_width);
        let direct = threads_from_performance(theta, cfg, tech, traffic).unwrap();

        let n = wire_count(cfg, tech, traffic).unwrap();
        let l_g = packing_diameter(n, tech, FormulaVariant::PaperSimplified).unwrap();
        let composed = required_threads(l_g, cfg, tech).unwrap();

        assert_close(direct, composed, 1e-12, &format!("case {case}: thread identity"));
    }

    println!(
        "ACCEPTANCE C6 PASS: threads_from_performance equals required_threads over \
         the packing diameter within 1e-12 on 100 random configs"
    );
}

#[test]
fn c07_variant_consistency() {
    let expected_ratio = 12f64.sqrt() / std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..30 {
        let bundle = random_guided_bundle(&mut rng);
        let n = wire_count(&bundle.machine, &bundle.technology, &bundle.traffic).unwrap();
        let simplified =
            packing_diameter(n, &bundle.technology, FormulaVariant::PaperSimplified).unwrap();
        let exact = packing_diameter(n, &bundle.technology, FormulaVariant::Exact).unwrap();
        assert_close(
            exact / simplified,
            expected_ratio,
            1e-12,
            &format!("case {case}: packing variant ratio"),
        );
    }

    // The exact static core must satisfy its defining equality
    // P_s(L) = p_v * pi * L^3 / 6 — checked on random current-voltage
    // technologies and on the copper preset.
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let mut bundles: Vec<Bundle> = Vec::new();
    while bundles.len() < 20 {
        let b = random_guided_bundle(&mut rng);
        if b.technology.driver.signal_current().is_some() {
            bundles.push(b);
        }
    }
    bundles.push(load_preset("tvhc-copper.json"));
    for (case, mut bundle) in bundles.into_iter().enumerate() {
        bundle.variant = FormulaVariant::Exact;
        bundle.traffic.traffic_factor = FormulaVariant::Exact.traffic_factor();
        let cfg = &bundle.machine;
        let theta = cfg.node_count * cfg.clock_frequency
            * (cfg.word_width / cfg.reference_word_width);
        let l = static_core_diameter(
            theta,
            cfg,
            &bundle.technology,
            &bundle.traffic,
            &bundle.cooling,
            FormulaVariant::Exact,
        )
        .unwrap();
        assert!(l > 0.0, "case {case}: static core must be positive");
        let n = wire_count(cfg, &bundle.technology, &bundle.traffic).unwrap();
        let dissipated = static_power(n, l, &bundle.technology, MEAN_DISTANCE_COEFFICIENT).unwrap();
        let absorbed =
            bundle.cooling.volumetric_power_density() * std::f64::consts::PI * l.powi(3) / 6.0;
        assert_close(
            dissipated,
            absorbed,
            1e-9,
            &format!("case {case}: static-core defining equality"),
        );
        checked += 1;
    }
    assert_eq!(checked, 21);

    println!(
        "ACCEPTANCE C7 PASS: exact/simplified packing ratio is sqrt(12)/pi within \
         1e-12; exact static core satisfies P_s = p_v*pi*L^3/6 within 1e-9"
    );
}

#[test]
fn c08_simulator_vs_analytic_oracle() {
    // Utilization against min(1, T/(1+l)) at jitter 0, p 1.
    for &latency in &[10u32, 100, 1000] {
        let samples: Vec<u32> = [
            1,
            latency / 4,
            latency / 2,
            3 * latency / 4,
            latency - 1,
            latency + 1,
            3 * latency / 2,
            2 * latency,
        ]
        .iter()
        .copied()
        .filter(|&t| t >= 1)
        .collect();
        for threads in samples {
            let sim = SimConfig::new(threads, latency);
            let result = run_simulation(&sim).unwrap();
            let oracle = (threads as f64 / (1.0 + latency as f64)).min(1.0);
            assert!(
                (result.utilization - oracle).abs() <= 0.02 * oracle.max(1e-3),
                "l={latency} T={threads}: utilization {} vs oracle {oracle}",
                result.utilization
            );
        }
    }

    // Knee within 10% of l+1, with and without jitter.
    for &latency in &[10u32, 100, 1000] {
        for &jitter in &[0.0, 0.2] {
            let mut base = SimConfig::new(1, latency);
            base.latency_jitter = jitter;
            let range: Vec<u32> = if latency <= 100 {
                (1..=2 * latency).collect()
            } else {
                // Dense near the expected knee, sparse extremes to pin the
                // curve's maximum.
                let mut r: Vec<u32> = vec![1, 500];
                r.extend((900..=1100).step_by(5));
                r.extend([1500, 2000]);
                r
            };
            let curve = utilization_curve(&base, &range).unwrap();
            let knee = find_knee(&curve).unwrap();
            let target = (latency + 1) as f64;
            assert!(
                (knee as f64 - target).abs() <= 0.10 * target,
                "l={latency} jitter={jitter}: knee {knee} should be within 10% of {target}"
            );
        }
    }

    // Bit-identical reruns per seed, including jitter and non-memory ops.
    let mut sim = SimConfig::new(77, 100);
    sim.latency_jitter = 0.3;
    sim.memory_op_probability = 0.9;
    sim.seed = 123;
    let a = run_simulation(&sim).unwrap();
    let b = run_simulation(&sim).unwrap();
    assert_eq!(a, b, "same seed must give bit-identical results");

    println!(
        "ACCEPTANCE C8 PASS: utilization matches min(1, T/(1+l)) within 2% for \
         l in {{10,100,1000}}; knee within 10% of l+1 (jitter 0 and 0.2); reruns \
         are bit-identical per seed"
    );
}

#[test]
fn c09_break_even_round_trip() {
    let copper = load_preset("tvhc-copper.json");
    let htsc = load_preset("tvhc-htsc.json");

    // Direct bisection oracle built from raw arithmetic only.
    let n_cu = 2e10 * 128.0 * 5e4 * 16.0 / (3.6e9 * 0.6);
    let n_ht = 2e10 * 128.0 * 5e4 * 16.0 / (1e10 * 0.6);
    let l_cu = (1e-7_f64 * n_cu).sqrt();
    let gap = |sigma: f64| (sigma * n_ht).sqrt() - l_cu;
    let (mut lo, mut hi) = (1e-9, 1e-5);
    assert!(gap(lo) < 0.0 && gap(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle_sigma = 0.5 * (lo + hi);

    let query = BreakEvenQuery {
        metric: BreakEvenMetric::PackingCore,
        free_parameter: FreeParameter::PackingCrossSection,
        lo: 1e-9,
        hi: 1e-5,
    };
    let solution = break_even(&copper, &htsc, &query).unwrap();
    assert_close(solution.parameter_value, oracle_sigma, 1e-3, "packing break-even vs oracle");
    assert_close(solution.parameter_value, 2.78e-7, 1e-3, "packing break-even vs quoted");
    assert_close(
        solution.candidate_metric,
        solution.baseline_metric,
        1e-5,
        "metric parity at the solved parameter",
    );

    // Round trip: rebuild the candidate at the solved value and re-measure.
    let mut tech = htsc.technology.clone();
    tech.packing_cross_section = Some(solution.parameter_value);
    let resized = htsc.with_technology(tech).size().unwrap();
    assert_close(
        resized.l_packing_m,
        copper.size().unwrap().l_packing_m,
        1e-5,
        "independent re-evaluation at the solved parameter",
    );

    // The thread metric crosses at a different, larger cross-section.
    let query = BreakEvenQuery {
        metric: BreakEvenMetric::RequiredThreads,
        free_parameter: FreeParameter::PackingCrossSection,
        lo: 1e-9,
        hi: 1e-4,
    };
    let solution = break_even(&copper, &htsc, &query).unwrap();
    assert_close(solution.parameter_value, 1.371_742_112_482_853_3e-6, 1e-4, "thread break-even");
    assert_close(
        solution.candidate_metric,
        solution.baseline_metric,
        1e-5,
        "thread parity at the solved parameter",
    );

    println!(
        "ACCEPTANCE C9 PASS: copper/HTSC packing break-even 2.78e-7 m^2 matches a \
         direct bisection oracle within 0.1%; solved parameters reproduce metric \
         parity within 1e-5"
    );
}

#[test]
fn c10_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_hypersizer");
    let root = workspace_root();

    let run_cli = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .current_dir(&root)
            .output()
            .expect("CLI invocation should spawn")
    };

    // The three preset invocations: exit 0, byte-stable across reruns,
    // matching the committed golden bytes.
    for preset in ["tvhc-copper", "tvhc-optical", "tvhc-htsc"] {
        let arg = format!("presets/{preset}.json");
        let first = run_cli(&["size", &arg]);
        let second = run_cli(&["size", &arg]);
        assert!(first.status.success(), "{preset}: exit code {:?}", first.status.code());
        assert_eq!(first.stdout, second.stdout, "{preset}: output must be byte-stable");

        let golden = std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{preset}.json")),
        )
        .unwrap();
        let stdout = String::from_utf8(first.stdout).unwrap();
        assert_eq!(stdout.trim_end(), golden.trim_end(), "{preset}: drifted from golden file");
    }

    // Spot-check the reference figures through the CLI surface.
    let copper = run_cli(&["size", "presets/tvhc-copper.json"]);
    let parsed: serde_json::Value =
        serde_json::from_slice(&copper.stdout).expect("CLI emits valid JSON");
    assert_eq!(parsed["l_packing_m"].as_f64().unwrap(), 9.73729);
    assert_eq!(parsed["binding"].as_str().unwrap(), "packing");

    // A deterministic simulate run is also byte-stable.
    let sim_args =
        ["simulate", "--latency", "100", "--threads-range", "1:201:20", "--jitter", "0.25",
         "--seed", "9"];
    let first = run_cli(&sim_args);
    let second = run_cli(&sim_args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "simulate must be byte-stable per seed");

    // Invalid config: exit 2, offending field named on stderr.
    let bad_path = std::env::temp_dir().join(format!("hypersizer-bad-{}.json", std::process::id()));
    let bad = std::fs::read_to_string(preset_path("tvhc-copper.json"))
        .unwrap()
        .replace("\"saturation_load\": 0.6", "\"saturation_load\": 0.0");
    std::fs::write(&bad_path, bad).unwrap();
    let output = run_cli(&["size", bad_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2), "invalid config must exit 2");
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        stderr.contains("traffic.saturation_load"),
        "stderr must name the offending field, got: {stderr}"
    );
    std::fs::remove_file(&bad_path).ok();

    // Missing file and malformed flags are input errors too.
    let output = run_cli(&["size", "no-such-config.json"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run_cli(&["simulate", "--latency", "10", "--threads-range", "5:1:1"]);
    assert_eq!(output.status.code(), Some(2));

    println!(
        "ACCEPTANCE C10 PASS: preset CLI runs are byte-stable and match the golden \
         files; invalid inputs exit 2 naming the offending field"
    );
}
