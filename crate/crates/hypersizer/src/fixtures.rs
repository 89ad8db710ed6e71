//! Shared fixtures for unit tests: the reference TVHC machine
//! and its three candidate interconnect technologies.

use crate::bundle::Bundle;
use crate::machine::{
    CoolingModel, DriverModel, FormulaVariant, InterconnectTech, MachineConfig, Medium,
    TrafficModel,
};
use crate::sizing::EnergyModel;

/// Asserts `actual` is within relative tolerance `tol` of `expected`
/// (absolute tolerance when `expected` is zero).
pub(crate) fn assert_rel(actual: f64, expected: f64, tol: f64) {
    let err = if expected == 0.0 {
        actual.abs()
    } else {
        (actual - expected).abs() / expected.abs()
    };
    assert!(
        err <= tol,
        "actual {actual:e} vs expected {expected:e}: error {err:e} exceeds {tol:e}"
    );
}

/// The reference TVHC machine: 50,000 node pairs at 20 GHz with
/// 128-bit words, 10 cycles per hop, 1 ns memory response.
pub(crate) fn tvhc_machine() -> MachineConfig {
    MachineConfig {
        node_count: 5e4,
        clock_frequency: 2e10,
        word_width: 128.0,
        reference_word_width: 128.0,
        hop_processing_cycles: 10.0,
        memory_response_time: 1e-9,
        network_diameter_override: None,
    }
}

/// Insulated thin copper wiring: 3.6 Gbit/s per link, 9e7 m/s, 20 mA at
/// 1 V drivers.
pub(crate) fn copper_tech() -> InterconnectTech {
    InterconnectTech {
        medium: Medium::GuidedVolume,
        link_bandwidth: 3.6e9,
        signal_speed: 9e7,
        resistivity: Some(1.75e-8),
        electrical_cross_section: Some(2.5e-8),
        packing_cross_section: Some(1e-7),
        emitter_footprint: None,
        driver: DriverModel::CurrentVoltage { signal_current: 0.02, drive_voltage: 1.0 },
    }
}

/// Open-space optical links: 40 Gbit/s per link at light speed, surface
/// laser emitters with a 200 µm × 200 µm footprint drawing 0.1 W each.
pub(crate) fn optical_tech() -> InterconnectTech {
    InterconnectTech {
        medium: Medium::OpenSpace,
        link_bandwidth: 4e10,
        signal_speed: 3e8,
        resistivity: None,
        electrical_cross_section: None,
        packing_cross_section: None,
        emitter_footprint: Some(4e-8),
        driver: DriverModel::FixedPower { per_driver_power: 0.1 },
    }
}

/// Ballistic high-critical-temperature superconductor wiring: 10 Gbit/s
/// per link, 2e8 m/s, 10 µW fixed-power drivers. The resistivity is a
/// nominal near-zero placeholder; the static-dissipation model does not
/// apply to fixed-power drivers.
pub(crate) fn htsc_tech() -> InterconnectTech {
    InterconnectTech {
        medium: Medium::GuidedVolume,
        link_bandwidth: 1e10,
        signal_speed: 2e8,
        resistivity: Some(1e-15),
        electrical_cross_section: Some(2.5e-8),
        packing_cross_section: Some(1e-7),
        emitter_footprint: None,
        driver: DriverModel::FixedPower { per_driver_power: 1e-5 },
    }
}

/// Full evaluation bundle for the reference machine around a given
/// technology, in the simplified variant.
pub(crate) fn tvhc_bundle(technology: InterconnectTech) -> Bundle {
    Bundle {
        machine: tvhc_machine(),
        traffic: TrafficModel::for_variant(FormulaVariant::PaperSimplified),
        cooling: CoolingModel::default(),
        energy: EnergyModel::default(),
        technology,
        variant: FormulaVariant::PaperSimplified,
    }
}
