//! JSON configuration files: schema, defaults, strict validation, and
//! conversion into evaluation bundles.
//!
//! Unknown keys are rejected (typos surface as parse errors naming the
//! offending key); out-of-range values surface as section-qualified
//! validation errors (`traffic.saturation_load: must be in (0, 1]`).

use std::path::Path;

use serde::Deserialize;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::machine::{
    CoolingModel, DriverModel, FormulaVariant, InterconnectTech, MachineConfig, Medium,
    TrafficModel,
};
use crate::simulator::SimConfig;
use crate::sizing::EnergyModel;

/// A complete configuration file. `machine` and `technology` are
/// required; every other section falls back to reference defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Display name, used in comparison tables; defaults to the file stem.
    #[serde(default)]
    pub name: Option<String>,
    /// Free-form provenance notes; carried through untouched, never
    /// interpreted.
    #[serde(default)]
    pub notes: Option<serde_json::Value>,
    pub machine: MachineSection,
    #[serde(default)]
    pub traffic: TrafficSection,
    #[serde(default)]
    pub cooling: CoolingSection,
    #[serde(default)]
    pub energy: EnergySection,
    pub technology: TechnologySection,
    /// Formula family: `paper_simplified` (default) or `exact`.
    #[serde(default)]
    pub variant: Option<VariantName>,
    #[serde(default)]
    pub simulation: Option<SimulationSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    PaperSimplified,
    Exact,
}

impl From<VariantName> for FormulaVariant {
    fn from(name: VariantName) -> FormulaVariant {
        match name {
            VariantName::PaperSimplified => FormulaVariant::PaperSimplified,
            VariantName::Exact => FormulaVariant::Exact,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineSection {
    /// Processing-element/memory pairs (Q).
    pub node_count: f64,
    /// Clock frequency f0 in Hz.
    pub clock_frequency: f64,
    /// Memory word width W in bits.
    pub word_width: f64,
    /// Reference word width W0 in bits.
    #[serde(default = "default_reference_word_width")]
    pub reference_word_width: f64,
    /// Message-processing cycles per hop (C).
    #[serde(default = "default_hop_processing_cycles")]
    pub hop_processing_cycles: f64,
    /// Memory response time in seconds.
    #[serde(default = "default_memory_response_time")]
    pub memory_response_time: f64,
    /// Pins the network diameter (hops) instead of ceil(log2 Q).
    #[serde(default)]
    pub network_diameter_override: Option<f64>,
}

fn default_reference_word_width() -> f64 {
    128.0
}

fn default_hop_processing_cycles() -> f64 {
    10.0
}

fn default_memory_response_time() -> f64 {
    1e-9
}

impl MachineSection {
    fn to_domain(&self) -> MachineConfig {
        MachineConfig {
            node_count: self.node_count,
            clock_frequency: self.clock_frequency,
            word_width: self.word_width,
            reference_word_width: self.reference_word_width,
            hop_processing_cycles: self.hop_processing_cycles,
            memory_response_time: self.memory_response_time,
            network_diameter_override: self.network_diameter_override,
        }
    }
}

/// Memory traffic mix. The per-variant traffic factor is not a file key:
/// it follows from the formula variant at bundle time.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficSection {
    /// Memory load requests per node per cycle.
    #[serde(default = "default_load_rate")]
    pub load_rate: f64,
    /// Store replies per node per cycle.
    #[serde(default = "default_store_rate")]
    pub store_rate: f64,
    /// Usable fraction of theoretical bandwidth (α), in (0, 1].
    #[serde(default = "default_saturation_load")]
    pub saturation_load: f64,
}

fn default_load_rate() -> f64 {
    1.32
}

fn default_store_rate() -> f64 {
    0.78
}

fn default_saturation_load() -> f64 {
    0.6
}

impl Default for TrafficSection {
    fn default() -> Self {
        TrafficSection {
            load_rate: default_load_rate(),
            store_rate: default_store_rate(),
            saturation_load: default_saturation_load(),
        }
    }
}

impl TrafficSection {
    fn to_domain(&self, variant: FormulaVariant) -> TrafficModel {
        TrafficModel {
            load_rate: self.load_rate,
            store_rate: self.store_rate,
            saturation_load: self.saturation_load,
            traffic_factor: variant.traffic_factor(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingSection {
    /// Removable power per cooled surface, in W/m².
    #[serde(default = "default_surface_power_density")]
    pub surface_power_density: f64,
    /// Vertical pitch between cooled layers, in m.
    #[serde(default = "default_vertical_pitch")]
    pub vertical_pitch: f64,
}

fn default_surface_power_density() -> f64 {
    5e5
}

fn default_vertical_pitch() -> f64 {
    5e-3
}

impl Default for CoolingSection {
    fn default() -> Self {
        CoolingSection {
            surface_power_density: default_surface_power_density(),
            vertical_pitch: default_vertical_pitch(),
        }
    }
}

impl CoolingSection {
    fn to_domain(&self) -> CoolingModel {
        CoolingModel {
            surface_power_density: self.surface_power_density,
            vertical_pitch: self.vertical_pitch,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySection {
    /// Energy per executed operation, in J/op.
    #[serde(default = "default_energy_per_op")]
    pub energy_per_op: f64,
}

fn default_energy_per_op() -> f64 {
    1e-10
}

impl Default for EnergySection {
    fn default() -> Self {
        EnergySection { energy_per_op: default_energy_per_op() }
    }
}

impl EnergySection {
    fn to_domain(&self) -> EnergyModel {
        EnergyModel { energy_per_op: self.energy_per_op }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumName {
    GuidedVolume,
    OpenSpace,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnologySection {
    pub medium: MediumName,
    /// Per-link bandwidth in bit/s.
    pub link_bandwidth: f64,
    /// Signal propagation speed in m/s.
    pub signal_speed: f64,
    /// Conductor resistivity in Ω·m (guided media only).
    #[serde(default)]
    pub resistivity: Option<f64>,
    /// Conductor cross-section in m² (guided media only).
    #[serde(default)]
    pub electrical_cross_section: Option<f64>,
    /// Packed per-wire cross-section in m², insulation included
    /// (guided media only).
    #[serde(default)]
    pub packing_cross_section: Option<f64>,
    /// Emitter footprint in m² (open-space media only).
    #[serde(default)]
    pub emitter_footprint: Option<f64>,
    pub driver: DriverSection,
}

impl TechnologySection {
    fn to_domain(&self) -> Result<InterconnectTech> {
        Ok(InterconnectTech {
            medium: match self.medium {
                MediumName::GuidedVolume => Medium::GuidedVolume,
                MediumName::OpenSpace => Medium::OpenSpace,
            },
            link_bandwidth: self.link_bandwidth,
            signal_speed: self.signal_speed,
            resistivity: self.resistivity,
            electrical_cross_section: self.electrical_cross_section,
            packing_cross_section: self.packing_cross_section,
            emitter_footprint: self.emitter_footprint,
            driver: self.driver.to_domain()?,
        })
    }
}

/// Driver description. `form` selects which of the remaining keys apply;
/// keys belonging to the other form are rejected, not ignored.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriverSection {
    /// `current_voltage` or `fixed_power`.
    pub form: DriverFormName,
    /// Signal current in A (current_voltage form).
    #[serde(default)]
    pub signal_current: Option<f64>,
    /// Drive voltage in V (current_voltage form).
    #[serde(default)]
    pub drive_voltage: Option<f64>,
    /// Per-driver power in W (fixed_power form).
    #[serde(default)]
    pub per_driver_power: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriverFormName {
    CurrentVoltage,
    FixedPower,
}

impl DriverSection {
    fn to_domain(&self) -> Result<DriverModel> {
        match self.form {
            DriverFormName::CurrentVoltage => {
                if self.per_driver_power.is_some() {
                    return Err(Error::invalid(
                        "driver.per_driver_power",
                        "not applicable to the current_voltage form",
                    ));
                }
                let signal_current = self.signal_current.ok_or_else(|| {
                    Error::invalid(
                        "driver.signal_current",
                        "required for the current_voltage form (A)",
                    )
                })?;
                let drive_voltage = self.drive_voltage.ok_or_else(|| {
                    Error::invalid(
                        "driver.drive_voltage",
                        "required for the current_voltage form (V)",
                    )
                })?;
                Ok(DriverModel::CurrentVoltage { signal_current, drive_voltage })
            }
            DriverFormName::FixedPower => {
                for (value, field) in [
                    (self.signal_current, "driver.signal_current"),
                    (self.drive_voltage, "driver.drive_voltage"),
                ] {
                    if value.is_some() {
                        return Err(Error::invalid(
                            field,
                            "not applicable to the fixed_power form",
                        ));
                    }
                }
                let per_driver_power = self.per_driver_power.ok_or_else(|| {
                    Error::invalid(
                        "driver.per_driver_power",
                        "required for the fixed_power form (W)",
                    )
                })?;
                Ok(DriverModel::FixedPower { per_driver_power })
            }
        }
    }
}

/// Simulator defaults a config may carry; CLI flags override these, and
/// anything still unset falls back to the simulator's own defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    /// Mean round-trip memory latency in cycles.
    #[serde(default)]
    pub round_trip_cycles: Option<u32>,
    /// Latency jitter as a fraction of the round trip, in [0, 1).
    #[serde(default)]
    pub latency_jitter: Option<f64>,
    /// Probability an issued operation is a blocking memory access.
    #[serde(default)]
    pub memory_op_probability: Option<f64>,
    #[serde(default)]
    pub warmup_cycles: Option<u64>,
    #[serde(default)]
    pub measured_cycles: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl SimulationSection {
    /// A [`SimConfig`] for one thread-count point, with this section's
    /// overrides applied on top of the simulator defaults.
    pub fn to_sim_config(&self, thread_contexts: u32, round_trip_cycles: u32) -> SimConfig {
        let mut sim = SimConfig::new(thread_contexts, round_trip_cycles);
        if let Some(j) = self.latency_jitter {
            sim.latency_jitter = j;
        }
        if let Some(p) = self.memory_op_probability {
            sim.memory_op_probability = p;
        }
        if let Some(w) = self.warmup_cycles {
            sim.warmup_cycles = w;
        }
        if let Some(m) = self.measured_cycles {
            sim.measured_cycles = m;
        }
        if let Some(s) = self.seed {
            sim.seed = s;
        }
        sim
    }
}

impl ConfigFile {
    /// Parses a config from JSON text. `source` names the origin in
    /// error messages (a path, or `<inline>` in tests).
    pub fn from_json(text: &str, source: &str) -> Result<ConfigFile> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse { path: source.to_string(), reason: e.to_string() })
    }

    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        ConfigFile::from_json(&text, &path.display().to_string())
    }

    /// The formula variant after applying an optional override (CLI flag
    /// beats file key beats the `paper_simplified` default).
    pub fn effective_variant(&self, overridden: Option<FormulaVariant>) -> FormulaVariant {
        overridden.or_else(|| self.variant.map(FormulaVariant::from)).unwrap_or_default()
    }

    /// Builds and validates the evaluation bundle.
    pub fn bundle(&self, variant_override: Option<FormulaVariant>) -> Result<Bundle> {
        let variant = self.effective_variant(variant_override);
        let technology =
            self.technology.to_domain().map_err(|e| e.in_section("technology"))?;
        let bundle = Bundle {
            machine: self.machine.to_domain(),
            traffic: self.traffic.to_domain(variant),
            cooling: self.cooling.to_domain(),
            energy: self.energy.to_domain(),
            technology,
            variant,
        };
        bundle.validate()?;
        Ok(bundle)
    }

    /// Display name for tables: the `name` key, else the file stem.
    pub fn display_name(&self, path: &Path) -> String {
        self.name.clone().unwrap_or_else(|| {
            path.file_stem().map_or_else(
                || path.display().to_string(),
                |stem| stem.to_string_lossy().into_owned(),
            )
        })
    }
}
