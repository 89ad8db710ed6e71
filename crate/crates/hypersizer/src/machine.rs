//! Machine-scale configuration and the two foundational relations:
//! total interconnect wire count and aggregate peak performance.

use crate::error::{ensure_finite, Error, Result};

/// Mean distance between two random points on a sphere's surface, as a
/// fraction of the sphere diameter (2/π). Used wherever a formula needs
/// the average signal path rather than the full diameter.
pub const MEAN_DISTANCE_COEFFICIENT: f64 = std::f64::consts::FRAC_2_PI;

/// Selects between the two closed-form families.
///
/// `PaperSimplified` drops the small numeric prefactors that the headline
/// reference figures drop (traffic factor 1.0, packing `sqrt(σN)`);
/// `Exact` keeps them (traffic factor 1.1, packing `sqrt(12σN)/π`, static
/// core solved with full constants).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormulaVariant {
    #[default]
    PaperSimplified,
    Exact,
}

impl FormulaVariant {
    /// Multiplier applied to the raw per-cycle traffic in the wire-count
    /// relation.
    pub fn traffic_factor(self) -> f64 {
        match self {
            FormulaVariant::PaperSimplified => 1.0,
            FormulaVariant::Exact => 1.1,
        }
    }

    /// Prefactor of `sqrt(σN)` in the guided-volume packing relation:
    /// 1 for the simplified form, sqrt(12)/π for the exact one.
    pub fn packing_constant(self) -> f64 {
        match self {
            FormulaVariant::PaperSimplified => 1.0,
            FormulaVariant::Exact => 12f64.sqrt() / std::f64::consts::PI,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaVariant::PaperSimplified => "paper_simplified",
            FormulaVariant::Exact => "exact",
        }
    }
}

/// Top-level machine parameters: how many node pairs, how fast they clock,
/// and how wide their memory words are.
///
/// `node_count` is kept real-valued so design sweeps can move through it
/// continuously; the network diameter is re-derived per configuration.
#[derive(Debug, Clone)]
pub struct MachineConfig {
    /// Number of processing-element/memory node pairs (Q).
    pub node_count: f64,
    /// Node clock frequency f0 in Hz.
    pub clock_frequency: f64,
    /// Memory word width W in bits.
    pub word_width: f64,
    /// Word width W0 of the reference processing element, in bits.
    pub reference_word_width: f64,
    /// Message-processing cycles per network hop (C).
    pub hop_processing_cycles: f64,
    /// Memory response time τ_m in seconds.
    pub memory_response_time: f64,
    /// Pins the network diameter (in hops) instead of deriving it as
    /// ceil(log2 Q). Used to isolate square-root scaling in sweeps.
    pub network_diameter_override: Option<f64>,
}

impl MachineConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.node_count.is_finite() || self.node_count < 2.0 {
            return Err(Error::invalid("node_count", "must be a finite value >= 2"));
        }
        if !self.clock_frequency.is_finite() || self.clock_frequency <= 0.0 {
            return Err(Error::invalid("clock_frequency", "must be positive (Hz)"));
        }
        if !self.word_width.is_finite() || self.word_width < 1.0 {
            return Err(Error::invalid("word_width", "must be at least 1 bit"));
        }
        if !self.reference_word_width.is_finite() || self.reference_word_width < 1.0 {
            return Err(Error::invalid("reference_word_width", "must be at least 1 bit"));
        }
        if !self.hop_processing_cycles.is_finite() || self.hop_processing_cycles < 0.0 {
            return Err(Error::invalid("hop_processing_cycles", "must be >= 0"));
        }
        if !self.memory_response_time.is_finite() || self.memory_response_time < 0.0 {
            return Err(Error::invalid("memory_response_time", "must be >= 0 (seconds)"));
        }
        if let Some(d) = self.network_diameter_override {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::invalid("network_diameter_override", "must be >= 0 (hops)"));
            }
        }
        Ok(())
    }

    /// Network diameter in hops: the override when set, otherwise
    /// ceil(log2 node_count).
    pub fn effective_diameter(&self) -> Result<f64> {
        match self.network_diameter_override {
            Some(d) => Ok(d),
            None => network_diameter(self.node_count),
        }
    }
}

/// Per-node memory traffic model. The load/store rates document the raw
/// per-cycle request mix; the wire-count relation consumes the aggregated
/// `traffic_factor` together with the saturation load α.
#[derive(Debug, Clone)]
pub struct TrafficModel {
    /// Memory load requests issued per node per cycle.
    pub load_rate: f64,
    /// Store replies issued per node per cycle.
    pub store_rate: f64,
    /// Fraction of theoretical network bandwidth usable before
    /// congestion collapse (α).
    pub saturation_load: f64,
    /// Aggregated multiplier on f0·W·Q in the wire-count relation;
    /// 1.0 or 1.1 depending on the formula variant.
    pub traffic_factor: f64,
}

impl Default for TrafficModel {
    fn default() -> Self {
        TrafficModel::for_variant(FormulaVariant::PaperSimplified)
    }
}

impl TrafficModel {
    /// The default traffic mix with the factor implied by `variant`.
    pub fn for_variant(variant: FormulaVariant) -> Self {
        TrafficModel {
            load_rate: 1.32,
            store_rate: 0.78,
            saturation_load: 0.6,
            traffic_factor: variant.traffic_factor(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.load_rate.is_finite() || self.load_rate < 0.0 {
            return Err(Error::invalid("load_rate", "must be >= 0"));
        }
        if !self.store_rate.is_finite() || self.store_rate < 0.0 {
            return Err(Error::invalid("store_rate", "must be >= 0"));
        }
        if !self.saturation_load.is_finite()
            || self.saturation_load <= 0.0
            || self.saturation_load > 1.0
        {
            return Err(Error::invalid("saturation_load", "must be in (0, 1]"));
        }
        if !self.traffic_factor.is_finite() || self.traffic_factor <= 0.0 {
            return Err(Error::invalid("traffic_factor", "must be positive"));
        }
        Ok(())
    }
}

/// Heat-removal capability of the installation.
#[derive(Debug, Clone)]
pub struct CoolingModel {
    /// Removable power per unit of cooled surface, p_s in W/m².
    pub surface_power_density: f64,
    /// Vertical pitch h between cooled layers, in m.
    pub vertical_pitch: f64,
}

impl Default for CoolingModel {
    fn default() -> Self {
        CoolingModel { surface_power_density: 5e5, vertical_pitch: 5e-3 }
    }
}

impl CoolingModel {
    /// Removable power per unit volume, p_v = p_s / h, in W/m³.
    pub fn volumetric_power_density(&self) -> f64 {
        self.surface_power_density / self.vertical_pitch
    }

    pub fn validate(&self) -> Result<()> {
        if !self.surface_power_density.is_finite() || self.surface_power_density <= 0.0 {
            return Err(Error::invalid("surface_power_density", "must be positive (W/m^2)"));
        }
        if !self.vertical_pitch.is_finite() || self.vertical_pitch <= 0.0 {
            return Err(Error::invalid("vertical_pitch", "must be positive (m)"));
        }
        Ok(())
    }
}

/// How the interconnect occupies space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Medium {
    /// Physical wires filling the installation volume.
    GuidedVolume,
    /// Free-space links; only emitter footprints on the surface count.
    OpenSpace,
}

impl Medium {
    pub fn as_str(self) -> &'static str {
        match self {
            Medium::GuidedVolume => "guided_volume",
            Medium::OpenSpace => "open_space",
        }
    }
}

/// Per-link driver electrical model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriverModel {
    /// Driver characterized by its signal current I and drive voltage U;
    /// per-driver power is I·U.
    CurrentVoltage { signal_current: f64, drive_voltage: f64 },
    /// Driver characterized directly by its power draw (laser emitters,
    /// superconducting line drivers).
    FixedPower { per_driver_power: f64 },
}

impl DriverModel {
    /// Effective power of one driver, P1, in W.
    pub fn per_driver_power(&self) -> f64 {
        match *self {
            DriverModel::CurrentVoltage { signal_current, drive_voltage } => {
                signal_current * drive_voltage
            }
            DriverModel::FixedPower { per_driver_power } => per_driver_power,
        }
    }

    /// Signal current, when the model carries one.
    pub fn signal_current(&self) -> Option<f64> {
        match *self {
            DriverModel::CurrentVoltage { signal_current, .. } => Some(signal_current),
            DriverModel::FixedPower { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DriverModel::CurrentVoltage { signal_current, drive_voltage } => {
                if !signal_current.is_finite() || signal_current <= 0.0 {
                    return Err(Error::invalid("signal_current", "must be positive (A)"));
                }
                if !drive_voltage.is_finite() || drive_voltage <= 0.0 {
                    return Err(Error::invalid("drive_voltage", "must be positive (V)"));
                }
            }
            DriverModel::FixedPower { per_driver_power } => {
                if !per_driver_power.is_finite() || per_driver_power <= 0.0 {
                    return Err(Error::invalid("per_driver_power", "must be positive (W)"));
                }
            }
        }
        Ok(())
    }
}

/// One interconnect technology: medium, link bandwidth, signal speed,
/// the cross-sections that apply to its medium, and its driver model.
#[derive(Debug, Clone)]
pub struct InterconnectTech {
    pub medium: Medium,
    /// Per-link bandwidth B_w in bit/s.
    pub link_bandwidth: f64,
    /// Signal propagation speed c_s in m/s.
    pub signal_speed: f64,
    /// Conductor resistivity ρ in Ω·m (guided media only).
    pub resistivity: Option<f64>,
    /// Conductor cross-section σ_w in m² (guided media only).
    pub electrical_cross_section: Option<f64>,
    /// Packed cross-section σ per wire, insulation included, in m²
    /// (guided media only).
    pub packing_cross_section: Option<f64>,
    /// Emitter footprint σ_LE in m² (open-space media only).
    pub emitter_footprint: Option<f64>,
    pub driver: DriverModel,
}

/// Maximum admissible signal speed (m/s): nothing propagates faster than
/// light in vacuum, 3e8 in the round figures used throughout.
pub const MAX_SIGNAL_SPEED: f64 = 3e8;

impl InterconnectTech {
    pub fn validate(&self) -> Result<()> {
        if !self.link_bandwidth.is_finite() || self.link_bandwidth <= 0.0 {
            return Err(Error::invalid("link_bandwidth", "must be positive (bit/s)"));
        }
        if !self.signal_speed.is_finite()
            || self.signal_speed <= 0.0
            || self.signal_speed > MAX_SIGNAL_SPEED
        {
            return Err(Error::invalid("signal_speed", "must be in (0, 3e8] m/s"));
        }
        match self.medium {
            Medium::GuidedVolume => {
                require_positive(self.resistivity, "resistivity", "guided_volume")?;
                require_positive(
                    self.electrical_cross_section,
                    "electrical_cross_section",
                    "guided_volume",
                )?;
                require_positive(
                    self.packing_cross_section,
                    "packing_cross_section",
                    "guided_volume",
                )?;
                if self.emitter_footprint.is_some() {
                    return Err(Error::invalid(
                        "emitter_footprint",
                        "only applicable to the open_space medium",
                    ));
                }
            }
            Medium::OpenSpace => {
                require_positive(self.emitter_footprint, "emitter_footprint", "open_space")?;
                for (value, field) in [
                    (self.resistivity, "resistivity"),
                    (self.electrical_cross_section, "electrical_cross_section"),
                    (self.packing_cross_section, "packing_cross_section"),
                ] {
                    if value.is_some() {
                        return Err(Error::invalid(
                            field,
                            "only applicable to the guided_volume medium",
                        ));
                    }
                }
            }
        }
        self.driver.validate()
    }
}

fn require_positive(value: Option<f64>, field: &str, medium: &str) -> Result<f64> {
    match value {
        Some(v) if v.is_finite() && v > 0.0 => Ok(v),
        Some(_) => Err(Error::invalid(field, "must be positive")),
        None => Err(Error::InvalidConfig {
            field: field.to_string(),
            reason: format!("required for the {medium} medium"),
        }),
    }
}

/// Network diameter in hops for a banyan/delta-style multistage network:
/// ceil(log2 Q). Exact for integral node counts (no rounding through the
/// floating-point logarithm).
pub fn network_diameter(node_count: f64) -> Result<f64> {
    if !node_count.is_finite() || node_count < 1.0 {
        return Err(Error::invalid("node_count", "must be a finite value >= 1"));
    }
    if node_count.fract() == 0.0 && node_count <= (1u64 << 53) as f64 {
        let q = node_count as u64;
        Ok((64 - (q - 1).leading_zeros()) as f64)
    } else {
        Ok(node_count.log2().ceil())
    }
}

/// Total number of interconnect wires:
/// N = traffic_factor · f0 · W · Q · D / (B_w · α).
///
/// Kept real-valued; rounding to whole wires is presentation-only.
pub fn wire_count(
    cfg: &MachineConfig,
    tech: &InterconnectTech,
    traffic: &TrafficModel,
) -> Result<f64> {
    if !tech.link_bandwidth.is_finite() || tech.link_bandwidth <= 0.0 {
        return Err(Error::invalid("link_bandwidth", "must be positive (bit/s)"));
    }
    if !traffic.saturation_load.is_finite() || traffic.saturation_load <= 0.0 {
        return Err(Error::invalid("saturation_load", "must be in (0, 1]"));
    }
    let d = cfg.effective_diameter()?;
    let n = traffic.traffic_factor * cfg.clock_frequency * cfg.word_width * cfg.node_count * d
        / (tech.link_bandwidth * traffic.saturation_load);
    ensure_finite(n, "wire_count")
}

/// Aggregate peak performance in operations per second:
/// Θ = Q · f0 · (W / W0).
pub fn peak_performance(cfg: &MachineConfig) -> Result<f64> {
    let theta =
        cfg.node_count * cfg.clock_frequency * (cfg.word_width / cfg.reference_word_width);
    ensure_finite(theta, "peak_performance")
}

/// Mean component-to-component distance on a spherical shell of diameter
/// `diameter_m`: (2/π)·L.
pub fn mean_component_distance(diameter_m: f64) -> f64 {
    MEAN_DISTANCE_COEFFICIENT * diameter_m
}
