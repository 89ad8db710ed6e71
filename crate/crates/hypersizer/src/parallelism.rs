//! Round-trip memory latency and the degree of multithreading required
//! to hide it.

use crate::error::{ensure_finite, Error, Result};
use crate::machine::{
    mean_component_distance, InterconnectTech, MachineConfig, Medium, TrafficModel,
};

/// Which signal path length enters the propagation term.
///
/// `Diameter` (the default) uses the full installation diameter and
/// reproduces the headline thread-count figures; `MeanChord` uses the
/// mean surface-to-surface distance (2/π)·L and reproduces the quoted
/// propagation latency instead. The two are mutually inconsistent in the
/// reference figures, so both stay available and every report names the
/// mode it used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceModel {
    #[default]
    Diameter,
    MeanChord,
}

impl DistanceModel {
    /// The effective one-way path length for an installation diameter.
    pub fn effective_path(self, diameter_m: f64) -> f64 {
        match self {
            DistanceModel::Diameter => diameter_m,
            DistanceModel::MeanChord => mean_component_distance(diameter_m),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceModel::Diameter => "diameter",
            DistanceModel::MeanChord => "mean_chord",
        }
    }
}

/// Round-trip latency decomposition and the thread count it implies.
#[derive(Debug, Clone)]
pub struct LatencyBreakdown {
    /// Signal propagation τ_p = 2·L_eff·D/c_s, in seconds.
    pub propagation_s: f64,
    /// Per-hop message processing τ_n = D·C/f0, in seconds.
    pub network_processing_s: f64,
    /// Memory response τ_m, in seconds.
    pub memory_s: f64,
    /// Sum of the three components, in seconds.
    pub total_s: f64,
    /// Thread contexts needed to hide `total_s`: T = total·f0. Kept
    /// real-valued; presentation rounds up.
    pub required_threads: f64,
}

impl LatencyBreakdown {
    /// The whole-context thread count: `required_threads` rounded up.
    pub fn threads_ceil(&self) -> u64 {
        self.required_threads.ceil().max(0.0) as u64
    }
}

fn check_inputs(diameter_m: f64, tech: &InterconnectTech) -> Result<()> {
    if !diameter_m.is_finite() || diameter_m < 0.0 {
        return Err(Error::invalid("installation_diameter", "must be >= 0 (m)"));
    }
    if !tech.signal_speed.is_finite() || tech.signal_speed <= 0.0 {
        return Err(Error::invalid("signal_speed", "must be positive (m/s)"));
    }
    Ok(())
}

/// Full round-trip latency of a memory access across an installation of
/// the given diameter, split into propagation, network processing, and
/// memory response.
pub fn latency_breakdown(
    diameter_m: f64,
    cfg: &MachineConfig,
    tech: &InterconnectTech,
    distance: DistanceModel,
) -> Result<LatencyBreakdown> {
    check_inputs(diameter_m, tech)?;
    let d = cfg.effective_diameter()?;
    let propagation_s = 2.0 * distance.effective_path(diameter_m) * d / tech.signal_speed;
    let network_processing_s = d * cfg.hop_processing_cycles / cfg.clock_frequency;
    let memory_s = cfg.memory_response_time;
    let total_s = propagation_s + network_processing_s + memory_s;
    let required_threads = total_s * cfg.clock_frequency;
    ensure_finite(required_threads, "latency_breakdown")?;
    Ok(LatencyBreakdown {
        propagation_s,
        network_processing_s,
        memory_s,
        total_s,
        required_threads,
    })
}

/// Propagation-dominated thread requirement: T = L·f0·2D/c_s. The
/// network-processing and memory terms are dropped, matching the regime
/// where propagation dwarfs them.
pub fn required_threads(
    diameter_m: f64,
    cfg: &MachineConfig,
    tech: &InterconnectTech,
) -> Result<f64> {
    check_inputs(diameter_m, tech)?;
    let d = cfg.effective_diameter()?;
    let t = diameter_m * cfg.clock_frequency * 2.0 * d / tech.signal_speed;
    ensure_finite(t, "required_threads")
}

/// Thread requirement straight from aggregate performance:
/// T = f0 · sqrt(Θ) · (2/c_s) · sqrt(tf · σ · D³ · W0 / (B_w · α)).
///
/// This folds the simplified guided-volume packing size into the
/// propagation-dominated thread count, so it is algebraically identical
/// to `required_threads` composed over `packing_diameter` and
/// `wire_count` in the simplified variant. Open-space media have no
/// volume-packing size; use `required_threads` with their installation
/// diameter instead.
pub fn threads_from_performance(
    theta_ops: f64,
    cfg: &MachineConfig,
    tech: &InterconnectTech,
    traffic: &TrafficModel,
) -> Result<f64> {
    if tech.medium == Medium::OpenSpace {
        return Err(Error::UnsupportedComposition(
            "threads_from_performance embeds the guided-volume packing size; \
             use required_threads with the open-space installation diameter"
                .into(),
        ));
    }
    if !theta_ops.is_finite() || theta_ops <= 0.0 {
        return Err(Error::invalid("theta_ops", "must be positive (ops/s)"));
    }
    if !tech.link_bandwidth.is_finite() || tech.link_bandwidth <= 0.0 {
        return Err(Error::invalid("link_bandwidth", "must be positive (bit/s)"));
    }
    if !traffic.saturation_load.is_finite() || traffic.saturation_load <= 0.0 {
        return Err(Error::invalid("saturation_load", "must be in (0, 1]"));
    }
    let sigma = tech.packing_cross_section.ok_or_else(|| {
        Error::invalid("packing_cross_section", "required for the guided_volume medium")
    })?;
    let d = cfg.effective_diameter()?;
    let t = cfg.clock_frequency * theta_ops.sqrt() * (2.0 / tech.signal_speed)
        * (traffic.traffic_factor * sigma * d.powi(3) * cfg.reference_word_width
            / (tech.link_bandwidth * traffic.saturation_load))
            .sqrt();
    ensure_finite(t, "threads_from_performance")
}
