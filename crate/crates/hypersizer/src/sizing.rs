//! The four candidate installation diameters — static thermal core,
//! dynamic core, driver core, packing core — and the binding maximum.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::machine::{
    peak_performance, wire_count, CoolingModel, DriverModel, FormulaVariant, InterconnectTech,
    MachineConfig, Medium, TrafficModel, MEAN_DISTANCE_COEFFICIENT,
};

/// Switching-energy model for the dynamic thermal core.
#[derive(Debug, Clone)]
pub struct EnergyModel {
    /// Energy per executed operation, w, in J/op.
    pub energy_per_op: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel { energy_per_op: 1e-10 }
    }
}

impl EnergyModel {
    /// Switching operations per executed operation: the operation itself,
    /// its memory-side counterpart, and D/2 network stage traversals on
    /// average — (2 + D/2), recomputed from the resolved diameter.
    pub fn activity_factor(&self, diameter_hops: f64) -> f64 {
        2.0 + diameter_hops / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !self.energy_per_op.is_finite() || self.energy_per_op <= 0.0 {
            return Err(Error::invalid("energy_per_op", "must be positive (J/op)"));
        }
        Ok(())
    }
}

/// Which of the four candidate diameters sets the installation size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    Static,
    Dynamic,
    Driver,
    Packing,
}

impl Binding {
    pub fn as_str(self) -> &'static str {
        match self {
            Binding::Static => "static",
            Binding::Dynamic => "dynamic",
            Binding::Driver => "driver",
            Binding::Packing => "packing",
        }
    }
}

/// Complete sizing result for one configuration. Field names match the
/// serialized report keys.
#[derive(Debug, Clone)]
pub struct SizingReport {
    pub n_wires: f64,
    pub theta_ops: f64,
    pub l_static_m: f64,
    pub l_dynamic_m: f64,
    pub l_driver_m: f64,
    pub l_power_m: f64,
    pub l_packing_m: f64,
    pub l_installation_m: f64,
    pub binding: Binding,
    pub variant: FormulaVariant,
}

/// Static (ohmic) dissipation of `n_wires` wires of mean length
/// `mean_coeff · diameter_m`:
/// P_s = I² · ρ · N · (mean_coeff · L) / σ_w.
///
/// Open-space media dissipate no static power and return 0. Guided media
/// need a current-voltage driver model plus resistivity and conductor
/// cross-section.
pub fn static_power(
    n_wires: f64,
    diameter_m: f64,
    tech: &InterconnectTech,
    mean_coeff: f64,
) -> Result<f64> {
    if tech.medium == Medium::OpenSpace {
        return Ok(0.0);
    }
    let current = tech.driver.signal_current().ok_or_else(|| {
        Error::invalid("driver.signal_current", "static power needs a current_voltage driver")
    })?;
    let resistivity = tech
        .resistivity
        .ok_or_else(|| Error::invalid("resistivity", "required for static power"))?;
    let cross_section = tech.electrical_cross_section.ok_or_else(|| {
        Error::invalid("electrical_cross_section", "required for static power")
    })?;
    let p = current * current * resistivity * n_wires * (mean_coeff * diameter_m)
        / cross_section;
    ensure_finite(p, "static_power")
}

/// Diameter of the static thermal core: the smallest sphere whose volume
/// at power density p_v absorbs the wires' static dissipation.
///
/// The simplified variant evaluates
/// L_st = sqrt(tf · Θ · W0 · ρ · I² · D / (σ_w · p_v · B_w · α)); the
/// exact variant solves P_s(L) = p_v · π·L³/6 in closed form, giving
/// L_st = sqrt(12 · I² · ρ · N / (π² · σ_w · p_v)).
///
/// Technologies without a static dissipation model — open-space media,
/// or fixed-power drivers with no defined signal current (ballistic
/// superconducting lines) — have a zero-size static core.
pub fn static_core_diameter(
    theta_ops: f64,
    cfg: &MachineConfig,
    tech: &InterconnectTech,
    traffic: &TrafficModel,
    cooling: &CoolingModel,
    variant: FormulaVariant,
) -> Result<f64> {
    if tech.medium == Medium::OpenSpace {
        return Ok(0.0);
    }
    let current = match tech.driver.signal_current() {
        Some(i) => i,
        None => return Ok(0.0),
    };
    let p_v = cooling.volumetric_power_density();
    if !p_v.is_finite() || p_v <= 0.0 {
        return Err(Error::invalid("surface_power_density", "volumetric density must be positive"));
    }
    if !tech.link_bandwidth.is_finite() || tech.link_bandwidth <= 0.0 {
        return Err(Error::invalid("link_bandwidth", "must be positive (bit/s)"));
    }
    if !traffic.saturation_load.is_finite() || traffic.saturation_load <= 0.0 {
        return Err(Error::invalid("saturation_load", "must be in (0, 1]"));
    }
    let resistivity = tech
        .resistivity
        .ok_or_else(|| Error::invalid("resistivity", "required for the static core"))?;
    let cross_section = tech.electrical_cross_section.ok_or_else(|| {
        Error::invalid("electrical_cross_section", "required for the static core")
    })?;
    let d = cfg.effective_diameter()?;
    let l = match variant {
        FormulaVariant::PaperSimplified => (traffic.traffic_factor
            * theta_ops
            * cfg.reference_word_width
            * resistivity
            * current
            * current
            * d
            / (cross_section * p_v * tech.link_bandwidth * traffic.saturation_load))
            .sqrt(),
        FormulaVariant::Exact => {
            // Wire count restated through Θ·W0 = f0·W·Q.
            let n = traffic.traffic_factor * theta_ops * cfg.reference_word_width * d
                / (tech.link_bandwidth * traffic.saturation_load);
            (6.0 * current * current * resistivity * n * MEAN_DISTANCE_COEFFICIENT
                / (PI * cross_section * p_v))
                .sqrt()
        }
    };
    ensure_finite(l, "static_core_diameter")
}

/// Diameter of the dynamic thermal core: the smallest sphere whose
/// surface at power density p_s radiates the switching power
/// Θ·w·(2 + D/2), i.e. L_dyn = sqrt(Θ·w·(2 + D/2)/(π·p_s)).
pub fn dynamic_core_diameter(
    theta_ops: f64,
    diameter_hops: f64,
    energy: &EnergyModel,
    cooling: &CoolingModel,
) -> Result<f64> {
    if !theta_ops.is_finite() || theta_ops <= 0.0 {
        return Err(Error::invalid("theta_ops", "must be positive (ops/s)"));
    }
    let l = (theta_ops * energy.energy_per_op * energy.activity_factor(diameter_hops)
        / (PI * cooling.surface_power_density))
        .sqrt();
    ensure_finite(l, "dynamic_core_diameter")
}

/// Diameter of the driver core: the smallest sphere whose surface
/// radiates the power of the 2N link drivers,
/// L_dr = sqrt(2·N·P1/(π·p_s)).
pub fn driver_core_diameter(
    n_wires: f64,
    driver: &DriverModel,
    cooling: &CoolingModel,
) -> Result<f64> {
    if !n_wires.is_finite() || n_wires <= 0.0 {
        return Err(Error::invalid("wire_count", "must be positive"));
    }
    let p1 = driver.per_driver_power();
    if !p1.is_finite() || p1 <= 0.0 {
        return Err(Error::invalid("per_driver_power", "must be positive (W)"));
    }
    let l = (2.0 * n_wires * p1 / (PI * cooling.surface_power_density)).sqrt();
    ensure_finite(l, "driver_core_diameter")
}

/// The binding power-driven diameter: the maximum of the three thermal
/// cores and which one attained it (ties resolved in the listed order
/// static, dynamic, driver).
pub fn power_core_diameter(l_static: f64, l_dynamic: f64, l_driver: f64) -> (f64, Binding) {
    let mut best = (l_static, Binding::Static);
    if l_dynamic > best.0 {
        best = (l_dynamic, Binding::Dynamic);
    }
    if l_driver > best.0 {
        best = (l_driver, Binding::Driver);
    }
    best
}

/// Diameter needed merely to pack the interconnect.
///
/// Guided media fill the sphere's volume with wire: the simplified form
/// is L_g = sqrt(σ·N), the exact form L_g = sqrt(12·σ·N)/π. Open-space
/// media only need emitter footprints on the surface:
/// L_g = sqrt(4·N·σ_LE/π) in both variants.
pub fn packing_diameter(
    n_wires: f64,
    tech: &InterconnectTech,
    variant: FormulaVariant,
) -> Result<f64> {
    if !n_wires.is_finite() || n_wires <= 0.0 {
        return Err(Error::invalid("wire_count", "must be positive"));
    }
    let l = match tech.medium {
        Medium::GuidedVolume => {
            let sigma = tech.packing_cross_section.ok_or_else(|| {
                Error::invalid("packing_cross_section", "required for the guided_volume medium")
            })?;
            variant.packing_constant() * (sigma * n_wires).sqrt()
        }
        Medium::OpenSpace => {
            let sigma_le = tech.emitter_footprint.ok_or_else(|| {
                Error::invalid("emitter_footprint", "required for the open_space medium")
            })?;
            (4.0 * n_wires * sigma_le / PI).sqrt()
        }
    };
    ensure_finite(l, "packing_diameter")
}

/// Evaluates every candidate diameter and the binding constraint for one
/// configuration. The installation diameter is the overall maximum; the
/// binding constraint is its argmax with ties resolved in the order
/// static, dynamic, driver, packing.
pub fn size_installation(
    cfg: &MachineConfig,
    tech: &InterconnectTech,
    traffic: &TrafficModel,
    cooling: &CoolingModel,
    energy: &EnergyModel,
    variant: FormulaVariant,
) -> Result<SizingReport> {
    cfg.validate()?;
    tech.validate()?;
    traffic.validate()?;
    cooling.validate()?;
    energy.validate()?;

    let n_wires = wire_count(cfg, tech, traffic)?;
    let theta_ops = peak_performance(cfg)?;
    let diameter_hops = cfg.effective_diameter()?;

    let l_static_m = static_core_diameter(theta_ops, cfg, tech, traffic, cooling, variant)?;
    let l_dynamic_m = dynamic_core_diameter(theta_ops, diameter_hops, energy, cooling)?;
    let l_driver_m = driver_core_diameter(n_wires, &tech.driver, cooling)?;
    let (l_power_m, mut binding) = power_core_diameter(l_static_m, l_dynamic_m, l_driver_m);
    let l_packing_m = packing_diameter(n_wires, tech, variant)?;

    let l_installation_m = if l_packing_m > l_power_m {
        binding = Binding::Packing;
        l_packing_m
    } else {
        l_power_m
    };

    Ok(SizingReport {
        n_wires,
        theta_ops,
        l_static_m,
        l_dynamic_m,
        l_driver_m,
        l_power_m,
        l_packing_m,
        l_installation_m,
        binding,
        variant,
    })
}
