//! One self-contained evaluation bundle: a machine plus the traffic,
//! cooling, energy, and technology models to size it with.

use crate::error::Result;
use crate::machine::{
    CoolingModel, FormulaVariant, InterconnectTech, MachineConfig, TrafficModel,
};
use crate::parallelism::{
    latency_breakdown, required_threads, DistanceModel, LatencyBreakdown,
};
use crate::sizing::{size_installation, EnergyModel, SizingReport};

/// Everything needed to evaluate one design point.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub machine: MachineConfig,
    pub traffic: TrafficModel,
    pub cooling: CoolingModel,
    pub energy: EnergyModel,
    pub technology: InterconnectTech,
    pub variant: FormulaVariant,
}

impl Bundle {
    /// Validates every section, prefixing offending fields with their
    /// section name (e.g. `traffic.saturation_load`).
    pub fn validate(&self) -> Result<()> {
        self.machine.validate().map_err(|e| e.in_section("machine"))?;
        self.traffic.validate().map_err(|e| e.in_section("traffic"))?;
        self.cooling.validate().map_err(|e| e.in_section("cooling"))?;
        self.energy.validate().map_err(|e| e.in_section("energy"))?;
        self.technology.validate().map_err(|e| e.in_section("technology"))?;
        Ok(())
    }

    /// Sizes the installation for this bundle.
    pub fn size(&self) -> Result<SizingReport> {
        self.validate()?;
        size_installation(
            &self.machine,
            &self.technology,
            &self.traffic,
            &self.cooling,
            &self.energy,
            self.variant,
        )
    }

    /// Latency decomposition across an installation of the given diameter.
    pub fn latency(
        &self,
        installation_diameter_m: f64,
        distance: DistanceModel,
    ) -> Result<LatencyBreakdown> {
        latency_breakdown(installation_diameter_m, &self.machine, &self.technology, distance)
    }

    /// Propagation-dominated thread requirement for the given diameter.
    pub fn propagation_threads(&self, installation_diameter_m: f64) -> Result<f64> {
        required_threads(installation_diameter_m, &self.machine, &self.technology)
    }

    /// The same bundle evaluated around a different technology.
    pub fn with_technology(&self, technology: InterconnectTech) -> Bundle {
        Bundle { technology, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures::{copper_tech, htsc_tech, tvhc_bundle};
    use crate::sizing::Binding;

    #[test]
    fn validation_errors_carry_section_prefixes() {
        let mut bundle = tvhc_bundle(copper_tech());
        bundle.traffic.saturation_load = 0.0;
        let err = bundle.size().unwrap_err();
        assert!(err.to_string().contains("traffic.saturation_load"), "got: {err}");

        let mut bundle = tvhc_bundle(copper_tech());
        bundle.machine.node_count = 0.0;
        let err = bundle.validate().unwrap_err();
        assert!(err.to_string().contains("machine.node_count"));
    }

    #[test]
    fn technology_swap_keeps_the_rest_of_the_bundle() {
        let copper = tvhc_bundle(copper_tech());
        let htsc = copper.with_technology(htsc_tech());
        assert_eq!(htsc.machine.node_count, copper.machine.node_count);
        let report = htsc.size().unwrap();
        assert_eq!(report.binding, Binding::Packing);
    }
}
