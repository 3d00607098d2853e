use serde::{Deserialize, Serialize};

use crate::TopologyError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulationFormat {
    pub name: String,
    pub bits_per_symbol: u32,
    pub max_reach_km: f64,
}

/// Distance-dependent modulation lookup table. Formats are kept in ascending
/// bits-per-symbol order; reach must strictly decrease as order increases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulationTable {
    formats: Vec<ModulationFormat>,
    pub slot_width_ghz: f64,
}

impl ModulationTable {
    pub fn new(mut formats: Vec<ModulationFormat>, slot_width_ghz: f64) -> Result<Self, TopologyError> {
        if formats.is_empty() {
            return Err(TopologyError::EmptyModulationTable);
        }
        formats.sort_by_key(|f| f.bits_per_symbol);
        for w in formats.windows(2) {
            if w[1].bits_per_symbol == w[0].bits_per_symbol || w[1].max_reach_km >= w[0].max_reach_km {
                return Err(TopologyError::UnorderedModulationTable);
            }
        }
        Ok(ModulationTable {
            formats,
            slot_width_ghz,
        })
    }

    pub fn formats(&self) -> &[ModulationFormat] {
        &self.formats
    }

    pub fn format(&self, idx: usize) -> &ModulationFormat {
        &self.formats[idx]
    }

    /// Highest-order format whose reach covers `length_km` (inclusive bound),
    /// or `None` if the distance exceeds every reach.
    pub fn for_distance(&self, length_km: f64) -> Option<usize> {
        self.formats
            .iter()
            .rposition(|f| f.max_reach_km >= length_km)
    }
}

impl Default for ModulationTable {
    fn default() -> Self {
        let fmt = |name: &str, bits, reach| ModulationFormat {
            name: name.to_string(),
            bits_per_symbol: bits,
            max_reach_km: reach,
        };
        ModulationTable::new(
            vec![
                fmt("BPSK", 1, 9600.0),
                fmt("QPSK", 2, 4800.0),
                fmt("8QAM", 3, 2400.0),
                fmt("16QAM", 4, 1200.0),
            ],
            12.5,
        )
        .expect("default table is valid")
    }
}

/// FSU count for a request: `ceil(bitrate / (bits_per_symbol * slot_width))`
/// plus the guard band.
pub fn required_fsus(
    bitrate_gbps: f64,
    format: &ModulationFormat,
    slot_width_ghz: f64,
    guardband_fsu: usize,
) -> usize {
    let slots = bitrate_gbps / (format.bits_per_symbol as f64 * slot_width_ghz);
    slots.ceil() as usize + guardband_fsu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_path_gets_highest_order() {
        let t = ModulationTable::default();
        let idx = t.for_distance(100.0).unwrap();
        assert_eq!(t.format(idx).name, "16QAM");
    }

    #[test]
    fn beyond_lowest_reach_is_none() {
        let t = ModulationTable::default();
        assert_eq!(t.for_distance(9600.1), None);
    }

    #[test]
    fn reach_bound_is_inclusive() {
        let t = ModulationTable::default();
        let idx = t.for_distance(1200.0).unwrap();
        assert_eq!(t.format(idx).name, "16QAM");
        let idx = t.for_distance(1200.001).unwrap();
        assert_eq!(t.format(idx).name, "8QAM");
    }

    #[test]
    fn monotone_in_distance() {
        let t = ModulationTable::default();
        let mut last_bits = u32::MAX;
        for km in [10.0, 1200.0, 1500.0, 2400.0, 3000.0, 4800.0, 9000.0, 9600.0] {
            let bits = t.format(t.for_distance(km).unwrap()).bits_per_symbol;
            assert!(bits <= last_bits, "bits increased with distance");
            last_bits = bits;
        }
    }

    #[test]
    fn fsu_arithmetic() {
        let t = ModulationTable::default();
        let qpsk = t.format(t.formats().iter().position(|f| f.name == "QPSK").unwrap());
        assert_eq!(required_fsus(100.0, qpsk, 12.5, 0), 4);
        let qam16 = t.format(t.formats().iter().position(|f| f.name == "16QAM").unwrap());
        assert_eq!(required_fsus(100.0, qam16, 12.5, 0), 2);
        let bpsk = t.format(0);
        assert_eq!(required_fsus(25.0, bpsk, 12.5, 0), 2);
        assert_eq!(required_fsus(100.0, qpsk, 12.5, 1), 5);
    }
}
