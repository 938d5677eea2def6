//! Which description elements each snapshot field feeds.

use mobidesc_core::Slot;

use crate::snapshot::{Field, Readings};

/// Hosted documents a field writes to.
pub fn slots_fed_by(field: Field) -> &'static [Slot] {
    match field {
        Field::BatteryPercent | Field::Charging => &[Slot::Contextual, Slot::HardwareDynamic],
        Field::NetworkType => &[Slot::Contextual, Slot::NonFunctional],
        Field::Gps => &[Slot::Contextual, Slot::DataSourceDynamic],
        Field::FreeMemoryMb => &[Slot::HardwareDynamic],
        Field::UserPresence => &[Slot::Contextual],
    }
}

/// Element paths and values `field` sets in the document at `slot`.
pub fn values_for(field: Field, slot: Slot, r: &Readings) -> Vec<(&'static str, String)> {
    let num = |v: f64| format!("{v}");
    match (field, slot) {
        (Field::BatteryPercent, Slot::Contextual) => vec![("deviceContext/batteryStatus", num(r.battery_percent))],
        (Field::BatteryPercent, Slot::HardwareDynamic) => vec![
            ("powerDetail/batteryPercent", num(r.battery_percent)),
            (
                "powerDetail/estimatedRuntimeMinutes",
                num(estimated_runtime_minutes(r.battery_percent)),
            ),
        ],
        (Field::Charging, Slot::Contextual) => vec![("deviceContext/charging", r.charging.to_string())],
        (Field::Charging, Slot::HardwareDynamic) => vec![("powerDetail/charging", r.charging.to_string())],
        (Field::NetworkType, Slot::Contextual) => {
            vec![("deviceContext/networkType", r.network_type.as_str().to_string())]
        }
        (Field::NetworkType, Slot::NonFunctional) => vec![(
            "networkQoS/bandwidthCapability",
            r.network_type.bandwidth_kbps().to_string(),
        )],
        (Field::Gps, Slot::Contextual) => vec![
            ("userContext/location/gps/latitude", num(r.gps.lat)),
            ("userContext/location/gps/longitude", num(r.gps.lon)),
        ],
        (Field::Gps, Slot::DataSourceDynamic) => vec![
            ("locationDetail/gps/latitude", num(r.gps.lat)),
            ("locationDetail/gps/longitude", num(r.gps.lon)),
        ],
        (Field::FreeMemoryMb, Slot::HardwareDynamic) => vec![("memoryDetail/primaryMb", num(r.free_memory_mb))],
        (Field::UserPresence, Slot::Contextual) => {
            vec![("userContext/presence", r.user_presence.as_str().to_string())]
        }
        _ => Vec::new(),
    }
}

/// Runtime estimate shown in the power facet: six minutes per percent.
pub fn estimated_runtime_minutes(battery_percent: f64) -> f64 {
    battery_percent * 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fed_slot_gets_values() {
        let r = Readings::default();
        for f in Field::ALL {
            for s in slots_fed_by(f) {
                assert!(!values_for(f, *s, &r).is_empty(), "{f:?} {s}");
            }
            for s in Slot::ALL {
                if !slots_fed_by(f).contains(&s) {
                    assert!(values_for(f, s, &r).is_empty());
                }
            }
        }
    }
}
