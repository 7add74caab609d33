use super::{Scenario, ScenarioError};

/// JSON Schema for scenario files.
pub const SCHEMA: &str = include_str!("../../scenarios/scenario.schema.json");

#[derive(Debug, Clone, Copy)]
pub struct BundledScenario {
    /// Name accepted by `reproduce`.
    pub name: &'static str,
    pub file: &'static str,
    pub text: &'static str,
}

const BUNDLED: [BundledScenario; 8] = [
    BundledScenario { name: "difference", file: "difference.json", text: include_str!("../../scenarios/difference.json") },
    BundledScenario { name: "exm1", file: "exm1_weak_dual.json", text: include_str!("../../scenarios/exm1_weak_dual.json") },
    BundledScenario { name: "exm2", file: "exm2.json", text: include_str!("../../scenarios/exm2.json") },
    BundledScenario { name: "multiplier", file: "multiplier.json", text: include_str!("../../scenarios/multiplier.json") },
    BundledScenario { name: "not_frame", file: "not_frame.json", text: include_str!("../../scenarios/not_frame.json") },
    BundledScenario {
        name: "parseval_trajectory",
        file: "parseval_trajectory.json",
        text: include_str!("../../scenarios/parseval_trajectory.json"),
    },
    BundledScenario { name: "pw_quarter", file: "pw_quarter.json", text: include_str!("../../scenarios/pw_quarter.json") },
    BundledScenario { name: "wavelet", file: "wavelet.json", text: include_str!("../../scenarios/wavelet.json") },
];

/// Names accepted by [`bundled`], sorted.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|b| b.name).collect()
}

pub fn bundled_entries() -> &'static [BundledScenario] {
    &BUNDLED
}

/// The bundled scenario reproducing `name`.
pub fn bundled(name: &str) -> Result<Scenario, ScenarioError> {
    let entry = BUNDLED.iter().find(|b| b.name == name).ok_or_else(|| {
        ScenarioError::Invalid(format!("unknown example `{name}`; valid names: {}", bundled_names().join(", ")))
    })?;
    Scenario::from_json(entry.text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_scenario_parses() {
        for b in bundled_entries() {
            let s = bundled(b.name).unwrap_or_else(|e| panic!("{}: {e}", b.file));
            assert_eq!(s.name, b.name);
        }
        let mut names = bundled_names();
        names.sort();
        assert_eq!(names, bundled_names());
    }

    #[test]
    fn unknown_name_lists_the_valid_ones() {
        let e = bundled("exm3").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("parseval_trajectory"));
    }

    #[test]
    fn schema_names_every_check_and_generator() {
        let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
        let checks = &schema["$defs"]["check"]["properties"]["check"]["enum"];
        for c in super::super::CheckName::ALL {
            assert!(checks.as_array().unwrap().iter().any(|v| v == c.name()), "{}", c.name());
        }
        let gens: Vec<String> = schema["properties"]["construction"]["oneOf"]
            .as_array()
            .unwrap()
            .iter()
            .map(|g| g["properties"]["generator"]["const"].as_str().unwrap().to_string())
            .collect();
        for g in ["exponential", "gabor", "gabor_derivative", "wavelet", "wavelet_derivative", "translation", "pw_quarter", "difference", "multiplier"] {
            assert!(gens.iter().any(|x| x == g), "{g}");
        }
    }
}
