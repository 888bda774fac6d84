//! The built-in example catalog.

use crate::config::{Arithmetic, Format, RunConfig};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    n_max: u32,
    lambda: Option<f64>,
}

impl CatalogEntry {
    pub fn default_config(&self) -> RunConfig {
        RunConfig {
            example: self.name.to_string(),
            n_max: self.n_max,
            cylinder_depth: 2,
            lambda: self.lambda,
            arithmetic: Arithmetic::Exact,
            preperiod: String::new(),
            period: "ab".to_string(),
            cocycle: None,
            quad_tol: 1e-9,
            output: None,
            format: Format::Json,
        }
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "f2-boundary",
            summary: "weighted averaging sets on the boundary orbit of the rank-2 free \
                      group, with exact level arithmetic",
            n_max: 20,
            lambda: None,
        },
        CatalogEntry {
            name: "grid-1d",
            summary: "word-metric balls on the integer line with classic averaging ratios",
            n_max: 20,
            lambda: None,
        },
        CatalogEntry {
            name: "grid-2d",
            summary: "word-metric balls in the integer plane with classic averaging ratios",
            n_max: 20,
            lambda: None,
        },
        CatalogEntry {
            name: "grid-3d",
            summary: "word-metric balls in the integer lattice with classic averaging ratios",
            n_max: 15,
            lambda: None,
        },
        CatalogEntry {
            name: "horocycle",
            summary: "horocyclic rectangles in the hyperbolic upper half-plane with \
                      height-weighted isoperimetry",
            n_max: 20,
            lambda: None,
        },
        CatalogEntry {
            name: "sol",
            summary: "leafwise rectangles in the sol torus bundle; weighted area is \
                      independent of the expansion factor",
            n_max: 12,
            lambda: Some(2.0),
        },
    ]
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_validates_out_of_the_box() {
        let all = entries();
        assert!(all.len() >= 4);
        for entry in all {
            entry
                .default_config()
                .validate()
                .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        }
    }

    #[test]
    fn lookup_is_by_exact_name() {
        assert!(find("grid-2d").is_some());
        assert!(find("grid").is_none());
    }
}
