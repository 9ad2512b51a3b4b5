//! JSON schema for fundamental polygons with side pairings.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A polygon as read from or written to disk.
///
/// Side `k` runs from vertex `k` to vertex `k + 1 (mod 2m)`. A pairing
/// `[i, j]` identifies side `j` with side `i`; the optional generator for it
/// maps side `j` onto side `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonInput {
    pub vertices: Vec<[f64; 2]>,
    pub pairings: Vec<PairingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<[f64; 4]>>,
}

/// Either a bare index pair or an entry of a Dirichlet domain output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairingSpec {
    Pair([usize; 2]),
    Side {
        side: usize,
        partner: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<[f64; 4]>,
    },
}

/// Pairings after normalization: index pairs with optional matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPairings {
    pub pairs: Vec<(usize, usize)>,
    pub generators: Option<Vec<[f64; 4]>>,
}

impl PolygonInput {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Collapses the pairing list to one entry per pair. Dirichlet entries
    /// list every pair twice; the entry with `side < partner` is kept.
    pub fn normalized_pairings(&self) -> Result<NormalizedPairings> {
        let listed: BTreeSet<(usize, usize)> = self
            .pairings
            .iter()
            .map(|p| match *p {
                PairingSpec::Pair([i, j]) => (i, j),
                PairingSpec::Side { side, partner, .. } => (side, partner),
            })
            .collect();
        let mut pairs = Vec::new();
        let mut matrices = Vec::new();
        let mut all_have_matrix = true;
        let mut any_side_entry = false;
        for spec in &self.pairings {
            let (i, j, matrix) = match *spec {
                PairingSpec::Pair([i, j]) => (i, j, None),
                PairingSpec::Side { side, partner, matrix } => {
                    any_side_entry = true;
                    (side, partner, matrix)
                }
            };
            if i > j && listed.contains(&(j, i)) {
                continue;
            }
            pairs.push((i, j));
            match matrix {
                Some(m) => matrices.push(m),
                None => all_have_matrix = false,
            }
        }
        let generators = match (&self.generators, any_side_entry && all_have_matrix) {
            (Some(g), _) => {
                if g.len() != pairs.len() {
                    return Err(Error::Schema(format!("{} generators given for {} pairings", g.len(), pairs.len())));
                }
                Some(g.clone())
            }
            (None, true) => Some(matrices),
            (None, false) => None,
        };
        Ok(NormalizedPairings { pairs, generators })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_index_pairs() {
        let p = PolygonInput::from_json(r#"{"vertices": [[0.1, 0.0], [0.0, 0.1]], "pairings": [[0, 1]]}"#).unwrap();
        let n = p.normalized_pairings().unwrap();
        assert_eq!(n.pairs, vec![(0, 1)]);
        assert!(n.generators.is_none());
    }

    #[test]
    fn dirichlet_entries_collapse_to_pairs() {
        let text = r#"{
            "genus": 2, "area": 12.5,
            "vertices": [[0.1, 0.0], [0.0, 0.1]],
            "pairings": [
                {"side": 0, "partner": 3, "word": "g0", "matrix": [1.0, 0.0, 0.0, 0.0]},
                {"side": 3, "partner": 0, "word": "G0", "matrix": [1.0, 0.0, 0.0, 0.0]},
                {"side": 2, "partner": 1, "word": "g1", "matrix": [2.0, 0.0, 0.0, 0.0]},
                {"side": 1, "partner": 2, "word": "G1", "matrix": [3.0, 0.0, 0.0, 0.0]}
            ]
        }"#;
        let n = PolygonInput::from_json(text).unwrap().normalized_pairings().unwrap();
        assert_eq!(n.pairs, vec![(0, 3), (1, 2)]);
        assert_eq!(n.generators.unwrap()[1][0], 3.0);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(PolygonInput::from_json(r#"{"vertices": 3}"#), Err(Error::Schema(_))));
        let p = PolygonInput::from_json(
            r#"{"vertices": [], "pairings": [[0, 1]], "generators": [[1, 0, 0, 0], [1, 0, 0, 0]]}"#,
        )
        .unwrap();
        assert!(matches!(p.normalized_pairings(), Err(Error::Schema(_))));
    }
}
