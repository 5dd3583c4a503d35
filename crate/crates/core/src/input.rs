//! JSON description of a twisted root datum.
//!
//! ```json
//! {
//!   "base": {"rank": 2, "simple_roots": [[2, -1], [-1, 2]],
//!            "simple_coroots": [[1, 0], [0, 1]], "name": "SL3"},
//!   "generators": [{"lattice_map": [[0, 1], [1, 0]], "root_permutation": [1, 0]}],
//!   "folded_cartan": {"type": "A1", "simple_roots": [[1, 0]],
//!                     "simple_coroots": [[2, 2]]}
//! }
//! ```
//!
//! Matrices are row-major; `lattice_map` acts on cocharacters. The optional
//! `folded_cartan` block follows the conventions of
//! [`crate::presets::FoldedCartan`] and is checked before use.

use serde::{Deserialize, Serialize};

use crate::abelian::IntMatrix;
use crate::error::{Error, Result};
use crate::galois::{DiagramAutomorphism, TwistedRootDatum};
use crate::lattice;
use crate::presets::{FoldedCartan, Preset};
use crate::rootdatum::BasedRootDatum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseInput {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInput {
    pub lattice_map: Vec<Vec<i64>>,
    pub root_permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoldedInput {
    #[serde(rename = "type")]
    pub type_label: String,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumInput {
    pub base: BaseInput,
    #[serde(default)]
    pub generators: Vec<GeneratorInput>,
    #[serde(default)]
    pub folded_cartan: Option<FoldedInput>,
}

fn check_rows(field: &str, rows: &[Vec<i64>], len: usize) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != len {
            return Err(Error::MalformedInput(format!(
                "{field}[{i}]: expected {len} entries, found {}",
                r.len()
            )));
        }
    }
    Ok(())
}

/// Parses without checking any mathematical invariants.
pub fn parse(text: &str) -> Result<DatumInput> {
    serde_json::from_str(text).map_err(|e| {
        Error::MalformedInput(format!("line {}, column {}: {e}", e.line(), e.column()))
    })
}

impl DatumInput {
    /// Shape checks only: every error names the offending field.
    pub fn check_shapes(&self) -> Result<()> {
        let n = self.base.rank;
        if self.base.simple_roots.len() != self.base.simple_coroots.len() {
            return Err(Error::MalformedInput(format!(
                "base: {} simple roots but {} simple coroots",
                self.base.simple_roots.len(),
                self.base.simple_coroots.len()
            )));
        }
        check_rows("base.simple_roots", &self.base.simple_roots, n)?;
        check_rows("base.simple_coroots", &self.base.simple_coroots, n)?;
        for (k, g) in self.generators.iter().enumerate() {
            if g.lattice_map.len() != n {
                return Err(Error::MalformedInput(format!(
                    "generators[{k}].lattice_map: expected {n} rows, found {}",
                    g.lattice_map.len()
                )));
            }
            check_rows(&format!("generators[{k}].lattice_map"), &g.lattice_map, n)?;
        }
        if let Some(f) = &self.folded_cartan {
            check_rows("folded_cartan.simple_roots", &f.simple_roots, n)?;
            check_rows("folded_cartan.simple_coroots", &f.simple_coroots, n)?;
        }
        Ok(())
    }

    pub fn base_datum(&self) -> BasedRootDatum {
        BasedRootDatum::from_i64(
            self.base.name.as_deref().unwrap_or("input"),
            self.base.rank,
            &self.base.simple_roots,
            &self.base.simple_coroots,
        )
    }

    /// Builds the twisted datum, checking the root datum axioms and that each
    /// generator preserves the pinning.
    pub fn build(&self, key: &str) -> Result<Preset> {
        self.check_shapes()?;
        let base = self.base_datum();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                DiagramAutomorphism::new(
                    IntMatrix::from_i64_rows(&g.lattice_map),
                    g.root_permutation.clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let twisted = TwistedRootDatum::new(base, gens)?;
        let folded = self.folded_cartan.as_ref().map(|f| FoldedCartan {
            type_label: f.type_label.clone(),
            simple_roots: f.simple_roots.iter().map(|r| lattice::vector(r)).collect(),
            simple_coroots: f.simple_coroots.iter().map(|r| lattice::vector(r)).collect(),
        });
        Ok(Preset {
            key: key.to_string(),
            description: format!("read from {key}"),
            twisted,
            folded,
        })
    }
}

pub fn load_file(path: &std::path::Path) -> Result<Preset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?;
    parse(&text)?.build(&path.display().to_string())
}
