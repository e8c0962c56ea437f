//! The `galmod-action/1` input format and the loading of lattices from files
//! and presets.

use std::path::Path;
use std::sync::Arc;

use galmod::delpezzo::{picard_preset, weyl_generators};
use galmod::{enumerate_group, restrict_action, Error, FiniteMatrixGroup, GLattice, Integer, IntegerMatrix, Subgroup};
use serde::{Deserialize, Serialize};

pub const ACTION_SCHEMA: &str = "galmod-action/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(with = "galmod::serde_int::matrix")]
    pub matrix: Vec<Vec<Integer>>,
}

/// A finite group action on `Z^rank` given by named generator matrices, which
/// act on column vectors from the left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub rank: usize,
    pub generators: Vec<GeneratorSpec>,
    #[serde(
        default,
        with = "galmod::serde_int::option_matrix",
        skip_serializing_if = "Option::is_none"
    )]
    pub pairing: Option<Vec<Vec<Integer>>>,
    #[serde(
        default,
        with = "galmod::serde_int::option_vec",
        skip_serializing_if = "Option::is_none"
    )]
    pub canonical: Option<Vec<Integer>>,
    #[serde(default)]
    pub zero_cycle_degree_one: bool,
}

fn square_matrix(rows: &[Vec<Integer>], rank: usize, what: &str) -> Result<IntegerMatrix, Error> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(Error::DimensionMismatch(format!(
            "{what} is not a {rank}x{rank} matrix"
        )));
    }
    IntegerMatrix::from_rows(rows.to_vec(), rank)
}

impl ActionFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let file: ActionFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed action file: {e}")))?;
        match file.schema.as_deref() {
            None | Some(ACTION_SCHEMA) => Ok(file),
            Some(other) => Err(Error::InvalidInput(format!(
                "unsupported schema `{other}`, expected `{ACTION_SCHEMA}`"
            ))),
        }
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Named generator matrices after shape checks.
    pub fn generator_matrices(&self) -> Result<Vec<(String, IntegerMatrix)>, Error> {
        self.generators
            .iter()
            .map(|g| {
                Ok((
                    g.name.clone(),
                    square_matrix(&g.matrix, self.rank, &format!("generator `{}`", g.name))?,
                ))
            })
            .collect()
    }

    /// Enumerates the group and checks that every generator preserves the
    /// pairing and fixes the canonical vector when those are given.
    pub fn to_lattice(&self, element_cap: usize) -> Result<GLattice, Error> {
        let gens = self.generator_matrices()?;
        let group = enumerate_group(self.rank, &gens, element_cap)?;
        if let Some(p) = &self.pairing {
            let j = square_matrix(p, self.rank, "pairing")?;
            for (name, g) in &gens {
                if &(&g.transpose() * &j) * g != j {
                    return Err(Error::InvalidInput(format!(
                        "generator `{name}` does not preserve the pairing"
                    )));
                }
            }
        }
        if let Some(w) = &self.canonical {
            if w.len() != self.rank {
                return Err(Error::DimensionMismatch(format!(
                    "canonical vector has length {}, expected {}",
                    w.len(),
                    self.rank
                )));
            }
            for (name, g) in &gens {
                if g.mul_vec(w)? != *w {
                    return Err(Error::InvalidInput(format!(
                        "generator `{name}` moves the canonical vector"
                    )));
                }
            }
        }
        Ok(GLattice::natural(Arc::new(group)))
    }
}

/// Where the lattice came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Dp5,
    Dp6,
}

impl Preset {
    pub fn degree(self) -> u32 {
        match self {
            Preset::Dp5 => 5,
            Preset::Dp6 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Dp5 => "dp5",
            Preset::Dp6 => "dp6",
        }
    }
}

/// A loaded lattice, possibly restricted to the subgroup generated by
/// `--subgroup`.
pub struct Loaded {
    pub lattice: GLattice,
    /// Group before restriction and the selected subgroup in it.
    pub parent: Arc<FiniteMatrixGroup>,
    pub subgroup: Subgroup,
    pub subgroup_names: Option<Vec<String>>,
    pub preset: Option<Preset>,
    pub origin: String,
    pub file_zero_cycle: bool,
}

pub fn load_preset(preset: Preset, element_cap: usize) -> Result<GLattice, Error> {
    let p = picard_preset(preset.degree())?;
    let group = enumerate_group(p.rank(), &weyl_generators(&p)?, element_cap)?;
    Ok(GLattice::natural(Arc::new(group)))
}

/// Restricts to the subgroup generated by the comma-separated generator names,
/// where `1` names the identity (so `--subgroup 1` selects the trivial subgroup).
pub fn select_subgroup(
    lattice: GLattice,
    names: Option<&str>,
) -> Result<(GLattice, Subgroup, Option<Vec<String>>), Error> {
    let group = lattice.group_arc().clone();
    let Some(names) = names else {
        return Ok((lattice, Subgroup::full(&group), None));
    };
    let names: Vec<String> = names
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    let mut elements = Vec::new();
    for name in &names {
        let idx = if name == "1" {
            group.identity()
        } else {
            group
                .generator_by_name(name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?
        };
        elements.push(idx);
    }
    let subgroup = Subgroup::generated_by(&group, &elements);
    let restricted = restrict_action(&lattice, &subgroup)?;
    Ok((restricted, subgroup, Some(names)))
}
