//! JSON documents for lattices, quantales, maps and relations.
//!
//! * lattice: `{"elements": [names], "leq": [[i, j], ...]}`; reflexive pairs
//!   may be omitted
//! * quantale: `{"lattice": <lattice>, "mult": [[i, j, k], ...],
//!   "inv": [[i, j], ...], "unit": i}` with `unit` optional
//! * map: `{"source": <quantale>, "target": <quantale>,
//!   "inverse_image": [[x, q], ...], "direct_image": [[q, x], ...]}` with
//!   `direct_image` optional
//! * relation: `{"pairs": [[r, s], ...]}`
//!
//! A lattice without names is written with the decimal indices as names,
//! and such names are dropped again on load, so documents round-trip to
//! equal structures.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantale::{FiniteInvQuantale, FiniteMap, QuantaleError};
use crate::suplattice::{FiniteSupLattice, LatticeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error("{table}: no entry for {key:?}")]
    MissingEntry { table: &'static str, key: Vec<usize> },
    #[error("{table}: conflicting entries for {key:?}")]
    Conflict { table: &'static str, key: Vec<usize> },
    #[error("{table}: index {index} out of range")]
    OutOfRange { table: &'static str, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub leq: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantaleDoc {
    pub lattice: LatticeDoc,
    pub mult: Vec<[usize; 3]>,
    pub inv: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub source: QuantaleDoc,
    pub target: QuantaleDoc,
    pub inverse_image: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_image: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub pairs: Vec<[usize; 2]>,
}

pub fn lattice_to_doc(l: &FiniteSupLattice) -> LatticeDoc {
    LatticeDoc {
        elements: l.elements().map(|i| l.name(i)).collect(),
        leq: l.strict_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
    }
}

pub fn lattice_from_doc(doc: &LatticeDoc) -> Result<FiniteSupLattice, FormatError> {
    let n = doc.elements.len();
    let indexed = doc.elements.iter().enumerate().all(|(i, s)| *s == i.to_string());
    let names = (!indexed).then(|| doc.elements.clone());
    Ok(FiniteSupLattice::validate(
        n,
        doc.leq.iter().map(|&[a, b]| (a, b)),
        names,
    )?)
}

pub fn quantale_to_doc(q: &FiniteInvQuantale) -> QuantaleDoc {
    let n = q.size();
    QuantaleDoc {
        lattice: lattice_to_doc(q.lattice()),
        mult: (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| [i, j, q.mul(i, j)])
            .collect(),
        inv: (0..n).map(|i| [i, q.star(i)]).collect(),
        unit: q.unit(),
    }
}

/// Fills a table of `size` entries from `(key, value)` pairs; every key must
/// appear and repeated keys must agree.
fn table(
    name: &'static str,
    size: usize,
    range: usize,
    entries: impl IntoIterator<Item = (usize, Vec<usize>, usize)>,
) -> Result<Vec<usize>, FormatError> {
    let mut out: Vec<Option<usize>> = vec![None; size];
    for (slot, key, value) in entries {
        if slot >= size {
            return Err(FormatError::OutOfRange {
                table: name,
                index: key.into_iter().max().unwrap_or(slot),
            });
        }
        if value >= range {
            return Err(FormatError::OutOfRange { table: name, index: value });
        }
        match out[slot] {
            Some(prev) if prev != value => return Err(FormatError::Conflict { table: name, key }),
            _ => out[slot] = Some(value),
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(slot, v)| v.ok_or(FormatError::MissingEntry { table: name, key: vec![slot] }))
        .collect()
}

/// Loads tables without checking the quantale laws.
pub fn quantale_from_doc(doc: &QuantaleDoc) -> Result<FiniteInvQuantale, FormatError> {
    let lattice = Arc::new(lattice_from_doc(&doc.lattice)?);
    let n = lattice.size();
    for &[i, j, _] in &doc.mult {
        if i >= n || j >= n {
            return Err(FormatError::OutOfRange {
                table: "mult",
                index: i.max(j),
            });
        }
    }
    let mult = table(
        "mult",
        n * n,
        n,
        doc.mult.iter().map(|&[i, j, k]| (i * n + j, vec![i, j], k)),
    )
    .map_err(|e| match e {
        FormatError::MissingEntry { table, key } => FormatError::MissingEntry {
            table,
            key: vec![key[0] / n, key[0] % n],
        },
        e => e,
    })?;
    let inv = table("inv", n, n, doc.inv.iter().map(|&[i, j]| (i, vec![i], j)))?;
    Ok(FiniteInvQuantale::new(lattice, mult, inv, doc.unit)?)
}

pub fn map_to_doc(p: &FiniteMap) -> MapDoc {
    MapDoc {
        source: quantale_to_doc(p.source()),
        target: quantale_to_doc(p.target()),
        inverse_image: p
            .inverse_table()
            .into_iter()
            .enumerate()
            .map(|(x, a)| [x, a])
            .collect(),
        direct_image: p
            .direct_table()
            .map(|t| t.into_iter().enumerate().map(|(a, x)| [a, x]).collect()),
    }
}

/// Loads a map without checking that `p*` is a homomorphism.
pub fn map_from_doc(doc: &MapDoc) -> Result<FiniteMap, FormatError> {
    let source = Arc::new(quantale_from_doc(&doc.source)?);
    let target = Arc::new(quantale_from_doc(&doc.target)?);
    let inverse = table(
        "inverse_image",
        target.size(),
        source.size(),
        doc.inverse_image.iter().map(|&[x, a]| (x, vec![x], a)),
    )?;
    let direct = doc
        .direct_image
        .as_ref()
        .map(|d| {
            table(
                "direct_image",
                source.size(),
                target.size(),
                d.iter().map(|&[a, x]| (a, vec![a], x)),
            )
        })
        .transpose()?;
    let map = FiniteMap::from_table(source, target, inverse)?;
    Ok(match direct {
        Some(t) => map.with_direct_table(t),
        None => map,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
