//! On-disk formats: lattices, endomorphisms, relations and partitions as JSON,
//! operator arrays as a compact binary table. Parse failures and semantic
//! validation failures are kept apart so the CLI can report them differently.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::endo::Endo;
use crate::generators;
use crate::knowledge::{KOpArray, Relation};
use crate::lattice::Lattice;
use crate::partition::Partition;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse {path}: {why}")]
    Parse { path: String, why: String },
    #[error("invalid {path}: {why}")]
    Validation { path: String, why: String },
}

impl FileError {
    fn parse(path: &Path, why: impl ToString) -> FileError {
        FileError::Parse { path: path.display().to_string(), why: why.to_string() }
    }

    fn invalid(path: &Path, why: impl ToString) -> FileError {
        FileError::Validation { path: path.display().to_string(), why: why.to_string() }
    }
}

// ---------------------------------------------------------------------------
// Lattices: {"n": .., "covers": [[lo, hi], ..]} or {"powerset": k} / {"mn": n}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    covers: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    powerset: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mn: Option<usize>,
}

pub fn read_lattice(path: &Path) -> Result<Lattice, FileError> {
    let text = fs::read_to_string(path)?;
    let spec: LatticeJson =
        serde_json::from_str(&text).map_err(|e| FileError::parse(path, e))?;
    match spec {
        LatticeJson { powerset: Some(k), n: None, covers: None, mn: None } => {
            generators::powerset_lattice(k).map_err(|e| FileError::invalid(path, e))
        }
        LatticeJson { mn: Some(m), n: None, covers: None, powerset: None } => {
            if m == 0 {
                return Err(FileError::invalid(path, "mn shorthand needs at least 1"));
            }
            Ok(generators::mn_lattice(m))
        }
        LatticeJson { n: Some(n), covers: Some(covers), powerset: None, mn: None } => {
            Lattice::build_from_covers(n, &covers).map_err(|e| FileError::invalid(path, e))
        }
        _ => Err(FileError::parse(
            path,
            "expected {\"n\", \"covers\"} or one of the shorthands {\"powerset\": k} / {\"mn\": n}",
        )),
    }
}

pub fn write_lattice(path: &Path, lat: &Lattice) -> Result<(), FileError> {
    let spec = LatticeJson {
        n: Some(lat.n()),
        covers: Some(lat.cover_pairs()),
        powerset: None,
        mn: None,
    };
    fs::write(path, serde_json::to_string(&spec).expect("serializable"))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Endomorphisms: a plain JSON array, position a holding map[a]

pub fn read_endo(path: &Path, lat: &Lattice) -> Result<Endo, FileError> {
    let text = fs::read_to_string(path)?;
    let map: Vec<usize> = serde_json::from_str(&text).map_err(|e| FileError::parse(path, e))?;
    if map.len() != lat.n() {
        return Err(FileError::invalid(
            path,
            format!("{} entries for a lattice of {}", map.len(), lat.n()),
        ));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= lat.n()) {
        return Err(FileError::invalid(path, format!("value {v} out of range")));
    }
    Ok(Endo::new(map))
}

pub fn write_endo(path: &Path, endo: &Endo) -> Result<(), FileError> {
    fs::write(path, serde_json::to_string(endo.map()).expect("serializable"))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Relations: {"n": .., "edges": [[a, b], ..]}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

pub fn read_relation(path: &Path) -> Result<Relation, FileError> {
    let text = fs::read_to_string(path)?;
    let spec: RelationJson =
        serde_json::from_str(&text).map_err(|e| FileError::parse(path, e))?;
    Relation::from_edges(spec.n, &spec.edges).map_err(|e| FileError::invalid(path, e))
}

pub fn write_relation(path: &Path, r: &Relation) -> Result<(), FileError> {
    let spec = RelationJson { n: r.n(), edges: r.edges() };
    fs::write(path, serde_json::to_string(&spec).expect("serializable"))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Partitions: array of arrays of indices

pub fn read_partition(path: &Path) -> Result<Partition, FileError> {
    let text = fs::read_to_string(path)?;
    let blocks: Vec<Vec<usize>> =
        serde_json::from_str(&text).map_err(|e| FileError::parse(path, e))?;
    let n = blocks.iter().map(|b| b.len()).sum();
    Partition::new(n, blocks).map_err(|e| FileError::invalid(path, e))
}

pub fn write_partition(path: &Path, p: &Partition) -> Result<(), FileError> {
    fs::write(path, serde_json::to_string(p.blocks()).expect("serializable"))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Operator arrays: "KOPARRAY" magic, u32 LE state count, then 2^n event codes
// of ceil(n/8) bytes each, little-endian.

const KOP_MAGIC: &[u8; 8] = b"KOPARRAY";

pub fn write_kop(path: &Path, k: &KOpArray) -> Result<(), FileError> {
    let n = k.n();
    let width = n.div_ceil(8).max(1);
    let mut out = fs::File::create(path)?;
    out.write_all(KOP_MAGIC)?;
    out.write_all(&(n as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(width << n);
    for &code in k.vk() {
        buf.extend_from_slice(&code.to_le_bytes()[..width]);
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_kop(path: &Path) -> Result<KOpArray, FileError> {
    let mut data = Vec::new();
    fs::File::open(path)?.read_to_end(&mut data)?;
    if data.len() < 12 || &data[..8] != KOP_MAGIC {
        return Err(FileError::parse(path, "missing KOPARRAY header"));
    }
    let n = u32::from_le_bytes(data[8..12].try_into().unwrap()) as usize;
    if n > 30 {
        return Err(FileError::invalid(path, format!("{n} states is out of range")));
    }
    let width = n.div_ceil(8).max(1);
    let body = &data[12..];
    if body.len() != width << n {
        return Err(FileError::parse(
            path,
            format!("expected {} body bytes, found {}", width << n, body.len()),
        ));
    }
    let mut vk = Vec::with_capacity(1 << n);
    for rec in body.chunks_exact(width) {
        let mut word = [0u8; 4];
        word[..width].copy_from_slice(rec);
        vk.push(u32::from_le_bytes(word));
    }
    KOpArray::from_vk(n, vk).map_err(|e| FileError::invalid(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge::build_kop_array;
    use tempfile::tempdir;

    #[test]
    fn lattice_json_round_trip_and_shorthands() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("lat.json");

        let diamond = Lattice::build_from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        write_lattice(&p, &diamond).unwrap();
        let back = read_lattice(&p).unwrap();
        assert_eq!(back.n(), 4);
        assert_eq!(back.cover_pairs(), diamond.cover_pairs());

        fs::write(&p, r#"{"powerset": 3}"#).unwrap();
        assert_eq!(read_lattice(&p).unwrap().n(), 8);
        fs::write(&p, r#"{"mn": 3}"#).unwrap();
        assert_eq!(read_lattice(&p).unwrap().n(), 5);

        fs::write(&p, r#"{"powerset": 3, "mn": 1}"#).unwrap();
        assert!(matches!(read_lattice(&p).unwrap_err(), FileError::Parse { .. }));
        fs::write(&p, "{nonsense").unwrap();
        assert!(matches!(read_lattice(&p).unwrap_err(), FileError::Parse { .. }));
        // parses fine but is not a lattice (no unique top)
        fs::write(&p, r#"{"n": 3, "covers": [[0,1],[0,2]]}"#).unwrap();
        assert!(matches!(read_lattice(&p).unwrap_err(), FileError::Validation { .. }));
    }

    #[test]
    fn endo_json_checks_range() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("e.json");
        let lat = Lattice::powerset(2);

        write_endo(&p, &Endo::new(vec![0, 1, 2, 3])).unwrap();
        assert_eq!(read_endo(&p, &lat).unwrap().map(), &[0, 1, 2, 3]);

        fs::write(&p, "[0, 1]").unwrap();
        assert!(matches!(read_endo(&p, &lat).unwrap_err(), FileError::Validation { .. }));
        fs::write(&p, "[0, 1, 2, 9]").unwrap();
        assert!(matches!(read_endo(&p, &lat).unwrap_err(), FileError::Validation { .. }));
        fs::write(&p, "0, 1, 2, 9").unwrap();
        assert!(matches!(read_endo(&p, &lat).unwrap_err(), FileError::Parse { .. }));
    }

    #[test]
    fn relation_and_partition_json() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("r.json");

        let r = Relation::from_edges(3, &[(0, 1), (2, 2)]).unwrap();
        write_relation(&p, &r).unwrap();
        assert_eq!(read_relation(&p).unwrap(), r);
        fs::write(&p, r#"{"n": 2, "edges": [[0, 5]]}"#).unwrap();
        assert!(matches!(read_relation(&p).unwrap_err(), FileError::Validation { .. }));

        let q = dir.path().join("p.json");
        let part = Partition::new(4, vec![vec![0, 2], vec![1], vec![3]]).unwrap();
        write_partition(&q, &part).unwrap();
        assert_eq!(read_partition(&q).unwrap(), part);
        fs::write(&q, "[[0, 1], [1, 2]]").unwrap();
        assert!(matches!(read_partition(&q).unwrap_err(), FileError::Validation { .. }));
    }

    #[test]
    fn kop_binary_round_trip() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("vk.kop");
        for n in [1usize, 2, 3, 8, 9] {
            let r = if n % 2 == 0 { Relation::identity(n) } else { Relation::full(n) };
            let vk = build_kop_array(&r).unwrap();
            write_kop(&p, &vk).unwrap();
            assert_eq!(read_kop(&p).unwrap(), vk, "n = {n}");
        }
        // n=9 records are two bytes wide: check the exact file size
        let r = Relation::identity(9);
        write_kop(&p, &build_kop_array(&r).unwrap()).unwrap();
        assert_eq!(fs::metadata(&p).unwrap().len(), 8 + 4 + 2 * (1 << 9));

        fs::write(&p, b"NOTMAGIC").unwrap();
        assert!(matches!(read_kop(&p).unwrap_err(), FileError::Parse { .. }));
        let mut bad = KOP_MAGIC.to_vec();
        bad.extend_from_slice(&2u32.to_le_bytes());
        bad.extend_from_slice(&[0xff; 4]); // codes with bits above n=2
        assert!(fs::write(&p, &bad).is_ok());
        assert!(matches!(read_kop(&p).unwrap_err(), FileError::Validation { .. }));
    }
}
