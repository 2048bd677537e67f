//! On-disk cache: one JSON document per (matrix, weights), with optional
//! sections for the KL table, a-values, distinguished involutions and gamma.
//! A section that fails to decode is dropped and recomputed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cell_lab_core::analysis::{Analysis, Precomputed};
use cell_lab_core::coxeter::{CoxeterDatum, CoxeterGroup, Elem};
use cell_lab_core::hecke::KlTable;
use cell_lab_core::laurent::Laurent;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("format_version {0} is not {FORMAT_VERSION}")]
    VersionMismatch(u64),
    #[error("fingerprint does not match the group")]
    FingerprintMismatch,
    #[error("section {0} is corrupt: {1}")]
    CorruptSection(&'static str, String),
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub matrix: Vec<Vec<usize>>,
    pub weights: Vec<u32>,
}

impl Fingerprint {
    pub fn of(datum: &CoxeterDatum) -> Self {
        Self { matrix: datum.matrix.clone(), weights: datum.weights.clone() }
    }

    /// File name built from the upper triangle of the matrix and the weights.
    pub fn file_name(&self) -> String {
        let n = self.matrix.len();
        let upper: Vec<String> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.matrix[i][j].to_string()).collect();
        let w: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        format!("r{n}-m{}-w{}.json", upper.join("."), w.join("."))
    }
}

type JRows = Vec<(Elem, Elem, Vec<(Elem, i64)>)>;

/// Sections recovered from a cache file.
#[derive(Debug, Default)]
pub struct Loaded {
    pub kl: Option<KlTable>,
    pub a: Option<Vec<u32>>,
    pub distinguished: Option<Vec<(Elem, i64)>>,
    pub gamma: Option<JRows>,
    pub warnings: Vec<CacheError>,
}

pub fn path_for(dir: &Path, fp: &Fingerprint) -> PathBuf {
    dir.join(fp.file_name())
}

fn elem(g: &CoxeterGroup, section: &'static str, name: &str) -> Result<Elem, CacheError> {
    g.parse_name(name).map_err(|e| CacheError::CorruptSection(section, e.to_string()))
}

fn section<T: for<'de> Deserialize<'de>>(doc: &Value, key: &'static str) -> Option<Result<T, CacheError>> {
    doc.get(key).map(|v| T::deserialize(v).map_err(|e| CacheError::CorruptSection(key, e.to_string())))
}

fn decode_kl(g: &CoxeterGroup, raw: BTreeMap<String, BTreeMap<String, Laurent>>) -> Result<KlTable, CacheError> {
    let mut columns = vec![None; g.size()];
    for (x, col) in raw {
        let x = elem(g, "kl", &x)?;
        let mut row =
            col.into_iter().map(|(y, p)| Ok((elem(g, "kl", &y)?, p))).collect::<Result<Vec<_>, CacheError>>()?;
        row.sort_by_key(|(y, _)| *y);
        if row.iter().all(|(y, _)| *y != x) {
            return Err(CacheError::CorruptSection("kl", format!("column {} lacks its diagonal", g.name(x))));
        }
        columns[x.index()] = Some(row);
    }
    let columns = columns
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| CacheError::CorruptSection("kl", format!("missing column {}", g.name(Elem(i as u32)))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KlTable::from_columns(columns))
}

fn decode_a(g: &CoxeterGroup, raw: BTreeMap<String, u32>) -> Result<Vec<u32>, CacheError> {
    let mut a = vec![None; g.size()];
    for (w, v) in raw {
        a[elem(g, "a", &w)?.index()] = Some(v);
    }
    a.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| CacheError::CorruptSection("a", "missing elements".into()))
}

fn decode_distinguished(g: &CoxeterGroup, raw: BTreeMap<String, i64>) -> Result<Vec<(Elem, i64)>, CacheError> {
    let mut d =
        raw.into_iter().map(|(w, n)| Ok((elem(g, "distinguished", &w)?, n))).collect::<Result<Vec<_>, CacheError>>()?;
    d.sort();
    Ok(d)
}

type RawRow = (String, String, Vec<(String, i64)>);

fn decode_gamma(g: &CoxeterGroup, raw: Vec<RawRow>) -> Result<JRows, CacheError> {
    raw.into_iter()
        .map(|(x, y, row)| {
            let mut row =
                row.into_iter().map(|(z, c)| Ok((elem(g, "gamma", &z)?, c))).collect::<Result<Vec<_>, CacheError>>()?;
            row.sort();
            Ok((elem(g, "gamma", &x)?, elem(g, "gamma", &y)?, row))
        })
        .collect()
}

/// Reads whatever is usable. A missing file gives an empty result; a version
/// or fingerprint mismatch discards the whole file.
pub fn load(path: &Path, g: &CoxeterGroup) -> Loaded {
    let mut out = Loaded::default();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return out,
        Err(e) => {
            out.warnings.push(CacheError::Io(e.to_string()));
            return out;
        }
    };
    let doc: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            out.warnings.push(CacheError::Io(format!("unreadable cache: {e}")));
            return out;
        }
    };
    let version = doc.get("format_version").and_then(Value::as_u64).unwrap_or(0);
    if version != FORMAT_VERSION {
        out.warnings.push(CacheError::VersionMismatch(version));
        return out;
    }
    let fp: Option<Fingerprint> = doc.get("fingerprint").and_then(|v| Fingerprint::deserialize(v).ok());
    if fp.as_ref() != Some(&Fingerprint::of(g.datum())) {
        out.warnings.push(CacheError::FingerprintMismatch);
        return out;
    }
    let mut keep = |r: Result<(), CacheError>| {
        if let Err(e) = r {
            out.warnings.push(e);
        }
    };
    let mut kl = None;
    let mut a = None;
    let mut distinguished = None;
    let mut gamma = None;
    if let Some(r) = section(&doc, "kl") {
        keep(r.and_then(|raw| decode_kl(g, raw)).map(|v| kl = Some(v)));
    }
    if let Some(r) = section(&doc, "a") {
        keep(r.and_then(|raw| decode_a(g, raw)).map(|v| a = Some(v)));
    }
    if let Some(r) = section(&doc, "distinguished") {
        keep(r.and_then(|raw| decode_distinguished(g, raw)).map(|v| distinguished = Some(v)));
    }
    if let Some(r) = section(&doc, "gamma") {
        keep(r.and_then(|raw| decode_gamma(g, raw)).map(|v| gamma = Some(v)));
    }
    out.kl = kl;
    out.a = a;
    out.distinguished = distinguished;
    out.gamma = gamma;
    out
}

impl Loaded {
    /// Names of the sections present, in file order.
    pub fn present(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.kl.is_some() {
            v.push("kl");
        }
        if self.a.is_some() {
            v.push("a");
        }
        if self.distinguished.is_some() && self.a.is_some() {
            v.push("distinguished");
        }
        if self.gamma.is_some() {
            v.push("gamma");
        }
        v
    }

    /// Splits into the precomputed inputs for [`Analysis`] and the gamma rows.
    /// Stored distinguished involutions are only used together with stored a-values.
    pub fn into_parts(self) -> (Precomputed, Option<JRows>) {
        let distinguished = if self.a.is_some() { self.distinguished } else { None };
        (Precomputed { kl: self.kl, a: self.a, distinguished }, self.gamma)
    }
}

/// Installs stored gamma rows; pairs not listed have empty rows.
pub fn preload_gamma(an: &Analysis, rows: JRows) {
    let t = &an.tables;
    let mut listed = std::collections::BTreeSet::new();
    for (x, y, row) in rows {
        listed.insert((x, y));
        t.preload_j_row(x, y, row);
    }
    for (x, y) in t.scan_pairs() {
        if !listed.contains(&(x, y)) {
            t.preload_j_row(x, y, Vec::new());
        }
    }
}

/// The canonical document for `an`; gamma covers every scan pair.
pub fn document(an: &Analysis) -> Value {
    let g = &an.group;
    let kl: BTreeMap<String, BTreeMap<String, &Laurent>> = g
        .elements()
        .map(|x| (g.name(x), an.hecke.kl().column(x).iter().map(|(y, p)| (g.name(*y), p)).collect()))
        .collect();
    let a: BTreeMap<String, u32> = g.elements().map(|w| (g.name(w), an.tables.a(w))).collect();
    let distinguished: BTreeMap<String, i64> = an.tables.distinguished().iter().map(|&(d, n)| (g.name(d), n)).collect();
    let pairs = an.tables.scan_pairs();
    an.tables.warm(&pairs);
    let gamma: Vec<RawRow> = pairs
        .into_iter()
        .filter_map(|(x, y)| {
            let row = an.tables.j_row(x, y);
            (!row.is_empty()).then(|| (g.name(x), g.name(y), row.iter().map(|&(z, c)| (g.name(z), c)).collect()))
        })
        .collect();
    serde_json::json!({
        "format_version": FORMAT_VERSION,
        "fingerprint": Fingerprint::of(g.datum()),
        "kl": kl,
        "a": a,
        "distinguished": distinguished,
        "gamma": gamma,
    })
}

pub fn store(path: &Path, an: &Analysis) -> Result<(), CacheError> {
    let io = |e: std::io::Error| CacheError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let text = serde_json::to_string(&document(an)).expect("cache document serializes");
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cell_lab_core::analysis::AnalysisOptions;
    use std::sync::Arc;

    fn analysis(name: &str, w: &[u32]) -> Analysis {
        Analysis::for_type(name, w).unwrap()
    }

    #[test]
    fn file_names_distinguish_weights() {
        let a = Fingerprint { matrix: vec![vec![1, 4], vec![4, 1]], weights: vec![2, 1] };
        let b = Fingerprint { weights: vec![1, 2], ..a.clone() };
        assert_eq!(a.file_name(), "r2-m4-w2.1.json");
        assert_ne!(a.file_name(), b.file_name());
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let an = analysis("A3", &[1, 1, 1]);
        let path = path_for(dir.path(), &Fingerprint::of(an.group.datum()));
        store(&path, &an).unwrap();
        let loaded = load(&path, &an.group);
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.present(), ["kl", "a", "distinguished", "gamma"]);
        assert_eq!(loaded.kl.as_ref().unwrap(), an.hecke.kl());
        let (pre, gamma) = loaded.into_parts();
        let again = Analysis::from_group(an.group.clone(), AnalysisOptions::default(), pre);
        preload_gamma(&again, gamma.unwrap());
        assert_eq!(document(&again), document(&an));
        assert_eq!(again.tables.distinguished(), an.tables.distinguished());
    }

    #[test]
    fn mismatches_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let an = analysis("B2", &[2, 1]);
        let path = dir.path().join("c.json");
        store(&path, &an).unwrap();
        let other = Arc::new(CoxeterGroup::new(CoxeterDatum::from_type("B2", vec![1, 2]).unwrap()).unwrap());
        let loaded = load(&path, &other);
        assert_eq!(loaded.warnings, [CacheError::FingerprintMismatch]);
        assert!(loaded.present().is_empty());

        let mut doc = document(&an);
        doc["format_version"] = 2.into();
        std::fs::write(&path, doc.to_string()).unwrap();
        assert_eq!(load(&path, &an.group).warnings, [CacheError::VersionMismatch(2)]);
    }

    #[test]
    fn corrupt_section_is_dropped_alone() {
        let dir = tempfile::tempdir().unwrap();
        let an = analysis("B2", &[2, 1]);
        let path = dir.path().join("c.json");
        let mut doc = document(&an);
        doc["a"] = serde_json::json!({"9.9": 1});
        std::fs::write(&path, doc.to_string()).unwrap();
        let loaded = load(&path, &an.group);
        assert!(matches!(loaded.warnings[..], [CacheError::CorruptSection("a", _)]));
        assert_eq!(loaded.present(), ["kl", "gamma"]);
    }
}
