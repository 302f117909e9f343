//! Results catalog: one JSON file plus a sidecar directory of witness blobs
//! named by the sha256 of their canonical JSON.
//!
//! Only the command line mutates a catalog. Writes go through [`WriteLock`]
//! and an atomic rename, so readers always see a complete snapshot.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use posetrace::certificate::{verify_certificate, Certificate, Claim, Evidence, VerificationReport};
use posetrace::poset::canonical_id;
use posetrace::search::ArrowResult;
use posetrace::{ExtremalResult, Family, Kind, PosetJson, Status};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("integrity: {key}: {reason}")]
    Integrity { key: String, reason: String },
    #[error("schema: {0}")]
    Schema(String),
    #[error("catalog {0} is locked by another writer")]
    Locked(PathBuf),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CatalogError> = std::result::Result<T, E>;

/// What a catalog value is about. Arrow entries carry `m`, `k`, `l` and no poset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CatalogKey {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset_id: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl std::fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.kind.as_str())?;
        if let Some(p) = &self.poset_id {
            write!(f, "/{p}")?;
        }
        write!(f, "/n{}", self.n)?;
        if let Some(m) = self.m {
            write!(f, "/m{m}")?;
        }
        if let Some(k) = self.k {
            write!(f, "/k{k}")?;
        }
        if let Some(l) = self.l {
            write!(f, "/l{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Method {
    /// Bounds and pruning rules the search used.
    pub bounds: Vec<String>,
    pub symmetry: Option<String>,
    pub nodes: u64,
    /// Finite ranges behind any stabilized parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranges: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub key: CatalogKey,
    /// Relation form of the poset, so the witness can be replayed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset_label: Option<String>,
    /// The extremal value, or 1/0 for an arrow relation that holds/fails.
    pub value: usize,
    pub status: Status,
    /// Hash of the witness blob (extremal family or arrow counterexample).
    pub witness: Option<String>,
    pub method: Method,
    pub tool_version: String,
    pub timestamp: u64,
}

fn now() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl CatalogEntry {
    /// Entry for a solver result; the witness hash is filled in by [`WitnessStore::put`].
    pub fn from_extremal(
        r: &ExtremalResult,
        poset: &posetrace::Poset,
        symmetry: &str,
        witness: Option<String>,
    ) -> Self {
        CatalogEntry {
            key: CatalogKey { kind: r.kind, poset_id: Some(r.poset_id.clone()), n: r.n, l: r.l, m: None, k: None },
            poset: Some(PosetJson::relation_of(poset)),
            poset_label: Some(r.poset.clone()),
            value: r.value,
            status: r.status,
            witness,
            method: Method { bounds: r.method.clone(), symmetry: Some(symmetry.into()), nodes: r.nodes, ranges: None },
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: now(),
        }
    }

    pub fn from_arrow(r: &ArrowResult, witness: Option<String>) -> Self {
        let mut bounds = vec!["downset reduction".to_string()];
        if let Some(d) = &r.degenerate {
            bounds.push(format!("degenerate: {d}"));
        }
        CatalogEntry {
            key: CatalogKey { kind: Kind::Arrow, poset_id: None, n: r.n, l: Some(r.l), m: Some(r.m), k: Some(r.k) },
            poset: None,
            poset_label: None,
            value: usize::from(r.holds),
            status: r.status,
            witness,
            method: Method { bounds, symmetry: None, nodes: r.nodes, ranges: None },
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: now(),
        }
    }

    fn rank(&self) -> u8 {
        match self.status {
            Status::Exact => 2,
            Status::LowerBoundOnly => 1,
            Status::Timeout => 0,
        }
    }

    fn check_schema(&self) -> Result<()> {
        let k = &self.key;
        let arrow = k.kind == Kind::Arrow;
        let ok = if arrow {
            k.poset_id.is_none() && k.m.is_some() && k.k.is_some() && k.l.is_some() && self.value <= 1
        } else {
            k.poset_id.is_some()
                && self.poset.is_some()
                && k.m.is_none()
                && k.k.is_none()
                && (k.kind == Kind::TrL) == k.l.is_some()
        };
        if !ok {
            return Err(CatalogError::Schema(format!("malformed entry for {k}")));
        }
        if let Some(w) = &self.witness {
            if w.len() != 64 || !w.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(CatalogError::Schema(format!("{k}: witness reference {w:?} is not a sha256 digest")));
            }
        }
        Ok(())
    }
}

/// Picks one of two entries for the same key, or reports a contradiction.
/// The choice depends only on the two entries, never on their order.
fn reconcile(a: &CatalogEntry, b: &CatalogEntry) -> Result<CatalogEntry> {
    let key = a.key.to_string();
    let conflict = |reason: String| Err(CatalogError::Integrity { key: key.clone(), reason });
    if a.status == Status::Exact && b.status == Status::Exact && a.value != b.value {
        return conflict(format!("exact values {} and {} disagree", a.value, b.value));
    }
    if a.key.kind != Kind::Arrow {
        for (x, y) in [(a, b), (b, a)] {
            if x.status == Status::Exact && y.status == Status::LowerBoundOnly && y.value > x.value {
                return conflict(format!("lower bound {} exceeds exact value {}", y.value, x.value));
            }
        }
    }
    let order = |e: &CatalogEntry| (e.rank(), e.value);
    let pick = match order(a).cmp(&order(b)) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            // Same strength: the earlier record wins, then the smaller serialization.
            let sa = serde_json::to_string(a)?;
            let sb = serde_json::to_string(b)?;
            if (a.timestamp, &sa) <= (b.timestamp, &sb) {
                a
            } else {
                b
            }
        }
    };
    Ok(pick.clone())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Catalog {
    entries: BTreeMap<CatalogKey, CatalogEntry>,
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    version: u32,
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn get(&self, key: &CatalogKey) -> Option<&CatalogEntry> {
        self.entries.get(key)
    }

    /// Inserts `entry`, keeping whichever record is stronger. Returns the
    /// record now stored under the key.
    pub fn put(&mut self, entry: CatalogEntry) -> Result<&CatalogEntry> {
        entry.check_schema()?;
        let merged = match self.entries.get(&entry.key) {
            Some(old) => reconcile(old, &entry)?,
            None => entry,
        };
        let key = merged.key.clone();
        self.entries.insert(key.clone(), merged);
        Ok(&self.entries[&key])
    }

    /// Commutative, idempotent union. Fails on contradicting exact values.
    pub fn merge(&self, other: &Catalog) -> Result<Catalog> {
        let mut out = self.clone();
        for e in other.entries.values() {
            out.put(e.clone())?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CatalogFile { version: FORMAT_VERSION, entries: self.entries.values().cloned().collect() };
        Ok(serde_json::to_string_pretty(&file)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Catalog> {
        let file: CatalogFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(CatalogError::Schema(format!("unsupported catalog version {}", file.version)));
        }
        let mut c = Catalog::new();
        for e in file.entries {
            if c.entries.contains_key(&e.key) {
                return Err(CatalogError::Schema(format!("duplicate key {}", e.key)));
            }
            c.put(e)?;
        }
        Ok(c)
    }

    /// Loads a catalog; a missing file is an empty catalog.
    pub fn load(path: &Path) -> Result<Catalog> {
        match fs::read_to_string(path) {
            Ok(text) => Catalog::from_json(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Catalog::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes atomically. The caller holds the [`WriteLock`].
    pub fn save(&self, path: &Path, _lock: &WriteLock) -> Result<()> {
        let dir = parent_dir(path);
        fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        tmp.write_all(self.to_json()?.as_bytes())?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Exclusive writer token, a `<catalog>.lock` file removed on drop.
pub struct WriteLock {
    path: PathBuf,
}

impl WriteLock {
    pub fn acquire(catalog: &Path) -> Result<WriteLock> {
        let path = sidecar(catalog, "lock");
        fs::create_dir_all(parent_dir(&path))?;
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(WriteLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(CatalogError::Locked(catalog.to_path_buf())),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for WriteLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn sidecar(catalog: &Path, ext: &str) -> PathBuf {
    let mut p = catalog.to_path_buf();
    p.set_extension(ext);
    p
}

/// Content-addressed witness blobs next to a catalog file.
pub struct WitnessStore {
    dir: PathBuf,
}

impl WitnessStore {
    pub fn for_catalog(catalog: &Path) -> WitnessStore {
        WitnessStore { dir: sidecar(catalog, "witnesses") }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn put(&self, family: &Family) -> Result<String> {
        let bytes = canonical_bytes(family)?;
        let hash = hex::encode(Sha256::digest(&bytes));
        let path = self.dir.join(format!("{hash}.json"));
        if !path.exists() {
            fs::create_dir_all(&self.dir)?;
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
            tmp.write_all(&bytes)?;
            tmp.persist(&path).map_err(|e| e.error)?;
        }
        Ok(hash)
    }

    /// Loads a blob and checks that its content still matches its name.
    pub fn get(&self, hash: &str) -> Result<Family> {
        let bytes = fs::read(self.dir.join(format!("{hash}.json")))?;
        let actual = hex::encode(Sha256::digest(&bytes));
        if actual != hash {
            return Err(CatalogError::Integrity {
                key: hash.into(),
                reason: format!("blob content hashes to {actual}"),
            });
        }
        let text = String::from_utf8(bytes).map_err(|e| CatalogError::Schema(e.to_string()))?;
        Family::from_json_str(&text).map_err(|e| CatalogError::Schema(e.to_string()))
    }

    /// Copies every blob of `other` that is missing here.
    pub fn absorb(&self, other: &WitnessStore) -> Result<()> {
        let Ok(read) = fs::read_dir(&other.dir) else { return Ok(()) };
        fs::create_dir_all(&self.dir)?;
        for f in read {
            let f = f?;
            let target = self.dir.join(f.file_name());
            if !target.exists() {
                fs::copy(f.path(), target)?;
            }
        }
        Ok(())
    }
}

/// Canonical JSON of a family: compact `{"n":..,"sets":..}` with sorted members.
pub fn canonical_bytes(family: &Family) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec(family)?)
}

/// Merges two catalog files into `out`, carrying their witness blobs along.
pub fn merge_files(a: &Path, b: &Path, out: &Path) -> Result<Catalog> {
    let merged = Catalog::load(a)?.merge(&Catalog::load(b)?)?;
    let lock = WriteLock::acquire(out)?;
    let store = WitnessStore::for_catalog(out);
    for src in [a, b] {
        let other = WitnessStore::for_catalog(src);
        if other.dir != store.dir {
            store.absorb(&other)?;
        }
    }
    merged.save(out, &lock)?;
    Ok(merged)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub key: String,
    pub report: VerificationReport,
}

/// Replays every stored witness against its entry using the certificate checker.
pub fn verify_catalog(catalog: &Catalog, store: &WitnessStore) -> Vec<EntryCheck> {
    catalog.entries().map(|e| EntryCheck { key: e.key.to_string(), report: verify_entry(e, store) }).collect()
}

fn failed(msg: String) -> VerificationReport {
    VerificationReport { passed: false, checked: vec![], failure: Some(msg), solver_trusted: vec![] }
}

pub fn verify_entry(e: &CatalogEntry, store: &WitnessStore) -> VerificationReport {
    let family = match e.witness.as_deref().map(|h| store.get(h)) {
        Some(Ok(f)) => Some(f),
        Some(Err(err)) => return failed(format!("witness: {err}")),
        None => None,
    };
    let k = &e.key;
    let claim = if k.kind == Kind::Arrow {
        Claim::Arrow { n: k.n, m: k.m.unwrap_or(0), k: k.k.unwrap_or(0), l: k.l.unwrap_or(0), holds: e.value == 1 }
    } else {
        let Some(poset) = e.poset.clone() else { return failed("entry has no poset".into()) };
        match poset.build() {
            Ok(p) if Some(canonical_id(&p)) == k.poset_id => {}
            Ok(_) => return failed("poset does not match the key's canonical id".into()),
            Err(err) => return failed(format!("poset: {err}")),
        }
        Claim::Extremal { kind: k.kind, n: k.n, l: k.l, poset, value: e.value, exact: e.status == Status::Exact }
    };
    let evidence = match family {
        Some(family) => Evidence::Family { family },
        None if e.status == Status::Timeout => {
            let mut r = VerificationReport { passed: true, ..Default::default() };
            r.checked.push("timed-out entry carries no claim".into());
            return r;
        }
        None => Evidence::None,
    };
    verify_certificate(&Certificate { claim, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use posetrace::constructions::butterfly_lower;
    use posetrace::poset::butterfly;

    fn entry(value: usize, status: Status) -> CatalogEntry {
        let p = butterfly();
        CatalogEntry {
            key: CatalogKey { kind: Kind::Tr, poset_id: Some(canonical_id(&p)), n: 5, l: None, m: None, k: None },
            poset: Some(PosetJson::relation_of(&p)),
            poset_label: Some("B".into()),
            value,
            status,
            witness: None,
            method: Method::default(),
            tool_version: "0".into(),
            timestamp: 7,
        }
    }

    #[test]
    fn put_get_round_trip() {
        let mut c = Catalog::new();
        let e = entry(8, Status::Exact);
        c.put(e.clone()).unwrap();
        assert_eq!(c.get(&e.key), Some(&e));
        let back = Catalog::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn merge_is_idempotent_and_commutative() {
        let mut a = Catalog::new();
        a.put(entry(7, Status::LowerBoundOnly)).unwrap();
        let mut b = Catalog::new();
        b.put(entry(8, Status::Exact)).unwrap();
        assert_eq!(a.merge(&a).unwrap(), a);
        let ab = a.merge(&b).unwrap();
        assert_eq!(ab, b.merge(&a).unwrap());
        assert_eq!(ab.entries().next().unwrap().value, 8);
        let mut late = entry(8, Status::Exact);
        late.timestamp = 99;
        let mut c = Catalog::new();
        c.put(late).unwrap();
        assert_eq!(b.merge(&c).unwrap(), c.merge(&b).unwrap());
    }

    #[test]
    fn conflicting_exact_values_are_rejected() {
        let mut a = Catalog::new();
        a.put(entry(8, Status::Exact)).unwrap();
        let mut b = Catalog::new();
        b.put(entry(9, Status::Exact)).unwrap();
        assert!(matches!(a.merge(&b), Err(CatalogError::Integrity { .. })));
        let mut c = Catalog::new();
        c.put(entry(9, Status::LowerBoundOnly)).unwrap();
        assert!(matches!(a.merge(&c), Err(CatalogError::Integrity { .. })));
    }

    #[test]
    fn schema_is_checked() {
        let mut e = entry(8, Status::Exact);
        e.key.l = Some(3);
        assert!(matches!(Catalog::new().put(e), Err(CatalogError::Schema(_))));
        let mut e = entry(8, Status::Exact);
        e.witness = Some("zz".into());
        assert!(matches!(Catalog::new().put(e), Err(CatalogError::Schema(_))));
    }

    #[test]
    fn witness_blobs_are_content_addressed() {
        let dir = tempfile::tempdir().unwrap();
        let cat = dir.path().join("cat.json");
        let store = WitnessStore::for_catalog(&cat);
        let f = butterfly_lower(5).unwrap();
        let h = store.put(&f).unwrap();
        assert_eq!(h, store.put(&f).unwrap());
        assert_eq!(store.get(&h).unwrap(), f);

        let mut e = entry(8, Status::Exact);
        e.witness = Some(h.clone());
        assert!(verify_entry(&e, &store).passed);
        e.value = 9;
        assert!(!verify_entry(&e, &store).passed);

        fs::write(store.dir().join(format!("{h}.json")), b"{\"n\":5,\"sets\":[[]]}").unwrap();
        assert!(matches!(store.get(&h), Err(CatalogError::Integrity { .. })));
    }

    #[test]
    fn writer_lock_is_exclusive() {
        let dir = tempfile::tempdir().unwrap();
        let cat = dir.path().join("cat.json");
        let lock = WriteLock::acquire(&cat).unwrap();
        assert!(matches!(WriteLock::acquire(&cat), Err(CatalogError::Locked(_))));
        Catalog::new().save(&cat, &lock).unwrap();
        drop(lock);
        assert!(WriteLock::acquire(&cat).is_ok());
        assert!(Catalog::load(&cat).unwrap().is_empty());
    }
}
