//! Runs every registered identity and decomposition against a set of
//! parameter profiles and collects the verdicts into a report.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Param, ParamSet};
use crate::error::{Error, Result};
use crate::kernel::{MultiIndex3, Rational};
use crate::operators::Verdict;
use crate::registry::{registry, Registry};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub name: String,
    pub params: ParamSet<Rational>,
}

impl Profile {
    pub fn new(name: &str, params: ParamSet<Rational>) -> Self {
        Self { name: name.to_string(), params }
    }
}

fn profile(name: &str, vals: [(i64, i64); 7]) -> Profile {
    use Param::*;
    let names = [Alpha, Beta1, Beta2, Gamma, Gamma1, Gamma2, Gamma3];
    let params = names
        .into_iter()
        .zip(vals)
        .map(|(p, (a, b))| (p, Rational::new(a, b).expect("nonzero denominator")))
        .collect();
    Profile::new(name, params)
}

/// Three unrelated rational profiles with every denominator parameter
/// between 2 and 4.
pub fn default_profiles() -> Vec<Profile> {
    vec![
        profile("p1", [(1, 2), (1, 3), (1, 4), (13, 5), (5, 2), (7, 3), (9, 4)]),
        profile("p2", [(2, 7), (3, 5), (5, 6), (17, 6), (11, 4), (13, 5), (19, 7)]),
        profile("p3", [(3, 4), (2, 9), (4, 7), (23, 8), (31, 10), (17, 7), (29, 9)]),
    ]
}

/// A non-integer `p/q` with `q` in `2..=9` strictly between `lo` and `hi`.
fn draw(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    loop {
        let q = rng.gen_range(2..=9i64);
        let p = rng.gen_range(lo * q + 1..hi * q);
        if p % q != 0 {
            return Rational::new(p, q).expect("q > 0");
        }
    }
}

/// `count` random profiles: numerator parameters in `(0, 2)`, denominator
/// parameters in `(2, 3)`. The same seed gives the same profiles.
pub fn seeded_profiles(seed: u64, count: usize) -> Vec<Profile> {
    use Param::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=count)
        .map(|k| {
            let mut ps = ParamSet::new();
            for p in [Alpha, Beta1, Beta2] {
                ps.set(p, draw(&mut rng, 0, 2));
            }
            for p in [Gamma, Gamma1, Gamma2, Gamma3] {
                ps.set(p, draw(&mut rng, 2, 3));
            }
            Profile::new(&format!("s{seed}-{k}"), ps)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Identity,
    Decomposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Error,
}

impl Status {
    fn of(r: &Result<Verdict>) -> Status {
        match r {
            Ok(v) if v.is_verified() => Status::Verified,
            Ok(_) => Status::Failed,
            Err(_) => Status::Error,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub id: String,
    pub kind: EntryKind,
    pub profile: String,
    pub status: Status,
    pub degree_checked: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_bad_index: Option<MultiIndex3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Outcome of the repaired variant, for entries that carry one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected_status: Option<Status>,
    pub ms: f64,
}

/// Per-entry verdict across all profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryVerdict {
    pub id: String,
    pub kind: EntryKind,
    /// `verified` only when every profile verified.
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected_status: Option<Status>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub rows: usize,
    pub verified: usize,
    pub failed: usize,
    pub errors: usize,
    pub by_id: Vec<EntryVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub version: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub profiles: Vec<Profile>,
    pub entries: Vec<AuditRow>,
    pub summary: AuditSummary,
}

/// Orders ids like `4.2 < 4.10`.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    let key = |s: &str| -> Vec<u32> { s.split('.').map(|p| p.parse().unwrap_or(u32::MAX)).collect() };
    key(a).cmp(&key(b)).then_with(|| a.cmp(b))
}

fn worst(a: Status, b: Status) -> Status {
    use Status::*;
    match (a, b) {
        (Error, _) | (_, Error) => Error,
        (Failed, _) | (_, Failed) => Failed,
        _ => Verified,
    }
}

fn summarize(rows: &[AuditRow]) -> AuditSummary {
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let mut by_id: Vec<EntryVerdict> = Vec::new();
    for r in rows {
        match by_id.last_mut() {
            Some(e) if e.id == r.id => {
                e.status = worst(e.status, r.status);
                e.corrected_status = match (e.corrected_status, r.corrected_status) {
                    (Some(a), Some(b)) => Some(worst(a, b)),
                    (a, b) => a.or(b),
                };
            }
            _ => by_id.push(EntryVerdict {
                id: r.id.clone(),
                kind: r.kind,
                status: r.status,
                corrected_status: r.corrected_status,
            }),
        }
    }
    AuditSummary {
        rows: rows.len(),
        verified: count(Status::Verified),
        failed: count(Status::Failed),
        errors: count(Status::Error),
        by_id,
    }
}

fn check(reg: &Registry, id: &str, kind: EntryKind, p: &Profile, degree: u32) -> AuditRow {
    let start = Instant::now();
    let (main, fixed) = match kind {
        EntryKind::Identity => {
            let e = reg.identity(id).expect("id taken from the registry");
            let fixed = e.corrected.as_ref().map(|_| e.verify_corrected(&p.params, degree));
            (e.verify(&p.params, degree), fixed)
        }
        EntryKind::Decomposition => {
            let e = reg.decomposition(id).expect("id taken from the registry");
            let fixed = e.corrected.as_ref().map(|_| e.verify_corrected(&p.params, degree));
            (e.verify(&p.params, degree), fixed)
        }
    };
    let ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    let mut row = AuditRow {
        id: id.to_string(),
        kind,
        profile: p.name.clone(),
        status: Status::of(&main),
        degree_checked: degree,
        first_bad_index: None,
        expected: None,
        actual: None,
        error: None,
        corrected_status: fixed.as_ref().map(Status::of),
        ms,
    };
    match main {
        Ok(Verdict::Failed { first_bad_index, expected, actual }) => {
            row.first_bad_index = Some(first_bad_index);
            row.expected = Some(expected);
            row.actual = Some(actual);
        }
        Err(e) => row.error = Some(e.to_string()),
        Ok(Verdict::Verified { .. }) => {}
    }
    row
}

/// Verifies every registry entry at every profile to total degree `degree`.
/// Failed verdicts are recorded, never raised.
pub fn run_audit(profiles: &[Profile], degree: u32) -> Result<AuditReport> {
    run_audit_with(registry(), profiles, degree, None)
}

/// [`run_audit`] against an arbitrary registry, recording `seed` in the report.
pub fn run_audit_with(reg: &Registry, profiles: &[Profile], degree: u32, seed: Option<u64>) -> Result<AuditReport> {
    if degree < 2 {
        return Err(Error::BadParams(format!("audit degree must be at least 2, got {degree}")));
    }
    if profiles.is_empty() {
        return Err(Error::BadParams("no parameter profiles".into()));
    }
    let mut cells: Vec<(&str, EntryKind, &Profile)> = Vec::new();
    for p in profiles {
        cells.extend(reg.identities().iter().map(|e| (e.id.as_str(), EntryKind::Identity, p)));
        cells.extend(reg.decompositions().iter().map(|e| (e.id.as_str(), EntryKind::Decomposition, p)));
    }
    let mut entries: Vec<AuditRow> = cells
        .into_par_iter()
        .map(|(id, kind, p)| check(reg, id, kind, p, degree))
        .collect();
    entries.sort_by(|a, b| compare_ids(&a.id, &b.id).then_with(|| a.profile.cmp(&b.profile)));
    let summary = summarize(&entries);
    Ok(AuditReport {
        version: VERSION.to_string(),
        degree,
        seed,
        profiles: profiles.to_vec(),
        entries,
        summary,
    })
}

impl AuditReport {
    pub fn has_failures(&self) -> bool {
        self.summary.failed + self.summary.errors > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Zeroes the wall times so two runs can be compared byte for byte.
    pub fn without_timing(mut self) -> Self {
        for r in &mut self.entries {
            r.ms = 0.0;
        }
        self
    }

    /// The JSON document without wall times.
    pub fn body_json(&self) -> String {
        self.clone().without_timing().to_json()
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<14} {:<8} {:<9} {:<10} {:>9}  witness", "id", "kind", "profile", "status", "corrected", "ms");
        for r in &self.entries {
            let kind = match r.kind {
                EntryKind::Identity => "identity",
                EntryKind::Decomposition => "decomposition",
            };
            let witness = match (&r.first_bad_index, &r.expected, &r.actual, &r.error) {
                (Some(i), Some(e), Some(a), _) => format!("at {i}: lhs {e}, rhs {a}"),
                (_, _, _, Some(err)) => err.clone(),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "{:<6} {:<14} {:<8} {:<9} {:<10} {:>9.3}  {}",
                r.id,
                kind,
                r.profile,
                r.status.as_str(),
                r.corrected_status.map_or("-", Status::as_str),
                r.ms,
                witness
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\n{} rows at degree {}: {} verified, {} failed, {} errors",
            s.rows, self.degree, s.verified, s.failed, s.errors
        );
        let bad: Vec<&EntryVerdict> = s.by_id.iter().filter(|e| e.status != Status::Verified).collect();
        if !bad.is_empty() {
            let _ = writeln!(out, "entries not verified as printed:");
            for e in bad {
                let fix = match e.corrected_status {
                    Some(st) => format!(" (corrected variant {})", st.as_str()),
                    None => String::new(),
                };
                let _ = writeln!(out, "  {} {}{}", e.id, e.status.as_str(), fix);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_sort_numerically() {
        let mut v = vec!["4.10", "3.2", "4.2", "7.1", "3.15"];
        v.sort_by(|a, b| compare_ids(a, b));
        assert_eq!(v, ["3.2", "3.15", "4.2", "4.10", "7.1"]);
    }

    #[test]
    fn seeded_profiles_are_reproducible_and_in_range() {
        let a = seeded_profiles(7, 3);
        assert_eq!(a, seeded_profiles(7, 3));
        assert_ne!(a, seeded_profiles(8, 3));
        let two = Rational::from_integer(2);
        let three = Rational::from_integer(3);
        for p in &a {
            for (k, v) in p.params.iter() {
                assert!(!v.is_integer());
                assert!(*v.denom() <= 9.into());
                if k.is_denominator() {
                    assert!(v > &two && v < &three, "{k}={v}");
                } else {
                    assert!(!v.is_negative() && v < &two, "{k}={v}");
                }
            }
        }
    }

    #[test]
    fn low_degree_is_rejected() {
        assert!(matches!(run_audit(&default_profiles(), 1), Err(Error::BadParams(_))));
        assert!(matches!(run_audit(&[], 4), Err(Error::BadParams(_))));
    }

    #[test]
    fn summary_takes_the_worst_status() {
        assert_eq!(worst(Status::Verified, Status::Failed), Status::Failed);
        assert_eq!(worst(Status::Failed, Status::Error), Status::Error);
        assert_eq!(worst(Status::Verified, Status::Verified), Status::Verified);
    }
}
