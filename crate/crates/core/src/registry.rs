//! The embedded table of operator identities and decomposition formulas.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::decomposition::{DecompositionEntry, Term};
use crate::error::{Error, Result};
use crate::notation::{parse_call, parse_calls, parse_chain, parse_factors, parse_monomial, parse_sign};
use crate::operators::{IdentityEntry, IdentityFix};

const EMBEDDED: &str = include_str!("../data/registry.toml");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegistry {
    #[serde(default)]
    identity: Vec<RawIdentity>,
    #[serde(default)]
    decomposition: Vec<RawDecomposition>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdentity {
    id: String,
    lhs: String,
    chain: String,
    rhs: String,
    corrected: Option<RawIdentityFix>,
}

/// Missing fields keep the printed ones.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdentityFix {
    note: String,
    chain: Option<String>,
    rhs: Option<String>,
}

#[derive(Deserialize)]
struct RawTerm {
    sign: Option<String>,
    #[serde(default)]
    numer: String,
    #[serde(default)]
    denom: String,
    monomial: String,
    rhs: String,
}

/// Missing fields keep the printed ones.
#[derive(Deserialize)]
struct RawTermPatch {
    sign: Option<String>,
    numer: Option<String>,
    denom: Option<String>,
    monomial: Option<String>,
    rhs: Option<String>,
}

impl RawTermPatch {
    fn over(&self, base: &RawTerm) -> RawTerm {
        let pick = |a: &Option<String>, b: &String| a.clone().unwrap_or_else(|| b.clone());
        RawTerm {
            sign: self.sign.clone().or_else(|| base.sign.clone()),
            numer: pick(&self.numer, &base.numer),
            denom: pick(&self.denom, &base.denom),
            monomial: pick(&self.monomial, &base.monomial),
            rhs: pick(&self.rhs, &base.rhs),
        }
    }
}

#[derive(Deserialize)]
struct RawDecomposition {
    id: String,
    lhs: String,
    indices: Vec<String>,
    #[serde(flatten)]
    term: RawTerm,
    corrected: Option<RawCorrection>,
}

#[derive(Deserialize)]
struct RawCorrection {
    note: String,
    #[serde(flatten)]
    term: RawTermPatch,
}

#[derive(Debug, Clone)]
pub struct Registry {
    identities: Vec<IdentityEntry>,
    decompositions: Vec<DecompositionEntry>,
}

fn context(id: &str, e: Error) -> Error {
    Error::BadConfig(format!("entry {id}: {e}"))
}

fn build_term(raw: &RawTerm, indices: &[String]) -> Result<Term> {
    Ok(Term {
        sign: raw.sign.as_deref().map(|s| parse_sign(s, indices)).transpose()?,
        numer: parse_factors(&raw.numer, indices)?,
        denom: parse_factors(&raw.denom, indices)?,
        monomial: parse_monomial(&raw.monomial, indices)?,
        rhs: parse_calls(&raw.rhs, indices)?,
        text: raw.rhs.clone(),
    })
}

impl Registry {
    pub fn from_toml(src: &str) -> Result<Self> {
        let raw: RawRegistry = toml::from_str(src).map_err(|e| Error::BadConfig(e.to_string()))?;
        let mut identities = Vec::with_capacity(raw.identity.len());
        for r in raw.identity {
            let build = || -> Result<IdentityEntry> {
                let corrected = match &r.corrected {
                    Some(c) => Some(IdentityFix {
                        note: c.note.clone(),
                        chain: parse_chain(c.chain.as_deref().unwrap_or(&r.chain))?,
                        rhs: parse_calls(c.rhs.as_deref().unwrap_or(&r.rhs), &[])?,
                    }),
                    None => None,
                };
                Ok(IdentityEntry {
                    id: r.id.clone(),
                    lhs: parse_call(&r.lhs, &[])?,
                    chain: parse_chain(&r.chain)?,
                    rhs: parse_calls(&r.rhs, &[])?,
                    lhs_text: r.lhs.clone(),
                    chain_text: r.chain.clone(),
                    rhs_text: r.rhs.clone(),
                    corrected,
                })
            };
            identities.push(build().map_err(|e| context(&r.id, e))?);
        }
        let mut decompositions = Vec::with_capacity(raw.decomposition.len());
        for r in raw.decomposition {
            let build = || -> Result<DecompositionEntry> {
                let corrected = match &r.corrected {
                    Some(c) => Some((c.note.clone(), build_term(&c.term.over(&r.term), &r.indices)?)),
                    None => None,
                };
                DecompositionEntry::new(
                    r.id.clone(),
                    parse_call(&r.lhs, &[])?,
                    r.lhs.clone(),
                    r.indices.clone(),
                    build_term(&r.term, &r.indices)?,
                    corrected,
                )
            };
            decompositions.push(build().map_err(|e| context(&r.id, e))?);
        }
        let mut ids: Vec<&str> = identities.iter().map(|e| e.id.as_str()).collect();
        ids.extend(decompositions.iter().map(|e| e.id.as_str()));
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::BadConfig(format!("duplicate id {}", w[0])));
        }
        Ok(Self { identities, decompositions })
    }

    pub fn identities(&self) -> &[IdentityEntry] {
        &self.identities
    }

    pub fn decompositions(&self) -> &[DecompositionEntry] {
        &self.decompositions
    }

    pub fn identity(&self, id: &str) -> Result<&IdentityEntry> {
        self.identities
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    pub fn decomposition(&self, id: &str) -> Result<&DecompositionEntry> {
        self.decompositions
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.identity(id).is_ok() || self.decomposition(id).is_ok()
    }

    /// All ids, identities first, in table order.
    pub fn ids(&self) -> Vec<&str> {
        self.identities
            .iter()
            .map(|e| e.id.as_str())
            .chain(self.decompositions.iter().map(|e| e.id.as_str()))
            .collect()
    }
}

/// The built-in registry, parsed on first use.
pub fn registry() -> &'static Registry {
    static CELL: OnceLock<Registry> = OnceLock::new();
    CELL.get_or_init(|| Registry::from_toml(EMBEDDED).expect("embedded registry is well formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_loads() {
        let r = registry();
        assert_eq!(r.identities().len(), 15);
        assert_eq!(r.decompositions().len(), 19);
        assert_eq!(r.ids().len(), 34);
        assert!(r.contains("4.13"));
        assert!(matches!(r.identity("9.9"), Err(Error::UnknownIdentity(_))));
        assert!(matches!(r.decomposition("3.1"), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(Registry::from_toml("[[identity]]\nid = \"a\"\n").is_err());
        let dup = r#"
[[identity]]
id = "a"
lhs = "F(alpha, beta1; gamma; x)"
chain = ""
rhs = "F(alpha, beta1; gamma; x)"
[[identity]]
id = "a"
lhs = "F(alpha, beta1; gamma; x)"
chain = ""
rhs = "F(alpha, beta1; gamma; x)"
"#;
        assert!(matches!(Registry::from_toml(dup), Err(Error::BadConfig(_))));
    }

    #[test]
    fn index_without_degree_is_rejected() {
        let src = r#"
[[decomposition]]
id = "d"
lhs = "F(alpha, beta1; gamma; x)"
indices = ["i", "j"]
numer = "(alpha)_{i}"
monomial = "x^{i}"
rhs = "F(alpha, beta1; gamma; x)"
"#;
        assert!(matches!(Registry::from_toml(src), Err(Error::BadConfig(_))));
    }
}
