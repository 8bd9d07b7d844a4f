use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Rational;

/// Parameter names. Greek names belong to the triple series, Latin ones to
/// the classical functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Alpha,
    Beta1,
    Beta2,
    Gamma,
    Gamma1,
    Gamma2,
    Gamma3,
    A,
    A1,
    A2,
    B,
    B1,
    B2,
    B3,
    C,
    C1,
    C2,
}

impl Param {
    pub const ALL: [Param; 17] = [
        Param::Alpha,
        Param::Beta1,
        Param::Beta2,
        Param::Gamma,
        Param::Gamma1,
        Param::Gamma2,
        Param::Gamma3,
        Param::A,
        Param::A1,
        Param::A2,
        Param::B,
        Param::B1,
        Param::B2,
        Param::B3,
        Param::C,
        Param::C1,
        Param::C2,
    ];

    pub fn name(self) -> &'static str {
        use Param::*;
        match self {
            Alpha => "alpha",
            Beta1 => "beta1",
            Beta2 => "beta2",
            Gamma => "gamma",
            Gamma1 => "gamma1",
            Gamma2 => "gamma2",
            Gamma3 => "gamma3",
            A => "a",
            A1 => "a1",
            A2 => "a2",
            B => "b",
            B1 => "b1",
            B2 => "b2",
            B3 => "b3",
            C => "c",
            C1 => "c1",
            C2 => "c2",
        }
    }

    /// True for the parameters that appear in denominator Pochhammers.
    pub fn is_denominator(self) -> bool {
        use Param::*;
        matches!(self, Gamma | Gamma1 | Gamma2 | Gamma3 | C | C1 | C2)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown parameter `{s}`")))
    }
}

/// Named parameter values: [`Rational`] on the exact path, `f64` on the float path.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamSet<T> {
    values: BTreeMap<Param, T>,
}

impl<T> ParamSet<T> {
    pub fn new() -> Self {
        Self { values: BTreeMap::new() }
    }

    pub fn with(mut self, p: Param, v: T) -> Self {
        self.values.insert(p, v);
        self
    }

    pub fn set(&mut self, p: Param, v: T) {
        self.values.insert(p, v);
    }

    pub fn get(&self, p: Param) -> Result<&T> {
        self.values.get(&p).ok_or_else(|| Error::MissingParam(p.name().to_string()))
    }

    pub fn contains(&self, p: Param) -> bool {
        self.values.contains_key(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Param, &T)> {
        self.values.iter().map(|(p, v)| (*p, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> ParamSet<U> {
        ParamSet { values: self.values.iter().map(|(p, v)| (*p, f(v))).collect() }
    }
}

impl<T> FromIterator<(Param, T)> for ParamSet<T> {
    fn from_iter<I: IntoIterator<Item = (Param, T)>>(iter: I) -> Self {
        Self { values: iter.into_iter().collect() }
    }
}

fn split_assignments(s: &str) -> Result<Vec<(Param, &str)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value, got `{t}`")))?;
            Ok((k.parse()?, v.trim()))
        })
        .collect()
}

impl ParamSet<Rational> {
    /// Parses `alpha=1/2,beta1=1/3,...`. Decimal values are rejected.
    pub fn parse_exact(s: &str) -> Result<Self> {
        split_assignments(s)?
            .into_iter()
            .map(|(k, v)| {
                if v.contains('.') || v.contains('e') || v.contains('E') {
                    return Err(Error::Parse(format!(
                        "`{k}={v}`: exact parameters must be written as p/q"
                    )));
                }
                Ok((k, v.parse()?))
            })
            .collect()
    }

    pub fn to_f64(&self) -> ParamSet<f64> {
        self.map(Rational::to_f64)
    }
}

impl ParamSet<f64> {
    /// Parses `alpha=0.5,beta1=1.5,...`. Fractions are rejected.
    pub fn parse_float(s: &str) -> Result<Self> {
        split_assignments(s)?
            .into_iter()
            .map(|(k, v)| {
                if v.contains('/') {
                    return Err(Error::Parse(format!(
                        "`{k}={v}`: float parameters must be decimals"
                    )));
                }
                let x: f64 = v.parse().map_err(|_| Error::Parse(format!("bad number `{v}`")))?;
                if !x.is_finite() {
                    return Err(Error::Parse(format!("non-finite value for {k}")));
                }
                Ok((k, x))
            })
            .collect()
    }
}

impl<T: fmt::Display> fmt::Display for ParamSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, v) in &self.values {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{p}={v}")?;
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Debug for ParamSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_float_parsing_do_not_mix() {
        let ps = ParamSet::parse_exact("alpha=1/2, beta1=3").unwrap();
        assert_eq!(ps.get(Param::Beta1).unwrap(), &Rational::from(3));
        assert!(ParamSet::parse_exact("alpha=0.5").is_err());
        assert!(ParamSet::parse_float("alpha=1/2").is_err());
        assert_eq!(*ParamSet::parse_float("gamma2=2.33").unwrap().get(Param::Gamma2).unwrap(), 2.33);
        assert!(ParamSet::parse_exact("delta=1").is_err());
        assert!(ParamSet::parse_exact("alpha").is_err());
    }

    #[test]
    fn missing_param_names_it() {
        let ps: ParamSet<f64> = ParamSet::new();
        assert_eq!(ps.get(Param::Gamma3), Err(Error::MissingParam("gamma3".into())));
    }

    #[test]
    fn serde_is_a_name_map() {
        let ps = ParamSet::parse_exact("beta1=1/3,alpha=1/2").unwrap();
        let s = serde_json::to_string(&ps).unwrap();
        assert_eq!(s, r#"{"alpha":"1/2","beta1":"1/3"}"#);
        assert_eq!(serde_json::from_str::<ParamSet<Rational>>(&s).unwrap(), ps);
        assert_eq!(ps.to_string(), "alpha=1/2,beta1=1/3");
    }
}
