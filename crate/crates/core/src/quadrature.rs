//! Tensor-product quadrature of the integral representations of H_A, H_B
//! and H_C, for cross-checking the series.
//!
//! Integrals over `[0, 1]` use Gauss-Legendre after the substitution
//! `t = sin^2(theta)`, which turns the endpoint factors `t^a (1 - t)^b` into
//! powers of `sin` and `cos` and keeps half-integer exponents smooth.
//! Integrals over `[0, inf)` use generalized Gauss-Laguerre rules whose
//! weight absorbs `u^(a - 1) e^(-u)`.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::{FiniteAboveNegOneF64, GaussLaguerre, GaussLegendre};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::catalog::{eval, eval_values, EvalOptions, EvalResult, EvalStatus, FunctionId, Param, ParamSet};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntegralRepId {
    R5_1,
    R5_10,
    R6_1,
    R6_2,
    R6_4,
    R6_5,
    R6_6,
    R6_7,
    R6_8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadRule {
    GaussLegendre01,
    GaussLaguerre,
}

impl IntegralRepId {
    pub const ALL: [IntegralRepId; 9] = [
        IntegralRepId::R5_1,
        IntegralRepId::R5_10,
        IntegralRepId::R6_1,
        IntegralRepId::R6_2,
        IntegralRepId::R6_4,
        IntegralRepId::R6_5,
        IntegralRepId::R6_6,
        IntegralRepId::R6_7,
        IntegralRepId::R6_8,
    ];

    pub fn target(self) -> FunctionId {
        use IntegralRepId::*;
        match self {
            R5_1 | R6_1 | R6_4 | R6_5 => FunctionId::HA,
            R5_10 | R6_2 | R6_6 | R6_7 => FunctionId::HB,
            R6_8 => FunctionId::HC,
        }
    }

    pub fn rule(self) -> QuadRule {
        use IntegralRepId::*;
        match self {
            R5_1 | R5_10 | R6_1 | R6_2 => QuadRule::GaussLegendre01,
            _ => QuadRule::GaussLaguerre,
        }
    }

    /// Number of integration variables.
    pub fn dim(self) -> usize {
        use IntegralRepId::*;
        match self {
            R5_1 | R6_1 | R6_5 | R6_7 => 2,
            _ => 3,
        }
    }

    /// The label used in the formula numbering, e.g. `5.10`.
    pub fn label(self) -> &'static str {
        use IntegralRepId::*;
        match self {
            R5_1 => "5.1",
            R5_10 => "5.10",
            R6_1 => "6.1",
            R6_2 => "6.2",
            R6_4 => "6.4",
            R6_5 => "6.5",
            R6_6 => "6.6",
            R6_7 => "6.7",
            R6_8 => "6.8",
        }
    }
}

impl fmt::Display for IntegralRepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for IntegralRepId {
    type Err = Error;

    /// Accepts `R5_1`, `r5_1` or `5.1`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        IntegralRepId::ALL
            .into_iter()
            .find(|r| r.label() == t || r.to_string().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::Parse(format!("unknown integral representation `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub nodes_per_axis: u32,
    pub rule: QuadRule,
}

impl QuadConfig {
    pub const MIN_NODES: u32 = 4;
    pub const MAX_NODES: u32 = 256;

    /// The rule matching the domain of `rep`.
    pub fn for_rep(rep: IntegralRepId, nodes_per_axis: u32) -> Self {
        Self { nodes_per_axis, rule: rep.rule() }
    }

    fn check(&self, rep: IntegralRepId) -> Result<()> {
        if !(Self::MIN_NODES..=Self::MAX_NODES).contains(&self.nodes_per_axis) {
            return Err(Error::BadConfig(format!(
                "nodes per axis must lie in [{}, {}], got {}",
                Self::MIN_NODES,
                Self::MAX_NODES,
                self.nodes_per_axis
            )));
        }
        if self.rule != rep.rule() {
            return Err(Error::BadConfig(format!("{rep} integrates with {:?}", rep.rule())));
        }
        Ok(())
    }
}

/// A node `t` stored with `1 - t` to keep the complement accurate.
#[derive(Debug, Clone, Copy)]
struct Node {
    t: f64,
    c: f64,
    /// Log weight.
    lw: f64,
}

type Table = Arc<Vec<Node>>;

/// Keyed by rule, node count and the bits of the Laguerre exponent.
type TableCache = HashMap<(u8, u32, u64), Table>;

fn cache() -> &'static Mutex<TableCache> {
    static CELL: OnceLock<Mutex<TableCache>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

fn cached(key: (u8, u32, u64), build: impl FnOnce() -> Vec<Node>) -> Table {
    if let Some(t) = cache().lock().expect("node cache").get(&key) {
        return t.clone();
    }
    let t = Arc::new(build());
    cache().lock().expect("node cache").entry(key).or_insert(t).clone()
}

fn nonzero(n: u32) -> NonZeroUsize {
    NonZeroUsize::new(n as usize).expect("node count is positive")
}

/// Legendre nodes on `[0, 1]` after `t = sin^2(theta)`.
fn legendre01(n: u32) -> Table {
    cached((0, n, 0), || {
        GaussLegendre::new(nonzero(n))
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| {
                let theta = FRAC_PI_4 * (x + 1.0);
                let (s, c) = theta.sin_cos();
                Node { t: s * s, c: c * c, lw: (w * FRAC_PI_4 * 2.0 * s * c).ln() }
            })
            .collect()
    })
}

/// `(L_n(x), L_{n-1}(x), ln_scale)` for the generalized Laguerre
/// polynomials with parameter `al`; true values are the returned ones times
/// `exp(ln_scale)`.
fn laguerre_pair(n: u32, al: f64, x: f64) -> (f64, f64, f64) {
    let (mut prev, mut cur) = (1.0f64, 1.0 + al - x);
    let mut ln_scale = 0.0;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + al - x) * cur - (k + al) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            prev *= 1e-150;
            cur *= 1e-150;
            ln_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (cur, prev, ln_scale)
}

/// Laguerre nodes for `u^(a - 1) e^(-u) / Gamma(a)`.
///
/// Golub-Welsch weights are accurate only relative to the largest weight,
/// which is not enough once the integrand grows along the tail. Nodes are
/// polished by Newton steps and weights recomputed from
/// `w = Gamma(n + al + 1) x / (n! (x L_n'(x))^2)`; weights that underflow
/// are dropped.
fn laguerre(n: u32, a: f64) -> Result<Table> {
    let al = a - 1.0;
    let alpha = FiniteAboveNegOneF64::new(al)
        .ok_or_else(|| Error::ConstraintViolated(format!("Laguerre exponent {al} must exceed -1")))?;
    let nf = n as f64;
    let ln_const = ln_gamma(nf + al + 1.0) - ln_gamma(nf + 1.0) - ln_gamma(al + 1.0);
    Ok(cached((1, n, a.to_bits()), || {
        let mut nodes: Vec<Node> = GaussLaguerre::new(nonzero(n), alpha)
            .as_node_weight_pairs()
            .iter()
            .map(|&(u0, _)| {
                let mut u = u0;
                for _ in 0..3 {
                    let (ln, lm, _) = laguerre_pair(n, al, u);
                    let deriv = (nf * ln - (nf + al) * lm) / u;
                    let step = ln / deriv;
                    if step.is_finite() {
                        u -= step;
                    }
                }
                let (ln, lm, scale) = laguerre_pair(n, al, u);
                let xd = (nf * ln - (nf + al) * lm).abs();
                let lw = ln_const + u.ln() - 2.0 * (xd.ln() + scale);
                Node { t: u, c: 1.0 - u, lw }
            })
            .filter(|nd| nd.lw.is_finite())
            .collect();
        // the rule integrates 1 exactly; normalizing absorbs the rounding in ln_const
        let top = nodes.iter().map(|nd| nd.lw).fold(f64::NEG_INFINITY, f64::max);
        let ln_sum = top + nodes.iter().map(|nd| (nd.lw - top).exp()).sum::<f64>().ln();
        for nd in &mut nodes {
            nd.lw -= ln_sum;
        }
        nodes
    }))
}

/// `base^e` for a base that must stay positive.
fn pw(base: f64, e: f64) -> Result<f64> {
    if e == 0.0 {
        Ok(1.0)
    } else if base > 0.0 {
        Ok(base.powf(e))
    } else {
        Err(Error::IntegrandSingular(format!("factor {base} raised to {e}")))
    }
}

fn gamma_ratio(num: &[f64], den: &[f64]) -> f64 {
    let s: f64 = num.iter().map(|&v| ln_gamma(v)).sum::<f64>() - den.iter().map(|&v| ln_gamma(v)).sum::<f64>();
    s.exp()
}

const INNER: EvalOptions = EvalOptions { tol: 1e-13, max_shells: 4000 };

fn inner(f: FunctionId, values: &[f64], point: &[f64]) -> Result<f64> {
    let r = eval_values(f, values, point, INNER)?;
    if r.status == EvalStatus::DivergenceSuspected {
        return Err(Error::IntegrandSingular(format!("{f} diverges at {point:?}")));
    }
    Ok(r.value)
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// Gauss function inside an integrand; the argument must stay inside the
/// unit disc unless the series terminates.
fn gauss_inner(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::IntegrandSingular(format!("Gauss argument {w}")));
    }
    if w.abs() >= 1.0 && !is_nonpositive_integer(a) && !is_nonpositive_integer(b) {
        return Err(Error::ConstraintViolated(format!("Gauss argument {w} leaves the unit disc")));
    }
    inner(FunctionId::Gauss2F1, &[a, b, c], &[w])
}

#[derive(Debug, Clone, Copy)]
struct Vals {
    a: f64,
    b1: f64,
    b2: f64,
    g: f64,
    g1: f64,
    g2: f64,
    g3: f64,
}

impl Vals {
    fn read(rep: IntegralRepId, ps: &ParamSet<f64>) -> Result<Self> {
        let get = |p: Param| ps.get(p).copied();
        let opt = |p: Param| ps.get(p).copied().unwrap_or(f64::NAN);
        let mut v = Vals {
            a: get(Param::Alpha)?,
            b1: get(Param::Beta1)?,
            b2: get(Param::Beta2)?,
            g: opt(Param::Gamma),
            g1: opt(Param::Gamma1),
            g2: opt(Param::Gamma2),
            g3: opt(Param::Gamma3),
        };
        match rep.target() {
            FunctionId::HA => {
                v.g1 = get(Param::Gamma1)?;
                v.g2 = get(Param::Gamma2)?;
            }
            FunctionId::HB => {
                v.g1 = get(Param::Gamma1)?;
                v.g2 = get(Param::Gamma2)?;
                v.g3 = get(Param::Gamma3)?;
            }
            _ => v.g = get(Param::Gamma)?,
        }
        Ok(v)
    }
}

fn require(conds: &[(&str, f64)], strict: bool) -> Result<()> {
    for (name, v) in conds {
        let ok = if strict { *v > 0.0 } else { *v >= 0.0 };
        if !ok {
            let rel = if strict { ">" } else { ">=" };
            return Err(Error::ConstraintViolated(format!("{name} = {v} must be {rel} 0")));
        }
    }
    Ok(())
}

/// The printed positivity conditions, then the endpoint exponents of the
/// `[0, 1]` integrals, which must be nonnegative for the plain rule.
fn check_constraints(rep: IntegralRepId, v: &Vals) -> Result<()> {
    use IntegralRepId::*;
    let Vals { a, b1, b2, g, g1, g2, g3 } = *v;
    type Named = Vec<(&'static str, f64)>;
    let (positive, endpoint): (Named, Named) = match rep {
        R5_1 | R6_1 => (
            vec![("beta1", b1), ("beta2", b2), ("gamma1 - beta1", g1 - b1), ("gamma2 - beta2", g2 - b2)],
            vec![
                ("beta1 - 1", b1 - 1.0),
                ("beta2 - 1", b2 - 1.0),
                ("gamma1 - beta1 - 1", g1 - b1 - 1.0),
                ("gamma2 - beta2 - 1", g2 - b2 - 1.0),
            ],
        ),
        R5_10 => (
            vec![
                ("alpha", a),
                ("beta1", b1),
                ("beta2", b2),
                ("gamma1 - beta1", g1 - b1),
                ("gamma2 - beta2", g2 - b2),
                ("gamma3 - alpha", g3 - a),
            ],
            vec![
                ("alpha - 1", a - 1.0),
                ("beta1 - 1", b1 - 1.0),
                ("beta2 - 1", b2 - 1.0),
                ("gamma1 - beta1 - 1", g1 - b1 - 1.0),
                ("gamma2 - beta2 - 1", g2 - b2 - 1.0),
                ("gamma3 - alpha - 1", g3 - a - 1.0),
            ],
        ),
        R6_2 => (
            vec![
                ("alpha", a),
                ("gamma1 - alpha", g1 - a),
                ("beta1", b1),
                ("gamma2 - beta1", g2 - b1),
                ("gamma3 - alpha", g3 - a),
            ],
            vec![
                ("alpha - 1", a - 1.0),
                ("beta1 - 1", b1 - 1.0),
                ("gamma1 - alpha - 1", g1 - a - 1.0),
                ("gamma2 - beta1 - 1", g2 - b1 - 1.0),
                ("gamma3 - alpha - 1", g3 - a - 1.0),
            ],
        ),
        R6_4 | R6_6 | R6_8 => (vec![("alpha", a), ("beta1", b1), ("beta2", b2)], vec![]),
        R6_5 | R6_7 => (vec![("alpha", a), ("beta1", b1)], vec![]),
    };
    require(&positive, true)?;
    require(&endpoint, false)?;
    let dens: &[f64] = match rep.target() {
        FunctionId::HC => &[g],
        FunctionId::HB => &[g1, g2, g3],
        _ => &[g1, g2],
    };
    if dens.iter().any(|&d| is_nonpositive_integer(d)) {
        return Err(Error::ConstraintViolated("a lower parameter is a nonpositive integer".into()));
    }
    Ok(())
}

/// `(prefactor, tables, integrand)` for one rep at one node count. The
/// integrand returns its factors so the weight can be spread over them.
type Integrand = Box<dyn Fn(&[Node]) -> Result<Vec<f64>> + Sync + Send>;

fn setup(rep: IntegralRepId, v: Vals, p: [f64; 3], n: u32) -> Result<(f64, Vec<Table>, Integrand)> {
    use IntegralRepId::*;
    let Vals { a, b1, b2, g, g1, g2, g3 } = v;
    let [x, y, z] = p;
    let leg = || legendre01(n);
    Ok(match rep {
        R5_1 => (
            gamma_ratio(&[g1, g2], &[b1, b2, g1 - b1, g2 - b2]),
            vec![leg(), leg()],
            Box::new(move |u: &[Node]| {
                let (xi, eta) = (u[0], u[1]);
                let base = (1.0 - y * eta.t) * (1.0 - z * eta.t) - x * xi.t;
                Ok(vec![
                    pw(xi.t, b1 - 1.0)?,
                    pw(eta.t, b2 - 1.0)?,
                    pw(xi.c, g1 - b1 - 1.0)?,
                    pw(eta.c, g2 - b2 - 1.0)?,
                    pw(1.0 - y * eta.t, a - b1)?,
                    pw(base, -a)?,
                ])
            }),
        ),
        R5_10 => (
            gamma_ratio(&[g1, g2, g3], &[b1, b2, a, g1 - b1, g2 - b2, g3 - a]),
            vec![leg(), leg(), leg()],
            Box::new(move |u: &[Node]| {
                let (xi, eta, zeta) = (u[0], u[1], u[2]);
                let lx = 1.0 - x * xi.t;
                let ly = 1.0 - y * eta.t;
                let lxz = 1.0 - x * xi.t - z * zeta.t;
                let first = zeta.c * lx * ly + x * y * xi.t * eta.t * zeta.t;
                let second = xi.c * ly * lxz + y * z * xi.t * eta.t * zeta.t;
                Ok(vec![
                    pw(xi.t, b1 - 1.0)?,
                    pw(eta.t, b2 - 1.0)?,
                    pw(zeta.t, a - 1.0)?,
                    pw(eta.c, g2 - b2 - 1.0)?,
                    pw(lx, 1.0 + b2 - g3)?,
                    pw(ly, 2.0 + a - g1 - g3)?,
                    pw(lxz, 1.0 + b1 - b2 - g1)?,
                    pw(first, g3 - a - 1.0)?,
                    pw(second, g1 - b1 - 1.0)?,
                ])
            }),
        ),
        R6_1 => (
            gamma_ratio(&[g1, g2], &[b1, b2, g1 - b1, g2 - b2]),
            vec![leg(), leg()],
            Box::new(move |u: &[Node]| {
                let (xi, eta) = (u[0], u[1]);
                let ly = 1.0 - y * eta.t;
                let lxz = 1.0 - x * xi.t - z * eta.t;
                let w = x * y * xi.t * eta.t / (ly * lxz);
                Ok(vec![
                    pw(xi.t, b1 - 1.0)?,
                    pw(eta.t, b2 - 1.0)?,
                    pw(xi.c, g1 - b1 - 1.0)?,
                    pw(eta.c, g2 - b2 - 1.0)?,
                    pw(ly, -b2)?,
                    pw(lxz, -a)?,
                    gauss_inner(a, b2, b1, w)?,
                ])
            }),
        ),
        R6_2 => (
            gamma_ratio(&[g1, g2, g3], &[a, a, b1, g1 - a, g2 - b1, g3 - a]),
            vec![leg(), leg(), leg()],
            Box::new(move |u: &[Node]| {
                let (xi, eta, zeta) = (u[0], u[1], u[2]);
                let lx = 1.0 - x * xi.t;
                let br = lx * (1.0 - y * eta.t - z * zeta.t) - x * y * xi.t * eta.t;
                let w = -x * z * xi.t * eta.t * zeta.t / (eta.c * br);
                Ok(vec![
                    pw(xi.t, a - 1.0)?,
                    pw(eta.t, b1 - 1.0)?,
                    pw(zeta.t, a - 1.0)?,
                    pw(xi.c, g1 - a - 1.0)?,
                    pw(eta.c, g2 - b1 - 1.0)?,
                    pw(zeta.c, g3 - a - 1.0)?,
                    pw(lx, b2 - b1)?,
                    pw(br, -b2)?,
                    gauss_inner(b2, 1.0 + b1 - g2, a, w)?,
                ])
            }),
        ),
        R6_4 => (
            1.0,
            vec![laguerre(n, a)?, laguerre(n, b1)?, laguerre(n, b2)?],
            Box::new(move |u: &[Node]| {
                let (u1, u2, u3) = (u[0].t, u[1].t, u[2].t);
                Ok(vec![
                    inner(FunctionId::Hyp0F1, &[g1], &[x * u1 * u2])?,
                    inner(FunctionId::Hyp0F1, &[g2], &[y * u2 * u3 + z * u1 * u3])?,
                ])
            }),
        ),
        R6_5 => (
            1.0,
            vec![laguerre(n, a)?, laguerre(n, b1)?],
            Box::new(move |u: &[Node]| {
                let (u1, u2) = (u[0].t, u[1].t);
                Ok(vec![
                    inner(FunctionId::Hyp0F1, &[g1], &[x * u1 * u2])?,
                    inner(FunctionId::Hyp1F1, &[b2, g2], &[y * u2 + z * u1])?,
                ])
            }),
        ),
        R6_6 => (
            1.0,
            vec![laguerre(n, a)?, laguerre(n, b1)?, laguerre(n, b2)?],
            Box::new(move |u: &[Node]| {
                let (xi, eta, zeta) = (u[0].t, u[1].t, u[2].t);
                Ok(vec![
                    inner(FunctionId::Hyp0F1, &[g1], &[x * xi * eta])?,
                    inner(FunctionId::Hyp0F1, &[g2], &[y * eta * zeta])?,
                    inner(FunctionId::Hyp0F1, &[g3], &[z * xi * zeta])?,
                ])
            }),
        ),
        R6_7 => (
            1.0,
            vec![laguerre(n, a)?, laguerre(n, b1)?],
            Box::new(move |u: &[Node]| {
                let (xi, eta) = (u[0].t, u[1].t);
                Ok(vec![
                    inner(FunctionId::Hyp0F1, &[g1], &[x * xi * eta])?,
                    inner(FunctionId::HumbertPsi2, &[b2, g2, g3], &[y * eta, z * xi])?,
                ])
            }),
        ),
        R6_8 => (
            1.0,
            vec![laguerre(n, a)?, laguerre(n, b1)?, laguerre(n, b2)?],
            Box::new(move |u: &[Node]| {
                let (xi, eta, zeta) = (u[0].t, u[1].t, u[2].t);
                Ok(vec![inner(FunctionId::Hyp0F1, &[g], &[x * xi * eta + y * eta * zeta + z * xi * zeta])?])
            }),
        ),
    })
}

/// Tensor-product sum, parallel over the first axis and reduced in node
/// order.
fn tensor(tables: &[Table], f: &Integrand) -> Result<f64> {
    let partial: Vec<Result<f64>> = tables[0]
        .par_iter()
        .map(|&n0| {
            let mut acc = CompensatedSum::new();
            let mut pt = vec![n0; tables.len()];
            // the weight is spread over the factors so no partial product overflows
            let mut visit = |pt: &[Node], lw: f64| -> Result<()> {
                let fs = f(pt)?;
                let share = (lw / fs.len() as f64).exp();
                let term = fs.iter().fold(1.0, |p, v| p * (v * share));
                if !term.is_finite() {
                    return Err(Error::IntegrandSingular("non-finite integrand value".into()));
                }
                acc.add(term);
                Ok(())
            };
            match tables.len() {
                1 => visit(&pt, n0.lw)?,
                2 => {
                    for &n1 in tables[1].iter() {
                        pt[1] = n1;
                        visit(&pt, n0.lw + n1.lw)?;
                    }
                }
                _ => {
                    for &n1 in tables[1].iter() {
                        pt[1] = n1;
                        for &n2 in tables[2].iter() {
                            pt[2] = n2;
                            visit(&pt, n0.lw + n1.lw + n2.lw)?;
                        }
                    }
                }
            }
            Ok(acc.value())
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in partial {
        total.add(p?);
    }
    Ok(total.value())
}

fn integrate(rep: IntegralRepId, v: Vals, p: [f64; 3], n: u32) -> Result<f64> {
    let (pref, tables, f) = setup(rep, v, p, n)?;
    let q = pref * tensor(&tables, &f)?;
    if !q.is_finite() {
        return Err(Error::IntegrandSingular(format!("{rep} gave a non-finite sum")));
    }
    Ok(q)
}

/// Quadrature value with `n` nodes per axis; the error estimate compares
/// against `2n` nodes, or `n / 2` when `2n` exceeds the limit.
pub fn quad_eval(rep: IntegralRepId, params: &ParamSet<f64>, point: &[f64], cfg: QuadConfig) -> Result<EvalResult> {
    cfg.check(rep)?;
    let p: [f64; 3] = point
        .try_into()
        .map_err(|_| Error::ArityMismatch(format!("{rep} takes 3 variables, got {}", point.len())))?;
    let v = Vals::read(rep, params)?;
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::BadParams("point must be finite".into()));
    }
    check_constraints(rep, &v)?;
    let n = cfg.nodes_per_axis;
    let other = if 2 * n <= QuadConfig::MAX_NODES { 2 * n } else { n / 2 };
    let q = integrate(rep, v, p, n)?;
    let q_other = integrate(rep, v, p, other)?;
    Ok(EvalResult {
        value: q,
        abs_error_estimate: (q - q_other).abs(),
        shells_summed: n,
        status: EvalStatus::Converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rep: IntegralRepId,
    pub profile: String,
    pub point: [f64; 3],
    pub nodes: u32,
    /// `ok`, `mismatch` or `error`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub version: String,
    pub rtol: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status == "ok")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<6} {:<10} {:<22} {:>5} {:>12} {:<9}\n", "rep", "profile", "point", "nodes", "rel_diff", "status");
        for r in &self.rows {
            let pt = format!("{},{},{}", r.point[0], r.point[1], r.point[2]);
            let rel = r.rel_diff.map(|d| format!("{d:.3e}")).unwrap_or_else(|| "-".into());
            out += &format!("{:<6} {:<10} {:<22} {:>5} {:>12} {:<9}", r.rep.label(), r.profile, pt, r.nodes, rel, r.status);
            if let Some(e) = &r.error {
                out += &format!(" {e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Parameters meeting every rep's constraints with all endpoint exponents
/// nonnegative.
pub fn default_sweep_profile() -> (String, ParamSet<f64>) {
    use Param::*;
    let ps = [(Alpha, 1.5), (Beta1, 1.5), (Beta2, 1.5), (Gamma, 2.5), (Gamma1, 3.0), (Gamma2, 3.5), (Gamma3, 3.0)]
        .into_iter()
        .collect();
    ("default".to_string(), ps)
}

/// Quadrature against the direct series for every `(rep, profile, point)`;
/// a cell is `ok` when the relative difference is at most `rtol`.
pub fn consistency_sweep(
    reps: &[IntegralRepId],
    profiles: &[(String, ParamSet<f64>)],
    points: &[[f64; 3]],
    nodes_per_axis: u32,
    rtol: f64,
) -> SweepReport {
    let mut cells = Vec::new();
    for &rep in reps {
        for (name, ps) in profiles {
            for p in points {
                cells.push((rep, name.clone(), ps, *p));
            }
        }
    }
    let rows = cells
        .into_par_iter()
        .map(|(rep, profile, ps, point)| {
            let mut row = SweepRow {
                rep,
                profile,
                point,
                nodes: nodes_per_axis,
                status: "error".into(),
                quad: None,
                quad_error_estimate: None,
                series: None,
                rel_diff: None,
                error: None,
            };
            let cfg = QuadConfig::for_rep(rep, nodes_per_axis);
            let series = eval(rep.target(), ps, &point, EvalOptions::with_tol(1e-14));
            match (quad_eval(rep, ps, &point, cfg), series) {
                (Ok(q), Ok(s)) => {
                    let rel = (q.value - s.value).abs() / s.value.abs();
                    row.quad = Some(q.value);
                    row.quad_error_estimate = Some(q.abs_error_estimate);
                    row.series = Some(s.value);
                    row.rel_diff = Some(rel);
                    row.status = if rel <= rtol { "ok" } else { "mismatch" }.into();
                }
                (Err(e), _) | (_, Err(e)) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    SweepReport { version: env!("CARGO_PKG_VERSION").to_string(), rtol, rows }
}
