//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{exact, fact, float, q, ratio, rel, rising, P1, P2, P3};
use hyper3::audit::{default_profiles, run_audit, Status};
use hyper3::catalog::{eval, truncated, EvalOptions, FunctionId};
use hyper3::decomposition::{eval_via_decomposition, verify_decomposition};
use hyper3::kernel::{Axis, MultiIndex3, Rational};
use hyper3::operators::summation::{delta_sum, delta_tilde_sum, nabla_sum, nabla_tilde_sum};
use hyper3::operators::{verify_operator_identity, DiagonalOp, Verdict};
use hyper3::quadrature::{quad_eval, IntegralRepId, QuadConfig};
use hyper3::registry::registry;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:.0?}"))
}

fn hs() -> Vec<Rational> {
    ["1/2", "1", "3/2", "2", "7/3"].into_iter().map(q).collect()
}

/// `(h)_k` for `k <= 24`.
fn table(h: &Rational) -> Vec<Rational> {
    (0..=24).map(|k| rising(h, k)).collect()
}

fn nabla_closed(t: &[Rational], a: u32, b: u32) -> Rational {
    ratio(t[(a + b) as usize].clone(), &t[a as usize] * &t[b as usize])
}

fn summation_theorem() -> Outcome {
    let start = Instant::now();
    for h in hs() {
        let t = table(&h);
        for m in 0..=8u32 {
            for n in 0..=8u32 {
                let nab = nabla_closed(&t, m, n);
                let del = ratio(Rational::one(), nab.clone());
                ensure(nabla_sum(&h, m, n).map_err(|e| e.to_string())? == nab, || format!("nabla h={h} ({m},{n})"))?;
                ensure(delta_sum(&h, m, n).map_err(|e| e.to_string())? == del, || format!("delta h={h} ({m},{n})"))?;
                for p in 0..=8u32 {
                    let nt = nabla_closed(&t, m, n + p);
                    let dt = ratio(Rational::one(), nt.clone());
                    let got = nabla_tilde_sum(&h, m, &[n, p]).map_err(|e| e.to_string())?;
                    ensure(got == nt, || format!("tilde nabla h={h} ({m},{n},{p})"))?;
                    let got = delta_tilde_sum(&h, m, &[n, p]).map_err(|e| e.to_string())?;
                    ensure(got == dt, || format!("tilde delta h={h} ({m},{n},{p})"))?;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(1))
}

fn inverse_pairs() -> Outcome {
    for h in hs() {
        for i in (0..=8u32).flat_map(|m| (0..=8u32).flat_map(move |n| (0..=8u32).map(move |p| MultiIndex3::new(m, n, p)))) {
            for (a, b) in [(Axis::X, Axis::Y), (Axis::X, Axis::Z), (Axis::Y, Axis::Z)] {
                let n = DiagonalOp::nabla(a, b, h.clone()).eigenvalue(i).map_err(|e| e.to_string())?;
                let d = DiagonalOp::delta(a, b, h.clone()).eigenvalue(i).map_err(|e| e.to_string())?;
                ensure((n * d).is_one(), || format!("nabla*delta at h={h} {i}"))?;
            }
            let n = DiagonalOp::nabla_tilde(Axis::X, h.clone()).eigenvalue(i).map_err(|e| e.to_string())?;
            let d = DiagonalOp::delta_tilde(Axis::X, h.clone()).eigenvalue(i).map_err(|e| e.to_string())?;
            ensure((n * d).is_one(), || format!("tilde pair at h={h} {i}"))?;
        }
    }
    Ok(())
}

fn identities_at_ten() -> Outcome {
    let start = Instant::now();
    for id in ["3.1", "3.4", "3.5", "3.13", "3.14"] {
        for p in [P1, P2, P3] {
            let v = verify_operator_identity(id, &exact(p), 10).map_err(|e| e.to_string())?;
            ensure(v == Verdict::Verified { degree: 10 }, || format!("{id}: {v:?}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))
}

fn decompositions() -> Outcome {
    let start = Instant::now();
    for id in ["4.1", "7.3"] {
        let v = verify_decomposition(id, &exact(P1), 10).map_err(|e| e.to_string())?;
        ensure(v == Verdict::Verified { degree: 10 }, || format!("{id}: {v:?}"))?;
    }
    let elapsed = start.elapsed();
    let (x, y, z) = (0.1, 0.2, 0.15);
    let w = (1.0 - y) * (1.0 - z);
    let f4 = eval(
        FunctionId::AppellF4,
        &float("a=0.5,b=0.3333333333333333,c1=1.5,c2=2.5"),
        &[y * z / w, x / w],
        EvalOptions::with_tol(1e-15),
    )
    .map_err(|e| e.to_string())?;
    let oracle = (1.0 - y).powf(-1.0 / 3.0) * (1.0 - z).powf(-0.5) * f4.value;
    let ps = float("alpha=0.5,beta1=0.3333333333333333,beta2=1.5,gamma1=2.5");
    let via = eval_via_decomposition("7.4", &ps, &[x, y, z], 60, 1e-12).map_err(|e| e.to_string())?;
    let r = rel(via.value, oracle);
    ensure(r <= 1e-9, || format!("7.4 float check off by {r:e}"))?;
    within(elapsed, Duration::from_secs(60))
}

fn audit_determinism() -> Outcome {
    let a = run_audit(&default_profiles(), 6).map_err(|e| e.to_string())?;
    let b = run_audit(&default_profiles(), 6).map_err(|e| e.to_string())?;
    ensure(a.summary.by_id.len() == 34, || format!("{} entries", a.summary.by_id.len()))?;
    ensure(a.entries.len() == 102, || format!("{} rows", a.entries.len()))?;
    for row in &a.entries {
        let witnessed = match row.status {
            Status::Verified => true,
            Status::Failed => row.first_bad_index.is_some(),
            Status::Error => false,
        };
        ensure(witnessed, || format!("{} at {}: {:?}", row.id, row.profile, row.error))?;
    }
    ensure(a.body_json() == b.body_json(), || "report bodies differ".into())
}

fn reductions() -> Outcome {
    let ps = exact(P1);
    let slices = [
        (FunctionId::HA, ["a=1/2,b=1/3,c=5/2", "a=1/3,b=1/4,c=7/3", "a=1/2,b=1/4,c=7/3"]),
        (FunctionId::HB, ["a=1/2,b=1/3,c=5/2", "a=1/3,b=1/4,c=7/3", "a=1/2,b=1/4,c=9/4"]),
        (FunctionId::HC, ["a=1/2,b=1/3,c=13/5", "a=1/3,b=1/4,c=13/5", "a=1/2,b=1/4,c=13/5"]),
    ];
    for (f, gauss) in slices {
        let full = truncated(f, &ps, 12).map_err(|e| e.to_string())?;
        for (axis, g) in gauss.iter().enumerate() {
            let gp = exact(g);
            let v = |k: &str| gp.get(k.parse().unwrap()).unwrap().clone();
            for k in 0..=12u32 {
                let mut e = [0u32; 3];
                e[axis] = k;
                let want = ratio(rising(&v("a"), k) * rising(&v("b"), k), rising(&v("c"), k) * fact(k));
                ensure(full.coeff(e.into()) == want, || format!("{f} axis {axis} degree {k}"))?;
            }
            let mut pt = [0.0; 3];
            pt[axis] = 0.3;
            let opts = EvalOptions::with_tol(1e-15);
            let h = eval(f, &ps.to_f64(), &pt, opts).map_err(|e| e.to_string())?;
            let g = eval(FunctionId::Gauss2F1, &gp.to_f64(), &[0.3], opts).map_err(|e| e.to_string())?;
            let r = rel(h.value, g.value);
            ensure(r <= 1e-12, || format!("{f} axis {axis} float off by {r:e}"))?;
        }
    }
    Ok(())
}

fn float_cross_method() -> Outcome {
    let ps = exact(P1);
    let mut checked = 0;
    for e in registry().decompositions() {
        if !e.verify(&ps, 6).map_err(|err| err.to_string())?.is_verified() {
            continue;
        }
        let pt = vec![0.05; e.point_len()];
        let via = eval_via_decomposition(&e.id, &ps.to_f64(), &pt, 60, 1e-10).map_err(|err| err.to_string())?;
        let direct = e.eval_lhs(&ps.to_f64(), &pt, EvalOptions::with_tol(1e-14)).map_err(|err| err.to_string())?;
        let r = rel(via.value, direct.value);
        ensure(r <= 1e-9, || format!("{} off by {r:e}", e.id))?;
        checked += 1;
    }
    ensure(checked > 0, || "no entry verified".into())
}

fn quadrature() -> Outcome {
    use IntegralRepId::*;
    let start = Instant::now();
    let q = |rep, s: &str, pt: [f64; 3], n| quad_eval(rep, &float(s), &pt, QuadConfig::for_rep(rep, n)).map_err(|e| e.to_string());
    let series = |f, s: &str, pt: [f64; 3]| {
        eval(f, &float(s), &pt, EvalOptions::with_tol(1e-15)).map(|r| r.value).map_err(|e| e.to_string())
    };

    let origin = q(R6_8, "alpha=1.5,beta1=1.5,beta2=1.5,gamma=2.5", [0.0; 3], 32)?;
    ensure((origin.value - 1.0).abs() <= 1e-10, || format!("6.8 at origin gave {}", origin.value))?;

    let ha = "alpha=1.5,beta1=1.5,beta2=1.5,gamma1=2.5,gamma2=2.5";
    let r = rel(q(R6_4, ha, [0.05; 3], 48)?.value, series(FunctionId::HA, ha, [0.05; 3])?);
    ensure(r <= 1e-6, || format!("6.4 off by {r:e}"))?;

    let hb = "alpha=1.5,beta1=1.5,beta2=1.5,gamma1=2.5,gamma2=2.5,gamma3=2.5";
    let r = rel(q(R6_6, hb, [0.05; 3], 48)?.value, series(FunctionId::HB, hb, [0.05; 3])?);
    ensure(r <= 1e-6, || format!("6.6 off by {r:e}"))?;

    let s51 = "alpha=0.5,beta1=1.5,beta2=1.5,gamma1=3,gamma2=3";
    let r = rel(q(R5_1, s51, [0.1; 3], 80)?.value, series(FunctionId::HA, s51, [0.1; 3])?);
    ensure(r <= 1e-8, || format!("5.1 off by {r:e}"))?;

    within(start.elapsed(), Duration::from_secs(120))
}

fn gauss_spot_value() -> Outcome {
    let r = eval(FunctionId::Gauss2F1, &float("a=1,b=1,c=2"), &[0.5], EvalOptions::default()).map_err(|e| e.to_string())?;
    let oracle = -(-0.5f64).ln_1p() / 0.5;
    ensure((r.value - 1.386294361119891).abs() <= 1e-12, || format!("got {}", r.value))?;
    ensure((r.value - oracle).abs() <= 1e-12, || format!("log oracle {oracle}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("operator sums equal their closed forms", summation_theorem),
        ("nabla and delta eigenvalues are inverse", inverse_pairs),
        ("identities 3.1 3.4 3.5 3.13 3.14 verified to degree 10", identities_at_ten),
        ("decompositions 4.1 and 7.3 exact, 7.4 float", decompositions),
        ("audit at degree 6 is complete and deterministic", audit_determinism),
        ("one-variable slices reduce to 2F1", reductions),
        ("decomposition sums match direct series", float_cross_method),
        ("quadrature matches the series", quadrature),
        ("2F1(1,1;2;1/2) spot value", gauss_spot_value),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2} s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2} s): {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
