use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use pbl_core::bell::ch::{ch_value_at, GRID_STEP};
use pbl_core::bell::chsh::SETTING_STEP;
use pbl_core::bell::optimize::axis;
use pbl_core::bell::{
    cglmp_mixing_bound, chsh_value, intensity_correlation, lambda_mix, optimize_ch_gpy, optimize_ch_twc,
    optimize_chsh_settings, BellResult, ChOptimum, Inequality, ParameterPoint,
};
use pbl_core::closed_form::{onoff_probs_gpy, onoff_probs_twc, onoff_probs_two_term, OnOffProbs};

use crate::args::{InequalityArg, Mode, Params, Setup};
use crate::error::CliError;
use crate::record::{Cell, ResultRecord, Table};

/// Level of λ below which the mixed CGLMP value stays within its local bound.
const CGLMP_LAMBDA_LIMIT: f64 = 0.4;

pub fn run(inequality: InequalityArg, mode: Mode, p: &Params) -> Result<ResultRecord, CliError> {
    let name = match inequality {
        InequalityArg::Chsh => "chsh",
        InequalityArg::Ch => "ch",
        InequalityArg::Cglmp => "cglmp",
    };
    let mode_name = match mode {
        Mode::Eval => "eval",
        Mode::Optimize => "optimize",
    };
    let mut rec = ResultRecord::new(&format!("bell {name} {mode_name}"));
    match (inequality, mode) {
        (InequalityArg::Chsh, Mode::Eval) => chsh_eval(p, &mut rec)?,
        (InequalityArg::Chsh, Mode::Optimize) => chsh_optimize(p, &mut rec)?,
        (InequalityArg::Ch, Mode::Eval) => ch_eval(p, &mut rec)?,
        (InequalityArg::Ch, Mode::Optimize) => ch_optimize(p, &mut rec)?,
        (InequalityArg::Cglmp, Mode::Eval) => cglmp_eval(p, &mut rec)?,
        (InequalityArg::Cglmp, Mode::Optimize) => cglmp_optimize(&mut rec)?,
    }
    Ok(rec)
}

fn inequality_name(i: Inequality) -> &'static str {
    match i {
        Inequality::Chsh => "chsh",
        Inequality::Ch => "ch",
        Inequality::Cglmp4 => "cglmp4",
    }
}

fn put_result(rec: &mut ResultRecord, r: &BellResult) {
    rec.scalar("inequality", inequality_name(r.inequality))
        .scalar("value", r.value)
        .scalar("lower_bound", r.lower_bound)
        .scalar("upper_bound", r.upper_bound)
        .scalar("violated", r.violated);
}

fn put_probs(rec: &mut ResultRecord, probs: &OnOffProbs) {
    rec.scalar("p_ab", probs.p_ab)
        .scalar("p_ab_prime", probs.p_ab_prime)
        .scalar("p_a_prime_b", probs.p_a_prime_b)
        .scalar("p_a_prime_b_prime", probs.p_a_prime_b_prime)
        .scalar("p_a", probs.p_a)
        .scalar("p_b", probs.p_b);
}

fn chsh_eval(p: &Params, rec: &mut ResultRecord) -> Result<(), CliError> {
    let alpha2 = p.require_alpha2()?;
    let cutoff = p.cutoff_or(10)?;
    let settings = [
        p.theta1.unwrap_or(PI / 4.0),
        p.theta1p.unwrap_or(3.0 * PI / 4.0),
        p.theta2.unwrap_or(0.0),
        p.theta2p.unwrap_or(3.0 * PI / 2.0),
    ];
    if settings.iter().any(|s| !s.is_finite()) {
        return Err(CliError::Invalid("CHSH settings must be finite".into()));
    }
    rec.param("alpha2", alpha2)
        .param("cutoff", cutoff)
        .param("theta1", settings[0])
        .param("theta1p", settings[1])
        .param("theta2", settings[2])
        .param("theta2p", settings[3]);
    let r = chsh_value(alpha2.sqrt(), settings, cutoff)?;
    put_result(rec, &r);
    Ok(())
}

fn chsh_optimize(p: &Params, rec: &mut ResultRecord) -> Result<(), CliError> {
    let alpha2 = p.require_alpha2()?;
    let cutoff = p.cutoff_or(10)?;
    rec.param("alpha2", alpha2).param("cutoff", cutoff);
    let alpha = alpha2.sqrt();
    let r = optimize_chsh_settings(alpha, cutoff)?;
    put_result(rec, &r);
    for (key, v) in ["theta1", "theta1p", "theta2", "theta2p"].iter().zip(&r.point.settings) {
        rec.scalar(key, *v);
    }
    // the correlation depends on the setting difference only
    let steps = (TAU / SETTING_STEP).round() as usize;
    let curve: Vec<(f64, f64)> = (0..=steps)
        .into_par_iter()
        .map(|j| {
            let d = j as f64 * SETTING_STEP;
            intensity_correlation(alpha, d, 0.0, cutoff).map(|e| (d, e))
        })
        .collect::<Result<_, _>>()?;
    let mut out = Table::new(&["theta12", "correlation"]);
    for (d, e) in curve {
        out.push(vec![d.into(), e.into()]);
    }
    rec.table("correlation_curve", out);
    Ok(())
}

fn ch_eval(p: &Params, rec: &mut ResultRecord) -> Result<(), CliError> {
    let setup = p.setup(&[Setup::Twc, Setup::Gpy, Setup::TwoTerm])?;
    let alpha2 = p.require_alpha2()?;
    let t = p.transmittivity_or(0.5)?;
    rec.param("setup", setup.name()).param("alpha2", alpha2).param("transmittivity", t);
    let alpha = alpha2.sqrt();
    let mut point = ParameterPoint {
        alpha2: Some(alpha2),
        transmittivity: Some(t),
        ..Default::default()
    };
    let probs = match setup {
        Setup::Twc => onoff_probs_twc(alpha, t)?,
        Setup::TwoTerm => onoff_probs_two_term(alpha, t)?,
        Setup::Gpy => {
            let gamma = p.require_gamma()?;
            rec.param("gamma", gamma);
            point.gamma = Some(gamma);
            onoff_probs_gpy(alpha, gamma, t)?
        }
    };
    let r = ch_value_at(&probs, point)?;
    put_result(rec, &r);
    put_probs(rec, &probs);
    Ok(())
}

fn put_optimum(rec: &mut ResultRecord, opt: &ChOptimum) {
    put_result(rec, &opt.result);
    put_probs(rec, &opt.probs);
    rec.scalar("alpha2", opt.alpha2)
        .scalar("gamma", opt.gamma)
        .scalar("transmittivity", opt.transmittivity)
        .scalar("window_lower", opt.window.0)
        .scalar("window_upper", opt.window.1);
}

fn ch_optimize(p: &Params, rec: &mut ResultRecord) -> Result<(), CliError> {
    let setup = p.setup(&[Setup::Twc, Setup::Gpy])?;
    rec.param("setup", setup.name()).param("grid_step", GRID_STEP);
    let ax = axis(GRID_STEP, 1.0, GRID_STEP);
    let pairs: Vec<(f64, f64)> = ax.iter().flat_map(|&a| ax.iter().map(move |&t| (a, t))).collect();
    match setup {
        Setup::Twc => {
            let opt = optimize_ch_twc()?;
            put_optimum(rec, &opt);
            let mut out = Table::new(&["alpha2", "transmittivity", "ch"]);
            for (a, t) in pairs {
                let v = onoff_probs_twc(a.sqrt(), t).and_then(|pr| ch_value_at(&pr, ParameterPoint::default()));
                out.push(vec![a.into(), t.into(), v.ok().map(|r| r.value).into()]);
            }
            rec.table("grid", out);
        }
        _ => {
            let opt = optimize_ch_gpy()?;
            put_optimum(rec, &opt);
            // (α², T) slice of the scanned grid through the optimal γ
            let gamma = opt.gamma.unwrap_or_default();
            let mut out = Table::new(&["alpha2", "gamma", "transmittivity", "ch"]);
            for (a, t) in pairs {
                let v = onoff_probs_gpy(a.sqrt(), gamma, t).and_then(|pr| ch_value_at(&pr, ParameterPoint::default()));
                out.push(vec![a.into(), gamma.into(), t.into(), v.ok().map(|r| r.value).into()]);
            }
            rec.table("grid", out);
        }
    }
    Ok(())
}

fn cglmp_eval(p: &Params, rec: &mut ResultRecord) -> Result<(), CliError> {
    let lambda = match p.lambda {
        Some(l) => {
            if p.alpha2.is_some() || p.gamma.is_some() {
                return Err(CliError::Invalid("give either --lambda or --alpha2/--gamma, not both".into()));
            }
            l
        }
        None => {
            let alpha2 = p.require_alpha2()?;
            let gamma = p.require_gamma()?;
            rec.param("alpha2", alpha2).param("gamma", gamma);
            lambda_mix(alpha2.sqrt(), gamma)?
        }
    };
    rec.param("lambda", lambda);
    let value = cglmp_mixing_bound(lambda)?;
    let r = BellResult::new(Inequality::Cglmp4, ParameterPoint::default(), value);
    put_result(rec, &r);
    rec.scalar("lambda", lambda);
    Ok(())
}

fn cglmp_optimize(rec: &mut ResultRecord) -> Result<(), CliError> {
    // along α² = γ the mixing weight grows with γ; bisect for λ = limit
    let excess = |g: f64| lambda_mix(g.sqrt(), g).map(|l| l - CGLMP_LAMBDA_LIMIT);
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-9);
    if excess(lo)? >= 0.0 || excess(hi)? <= 0.0 {
        return Err(CliError::Internal("mixing weight does not cross the limit on (0, 1)".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crossing = 0.5 * (lo + hi);
    rec.param("lambda_limit", CGLMP_LAMBDA_LIMIT)
        .scalar("gamma_crossing", crossing)
        .scalar("alpha2_crossing", crossing);
    let r = BellResult::new(Inequality::Cglmp4, ParameterPoint::default(), cglmp_mixing_bound(CGLMP_LAMBDA_LIMIT)?);
    put_result(rec, &r);

    let mut out = Table::new(&["gamma", "alpha2", "lambda", "cglmp_bound", "violated"]);
    for g in axis(0.01, 0.99, 0.01) {
        let l = lambda_mix(g.sqrt(), g)?;
        let b = cglmp_mixing_bound(l)?;
        out.push(vec![g.into(), g.into(), l.into(), b.into(), Cell::from(b > 2.0)]);
    }
    rec.table("scan", out);
    Ok(())
}
