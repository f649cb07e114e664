use std::collections::BTreeMap;

use hopfield::spectrum::{
    dispersion_overlay, dsc_limit_spectrum, ew_spectrum_closed, ew_spectrum_incoherent, ew_spectrum_quadrature,
    ew_spectrum_rwa, vrs_analysis, Peak,
};
use hopfield::model::energy_ladder;
use hopfield::thermometry::{find_poles, pole_locus, snr_curve, thermo_point};
use hopfield::{
    polariton_frequencies, rwa_frequencies, DiamagneticRule, FilterConfig, HopfieldError, Phase, SpectrumResult,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Coupling, Method, Point, RunConfig, SweepVar};
use crate::error::CliError;
use crate::output::{Artifact, Cell, Dataset};

fn sweep_points<R: Send>(
    cfg: &RunConfig,
    f: impl Fn(&Point) -> Result<R, CliError> + Sync + Send,
) -> Result<Vec<R>, CliError> {
    cfg.points().par_iter().map(f).collect()
}

fn context(point: &Point, rule: DiamagneticRule) -> String {
    format!("{}, d_rule={}", point.describe(), point.rule(rule).label())
}

fn axis_columns(cfg: &RunConfig) -> Vec<String> {
    cfg.sweeps.iter().map(|s| s.var.column().to_string()).collect()
}

fn coords(point: &Point) -> Vec<Cell> {
    point.coords.iter().map(|&c| c.into()).collect()
}

fn count_phases<'a>(phases: impl Iterator<Item = &'a str>) -> Value {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for p in phases {
        *counts.entry(p).or_default() += 1;
    }
    json!(counts)
}

fn rwa_phase(y: f64) -> Phase {
    if y > 0.0 {
        Phase::Normal
    } else if y == 0.0 {
        Phase::Critical
    } else {
        Phase::Unstable
    }
}

pub fn polaritons(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let wc = cfg.omega_c;
    let mut header = axis_columns(cfg);
    header.extend(["d_rule", "omega_x/omega_c", "omega_y/omega_c", "omega_y_sq/omega_c^2", "phase"].map(String::from));
    let rows = sweep_points(cfg, |pt| {
        cfg.d_rules
            .iter()
            .map(|&rule| {
                let ctx = || context(pt, rule);
                let p = pt.params(rule).map_err(|e| CliError::compute(ctx(), e))?;
                let (x, y, y_sq, phase) = if pt.rule(rule) == DiamagneticRule::Rwa {
                    let (x, y) = rwa_frequencies(&p);
                    (x, Some(y), None, rwa_phase(y))
                } else {
                    let s = polariton_frequencies(&p).map_err(|e| CliError::compute(ctx(), e))?;
                    let y = match s.phase {
                        Phase::Unstable => None,
                        _ => s.omega_y().ok(),
                    };
                    (s.omega_x(), y, Some(s.omega_y_sq), s.phase)
                };
                let mut row = coords(pt);
                row.extend([
                    pt.rule(rule).label().into(),
                    (x / wc).into(),
                    y.map(|y| y / wc).into(),
                    y_sq.map(|v| v / (wc * wc)).into(),
                    phase.as_str().into(),
                ]);
                Ok((row, phase.as_str()))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut data = Dataset::with_header(None, header);
    let mut phases = Vec::new();
    for (row, phase) in rows.into_iter().flatten() {
        data.push(row);
        phases.push(phase);
    }
    let mut art = Artifact::default();
    art.flags.insert("phases".into(), count_phases(phases.into_iter()));
    art.datasets.push(data);
    Ok(art)
}

pub fn levels(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let wc = cfg.omega_c;
    let mut header = axis_columns(cfg);
    header.extend(["d_rule", "m", "n", "E/omega_c"].map(String::from));
    let shifted = !cfg.zero_point;
    let max = cfg.max_level;
    let rows = sweep_points(cfg, |pt| {
        let mut out = Vec::new();
        for &rule in &cfg.d_rules {
            let ctx = || context(pt, rule);
            let p = pt.params(rule).map_err(|e| CliError::compute(ctx(), e))?;
            let ladder: Vec<(u32, u32, f64)> = if pt.rule(rule) == DiamagneticRule::Rwa {
                let (x, y) = rwa_frequencies(&p);
                let half = if shifted { 0.0 } else { 0.5 };
                let mut l: Vec<_> = (0..=max)
                    .flat_map(|m| (0..=max).map(move |n| (m, n, x * (m as f64 + half) + y * (n as f64 + half))))
                    .collect();
                l.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
                l
            } else {
                energy_ladder(&p, max, max, shifted)
                    .map_err(|e| CliError::compute(ctx(), e))?
                    .into_iter()
                    .map(|l| (l.m, l.n, l.energy))
                    .collect()
            };
            for (m, n, e) in ladder {
                let mut row = coords(pt);
                row.extend([pt.rule(rule).label().into(), m.into(), n.into(), (e / wc).into()]);
                out.push(row);
            }
        }
        Ok(out)
    })?;
    let mut data = Dataset::with_header(None, header);
    rows.into_iter().flatten().for_each(|r| data.push(r));
    Ok(Artifact {
        datasets: vec![data],
        ..Default::default()
    })
}

fn filter(cfg: &RunConfig) -> Result<FilterConfig, CliError> {
    let (a, b, n) = cfg.omega_grid;
    FilterConfig::uniform(cfg.gamma, cfg.t_obs_or_default(), a * cfg.omega_c, b * cfg.omega_c, n)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn spectrum_for(
    cfg: &RunConfig,
    pt: &Point,
    rule: DiamagneticRule,
    filter: &FilterConfig,
) -> Result<SpectrumResult, CliError> {
    let ctx = || context(pt, rule);
    let p = pt.params(rule).map_err(|e| CliError::compute(ctx(), e))?;
    let rule = pt.rule(rule);
    let r: Result<SpectrumResult, HopfieldError> = match cfg.method {
        Method::Closed if rule == DiamagneticRule::Rwa => {
            if cfg.state == hopfield::FockProduct::FIELD_EXCITED {
                Ok(ew_spectrum_rwa(&p, filter))
            } else {
                return Err(CliError::Config("the rotating-wave spectrum is defined for --state 10 only".into()));
            }
        }
        Method::Closed => ew_spectrum_closed(&p, cfg.state, filter),
        Method::Quadrature => ew_spectrum_quadrature(&p, cfg.state, filter),
        Method::Incoherent => ew_spectrum_incoherent(&p, cfg.state, filter),
        Method::Rwa => Ok(ew_spectrum_rwa(&p, filter)),
        Method::Dsc => Ok(dsc_limit_spectrum(&p, filter)),
    };
    r.map_err(|e| CliError::compute(ctx(), e))
}

pub fn spectrum(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let wc = cfg.omega_c;
    let rule = cfg.d_rules[0];
    let filter = filter(cfg)?;
    let overlays: Vec<DiamagneticRule> = if cfg.overlays.is_empty()
        && cfg.sweeps.first().is_some_and(|s| s.var == SweepVar::OmegaB)
    {
        vec![rule]
    } else {
        cfg.overlays.clone()
    };
    if !overlays.is_empty() && !matches!(cfg.coupling, Coupling::Isotropic { .. }) {
        return Err(CliError::Config("dispersion overlays need isotropic coupling".into()));
    }
    let results = sweep_points(cfg, |pt| {
        let spec = spectrum_for(cfg, pt, rule, &filter)?;
        let curves = overlays
            .iter()
            .map(|&r| {
                dispersion_overlay(r, pt.omega_c, pt.omega_b, pt.g()).map_err(|e| CliError::compute(context(pt, r), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((pt.clone(), spec, curves))
    })?;

    let mut header = axis_columns(cfg);
    header.extend(["omega/omega_c", "S"].map(String::from));
    let mut data = Dataset::with_header(None, header);
    let mut disp_header = axis_columns(cfg);
    disp_header.extend(["d_rule", "omega_x/omega_c", "omega_y/omega_c"].map(String::from));
    let mut disp = Dataset::with_header(Some("dispersion"), disp_header);
    let mut outside = false;
    for (pt, spec, curves) in &results {
        outside |= spec.outside_stated_domain;
        for (w, s) in spec.omega.iter().zip(&spec.values) {
            let mut row = coords(pt);
            row.extend([(w / wc).into(), (*s).into()]);
            data.push(row);
        }
        for c in curves {
            let mut row = coords(pt);
            row.extend([c.rule.clone().into(), (c.omega_x / wc).into(), c.omega_y.map(|y| y / wc).into()]);
            disp.push(row);
        }
    }
    let mut art = Artifact::default();
    art.flags.insert("method".into(), json!(cfg.method));
    art.flags.insert("outside_stated_domain".into(), json!(outside));
    if let [(_, spec, _)] = results.as_slice() {
        art.flags.insert("components".into(), json!(spec.components));
    }
    art.datasets.push(data);
    if !overlays.is_empty() {
        art.datasets.push(disp);
    }
    Ok(art)
}

fn dominant_pair(peaks: &[Peak]) -> Option<(Peak, Peak)> {
    let mut top = peaks.to_vec();
    top.sort_by(|a, b| b.height.total_cmp(&a.height));
    top.truncate(2);
    top.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    match top.as_slice() {
        [l, r] => Some((*l, *r)),
        _ => None,
    }
}

pub fn vrs(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let wc = cfg.omega_c;
    let filter = filter(cfg)?;
    let results = sweep_points(cfg, |pt| {
        cfg.d_rules
            .iter()
            .map(|&rule| {
                let spec = spectrum_for(cfg, pt, rule, &filter)?;
                let report = vrs_analysis(&spec).map_err(|e| CliError::compute(context(pt, rule), e))?;
                Ok((pt.rule(rule).label(), spec, report))
            })
            .collect::<Result<Vec<_>, CliError>>()
            .map(|v| (pt.clone(), v))
    })?;

    let key = |pt: &Point| -> Vec<Cell> {
        if cfg.sweeps.is_empty() {
            vec![(pt.g() / wc).into()]
        } else {
            coords(pt)
        }
    };
    let mut key_cols = axis_columns(cfg);
    if key_cols.is_empty() {
        key_cols.push("g/omega_c".into());
    }
    let header = |tail: &[&str]| {
        let mut h = vec!["d_rule".to_string()];
        h.extend(key_cols.iter().cloned());
        h.extend(tail.iter().map(|s| s.to_string()));
        h
    };
    let mut spectra = Dataset::with_header(None, header(&["omega/omega_c", "S"]));
    let mut peaks = Dataset::with_header(Some("peaks"), header(&["peak", "omega/omega_c", "height"]));
    let mut summary = Dataset::with_header(
        Some("vrs"),
        header(&[
            "peaks",
            "omega_left/omega_c",
            "height_left",
            "omega_right/omega_c",
            "height_right",
            "splitting/omega_c",
            "asymmetry_ratio",
            "single_peak",
        ]),
    );
    for (pt, per_rule) in &results {
        for (label, spec, report) in per_rule {
            let lead = |mut tail: Vec<Cell>| {
                let mut row: Vec<Cell> = vec![label.clone().into()];
                row.extend(key(pt));
                row.append(&mut tail);
                row
            };
            for (w, s) in spec.omega.iter().zip(&spec.values) {
                spectra.push(lead(vec![(w / wc).into(), (*s).into()]));
            }
            for (i, p) in report.peaks.iter().enumerate() {
                peaks.push(lead(vec![i.into(), (p.omega / wc).into(), p.height.into()]));
            }
            let pair = dominant_pair(&report.peaks);
            summary.push(lead(vec![
                report.peaks.len().into(),
                pair.map(|(l, _)| l.omega / wc).into(),
                pair.map(|(l, _)| l.height).into(),
                pair.map(|(_, r)| r.omega / wc).into(),
                pair.map(|(_, r)| r.height).into(),
                report.splitting.map(|s| s / wc).into(),
                report.asymmetry_ratio.into(),
                report.single_peak.into(),
            ]));
        }
    }
    let mut art = Artifact::default();
    art.flags.insert("method".into(), json!(cfg.method));
    art.datasets = vec![spectra, peaks, summary];
    Ok(art)
}

pub fn thermometry(cfg: &RunConfig) -> Result<Artifact, CliError> {
    if cfg.continuation {
        return continuation(cfg);
    }
    let wc = cfg.omega_c;
    let extra: Vec<_> = cfg
        .sweeps
        .iter()
        .enumerate()
        .filter(|(_, s)| !matches!(s.var, SweepVar::G | SweepVar::Temperature))
        .map(|(i, s)| (i, s.var.column()))
        .collect();
    let mut header: Vec<String> = vec!["g/omega_c".into(), "kT/omega_c".into()];
    header.extend(extra.iter().map(|(_, c)| c.to_string()));
    header.extend(
        ["d_rule", "Z", "ln_Z", "U/omega_c", "C", "qfi", "snr", "branch_x", "branch_y"].map(String::from),
    );
    let rows = sweep_points(cfg, |pt| {
        let t = pt.temperature.expect("temperature checked at resolution");
        cfg.d_rules
            .iter()
            .map(|&rule| {
                let ctx = || context(pt, rule);
                let p = pt.params(rule).map_err(|e| CliError::compute(ctx(), e))?;
                let th = thermo_point(&p, t).map_err(|e| CliError::compute(ctx(), e))?;
                let mut row: Vec<Cell> = vec![(pt.g() / wc).into(), (t / wc).into()];
                row.extend(extra.iter().map(|(i, _)| Cell::from(pt.coords[*i])));
                row.extend([
                    pt.rule(rule).label().into(),
                    th.z.into(),
                    th.ln_z.into(),
                    (th.u / wc).into(),
                    th.c.into(),
                    th.qfi.into(),
                    th.snr.into(),
                    branch(th.branch[0]).into(),
                    branch(th.branch[1]).into(),
                ]);
                Ok((row, th.anisotropic))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut data = Dataset::with_header(None, header);
    let mut anisotropic = false;
    for (row, a) in rows.into_iter().flatten() {
        anisotropic |= a;
        data.push(row);
    }
    let mut art = Artifact::default();
    art.flags.insert("anisotropic".into(), json!(anisotropic));
    art.datasets.push(data);
    Ok(art)
}

fn branch(b: hopfield::BranchFlag) -> &'static str {
    match b {
        hopfield::BranchFlag::Hyperbolic => "hyperbolic",
        hopfield::BranchFlag::Trigonometric => "trigonometric",
        hopfield::BranchFlag::PoleNearby => "pole_nearby",
    }
}

/// Resonant `D = 0` QFI with the trigonometric continuation past `g = ω_c/2`.
fn continuation(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let wc = cfg.omega_c;
    let rows = sweep_points(cfg, |pt| {
        let t = pt.temperature.expect("temperature checked at resolution");
        let s = snr_curve(wc, t, &[pt.g()]).map_err(|e| CliError::compute(pt.describe(), e))?[0];
        Ok(vec![
            (pt.g() / wc).into(),
            (t / wc).into(),
            s.qfi.into(),
            s.snr.into(),
            branch(s.branch).into(),
            s.pole.map_or(Cell::Empty, |n| Cell::Int(n as i64)),
            s.formal_continuation.into(),
        ])
    })?;
    let mut data = Dataset::new(
        None,
        &["g/omega_c", "kT/omega_c", "qfi", "snr", "branch", "pole", "formal_continuation"],
    );
    rows.into_iter().for_each(|r| data.push(r));

    let points = cfg.points();
    let g_max = points.iter().map(Point::g).fold(0.0, f64::max);
    let mut temps: Vec<f64> = points.iter().filter_map(|p| p.temperature).collect();
    temps.sort_by(f64::total_cmp);
    temps.dedup();
    let poles: Vec<Value> = temps
        .iter()
        .map(|&t| {
            let found = if g_max > wc / 2.0 { find_poles(wc, t, g_max, 20_000) } else { Vec::new() };
            let locus: Vec<f64> = (1..=found.len() as u64).map(|n| pole_locus(wc, t, n)).collect();
            json!({ "temperature": t, "bracketed": found, "locus": locus })
        })
        .collect();
    let mut art = Artifact::default();
    art.flags.insert("poles".into(), json!(poles));
    art.datasets.push(data);
    Ok(art)
}
