use coulomb_core::greens::{krein_resolvent_3d, krein_resolvent_radial};
use coulomb_core::radial::ShiftFrame;
use coulomb_core::spectra::{alpha_threshold, assemble_spectrum, fibration_data, friedrichs_level, spectral_function};
use coulomb_core::{CoulombParams, ExtendedReal};
use serde_json::{json, Value};

use crate::args::Command;
use crate::config::{parse_grid, KernelWhich, OutputFormat, RunConfig};
use crate::format::{ext, num, opt, row};
use crate::{verify, CliError, CliResult, Rendered};

pub fn dispatch(command: &Command, cfg: &RunConfig) -> CliResult<Rendered> {
    match command {
        Command::Spectrum { .. } => cmd_spectrum(cfg),
        Command::Fibration { .. } => cmd_fibration(cfg),
        Command::SpectralFunction { .. } => cmd_spectral_function(cfg),
        Command::Kernel { .. } => cmd_kernel(cfg),
        Command::Verify { perturb_digamma, .. } => verify::cmd_verify(cfg, perturb_digamma.unwrap_or(0.0)),
    }
}

fn json_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn alpha_json(a: ExtendedReal) -> Value {
    match a {
        ExtendedReal::Finite(x) => json!(x),
        ExtendedReal::Infinite => json!("inf"),
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> CliResult<Rendered> {
    let nu = cfg.nu()?;
    let alpha = cfg.alpha.ok_or_else(|| CliError::Input("--alpha is required".into()))?;
    let params = CoulombParams::new(nu, alpha)?;
    let report = assemble_spectrum(&params, cfg.n_max()?, cfg.tol()?)?;
    let body = match cfg.format() {
        OutputFormat::Json => {
            let points: Vec<Value> = report
                .points
                .iter()
                .map(|p| {
                    json!({
                        "n": p.label,
                        "E": p.e,
                        "residual": p.residual,
                        "bracket": [p.bracket.0, p.bracket.1],
                    })
                })
                .collect();
            let mut v = json!({
                "nu": nu,
                "alpha": alpha_json(alpha),
                "points": points,
                "friedrichs_reference": report.friedrichs_reference,
            });
            if let Some(note) = &report.note {
                v["note"] = json!(note);
            }
            json_body(&v)
        }
        OutputFormat::Csv => {
            let mut s = format!("# nu: {}\n# alpha: {}\n", num(nu), ext(alpha));
            if let Some(note) = &report.note {
                s.push_str(&format!("# note: {note}\n"));
            }
            s.push_str("n,E,residual,bracket_lo,bracket_hi,E_friedrichs\n");
            for (i, p) in report.points.iter().enumerate() {
                s.push_str(&row([
                    p.label.to_string(),
                    num(p.e),
                    num(p.residual),
                    num(p.bracket.0),
                    num(p.bracket.1),
                    opt(report.friedrichs_reference.get(i).copied()),
                ]));
            }
            s
        }
    };
    Ok(Rendered {
        body,
        warnings: Vec::new(),
    })
}

pub fn cmd_fibration(cfg: &RunConfig) -> CliResult<Rendered> {
    let nu = cfg.nu()?;
    let spec = cfg
        .alpha_grid
        .as_deref()
        .ok_or_else(|| CliError::Input("--alpha-grid is required".into()))?;
    let grid = parse_grid(spec)?;
    let n_max = if nu < 0.0 { cfg.n_max()? } else { 1 };
    let rows = fibration_data(nu, &grid, n_max, cfg.tol()?)?;
    let warnings: Vec<String> = rows
        .iter()
        .filter_map(|r| r.warning.as_ref().map(|w| format!("alpha = {}, n = {}: {w}", num(r.alpha), r.n)))
        .collect();
    let body = match cfg.format() {
        OutputFormat::Json => {
            let pts: Vec<Value> = rows
                .iter()
                .map(|r| json!({"alpha": r.alpha, "n": r.n, "E": r.e}))
                .collect();
            let mut v = json!({"nu": nu, "rows": pts});
            if nu > 0.0 {
                v["alpha_nu"] = json!(alpha_threshold(nu)?);
            }
            json_body(&v)
        }
        OutputFormat::Csv => {
            let mut s = format!("# nu: {}\n", num(nu));
            if nu > 0.0 {
                s.push_str(&format!("# alpha_nu: {}\n", num(alpha_threshold(nu)?)));
            } else {
                let levels: Vec<String> = (1..=n_max).map(|n| num(friedrichs_level(nu, n))).collect();
                s.push_str(&format!("# friedrichs_levels: {}\n", levels.join(" ")));
            }
            s.push_str("alpha,n,E\n");
            for r in &rows {
                s.push_str(&row([num(r.alpha), r.n.to_string(), opt(r.e)]));
            }
            s
        }
    };
    Ok(Rendered { body, warnings })
}

/// Relative half-width of the window skipped around each pole.
pub const POLE_WINDOW: f64 = 1e-6;

pub fn cmd_spectral_function(cfg: &RunConfig) -> CliResult<Rendered> {
    let nu = cfg.nu()?;
    let spec = cfg
        .e_grid
        .as_deref()
        .ok_or_else(|| CliError::Input("--e-grid is required".into()))?;
    let grid = parse_grid(spec)?;
    if let Some(e) = grid.iter().find(|&&e| !(e < 0.0)) {
        return Err(CliError::Input(format!("energies must be negative, got {e}")));
    }
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
    // poles of the spectral function: the Friedrichs levels in [lo, hi]
    let mut asymptotes = Vec::new();
    if nu < 0.0 {
        let mut n = ((-nu) / (2.0 * (-lo).sqrt())).ceil().max(1.0) as usize;
        loop {
            let en = friedrichs_level(nu, n);
            if en > hi || asymptotes.len() > 100_000 {
                break;
            }
            if en >= lo {
                asymptotes.push(en);
            }
            n += 1;
        }
    }
    let near_pole = |e: f64| -> bool {
        if nu > 0.0 {
            return false;
        }
        let s = -nu / (2.0 * (-e).sqrt());
        let n = s.round();
        n >= 1.0 && (e - friedrichs_level(nu, n as usize)).abs() <= POLE_WINDOW * e.abs()
    };
    let mut points = Vec::with_capacity(grid.len());
    for &e in &grid {
        if near_pole(e) {
            continue;
        }
        points.push((e, spectral_function(nu, e)?));
    }
    let body = match cfg.format() {
        OutputFormat::Json => {
            let pts: Vec<Value> = points.iter().map(|(e, f)| json!({"E": e, "F": f})).collect();
            let mut v = json!({"nu": nu, "asymptotes": asymptotes, "points": pts});
            if nu > 0.0 {
                v["alpha_nu"] = json!(alpha_threshold(nu)?);
            }
            json_body(&v)
        }
        OutputFormat::Csv => {
            let mut s = format!("# nu: {}\n", num(nu));
            let a: Vec<String> = asymptotes.iter().map(|&x| num(x)).collect();
            s.push_str(&format!("# asymptotes: {}\n", a.join(" ")));
            if nu > 0.0 {
                s.push_str(&format!("# alpha_nu: {}\n", num(alpha_threshold(nu)?)));
            }
            s.push_str("E,F\n");
            for (e, f) in &points {
                s.push_str(&row([num(*e), num(*f)]));
            }
            s
        }
    };
    Ok(Rendered {
        body,
        warnings: Vec::new(),
    })
}

pub fn cmd_kernel(cfg: &RunConfig) -> CliResult<Rendered> {
    let nu = cfg.nu()?;
    let kappa = cfg.required(cfg.kappa, "kappa")?;
    let r = cfg.required(cfg.r, "r")?;
    let rho = cfg.required(cfg.rho, "rho")?;
    let alpha = cfg.alpha_or(ExtendedReal::Infinite);
    let which = cfg.which.unwrap_or_default();
    let frame = ShiftFrame::new(nu, kappa)?;
    let params = CoulombParams::new(nu, alpha)?;
    let (value, g_x) = match which {
        KernelWhich::Radial => (krein_resolvent_radial(&params, &frame, r, rho)?, None),
        KernelWhich::ThreeD => {
            let (v, g) = krein_resolvent_3d(&params, &frame, r, rho)?;
            (v, Some(g))
        }
    };
    let which_name = match which {
        KernelWhich::Radial => "radial",
        KernelWhich::ThreeD => "3d",
    };
    let body = match cfg.format() {
        OutputFormat::Json => json_body(&json!({
            "frame": {"nu": frame.nu, "kappa": frame.kappa, "lambda": frame.lambda, "eta": frame.eta},
            "alpha": alpha_json(alpha),
            "which": which_name,
            "r": r,
            "rho": rho,
            "value": value,
            "g_nu_kappa_at_r": g_x,
        })),
        OutputFormat::Csv => {
            let mut s = String::from("nu,kappa,lambda,eta,alpha,which,r,rho,value,g_nu_kappa_at_r\n");
            s.push_str(&row([
                num(frame.nu),
                num(frame.kappa),
                num(frame.lambda),
                num(frame.eta),
                ext(alpha),
                which_name.to_string(),
                num(r),
                num(rho),
                num(value),
                opt(g_x),
            ]));
            s
        }
    };
    Ok(Rendered {
        body,
        warnings: Vec::new(),
    })
}
