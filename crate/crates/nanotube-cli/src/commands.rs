//! Command implementations: assemble the model, run the engine, serialize.

use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nanotube::armchair::{magnetic_constants, tube_geometry_rings};
use nanotube::asymptotics::{
    check_low_energy_windows, report_ck_shrink, report_large_t_armchair, report_large_t_zigzag,
    report_small_t, report_small_v_armchair, sample_open_gap_potential,
};
use nanotube::oracle::compare_decomposition;
use nanotube::spectral::{full_spectrum, BandStructure};
use nanotube::{magnetic_phase, ArmchairModel, Model, PotentialProfile, ZigzagModel};

use crate::args::{
    AsymArgs, BandsArgs, FieldArgs, Format, GeometryArgs, Lattice, ModelArgs, PotentialArgs, RegimeArg, SweepArgs,
    VerifyArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{emit, fmt_num, precision, to_json};

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Reads a JSON array of numbers from `path`.
pub fn read_potential(path: &Path) -> CliResult<PotentialProfile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let values: Vec<f64> =
        serde_json::from_str(&text).map_err(|source| CliError::PotentialFile { path: path.to_path_buf(), source })?;
    Ok(PotentialProfile::new(values)?)
}

fn load_potential(args: &PotentialArgs) -> CliResult<PotentialProfile> {
    match (&args.potential, args.sample_open_gap) {
        (Some(path), _) => read_potential(path),
        (None, Some(p_star)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            Ok(sample_open_gap_potential(p_star, &mut rng)?)
        }
        (None, None) => Err(input("one of --potential or --sample-open-gap is required")),
    }
}

fn check_grid(grid: usize) -> CliResult<()> {
    if grid < 16 || !grid.is_power_of_two() {
        return Err(input(format!("--grid must be a power of two >= 16, got {grid}")));
    }
    Ok(())
}

fn build_model(model: &ModelArgs, field: &FieldArgs) -> CliResult<Model> {
    let v = load_potential(&model.potential)?;
    let n = model.n_hex;
    match model.lattice {
        Lattice::Zigzag => {
            if field.phases.is_some() {
                return Err(input("--phases applies to the armchair lattice; use --B or --b"));
            }
            let b = match (field.amplitude, field.phase) {
                (Some(amp), _) => magnetic_phase(amp, n)?,
                (None, Some(b)) => b,
                (None, None) => return Err(input("one of --B or --b is required")),
            };
            Ok(ZigzagModel::new(n, b, v, model.t)?.into())
        }
        Lattice::Armchair => {
            if field.phase.is_some() {
                return Err(input("--b applies to the zigzag lattice; use --B or --phases"));
            }
            let phases = match (field.amplitude, &field.phases) {
                (Some(amp), _) => magnetic_constants(n, amp)?,
                (None, Some(p)) => [p[0], p[1], p[2]],
                (None, None) => return Err(input("one of --B or --phases is required")),
            };
            Ok(ArmchairModel::new(n, phases, v, model.t)?.into())
        }
    }
}

/// CSV rows `k,band_index,lo,hi`, then `flat,k,energy`.
pub fn bands_csv(bs: &BandStructure, digits: usize) -> String {
    let mut s = String::from("k,band_index,lo,hi\n");
    for ch in &bs.channels {
        for (i, b) in ch.bands.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{}", ch.k, i + 1, fmt_num(b.lo, digits), fmt_num(b.hi, digits));
        }
    }
    for ch in &bs.channels {
        for e in &ch.flat_bands {
            let _ = writeln!(s, "flat,{},{}", ch.k, fmt_num(*e, digits));
        }
    }
    s
}

pub fn cmd_bands(args: &BandsArgs) -> CliResult<()> {
    let digits = precision()?;
    check_grid(args.grid)?;
    let model = build_model(&args.model, &args.field)?;
    let bs = full_spectrum(&model, args.grid)?;
    let text = match args.out.format {
        Format::Json => to_json(&bs, digits)?,
        Format::Csv => bands_csv(&bs, digits),
    };
    emit(&text, args.out.output.as_deref())
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let digits = precision()?;
    check_grid(args.grid)?;
    if args.steps == 0 {
        return Err(input("--steps must be at least 1"));
    }
    if !(args.b_from <= args.b_to) {
        return Err(input("--B-from must not exceed --B-to"));
    }
    if args.steps == 1 && args.b_from != args.b_to {
        return Err(input("a single step needs --B-from equal to --B-to"));
    }
    let mut s = String::from("B,b,k,band_index,lo,hi\n");
    for i in 0..args.steps {
        let amp = if args.steps == 1 {
            args.b_from
        } else {
            args.b_from + (args.b_to - args.b_from) * i as f64 / (args.steps - 1) as f64
        };
        let field = FieldArgs { amplitude: Some(amp), phase: None, phases: None };
        let model = build_model(&args.model, &field)?;
        let b = match &model {
            Model::Zigzag(m) => m.b(),
            Model::Armchair(m) => m.phases()[0],
        };
        let bs = full_spectrum(&model, args.grid)?;
        for ch in &bs.channels {
            let rows = ch.bands.iter().map(|x| (x.lo, x.hi)).chain(ch.flat_bands.iter().map(|&e| (e, e)));
            for (idx, (lo, hi)) in rows.enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    fmt_num(amp, digits),
                    fmt_num(b, digits),
                    ch.k,
                    idx + 1,
                    fmt_num(lo, digits),
                    fmt_num(hi, digits)
                );
            }
        }
    }
    emit(&s, args.output.as_deref())
}

fn need<T: Copy>(x: Option<T>, flag: &str, regime: &str) -> CliResult<T> {
    x.ok_or_else(|| input(format!("regime {regime} needs --{flag}")))
}

pub fn cmd_asym(args: &AsymArgs) -> CliResult<()> {
    let digits = precision()?;
    check_grid(args.grid)?;
    let v = load_potential(&args.potential)?;
    let (text, pass) = match args.regime {
        RegimeArg::CkToZero => {
            let r = report_ck_shrink(
                &v,
                args.t.unwrap_or(1.0),
                need(args.c, "c", "ck_to_zero")?,
                need(args.s, "s", "ck_to_zero")?,
                args.tol.unwrap_or(0.05),
            )?;
            (to_json(&r, digits)?, r.pass)
        }
        RegimeArg::SmallT => {
            let r = report_small_t(
                &v,
                need(args.c, "c", "small_t")?,
                need(args.n, "n", "small_t")?,
                args.tol.unwrap_or(1e-3),
                1e-6,
            )?;
            (to_json(&r, digits)?, r.pass)
        }
        RegimeArg::LargeTZigzag => {
            let r = report_large_t_zigzag(
                &v,
                need(args.c, "c", "large_t_zigzag")?,
                need(args.n, "n", "large_t_zigzag")?,
                args.t.unwrap_or(40.0),
                args.tol.unwrap_or(0.1),
            )?;
            (to_json(&r, digits)?, r.pass)
        }
        RegimeArg::LargeTArmchair => {
            let n = need(args.n_hex, "N", "large_t_armchair")?;
            let phases = args.phases.as_ref().map_or([0.0; 3], |p| [p[0], p[1], p[2]]);
            let model = ArmchairModel::new(n, phases, v, args.t.unwrap_or(40.0))?;
            let r = report_large_t_armchair(
                &model,
                need(args.k, "k", "large_t_armchair")?,
                need(args.j, "j", "large_t_armchair")?,
                args.grid,
                args.tol.unwrap_or(0.1),
            )?;
            (to_json(&r, digits)?, r.pass)
        }
        RegimeArg::SmallVArmchair => {
            let n = need(args.n_hex, "N", "small_v_armchair")?;
            let r = report_small_v_armchair(&v.scaled(args.t.unwrap_or(1.0)), n, args.tol.unwrap_or(0.1))?;
            (to_json(&r, digits)?, r.pass)
        }
        RegimeArg::LowEnergyWindow => {
            let n = need(args.n_hex, "N", "low_energy_window")?;
            let model = ZigzagModel::new(n, args.phase.unwrap_or(0.0), v, args.t.unwrap_or(0.05))?;
            let r = check_low_energy_windows(&model, args.tol.unwrap_or(1e-8))?;
            (to_json(&r, digits)?, r.pass())
        }
    };
    emit(&text, args.output.as_deref())?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed("prediction outside tolerance".into()))
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let digits = precision()?;
    let model = build_model(&args.model, &args.field)?;
    let cells = args.cells.unwrap_or(3 * model.effective_period());
    let r = compare_decomposition(&model, cells, args.tol)?;
    emit(&to_json(&r, digits)?, args.output.as_deref())?;
    if r.pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("max deviation {} exceeds {}", r.max_abs_dev, args.tol)))
    }
}

#[derive(Serialize)]
struct AtomRecord {
    n: i64,
    j: usize,
    k: usize,
    x: f64,
    y: f64,
    z: f64,
}

pub fn cmd_geometry(args: &GeometryArgs) -> CliResult<()> {
    let digits = precision()?;
    if args.rings < 2 {
        return Err(input("--rings must be at least 2"));
    }
    let (g, _) = tube_geometry_rings(args.n_hex, args.amplitude, args.rings)?;
    let text = match args.out.format {
        Format::Json => {
            let records: Vec<AtomRecord> =
                g.atoms.iter().map(|a| AtomRecord { n: a.n, j: a.j, k: a.k, x: a.x, y: a.y, z: a.z }).collect();
            to_json(&records, digits)?
        }
        Format::Csv => {
            let mut s = String::from("n,j,k,x,y,z\n");
            for a in &g.atoms {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    a.n,
                    a.j,
                    a.k,
                    fmt_num(a.x, digits),
                    fmt_num(a.y, digits),
                    fmt_num(a.z, digits)
                );
            }
            s
        }
    };
    emit(&text, args.out.output.as_deref())
}
