use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use vgl_core::fock::operator::{anticommutator, identity, max_abs, max_abs_diff};
use vgl_core::fock::FockSpace;
use vgl_core::kernel::{IntegralMode, KernelSamples};
use vgl_core::modes::LatticeSpec;
use vgl_core::response::{
    compute_response, default_quadrature_nodes, delta_j_finite_l, delta_j_spectral, GaugeFunction, GaugeProfile,
    KGrid, ResponseOptions, TimeEnvelope,
};

use crate::args::{
    ChiKind, Command, ConvergeArgs, Format, GaugeArgs, IntegralKind, KernelArgs, LatticeArgs, OracleArgs,
    ResponseArgs,
};
use crate::error::CliError;
use crate::output::{emit, Cell, Document};

pub const DEFAULT_R_CUT: u32 = 64;
pub const DEFAULT_ORACLE_R_CUT: u32 = 2;

/// Whether every contract checked by a command held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    ContractFailure,
}

pub fn run(command: &Command) -> Result<Status, CliError> {
    match command {
        Command::Kernel(args) => kernel(args, command),
        Command::Response(args) => response(args, command),
        Command::Oracle(args) => oracle(args, command),
        Command::Converge(args) => converge(args, command),
    }
}

fn lattice(args: &LatticeArgs, default_r_cut: u32) -> Result<LatticeSpec, CliError> {
    Ok(LatticeSpec::new(
        args.length,
        args.r_cut.unwrap_or(default_r_cut),
        args.mass,
        args.charge,
    )?)
}

fn config(command: &Command, resolved: Value) -> Result<Value, CliError> {
    Ok(json!({ "args": serde_json::to_value(command)?, "resolved": resolved }))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if n < 2 || !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(CliError::Config(format!(
            "grid needs n >= 2 points on a finite interval with max > min (got n = {n}, [{lo}, {hi}])"
        )));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn max_abs_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().map(f64::abs).fold(0.0, f64::max)
}

fn kernel(args: &KernelArgs, command: &Command) -> Result<Status, CliError> {
    let spec = lattice(&args.lattice, DEFAULT_R_CUT)?;
    let w_min = args.wmin.unwrap_or(-0.5 * spec.length);
    let w_max = args.wmax.unwrap_or(0.5 * spec.length);
    let samples = KernelSamples::on_uniform_grid(&spec, w_min, w_max, args.n)?;

    let resolved = json!({ "lattice": spec, "wmin": w_min, "wmax": w_max, "n": args.n });
    let mut doc = Document::new(config(command, resolved)?, vec!["w", "K_re", "K_im"]);
    doc.meta("max_abs_K", samples.max_magnitude());
    doc.meta("real_part_ratio", samples.real_part_ratio());
    if let Some(odd) = samples.odd_symmetry_residual() {
        doc.meta("odd_symmetry_residual", odd);
    }
    doc.rows = samples
        .separations
        .iter()
        .zip(&samples.values)
        .map(|(w, k)| vec![Cell::Float(*w), Cell::Float(k.re), Cell::Float(k.im)])
        .collect();
    emit(&doc.render(args.output.format.unwrap_or(Format::Csv))?, args.output.out.as_deref())?;
    Ok(Status::Success)
}

fn read_table(path: &Path) -> Result<GaugeProfile, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read table {}: {e}", path.display())))?;
    let (mut grid, mut values) = (Vec::new(), Vec::new());
    for (n, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Option<(f64, f64)> = match (record.get(0), record.get(1)) {
            (Some(a), Some(b)) => a.parse().ok().zip(b.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((z, v)) => {
                grid.push(z);
                values.push(v);
            }
            // A non-numeric first row is a header.
            None if n == 0 => {}
            None => {
                return Err(CliError::Config(format!(
                    "table {} row {} is not two numbers",
                    path.display(),
                    n + 1
                )))
            }
        }
    }
    Ok(GaugeProfile::table(grid, values)?)
}

pub fn gauge_profile(args: &GaugeArgs, length: f64) -> Result<GaugeProfile, CliError> {
    Ok(match args.chi {
        ChiKind::Gaussian => GaugeProfile::gaussian(args.amplitude, args.width, args.center)?,
        ChiKind::Sinusoid => {
            let k0 = args
                .wavenumber
                .unwrap_or(2.0 * PI * args.harmonic as f64 / length);
            GaugeProfile::sinusoid(args.amplitude, k0)?
        }
        ChiKind::Constant => GaugeProfile::Constant { value: args.amplitude },
        ChiKind::Table => {
            let path = args
                .table
                .as_deref()
                .ok_or_else(|| CliError::Config("--chi table requires --table <path>".into()))?;
            read_table(path)?
        }
    })
}

fn response(args: &ResponseArgs, command: &Command) -> Result<Status, CliError> {
    let spec = lattice(&args.lattice, DEFAULT_R_CUT)?;
    let chi = GaugeFunction::stationary(gauge_profile(&args.gauge, spec.length)?)?;
    let z = linspace(
        args.zmin.unwrap_or(-0.5 * spec.length),
        args.zmax.unwrap_or(0.5 * spec.length),
        args.nz,
    )?;
    let options = ResponseOptions {
        cutoff: args.cutoff,
        k_grid: None,
        integral_mode: match args.integral {
            IntegralKind::Closed => IntegralMode::ClosedForm,
            IntegralKind::Quadrature => IntegralMode::quadrature(),
        },
        finite_l: true,
        quadrature_nodes: args.quad_nodes,
    };
    let out = compute_response(&chi, &spec, &z, &options)?;
    let finite = out.finite_l.clone().expect("finite-box route requested");

    let nodes = args
        .quad_nodes
        .unwrap_or_else(|| default_quadrature_nodes(&spec, &chi.profile));
    let resolved = json!({
        "lattice": spec,
        "gauge": chi,
        "z": { "min": z[0], "max": z[z.len() - 1], "n": z.len() },
        "cutoff_P": out.cutoff,
        "k_grid": out.k_grid,
        "quadrature_nodes": nodes,
    });
    let mut doc = Document::new(
        config(command, resolved)?,
        vec!["z", "dj_closed", "dj_spectral", "dj_finiteL", "chi", "dchi_dz"],
    );
    doc.meta("max_abs_dj_closed", out.max_closed());
    doc.meta("max_abs_deviation_spectral", out.spectral_deviation());
    doc.meta("max_abs_deviation_finiteL", out.finite_l_deviation().unwrap_or(0.0));
    doc.rows = (0..z.len())
        .map(|i| {
            [z[i], out.closed[i], out.spectral[i], finite[i], out.chi[i], out.dchi_dz[i]]
                .into_iter()
                .map(Cell::Float)
                .collect()
        })
        .collect();
    emit(&doc.render(args.output.format.unwrap_or(Format::Csv))?, args.output.out.as_deref())?;
    Ok(Status::Success)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(flatten)]
    pub details: Map<String, Value>,
}

impl Check {
    fn new(residual: f64, tolerance: f64) -> Self {
        Self {
            residual,
            tolerance,
            pass: residual <= tolerance,
            details: Map::new(),
        }
    }

    fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    fn require(mut self, condition: bool) -> Self {
        self.pass &= condition;
        self
    }
}

fn probe_points(spec: &LatticeSpec, n: usize) -> Vec<f64> {
    // Irregular offsets so no probe sits on a symmetry point of the box.
    (0..n)
        .map(|i| spec.length * ((0.618_033_988_75 * (i as f64 + 1.0)).fract() - 0.5))
        .collect()
}

pub fn oracle_checks(fs: &FockSpace, time_steps: usize, t0: f64) -> Result<Vec<(&'static str, Check)>, CliError> {
    let spec = *fs.spec();
    let points = probe_points(&spec, 5);
    let mut checks = Vec::new();

    let modes = fs.basis.mode_count();
    let one = identity(fs.dim());
    let mut worst: f64 = 0.0;
    for i in 0..modes {
        for j in 0..modes {
            let mixed = anticommutator(fs.annihilator(i), fs.creator(j));
            let mixed_error = if i == j { max_abs_diff(&mixed, &one) } else { max_abs(&mixed) };
            let pure = max_abs(&anticommutator(fs.annihilator(i), fs.annihilator(j)));
            worst = worst.max(mixed_error).max(pure);
        }
    }
    checks.push(("anticommutators", Check::new(worst, 1e-14).detail("modes", modes)));

    let eigenvalues = fs.spectrum().eigenvalues();
    let zero_count = eigenvalues.iter().filter(|e| e.abs() <= 1e-12).count();
    let ground = eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let gap = eigenvalues
        .iter()
        .filter(|e| e.abs() > 1e-12)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    let spectrum_residual = ground.abs().max((spec.mass - gap).max(0.0));
    checks.push((
        "h0_spectrum",
        Check::new(spectrum_residual, 1e-12)
            .require(zero_count == 1)
            .detail("ground_energy", ground)
            .detail("gap", gap)
            .detail("zero_eigenvalues", zero_count),
    ));

    let mut vacuum_worst: f64 = 0.0;
    for &z in &points {
        vacuum_worst = vacuum_worst
            .max(fs.density(z).vacuum_expectation().norm())
            .max(fs.current(z).vacuum_expectation().norm());
    }
    checks.push(("vacuum_expectations", Check::new(vacuum_worst, 1e-12)));

    let z = points[0];
    let mut kernel_worst: f64 = 0.0;
    let mut real_worst: f64 = 0.0;
    for n in 0..9 {
        let w = spec.length * (n as f64 / 8.0 - 0.5) * 0.9;
        let oracle = fs.vacuum_commutator(z, z + w);
        let analytic = vgl_core::kernel::commutator_kernel_finite(w, &spec);
        kernel_worst = kernel_worst.max((oracle - analytic).norm());
        real_worst = real_worst.max(oracle.re.abs());
    }
    checks.push((
        "kernel_match",
        Check::new(kernel_worst, 1e-10)
            .require(real_worst <= 1e-12)
            .detail("max_real_part", real_worst),
    ));

    let continuity = points
        .iter()
        .map(|&z| fs.continuity_residual(z).relative())
        .fold(0.0, f64::max);
    checks.push(("continuity", Check::new(continuity, 1e-12)));

    let mut charge_worst: f64 = 0.0;
    let mut schwinger_min = f64::INFINITY;
    for (&y, &x) in points.iter().zip(points.iter().skip(1)) {
        charge_worst = charge_worst.max(fs.charge_commutator_vacuum(y, x).norm());
        schwinger_min = schwinger_min.min(fs.vacuum_commutator(y, x).norm());
    }
    checks.push((
        "charge_comm",
        Check::new(charge_worst, 1e-12).detail("min_abs_schwinger_commutator", schwinger_min),
    ));

    let terms = fs.schwinger_positivity(0.0, fs.max_schwinger_step())?;
    checks.push((
        "schwinger_positivity",
        Check::new((terms.rhs1 - terms.rhs2).abs(), 1e-10)
            .require(terms.rhs1 > 0.0 && terms.rhs2 > 0.0)
            .require((terms.lhs - terms.rhs1).abs() <= terms.stencil_bound)
            .detail("lhs", terms.lhs)
            .detail("rhs1", terms.rhs1)
            .detail("rhs2", terms.rhs2)
            .detail("stencil_bound", terms.stencil_bound),
    ));

    let profile = GaugeProfile::box_harmonic(1.0, 1, spec.length)?;
    let chi = GaugeFunction::new(profile, Some(TimeEnvelope::smoothstep(t0)?))?;
    let evolution = fs.first_order_evolution(&chi, time_steps, &points)?;
    let box_response = delta_j_finite_l(&chi, &spec, &points, default_quadrature_nodes(&spec, &chi.profile))?;
    let mismatch = max_abs_of(evolution.delta_j.iter().zip(&box_response).map(|(a, b)| a - b));
    let row_sum = points
        .iter()
        .map(|&x| {
            fs.current(x)
                .matrix
                .outer_view(0)
                .map_or(0.0, |row| row.iter().map(|(_, v)| v.norm()).sum::<f64>())
        })
        .fold(0.0, f64::max);
    let mismatch_tolerance = 2.0 * row_sum * evolution.residual + 1e-12;
    checks.push((
        "evolution",
        Check::new(evolution.residual, 1e-6)
            .require(mismatch <= mismatch_tolerance)
            .detail("time_steps", time_steps)
            .detail("current_mismatch", mismatch)
            .detail("current_tolerance", mismatch_tolerance),
    ));
    Ok(checks)
}

fn oracle(args: &OracleArgs, command: &Command) -> Result<Status, CliError> {
    let spec = lattice(&args.lattice, DEFAULT_ORACLE_R_CUT)?;
    let fs = FockSpace::new(&spec)?;
    let checks = oracle_checks(&fs, args.nt, args.t0)?;
    let all_pass = checks.iter().all(|(_, c)| c.pass);
    let resolved = json!({ "lattice": spec, "dimension": fs.dim(), "nt": args.nt, "t0": args.t0 });
    let config = config(command, resolved)?;

    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let tests: Map<String, Value> = checks
                .iter()
                .map(|(name, check)| Ok((name.to_string(), serde_json::to_value(check)?)))
                .collect::<Result<_, serde_json::Error>>()?;
            serde_json::to_string_pretty(&json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "tests": tests,
                "all_pass": all_pass,
            }))? + "\n"
        }
        Format::Csv => {
            let mut doc = Document::new(config, vec!["test", "residual", "tolerance", "pass"]);
            doc.meta("all_pass", all_pass);
            doc.rows = checks
                .iter()
                .map(|(name, c)| {
                    vec![
                        Cell::Text(name.to_string()),
                        Cell::Float(c.residual),
                        Cell::Float(c.tolerance),
                        Cell::Bool(c.pass),
                    ]
                })
                .collect();
            doc.render_csv()?
        }
    };
    emit(&text, args.output.out.as_deref())?;
    for (name, check) in checks.iter().filter(|(_, c)| !c.pass) {
        eprintln!("oracle check {name} failed: residual {:e} > tolerance {:e}", check.residual, check.tolerance);
    }
    Ok(if all_pass { Status::Success } else { Status::ContractFailure })
}

fn converge(args: &ConvergeArgs, command: &Command) -> Result<Status, CliError> {
    if args.levels < 3 {
        return Err(CliError::Config(format!("converge needs at least 3 levels, got {}", args.levels)));
    }
    let base = lattice(&args.lattice, DEFAULT_R_CUT)?;
    let k0 = 2.0 * PI / base.length;
    let z = linspace(-0.5 * base.length, 0.5 * base.length, args.nz)?;
    let scale = base.charge * base.charge / PI * args.amplitude * k0;
    let closed: Vec<f64> = z.iter().map(|&x| scale * (k0 * x).cos()).collect();
    let chi = GaugeFunction::stationary(GaugeProfile::sinusoid(args.amplitude, k0)?)?;

    let resolved = json!({
        "lattice": base,
        "gauge": chi,
        "levels": args.levels,
        "z": { "min": z[0], "max": z[z.len() - 1], "n": z.len() },
        "scaling": "level n: L = L0 2^n, P = P0 2^n, r_cut = r_cut0 4^n",
    });
    let mut doc = Document::new(
        config(command, resolved)?,
        vec!["level", "L", "rcut", "P", "err_finiteL", "err_spectral", "ratio_prev"],
    );
    let mut previous: Option<f64> = None;
    for level in 0..args.levels {
        let factor = f64::from(1u32 << level);
        let r_cut = base
            .r_cut
            .checked_mul(1u32 << (2 * level))
            .ok_or_else(|| CliError::Config(format!("r_cut overflows at level {level}")))?;
        let spec = LatticeSpec::new(base.length * factor, r_cut, base.mass, base.charge)?;
        let cutoff = spec.momentum_cutoff();
        let finite = delta_j_finite_l(&chi, &spec, &z, default_quadrature_nodes(&spec, &chi.profile))?;
        let lines_only = KGrid::new(k0, 0)?;
        let spectral = delta_j_spectral(&chi, &spec, cutoff, &lines_only, &z, IntegralMode::ClosedForm)?;
        let err_finite = max_abs_of(finite.iter().zip(&closed).map(|(a, b)| a - b));
        let err_spectral = max_abs_of(spectral.iter().zip(&closed).map(|(a, b)| a - b));
        let ratio = previous.map_or(f64::NAN, |p| p / err_spectral);
        previous = Some(err_spectral);
        doc.rows.push(vec![
            Cell::Int(i64::from(level)),
            Cell::Float(spec.length),
            Cell::Int(i64::from(r_cut)),
            Cell::Float(cutoff),
            Cell::Float(err_finite),
            Cell::Float(err_spectral),
            Cell::Float(ratio),
        ]);
    }
    emit(&doc.render(args.output.format.unwrap_or(Format::Csv))?, args.output.out.as_deref())?;
    Ok(Status::Success)
}
