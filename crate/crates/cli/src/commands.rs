//! One function per subcommand; each turns resolved settings into a [`Table`].

use rayon::prelude::*;

use regulab::flanagan::{delta_flanagan, delta_pointsplit, delta_tau, qi_bound_rhs, ConformalMap, WeightFunction};
use regulab::regulator_lab::{default_schedule, scan_path, AmbiguityExpr, ExprId, LimitPath};
use regulab::static_well::{t00r_static, WellConfig};
use regulab::time_step::{d_term, mode_reg_density, pointsplit_density, StepConfig};
use regulab::{Error, LimitKind, Regulator};

use crate::output::{Cell, Table};
use crate::settings::{CliError, CliResult, Settings};

pub type Keys = &'static [(&'static str, Option<&'static str>)];

pub const WELL_KEYS: Keys = &[
    ("lambda", Some("1")),
    ("a", Some("1")),
    ("eps0", Some("0")),
    ("eps1", Some("0")),
    ("tau", Some("0.05")),
    ("grid", Some("0:0:1")),
    ("path", None),
    ("s-schedule", None),
    ("out", None),
];

pub const STEP_KEYS: Keys = &[
    ("lambda", Some("1")),
    ("mass", Some("1")),
    ("eps0", Some("0.0025")),
    ("eps1", Some("0.0025")),
    ("tau", Some("0.05")),
    ("grid", Some("1:1:1")),
    ("path", None),
    ("s-schedule", None),
    ("compare", Some("false")),
    ("out", None),
];

pub const SCAN_KEYS: Keys = &[
    ("expr", Some("ratio239")),
    ("path", None),
    ("s-schedule", None),
    ("lambda", Some("1")),
    ("V", None),
    ("v", Some("0")),
    ("out", None),
];

pub const FLANAGAN_KEYS: Keys = &[
    ("V", None),
    ("grid", Some("0:0:1")),
    ("tau", Some("0")),
    ("mode", Some("taylor")),
    ("split", Some("0.01")),
    ("out", None),
];

pub const QI_KEYS: Keys = &[("rho", None), ("support", None), ("out", None)];

pub const SELFTEST_KEYS: Keys = &[("out", None)];

/// Attributes a library error to the flag that caused it.
fn blame(err: Error, expr_flag: &str) -> CliError {
    let flag = match &err {
        Error::OutsideRegionI { .. } => "--grid",
        Error::InvalidCutoff(_) | Error::SingularRegulator(_) => "--tau",
        Error::SplitStraddlesStep { .. } => "--eps0",
        Error::DegenerateMap { .. } | Error::Expr(_) | Error::NonpositiveWeight { .. } => expr_flag,
        Error::ZeroFrequency | Error::InvalidFrequency(_) => "--mass",
        Error::ToleranceNotMet { .. } => "quadrature",
        _ => "input",
    };
    CliError::from_core(flag, err)
}

fn param<T>(flag: &str, r: regulab::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::from_core(flag, e))
}

fn parse_path(s: &Settings) -> CliResult<LimitPath> {
    let v = s.list("path")?;
    let (p, c) = match v.len() {
        3 => ([v[0], v[1], v[2]], [1.0; 3]),
        6 => ([v[0], v[1], v[2]], [v[3], v[4], v[5]]),
        n => {
            return Err(CliError::validation(format!(
                "--path: expected p0,p1,ptau[,c0,c1,ctau], got {n} numbers"
            )))
        }
    };
    param("--path", LimitPath::new(c, p))
}

fn schedule(s: &Settings) -> CliResult<Vec<f64>> {
    if !s.has("s-schedule") {
        return Ok(default_schedule());
    }
    let v = s.list("s-schedule")?;
    if v.iter().any(|&x| !(x > 0.0 && x <= 1.0)) || v.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(CliError::validation(
            "--s-schedule: values must lie in (0, 1] and strictly decrease",
        ));
    }
    Ok(v)
}

/// Either one fixed regulator or the samples of `--path` over `--s-schedule`.
fn regulators(s: &Settings) -> CliResult<Vec<(Option<f64>, Regulator)>> {
    if s.has("path") {
        let path = parse_path(s)?;
        return Ok(schedule(s)?.into_iter().map(|x| (Some(x), path.eval(x))).collect());
    }
    let eps0 = s.f64("eps0")?;
    let eps1 = s.f64("eps1")?;
    let tau = s.f64("tau")?;
    for (flag, v) in [("--eps0", eps0), ("--eps1", eps1), ("--tau", tau)] {
        if v < 0.0 {
            return Err(CliError::validation(format!("{flag}: must be >= 0, got {v}")));
        }
    }
    Ok(vec![(None, Regulator { eps0, eps1, tau })])
}

fn with_s(columns: &[&'static str], path: bool) -> Vec<&'static str> {
    let mut out = Vec::with_capacity(columns.len() + 1);
    if path {
        out.push("s");
    }
    out.extend_from_slice(columns);
    out
}

/// Evaluates `f` over `items` in parallel; rows and the first error come back in item order.
fn ordered<T: Sync, F>(items: &[T], f: F) -> CliResult<Vec<Vec<Cell>>>
where
    F: Fn(&T) -> CliResult<Vec<Cell>> + Sync + Send,
{
    let rows: Vec<CliResult<Vec<Cell>>> = items.par_iter().map(f).collect();
    rows.into_iter().collect()
}

pub fn well_energy(s: &Settings) -> CliResult<Table> {
    let run = s.run_config()?;
    let lambda = s.f64("lambda")?;
    let a = s.f64("a")?;
    if !(a > 0.0) {
        return Err(CliError::validation(format!("--a: must be > 0, got {a}")));
    }
    let cfg = param("--lambda", WellConfig::new(lambda, a))?;
    let regs = regulators(s)?;
    let xs = s.grid("grid")?;
    let path = s.has("path");
    let items: Vec<(Option<f64>, Regulator, f64)> =
        regs.iter().flat_map(|&(sv, r)| xs.iter().map(move |&x| (sv, r, x))).collect();

    let spec = run.quadrature;
    let rows = ordered(&items, |&(sv, reg, x)| {
        let d = t00r_static(&cfg, &reg, x, 0.0, &spec).map_err(|e| blame(e, "--grid"))?;
        let mut row: Vec<Cell> = sv.map(Cell::Num).into_iter().collect();
        row.extend([x, d.value, d.error_estimate, reg.eps0, reg.eps1, reg.tau].map(Cell::Num));
        Ok(row)
    })?;
    let columns = with_s(&["x", "value", "error_estimate", "eps0", "eps1", "tau"], path);
    let mut t = Table::new("well-energy", s.resolved(), &columns);
    t.rows = rows;
    Ok(t)
}

pub fn step_energy(s: &Settings) -> CliResult<Table> {
    let run = s.run_config()?;
    let lambda = s.f64("lambda")?;
    let mass = s.f64("mass")?;
    if !(mass > 0.0) {
        return Err(CliError::validation(format!(
            "--mass: must be > 0 (the massless mode sum diverges at k = 0), got {mass}"
        )));
    }
    let cfg = param("--lambda", StepConfig::new(lambda, mass))?;
    let ts = s.grid("grid")?;
    if let Some(&t) = ts.iter().find(|&&t| !(t > 0.0)) {
        return Err(CliError::validation(format!("--grid: times must be > 0, got {t}")));
    }
    let compare = s.bool("compare")?;
    let spec = run.quadrature;

    let t = if compare {
        let regs = regulators(s)?;
        let path = s.has("path");
        let items: Vec<(Option<f64>, Regulator, f64)> =
            regs.iter().flat_map(|&(sv, r)| ts.iter().map(move |&t| (sv, r, t))).collect();
        let rows = ordered(&items, |&(sv, reg, t)| {
            let m = mode_reg_density(&cfg, t, &spec).map_err(|e| blame(e, "--grid"))?;
            let (p, d) = if lambda == 0.0 {
                (0.0, 0.0)
            } else {
                let p = pointsplit_density(&cfg, t, &reg, &spec).map_err(|e| blame(e, "--grid"))?;
                (p.value, d_term(&cfg, &reg).map_err(|e| blame(e, "--tau"))?)
            };
            let mut row: Vec<Cell> = sv.map(Cell::Num).into_iter().collect();
            row.extend([t, m.value, p, d, p - d - m.value, reg.eps0, reg.eps1, reg.tau].map(Cell::Num));
            Ok(row)
        })?;
        let columns = with_s(
            &["t", "mode_reg", "pointsplit", "d_term", "residual", "eps0", "eps1", "tau"],
            path,
        );
        let mut t = Table::new("step-energy", s.resolved(), &columns);
        t.rows = rows;
        t
    } else {
        let rows = ordered(&ts, |&t| {
            let m = mode_reg_density(&cfg, t, &spec).map_err(|e| blame(e, "--grid"))?;
            Ok(vec![Cell::Num(t), Cell::Num(m.value)])
        })?;
        let mut t = Table::new("step-energy", s.resolved(), &["t", "mode_reg"]);
        t.rows = rows;
        t
    };
    Ok(t)
}

pub fn limit_scan(s: &Settings) -> CliResult<Table> {
    s.run_config()?;
    let id: ExprId = s
        .raw("expr")?
        .parse()
        .map_err(|e| CliError::from_core("--expr", e))?;
    let expr = match id {
        ExprId::Ratio239 => AmbiguityExpr::Ratio239,
        ExprId::RStatic317 => AmbiguityExpr::RStatic317 { lambda: s.f64("lambda")? },
        ExprId::DTerm616 => AmbiguityExpr::DTerm616 { lambda: s.f64("lambda")? },
        ExprId::FlanaganDelta => AmbiguityExpr::FlanaganDelta {
            map: param("--V", ConformalMap::parse(s.raw("V")?))?,
            v: s.f64("v")?,
        },
    };
    let path = parse_path(s)?;
    let sched = schedule(s)?;
    let scan = scan_path(&expr, &path, &sched).map_err(|e| blame(e, "--V"))?;

    let mut t = Table::new(
        "limit-scan",
        s.resolved(),
        &["s", "eps0", "eps1", "tau", "value_re", "value_im"],
    );
    for p in &scan.samples {
        let mut row = [p.s, p.regulator.eps0, p.regulator.eps1, p.regulator.tau].map(Cell::Num).to_vec();
        match p.value {
            Some(v) => row.extend([Cell::Num(v.re), Cell::Num(v.im)]),
            None => row.extend([Cell::Missing, Cell::Missing]),
        }
        t.rows.push(row);
    }
    let o = scan.outcome;
    let (re, im) = if o.kind == LimitKind::Finite {
        (Cell::Num(o.value.re), Cell::Num(o.value.im))
    } else {
        (Cell::Missing, Cell::Missing)
    };
    t.summary = vec![
        ("kind".into(), Cell::Text(o.kind.as_str().into())),
        ("value_re".into(), re),
        ("value_im".into(), im),
        ("confidence".into(), Cell::Num(o.confidence)),
    ];
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FlanaganMode {
    Taylor,
    TauFirst,
    PointSplit,
}

pub fn flanagan(s: &Settings) -> CliResult<Table> {
    s.run_config()?;
    let map = param("--V", ConformalMap::parse(s.raw("V")?))?;
    let vs = s.grid("grid")?;
    let tau = s.f64("tau")?;
    let mode = match s.raw("mode")? {
        "taylor" => FlanaganMode::Taylor,
        "tau_first" | "tau-first" => FlanaganMode::TauFirst,
        "pointsplit" => FlanaganMode::PointSplit,
        other => {
            return Err(CliError::validation(format!(
                "--mode: expected taylor, tau_first or pointsplit, got '{other}'"
            )))
        }
    };
    if tau < 0.0 || (mode == FlanaganMode::TauFirst && tau == 0.0) {
        return Err(CliError::validation(format!(
            "--tau: must be > 0 for tau_first and >= 0 otherwise, got {tau}"
        )));
    }
    let split = s.f64("split")?;

    let (columns, name): (&[&str], &str) = match mode {
        FlanaganMode::Taylor => (&["v", "delta", "mode"], "taylor"),
        FlanaganMode::TauFirst => (&["v", "delta", "mode"], "tau_first"),
        FlanaganMode::PointSplit => (&["v", "vbar", "tau", "delta", "delta_im", "mode"], "pointsplit"),
    };
    let rows = ordered(&vs, |&v| {
        let row = match mode {
            FlanaganMode::Taylor => {
                let d = delta_flanagan(&map, v).map_err(|e| blame(e, "--V"))?;
                vec![Cell::Num(v), Cell::Num(d)]
            }
            FlanaganMode::TauFirst => {
                let d = delta_tau(&map, v, tau).map_err(|e| blame(e, "--V"))?;
                vec![Cell::Num(v), Cell::Num(d)]
            }
            FlanaganMode::PointSplit => {
                let vbar = v + split;
                let d = delta_pointsplit(&map, v, vbar, tau).map_err(|e| blame(e, "--V"))?;
                [v, vbar, tau, d.re, d.im].map(Cell::Num).to_vec()
            }
        };
        let mut row = row;
        row.push(Cell::Text(name.into()));
        Ok(row)
    })?;
    let mut t = Table::new("flanagan", s.resolved(), columns);
    t.rows = rows;
    Ok(t)
}

pub fn qi_bound(s: &Settings) -> CliResult<Table> {
    let run = s.run_config()?;
    let support = s.list("support")?;
    if support.len() != 2 {
        return Err(CliError::validation("--support: expected lo,hi"));
    }
    let rho = WeightFunction::parse(s.raw("rho")?, support[0], support[1]).map_err(|e| match e {
        Error::Expr(_) => CliError::from_core("--rho", e),
        e => CliError::from_core("--support", e),
    })?;
    let b = qi_bound_rhs(&rho, &run.quadrature).map_err(|e| blame(e, "--rho"))?;
    let mut t = Table::new("qi-bound", s.resolved(), &["bound", "error_estimate"]);
    t.rows.push(vec![Cell::Num(b.value), Cell::Num(b.error_estimate)]);
    Ok(t)
}
