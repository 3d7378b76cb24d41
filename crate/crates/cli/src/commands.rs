use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use nctwobody::algebra::{center_of_mass_block, commutator_table, total_momentum_brackets};
use nctwobody::observables::schrodinger_energy;
use nctwobody::scalar::{exact_decimal, Exact, Field};
use nctwobody::{
    com_separation_check, critical_g, dirac_ground_energy, kinetic_coefficients, kinetic_energy_bound_check,
    selfconsist, solve_level, Coupling, EpsilonMatrix, Error, QuantumNumbers, Solution64, SolverSettings, TwoBodyRep,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::format::{json_number, number, optional};
use crate::{AlgebraKind, BodyArgs, Command, CurveKind, SolverArgs};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NoSolution { .. } => 2,
            Error::NonConvergence(_) => 3,
            _ => 1,
        };
        Self {
            code,
            message: format!("error: {err}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Self::usage(format!("error: {err}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(err: csv::Error) -> Self {
        Self::usage(format!("error: {err}"))
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Solve { level, alpha_z, solver } => solve(level.level()?, alpha_z, &solver),
        Command::Critical { level, solver } => critical(level.level()?, &solver, false),
        Command::OmegaC { solver } => critical(QuantumNumbers::new(1, 0)?, &solver, true),
        Command::Curve { kind } => curve(kind),
        Command::Spectrum { alpha_z, n_max, solver } => spectrum(alpha_z, n_max, &solver),
        Command::Algebra { kind } => algebra(kind),
    }
}

fn settings(solver: &SolverArgs) -> Result<SolverSettings<f64>, Failure> {
    Ok(SolverSettings::with_tolerance(solver.tol)?)
}

fn print_json(value: &Value) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn solve(qn: QuantumNumbers, alpha_z: f64, solver: &SolverArgs) -> Outcome {
    let settings = settings(solver)?;
    let coupling = Coupling::new(alpha_z, solver.omega)?;
    match solve_level(qn, &coupling, &settings) {
        Ok(s) => print_json(&json!({
            "n": qn.n(),
            "l": qn.l(),
            "alpha_z": json_number(alpha_z),
            "omega": json_number(solver.omega),
            "tol": json_number(solver.tol),
            "g": json_number(coupling.g()),
            "eta": json_number(s.eta),
            "epsilon": json_number(s.epsilon),
            "energy_mu_c2": json_number(s.energy),
            "mean_distance_compton": json_number(s.mean_distance),
            "residual": json_number(s.residual),
            "iterations": s.iterations,
            "branch": s.branch,
        })),
        Err(Error::NoSolution { g, h_max, .. }) => {
            let mut diagnostic = Map::new();
            diagnostic.insert("error".into(), "no bound state: g > g_critical".into());
            diagnostic.insert("n".into(), qn.n().into());
            diagnostic.insert("l".into(), qn.l().into());
            diagnostic.insert("alpha_z".into(), json_number(alpha_z));
            diagnostic.insert("omega".into(), json_number(solver.omega));
            diagnostic.insert("g".into(), json_number(g));
            diagnostic.insert("max_residual".into(), json_number(h_max));
            if let Ok(cp) = critical_g(qn, &settings) {
                diagnostic.insert("g_critical".into(), json_number(cp.g_critical));
                if solver.omega > 0.0 {
                    diagnostic.insert("alpha_z_critical".into(), json_number(cp.alpha_z_for(solver.omega)));
                }
            }
            Err(Failure {
                code: 2,
                message: Value::Object(diagnostic).to_string(),
            })
        }
        Err(other) => Err(other.into()),
    }
}

fn critical(qn: QuantumNumbers, solver: &SolverArgs, ground_alias: bool) -> Outcome {
    let cp = critical_g(qn, &settings(solver)?)?;
    let mut record = json!({
        "n": qn.n(),
        "l": qn.l(),
        "omega": json_number(solver.omega),
        "tol": json_number(solver.tol),
        "g_critical": json_number(cp.g_critical),
        "alpha_z_critical": json_number(cp.alpha_z_for(solver.omega)),
        "eta_critical": json_number(cp.eta_critical),
    });
    if ground_alias {
        record["omega_c"] = json_number(cp.g_critical);
    }
    print_json(&record)
}

fn writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Failure::usage(format!("error: cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn write_rows(out: Option<&Path>, header: &[String], rows: &[Vec<String>]) -> Outcome {
    let mut w = writer(out)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Solves every grid point, mapping a missing bound state to `None`.
fn solve_grid(
    qn: QuantumNumbers,
    alpha_z: &[f64],
    omega: f64,
    settings: &SolverSettings<f64>,
) -> Result<Vec<Option<Solution64>>, Failure> {
    alpha_z
        .par_iter()
        .map(|&a| {
            let coupling = Coupling::new(a, omega)?;
            match solve_level(qn, &coupling, settings) {
                Ok(s) => Ok(Some(s)),
                Err(Error::NoSolution { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, Error>>()
        .map_err(Failure::from)
}

fn curve(kind: CurveKind) -> Outcome {
    match kind {
        CurveKind::Rhs {
            level,
            g,
            eta,
            solver,
            out,
        } => {
            let settings = settings(&solver)?;
            let points = eta.points();
            let values = selfconsist::rhs_curve(level.level()?, g, &points, &settings.quadrature)?;
            let rows: Vec<Vec<String>> = values.iter().map(|&(e, v)| vec![number(e), number(v)]).collect();
            write_rows(out.as_deref(), &["eta".into(), "rhs".into()], &rows)
        }
        CurveKind::Energy { alpha_z, solver, out } => {
            let settings = settings(&solver)?;
            let ground = QuantumNumbers::new(1, 0)?;
            let grid = alpha_z.points();
            let solved = solve_grid(ground, &grid, solver.omega, &settings)?;
            let rows: Vec<Vec<String>> = grid
                .iter()
                .zip(&solved)
                .map(|(&a, s)| {
                    vec![
                        number(a),
                        number(schrodinger_energy(ground, a)),
                        optional(dirac_ground_energy(a).ok()),
                        optional(s.map(|s| s.energy)),
                    ]
                })
                .collect();
            let header = ["alpha_z", "E_schrodinger", "E_dirac", "E_noncommutative"].map(String::from);
            write_rows(out.as_deref(), &header, &rows)
        }
        CurveKind::Epsilon {
            level,
            levels,
            alpha_z,
            solver,
            out,
        } => {
            let settings = settings(&solver)?;
            let levels: Vec<QuantumNumbers> = if levels.is_empty() {
                vec![level.level()?]
            } else {
                levels.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            let grid = alpha_z.points();
            let columns = levels
                .iter()
                .map(|&q| solve_grid(q, &grid, solver.omega, &settings))
                .collect::<Result<Vec<_>, _>>()?;
            let mut header = vec!["alpha_z".to_string()];
            if levels.len() == 1 {
                header.push("epsilon".into());
            } else {
                header.extend(levels.iter().map(|q| format!("epsilon_{}", q.label())));
            }
            let rows: Vec<Vec<String>> = grid
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let mut row = vec![number(a)];
                    row.extend(columns.iter().map(|col| optional(col[i].map(|s| s.epsilon))));
                    row
                })
                .collect();
            write_rows(out.as_deref(), &header, &rows)
        }
    }
}

fn spectrum(alpha_z: f64, n_max: u32, solver: &SolverArgs) -> Outcome {
    let settings = settings(solver)?;
    let levels = QuantumNumbers::up_to(n_max)?;
    let solved: Vec<Option<Solution64>> = levels
        .par_iter()
        .map(
            |&q| match solve_level(q, &Coupling::new(alpha_z, solver.omega)?, &settings) {
                Ok(s) => Ok(Some(s)),
                Err(Error::NoSolution { .. }) => Ok(None),
                Err(e) => Err(e),
            },
        )
        .collect::<Result<_, Error>>()?;

    let header = ["level", "n", "l", "E_nc", "E_schrodinger", "epsilon", "mean_distance"].map(String::from);
    let mut rows = vec![header.to_vec()];
    for (q, s) in levels.iter().zip(&solved) {
        let mut row = vec![q.label(), q.n().to_string(), q.l().to_string()];
        let e_s = number(schrodinger_energy(*q, alpha_z));
        match s {
            Some(s) => row.extend([number(s.energy), e_s, number(s.epsilon), number(s.mean_distance)]),
            None => row.extend(["—".to_string(), e_s, "—".into(), "—".into()]),
        }
        rows.push(row);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "# alpha_z={} omega={} tol={}",
        number(alpha_z),
        number(solver.omega),
        number(solver.tol)
    )?;
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| {
                let pad = " ".repeat(w - cell.chars().count());
                if c == 0 {
                    format!("{cell}{pad}")
                } else {
                    format!("{pad}{cell}")
                }
            })
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

/// Scalars the algebra commands can read from decimal text and emit as JSON.
trait AlgebraScalar: Field {
    fn read(text: &str) -> Result<Self, Failure>;
    fn emit(&self) -> Value;
}

impl AlgebraScalar for f64 {
    fn read(text: &str) -> Result<Self, Failure> {
        text.trim()
            .parse()
            .map_err(|_| Failure::usage(format!("error: cannot read {text:?} as a number")))
    }

    fn emit(&self) -> Value {
        json_number(*self)
    }
}

impl AlgebraScalar for Exact {
    fn read(text: &str) -> Result<Self, Failure> {
        exact_decimal(text.trim()).ok_or_else(|| Failure::usage(format!("error: cannot read {text:?} as a decimal")))
    }

    fn emit(&self) -> Value {
        Value::String(self.to_string())
    }
}

fn emit_all<T: AlgebraScalar>(values: &[T]) -> Value {
    Value::Array(values.iter().map(AlgebraScalar::emit).collect())
}

fn read_masses<T: AlgebraScalar>(bodies: &BodyArgs) -> Result<Vec<T>, Failure> {
    bodies.masses.iter().map(|m| T::read(m)).collect()
}

fn read_eps<T: AlgebraScalar>(bodies: &BodyArgs, size: usize) -> Result<EpsilonMatrix<T>, Failure> {
    match (&bodies.eps_uniform, &bodies.eps_matrix) {
        (Some(e), None) => Ok(EpsilonMatrix::uniform(size, T::read(e)?)?),
        (None, Some(text)) => {
            let entries = text
                .split(';')
                .flat_map(|row| row.split(','))
                .map(T::read)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(EpsilonMatrix::new(size, entries)?)
        }
        (None, None) => Err(Failure::usage("error: give --eps-uniform or --eps-matrix")),
        (Some(_), Some(_)) => Err(Failure::usage("error: --eps-uniform and --eps-matrix are exclusive")),
    }
}

fn commutators<T: AlgebraScalar>(m1: &str, m2: &str, eps: &str) -> Outcome {
    let rep = TwoBodyRep::new(T::read(m1)?, T::read(m2)?, T::read(eps)?)?;
    let table = commutator_table(&rep)?;
    let expected = rep.expected_table();
    let deviation = table.max_deviation(&expected);
    print_json(&json!({
        "m1": rep.m1().emit(),
        "m2": rep.m2().emit(),
        "eps": rep.epsilon().emit(),
        "unit": "i hbar",
        "x1_p1": table.x1_p1.emit(),
        "x2_p2": table.x2_p2.emit(),
        "x1_p2": table.x1_p2.emit(),
        "x2_p1": table.x2_p1.emit(),
        "x1_x2": table.x1_x2.emit(),
        "p1_p2": table.p1_p2.emit(),
        "total_momentum": emit_all(&total_momentum_brackets(&rep)?),
        "max_deviation": deviation.emit(),
        "matches": deviation <= T::comparison_tolerance(),
    }))
}

fn coeffs<T: AlgebraScalar>(bodies: &BodyArgs) -> Outcome {
    let masses = read_masses::<T>(bodies)?;
    let eps = read_eps(bodies, masses.len())?;
    let c = kinetic_coefficients(&masses, &eps)?;
    print_json(&json!({
        "masses": emit_all(&masses),
        "A": emit_all(&c.a),
        "B": Value::Array(c.b.iter().map(|row| emit_all(row)).collect()),
    }))
}

fn com_check_exact(bodies: &BodyArgs) -> Outcome {
    let masses = read_masses::<Exact>(bodies)?;
    let eps = read_eps(bodies, masses.len())?;
    let (com, coupling) = center_of_mass_block(&masses, &eps)?;
    let total = masses.iter().cloned().fold(Exact::from_integer(0.into()), |a, b| a + b);
    print_json(&json!({
        "masses": emit_all(&masses),
        "com_coefficient": com.emit(),
        "expected_com_coefficient": (Exact::from_integer(1.into()) / total).emit(),
        "couplings": emit_all(&coupling),
        "decoupled": coupling.iter().all(|c| *c == Exact::from_integer(0.into())),
    }))
}

fn com_check(bodies: &BodyArgs) -> Outcome {
    let masses = read_masses::<f64>(bodies)?;
    let eps = read_eps(bodies, masses.len())?;
    let sep = com_separation_check(&masses, &eps)?;
    let total: f64 = masses.iter().sum();
    print_json(&json!({
        "masses": emit_all(&masses),
        "com_coefficient": json_number(sep.com_coefficient),
        "expected_com_coefficient": json_number(1.0 / total),
        "relative_block": Value::Array(sep.relative_block.iter().map(|r| emit_all(r)).collect()),
        "max_coupling": json_number(sep.max_coupling),
        "decoupled": sep.decoupled,
        "kinetic_bound": kinetic_energy_bound_check(&masses, &eps)?,
    }))
}

fn algebra(kind: AlgebraKind) -> Outcome {
    match kind {
        AlgebraKind::Commutators { m1, m2, eps, scalar } => {
            if scalar.exact {
                commutators::<Exact>(&m1, &m2, &eps)
            } else {
                commutators::<f64>(&m1, &m2, &eps)
            }
        }
        AlgebraKind::Coeffs { bodies } => {
            if bodies.scalar.exact {
                coeffs::<Exact>(&bodies)
            } else {
                coeffs::<f64>(&bodies)
            }
        }
        AlgebraKind::ComCheck { bodies } => {
            if bodies.scalar.exact {
                com_check_exact(&bodies)
            } else {
                com_check(&bodies)
            }
        }
    }
}
