//! JSON and CSV writers. Columns are documented in `docs/csv-columns.md`.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;

use crate::report::{CatalogRow, ClassicalReport, OpticsReport, RunReport, SweepRow};
use crate::{Failure, Format};

#[derive(Serialize)]
struct CatalogCsv<'a> {
    index: usize,
    id: &'a str,
    label: &'a str,
    kind: &'a str,
    definition: &'a str,
    chsh_max: f64,
    ppt_min_eig: f64,
    is_ppt_separable: bool,
    violates_chsh: bool,
    theta0: Option<f64>,
    wedge_phase: Option<f64>,
    t_hwp: Option<f64>,
    t_qwp: Option<f64>,
    r_hwp: Option<f64>,
    r_qwp: Option<f64>,
}

#[derive(Serialize)]
struct RunCsv<'a> {
    state: &'a str,
    kind: &'a str,
    context: &'a str,
    sign: i8,
    outcome: &'a str,
    count: Option<u64>,
    probability: f64,
    frequency: Option<f64>,
    expectation: f64,
    sd: f64,
    chi: f64,
    chi_sd: f64,
    sds_of_violation: Option<f64>,
}

#[derive(Serialize)]
struct OpticsCsv<'a> {
    state: &'a str,
    context: &'a str,
    total_variation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct AssignmentCsv {
    index: usize,
    #[serde(rename = "A")]
    big_a: i8,
    #[serde(rename = "B")]
    big_b: i8,
    #[serde(rename = "C")]
    big_c: i8,
    a: i8,
    b: i8,
    c: i8,
    alpha: i8,
    beta: i8,
    gamma: i8,
    chi: i32,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct States<'a> {
    states: &'a [CatalogRow],
}

#[derive(Serialize)]
struct Rows<'a> {
    rows: &'a [SweepRow],
}

pub struct Emitter {
    format: Format,
    out: Option<PathBuf>,
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("cannot write report: {e}"))
}

impl Emitter {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Self { format, out }
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        match &self.out {
            Some(path) => File::create(path)
                .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
                .map_err(|e| io_failure(format!("{}: {e}", path.display()))),
            None => Ok(Box::new(io::stdout().lock())),
        }
    }

    fn json<T: Serialize>(&self, doc: &T) -> Result<(), Failure> {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, doc).map_err(io_failure)?;
        writeln!(w).and_then(|_| w.flush()).map_err(io_failure)
    }

    fn csv<T: Serialize>(&self, rows: impl IntoIterator<Item = T>) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(self.sink()?);
        for row in rows {
            w.serialize(row).map_err(io_failure)?;
        }
        w.flush().map_err(io_failure)
    }

    pub fn catalog(&self, rows: &[CatalogRow]) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json(&Envelope { command: "catalog", body: &States { states: rows } }),
            Format::Csv => self.csv(rows.iter().map(|r| CatalogCsv {
                index: r.index,
                id: r.id,
                label: &r.label,
                kind: r.kind,
                definition: r.definition,
                chsh_max: r.chsh_max,
                ppt_min_eig: r.ppt_min_eig,
                is_ppt_separable: r.is_ppt_separable,
                violates_chsh: r.violates_chsh,
                theta0: r.preparation.map(|p| p.theta0),
                wedge_phase: r.preparation.map(|p| p.wedge_phase),
                t_hwp: r.preparation.map(|p| p.t_hwp),
                t_qwp: r.preparation.map(|p| p.t_qwp),
                r_hwp: r.preparation.map(|p| p.r_hwp),
                r_qwp: r.preparation.map(|p| p.r_qwp),
            })),
        }
    }

    pub fn run(&self, report: &RunReport) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.states.iter().flat_map(|s| {
                s.contexts.iter().flat_map(move |c| {
                    c.bins.iter().map(move |b| RunCsv {
                        state: s.id,
                        kind: s.kind,
                        context: &c.context,
                        sign: c.sign,
                        outcome: b.outcome,
                        count: b.count,
                        probability: b.probability,
                        frequency: b.frequency,
                        expectation: c.expectation,
                        sd: c.sd,
                        chi: s.chi,
                        chi_sd: s.chi_sd,
                        sds_of_violation: s.sds_of_violation,
                    })
                })
            })),
        }
    }

    pub fn sweep(&self, rows: &[SweepRow]) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json(&Envelope { command: "sweep", body: &Rows { rows } }),
            Format::Csv => self.csv(rows),
        }
    }

    pub fn optics(&self, report: &OpticsReport) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.checks.iter().map(|c| OpticsCsv {
                state: c.state,
                context: &c.context,
                total_variation: c.total_variation,
                pass: c.pass,
            })),
        }
    }

    pub fn classical(&self, report: &ClassicalReport) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => {
                let rows = report.table.as_ref().unwrap_or(&report.maximizers);
                self.csv(rows.iter().map(|r| {
                    let [big_a, big_b, big_c, a, b, c, alpha, beta, gamma] = r.values;
                    AssignmentCsv { index: r.index, big_a, big_b, big_c, a, b, c, alpha, beta, gamma, chi: r.chi }
                }))
            }
        }
    }
}
