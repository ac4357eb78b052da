//! The doubly-exponential nested family, cell-count bounds, and the
//! sign-invariant vs EC-reduced experiment harness.

mod dh;

pub use dh::{generate_dh, DhForm, DhInstance, LForm};

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::Deserialize;

use crate::error::{CadError, Result};
use crate::formula::{identify_ecs, parse_formula, parse_formula_with_order, Formula};
use crate::lifting::{build_cad, cell_count, CellCount, LiftOptions};
use crate::polynomial::{Polynomial, VarOrder};
use crate::projection::{plan_projection, EcPolicy, PlanOptions, PropagationMode};

/// Dominant term `(2d)^(2^n - 1) * m^(2^n - 1) * 2^(2^(n-1) - 1)`.
pub fn bound_eq1(n: u32, m: u32, d: u32) -> BigUint {
    assert!(n >= 1 && m >= 1 && d >= 1, "bound_eq1 needs positive arguments");
    let e = (1u64 << n) - 1;
    let e2 = (1u64 << (n - 1)) - 1;
    let two = BigUint::from(2u32);
    Pow::pow(BigUint::from(2 * d), e) * Pow::pow(BigUint::from(m), e) * Pow::pow(two, e2)
}

/// `(2d)^(2^n) (2m)^(2^(n - ell))`, exponent constants set to 1.
pub fn bound_ec_resultant(n: u32, m: u32, d: u32, ell: u32) -> BigUint {
    let ell = ell.min(n);
    Pow::pow(BigUint::from(2 * d), 1u64 << n) * Pow::pow(BigUint::from(2 * m), 1u64 << (n - ell))
}

/// `(ell d)^(2^(n - ell)) (2m)^(2^(n - ell))`, exponent constants set to 1.
pub fn bound_ec_groebner(n: u32, m: u32, d: u32, ell: u32) -> BigUint {
    let ell = ell.min(n);
    let base = BigUint::from(ell.max(1) * d);
    Pow::pow(base, 1u64 << (n - ell)) * Pow::pow(BigUint::from(2 * m), 1u64 << (n - ell))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    SignInvariant,
    EcResultant,
    EcGroebner,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::SignInvariant => "si",
            Mode::EcResultant => "ec-res",
            Mode::EcGroebner => "ec-gb",
        }
    }

    pub fn plan_options(self, projection_cap: usize) -> PlanOptions {
        let (policy, mode) = match self {
            Mode::SignInvariant => (EcPolicy::None, PropagationMode::Resultant),
            Mode::EcResultant => (EcPolicy::Auto, PropagationMode::Resultant),
            Mode::EcGroebner => (EcPolicy::Auto, PropagationMode::Groebner),
        };
        PlanOptions { policy, mode, projection_cap }
    }
}

impl std::str::FromStr for Mode {
    type Err = CadError;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "si" => Ok(Mode::SignInvariant),
            "ec-res" => Ok(Mode::EcResultant),
            "ec-gb" => Ok(Mode::EcGroebner),
            other => Err(CadError::Parse { pos: 0, msg: format!("unknown mode `{other}` (si, ec-res, ec-gb)") }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub formula: Formula,
}

#[derive(Debug, Deserialize)]
struct CorpusFile {
    id: Option<String>,
    formula: String,
    order: Option<String>,
}

/// Parses one corpus entry (`formula = "..."`, optional `order = "y,x"`).
pub fn parse_corpus_entry(id: &str, text: &str) -> Result<CorpusEntry> {
    let file: CorpusFile =
        toml::from_str(text).map_err(|e| CadError::Parse { pos: 0, msg: format!("corpus entry `{id}`: {e}") })?;
    let formula = match &file.order {
        Some(o) => parse_formula_with_order(&file.formula, &VarOrder::parse(o)?)?,
        None => parse_formula(&file.formula)?,
    };
    Ok(CorpusEntry { id: file.id.unwrap_or_else(|| id.to_string()), formula })
}

/// All `*.toml` entries of a directory, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let io = |e: std::io::Error| CadError::Io(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(io)?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("entry");
            parse_corpus_entry(stem, &text)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Caps {
    pub cells: usize,
    pub projection: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { cells: 1_000_000, projection: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    CapExceeded,
    WellOrientedness,
    Failed(String),
}

impl RunStatus {
    pub fn tag(&self) -> String {
        match self {
            RunStatus::Ok => "ok".into(),
            RunStatus::CapExceeded => "cap-exceeded".into(),
            RunStatus::WellOrientedness => "well-orientedness".into(),
            RunStatus::Failed(m) => format!("error: {m}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub id: String,
    pub mode: Mode,
    pub n: u32,
    pub m: u32,
    pub d: u32,
    pub ell: u32,
    /// Ideal dimension of the input ECs, when there are any.
    pub r: Option<i64>,
    pub eq1_value: BigUint,
    pub ec_bound_note: String,
    pub observed: Option<CellCount>,
    /// Max degree and number of level-1 projection polynomials.
    pub d_obs: u32,
    pub m_obs: usize,
    pub time_ms: u128,
    pub status: RunStatus,
}

impl BoundReport {
    /// Observed cells within the McCallum cell bound (`None` if the run failed).
    pub fn within_eq1(&self) -> Option<bool> {
        self.observed.as_ref().map(|c| BigUint::from(c.total) <= self.eq1_value)
    }
}

/// `(n, m, d)`: variables, polynomial count, maximum degree in any variable.
pub fn formula_parameters(f: &Formula) -> (u32, u32, u32) {
    let polys = f.polynomials();
    let d = polys.iter().map(Polynomial::max_var_degree).max().unwrap_or(1).max(1);
    (f.nvars() as u32, (polys.len() as u32).max(1), d)
}

fn ideal_dimension(ecs: &[Polynomial]) -> Option<i64> {
    if ecs.is_empty() {
        return None;
    }
    let gb = crate::groebner::buchberger(ecs, crate::groebner::MonomialOrder::DegRevLex).ok()?;
    crate::groebner::dimension(&gb).ok()
}

/// One formula in one mode.
pub fn run_one(entry: &CorpusEntry, mode: Mode, caps: &Caps) -> BoundReport {
    let f = &entry.formula;
    let (n, m, d) = formula_parameters(f);
    let ecs = if f.is_prenex() { identify_ecs(f) } else { Vec::new() };
    let start = Instant::now();
    let mut report = BoundReport {
        id: entry.id.clone(),
        mode,
        n,
        m,
        d,
        ell: 0,
        r: if mode == Mode::SignInvariant { None } else { ideal_dimension(&ecs) },
        eq1_value: bound_eq1(n, m, d),
        ec_bound_note: String::new(),
        observed: None,
        d_obs: 0,
        m_obs: 0,
        time_ms: 0,
        status: RunStatus::Ok,
    };
    let result = plan_projection(&f.polynomials(), &ecs, &f.vars, &mode.plan_options(caps.projection)).and_then(|plan| {
        report.ell = plan.ell() as u32;
        let level1 = &plan.level(1).projection_polys;
        report.m_obs = level1.len();
        report.d_obs = level1.iter().map(|p| p.degree_in(0).unwrap_or(0)).max().unwrap_or(0);
        build_cad(&plan, &LiftOptions { cell_cap: caps.cells })
    });
    report.time_ms = start.elapsed().as_millis();
    match result {
        Ok(tree) => report.observed = Some(cell_count(&tree)),
        Err(CadError::CapExceeded(_)) => report.status = RunStatus::CapExceeded,
        Err(CadError::Nullification(_)) => report.status = RunStatus::WellOrientedness,
        Err(e) => report.status = RunStatus::Failed(e.to_string()),
    }
    report.ec_bound_note = match mode {
        Mode::SignInvariant => "no ECs; McCallum cell bound applies".into(),
        Mode::EcResultant => format!(
            "indicative, not certified: (2d)^(2^n) (2m)^(2^(n-l)) = {}",
            bound_ec_resultant(n, m, d, report.ell)
        ),
        Mode::EcGroebner => format!(
            "indicative, not certified: (l d)^(2^(n-l)) (2m)^(2^(n-l)) = {}",
            bound_ec_groebner(n, m, d, report.ell)
        ),
    };
    report
}

/// Every corpus entry in every mode, rows in corpus-then-mode order.
pub fn run_experiment(corpus: &[CorpusEntry], modes: &[Mode], caps: &Caps) -> Vec<BoundReport> {
    use rayon::prelude::*;
    let jobs: Vec<(&CorpusEntry, Mode)> = corpus.iter().flat_map(|e| modes.iter().map(move |&m| (e, m))).collect();
    jobs.par_iter().map(|(e, m)| run_one(e, *m, caps)).collect()
}

pub const CSV_HEADER: &str = "id,mode,n,m,d,ell,cells_total,cells_per_level,D_obs,M_obs,time_ms,status";

pub fn to_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let (total, per_level) = match &r.observed {
            Some(c) => (c.total.to_string(), c.per_level.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")),
            None => (String::new(), String::new()),
        };
        let status = r.status.tag().replace(',', ";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.id,
            r.mode.tag(),
            r.n,
            r.m,
            r.d,
            r.ell,
            total,
            per_level,
            r.d_obs,
            r.m_obs,
            r.time_ms,
            status
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivityEntry {
    pub poly: Polynomial,
    pub main_var: String,
    pub primitive: bool,
    pub content: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub vars: VarOrder,
    pub entries: Vec<PrimitivityEntry>,
}

impl PrimitivityReport {
    pub fn imprimitive(&self) -> usize {
        self.entries.iter().filter(|e| !e.primitive).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{} = 0  main {}  {}  content {}",
                e.poly.to_text(&self.vars),
                e.main_var,
                if e.primitive { "primitive" } else { "IMPRIMITIVE" },
                e.content.to_text(&self.vars)
            );
        }
        let _ = writeln!(out, "{} equalities, {} imprimitive", self.entries.len(), self.imprimitive());
        out
    }
}

/// Primitivity of each EC candidate (top-level equation of the matrix).
pub fn primitivity_report(f: &Formula) -> PrimitivityReport {
    let entries = identify_ecs(f)
        .into_iter()
        .map(|p| {
            let v = p.main_var().expect("non-constant EC");
            let (content, _) = p.content_primitive(v).expect("non-zero");
            PrimitivityEntry { main_var: f.vars.name(v).to_string(), primitive: content.is_constant(), content, poly: p }
        })
        .collect();
    PrimitivityReport { vars: f.vars.clone(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq1_values() {
        assert_eq!(bound_eq1(1, 1, 1), BigUint::from(2u32));
        assert_eq!(bound_eq1(2, 2, 2), BigUint::from(1024u32));
        assert_eq!(bound_eq1(3, 1, 3), BigUint::from(2_239_488u32));
    }

    #[test]
    fn eq1_super_squaring() {
        for n in 1..5 {
            for m in 1..4 {
                for d in 1..4 {
                    let a = bound_eq1(n, m, d);
                    let b = bound_eq1(n + 1, m, d);
                    assert!(b >= &a * &a / BigUint::from(2u32));
                    assert!(bound_eq1(n, m + 1, d) >= a && bound_eq1(n, m, d + 1) >= a);
                }
            }
        }
    }

    #[test]
    fn experiment_rows() {
        let circle_x = parse_corpus_entry("cx", "formula = \"x^2 + y^2 - 1 = 0 and x > 0\"\norder = \"y,x\"").unwrap();
        let rows = run_experiment(&[circle_x], &[Mode::SignInvariant, Mode::EcResultant], &Caps::default());
        assert_eq!(rows[0].observed.as_ref().unwrap().total, 19);
        assert_eq!(rows[1].observed.as_ref().unwrap().total, 13);
        assert_eq!(rows[1].ell, 1);
        assert_eq!(rows[0].within_eq1(), Some(true));
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.lines().nth(1).unwrap().starts_with("cx,si,2,2,2,0,19,5;19,"));
    }

    #[test]
    fn cap_rows_are_flagged() {
        let e = parse_corpus_entry("c", "formula = \"x^2 + y^2 - 1 = 0\"\norder = \"y,x\"").unwrap();
        let rows = run_experiment(&[e], &[Mode::SignInvariant], &Caps { cells: 4, projection: 100 });
        assert_eq!(rows[0].status, RunStatus::CapExceeded);
        assert!(to_csv(&rows).contains("cap-exceeded"));
    }

    #[test]
    fn primitivity_simple() {
        let f = parse_formula("x^2 + y^2 - 1 = 0").unwrap();
        let r = primitivity_report(&f);
        assert_eq!(r.entries.len(), 1);
        assert!(r.entries[0].primitive);
    }
}
