use std::path::PathBuf;
use std::process::ExitCode;

use cad_core::bench::Mode;
use cad_core::formula::{decide_with, identify_ecs, DecideOptions, Formula};
use cad_core::lifting::{build_cad, cell_count, truth_assign, CadTree, LiftOptions};
use cad_core::projection::plan_projection;
use cad_cli::{finish, load_formula, write_or_print};
use clap::{Args, Parser, Subcommand};

/// Cylindrical algebraic decomposition of a formula's polynomials.
#[derive(Parser)]
#[command(name = "cad", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the decomposition and print a summary (optionally the full tree as JSON).
    Build {
        #[command(flatten)]
        common: Common,
        /// Write the plan and tree as JSON to this file
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide a closed formula.
    Decide {
        #[command(flatten)]
        common: Common,
    },
    /// Print cell counts only.
    Count {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Formula text or a file containing it.
    #[arg(long)]
    formula: String,
    /// Variable order, lowest first (e.g. `y,x`).
    #[arg(long)]
    order: Option<String>,
    /// si, ec-res or ec-gb.
    #[arg(long, default_value = "ec-res")]
    mode: Mode,
    #[arg(long, default_value_t = 1_000_000)]
    cell_cap: usize,
    #[arg(long, default_value_t = 10_000)]
    projection_cap: usize,
}

impl Common {
    fn tree(&self, f: &Formula) -> cad_core::Result<CadTree> {
        let ecs = if f.is_prenex() { identify_ecs(f) } else { Vec::new() };
        let plan = plan_projection(&f.polynomials(), &ecs, &f.vars, &self.mode.plan_options(self.projection_cap))?;
        build_cad(&plan, &LiftOptions { cell_cap: self.cell_cap })
    }
}

fn run(cli: Cli) -> cad_core::Result<()> {
    match cli.cmd {
        Cmd::Build { common, json } => {
            let f = load_formula(&common.formula, common.order.as_deref())?;
            let mut tree = common.tree(&f)?;
            let (_, matrix) = f.prefix();
            if matrix.is_quantifier_free() {
                truth_assign(&mut tree, &Formula::new(f.vars.clone(), matrix.clone()))?;
            }
            let c = cell_count(&tree);
            println!("order: {}", f.vars.names().join(","));
            println!("ell: {}", tree.plan.ell());
            if tree.plan.has_fallback() {
                println!("fallback: some level had only imprimitive EC candidates");
            }
            println!("cells: {} (per level {:?})", c.total, c.per_level);
            if let Some(p) = json {
                let text = serde_json::to_string_pretty(&serde_json::json!({
                    "plan": tree.plan.to_json(),
                    "cad": tree.to_json(),
                }))
                .expect("json values serialize");
                write_or_print(Some(&p), &text)?;
            }
            Ok(())
        }
        Cmd::Decide { common } => {
            let f = load_formula(&common.formula, common.order.as_deref())?;
            let mut opts = DecideOptions::default();
            opts.plan = common.mode.plan_options(common.projection_cap);
            opts.lift.cell_cap = common.cell_cap;
            println!("{}", decide_with(&f, &opts)?);
            Ok(())
        }
        Cmd::Count { common } => {
            let f = load_formula(&common.formula, common.order.as_deref())?;
            let c = cell_count(&common.tree(&f)?);
            let per: Vec<String> = c.per_level.iter().map(ToString::to_string).collect();
            println!("{} {}", c.total, per.join(";"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    finish(run(Cli::parse()))
}
