use std::path::PathBuf;
use std::process::ExitCode;

use cad_core::bench::{
    bound_ec_groebner, bound_ec_resultant, bound_eq1, load_corpus, primitivity_report, run_experiment, to_csv, Caps,
    DhForm, DhInstance, Mode,
};
use cad_core::polynomial::parse_polynomial;
use cad_core::VarOrder;
use cad_cli::{finish, write_or_print};
use clap::{Parser, Subcommand};

/// Doubly-exponential family generator, bounds and experiments.
#[derive(Parser)]
#[command(name = "bench", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a member of the nested family.
    Dh {
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// The map f, as a polynomial in t.
        #[arg(long, default_value = "t^2")]
        f: String,
        /// nested, prenex, negated, cnf or product.
        #[arg(long, default_value = "nested")]
        form: DhForm,
        /// Also list EC candidates with their contents.
        #[arg(long)]
        primitivity: bool,
    },
    /// Run every corpus entry in every mode and write a CSV report.
    Run {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "si,ec-res,ec-gb")]
        modes: Vec<Mode>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        cell_cap: usize,
        #[arg(long, default_value_t = 10_000)]
        projection_cap: usize,
    },
    /// Evaluate the cell-count bounds.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        /// Number of levels with an EC, for the indicative EC bounds.
        #[arg(long)]
        ell: Option<u32>,
    },
}

fn run(cli: Cli) -> cad_core::Result<()> {
    match cli.cmd {
        Cmd::Dh { depth, f, form, primitivity } => {
            let f = parse_polynomial(&f, &VarOrder::parse("t")?)?;
            let dh = DhInstance::new(depth, &f)?;
            let formula = dh.formula(form);
            println!("{formula}");
            if primitivity {
                print!("{}", primitivity_report(&formula).to_text());
            }
            Ok(())
        }
        Cmd::Run { corpus, modes, csv, cell_cap, projection_cap } => {
            let entries = load_corpus(&corpus)?;
            let rows = run_experiment(&entries, &modes, &Caps { cells: cell_cap, projection: projection_cap });
            for r in &rows {
                if r.mode == Mode::SignInvariant && r.within_eq1() == Some(false) {
                    eprintln!("warning: {} exceeds the McCallum cell bound", r.id);
                }
            }
            write_or_print(csv.as_deref(), &to_csv(&rows))
        }
        Cmd::Bound { n, m, d, ell } => {
            if n == 0 || m == 0 || d == 0 {
                return Err(cad_core::CadError::UndefinedInput("n, m and d must be positive"));
            }
            println!("{}", bound_eq1(n, m, d));
            if let Some(l) = ell {
                println!("indicative, not certified (resultant): {}", bound_ec_resultant(n, m, d, l));
                println!("indicative, not certified (groebner): {}", bound_ec_groebner(n, m, d, l));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    finish(run(Cli::parse()))
}
