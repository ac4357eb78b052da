use std::process::ExitCode;

use cad_core::groebner::{buchberger, dimension, elimination_ideal, MonomialOrder};
use cad_core::polynomial::parse_polynomial;
use cad_core::VarOrder;
use cad_cli::{finish, text_or_file};
use clap::Parser;

/// Reduced Groebner basis, dimension and elimination ideals.
#[derive(Parser)]
#[command(name = "gb", version)]
struct Cli {
    /// lex or degrevlex.
    #[arg(long, default_value = "lex")]
    order: MonomialOrder,
    /// Variables, highest first (the leftmost is eliminated first).
    #[arg(long)]
    vars: String,
    /// Generators (one per line or `;`-separated), inline or from a file.
    #[arg(long)]
    gens: String,
}

fn run(cli: Cli) -> cad_core::Result<()> {
    let mut names: Vec<String> = cli.vars.split(',').map(|s| s.trim().to_string()).collect();
    names.reverse();
    let order = VarOrder::new(&names)?;
    let text = text_or_file(&cli.gens)?;
    let gens = text
        .split(['\n', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
        .map(|s| parse_polynomial(s, &order))
        .collect::<cad_core::Result<Vec<_>>>()?;
    let b = buchberger(&gens, cli.order)?;
    println!("basis ({}):", cli.order.name());
    for g in &b.gens {
        println!("  {}", g.to_text(&order));
    }
    println!("dimension: {}", dimension(&b)?);
    if cli.order == MonomialOrder::Lex {
        for k in (1..order.len()).rev() {
            let keep: Vec<usize> = (0..k).collect();
            let elim = elimination_ideal(&b, &keep)?;
            let shown: Vec<String> = elim.iter().map(|p| p.to_text(&order)).collect();
            println!("eliminate {}: [{}]", names[k..].iter().rev().cloned().collect::<Vec<_>>().join(","), shown.join(", "));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    finish(run(Cli::parse()))
}
