//! Shared plumbing for the `cad`, `bench` and `gb` binaries.

use std::path::Path;
use std::process::ExitCode;

use cad_core::formula::{parse_formula, parse_formula_with_order, Formula};
use cad_core::{CadError, VarOrder};

/// 0 ok, 1 other, 2 parse, 3 well-orientedness, 4 cap.
pub fn exit_code(e: &CadError) -> u8 {
    match e {
        CadError::Parse { .. } | CadError::UnknownVariable(_) => 2,
        CadError::Nullification(_) => 3,
        CadError::CapExceeded(_) => 4,
        _ => 1,
    }
}

pub fn finish(r: cad_core::Result<()>) -> ExitCode {
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// The argument itself, or the contents of the file it names.
pub fn text_or_file(arg: &str) -> cad_core::Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| CadError::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

pub fn load_formula(arg: &str, order: Option<&str>) -> cad_core::Result<Formula> {
    let text = text_or_file(arg)?;
    let text = text.trim();
    match order {
        Some(o) => parse_formula_with_order(text, &VarOrder::parse(o)?),
        None => parse_formula(text),
    }
}

pub fn write_or_print(path: Option<&Path>, content: &str) -> cad_core::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CadError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
