use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::PathBuf;

use twofactor_core::{parse_graph6, Graph};

use crate::args::InputArgs;
use crate::CliError;

/// One parsed input line.
pub struct Item {
    pub graph: Graph,
    pub graph6: String,
}

/// Streams graphs from the input files (or standard input), calling `f`
/// per graph. Malformed lines are skipped with a warning, or are fatal
/// under `--strict`.
pub fn for_each_graph(
    args: &InputArgs,
    mut f: impl FnMut(Item) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let sources: Vec<Option<PathBuf>> = if args.inputs.is_empty() {
        vec![None]
    } else {
        args.inputs
            .iter()
            .map(|p| (p.as_os_str() != "-").then(|| p.clone()))
            .collect()
    };
    for src in sources {
        let (name, reader): (String, Box<dyn BufRead>) = match &src {
            None => ("<stdin>".into(), Box::new(BufReader::new(io::stdin()))),
            Some(p) => {
                let file = File::open(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                (p.display().to_string(), Box::new(BufReader::new(file)))
            }
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| CliError::Input(format!("{name}: {e}")))?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            match parse_graph6(text) {
                Ok(graph) => f(Item {
                    graph,
                    graph6: text.trim_start_matches(">>graph6<<").to_string(),
                })?,
                Err(e) => skip(args.strict, &format!("{name}:{}: {e}", i + 1))?,
            }
        }
    }
    Ok(())
}

/// Warns about an unusable input, or fails under `--strict`.
pub fn skip(strict: bool, msg: &str) -> Result<(), CliError> {
    if strict {
        Err(CliError::Invalid(msg.to_string()))
    } else {
        eprintln!("warning: skipping {msg}");
        Ok(())
    }
}
