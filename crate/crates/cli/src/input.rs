//! Input files.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use troforge::grids::Grid;
use troforge::matrix::{BlockElement, BlockElementJson};
use troforge::Error;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_grid(path: &Path) -> Result<Grid, Error> {
    read(path)?.parse()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    generators: Vec<BlockElementJson>,
}

fn elements(gens: Vec<BlockElementJson>) -> Result<Vec<BlockElement>, Error> {
    gens.into_iter().map(BlockElement::try_from).collect()
}

/// `{"generators": [blockElement, ...]}`.
pub fn read_generators(path: &Path) -> Result<Vec<BlockElement>, Error> {
    let f: GeneratorFile = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    elements(f.generators)
}

pub enum TroInput {
    Pattern(Vec<(usize, usize)>),
    Generators(Vec<BlockElement>),
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum TroFile {
    Pattern { pattern: Vec<(usize, usize)> },
    Generators { generators: Vec<BlockElementJson> },
}

/// `{"pattern": [[n, m], ...]}` for `⊕ M_{n,m}`, or a generator file.
pub fn read_tro(path: &Path) -> Result<TroInput, Error> {
    let f: TroFile = serde_json::from_str(&read(path)?)
        .map_err(|_| Error::Parse(format!("{}: expected {{\"pattern\": ...}} or {{\"generators\": ...}}", path.display())))?;
    match f {
        TroFile::Pattern { pattern } => {
            if pattern.is_empty() || pattern.iter().any(|&(n, m)| n == 0 || m == 0) {
                return Err(Error::Parse("pattern needs at least one block with positive sizes".into()));
            }
            Ok(TroInput::Pattern(pattern))
        }
        TroFile::Generators { generators } => Ok(TroInput::Generators(elements(generators)?)),
    }
}
