//! Directories of greymaps.

use std::fs;
use std::path::{Path, PathBuf};

use ilc_core::{Corpus, Plane};

use crate::error::{IlcError, Result};
use crate::pgm::load_pgm;

/// An image with its benchmark class (the directory holding it).
#[derive(Debug, Clone)]
pub struct LabeledPlane {
    pub class: String,
    pub label: String,
    pub path: PathBuf,
    pub plane: Plane,
}

fn is_pgm(p: &Path) -> bool {
    p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| IlcError::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|e| IlcError::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

fn name_of(p: &Path) -> String {
    p.file_stem().or(p.file_name()).map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

/// Every `.pgm` in `dir` and in its immediate subdirectories, sorted by
/// path. Images directly inside `dir` take its name as class.
pub fn load_dir(dir: impl AsRef<Path>) -> Result<Vec<LabeledPlane>> {
    let dir = dir.as_ref();
    let mut out = Vec::new();
    let top_class = name_of(dir);
    for entry in sorted_entries(dir)? {
        if is_pgm(&entry) {
            out.push(LabeledPlane {
                class: top_class.clone(),
                label: name_of(&entry),
                plane: load_pgm(&entry)?,
                path: entry,
            });
        } else if entry.is_dir() {
            let class = name_of(&entry);
            for file in sorted_entries(&entry)?.into_iter().filter(|p| is_pgm(p)) {
                out.push(LabeledPlane {
                    class: class.clone(),
                    label: format!("{class}/{}", name_of(&file)),
                    plane: load_pgm(&file)?,
                    path: file,
                });
            }
        }
    }
    if out.is_empty() {
        return Err(IlcError::EmptyCorpus(dir.to_path_buf()));
    }
    Ok(out)
}

pub fn to_corpus(images: &[LabeledPlane]) -> Result<Corpus> {
    Ok(Corpus::new(
        images.iter().map(|i| i.plane.clone()).collect(),
        images.iter().map(|i| i.label.clone()).collect(),
    )?)
}

pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Corpus> {
    to_corpus(&load_dir(dir)?)
}
