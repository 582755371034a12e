//! Output files are staged in memory and written together, so a failing
//! command leaves nothing behind.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

#[derive(Debug, Default)]
pub struct Staged {
    files: Vec<(PathBuf, String)>,
}

impl Staged {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, content: String) {
        self.files.push((path.into(), content));
    }

    /// Writes every file; on the first failure removes the files (and any
    /// directories) created so far.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut created_dirs: Vec<PathBuf> = Vec::new();
        let mut written: Vec<PathBuf> = Vec::new();
        for (path, content) in &self.files {
            let outcome = ensure_parent(path, &mut created_dirs).and_then(|()| {
                fs::write(path, content).map_err(|e| CliError::io(path, e))
            });
            match outcome {
                Ok(()) => written.push(path.clone()),
                Err(e) => {
                    rollback(&written, &created_dirs);
                    return Err(e);
                }
            }
        }
        Ok(written)
    }
}

fn ensure_parent(path: &Path, created: &mut Vec<PathBuf>) -> Result<()> {
    let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) else {
        return Ok(());
    };
    let mut missing = Vec::new();
    let mut cursor = Some(parent);
    while let Some(dir) = cursor {
        if dir.as_os_str().is_empty() || dir.exists() {
            break;
        }
        missing.push(dir.to_path_buf());
        cursor = dir.parent();
    }
    fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    missing.reverse();
    created.extend(missing);
    Ok(())
}

fn rollback(written: &[PathBuf], dirs: &[PathBuf]) {
    for path in written {
        let _ = fs::remove_file(path);
    }
    for dir in dirs.iter().rev() {
        let _ = fs::remove_dir(dir);
    }
}
