//! Atomic output staging. Commands write every artifact into a hidden
//! work directory next to the requested output directory, then rename it
//! into place in one step. A run that fails part-way therefore leaves no
//! partial outputs; the work directory is removed on drop.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub struct StagingDir {
    final_dir: PathBuf,
    work_dir: PathBuf,
    committed: bool,
}

impl StagingDir {
    /// Prepares a work directory sibling to `final_dir` (same filesystem,
    /// so the commit rename is atomic). Fails if `final_dir` already holds
    /// files: outputs are never silently overwritten.
    pub fn new(final_dir: &Path) -> io::Result<Self> {
        if final_dir.exists() {
            if !final_dir.is_dir() {
                return Err(io::Error::new(
                    io::ErrorKind::AlreadyExists,
                    format!("output path {} exists and is not a directory", final_dir.display()),
                ));
            }
            if fs::read_dir(final_dir)?.next().is_some() {
                return Err(io::Error::new(
                    io::ErrorKind::AlreadyExists,
                    format!("output directory {} is not empty", final_dir.display()),
                ));
            }
        }
        let name = final_dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| {
                io::Error::new(
                    io::ErrorKind::InvalidInput,
                    format!("output path {} has no directory name", final_dir.display()),
                )
            })?;
        let parent = match final_dir.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent)?;
        let work_dir = parent.join(format!(".{name}.part-{}", std::process::id()));
        if work_dir.exists() {
            fs::remove_dir_all(&work_dir)?;
        }
        fs::create_dir(&work_dir)?;
        Ok(Self { final_dir: final_dir.to_path_buf(), work_dir, committed: false })
    }

    /// Path of a staged file, for writing before commit.
    pub fn path(&self, name: &str) -> PathBuf {
        self.work_dir.join(name)
    }

    /// Renames the work directory to the final location.
    pub fn commit(mut self) -> io::Result<()> {
        if self.final_dir.exists() {
            // Verified empty in `new`; remove so the rename can land.
            fs::remove_dir(&self.final_dir)?;
        }
        fs::rename(&self.work_dir, &self.final_dir)?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for StagingDir {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.work_dir);
        }
    }
}
