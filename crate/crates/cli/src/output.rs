//! All-or-nothing writes of a batch of files into one directory.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Writes every `(file name, contents)` pair into `dir`. Each file is first
/// written under a temporary name; the renames only start once all of them
/// are on disk, and the temporaries are removed if any write fails.
pub fn write_all_atomic(dir: &Path, files: &[(&str, Vec<u8>)]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let pid = std::process::id();
    let mut written: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let tmp = dir.join(format!(".{name}.{pid}.tmp"));
        if let Err(err) = fs::write(&tmp, contents) {
            let _ = fs::remove_file(&tmp);
            for (t, _) in &written {
                let _ = fs::remove_file(t);
            }
            return Err(err);
        }
        written.push((tmp, dir.join(name)));
    }
    for (tmp, dest) in &written {
        fs::rename(tmp, dest)?;
    }
    Ok(())
}
