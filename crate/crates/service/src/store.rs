//! One JSON file per session, replaced atomically on every mutation.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::session::Session;

#[derive(Clone, Debug)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Store { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    pub fn save(&self, session: &Session) -> io::Result<()> {
        let tmp = self.dir.join(format!(".{}.tmp", session.id));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&serde_json::to_vec_pretty(session)?)?;
        f.sync_all()?;
        fs::rename(&tmp, self.path(&session.id))
    }

    pub fn remove(&self, id: &str) -> io::Result<()> {
        match fs::remove_file(self.path(id)) {
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(()),
            other => other,
        }
    }

    /// Every readable session; unreadable files are skipped with a
    /// message on stderr.
    pub fn load_all(&self) -> io::Result<Vec<Session>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let is_session = path.extension().is_some_and(|e| e == "json")
                && !path.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
            if !is_session {
                continue;
            }
            match fs::read(&path).map(|b| serde_json::from_slice::<Session>(&b)) {
                Ok(Ok(s)) => out.push(s),
                Ok(Err(e)) => eprintln!("skipping {}: {e}", path.display()),
                Err(e) => eprintln!("skipping {}: {e}", path.display()),
            }
        }
        Ok(out)
    }
}
