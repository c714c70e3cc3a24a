//! CSV and sidecar output. Reals use Rust's shortest round-trip formatting so
//! repeated runs compare byte for byte.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::CliError;

pub fn real(x: f64) -> String {
    format!("{x:?}")
}

pub struct CsvOut {
    writer: csv::Writer<File>,
}

impl CsvOut {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        let file =
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header).map_err(csv_err)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(csv_err)
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Writes `<out>.meta.json` recording the command, its parameters and the seed.
pub fn write_meta(out: &Path, meta: Value) -> Result<(), CliError> {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    let path = Path::new(&name);
    let mut f = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = serde_json::to_string_pretty(&meta).expect("plain data serializes");
    writeln!(f, "{text}").map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
