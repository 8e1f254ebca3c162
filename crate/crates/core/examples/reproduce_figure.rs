//! Writes the optimal-width curves for the modulation comparison to a directory.

use ppm_pointing::cli::{write_figure, Figure};
use std::path::PathBuf;

fn main() -> ppm_pointing::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("ppm-fig3b"));
    write_figure(Figure::Fig3b, &dir)?;
    for entry in std::fs::read_dir(&dir)? {
        println!("{}", entry?.path().display());
    }
    Ok(())
}
