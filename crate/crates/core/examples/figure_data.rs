//! Writes the CSV data of every figure into a directory.
//!
//!     cargo run --release --example figure_data -- [dir]

use std::path::PathBuf;

use oam_parity::cli::figure::FigureId;
use oam_parity::cli::write_figure;

fn main() -> std::io::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("figures"));
    for id in FigureId::ALL {
        let dir = root.join(format!("fig{id}"));
        let files = write_figure(id, &dir, 4)?;
        println!("figure {id}: {} curves in {}", files.len(), dir.display());
    }
    Ok(())
}
