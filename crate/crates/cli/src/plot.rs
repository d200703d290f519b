//! Gnuplot script emission: a pm3d heat map of the magnitude of a field CSV.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

pub fn write_field_plot(script_path: &Path, csv_path: &Path, title: &str) -> Result<()> {
    let csv = csv_path.display();
    let script = format!(
        "set datafile separator comma\n\
         set datafile commentschars '#'\n\
         set title '{title}'\n\
         set xlabel 'x'\n\
         set ylabel 'p'\n\
         set pm3d map\n\
         set palette rgbformulae 33,13,10\n\
         splot '{csv}' skip 1 using 1:2:(sqrt($3*$3 + $4*$4)) with image notitle\n"
    );
    fs::write(script_path, script)
        .with_context(|| format!("writing {}", script_path.display()))
}
