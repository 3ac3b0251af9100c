//! gnuplot data files, script stubs and binary PGM images.

use std::fmt::Write as _;

use levyspline::{Error, GridRealization, Result};

/// `x s` rows in 1-D; `x y s` rows with a blank line after each scan line
/// in 2-D, as `splot` expects.
pub fn data_columns(s: &GridRealization) -> String {
    let grid = s.grid();
    let mut out = format!("{}\n", s.header());
    match grid.dim() {
        1 => {
            for (k, v) in s.samples().iter().enumerate() {
                let _ = writeln!(out, "{:.10e} {:.10e}", grid.coord(0, k), v);
            }
        }
        _ => {
            let (w, h) = (grid.shape()[0], grid.shape()[1]);
            for j in 0..h {
                for i in 0..w {
                    let _ = writeln!(
                        out,
                        "{:.10e} {:.10e} {:.10e}",
                        grid.coord(0, i),
                        grid.coord(1, j),
                        s.samples()[grid.index(&[i, j])]
                    );
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Linear gray levels, minimum 0 and maximum 255. A constant field maps to 0.
pub fn gray_levels(values: &[f64]) -> Vec<u8> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = hi - lo;
    values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect()
}

/// Binary PGM (`P5 w h 255`) with the top row at the largest y.
pub fn pgm(s: &GridRealization) -> Result<Vec<u8>> {
    let grid = s.grid();
    if grid.dim() != 2 {
        return Err(Error::InvalidParameter("PGM output needs a 2-D realization".into()));
    }
    let (w, h) = (grid.shape()[0], grid.shape()[1]);
    let gray = gray_levels(s.samples());
    let mut out = format!("P5 {w} {h} 255\n").into_bytes();
    out.reserve(w * h);
    for j in (0..h).rev() {
        out.extend((0..w).map(|i| gray[grid.index(&[i, j])]));
    }
    Ok(out)
}

pub fn script(s: &GridRealization, data: &str, image: Option<&str>) -> String {
    let mut out = String::from("# gnuplot script stub\n");
    let _ = writeln!(out, "# {}", s.header().trim_start_matches("# "));
    if s.grid().dim() == 1 {
        let _ = writeln!(out, "set xlabel 'x'\nset ylabel 's(x)'");
        let _ = writeln!(out, "plot '{data}' using 1:2 with steps notitle");
    } else {
        let _ = writeln!(out, "set view map\nset size ratio -1\nset xlabel 'x'\nset ylabel 'y'");
        let _ = writeln!(out, "splot '{data}' using 1:2:3 with pm3d notitle");
        if let Some(pgm) = image {
            let _ = writeln!(out, "# grayscale image of the same field: {pgm}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_levels_span_full_range() {
        assert_eq!(gray_levels(&[-1.0, 0.0, 1.0]), vec![0, 128, 255]);
        assert_eq!(gray_levels(&[2.0, 2.0]), vec![0, 0]);
    }
}
