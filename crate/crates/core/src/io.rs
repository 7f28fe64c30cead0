//! Comma-separated tables and plain PPM rasters.
//!
//! Every table has exactly one header line. Floats are written with Rust's
//! shortest round-trip formatting, so parsing a table back gives the same
//! bits.

use std::io::{BufRead, Write};

use crate::basins::{BasinGrid, Label};
use crate::certifier::suite::SuiteReport;
use crate::error::{Error, Result};
use crate::fixed_points::FixedPointRecord;
use crate::lyapunov::ConjectureReport;
use crate::torus::{MapSpec, TorusPoint};

pub const TRAJECTORY_HEADER: &str = "n,x,y,lyapunov,dist_to_sink";
pub const CENSUS_HEADER: &str = "x,y,kind,lambda1_re,lambda1_im,lambda2_re,lambda2_im,residual";
pub const CERTIFICATE_HEADER: &str =
    "id,region,target,sign,status,boxes_proved,boxes_undecided,depth,time_s";
pub const BASIN_CELLS_HEADER: &str = "i,j,label";
pub const BASIN_SUMMARY_HEADER: &str = "sink,x,y,count,fraction";
pub const PORTRAIT_HEADER: &str = "x,y,dx,dy";
pub const CONJECTURE_HEADER: &str = "resolution,exclusion_radius,points,max_increment,argmax_x,argmax_y,seam_jump_x,seam_jump_y,diagonal_jump";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub n: usize,
    pub point: TorusPoint,
    /// `V` or `U` when the point lies in their domain.
    pub lyapunov: Option<f64>,
    pub dist_to_sink: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_trajectory<W: Write>(w: &mut W, rows: &[TrajectoryRow]) -> Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.n,
            r.point.x(),
            r.point.y(),
            opt(r.lyapunov),
            r.dist_to_sink
        )?;
    }
    Ok(())
}

pub fn write_census<W: Write>(w: &mut W, census: &[FixedPointRecord]) -> Result<()> {
    writeln!(w, "{CENSUS_HEADER}")?;
    for r in census {
        let [l1, l2] = r.eigenvalues;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.location.x(),
            r.location.y(),
            r.kind.as_str(),
            l1.re,
            l1.im,
            l2.re,
            l2.im,
            r.residual
        )?;
    }
    Ok(())
}

pub fn write_suite_report<W: Write>(w: &mut W, rep: &SuiteReport) -> Result<()> {
    writeln!(w, "{CERTIFICATE_HEADER}")?;
    for o in rep.obligations.iter().chain(rep.negative_control.iter()) {
        let c = &o.certificate;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{:.6}",
            o.id,
            c.region,
            c.target.name(),
            c.claim.symbol(),
            c.status.as_str(),
            c.boxes_proved,
            c.boxes_undecided,
            c.depth_reached,
            c.wall_time_s
        )?;
    }
    Ok(())
}

pub fn write_basin_cells<W: Write>(w: &mut W, g: &BasinGrid) -> Result<()> {
    writeln!(w, "{BASIN_CELLS_HEADER}")?;
    for j in 0..g.resolution {
        for i in 0..g.resolution {
            writeln!(w, "{},{},{}", i, j, g.label(i, j).as_string())?;
        }
    }
    Ok(())
}

/// One row per sink plus a final `unresolved` row.
pub fn write_basin_summary<W: Write>(w: &mut W, g: &BasinGrid) -> Result<()> {
    writeln!(w, "{BASIN_SUMMARY_HEADER}")?;
    let fr = g.fractions();
    for (k, (s, c)) in g.sinks.iter().zip(g.counts()).enumerate() {
        writeln!(w, "{},{},{},{},{}", k, s.x(), s.y(), c, fr[k])?;
    }
    writeln!(
        w,
        "unresolved,,,{},{}",
        g.unresolved_count(),
        g.unresolved_fraction()
    )?;
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn data_lines<R: BufRead>(r: R, header: &str) -> Result<Vec<(usize, String)>> {
    let mut lines = r.lines();
    let first = lines.next().transpose()?;
    if first.as_deref().map(str::trim_end) != Some(header) {
        return Err(parse_err(1, format!("expected header `{header}`")));
    }
    let mut out = Vec::new();
    for (k, l) in lines.enumerate() {
        let l = l?;
        if !l.trim().is_empty() {
            out.push((k + 2, l));
        }
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(line: usize, s: Option<&str>, what: &str) -> Result<T> {
    s.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

/// Reads a grid written by [`write_basin_cells`] and [`write_basin_summary`].
pub fn read_basin_grid<R1: BufRead, R2: BufRead>(cells: R1, summary: R2) -> Result<BasinGrid> {
    let mut sinks = Vec::new();
    for (ln, l) in data_lines(summary, BASIN_SUMMARY_HEADER)? {
        let mut it = l.split(',');
        let id = it.next().unwrap_or_default();
        if id == "unresolved" {
            continue;
        }
        let k: usize = field(ln, Some(id), "sink index")?;
        if k != sinks.len() {
            return Err(parse_err(ln, "sinks out of order"));
        }
        let x: f64 = field(ln, it.next(), "x")?;
        let y: f64 = field(ln, it.next(), "y")?;
        sinks.push(TorusPoint::new(x, y)?);
    }
    let rows = data_lines(cells, BASIN_CELLS_HEADER)?;
    let n = (rows.len() as f64).sqrt().round() as usize;
    if n * n != rows.len() || n == 0 {
        return Err(parse_err(0, format!("{} cells is not a square grid", rows.len())));
    }
    let mut labels = vec![None; n * n];
    for (ln, l) in rows {
        let mut it = l.split(',');
        let i: usize = field(ln, it.next(), "i")?;
        let j: usize = field(ln, it.next(), "j")?;
        let lab = it
            .next()
            .and_then(|s| Label::parse(s.trim()))
            .ok_or_else(|| parse_err(ln, "bad label"))?;
        if i >= n || j >= n {
            return Err(parse_err(ln, "cell index out of range"));
        }
        if let Label::Sink(k) = lab {
            if k >= sinks.len() {
                return Err(parse_err(ln, "unknown sink"));
            }
        }
        if labels[j * n + i].replace(lab).is_some() {
            return Err(parse_err(ln, "duplicate cell"));
        }
    }
    Ok(BasinGrid {
        resolution: n,
        sinks,
        labels: labels.into_iter().map(|l| l.expect("all cells present")).collect(),
    })
}

/// `(x, y, dx, dy)` on an `m × m` grid of cell centres, with `(dx, dy)` the
/// one-step displacement in the lift.
pub fn portrait_rows(spec: &MapSpec, m: usize) -> Vec<[f64; 4]> {
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            let p = BasinGrid::cell_center(m, i, j);
            let (dx, dy) = spec.displacement(p.x(), p.y());
            out.push([p.x(), p.y(), dx, dy]);
        }
    }
    out
}

pub fn write_portrait<W: Write>(w: &mut W, rows: &[[f64; 4]]) -> Result<()> {
    writeln!(w, "{PORTRAIT_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r[0], r[1], r[2], r[3])?;
    }
    Ok(())
}

pub fn write_conjecture<W: Write>(w: &mut W, r: &ConjectureReport) -> Result<()> {
    writeln!(w, "{CONJECTURE_HEADER}")?;
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{}",
        r.resolution,
        r.exclusion_radius,
        r.points_evaluated,
        r.max_increment,
        r.argmax.x(),
        r.argmax.y(),
        r.seam_jump_x,
        r.seam_jump_y,
        r.diagonal_jump
    )?;
    Ok(())
}

/// Indexed-colour raster; row 0 is the top of the image.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub palette: Vec<[u8; 3]>,
}

/// Colour index reserved for unresolved cells.
pub const UNRESOLVED_COLOR: u8 = 0;
/// Colour index for fixed-point markers.
pub const MARKER_COLOR: u8 = 1;

const SINK_COLORS: [[u8; 3]; 6] = [
    [66, 133, 244],
    [234, 67, 53],
    [52, 168, 83],
    [251, 188, 5],
    [142, 68, 173],
    [0, 172, 193],
];

/// Basin colours with `y` increasing upwards and single-pixel markers at
/// the given fixed points.
pub fn basin_raster(g: &BasinGrid, markers: &[TorusPoint]) -> RasterImage {
    let n = g.resolution;
    let mut palette = vec![[255, 255, 255], [0, 0, 0]];
    for k in 0..g.sinks.len() {
        palette.push(SINK_COLORS[k % SINK_COLORS.len()]);
    }
    let mut pixels = vec![UNRESOLVED_COLOR; n * n];
    for j in 0..n {
        for i in 0..n {
            let row = n - 1 - j;
            pixels[row * n + i] = match g.label(i, j) {
                Label::Sink(k) => 2 + k as u8,
                Label::Unresolved => UNRESOLVED_COLOR,
            };
        }
    }
    let h = std::f64::consts::TAU / n as f64;
    for m in markers {
        let i = ((m.x() / h).floor() as usize).min(n - 1);
        let j = ((m.y() / h).floor() as usize).min(n - 1);
        pixels[(n - 1 - j) * n + i] = MARKER_COLOR;
    }
    RasterImage {
        width: n,
        height: n,
        pixels,
        palette,
    }
}

/// Plain-text PPM (`P3`).
pub fn write_ppm<W: Write>(w: &mut W, img: &RasterImage) -> Result<()> {
    writeln!(w, "P3")?;
    writeln!(w, "{} {}", img.width, img.height)?;
    writeln!(w, "255")?;
    for row in img.pixels.chunks(img.width.max(1)) {
        let line: Vec<String> = row
            .iter()
            .map(|&c| {
                let [r, g, b] = img.palette[c as usize];
                format!("{r} {g} {b}")
            })
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basins::basin_grid;
    use std::io::Cursor;

    #[test]
    fn basin_grid_round_trips() {
        let spec = MapSpec::ring(0.1).unwrap();
        let g = basin_grid(&spec, 32, 1e-6, 100_000).unwrap();
        let mut cells = Vec::new();
        let mut summary = Vec::new();
        write_basin_cells(&mut cells, &g).unwrap();
        write_basin_summary(&mut summary, &g).unwrap();
        let back = read_basin_grid(Cursor::new(cells), Cursor::new(summary)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parser_rejects_malformed_input() {
        let summary = format!("{BASIN_SUMMARY_HEADER}\n0,1,2,3,0.5\n");
        let bad_header = "i,j\n0,0,0\n";
        assert!(read_basin_grid(Cursor::new(bad_header), Cursor::new(summary.clone())).is_err());
        let not_square = format!("{BASIN_CELLS_HEADER}\n0,0,0\n1,0,0\n");
        assert!(read_basin_grid(Cursor::new(not_square), Cursor::new(summary.clone())).is_err());
        let unknown = format!("{BASIN_CELLS_HEADER}\n0,0,7\n");
        assert!(read_basin_grid(Cursor::new(unknown), Cursor::new(summary)).is_err());
    }

    #[test]
    fn ppm_layout() {
        let img = RasterImage {
            width: 2,
            height: 1,
            pixels: vec![0, 1],
            palette: vec![[255, 255, 255], [0, 0, 0]],
        };
        let mut out = Vec::new();
        write_ppm(&mut out, &img).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "P3\n2 1\n255\n255 255 255 0 0 0\n");
    }

    #[test]
    fn tables_have_one_header_line() {
        let spec = MapSpec::ring(0.1).unwrap();
        let mut out = Vec::new();
        write_portrait(&mut out, &portrait_rows(&spec, 4)).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s.lines().next(), Some(PORTRAIT_HEADER));
        assert_eq!(s.lines().count(), 17);
    }
}
