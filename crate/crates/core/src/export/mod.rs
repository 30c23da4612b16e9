//! File formats: trajectory CSV and SVG plots.

mod csv;
mod svg;

pub use self::csv::{export_csv, format_float, read_csv, write_csv};
pub use self::svg::{
    export_svg, isometric, render_svg, PlotStyle, Series, CANVAS_HEIGHT, CANVAS_WIDTH, COLORS,
};
