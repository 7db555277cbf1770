//! Style augmentation, standalone documents, and the manifest handed to an
//! out-of-process browser that rasterizes tables and reports cell boxes.

use crate::htmlcodec::{parse_table_html, structure_to_html, EmitMode, HtmlError};
use crate::tablecore::TableStructure;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Six serif families followed by six sans-serif families.
pub const FONT_FAMILIES: [&str; 12] = [
    "Times New Roman",
    "Georgia",
    "Garamond",
    "Palatino Linotype",
    "Book Antiqua",
    "Cambria",
    "Arial",
    "Helvetica",
    "Verdana",
    "Tahoma",
    "Trebuchet MS",
    "Calibri",
];

pub const FONT_SIZE_PT: (u8, u8) = (10, 25);
pub const PADDING_PX: (u8, u8) = (2, 12);
pub const MIN_CONTRAST: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextAlign {
    Left,
    Center,
    Right,
    Justify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BorderStyle {
    Solid,
    Dashed,
    Dotted,
    Double,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineType {
    Single,
    Double,
    Hidden,
}

impl TextAlign {
    pub const ALL: [TextAlign; 4] = [TextAlign::Left, TextAlign::Center, TextAlign::Right, TextAlign::Justify];

    pub fn css(self) -> &'static str {
        match self {
            TextAlign::Left => "left",
            TextAlign::Center => "center",
            TextAlign::Right => "right",
            TextAlign::Justify => "justify",
        }
    }
}

impl BorderStyle {
    pub const ALL: [BorderStyle; 5] = [
        BorderStyle::Solid,
        BorderStyle::Dashed,
        BorderStyle::Dotted,
        BorderStyle::Double,
        BorderStyle::None,
    ];

    pub fn css(self) -> &'static str {
        match self {
            BorderStyle::Solid => "solid",
            BorderStyle::Dashed => "dashed",
            BorderStyle::Dotted => "dotted",
            BorderStyle::Double => "double",
            BorderStyle::None => "none",
        }
    }
}

impl LineType {
    pub const ALL: [LineType; 3] = [LineType::Single, LineType::Double, LineType::Hidden];

    pub fn name(self) -> &'static str {
        match self {
            LineType::Single => "single",
            LineType::Double => "double",
            LineType::Hidden => "hidden",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub fn hex(self) -> String {
        let [r, g, b] = self.0;
        format!("#{r:02x}{g:02x}{b:02x}")
    }

    /// Relative luminance in sRGB.
    pub fn luminance(self) -> f64 {
        let lin = |c: u8| {
            let c = c as f64 / 255.0;
            if c <= 0.03928 {
                c / 12.92
            } else {
                ((c + 0.055) / 1.055).powf(2.4)
            }
        };
        let [r, g, b] = self.0;
        0.2126 * lin(r) + 0.7152 * lin(g) + 0.0722 * lin(b)
    }
}

/// Contrast ratio between two colours, from 1 to 21.
pub fn contrast_ratio(a: Rgb, b: Rgb) -> f64 {
    let (la, lb) = (a.luminance(), b.luminance());
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    (hi + 0.05) / (lo + 0.05)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyleAugmentation {
    pub text_align: TextAlign,
    /// Index into [`FONT_FAMILIES`].
    pub font_family: u8,
    pub font_size_pt: u8,
    pub padding_px: u8,
    pub border_style: BorderStyle,
    pub line_type: LineType,
    pub text_color: Rgb,
    pub background_color: Rgb,
}

impl StyleAugmentation {
    pub fn font_name(&self) -> &'static str {
        FONT_FAMILIES[self.font_family as usize]
    }

    pub fn is_serif(&self) -> bool {
        self.font_family < 6
    }

    pub fn contrast(&self) -> f64 {
        contrast_ratio(self.text_color, self.background_color)
    }

    /// True when every field is inside its range and the colours contrast.
    pub fn in_range(&self) -> bool {
        (self.font_family as usize) < FONT_FAMILIES.len()
            && (FONT_SIZE_PT.0..=FONT_SIZE_PT.1).contains(&self.font_size_pt)
            && (PADDING_PX.0..=PADDING_PX.1).contains(&self.padding_px)
            && self.contrast() >= MIN_CONTRAST
    }
}

impl Default for StyleAugmentation {
    fn default() -> Self {
        StyleAugmentation {
            text_align: TextAlign::Left,
            font_family: 0,
            font_size_pt: 12,
            padding_px: 4,
            border_style: BorderStyle::Solid,
            line_type: LineType::Single,
            text_color: Rgb([0, 0, 0]),
            background_color: Rgb([255, 255, 255]),
        }
    }
}

fn pick<T: Copy>(items: &[T], rng: &mut impl Rng) -> T {
    items[rng.random_range(0..items.len())]
}

/// Samples every field uniformly; colour pairs below the contrast floor are
/// redrawn.
pub fn sample_style(rng: &mut impl Rng) -> StyleAugmentation {
    let text_align = pick(&TextAlign::ALL, rng);
    let font_family = rng.random_range(0..FONT_FAMILIES.len()) as u8;
    let font_size_pt = rng.random_range(FONT_SIZE_PT.0..=FONT_SIZE_PT.1);
    let padding_px = rng.random_range(PADDING_PX.0..=PADDING_PX.1);
    let border_style = pick(&BorderStyle::ALL, rng);
    let line_type = pick(&LineType::ALL, rng);
    let (text_color, background_color) = loop {
        let t = Rgb(rng.random());
        let b = Rgb(rng.random());
        if contrast_ratio(t, b) >= MIN_CONTRAST {
            break (t, b);
        }
    };
    StyleAugmentation {
        text_align,
        font_family,
        font_size_pt,
        padding_px,
        border_style,
        line_type,
        text_color,
        background_color,
    }
}

/// Style sheet realizing a style. `border_style` draws the outer frame;
/// `line_type` draws the inner rules (single: collapsed 1px lines, double:
/// separated cell borders, hidden: no inner rules).
pub fn style_sheet(style: &StyleAugmentation) -> String {
    let generic = if style.is_serif() { "serif" } else { "sans-serif" };
    let (collapse, rule) = match style.line_type {
        LineType::Single => ("collapse", "1px solid"),
        LineType::Double => ("separate", "1px solid"),
        LineType::Hidden => ("collapse", "1px hidden"),
    };
    let mut css = String::new();
    let _ = writeln!(
        css,
        "body {{ margin: 0; padding: 8px; background-color: {}; }}",
        style.background_color.hex()
    );
    let _ = writeln!(
        css,
        "table {{ border-collapse: {collapse}; border: 2px {} {}; font-family: \"{}\", {generic}; font-size: {}pt; color: {}; background-color: {}; }}",
        style.border_style.css(),
        style.text_color.hex(),
        style.font_name(),
        style.font_size_pt,
        style.text_color.hex(),
        style.background_color.hex(),
    );
    let _ = writeln!(
        css,
        "td, th {{ border: {rule} {}; padding: {}px 4px; text-align: {}; font-weight: normal; }}",
        style.text_color.hex(),
        style.padding_px,
        style.text_align.css(),
    );
    let _ = writeln!(css, "/* line-type: {} */", style.line_type.name());
    css
}

/// Standalone document holding the table and an embedded style sheet.
pub fn emit_document(html: &str, style: &StyleAugmentation) -> Result<String, HtmlError> {
    let doc = parse_table_html(html)?;
    let table = structure_to_html(&doc.structure, EmitMode::WithContent)?;
    let mut out = String::with_capacity(table.len() + 1024);
    out.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<style>\n");
    out.push_str(&style_sheet(style));
    out.push_str("</style>\n</head>\n<body>\n");
    out.push_str(&table);
    out.push_str("\n</body>\n</html>\n");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderConstraints {
    pub max_width_px: u32,
    pub max_height_px: u32,
    pub min_font_height_px: u32,
}

pub const RENDER_CONSTRAINTS: RenderConstraints = RenderConstraints {
    max_width_px: 3000,
    max_height_px: 5000,
    min_font_height_px: 12,
};

impl Default for RenderConstraints {
    fn default() -> Self {
        RENDER_CONSTRAINTS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderDecision {
    Keep,
    Discard,
}

pub fn check_constraints(width: u32, height: u32, min_glyph_height: u32) -> RenderDecision {
    let c = RENDER_CONSTRAINTS;
    if width > c.max_width_px || height > c.max_height_px || min_glyph_height < c.min_font_height_px {
        RenderDecision::Discard
    } else {
        RenderDecision::Keep
    }
}

/// Addresses the cell anchored at `(row, col)` in an emitted document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellLocator {
    pub row: usize,
    pub col: usize,
    pub xpath: String,
}

/// One XPath per cell: the k-th cell element of the (row+1)-th `<tr>`.
pub fn cell_locators(s: &TableStructure) -> Vec<CellLocator> {
    let mut out = Vec::with_capacity(s.cells.len());
    let mut k = 0;
    let mut prev_row = usize::MAX;
    for c in &s.cells {
        if c.anchor_row != prev_row {
            prev_row = c.anchor_row;
            k = 0;
        }
        k += 1;
        out.push(CellLocator {
            row: c.anchor_row,
            col: c.anchor_col,
            xpath: format!("(//table//tr)[{}]/*[self::td or self::th][{k}]", c.anchor_row + 1),
        });
    }
    out
}

/// Input for one manifest entry.
#[derive(Debug, Clone)]
pub struct RenderJob<'a> {
    pub id: &'a str,
    pub structure: &'a TableStructure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Paths are relative to the manifest's directory.
    pub document: String,
    pub image: String,
    pub geometry: String,
    pub locators: Vec<CellLocator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderManifest {
    pub constraints: RenderConstraints,
    pub entries: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "render_manifest.json";

pub fn document_path(id: &str) -> String {
    format!("html/{id}.html")
}

pub fn build_manifest(jobs: &[RenderJob<'_>]) -> RenderManifest {
    RenderManifest {
        constraints: RENDER_CONSTRAINTS,
        entries: jobs
            .iter()
            .map(|j| ManifestEntry {
                id: j.id.to_string(),
                document: document_path(j.id),
                image: format!("images/{}.png", j.id),
                geometry: format!("geometry/{}.jsonl", j.id),
                locators: cell_locators(j.structure),
            })
            .collect(),
    }
}

/// Writes the manifest into `out_dir` and returns its path.
pub fn render_manifest(jobs: &[RenderJob<'_>], out_dir: &Path) -> std::io::Result<PathBuf> {
    let manifest = build_manifest(jobs);
    let path = out_dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

/// One line of a renderer's geometry file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryRecord {
    pub row: usize,
    pub col: usize,
    #[serde(rename = "box")]
    pub bbox: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cell ({row},{col}): inverted box")]
    InvertedBox { row: usize, col: usize },
    #[error("cell ({row},{col}) is not a cell anchor")]
    UnknownCell { row: usize, col: usize },
    #[error("cell ({row},{col}) reported twice")]
    Duplicate { row: usize, col: usize },
    #[error("cell ({row},{col}) missing from geometry")]
    Missing { row: usize, col: usize },
    #[error("boxes of ({0},{1}) and ({2},{3}) overlap")]
    Overlap(usize, usize, usize, usize),
}

pub fn parse_geometry(text: &str) -> Result<Vec<GeometryRecord>, GeometryError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| GeometryError::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Checks renderer output against the structure: one ordered box per cell
/// anchor, with pairwise disjoint interiors.
pub fn check_geometry(records: &[GeometryRecord], s: &TableStructure) -> Result<(), GeometryError> {
    let mut seen = vec![false; s.cells.len()];
    for g in records {
        let [x0, y0, x1, y1] = g.bbox;
        if x0 > x1 || y0 > y1 {
            return Err(GeometryError::InvertedBox { row: g.row, col: g.col });
        }
        let idx = s
            .cells
            .binary_search_by(|c| (c.anchor_row, c.anchor_col).cmp(&(g.row, g.col)))
            .map_err(|_| GeometryError::UnknownCell { row: g.row, col: g.col })?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(GeometryError::Duplicate { row: g.row, col: g.col });
        }
    }
    if let Some(i) = seen.iter().position(|&v| !v) {
        let c = &s.cells[i];
        return Err(GeometryError::Missing {
            row: c.anchor_row,
            col: c.anchor_col,
        });
    }
    for (i, a) in records.iter().enumerate() {
        for b in &records[i + 1..] {
            let (p, q) = (a.bbox, b.bbox);
            if p[0] < q[2] && q[0] < p[2] && p[1] < q[3] && q[1] < p[3] {
                return Err(GeometryError::Overlap(a.row, a.col, b.row, b.col));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tablecore::{matrix_to_cells, CellMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn boundary_constraints() {
        assert_eq!(check_constraints(3000, 5000, 12), RenderDecision::Keep);
        assert_eq!(check_constraints(3001, 100, 20), RenderDecision::Discard);
        assert_eq!(check_constraints(100, 5001, 20), RenderDecision::Discard);
        assert_eq!(check_constraints(100, 100, 11), RenderDecision::Discard);
    }

    #[test]
    fn contrast_extremes() {
        assert!((contrast_ratio(Rgb([0, 0, 0]), Rgb([255, 255, 255])) - 21.0).abs() < 1e-9);
        assert_eq!(contrast_ratio(Rgb([10, 20, 30]), Rgb([10, 20, 30])), 1.0);
    }

    #[test]
    fn sampled_styles_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            assert!(sample_style(&mut rng).in_range());
        }
        let a = sample_style(&mut ChaCha8Rng::seed_from_u64(9));
        let b = sample_style(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn document_carries_style_and_table() {
        let style = sample_style(&mut ChaCha8Rng::seed_from_u64(1));
        let html = r#"<table><tr><td colspan="2">a &amp; b</td></tr><tr><td>1</td><td></td></tr></table>"#;
        let doc = emit_document(html, &style).unwrap();
        assert_eq!(doc, emit_document(html, &style).unwrap());
        assert_eq!(
            parse_table_html(&doc).unwrap().structure,
            parse_table_html(html).unwrap().structure
        );
        for needle in [
            style.text_align.css().to_string(),
            style.font_name().to_string(),
            format!("{}pt", style.font_size_pt),
            format!("{}px", style.padding_px),
            style.border_style.css().to_string(),
            style.line_type.name().to_string(),
            style.text_color.hex(),
            style.background_color.hex(),
        ] {
            assert!(doc.contains(&needle), "missing {needle}");
        }
        assert!(matches!(emit_document("<p>no table</p>", &style), Err(HtmlError::MalformedMarkup(_))));
    }

    #[test]
    fn locators_index_cells_within_rows() {
        let s = matrix_to_cells(&"CLC\nUXC".parse::<CellMatrix>().unwrap()).unwrap();
        let xs: Vec<_> = cell_locators(&s).into_iter().map(|l| l.xpath).collect();
        assert_eq!(
            xs,
            vec![
                "(//table//tr)[1]/*[self::td or self::th][1]",
                "(//table//tr)[1]/*[self::td or self::th][2]",
                "(//table//tr)[2]/*[self::td or self::th][1]",
            ]
        );
    }

    #[test]
    fn manifest_written_relative_to_out_dir() {
        let dir = tempfile::tempdir().unwrap();
        let path = render_manifest(&[], dir.path()).unwrap();
        let m: RenderManifest = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(m.entries.is_empty());
        let s = matrix_to_cells(&CellMatrix::filled(1, 2).unwrap()).unwrap();
        let jobs = [RenderJob { id: "a", structure: &s }, RenderJob { id: "b", structure: &s }];
        let m = build_manifest(&jobs);
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[1].document, "html/b.html");
        assert_eq!(dir.path().join(&m.entries[0].document), dir.path().join("html").join("a.html"));
    }

    #[test]
    fn geometry_checks() {
        let s = matrix_to_cells(&CellMatrix::filled(1, 2).unwrap()).unwrap();
        let good = parse_geometry(
            "{\"row\":0,\"col\":0,\"box\":[0,0,10,10]}\n{\"row\":0,\"col\":1,\"box\":[10,0,20,10]}\n",
        )
        .unwrap();
        assert_eq!(check_geometry(&good, &s), Ok(()));
        let mut overlap = good.clone();
        overlap[1].bbox = [5.0, 0.0, 20.0, 10.0];
        assert!(matches!(check_geometry(&overlap, &s), Err(GeometryError::Overlap(..))));
        assert!(matches!(check_geometry(&good[..1], &s), Err(GeometryError::Missing { row: 0, col: 1 })));
        let mut inverted = good.clone();
        inverted[0].bbox = [10.0, 0.0, 0.0, 10.0];
        assert!(matches!(check_geometry(&inverted, &s), Err(GeometryError::InvertedBox { .. })));
        assert!(parse_geometry("{oops").is_err());
    }
}
