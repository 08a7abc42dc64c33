//! Deterministic diagram rendering: upper points on top, lower points on
//! the bottom, noncrossing combs for blocks, colors printed as labels.

use ncpart::{ColoredPartition, Row};

const COL_W: usize = 6;

fn col_x(index: usize) -> usize {
    (index - 1) * COL_W + 2
}

struct BlockGeom {
    upper_cols: Vec<usize>,
    lower_cols: Vec<usize>,
    label: String,
    /// 0-based drawing level within its band
    level: usize,
    kind: BlockKind,
}

#[derive(PartialEq, Clone, Copy)]
enum BlockKind {
    Upper,
    Lower,
    Through,
}

/// Nesting depth of single-layer blocks within one row: nested blocks draw
/// closer to their point row than the blocks containing them.
fn layout(cp: &ColoredPartition) -> (Vec<BlockGeom>, usize, usize, usize) {
    let part = cp.partition();
    let lambda = cp.lambda();
    let blocks = part.blocks();
    let mut geoms = Vec::with_capacity(blocks.len());
    let interval = |b: &ncpart::Block, row: Row| -> Option<(usize, usize)> {
        match row {
            Row::Upper => Some((b.min_upper()?, b.max_upper()?)),
            Row::Lower => Some((b.min_lower()?, b.max_lower()?)),
        }
    };
    let depth_of = |idx: usize, row: Row| -> usize {
        let (lo, hi) = interval(&blocks[idx], row).unwrap();
        blocks
            .iter()
            .enumerate()
            .filter(|(j, other)| {
                *j != idx
                    && other.single_row() == Some(row)
                    && interval(other, row).is_some_and(|(olo, ohi)| olo < lo && hi < ohi)
            })
            .count()
    };
    let mut upper_depth_max = 0usize;
    let mut lower_depth_max = 0usize;
    let mut through_count = 0usize;
    for (i, b) in blocks.iter().enumerate() {
        let label = lambda.name(cp.block_color(i)).to_string();
        let upper_cols: Vec<usize> = b.upper().iter().map(|&i| col_x(i)).collect();
        let lower_cols: Vec<usize> = b.lower().iter().map(|&i| col_x(i)).collect();
        let (kind, level) = match b.single_row() {
            Some(Row::Upper) => {
                let d = depth_of(i, Row::Upper);
                upper_depth_max = upper_depth_max.max(d);
                (BlockKind::Upper, d)
            }
            Some(Row::Lower) => {
                let d = depth_of(i, Row::Lower);
                lower_depth_max = lower_depth_max.max(d);
                (BlockKind::Lower, d)
            }
            None => {
                through_count += 1;
                (BlockKind::Through, through_count - 1)
            }
        };
        geoms.push(BlockGeom { upper_cols, lower_cols, label, level, kind });
    }
    (geoms, upper_depth_max, lower_depth_max, through_count)
}

pub fn render_ascii(cp: &ColoredPartition) -> String {
    let part = cp.partition();
    let gamma = cp.gamma();
    let (k, l) = (part.k(), part.l());
    if k == 0 && l == 0 {
        return "(empty diagram)\n".to_string();
    }
    let (geoms, ud, ld, nt) = layout(cp);
    let upper_band = if geoms.iter().any(|g| g.kind == BlockKind::Upper) { ud + 1 } else { 0 };
    let lower_band = if geoms.iter().any(|g| g.kind == BlockKind::Lower) { ld + 1 } else { 0 };
    let through_band = nt.max(usize::from(k > 0 && l > 0));
    // rows: upper labels, upper points, upper band, through band, lower band,
    // lower points, lower labels
    let y_upper_pts = 1usize;
    let y_upper_band = 2;
    let y_through = y_upper_band + upper_band;
    let y_lower_band = y_through + through_band;
    let y_lower_pts = y_lower_band + lower_band;
    let y_lower_lbl = y_lower_pts + 1;
    let height = y_lower_lbl + 1;
    let width = col_x(k.max(l).max(1)) + COL_W + 10;
    let mut canvas = vec![vec![b' '; width]; height];

    let put = |canvas: &mut Vec<Vec<u8>>, y: usize, x: usize, c: u8| {
        if y < canvas.len() && x < canvas[y].len() {
            canvas[y][x] = c;
        }
    };
    let text = |canvas: &mut Vec<Vec<u8>>, y: usize, x: usize, s: &str| {
        for (i, ch) in s.bytes().enumerate() {
            put(canvas, y, x + i, ch);
        }
    };

    // point rows and labels
    for i in 1..=k {
        put(&mut canvas, y_upper_pts, col_x(i), b'o');
        let lbl = gamma.display(&cp.upper_colors()[i - 1]);
        text(&mut canvas, 0, col_x(i), &lbl);
    }
    for j in 1..=l {
        put(&mut canvas, y_lower_pts, col_x(j), b'o');
        let lbl = gamma.display(&cp.lower_colors()[j - 1]);
        text(&mut canvas, y_lower_lbl, col_x(j), &lbl);
    }

    // horizontals first, then stems pass over them
    for g in &geoms {
        let cols: Vec<usize> = g.upper_cols.iter().chain(&g.lower_cols).copied().collect();
        let (lo, hi) = (*cols.iter().min().unwrap(), *cols.iter().max().unwrap());
        let y = match g.kind {
            BlockKind::Upper => y_upper_band + (ud - g.level),
            BlockKind::Lower => y_lower_band + g.level,
            BlockKind::Through => y_through + g.level,
        };
        for x in lo..=hi {
            put(&mut canvas, y, x, b'-');
        }
        text(&mut canvas, y, hi + 2, &format!("({})", g.label));
    }
    for g in &geoms {
        let cols: Vec<usize> = g.upper_cols.iter().chain(&g.lower_cols).copied().collect();
        let (lo, hi) = (*cols.iter().min().unwrap(), *cols.iter().max().unwrap());
        let y = match g.kind {
            BlockKind::Upper => y_upper_band + (ud - g.level),
            BlockKind::Lower => y_lower_band + g.level,
            BlockKind::Through => y_through + g.level,
        };
        for &x in &g.upper_cols {
            for yy in y_upper_pts + 1..y {
                put(&mut canvas, yy, x, b'|');
            }
        }
        for &x in &g.lower_cols {
            for yy in y + 1..y_lower_pts {
                put(&mut canvas, yy, x, b'|');
            }
        }
        for x in [lo, hi] {
            if cols.contains(&x) {
                put(&mut canvas, y, x, b'+');
            }
        }
        for &x in &cols {
            put(&mut canvas, y, x, b'+');
        }
    }

    let mut out = String::new();
    for row in canvas {
        let line = String::from_utf8_lossy(&row);
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_svg(cp: &ColoredPartition) -> String {
    let part = cp.partition();
    let gamma = cp.gamma();
    let (k, l) = (part.k(), part.l());
    let (geoms, ud, ld, nt) = layout(cp);
    let scale = 14.0;
    let y_top = 30.0;
    let band = 18.0;
    let y_through0 = y_top + (ud as f64 + 1.0) * band + 10.0;
    let y_bottom = y_through0 + (nt.max(1) as f64) * band + (ld as f64 + 1.0) * band + 10.0;
    let width = (col_x(k.max(l).max(1)) + COL_W + 14) as f64 * scale / 6.0 + 80.0;
    let height = y_bottom + 30.0;
    let px = |c: usize| c as f64 * scale / 6.0 * 4.0 + 20.0;

    let mut body = String::new();
    for i in 1..=k {
        let x = px(col_x(i));
        body.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y_top:.1}\" r=\"3\" fill=\"black\"/>\n\
             <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
            y_top - 10.0,
            xml_escape(&gamma.display(&cp.upper_colors()[i - 1]))
        ));
    }
    for j in 1..=l {
        let x = px(col_x(j));
        body.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y_bottom:.1}\" r=\"3\" fill=\"black\"/>\n\
             <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
            y_bottom + 16.0,
            xml_escape(&gamma.display(&cp.lower_colors()[j - 1]))
        ));
    }
    for g in &geoms {
        let y = match g.kind {
            BlockKind::Upper => y_top + (ud - g.level + 1) as f64 * band,
            BlockKind::Lower => y_bottom - (ld - g.level + 1) as f64 * band,
            BlockKind::Through => y_through0 + g.level as f64 * band,
        };
        let cols: Vec<usize> = g.upper_cols.iter().chain(&g.lower_cols).copied().collect();
        let (lo, hi) = (*cols.iter().min().unwrap(), *cols.iter().max().unwrap());
        body.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
            px(lo),
            px(hi)
        ));
        for &x in &g.upper_cols {
            body.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{y_top:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
                px(x),
                px(x)
            ));
        }
        for &x in &g.lower_cols {
            body.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y_bottom:.1}\" stroke=\"black\"/>\n",
                px(x),
                px(x)
            ));
        }
        body.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" fill=\"darkred\">{}</text>\n",
            px(hi) + 6.0,
            y - 3.0,
            xml_escape(&g.label)
        ));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
