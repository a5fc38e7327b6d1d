use super::table::Table;
use crate::error::{Error, Result};
use std::fmt::Write;

/// What to draw from a table.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    /// Columns drawn as lines.
    pub y: Vec<String>,
    /// Columns drawn as points with `<name>_se` error bars. A prefix such as
    /// `sim_l1` expands to its `_te` and `_ge` columns.
    pub errbars: Vec<String>,
    /// Heatmap mode: color `z` over the (x, y[0]) grid.
    pub z: Option<String>,
    pub log_x: bool,
    pub log_y: bool,
    pub log_z: bool,
    pub title: Option<String>,
    pub width: f64,
    pub height: f64,
}

impl PlotSpec {
    pub fn new(x: &str, y: &[&str]) -> Self {
        Self {
            x: x.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            errbars: Vec::new(),
            z: None,
            log_x: false,
            log_y: false,
            log_z: false,
            title: None,
            width: 720.0,
            height: 480.0,
        }
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const LEFT: f64 = 72.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Clone, Copy, Debug)]
struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    /// Pixel positions of `lo` and `hi`.
    from: f64,
    to: f64,
}

impl Scale {
    fn fit(values: impl Iterator<Item = f64>, log: bool, from: f64, to: f64) -> Self {
        let valid: Vec<f64> = values
            .filter(|v| v.is_finite() && (!log || *v > 0.0))
            .map(|v| if log { v.log10() } else { v })
            .collect();
        let (mut lo, mut hi) = valid
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        if valid.is_empty() {
            (lo, hi) = (0.0, 1.0);
        } else if hi - lo <= 1e-12 * lo.abs().max(1.0) {
            let pad = if log { 0.3 } else { 0.5 * lo.abs().max(1.0) };
            (lo, hi) = (lo - pad, hi + pad);
        } else {
            let pad = 0.04 * (hi - lo);
            (lo, hi) = (lo - pad, hi + pad);
        }
        Self { lo, hi, log, from, to }
    }

    fn accepts(&self, v: f64) -> bool {
        v.is_finite() && (!self.log || v > 0.0)
    }

    fn map(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        self.from + (t - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    /// Pixel position clamped to the axis range.
    fn map_clamped(&self, v: f64) -> f64 {
        if !self.accepts(v) {
            return self.from;
        }
        let (a, b) = (self.from.min(self.to), self.from.max(self.to));
        self.map(v).clamp(a, b)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let step = ((b - a) / 8 + 1).max(1);
            let decades: Vec<(f64, String)> = (a..=b)
                .filter(|k| (k - a) % step == 0)
                .map(|k| (10f64.powi(k), decade_label(k)))
                .collect();
            if decades.len() >= 2 {
                return decades;
            }
            return [self.lo, self.hi]
                .iter()
                .map(|t| {
                    let v = 10f64.powf(*t);
                    (v, format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string())
                })
                .collect();
        }
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|f| f * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last)
            .map(|k| {
                let v = k as f64 * step;
                let v = if v == 0.0 { 0.0 } else { v };
                (v, format!("{v:.decimals$}"))
            })
            .collect()
    }
}

fn decade_label(k: i32) -> String {
    if (-2..=3).contains(&k) {
        let v = 10f64.powi(k);
        format!("{v}")
    } else {
        format!("1e{k}")
    }
}

/// Errorbar column pairs named by `spec.errbars`.
fn errbar_columns(table: &Table, spec: &PlotSpec) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for name in &spec.errbars {
        let se = format!("{name}_se");
        if table.has_column(name) {
            table.column_index(&se)?;
            out.push((name.clone(), se));
            continue;
        }
        let expanded: Vec<(String, String)> = ["te", "ge"]
            .iter()
            .map(|q| (format!("{name}_{q}"), format!("{name}_{q}_se")))
            .filter(|(v, s)| table.has_column(v) && table.has_column(s))
            .collect();
        if expanded.is_empty() {
            return Err(Error::MissingColumn(name.clone()));
        }
        out.extend(expanded);
    }
    Ok(out)
}

/// Viridis-like ramp on [0, 1].
fn color(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + f * (y - x)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        let _ = writeln!(
            self.out,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, body: &str) {
        let _ = writeln!(
            self.out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="12">{}</text>"#,
            escape(body)
        );
    }
}

/// Renders a static SVG. Output depends only on the table and the plot options.
/// Non-finite values (and non-positive ones on log axes) are not drawn and
/// break lines.
pub fn render_svg(table: &Table, spec: &PlotSpec) -> Result<String> {
    let x = table.numeric(&spec.x)?;
    let ys: Vec<(String, Vec<f64>)> = spec
        .y
        .iter()
        .map(|c| Ok((c.clone(), table.numeric(c)?)))
        .collect::<Result<_>>()?;
    let bars = errbar_columns(table, spec)?;
    let bar_data: Vec<(String, Vec<f64>, Vec<f64>)> = bars
        .iter()
        .map(|(v, s)| Ok((v.clone(), table.numeric(v)?, table.numeric(s)?)))
        .collect::<Result<_>>()?;
    let z = spec.z.as_ref().map(|c| table.numeric(c)).transpose()?;
    if z.is_some() && ys.is_empty() {
        return Err(Error::Usage("heatmap needs a y column".into()));
    }

    let (w, h) = (spec.width, spec.height);
    let (px0, px1, py0, py1) = (LEFT, w - RIGHT, h - BOTTOM, TOP);
    let sx = Scale::fit(x.iter().copied(), spec.log_x, px0, px1);
    let mut y_values: Vec<f64> = ys.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    if z.is_none() {
        for (_, v, s) in &bar_data {
            for (a, b) in v.iter().zip(s) {
                y_values.push(*a);
                if b.is_finite() {
                    y_values.push(a + b);
                    y_values.push(a - b);
                }
            }
        }
    }
    let sy = Scale::fit(y_values.into_iter(), spec.log_y, py0, py1);

    let mut c = Canvas { out: String::new() };
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(c.out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    if let Some(title) = &spec.title {
        c.text((px0 + px1) / 2.0, 24.0, "middle", title);
    }

    if let Some(z) = &z {
        heatmap(&mut c, table, spec, &x, &ys[0].1, z, sx, sy)?;
    } else {
        for (k, (name, y)) in ys.iter().enumerate() {
            series(&mut c, table, spec, name, &x, y, PALETTE[k % PALETTE.len()], sx, sy)?;
        }
        for (k, (name, v, s)) in bar_data.iter().enumerate() {
            let colour = PALETTE[(ys.len() + k) % PALETTE.len()];
            errbars(&mut c, table, spec, name, &x, v, s, colour, sx, sy)?;
        }
    }

    // axes, ticks and labels
    let axis = r##"stroke="#000000" stroke-width="1""##;
    c.line(px0, py0, px1, py0, axis);
    c.line(px0, py0, px0, py1, axis);
    for (v, label) in sx.ticks() {
        let p = sx.map(v);
        c.line(p, py0, p, py0 + 5.0, axis);
        c.text(p, py0 + 18.0, "middle", &label);
    }
    for (v, label) in sy.ticks() {
        let p = sy.map(v);
        c.line(px0 - 5.0, p, px0, p, axis);
        c.text(px0 - 8.0, p + 4.0, "end", &label);
    }
    c.text((px0 + px1) / 2.0, h - 12.0, "middle", &spec.x);
    if z.is_some() || ys.len() == 1 {
        let _ = writeln!(
            c.out,
            r#"<text x="16" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (py0 + py1) / 2.0,
            (py0 + py1) / 2.0,
            escape(&ys[0].0)
        );
    }
    if z.is_none() {
        let names: Vec<&str> = ys
            .iter()
            .map(|(n, _)| n.as_str())
            .chain(bar_data.iter().map(|(n, _, _)| n.as_str()))
            .collect();
        for (k, name) in names.iter().enumerate() {
            let ly = py1 + 10.0 + 18.0 * k as f64;
            let style = format!(r#"stroke="{}" stroke-width="2""#, PALETTE[k % PALETTE.len()]);
            c.line(px1 + 12.0, ly, px1 + 36.0, ly, &style);
            c.text(px1 + 42.0, ly + 4.0, "start", name);
        }
    }
    c.out.push_str("</svg>\n");
    Ok(c.out)
}

fn point_title(table: &Table, spec: &PlotSpec, row: usize, cols: &[&str]) -> Result<String> {
    let mut parts = vec![format!("{}={}", spec.x, table.printed(row, &spec.x)?)];
    for col in cols {
        parts.push(format!("{col}={}", table.printed(row, col)?));
    }
    Ok(escape(&parts.join(", ")))
}

#[allow(clippy::too_many_arguments)]
fn series(
    c: &mut Canvas,
    table: &Table,
    spec: &PlotSpec,
    name: &str,
    x: &[f64],
    y: &[f64],
    colour: &str,
    sx: Scale,
    sy: Scale,
) -> Result<()> {
    let _ = writeln!(c.out, r#"<g class="series" data-column="{}">"#, escape(name));
    let mut run: Vec<(f64, f64)> = Vec::new();
    let flush = |run: &mut Vec<(f64, f64)>, out: &mut String| {
        if run.len() >= 2 {
            let pts: Vec<String> = run.iter().map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        run.clear();
    };
    for (row, (&xv, &yv)) in x.iter().zip(y).enumerate() {
        if sx.accepts(xv) && sy.accepts(yv) {
            run.push((sx.map(xv), sy.map(yv)));
        } else {
            flush(&mut run, &mut c.out);
        }
        if sx.accepts(xv) && sy.accepts(yv) {
            let _ = writeln!(
                c.out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{colour}"><title>{}</title></circle>"#,
                sx.map(xv),
                sy.map(yv),
                point_title(table, spec, row, &[name])?
            );
        }
    }
    flush(&mut run, &mut c.out);
    c.out.push_str("</g>\n");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn errbars(
    c: &mut Canvas,
    table: &Table,
    spec: &PlotSpec,
    name: &str,
    x: &[f64],
    v: &[f64],
    se: &[f64],
    colour: &str,
    sx: Scale,
    sy: Scale,
) -> Result<()> {
    let _ = writeln!(c.out, r#"<g class="errbars" data-column="{}">"#, escape(name));
    let se_name = format!("{name}_se");
    let style = format!(r#"stroke="{colour}" stroke-width="1""#);
    for (row, ((&xv, &yv), &s)) in x.iter().zip(v).zip(se).enumerate() {
        if !(sx.accepts(xv) && sy.accepts(yv)) {
            continue;
        }
        let (px, py) = (sx.map(xv), sy.map(yv));
        if s.is_finite() && s > 0.0 {
            let hi = sy.map_clamped(yv + s);
            let lo = if sy.accepts(yv - s) { sy.map_clamped(yv - s) } else { sy.from };
            c.line(px, lo, px, hi, &style);
            c.line(px - 3.0, lo, px + 3.0, lo, &style);
            c.line(px - 3.0, hi, px + 3.0, hi, &style);
        }
        let _ = writeln!(
            c.out,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="none" stroke="{colour}"><title>{}</title></circle>"#,
            point_title(table, spec, row, &[name, &se_name])?
        );
    }
    c.out.push_str("</g>\n");
    Ok(())
}

/// Cell edges around sorted distinct pixel centers.
fn edges(centers: &[f64]) -> Vec<f64> {
    let n = centers.len();
    if n == 1 {
        return vec![centers[0] - 10.0, centers[0] + 10.0];
    }
    let mut e = Vec::with_capacity(n + 1);
    e.push(centers[0] - (centers[1] - centers[0]) / 2.0);
    for w in centers.windows(2) {
        e.push((w[0] + w[1]) / 2.0);
    }
    e.push(centers[n - 1] + (centers[n - 1] - centers[n - 2]) / 2.0);
    e
}

fn distinct(values: &[f64], scale: Scale) -> Vec<f64> {
    let mut d: Vec<f64> = values.iter().copied().filter(|v| scale.accepts(*v)).collect();
    d.sort_by(f64::total_cmp);
    d.dedup();
    d
}

#[allow(clippy::too_many_arguments)]
fn heatmap(
    c: &mut Canvas,
    table: &Table,
    spec: &PlotSpec,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    sx: Scale,
    sy: Scale,
) -> Result<()> {
    let zname = spec.z.as_deref().unwrap_or_default();
    let xs = distinct(x, sx);
    let ys = distinct(y, sy);
    let xe = edges(&xs.iter().map(|v| sx.map(*v)).collect::<Vec<_>>());
    let ye = edges(&ys.iter().map(|v| sy.map(*v)).collect::<Vec<_>>());
    let zok = |v: f64| v.is_finite() && (!spec.log_z || v > 0.0);
    let zt = |v: f64| if spec.log_z { v.log10() } else { v };
    let (zlo, zhi) = z
        .iter()
        .filter(|v| zok(**v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(zt(*v)), b.max(zt(*v))));
    let span = if zhi > zlo { zhi - zlo } else { 1.0 };
    let _ = writeln!(c.out, r#"<g class="heatmap" data-column="{}">"#, escape(zname));
    for row in 0..x.len() {
        let (xv, yv, zv) = (x[row], y[row], z[row]);
        if !(sx.accepts(xv) && sy.accepts(yv) && zok(zv)) {
            continue;
        }
        let i = xs.partition_point(|v| *v < xv);
        let j = ys.partition_point(|v| *v < yv);
        let (x0, x1) = (xe[i].min(xe[i + 1]), xe[i].max(xe[i + 1]));
        let (y0, y1) = (ye[j].min(ye[j + 1]), ye[j].max(ye[j + 1]));
        let _ = writeln!(
            c.out,
            r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{}</title></rect>"#,
            x1 - x0,
            y1 - y0,
            color((zt(zv) - zlo) / span),
            point_title(table, spec, row, &[&spec.y[0], zname])?
        );
    }
    c.out.push_str("</g>\n");
    // color bar
    let (bx, top, bottom) = (spec.width - RIGHT + 24.0, TOP, spec.height - BOTTOM);
    let steps = 32;
    for k in 0..steps {
        let t0 = k as f64 / steps as f64;
        let ya = bottom - (bottom - top) * (k + 1) as f64 / steps as f64;
        let _ = writeln!(
            c.out,
            r#"<rect x="{bx:.2}" y="{ya:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            (bottom - top) / steps as f64,
            color(t0 + 0.5 / steps as f64)
        );
    }
    if zlo.is_finite() {
        let label = |t: f64| {
            let v = if spec.log_z { 10f64.powf(t) } else { t };
            format!("{v:.3e}")
        };
        c.text(bx + 20.0, bottom, "start", &label(zlo));
        c.text(bx + 20.0, top + 10.0, "start", &label(zhi));
    }
    c.text(bx, top - 8.0, "start", zname);
    Ok(())
}
