//! Self-contained SVG plots: a bar chart for one-walker distributions and a
//! grayscale heat map for joint distributions. Everything is inline (no
//! external assets, styles, or fonts beyond a generic monospace family), and
//! all coordinates are formatted with fixed precision so output is diffable.

use walk_core::{Distribution, JointDistribution};

const FONT: &str = "font-family=\"monospace\"";

fn header(width: u32, height: u32, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"26\" text-anchor=\"middle\" {FONT} font-size=\"15\">{}</text>\n",
        width as f64 / 2.0,
        escape(title),
    )
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Step size for roughly `target` ticks over `span` units: 1, 2, or 5 times
/// a power of ten.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = (span / target).max(f64::MIN_POSITIVE);
    let power = 10f64.powf(raw.log10().floor());
    let scaled = raw / power;
    let nice = if scaled <= 1.0 {
        1.0
    } else if scaled <= 2.0 {
        2.0
    } else if scaled <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * power
}

/// Probability-by-position bar chart.
pub fn bar_chart(title: &str, dist: &Distribution) -> String {
    const W: u32 = 900;
    const H: u32 = 560;
    const LEFT: f64 = 80.0;
    const RIGHT: f64 = 876.0;
    const TOP: f64 = 48.0;
    const BOTTOM: f64 = 500.0;

    let mut svg = header(W, H, title);

    let (min_pos, max_pos) = dist
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), (i, _)| (lo.min(i), hi.max(i)));
    let (min_pos, max_pos) = if dist.is_empty() { (0, 0) } else { (min_pos, max_pos) };
    let max_p = dist.iter().map(|(_, p)| p).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);

    let slots = (max_pos - min_pos + 1) as f64;
    let slot_w = (RIGHT - LEFT) / slots;
    let bar_w = (slot_w * 0.85).min(40.0);
    let y_scale = (BOTTOM - TOP) / (max_p * 1.05);
    let x_of = |pos: i64| LEFT + ((pos - min_pos) as f64 + 0.5) * slot_w;

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{LEFT:.1}\" y1=\"{BOTTOM:.1}\" x2=\"{RIGHT:.1}\" y2=\"{BOTTOM:.1}\" \
         stroke=\"black\" stroke-width=\"1\"/>\n\
         <line x1=\"{LEFT:.1}\" y1=\"{TOP:.1}\" x2=\"{LEFT:.1}\" y2=\"{BOTTOM:.1}\" \
         stroke=\"black\" stroke-width=\"1\"/>\n"
    ));

    // Horizontal ticks at nice integers.
    let x_step = tick_step(slots, 10.0).max(1.0) as i64;
    let mut tick = min_pos.div_euclid(x_step) * x_step;
    while tick <= max_pos {
        if tick >= min_pos {
            let x = x_of(tick);
            svg.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{BOTTOM:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" \
                 stroke=\"black\" stroke-width=\"1\"/>\n\
                 <text x=\"{x:.2}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} \
                 font-size=\"12\">{tick}</text>\n",
                BOTTOM + 6.0,
                BOTTOM + 22.0,
            ));
        }
        tick += x_step;
    }

    // Vertical ticks.
    let y_tick = tick_step(max_p, 5.0);
    let mut level = 0.0;
    while level <= max_p * 1.0001 {
        let y = BOTTOM - level * y_scale;
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{LEFT:.1}\" y2=\"{y:.2}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n\
             <text x=\"{:.1}\" y=\"{:.2}\" text-anchor=\"end\" {FONT} font-size=\"12\">{}</text>\n",
            LEFT - 6.0,
            LEFT - 10.0,
            y + 4.0,
            format_level(level),
        ));
        if y_tick <= 0.0 {
            break;
        }
        level += y_tick;
    }

    // Bars.
    for (pos, p) in dist.iter() {
        let x = x_of(pos) - bar_w / 2.0;
        let h = p * y_scale;
        svg.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{bar_w:.2}\" height=\"{h:.2}\" \
             fill=\"#46688a\"/>\n",
            BOTTOM - h,
        ));
    }

    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"13\">position</text>\n\
         <text x=\"20\" y=\"{:.1}\" transform=\"rotate(-90 20 {:.1})\" text-anchor=\"middle\" \
         {FONT} font-size=\"13\">probability</text>\n</svg>\n",
        (LEFT + RIGHT) / 2.0,
        H as f64 - 12.0,
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
    ));
    svg
}

fn format_level(level: f64) -> String {
    if level == 0.0 {
        "0".to_string()
    } else if level >= 0.01 {
        format!("{level:.3}")
    } else {
        format!("{level:.2e}")
    }
}

/// Joint distribution as a grayscale heat map: darker cells carry more
/// probability, white cells carry none.
pub fn heat_map(title: &str, dist: &JointDistribution) -> String {
    const W: u32 = 760;
    const H: u32 = 800;
    const LEFT: f64 = 90.0;
    const TOP: f64 = 60.0;
    const SIDE: f64 = 620.0;

    let mut svg = header(W, H, title);

    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for ((i, j), _) in dist.iter() {
        lo = lo.min(i).min(j);
        hi = hi.max(i).max(j);
    }
    if dist.is_empty() {
        lo = 0;
        hi = 0;
    }
    let cells = (hi - lo + 1) as f64;
    let cell = SIDE / cells;
    let max_p = dist.iter().map(|(_, p)| p).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);

    svg.push_str(&format!(
        "<rect x=\"{LEFT:.1}\" y=\"{TOP:.1}\" width=\"{SIDE:.1}\" height=\"{SIDE:.1}\" \
         fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));

    for ((i, j), p) in dist.iter() {
        // x: particle 1 position rightwards, y: particle 2 position upwards.
        let x = LEFT + (i - lo) as f64 * cell;
        let y = TOP + SIDE - (j - lo + 1) as f64 * cell;
        let shade = 255.0 - (p / max_p * 255.0);
        let v = shade.round().clamp(0.0, 255.0) as u8;
        svg.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" \
             fill=\"rgb({v},{v},{v})\"/>\n"
        ));
    }

    // Corner labels and caption.
    let bottom = TOP + SIDE;
    svg.push_str(&format!(
        "<text x=\"{LEFT:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"12\">{lo}</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"12\">{hi}</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" {FONT} font-size=\"12\">{lo}</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" {FONT} font-size=\"12\">{hi}</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"13\">particle 1 position</text>\n\
         <text x=\"30\" y=\"{:.1}\" transform=\"rotate(-90 30 {:.1})\" text-anchor=\"middle\" {FONT} \
         font-size=\"13\">particle 2 position</text>\n\
         <text x=\"{LEFT:.1}\" y=\"{:.1}\" {FONT} font-size=\"12\">max P = {:.6e}</text>\n</svg>\n",
        bottom + 18.0,
        LEFT + SIDE,
        bottom + 18.0,
        LEFT - 8.0,
        bottom,
        LEFT - 8.0,
        TOP + 10.0,
        LEFT + SIDE / 2.0,
        bottom + 44.0,
        TOP + SIDE / 2.0,
        TOP + SIDE / 2.0,
        bottom + 74.0,
        max_p,
    ));
    svg
}
