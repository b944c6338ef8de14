//! Deterministic SVG rendering for planar inputs: colored point sets,
//! colored line arrangements, straight red/blue arrangements, and
//! polyline realizations. All geometry stays rational until the final
//! digit formatting, so the output bytes are a function of the input
//! bytes and flags alone.

use std::path::Path;

use alphacut::allowable::{Color, LineArrangement2D};
use alphacut::arrangement::x_alpha_bruteforce;
use alphacut::cut::{find_alpha_cut, AlphaVector, PreconditionPolicy};
use alphacut::geometry::{Hyperplane, Point};
use alphacut::level::k_level;
use alphacut::pseudoline::PolylineArrangement;
use alphacut::rational::{rat_i, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{command_error, CliError};
use crate::files::{self, InstanceFile, LinesFile};

/// Significant digits kept when rationals are rendered as decimals.
/// Display-only rounding: every coordinate that reaches this point was
/// computed exactly.
const SIG_DIGITS: u32 = 12;

const CLASS_COLORS: [&str; 2] = ["#b23030", "#3057b2"];
const OVERLAY_COLOR: &str = "#202020";

/// Formats a rational as a decimal with `sig` significant digits,
/// round half away from zero, trailing zeros trimmed.
pub fn decimal(r: &Rational, sig: u32) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if r.is_zero() {
        return "0".to_string();
    }
    let a = r.numer().abs();
    let b = r.denom().abs();
    // Exponent e with 10^e <= |r| < 10^(e+1), first estimated from the
    // digit counts and then corrected by at most one exact comparison
    // in each direction.
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    let at_least = |k: i64| {
        let lhs = &a * pow10((-k).max(0) as u32);
        let rhs = &b * pow10(k.max(0) as u32);
        lhs >= rhs
    };
    while at_least(e + 1) {
        e += 1;
    }
    while !at_least(e) {
        e -= 1;
    }
    // scaled = round(|r| * 10^(sig-1-e)), a sig-digit integer.
    let p = i64::from(sig) - 1 - e;
    let (num, den) = if p >= 0 {
        (&a * pow10(p as u32), b.clone())
    } else {
        (a.clone(), &b * pow10((-p) as u32))
    };
    let (q, rem) = num_integer::Integer::div_rem(&num, &den);
    let mut scaled = if &rem * BigInt::from(2) >= den {
        q + BigInt::one()
    } else {
        q
    };
    if scaled == pow10(sig) {
        // Rounded up to the next power of ten: renormalize.
        scaled = pow10(sig - 1);
        e += 1;
    }
    let digits = scaled.to_string();
    debug_assert_eq!(digits.len(), sig as usize);
    let mut body = if e >= i64::from(sig) - 1 {
        let mut s = digits;
        s.push_str(&"0".repeat((e - i64::from(sig) + 1) as usize));
        s
    } else if e >= 0 {
        let split = (e + 1) as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
    };
    if body.contains('.') {
        while body.ends_with('0') {
            body.pop();
        }
        if body.ends_with('.') {
            body.pop();
        }
    }
    if r.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

fn dec(r: &Rational) -> String {
    decimal(r, SIG_DIGITS)
}

/// The drawing frame: an exact rational bounding box, already padded,
/// with the y axis flipped at emission time (SVG y grows downward).
struct Canvas {
    min_x: Rational,
    max_x: Rational,
    min_y: Rational,
    max_y: Rational,
    span: Rational,
}

impl Canvas {
    /// Bounding box of the seed points, padded on every side by a tenth
    /// of the larger extent (a fixed box around degenerate seeds).
    fn around(seeds: &[(Rational, Rational)]) -> Canvas {
        let (mut min_x, mut max_x, mut min_y, mut max_y) = if let Some((x, y)) = seeds.first() {
            (x.clone(), x.clone(), y.clone(), y.clone())
        } else {
            (-rat_i(1), rat_i(1), -rat_i(1), rat_i(1))
        };
        for (x, y) in seeds {
            if x < &min_x {
                min_x = x.clone();
            }
            if x > &max_x {
                max_x = x.clone();
            }
            if y < &min_y {
                min_y = y.clone();
            }
            if y > &max_y {
                max_y = y.clone();
            }
        }
        let mut span = (&max_x - &min_x).max(&max_y - &min_y);
        if span.is_zero() {
            span = rat_i(2);
        }
        let pad = &span / rat_i(10);
        min_x -= &pad;
        max_x += &pad;
        min_y -= &pad;
        max_y += &pad;
        let span = (&max_x - &min_x).max(&max_y - &min_y);
        Canvas {
            min_x,
            max_x,
            min_y,
            max_y,
            span,
        }
    }

    fn flip(&self, y: &Rational) -> Rational {
        &self.min_y + &self.max_y - y
    }

    fn view_box(&self) -> String {
        format!(
            "{} {} {} {}",
            dec(&self.min_x),
            dec(&self.min_y),
            dec(&(&self.max_x - &self.min_x)),
            dec(&(&self.max_y - &self.min_y)),
        )
    }

    fn stroke(&self) -> Rational {
        &self.span / rat_i(250)
    }

    fn point_radius(&self) -> Rational {
        &self.span / rat_i(80)
    }

    fn contains(&self, x: &Rational, y: &Rational) -> bool {
        &self.min_x <= x && x <= &self.max_x && &self.min_y <= y && y <= &self.max_y
    }

    /// Clips an up-to-orientation line `normal . q = offset` to the
    /// frame; None when the line misses it.
    fn clip_line(&self, h: &Hyperplane) -> Option<((Rational, Rational), (Rational, Rational))> {
        let w0 = &h.normal()[0];
        let w1 = &h.normal()[1];
        let c = h.offset();
        let mut hits: Vec<(Rational, Rational)> = Vec::new();
        if !w1.is_zero() {
            for x in [&self.min_x, &self.max_x] {
                let y = (c - w0 * x) / w1;
                if &self.min_y <= &y && &y <= &self.max_y {
                    hits.push((x.clone(), y));
                }
            }
        }
        if !w0.is_zero() {
            for y in [&self.min_y, &self.max_y] {
                let x = (c - w1 * y) / w0;
                if &self.min_x <= &x && &x <= &self.max_x {
                    hits.push((x, y.clone()));
                }
            }
        }
        hits.sort();
        hits.dedup();
        if hits.len() >= 2 {
            let last = hits.pop().expect("nonempty");
            let first = hits.swap_remove(0);
            Some((first, last))
        } else {
            None
        }
    }
}

/// One SVG document under construction. Elements are emitted in a
/// fixed order with fixed attribute order.
struct Svg {
    canvas: Canvas,
    body: Vec<String>,
}

impl Svg {
    fn new(canvas: Canvas) -> Svg {
        Svg {
            canvas,
            body: Vec::new(),
        }
    }

    fn line(&mut self, h: &Hyperplane, color: &str, width: &Rational, dashed: bool) -> bool {
        match self.canvas.clip_line(h) {
            Some(((x1, y1), (x2, y2))) => {
                let dash = if dashed {
                    let on = &self.canvas.span / rat_i(40);
                    let off = &self.canvas.span / rat_i(80);
                    format!(" stroke-dasharray=\"{} {}\"", dec(&on), dec(&off))
                } else {
                    String::new()
                };
                self.body.push(format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{} />",
                    dec(&x1),
                    dec(&self.canvas.flip(&y1)),
                    dec(&x2),
                    dec(&self.canvas.flip(&y2)),
                    color,
                    dec(width),
                    dash,
                ));
                true
            }
            None => false,
        }
    }

    fn polyline(&mut self, pts: &[(Rational, Rational)], color: &str, width: &Rational) {
        let coords = pts
            .iter()
            .map(|(x, y)| format!("{},{}", dec(x), dec(&self.canvas.flip(y))))
            .collect::<Vec<_>>()
            .join(" ");
        self.body.push(format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" />",
            coords,
            color,
            dec(width),
        ));
    }

    fn dot(&mut self, x: &Rational, y: &Rational, color: &str) {
        self.body.push(format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" />",
            dec(x),
            dec(&self.canvas.flip(y)),
            dec(&self.canvas.point_radius()),
            color,
        ));
    }

    fn ring(&mut self, x: &Rational, y: &Rational) {
        let r = &self.canvas.point_radius() * rat_i(2);
        self.body.push(format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" />",
            dec(x),
            dec(&self.canvas.flip(y)),
            dec(&r),
            OVERLAY_COLOR,
            dec(&self.canvas.stroke()),
        ));
    }

    fn finish(self) -> String {
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{}\">\n",
            self.canvas.view_box()
        );
        for element in &self.body {
            out.push_str(element);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}

fn class_color(i: usize) -> &'static str {
    CLASS_COLORS[i % CLASS_COLORS.len()]
}

/// What a plot input file turned out to contain.
enum Plottable {
    Instance(InstanceFile),
    Lines(LinesFile),
    Straight(LineArrangement2D),
    Poly(PolylineArrangement),
}

fn sniff(value: &serde_json::Value) -> Result<Plottable, String> {
    if let Ok(instance) = files::extract::<InstanceFile>(value, &[&["instance"]]) {
        return Ok(Plottable::Instance(instance));
    }
    if let Ok(lines) = files::extract::<LinesFile>(value, &[&["lines"]]) {
        return Ok(Plottable::Lines(lines));
    }
    if let Ok(arr) = files::extract::<LineArrangement2D>(
        value,
        &[
            &["arrangement"],
            &["realization"],
            &["extraction", "arrangement"],
        ],
    ) {
        return Ok(Plottable::Straight(arr));
    }
    if let Ok(poly) = files::extract::<PolylineArrangement>(value, &[&["realization"]]) {
        return Ok(Plottable::Poly(poly));
    }
    Err("not a point instance, line file, straight arrangement, or polyline arrangement \
         (tried each form at the top level and inside report results)"
        .to_string())
}

/// Renders one input file to SVG. Returns the document, the summary
/// lines for stderr, and the digest of the input bytes.
pub fn plot_file(
    path: &Path,
    alpha: Option<&[usize]>,
    trust: bool,
) -> Result<(String, Vec<String>, String), CliError> {
    let loaded = files::read_value(path)?;
    let plottable = sniff(&loaded.value).map_err(|message| CliError::Parse {
        path: path.display().to_string(),
        message,
    })?;
    let (svg, summary) = match plottable {
        Plottable::Instance(instance) => plot_instance(&instance, alpha, trust)?,
        Plottable::Lines(lines) => plot_lines(&lines, alpha)?,
        Plottable::Straight(arr) => plot_straight(&arr),
        Plottable::Poly(poly) => plot_poly(&poly),
    };
    Ok((svg, summary, loaded.digest))
}

fn xy(p: &Point) -> (Rational, Rational) {
    (p.coords[0].clone(), p.coords[1].clone())
}

fn plot_instance(
    instance: &InstanceFile,
    alpha: Option<&[usize]>,
    trust: bool,
) -> Result<(String, Vec<String>), CliError> {
    if instance.dimension != 2 {
        return Err(CliError::NotPlottable {
            dimension: instance.dimension,
        });
    }
    let seeds: Vec<(Rational, Rational)> = instance
        .classes
        .iter()
        .flatten()
        .map(xy)
        .collect();
    let mut svg = Svg::new(Canvas::around(&seeds));
    let mut summary = vec![format!(
        "plotted {} points in {} classes",
        seeds.len(),
        instance.classes.len()
    )];
    if let Some(alpha) = alpha {
        let points = instance.to_points()?;
        let vector = AlphaVector::new(alpha.to_vec());
        let policy = if trust {
            PreconditionPolicy::Assert
        } else {
            PreconditionPolicy::Verify
        };
        let cut = find_alpha_cut(&points, &vector, policy).map_err(command_error)?;
        let width = &svg.canvas.stroke() * rat_i(2);
        svg.line(&cut.hyperplane, OVERLAY_COLOR, &width, true);
        for (class, &index) in cut.tuple.iter().enumerate() {
            let (x, y) = xy(&instance.classes[class][index]);
            svg.ring(&x, &y);
        }
        summary.push(format!(
            "alpha cut through tuple {:?} overlaid",
            cut.tuple
        ));
    }
    for (i, class) in instance.classes.iter().enumerate() {
        for p in class {
            let (x, y) = xy(p);
            svg.dot(&x, &y, class_color(i));
        }
    }
    Ok((svg.finish(), summary))
}

/// Seed points that frame an arrangement: every pairwise crossing plus
/// each line's closest point to the origin (so parallel families still
/// land in the frame).
fn arrangement_seeds(lines: &[&Hyperplane]) -> Vec<(Rational, Rational)> {
    let mut seeds = Vec::new();
    for (i, h) in lines.iter().enumerate() {
        for g in lines.iter().skip(i + 1) {
            let solved = alphacut::linalg::solve(
                vec![h.normal().to_vec(), g.normal().to_vec()],
                vec![h.offset().clone(), g.offset().clone()],
            );
            if let Some(q) = solved {
                seeds.push((q[0].clone(), q[1].clone()));
            }
        }
        let norm_sq = &h.normal()[0] * &h.normal()[0] + &h.normal()[1] * &h.normal()[1];
        let t = h.offset() / &norm_sq;
        seeds.push((&t * &h.normal()[0], &t * &h.normal()[1]));
    }
    seeds
}

/// Sample points along a level polyline across the frame: entry height,
/// interior breakpoints, exit height.
fn level_path(level: &alphacut::level::LevelPolyline, canvas: &Canvas) -> Vec<(Rational, Rational)> {
    let mut pts = vec![(canvas.min_x.clone(), level.eval_y(&canvas.min_x))];
    for bp in level.breakpoints() {
        if bp.coords[0] > canvas.min_x && bp.coords[0] < canvas.max_x {
            pts.push(xy(bp));
        }
    }
    pts.push((canvas.max_x.clone(), level.eval_y(&canvas.max_x)));
    pts
}

fn plot_lines(
    lines: &LinesFile,
    alpha: Option<&[usize]>,
) -> Result<(String, Vec<String>), CliError> {
    if lines.dimension != 2 {
        return Err(CliError::NotPlottable {
            dimension: lines.dimension,
        });
    }
    let arrangement = lines.to_arrangement()?;
    let all: Vec<&Hyperplane> = arrangement.classes().iter().flatten().collect();
    let mut svg = Svg::new(Canvas::around(&arrangement_seeds(&all)));
    let mut summary = vec![format!(
        "plotted {} lines in {} classes",
        all.len(),
        arrangement.classes().len()
    )];
    let width = svg.canvas.stroke();
    for (i, class) in arrangement.classes().iter().enumerate() {
        for h in class {
            svg.line(h, class_color(i), &width, false);
        }
    }
    if let Some(alpha) = alpha {
        let vector = AlphaVector::new(alpha.to_vec());
        let sizes = arrangement.class_sizes();
        if alpha.len() != sizes.len() {
            return Err(CliError::InvalidFlag(format!(
                "--alpha has {} entries but the arrangement has {} classes",
                alpha.len(),
                sizes.len()
            )));
        }
        let bold = &width * rat_i(3);
        for (i, (&k, &n)) in alpha.iter().zip(&sizes).enumerate() {
            if k < 1 || k > n {
                return Err(CliError::InvalidFlag(format!(
                    "--alpha entry {k} out of range 1..={n} for class {i}"
                )));
            }
            let level = k_level(arrangement.class(i), k).map_err(command_error)?;
            let pts = level_path(&level, &svg.canvas);
            svg.polyline(&pts, class_color(i), &bold);
        }
        let colorful = x_alpha_bruteforce(&arrangement, &vector).map_err(command_error)?;
        let (x, y) = xy(&colorful.point);
        if svg.canvas.contains(&x, &y) {
            svg.ring(&x, &y);
        }
        summary.push(format!(
            "levels {alpha:?} overlaid, colorful point at tuple {:?}",
            colorful.tuple
        ));
    }
    Ok((svg.finish(), summary))
}

fn plot_straight(arr: &LineArrangement2D) -> (String, Vec<String>) {
    let all: Vec<&Hyperplane> = arr.reds().iter().chain(arr.blues()).collect();
    let mut svg = Svg::new(Canvas::around(&arrangement_seeds(&all)));
    let width = svg.canvas.stroke();
    for h in arr.reds() {
        svg.line(h, class_color(0), &width, false);
    }
    for h in arr.blues() {
        svg.line(h, class_color(1), &width, false);
    }
    let summary = vec![format!(
        "plotted straight arrangement: {} red, {} blue",
        arr.reds().len(),
        arr.blues().len()
    )];
    (svg.finish(), summary)
}

fn plot_poly(poly: &PolylineArrangement) -> (String, Vec<String>) {
    let mut seeds: Vec<(Rational, Rational)> = Vec::new();
    for line in poly.lines() {
        if line.vertices().is_empty() {
            seeds.push((Rational::zero(), line.height(&Rational::zero())));
        } else {
            seeds.extend(line.vertices().iter().cloned());
        }
    }
    let mut svg = Svg::new(Canvas::around(&seeds));
    let width = svg.canvas.stroke();
    for line in poly.lines() {
        let color = match line.color() {
            Color::Red => class_color(0),
            Color::Blue => class_color(1),
        };
        let mut pts = vec![(svg.canvas.min_x.clone(), line.height(&svg.canvas.min_x))];
        for v in line.vertices() {
            if v.0 > svg.canvas.min_x && v.0 < svg.canvas.max_x {
                pts.push(v.clone());
            }
        }
        pts.push((svg.canvas.max_x.clone(), line.height(&svg.canvas.max_x)));
        svg.polyline(&pts, color, &width);
    }
    let summary = vec![format!(
        "plotted polyline arrangement: {} red, {} blue",
        poly.class_indices(Color::Red).len(),
        poly.class_indices(Color::Blue).len()
    )];
    (svg.finish(), summary)
}
