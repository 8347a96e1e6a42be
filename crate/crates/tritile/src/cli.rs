//! Command line front end. Exit codes: 0 all checks pass, 1 violations
//! found, 2 usage or IO error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tritile_core::generators::{
    klaassen_spiral, periodic_three_size, uniform_lattice, Chirality, PeriodicSpec, SpiralSpec,
};
use tritile_core::structure::{classify, TriangleClass};
use tritile_core::walk::{extract_graph, martingale_deviation, simulate, simulate_graph, SizeField, StepSet};
use tritile_core::{Mark, Patch, QSqrt3, Scalar, Sign, Tolerance, Window};

use crate::io::{load_from, parse_scalar, save_to, AnyPatch, InteriorRule, Token};
use crate::report::{self, ALL_CHECKS};
use crate::svg::{render_svg, Style};

#[derive(Parser, Debug)]
#[command(
    name = "tritile",
    version,
    about = "Equilateral triangle tilings with no shared sides"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated patch to a file.
    #[command(subcommand)]
    Generate(Generate),
    /// Print the class of every triangle.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        interior: InteriorArg,
    },
    /// Check tiling hypotheses, structure and conclusions.
    Verify {
        file: PathBuf,
        #[arg(long)]
        delta: String,
        /// Comma-separated subset of hypotheses,lemma7,lemma8,lemma9,lemma10,conclusions,periods.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[command(flatten)]
        interior: InteriorArg,
    },
    /// Random walk over large triangles.
    Walk {
        file: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        interior: InteriorArg,
    },
    /// Render a patch as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Mark vertices and subdivision points and number the triangles.
        #[arg(long)]
        labels: bool,
        #[command(flatten)]
        interior: InteriorArg,
    },
}

#[derive(Args, Debug)]
struct InteriorArg {
    /// `default` (margin of twice the largest side), `local`, or a margin value.
    #[arg(long, default_value = "default")]
    interior: String,
}

impl InteriorArg {
    fn rule(&self) -> InteriorRule {
        match self.interior.as_str() {
            "default" => InteriorRule::Default,
            "local" => InteriorRule::Local,
            m => InteriorRule::Margin(m.to_string()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Three-size periodic tiling with large side b + c.
    Periodic {
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        /// X0:X1:Y0:Y1
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_enum, default_value_t = Hand::Left)]
        chirality: Hand,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Spiral of pairwise distinct sizes around (px, py).
    Spiral {
        #[arg(long, allow_hyphen_values = true)]
        px: f64,
        #[arg(long, allow_hyphen_values = true)]
        py: f64,
        #[arg(long, allow_hyphen_values = true)]
        ax: f64,
        #[arg(long, allow_hyphen_values = true)]
        ay: f64,
        #[arg(long, allow_hyphen_values = true)]
        imin: i32,
        #[arg(long, allow_hyphen_values = true)]
        imax: i32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Edge-to-edge lattice of side s.
    Lattice {
        #[arg(long)]
        s: String,
        /// X0:X1:Y0:Y1
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Use the float backend.
        #[arg(long)]
        float: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Hand {
    Left,
    Right,
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn window<S: Token>(text: &str) -> Result<Window<S>, Usage> {
    let parts: Vec<&str> = text.split(':').collect();
    let [x0, x1, y0, y1] = parts.as_slice() else {
        return Err(Usage(format!("window must be X0:X1:Y0:Y1, got {text:?}")));
    };
    let v = |s: &str| parse_scalar::<S>(s).ok_or_else(|| Usage(format!("bad window value {s:?}")));
    Ok(Window::new(v(x0)?, v(x1)?, v(y0)?, v(y1)?)?)
}

fn rational(name: &str, text: &str) -> Result<num_rational::BigRational, Usage> {
    tritile_core::scalar::parse_rational(text)
        .ok_or_else(|| Usage(format!("--{name} must be a rational, got {text:?}")))
}

fn write_patch<S: Token>(patch: &Patch<S>, path: &Path) -> Result<u8, Usage> {
    save_to(patch, path)?;
    eprintln!("wrote {} triangles to {}", patch.len(), path.display());
    Ok(0)
}

fn generate(g: Generate) -> Result<u8, Usage> {
    match g {
        Generate::Periodic {
            b,
            c,
            window: w,
            chirality,
            output,
        } => {
            let hand = match chirality {
                Hand::Left => Chirality::LeftBFirst,
                Hand::Right => Chirality::RightBFirst,
            };
            let spec = PeriodicSpec::new(rational("b", &b)?, rational("c", &c)?, hand)?;
            write_patch(&periodic_three_size(&spec, window::<QSqrt3>(&w)?)?, &output)
        }
        Generate::Spiral {
            px,
            py,
            ax,
            ay,
            imin,
            imax,
            output,
        } => write_patch(
            &klaassen_spiral(&SpiralSpec::new((px, py), (ax, ay), imin, imax))?,
            &output,
        ),
        Generate::Lattice {
            s,
            window: w,
            float,
            output,
        } => {
            let tol = Tolerance::DEFAULT;
            if float {
                let side = parse_scalar::<f64>(&s).ok_or_else(|| Usage(format!("bad side {s:?}")))?;
                write_patch(&uniform_lattice(&side, window::<f64>(&w)?, tol)?, &output)
            } else {
                let side = parse_scalar::<QSqrt3>(&s).ok_or_else(|| Usage(format!("bad side {s:?}")))?;
                write_patch(&uniform_lattice(&side, window::<QSqrt3>(&w)?, tol)?, &output)
            }
        }
    }
}

fn class_name(c: TriangleClass) -> &'static str {
    match c {
        TriangleClass::Small => "small",
        TriangleClass::Large => "large",
        TriangleClass::Improper => "improper",
        TriangleClass::Other => "other",
        TriangleClass::Indeterminate => "indeterminate",
    }
}

fn tok<S: Token>(x: &S) -> String {
    let mut s = String::new();
    x.write_token(&mut s);
    s
}

fn classify_cmd<S: Token>(patch: &Patch<S>, as_json: bool) -> String {
    let rows: Vec<(usize, TriangleClass, Mark)> = (0..patch.len())
        .map(|t| (t, classify(patch, t), patch.mark(t)))
        .collect();
    let mark = |m: Mark| if m == Mark::Interior { "interior" } else { "boundary" };
    if as_json {
        let mut counts = serde_json::Map::new();
        for (_, c, _) in &rows {
            let e = counts.entry(class_name(*c)).or_insert(json!(0));
            *e = json!(e.as_u64().unwrap() + 1);
        }
        let items: Vec<_> = rows
            .iter()
            .map(|&(t, c, m)| {
                json!({
                    "id": t,
                    "class": class_name(c),
                    "mark": mark(m),
                    "side": tok(patch.triangle(t).side()),
                })
            })
            .collect();
        let doc = json!({ "triangles": items, "counts": counts });
        serde_json::to_string_pretty(&doc).unwrap() + "\n"
    } else {
        let mut out = String::new();
        for (t, c, m) in rows {
            out.push_str(&format!(
                "{t} {} {} {}\n",
                class_name(c),
                mark(m),
                tok(patch.triangle(t).side())
            ));
        }
        out
    }
}

fn verify_cmd<S: Token>(patch: &Patch<S>, delta: &str, checks: &[&str]) -> Result<u8, Usage> {
    let delta = parse_scalar::<S>(delta).ok_or_else(|| Usage(format!("bad --delta {delta:?}")))?;
    let r = report::verify(patch, &delta, checks)?;
    print!("{}", r.text);
    Ok(if r.passed { 0 } else { 1 })
}

fn walk_cmd<S: Token>(
    patch: &Patch<S>,
    steps: usize,
    trials: usize,
    seed: u64,
    csv: Option<&Path>,
) -> Result<u8, Usage> {
    if steps == 0 || trials == 0 {
        return Err(Usage("--steps and --trials must be at least 1".into()));
    }
    let graph = match extract_graph(patch) {
        Ok(g) => g,
        Err(e) => {
            println!("graph=fail");
            println!("graph.error={e}");
            return Ok(1);
        }
    };
    let dev = martingale_deviation(&graph);
    let clean = patch.tol().sign(&dev) == Sign::Zero;
    println!("nodes={}", graph.len());
    println!("martingale_deviation={}", tok(&dev));
    let stats = match graph
        .steps(patch.tol())
        .and_then(|s| StepSet::new(&s, patch.tol()).ok())
    {
        Some(set) => {
            println!("mode=lattice");
            let field = SizeField::constant(graph.node(0).side.clone());
            let oracle: f64 = set.vectors().iter().map(|(x, y)| x * x + y * y).sum::<f64>() / 3.0;
            println!("msd.oracle={}", oracle * steps as f64);
            simulate(&set, steps, trials, seed, Some(&field))?
        }
        None => {
            println!("mode=graph");
            let start = (0..graph.len()).find(|&i| graph.node(i).is_complete()).unwrap_or(0);
            simulate_graph(&graph, start, steps, trials, seed)?
        }
    };
    print!("{}", report::walk_stats(&stats));
    if let Some(path) = csv {
        std::fs::write(path, report::walk_csv(&stats))?;
    }
    Ok(if clean { 0 } else { 1 })
}

fn render_cmd<S: Scalar>(patch: &Patch<S>, output: &Path, labels: bool) -> Result<u8, Usage> {
    let style = if labels { Style::labelled() } else { Style::default() };
    std::fs::write(output, render_svg(patch, &style))?;
    Ok(0)
}

macro_rules! with_patch {
    ($any:expr, $p:ident => $body:expr) => {
        match $any {
            AnyPatch::Exact($p) => $body,
            AnyPatch::Float($p) => $body,
        }
    };
}

fn execute(cli: Cli) -> Result<u8, Usage> {
    match cli.command {
        Command::Generate(g) => generate(g),
        Command::Classify { file, json, interior } => {
            let any = load_from(&file, &interior.rule())?;
            print!("{}", with_patch!(&any, p => classify_cmd(p, json)));
            Ok(0)
        }
        Command::Verify {
            file,
            delta,
            checks,
            interior,
        } => {
            let names: Vec<String> = checks.unwrap_or_else(|| ALL_CHECKS.iter().map(|s| s.to_string()).collect());
            if let Some(bad) = names.iter().find(|n| !ALL_CHECKS.contains(&n.as_str())) {
                return Err(Usage(format!("unknown check {bad:?}")));
            }
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let any = load_from(&file, &interior.rule())?;
            with_patch!(&any, p => verify_cmd(p, &delta, &names))
        }
        Command::Walk {
            file,
            steps,
            trials,
            seed,
            csv,
            interior,
        } => {
            let any = load_from(&file, &interior.rule())?;
            with_patch!(&any, p => walk_cmd(p, steps, trials, seed, csv.as_deref()))
        }
        Command::Render {
            file,
            output,
            labels,
            interior,
        } => {
            let any = load_from(&file, &interior.rule())?;
            with_patch!(&any, p => render_cmd(p, &output, labels))
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
