use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use lorenz_renorm::fixedpoint::{
    c_guess_ladder, classify, classify_rechecked, critical_spectrum, find_period2,
    fixed_point_from_ladder, period2_guesses, Classification, FixedPointOptions, FixedPointResult,
    Period2Outcome,
};
use lorenz_renorm::lorenz::{parse_map, write_graph, write_map};
use lorenz_renorm::numeric::{check_precision, Complex};
use lorenz_renorm::{Map, Mp, Real, RenormType};

#[derive(Parser)]
#[command(
    name = "lorenz-renorm",
    version,
    about = "Fixed points, spectra and classification of Lorenz renormalization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Critical exponent.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Working precision in bits.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    /// Nodes of the piecewise-linear truncation (2 = three-dimensional).
    #[arg(long, default_value_t = 2)]
    grid: usize,
}

#[derive(Args, Clone)]
struct TypeArg {
    /// Monotone type `a,b`.
    #[arg(long = "type", value_name = "A,B", value_parser = parse_monotone, conflicts_with = "word", required_unless_present = "word")]
    monotone: Option<(usize, usize)>,
    /// Arbitrary type as two binary words `w0,w1`, e.g. `0111,100`.
    #[arg(long, value_name = "W0,W1", value_parser = parse_word)]
    word: Option<RenormType>,
}

impl TypeArg {
    fn renorm_type(&self) -> RenormType {
        match (&self.monotone, &self.word) {
            (Some((a, b)), _) => RenormType::monotone(*a, *b).expect("validated by the parser"),
            (None, Some(t)) => t.clone(),
            (None, None) => unreachable!("clap requires one of --type/--word"),
        }
    }

    /// `8-2` for monotone types, `w0-w1` otherwise.
    fn stem(&self) -> String {
        match (&self.monotone, &self.word) {
            (Some((a, b)), _) => format!("{a}-{b}"),
            (None, Some(t)) => format!("{}-{}", t.w0(), t.w1()),
            (None, None) => unreachable!(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Locate a renormalization fixed point; writes `<out>/fixedpt-<type>.map` and `.dat`.
    FixedPoint {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Graph samples per branch.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Eigenvalues at the fixed points of the (a,b)-types for one b.
    EigenScan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b: usize,
        /// Inclusive range `lo..hi`.
        #[arg(long, value_parser = parse_range)]
        a: (usize, usize),
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify all monotone types with 1 ≤ b ≤ a ≤ max.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max: u64,
        /// Classify again on this grid and report cells that change.
        #[arg(long)]
        recheck_grid: Option<usize>,
        /// Print every cell's diagnostics to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Plot data `x f(x)` for a serialized map.
    Graph {
        map: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Precision used to read the map.
        #[arg(long, default_value_t = 256)]
        precision: u32,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a period-2 orbit; writes `<out>/period2-<type>-{flat,sharp}.map` and `.dat`.
    Period2 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn parse_monotone(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad integer `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad integer `{b}`"))?;
    RenormType::monotone(a, b).map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn parse_word(s: &str) -> Result<RenormType, String> {
    s.parse().map_err(|e: lorenz_renorm::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad integer `{lo}`"))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad integer `{hi}`"))?;
    if lo < 1 {
        return Err("a starts at 1".into());
    }
    Ok((lo, hi))
}

enum Failure {
    /// Bad flag values; exit status 2.
    Usage(anyhow::Error),
    /// The computation itself failed; exit status 1.
    Computation(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Computation(e.into())
    }
}

struct Setup {
    alpha: Mp,
    opts: FixedPointOptions<Mp>,
}

fn setup(common: &Common) -> Result<Setup, Failure> {
    let checked = || -> anyhow::Result<Setup> {
        let precision = check_precision(common.precision)?;
        if common.grid < 2 {
            bail!("--grid must be at least 2");
        }
        if !(common.alpha > 1.0 && common.alpha.is_finite()) {
            bail!("--alpha must be a finite number greater than 1");
        }
        let like = Mp::new(precision, 0.0);
        let alpha = like.lift(common.alpha);
        let opts = FixedPointOptions::for_precision(&like, common.grid);
        Ok(Setup { alpha, opts })
    };
    checked().map_err(Failure::Usage)
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn save_map(dir: &Path, stem: &str, map: &Map, samples: usize) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let map_path = dir.join(format!("{stem}.map"));
    fs::write(&map_path, write_map(map))
        .with_context(|| format!("writing {}", map_path.display()))?;
    let dat_path = dir.join(format!("{stem}.dat"));
    fs::write(&dat_path, write_graph(map, samples)?)
        .with_context(|| format!("writing {}", dat_path.display()))?;
    Ok(())
}

fn summary(fp: &FixedPointResult<Mp>) -> String {
    format!(
        "c {}\nv0 {}\nv1 {}\nresidual {:e}\niterations {}",
        fp.map.c().to_decimal(),
        fp.map.v0().to_decimal(),
        fp.map.v1().to_decimal(),
        fp.residual.to_f64(),
        fp.iterations
    )
}

fn complex_text(z: &Complex<Mp>) -> String {
    let (re, im) = (z.re.to_f64(), z.im.to_f64());
    if im == 0.0 {
        format!("{re:.12e}")
    } else {
        format!("{re:.12e}{im:+.12e}i")
    }
}

fn fixed_point_cmd(
    common: &Common,
    ty: &TypeArg,
    out_dir: &Path,
    samples: usize,
) -> Result<(), Failure> {
    let s = setup(common)?;
    let t = ty.renorm_type();
    let (fp, diagnostics) = fixed_point_from_ladder(&t, &s.alpha, &c_guess_ladder(), &s.opts)?;
    for d in diagnostics {
        eprintln!("{d}");
    }
    save_map(out_dir, &format!("fixedpt-{}", ty.stem()), &fp.map, samples)?;
    println!("{}", summary(&fp));
    Ok(())
}

fn eigen_scan_cmd(
    common: &Common,
    b: usize,
    (lo, hi): (usize, usize),
    out: Option<&Path>,
) -> Result<(), Failure> {
    let s = setup(common)?;
    let rows: Vec<(usize, anyhow::Result<String>)> = (lo..=hi)
        .into_par_iter()
        .map(|a| {
            let row = || -> anyhow::Result<String> {
                let t = RenormType::monotone(a, b)?;
                let (fp, _) = fixed_point_from_ladder(&t, &s.alpha, &c_guess_ladder(), &s.opts)?;
                let (lambda_c, rest) = critical_spectrum(&fp)?;
                let mut others = rest.iter();
                let l2 = others
                    .next()
                    .map(complex_text)
                    .unwrap_or_else(|| "nan".into());
                let l3 = others
                    .next()
                    .map(complex_text)
                    .unwrap_or_else(|| "nan".into());
                Ok(format!("{a} {} {l2} {l3}", complex_text(&lambda_c)))
            };
            (a, row())
        })
        .collect();
    let mut text = String::from("a lambda_c lambda_2 lambda_3\n");
    for (a, row) in rows {
        match row {
            Ok(line) => {
                let _ = writeln!(text, "{line}");
            }
            Err(e) => eprintln!("warning: ({a},{b}) omitted: {e:#}"),
        }
    }
    write_out(out, &text)?;
    Ok(())
}

fn classify_cmd(
    common: &Common,
    max: usize,
    recheck_grid: Option<usize>,
    verbose: bool,
) -> Result<bool, Failure> {
    let s = setup(common)?;
    let cells: Vec<(usize, usize)> = (1..=max)
        .flat_map(|b| (b..=max).map(move |a| (a, b)))
        .collect();
    let results: Vec<((usize, usize), lorenz_renorm::Result<Classification<Mp>>)> = cells
        .par_iter()
        .map(|&(a, b)| {
            let t = RenormType::monotone(a, b).expect("a, b >= 1");
            let r = match recheck_grid {
                Some(g) => classify_rechecked(&t, &s.alpha, &s.opts, g),
                None => classify(&t, &s.alpha, &s.opts),
            };
            ((a, b), r)
        })
        .collect();

    let mut table = String::from("b\\a");
    for a in 1..=max {
        let _ = write!(table, " {a}");
    }
    table.push('\n');
    let mut all_ok = true;
    for b in 1..=max {
        let _ = write!(table, "{b:<3}");
        for a in 1..=max {
            if a < b {
                table.push_str("  ");
                continue;
            }
            let (_, r) = results
                .iter()
                .find(|(cell, _)| *cell == (a, b))
                .expect("every cell computed");
            let letter = match r {
                Ok(c) => c.case.to_string(),
                Err(_) => {
                    all_ok = false;
                    "?".into()
                }
            };
            let _ = write!(table, " {letter}");
        }
        table.push('\n');
    }
    print!("{table}");
    for ((a, b), r) in &results {
        match r {
            Ok(c) => {
                if let Some(rc) = c.recheck {
                    if rc.changed(c.case) {
                        let now = rc.case.map_or("?".to_string(), |x| x.to_string());
                        eprintln!(
                            "({a},{b}): {} at grid {}, {now} at grid {}",
                            c.case, common.grid, rc.grid
                        );
                    }
                }
                if verbose {
                    eprintln!(
                        "({a},{b}) {}: lambda_c = {}",
                        c.case,
                        complex_text(&c.lambda_c)
                    );
                    for d in &c.diagnostics {
                        eprintln!("    {d}");
                    }
                }
            }
            Err(e) => eprintln!("({a},{b}) unclassified: {e}"),
        }
    }
    Ok(all_ok)
}

fn graph_cmd(
    map: &Path,
    samples: usize,
    precision: u32,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let text = fs::read_to_string(map).with_context(|| format!("reading {}", map.display()))?;
    let f = parse_map(&text, precision).with_context(|| format!("parsing {}", map.display()))?;
    write_out(out, &write_graph(&f, samples)?)?;
    Ok(())
}

fn period2_cmd(
    common: &Common,
    ty: &TypeArg,
    out_dir: &Path,
    samples: usize,
) -> Result<bool, Failure> {
    let s = setup(common)?;
    let t = ty.renorm_type();
    let (fp, _) = fixed_point_from_ladder(&t, &s.alpha, &c_guess_ladder(), &s.opts)?;
    println!("fixed point c {}", fp.map.c().to_decimal());
    let guesses = period2_guesses(fp.map.c().to_f64());
    let search = find_period2(&t, &s.alpha, fp.map.c(), &guesses, &s.opts)?;
    for a in &search.attempts {
        eprintln!("{a}");
    }
    match search.outcome {
        Period2Outcome::Period2 { flat, sharp } => {
            let stem = ty.stem();
            save_map(out_dir, &format!("period2-{stem}-flat"), &flat.map, samples)?;
            save_map(
                out_dir,
                &format!("period2-{stem}-sharp"),
                &sharp.map,
                samples,
            )?;
            println!("period2");
            println!("flat c {}", flat.map.c().to_decimal());
            println!("sharp c {}", sharp.map.c().to_decimal());
            Ok(true)
        }
        Period2Outcome::Coincides => {
            println!("coincides");
            Ok(true)
        }
        Period2Outcome::Diverged => {
            println!("diverged");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::FixedPoint {
            common,
            ty,
            out_dir,
            samples,
        } => fixed_point_cmd(common, ty, out_dir, *samples).map(|_| true),
        Command::EigenScan { common, b, a, out } => {
            if *b < 1 {
                Err(Failure::Usage(anyhow::anyhow!("--b must be at least 1")))
            } else {
                eigen_scan_cmd(common, *b, *a, out.as_deref()).map(|_| true)
            }
        }
        Command::Classify {
            common,
            max,
            recheck_grid,
            verbose,
        } => classify_cmd(common, *max as usize, *recheck_grid, *verbose),
        Command::Graph {
            map,
            samples,
            precision,
            out,
        } => graph_cmd(map, *samples, *precision, out.as_deref()).map(|_| true),
        Command::Period2 {
            common,
            ty,
            out_dir,
            samples,
        } => period2_cmd(common, ty, out_dir, *samples),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
