use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cpisot::cutproject::{l_bound_sq, Window};
use cpisot::error::{Error, Result};
use cpisot::field::{make_base, BaseSpec, QBeta};
use cpisot::json::PaletteDoc;
use cpisot::spectra::{density_profile, k_for_m, spectra_for_m, window_for_m};
use cpisot::svg::render_palette_svg;
use cpisot::sweep::sweep;
use cpisot::voronoi::{palette, Protocell};
use cpisot::windowexpr::parse_window;

#[derive(Parser)]
#[command(name = "cpisot", version, about = "Voronoi spectra of cubic complex Pisot units")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BaseArgs {
    /// Linear coefficient of the minimal polynomial Y^3 + b Y^2 + a Y - 1
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    /// Quadratic coefficient
    #[arg(long, allow_negative_numbers = true)]
    b: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a base and print its invariants
    CheckBase {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
    },
    /// Compute the palette of protocells for one window
    Palette {
        #[command(flatten)]
        base: BaseArgs,
        /// Window endpoint expression, e.g. "beta^2+1"
        #[arg(long, conflicts_with = "m")]
        c: Option<String>,
        /// Alphabet size: window endpoint m/(1-gamma')
        #[arg(long)]
        m: Option<i64>,
        /// Override the patch radius bound L (expression for L^2)
        #[arg(long = "L")]
        l_sq: Option<String>,
        /// Write an SVG card strip here
        #[arg(long)]
        svg: Option<String>,
    },
    /// Compute all palettes over a window range
    Sweep {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        b0: String,
        #[arg(long)]
        c0: String,
        /// Emit CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Spectral quantities for a range of alphabet sizes (CSV)
    Spectra {
        #[command(flatten)]
        base: BaseArgs,
        /// Inclusive range lo..hi
        #[arg(long = "m-range")]
        m_range: String,
    },
    /// The window-sweep table for the Tribonacci base over [beta^2, beta^3)
    TriboTable,
    /// Density experiment: point counts in shrinking-density balls
    Density {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        levels: usize,
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
    },
    /// Re-render a palette JSON document as SVG
    Render {
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let doc = serde_json::json!({
                "error": e.code(),
                "message": e.to_string(),
            });
            eprintln!("{}", serde_json::to_string_pretty(&doc).unwrap());
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::CheckBase { a, b } => check_base(a, b),
        Command::Palette {
            base,
            c,
            m,
            l_sq,
            svg,
        } => cmd_palette(base, c, m, l_sq, svg),
        Command::Sweep { base, b0, c0, csv } => cmd_sweep(base, b0, c0, csv),
        Command::Spectra { base, m_range } => cmd_spectra(base, m_range),
        Command::TriboTable => cmd_tribo_table(),
        Command::Density {
            base,
            m,
            levels,
            budget,
        } => cmd_density(base, m, levels, budget),
        Command::Render { input, out } => cmd_render(input, out),
    }
}

fn check_base(a: i64, b: i64) -> Result<()> {
    let base = make_base(a, b)?;
    let doc = serde_json::json!({
        "a": a,
        "b": b,
        "beta": base.beta_f64(),
        "gamma_prime": base.qbeta_f64(base.gamma_prime()),
        "im_gamma": base.qbeta_f64(base.im_gamma_sq()).sqrt(),
        "property_F": base.property_f(),
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(())
}

fn resolve_window(base: &BaseSpec, c: Option<String>, m: Option<i64>) -> Result<(QBeta, Window)> {
    let c = match (c, m) {
        (Some(expr), None) => parse_window(&expr, base)?,
        (None, Some(m)) => window_for_m(m, base)?.c().clone(),
        _ => {
            return Err(Error::Precondition(
                "exactly one of --c and --m is required".into(),
            ))
        }
    };
    let window = Window::new(c.clone(), base)?;
    Ok((c, window))
}

fn cmd_palette(
    args: BaseArgs,
    c: Option<String>,
    m: Option<i64>,
    l_expr: Option<String>,
    svg: Option<String>,
) -> Result<()> {
    let base = make_base(args.a, args.b)?;
    let (c, window) = resolve_window(&base, c, m)?;
    let l_sq = match l_expr {
        Some(expr) => parse_window(&expr, &base)?,
        None => l_bound_sq(&window, &base).0,
    };
    let cells = palette(&window, &base, Some(l_sq))?;
    let doc = PaletteDoc::build(&base, &c, &cells);
    println!("{}", doc.to_string_pretty());
    if let Some(path) = svg {
        fs::write(&path, render_palette_svg(&base, &cells))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(())
}

fn palette_stats(cells: &[Protocell], base: &BaseSpec) -> (f64, f64, f64) {
    let mut min_d = f64::INFINITY;
    let mut max_dd = 0.0f64;
    let mut max_ds = 0.0f64;
    for cell in cells {
        min_d = min_d.min(base.qbeta_f64(&cell.delta_sq));
        max_dd = max_dd.max(base.qbeta_f64(&cell.big_delta_sq));
        max_ds = max_ds.max(base.qbeta_f64(&cell.delta_star_sq));
    }
    (min_d.sqrt(), max_dd.sqrt(), max_ds.sqrt())
}

fn cmd_sweep(args: BaseArgs, b0: String, c0: String, csv: bool) -> Result<()> {
    let base = make_base(args.a, args.b)?;
    let b0 = parse_window(&b0, &base)?;
    let c0 = parse_window(&c0, &base)?;
    let atlas = sweep(&b0, &c0, &base)?;
    if csv {
        println!("kind,c_lo,c_hi,palette,cells,delta_min,Delta_max,Delta_star_max");
        let n = atlas.breakpoints.len() - 1;
        for i in 0..n {
            let lo = base.qbeta_f64(&atlas.breakpoints[i]);
            let hi = base.qbeta_f64(&atlas.breakpoints[i + 1]);
            let cut = atlas.cut_palettes[i];
            let (d, dd, ds) = palette_stats(&atlas.palettes[cut], &base);
            println!("cut,{lo},{lo},{cut},{},{d},{dd},{ds}", atlas.palettes[cut].len());
            let iv = atlas.interval_palettes[i];
            let (d, dd, ds) = palette_stats(&atlas.palettes[iv], &base);
            println!("interval,{lo},{hi},{iv},{},{d},{dd},{ds}", atlas.palettes[iv].len());
        }
    } else {
        let doc = serde_json::json!({
            "base": {"a": args.a, "b": args.b},
            "breakpoints": atlas
                .breakpoints
                .iter()
                .map(|q| base.qbeta_f64(q))
                .collect::<Vec<_>>(),
            "cut_palettes": atlas.cut_palettes,
            "interval_palettes": atlas.interval_palettes,
            "distinct_palettes": atlas.palettes.len(),
            "palette_runs": atlas.palette_runs,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    }
    Ok(())
}

fn cmd_spectra(args: BaseArgs, m_range: String) -> Result<()> {
    let base = make_base(args.a, args.b)?;
    let (lo, hi) = m_range
        .split_once("..")
        .and_then(|(l, h)| Some((l.parse::<i64>().ok()?, h.parse::<i64>().ok()?)))
        .ok_or_else(|| Error::ParseError {
            pos: 0,
            msg: "expected lo..hi".to_string(),
        })?;
    println!("m,k,ell,L,L_star");
    for m in lo..=hi {
        let rep = spectra_for_m(m, &base)?;
        let k = k_for_m(m, &base);
        println!(
            "{m},{k},{:.10},{:.10},{:.10}",
            rep.ell_f64, rep.l_f64, rep.l_star_f64
        );
    }
    Ok(())
}

fn cmd_tribo_table() -> Result<()> {
    let base = make_base(1, 1)?;
    let b0 = QBeta::beta_sq();
    let c0 = base.beta_pow(3);
    let atlas = sweep(&b0, &c0, &base)?;
    println!("c_lo,c_hi,cells,delta_min,Delta_max,Delta_star_max");
    let n = atlas.breakpoints.len() - 1;
    for i in 0..n {
        let lo = base.qbeta_f64(&atlas.breakpoints[i]);
        let hi = base.qbeta_f64(&atlas.breakpoints[i + 1]);
        let pal = &atlas.palettes[atlas.interval_palettes[i]];
        let (d, dd, ds) = palette_stats(pal, &base);
        println!("{lo:.6},{hi:.6},{},{d:.6},{dd:.6},{ds:.6}", pal.len());
    }
    Ok(())
}

fn cmd_density(args: BaseArgs, m: i64, levels: usize, budget: usize) -> Result<()> {
    let base = make_base(args.a, args.b)?;
    let prof = density_profile(&base, m, levels, budget)?;
    println!("k,r,count,count_hi,n,n_hi");
    for (k, lvl) in prof.iter().enumerate() {
        println!(
            "{k},{:.6},{},{},{:.8},{:.8}",
            lvl.r, lvl.count, lvl.count_hi, lvl.n, lvl.n_hi
        );
    }
    Ok(())
}

fn cmd_render(input: String, out: String) -> Result<()> {
    let text = fs::read_to_string(&input).map_err(|e| Error::Io(e.to_string()))?;
    let doc = PaletteDoc::parse(&text)?;
    let base = make_base(doc.base.a, doc.base.b)?;
    let c = doc.window_c()?;
    let window = Window::new(c, &base)?;
    let (l_sq, _, _) = l_bound_sq(&window, &base);
    let cells = palette(&window, &base, Some(l_sq))?;
    fs::write(&out, render_palette_svg(&base, &cells)).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
