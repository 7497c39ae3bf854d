mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hilbmod::field_arith::GenusKind;
use hilbmod::golden::SURFACES;
use hilbmod::HilbError;

use report::Rendered;

#[derive(Parser)]
#[command(name = "hilb", version, about = "Cusp, elliptic and Hirzebruch-Zagier geometry of K3-type Hilbert modular surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output files into this directory instead of printing.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(clap::Args, Clone, Copy)]
pub struct Surface {
    /// Discriminant of the real quadratic field.
    d: i64,
    /// Required only when both genera of `d` give K3-type surfaces.
    #[arg(long, value_parser = parse_genus)]
    genus: Option<GenusKind>,
}

fn parse_genus(s: &str) -> Result<GenusKind, String> {
    s.parse()
}

impl Surface {
    fn genus(self) -> Result<GenusKind, String> {
        if let Some(g) = self.genus {
            return Ok(g);
        }
        let k3: Vec<GenusKind> = SURFACES.iter().filter(|(d, _)| *d == self.d).map(|&(_, g)| g).collect();
        match k3.as_slice() {
            [g] => Ok(*g),
            [] => Ok(GenusKind::Principal),
            _ => Err(format!("D={} needs --genus principal or --genus nonprincipal", self.d)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cusp resolution cycles and their boundary forms.
    Cusps(Surface),
    /// Elliptic fixed points by rotation type.
    Elliptic(Surface),
    /// Components of the Hirzebruch-Zagier curves and the transversal accounting.
    Hz {
        #[command(flatten)]
        surface: Surface,
        /// Largest level in the accounting table.
        #[arg(long, default_value_t = 10)]
        nmax: u32,
    },
    /// Intersection graph of the minimal model.
    Graph(Surface),
    /// Genus one fibration hypotheses for the surface's reference row.
    Verify(Surface),
    /// Weighted and Hurwitz class numbers of `-n`, and the twisted sum for a discriminant.
    Classnum {
        n: i64,
        #[arg(long)]
        disc: Option<i64>,
    },
    /// First prime not covered by a set of Kronecker symbols.
    Igp {
        #[arg(long, value_enum, default_value_t = IgpSet::Surfaces)]
        set: IgpSet,
        /// Members of a custom set.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_if_eq("set", "custom"))]
        values: Vec<i64>,
        #[arg(long, default_value_t = 4_000_000)]
        bound: u64,
    },
    /// Every surface against the reference data, with a report.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IgpSet {
    /// The eighteen discriminants of the rational and K3-type surfaces.
    Surfaces,
    /// Primes up to 41 except 31.
    SmallPrimes,
    Legacy,
    Custom,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let surface = match &cli.command {
        Command::Cusps(s) | Command::Elliptic(s) | Command::Graph(s) | Command::Verify(s) | Command::Hz { surface: s, .. } => {
            match s.genus() {
                Ok(g) => Some((s.d, g)),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
        }
        _ => None,
    };
    let (d, genus) = surface.unwrap_or((0, GenusKind::Principal));
    let result = match cli.command {
        Command::Cusps(_) => report::cusps(d, genus),
        Command::Elliptic(_) => report::elliptic(d, genus),
        Command::Hz { nmax, .. } => report::hz(d, genus, nmax),
        Command::Graph(_) => report::graph(d, genus),
        Command::Verify(_) => report::verify(d, genus),
        Command::Classnum { n, disc } => report::classnum(n, disc),
        Command::Igp { set, values, bound } => report::igp(set, values, bound),
        Command::All => report::all(),
    };
    match result {
        Ok(r) => emit(&r, cli.format, cli.out.as_deref()),
        Err(e @ (HilbError::NotK3 { .. } | HilbError::NoSuchGenus { .. } | HilbError::NotFundamental(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(r: &Rendered, format: Format, out: Option<&std::path::Path>) -> ExitCode {
    let write = |name: String, body: &str| -> std::io::Result<()> {
        match out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(name), body)
            }
            None => {
                print!("{body}");
                Ok(())
            }
        }
    };
    let json = || serde_json::to_string_pretty(&r.json).expect("json values serialize") + "\n";
    let written = match (format, &r.dot) {
        (Format::Dot, Some(dot)) => write(format!("{}.dot", r.stem), dot),
        (Format::Dot, None) => {
            eprintln!("error: no DOT rendering for this command");
            return ExitCode::from(2);
        }
        (Format::Json, _) => write(format!("{}.json", r.stem), &json()),
        (Format::Text, _) => write(format!("{}.txt", r.stem), &r.text),
    };
    // reports with several artifacts write all of them
    let extra = match out {
        Some(_) => r.files.iter().try_for_each(|(name, body)| write(name.clone(), body)),
        None => Ok(()),
    };
    if let Err(e) = written.and(extra) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if r.mismatches.is_empty() {
        ExitCode::SUCCESS
    } else {
        for m in &r.mismatches {
            eprintln!("mismatch: {m}");
        }
        ExitCode::from(1)
    }
}
