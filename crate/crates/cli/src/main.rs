use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use tcpair::exactla::{flatten, primitive};
use tcpair::generators::{build_t_list, GeneratorOptions};
use tcpair::geometry::{
    curvature, ext_cov_deriv_endo, ext_cov_deriv_vector, normal0, normal1, torsion, Connection,
    EndValuedForm, EXAMPLE_CONNECTION,
};
use tcpair::tensor::TensorField;
use tcpair::verify::{self, RandomConnectionSpec, Target};

#[derive(Parser)]
#[command(
    name = "tcpair",
    version,
    about = "Exact tensor calculus for affine connections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a tensor of a connection and write it in the tensor format
    Compute {
        what: Quantity,
        #[arg(long)]
        connection: PathBuf,
        /// Output file, or directory for `generators`; stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact rank (and optionally kernel) of a list of tensor files
    Rank {
        #[arg(long, num_args = 1.., required = true)]
        tensors: Vec<PathBuf>,
        #[arg(long)]
        kernel: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verdicts; exits 0 iff all pass
    Verify {
        #[arg(default_value = "all", value_parser = parse_target)]
        target: Target,
        /// Connection file; the bundled test connection if omitted
        #[arg(long)]
        connection: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Torsion,
    Curvature,
    Normal0,
    Normal1,
    Generators,
    Dtor,
    #[value(name = "dR")]
    DR,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse()
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_connection(path: Option<&Path>) -> Result<(Connection, String)> {
    let (text, origin) = match path {
        Some(p) => (read(p)?, p.display().to_string()),
        None => (
            EXAMPLE_CONNECTION.to_string(),
            "bundled test connection".to_string(),
        ),
    };
    let conn = Connection::from_json(&text).with_context(|| format!("loading {origin}"))?;
    eprintln!("input {origin} sha256 {}", digest(text.as_bytes()));
    Ok((conn, origin))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn compute(what: Quantity, connection: &Path, out: Option<&Path>) -> Result<()> {
    let (conn, _) = load_connection(Some(connection))?;
    let field = match what {
        Quantity::Torsion => torsion(&conn).into_field(),
        Quantity::Curvature => curvature(&conn).into_field(),
        Quantity::Normal0 => normal0(&conn),
        Quantity::Normal1 => normal1(&conn),
        Quantity::Dtor => ext_cov_deriv_vector(&conn, &torsion(&conn))?.into_field(),
        Quantity::DR => ext_cov_deriv_endo(&conn, &curvature(&conn))?.into_field(),
        Quantity::Generators => {
            let Some(dir) = out else {
                bail!("`compute generators` needs --out <directory>");
            };
            return write_generators(&conn, dir, &read(connection)?);
        }
    };
    write_output(out, &field.to_json())
}

fn write_generators(conn: &Connection, dir: &Path, source: &str) -> Result<()> {
    let options = GeneratorOptions::default();
    let family = build_t_list(&normal0(conn), &normal1(conn), options)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut entries = Vec::new();
    for g in &family.entries {
        let file = format!("{}.json", g.label);
        fs::write(dir.join(&file), g.field.to_json())?;
        let diff = ext_cov_deriv_endo(conn, &EndValuedForm::new(g.field.clone(), 2)?)?;
        let dfile = format!("d{}.json", g.label);
        fs::write(dir.join(&dfile), diff.field().to_json())?;
        entries.push(json!({
            "label": g.label,
            "file": file,
            "differential": dfile,
            "block": g.provenance.block,
            "pattern": g.provenance.pattern.to_string(),
        }));
    }
    let manifest = json!({
        "tool": format!("tcpair {}", env!("CARGO_PKG_VERSION")),
        "connection_sha256": digest(source.as_bytes()),
        "options": options,
        "generators": entries,
    });
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

fn rank(paths: &[PathBuf], kernel: bool, format: Format) -> Result<()> {
    let mut fields = Vec::new();
    for p in paths {
        let text = read(p)?;
        eprintln!("input {} sha256 {}", p.display(), digest(text.as_bytes()));
        fields.push(
            TensorField::from_json(&text).with_context(|| format!("parsing {}", p.display()))?,
        );
    }
    if let Some(bad) = fields.iter().position(|f| f.shape() != fields[0].shape()) {
        bail!(
            "shape mismatch: {} has shape {}, {} has shape {}",
            paths[0].display(),
            fields[0].shape(),
            paths[bad].display(),
            fields[bad].shape()
        );
    }
    let (_, m) = flatten(&fields.iter().collect::<Vec<_>>())?;
    let r = m.rank();
    let basis = if kernel { m.kernel_basis() } else { Vec::new() };
    match format {
        Format::Json => {
            let mut doc = json!({"columns": m.cols(), "rank": r});
            if kernel {
                doc["kernel"] = basis
                    .iter()
                    .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
                    .into();
            }
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Text => {
            println!("rank {r}");
            if kernel {
                println!("kernel dimension {}", basis.len());
                for v in &basis {
                    let ints: Vec<String> = primitive(v).iter().map(|x| x.to_string()).collect();
                    println!("[{}]", ints.join(", "));
                }
            }
        }
    }
    Ok(())
}

fn run_verify(
    target: Target,
    connection: Option<&Path>,
    seed: u64,
    count: usize,
    format: Format,
) -> Result<bool> {
    let (conn, _) = load_connection(connection)?;
    eprintln!("seed {seed}, count {count}");
    let spec = RandomConnectionSpec {
        seed,
        ..RandomConnectionSpec::default()
    };
    let verdicts = verify::run_target(target, &conn, &spec, count)?;
    let report = match format {
        Format::Json => verify::render_json(&verdicts) + "\n",
        Format::Text => verify::render_text(&verdicts),
    };
    print!("{report}");
    Ok(verify::all_pass(&verdicts))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("tcpair {}", env!("CARGO_PKG_VERSION"));
    let result = match cli.command {
        Command::Compute {
            what,
            connection,
            out,
        } => compute(what, &connection, out.as_deref()).map(|()| true),
        Command::Rank {
            tensors,
            kernel,
            format,
        } => rank(&tensors, kernel, format).map(|()| true),
        Command::Verify {
            target,
            connection,
            seed,
            count,
            format,
        } => run_verify(target, connection.as_deref(), seed, count, format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
