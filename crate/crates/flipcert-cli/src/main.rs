//! `flipcert`: build the certified point configurations, validate and
//! explore their triangulations, and run the certificates from the command
//! line. Fully deterministic: identical invocations write identical bytes.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use flipcert::certify::{
    certify_a26_with, certify_a50_with, local_product_structure, CertificateReport,
};
use flipcert::constructions::{
    a26_bundle, a26_default_perturbation, a26_perturbed_bundle, a50_bundle,
    a50_default_perturbation, a50_perturbed_bundle, build as build_construction, catalog,
    parse_id, two_params,
};
use flipcert::exactgeom::{read_points, write_points, PointConfiguration};
use flipcert::explore::{enumerate_flip_graph, ExploreLimits};
use flipcert::flips::{find_flips, write_flip_log};
use flipcert::orientation::{triangulation_to_orientation, write_orientation};
use flipcert::triangulation::{read_triangulation, write_triangulation, Triangulation};
use flipcert::Rational;

#[derive(Parser)]
#[command(
    name = "flipcert",
    version,
    about = "Exact-arithmetic point configurations, triangulations, flips, and certificates",
    long_about = "Builds the certified point configurations, validates triangulation files, \
enumerates flips and flip graphs, reads diagonal orientations, and runs the full \
certificate pipelines. All arithmetic is exact; identical invocations produce \
byte-identical outputs."
)]
struct Cli {
    /// Worker threads for parallel checks; outputs are identical for any
    /// value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a named construction's files plus a SHA-256 manifest.
    ///
    /// Known ids: CELL24, CROSS4, A50, A26, A50_PERTURBED(alpha,beta),
    /// A26_PERTURBED(alpha,beta), M50, M26. Parameterized ids may omit the
    /// parameters to use the defaults.
    Build {
        /// Construction id, e.g. A50 or A26_PERTURBED(-1/2,3/2)
        id: String,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that a triangulation file is a valid triangulation of a
    /// configuration: nondegenerate cells, exact hull volume, pairwise
    /// proper intersections. Exit 0 when valid, 1 with a witness otherwise.
    Validate {
        /// Point configuration file
        #[arg(long)]
        config: PathBuf,
        /// Triangulation file over that configuration
        #[arg(long)]
        triangulation: PathBuf,
    },
    /// Run a certificate and write its report. Exit 0 when every check
    /// passes, 1 when any fails.
    ///
    /// Ids: A50, A26, A50_PERTURBED(alpha,beta), A26_PERTURBED(alpha,beta),
    /// A50_LOCAL_PRODUCT. The A50/A26 families accept --triangulation to
    /// substitute the reference triangulation from a file.
    Certify {
        /// Certificate id
        id: String,
        /// Substitute triangulation file for the reference triangulation
        #[arg(long)]
        triangulation: Option<PathBuf>,
        /// Write the text report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write the machine-readable key-value report here
        #[arg(long)]
        key_values: Option<PathBuf>,
    },
    /// Breadth-first flip-graph search from a seed triangulation; writes
    /// adjacency, dictionary, and summary files. A capped search exits 0
    /// with status "partial".
    Explore {
        /// Point configuration file
        #[arg(long)]
        config: PathBuf,
        /// Seed triangulation file
        #[arg(long)]
        seed: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Maximum nodes to retain
        #[arg(long, default_value_t = 1_000_000)]
        node_limit: usize,
        /// Wall-clock cap in seconds
        #[arg(long)]
        time_limit_secs: Option<u64>,
    },
    /// Enumerate the supported flips of a triangulation and write the flip
    /// log.
    Flips {
        /// Point configuration file
        #[arg(long)]
        config: PathBuf,
        /// Triangulation file
        #[arg(long)]
        triangulation: PathBuf,
        /// Write the flip log here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read the diagonal orientation a triangulation induces over base
    /// edges of a product configuration.
    Restrict {
        /// Point configuration file (a product with nbase base points)
        #[arg(long)]
        config: PathBuf,
        /// Triangulation file
        #[arg(long)]
        triangulation: PathBuf,
        /// Edge domain file: one `u v` pair per line, base indices
        #[arg(long)]
        edges: PathBuf,
        /// Number of base points; base point i pairs with i + nbase
        #[arg(long)]
        nbase: usize,
        /// Write the orientation here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: cannot configure {} threads: {}", cli.threads, e);
        return ExitCode::from(2);
    }
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Build { id, out } => cmd_build(&id, &out),
        Cmd::Validate {
            config,
            triangulation,
        } => cmd_validate(&config, &triangulation),
        Cmd::Certify {
            id,
            triangulation,
            report,
            key_values,
        } => cmd_certify(&id, triangulation.as_deref(), report.as_deref(), key_values.as_deref()),
        Cmd::Explore {
            config,
            seed,
            out,
            node_limit,
            time_limit_secs,
        } => cmd_explore(&config, &seed, &out, node_limit, time_limit_secs),
        Cmd::Flips {
            config,
            triangulation,
            out,
        } => cmd_flips(&config, &triangulation, out.as_deref()),
        Cmd::Restrict {
            config,
            triangulation,
            edges,
            nbase,
            out,
        } => cmd_restrict(&config, &triangulation, &edges, nbase, out.as_deref()),
    }
}

fn load_config(path: &Path) -> Result<Arc<PointConfiguration>> {
    let mut r = BufReader::new(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    );
    let c = read_points(&mut r).with_context(|| format!("cannot parse {}", path.display()))?;
    Ok(Arc::new(c))
}

/// Parse a triangulation file; an unreadable or ill-formed file is reported
/// as a witness, not a usage error.
fn load_triangulation(
    config: &Arc<PointConfiguration>,
    path: &Path,
) -> Result<std::result::Result<Triangulation, String>> {
    let mut r = BufReader::new(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    );
    Ok(match read_triangulation(Arc::clone(config), &mut r) {
        Ok(t) => Ok(t),
        Err(e) => Err(format!("{}: {}", path.display(), e)),
    })
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("cannot write {}", p.display()))?,
        None => print!("{}", content),
    }
    Ok(())
}

fn sanitize_stem(id: &str) -> String {
    let mut s: String = id
        .to_ascii_lowercase()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    while s.ends_with('_') {
        s.pop();
    }
    s
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

fn cmd_build(id: &str, out: &Path) -> Result<ExitCode> {
    let nc = build_construction(id)
        .with_context(|| format!("cannot build {:?} (known ids: {})", id, catalog().join(", ")))?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let stem = sanitize_stem(&nc.id);
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();

    if let Some(c) = &nc.config {
        let mut buf = Vec::new();
        write_points(c, &mut buf)?;
        files.push((format!("{}.points", stem), buf));
    }
    if let Some(v) = &nc.vectors {
        let rows: Vec<Vec<Rational>> = (0..v.len())
            .map(|i| {
                v.vector(i)
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let as_points = PointConfiguration::new(v.dim(), rows)?;
        let mut buf = Vec::new();
        write_points(&as_points, &mut buf)?;
        files.push((format!("{}.points", stem), buf));
    }
    if let Some(cx) = &nc.complex {
        let mut buf = String::new();
        for face in cx {
            let line: Vec<String> = face.iter().map(|v| v.to_string()).collect();
            buf.push_str(&line.join(" "));
            buf.push('\n');
        }
        files.push((format!("{}.complex", stem), buf.into_bytes()));
    }
    if let Some(o) = &nc.orientation {
        let mut buf = Vec::new();
        write_orientation(o, &mut buf)?;
        files.push((format!("{}.orientation", stem), buf));
    }
    if let Some(t) = &nc.reference {
        let mut buf = Vec::new();
        write_triangulation(t, &mut buf)?;
        files.push((format!("{}.triangulation", stem), buf));
    }

    files.sort_by(|a, b| a.0.cmp(&b.0));
    let mut manifest = String::new();
    for (name, bytes) in &files {
        fs::write(out.join(name), bytes)
            .with_context(|| format!("cannot write {}", out.join(name).display()))?;
        manifest.push_str(&format!("{}  {}\n", sha256_hex(bytes), name));
        println!("wrote {}", out.join(name).display());
    }
    fs::write(out.join("manifest.txt"), manifest.as_bytes())?;
    println!("wrote {}", out.join("manifest.txt").display());
    for note in &nc.notes {
        println!("note: {}", note);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(config: &Path, triangulation: &Path) -> Result<ExitCode> {
    let c = load_config(config)?;
    let t = match load_triangulation(&c, triangulation)? {
        Ok(t) => t,
        Err(witness) => {
            println!("invalid: {}", witness);
            return Ok(ExitCode::FAILURE);
        }
    };
    match t.validate() {
        Ok(()) => {
            println!(
                "valid: {} cells, covered volume {}",
                t.n_cells(),
                t.detsum()?
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("invalid: {}", e);
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_certify(
    id: &str,
    triangulation: Option<&Path>,
    report_path: Option<&Path>,
    kv_path: Option<&Path>,
) -> Result<ExitCode> {
    let (name, params) = parse_id(id)?;
    let no_params = |ok: bool| -> Result<()> {
        if ok {
            Ok(())
        } else {
            bail!("certificate {} takes no parameters", name)
        }
    };

    enum Prepared {
        Report(CertificateReport),
        BadFile(String),
    }

    let prepared = match name.as_str() {
        "A50" | "A50_PERTURBED" => {
            let perturbed = name == "A50_PERTURBED";
            let mut b = if perturbed {
                let (alpha, beta) = two_params(&name, params, a50_default_perturbation())?;
                a50_perturbed_bundle(&alpha, &beta)?
            } else {
                no_params(params.is_empty())?;
                a50_bundle()?
            };
            let full_id = if perturbed {
                format!("A50_PERTURBED({},{})", b.config.point(24)[4], b.config.point(49)[4])
            } else {
                name.clone()
            };
            match triangulation {
                Some(path) => match load_triangulation(&b.config, path)? {
                    Ok(t) => {
                        b.reference = t;
                        Prepared::Report(certify_a50_with(full_id, &b, perturbed)?)
                    }
                    Err(w) => Prepared::BadFile(w),
                },
                None => Prepared::Report(certify_a50_with(full_id, &b, perturbed)?),
            }
        }
        "A26" | "A26_PERTURBED" => {
            let perturbed = name == "A26_PERTURBED";
            let mut b = if perturbed {
                let (alpha, beta) = two_params(&name, params, a26_default_perturbation()?)?;
                a26_perturbed_bundle(&alpha, &beta)?
            } else {
                no_params(params.is_empty())?;
                a26_bundle()?
            };
            let full_id = if perturbed {
                format!("A26_PERTURBED({},{})", b.config.point(8)[4], b.config.point(17)[4])
            } else {
                name.clone()
            };
            match triangulation {
                Some(path) => match load_triangulation(&b.config, path)? {
                    Ok(t) => {
                        b.reference = t;
                        Prepared::Report(certify_a26_with(full_id, &b, perturbed)?)
                    }
                    Err(w) => Prepared::BadFile(w),
                },
                None => Prepared::Report(certify_a26_with(full_id, &b, perturbed)?),
            }
        }
        "A50_LOCAL_PRODUCT" => {
            no_params(params.is_empty())?;
            if triangulation.is_some() {
                bail!("A50_LOCAL_PRODUCT does not accept a substitute triangulation");
            }
            let b = a50_bundle()?;
            Prepared::Report(local_product_structure(&b)?)
        }
        other => bail!(
            "unknown certificate id {:?} (known: A50, A26, A50_PERTURBED, A26_PERTURBED, A50_LOCAL_PRODUCT)",
            other
        ),
    };

    let report = match prepared {
        Prepared::Report(r) => r,
        Prepared::BadFile(witness) => {
            println!("certificate input rejected: {}", witness);
            return Ok(ExitCode::FAILURE);
        }
    };

    write_output(report_path, &report.render_text())?;
    if report_path.is_some() {
        println!(
            "certificate {}: {}",
            report.construction,
            if report.passed() { "PASS" } else { "FAIL" }
        );
    }
    if let Some(p) = kv_path {
        write_output(Some(p), &report.render_key_values())?;
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_explore(
    config: &Path,
    seed: &Path,
    out: &Path,
    node_limit: usize,
    time_limit_secs: Option<u64>,
) -> Result<ExitCode> {
    let c = load_config(config)?;
    let t = match load_triangulation(&c, seed)? {
        Ok(t) => t,
        Err(witness) => {
            println!("invalid seed: {}", witness);
            return Ok(ExitCode::FAILURE);
        }
    };
    if let Err(e) = t.validate() {
        println!("invalid seed: {}", e);
        return Ok(ExitCode::FAILURE);
    }
    let limits = ExploreLimits {
        node_limit,
        time_limit: time_limit_secs.map(Duration::from_secs),
    };
    let g = enumerate_flip_graph(&t, &limits)?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    fs::write(out.join("adjacency.txt"), g.render_adjacency())?;
    fs::write(out.join("dictionary.txt"), g.render_dictionary())?;
    let summary = format!(
        "nodes={}\nedges={}\ncomponents={}\nstatus={}\n",
        g.n_nodes(),
        g.n_edges(),
        g.components.len(),
        if g.complete { "complete" } else { "partial" }
    );
    fs::write(out.join("summary.txt"), &summary)?;
    println!("{}", g.summary());
    Ok(ExitCode::SUCCESS)
}

fn cmd_flips(config: &Path, triangulation: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let c = load_config(config)?;
    let t = match load_triangulation(&c, triangulation)? {
        Ok(t) => t,
        Err(witness) => {
            println!("invalid: {}", witness);
            return Ok(ExitCode::FAILURE);
        }
    };
    if let Err(e) = t.validate() {
        println!("invalid: {}", e);
        return Ok(ExitCode::FAILURE);
    }
    let flips = find_flips(&t);
    let mut buf = Vec::new();
    write_flip_log(&flips, &mut buf)?;
    write_output(out, &String::from_utf8(buf).expect("log is ascii"))?;
    if out.is_some() {
        println!("{} flips", flips.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn read_edge_domain(path: &Path) -> Result<BTreeSet<(usize, usize)>> {
    let r = BufReader::new(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    );
    let mut edges = BTreeSet::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            bail!(
                "{}:{}: expected `u v`, got {:?}",
                path.display(),
                i + 1,
                line
            );
        }
        let u: usize = toks[0]
            .parse()
            .with_context(|| format!("{}:{}: bad index", path.display(), i + 1))?;
        let v: usize = toks[1]
            .parse()
            .with_context(|| format!("{}:{}: bad index", path.display(), i + 1))?;
        if u == v {
            bail!("{}:{}: edge endpoints coincide", path.display(), i + 1);
        }
        edges.insert((u.min(v), u.max(v)));
    }
    Ok(edges)
}

fn cmd_restrict(
    config: &Path,
    triangulation: &Path,
    edges: &Path,
    nbase: usize,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let c = load_config(config)?;
    let t = match load_triangulation(&c, triangulation)? {
        Ok(t) => t,
        Err(witness) => {
            println!("invalid: {}", witness);
            return Ok(ExitCode::FAILURE);
        }
    };
    let domain = read_edge_domain(edges)?;
    match triangulation_to_orientation(&t, &domain, nbase) {
        Ok(o) => {
            let mut buf = Vec::new();
            write_orientation(&o, &mut buf)?;
            write_output(out, &String::from_utf8(buf).expect("orientation is ascii"))?;
            if out.is_some() {
                println!("{} arcs", o.n_arcs());
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("no diagonal orientation: {}", e);
            Ok(ExitCode::FAILURE)
        }
    }
}
