use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nodal_fm::cli_io::{emit_dot, module_from_json, parse_scalar, parse_sheaf, parse_torsion};
use nodal_fm::fm::{self, cohomology, fm_dual_check, fm_forward, fm_inverse, verify_fm, GlueSpec, Topology, VerifyOptions};
use nodal_fm::identify::{identify, Identified};
use nodal_fm::labels::{jordan, ModuleLabel};
use nodal_fm::module::{label_module, matlis_dual, twisted_matlis, FiniteLengthModule};
use nodal_fm::sheaf::TorsionDesc;

#[derive(Parser)]
#[command(name = "nodal-fm", version, about = "Fourier-Mukai transforms on the nodal cubic")]
struct Cli {
    /// Print machine readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Image of a semistable degree zero sheaf, e.g. `S[d=(-1)]`.
    Fm { desc: String },
    /// Sheaf whose image is the given torsion sheaf, e.g. `Nq[2(3,2)1]`.
    FmInverse { tdesc: String },
    /// Dual of a sheaf descriptor.
    Dual { desc: String },
    /// Matlis dual of a torsion descriptor.
    Matlis { tdesc: String },
    /// Matlis dual followed by the pullback along the involution.
    TwistedMatlis { tdesc: String },
    /// Decompose a module given as JSON (`-` reads stdin).
    Identify { file: String },
    /// Compare the transform with the cokernel of the evaluation matrix.
    Verify {
        desc: String,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the transform of the dual with the twisted Matlis dual of the transform.
    DualCheck {
        desc: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cohomology of a line bundle on a cycle or chain of lines.
    Cohomology {
        #[arg(long, value_enum)]
        topology: TopologyArg,
        /// Comma separated multidegree, e.g. `1,0,-1`.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Action of a word in A, B, T (with ^-1) on (rank, degree).
    Charge { word: String },
    /// Check the relations among the charge matrices.
    Relations,
    /// Diagram of a module at the node.
    Diagram {
        tdesc: String,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Cycle,
    Chain,
}

enum Failure {
    Usage(String),
    Math(String),
}

type Outcome = Result<(String, Value), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn math(e: impl std::fmt::Display) -> Failure {
    Failure::Math(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.cmd) {
        Ok((text, value)) => {
            let out = if json { serde_json::to_string_pretty(&value).expect("json value") } else { text };
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Math(msg)) => {
            report_error(json, "math", &msg);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            report_error(json, "usage", &msg);
            ExitCode::from(2)
        }
    }
}

fn emit(s: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn report_error(json: bool, kind: &str, msg: &str) {
    if json {
        emit(&json!({ "ok": false, "error": kind, "message": msg }).to_string());
    } else {
        eprintln!("error: {msg}");
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Fm { desc } => {
            let d = parse_sheaf(&desc).map_err(usage)?;
            let t = fm_forward(&d).map_err(math)?;
            let (c0, c1) = (d.charge(), t.charge());
            let v = json!({ "input": d.to_string(), "output": t.to_string(), "charge_in": c0, "charge_out": c1 });
            Ok((t.to_string(), v))
        }
        Cmd::FmInverse { tdesc } => {
            let t = parse_torsion(&tdesc).map_err(usage)?;
            let d = fm_inverse(&t).map_err(math)?;
            Ok((d.to_string(), json!({ "input": t.to_string(), "output": d.to_string() })))
        }
        Cmd::Dual { desc } => {
            let d = parse_sheaf(&desc).map_err(usage)?;
            let dual = d.dual();
            Ok((dual.to_string(), json!({ "input": d.to_string(), "output": dual.to_string() })))
        }
        Cmd::Matlis { tdesc } => torsion_dual(&tdesc, false),
        Cmd::TwistedMatlis { tdesc } => torsion_dual(&tdesc, true),
        Cmd::Identify { file } => {
            let text = if file == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(usage)?
            } else {
                std::fs::read_to_string(&file).map_err(|e| usage(format!("{file}: {e}")))?
            };
            let m = module_from_json(&text).map_err(usage)?;
            identified(&m)
        }
        Cmd::Verify { desc, trunc, seed } => {
            let d = parse_sheaf(&desc).map_err(usage)?;
            let mut opts = VerifyOptions { order: trunc, ..VerifyOptions::default() };
            if let Some(s) = seed {
                opts.seed = s;
            }
            let r = verify_fm(&d, opts).map_err(math)?;
            let got = match &r.identified {
                Identified::Labels(ls) => ls.iter().map(ToString::to_string).collect::<Vec<_>>(),
                Identified::Unidentified(diag) => vec![format!("unidentified: {diag:?}")],
            };
            let v = json!({
                "input": d.to_string(),
                "expected": r.expected.to_string(),
                "identified": got,
                "basis": r.basis,
                "order": r.order,
                "length": r.length,
                "rank": r.rank,
                "pass": r.passed(),
            });
            let text = format!(
                "{}: expected {}, identified {}, length {} rank {} (order {})",
                if r.passed() { "pass" } else { "FAIL" },
                r.expected,
                got.join(" + "),
                r.length,
                r.rank,
                r.order
            );
            if r.passed() {
                Ok((text, v))
            } else {
                Err(Failure::Math(text))
            }
        }
        Cmd::DualCheck { desc, seed } => {
            let d = parse_sheaf(&desc).map_err(usage)?;
            let r = fm_dual_check(&d, seed.unwrap_or(nodal_fm::module::DEFAULT_SEED)).map_err(math)?;
            let v = json!({
                "input": d.to_string(),
                "image": r.image.to_string(),
                "dual": r.dual.to_string(),
                "dual_image": r.dual_image.to_string(),
                "outcome": format!("{:?}", r.outcome),
                "pass": r.passed(),
            });
            let text = format!(
                "{}: F(E) = {}, E^v = {}, F(E^v) = {}",
                if r.passed() { "pass" } else { "FAIL" },
                r.image,
                r.dual,
                r.dual_image
            );
            if r.passed() {
                Ok((text, v))
            } else {
                Err(Failure::Math(text))
            }
        }
        Cmd::Cohomology { topology, d, lambda, m } => {
            let degrees = d
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|e| usage(format!("--d: {s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let l = parse_scalar(&lambda).map_err(usage)?;
            if m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            let topo = match topology {
                TopologyArg::Cycle => Topology::Cycle,
                TopologyArg::Chain => Topology::Chain,
            };
            let spec = GlueSpec::new(topo, degrees, jordan(m, &l)).map_err(usage)?;
            let c = cohomology(&spec);
            let chi = spec.euler_characteristic();
            let v = json!({ "h0": c.h0, "h1": c.h1, "chi": chi });
            Ok((format!("h0 = {}, h1 = {}, chi = {chi}", c.h0, c.h1), v))
        }
        Cmd::Charge { word } => {
            let w = fm::parse_word(&word).map_err(usage)?;
            let mat = fm::sl2_matrix(&w);
            let text = format!("[[{}, {}], [{}, {}]]", mat[0][0], mat[0][1], mat[1][0], mat[1][1]);
            Ok((text, json!({ "word": word, "matrix": mat })))
        }
        Cmd::Relations => {
            let checks = fm::check_relations();
            let text = checks.iter().map(|c| format!("{} {}", if c.holds { "pass" } else { "FAIL" }, c.name)).collect::<Vec<_>>().join("\n");
            if checks.iter().all(|c| c.holds) {
                Ok((text, json!({ "relations": checks, "pass": true })))
            } else {
                Err(Failure::Math(text))
            }
        }
        Cmd::Diagram { tdesc, dot } => {
            let t = parse_torsion(&tdesc).map_err(usage)?;
            let text = emit_dot(&t).map_err(math)?;
            let label = t.label().expect("emit_dot succeeded");
            let d = nodal_fm::labels::Diagram::of_label(&label);
            let v = json!({ "label": t.to_string(), "nodes": d.vertices.len(), "edges": d.edges.len(), "dot": text });
            if dot {
                Ok((text.trim_end().to_owned(), v))
            } else {
                Ok((format!("{}: {} nodes, {} edges", t, d.vertices.len(), d.edges.len()), v))
            }
        }
    }
}

fn torsion_dual(tdesc: &str, twisted: bool) -> Outcome {
    let t = parse_torsion(tdesc).map_err(usage)?;
    if let TorsionDesc::SmoothPoint { lambda, len } = &t {
        let out = TorsionDesc::SmoothPoint { lambda: if twisted { lambda.recip() } else { lambda.clone() }, len: *len };
        return Ok((out.to_string(), json!({ "input": t.to_string(), "output": [out.to_string()] })));
    }
    let m = label_module(&t.label().expect("node support"));
    let dual = if twisted { twisted_matlis(&m) } else { matlis_dual(&m) };
    let (text, mut v) = identified(&dual)?;
    v["input"] = json!(t.to_string());
    Ok((text, v))
}

fn identified(m: &FiniteLengthModule) -> Outcome {
    match identify(m) {
        Identified::Labels(ls) => {
            let names: Vec<String> = ls.iter().map(ModuleLabel::to_string).collect();
            let text = if names.is_empty() { "0".to_owned() } else { names.join(" + ") };
            Ok((text, json!({ "dim": m.dim(), "output": names })))
        }
        Identified::Unidentified(d) => Err(Failure::Math(format!(
            "could not identify; recognised {:?}, unresolved dimensions {:?}, factors {:?}, notes {:?}",
            d.partial.iter().map(ToString::to_string).collect::<Vec<_>>(),
            d.unresolved_dims,
            d.charpoly_factors,
            d.notes
        ))),
    }
}
