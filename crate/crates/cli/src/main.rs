use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hlmod_core::descent::{descent, descent_report, repeated_descent};
use hlmod_core::exact::rational::format_rational;
use hlmod_core::exact::Rational;
use hlmod_core::koszul::{purity_check, KoszulComplex};
use hlmod_core::mixed::{mixed_hlt_check, mixed_hrr_check, OperatorTuple};
use hlmod_core::polytope::{h_vector, mixed_volume, PolytopeAlgebra};
use hlmod_core::sampling::ConeSampler;
use hlmod_core::suite::{self, guarded, SuiteOptions, DEFAULT_TUPLES};
use hlmod_core::torus::build_torus_module;
use hlmod_core::wire::{
    export_module, import_module, parse_module, parse_ops, parse_polytope, parse_torus,
    parse_tuple, Scalar,
};
use hlmod_core::{CheckReport, Error, HLModule, Result};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hlmod",
    version,
    about = "Build and check polarized Hodge-Lefschetz modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simple polytopes given by normals and support numbers.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Cohomology of complex tori with Hermitian Kähler classes.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Modules given directly in the module JSON format.
    #[command(subcommand)]
    Module(ModuleCmd),
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every randomized suite.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random tuples per check and admissible length.
    #[arg(long, default_value_t = DEFAULT_TUPLES)]
    tuples: usize,
    /// Emit JSON lines instead of text.
    #[arg(long)]
    json: bool,
    /// Operator as named coefficients, e.g. `d1=1,d3=2/3`; defaults to N0.
    #[arg(long)]
    ops: Option<String>,
}

impl Common {
    fn options(&self) -> SuiteOptions {
        SuiteOptions {
            seed: self.seed,
            tuples: self.tuples,
        }
    }
}

#[derive(Subcommand)]
enum PolytopeCmd {
    /// Build the module and print its invariants.
    Build {
        file: PathBuf,
        /// Write the module JSON here.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Validate the module and run theorem checks.
    Check {
        file: PathBuf,
        /// Also run the mixed, descent and purity suites.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed volume of k supports, each a JSON array of numbers.
    MixedVolume {
        file: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        supports: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the h-vector.
    Hvector {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum TorusCmd {
    /// Build the module and print its Hodge numbers.
    Build {
        file: PathBuf,
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Validate the module and run theorem checks.
    Check {
        file: PathBuf,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Validate the module and run theorem checks.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Descend along an element, `times` times.
    Descent {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        times: usize,
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Koszul purity for seeded tuples, or for `--tuple`.
    Purity {
        #[arg(long = "in")]
        input: PathBuf,
        /// Tuple as `[{"T": {"d1": "1"}}, ...]`.
        #[arg(long)]
        tuple: Option<String>,
        /// Longest seeded tuple.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed hard Lefschetz for seeded tuples, or for `--tuple`.
    MixedHlt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tuple: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed Hodge-Riemann relations for seeded tuples, or for `--tuple`.
    MixedHrr {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tuple: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Read a module and validate its structure.
    Import {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the module of a polytope or torus file.
    Export {
        #[arg(long, conflicts_with = "torus", required_unless_present = "torus")]
        polytope: Option<PathBuf>,
        #[arg(long)]
        torus: Option<PathBuf>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn coeffs(m: &HLModule, common: &Common) -> Result<Option<Vec<Rational>>> {
    common.ops.as_deref().map(|s| parse_ops(m, s)).transpose()
}

fn emit(reports: &[CheckReport], json: bool) -> u8 {
    for r in reports {
        if json {
            println!("{}", r.to_json());
        } else {
            println!("{r}");
        }
    }
    suite::exit_code(reports) as u8
}

fn print_value(value: serde_json::Value, text: String, json: bool) {
    if json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn dims_text(m: &HLModule) -> String {
    m.grade_dims()
        .iter()
        .map(|(l, d)| format!("V_{l}: {d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn seeded_tuples(
    m: &HLModule,
    tuple: Option<&str>,
    common: &Common,
    lengths: std::ops::RangeInclusive<usize>,
) -> Result<Vec<OperatorTuple>> {
    if let Some(text) = tuple {
        return Ok(vec![parse_tuple(m, text)?]);
    }
    let mut sampler = ConeSampler::new(m, common.seed);
    let mut out = Vec::new();
    for len in lengths {
        for _ in 0..common.tuples {
            out.push(sampler.tuple(len)?);
        }
    }
    Ok(out)
}

type TupleCheck = fn(&HLModule, &OperatorTuple) -> Result<CheckReport>;

fn tuple_reports(
    m: &HLModule,
    tuples: &[OperatorTuple],
    name: &str,
    check: TupleCheck,
) -> Vec<CheckReport> {
    tuples
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut r = guarded(name, name, || check(m, t));
            r.check = format!("{name} #{i} (length {})", t.len());
            r
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Polytope(cmd) => match cmd {
            PolytopeCmd::Build {
                file,
                export,
                common,
            } => {
                let p = parse_polytope(&read(&file)?)?;
                let alg = PolytopeAlgebra::new(&p)?;
                let m = alg.module();
                let h = h_vector(m)?;
                if let Some(path) = export {
                    write(&path, &export_module(m))?;
                }
                print_value(
                    json!({
                        "name": p.name(),
                        "dim": p.dim(),
                        "facets": p.facet_count(),
                        "vertices": p.vertices().len(),
                        "f_vector": p.f_vector(),
                        "h_vector": h,
                        "volume": format_rational(&p.triangulation_volume()),
                        "volume_polynomial": alg.volume_polynomial().to_string(),
                        "grade_dims": m.grade_dims(),
                    }),
                    format!(
                        "{}: dim {}, {} facets, {} vertices\nf-vector: {}\nh-vector: {}\nvolume: {}\nnu = {}\n{}",
                        p.name(),
                        p.dim(),
                        p.facet_count(),
                        p.vertices().len(),
                        join(&p.f_vector()),
                        join(&h),
                        format_rational(&p.triangulation_volume()),
                        alg.volume_polynomial(),
                        dims_text(m)
                    ),
                    common.json,
                );
                Ok(0)
            }
            PolytopeCmd::Check { file, all, common } => {
                let p = parse_polytope(&read(&file)?)?;
                let alg = PolytopeAlgebra::new(&p)?;
                let c = coeffs(alg.module(), &common)?;
                let mut reports = suite::polytope_reports(&alg, &common.options());
                reports.extend(suite::module_suite(
                    alg.module(),
                    c.as_deref(),
                    all,
                    &common.options(),
                ));
                Ok(emit(&reports, common.json))
            }
            PolytopeCmd::MixedVolume {
                file,
                supports,
                common,
            } => {
                let p = parse_polytope(&read(&file)?)?;
                let alg = PolytopeAlgebra::new(&p)?;
                let supports = supports
                    .iter()
                    .map(|s| {
                        let v: Vec<Scalar> = serde_json::from_str(s)
                            .map_err(|e| Error::Parse(format!("support `{s}`: {e}")))?;
                        v.iter().map(Scalar::rational).collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let v = mixed_volume(alg.volume_polynomial(), &supports)?;
                print_value(json!(format_rational(&v)), format_rational(&v), common.json);
                Ok(0)
            }
            PolytopeCmd::Hvector { file, common } => {
                let p = parse_polytope(&read(&file)?)?;
                let alg = PolytopeAlgebra::new(&p)?;
                let h = h_vector(alg.module())?;
                print_value(json!(h), join(&h), common.json);
                Ok(0)
            }
        },
        Command::Torus(cmd) => match cmd {
            TorusCmd::Build {
                file,
                export,
                common,
            } => {
                let m = build_torus_module(&parse_torus(&read(&file)?)?)?;
                if let Some(path) = export {
                    write(&path, &export_module(&m))?;
                }
                let k = m.k();
                let hodge: Vec<Vec<usize>> = (0..=k)
                    .map(|p| (0..=k).map(|q| m.bidegree_indices(p, q).len()).collect())
                    .collect();
                let rows: Vec<String> = hodge.iter().map(|r| join(r)).collect();
                print_value(
                    json!({"weight": m.weight(), "dim": m.dim(), "hodge_numbers": hodge, "grade_dims": m.grade_dims()}),
                    format!(
                        "torus of dimension {k}, total dimension {}\nHodge numbers h^(p,q), rows p = 0..{k}:\n{}\n{}",
                        m.dim(),
                        rows.join("\n"),
                        dims_text(&m)
                    ),
                    common.json,
                );
                Ok(0)
            }
            TorusCmd::Check { file, all, common } => {
                let m = build_torus_module(&parse_torus(&read(&file)?)?)?;
                let c = coeffs(&m, &common)?;
                Ok(emit(
                    &suite::module_suite(&m, c.as_deref(), all, &common.options()),
                    common.json,
                ))
            }
        },
        Command::Module(cmd) => match cmd {
            ModuleCmd::Check { input, all, common } => {
                let m = parse_module(&read(&input)?)?;
                let c = coeffs(&m, &common)?;
                Ok(emit(
                    &suite::module_suite(&m, c.as_deref(), all, &common.options()),
                    common.json,
                ))
            }
            ModuleCmd::Descent {
                input,
                times,
                export,
                common,
            } => {
                let m = parse_module(&read(&input)?)?;
                let c = coeffs(&m, &common)?.unwrap_or_else(|| m.reference().to_vec());
                let result = if times == 1 {
                    descent(&m, &c)?
                } else {
                    repeated_descent(&m, &OperatorTuple::new(&m, vec![c; times])?)?
                };
                if let Some(path) = export {
                    write(&path, &export_module(&result.module))?;
                }
                let code = emit(&[descent_report(&result)], common.json);
                if !common.json {
                    println!(
                        "weight {}; {}",
                        result.module.weight(),
                        dims_text(&result.module)
                    );
                }
                Ok(code)
            }
            ModuleCmd::Purity {
                input,
                tuple,
                max_len,
                common,
            } => {
                let m = parse_module(&read(&input)?)?;
                let tuples = seeded_tuples(&m, tuple.as_deref(), &common, 1..=max_len)?;
                let reports = tuple_reports(&m, &tuples, "koszul-purity", |m, t| {
                    Ok(purity_check(&KoszulComplex::new(m, t)?))
                });
                Ok(emit(&reports, common.json))
            }
            ModuleCmd::MixedHlt {
                input,
                tuple,
                common,
            } => {
                let m = parse_module(&read(&input)?)?;
                let tuples = seeded_tuples(&m, tuple.as_deref(), &common, 0..=m.weight())?;
                Ok(emit(
                    &tuple_reports(&m, &tuples, "mixed-hlt", mixed_hlt_check),
                    common.json,
                ))
            }
            ModuleCmd::MixedHrr {
                input,
                tuple,
                common,
            } => {
                let m = parse_module(&read(&input)?)?;
                let lengths = 1..=m.weight().saturating_sub(1);
                let tuples = seeded_tuples(&m, tuple.as_deref(), &common, lengths)?;
                Ok(emit(
                    &tuple_reports(&m, &tuples, "mixed-hrr", mixed_hrr_check),
                    common.json,
                ))
            }
            ModuleCmd::Import { input, common } => {
                let (_, report) = import_module(&read(&input)?)?;
                Ok(emit(&[report], common.json))
            }
            ModuleCmd::Export {
                polytope,
                torus,
                out,
            } => {
                let m = match (polytope, torus) {
                    (Some(p), _) => {
                        PolytopeAlgebra::new(&parse_polytope(&read(&p)?)?)?.into_module()
                    }
                    (_, Some(t)) => build_torus_module(&parse_torus(&read(&t)?)?)?,
                    (None, None) => unreachable!("clap requires one source"),
                };
                let text = export_module(&m);
                match out {
                    Some(path) => write(&path, &text)?,
                    None => println!("{text}"),
                }
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
