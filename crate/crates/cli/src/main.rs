//! `qtmx` — command-line front end for the quasi-Trefftz Maxwell library.
//!
//! Subcommands: `ops dump`, `bases dump`, `helmholtz`, `qt dims`,
//! `qt build`, `qt verify`, `qt oracle` and `selfcheck`. All output is
//! scriptable; exit codes are stable: 0 on success or all-pass, 1 when a
//! verification fails, 2 on usage or input errors.
//!
//! Setting `QT_CACHE_DIR` persists assembled operator matrices between runs.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtmaxwell::diffops::{operator_matrix, OpKind, OperatorMatrixDto};
use qtmaxwell::qtspace::{self, dimension_formula, pw_comparison_row, BasisFile};
use qtmaxwell::{
    bases, helmholtz, selfcheck, CoefficientJet, HomVecPoly, SpaceBasis,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qtmx",
    about = "Exact quasi-Trefftz polynomial spaces for the curl-curl Maxwell operator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graded differential operators
    Ops {
        #[command(subcommand)]
        action: OpsAction,
    },
    /// Bases of tagged polynomial subspaces
    Bases {
        #[command(subcommand)]
        action: BasesAction,
    },
    /// Helmholtz-decompose a homogeneous vector field read from JSON
    Helmholtz(HelmholtzArgs),
    /// Quasi-Trefftz space commands
    Qt {
        #[command(subcommand)]
        action: QtAction,
    },
    /// Run the library invariant suites
    Selfcheck(SelfcheckArgs),
}

#[derive(Subcommand)]
enum OpsAction {
    /// Emit the canonical matrix of one graded operator
    Dump(OpsDumpArgs),
}

#[derive(Args)]
struct OpsDumpArgs {
    /// Operator kind
    #[arg(long, value_enum)]
    op: OpArg,
    /// Codomain degree of the operator block
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum BasesAction {
    /// Emit one tagged space basis
    Dump(BasesDumpArgs),
}

#[derive(Args)]
struct BasesDumpArgs {
    /// Which space to dump
    #[arg(long, value_enum)]
    space: SpaceArg,
    /// Homogeneity degree
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct HelmholtzArgs {
    /// Input JSON file holding one homogeneous vector field
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum QtAction {
    /// Print the dimension formula and the plane-wave comparison row
    Dims {
        #[arg(long)]
        p: usize,
    },
    /// Construct, certify and write the full quasi-Trefftz basis
    Build(BuildArgs),
    /// Re-verify every element of a basis file against a coefficient jet
    Verify {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        eps: PathBuf,
    },
    /// Run the independent brute-force dimension oracle
    Oracle {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        eps: PathBuf,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    eps: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Re-read the written file and re-run the verifier on it
    #[arg(long)]
    verify: bool,
    /// Construct elements on this many threads (output order is fixed)
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SelfcheckArgs {
    #[arg(long, default_value_t = 6)]
    max_k: usize,
    #[arg(long, default_value_t = 4)]
    max_p: usize,
    /// Seed for the randomized checks
    #[arg(long, default_value_t = 20240901)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Grad,
    Div,
    Curl,
    Lap,
    Veclap,
}

impl From<OpArg> for OpKind {
    fn from(op: OpArg) -> OpKind {
        match op {
            OpArg::Grad => OpKind::Grad,
            OpArg::Div => OpKind::Div,
            OpArg::Curl => OpKind::Curl,
            OpArg::Lap => OpKind::ScalarLap,
            OpArg::Veclap => OpKind::VecLap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Sol,
    Irr,
    Harm,
    #[value(name = "sol-star")]
    SolStar,
    #[value(name = "irr-star")]
    IrrStar,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Failures carrying their process exit code: 1 for verification failures,
/// 2 for usage and input errors.
enum Failure {
    Verification(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) => m,
        }
    }
}

fn input_err(context: &str, detail: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{context}: {detail}"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_err(&format!("cannot read {what} {}", path.display()), e))?;
    serde_json::from_str(&text)
        .map_err(|e| input_err(&format!("malformed {what} {}", path.display()), e))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input_err(&format!("cannot write {}", path.display()), e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn require_p_over_two(p: usize) -> Result<(), Failure> {
    if p < 3 {
        return Err(Failure::Input(format!("p must exceed 2 (got {p})")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Ops {
            action: OpsAction::Dump(args),
        } => ops_dump(args),
        Command::Bases {
            action: BasesAction::Dump(args),
        } => bases_dump(args),
        Command::Helmholtz(args) => helmholtz_cmd(args),
        Command::Qt { action } => match action {
            QtAction::Dims { p } => qt_dims(p),
            QtAction::Build(args) => qt_build(args),
            QtAction::Verify { basis, eps } => qt_verify(&basis, &eps),
            QtAction::Oracle { p, eps } => qt_oracle(p, &eps),
        },
        Command::Selfcheck(args) => selfcheck_cmd(args),
    }
}

fn ops_dump(args: OpsDumpArgs) -> Result<(), Failure> {
    let matrix = operator_matrix(args.op.into(), args.k);
    match args.format {
        Format::Json => {
            let dto = OperatorMatrixDto::from(matrix.as_ref());
            let text = serde_json::to_string_pretty(&dto)
                .map_err(|e| input_err("serialization", e))?;
            println!("{text}");
        }
        Format::Table => {
            println!(
                "{} k={}: {}x{} (degree {} -> {})",
                matrix.op_kind.name(),
                matrix.codomain_degree,
                matrix.rows(),
                matrix.cols(),
                matrix.domain_degree,
                matrix.codomain_degree
            );
            for r in 0..matrix.rows() {
                let row: Vec<String> = (0..matrix.cols())
                    .map(|c| matrix.matrix.at(r, c).to_string())
                    .collect();
                println!("  {}", row.join(" "));
            }
        }
    }
    Ok(())
}

fn bases_dump(args: BasesDumpArgs) -> Result<(), Failure> {
    let basis: std::sync::Arc<SpaceBasis> = match args.space {
        SpaceArg::Sol => bases::solenoidal_basis(args.k),
        SpaceArg::Irr => bases::irrotational_basis(args.k),
        SpaceArg::Harm => bases::harmonic_basis(args.k),
        SpaceArg::SolStar => bases::star_complements(args.k).0,
        SpaceArg::IrrStar => bases::star_complements(args.k).1,
    };
    match args.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(basis.as_ref())
                .map_err(|e| input_err("serialization", e))?;
            println!("{text}");
        }
        Format::Table => {
            println!(
                "{:?} degree {}: {} vectors",
                basis.tag,
                basis.degree,
                basis.len()
            );
            for (i, v) in basis.vectors.iter().enumerate() {
                println!("  [{i}] {v:?}");
            }
        }
    }
    Ok(())
}

fn helmholtz_cmd(args: HelmholtzArgs) -> Result<(), Failure> {
    let field: HomVecPoly = read_json(&args.input, "vector field")?;
    let triple = helmholtz::decompose(&field);
    match args.format {
        Format::Json => {
            let text =
                serde_json::to_string_pretty(&triple).map_err(|e| input_err("serialization", e))?;
            write_or_print(args.out.as_deref(), &text)?;
        }
        Format::Table => {
            let text = format!(
                "degree {}\nsolenoidal-star: {:?}\nirrotational-star: {:?}\nharmonic: {:?}",
                triple.degree, triple.sol_star, triple.irr_star, triple.harmonic
            );
            write_or_print(args.out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn qt_dims(p: usize) -> Result<(), Failure> {
    require_p_over_two(p)?;
    println!("dim QT_{p} = {}", dimension_formula(p));
    let (_, pw, qt) = pw_comparison_row(p);
    println!("p = {p}: plane-wave pair space {pw}, quasi-Trefftz space {qt}");
    Ok(())
}

fn qt_build(args: BuildArgs) -> Result<(), Failure> {
    require_p_over_two(args.p)?;
    let eps: CoefficientJet = read_json(&args.eps, "coefficient file")?;
    let elements = qtspace::enumerate_basis_with_jobs(&eps, args.p, args.jobs)
        .map_err(|e| Failure::Verification(e.to_string()))?;
    let file = BasisFile::from_elements(args.p, &elements);
    let text = serde_json::to_string_pretty(&file).map_err(|e| input_err("serialization", e))?;
    std::fs::write(&args.out, &text)
        .map_err(|e| input_err(&format!("cannot write {}", args.out.display()), e))?;
    println!(
        "wrote {} elements (dim QT_{} = {}) to {}",
        file.dimension,
        args.p,
        dimension_formula(args.p),
        args.out.display()
    );
    if args.verify {
        qt_verify(&args.out, &args.eps)?;
    }
    Ok(())
}

fn qt_verify(basis_path: &Path, eps_path: &Path) -> Result<(), Failure> {
    let eps: CoefficientJet = read_json(eps_path, "coefficient file")?;
    let file: BasisFile = read_json(basis_path, "basis file")?;
    let mut failures = 0usize;
    for element in &file.elements {
        let outcome = qtspace::verify(&element.poly, &eps, file.p);
        if !outcome.all_ok() {
            failures += 1;
            println!(
                "FAIL {}: curl-curl {} divergence {}",
                element.name,
                if outcome.curlcurl_ok { "ok" } else { "nonzero" },
                if outcome.divergence_ok { "ok" } else { "nonzero" },
            );
        }
    }
    if failures > 0 {
        return Err(Failure::Verification(format!(
            "{failures} of {} elements failed verification",
            file.elements.len()
        )));
    }
    println!(
        "verified {} elements against the coefficient jet: all residuals vanish",
        file.elements.len()
    );
    Ok(())
}

fn qt_oracle(p: usize, eps_path: &Path) -> Result<(), Failure> {
    require_p_over_two(p)?;
    let eps: CoefficientJet = read_json(eps_path, "coefficient file")?;
    let oracle = qtspace::oracle_dimension(&eps, p)
        .map_err(|e| Failure::Verification(e.to_string()))?;
    let formula = dimension_formula(p);
    let verdict = if oracle == formula { "MATCH" } else { "MISMATCH" };
    println!("oracle={oracle} formula={formula} {verdict}");
    if oracle != formula {
        return Err(Failure::Verification(
            "oracle dimension disagrees with the formula".into(),
        ));
    }
    Ok(())
}

fn selfcheck_cmd(args: SelfcheckArgs) -> Result<(), Failure> {
    let results = selfcheck::run(args.max_k, args.max_p, args.seed);
    let mut all_ok = true;
    for r in &results {
        println!(
            "{} {:<22} {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        all_ok &= r.passed;
    }
    if !all_ok {
        return Err(Failure::Verification("selfcheck reported failures".into()));
    }
    Ok(())
}
