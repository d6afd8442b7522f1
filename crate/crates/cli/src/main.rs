//! Command-line front end: build and validate Schur rings over the two
//! nonabelian groups of order p^3, decide Schurity by either method, and
//! export the associated scheme.
//!
//! Exit codes: 0 success, 1 validation or verdict failure, 2 malformed
//! input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pschur_core::automorphism::{schurity_by_automorphisms, SearchConfig};
use pschur_core::compatibility::{
    incompatibility_walkthrough, schurity_by_compatibility, CompatError, CongruenceLine,
    OrderedBasis,
};
use pschur_core::pgroup::{Elem, Family, Group};
use pschur_core::scheme::CayleyScheme;
use pschur_core::sequences::{
    canonical_sequence, enumerate_suitable, mod4_3_sequence, sring_from_sequence,
};
use pschur_core::sring::{ReadError, SRing};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "pschur",
    version,
    about = "Schur rings over the nonabelian groups of order p^3"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Facts about one of the two group families at a prime
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Enumerate or construct the defining sequences
    Sequence {
        #[command(subcommand)]
        cmd: SequenceCmd,
    },
    /// Build, validate, or describe a Schur ring
    Sring {
        #[command(subcommand)]
        cmd: SringCmd,
    },
    /// Decide Schurity of a ring
    Schurity {
        #[command(subcommand)]
        cmd: SchurityCmd,
    },
    /// Export the ring's scheme as a color matrix
    Scheme {
        #[command(subcommand)]
        cmd: SchemeCmd,
    },
    /// Canned end-to-end runs with checked expectations
    Demo {
        #[command(subcommand)]
        cmd: DemoCmd,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    H1,
    H2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::H1 => Family::H1,
            FamilyArg::H2 => Family::H2,
        }
    }
}

#[derive(Args)]
struct GroupOpt {
    /// Group family
    #[arg(long, value_enum)]
    group: FamilyArg,
    /// Odd prime
    #[arg(long)]
    p: u16,
}

/// Exactly one way to pick the sequence.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct SeqChoice {
    /// The arithmetic-progression sequence, defined for every odd prime
    #[arg(long)]
    canonical: bool,
    /// The alternating-pair sequence for primes p = 3 (mod 4)
    #[arg(long = "mod4-3")]
    mod4_3: bool,
    /// Explicit comma-separated sequence values
    #[arg(long, value_name = "CSV")]
    seq: Option<String>,
}

impl SeqChoice {
    fn resolve(&self, p: u16) -> Result<Vec<u16>, Failure> {
        if self.canonical {
            canonical_sequence(p).map_err(|e| Failure::Validation(e.to_string()))
        } else if self.mod4_3 {
            mod4_3_sequence(p).map_err(|e| Failure::Validation(e.to_string()))
        } else {
            let text = self.seq.as_deref().expect("clap enforces one choice");
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u16>()
                        .map_err(|_| Failure::Parse(format!("bad sequence entry {tok:?}")))
                })
                .collect()
        }
    }
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, center, and generator facts
    Info(GroupOpt),
}

#[derive(Subcommand)]
enum SequenceCmd {
    /// List every suitable sequence at the prime, one per line
    Enum {
        #[arg(long)]
        p: u16,
    },
    /// Print one sequence as comma-separated values
    Make {
        #[arg(long)]
        p: u16,
        #[command(flatten)]
        choice: SeqChoice,
    },
}

#[derive(Subcommand)]
enum SringCmd {
    /// Construct the ring of a sequence and print its text form
    Build {
        #[command(flatten)]
        group: GroupOpt,
        #[command(flatten)]
        choice: SeqChoice,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a ring text (stdin when no file is given)
    Validate { file: Option<PathBuf> },
    /// Report the invariants of a ring
    Info { file: Option<PathBuf> },
}

#[derive(Args)]
struct SchurityOpt {
    /// Ring text file; stdin when absent
    #[arg(long)]
    sring: Option<PathBuf>,
    /// Print the stabilizer generators on a Schurian verdict
    #[arg(long)]
    emit_generators: bool,
    /// Worker threads for the search; 0 uses the default pool
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum SchurityCmd {
    /// Decide by the point-stabilizer automorphism search
    Aut(SchurityOpt),
    /// Decide by the class-compatibility criterion
    Compat {
        /// Ring text file; stdin when absent
        #[arg(long)]
        sring: Option<PathBuf>,
    },
    /// Run both methods and require agreement
    All(SchurityOpt),
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Print the full color matrix of the ring's scheme
    Export {
        /// Ring text file; stdin when absent
        #[arg(long)]
        sring: Option<PathBuf>,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// The two classical order-343 rings and their opposite verdicts
    #[command(name = "example-1.1")]
    Example11,
}

enum Failure {
    Validation(String),
    Parse(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        match self {
            Failure::Validation(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Failure::Parse(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn classify(err: ReadError) -> Failure {
    match err {
        ReadError::Parse(e) => Failure::Parse(e.to_string()),
        other => Failure::Validation(other.to_string()),
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early (e.g. `... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Group { cmd: GroupCmd::Info(opt) } => group_info(opt),
        Cmd::Sequence { cmd } => match cmd {
            SequenceCmd::Enum { p } => sequence_enum(p),
            SequenceCmd::Make { p, choice } => sequence_make(p, &choice),
        },
        Cmd::Sring { cmd } => match cmd {
            SringCmd::Build { group, choice, out } => sring_build(&group, &choice, out.as_deref()),
            SringCmd::Validate { file } => sring_validate(file.as_deref()),
            SringCmd::Info { file } => sring_info(file.as_deref()),
        },
        Cmd::Schurity { cmd } => match cmd {
            SchurityCmd::Aut(opt) => schurity_aut(&opt),
            SchurityCmd::Compat { sring } => schurity_compat(sring.as_deref()),
            SchurityCmd::All(opt) => schurity_all(&opt),
        },
        Cmd::Scheme {
            cmd: SchemeCmd::Export { sring, out },
        } => scheme_export(sring.as_deref(), out.as_deref()),
        Cmd::Demo { cmd: DemoCmd::Example11 } => demo_two_rings(),
    }
}

fn build_group(opt: &GroupOpt) -> Result<Arc<Group>, Failure> {
    Group::new(opt.group.into(), opt.p)
        .map(Arc::new)
        .map_err(|e| Failure::Validation(e.to_string()))
}

fn read_ring(file: Option<&std::path::Path>) -> Result<Arc<SRing>, Failure> {
    let text = match file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Validation(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    SRing::from_text(&text).map(Arc::new).map_err(classify)
}

fn write_out(out: Option<&std::path::Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn group_info(opt: GroupOpt) -> Result<(), Failure> {
    let g = build_group(&opt)?;
    println!("{}", g.spec().header());
    println!("order: {}", g.order());
    let a = g.gen_a();
    let b = g.gen_b();
    println!(
        "generator a: {} (order {})",
        g.format_elem(a),
        g.element_order(a)
    );
    println!(
        "generator b: {} (order {})",
        g.format_elem(b),
        g.element_order(b)
    );
    if let Some(c) = g.gen_c() {
        println!(
            "generator c: {} (order {})",
            g.format_elem(c),
            g.element_order(c)
        );
    }
    let center = g.center();
    println!(
        "center: generated by {} (order {})",
        g.format_elem(g.central_shift()),
        center.len()
    );
    Ok(())
}

fn csv(xs: &[u16]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn sequence_enum(p: u16) -> Result<(), Failure> {
    let all = enumerate_suitable(p).map_err(|e| Failure::Validation(e.to_string()))?;
    for xs in &all {
        println!("{}", csv(xs));
    }
    Ok(())
}

fn sequence_make(p: u16, choice: &SeqChoice) -> Result<(), Failure> {
    let xs = choice.resolve(p)?;
    pschur_core::sequences::is_suitable(p, &xs)
        .map_err(|e| Failure::Validation(e.to_string()))?;
    println!("{}", csv(&xs));
    Ok(())
}

fn sring_build(
    group: &GroupOpt,
    choice: &SeqChoice,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let g = build_group(group)?;
    let xs = choice.resolve(group.p)?;
    let sr = sring_from_sequence(&g, &xs).map_err(|e| Failure::Validation(e.to_string()))?;
    write_out(out, &sr.to_text())
}

fn sring_validate(file: Option<&std::path::Path>) -> Result<(), Failure> {
    let sr = read_ring(file)?;
    let singletons = sr.classes().iter().filter(|c| c.len() == 1).count();
    println!(
        "valid: {} with {} classes ({} singleton)",
        sr.group().spec().header(),
        sr.num_classes(),
        singletons
    );
    Ok(())
}

fn sring_info(file: Option<&std::path::Path>) -> Result<(), Failure> {
    let sr = read_ring(file)?;
    let g = sr.group();
    println!("{}", g.spec().header());
    let mut sizes: Vec<usize> = sr.classes().iter().map(|c| c.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let census: Vec<String> = sizes
        .iter()
        .map(|&s| {
            let count = sr.classes().iter().filter(|c| c.len() == s).count();
            format!("{count} of size {s}")
        })
        .collect();
    println!("classes: {} ({})", sr.num_classes(), census.join(", "));
    println!("commutative: {}", sr.is_commutative());
    println!("prime-power valencies: {}", sr.is_p_sring());
    let radical = sr.thin_radical();
    let residue = sr.thin_residue();
    println!("thin radical: {} elements", radical.len());
    println!(
        "thin residue: {} elements (equals radical: {})",
        residue.len(),
        radical == residue
    );
    let ab = sr.conditions_ab();
    println!(
        "outer classes partition into shift orbits: {}",
        ab.holds_a
    );
    println!(
        "outer stabilizers pairwise distinct and maximal in count: {}",
        ab.holds_b
    );
    println!("full block structure: {}", ab.block_structure);
    println!(
        "distinct outer stabilizers: {}",
        ab.distinct_stabilizers.len()
    );
    Ok(())
}

fn search_config(opt: &SchurityOpt) -> SearchConfig {
    SearchConfig {
        threads: opt.threads,
        ..SearchConfig::default()
    }
}

fn print_generators(generators: &[Vec<Elem>]) {
    for (i, gen) in generators.iter().enumerate() {
        let images: Vec<String> = gen.iter().map(|x| x.to_string()).collect();
        println!("generator {}: {}", i + 1, images.join(" "));
    }
}

fn schurity_aut(opt: &SchurityOpt) -> Result<(), Failure> {
    let sr = read_ring(opt.sring.as_deref())?;
    let result = schurity_by_automorphisms(&sr, &search_config(opt))
        .map_err(|e| Failure::Validation(e.to_string()))?;
    println!("schurian: {}", result.schurian);
    println!("stabilizer order: {}", result.aut.stabilizer_order);
    println!("automorphism group order: {}", result.aut.full_order);
    if let Some((class, orbits)) = &result.split_class {
        println!(
            "class {class} splits into {} stabilizer orbits",
            orbits.len()
        );
    }
    if opt.emit_generators {
        print_generators(&result.aut.generators);
    }
    Ok(())
}

fn describe_compat_error(e: CompatError) -> Failure {
    Failure::Validation(e.to_string())
}

fn schurity_compat(file: Option<&std::path::Path>) -> Result<(), Failure> {
    let sr = read_ring(file)?;
    let result = schurity_by_compatibility(&sr).map_err(describe_compat_error)?;
    println!("schurian: {}", result.schurian);
    println!("candidates tried: {}", result.candidates_tried);
    match &result.witness {
        Some(sigma) => {
            let basis = OrderedBasis::new(&sr).map_err(describe_compat_error)?;
            println!("witness found: true (inner subgroup fixed pointwise; images per class)");
            let p = sr.group().prime() as usize;
            for i in 1..p {
                for j in 0..p {
                    let class = basis.shifted_class(i, j);
                    let images: Vec<String> = sr.classes()[class]
                        .iter()
                        .map(|&x| sigma[x as usize].to_string())
                        .collect();
                    println!("  class {class}: {}", images.join(" "));
                }
            }
        }
        None => println!("witness found: false"),
    }
    congruence_table(&sr).map_err(describe_compat_error)?;
    Ok(())
}

/// When the ring is the residue-map ring over the first family, print the
/// three adjacent-block congruences, their composition, and the refuting
/// ordinal pair.
fn congruence_table(sr: &Arc<SRing>) -> Result<(), CompatError> {
    let p = sr.group().prime();
    if sr.group().family() != Family::H1 || p % 4 != 3 {
        return Ok(());
    }
    let basis = OrderedBasis::new(sr)?;
    match mod4_3_sequence(p) {
        Ok(seq) if seq == basis.sequence()[1..] => {}
        _ => return Ok(()),
    }
    let report = incompatibility_walkthrough(p)?;
    let line = |c: &CongruenceLine| format!("{}n = {}l (mod {})", c.a, c.b, c.modulus);
    println!("congruence table (adjacent representative blocks):");
    for c in [&report.case1, &report.case2, &report.case3] {
        println!("  blocks ({}, {}) via relation {}: {}", c.i, c.j, c.k, line(c));
    }
    let (ca, cb) = report.composed;
    println!("  composed through the middle block: {ca}n = {cb}l (mod {p})");
    let (n, l) = report.contradiction_point;
    println!("  contradiction at (n, l) = ({n}, {l})");
    Ok(())
}

fn schurity_all(opt: &SchurityOpt) -> Result<(), Failure> {
    let sr = read_ring(opt.sring.as_deref())?;
    let search = schurity_by_automorphisms(&sr, &search_config(opt))
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let compat = schurity_by_compatibility(&sr).map_err(describe_compat_error)?;
    println!("automorphism search: schurian={}", search.schurian);
    println!("compatibility:       schurian={}", compat.schurian);
    println!("stabilizer order: {}", search.aut.stabilizer_order);
    if opt.emit_generators {
        print_generators(&search.aut.generators);
    }
    if search.schurian != compat.schurian {
        return Err(Failure::Validation(
            "the two Schurity methods disagree".into(),
        ));
    }
    println!("methods agree: true");
    Ok(())
}

fn scheme_export(
    file: Option<&std::path::Path>,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let sr = read_ring(file)?;
    let cs = CayleyScheme::from_sring(sr);
    write_out(out, &cs.to_text())
}

fn demo_two_rings() -> Result<(), Failure> {
    let g = Group::new(Family::H1, 7)
        .map(Arc::new)
        .expect("7 is an odd prime");
    let cases: [(&str, Vec<u16>, bool); 2] = [
        ("A1", vec![0, 3, 6, 2, 5, 1], true),
        ("A2", vec![0, 4, 2, 5, 6, 1], false),
    ];
    let mut all_ok = true;
    for (name, xs, expect_schurian) in &cases {
        let sr = Arc::new(
            sring_from_sequence(&g, xs).map_err(|e| Failure::Validation(e.to_string()))?,
        );
        let search = schurity_by_automorphisms(&sr, &SearchConfig::default())
            .map_err(|e| Failure::Validation(e.to_string()))?;
        let compat = schurity_by_compatibility(&sr).map_err(describe_compat_error)?;
        println!("ring {name} ({}) over {}:", csv(xs), g.spec().header());
        println!(
            "  automorphism search: schurian={} stabilizer={} full={}",
            search.schurian, search.aut.stabilizer_order, search.aut.full_order
        );
        println!("  compatibility:       schurian={}", compat.schurian);
        let ok = search.schurian == *expect_schurian
            && compat.schurian == *expect_schurian
            && (!expect_schurian
                || (search.aut.stabilizer_order == 7u32.into()
                    && search.aut.full_order == 2401u32.into()));
        if !ok {
            all_ok = false;
        }
    }
    println!("verdicts match expectations: {all_ok}");
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Validation(
            "demo verdicts deviate from expectations".into(),
        ))
    }
}
