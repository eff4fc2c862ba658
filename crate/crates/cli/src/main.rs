use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tfcalc::closedform::closed_tf;
use tfcalc::consistency::{crosscheck, obstruction_search, CheckConfig, CheckReport, Obstruction, ObstructionProblem};
use tfcalc::hotfss::{e1_page, run_pages, tf};
use tfcalc::les::tr_report;
use tfcalc::mackey::mackey_e1;
use tfcalc::render;
use tfcalc::{parse_rep, GradedGroup, PrismKind, Shift, VirtualRep};

#[derive(Parser)]
#[command(name = "tfcalc", version, about = "RO(T)-graded TF of perfectoid rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prism {
    Transversal,
    Crystalline,
}

impl From<Prism> for PrismKind {
    fn from(p: Prism) -> Self {
        match p {
            Prism::Transversal => PrismKind::Transversal,
            Prism::Crystalline => PrismKind::Crystalline,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "transversal")]
    prism: Prism,
    /// Representation `(d_0,...,d_{L-1};d_inf)`.
    #[arg(long, allow_hyphen_values = true)]
    rep: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-1..=0))]
    shift: i64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Common {
    fn alpha(&self) -> tfcalc::Result<VirtualRep> {
        Ok(parse_rep(&self.rep)?.with_shift(Shift::from_i64(self.shift)?))
    }
}

#[derive(Subcommand)]
enum Command {
    /// TF through the spectral sequence.
    Tf(Common),
    /// TF from the closed-form formulas.
    Closed(Common),
    /// The E^1 page of the homotopy orbits spectral sequence.
    E1(Common),
    /// Every page from E^1 to E^infinity.
    Pages(Common),
    /// The E^1 page of Mackey functors.
    MackeyE1(Common),
    /// TR^{n+1} from the long exact sequence.
    Tr {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// Seeded random comparison of the closed form and the spectral sequence.
    Check {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 5)]
        max_coeff: i64,
        #[arg(long, default_value_t = 3)]
        max_dinf: i64,
        /// Restrict to one prism kind; both by default.
        #[arg(long, value_enum)]
        prism: Option<Prism>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Search for maps between sums of cyclic groups composing to p^c.
    Obstruction {
        #[arg(long)]
        p: u64,
        /// Source exponents, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        source: Vec<u32>,
        /// Target exponents, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn group_out(g: &GradedGroup, f: Format) -> String {
    match f {
        Format::Text => render::group_text(g),
        Format::Latex => render::group_latex(g),
        Format::Json => render::group_json(g),
    }
}

fn check_text(r: &CheckReport) -> String {
    let mut out = format!("seed {} samples {}\n", r.seed, r.samples);
    for (name, t) in [("agreement", &r.agreement), ("degree", &r.degree), ("padding", &r.padding), ("length", &r.length)] {
        out.push_str(&format!("{name}: {} checked, {} failed\n", t.checked, t.failed));
    }
    for m in &r.mismatches {
        out.push_str(&format!(
            "mismatch sample {} {} shift {} {} [{}]: {}\n",
            m.sample,
            m.rep,
            m.shift,
            m.kind.name(),
            m.check,
            m.detail
        ));
    }
    for f in &r.findings {
        out.push_str(&format!("chain rule {:?} differs at sample {} {}: {:?} vs {:?}\n", f.rule, f.sample, f.rep, f.both, f.variant));
    }
    out
}

fn obstruction_text(prob: &ObstructionProblem, r: &Obstruction) -> String {
    let head = format!("p = {}, source {:?}, target {:?}\n", prob.p, prob.source, prob.target);
    match r {
        Obstruction::Infeasible { nodes } => format!("{head}infeasible ({nodes} nodes)\n"),
        Obstruction::Witness { witness, nodes } => {
            format!("{head}witness ({nodes} nodes)\nA = {:?}\nU = {:?}\n", witness.a, witness.u)
        }
    }
}

fn run(cmd: Command) -> tfcalc::Result<(String, u8)> {
    let out = match cmd {
        Command::Tf(c) => group_out(&tf(&c.alpha()?, c.prism.into())?, c.format),
        Command::Closed(c) => group_out(&closed_tf(&c.alpha()?, c.prism.into())?, c.format),
        Command::E1(c) => {
            let page = e1_page(&c.alpha()?, c.prism.into())?;
            match c.format {
                Format::Text => render::page_text(&page),
                Format::Latex => render::page_latex(&page),
                Format::Json => render::pages_json(&[&page]),
            }
        }
        Command::Pages(c) => {
            let pages = run_pages(&c.alpha()?, c.prism.into())?;
            let refs: Vec<_> = pages.iter().collect();
            match c.format {
                Format::Text => render::pages_text(&refs),
                Format::Latex => render::pages_latex(&refs),
                Format::Json => render::pages_json(&refs),
            }
        }
        Command::MackeyE1(c) => {
            let page = mackey_e1(&c.alpha()?, c.prism.into())?;
            match c.format {
                Format::Text => render::mackey_text(&page),
                Format::Latex => render::mackey_latex(&page),
                Format::Json => render::mackey_json(&page),
            }
        }
        Command::Tr { common: c, level } => {
            let r = tr_report(&c.alpha()?, level, c.prism.into())?;
            match c.format {
                Format::Text => render::tr_text(&r),
                Format::Latex => render::tr_latex(&r),
                Format::Json => render::tr_json(&r),
            }
        }
        Command::Check {
            samples,
            seed,
            max_len,
            max_coeff,
            max_dinf,
            prism,
            format,
        } => {
            let cfg = CheckConfig {
                samples,
                seed,
                max_len,
                max_coeff,
                max_dinf,
                kinds: match prism {
                    Some(p) => vec![p.into()],
                    None => vec![PrismKind::Transversal, PrismKind::Crystalline],
                },
            };
            let r = crosscheck(&cfg)?;
            let code = if r.failures() > 0 { 2 } else { 0 };
            let out = match format {
                Format::Json => render::to_json(&r),
                _ => check_text(&r),
            };
            return Ok((out, code));
        }
        Command::Obstruction {
            p,
            source,
            target,
            c,
            budget,
            format,
        } => {
            let mut prob = ObstructionProblem::uniform(p, source, target, c);
            prob.budget = budget;
            let r = obstruction_search(&prob)?;
            match format {
                Format::Json => render::to_json(&r),
                _ => obstruction_text(&prob, &r),
            }
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
