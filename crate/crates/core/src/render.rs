//! Text, LaTeX and JSON output for groups, spectral-sequence pages, Mackey
//! pages, TR reports and search results.

use std::cell::Cell;
use std::fmt::Write as _;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::gold::GoldMonomial;
use crate::group::GradedGroup;
use crate::hotfss::{SpectralPage, Summand};
use crate::les::{KernelStatus, TrReport};
use crate::mackey::{LewisDiagram, LevelValue, MackeyEntry, MackeyPage};
use crate::prism::{CyclicIdeal, PrismKind, PrismScalar};
use crate::rep::{Shift, VirtualRep};

// ---------------------------------------------------------------- text

fn cell(ideal: &CyclicIdeal, g: &GoldMonomial) -> String {
    format!("{ideal}⟨{g}⟩")
}

fn page_label(page: &SpectralPage) -> String {
    if page.is_final {
        "E^inf".into()
    } else {
        format!("E^{}", page.page)
    }
}

fn summand_cell(s: Option<&Summand>) -> String {
    s.map(|s| cell(&s.ideal, &s.generator)).unwrap_or_default()
}

/// One line per filtration, `f | column -1 | column 0`, then one line per
/// extension.
pub fn page_text(page: &SpectralPage) -> String {
    let mut out = format!("{} {} {}\n", page_label(page), page.alpha, page.kind.name());
    for f in (0..=page.alpha.len()).rev() {
        let odd = summand_cell(page.torsion.get(&f));
        let even = if f == 0 { summand_cell(page.free.as_ref()) } else { String::new() };
        let _ = writeln!(out, "{}", format!("{f} | {odd} | {even}").trim_end());
    }
    for link in &page.extension_links {
        let rows: Vec<String> = link.rows.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "ext {} => {}", rows.join(","), cell(&link.ideal, &link.generator));
    }
    out
}

pub fn pages_text(pages: &[&SpectralPage]) -> String {
    pages.iter().map(|p| page_text(p)).collect::<Vec<_>>().join("\n")
}

pub fn group_text(g: &GradedGroup) -> String {
    format!("{g}\n")
}

fn level_text(v: &LevelValue) -> String {
    v.to_string()
}

pub fn lewis_text(d: &LewisDiagram) -> String {
    let mut top = format!("{}: {}", d.symbol, level_text(&d.top));
    if let (Some(r), Some(t)) = (&d.res, &d.tr) {
        let _ = write!(top, "  (res {r}, tr {t})");
    }
    format!("{top}\n{}: {}\n", " ".repeat(d.symbol.to_string().chars().count()), level_text(&d.bottom))
}

fn mackey_cell(e: Option<&MackeyEntry>) -> String {
    e.map(|e| format!("{}⟨{}⟩", e.symbol, e.generator)).unwrap_or_default()
}

pub fn mackey_text(page: &MackeyPage) -> String {
    let mut out = format!("E^1 {} {}\n", page.alpha, page.kind.name());
    for f in (0..=page.alpha.len()).rev() {
        let row = page.rows.get(&f);
        let odd = mackey_cell(row.and_then(|r| r.odd.as_ref()));
        let even = mackey_cell(row.and_then(|r| r.even.as_ref()));
        let _ = writeln!(out, "{}", format!("{f} | {odd} | {even}").trim_end());
    }
    out
}

pub fn tr_text(r: &TrReport) -> String {
    let mut out = String::new();
    let n = r.level;
    let _ = writeln!(out, "TR^{} at {} ({})", n + 1, r.alpha, r.kind.name());
    let _ = writeln!(out, "TF_(a+l{n}) = {}", r.source_even);
    let _ = writeln!(out, "TF_a = {}", r.target_even);
    let _ = writeln!(out, "TF_(a+l{n}-1) = {}", r.source_odd);
    let _ = writeln!(out, "TF_(a-1) = {}", r.target_odd);
    let map = r.even_map.as_ref().map_or("0".to_string(), |s| s.to_string());
    let _ = writeln!(out, "a_l{n} on even degrees: {map}");
    let _ = writeln!(out, "cokernel: {}", r.cokernel);
    match &r.kernel {
        KernelStatus::Exact(k) => {
            let _ = writeln!(out, "kernel: {k}");
        }
        KernelStatus::Undetermined(why) => {
            let _ = writeln!(out, "kernel: undetermined ({why})");
        }
    }
    out
}

// ---------------------------------------------------------------- LaTeX

pub fn scalar_latex(s: &PrismScalar) -> String {
    if s.is_one() {
        return "1".into();
    }
    let sup = |e: u64| if e == 1 { String::new() } else { format!("^{{{e}}}") };
    match s {
        PrismScalar::P(k) => format!("p{}", sup(*k)),
        PrismScalar::Phi(m) => m
            .iter()
            .map(|(i, e)| match i {
                0 => format!("\\xi{}", sup(*e)),
                1 => format!("\\phi(\\xi){}", sup(*e)),
                _ => format!("\\phi^{{{i}}}(\\xi){}", sup(*e)),
            })
            .collect(),
    }
}

pub fn module_latex(ideal: &CyclicIdeal) -> String {
    if ideal.is_unit() {
        return "0".into();
    }
    match ideal.gens() {
        [] => "A".into(),
        [g] if matches!(g, PrismScalar::Phi(m) if m.len() > 1) => format!("A/({})", scalar_latex(g)),
        [g] => format!("A/{}", scalar_latex(g)),
        gs => format!("A/({})", gs.iter().map(scalar_latex).collect::<Vec<_>>().join(",")),
    }
}

pub fn monomial_latex(g: &GoldMonomial) -> String {
    let sup = |e: i64| if e == 1 { String::new() } else { format!("^{{{e}}}") };
    let mut s = String::new();
    if g.suspension() == Shift::MinusOne {
        s.push_str("\\Sigma^{-1}");
    }
    for (i, e) in g.a_exps() {
        let _ = write!(s, "a_{{{i}}}{}", sup(*e));
    }
    for (i, e) in g.u_exps() {
        let _ = write!(s, "u_{{{i}}}{}", sup(*e));
    }
    for (j, e) in g.ulam_exps() {
        let _ = write!(s, "u_{{\\lambda_{{{j}}}}}{}", sup(*e));
    }
    if g.is_one() {
        s.push('1');
    }
    s
}

fn cell_latex(ideal: &CyclicIdeal, g: &GoldMonomial) -> String {
    format!("${}\\langle {}\\rangle$", module_latex(ideal), monomial_latex(g))
}

fn summand_latex(s: Option<&Summand>) -> String {
    s.map(|s| cell_latex(&s.ideal, &s.generator)).unwrap_or_default()
}

/// A tabular in the layout of a printed chart: filtration rows, columns
/// `-1` and `0`. Transversal extensions are braces in a third column;
/// crystalline ones are listed under the table.
pub fn page_latex(page: &SpectralPage) -> String {
    let label = if page.is_final { "E^\\infty".to_string() } else { format!("E^{{{}}}", page.page) };
    let braces = page.kind == PrismKind::Transversal && !page.extension_links.is_empty();
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{tabular}}{{c|cc{}}}", if braces { "l" } else { "" });
    for f in (0..=page.alpha.len()).rev() {
        let odd = summand_latex(page.torsion.get(&f));
        let even = if f == 0 { summand_latex(page.free.as_ref()) } else { String::new() };
        let mut line = format!("  {f} & {odd} & {even}");
        if braces {
            if let Some(link) = page.extension_links.iter().find(|l| l.rows[0] == f) {
                let span = link.rows[0] - link.rows.last().expect("nonempty") + 1;
                let _ = write!(line, " & \\rdelim\\}}{{{span}}}{{0em}}[{}]", cell_latex(&link.ideal, &link.generator));
            } else {
                line.push_str(" &");
            }
        }
        let _ = writeln!(out, "{} \\\\", line.trim_end());
    }
    let _ = writeln!(out, "  \\hline");
    let _ = writeln!(out, "  ${label}$ & $-1$ & $0${}", if braces { " &" } else { "" });
    let _ = writeln!(out, "\\end{{tabular}}");
    if page.kind == PrismKind::Crystalline {
        for link in &page.extension_links {
            let rows: Vec<String> = link.rows.iter().map(|r| r.to_string()).collect();
            let _ = writeln!(
                out,
                "\\par\\noindent Extension joining rows {}: {}",
                rows.join(", "),
                cell_latex(&link.ideal, &link.generator)
            );
        }
    }
    out
}

pub fn pages_latex(pages: &[&SpectralPage]) -> String {
    pages.iter().map(|p| page_latex(p)).collect::<Vec<_>>().join("\\qquad\n")
}

pub fn group_latex(g: &GradedGroup) -> String {
    if g.is_zero() {
        return "$0$\n".into();
    }
    let parts: Vec<String> = g
        .summands()
        .iter()
        .map(|s| format!("{}\\langle {}\\rangle", module_latex(&s.ideal), monomial_latex(&s.generator)))
        .collect();
    format!("${}$\n", parts.join(" \\oplus "))
}

fn level_latex(v: &LevelValue) -> String {
    match v {
        LevelValue::Value { ideal, .. } => module_latex(ideal),
        LevelValue::Unpinned { .. } => "?".into(),
    }
}

/// `\Lewis{top}{bottom}{res}{tr}`.
pub fn lewis_latex(d: &LewisDiagram) -> String {
    let label = |s: &Option<PrismScalar>| s.as_ref().map(scalar_latex).unwrap_or_default();
    format!(
        "\\Lewis{{{}}}{{{}}}{{{}}}{{{}}}\n",
        level_latex(&d.top),
        level_latex(&d.bottom),
        label(&d.res),
        label(&d.tr)
    )
}

fn symbol_latex(e: &MackeyEntry) -> String {
    use crate::mackey::MackeySymbol::*;
    let sym = match &e.symbol {
        W => "\\underline W".to_string(),
        Tr(m) => format!("\\tr_{{{m}}}\\underline W"),
        Phi(r) => format!("\\Phi^{{{r}}}\\underline W"),
        PhiQuot(-1, s) => format!("\\underline W/{}", scalar_latex(s)),
        PhiQuot(r, s) => format!("\\Phi^{{{r}}}\\underline W/{}", scalar_latex(s)),
        TrPhi(m, r) => format!("\\tr_{{{m}}}\\Phi^{{{r}}}\\underline W"),
    };
    format!("${sym}\\langle {}\\rangle$", monomial_latex(&e.generator))
}

pub fn mackey_latex(page: &MackeyPage) -> String {
    let mut out = String::from("\\begin{tabular}{c|cc}\n");
    for f in (0..=page.alpha.len()).rev() {
        let row = page.rows.get(&f);
        let odd = row.and_then(|r| r.odd.as_ref()).map(symbol_latex).unwrap_or_default();
        let even = row.and_then(|r| r.even.as_ref()).map(symbol_latex).unwrap_or_default();
        let _ = writeln!(out, "{} \\\\", format!("  {f} & {odd} & {even}").trim_end());
    }
    out.push_str("  \\hline\n  $E^{1}$ & $-1$ & $0$\n\\end{tabular}\n");
    out
}

pub fn tr_latex(r: &TrReport) -> String {
    let mut out = String::new();
    let row = |name: String, g: &GradedGroup| format!("{name} &= {}", group_latex(g).trim().trim_matches('$'));
    let n = r.level;
    let lines = [
        row(format!("\\mathrm{{TF}}_{{\\alpha+\\lambda_{{{n}}}}}"), &r.source_even),
        row("\\mathrm{TF}_{\\alpha}".into(), &r.target_even),
        row(format!("\\mathrm{{TF}}_{{\\alpha+\\lambda_{{{n}}}-1}}"), &r.source_odd),
        row("\\mathrm{TF}_{\\alpha-1}".into(), &r.target_odd),
        row("\\operatorname{coker}".into(), &r.cokernel),
        match &r.kernel {
            KernelStatus::Exact(k) => row("\\ker".into(), k),
            KernelStatus::Undetermined(_) => "\\ker &= \\text{undetermined}".into(),
        },
    ];
    out.push_str("\\begin{align*}\n");
    out.push_str(&lines.join("\\\\\n"));
    out.push_str("\n\\end{align*}\n");
    out
}

// ---------------------------------------------------------------- JSON

thread_local! {
    static BIG: Cell<bool> = const { Cell::new(false) };
}

const SAFE: i64 = 1 << 53;

/// An integer that falls back to a decimal string past 53 bits.
#[derive(Clone, Copy)]
struct Int(i64);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.unsigned_abs() <= SAFE as u64 {
            s.serialize_i64(self.0)
        } else {
            BIG.with(|b| b.set(true));
            s.serialize_str(&self.0.to_string())
        }
    }
}

fn uint(v: u64) -> Int {
    Int(i64::try_from(v).unwrap_or(i64::MAX))
}

struct IntMap(Vec<(String, Int)>);

impl Serialize for IntMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

enum Factor {
    Phi(u32, u64),
    P(u64),
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Factor::Phi(i, e) => {
                let mut q = s.serialize_seq(Some(3))?;
                q.serialize_element("phi")?;
                q.serialize_element(&Int(*i as i64))?;
                q.serialize_element(&uint(*e))?;
                q.end()
            }
            Factor::P(e) => {
                let mut q = s.serialize_seq(Some(2))?;
                q.serialize_element("p")?;
                q.serialize_element(&uint(*e))?;
                q.end()
            }
        }
    }
}

fn factors(s: &PrismScalar) -> Vec<Factor> {
    match s {
        PrismScalar::Phi(m) => m.iter().map(|(i, e)| Factor::Phi(*i, *e)).collect(),
        PrismScalar::P(0) => Vec::new(),
        PrismScalar::P(k) => vec![Factor::P(*k)],
    }
}

fn annihilator(ideal: &CyclicIdeal) -> Vec<Vec<Factor>> {
    ideal.gens().iter().map(factors).collect()
}

#[derive(Serialize)]
struct GradingJson {
    dims: Vec<Int>,
    d_inf: Int,
    shift: i64,
}

fn grading(r: &VirtualRep) -> GradingJson {
    GradingJson {
        dims: r.dims().iter().map(|d| Int(*d)).collect(),
        d_inf: Int(r.d_inf()),
        shift: r.shift().as_i64(),
    }
}

#[derive(Serialize)]
struct GeneratorJson {
    a: IntMap,
    u: IntMap,
    u_lambda: IntMap,
    suspension: i64,
}

fn generator(g: &GoldMonomial) -> GeneratorJson {
    let map = |it: Vec<(String, i64)>| IntMap(it.into_iter().map(|(k, v)| (k, Int(v))).collect());
    GeneratorJson {
        a: map(g.a_exps().iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        u: map(g.u_exps().iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        u_lambda: map(g.ulam_exps().iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        suspension: g.suspension().as_i64(),
    }
}

#[derive(Serialize)]
struct SummandJson {
    annihilator: Vec<Vec<Factor>>,
    generator: GeneratorJson,
}

#[derive(Serialize)]
struct GroupJson {
    grading: GradingJson,
    kind: PrismKind,
    summands: Vec<SummandJson>,
}

fn group_json_value(g: &GradedGroup) -> GroupJson {
    GroupJson {
        grading: grading(g.grading()),
        kind: g.kind(),
        summands: g
            .summands()
            .iter()
            .map(|s| SummandJson {
                annihilator: annihilator(&s.ideal),
                generator: generator(&s.generator),
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct Marked<T> {
    #[serde(flatten)]
    body: T,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    exts: bool,
}

/// Serializes `body`, adding `"exts": true` when some integer had to be
/// written as a string.
fn finish<T: Serialize>(body: T) -> String {
    BIG.with(|b| b.set(false));
    // first pass discovers whether any integer overflows
    let _ = serde_json::to_string(&body);
    let exts = BIG.with(|b| b.get());
    let mut s = serde_json::to_string_pretty(&Marked { body, exts }).expect("serializable");
    s.push('\n');
    s
}

pub fn group_json(g: &GradedGroup) -> String {
    finish(group_json_value(g))
}

#[derive(Serialize)]
struct RowJson {
    filtration: usize,
    column: i64,
    annihilator: Vec<Vec<Factor>>,
    generator: GeneratorJson,
}

#[derive(Serialize)]
struct LinkJson {
    rows: Vec<usize>,
    annihilator: Vec<Vec<Factor>>,
    generator: GeneratorJson,
}

#[derive(Serialize)]
struct PageJson {
    page: usize,
    #[serde(rename = "final")]
    is_final: bool,
    grading: GradingJson,
    kind: PrismKind,
    rows: Vec<RowJson>,
    extensions: Vec<LinkJson>,
}

fn page_json_value(p: &SpectralPage) -> PageJson {
    let mut rows: Vec<RowJson> = p
        .torsion
        .values()
        .rev()
        .map(|s| RowJson {
            filtration: s.filtration,
            column: -1,
            annihilator: annihilator(&s.ideal),
            generator: generator(&s.generator),
        })
        .collect();
    if let Some(s) = &p.free {
        rows.push(RowJson {
            filtration: 0,
            column: 0,
            annihilator: annihilator(&s.ideal),
            generator: generator(&s.generator),
        });
    }
    PageJson {
        page: p.page,
        is_final: p.is_final,
        grading: grading(&p.alpha),
        kind: p.kind,
        rows,
        extensions: p
            .extension_links
            .iter()
            .map(|l| LinkJson {
                rows: l.rows.clone(),
                annihilator: annihilator(&l.ideal),
                generator: generator(&l.generator),
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct PagesJson {
    pages: Vec<PageJson>,
}

pub fn pages_json(pages: &[&SpectralPage]) -> String {
    finish(PagesJson {
        pages: pages.iter().map(|p| page_json_value(p)).collect(),
    })
}

#[derive(Serialize)]
struct MackeyEntryJson {
    symbol: String,
    glyph: String,
    generator: GeneratorJson,
}

#[derive(Serialize)]
struct MackeyRowJson {
    filtration: usize,
    even: Option<MackeyEntryJson>,
    odd: Option<MackeyEntryJson>,
}

#[derive(Serialize)]
struct MackeyJson {
    grading: GradingJson,
    kind: PrismKind,
    rows: Vec<MackeyRowJson>,
}

pub fn mackey_json(page: &MackeyPage) -> String {
    let entry = |e: &Option<MackeyEntry>| {
        e.as_ref().map(|e| MackeyEntryJson {
            symbol: e.symbol.to_string(),
            glyph: e.symbol.glyph(),
            generator: generator(&e.generator),
        })
    };
    finish(MackeyJson {
        grading: grading(&page.alpha),
        kind: page.kind,
        rows: page
            .rows
            .iter()
            .rev()
            .map(|(f, r)| MackeyRowJson {
                filtration: *f,
                even: entry(&r.even),
                odd: entry(&r.odd),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct TrJson {
    grading: GradingJson,
    kind: PrismKind,
    level: usize,
    source_even: GroupJson,
    target_even: GroupJson,
    source_odd: GroupJson,
    target_odd: GroupJson,
    even_map: Option<Vec<Factor>>,
    cokernel: GroupJson,
    kernel_status: &'static str,
    kernel: Option<GroupJson>,
    reason: Option<String>,
}

pub fn tr_json(r: &TrReport) -> String {
    let (status, kernel, reason) = match &r.kernel {
        KernelStatus::Exact(k) => ("exact", Some(group_json_value(k)), None),
        KernelStatus::Undetermined(why) => ("undetermined", None, Some(why.clone())),
    };
    finish(TrJson {
        grading: grading(&r.alpha),
        kind: r.kind,
        level: r.level,
        source_even: group_json_value(&r.source_even),
        target_even: group_json_value(&r.target_even),
        source_odd: group_json_value(&r.source_odd),
        target_odd: group_json_value(&r.target_odd),
        even_map: r.even_map.as_ref().map(factors),
        cokernel: group_json_value(&r.cokernel),
        kernel_status: status,
        kernel,
        reason,
    })
}

/// Any other serializable report (check results, search results).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::closed_tf;
    use crate::hotfss::run_pages;

    fn rep(s: &str) -> VirtualRep {
        s.parse().unwrap()
    }

    #[test]
    fn latex_pieces() {
        let s = PrismScalar::phi(0, 3).mul(&PrismScalar::phi(1, 1)).unwrap();
        assert_eq!(scalar_latex(&s), "\\xi^{3}\\phi(\\xi)");
        assert_eq!(scalar_latex(&PrismScalar::phi(3, 2)), "\\phi^{3}(\\xi)^{2}");
        assert_eq!(module_latex(&CyclicIdeal::pair(PrismScalar::phi(0, 1), PrismScalar::phi(2, 1))), "A/(\\xi,\\phi^{2}(\\xi))");
        let g = GoldMonomial::a(0, -2).times_u(1, 1).times_ulam(3, 1).with_suspension(Shift::MinusOne);
        assert_eq!(monomial_latex(&g), "\\Sigma^{-1}a_{0}^{-2}u_{1}u_{\\lambda_{3}}");
    }

    #[test]
    fn json_schema() {
        let a = rep("(1,1,-1,2,-1,1;0)").with_shift(Shift::MinusOne);
        let g = closed_tf(&a, PrismKind::Transversal).unwrap();
        let j: serde_json::Value = serde_json::from_str(&group_json(&g)).unwrap();
        assert_eq!(j["summands"][0]["annihilator"], serde_json::json!([[["phi", 0, 1], ["phi", 1, 1]], [["phi", 2, 1], ["phi", 4, 1]]]));
        assert_eq!(j["summands"][0]["generator"]["suspension"], -1);
        let text = group_json(&g);
        let keys: Vec<usize> = ["\"grading\"", "\"kind\"", "\"summands\""].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let d = text.find("\"dims\"").unwrap();
        assert!(d < text.find("\"d_inf\"").unwrap());
        assert!(!text.contains("exts"));
        assert_eq!(text, group_json(&g));

        let zero = closed_tf(&rep("(2,1,-1,1,0,2;-1)"), PrismKind::Transversal).unwrap();
        let j: serde_json::Value = serde_json::from_str(&group_json(&zero)).unwrap();
        assert_eq!(j["summands"], serde_json::json!([]));
    }

    #[test]
    fn big_integers_become_strings() {
        let huge = VirtualRep::new(vec![1 << 60], -1).unwrap().with_shift(Shift::MinusOne);
        let g = closed_tf(&huge, PrismKind::Crystalline).unwrap();
        let j: serde_json::Value = serde_json::from_str(&group_json(&g)).unwrap();
        assert_eq!(j["exts"], true);
        assert_eq!(j["grading"]["dims"][0], "1152921504606846976");
    }

    #[test]
    fn page_text_layout() {
        let pages = run_pages(&rep("(1,-1;0)"), PrismKind::Crystalline).unwrap();
        assert_eq!(
            page_text(&pages[0]),
            "E^1 (1,-1;0) crystalline\n2 | A/p⟨S^-1 a_0^-1 u_1^-1⟩ |\n1 |  |\n0 |  | A⟨a_0^-1 a_1⟩\n"
        );
    }
}
