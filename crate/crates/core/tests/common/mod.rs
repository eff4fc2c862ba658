#![allow(dead_code)]

use std::path::PathBuf;

use tfcalc::hotfss::run_pages;
use tfcalc::render;
use tfcalc::PrismKind::{self, Crystalline, Transversal};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Show {
    First,
    Last,
    Both,
}

pub struct Figure {
    pub stem: &'static str,
    pub rep: &'static str,
    pub kind: PrismKind,
    pub show: Show,
}

pub const FIGURES: [Figure; 8] = [
    Figure { stem: "e1_2_1_m2_3_p1", rep: "(2,1,-2,3;1)", kind: Transversal, show: Show::First },
    Figure { stem: "e1_3_0_2_1_m1_m1", rep: "(3,0,2,1,-1;-1)", kind: Transversal, show: Show::First },
    Figure { stem: "trans_1_m1_p0", rep: "(1,-1;0)", kind: Transversal, show: Show::Both },
    Figure { stem: "trans_3_1_m1_1_0_2_m1", rep: "(3,1,-1,1,0,2;-1)", kind: Transversal, show: Show::Last },
    Figure { stem: "trans_1_2_m1_3_p0", rep: "(1,2,-1,3;0)", kind: Transversal, show: Show::Both },
    Figure { stem: "crys_1_m1_p0", rep: "(1,-1;0)", kind: Crystalline, show: Show::Both },
    Figure { stem: "crys_1_m1_2_m1_1_m1", rep: "(1,-1,2,-1,1;-1)", kind: Crystalline, show: Show::Last },
    Figure { stem: "crys_1_m1_2_m1_1_p0", rep: "(1,-1,2,-1,1;0)", kind: Crystalline, show: Show::Both },
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/goldens").join(name)
}

/// Rendered `(text, latex)` for a figure.
pub fn render_figure(f: &Figure) -> (String, String) {
    let pages = run_pages(&f.rep.parse().unwrap(), f.kind).unwrap();
    let shown: Vec<_> = match f.show {
        Show::First => vec![&pages[0]],
        Show::Last => vec![pages.last().unwrap()],
        Show::Both => vec![&pages[0], pages.last().unwrap()],
    };
    (render::pages_text(&shown), render::pages_latex(&shown))
}

/// Compares against `tests/goldens/<stem>.<ext>`; with `TFCALC_BLESS=1` the
/// golden is rewritten instead.
pub fn check_golden(stem: &str, ext: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(&format!("{stem}.{ext}"));
    if std::env::var("TFCALC_BLESS").as_deref() == Ok("1") {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == actual {
        Ok(())
    } else {
        Err(format!("{} differs:\n--- golden\n{want}--- rendered\n{actual}", path.display()))
    }
}
