//! Acceptance run: one line per criterion, then a nonzero exit if any failed.
//!
//! Every line reports the worst check as `relative/tolerance`; values up to 1
//! pass. Lower bounds are stored inverted, so the same reading applies.

use std::time::Instant;

use ttw_core::exact::ModelParams;
use ttw_core::probe::ResidualReport;
use ttw_core::scalar::{numeric_spectrum, Sector};
use ttw_core::grid::{build_grid, GridSpec};
use ttw_core::suites::{projected_checks, run_suite, Suite, SuiteSettings};

fn settings(omega: f64, a: f64, k: f64, m: usize, nr: usize) -> SuiteSettings {
    SuiteSettings::new(ModelParams::new(omega, a, a, k).unwrap(), m, nr)
}

fn suite(which: Suite, s: &SuiteSettings) -> Vec<ResidualReport> {
    run_suite(which, s).unwrap_or_else(|e| panic!("{which} suite could not run: {e}"))
}

struct Line {
    id: u32,
    title: &'static str,
    reports: Vec<ResidualReport>,
    extra: Vec<(String, bool)>,
    note: String,
}

impl Line {
    fn new(id: u32, title: &'static str) -> Self {
        Self { id, title, reports: Vec::new(), extra: Vec::new(), note: String::new() }
    }

    fn add(&mut self, tag: &str, reports: impl IntoIterator<Item = ResidualReport>) {
        self.reports.extend(reports.into_iter().map(|r| ResidualReport { check: format!("{tag} {}", r.check), ..r }));
    }

    fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass) && self.extra.iter().all(|(_, p)| *p)
    }

    fn print(&self) {
        let worst = self.reports.iter().map(|r| (r.relative() / r.tolerance, r)).max_by(|a, b| a.0.total_cmp(&b.0));
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let detail = worst.map(|(q, r)| format!("{} checks, worst {} at {:.2e} of tolerance", self.reports.len(), r.check, q)).unwrap_or_default();
        println!("criterion {} {status} {}: {detail}{}", self.id, self.title, self.note);
        for r in self.reports.iter().filter(|r| !r.pass) {
            println!("    failed: {} (residual {:.3e}, scale {:.3e}, relative {:.3e}, tolerance {:.1e})", r.check, r.residual, r.scale, r.relative(), r.tolerance);
        }
        for (what, ok) in &self.extra {
            println!("    {}: {what}", if *ok { "ok" } else { "failed" });
        }
    }
}

fn named(reports: &[ResidualReport], keys: &[&str]) -> Vec<ResidualReport> {
    reports.iter().filter(|r| keys.iter().any(|k| r.check.contains(k))).cloned().collect()
}

fn main() {
    let base = settings(1.0, 2.0, 3.0, 48, 32);
    let k1 = settings(1.0, 2.0, 1.0, 32, 24);
    let k1_susy = settings(1.0, 1.0, 1.0, 32, 24);
    let mut lines = Vec::new();

    // 1, 2, 9: spectrum suite at the reference point
    let t = Instant::now();
    let spectrum = suite(Suite::Spectrum, &base);
    let elapsed = t.elapsed().as_secs_f64();
    let mut l1 = Line::new(1, "identity-sector spectrum and degeneracies, (1,2,2,3) at M=48 Nr=32");
    l1.add("", named(&spectrum, &["level"]));
    l1.extra.push((format!("spectrum suite ran in {elapsed:.1} s (limit 60 s)"), elapsed <= 60.0));
    let grid = build_grid(GridSpec::new(48, 32, base.params)).unwrap();
    let numeric = numeric_spectrum(&grid, 20, Sector::IdentityRep).unwrap();
    let stray: Vec<String> = numeric.iter().filter(|&&x| x < 54.5 && ((x - 26.0) / 4.0 - ((x - 26.0) / 4.0).round()).abs() > 1e-6).map(|x| format!("{x:.4}")).collect();
    if !stray.is_empty() {
        l1.note = format!(" [unresolved angular mode(s) below E(m=7): {}]", stray.join(", "));
    }
    lines.push(l1);

    let mut l2 = Line::new(2, "Gram matrix of Psi(N,n), N+n <= 4");
    l2.add("", named(&spectrum, &["Gram"]));
    lines.push(l2);

    let mut l3 = Line::new(3, "dihedral table vs permutations and Fock matrices, k in {1,3,5}");
    l3.add("", suite(Suite::Dihedral, &base));
    lines.push(l3);

    let mut l4 = Line::new(4, "Dunkl, boson and oscillator relations, with resolution doubling");
    l4.add("k=3", suite(Suite::Dunkl, &base));
    l4.add("k=1", suite(Suite::Dunkl, &k1));
    lines.push(l4);

    let mut l5 = Line::new(5, "superintegrability and functional-independence witness, k in {1,3}");
    l5.add("k=1", suite(Suite::Superintegrability, &k1));
    l5.add("k=3", suite(Suite::Superintegrability, &base));
    let (_, mixing) = projected_checks(&base).unwrap();
    if let Some(mix) = mixing {
        l5.note = format!(" [k=3 diagnostic: X/Y eigenbasis mixing on the level {{Psi(3,0), Psi(0,1)}} = {mix:.3}]");
    }
    lines.push(l5);

    let susy3 = suite(Suite::Susy, &base);
    let susy1 = suite(Suite::Susy, &k1_susy);
    let rep_keys = ["tau", "Psi(0,0)|0> = 0", "Y Psi", "Y|0>"];
    let split = |r: &[ResidualReport]| -> (Vec<ResidualReport>, Vec<ResidualReport>) { r.iter().cloned().partition(|x| !rep_keys.iter().any(|k| x.check.contains(k))) };
    let (alg3, rep3) = split(&susy3);
    let (alg1, rep1) = split(&susy1);
    let mut l6 = Line::new(6, "osp(2|2) brackets, adjoint pairs, supercharges and Hs spectrum");
    l6.add("k=3", alg3);
    l6.add("k=1", alg1);
    lines.push(l6);
    let mut l7 = Line::new(7, "weights tau, q and the lowest-weight state");
    l7.add("k=3", rep3);
    l7.add("k=1", rep1);
    lines.push(l7);

    let mut l8 = Line::new(8, "substituted Hk = Hs - 4wY for k in {1,3}; tangent sums for odd k <= 15");
    l8.add("k=3", suite(Suite::Connection, &base));
    l8.add("k=1", suite(Suite::Connection, &k1_susy));
    l8.add("", suite(Suite::Trig, &base));
    lines.push(l8);

    let mut l9 = Line::new(9, "doubling omega doubles the Hk and Hs spectra");
    l9.add("", named(&spectrum, &["double with omega"]));
    lines.push(l9);

    for l in &lines {
        l.print();
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.pass()).map(|l| l.id).collect();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed.len(), lines.len());
    if !failed.is_empty() {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
