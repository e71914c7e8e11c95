//! JSON, CSV and plain-table renderings of the reports.

use std::fmt::Write as _;

use serde::Serialize;

use crate::commands::{AnalyzeReport, KahlerCliReport, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub trait Render: Serialize {
    fn csv(&self) -> String;
    fn table(&self) -> String;

    /// Pretty JSON with a trailing newline; field order is declaration order.
    fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }
}

fn write_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn degree_header(first: &str, l: usize) -> Vec<String> {
    std::iter::once(first.to_string()).chain((0..=l).map(|k| format!("H{}", 2 * k))).collect()
}

impl Render for AnalyzeReport {
    /// One row per irreducible, then the Betti row.
    fn csv(&self) -> String {
        let mut rows = Vec::new();
        if let Some(m) = &self.multiplicities {
            for (p, r) in m.rows() {
                rows.push(std::iter::once(p.to_comma_string()).chain(r.iter().map(u64::to_string)).collect());
            }
        }
        rows.push(std::iter::once("betti".to_string()).chain(self.betti.iter().map(u64::to_string)).collect());
        write_csv(&degree_header("irrep", self.l), &rows)
    }

    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "h = {}   n = {}   dim = {}   seed = {}", self.h, self.n, self.l, self.seed);
        let _ = writeln!(s, "betti        {}", joined(&self.betti));
        if let Some(m) = &self.multiplicities {
            for (p, r) in m.rows() {
                let _ = writeln!(s, "  {:<10} {}", p.to_comma_string(), joined(r));
            }
        }
        let _ = writeln!(
            s,
            "lambdaH      {} (p = {}, {}/{} samples)",
            self.lambda_h, self.sampling.prime, self.sampling.agreeing, self.sampling.samples
        );
        if let Some(x) = &self.lambda_h_symbolic {
            let _ = writeln!(s, "  exact      {x}");
        }
        let _ = writeln!(s, "allowed      {}", self.support.allowed_irreps.join("  "));
        for r in &self.regular {
            let mark = if r.palindromic { "palindromic" } else { "NOT palindromic" };
            let _ = writeln!(
                s,
                "  J = {{{}}}{:<width$} {}  {mark}",
                r.j,
                "",
                joined(&r.betti),
                width = 8usize.saturating_sub(r.j.len())
            );
        }
        if let Some(g) = &self.gkm {
            let _ = writeln!(
                s,
                "gkm morse    {}  {}",
                joined(&g.morse_betti),
                if g.agrees { "agrees" } else { "DISAGREES" }
            );
        }
        write_violations(&mut s, self.violations.iter().map(|w| format!("{} [{}] {}", w.h, w.check, w.detail)));
        s
    }
}

fn write_violations(s: &mut String, items: impl Iterator<Item = String>) {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        let _ = writeln!(s, "violations   none");
    } else {
        let _ = writeln!(s, "violations   {}", items.len());
        for w in items {
            let _ = writeln!(s, "  {w}");
        }
    }
}

impl Render for VerifyReport {
    fn csv(&self) -> String {
        let header: Vec<String> = ["h", "dim", "betti", "lambdaH", "gkm_checked", "ok"].map(String::from).to_vec();
        let rows: Vec<Vec<String>> = self
            .results
            .iter()
            .map(|r| {
                vec![
                    r.h.clone(),
                    r.l.to_string(),
                    joined(&r.betti),
                    r.lambda_h.clone(),
                    r.gkm_checked.to_string(),
                    r.ok.to_string(),
                ]
            })
            .collect();
        write_csv(&header, &rows)
    }

    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "n = {}   functions = {}   gkm checked = {}   seed = {}",
            self.n, self.functions, self.gkm_checked, self.seed
        );
        for r in &self.results {
            let _ = writeln!(
                s,
                "  {:<20} {:<24} lambdaH {:<12} {}",
                r.h,
                joined(&r.betti),
                r.lambda_h,
                if r.ok { "ok" } else { "VIOLATION" }
            );
        }
        write_violations(&mut s, self.violations.iter().map(|w| format!("{} [{}] {}", w.h, w.check, w.detail)));
        s
    }
}

impl Render for KahlerCliReport {
    fn csv(&self) -> String {
        let header: Vec<String> = ["check", "k", "dim", "value", "ok"].map(String::from).to_vec();
        let r = &self.report;
        let mut rows = Vec::new();
        for p in &r.pairing {
            rows.push(vec![
                "pairing".into(),
                p.k.to_string(),
                p.size.to_string(),
                p.det.to_string(),
                p.nondegenerate.to_string(),
            ]);
        }
        for v in &r.hard_lefschetz {
            rows.push(vec![
                "hard_lefschetz".into(),
                v.k.to_string(),
                v.domain_dim.to_string(),
                v.rank.to_string(),
                v.isomorphism.to_string(),
            ]);
        }
        for v in &r.hodge_riemann {
            let pivots: Vec<String> = v.pivots.iter().map(ToString::to_string).collect();
            rows.push(vec![
                "hodge_riemann".into(),
                v.k.to_string(),
                v.primitive_dim.to_string(),
                pivots.join(" "),
                v.positive_definite.to_string(),
            ]);
        }
        write_csv(&header, &rows)
    }

    fn table(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "h = {}   J = {{{}}}   lambda = {:?}", r.h, r.j, r.lambda);
        let _ = writeln!(s, "betti            {}", joined(&self.betti));
        let _ = writeln!(s, "invariant dims   {}", joined(&r.invariant_dims));
        for p in &r.pairing {
            let _ = writeln!(s, "  pairing k={}  size {}  det {}", p.k, p.size, p.det);
        }
        for v in &r.hard_lefschetz {
            let _ = writeln!(s, "  lefschetz k={}  rank {}/{}", v.k, v.rank, v.domain_dim);
        }
        for v in &r.hodge_riemann {
            let pivots: Vec<String> = v.pivots.iter().map(ToString::to_string).collect();
            let (p, n, z) = v.signature;
            let _ = writeln!(
                s,
                "  hodge-riemann k={}  primitive {}  pivots [{}]  signature ({p},{n},{z})",
                v.k,
                v.primitive_dim,
                pivots.join(", ")
            );
        }
        let _ = writeln!(
            s,
            "poincare {}   hard lefschetz {}   hodge-riemann {}",
            r.poincare_ok, r.hard_lefschetz_ok, r.hodge_riemann_ok
        );
        write_violations(&mut s, self.witnesses.iter().cloned());
        s
    }
}
