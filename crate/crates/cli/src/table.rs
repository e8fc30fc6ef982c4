//! Plain-text renderings of the command results.

use std::fmt::Write;

use rqc_core::design::DesignEvaluation;
use rqc_core::document::{CircuitDocument, LatticeDocument};
use rqc_core::search::{Candidate, SearchReport};
use rqc_core::sfa::SfaBreakdown;
use rqc_core::Coord;

use crate::commands::EntropyDocument;

fn path(sites: &[Coord]) -> String {
    sites.iter().map(Coord::to_string).collect::<Vec<_>>().join(" ")
}

fn breakdown(out: &mut String, b: &SfaBreakdown) {
    let _ = writeln!(out, "log2 cost      {:.4}", b.log2_cost);
    let _ = writeln!(
        out,
        "n_c {}  wedges {}  DCD {}  start {}  end {}",
        b.n_c, b.n_wedge, b.n_dcd, b.n_st, b.n_end
    );
    let _ = writeln!(out, "sides          {} | {}", b.n1, b.n2);
}

pub fn lattice(doc: &LatticeDocument) -> String {
    let s = &doc.summary;
    let mut out = String::new();
    let _ = writeln!(out, "qubits         {}", s.qubits);
    let _ = writeln!(out, "bonds          {}", s.bonds);
    let _ = writeln!(out, "m (F1 rows)    {}", s.m);
    let _ = writeln!(out, "n (F2 rows)    {}", s.n);
    let _ = writeln!(out, "defects        {}", s.defects);
    let _ = writeln!(out, "code bits      {}", s.code_bits);
    let _ = writeln!(out, "dual sites     {} ({} boundary)", doc.dual.sites, doc.dual.boundary);
    out
}

pub fn circuit(doc: &CircuitDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pattern        {}", doc.pattern);
    let _ = writeln!(out, "sequence       {}", doc.sequence);
    let _ = writeln!(out, "cycle  layer  gates");
    for c in &doc.cycles {
        let gates: Vec<String> = c.gates.iter().map(|g| format!("{}-{}", g.qubits[0], g.qubits[1])).collect();
        let _ = writeln!(out, "{:>5}  {:>5}  {}", c.cycle, c.letter, gates.join(" "));
    }
    out
}

pub fn evaluation(e: &DesignEvaluation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pattern        {}", e.pattern);
    let _ = writeln!(out, "depth          {}", e.depth);
    let _ = writeln!(out, "sequence       {}", e.sequence);
    if let Some(tail) = &e.tail {
        let _ = writeln!(out, "tail           {tail}");
    }
    breakdown(&mut out, &e.breakdown);
    let _ = writeln!(out, "cut            {}", path(&e.cut.sites));
    let _ = writeln!(
        out,
        "cut edges      {} ({} crossing bonds)",
        e.cut.edges, e.cut.effective_edges
    );
    let _ = writeln!(out, "bipartitions   {} (E* {})", e.cuts.bipartitions, e.cuts.e_star);
    if let Some(f) = &e.fidelity {
        let _ = writeln!(out, "fidelity       {:.6e}", f.f);
        let _ = writeln!(out, "samples        {}", f.ns);
    }
    out
}

fn candidate_row(out: &mut String, c: &Candidate) {
    let _ = writeln!(
        out,
        "{:>6}  {:>10.4}  {:>4}  {:>4}  {:>4}  {}{}",
        c.rank,
        c.breakdown.log2_cost,
        c.breakdown.n_c,
        c.breakdown.n1,
        c.breakdown.n2,
        c.code,
        c.tail.as_deref().map(|t| format!(" tail={t}")).unwrap_or_default()
    );
}

pub fn search(r: &SearchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "candidates     {}", r.candidates);
    let _ = writeln!(out, "depth          {} (ranked at {})", r.depth, r.prefix_depth);
    let _ = writeln!(out, "bipartitions   {} (E* {})", r.cuts.bipartitions, r.cuts.e_star);
    let _ = writeln!(out, "optimum ties   {}", r.optimum_ties);
    let _ = writeln!(out, "  rank   log2 cost   n_c    n1    n2  pattern");
    for c in &r.top {
        candidate_row(&mut out, c);
    }
    if let Some(b) = &r.baseline {
        let _ = writeln!(out, "baseline rank  {}", b.code_rank);
        candidate_row(&mut out, &b.candidate);
    }
    out
}

pub fn entropy(doc: &EntropyDocument) -> String {
    let mut out = String::new();
    for (i, run) in doc.runs.iter().enumerate() {
        let _ = writeln!(out, "design {}       {}", i + 1, run.pattern);
        let _ = writeln!(out, "sequence       {}", run.sequence);
        let _ = writeln!(out, "cut            {} ({} | {})", path(&run.cut), run.n1, run.n2);
    }
    let mut header = String::from("cycle");
    for i in 0..doc.runs.len() {
        let _ = write!(header, "  {:>10}", format!("S{}", i + 1));
    }
    let _ = writeln!(out, "{header}");
    let depth = doc.runs.iter().map(|r| r.mean.len()).max().unwrap_or(0);
    for t in 0..depth {
        let _ = write!(out, "{t:>5}");
        for run in &doc.runs {
            match run.mean.get(t) {
                Some(s) => {
                    let _ = write!(out, "  {s:>10.6}");
                }
                None => out.push_str("            "),
            }
        }
        out.push('\n');
    }
    out
}
