//! Human-readable renderings of the JSON records.

use std::fmt::Write;

use liesym::catalog::SolverOutcome;

use crate::{AnalyzeReport, CatalogOutput, GeodesicSummary, SweepOutput, VerifyOutput};

fn params_text(p: &std::collections::BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

pub fn analyze(r: &AnalyzeReport) -> String {
    let s = &r.solution;
    let c = &s.classification;
    let mut out = String::new();
    if let Some(f) = &r.family {
        let _ = writeln!(out, "family {f} {}", params_text(&r.params));
    }
    let _ = writeln!(out, "A = {}", s.a);
    let _ = writeln!(
        out,
        "n = {}, trace = {}, minimal polynomial {}, derogatory: {}, scalar: {}",
        s.n,
        liesym::rational::format_rational(&c.trace),
        c.minimal_polynomial,
        c.derogatory,
        c.scalar_multiple_of_identity
    );
    let f = &s.dimension_formula;
    let _ = writeln!(
        out,
        "symmetry dimension {} = {} + {} (commutant) + {} (anticommutant)",
        s.dimension, f.base, f.commutant, f.anticommutant
    );
    let b = &s.bounds;
    let _ = writeln!(
        out,
        "bounds [{}, {}]: {}{}",
        b.lower,
        b.upper,
        if b.within { "within" } else { "outside" },
        if b.hypotheses_hold { "" } else { " (trace is zero, bounds not asserted)" }
    );
    for (g, check) in s.generators.iter().zip(&r.checks) {
        let verdict = match (check.accepted, check.residual) {
            (true, None) => "exact".to_string(),
            (true, Some(res)) => format!("sampled {res:.1e}"),
            (false, None) => "FAILED exact check".to_string(),
            (false, Some(res)) => format!("FAILED sampled {res:.1e}"),
        };
        let _ = writeln!(out, "  e{:<3} {:<16} {}  [{verdict}]", check.index, g.class.as_str(), g.field);
    }
    match (&s.algebra, &r.closure_error) {
        (Some(alg), _) => {
            let _ = writeln!(
                out,
                "algebra: radical {}, Levi {}, solvable {}, nilpotent {}, center {}, derived series {:?}",
                alg.radical_dim, alg.levi_dim, alg.solvable, alg.nilpotent, alg.center_dim, alg.derived_series
            );
        }
        (None, Some(e)) => {
            let _ = writeln!(out, "algebra: {e}");
        }
        (None, None) => {}
    }
    out
}

pub fn sweep(r: &SweepOutput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "family {}", r.family);
    for p in &r.report.points {
        let d = p.dimension.map_or("-".to_string(), |d| d.to_string());
        let _ = writeln!(out, "  {:<24} {d:>3}  {}", params_text(&p.params), p.status);
    }
    match r.report.generic_dimension {
        Some(g) => {
            let _ = writeln!(out, "generic dimension {g}");
        }
        None => {
            let _ = writeln!(out, "no admissible nonsingular points");
        }
    }
    for s in &r.report.special {
        let _ = writeln!(out, "special: {}", params_text(s));
    }
    out
}

pub fn verify(r: &VerifyOutput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "A = {}", r.a);
    for v in &r.fields {
        if v.accepted {
            let _ = writeln!(
                out,
                "  accept  {}  lambda = {}  (sampled {:.1e})",
                v.field,
                v.lambda.as_deref().unwrap_or("0"),
                v.numeric_residual
            );
        } else {
            let _ = writeln!(
                out,
                "  reject  {}  fails {}  (sampled {:.1e})",
                v.field,
                v.failing.join(" "),
                v.numeric_residual
            );
        }
        if !v.routes_agree {
            let _ = writeln!(out, "          exact and sampled verdicts disagree at this tolerance");
        }
    }
    let _ = writeln!(out, "{} accepted, {} rejected", r.accepted, r.rejected);
    out
}

pub fn geodesic(s: &GeodesicSummary) -> String {
    let f = &s.final_state;
    format!(
        "n = {}, t from {} to {} in {} steps\nclosed-form max error {:.3e}\nfirst-integral drift {:.3e}\nfinal x = {:?}, w = {}, u = {:?}, q = {}\n",
        s.n, s.t_start, s.t_end, s.steps, s.closed_form_max_error, s.first_integral_drift, f.x, f.w, f.u, f.q
    )
}

pub fn catalog(r: &CatalogOutput) -> String {
    let mut out = String::new();
    for e in &r.entries {
        let v = &e.verification;
        let solver = match &v.solver {
            SolverOutcome::Solved { dimension } => format!("solver {dimension}"),
            SolverOutcome::Refused { .. } => "solver refused (singular A)".to_string(),
        };
        let exact = v.generators.iter().filter(|g| g.exact).count();
        let _ = writeln!(
            out,
            "{} {:<4} {} [{}]: expected {}, listed {} ({} exact), {solver}",
            if v.passed { "PASS" } else { "FAIL" },
            v.family,
            v.case,
            params_text(&v.params),
            v.expected_dimension,
            v.listed_count,
            exact
        );
        for finding in &v.findings {
            let _ = writeln!(out, "     {finding}");
        }
        for c in &e.structure.claims {
            let _ = writeln!(
                out,
                "     claim {}: {} ({})",
                if c.holds { "holds" } else { "FAILS" },
                c.statement,
                c.detail
            );
        }
    }
    let _ = writeln!(out, "{} of {} cases pass", r.passed, r.cases);
    out
}
