//! Human-readable rendering of the report types.

use evpos::checkers::CheckReport;
use evpos::dynamics::ConvergenceVerdict;
use evpos::positivity::{PositivityCertificate, PositivityWitness};
use evpos::spectral::{SpectrumReport, GROWTH_NOTE};
use num_complex::Complex64;

fn fmt_c(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{:.6}+{:.6}i", z.re, z.im)
    } else {
        format!("{:.6}-{:.6}i", z.re, -z.im)
    }
}

pub fn spectrum(report: &SpectrumReport) {
    println!("spectral bound   s(A) = {:.9}", report.spectral_bound);
    println!("spectral radius  r(A) = {:.9}", report.spectral_radius);
    println!("eigenvalues (algebraic, geometric, pole order):");
    for c in &report.eigen.clusters {
        println!(
            "  {:>24}   alg {}  geom {}  pole order {}",
            fmt_c(c.value),
            c.algebraic,
            c.geometric,
            c.index
        );
    }
    let peripheral: Vec<String> = report.peripheral_set.iter().map(|&z| fmt_c(z)).collect();
    println!("peripheral set: {{{}}}", peripheral.join(", "));
    let axis: Vec<String> = report
        .peripheral_point_set_on_axis
        .iter()
        .map(|&z| fmt_c(z))
        .collect();
    println!("point spectrum on the imaginary axis: {{{}}}", axis.join(", "));
    println!("note: {GROWTH_NOTE}");
}

pub fn positivity(cert: &PositivityCertificate) {
    println!("kind:    {:?}", cert.kind);
    println!("verdict: {:?}", cert.verdict);
    match cert.witness {
        Some(PositivityWitness::Exponent(k)) => println!("witness: positive for all tested exponents >= {k}"),
        Some(PositivityWitness::Time(t)) => println!("witness: positive at every sampled time >= {t:.6}"),
        None => println!("witness: none within the horizon"),
    }
    println!("horizon: {}", cert.horizon);
    match &cert.spectral_certificate {
        Some(sc) => {
            println!(
                "spectral certificate: dominant eigenvalue {:.9}{:+.3e}i, eigenvector minima (right {:.3e}, left {:.3e}), gap {:?}",
                sc.dominant_eigenvalue.re(),
                sc.dominant_eigenvalue.im(),
                sc.right_eigenvector_min,
                sc.left_eigenvector_min,
                sc.gap
            );
        }
        None => println!("spectral certificate: absent"),
    }
}

pub fn convergence(verdict: &ConvergenceVerdict) {
    println!("mode:      {:?}", verdict.mode);
    println!("converges: {}", verdict.converges);
    println!("tail defect (normalized): {:.3e}", verdict.tail_defect);
    let c = &verdict.certificate;
    println!(
        "certificate: bounded {}, spectral bound {:.9}, pole order at bound {}, pathway {}",
        c.bounded, c.spectral_bound, c.pole_order_at_bound, c.pathway
    );
    if let Some(rank) = c.limit_rank {
        println!("limit rank: {rank}");
    }
    if let Some(limit) = &verdict.limit {
        println!("limit:");
        for i in 0..limit.rows() {
            let row: Vec<String> = (0..limit.cols()).map(|j| fmt_c(limit[(i, j)])).collect();
            println!("  [{}]", row.join(", "));
        }
    }
}

pub fn check(report: &CheckReport) {
    println!("== {} : {:?}", report.theorem_id, report.verdict);
    println!("   hypotheses:");
    for h in &report.hypotheses {
        println!(
            "     [{}] {}{} -- {}",
            if h.held { "x" } else { " " },
            h.name,
            if h.vacuous { " (vacuous)" } else { "" },
            h.evidence
        );
    }
    println!("   conclusions:");
    for c in &report.conclusions {
        println!(
            "     [{}] {}{} -- {}",
            if c.held { "x" } else { " " },
            c.name,
            if c.vacuous { " (vacuous)" } else { "" },
            c.evidence
        );
    }
}
