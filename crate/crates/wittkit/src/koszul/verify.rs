use super::complex::{cone, KoszulError, RestrictMode};
use super::contraction::contraction_null_homotopy;
use super::formed::{adjoint, b_complex, is_symmetric};
use super::homology::{graded_homology, CoeffField};
use serde::Serialize;

/// One line of the verification suite output.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub n: usize,
    pub degree_range: (i64, i64),
    pub result: String,
}

impl VerificationReport {
    fn new(check: &str, n: usize, range: (i64, i64), ok: Result<(), String>) -> Self {
        VerificationReport {
            check: check.to_string(),
            n,
            degree_range: range,
            result: match ok {
                Ok(()) => "pass".to_string(),
                Err(e) => format!("fail: {e}"),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.result == "pass"
    }
}

/// Runs every check for one n: construction invariants, symmetry of the
/// form, the adjoint being a chain map, degreewise exactness of the cone of
/// the adjoint up to the bound, exactness of the hyperplane restriction in
/// positive degrees (the degree-0 piece is the one-dimensional skyscraper
/// contribution and is checked to be exactly that), contractibility on the
/// unit charts, its deliberate failure on the chart of the form variable,
/// and the vanishing of the class in K-theory (alternating rank sum).
pub fn verify_suite(n: usize, bound: i64, field: CoeffField) -> Vec<VerificationReport> {
    verify_suite_threads(n, bound, field, 1)
}

/// Checks graded degrees concurrently across up to `threads` workers;
/// results are identical to the single-threaded run.
pub fn verify_suite_threads(
    n: usize,
    bound: i64,
    field: CoeffField,
    threads: usize,
) -> Vec<VerificationReport> {
    let mut out = vec![];
    let b = match b_complex(n) {
        Ok(b) => b,
        Err(e) => {
            out.push(VerificationReport::new(
                "construction",
                n,
                (0, 0),
                Err(e.to_string()),
            ));
            return out;
        }
    };
    // d^2 = 0 and homogeneity hold by construction
    out.push(VerificationReport::new("construction", n, (0, n as i64), Ok(())));

    out.push(VerificationReport::new(
        "form-symmetric",
        n,
        (0, n as i64),
        match is_symmetric(&b) {
            Ok(true) => Ok(()),
            Ok(false) => Err("form changes under the twisted swap".into()),
            Err(e) => Err(e.to_string()),
        },
    ));

    let adj = adjoint(&b);
    out.push(VerificationReport::new(
        "adjoint-chain-map",
        n,
        (0, n as i64),
        adj.as_ref().map(|_| ()).map_err(|e| e.to_string()),
    ));

    if let Ok(adj) = &adj {
        let check = match field {
            CoeffField::Q => "cone-exact-Q",
            CoeffField::Fp(_) => "cone-exact-Fp",
        };
        let result = cone(adj)
            .map_err(|e| e.to_string())
            .and_then(|c| exact_over_degrees(&c, 0, bound, field, threads));
        out.push(VerificationReport::new(check, n, (0, bound), result));
    }

    let restricted = b.complex().restrict(0, RestrictMode::SetZero);
    let result = restricted.map_err(|e| e.to_string()).and_then(|r| {
        // degree 0: only the structure sheaf of the distinguished point
        let h0 = graded_homology(&r, 0, field).map_err(|e| e.to_string())?;
        if h0.get(&0) != Some(&1) || h0.iter().any(|(&i, &x)| i != 0 && x > 0) {
            return Err(format!("unexpected degree-0 piece {h0:?}"));
        }
        exact_over_degrees(&r, 1, bound, field, threads)
    });
    out.push(VerificationReport::new("hyperplane-exact", n, (0, bound), result));

    for j in 1..=n {
        let result = b
            .complex()
            .restrict(j, RestrictMode::SetOne)
            .and_then(|c| contraction_null_homotopy(&c, j))
            .map(|_| ())
            .map_err(|e| e.to_string());
        out.push(VerificationReport::new(
            &format!("chart-{j}-contractible"),
            n,
            (0, n as i64),
            result,
        ));
    }
    let result = match b
        .complex()
        .restrict(0, RestrictMode::SetOne)
        .and_then(|c| contraction_null_homotopy(&c, 0))
    {
        Err(KoszulError::NotContractible(_)) => Ok(()),
        Err(e) => Err(format!("unexpected error: {e}")),
        Ok(_) => Err("chart 0 wrongly reported contractible".into()),
    };
    out.push(VerificationReport::new("chart-0-not-contractible", n, (0, n as i64), result));

    let chi = b.complex().euler_characteristic();
    out.push(VerificationReport::new(
        "k-class-vanishes",
        n,
        (0, n as i64),
        if chi == 0 { Ok(()) } else { Err(format!("alternating rank sum {chi}")) },
    ));
    out
}

fn exact_over_degrees(
    c: &super::complex::GradedComplex,
    lo: i64,
    hi: i64,
    field: CoeffField,
    threads: usize,
) -> Result<(), String> {
    let degrees: Vec<i64> = (lo..=hi).collect();
    let check_one = |d: i64| -> Result<(), String> {
        let h = graded_homology(c, d, field).map_err(|e| e.to_string())?;
        if let Some((deg, dim)) = h.iter().find(|(_, &x)| x > 0) {
            return Err(format!("homology {dim} in degree {deg} at graded degree {d}"));
        }
        Ok(())
    };
    if threads <= 1 || degrees.len() <= 1 {
        return degrees.into_iter().try_for_each(check_one);
    }
    let workers = threads.min(degrees.len());
    let mut results: Vec<Result<(), String>> = vec![];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let degrees = &degrees;
                let check_one = &check_one;
                scope.spawn(move || {
                    degrees
                        .iter()
                        .skip(w)
                        .step_by(workers)
                        .try_for_each(|&d| check_one(d))
                })
            })
            .collect();
        results = handles.into_iter().map(|h| h.join().expect("worker panicked")).collect();
    });
    // deterministic reporting: lowest failing degree wins
    let mut errs: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    errs.sort();
    match errs.into_iter().next() {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

/// Default graded bound used by the suite.
pub fn default_bound(n: usize) -> i64 {
    3 * n as i64 + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_small() {
        for n in 1..=2 {
            let reports = verify_suite(n, default_bound(n), CoeffField::Q);
            for r in &reports {
                assert!(r.passed(), "{}: {}", r.check, r.result);
            }
            let reports = verify_suite(n, default_bound(n), CoeffField::Fp(101));
            for r in &reports {
                assert!(r.passed(), "{}: {}", r.check, r.result);
            }
        }
    }

    #[test]
    fn report_serializes() {
        let reports = verify_suite(1, 3, CoeffField::Q);
        let json = serde_json::to_string(&reports).unwrap();
        assert!(json.contains("\"check\""));
        assert!(json.contains("\"degree_range\""));
    }
}
