//! Batch execution of every check over ranges of `(p, d, n)`.
//!
//! The job list is generated in ascending `(identity, p, n, d)` order and
//! [`crate::exec::ordered_map`] preserves input order, so the report stream
//! is deterministic regardless of how the work is scheduled.

use crate::exec::{ordered_map, ordered_map_serial};
use crate::primes::primes_up_to;
use crate::verify::{
    arr_report, arr_symbolic_report, closed_form_sums_report, coeff_table_report,
    cube_identity_report, cube_triviality_report, frobenius_chi_report,
    frobenius_oracle_report, gr_identity_report, verify_deligne, verify_main_degree,
    verify_main_grading, verify_mumford, verify_remark_lambda, VerificationReport,
    CUBE_TRIPLE_COUNT,
};

/// Largest prime for which the Frobenius pushforward is swept; the sweep is
/// exhaustive in `d` there, so it is kept at desk scale.
const FROBENIUS_P_MAX: u64 = 13;

/// Ranges for a sweep. Defaults match the per-identity invariants: primes up
/// to 13, twists `|d| <= 50`, powers `n <= 5`, at least a thousand cube
/// triples.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p_max: u64,
    pub d_max: i64,
    pub n_max: u32,
    pub assume_mumford: bool,
    pub cube_triples: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p_max: 13,
            d_max: 50,
            n_max: 5,
            assume_mumford: false,
            cube_triples: 1000,
        }
    }
}

impl SweepConfig {
    pub fn with_p_max(p_max: u64, assume_mumford: bool) -> Self {
        SweepConfig {
            p_max,
            assume_mumford,
            ..SweepConfig::default()
        }
    }
}

// One unit of work; kept small and Copy so the scheduler can shuffle them
// freely.
#[derive(Debug, Clone, Copy)]
enum Job {
    Arr { p: u64, d: i64 },
    ArrSymbolic { p: u64 },
    CoeffTable { p: u64 },
    ClosedFormSums { p: u64 },
    CubeIdentity { p: Option<u64> },
    CubeTriviality { start: usize, count: usize },
    Deligne { p2_mode: bool },
    FrobeniusChi { p: u64, d: i64 },
    FrobeniusOracle { p: u64, d: i64 },
    GrIdentity { p: u64 },
    MainDegree { p: u64 },
    MainGrading { p: u64 },
    Mumford { n: u32, p: u64 },
    RemarkLambda { n: u32, p: u64 },
}

fn jobs(cfg: &SweepConfig) -> Vec<Job> {
    let primes = primes_up_to(cfg.p_max);
    let frobenius_primes: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| p <= FROBENIUS_P_MAX)
        .collect();
    let mut jobs = Vec::new();

    // ascending (identity, p, n, d); identity blocks in alphabetical order
    for &p in &primes {
        for d in -cfg.d_max..=cfg.d_max {
            jobs.push(Job::Arr { p, d });
        }
    }
    for &p in &primes {
        jobs.push(Job::ArrSymbolic { p });
    }
    for &p in &primes {
        jobs.push(Job::ClosedFormSums { p });
    }
    for &p in &primes {
        jobs.push(Job::CoeffTable { p });
    }
    jobs.push(Job::CubeIdentity { p: None });
    for &p in &primes {
        jobs.push(Job::CubeIdentity { p: Some(p) });
    }
    // chunk the triple enumeration so it parallelizes
    let total = cfg.cube_triples.min(CUBE_TRIPLE_COUNT);
    let chunk = 1024usize;
    let mut start = 0usize;
    while start < total {
        let count = chunk.min(total - start);
        jobs.push(Job::CubeTriviality { start, count });
        start += chunk;
    }
    jobs.push(Job::Deligne {
        p2_mode: cfg.p_max >= 2,
    });
    for &p in &frobenius_primes {
        for d in -cfg.d_max..=cfg.d_max {
            jobs.push(Job::FrobeniusChi { p, d });
        }
    }
    for &p in &frobenius_primes {
        for d in 0..=cfg.d_max {
            jobs.push(Job::FrobeniusOracle { p, d });
        }
    }
    for &p in &primes {
        jobs.push(Job::GrIdentity { p });
    }
    for &p in &primes {
        jobs.push(Job::MainDegree { p });
    }
    for &p in &primes {
        jobs.push(Job::MainGrading { p });
    }
    for n in 0..=cfg.n_max {
        jobs.push(Job::Mumford { n, p: 2 });
    }
    for n in 0..=cfg.n_max {
        for &p in &primes {
            jobs.push(Job::RemarkLambda { n, p });
        }
    }
    jobs
}

fn run_job(job: Job, cfg: &SweepConfig) -> Vec<VerificationReport> {
    let mumford = cfg.assume_mumford;
    let one = |r: crate::Result<VerificationReport>| {
        vec![r.expect("sweep only generates valid parameters")]
    };
    match job {
        Job::Arr { p, d } => one(arr_report(p, d)),
        Job::ArrSymbolic { p } => one(arr_symbolic_report(p)),
        Job::CoeffTable { p } => one(coeff_table_report(p)),
        Job::ClosedFormSums { p } => one(closed_form_sums_report(p)),
        Job::CubeIdentity { p } => one(cube_identity_report(p)),
        Job::CubeTriviality { start, count } => vec![cube_triviality_report(start, count)],
        Job::Deligne { p2_mode } => verify_deligne(p2_mode, mumford),
        Job::FrobeniusChi { p, d } => one(frobenius_chi_report(p, d)),
        Job::FrobeniusOracle { p, d } => one(frobenius_oracle_report(p, d)),
        Job::GrIdentity { p } => one(gr_identity_report(p)),
        Job::MainDegree { p } => one(verify_main_degree(p, mumford)),
        Job::MainGrading { p } => one(verify_main_grading(p)),
        Job::Mumford { n, p } => one(verify_mumford(n, p, mumford)),
        Job::RemarkLambda { n, p } => one(verify_remark_lambda(n, p, mumford)),
    }
}

/// Aggregated result of a sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub reports: Vec<VerificationReport>,
    pub passed: usize,
    pub failed: usize,
    pub unexpected: usize,
}

impl SweepOutcome {
    fn aggregate(reports: Vec<VerificationReport>) -> Self {
        let passed = reports.iter().filter(|r| r.passed()).count();
        let failed = reports.len() - passed;
        let unexpected = reports.iter().filter(|r| !r.as_expected()).count();
        SweepOutcome {
            reports,
            passed,
            failed,
            unexpected,
        }
    }

    /// Every check behaved as expected (negative controls failed, the rest
    /// passed).
    pub fn ok(&self) -> bool {
        self.unexpected == 0
    }
}

/// Run the full sweep, in parallel when the `parallel` feature is enabled.
pub fn run_sweep(cfg: &SweepConfig) -> SweepOutcome {
    let reports = ordered_map(jobs(cfg), |job| run_job(job, cfg))
        .into_iter()
        .flatten()
        .collect();
    SweepOutcome::aggregate(reports)
}

/// Sequential reference sweep; produces the same report stream as
/// [`run_sweep`].
pub fn run_sweep_serial(cfg: &SweepConfig) -> SweepOutcome {
    let reports = ordered_map_serial(jobs(cfg), |job| run_job(job, cfg))
        .into_iter()
        .flatten()
        .collect();
    SweepOutcome::aggregate(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(assume_mumford: bool) -> SweepConfig {
        SweepConfig {
            p_max: 3,
            d_max: 4,
            n_max: 2,
            assume_mumford,
            cube_triples: 64,
        }
    }

    #[test]
    fn sweep_with_mumford_is_clean() {
        let outcome = run_sweep(&small_config(true));
        assert!(outcome.ok());
        // exactly one deliberate failure: the exponent-1 negative control
        assert_eq!(outcome.failed, 1);
        assert_eq!(outcome.unexpected, 0);
    }

    #[test]
    fn sweep_without_mumford_fails_the_lambda_identities() {
        let outcome = run_sweep(&small_config(false));
        assert!(!outcome.ok());
        let unexpected: Vec<&str> = outcome
            .reports
            .iter()
            .filter(|r| !r.as_expected())
            .map(|r| r.identity.as_str())
            .collect();
        assert!(unexpected.contains(&"main_degree"));
        assert!(unexpected.contains(&"deligne_riemann_roch"));
        // the lambda-free checks still pass
        assert!(outcome
            .reports
            .iter()
            .filter(|r| r.identity == "arr" || r.identity == "gr_identity")
            .all(|r| r.passed()));
    }

    #[test]
    fn sweep_reports_are_ordered_and_deterministic() {
        let a = run_sweep(&small_config(true));
        let b = run_sweep_serial(&small_config(true));
        assert_eq!(a.reports.len(), b.reports.len());
        let key = |r: &VerificationReport| {
            (
                r.identity.clone(),
                r.params.clone(),
                r.status,
                r.lhs.clone(),
                r.rhs.clone(),
            )
        };
        for (x, y) in a.reports.iter().zip(b.reports.iter()) {
            assert_eq!(key(x), key(y));
        }
        let identities: Vec<&String> = a.reports.iter().map(|r| &r.identity).collect();
        let mut sorted = identities.clone();
        sorted.sort();
        assert_eq!(identities, sorted, "identity blocks must be ascending");
    }
}
