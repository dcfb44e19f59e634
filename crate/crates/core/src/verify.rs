//! The release checklist: eight numbered criteria, each reporting pass or
//! fail with a runtime limit.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, weight_lower_bound};
use crate::code::{build_code, quotient_codeword, CodeInstance, CodeSpec, Variant};
use crate::cyclotomy::{self, QadicParams};
use crate::distance::{minimum_distance, SearchBudget};
use crate::gf::Poly;
use crate::golden;
use crate::nt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Cyclotomy,
    Tables,
    Distance,
    Witnesses,
    SpherePacking,
    Dimension,
    Properties,
    Scope,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::Cyclotomy,
        Group::Tables,
        Group::Distance,
        Group::Witnesses,
        Group::SpherePacking,
        Group::Dimension,
        Group::Properties,
        Group::Scope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Cyclotomy => "cyclotomy",
            Group::Tables => "tables",
            Group::Distance => "distance",
            Group::Witnesses => "witnesses",
            Group::SpherePacking => "sphere_packing",
            Group::Dimension => "dimension",
            Group::Properties => "properties",
            Group::Scope => "scope",
        }
    }

    pub fn criterion(self) -> u8 {
        Group::ALL.iter().position(|&g| g == self).unwrap() as u8 + 1
    }

    fn limit(self) -> Duration {
        Duration::from_secs(match self {
            Group::Cyclotomy | Group::Tables | Group::SpherePacking => 1,
            Group::Distance => 60,
            Group::Witnesses => 10,
            Group::Dimension => 120,
            Group::Properties | Group::Scope => 120,
        })
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        if let Ok(i) = s.parse::<usize>() {
            return Group::ALL
                .get(i.wrapping_sub(1))
                .copied()
                .ok_or_else(|| format!("no criterion {i}"));
        }
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s || (s == "sphere" && *g == Group::SpherePacking))
            .ok_or_else(|| format!("unknown group '{s}'"))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reference table cells to compare the order search against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTables {
    pub cells: Vec<(u64, u64, u64, u64)>,
    pub bounds: Vec<(u64, u64, u64)>,
}

impl Default for GoldenTables {
    fn default() -> Self {
        GoldenTables {
            cells: golden::ORDER_TABLE_CELLS.to_vec(),
            bounds: golden::ORDER_TABLE_BOUNDS.to_vec(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Criteria to run; empty means all.
    pub only: Vec<Group>,
    pub seed: u64,
    pub golden: GoldenTables,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            only: Vec::new(),
            seed: 0x5eed,
            golden: GoldenTables::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub criterion: u8,
    pub group: Group,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
    /// Checks that failed; empty on success.
    pub failures: Vec<String>,
    pub summary: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} ({} ms, limit {} ms)",
            self.criterion,
            self.group,
            if self.passed { "PASS" } else { "FAIL" },
            self.summary,
            self.elapsed_ms,
            self.limit_ms
        )?;
        for fail in &self.failures {
            write!(f, "\n    - {fail}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

/// Collects failed checks for one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, label: &str, got: T, want: T) {
        let ok = got == want;
        self.check(ok, || format!("{label}: got {got:?}, expected {want:?}"));
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }
}

pub fn run(opts: &VerifyOptions) -> Report {
    let selected: Vec<Group> = if opts.only.is_empty() {
        Group::ALL.to_vec()
    } else {
        Group::ALL.into_iter().filter(|g| opts.only.contains(g)).collect()
    };
    Report {
        outcomes: selected.into_iter().map(|g| run_one(g, opts)).collect(),
    }
}

pub fn run_one(group: Group, opts: &VerifyOptions) -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    match group {
        Group::Cyclotomy => cyclotomy_goldens(&mut c),
        Group::Tables => table_reproduction(&mut c, &opts.golden),
        Group::Distance => exact_distances(&mut c),
        Group::Witnesses => quotient_witnesses(&mut c),
        Group::SpherePacking => sphere_packing_certificates(&mut c),
        Group::Dimension => dimension_consistency(&mut c),
        Group::Properties => property_suites(&mut c, opts.seed),
        Group::Scope => scope_evaluator(&mut c),
    }
    let elapsed = start.elapsed();
    let limit = group.limit();
    if elapsed > limit {
        c.fail(format!("runtime {elapsed:?} exceeds {limit:?}"));
    }
    Outcome {
        criterion: group.criterion(),
        group,
        passed: c.failures.is_empty(),
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
        summary: format!("{} of {} checks passed", c.count - c.failures.len(), c.count),
        failures: c.failures,
    }
}

fn cyclotomy_goldens(c: &mut Checks) {
    let p4 = QadicParams::new(3, 4).expect("valid");
    let p6 = QadicParams::new(3, 6).expect("valid");
    match cyclotomy::representatives(&p4, 2) {
        Ok(r) => c.eq("R(3,4,2)", r.as_slice(), golden::R_3_4_2),
        Err(e) => c.fail(format!("R(3,4,2): {e}")),
    }
    match cyclotomy::maximal_set(&p4, 2) {
        Ok(m) => c.eq("M(3,4,2)", m.as_slice(), golden::M_3_4_2),
        Err(e) => c.fail(format!("M(3,4,2): {e}")),
    }
    match cyclotomy::maximal_set(&p6, 2) {
        Ok(m) => c.eq("M(3,6,2)", m.as_slice(), golden::M_3_6_2),
        Err(e) => c.fail(format!("M(3,6,2): {e}")),
    }
}

fn table_reproduction(c: &mut Checks, golden: &GoldenTables) {
    let rows = match bounds::order_table(7, 32) {
        Ok(r) => r,
        Err(e) => return c.fail(format!("order table: {e}")),
    };
    let found: HashSet<(u64, u64, u64, u64)> = rows.iter().map(|r| (r.q, r.a, r.l, r.e)).collect();
    for &(q, a, l, e) in &golden.cells {
        c.check(found.contains(&(q, a, l, e)), || {
            let actual = rows
                .iter()
                .find(|r| r.q == q && r.a == a)
                .map(|r| format!("search gives (q={}, a={}, l={}, e={})", r.q, r.a, r.l, r.e))
                .unwrap_or_else(|| {
                    match nt::mult_order(-(a as i128), (q + a) as u128) {
                        Ok(o) => format!("order of -{a} mod {} is {o}", q + a),
                        Err(err) => err.to_string(),
                    }
                });
            format!("cell (q={q}, a={a}, l={l}, e={e}) not reproduced: {actual}")
        });
    }
    let tabulated: HashSet<u64> = rows.iter().map(|r| r.q).collect();
    for &(q, lo, hi) in &golden.bounds {
        let row = rows.iter().find(|r| r.q == q);
        let got = row.map(|r| (r.q_plus_1, r.two_q_minus_1));
        c.check(tabulated.contains(&q) && got == Some((lo, hi)), || {
            format!("bound row (q={q}, {lo}, {hi}) not reproduced: emitted {got:?}")
        });
    }
}

fn exact_distance_of(c: &mut Checks, spec: CodeSpec, want: usize) {
    let result = build_code(&spec)
        .map_err(|e| e.to_string())
        .and_then(|inst| minimum_distance(&inst, &SearchBudget::default()).map_err(|e| e.to_string()));
    match result {
        Ok(r) => {
            c.check(r.exact, || format!("d({spec}) search was not exhaustive"));
            c.eq(&format!("d({spec})"), r.value, want);
        }
        Err(e) => c.fail(format!("d({spec}): {e}")),
    }
}

fn exact_distances(c: &mut Checks) {
    let omega = |q, m, h| CodeSpec::omega(q, m, h).expect("valid");
    exact_distance_of(c, omega(2, 3, 1), 3);
    exact_distance_of(c, omega(2, 4, 1), 3);
    exact_distance_of(c, omega(2, 3, 2), 7);
    exact_distance_of(c, omega(3, 2, 1), 4);
    exact_distance_of(c, omega(3, 3, 1), 4);
    exact_distance_of(c, CodeSpec::omega_bar(2, 4, 1).expect("valid"), 6);
    exact_distance_of(c, omega(3, 2, 1), weight_lower_bound(3, 1) as usize);
}

fn quotient_witnesses(c: &mut Checks) {
    let cases = [
        (CodeSpec::omega(3, 4, 2), 16u128, 16usize, true),
        (CodeSpec::omega_bar(3, 6, 2), 13, 26, false),
    ];
    for (spec, e, weight, exact) in cases {
        let spec = spec.expect("valid");
        let result = build_code(&spec).map_err(|e| e.to_string()).and_then(|inst| {
            let w = quotient_codeword(spec.q, spec.m, spec.h, e, 1, spec.variant).map_err(|e| e.to_string())?;
            let member = inst.is_member(w.word.coeffs()).map_err(|e| e.to_string())?;
            Ok((member, w.word.weight()))
        });
        match result {
            Ok((member, got)) => {
                c.check(member, || format!("quotient word e={e} is not in {spec}"));
                let ok = if exact { got == weight } else { got <= weight };
                c.check(ok, || format!("quotient word e={e} in {spec} has weight {got}, want {} {weight}", if exact { "=" } else { "<=" }));
            }
            Err(err) => c.fail(format!("{spec} with e={e}: {err}")),
        }
    }
}

fn sphere_packing_certificates(c: &mut Checks) {
    c.eq("sphere_packing_ok(15,6,2,7)", bounds::sphere_packing_ok(15, 6, 2, 7), false);
    c.eq("distance_optimal(15,6,2,6)", bounds::distance_optimal(15, 6, 2, 6), true);
    c.eq("sphere_packing_ok(8,4,3,5)", bounds::sphere_packing_ok(8, 4, 3, 5), false);
    c.eq("distance_optimal(8,4,3,4)", bounds::distance_optimal(8, 4, 3, 4), true);
    let p = bounds::polynomial_positivity_check();
    c.eq("cubic and derivatives at 15", p.cubic_at_15, [384, 296, 66, 6]);
    c.eq("quintic at 26", p.quintic_at_26, 11_579_850);
    c.check(p.all_positive, || "positivity fails".into());
    c.check(p.cubic_matches_ball, || "cubic differs from the binary ball expression".into());
    c.check(p.quintic_matches_ball, || "quintic differs from the ternary ball expression".into());
}

fn dimension_grid() -> Vec<CodeSpec> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4] {
        for m in 2..=6u32 {
            if (q as u128).pow(m) - 1 > 1 << 20 {
                continue;
            }
            for h in 1..m {
                out.push(CodeSpec::omega(q, m, h).expect("valid"));
            }
        }
    }
    out
}

fn dimension_consistency(c: &mut Checks) {
    for spec in dimension_grid() {
        let (q, m, h) = (spec.q as u128, spec.m, spec.h);
        let want = cyclotomy::low_weight_count(q, m, h);
        let formula: u128 = (1..=h).map(|i| (q - 1).pow(i) * binomial(m as u128, i as u128)).sum();
        c.eq(&format!("|I({q},{m},{h})|"), want, formula);
        let deg = match build_code(&spec) {
            Ok(inst) => inst.n() - inst.k(),
            Err(e) => return c.fail(format!("{spec}: {e}")),
        };
        c.eq(&format!("deg g for {spec}"), deg as u128, formula);
        if h <= (m - 1) / 2 {
            let bar = spec.with_variant(Variant::OmegaBar);
            match build_code(&bar) {
                Ok(inst) => c.eq(&format!("deg g for {bar}"), (inst.n() - inst.k()) as u128, 1 + 2 * formula),
                Err(e) => c.fail(format!("{bar}: {e}")),
            }
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn property_suites(c: &mut Checks, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = dimension_grid();

    // (a) weight is constant on classes.
    for spec in &grid {
        let params = spec.params();
        let Ok(part) = cyclotomy::coset_partition(&params, spec.h) else {
            c.fail(format!("partition of {spec}"));
            continue;
        };
        let ok = part
            .classes
            .iter()
            .all(|cls| cls.iter().all(|&a| params.wt_q(a as i128) == params.wt_q(cls[0] as i128)));
        c.check(ok, || format!("weight not constant on a class of {spec}"));
    }

    // (b) condition (*) on M and on I agree for every proper divisor.
    for spec in &grid {
        let params = spec.params();
        let n = params.n();
        let (Ok(m_set), Ok(i_set), Ok(f)) = (
            cyclotomy::maximal_set(&params, spec.h),
            cyclotomy::index_set_i(&params, spec.h),
            nt::factorize(n),
        ) else {
            c.fail(format!("index sets of {spec}"));
            continue;
        };
        for e in f.divisors().into_iter().filter(|&e| e >= 2 && e < n) {
            let via_m = bounds::divides_none(e, &m_set);
            let via_i = bounds::divides_none(e, &i_set);
            c.check(via_m == via_i, || format!("condition on {spec}, e={e}: M gives {via_m}, I gives {via_i}"));
        }
    }

    // (c) structural odd-order test against the parity of the order.
    let mut pairs = 0;
    while pairs < 10_000 {
        let e: u128 = rng.gen_range(2..=1_000_000);
        let b: i128 = rng.gen_range(-1_000_000..=1_000_000);
        if num_integer::gcd(nt::reduce_signed(b, e), e) != 1 {
            continue;
        }
        pairs += 1;
        match (nt::odd_order_test(b, e), nt::mult_order(b, e)) {
            (Ok(t), Ok(o)) => c.check(t.odd == (o % 2 == 1), || format!("odd-order test disagrees for b={b}, e={e}")),
            (Err(err), _) | (_, Err(err)) => c.fail(format!("b={b}, e={e}: {err}")),
        }
    }

    // (d) for p = 3 mod 4 the order of b is odd iff b is a square.
    for p in (3..500u64).filter(|&p| p % 4 == 3 && nt::is_prime_trial(p)) {
        for b in 2..p {
            let residue = nt::pow_mod(b as u128, (p as u128 - 1) / 2, p as u128) == 1;
            match nt::odd_order_test(b as i128, p as u128) {
                Ok(t) => c.check(t.odd == residue, || format!("p={p}, b={b}: odd order {} but residue {residue}", t.odd)),
                Err(err) => c.fail(format!("p={p}, b={b}: {err}")),
            }
        }
    }

    // (e) the generator divides x^n - 1.
    for spec in &grid {
        for variant in [Variant::Omega, Variant::OmegaBar] {
            let spec = spec.with_variant(variant);
            match build_code(&spec) {
                Ok(inst) => c.check(generator_divides(&inst), || format!("generator of {spec} does not divide x^n - 1")),
                Err(e) => c.fail(format!("{spec}: {e}")),
            }
        }
    }
}

fn generator_divides(inst: &CodeInstance) -> bool {
    let f = inst.small_field();
    Poly::x_pow_minus_one(inst.n(), f)
        .rem(inst.gen_poly(), f)
        .is_ok_and(|r| r.is_zero())
}

/// Asymptotic statements are out of reach; this checks that the
/// per-instance sphere-packing evaluator agrees with the closed-form
/// barred bounds where they are stated.
fn scope_evaluator(c: &mut Checks) {
    for m in 4..=16 {
        c.check(bounds::barred_weight_one_sphere_packing(2, m), || {
            format!("sphere packing does not force d̄(2,{m},1) <= 6")
        });
    }
    for m in (3..=15).step_by(2) {
        c.check(bounds::barred_weight_one_sphere_packing(3, m), || {
            format!("sphere packing does not force d̄(3,{m},1) <= 10")
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_parsing() {
        assert_eq!("tables".parse::<Group>().unwrap(), Group::Tables);
        assert_eq!("2".parse::<Group>().unwrap(), Group::Tables);
        assert_eq!("sphere-packing".parse::<Group>().unwrap(), Group::SpherePacking);
        assert!("9".parse::<Group>().is_err());
        assert!("nope".parse::<Group>().is_err());
        assert_eq!(Group::Scope.criterion(), 8);
    }

    #[test]
    fn corrupted_golden_names_the_row() {
        let mut golden = GoldenTables::default();
        golden.cells.retain(|c| c.0 != 19);
        golden.cells.push((13, 5, 3, 19));
        let opts = VerifyOptions {
            only: vec![Group::Tables],
            golden,
            ..VerifyOptions::default()
        };
        let report = run(&opts);
        assert_eq!(report.outcomes.len(), 1);
        let o = &report.outcomes[0];
        assert!(!o.passed);
        assert_eq!(o.failures.len(), 1);
        assert!(o.failures[0].contains("q=13, a=5, l=3, e=19"), "{}", o.failures[0]);
    }

    #[test]
    fn cyclotomy_criterion_fails_only_on_printed_m_3_6_2() {
        let o = run_one(Group::Cyclotomy, &VerifyOptions::default());
        assert_eq!(o.failures.len(), 1, "{o}");
        assert!(o.failures[0].starts_with("M(3,6,2)"), "{o}");
    }
}
