//! Registry of published codes and the checks that reproduce them.
//!
//! Each entry rebuilds a code from a plan (or from printed reference data)
//! and compares parameters, row spaces and distances. Reference generator
//! matrices, point lists and twist vectors live under `data/`.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::agcode::{self, EvalData};
use crate::constructions::{
    self, certify_distance, evaluate_plan, evaluate_plan_with, mds_status, Char2Curve, Construction, DistanceMode,
    MdsStatus, MulticosetVariant, Overrides, Plan, MDS_MINOR_LIMIT,
};
use crate::curve::AffinePoint;
use crate::gf::{Elem, Field};
use crate::lincode::{CodeError, DistanceCertificate, LinearCode};

/// Printed data attached to a published code.
#[derive(Debug, Clone, Default)]
pub struct Reference {
    pub points: Vec<AffinePoint>,
    pub matrix: Vec<Vec<Elem>>,
    pub twist: Option<Vec<Elem>>,
    pub witness: Option<Vec<Elem>>,
}

/// Parses the `[points]`, `[matrix]`, `[twist]`, `[witness]` sections of a
/// reference file. Lines starting with `#` are comments.
pub fn parse_reference(field: &Field, text: &str) -> Result<Reference, CodeError> {
    let mut r = Reference::default();
    let mut section = String::new();
    let parse_row = |line: &str| -> Result<Vec<Elem>, CodeError> {
        line.split_whitespace()
            .map(|t| field.parse(t).map_err(CodeError::from))
            .collect()
    };
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].to_string();
            continue;
        }
        match section.as_str() {
            "points" => {
                for tok in line.split_whitespace() {
                    let (x, y) = tok
                        .split_once(':')
                        .ok_or_else(|| CodeError::Format(format!("bad point {tok}")))?;
                    r.points.push(AffinePoint {
                        x: field.parse(x)?,
                        y: field.parse(y)?,
                    });
                }
            }
            "matrix" => r.matrix.push(parse_row(line)?),
            "twist" => r.twist = Some(parse_row(line)?),
            "witness" => r.witness = Some(parse_row(line)?),
            other => return Err(CodeError::Format(format!("unknown section [{other}]"))),
        }
    }
    Ok(r)
}

pub const GF41_32_16: &str = include_str!("../data/gf41_32_16.txt");
pub const GF81_24_12: &str = include_str!("../data/gf81_24_12.txt");
pub const GF16_ELLIPTIC_18: &str = include_str!("../data/gf16_elliptic_18.txt");
pub const GF16_HYPERELLIPTIC_26: &str = include_str!("../data/gf16_hyperelliptic_26.txt");
pub const GF25_KUMMER_12: &str = include_str!("../data/gf25_kummer_12.txt");
pub const GF9_HERMITIAN_27: &str = include_str!("../data/gf9_hermitian_27.txt");
pub const GF9_HALF_HERMITIAN_15: &str = include_str!("../data/gf9_half_hermitian_15.txt");

/// `[I_k | A]` for a printed redundancy block `A`.
pub fn systematic_from_redundancy(field: &Field, a: &[Vec<Elem>]) -> Result<LinearCode, CodeError> {
    let k = a.len();
    let r = a.first().map_or(0, Vec::len);
    let rows = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = vec![Elem::ZERO; k];
            v[i] = Elem::ONE;
            v.extend_from_slice(row);
            v
        })
        .collect();
    LinearCode::new(field, k + r, rows)
}

/// One line of an entry's outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Checks(pub Vec<CheckLine>);

impl Checks {
    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.0.push(CheckLine {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
        pass
    }

    pub fn equal<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) -> bool {
        let pass = got == want;
        self.check(name, pass, format!("got {got:?}, expected {want:?}"))
    }

    pub fn error(&mut self, name: impl Into<String>, err: impl std::fmt::Display) {
        self.check(name, false, err.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.0.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone)]
pub struct ReproOptions {
    /// Wall-clock budget for each distance computation.
    pub budget: Duration,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            budget: Duration::from_secs(900),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// Full checks, fast.
    Standard,
    /// Full checks; distance searches take minutes.
    Slow,
    /// Constructed and verified self-dual; distance as a bound only.
    BoundOnly,
    /// Listed but not run at desk scale.
    Excluded,
}

pub struct ReproEntry {
    pub id: &'static str,
    pub title: &'static str,
    pub kind: EntryKind,
    run: fn(&ReproOptions, &mut Checks),
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub title: String,
    pub kind: EntryKind,
    /// `None` for excluded entries.
    pub pass: Option<bool>,
    pub checks: Vec<CheckLine>,
    pub seconds: f64,
}

pub fn run_entry(entry: &ReproEntry, opts: &ReproOptions) -> EntryReport {
    let start = Instant::now();
    let mut checks = Checks::default();
    let pass = if entry.kind == EntryKind::Excluded {
        None
    } else {
        (entry.run)(opts, &mut checks);
        if checks.0.is_empty() {
            checks.check("entry produced checks", false, "no checks ran");
        }
        Some(checks.all_pass())
    };
    EntryReport {
        id: entry.id.into(),
        title: entry.title.into(),
        kind: entry.kind,
        pass,
        checks: checks.0,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Alternative ids accepted by [`find`].
const ALIASES: [(&str, &str); 1] = [("ex-hermitian2-9-16", "ex-half-hermitian-9-16")];

pub fn find(id: &str) -> Option<ReproEntry> {
    let id = ALIASES.iter().find(|(a, _)| *a == id).map_or(id, |(_, target)| target);
    registry().into_iter().find(|e| e.id == id)
}

// ---------------------------------------------------------------------------
// Shared checks.

fn field(q: u64) -> Field {
    Field::of_order(q).expect("registry fields are prime powers")
}

fn build(c: &mut Checks, plan: &Plan) -> Option<Construction> {
    build_with(c, plan, &Overrides::default())
}

fn build_with(c: &mut Checks, plan: &Plan, ov: &Overrides) -> Option<Construction> {
    match evaluate_plan_with(plan, ov) {
        Ok(b) => {
            c.check(
                format!("construct {}", plan.id()),
                true,
                format!(
                    "[{}, {}], s={}, twist {:?}, completion {:?}",
                    b.code.n(),
                    b.code.k(),
                    b.report.s,
                    b.report.twist_source,
                    b.report.completion
                ),
            );
            Some(b)
        }
        Err(e) => {
            c.error(format!("construct {}", plan.id()), e);
            None
        }
    }
}

fn self_dual(c: &mut Checks, label: &str, code: &LinearCode, n: usize, k: usize) -> bool {
    let ok = c.equal(format!("{label} parameters [n, k]"), (code.n(), code.k()), (n, k));
    let sd = code.is_self_dual();
    c.check(
        format!("{label} self-dual"),
        sd,
        if sd { "G G^T = 0 and k = n/2" } else { "G G^T != 0" },
    );
    ok && sd
}

/// Certifies `d` and compares it with `want`. A `seed`, when given, is a
/// designed lower bound passed to the search.
fn exact_distance(
    c: &mut Checks,
    label: &str,
    code: &LinearCode,
    mode: DistanceMode,
    seed: Option<usize>,
    want: usize,
    opts: &ReproOptions,
) -> Option<DistanceCertificate> {
    match certify_distance(code, seed, mode, Some(opts.budget)) {
        Ok(cert) => {
            let pass = cert.exact() == Some(want) && witness_ok(code, &cert);
            let how = match seed {
                Some(s) => format!("{:?}, seeded with designed bound {s}", cert.method),
                None => format!("{:?}", cert.method),
            };
            c.check(
                format!("{label} minimum distance = {want}"),
                pass,
                format!("{how}: {} <= d <= {}", cert.d_low, cert.d_up),
            );
            Some(cert)
        }
        Err(e) => {
            c.error(format!("{label} minimum distance"), e);
            None
        }
    }
}

/// The witness codeword lies in the code and has weight `d_up`.
fn witness_ok(code: &LinearCode, cert: &DistanceCertificate) -> bool {
    match &cert.witness {
        Some(w) => code.contains(w) && LinearCode::weight(w) == cert.d_up,
        None => false,
    }
}

fn lower_bound(c: &mut Checks, label: &str, code: &LinearCode, designed: usize, want: usize, opts: &ReproOptions) {
    c.equal(format!("{label} designed bound"), designed, want);
    let budget = Some(opts.budget.min(Duration::from_secs(120)));
    match certify_distance(code, Some(designed), DistanceMode::Bz, budget) {
        Ok(cert) => {
            c.check(
                format!("{label} d >= {want}"),
                cert.d_low >= want && (cert.witness.is_none() || witness_ok(code, &cert)),
                format!("{:?}: {} <= d <= {}", cert.method, cert.d_low, cert.d_up),
            );
        }
        Err(e) => c.error(format!("{label} d >= {want}"), e),
    }
}

fn mds(c: &mut Checks, label: &str, code: &LinearCode, structural: bool, limit: u128) {
    match mds_status(code, structural, limit) {
        MdsStatus::Certified { mds } => {
            c.check(
                format!("{label} MDS"),
                mds,
                format!("all {} minors of the redundancy block checked", code.mds_minor_count()),
            );
        }
        MdsStatus::Structural => {
            c.check(
                format!("{label} MDS"),
                true,
                format!(
                    "extended generalized Reed-Solomon by construction ({} minors not enumerated)",
                    code.mds_minor_count()
                ),
            );
        }
        MdsStatus::Skipped { minors } => {
            c.check(
                format!("{label} MDS"),
                false,
                format!("{minors} minors exceed the limit"),
            );
        }
    }
}

fn reference(c: &mut Checks, q: u64, text: &str) -> Option<(Field, Reference)> {
    let f = field(q);
    match parse_reference(&f, text) {
        Ok(r) => Some((f, r)),
        Err(e) => {
            c.error("parse reference data", e);
            None
        }
    }
}

fn spanned(c: &mut Checks, label: &str, f: &Field, n: usize, rows: Vec<Vec<Elem>>) -> Option<LinearCode> {
    match LinearCode::from_spanning(f, n, rows) {
        Ok(code) => Some(code),
        Err(e) => {
            c.error(label, e);
            None
        }
    }
}

/// The untwisted evaluation code on the given places.
fn untwisted(b: &Construction) -> Result<LinearCode, agcode::AgError> {
    agcode::evaluate_code(&b.eval)
}

// ---------------------------------------------------------------------------
// Genus-zero entries.

fn thm6_entry(q: u32, n: u32, d: usize, c: &mut Checks) {
    let Some(b) = build(c, &Plan::Thm6 { q, n }) else {
        return;
    };
    let len = 2 * n as usize + 2;
    self_dual(c, "code", &b.code, len, len / 2);
    let dh_ok = h_prime_squares(&b.eval);
    c.check(
        "h'(u) is a nonzero square for every u in U",
        dh_ok,
        format!("|U| = {}", b.eval.support_x().len()),
    );
    mds(c, "code", &b.code, b.report.mds_by_structure, MDS_MINOR_LIMIT);
    c.equal("designed distance n - k + 1", b.report.promised.d_bound, d);
}

fn h_prime_squares(ed: &EvalData) -> bool {
    let f = ed.field();
    let dh = ed.h().derivative();
    ed.support_x().iter().all(|&u| f.quadratic_character(dh.eval(u)) == 1)
}

fn ex_thm6_37(_: &ReproOptions, c: &mut Checks) {
    thm6_entry(37, 12, 14, c);
}

fn ex_thm6_61_26(_: &ReproOptions, c: &mut Checks) {
    thm6_entry(61, 12, 14, c);
}

fn ex_thm6_61_42(_: &ReproOptions, c: &mut Checks) {
    thm6_entry(61, 20, 22, c);
}

fn ex_thm6_73(_: &ReproOptions, c: &mut Checks) {
    // The single-coset recipe has no β for n = 24; the n-th powers are the
    // cube roots of unity and 1 - ζ is a nonsquare for both.
    let f = field(73);
    let cube_roots: Vec<Elem> = f
        .nonzero_by_log()
        .filter(|&z| z != Elem::ONE && f.pow(z, 3) == Elem::ONE)
        .collect();
    let obstruction = cube_roots.len() == 2 && cube_roots.iter().all(|&z| !f.is_square(f.sub(Elem::ONE, z)));
    c.check(
        "single coset U_24 ∪ βU_24 ∪ {0} is unavailable",
        obstruction && evaluate_plan(&Plan::Thm6 { q: 73, n: 24 }).is_err(),
        "1 - ζ is a nonsquare for both primitive cube roots ζ",
    );
    let plan = Plan::Multicoset {
        q: 73,
        r: None,
        n: Some(12),
        case: None,
        t: 3,
        include_zero: true,
        variant: MulticosetVariant::Square,
    };
    let Some(b) = build(c, &plan) else { return };
    self_dual(c, "code", &b.code, 50, 25);
    c.check(
        "h'(u) is a nonzero square for every u in U",
        h_prime_squares(&b.eval),
        "U = U_12 ∪ 3 cosets ∪ {0}",
    );
    mds(c, "code", &b.code, b.report.mds_by_structure, MDS_MINOR_LIMIT);
    c.equal("designed distance n - k + 1", b.report.promised.d_bound, 26);
}

fn ex_gf41_matrix_32(_: &ReproOptions, c: &mut Checks) {
    let Some((f, r)) = reference(c, 41, GF41_32_16) else {
        return;
    };
    let code = match systematic_from_redundancy(&f, &r.matrix) {
        Ok(code) => code,
        Err(e) => return c.error("reference generator", e),
    };
    self_dual(c, "reference [I | A]", &code, 32, 16);
    mds(c, "reference [I | A]", &code, false, u128::MAX);
}

fn ex_multicoset_41(_: &ReproOptions, c: &mut Checks) {
    let plan = Plan::Multicoset {
        q: 41,
        r: None,
        n: Some(10),
        case: None,
        t: 2,
        include_zero: true,
        variant: MulticosetVariant::Square,
    };
    let Some(b) = build(c, &plan) else { return };
    self_dual(c, "code", &b.code, 32, 16);
    mds(c, "code", &b.code, false, u128::MAX);
}

fn ex_multicoset_81(_: &ReproOptions, c: &mut Checks) {
    let plan = Plan::Multicoset {
        q: 81,
        r: Some(1),
        n: None,
        case: None,
        t: 2,
        include_zero: false,
        variant: MulticosetVariant::Square,
    };
    if let Some(b) = build(c, &plan) {
        self_dual(c, "code", &b.code, 24, 12);
        mds(c, "code", &b.code, false, u128::MAX);
    }
    let Some((f, r)) = reference(c, 81, GF81_24_12) else {
        return;
    };
    match systematic_from_redundancy(&f, &r.matrix) {
        Ok(code) => {
            self_dual(c, "reference [I | A]", &code, 24, 12);
            mds(c, "reference [I | A]", &code, false, u128::MAX);
        }
        Err(e) => c.error("reference generator", e),
    }
}

// ---------------------------------------------------------------------------
// Curves with printed data.

/// Builds `plan` on the printed places and compares with the printed
/// generator and twist. Returns the construction.
fn with_reference(c: &mut Checks, plan: &Plan, f: &Field, r: &Reference, use_twist: bool) -> Option<Construction> {
    let ov = Overrides {
        places: Some(r.points.clone()),
        twist: if use_twist { r.twist.clone() } else { None },
        ..Default::default()
    };
    let b = build_with(c, plan, &ov)?;
    let n = r.points.len();
    let printed = spanned(c, "printed generator", f, n, r.matrix.clone())?;
    match untwisted(&b) {
        Ok(ours) => {
            c.check(
                "row space of the printed generator = evaluation code",
                ours.row_space_equal(&printed),
                format!("printed rank {}, evaluation rank {}", printed.k(), ours.k()),
            );
        }
        Err(e) => c.error("evaluation code", e),
    }
    Some(b)
}

fn printed_twist_self_dual(c: &mut Checks, f: &Field, r: &Reference) {
    let n = r.points.len();
    let (Some(a), Some(printed)) = (&r.twist, spanned(c, "printed generator", f, n, r.matrix.clone())) else {
        return;
    };
    match printed.twist(a) {
        Ok(t) => {
            c.check(
                "printed twist a makes a·G self-dual",
                t.is_self_dual(),
                format!("[{}, {}]", t.n(), t.k()),
            );
        }
        Err(e) => c.error("printed twist", e),
    }
}

fn ex_elliptic_16_18(opts: &ReproOptions, c: &mut Checks) {
    let Some((f, r)) = reference(c, 16, GF16_ELLIPTIC_18) else {
        return;
    };
    let plan = Plan::Char2 {
        q: 16,
        curve: Char2Curve::Elliptic2,
        n: 9,
    };
    let Some(b) = with_reference(c, &plan, &f, &r, false) else {
        return;
    };
    printed_twist_self_dual(c, &f, &r);
    self_dual(c, "code", &b.code, 18, 9);
    exact_distance(c, "code", &b.code, DistanceMode::Bz, None, 9, opts);
}

fn char2_entry(curve: Char2Curve, n: u32, d: usize, seed: bool, opts: &ReproOptions, c: &mut Checks) {
    let Some(b) = build(c, &Plan::Char2 { q: 16, curve, n }) else {
        return;
    };
    let len = 2 * n as usize;
    self_dual(c, "code", &b.code, len, len / 2);
    let designed = b.report.promised.d_bound;
    c.check(
        format!("designed bound {designed} <= {d}"),
        designed <= d,
        format!("|D| - s = {designed}"),
    );
    exact_distance(c, "code", &b.code, DistanceMode::Bz, seed.then_some(designed), d, opts);
}

fn ex_elliptic_16_16(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Elliptic2, 8, 8, false, o, c);
}
fn ex_elliptic_16_20(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Elliptic2, 10, 10, false, o, c);
}
fn ex_elliptic_16_22(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Elliptic2, 11, 11, false, o, c);
}
fn ex_elliptic_16_24(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Elliptic2, 12, 12, true, o, c);
}
fn ex_hyperelliptic_16_28(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Hyper2, 14, 13, true, o, c);
}
fn ex_hyperelliptic_16_30(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Hyper2, 15, 14, true, o, c);
}
fn ex_hyperelliptic_16_32(o: &ReproOptions, c: &mut Checks) {
    char2_entry(Char2Curve::Hyper2, 16, 15, true, o, c);
}

fn ex_hyperelliptic_16_26(opts: &ReproOptions, c: &mut Checks) {
    let Some((f, mut r)) = reference(c, 16, GF16_HYPERELLIPTIC_26) else {
        return;
    };
    // The printed places satisfy y^2+y = x^5+1. Since w^10+w^5 = 1, the shift
    // y -> y+w^5 maps them onto y^2+y = x^5; constants lie in L(G), so the
    // evaluation row space is unchanged.
    let w5 = f.pow_w(5);
    let one = f.one();
    let shifted_curve = r.points.iter().all(|p| {
        let lhs = f.add(f.mul(p.y, p.y), p.y);
        lhs == f.add(f.pow(p.x, 5), one)
    });
    c.check(
        "printed places lie on y^2+y = x^5+1",
        shifted_curve,
        format!("{} places", r.points.len()),
    );
    for p in &mut r.points {
        p.y = f.add(p.y, w5);
    }
    let plan = Plan::Char2 {
        q: 16,
        curve: Char2Curve::Hyper2,
        n: 13,
    };
    let Some(b) = with_reference(c, &plan, &f, &r, false) else {
        return;
    };
    printed_twist_self_dual(c, &f, &r);
    self_dual(c, "code", &b.code, 26, 13);
    exact_distance(c, "code", &b.code, DistanceMode::Bz, None, 12, opts);
}

fn ex_prop_2q0_16(opts: &ReproOptions, c: &mut Checks) {
    let Some(b) = build(c, &Plan::Prop2q0 { q: 16 }) else {
        return;
    };
    self_dual(c, "code", &b.code, 8, 4);
    let cert = exact_distance(c, "code", &b.code, DistanceMode::Exact, None, 4, opts);
    if let Some(cert) = cert {
        c.check("d >= q0 = 4", cert.d_low >= 4, format!("d = {}", cert.d_low));
    }
}

fn ex_kummer_25_12(opts: &ReproOptions, c: &mut Checks) {
    let Some((f, r)) = reference(c, 25, GF25_KUMMER_12) else {
        return;
    };
    let plan = Plan::Kummer { q: 25, t: 5, n: 6 };
    let Some(own) = build(c, &plan) else { return };
    let mut ours: Vec<(u32, u32)> = own.eval.places().iter().map(|p| (p.x.raw(), p.y.raw())).collect();
    let mut printed: Vec<(u32, u32)> = r.points.iter().map(|p| (p.x.raw(), p.y.raw())).collect();
    ours.sort_unstable();
    printed.sort_unstable();
    c.check(
        "printed places = fibers over U_6",
        ours == printed,
        format!("{} places", printed.len()),
    );
    let Some(b) = with_reference(c, &plan, &f, &r, false) else {
        return;
    };
    printed_twist_self_dual(c, &f, &r);
    self_dual(c, "code", &b.code, 12, 6);
    exact_distance(c, "code", &b.code, DistanceMode::Exact, None, 5, opts);
}

fn ex_hermitian_9_28(opts: &ReproOptions, c: &mut Checks) {
    let Some((f, r)) = reference(c, 9, GF9_HERMITIAN_27) else {
        return;
    };
    let plan = Plan::Hermitian {
        q0: 3,
        case: 1,
        n: Some(9),
        r: None,
        t: None,
        k: None,
        ell: None,
        include_zero: false,
    };
    let Some(own) = build(c, &plan) else { return };
    self_dual(c, "code (own embedding)", &own.code, 28, 14);
    c.equal("base [n, k]", (own.base.n(), own.base.k()), (27, 13));
    exact_distance(c, "base", &own.base, DistanceMode::Bz, None, 12, opts);
    exact_distance(c, "code (own embedding)", &own.code, DistanceMode::Bz, None, 12, opts);

    let Some(witness) = r.witness.clone() else {
        return c.error("printed witness", "missing");
    };
    let ov = Overrides {
        places: Some(r.points.clone()),
        witness: vec![witness.clone()],
        ..Default::default()
    };
    let Some(b) = build_with(c, &plan, &ov) else { return };
    let Some(printed) = spanned(c, "printed generator", &f, 27, r.matrix.clone()) else {
        return;
    };
    if let Ok(ours) = untwisted(&b) {
        c.check(
            "row space of the printed generator = evaluation code",
            ours.row_space_equal(&printed),
            format!("rank {}", printed.k()),
        );
    }
    let mut rows: Vec<Vec<Elem>> = r
        .matrix
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.push(Elem::ZERO);
            v
        })
        .collect();
    rows.push(witness);
    let Some(mut g_prime) = spanned(c, "printed G'", &f, 28, rows) else {
        return;
    };
    if let Some(a) = &r.twist {
        match g_prime.twist(a) {
            Ok(t) => g_prime = t,
            Err(e) => return c.error("printed twist", e),
        }
    }
    self_dual(c, "printed a·G'", &g_prime, 28, 14);
    c.check(
        "code with printed witness = printed a·G'",
        b.code.row_space_equal(&g_prime),
        format!("witness rows used: {}", b.report.witness_rows),
    );
    exact_distance(
        c,
        "code with printed witness",
        &b.code,
        DistanceMode::Bz,
        None,
        12,
        opts,
    );
}

/// One row of the Hermitian table over GF(9).
struct TableRow {
    label: &'static str,
    plan: Plan,
    len: usize,
    d: usize,
    lb: i64,
    /// Extended length, distance and bound for odd `|D|`.
    ext: Option<(usize, usize, i64)>,
}

fn hermitian_q3(case: u32, n: Option<u32>, r: Option<u32>, t: Option<u32>) -> Plan {
    Plan::Hermitian {
        q0: 3,
        case,
        n,
        r,
        t,
        k: None,
        ell: None,
        include_zero: false,
    }
}

fn hermitian_table() -> Vec<TableRow> {
    vec![
        TableRow {
            label: "1) n=3",
            plan: hermitian_q3(1, Some(3), None, None),
            len: 9,
            d: 3,
            lb: 3,
            ext: Some((10, 3, 2)),
        },
        TableRow {
            label: "1) n=9",
            plan: hermitian_q3(1, Some(9), None, None),
            len: 27,
            d: 12,
            lb: 12,
            ext: Some((28, 12, 11)),
        },
        TableRow {
            label: "2) r=1",
            plan: hermitian_q3(2, None, Some(1), None),
            len: 9,
            d: 3,
            lb: 3,
            ext: Some((10, 3, 2)),
        },
        TableRow {
            label: "3) n=3",
            plan: hermitian_q3(3, Some(3), None, None),
            len: 15,
            d: 6,
            lb: 6,
            ext: Some((16, 6, 5)),
        },
        TableRow {
            label: "4) n=2",
            plan: hermitian_q3(4, Some(2), None, None),
            len: 6,
            d: 3,
            lb: 1,
            ext: None,
        },
        TableRow {
            label: "4) n=4",
            plan: hermitian_q3(4, Some(4), None, None),
            len: 12,
            d: 4,
            lb: 4,
            ext: None,
        },
        TableRow {
            label: "5) r=1, t=1",
            plan: hermitian_q3(9, None, Some(1), Some(1)),
            len: 12,
            d: 4,
            lb: 4,
            ext: None,
        },
        TableRow {
            label: "6) t=1",
            plan: hermitian_q3(7, None, None, Some(1)),
            len: 15,
            d: 6,
            lb: 6,
            ext: Some((16, 6, 5)),
        },
        TableRow {
            label: "11) t=2",
            plan: hermitian_q3(11, None, None, Some(2)),
            len: 18,
            d: 7,
            lb: 7,
            ext: None,
        },
    ]
}

fn ex_hermitian_table_q3(opts: &ReproOptions, c: &mut Checks) {
    for row in hermitian_table() {
        let Some(b) = build(c, &row.plan) else { continue };
        let label = format!("row {}", row.label);
        let places = b.eval.n();
        c.equal(format!("{label} length"), places, row.len);
        let base_lb = places as i64 - b.eval.s() as i64;
        let base_d = certify_distance(&b.base, None, DistanceMode::Auto, Some(opts.budget));
        let base_d = base_d.ok().and_then(|cert| cert.exact());
        match row.ext {
            Some((len, d, lb)) => {
                c.equal(
                    format!("{label} distance of the self-orthogonal code"),
                    base_d,
                    Some(row.d),
                );
                c.equal(format!("{label} lower bound |D| - s"), base_lb, row.lb);
                c.equal(format!("{label} extended length"), b.code.n(), len);
                c.check(format!("{label} extended code self-dual"), b.code.is_self_dual(), "");
                let ext_d = certify_distance(&b.code, None, DistanceMode::Auto, Some(opts.budget));
                c.equal(
                    format!("{label} extended distance"),
                    ext_d.ok().and_then(|x| x.exact()),
                    Some(d),
                );
                let g = b.eval.genus() as i64;
                c.equal(format!("{label} extended lower bound"), (places as i64 + 1) / 2 - g, lb);
            }
            None => {
                c.check(format!("{label} self-dual"), b.code.is_self_dual(), "");
                c.equal(format!("{label} distance"), base_d, Some(row.d));
                c.equal(format!("{label} lower bound |D| - s"), base_lb, row.lb);
            }
        }
    }
}

fn half_hermitian(q0: u32, punctured: bool) -> Plan {
    Plan::HalfHermitian { q0, punctured }
}

fn ex_half_hermitian_9_16(opts: &ReproOptions, c: &mut Checks) {
    let Some((f, r)) = reference(c, 9, GF9_HALF_HERMITIAN_15) else {
        return;
    };
    let plan = half_hermitian(3, false);
    let Some(own) = build(c, &plan) else { return };
    c.equal("base [n, k]", (own.base.n(), own.base.k()), (15, 7));
    exact_distance(c, "base", &own.base, DistanceMode::Exact, None, 8, opts);
    self_dual(c, "code (own embedding)", &own.code, 16, 8);
    exact_distance(c, "code (own embedding)", &own.code, DistanceMode::Exact, None, 8, opts);

    let (Some(a), Some(witness)) = (r.twist.clone(), r.witness.clone()) else {
        return c.error("printed twist and witness", "missing");
    };
    let ov = Overrides {
        places: Some(r.points.clone()),
        twist: Some(a.clone()),
        witness: vec![witness.clone()],
        ..Default::default()
    };
    let Some(b) = build_with(c, &plan, &ov) else { return };
    let Some(printed) = spanned(c, "printed generator", &f, 15, r.matrix.clone()) else {
        return;
    };
    if let Ok(ours) = untwisted(&b) {
        c.check(
            "row space of the printed generator = evaluation code",
            ours.row_space_equal(&printed),
            format!("rank {}", printed.k()),
        );
    }
    let Ok(twisted) = printed.twist(&a) else {
        return c.error("printed twist", "length mismatch");
    };
    let mut rows: Vec<Vec<Elem>> = twisted
        .generator()
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.push(Elem::ZERO);
            v
        })
        .collect();
    rows.push(witness);
    let Some(g_prime) = spanned(c, "printed G'", &f, 16, rows) else {
        return;
    };
    self_dual(c, "printed G'", &g_prime, 16, 8);
    c.check(
        "code with printed twist and witness = printed G'",
        b.code.row_space_equal(&g_prime),
        "",
    );
    exact_distance(c, "printed G'", &g_prime, DistanceMode::Exact, None, 8, opts);
}

fn ex_half_hermitian_9_12(opts: &ReproOptions, c: &mut Checks) {
    let Some(b) = build(c, &half_hermitian(3, true)) else {
        return;
    };
    self_dual(c, "code", &b.code, 12, 6);
    exact_distance(c, "code", &b.code, DistanceMode::Exact, None, 6, opts);
}

fn half_hermitian_bound(
    q0: u32,
    punctured: bool,
    n: usize,
    d: usize,
    search: bool,
    opts: &ReproOptions,
    c: &mut Checks,
) {
    let Some(b) = build(c, &half_hermitian(q0, punctured)) else {
        return;
    };
    self_dual(c, "code", &b.code, n, n / 2);
    if search {
        lower_bound(c, "code", &b.code, b.report.promised.d_bound, d, opts);
    } else {
        c.equal("designed bound", b.report.promised.d_bound, d);
    }
}

fn ex_half_hermitian_25_66(o: &ReproOptions, c: &mut Checks) {
    half_hermitian_bound(5, false, 66, 29, true, o, c);
}
fn ex_half_hermitian_25_60(o: &ReproOptions, c: &mut Checks) {
    half_hermitian_bound(5, true, 60, 27, true, o, c);
}
fn ex_half_hermitian_49_176(o: &ReproOptions, c: &mut Checks) {
    half_hermitian_bound(7, false, 176, 79, false, o, c);
}
fn ex_half_hermitian_49_168(o: &ReproOptions, c: &mut Checks) {
    half_hermitian_bound(7, true, 168, 76, false, o, c);
}
fn excluded(_: &ReproOptions, _: &mut Checks) {}

// ---------------------------------------------------------------------------
// Grid.

/// Cells marked as new in the published grid of MDS self-dual codes.
pub const NEW_GRID_CELLS: [(u64, u64); 6] = [(24, 81), (26, 37), (26, 61), (32, 41), (42, 61), (50, 73)];

fn ex_mds_grid_new(_: &ReproOptions, c: &mut Checks) {
    for (n, q) in NEW_GRID_CELLS {
        let cell = constructions::grid_cell(n, q);
        let plan = cell.plan.as_ref().map(|p| p.to_string()).unwrap_or_default();
        c.check(
            format!("cell (n={n}, q={q}) = *"),
            cell.mark == "*",
            format!("mark {:?} {plan}", cell.mark),
        );
    }
    for (n, q) in [(2u64, 19u64), (6, 11), (26, 43)] {
        c.equal(
            format!("cell (n={n}, q={q})"),
            constructions::grid_cell(n, q).mark,
            "-".to_string(),
        );
    }
}

pub fn registry() -> Vec<ReproEntry> {
    use EntryKind::*;
    let e = |id, title, kind, run| ReproEntry { id, title, kind, run };
    vec![
        e(
            "ex-thm6-37",
            "[26,13,14] MDS self-dual over GF(37)",
            Standard,
            ex_thm6_37,
        ),
        e(
            "ex-thm6-61-26",
            "[26,13,14] MDS self-dual over GF(61)",
            Standard,
            ex_thm6_61_26,
        ),
        e(
            "ex-thm6-61-42",
            "[42,21,22] MDS self-dual over GF(61)",
            Standard,
            ex_thm6_61_42,
        ),
        e(
            "ex-thm6-73",
            "[50,25,26] MDS self-dual over GF(73)",
            Standard,
            ex_thm6_73,
        ),
        e(
            "ex-gf41-matrix-32",
            "printed [I16 | A] over GF(41): self-dual MDS [32,16,17]",
            Standard,
            ex_gf41_matrix_32,
        ),
        e(
            "ex-multicoset-41",
            "[32,16,17] from two cosets of U_10 and zero over GF(41)",
            Standard,
            ex_multicoset_41,
        ),
        e(
            "ex-multicoset-81",
            "[24,12,13] from three cosets of U_8 over GF(81)",
            Standard,
            ex_multicoset_81,
        ),
        e(
            "ex-elliptic-16-18",
            "[18,9,9] from y^2+y=x^3+x over GF(16)",
            Standard,
            ex_elliptic_16_18,
        ),
        e(
            "ex-elliptic-16-16",
            "[16,8,8] from y^2+y=x^3+x over GF(16)",
            Standard,
            ex_elliptic_16_16,
        ),
        e(
            "ex-elliptic-16-20",
            "[20,10,10] from y^2+y=x^3+x over GF(16)",
            Standard,
            ex_elliptic_16_20,
        ),
        e(
            "ex-elliptic-16-22",
            "[22,11,11] from y^2+y=x^3+x over GF(16)",
            Standard,
            ex_elliptic_16_22,
        ),
        e(
            "ex-elliptic-16-24",
            "[24,12,12] from y^2+y=x^3+x over GF(16)",
            Standard,
            ex_elliptic_16_24,
        ),
        e(
            "ex-prop-2q0-16",
            "[8,4,4] from y^2+y=x^3+x over GF(16) with U = GF(4)",
            Standard,
            ex_prop_2q0_16,
        ),
        e(
            "ex-hyperelliptic-16-26",
            "[26,13,12] from y^2+y=x^5 over GF(16)",
            Standard,
            ex_hyperelliptic_16_26,
        ),
        e(
            "ex-hyperelliptic-16-28",
            "[28,14,13] from y^2+y=x^5 over GF(16)",
            Standard,
            ex_hyperelliptic_16_28,
        ),
        e(
            "ex-hyperelliptic-16-30",
            "[30,15,14] from y^2+y=x^5 over GF(16)",
            Standard,
            ex_hyperelliptic_16_30,
        ),
        e(
            "ex-hyperelliptic-16-32",
            "[32,16,15] from y^2+y=x^5 over GF(16)",
            Standard,
            ex_hyperelliptic_16_32,
        ),
        e(
            "ex-kummer-25-12",
            "[12,6,5] from y^2=x^5 over GF(25)",
            Slow,
            ex_kummer_25_12,
        ),
        e(
            "ex-hermitian-9-28",
            "[28,14,12] from the Hermitian curve over GF(9)",
            Standard,
            ex_hermitian_9_28,
        ),
        e(
            "ex-hermitian-table-q3",
            "Hermitian curve over GF(9): table of cases",
            Standard,
            ex_hermitian_table_q3,
        ),
        e(
            "ex-half-hermitian-9-16",
            "[16,8,8] from y^3+y=x^2 over GF(9)",
            Standard,
            ex_half_hermitian_9_16,
        ),
        e(
            "ex-half-hermitian-punctured-9-12",
            "[12,6,6] from y^3+y=x^2 over GF(9) without x=0",
            Standard,
            ex_half_hermitian_9_12,
        ),
        e(
            "ex-half-hermitian-25-66",
            "[66,33,>=29] from y^5+y=x^3 over GF(25)",
            BoundOnly,
            ex_half_hermitian_25_66,
        ),
        e(
            "ex-half-hermitian-punctured-25-60",
            "[60,30,>=27] from y^5+y=x^3 over GF(25) without x=0",
            BoundOnly,
            ex_half_hermitian_25_60,
        ),
        e(
            "ex-half-hermitian-49-176",
            "[176,88,>=79] from y^7+y=x^4 over GF(49)",
            BoundOnly,
            ex_half_hermitian_49_176,
        ),
        e(
            "ex-half-hermitian-punctured-49-168",
            "[168,84,>=76] from y^7+y=x^4 over GF(49) without x=0",
            BoundOnly,
            ex_half_hermitian_49_168,
        ),
        e(
            "ex-half-hermitian-81-370",
            "[370,185,>=169] over GF(81)",
            Excluded,
            excluded,
        ),
        e(
            "ex-half-hermitian-121-672",
            "[672,336,>=311] over GF(121)",
            Excluded,
            excluded,
        ),
        e(
            "ex-half-hermitian-169-1106",
            "[1106,553,>=517] over GF(169)",
            Excluded,
            excluded,
        ),
        e(
            "ex-half-hermitian-289-2466",
            "[2466,1233,>=1169] over GF(289)",
            Excluded,
            excluded,
        ),
        e(
            "ex-half-hermitian-361-3440",
            "[3440,1720,>=1639] over GF(361)",
            Excluded,
            excluded,
        ),
        e(
            "ex-half-hermitian-625-7826",
            "[7826,3913,>=3769] over GF(625)",
            Excluded,
            excluded,
        ),
        e(
            "ex-mds-grid-new",
            "grid of MDS self-dual codes: new cells",
            Standard,
            ex_mds_grid_new,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_files_parse() {
        for (q, text, n) in [
            (16, GF16_ELLIPTIC_18, 18),
            (16, GF16_HYPERELLIPTIC_26, 26),
            (25, GF25_KUMMER_12, 12),
            (9, GF9_HERMITIAN_27, 27),
            (9, GF9_HALF_HERMITIAN_15, 15),
        ] {
            let f = field(q);
            let r = parse_reference(&f, text).unwrap();
            assert_eq!(r.points.len(), n);
            assert!(r.matrix.iter().all(|row| row.len() == n));
        }
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = registry().iter().map(|e| e.id).collect();
        let total = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), total);
    }

    #[test]
    fn quick_entry_passes() {
        let r = run_entry(&find("ex-thm6-37").unwrap(), &ReproOptions::default());
        assert_eq!(r.pass, Some(true), "{:#?}", r.checks);
    }
}
