//! The randomized check matrix behind `mspectra suite`, and the versioned
//! report envelope shared by every machine-format command.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::adjunction::{hom_bijection, j, q, triangle_identities, unit, Unit};
use crate::algebra::{all_words, basis, confluence_check, RewriteSystem};
use crate::bidegree::{Bidegree, Window};
use crate::error::Result;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::model::{
    acyclic_fibration_crosscheck, fibration_crosscheck, is_first_side_equivalence_in, is_weak_equivalence,
    is_weak_equivalence_in, Scope,
};
use crate::morphism::Morphism;
use crate::multicomplex::Multicomplex;
use crate::parallel::par_map;
use crate::random::{Sampler, SamplerConfig};
use crate::representables::{q_projection, zw};
use crate::spectral::{classical_pages, page, page_on, page_two_via_page_one, Side};

pub const SCHEMA: &str = "mspectra-report/1";

/// Wraps a command's payload in the versioned envelope.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    out.insert("command".into(), Value::String(command.into()));
    if let Value::Object(fields) = body {
        out.extend(fields);
    } else {
        out.insert("result".into(), body);
    }
    Value::Object(out)
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random instances per cell of the test matrix.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, samples: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: 0, first: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn done(self) -> CheckResult {
        CheckResult { name: self.name.into(), cases: self.cases, failures: self.failures, first_failure: self.first }
    }
}

fn seed_for(cfg: &SuiteConfig, tag: u64) -> u64 {
    cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(tag)
}

fn b(p: i64, q: i64) -> Bidegree {
    Bidegree::new(p, q)
}

/// Basis sizes against counts of irreducible words.
pub fn check_basis() -> CheckResult {
    let mut t = Tally::new("algebra-basis");
    for n in 2..=4 {
        let sys = RewriteSystem::get(n);
        for len in 0..=6usize {
            let words = all_words(n, len);
            for at in Window::new(-6, 6, -6, 6).iter() {
                if at.q - at.p != len as i64 {
                    continue;
                }
                let brute = words.iter().filter(|w| w.bidegree() == at && sys.is_normal(w)).count();
                let got = basis(n, at).len();
                t.check(got == brute, || format!("N={n} at {at}: {got} vs {brute}"));
            }
        }
    }
    t.done()
}

pub fn check_confluence() -> CheckResult {
    let mut t = Tally::new("confluence");
    for n in 2..=6 {
        let bad = confluence_check(n, 3);
        t.check(bad.is_empty(), || format!("N={n}: {} unresolved overlaps", bad.len()));
    }
    t.done()
}

pub fn check_zw_pages() -> Result<CheckResult> {
    let mut t = Tally::new("zw-pages");
    let q = Field::Rational;
    for n in 2..=4 {
        for k in 1..=4usize {
            for base in [b(0, 0), b(2, -1)] {
                let m = zw(n, q, k, base);
                let k_ = k as i64;
                let expected: std::collections::BTreeMap<_, _> =
                    [(base, 1), (b(base.p - k_, base.q - k_ + 1), 1)].into_iter().collect();
                for radius in [k + 1, k + 2] {
                    let w = Window::point(base).inflate(radius);
                    for i in 1..=k {
                        let dims = page_on(&m, Side::First, i, w)?.dims();
                        t.check(dims == expected, || format!("N={n} k={k} base {base} 'E_{i}: {dims:?}"));
                    }
                    let last = page_on(&m, Side::First, k + 1, w)?;
                    t.check(last.is_zero(), || format!("N={n} k={k} base {base} 'E_{} nonzero", k + 1));
                    let second = page_on(&m, Side::Second, 1, w)?;
                    t.check(second.is_zero(), || format!("N={n} k={k} base {base} ''E_1 nonzero"));
                }
            }
        }
    }
    Ok(t.done())
}

pub fn check_oracle(cfg: &SuiteConfig) -> Result<CheckResult> {
    let mut t = Tally::new("witness-vs-classical");
    for n in 2..=4 {
        for (fi, field) in [Field::Rational, Field::Prime(5)].into_iter().enumerate() {
            let mut s = Sampler::new(seed_for(cfg, (n * 10 + fi) as u64), SamplerConfig::new(n, field));
            let samples: Vec<Multicomplex> = (0..cfg.samples).map(|_| s.multicomplex()).collect();
            let outcomes = par_map(samples, |a| -> Result<Vec<(bool, String)>> {
                let mut out = Vec::new();
                for r in 0..=4 {
                    let w = page(&a, Side::First, r)?.dims();
                    let c = classical_pages(&a, r)?.dims();
                    out.push((w == c, format!("N={n} {field} r={r}: witness {w:?} classical {c:?}")));
                }
                let pts = a.hull().map(|h| h.inflate(3).bidegrees()).unwrap_or_default();
                let via = page_two_via_page_one(&a, &pts)?;
                let direct = page(&a, Side::First, 2)?;
                let ok = via.iter().all(|(at, d)| direct.dim(*at) == *d);
                out.push((ok, format!("N={n} {field}: page two via page one")));
                Ok(out)
            });
            for o in outcomes {
                for (ok, msg) in o? {
                    t.check(ok, || msg);
                }
            }
        }
    }
    Ok(t.done())
}

pub fn check_rlp(cfg: &SuiteConfig) -> Result<CheckResult> {
    let mut t = Tally::new("rlp-crosscheck");
    for n in [2, 4] {
        for r in 0..=2 {
            for s_ in 0..=2 {
                let sc = SamplerConfig::new(n, Field::Rational)
                    .region(Window::new(0, 2, 0, 2))
                    .max_rank(2)
                    .max_generators(2);
                let mut s = Sampler::new(seed_for(cfg, (100 + n * 9 + r * 3 + s_) as u64), sc);
                for _ in 0..cfg.samples {
                    let f = s.morphism();
                    let i = acyclic_fibration_crosscheck(&f, r, s_)?;
                    t.check(i.agree, || {
                        format!("N={n} r={r} s={s_}: I-lifting {} vs pages {}", i.by_lifting, i.by_pages)
                    });
                    let jx = fibration_crosscheck(&f, r, s_)?;
                    t.check(jx.agree, || {
                        format!("N={n} r={r} s={s_}: J-lifting {} vs pages {}", jx.by_lifting, jx.by_pages)
                    });
                }
            }
        }
    }
    Ok(t.done())
}

fn we(f: &Morphism, r: usize, s: usize) -> Result<bool> {
    Ok(is_weak_equivalence(f, r, s)?.holds)
}

pub fn check_class_axioms(cfg: &SuiteConfig) -> Result<CheckResult> {
    let mut t = Tally::new("class-axioms");
    for n in [2, 3, 4] {
        let sc = SamplerConfig::new(n, Field::Rational).region(Window::new(0, 3, 0, 3));
        let mut s = Sampler::new(seed_for(cfg, 200 + n as u64), sc);
        for _ in 0..cfg.samples {
            let (f, g) = s.composable_pair();
            let gf = f.then(&g)?;
            let iso = s.rebase(f.source_complex());
            let h = s.morphism();
            let sum = f.direct_sum(&h)?;
            for r in 0..=2 {
                for s_ in 0..=2 {
                    let (a, bb, c) = (we(&f, r, s_)?, we(&g, r, s_)?, we(&gf, r, s_)?);
                    let two_of_three = !((a && bb && !c) || (a && c && !bb) || (bb && c && !a));
                    t.check(two_of_three, || format!("N={n} ({r},{s_}): 2-of-3 with {a} {bb} {c}"));
                    t.check(we(&iso, r, s_)?, || format!("N={n} ({r},{s_}): isomorphism rejected"));
                    if we(&sum, r, s_)? {
                        t.check(a, || format!("N={n} ({r},{s_}): retract of an equivalence is not one"));
                    }
                    if a {
                        t.check(we(&f, r + 1, s_)? && we(&f, r, s_ + 1)?, || format!("N={n} ({r},{s_}): not monotone"));
                    }
                    t.check(a == we(&f.involve(), s_, r)?, || format!("N={n} ({r},{s_}): involution"));
                }
            }
        }
    }
    Ok(t.done())
}

fn k_example() -> Multicomplex {
    let q = Field::Rational;
    Multicomplex::from_parts(4, q, [(b(0, 0), 1), (b(0, 1), 1)], [(0, b(0, 0), Matrix::from_ints(q, &[&[1]]))])
        .expect("K is well formed")
}

pub fn check_non_equivalence() -> Result<CheckResult> {
    let mut t = Tally::new("non-equivalence");
    for n in [2, 4] {
        let pi = q_projection(n, Field::Rational, None);
        for radius in [3, 4] {
            let scope = Scope::Window(Window::point(Bidegree::ZERO).inflate(radius));
            for r in 0..=2 {
                let ok = is_first_side_equivalence_in(&pi, r, scope)?.holds;
                t.check(ok, || format!("N={n} radius {radius}: pi not an 'E_{r} equivalence"));
                for s in 0..=3 {
                    let v = is_weak_equivalence_in(&pi, r, s, scope)?.holds;
                    t.check(!v, || format!("N={n} radius {radius}: pi in E_({r},{s})"));
                }
            }
        }
    }
    let k = k_example();
    let f = Morphism::zero(&Multicomplex::zero(4, Field::Rational), &k)?;
    for r in 0..=3 {
        t.check(we(&f, r, 3)?, || format!("0 -> K not in E_({r},3)"));
        t.check(!we(&f, r, 2)?, || format!("0 -> K in E_({r},2)"));
    }
    Ok(t.done())
}

pub fn check_adjunction(cfg: &SuiteConfig) -> Result<CheckResult> {
    let mut t = Tally::new("adjunction");
    let q_ = Field::Rational;
    let mut s2 = Sampler::new(seed_for(cfg, 300), SamplerConfig::new(2, q_));
    let mut s4 = Sampler::new(seed_for(cfg, 301), SamplerConfig::new(4, q_).region(Window::new(0, 2, 0, 2)));
    for _ in 0..cfg.samples {
        let m = s2.multicomplex();
        let l = s4.multicomplex();
        t.check(q(&j(&m)?)? == m, || "q j M != M".into());
        t.check(triangle_identities(&l, &m)?, || "triangle identity".into());
        t.check(j(&m.involve())? == j(&m)?.involve(), || "j does not commute with inv".into());
        t.check(q(&l.involve())? == q(&l)?.involve(), || "q does not commute with inv".into());
        t.check(hom_bijection(&l, &m)?.holds(), || "Hom bijection".into());
    }
    t.check(!we(&unit(&k_example())?, 1, 1)?, || "unit(K) in E_(1,1)".into());
    for s in 1..=3 {
        let eta = Unit::new(zw(4, q_, s, Bidegree::ZERO))?;
        for radius in [3, 4] {
            let scope = Scope::Window(Window::point(Bidegree::ZERO).inflate(radius));
            let ok = is_weak_equivalence_in(&eta, 1, 1, scope)?.holds;
            t.check(ok, || format!("unit(ZW_{s}) not in E_(1,1) at radius {radius}"));
        }
    }
    Ok(t.done())
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let checks = vec![
        check_basis(),
        check_confluence(),
        check_zw_pages()?,
        check_oracle(cfg)?,
        check_rlp(cfg)?,
        check_class_axioms(cfg)?,
        check_non_equivalence()?,
        check_adjunction(cfg)?,
    ];
    let passed = checks.iter().all(CheckResult::passed);
    Ok(SuiteReport { seed: cfg.seed, samples: cfg.samples, checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let cfg = SuiteConfig { seed: 3, samples: 2 };
        let a = run_suite(&cfg).unwrap();
        assert!(a.passed, "{:?}", a.checks);
        let b = run_suite(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn envelope_leads_with_schema() {
        let v = envelope("pages", serde_json::json!({ "rows": [] }));
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["schema", "command", "rows"]);
    }
}
