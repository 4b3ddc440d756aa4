//! Semiopenness and Frobenius reciprocity checks for maps of involutive
//! quantales, with counterexample extraction.
//!
//! For a semiopen map `p: Q -> X` (one whose inverse image `p*` has a left
//! adjoint `p_!`):
//!
//! * FR1: `p_!(a p*(x)) = p_!(a) x`
//! * right FR1: `p_!(p*(x) a) = x p_!(a)`
//! * FR2: `p_!(a p*(x) b) = p_!(a) x p_!(b)`
//!
//! Finite carriers are checked exhaustively (up to
//! [`CheckConfig::exhaustive_cap`] evaluations); oracle carriers range over
//! their probe elements plus seeded samples. Witnesses are the first failure
//! in enumeration order, so parallel runs return the same witness as serial
//! ones, and every witness is re-evaluated before it is reported.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quantale::{
    domain, is_surjective, seeded_rng, CheckConfig, Coverage, EffectiveQuantale, QuantaleMap,
    Surjectivity,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OpennessError {
    #[error("map carries no direct image and its source is not finite")]
    MissingDirectImage,
    #[error("target quantale has no unit")]
    NotUnital,
    #[error("source or target is not a locale (multiplication = meet, trivial involution)")]
    NotALocale,
}

/// The adjunction `p_!(a) <= x  <=>  a <= p*(x)` fails at `(a, x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
#[error("not semiopen: adjunction fails at a = {a:?}, x = {x:?}")]
pub struct AdjunctionWitness<A: std::fmt::Debug, X: std::fmt::Debug> {
    pub a: A,
    pub x: X,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemiopenError<A: std::fmt::Debug, X: std::fmt::Debug> {
    #[error(transparent)]
    NoLeftAdjoint(AdjunctionWitness<A, X>),
    #[error("direct image does not preserve the involution at {0:?}")]
    InvolutionNotPreserved(A),
    #[error("map carries no direct image and its source is not finite")]
    MissingDirectImage,
}

/// Returns `p` with its direct image installed.
///
/// With both carriers finite the direct image is the candidate meet
/// `p_!(a) = ⋀{x : a <= p*(x)}`, kept only if the adjunction holds on every
/// pair. A supplied direct image is verified instead (exhaustively or on
/// samples).
pub fn check_semiopen<Q, X>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<(QuantaleMap<Q, X>, Coverage), SemiopenError<Q::Elem, X::Elem>>
where
    Q: EffectiveQuantale + 'static,
    X: EffectiveQuantale + 'static,
{
    let (q, x) = (p.source(), p.target());
    let map = if p.has_direct_image() {
        p.clone()
    } else {
        match (q.elements(), x.elements()) {
            (Some(qs), Some(xs)) => {
                let images: Vec<Q::Elem> = xs.iter().map(|e| p.inverse_image(e)).collect();
                let table: HashMap<Q::Elem, X::Elem> = qs
                    .iter()
                    .map(|a| {
                        let above: Vec<&X::Elem> = xs
                            .iter()
                            .zip(&images)
                            .filter(|(_, img)| q.leq(a, img))
                            .map(|(e, _)| e)
                            .collect();
                        // meet = join of common lower bounds
                        let lower: Vec<X::Elem> = xs
                            .iter()
                            .filter(|y| above.iter().all(|s| x.leq(y, s)))
                            .cloned()
                            .collect();
                        (a.clone(), x.join(&lower))
                    })
                    .collect();
                p.clone().with_direct_image(move |a: &Q::Elem| table[a].clone())
            }
            _ => return Err(SemiopenError::MissingDirectImage),
        }
    };

    let mut rng = seeded_rng(cfg.seed);
    let qd = domain(&**q, cfg.exhaustive_cap as usize, &mut rng, cfg.samples);
    let xd = domain(&**x, cfg.exhaustive_cap as usize, &mut rng, cfg.samples);
    let direct: Vec<X::Elem> = qd.elems.iter().map(|a| map.direct_image(a).unwrap()).collect();
    let images: Vec<Q::Elem> = xd.elems.iter().map(|e| map.inverse_image(e)).collect();
    for (i, a) in qd.elems.iter().enumerate() {
        for (j, e) in xd.elems.iter().enumerate() {
            if x.leq(&direct[i], e) != q.leq(a, &images[j]) {
                return Err(SemiopenError::NoLeftAdjoint(AdjunctionWitness {
                    a: a.clone(),
                    x: e.clone(),
                }));
            }
        }
    }
    for (i, a) in qd.elems.iter().enumerate() {
        if map.direct_image(&q.star(a)).unwrap() != x.star(&direct[i]) {
            return Err(SemiopenError::InvolutionNotPreserved(a.clone()));
        }
    }
    let evaluations = (qd.elems.len() * xd.elems.len()) as u64;
    let coverage = if qd.exhaustive && xd.exhaustive {
        Coverage::Exhaustive { evaluations }
    } else {
        Coverage::Sampled {
            seed: cfg.seed,
            samples: cfg.samples,
            probes: qd.probes + xd.probes,
            evaluations,
        }
    };
    Ok((map, coverage))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fr1Witness<A, X> {
    pub a: A,
    pub x: X,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fr2Witness<A, X> {
    pub a: A,
    pub x: X,
    pub b: A,
}

/// Outcome of one condition check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check<W> {
    pub witness: Option<W>,
    pub coverage: Coverage,
}

impl<W> Check<W> {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn direct<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
) -> Result<&crate::quantale::DirectImage<Q, X>, OpennessError> {
    p.direct_fn().ok_or(OpennessError::MissingDirectImage)
}

/// `p_!(a p*(x)) = p_!(a) x`.
pub fn fr1_holds<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    a: &Q::Elem,
    x: &X::Elem,
) -> Result<bool, OpennessError> {
    let d = direct(p)?;
    let (q, t) = (p.source(), p.target());
    Ok(d(&q.mul(a, &p.inverse_image(x))) == t.mul(&d(a), x))
}

/// `p_!(p*(x) a) = x p_!(a)`.
pub fn fr1_right_holds<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    a: &Q::Elem,
    x: &X::Elem,
) -> Result<bool, OpennessError> {
    let d = direct(p)?;
    let (q, t) = (p.source(), p.target());
    Ok(d(&q.mul(&p.inverse_image(x), a)) == t.mul(x, &d(a)))
}

/// `p_!(a p*(x) b) = p_!(a) x p_!(b)`.
pub fn fr2_holds<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    a: &Q::Elem,
    x: &X::Elem,
    b: &Q::Elem,
) -> Result<bool, OpennessError> {
    let d = direct(p)?;
    let (q, t) = (p.source(), p.target());
    let left = d(&q.mul(&q.mul(a, &p.inverse_image(x)), b));
    let right = t.mul(&t.mul(&d(a), x), &d(b));
    Ok(left == right)
}

struct Plan<A, X> {
    qs: Vec<A>,
    xs: Vec<X>,
    exhaustive: bool,
    probes: usize,
}

fn plan<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
    arity: u32,
) -> Plan<Q::Elem, X::Elem> {
    let (q, x) = (p.source(), p.target());
    let mut rng = seeded_rng(cfg.seed);
    let xs_all = x.elements();
    let qs_all = q.elements();
    if let (Some(qs), Some(xs)) = (&qs_all, &xs_all) {
        let cost = (qs.len() as u64).pow(arity) * xs.len() as u64;
        if cost <= cfg.exhaustive_cap {
            return Plan {
                qs: qs.clone(),
                xs: xs.clone(),
                exhaustive: true,
                probes: 0,
            };
        }
    }
    let xd = domain(&**x, usize::MAX, &mut rng, cfg.samples);
    let mut qs = q.probes();
    let probes = qs.len();
    qs.extend((0..cfg.samples).map(|_| q.sample(&mut rng)));
    Plan {
        qs,
        xs: xd.elems,
        exhaustive: false,
        probes: probes + xd.probes,
    }
}

fn coverage(cfg: &CheckConfig, exhaustive: bool, probes: usize, evaluations: u64) -> Coverage {
    if exhaustive {
        Coverage::Exhaustive { evaluations }
    } else {
        Coverage::Sampled {
            seed: cfg.seed,
            samples: cfg.samples,
            probes,
            evaluations,
        }
    }
}

fn one_sided<Q, X>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
    holds: fn(&QuantaleMap<Q, X>, &Q::Elem, &X::Elem) -> Result<bool, OpennessError>,
) -> Result<Check<Fr1Witness<Q::Elem, X::Elem>>, OpennessError>
where
    Q: EffectiveQuantale,
    X: EffectiveQuantale,
{
    direct(p)?;
    let plan = plan(p, cfg, 1);
    let witness = plan.qs.par_iter().find_map_first(|a| {
        plan.xs
            .iter()
            .find(|x| !holds(p, a, x).unwrap())
            .map(|x| Fr1Witness {
                a: a.clone(),
                x: x.clone(),
            })
    });
    if let Some(w) = &witness {
        assert!(!holds(p, &w.a, &w.x)?, "witness does not replay");
    }
    let evaluations = (plan.qs.len() * plan.xs.len()) as u64;
    Ok(Check {
        witness,
        coverage: coverage(cfg, plan.exhaustive, plan.probes, evaluations),
    })
}

pub fn check_fr1<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<Check<Fr1Witness<Q::Elem, X::Elem>>, OpennessError> {
    one_sided(p, cfg, fr1_holds::<Q, X>)
}

pub fn check_fr1_right<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<Check<Fr1Witness<Q::Elem, X::Elem>>, OpennessError> {
    one_sided(p, cfg, fr1_right_holds::<Q, X>)
}

/// Pairs `(a, b)` for the two-sided check: all pairs when exhaustive,
/// otherwise every probe pair followed by seeded random pairs.
fn fr2_pairs<A: Clone>(plan: &Plan<A, impl Sized>, cfg: &CheckConfig) -> Vec<(usize, usize)> {
    let n = plan.qs.len();
    if plan.exhaustive {
        return (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    }
    let probes = n - cfg.samples;
    let mut pairs: Vec<(usize, usize)> = (0..probes)
        .flat_map(|i| (0..probes).map(move |j| (i, j)))
        .collect();
    // samples were drawn independently, so consecutive draws form random pairs
    for k in 0..cfg.samples {
        pairs.push((probes + k, probes + (k + 1) % cfg.samples.max(1)));
    }
    pairs
}

pub fn check_fr2<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<Check<Fr2Witness<Q::Elem, X::Elem>>, OpennessError> {
    direct(p)?;
    let plan = plan(p, cfg, 2);
    let pairs = fr2_pairs(&plan, cfg);
    let witness = pairs.par_iter().find_map_first(|&(i, j)| {
        let (a, b) = (&plan.qs[i], &plan.qs[j]);
        plan.xs
            .iter()
            .find(|x| !fr2_holds(p, a, x, b).unwrap())
            .map(|x| Fr2Witness {
                a: a.clone(),
                x: x.clone(),
                b: b.clone(),
            })
    });
    if let Some(w) = &witness {
        assert!(!fr2_holds(p, &w.a, &w.x, &w.b)?, "witness does not replay");
    }
    let evaluations = (pairs.len() * plan.xs.len()) as u64;
    Ok(Check {
        witness,
        coverage: coverage(cfg, plan.exhaustive, plan.probes, evaluations),
    })
}

/// Every FR2 violation in the checked range, in enumeration order, up to
/// `limit`.
pub fn fr2_witnesses<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
    limit: usize,
) -> Result<Vec<Fr2Witness<Q::Elem, X::Elem>>, OpennessError> {
    direct(p)?;
    let plan = plan(p, cfg, 2);
    let pairs = fr2_pairs(&plan, cfg);
    let mut found: Vec<Fr2Witness<Q::Elem, X::Elem>> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let (a, b) = (&plan.qs[i], &plan.qs[j]);
            plan.xs
                .iter()
                .filter(|x| !fr2_holds(p, a, x, b).unwrap())
                .map(|x| Fr2Witness {
                    a: a.clone(),
                    x: x.clone(),
                    b: b.clone(),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    found.truncate(limit);
    Ok(found)
}

/// Checks the unit criterion for surjectivity of a weakly open map: `p` is
/// a surjection exactly when `p_!(p*(e)) = e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WosReport {
    /// FR1 holds, so the biconditional is expected.
    pub weakly_open: bool,
    pub unit_condition: bool,
    pub surjective: bool,
    pub holds: bool,
}

pub fn check_wos<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<WosReport, OpennessError> {
    let e = p.target().unit().ok_or(OpennessError::NotUnital)?;
    let d = direct(p)?;
    let weakly_open = check_fr1(p, cfg)?.passed();
    let unit_condition = d(&p.inverse_image(&e)) == e;
    let surjective = !matches!(
        is_surjective(p, cfg),
        Surjectivity::NotSurjective { .. }
    );
    Ok(WosReport {
        weakly_open,
        unit_condition,
        surjective,
        holds: !weakly_open || unit_condition == surjective,
    })
}

/// FR2 together with `p_!(p*(e)) = e` forces FR1 and surjectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fr2ImpliesFr1Report {
    pub fr2: bool,
    pub unit_condition: bool,
    pub applicable: bool,
    pub fr1: bool,
    pub surjective: bool,
    pub holds: bool,
}

pub fn check_fr2_implies_fr1<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<Fr2ImpliesFr1Report, OpennessError> {
    let e = p.target().unit().ok_or(OpennessError::NotUnital)?;
    let d = direct(p)?;
    let fr2 = check_fr2(p, cfg)?.passed();
    let unit_condition = d(&p.inverse_image(&e)) == e;
    let fr1 = check_fr1(p, cfg)?.passed();
    let surjective = !matches!(
        is_surjective(p, cfg),
        Surjectivity::NotSurjective { .. }
    );
    let applicable = fr2 && unit_condition;
    Ok(Fr2ImpliesFr1Report {
        fr2,
        unit_condition,
        applicable,
        fr1,
        surjective,
        holds: !applicable || (fr1 && surjective),
    })
}

/// For locales, FR2 forces the direct image to preserve binary meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocaleMeetReport<A> {
    pub fr2: bool,
    /// First pair `(a, b)` with `p_!(a ∧ b) != p_!(a) ∧ p_!(b)`.
    pub meet_witness: Option<(A, A)>,
    pub holds: bool,
}

pub fn check_locale_meet_lemma<Q: EffectiveQuantale, X: EffectiveQuantale>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<LocaleMeetReport<Q::Elem>, OpennessError> {
    let (q, x) = (p.source(), p.target());
    let is_locale = |f: Option<&crate::quantale::FiniteInvQuantale>| f.is_some_and(|f| f.is_locale());
    if !is_locale(q.as_finite()) || !is_locale(x.as_finite()) {
        return Err(OpennessError::NotALocale);
    }
    let d = direct(p)?;
    let fr2 = check_fr2(p, cfg)?.passed();
    let qs = q.elements().expect("locales here are finite");
    let mut meet_witness = None;
    'outer: for a in &qs {
        for b in &qs {
            // multiplication is meet in a locale
            if d(&q.mul(a, b)) != x.mul(&d(a), &d(b)) {
                meet_witness = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    let holds = !fr2 || meet_witness.is_none();
    Ok(LocaleMeetReport {
        fr2,
        meet_witness,
        holds,
    })
}

/// Everything known about one map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport<A: std::fmt::Debug, X: std::fmt::Debug> {
    pub semiopen: Result<Coverage, AdjunctionWitness<A, X>>,
    pub fr1: Option<Check<Fr1Witness<A, X>>>,
    pub fr1_right: Option<Check<Fr1Witness<A, X>>>,
    pub fr2: Option<Check<Fr2Witness<A, X>>>,
    pub surjective: Surjectivity<X>,
    /// Semiopen and FR1.
    pub weakly_open: bool,
    /// Weakly open surjection with FR2: sufficient for openness in the
    /// dual category of involutive quantales.
    pub open_by_sufficient_condition: bool,
    /// Classical verdict when both sides are locales (semiopen + FR1),
    /// recorded separately from the quantale verdict.
    pub locale_open: Option<bool>,
}

/// Runs every check on `p`. The direct image is computed when absent and
/// both carriers are finite.
pub fn frobenius_report<Q, X>(
    p: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<FrobeniusReport<Q::Elem, X::Elem>, OpennessError>
where
    Q: EffectiveQuantale + 'static,
    X: EffectiveQuantale + 'static,
{
    let locales = match (p.source().as_finite(), p.target().as_finite()) {
        (Some(a), Some(b)) => a.is_locale() && b.is_locale(),
        _ => false,
    };
    let (semiopen, map) = match check_semiopen(p, cfg) {
        Ok((map, cov)) => (Ok(cov), Some(map)),
        Err(SemiopenError::NoLeftAdjoint(w)) => (Err(w), None),
        Err(SemiopenError::InvolutionNotPreserved(_)) => {
            unreachable!("left adjoints of involutive homomorphisms preserve the involution")
        }
        Err(SemiopenError::MissingDirectImage) => return Err(OpennessError::MissingDirectImage),
    };
    let (fr1, fr1_right, fr2) = match &map {
        Some(m) => (
            Some(check_fr1(m, cfg)?),
            Some(check_fr1_right(m, cfg)?),
            Some(check_fr2(m, cfg)?),
        ),
        None => (None, None, None),
    };
    let surjective = is_surjective(map.as_ref().unwrap_or(p), cfg);
    let weakly_open = fr1.as_ref().is_some_and(|c| c.passed());
    let open_by_sufficient_condition = weakly_open
        && fr2.as_ref().is_some_and(|c| c.passed())
        && surjective.is_surjective() == Some(true);
    Ok(FrobeniusReport {
        semiopen,
        fr1,
        fr1_right,
        fr2,
        surjective,
        weakly_open,
        open_by_sufficient_condition,
        locale_open: locales.then_some(weakly_open),
    })
}
