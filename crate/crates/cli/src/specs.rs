//! Parsing of algebra and cochain arguments.
//!
//! Algebras are either builtin names or paths to an `AlgebraConfig` JSON
//! file. Cochains are builtin names or term lists such as
//! `"1:p,q,z"` and `"1/2:v0,s0,s0; -1:v1,s0,s1"`.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use brane_core::cohomology::{alpha_on, beta_on, make_gamma, make_j, Cochain};
use brane_core::division_algebra::AlgebraTag;
use brane_core::ring::q_from_str;
use brane_core::spacetime::{Flavor, Spacetime};
use brane_core::superalgebra::{
    build_abelian, build_free_two_step, build_heisenberg, build_heisenberg_with_torus, build_poincare, build_so,
    build_supertranslation, poincare_translation_indices, AlgebraConfig, LieSuperalgebra,
};

pub const ALGEBRA_HELP: &str = "heisenberg, heisenberg-torus, abelian:N[:M], so:N, free2:P, T2:K, T3:K, siso2:K, siso3:K, or a JSON config path";

/// What an algebra spec resolved to, kept so builtin cochains know their layout.
pub struct Algebra {
    pub g: Arc<LieSuperalgebra>,
    kind: Kind,
}

enum Kind {
    Heisenberg,
    So(usize),
    Spinor { k: usize, flavor: Flavor, offset: usize },
    Other,
}

fn parse_k(s: &str) -> Result<usize> {
    let k: usize = s.parse().with_context(|| format!("bad k `{s}`"))?;
    if !matches!(k, 1 | 2 | 4 | 8) {
        bail!("k must be one of 1, 2, 4, 8 (got {k})");
    }
    Ok(k)
}

pub fn parse_algebra(spec: &str) -> Result<Algebra> {
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| -> Result<usize> { s.parse().with_context(|| format!("bad number `{s}` in `{spec}`")) };
    let built = |g: LieSuperalgebra, kind| Algebra { g: Arc::new(g), kind };
    Ok(match head {
        "heisenberg" => built(build_heisenberg(), Kind::Heisenberg),
        "heisenberg-torus" => built(build_heisenberg_with_torus(), Kind::Other),
        "abelian" => {
            let (e, o) = rest.split_once(':').unwrap_or((rest, "0"));
            built(build_abelian(num(e)?, num(o)?), Kind::Other)
        }
        "so" => {
            let n = num(rest)?;
            built(build_so(n)?, Kind::So(n))
        }
        "free2" => built(build_free_two_step(num(rest)?), Kind::Other),
        "T2" | "T3" | "siso2" | "siso3" => {
            let k = parse_k(rest)?;
            let flavor = if head.ends_with('2') { Flavor::K2 } else { Flavor::K3 };
            if head.starts_with('T') {
                built(build_supertranslation(k, flavor)?, Kind::Spinor { k, flavor, offset: 0 })
            } else {
                let offset = poincare_translation_indices(k, flavor)[0];
                built(build_poincare(k, flavor)?, Kind::Spinor { k, flavor, offset })
            }
        }
        _ if Path::new(spec).exists() => {
            let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
            let cfg: AlgebraConfig = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
            let g = cfg.build()?;
            let report = g.validate();
            if !report.ok {
                bail!("{spec} does not define a Lie superalgebra: {}", report.failures.join("; "));
            }
            built(g, Kind::Other)
        }
        _ => bail!("unknown algebra `{spec}`; expected {ALGEBRA_HELP}"),
    })
}

/// Builtin cochains: `gamma` on the Heisenberg algebra, `j` on so(n),
/// `alpha` and `beta` on the matching supertranslation or Poincaré algebra.
pub fn parse_cochain(alg: &Algebra, spec: &str) -> Result<Cochain> {
    let g = alg.g.clone();
    let mismatch = || anyhow!("cochain `{spec}` is not defined on {}", g.name());
    match spec {
        "gamma" => match alg.kind {
            Kind::Heisenberg => Ok(make_gamma()),
            _ => Err(mismatch()),
        },
        "j" => match alg.kind {
            Kind::So(n) => Ok(make_j(n)?),
            _ => Err(mismatch()),
        },
        "alpha" | "beta" => match alg.kind {
            Kind::Spinor { k, flavor, offset } => {
                let st = Spacetime::new(AlgebraTag::from_dim(k)?, flavor);
                match (spec, flavor) {
                    ("alpha", Flavor::K2) => Ok(alpha_on(g.clone(), &st, offset)),
                    ("beta", Flavor::K3) => Ok(beta_on(g.clone(), &st, offset)),
                    _ => Err(mismatch()),
                }
            }
            _ => Err(mismatch()),
        },
        _ => parse_terms(g, spec),
    }
}

fn parse_terms(g: Arc<LieSuperalgebra>, spec: &str) -> Result<Cochain> {
    let mut level = None;
    let mut vals = Vec::new();
    for term in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (c, labels) = term.split_once(':').with_context(|| format!("term `{term}` is not coef:label,..."))?;
        let c = q_from_str(c.trim()).with_context(|| format!("bad rational `{c}`"))?;
        let idx: Vec<usize> = labels
            .split(',')
            .map(|l| g.index_of(l.trim()).with_context(|| format!("no label `{}` in {}", l.trim(), g.name())))
            .collect::<Result<_>>()?;
        match level {
            None => level = Some(idx.len()),
            Some(p) if p != idx.len() => bail!("terms of different levels in `{spec}`"),
            _ => {}
        }
        vals.push((idx, c));
    }
    let level = level.with_context(|| format!("empty cochain `{spec}`"))?;
    let mut w = Cochain::zero(g, level);
    for (t, c) in vals {
        w.add_at(&t, &c);
    }
    Ok(w)
}
