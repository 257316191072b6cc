//! Morphisms of the generated fusion system, stored with the composite that
//! produces them so every claim can be replayed.

use serde::{Deserialize, Serialize};

use super::{FusionError, GammaData, NamedAut};
use crate::cliffspin::{CliffordElement, SpinGroupElement};
use crate::gf::FieldElement;
use crate::spin7::{Spin7Context, SylowElement, SylowGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessStep {
    /// Conjugation by an element of H(q^n)⟨τ⟩.
    ConjInGroup { g: SylowElement },
    /// A named automorphism of S_0(q^n); source and image must lie in S_0.
    RestrictedAut { aut: NamedAut },
    /// Conjugation by an element of Spin_7(q^n), given by its Clifford coefficients.
    RealizedSpin { coeffs: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionMorphism {
    pub domain: Vec<SylowElement>,
    pub images: Vec<SylowElement>,
    pub chain: Vec<WitnessStep>,
}

impl WitnessStep {
    pub fn realized(g: &SpinGroupElement) -> WitnessStep {
        WitnessStep::RealizedSpin {
            coeffs: g.element().indices(),
        }
    }

    /// Applies the step to each element; every result must lie in S (in S_0 for
    /// named automorphisms, whose inputs must lie there too).
    pub fn apply(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        gamma: &GammaData,
        xs: &[SylowElement],
    ) -> Result<Vec<SylowElement>, FusionError> {
        let in_s = |y: &SylowElement| s.index_of(y).is_some();
        let out: Vec<SylowElement> = match self {
            WitnessStep::ConjInGroup { g } => {
                if !ctx.is_rational(g) || g.normalized(ctx.f()) != *g {
                    return Err(FusionError::WitnessCorrupt(
                        "conjugating element outside H⟨τ⟩".into(),
                    ));
                }
                xs.iter().map(|x| ctx.conj(g, x)).collect()
            }
            WitnessStep::RestrictedAut { aut } => {
                if xs.iter().any(|x| x.eps != 0 || !in_s(x)) {
                    return Err(FusionError::OutsideS0);
                }
                xs.iter()
                    .map(|x| {
                        gamma
                            .apply(ctx, *aut, x)
                            .ok_or(FusionError::WitnessCorrupt(format!("{aut:?} undefined")))
                    })
                    .collect::<Result<_, _>>()?
            }
            WitnessStep::RealizedSpin { coeffs } => {
                let u = CliffordElement::from_coeffs(
                    ctx.v7(),
                    coeffs.iter().map(|&c| FieldElement(c)).collect(),
                )
                .map_err(|e| FusionError::WitnessCorrupt(e.to_string()))?;
                let g = SpinGroupElement::new(u)
                    .map_err(|e| FusionError::WitnessCorrupt(e.to_string()))?;
                xs.iter()
                    .map(|x| {
                        ctx.locate(&g.conjugate(&ctx.to_clifford(x)))
                            .ok_or_else(|| {
                                FusionError::WitnessCorrupt("realized image outside H⟨τ⟩".into())
                            })
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        if !out.iter().all(in_s) {
            return Err(FusionError::WitnessCorrupt(
                "intermediate image leaves S".into(),
            ));
        }
        if matches!(self, WitnessStep::RestrictedAut { .. }) && out.iter().any(|y| y.eps != 0) {
            return Err(FusionError::OutsideS0);
        }
        Ok(out)
    }
}

impl FusionMorphism {
    pub fn identity(domain: Vec<SylowElement>) -> FusionMorphism {
        FusionMorphism {
            images: domain.clone(),
            domain,
            chain: vec![],
        }
    }

    /// Builds the morphism by running the chain on the domain generators.
    pub fn from_chain(
        ctx: &Spin7Context,
        s: &SylowGroup,
        gamma: &GammaData,
        domain: Vec<SylowElement>,
        chain: Vec<WitnessStep>,
    ) -> Result<FusionMorphism, FusionError> {
        let mut cur = domain.clone();
        for st in &chain {
            cur = st.apply(ctx, s, gamma, &cur)?;
        }
        Ok(FusionMorphism {
            domain,
            images: cur,
            chain,
        })
    }

    /// Re-executes the chain and checks the images and injectivity.
    pub fn replay(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        gamma: &GammaData,
    ) -> Result<(), FusionError> {
        if self.domain.len() != self.images.len() {
            return Err(FusionError::WitnessCorrupt(
                "domain and image lists differ in length".into(),
            ));
        }
        let mut cur = self.domain.clone();
        for st in &self.chain {
            cur = st.apply(ctx, s, gamma, &cur)?;
        }
        if cur != self.images {
            return Err(FusionError::ReplayMismatch);
        }
        let a = s
            .generate(&self.domain)
            .ok_or(FusionError::WitnessCorrupt("domain outside S".into()))?;
        let b = s
            .generate(&self.images)
            .ok_or(FusionError::WitnessCorrupt("image outside S".into()))?;
        if a.len() != b.len() {
            return Err(FusionError::WitnessCorrupt("not injective".into()));
        }
        Ok(())
    }

    /// Evaluates the morphism on an element of the domain subgroup.
    pub fn eval(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        gamma: &GammaData,
        x: &SylowElement,
    ) -> Result<SylowElement, FusionError> {
        let mut cur = vec![*x];
        for st in &self.chain {
            cur = st.apply(ctx, s, gamma, &cur)?;
        }
        Ok(cur[0])
    }

    /// self followed by other; other's domain must be self's images.
    pub fn then(&self, other: &FusionMorphism) -> Option<FusionMorphism> {
        if other.domain != self.images {
            return None;
        }
        let mut chain = self.chain.clone();
        chain.extend(other.chain.iter().cloned());
        Some(FusionMorphism {
            domain: self.domain.clone(),
            images: other.images.clone(),
            chain,
        })
    }
}
