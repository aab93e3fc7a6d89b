use std::path::{Path, PathBuf};

use bsys::io::{to_json, FormDoc, LagrangianDoc, MatrixDoc, RelationDoc, SubspaceDoc};
use bsys::linrel::{arens_decompose, cayley_map, pullback, CayleyVariant, Flavor, LinearRelation};
use clap::{Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::{read_json, Context};

#[derive(Debug, Subcommand)]
pub enum RelationCmd {
    /// Classification flags of a relation.
    Check { relation: PathBuf },
    /// `(X, L)` with `U = G(L) ⊕ ({0} ⊕ X⊥)` for a (skew-)self-adjoint relation.
    Decompose {
        relation: PathBuf,
        #[arg(long, value_enum, default_value_t = FlavorArg::SelfAdjoint)]
        flavor: FlavorArg,
    },
    /// Image of a relation under a Cayley transform.
    Cayley {
        relation: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Real)]
        variant: VariantArg,
    },
    /// Preimage `F⁻¹(V)` of a subspace under a surjective compatible map.
    Pullback {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Form on the source space.
        #[arg(long)]
        source_form: PathBuf,
        /// Form on the target space.
        #[arg(long)]
        target_form: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FlavorArg {
    SelfAdjoint,
    SkewSelfAdjoint,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    /// Skew-self-adjoint relations to unitary graphs.
    Real,
    /// Self-adjoint relations to unitary graphs.
    Complex,
}

/// Output of `relation cayley`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CayleyOutput {
    pub unitary: bool,
    pub relation: RelationDoc,
}

fn load_relation(path: &Path, ctx: &Context) -> Result<LinearRelation> {
    let mut doc: RelationDoc = read_json(path)?;
    if let Some(tol) = ctx.tol {
        doc.tol = tol;
    }
    Ok(doc.to_relation()?)
}

pub fn run(cmd: RelationCmd, ctx: &Context) -> Result<()> {
    match cmd {
        RelationCmd::Check { relation } => {
            let u = load_relation(&relation, ctx)?;
            ctx.emit(&to_json(&u.flags()))
        }
        RelationCmd::Decompose { relation, flavor } => {
            let u = load_relation(&relation, ctx)?;
            let flavor = match flavor {
                FlavorArg::SelfAdjoint => Flavor::SelfAdjoint,
                FlavorArg::SkewSelfAdjoint => Flavor::SkewSelfAdjoint,
            };
            let data = arens_decompose(&u, flavor)?;
            ctx.emit(&to_json(&LagrangianDoc::new(&data)))
        }
        RelationCmd::Cayley { relation, variant } => {
            let u = load_relation(&relation, ctx)?;
            let variant = match variant {
                VariantArg::Real => CayleyVariant::RealSkew,
                VariantArg::Complex => CayleyVariant::ComplexSymmetric,
            };
            let image = cayley_map(&u, variant)?;
            ctx.emit(&to_json(&CayleyOutput {
                unitary: image.is_unitary(),
                relation: RelationDoc::new(&image),
            }))
        }
        RelationCmd::Pullback {
            subspace,
            map,
            source_form,
            target_form,
        } => {
            let mut v: SubspaceDoc = read_json(&subspace)?;
            if let Some(tol) = ctx.tol {
                v.tol = tol;
            }
            let v = v.to_subspace()?;
            let f = read_json::<MatrixDoc>(&map)?.to_matrix()?;
            let w1 = read_json::<FormDoc>(&source_form)?.to_form()?;
            let w2 = read_json::<FormDoc>(&target_form)?.to_form()?;
            let pre = pullback(&v, &f, &w1, &w2)?;
            ctx.emit(&to_json(&SubspaceDoc::new(&pre)))
        }
    }
}
