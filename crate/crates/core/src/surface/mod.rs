//! Combinatorial foliated surfaces: Picard lattices of iterated blow-ups of
//! ℙ² and F_n, curve catalogues with marked germs, blow-ups and
//! contractions.
//!
//! Nefness and negativity are only ever decided relative to the catalogue.

mod contract;
mod format;
mod incidence;
mod lattice;
mod model;

pub use contract::{pushforward_class, Contraction, SingularPoint, SurfacePointKind};
pub use format::{emit_surface, parse_surface, SURFACE_HEADER, SURFACE_VERSION};
pub use incidence::{intersection_multiplicity, tangency_order, zero_order};
pub use lattice::{DivisorClass, PicardLattice};
pub use model::{
    blow_up_model, BaseSurface, BlowUpCenter, BoundaryComponent, Branch, CatalogueCurve,
    FoliatedSurfaceModel, MarkedPoint,
};

/// `K_{(X,F,Δ),ε}` on the current surface.
pub fn adjoint_class(model: &FoliatedSurfaceModel, epsilon: &crate::Rational) -> crate::Result<DivisorClass> {
    model.adjoint_class(epsilon)
}
