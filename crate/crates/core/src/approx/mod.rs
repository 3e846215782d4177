//! Approximate morphisms into symmetric and unitary groups, and the
//! constructions that produce them.

pub mod construct;
pub mod free_product;
pub mod io;
pub mod model;
pub mod morphism;

pub use construct::{
    extension_morphism, folner_morphism, nice_repair, product_morphism, to_unitary, ExtensionData, FolnerMorphism,
};
pub use free_product::{free_product_morphism, FreeProductCaps, FreeProductMorphism};
pub use model::{
    FreeProduct, GroupModel, Lattice, PresentedModel, ProductModel, Syllable, TableModel, TrivialModel, Unresolved,
};
pub use morphism::{ApproxMorphism, DefectReport, TargetElem};
