pub mod incidence;
pub mod scalars;
pub mod torsor;
pub mod trapezoid;
pub mod matrix;
pub mod planes;
pub mod scene;
pub mod verify;
