//! Mod-2 and rational Betti numbers of framed moduli spaces of flat SU(2)
//! connections, computed exactly.

pub mod betti;
pub mod error;
pub mod f2la;
pub mod golden;
pub mod moduli;
pub mod mv;
pub mod serre;

pub use betti::{mod2_table, rational_table, BettiTable, BigCount, Field, Space};
pub use error::{Error, Result};
pub use f2la::BitMatrix;
pub use moduli::{GenusData, MapKind, MapProfile, MapRef, SideConstraint};
pub use serre::{AlphaAction, serre_betti};
pub use mv::{Diagram, KerCoker};
