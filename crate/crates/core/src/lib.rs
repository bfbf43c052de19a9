//! Exact p-adic radius of convergence for exponentials of polynomials over
//! cyclotomic extensions of `Q_p`.

pub mod cyclotomic;
pub mod error;
pub mod expr;
pub mod newton;
pub mod oracle;
pub mod padic;
pub mod piexp;
pub mod precision;
pub mod radius;
pub mod ring;
pub mod series;
pub mod valuation;
pub mod witt;

pub use cyclotomic::{dwork_pi, hensel_root, CycloElement, CycloTower, Tower};
pub use error::{Error, Result};
pub use expr::{Atom, CoeffExpr};
pub use padic::PadicScalar;
pub use radius::{
    integrality_check, radius_log, roc_at_generic_radius, roc_at_point, shifted_coefficients,
    InputPolynomial, IntegralityMode, IntegralityReport, RadiusReport, RocPoint, RocReport,
};
pub use ring::{CoeffRing, PolyRing, QpRing};
pub use series::{gauss_log_norm, poly_exp, series_log, GaussNorm, TruncSeries};
pub use valuation::ValuationInfo;
pub use witt::{ah_to_series, GhostWitt, UniversalCoords};
