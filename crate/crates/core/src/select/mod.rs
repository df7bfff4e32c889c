//! Row-subset selectors and the information-matrix audit used to compare them.

mod extremes;
mod iboss;
mod index;
mod info;
mod leverage;
mod sampling;
mod screen;

pub use extremes::{partial_extremes, Extremes};
pub use iboss::iboss_select;
pub use index::{RowTag, Side, SubdataIndex};
pub use info::{d_criterion, information_matrix, information_matrix_rows, second_moment, InfoMatrix};
pub use leverage::{approx_leverage_scores, approx_leverage_with, exact_leverage_scores, hat_diagonal, Sketch};
pub use sampling::{leverage_select, uniform_select};
pub use screen::{correlations, sis_iboss_select, sis_screen, ScreenResult};
