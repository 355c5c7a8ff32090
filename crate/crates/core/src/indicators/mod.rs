//! Scale, influence and prestige indicators.

mod influence;
mod prestige;
pub mod registry;
mod scale;
mod trajectory;

pub use influence::{
    central_and_tail, central_and_tail_with, gini, h_index, median, milestone_index, norm_h,
    CentralTail, MilestoneMode, MilestoneParams, Milestones, DEFAULT_HCR_THRESHOLD,
    DEFAULT_MII_QUANTILE, DEFAULT_MII_THRESHOLD,
};
pub use prestige::{prestige, top_conf_coverage, Prestige};
pub use registry::{TopVenueKind, TopVenueRegistry};
pub use scale::{mean_growth_rate, scale_indicators, GrowthRate, ScaleIndicators};
pub use trajectory::{
    indicator_value, pooled_year_vector, trajectory, year_vector, Indicator, TrajectoryParams,
    TrajectoryWindow,
};
