//! Performance-space metrics.

mod gap;
mod hypervolume;
mod pareto;
mod targets;

pub use gap::{bounded_difference_gradient, finite_difference_gradient, optimality_gap, DescentSettings, OptGapResult};
pub use hypervolume::{hypervolume, quantile_point, reference_point};
pub use pareto::{dominates, generational_distance, pareto_front, ParetoRef};
pub use targets::{
    dtai, dtai_reward_cap, dtai_with_gradient, minimum_target_ratio, signed_distance_to_target, target_achievement,
    target_achievement_rate, TargetSpec,
};
