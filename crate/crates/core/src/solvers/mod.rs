//! Self-contained numerical core: ElasticNet coordinate descent, L1 logistic
//! regression, reduced rank regression, PCA, standardization, R², and
//! cross-validated grid search. No external linear-algebra backend; the few
//! dense decompositions needed are implemented in [`linalg`].

pub mod cv;
pub mod elasticnet;
pub mod linalg;
pub mod logistic;
pub mod pca;
pub mod rrr;
pub mod stats;

pub use cv::{
    cv_elasticnet, cv_grid_search, cv_logistic, default_elasticnet_grid, default_logistic_grid,
    kfold_indices, CvMetric, CvReport, ElasticNetPoint, GridPoint, LogisticPoint,
};
pub use elasticnet::{elasticnet_fit, elasticnet_objective, ridge_least_squares, LinearModel};
pub use logistic::{logistic_l1_fit, logistic_l1_kkt_violation, LogisticModel};
pub use pca::{pca_first_component, PcaScores};
pub use rrr::{rrr_fit, LinearMap, RRR_RIDGE};
pub use stats::{r2_score, Standardizer};
