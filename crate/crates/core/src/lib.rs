//! Construction and numerical certification of surfaces whose normal
//! curvatures are bounded by 1 in absolute value.

pub mod construct;
pub mod geom2;
pub mod mesh;
pub mod patch;
pub mod planar;
pub mod profile;
pub mod report;

pub use construct::{
    build_fixture, build_jerrycan, inflate, AssemblyManifest, Color, ConstructError, FixtureKind,
    JerrycanSpec,
};
pub use patch::{
    fundamental_forms, max_abs_curvature, principal_curvatures, CurvatureReport, CurvatureSample,
    Evaluation, FundamentalForms, Mat3, ParametricPatch, PatchError, PatchKind, Vec3,
};
pub use planar::{certify_unit_disc, enclosed_area, ArcSpline, DiscCertificate, PlanarError};
pub use profile::{
    eval_constants, region_area, revolved_volume, ProfileEdge, ProfileError, ProfileRegion,
    VolumeConstants,
};
pub use report::{
    verify_manifest, verify_mesh, Check, ReportError, VerificationReport, VerifyOptions,
};
