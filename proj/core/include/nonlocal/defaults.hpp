#pragma once

// Central table of numerical defaults and acceptance thresholds.
//
// Everything that controls a pass/fail decision lives here so an experiment
// can be audited from one file. Campaign code and the acceptance suite read
// these constants; configs only choose parameter points.

#include <limits>

namespace nonlocal::defaults {

// --- measures -------------------------------------------------------------
inline constexpr double kUnitNormTolerance = 1e-12;   // atom directions
inline constexpr double kRenormalizeWarn = 1e-9;      // warn if |dir| deviates more
inline constexpr double kSymmetryTolerance = 1e-12;   // atom weight matching
inline constexpr int kMinSphereResolution = 16;
inline constexpr int kDensityDirections = 64;         // operator quadrature of densities

// --- kernel constants -------------------------------------------------------
inline constexpr double kAlphaOneBranch = 1e-6;       // |alpha-1| below this uses the alpha=1 form
inline constexpr double kKernelZeroTolerance = 1e-14; // beta this close to a zero point returns 0
inline constexpr double kOracleRelTolerance = 1e-5;   // |K - oracle| <= tol * (1 + |K|)
inline constexpr double kOracleZeroTolerance = 1e-6;
inline constexpr double kExplicitFormulaTolerance = 1e-10;
inline constexpr double kAlphaContinuityTolerance = 1e-3;

// --- operator quadrature ----------------------------------------------------
inline constexpr double kInnerRadius = 0.1;            // Taylor region of the radial quadrature
inline constexpr double kPanelGrowth = 2.0;
inline constexpr int kPanelPoints = 20;
inline constexpr int kInnerPoints = 12;
inline constexpr double kQuadratureTolerance = 1e-10;
inline constexpr double kTailResidual = 1e-10;
inline constexpr double kMaxTailRadius = 1e30;
inline constexpr double kSymbolRelTolerance = 1e-4;

// --- geometry ---------------------------------------------------------------
inline constexpr double kConvexitySlack = 1e-12;
inline constexpr double kComparabilityBound = 10.0;    // N in N^{-1} psi <= d <= N psi
inline constexpr double kSquareCornerFraction = 0.05;  // excluded corner neighbourhood / side
inline constexpr double kZetaCoverageFloor = 1e-8;

// --- slopes and stability ---------------------------------------------------
inline constexpr double kSlopeTolerance = 0.1;         // barrier and indicator log-log slopes
inline constexpr double kExponentTolerance = 0.03;     // boundary exponent vs alpha/2
inline constexpr double kInteriorRelError = 0.01;      // elliptic solve vs closed-form profile
inline constexpr double kInteriorDistance = 0.05;      // "interior" means d_x >= this
inline constexpr double kQuadratureStability = 0.05;   // hardy / tail ratios under refinement
inline constexpr double kRefinementStability = 0.10;   // estimate ratios under h or dt halving
inline constexpr double kThetaSpread = 10.0;           // max/min estimate ratio across theta
inline constexpr double kNormConstantStability = 0.10; // dyadic/integral constant across refinements
inline constexpr double kThetaEdgeMargin = 0.05;       // near-edge theta points, fraction of window
inline constexpr int kMinFitBands = 5;

// --- solvers ------------------------------------------------------------------
inline constexpr int kDirectLimit1d = 4096;
inline constexpr int kDirectLimit2dSide = 128;
inline constexpr double kResidualTolerance = 1e-10;
inline constexpr double kMaxPrincipleSlack = 1e-12;

// --- Monte Carlo --------------------------------------------------------------
inline constexpr int kMinPaths = 1000;
inline constexpr double kMcRelTolerance = 0.02;
inline constexpr double kMcStderrMultiplier = 2.0;
inline constexpr double kCfStderrMultiplier = 3.0;

// --- runtime budgets (seconds) ------------------------------------------------
inline constexpr double kKernelCampaignBudget = 30.0;
inline constexpr double kEllipticCampaignBudget = 120.0;
inline constexpr double kMcCampaignBudget = 300.0;

// --- reporting ----------------------------------------------------------------
inline constexpr int kCsvDigits = 17;
inline constexpr const char* kCsvVersion = "nlab-csv-1";

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace nonlocal::defaults
