#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xxzdm/berry.hpp"
#include "xxzdm/model.hpp"
#include "xxzdm/spectrum.hpp"

namespace xxzdm {

enum class Axis { b, d, theta };

const char* axis_name(Axis axis);

struct GridSpec {
  Axis axis;
  Real start, stop;
  int count; // >= 2
};

/// Uniformly spaced points start..stop inclusive; validates the spec.
std::vector<Real> grid_points(const GridSpec& g);

ModelParams with_axis(const ModelParams& base, Axis axis, Real value);

/// Figure-data container: ordered meta lines, named numeric columns, one flag
/// string per row ("" when clean). Rows are grid-ordered (row-major for 2-D).
struct SweepTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Real>> rows;
  std::vector<std::string> flags;
};

/// Continuity labels: branch[i][slot] is the branch id of ascending-sorted
/// slot `slot` at grid point i; branch[0] is the identity.
struct LevelTracking {
  std::vector<std::array<int, 4>> branch;
};

/// Energies (ascending) and min_gap at every grid point. Rows never abort:
/// numerical failures are recorded in the row flag.
SweepTable sweep_eigenvalues(const ModelParams& base, const GridSpec& grid, int threads = 0);

/// Same, with branch columns from track_levels appended.
SweepTable sweep_eigenvalues_tracked(const ModelParams& base, const GridSpec& grid, int threads = 0);

/// Per-point Berry phase for continuity-tracked levels along the inner axis.
/// level = -1 emits all four tracked levels; method must be closed or wilson.
/// Rows near degeneracies carry per-level flags instead of values.
SweepTable sweep_berry(const ModelParams& base, const std::optional<GridSpec>& outer,
                       const GridSpec& inner, int level, BerryMethod method, int threads = 0,
                       int wilson_grid = 1024);

/// Greedy maximal-overlap matching between consecutive eigenbases. Throws
/// TrackingAmbiguous when some state's best successor overlap is <= 1/sqrt(2).
LevelTracking track_levels(const std::vector<EigenSystem>& systems);

/// Midpoints of sudden changes in a phase-vs-x curve: maximal runs of
/// consecutive pairs whose circular difference exceeds both `threshold` and
/// ten times the median adjacent difference collapse into one location each,
/// at the steepest pair of the run. The curve must be sorted by x with
/// flagged/NaN points removed.
std::vector<Real> detect_jumps(const std::vector<std::pair<Real, Real>>& curve, Real threshold);

/// Golden-section minimizer of a unimodal function on [lo, hi].
Real refine_minimum(const std::function<Real(Real)>& f, Real lo, Real hi, Real xtol);

/// Width of the tightest cluster of three adjacent levels; its minimizer over
/// d locates the weak-field sub-degeneracy.
Real triple_cluster_width(const Spectrum& s);

} // namespace xxzdm
