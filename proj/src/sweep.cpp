#include "xxzdm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "xxzdm/eigenstates.hpp"

namespace xxzdm {

namespace {

constexpr Real nan_value = std::numeric_limits<Real>::quiet_NaN();

void parallel_for(int n, int threads, const std::function<void(int)>& fn)
{
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& th : pool)
    th.join();
}

void append_flag(std::string& flag, const std::string& entry)
{
  if (!flag.empty())
    flag += ';';
  flag += entry;
}

} // namespace

const char* axis_name(Axis axis)
{
  switch (axis) {
    case Axis::b: return "b";
    case Axis::d: return "d";
    case Axis::theta: return "theta";
  }
  return "unknown";
}

std::vector<Real> grid_points(const GridSpec& g)
{
  if (!(std::isfinite(g.start) && std::isfinite(g.stop)) || !(g.start < g.stop) || g.count < 2)
    throw Error(ErrorKind::PreconditionViolated, "grid requires finite start < stop and count >= 2");
  std::vector<Real> points(g.count);
  const Real step = (g.stop - g.start) / static_cast<Real>(g.count - 1);
  for (int i = 0; i < g.count; ++i)
    points[i] = g.start + step * static_cast<Real>(i);
  points.back() = g.stop;
  return points;
}

ModelParams with_axis(const ModelParams& base, Axis axis, Real value)
{
  switch (axis) {
    case Axis::b: return {base.j, base.jz, base.d, value, base.theta};
    case Axis::d: return {base.j, base.jz, value, base.b, base.theta};
    case Axis::theta: return {base.j, base.jz, base.d, base.b, value};
  }
  throw Error(ErrorKind::PreconditionViolated, "unknown axis");
}

namespace {

struct EnergyPoint {
  std::array<Real, 4> energies{nan_value, nan_value, nan_value, nan_value};
  Real min_gap = nan_value;
  std::string flag;
};

EnergyPoint energy_point(const ModelParams& base, Axis axis, Real value)
{
  EnergyPoint pt;
  try {
    const Spectrum s = eigenvalues(with_axis(base, axis, value));
    pt.energies = s.energies;
    pt.min_gap = s.min_gap;
  } catch (const Error& e) {
    pt.flag = error_name(e.kind());
  }
  return pt;
}

} // namespace

SweepTable sweep_eigenvalues(const ModelParams& base, const GridSpec& grid, int threads)
{
  const std::vector<Real> points = grid_points(grid);
  std::vector<EnergyPoint> data(points.size());
  parallel_for(static_cast<int>(points.size()), threads,
               [&](int i) { data[i] = energy_point(base, grid.axis, points[i]); });

  SweepTable table;
  table.columns = {"i", axis_name(grid.axis), "e0", "e1", "e2", "e3", "min_gap"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EnergyPoint& pt = data[i];
    table.rows.push_back({static_cast<Real>(i), points[i], pt.energies[0], pt.energies[1],
                          pt.energies[2], pt.energies[3], pt.min_gap});
    table.flags.push_back(pt.flag);
  }
  return table;
}

namespace {

// greedy maximal-overlap matching succ_of[a] = b; empty when some state has no
// successor above the 1/sqrt(2) guard
std::optional<std::array<int, 4>> overlap_match(const Matrix4c& prev, const Matrix4c& next)
{
  Real overlap[4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      overlap[a][b] = std::abs(prev.col(a).dot(next.col(b)));

  const Real guard = Real(1) / std::sqrt(Real(2));
  for (int a = 0; a < 4; ++a) {
    Real best = 0;
    for (int b = 0; b < 4; ++b)
      best = std::max(best, overlap[a][b]);
    if (!(best > guard))
      return std::nullopt;
  }

  std::array<int, 4> succ_of{-1, -1, -1, -1};
  std::array<bool, 4> a_used{}, b_used{};
  for (int pick = 0; pick < 4; ++pick) {
    int best_a = -1, best_b = -1;
    Real best = -1;
    for (int a = 0; a < 4; ++a) {
      if (a_used[a])
        continue;
      for (int b = 0; b < 4; ++b) {
        if (b_used[b])
          continue;
        if (overlap[a][b] > best) {
          best = overlap[a][b];
          best_a = a;
          best_b = b;
        }
      }
    }
    succ_of[best_a] = best_b;
    a_used[best_a] = true;
    b_used[best_b] = true;
  }
  return succ_of;
}

} // namespace

LevelTracking track_levels(const std::vector<EigenSystem>& systems)
{
  if (systems.empty())
    throw Error(ErrorKind::PreconditionViolated, "track_levels requires at least one system");
  LevelTracking tracking;
  tracking.branch.resize(systems.size());
  tracking.branch[0] = {0, 1, 2, 3};
  for (std::size_t step = 0; step + 1 < systems.size(); ++step) {
    const auto succ_of = overlap_match(systems[step].vectors, systems[step + 1].vectors);
    if (!succ_of)
      throw Error(ErrorKind::TrackingAmbiguous,
                  "no unique maximal-overlap successor; refine the grid");
    for (int a = 0; a < 4; ++a)
      tracking.branch[step + 1][(*succ_of)[a]] = tracking.branch[step][a];
  }
  return tracking;
}

SweepTable sweep_eigenvalues_tracked(const ModelParams& base, const GridSpec& grid, int threads)
{
  SweepTable table = sweep_eigenvalues(base, grid, threads);
  const std::vector<Real> points = grid_points(grid);

  std::vector<EigenSystem> systems(points.size());
  std::vector<std::string> errors(points.size());
  parallel_for(static_cast<int>(points.size()), threads, [&](int i) {
    try {
      systems[i] = jacobi_eigensystem(build_hamiltonian(with_axis(base, grid.axis, points[i]), 0));
    } catch (const Error& e) {
      errors[i] = error_name(e.kind());
    }
  });

  table.columns.insert(table.columns.end(), {"branch0", "branch1", "branch2", "branch3"});
  std::array<Real, 4> identity{0, 1, 2, 3};
  bool tracked = true;
  LevelTracking tracking;
  try {
    for (const std::string& e : errors)
      if (!e.empty())
        throw Error(ErrorKind::NumericalFailure, e);
    tracking = track_levels(systems);
  } catch (const Error& e) {
    tracked = false;
    for (std::string& flag : table.flags)
      append_flag(flag, error_name(e.kind()));
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (int slot = 0; slot < 4; ++slot)
      table.rows[i].push_back(tracked ? static_cast<Real>(tracking.branch[i][slot])
                                      : identity[slot]);
  }
  return table;
}

namespace {

struct BerryPoint {
  std::array<Real, 4> phases{nan_value, nan_value, nan_value, nan_value};
  std::array<std::string, 4> level_flags;
  Real min_gap = nan_value;
  EigenSystem system;
  bool system_ok = false;
};

BerryPoint berry_point(const ModelParams& params, BerryMethod method, int wilson_grid)
{
  BerryPoint pt;
  try {
    pt.min_gap = eigenvalues(params).min_gap;
    pt.system = jacobi_eigensystem(build_hamiltonian(params, 0));
    pt.system_ok = true;
  } catch (const Error& e) {
    for (auto& f : pt.level_flags)
      f = error_name(e.kind());
    return pt;
  }
  for (int level = 0; level < 4; ++level) {
    try {
      const BerryResult r = method == BerryMethod::closed
                                ? berry_closed(params, level)
                                : berry_wilson(params, level, wilson_grid);
      pt.phases[level] = r.phase;
    } catch (const Error& e) {
      pt.level_flags[level] = error_name(e.kind());
    }
  }
  return pt;
}

} // namespace

SweepTable sweep_berry(const ModelParams& base, const std::optional<GridSpec>& outer,
                       const GridSpec& inner, int level, BerryMethod method, int threads,
                       int wilson_grid)
{
  if (method != BerryMethod::closed && method != BerryMethod::wilson)
    throw Error(ErrorKind::PreconditionViolated, "sweep_berry supports closed and wilson methods");
  if (level < -1 || level > 3)
    throw Error(ErrorKind::PreconditionViolated, "level must be -1 (all) or 0..3");

  const std::vector<Real> inner_points = grid_points(inner);
  std::vector<Real> outer_points;
  if (outer)
    outer_points = grid_points(*outer);
  else
    outer_points = {nan_value}; // single pseudo-row at the base parameters
  const int n_outer = static_cast<int>(outer_points.size());
  const int n_inner = static_cast<int>(inner_points.size());

  std::vector<BerryPoint> data(static_cast<std::size_t>(n_outer) * n_inner);
  parallel_for(n_outer * n_inner, threads, [&](int idx) {
    const int row = idx / n_inner;
    const int col = idx % n_inner;
    try {
      ModelParams params = outer ? with_axis(base, outer->axis, outer_points[row]) : base;
      params = with_axis(params, inner.axis, inner_points[col]);
      data[idx] = berry_point(params, method, wilson_grid);
    } catch (const Error& e) {
      for (auto& f : data[idx].level_flags)
        f = error_name(e.kind());
    }
  });

  SweepTable table;
  if (outer)
    table.columns = {"i", "k", axis_name(outer->axis), axis_name(inner.axis)};
  else
    table.columns = {"i", axis_name(inner.axis)};
  if (level < 0)
    table.columns.insert(table.columns.end(), {"beta0", "beta1", "beta2", "beta3"});
  else
    table.columns.push_back("beta");
  table.columns.push_back("min_gap");

  for (int row = 0; row < n_outer; ++row) {
    // continuity labels along the inner axis, reset per row; an ambiguous step
    // flags its starting point and the labels carry over slot-wise
    std::vector<std::array<int, 4>> branch(n_inner, {0, 1, 2, 3});
    std::vector<bool> ambiguous(n_inner, false);
    for (int col = 0; col + 1 < n_inner; ++col) {
      const BerryPoint& here = data[static_cast<std::size_t>(row) * n_inner + col];
      const BerryPoint& there = data[static_cast<std::size_t>(row) * n_inner + col + 1];
      if (!here.system_ok || !there.system_ok) {
        branch[col + 1] = branch[col];
        continue;
      }
      const auto succ_of = overlap_match(here.system.vectors, there.system.vectors);
      if (!succ_of) {
        ambiguous[col] = true;
        branch[col + 1] = branch[col];
        continue;
      }
      for (int a = 0; a < 4; ++a)
        branch[col + 1][(*succ_of)[a]] = branch[col][a];
    }

    for (int col = 0; col < n_inner; ++col) {
      const BerryPoint& pt = data[static_cast<std::size_t>(row) * n_inner + col];
      // phase of tracked branch k sits in the sorted slot labelled k
      std::array<Real, 4> tracked_phase{nan_value, nan_value, nan_value, nan_value};
      std::array<std::string, 4> tracked_flag;
      for (int slot = 0; slot < 4; ++slot) {
        const int branch_id = branch[col][slot];
        tracked_phase[branch_id] = pt.phases[slot];
        tracked_flag[branch_id] = pt.level_flags[slot];
      }

      std::vector<Real> cells;
      if (outer)
        cells = {static_cast<Real>(row), static_cast<Real>(col), outer_points[row],
                 inner_points[col]};
      else
        cells = {static_cast<Real>(col), inner_points[col]};
      std::string flag;
      if (ambiguous[col])
        append_flag(flag, error_name(ErrorKind::TrackingAmbiguous));
      if (level < 0) {
        for (int k = 0; k < 4; ++k) {
          cells.push_back(tracked_phase[k]);
          if (!tracked_flag[k].empty())
            append_flag(flag, std::to_string(k) + ":" + tracked_flag[k]);
        }
      } else {
        cells.push_back(tracked_phase[level]);
        if (!tracked_flag[level].empty())
          append_flag(flag, tracked_flag[level]);
      }
      cells.push_back(pt.min_gap);
      table.rows.push_back(std::move(cells));
      table.flags.push_back(std::move(flag));
    }
  }
  return table;
}

std::vector<Real> detect_jumps(const std::vector<std::pair<Real, Real>>& curve, Real threshold)
{
  for (const auto& [x, phase] : curve)
    if (!std::isfinite(x) || !std::isfinite(phase))
      throw Error(ErrorKind::PreconditionViolated, "detect_jumps requires finite samples");
  for (std::size_t i = 0; i + 1 < curve.size(); ++i)
    if (!(curve[i].first < curve[i + 1].first))
      throw Error(ErrorKind::PreconditionViolated, "detect_jumps requires x sorted ascending");
  if (curve.size() < 2)
    return {};

  std::vector<Real> diff(curve.size() - 1);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i)
    diff[i] = phase_distance(curve[i + 1].second, curve[i].second);

  std::vector<Real> sorted = diff;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  Real median = sorted[sorted.size() / 2];
  if (sorted.size() % 2 == 0) {
    const Real lower = *std::max_element(sorted.begin(), sorted.begin() + sorted.size() / 2);
    median = (median + lower) / 2;
  }

  std::vector<Real> jumps;
  std::size_t i = 0;
  while (i < diff.size()) {
    if (!(diff[i] > threshold && diff[i] > 10 * median)) {
      ++i;
      continue;
    }
    // maximal run of qualifying pairs collapses into one event at its steepest pair
    std::size_t steepest = i;
    std::size_t j = i;
    while (j < diff.size() && diff[j] > threshold && diff[j] > 10 * median) {
      if (diff[j] > diff[steepest])
        steepest = j;
      ++j;
    }
    jumps.push_back((curve[steepest].first + curve[steepest + 1].first) / 2);
    i = j;
  }
  return jumps;
}

Real refine_minimum(const std::function<Real(Real)>& f, Real lo, Real hi, Real xtol)
{
  if (!(lo < hi) || !(xtol > 0))
    throw Error(ErrorKind::PreconditionViolated, "refine_minimum requires lo < hi and xtol > 0");
  const Real inv_golden = (std::sqrt(Real(5)) - 1) / 2;
  Real a = lo, b = hi;
  Real c = b - inv_golden * (b - a);
  Real d = a + inv_golden * (b - a);
  Real fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_golden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_golden * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

Real triple_cluster_width(const Spectrum& s)
{
  return std::min(s.energies[2] - s.energies[0], s.energies[3] - s.energies[1]);
}

} // namespace xxzdm
