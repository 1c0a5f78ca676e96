#ifndef FRACZETA_GRAPH_HPP
#define FRACZETA_GRAPH_HPP

#include <array>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/spectrum.hpp"

namespace fraczeta {

inline constexpr int kDefaultDenseLevelCap = 6;
inline constexpr double kMultiplicityTolerance = 1e-9;

/// All eigenvalues of a symmetric matrix, grouped into pairs by clustering at
/// kMultiplicityTolerance.
inline std::vector<EigenvaluePair> dense_symmetric_spectrum(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolve failed");
  std::vector<EigenvaluePair> raw;
  raw.reserve(static_cast<std::size_t>(matrix.rows()));
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    raw.push_back({solver.eigenvalues()[i], 1});
  }
  return cluster_pairs(std::move(raw), kMultiplicityTolerance);
}

/// Combinatorial Laplacian (degree on the diagonal) of the level-m gasket
/// graph with the rows/columns of the three corner vertices removed.
inline Eigen::MatrixXd gasket_dirichlet_laplacian(int level) {
  using Point = std::pair<int, int>;
  using Triangle = std::array<Point, 3>;
  const int side = 1 << level;
  std::vector<Triangle> cells{{Point{0, 0}, Point{side, 0}, Point{0, side}}};
  auto mid = [](Point a, Point b) { return Point{(a.first + b.first) / 2, (a.second + b.second) / 2}; };
  for (int m = 0; m < level; ++m) {
    std::vector<Triangle> next;
    next.reserve(cells.size() * 3);
    for (const auto& [a, b, c] : cells) {
      const Point ab = mid(a, b);
      const Point bc = mid(b, c);
      const Point ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
    }
    cells = std::move(next);
  }

  std::set<std::pair<Point, Point>> edges;
  for (const auto& t : cells) {
    for (int i = 0; i < 3; ++i) {
      Point u = t[i];
      Point v = t[(i + 1) % 3];
      if (v < u) std::swap(u, v);
      edges.insert({u, v});
    }
  }

  const std::set<Point> corners{{0, 0}, {side, 0}, {0, side}};
  std::map<Point, Eigen::Index> index;
  for (const auto& [u, v] : edges) {
    for (const Point& p : {u, v}) {
      if (!corners.contains(p) && !index.contains(p)) {
        index.emplace(p, static_cast<Eigen::Index>(index.size()));
      }
    }
  }
  // std::map iteration order is canonical; renumber so that index follows it.
  Eigen::Index next_id = 0;
  for (auto& entry : index) entry.second = next_id++;

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(next_id, next_id);
  for (const auto& [u, v] : edges) {
    const auto iu = index.find(u);
    const auto iv = index.find(v);
    if (iu != index.end()) lap(iu->second, iu->second) += 1.0;
    if (iv != index.end()) lap(iv->second, iv->second) += 1.0;
    if (iu != index.end() && iv != index.end()) {
      lap(iu->second, iv->second) -= 1.0;
      lap(iv->second, iu->second) -= 1.0;
    }
  }
  return lap;
}

/// Exact eigensolve of the level-`level` Dirichlet gasket graph Laplacian.
/// Serves as the independent oracle for spectral decimation.
inline SpectrumBatch dense_graph_spectrum(int level, const FractalModel& model,
                                          int level_cap = kDefaultDenseLevelCap) {
  if (level < 0) throw ConfigError("dense_graph_spectrum: level must be >= 0");
  if (level > level_cap) {
    throw ResourceError("dense_graph_spectrum: level " + std::to_string(level) +
                        " exceeds cap " + std::to_string(level_cap));
  }
  auto pairs = dense_symmetric_spectrum(gasket_dirichlet_laplacian(level));
  return make_batch(std::move(pairs), model);
}

}  // namespace fraczeta

#endif  // FRACZETA_GRAPH_HPP
