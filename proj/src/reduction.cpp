#include "scenex/reduction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "scenex/quasirandom.hpp"

namespace scenex {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double tau = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    running += u[static_cast<std::size_t>(i)];
    const double t = (running - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0).matrix();
}

namespace {

/// Minimize ‖Mᵀa − t‖² over the simplex, starting from a0, by projected
/// gradient with backtracking; never returns a worse point than a0.
Eigen::VectorXd simplex_lsq(const Eigen::MatrixXd& M, const Eigen::VectorXd& t,
                            Eigen::VectorXd a) {
  const double lipschitz = 2.0 * M.squaredNorm();
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  auto cost = [&](const Eigen::VectorXd& x) { return (M.transpose() * x - t).squaredNorm(); };
  double f = cost(a);
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd grad = 2.0 * (M * (M.transpose() * a - t));
    double eta = step;
    Eigen::VectorXd next;
    double f_next = f;
    bool improved = false;
    int halvings = 0;
    for (int half = 0; half < 40; ++half) {
      next = project_to_simplex(a - eta * grad);
      f_next = cost(next);
      if (f_next <= f) {
        improved = true;
        break;
      }
      eta *= 0.5;
      ++halvings;
    }
    if (!improved) break;
    // The Frobenius-based Lipschitz bound is loose; grow the step again after
    // clean successes so progress is not throttled by it.
    step = halvings == 0 ? eta * 2.0 : eta;
    const double gain = f - f_next;
    a = std::move(next);
    f = f_next;
    if (gain <= 1e-12 * std::max(1.0, f)) break;
  }
  return a;
}

std::vector<std::size_t> furthest_point_order(const Eigen::MatrixXd& X, std::size_t count,
                                              std::size_t start) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> chosen{start};
  std::vector<double> min_dist(n);
  for (std::size_t j = 0; j < n; ++j) {
    min_dist[j] = (X.row(static_cast<Eigen::Index>(j)) - X.row(static_cast<Eigen::Index>(start)))
                      .squaredNorm();
  }
  while (chosen.size() < count) {
    std::size_t best = 0;
    double best_dist = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (min_dist[j] > best_dist) {
        best_dist = min_dist[j];
        best = j;
      }
    }
    chosen.push_back(best);
    for (std::size_t j = 0; j < n; ++j) {
      min_dist[j] = std::min(
          min_dist[j],
          (X.row(static_cast<Eigen::Index>(j)) - X.row(static_cast<Eigen::Index>(best)))
              .squaredNorm());
    }
  }
  return chosen;
}

}  // namespace

ArchetypeModel archetypal_analysis(const Eigen::MatrixXd& X, std::size_t m,
                                   std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  if (m < 2) throw std::invalid_argument("archetypal analysis needs m >= 2");
  if (n < m) throw std::invalid_argument("archetypal analysis needs at least m points");

  ArchetypeModel model;
  model.m = m;

  const std::size_t start = static_cast<std::size_t>(splitmix64(seed) % n);
  const auto init = furthest_point_order(X, m, start);
  model.B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < m; ++j) {
    model.B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(init[j])) = 1.0;
  }
  model.Z = model.B * X;
  model.A = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(m),
                                      1.0 / static_cast<double>(m));

  double rss_prev = (X - model.A * model.Z).squaredNorm();
  for (std::size_t iter = 1; iter <= 500; ++iter) {
    model.iterations = iter;

    // A step: each data point's simplex weights over fixed archetypes.
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      model.A.row(i) =
          simplex_lsq(model.Z, X.row(i).transpose(), model.A.row(i).transpose()).transpose();
    }

    // B step: each archetype's simplex weights over the data points. With
    // c_j = A column j, the row subproblem reduces to a simplex least
    // squares against the deflated residual target.
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
      const Eigen::VectorXd c = model.A.col(j);
      const double s = c.squaredNorm();
      if (s <= 0.0) {
        // Unused archetype: relocating it cannot change the RSS, so park it
        // on the worst-reconstructed point.
        const Eigen::MatrixXd resid = X - model.A * model.Z;
        Eigen::Index worst = 0;
        resid.rowwise().squaredNorm().maxCoeff(&worst);
        model.B.row(j).setZero();
        model.B(j, worst) = 1.0;
        model.Z.row(j) = model.B.row(j) * X;
        continue;
      }
      const Eigen::MatrixXd E = X - model.A * model.Z + c * model.Z.row(j);
      const Eigen::VectorXd w = (c.transpose() * E).transpose() / s;
      model.B.row(j) = simplex_lsq(X, w, model.B.row(j).transpose()).transpose();
      model.Z.row(j) = model.B.row(j) * X;
    }

    model.rss = (X - model.A * model.Z).squaredNorm();
    model.rss_history.push_back(model.rss);
    assert(model.rss <= rss_prev + 1e-9);
    const double gain = rss_prev - model.rss;
    if (gain >= 0.0 && gain <= 1e-6 * std::max(rss_prev, 1e-30)) {
      model.converged = true;
      break;
    }
    rss_prev = model.rss;
  }
  return model;
}

std::size_t medoid(const std::vector<std::size_t>& members, const Eigen::MatrixXd& D) {
  if (members.empty()) throw std::invalid_argument("medoid of an empty cluster");
  std::size_t best = members[0];
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i : members) {
    double sum = 0.0;
    for (std::size_t j : members) {
      sum += D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

std::string to_string(ReducedRole role) {
  return role == ReducedRole::Archetype ? "archetype" : "prototype";
}

ReducedRole reduced_role_from_string(const std::string& s) {
  if (s == "archetype") return ReducedRole::Archetype;
  if (s == "prototype") return ReducedRole::Prototype;
  throw std::invalid_argument("unknown reduced-set role: " + s);
}

namespace {

std::vector<std::size_t> max_min_spread(const std::vector<std::size_t>& members,
                                        const Eigen::MatrixXd& D, std::size_t count) {
  // Start from the member with the largest summed distance (the least
  // central), then greedily add the member maximizing the minimum distance
  // to the selection.
  std::size_t start = members[0];
  double best_sum = -1.0;
  for (std::size_t i : members) {
    double sum = 0.0;
    for (std::size_t j : members) {
      sum += D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    if (sum > best_sum) {
      best_sum = sum;
      start = i;
    }
  }
  std::vector<std::size_t> chosen{start};
  while (chosen.size() < count) {
    std::size_t best = members[0];
    double best_dist = -1.0;
    for (std::size_t i : members) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      double min_d = std::numeric_limits<double>::infinity();
      for (std::size_t c : chosen) {
        min_d = std::min(min_d, D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
      }
      if (min_d > best_dist) {
        best_dist = min_d;
        best = i;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

}  // namespace

ReducedScenarioSet reduce(const ClusterAssignment& clusters, const Embedding& embedding,
                          const DistanceMatrix& D, const ReduceOptions& options) {
  const std::size_t n = clusters.labels.size();
  if (embedding.ids.size() != n || D.ids.size() != n) {
    throw std::invalid_argument("clusters, embedding and distances must cover the same ids");
  }
  if (clusters.n_clusters < 1) {
    throw std::invalid_argument("reduction needs at least one non-noise cluster");
  }
  if (options.prototypes_per_cluster < 1) {
    throw std::invalid_argument("need at least one prototype per cluster");
  }

  ReducedScenarioSet out;
  std::set<std::uint64_t> used;
  auto add = [&](std::size_t index, ReducedRole role, int cluster) {
    const std::uint64_t id = embedding.ids[index];
    if (!used.insert(id).second) return;
    out.entries.push_back({id, role, cluster});
  };

  for (int c = 0; c < clusters.n_clusters; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (clusters.labels[i] == c) members.push_back(i);
    }
    if (members.empty()) continue;

    // Prototypes: most central members by summed distance, medoid first.
    std::vector<std::size_t> by_centrality = members;
    std::vector<double> sums(n, 0.0);
    for (std::size_t i : members) {
      for (std::size_t j : members) {
        sums[i] += D.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    std::stable_sort(by_centrality.begin(), by_centrality.end(),
                     [&](std::size_t a, std::size_t b) { return sums[a] < sums[b]; });
    const std::size_t proto_count = std::min(options.prototypes_per_cluster, members.size());
    for (std::size_t p = 0; p < proto_count; ++p) {
      add(by_centrality[p], ReducedRole::Prototype, c);
    }

    std::size_t m = options.archetypes_per_cluster;
    if (m > members.size()) {
      out.warnings.push_back("cluster " + std::to_string(c) + ": archetype count lowered to " +
                             std::to_string(members.size()) + " (cluster size)");
      m = members.size();
    }
    if (m < 2) {
      // Degenerate cluster: its single member doubles as the archetype.
      for (std::size_t i : members) add(i, ReducedRole::Archetype, c);
      continue;
    }

    Eigen::MatrixXd X(static_cast<Eigen::Index>(members.size()), embedding.coordinates.cols());
    for (std::size_t r = 0; r < members.size(); ++r) {
      X.row(static_cast<Eigen::Index>(r)) =
          embedding.coordinates.row(static_cast<Eigen::Index>(members[r]));
    }

    const Eigen::RowVectorXd mean = X.colwise().mean();
    const double total_var = (X.rowwise() - mean).squaredNorm();
    ArchetypeModel model =
        archetypal_analysis(X, m, mix_seed(options.seed, static_cast<std::uint64_t>(c)));
    model.cluster_id = c;

    if (total_var > 0.0 && model.rss > options.fallback_rss_fraction * total_var) {
      out.fallback_clusters.push_back(c);
      out.warnings.push_back("cluster " + std::to_string(c) +
                             ": archetypal fit explains too little variance, using max-min "
                             "spread members instead");
      for (std::size_t i : max_min_spread(members, D.D, m)) {
        add(i, ReducedRole::Archetype, c);
      }
      continue;
    }

    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
      // Snap the archetype to the nearest real member so every entry is an
      // executable scenario.
      std::size_t nearest = members[0];
      double nearest_dist = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < members.size(); ++r) {
        const double d =
            (X.row(static_cast<Eigen::Index>(r)) - model.Z.row(j)).squaredNorm();
        if (d < nearest_dist) {
          nearest_dist = d;
          nearest = members[r];
        }
      }
      add(nearest, ReducedRole::Archetype, c);
    }
  }
  return out;
}

}  // namespace scenex
