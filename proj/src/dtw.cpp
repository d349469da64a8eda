#include "scenex/dtw.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "scenex/io.hpp"

namespace scenex {

Sequence Sequence::from_scalars(std::uint64_t id, const std::vector<double>& values) {
  Sequence s;
  s.scenario_id = id;
  s.dim = 1;
  s.data = values;
  return s;
}

Sequence Sequence::from_points(std::uint64_t id, const std::vector<Vec2>& points) {
  Sequence s;
  s.scenario_id = id;
  s.dim = 2;
  s.data.reserve(points.size() * 2);
  for (const auto& p : points) {
    s.data.push_back(p.x);
    s.data.push_back(p.y);
  }
  return s;
}

namespace {

inline double point_cost(const Sequence& a, std::size_t i, const Sequence& b, std::size_t j) {
  if (a.dim == 1) return std::abs(a.data[i] - b.data[j]);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.dim; ++k) {
    const double d = a.data[i * a.dim + k] - b.data[j * b.dim + k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

double dtw(const Sequence& a, const Sequence& b, std::optional<std::size_t> band) {
  const std::size_t la = a.length();
  const std::size_t lb = b.length();
  if (la == 0 || lb == 0) throw std::invalid_argument("DTW needs non-empty sequences");
  if (a.dim != b.dim) throw std::invalid_argument("DTW sequence dimensionality mismatch");

  std::size_t w = std::max(la, lb);  // covers every cell: unbanded
  if (band) {
    const std::size_t diff = la > lb ? la - lb : lb - la;
    w = std::max(*band, diff);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(lb + 1, inf);
  std::vector<double> cur(lb + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= la; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    const std::size_t jlo = i > w ? i - w : 1;
    const std::size_t jhi = std::min(lb, i + w);
    for (std::size_t j = jlo; j <= jhi; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = point_cost(a, i - 1, b, j - 1) + best;
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

Sequence extract_trajectory(const SimulationTrace& trace, ActorId actor, std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (trace.frames.empty()) throw std::invalid_argument("empty trace");
  std::vector<Vec2> points;
  const std::size_t n = trace.frames.size();
  for (std::size_t f = 0; f < n; f += stride) {
    points.push_back(trace.state(f, actor).position);
  }
  if ((n - 1) % stride != 0) points.push_back(trace.state(n - 1, actor).position);
  return Sequence::from_points(trace.scenario_id, points);
}

Sequence downsample_scalars(std::uint64_t scenario_id, const std::vector<double>& values,
                            std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (values.empty()) throw std::invalid_argument("empty series");
  std::vector<double> out;
  const std::size_t n = values.size();
  for (std::size_t f = 0; f < n; f += stride) out.push_back(values[f]);
  if ((n - 1) % stride != 0) out.push_back(values[n - 1]);
  return Sequence::from_scalars(scenario_id, out);
}

std::string metric_dtw_kind(const std::string& metric_name) {
  return "metric_dtw:" + metric_name;
}

std::string DistanceMatrix::to_csv() const {
  std::string out = "# kind=" + kind + "\n";
  out += "id";
  for (auto id : ids) out += ',' + std::to_string(id);
  out += '\n';
  const Eigen::Index n = D.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    out += std::to_string(ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      out += ',' + format_double(D(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix DistanceMatrix::from_csv(const std::string& text) {
  DistanceMatrix m;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# kind=", 0) == 0) {
      m.kind = line.substr(7);
      continue;
    }
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.empty() || fields[0] != "id") {
        throw std::runtime_error("bad distance matrix header: " + line);
      }
      for (std::size_t i = 1; i < fields.size(); ++i) m.ids.push_back(parse_uint(fields[i]));
      const auto n = static_cast<Eigen::Index>(m.ids.size());
      m.D.resize(n, n);
      header_seen = true;
      continue;
    }
    if (row >= m.D.rows()) throw std::runtime_error("distance matrix has too many rows");
    if (fields.size() != m.ids.size() + 1) {
      throw std::runtime_error("bad distance matrix row: " + line);
    }
    if (parse_uint(fields[0]) != m.ids[static_cast<std::size_t>(row)]) {
      throw std::runtime_error("distance matrix row id mismatch: " + line);
    }
    for (std::size_t j = 0; j < m.ids.size(); ++j) {
      m.D(row, static_cast<Eigen::Index>(j)) = parse_double(fields[j + 1]);
    }
    ++row;
  }
  if (!header_seen || row != m.D.rows()) {
    throw std::runtime_error("truncated distance matrix CSV");
  }
  return m;
}

DistanceMatrix build_distance_matrix(const std::vector<Sequence>& sequences, std::string kind,
                                     std::optional<std::size_t> band,
                                     std::size_t* eval_count) {
  if (sequences.size() < 2) throw std::invalid_argument("need at least 2 sequences");
  const std::size_t n = sequences.size();
  DistanceMatrix m;
  m.kind = std::move(kind);
  m.ids.reserve(n);
  for (const auto& s : sequences) m.ids.push_back(s.scenario_id);
  m.D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> evaluations{0};
  auto run_rows = [&](unsigned worker) {
    for (std::size_t i = worker; i < n; i += workers) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = dtw(sequences[i], sequences[j], band);
        evaluations.fetch_add(1, std::memory_order_relaxed);
        m.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dist;
        m.D(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = dist;
      }
    }
  };
  if (workers <= 1) {
    run_rows(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) threads.emplace_back(run_rows, t);
    for (auto& t : threads) t.join();
  }
  if (eval_count) *eval_count = evaluations.load();
  return m;
}

}  // namespace scenex
