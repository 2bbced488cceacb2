#include "relay/exact_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>

namespace relay::exact {

namespace {

constexpr std::int64_t kDenseLimit = 200;
constexpr double kResidualLimit = 1e-9;

int dir_bit(Direction d) { return d == Direction::Clockwise ? 1 : 0; }

bool excluded(const ReducedState& s) {
  // Carrier heading counter-clockwise on the same site as a clockwise walker.
  if (s.y != 0) return false;
  const Direction own = s.carrier == 0 ? s.d1 : s.d2;
  const Direction other = s.carrier == 0 ? s.d2 : s.d1;
  return own == Direction::CounterClockwise && other == Direction::Clockwise;
}

bool use_dense(std::int64_t N, StationaryMethod method) {
  return method == StationaryMethod::DenseLU || (method == StationaryMethod::Auto && N <= kDenseLimit);
}

std::vector<double> solve_dense(const ReducedChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (const auto& t : chain.row(i)) {
      M(static_cast<Eigen::Index>(t.to), static_cast<Eigen::Index>(i)) += t.probability;
    }
  }
  M -= Eigen::MatrixXd::Identity(n, n);
  // Replace one (redundant) balance equation with the normalisation.
  M.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = M.partialPivLu().solve(rhs);
  return {pi.data(), pi.data() + n};
}

std::vector<double> solve_sparse(const ReducedChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(chain.size() * 6);
  // Rows of P^T - I, except the last which becomes the normalisation sum(pi) = 1.
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    for (const auto& t : chain.row(i)) {
      const auto row = static_cast<Eigen::Index>(t.to);
      if (row != n - 1) entries.emplace_back(row, col, t.probability);
    }
    if (col != n - 1) entries.emplace_back(col, col, -1.0);
    entries.emplace_back(n - 1, col, 1.0);
  }
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(entries.begin(), entries.end());
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) {
    throw ModelError(ErrorCode::SolverSingular, "sparse LU factorisation failed");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  return {pi.data(), pi.data() + n};
}

std::vector<double> solve_power(const ReducedChain& chain) {
  const std::size_t n = chain.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& t : chain.row(i)) next[t.to] += pi[i] * t.probability;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - pi[i]));
    pi.swap(next);
    if (change < 1e-13) break;
  }
  return pi;
}

}  // namespace

ReducedChain ReducedChain::build(std::int64_t N, double epsilon) {
  validate_discrete({N, 2, epsilon});
  ReducedChain chain;
  chain.N_ = N;
  chain.epsilon_ = epsilon;
  chain.slot_to_index_.assign(static_cast<std::size_t>(8 * N), -1);

  const Direction dirs[] = {Direction::Clockwise, Direction::CounterClockwise};
  for (std::int64_t y = 0; y < N; ++y) {
    for (Direction d1 : dirs) {
      for (Direction d2 : dirs) {
        for (int i = 0; i < 2; ++i) {
          ReducedState s{y, d1, d2, i};
          if (excluded(s)) continue;
          chain.slot_to_index_[chain.slot(s)] = static_cast<std::ptrdiff_t>(chain.states_.size());
          chain.states_.push_back(s);
        }
      }
    }
  }

  chain.rows_.resize(chain.states_.size());
  for (std::size_t from = 0; from < chain.states_.size(); ++from) {
    const ReducedState& s = chain.states_[from];
    const std::int64_t y = wrap_position(s.y + sign(s.d1) - sign(s.d2), N);
    auto& row = chain.rows_[from];
    for (int flip1 = 0; flip1 < 2; ++flip1) {
      for (int flip2 = 0; flip2 < 2; ++flip2) {
        const double p = (flip1 ? epsilon : 1.0 - epsilon) * (flip2 ? epsilon : 1.0 - epsilon);
        ReducedState next{y, flip1 ? reversed(s.d1) : s.d1, flip2 ? reversed(s.d2) : s.d2, s.carrier};
        bool jump = false;
        if (excluded(next)) {
          next.carrier = 1 - next.carrier;
          jump = true;
        }
        const auto to = static_cast<std::size_t>(chain.slot_to_index_[chain.slot(next)]);
        auto it = std::find_if(row.begin(), row.end(), [&](const Transition& t) { return t.to == to; });
        if (it == row.end()) {
          row.push_back({to, p, jump});
        } else {
          it->probability += p;
        }
      }
    }
  }
  return chain;
}

std::size_t ReducedChain::slot(const ReducedState& s) const {
  return static_cast<std::size_t>(((s.y * 2 + dir_bit(s.d1)) * 2 + dir_bit(s.d2)) * 2 + s.carrier);
}

std::optional<std::size_t> ReducedChain::index_of(const ReducedState& s) const {
  if (s.y < 0 || s.y >= N_ || s.carrier < 0 || s.carrier > 1) return std::nullopt;
  const auto idx = slot_to_index_[slot(s)];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

double ReducedChain::probability(std::size_t from, std::size_t to) const {
  for (const auto& t : row(from)) {
    if (t.to == to) return t.probability;
  }
  return 0.0;
}

double ReducedChain::jump_probability(std::size_t from) const {
  double p = 0.0;
  for (const auto& t : row(from)) {
    if (t.jump) p += t.probability;
  }
  return p;
}

double stationary_residual(const ReducedChain& chain, const std::vector<double>& pi) {
  std::vector<double> image(chain.size(), 0.0);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (const auto& t : chain.row(i)) image[t.to] += pi[i] * t.probability;
  }
  double residual = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    residual = std::max(residual, std::abs(image[i] - pi[i]));
  }
  return residual;
}

std::vector<double> stationary(const ReducedChain& chain, StationaryMethod method) {
  std::vector<double> pi;
  if (method == StationaryMethod::PowerIteration) {
    pi = solve_power(chain);
  } else if (use_dense(chain.N(), method)) {
    pi = solve_dense(chain);
  } else {
    pi = solve_sparse(chain);
  }
  const double residual = stationary_residual(chain, pi);
  if (!(residual <= kResidualLimit)) {
    throw ModelError(ErrorCode::SolverSingular, "stationary residual " + std::to_string(residual));
  }
  return pi;
}

ExactValues exact_values(std::int64_t N, double epsilon, StationaryMethod method) {
  const auto chain = ReducedChain::build(N, epsilon);
  const auto pi = stationary(chain, method);
  ExactValues out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& s = chain.state(i);
    const Direction heading = s.carrier == 0 ? s.d1 : s.d2;
    out.speed += pi[i] * sign(heading);
    out.cost += pi[i] * chain.jump_probability(i);
    if (heading == Direction::Clockwise) out.direction_prob += pi[i];
  }
  return out;
}

double exact_speed(std::int64_t N, double epsilon) { return exact_values(N, epsilon).speed; }
double exact_cost(std::int64_t N, double epsilon) { return exact_values(N, epsilon).cost; }

TraceSolution solve_trace_bvp(std::int64_t N, double epsilon) {
  validate_discrete({N, 2, epsilon});
  const auto n = static_cast<std::size_t>(N);
  const double keep = 1.0 - epsilon;

  // Everything is linear in f(0); shoot with f(0) = 1 and rescale so that
  // f(N-1) = 1.
  std::vector<double> f(n), g(n);  // g[k] = g(k) for k = 0..N-2 here
  f[0] = 1.0;
  g[0] = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    f[k + 1] = (f[k] - epsilon * g[k]) / keep;
    if (k + 1 < n - 1) g[k + 1] = keep * g[k] + epsilon * f[k + 1];
  }
  const double A = 1.0 / f[n - 1];

  TraceSolution out;
  out.A = A;
  out.f.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.f[k] = A * f[k];
  // g(-1) from g(0) = (1 - eps) g(-1) + eps f(0).
  out.g.resize(n);
  out.g[0] = -epsilon * out.f[0] / keep;
  for (std::size_t k = 0; k + 1 < n; ++k) out.g[k + 1] = A * g[k];
  return out;
}

double hitting_prob_oracle(std::int64_t N, double epsilon) {
  validate_discrete({N, 2, epsilon});
  // Trace chain on gaps {0, 2, ..., 2N} x {(+1,-1), (-1,+1)}; state 2k + p
  // with p = 0 for walkers heading apart and p = 1 for heading together.
  const auto levels = static_cast<std::size_t>(N) + 1;
  const std::size_t states = 2 * levels;
  auto id = [](std::size_t k, std::size_t p) { return 2 * k + p; };

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(states),
                                            static_cast<Eigen::Index>(states));
  for (std::size_t k = 0; k < levels; ++k) {
    for (std::size_t p = 0; p < 2; ++p) {
      const auto from = static_cast<Eigen::Index>(id(k, p));
      const bool boundary = k == 0 || k == levels - 1;
      if (boundary) {
        P(from, from) = 1.0;
        continue;
      }
      const std::size_t next = p == 0 ? k + 1 : k - 1;
      P(from, static_cast<Eigen::Index>(id(next, p))) += 1.0 - epsilon;
      P(from, static_cast<Eigen::Index>(id(next, 1 - p))) += epsilon;
    }
  }

  // Absorption probabilities into the 2N level over the transient states.
  std::vector<std::size_t> transient;
  for (std::size_t k = 1; k + 1 < levels; ++k) {
    transient.push_back(id(k, 0));
    transient.push_back(id(k, 1));
  }
  const auto t = static_cast<Eigen::Index>(transient.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(t);
  const auto top0 = static_cast<Eigen::Index>(id(levels - 1, 0));
  const auto top1 = static_cast<Eigen::Index>(id(levels - 1, 1));

  Eigen::VectorXd h;
  if (N <= kDenseLimit) {
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(t, t);
    for (Eigen::Index a = 0; a < t; ++a) {
      const auto row = static_cast<Eigen::Index>(transient[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < t; ++b) {
        system(a, b) -= P(row, static_cast<Eigen::Index>(transient[static_cast<std::size_t>(b)]));
      }
      rhs(a) = P(row, top0) + P(row, top1);
    }
    h = system.partialPivLu().solve(rhs);
  } else {
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<Eigen::Index> position(states, -1);
    for (Eigen::Index a = 0; a < t; ++a) position[transient[static_cast<std::size_t>(a)]] = a;
    for (Eigen::Index a = 0; a < t; ++a) {
      const auto row = static_cast<Eigen::Index>(transient[static_cast<std::size_t>(a)]);
      entries.emplace_back(a, a, 1.0);
      for (std::size_t col = 0; col < states; ++col) {
        const double p = P(row, static_cast<Eigen::Index>(col));
        if (p != 0.0 && position[col] >= 0) entries.emplace_back(a, position[col], -p);
      }
      rhs(a) = P(row, top0) + P(row, top1);
    }
    Eigen::SparseMatrix<double> system(t, t);
    system.setFromTriplets(entries.begin(), entries.end());
    system.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success) {
      throw ModelError(ErrorCode::SolverSingular, "trace chain factorisation failed");
    }
    h = lu.solve(rhs);
  }
  if (!h.allFinite()) throw ModelError(ErrorCode::SolverSingular, "trace chain solve not finite");

  // First step out of (0, +1, -1): the gap is 0 only at time 0, so the start
  // is not absorbing even though level 0 is.
  auto value = [&](std::size_t k, std::size_t p) {
    if (k == 0) return 0.0;
    if (k == levels - 1) return 1.0;
    const auto it = std::find(transient.begin(), transient.end(), id(k, p));
    return h(std::distance(transient.begin(), it));
  };
  return (1.0 - epsilon) * value(1, 0) + epsilon * value(1, 1);
}

}  // namespace relay::exact
