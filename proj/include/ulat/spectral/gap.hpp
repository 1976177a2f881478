#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ulat/error.hpp"
#include "ulat/spectral/cayley.hpp"

namespace ulat {

enum class GapMethod { Auto, Dense, Iterative };

struct SpectralOptions {
  GapMethod method = GapMethod::Auto;
  double tol = 1e-10;
  std::size_t dense_limit = 5000;
  std::size_t krylov = 200;       // basis size per restart
  std::size_t max_matvec = 20000;  // NoConvergence beyond this
  std::uint64_t seed = 0x5eed;
};

struct SpectralReport {
  std::string method;
  std::size_t vertices = 0, degree = 0;
  double lambda2 = 0, gap = 0, residual = 0, tol = 0, seconds = 0;
  std::size_t matvecs = 0;
};

namespace detail {

// y = (A / degree) x
inline void apply_normalized(const RegularGraph& g, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const double inv = 1.0 / static_cast<double>(g.degree);
  y.resize(static_cast<Eigen::Index>(g.vertices));
  for (std::size_t v = 0; v < g.vertices; ++v) {
    double s = 0;
    for (std::size_t k = 0; k < g.degree; ++k) s += x[g.at(v, k)];
    y[static_cast<Eigen::Index>(v)] = s * inv;
  }
}

inline double residual_norm(const RegularGraph& g, const Eigen::VectorXd& x, double lambda) {
  Eigen::VectorXd y;
  apply_normalized(g, x, y);
  return (y - lambda * x).norm() / x.norm();
}

inline bool connected(const RegularGraph& g) {
  if (g.vertices == 0) return false;
  std::vector<char> seen(g.vertices, 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < g.degree; ++k) {
      const auto w = g.at(v, k);
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.vertices;
}

inline SpectralReport dense_gap(const RegularGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertices);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const double inv = 1.0 / static_cast<double>(g.degree);
  for (std::size_t v = 0; v < g.vertices; ++v)
    for (std::size_t k = 0; k < g.degree; ++k) a(static_cast<Eigen::Index>(v), g.at(v, k)) += inv;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw Error(Errc::NoConvergence, "dense eigensolver failed");
  SpectralReport r;
  r.method = "dense";
  r.lambda2 = es.eigenvalues()[n - 2];
  r.residual = residual_norm(g, es.eigenvectors().col(n - 2), r.lambda2);
  return r;
}

// Lanczos on the complement of the constant vector with full
// reorthogonalisation and explicit restarts from the best Ritz vector.
inline SpectralReport lanczos_gap(const RegularGraph& g, const SpectralOptions& o) {
  const auto n = static_cast<Eigen::Index>(g.vertices);
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  auto deflate = [&](Eigen::VectorXd& x) { x -= ones.dot(x) * ones; };

  Eigen::VectorXd start(n);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = unif(rng);

  const auto m_max = static_cast<Eigen::Index>(std::min<std::size_t>(o.krylov, g.vertices - 1));
  SpectralReport r;
  r.method = "iterative";
  double best_res = INFINITY;
  while (true) {
    deflate(start);
    start.normalize();
    Eigen::MatrixXd V(n, m_max);
    std::vector<double> alpha, beta;
    V.col(0) = start;
    Eigen::VectorXd w;
    Eigen::Index m = 0;
    for (; m < m_max; ++m) {
      apply_normalized(g, V.col(m), w);
      ++r.matvecs;
      alpha.push_back(V.col(m).dot(w));
      for (int pass = 0; pass < 2; ++pass) {
        deflate(w);
        w -= V.leftCols(m + 1) * (V.leftCols(m + 1).transpose() * w);
      }
      const double b = w.norm();
      if (m + 1 == m_max || b < 1e-13) {
        ++m;
        break;
      }
      beta.push_back(b);
      V.col(m + 1) = w / b;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()[m - 1];
    Eigen::VectorXd x = V.leftCols(m) * es.eigenvectors().col(m - 1);
    deflate(x);
    x.normalize();
    const double res = residual_norm(g, x, theta);
    ++r.matvecs;
    if (res < best_res) {
      best_res = res;
      r.lambda2 = theta;
      r.residual = res;
    }
    if (res <= o.tol) return r;
    if (r.matvecs >= o.max_matvec)
      throw Error(Errc::NoConvergence, "Lanczos residual " + std::to_string(best_res) + " after " +
                                           std::to_string(r.matvecs) + " products");
    start = x;
  }
}

}  // namespace detail

/// Second largest eigenvalue of the normalised adjacency operator.
inline SpectralReport spectral_gap(const RegularGraph& g, const SpectralOptions& o = {}) {
  if (g.vertices < 2 || g.degree == 0) throw Error(Errc::PreconditionFailed, "graph needs >= 2 vertices and edges");
  if (!detail::connected(g)) throw Error(Errc::Disconnected, "graph is not connected");
  const auto t0 = std::chrono::steady_clock::now();
  const bool dense = o.method == GapMethod::Dense || (o.method == GapMethod::Auto && g.vertices <= o.dense_limit);
  SpectralReport r = dense ? detail::dense_gap(g) : detail::lanczos_gap(g, o);
  r.vertices = g.vertices;
  r.degree = g.degree;
  r.gap = 1.0 - r.lambda2;
  r.tol = o.tol;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.residual > o.tol) throw Error(Errc::NoConvergence, "residual " + std::to_string(r.residual) + " above tolerance");
  return r;
}

inline std::string spectral_csv_header() { return "ring,d,vertices,degree,method,lambda2,gap,residual,seconds"; }

inline std::string spectral_csv_row(const std::string& ring, std::size_t d, const SpectralReport& r) {
  std::ostringstream os;
  os << std::setprecision(17) << '"' << ring << '"' << ',' << d << ',' << r.vertices << ',' << r.degree << ','
     << r.method << ',' << r.lambda2 << ',' << r.gap << ',' << r.residual << ',' << std::setprecision(6)
     << r.seconds;
  return os.str();
}

}  // namespace ulat
