#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bbm/elements.hpp"
#include "bbm/errors.hpp"

namespace bbm {

namespace {

struct Rule1d {
  Eigen::VectorXd nodes;    // on [-1,1]
  Eigen::VectorXd weights;
};

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1].
Rule1d gauss_jacobi(int n, double alpha, double beta) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * i + ab;
    jacobi(i, i) = (s == 0.0) ? (beta - alpha) / (ab + 2.0)
                              : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (i + 1 < n) {
      const double m = i + 1.0;
      const double t = 2.0 * m + ab;
      const double off = std::sqrt(4.0 * m * (m + alpha) * (m + beta) * (m + ab) /
                                   (t * t * (t + 1.0) * (t - 1.0)));
      jacobi(i, i + 1) = off;
      jacobi(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  Rule1d rule;
  rule.nodes = eig.eigenvalues();
  rule.weights = mu0 * eig.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace

EdgeQuadrature gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one point");
  const Rule1d r = gauss_jacobi(n, 0.0, 0.0);
  EdgeQuadrature q;
  q.exactness = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    q.points.push_back(0.5 * (r.nodes[i] + 1.0));
    q.weights.push_back(0.5 * r.weights[i]);
  }
  return q;
}

EdgeQuadrature edge_quadrature(int exactness_degree) {
  if (exactness_degree < 0) throw ConfigError("edge_quadrature: negative exactness");
  return gauss_legendre(exactness_degree / 2 + 1);
}

TriangleQuadrature triangle_quadrature(int exactness_degree) {
  if (exactness_degree < 0 || exactness_degree > kMaxTriangleExactness) {
    throw ConfigError("triangle_quadrature: exactness " + std::to_string(exactness_degree) +
                      " outside [0, " + std::to_string(kMaxTriangleExactness) + "]");
  }
  // (x, y) = (s, (1 - s) t); the factor (1 - s) of the Jacobian is absorbed
  // into a Gauss-Jacobi(1,0) rule in s.
  const int n = exactness_degree / 2 + 1;
  const Rule1d rs = gauss_jacobi(n, 1.0, 0.0);
  const Rule1d rt = gauss_jacobi(n, 0.0, 0.0);
  TriangleQuadrature q;
  q.exactness = exactness_degree;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (rs.nodes[i] + 1.0);
    const double ws = 0.25 * rs.weights[i];
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (rt.nodes[j] + 1.0);
      q.points.emplace_back(s, (1.0 - s) * t);
      q.weights.push_back(ws * 0.5 * rt.weights[j]);
    }
  }
  return q;
}

}  // namespace bbm
