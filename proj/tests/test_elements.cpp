#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bbm/elements.hpp"
#include "bbm/errors.hpp"

using namespace bbm;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Integral of x^a y^b over the reference triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

Vec2 random_point(std::mt19937& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(gen), y = u(gen);
  if (x + y > 1.0) {
    x = 1.0 - x;
    y = 1.0 - y;
  }
  return {x, y};
}

}  // namespace

TEST(Elements, NodeCountsAndDelta) {
  for (int d = 1; d <= 4; ++d) {
    const LagrangeElement e = lagrange_element(d);
    ASSERT_EQ(e.num_nodes(), (d + 1) * (d + 2) / 2);
    for (int j = 0; j < e.num_nodes(); ++j) {
      const Eigen::VectorXd v = e.values(e.nodes()[j]);
      for (int i = 0; i < e.num_nodes(); ++i) EXPECT_NEAR(v[i], i == j ? 1.0 : 0.0, 1e-13) << d;
    }
  }
}

TEST(Elements, PartitionOfUnity) {
  std::mt19937 gen(7);
  for (int d = 1; d <= 4; ++d) {
    const LagrangeElement e = lagrange_element(d);
    for (int k = 0; k < 50; ++k) {
      const Vec2 p = random_point(gen);
      EXPECT_NEAR(e.values(p).sum(), 1.0, 1e-13);
      const Eigen::Vector2d gsum = e.gradients(p).colwise().sum();
      EXPECT_NEAR(gsum.norm(), 0.0, 1e-12);
    }
  }
}

TEST(Elements, LinearAtCentroid) {
  const Eigen::VectorXd v = lagrange_element(1).values(Vec2(1.0 / 3, 1.0 / 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(v[i], 1.0 / 3, 1e-15);
}

TEST(Elements, QuadraticVertexVanishesOnOppositeMidpoint) {
  const LagrangeElement e = lagrange_element(2);
  EXPECT_NEAR(e.values(Vec2(0.5, 0.5))[0], 0.0, 1e-14);
  EXPECT_NEAR(e.values(Vec2(0.0, 0.5))[1], 0.0, 1e-14);
  EXPECT_NEAR(e.values(Vec2(0.5, 0.0))[2], 0.0, 1e-14);
}

TEST(Elements, EdgeNodesRunAlongEdge) {
  for (int d = 1; d <= 4; ++d) {
    const LagrangeElement e = lagrange_element(d);
    for (int k = 0; k < 3; ++k) {
      const auto nodes = e.edge_nodes(k);
      ASSERT_EQ(static_cast<int>(nodes.size()), d + 1);
      EXPECT_EQ(nodes.front(), k);
      EXPECT_EQ(nodes.back(), (k + 1) % 3);
    }
    EXPECT_EQ(e.num_interior_nodes(), (d - 1) * (d - 2) / 2);
  }
}

TEST(Elements, PolynomialReproduction) {
  std::mt19937 gen(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int d = 1; d <= 4; ++d) {
    const LagrangeElement e = lagrange_element(d);
    // random polynomial of total degree d
    std::vector<std::tuple<int, int, double>> terms;
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) terms.emplace_back(a, b, n(gen));
    }
    auto poly = [&](const Vec2& p) {
      double s = 0.0;
      for (auto [a, b, c] : terms) s += c * std::pow(p.x(), a) * std::pow(p.y(), b);
      return s;
    };
    Eigen::VectorXd coeffs(e.num_nodes());
    for (int i = 0; i < e.num_nodes(); ++i) coeffs[i] = poly(e.nodes()[i]);
    for (int k = 0; k < 20; ++k) {
      const Vec2 p = random_point(gen);
      EXPECT_NEAR(e.values(p).dot(coeffs), poly(p), 1e-12);
    }
  }
}

TEST(Elements, UnsupportedDegree) {
  EXPECT_THROW(lagrange_element(0), ConfigError);
  EXPECT_THROW(lagrange_element(5), ConfigError);
}

TEST(Quadrature, Basics) {
  const auto q1 = triangle_quadrature(1);
  double s = 0.0;
  for (double w : q1.weights) s += w;
  EXPECT_NEAR(s, 0.5, 1e-15);
  const auto q2 = triangle_quadrature(2);
  double ix2 = 0.0;
  for (int i = 0; i < q2.size(); ++i) ix2 += q2.weights[i] * q2.points[i].x() * q2.points[i].x();
  EXPECT_NEAR(ix2, 1.0 / 12.0, 1e-15);
  EXPECT_THROW(triangle_quadrature(13), ConfigError);
  EXPECT_THROW(triangle_quadrature(-1), ConfigError);
}

TEST(Quadrature, MonomialTable) {
  for (int q = 0; q <= kMaxTriangleExactness; ++q) {
    const auto rule = triangle_quadrature(q);
    for (double w : rule.weights) EXPECT_GT(w, 0.0);
    for (int a = 0; a <= q; ++a) {
      for (int b = 0; a + b <= q; ++b) {
        double s = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
          s += rule.weights[i] * std::pow(rule.points[i].x(), a) * std::pow(rule.points[i].y(), b);
        }
        EXPECT_NEAR(s, monomial_integral(a, b), 1e-14) << "q=" << q << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(Quadrature, EdgeRules) {
  const auto g1 = gauss_legendre(1);
  EXPECT_NEAR(g1.weights[0] * g1.points[0], 0.5, 1e-15);
  const auto g2 = gauss_legendre(2);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) s += g2.weights[i] * std::pow(g2.points[i], 3);
  EXPECT_NEAR(s, 0.25, 1e-15);
  for (int n = 1; n <= 8; ++n) {
    const auto g = gauss_legendre(n);
    for (double w : g.weights) EXPECT_GT(w, 0.0);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double m = 0.0;
      for (int i = 0; i < n; ++i) m += g.weights[i] * std::pow(g.points[i], k);
      EXPECT_NEAR(m, 1.0 / (k + 1), 1e-14) << n << " " << k;
    }
  }
  EXPECT_GE(edge_quadrature(7).exactness, 7);
}
