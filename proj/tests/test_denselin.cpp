#include <cmath>

#include "doctest.h"
#include "egr/denselin.hpp"
#include "egr/error.hpp"
#include "egr/graph.hpp"
#include "test_util.hpp"

using namespace egr;

namespace {

SymMatrix random_symmetric(int n, egr_test::Rng& rng) {
  SymMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a.at(i, j) = rng.uniform(-2, 2);
  return a;
}

}  // namespace

TEST_CASE("eigh on a diagonal matrix") {
  SymMatrix a(2);
  a.at(0, 0) = 2;
  a.at(1, 1) = 1;
  EigDecomposition e = eigh(a);
  CHECK(e.values[0] == 1.0);
  CHECK(e.values[1] == 2.0);
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 0)) <= 1e-15);
}

TEST_CASE("eigh matches closed-form Laplacian spectra") {
  // complete(4) at unit weights: n I - 11' has spectrum (0, 4, 4, 4)
  Graph k4 = generate("complete", 4);
  EigDecomposition e = eigh(laplacian(k4, std::vector<double>(6, 1.0)));
  const double expect4[] = {0, 4, 4, 4};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(e.values[i] - expect4[i]) <= 1e-12);

  // petersen at unit weights: adjacency spectrum {3, 1^5, -2^4} shifted by
  // the degree gives {0, 2^5, 5^4}
  Graph pet = generate("petersen");
  EigDecomposition ep = eigh(laplacian(pet, std::vector<double>(15, 1.0)));
  std::vector<double> expect10 = {0, 2, 2, 2, 2, 2, 5, 5, 5, 5};
  for (int i = 0; i < 10; ++i) CHECK(std::abs(ep.values[i] - expect10[i]) <= 1e-12);
}

TEST_CASE("eigh reconstruction, orthonormality, trace preservation") {
  egr_test::Rng rng(7);
  for (int n : {3, 8, 21, 50}) {
    SymMatrix a = random_symmetric(n, rng);
    EigDecomposition e = eigh(a);

    double scale = 0, trace = 0;
    for (int i = 0; i < n; ++i) {
      trace += a(i, i);
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    }

    // V diag(lambda) V' == A
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int k = 0; k < n; ++k) acc += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
        CHECK(std::abs(acc - a(i, j)) <= 1e-9 * (1 + scale));
      }

    // V'V == I
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int k = 0; k < n; ++k) acc += e.vectors(k, i) * e.vectors(k, j);
        CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }

    double sum = 0;
    for (double v : e.values) sum += v;
    CHECK(std::abs(sum - trace) <= 1e-9 * (1 + std::abs(trace)));

    // values ascending
    for (int i = 1; i < n; ++i) CHECK(e.values[i] >= e.values[i - 1]);
  }
}

TEST_CASE("solve_spd examples") {
  SymMatrix eye = SymMatrix::identity(3);
  Matrix b(3, 1);
  b(0, 0) = 4;
  b(1, 0) = -1;
  b(2, 0) = 0.5;
  Matrix x = solve_spd(eye, b);
  for (int i = 0; i < 3; ++i) CHECK(x(i, 0) == b(i, 0));

  // 2x2 inverse oracle: [[4,1],[1,3]]^-1 (1,0)' = (3, -1)/11
  SymMatrix a(2);
  a.at(0, 0) = 4;
  a.at(1, 0) = 1;
  a.at(1, 1) = 3;
  Matrix rhs(2, 1);
  rhs(0, 0) = 1;
  Matrix sol = solve_spd(a, rhs);
  CHECK(sol(0, 0) == doctest::Approx(3.0 / 11).epsilon(1e-14));
  CHECK(sol(1, 0) == doctest::Approx(-1.0 / 11).epsilon(1e-14));

  SymMatrix indef(2);
  indef.at(0, 0) = 1;
  indef.at(1, 0) = 2;
  indef.at(1, 1) = 1;
  CHECK_THROWS_AS(solve_spd(indef, rhs), Error);
  CHECK(!try_cholesky(indef).has_value());
}

TEST_CASE("solve_spd randomized backward check") {
  egr_test::Rng rng(99);
  for (int n : {2, 5, 12}) {
    // A = R'R + I is comfortably positive definite
    Matrix r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = rng.uniform(-1, 1);
    Matrix rtr = matmul(transpose(r), r);
    SymMatrix a = SymMatrix::from_dense(rtr);
    for (int i = 0; i < n; ++i) a.at(i, i) += 1.0;

    Matrix b(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = rng.uniform(-3, 3);

    Matrix x = solve_spd(a, b);
    double bmax = inf_norm(b);
    for (int j = 0; j < 2; ++j) {
      std::vector<double> col(n);
      for (int i = 0; i < n; ++i) col[i] = x(i, j);
      std::vector<double> ax = a.mul(col);
      for (int i = 0; i < n; ++i) CHECK(std::abs(ax[i] - b(i, j)) <= 1e-9 * (1 + bmax));
    }
  }
}

TEST_CASE("numerical_rank") {
  CHECK(numerical_rank(Matrix(4, 3)) == 0);
  CHECK(numerical_rank(incidence_matrix(generate("path", 5))) == 4);
  CHECK(numerical_rank(incidence_matrix(generate("cycle", 5))) == 4);
  CHECK(numerical_rank(Matrix::identity(6)) == 6);
}

TEST_CASE("svd reconstructs and exposes the nullspace") {
  egr_test::Rng rng(4);
  Matrix a(6, 4);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.uniform(-1, 1);
  for (int i = 0; i < 6; ++i) a(i, 3) = a(i, 0) + a(i, 1);  // dependent column

  SvdResult s = svd(a);
  CHECK(numerical_rank(a) == 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0;
      for (int k = 0; k < 4; ++k) acc += s.u(i, k) * s.sigma[k] * s.v(j, k);
      CHECK(std::abs(acc - a(i, j)) <= 1e-12);
    }
  // trailing right-singular vector annihilates A
  std::vector<double> null_dir(4);
  for (int j = 0; j < 4; ++j) null_dir[j] = s.v(j, 3);
  std::vector<double> an = matvec(a, null_dir);
  for (double v : an) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("svd of a wide matrix exposes the full nullspace") {
  // 2x4 of rank 2: nullspace is two-dimensional
  Matrix a(2, 4);
  a(0, 0) = 1;
  a(0, 2) = 1;
  a(1, 1) = 2;
  a(1, 3) = -1;
  SvdResult s = svd(a);
  REQUIRE(s.v.rows() == 4);
  REQUIRE(s.v.cols() == 4);
  REQUIRE(s.sigma.size() == 4);
  CHECK(s.sigma[2] == 0.0);
  // trailing right-singular vectors annihilate a, and v is orthonormal
  for (int j = 2; j < 4; ++j) {
    std::vector<double> dir(4);
    for (int i = 0; i < 4; ++i) dir[i] = s.v(i, j);
    for (double x : matvec(a, dir)) CHECK(std::abs(x) <= 1e-12);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double ip = 0;
      for (int r = 0; r < 4; ++r) ip += s.v(r, i) * s.v(r, j);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
  CHECK(numerical_rank(a) == 2);
}

TEST_CASE("lstsq_min_norm picks the minimum-norm solution") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(1, 0) = 1;  // x_2 unconstrained
  std::vector<double> x = lstsq_min_norm(a, std::vector<double>{1, 1});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(x[1]) <= 1e-13);
}
