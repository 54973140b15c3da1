#include <doctest.h>

#include <Eigen/SparseCore>
#include <cmath>
#include <limits>
#include <vector>

#include "test_support.hpp"
#include "wlb/dataset.hpp"

using wlb::Dataset;

namespace {

Eigen::SparseMatrix<double> to_sparse(const Eigen::MatrixXd& m) {
  return m.sparseView();
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("construction validates shapes and values") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0, 0, 1;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  CHECK_THROWS_AS(Dataset(x, y), std::invalid_argument);

  Eigen::VectorXd y2(2);
  y2 << 1, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(x, y2), std::invalid_argument);

  Eigen::MatrixXd bad = x;
  bad(0, 0) = std::numeric_limits<double>::infinity();
  Eigen::VectorXd y3(2);
  y3 << 1, 2;
  CHECK_THROWS_AS(Dataset(bad, y3), std::invalid_argument);

  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)),
                  std::invalid_argument);
}

TEST_CASE("dense and sparse storage agree on the linear algebra") {
  const Eigen::MatrixXd x = wlbtest::random_matrix(13, 7, 101);
  const Eigen::VectorXd y = wlbtest::random_vector(13, 102);
  const Dataset dense(x, y);
  const Dataset sparse(to_sparse(x), y);

  CHECK(dense.n() == 13);
  CHECK(dense.d() == 7);
  CHECK(!dense.is_sparse());
  CHECK(sparse.is_sparse());

  CHECK((dense.column_norms_sq() - sparse.column_norms_sq()).cwiseAbs().maxCoeff() <
        1e-12);

  const Eigen::VectorXd beta = wlbtest::random_vector(7, 103);
  const Eigen::VectorXd r = wlbtest::random_vector(13, 104);
  CHECK((dense.multiply(beta) - sparse.multiply(beta)).norm() < 1e-12);
  CHECK((dense.multiply_transpose(r) - sparse.multiply_transpose(r)).norm() <
        1e-12);
  for (Eigen::Index j = 0; j < 7; ++j) {
    CHECK(dense.column_dot(j, r) == doctest::Approx(sparse.column_dot(j, r))
                                        .epsilon(1e-12));
  }

  Eigen::VectorXd acc_dense = r, acc_sparse = r;
  dense.add_column(2, 0.7, acc_dense);
  sparse.add_column(2, 0.7, acc_sparse);
  CHECK((acc_dense - acc_sparse).norm() < 1e-12);
}

TEST_CASE("multiply rejects mismatched lengths") {
  const Dataset ds(wlbtest::random_matrix(5, 3, 1), wlbtest::random_vector(5, 2));
  CHECK_THROWS_AS(ds.multiply(Eigen::VectorXd::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(ds.multiply_transpose(Eigen::VectorXd::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("subset_rows picks rows in order for both storages") {
  const Eigen::MatrixXd x = wlbtest::random_matrix(9, 4, 7);
  const Eigen::VectorXd y = wlbtest::random_vector(9, 8);
  const std::vector<Eigen::Index> rows{7, 0, 3};

  for (const bool use_sparse : {false, true}) {
    const Dataset ds = use_sparse ? Dataset(to_sparse(x), y) : Dataset(x, y);
    const Dataset sub = ds.subset_rows(rows);
    CHECK(sub.n() == 3);
    CHECK(sub.d() == 4);
    CHECK(sub.is_sparse() == use_sparse);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(sub.y()[static_cast<Eigen::Index>(i)] == y[rows[i]]);
      Eigen::VectorXd probe = Eigen::VectorXd::Zero(3);
      probe[static_cast<Eigen::Index>(i)] = 1.0;
      const Eigen::VectorXd row = sub.multiply_transpose(probe);
      CHECK((row.transpose() - x.row(rows[i])).norm() < 1e-12);
    }
  }

  const Dataset ds(x, y);
  const std::vector<Eigen::Index> bad{0, 9};
  CHECK_THROWS_AS(ds.subset_rows(bad), std::out_of_range);
  CHECK_THROWS_AS(ds.subset_rows(std::vector<Eigen::Index>{}),
                  std::invalid_argument);
}

TEST_CASE("columns_dense extracts the requested block") {
  const Eigen::MatrixXd x = wlbtest::random_matrix(6, 5, 11);
  const Eigen::VectorXd y = wlbtest::random_vector(6, 12);
  const std::vector<Eigen::Index> cols{4, 1};

  for (const bool use_sparse : {false, true}) {
    const Dataset ds = use_sparse ? Dataset(to_sparse(x), y) : Dataset(x, y);
    const Eigen::MatrixXd block = ds.columns_dense(cols);
    CHECK(block.rows() == 6);
    CHECK(block.cols() == 2);
    CHECK((block.col(0) - x.col(4)).norm() == 0.0);
    CHECK((block.col(1) - x.col(1)).norm() == 0.0);
  }
}

TEST_CASE("storage accessors guard against the wrong kind") {
  const Eigen::MatrixXd x = wlbtest::random_matrix(4, 2, 21);
  const Eigen::VectorXd y = wlbtest::random_vector(4, 22);
  const Dataset dense(x, y);
  const Dataset sparse(to_sparse(x), y);
  CHECK_THROWS_AS(dense.sparse(), std::logic_error);
  CHECK_THROWS_AS(sparse.dense(), std::logic_error);
  CHECK_NOTHROW(dense.dense());
  CHECK_NOTHROW(sparse.sparse());
}

TEST_CASE("dense standardization centers and scales to unit variance") {
  Eigen::MatrixXd x = wlbtest::random_matrix(20, 4, 31);
  x.col(3).setConstant(2.5);  // constant column: centered, left unscaled
  const Eigen::VectorXd y = wlbtest::random_vector(20, 32);

  const Dataset out = wlb::standardize_columns(Dataset(x, y));
  const Eigen::MatrixXd& z = out.dense();
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(std::abs(z.col(j).mean()) < 1e-12);
    CHECK(z.col(j).squaredNorm() / 20.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(z.col(3).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((out.y() - y).norm() == 0.0);  // target untouched
}

TEST_CASE("sparse standardization scales without centering") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(10, 2);
  for (Eigen::Index i = 0; i < 10; i += 2) {
    x(i, 0) = static_cast<double>(i + 1);
  }
  x(3, 1) = -4.0;
  const Eigen::VectorXd y = wlbtest::random_vector(10, 41);

  const Dataset out = wlb::standardize_columns(Dataset(to_sparse(x), y));
  CHECK(out.is_sparse());
  const Eigen::MatrixXd z = out.columns_dense(std::vector<Eigen::Index>{0, 1});

  for (Eigen::Index j = 0; j < 2; ++j) {
    // Zeros must stay zeros...
    for (Eigen::Index i = 0; i < 10; ++i) {
      if (x(i, j) == 0.0) CHECK(z(i, j) == 0.0);
    }
    // ...and the population variance (about the true mean) becomes 1.
    const double mean = z.col(j).mean();
    const double var = z.col(j).squaredNorm() / 10.0 - mean * mean;
    CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_SUITE_END();
