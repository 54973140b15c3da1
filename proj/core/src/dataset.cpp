#include "wlb/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace wlb {

namespace {

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::string name)
    : sparse_storage_(false),
      dense_x_(std::move(X)),
      y_(std::move(y)),
      d_(dense_x_.cols()),
      name_(std::move(name)) {
  if (dense_x_.rows() != y_.size()) {
    throw std::invalid_argument("row count of X does not match length of y");
  }
  if (!dense_x_.allFinite()) {
    throw std::invalid_argument("design matrix contains a non-finite value");
  }
  validate();
  col_norms_sq_ = dense_x_.colwise().squaredNorm();
}

Dataset::Dataset(Eigen::SparseMatrix<double> X, Eigen::VectorXd y,
                 std::string name)
    : sparse_storage_(true),
      sparse_x_(std::move(X)),
      y_(std::move(y)),
      d_(sparse_x_.cols()),
      name_(std::move(name)) {
  if (sparse_x_.rows() != y_.size()) {
    throw std::invalid_argument("row count of X does not match length of y");
  }
  sparse_x_.makeCompressed();
  col_norms_sq_.setZero(d_);
  for (Eigen::Index j = 0; j < d_; ++j) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_x_, j); it; ++it) {
      if (!std::isfinite(it.value())) {
        throw std::invalid_argument("design matrix contains a non-finite value");
      }
      s += it.value() * it.value();
    }
    col_norms_sq_[j] = s;
  }
  validate();
}

void Dataset::validate() const {
  if (n() < 1 || d_ < 1) {
    throw std::invalid_argument("dataset must have at least one row and one column");
  }
  check_finite(y_, "target vector");
}

double Dataset::column_dot(Eigen::Index j, const Eigen::VectorXd& v) const {
  if (sparse_storage_) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_x_, j); it; ++it) {
      s += it.value() * v[it.row()];
    }
    return s;
  }
  return dense_x_.col(j).dot(v);
}

void Dataset::add_column(Eigen::Index j, double coeff, Eigen::VectorXd& v) const {
  if (sparse_storage_) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_x_, j); it; ++it) {
      v[it.row()] += coeff * it.value();
    }
    return;
  }
  v += coeff * dense_x_.col(j);
}

Eigen::VectorXd Dataset::multiply(const Eigen::VectorXd& beta) const {
  if (beta.size() != d_) {
    throw std::invalid_argument("coefficient vector has wrong length");
  }
  return sparse_storage_ ? Eigen::VectorXd(sparse_x_ * beta)
                         : Eigen::VectorXd(dense_x_ * beta);
}

Eigen::VectorXd Dataset::multiply_transpose(const Eigen::VectorXd& r) const {
  if (r.size() != n()) {
    throw std::invalid_argument("residual vector has wrong length");
  }
  return sparse_storage_ ? Eigen::VectorXd(sparse_x_.transpose() * r)
                         : Eigen::VectorXd(dense_x_.transpose() * r);
}

Dataset Dataset::subset_rows(std::span<const Eigen::Index> rows) const {
  if (rows.empty()) {
    throw std::invalid_argument("row subset is empty");
  }
  Eigen::VectorXd sub_y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= n()) {
      throw std::out_of_range("row index out of range");
    }
    sub_y[static_cast<Eigen::Index>(i)] = y_[rows[i]];
  }

  if (sparse_storage_) {
    // Row-major intermediate so row gathering is cheap, then back to CSC.
    Eigen::SparseMatrix<double, Eigen::RowMajor> row_major(sparse_x_);
    Eigen::SparseMatrix<double, Eigen::RowMajor> picked(
        static_cast<Eigen::Index>(rows.size()), d_);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(sparse_x_.nonZeros()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator
               it(row_major, rows[i]);
           it; ++it) {
        trips.emplace_back(static_cast<Eigen::Index>(i), it.col(), it.value());
      }
    }
    picked.setFromTriplets(trips.begin(), trips.end());
    return Dataset(Eigen::SparseMatrix<double>(picked), std::move(sub_y), name_);
  }

  Eigen::MatrixXd sub_x(static_cast<Eigen::Index>(rows.size()), d_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sub_x.row(static_cast<Eigen::Index>(i)) = dense_x_.row(rows[i]);
  }
  return Dataset(std::move(sub_x), std::move(sub_y), name_);
}

Eigen::MatrixXd Dataset::columns_dense(std::span<const Eigen::Index> cols) const {
  Eigen::MatrixXd out(n(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Eigen::Index j = cols[c];
    if (j < 0 || j >= d_) {
      throw std::out_of_range("column index out of range");
    }
    if (sparse_storage_) {
      out.col(static_cast<Eigen::Index>(c)).setZero();
      for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_x_, j); it; ++it) {
        out(it.row(), static_cast<Eigen::Index>(c)) = it.value();
      }
    } else {
      out.col(static_cast<Eigen::Index>(c)) = dense_x_.col(j);
    }
  }
  return out;
}

const Eigen::MatrixXd& Dataset::dense() const {
  if (sparse_storage_) {
    throw std::logic_error("dataset uses sparse storage");
  }
  return dense_x_;
}

const Eigen::SparseMatrix<double>& Dataset::sparse() const {
  if (!sparse_storage_) {
    throw std::logic_error("dataset uses dense storage");
  }
  return sparse_x_;
}

Dataset standardize_columns(const Dataset& ds) {
  const Eigen::Index n = ds.n();
  const Eigen::Index d = ds.d();
  const double dn = static_cast<double>(n);

  if (!ds.is_sparse()) {
    Eigen::MatrixXd X = ds.dense();
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mean = X.col(j).mean();
      X.col(j).array() -= mean;
      const double sd = std::sqrt(X.col(j).squaredNorm() / dn);
      if (sd > 0.0) {
        X.col(j) /= sd;
      }
    }
    return Dataset(std::move(X), ds.y(), ds.name());
  }

  // Sparse path: dividing by the (mean-aware) standard deviation but skipping
  // the centering step preserves sparsity.
  Eigen::SparseMatrix<double> X = ds.sparse();
  for (Eigen::Index j = 0; j < d; ++j) {
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(X, j); it; ++it) {
      sum += it.value();
      sum_sq += it.value() * it.value();
    }
    const double mean = sum / dn;
    const double var = sum_sq / dn - mean * mean;
    if (var > 0.0) {
      const double inv_sd = 1.0 / std::sqrt(var);
      for (Eigen::SparseMatrix<double>::InnerIterator it(X, j); it; ++it) {
        it.valueRef() *= inv_sd;
      }
    }
  }
  return Dataset(std::move(X), ds.y(), ds.name());
}

}  // namespace wlb
