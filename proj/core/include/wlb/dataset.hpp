#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <string>
#include <vector>

namespace wlb {

// Regression data for the inner problem: design matrix X (rows = samples,
// columns = features), target y, and cached squared column norms. Storage is
// either dense or CSC sparse; all solver-facing accessors hide the choice.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::string name = "");
  Dataset(Eigen::SparseMatrix<double> X, Eigen::VectorXd y,
          std::string name = "");

  Eigen::Index n() const { return y_.size(); }
  Eigen::Index d() const { return d_; }
  bool is_sparse() const { return sparse_storage_; }
  const std::string& name() const { return name_; }
  const Eigen::VectorXd& y() const { return y_; }

  // ||x_j||^2 per column, computed once at construction.
  const Eigen::VectorXd& column_norms_sq() const { return col_norms_sq_; }

  // x_j . v  (v has n entries)
  double column_dot(Eigen::Index j, const Eigen::VectorXd& v) const;

  // v += coeff * x_j
  void add_column(Eigen::Index j, double coeff, Eigen::VectorXd& v) const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& beta) const;           // X b
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& r) const;    // X'r

  // New dataset holding the given rows (in the given order).
  Dataset subset_rows(std::span<const Eigen::Index> rows) const;

  // Dense n x |cols| block of the selected columns; intended for small
  // active sets, so densification is fine even when storage is sparse.
  Eigen::MatrixXd columns_dense(std::span<const Eigen::Index> cols) const;

  const Eigen::MatrixXd& dense() const;                  // throws if sparse
  const Eigen::SparseMatrix<double>& sparse() const;     // throws if dense

 private:
  void validate() const;

  bool sparse_storage_;
  Eigen::MatrixXd dense_x_;
  Eigen::SparseMatrix<double> sparse_x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd col_norms_sq_;
  Eigen::Index d_ = 0;
  std::string name_;
};

// Column standardization used when ingesting real data. Dense datasets are
// centered to mean zero and scaled to unit variance; sparse datasets are
// scaled only (centering would fill in the zeros). Zero-variance columns are
// left unscaled. The target is never touched.
Dataset standardize_columns(const Dataset& ds);

}  // namespace wlb
