#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "wlb/libsvm.hpp"
#include "wlb/rng.hpp"

using wlb::Dataset;
using wlb::LibsvmParseError;
using wlb::parse_libsvm;

namespace {

Dataset parse(const std::string& text, Eigen::Index declared_d = 0) {
  std::istringstream in(text);
  return parse_libsvm(in, declared_d, "test");
}

}  // namespace

TEST_SUITE_BEGIN("libsvm");

TEST_CASE("well-formed rows become sparse rows with 1-based indices") {
  const Dataset ds = parse(
      "1.5 1:2.0 3:-4.5\n"
      "-1 2:0.25\n"
      "0.0 1:1 2:2 3:3\n");
  CHECK(ds.n() == 3);
  CHECK(ds.d() == 3);
  CHECK(ds.is_sparse());
  CHECK(ds.y()[0] == 1.5);
  CHECK(ds.y()[1] == -1.0);
  CHECK(ds.y()[2] == 0.0);

  const Eigen::MatrixXd X(ds.sparse());
  CHECK(X(0, 0) == 2.0);
  CHECK(X(0, 1) == 0.0);
  CHECK(X(0, 2) == -4.5);
  CHECK(X(1, 1) == 0.25);
  CHECK(X(2, 0) == 1.0);
  CHECK(X(2, 1) == 2.0);
  CHECK(X(2, 2) == 3.0);
}

TEST_CASE("bare labels, plus signs, comments, blanks, and CRLF") {
  const Dataset ds = parse(
      "# full-line comment\n"
      "\n"
      "+2.5 1:+0.5 2:1e-3   # trailing comment\n"
      "3.0\r\n"
      "   \t \n"
      "-0.5 2:-2\r\n");
  CHECK(ds.n() == 3);
  CHECK(ds.d() == 2);
  CHECK(ds.y()[0] == 2.5);
  CHECK(ds.y()[1] == 3.0);
  CHECK(ds.y()[2] == -0.5);

  const Eigen::MatrixXd X(ds.sparse());
  CHECK(X(0, 0) == 0.5);
  CHECK(X(0, 1) == 1e-3);
  CHECK(X.row(1).cwiseAbs().sum() == 0.0);  // bare label row is all zeros
  CHECK(X(2, 1) == -2.0);
}

TEST_CASE("explicit zero entries are dropped from storage") {
  const Dataset ds = parse("1 1:0.0 2:5 3:0\n2 1:1\n");
  CHECK(ds.sparse().nonZeros() == 2);
  const Eigen::MatrixXd X(ds.sparse());
  CHECK(X(0, 1) == 5.0);
  CHECK(X(1, 0) == 1.0);
}

TEST_CASE("declared width pads trailing zero columns but never shrinks") {
  const Dataset padded = parse("1 1:1\n2 2:1\n", 6);
  CHECK(padded.d() == 6);

  const Dataset wider = parse("1 1:1 4:2\n", 2);
  CHECK(wider.d() == 4);  // max index seen wins when larger
}

TEST_CASE("parse errors carry the offending line number") {
  auto expect_error = [](const std::string& text, std::size_t line,
                         const std::string& fragment) {
    std::istringstream in(text);
    try {
      parse_libsvm(in);
      FAIL_CHECK("expected LibsvmParseError for: " << text);
    } catch (const LibsvmParseError& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };

  expect_error("1 1:1\n2 3:1 2:4\n", 2, "strictly increasing");
  expect_error("1 2:1 2:4\n", 1, "strictly increasing");
  expect_error("1 0:1\n", 1, "positive");
  expect_error("# header\n\n1 -3:1\n", 3, "positive");
  expect_error("abc 1:1\n", 1, "label");
  expect_error("1 1:xyz\n", 1, "value");
  expect_error("1 1:\n", 1, "index:value");
  expect_error("1 :5\n", 1, "index:value");
  expect_error("1 nocolon\n", 1, "index:value");
  expect_error("inf 1:1\n", 1, "not finite");
  expect_error("1 1:nan\n", 1, "not finite");
  expect_error("# only comments\n\n", 2, "no data rows");
  expect_error("1\n2\n", 2, "no feature index");
}

TEST_CASE("write then parse round-trips values exactly") {
  const Eigen::MatrixXd X = wlbtest::random_matrix(14, 6, 321);
  const Eigen::VectorXd y = wlbtest::random_vector(14, 654);
  const Dataset dense(X, y, "dense");

  std::ostringstream out;
  wlb::write_libsvm(out, dense);
  const Dataset back = parse(out.str(), dense.d());
  CHECK(back.n() == dense.n());
  CHECK(back.d() == dense.d());
  CHECK((back.y() - y).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((Eigen::MatrixXd(back.sparse()) - X).lpNorm<Eigen::Infinity>() == 0.0);

  // Sparse round trip, including an all-zero row written as a bare label.
  Eigen::SparseMatrix<double> S(3, 4);
  S.insert(0, 0) = 1.25;
  S.insert(2, 3) = -8.0;
  S.makeCompressed();
  const Dataset sparse(S, Eigen::VectorXd::LinSpaced(3, 1.0, 3.0), "sparse");
  std::ostringstream out2;
  wlb::write_libsvm(out2, sparse);
  const Dataset back2 = parse(out2.str(), 4);
  CHECK(back2.sparse().nonZeros() == 2);
  CHECK((Eigen::MatrixXd(back2.sparse()) - Eigen::MatrixXd(S))
            .lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("registry lists the five known datasets with fixed shapes") {
  const auto& reg = wlb::dataset_registry();
  REQUIRE(reg.size() == 5);

  const auto* bc = wlb::find_registry_entry("breast_cancer");
  REQUIRE(bc != nullptr);
  CHECK(bc->n == 683);
  CHECK(bc->d == 10);
  CHECK(bc->bounds_kind == wlb::BoundsKind::real);

  const auto* dia = wlb::find_registry_entry("diabetes");
  REQUIRE(dia != nullptr);
  CHECK(dia->n == 768);
  CHECK(dia->d == 8);

  const auto* leu = wlb::find_registry_entry("leukemia");
  REQUIRE(leu != nullptr);
  CHECK(leu->n == 72);
  CHECK(leu->d == 7129);

  const auto* dna = wlb::find_registry_entry("dna");
  REQUIRE(dna != nullptr);
  CHECK(dna->n == 2000);
  CHECK(dna->d == 180);

  const auto* rcv1 = wlb::find_registry_entry("rcv1");
  REQUIRE(rcv1 != nullptr);
  CHECK(rcv1->n == 20242);
  CHECK(rcv1->d == 19959);
  CHECK(rcv1->bounds_kind == wlb::BoundsKind::rcv1_like);
  CHECK(rcv1->keep_sparse);

  CHECK(wlb::find_registry_entry("nope") == nullptr);
}

TEST_CASE("loading a registered file validates, standardizes, and bounds") {
  wlbtest::TempDir dir("libsvm");

  // A small stand-in with registry-style metadata.
  const Eigen::Index n = 40, d = 6;
  const Eigen::MatrixXd X = wlbtest::random_matrix(n, d, 2024);
  const Eigen::VectorXd y = wlbtest::random_vector(n, 4202);
  {
    std::ofstream out(dir.path() / "tiny.libsvm");
    wlb::write_libsvm(out, Dataset(X, y, "tiny"));
  }

  wlb::DatasetRegistryEntry entry;
  entry.name = "tiny";
  entry.n = n;
  entry.d = d;
  entry.bounds_kind = wlb::BoundsKind::real;
  entry.source = "tiny.libsvm";

  const wlb::Benchmark bench = wlb::load_real_benchmark(entry, dir.path());
  CHECK(bench.n() == n);
  CHECK(bench.d() == d);
  CHECK(bench.name() == "tiny");
  CHECK_FALSE(bench.dataset().is_sparse());  // narrow data densifies
  CHECK_FALSE(bench.reference_loss().has_value());
  CHECK_FALSE(bench.beta_true().has_value());

  // Dense standardization: centered, unit variance.
  const auto& Xs = bench.dataset().dense();
  for (Eigen::Index j = 0; j < d; ++j) {
    CHECK(std::abs(Xs.col(j).mean()) <= 1e-12);
    CHECK(Xs.col(j).squaredNorm() / static_cast<double>(n) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  // Real-data bounds: 5 decades below lambda_max.
  const double lam_max = wlb::compute_lambda_max(bench.dataset());
  CHECK(bench.lam_max() == doctest::Approx(lam_max).epsilon(1e-12));
  CHECK(bench.lam_min() ==
        doctest::Approx(lam_max - 5.0 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("declared shapes are enforced when loading registered data") {
  wlbtest::TempDir dir("libsvm_shape");
  {
    std::ofstream out(dir.path() / "rows.libsvm");
    out << "1 1:1 3:2\n-1 2:4\n0.5 1:-2 2:1 3:3\n";
  }

  wlb::DatasetRegistryEntry entry;
  entry.name = "rows";
  entry.source = "rows.libsvm";
  entry.standardize = false;

  entry.n = 3;
  entry.d = 5;  // wider than anything seen: pads zero columns
  const wlb::Benchmark ok = wlb::load_real_benchmark(entry, dir.path());
  CHECK(ok.n() == 3);
  CHECK(ok.d() == 5);
  CHECK(ok.dataset().dense().col(4).cwiseAbs().sum() == 0.0);

  entry.n = 4;  // wrong row count
  CHECK_THROWS_WITH_AS(wlb::load_real_benchmark(entry, dir.path()),
                       doctest::Contains("expected (4, 5)"),
                       std::runtime_error);

  entry.n = 3;
  entry.d = 2;  // narrower than the file: an index overran the declaration
  CHECK_THROWS_AS(wlb::load_real_benchmark(entry, dir.path()),
                  std::runtime_error);

  entry.d = 5;
  entry.source = "missing.libsvm";
  CHECK_THROWS_WITH_AS(wlb::load_real_benchmark(entry, dir.path()),
                       doctest::Contains("cannot open"), std::runtime_error);
}

TEST_CASE("wide datasets keep sparse storage and scale-only standardization") {
  wlbtest::TempDir dir("libsvm_sparse");

  // 30 rows over 600 columns: above the densification cutoff.
  std::ostringstream text;
  wlb::RandomStream rng(wlb::SeedSequence(7).next());
  for (int i = 0; i < 30; ++i) {
    text << rng.normal();
    for (int j = 1; j <= 600; j += 37) {
      text << ' ' << j << ':' << rng.uniform(-2.0, 2.0);
    }
    text << '\n';
  }
  {
    std::ofstream out(dir.path() / "wide.libsvm");
    out << text.str();
  }

  wlb::DatasetRegistryEntry entry;
  entry.name = "wide";
  entry.n = 30;
  entry.d = 600;
  entry.source = "wide.libsvm";

  const wlb::Benchmark bench = wlb::load_real_benchmark(entry, dir.path());
  CHECK(bench.dataset().is_sparse());  // width alone forces sparse storage

  // Scale-only standardization: zero entries stay zero, population variance
  // of every touched column is one.
  const Eigen::MatrixXd Xs(bench.dataset().sparse());
  for (Eigen::Index j = 0; j < Xs.cols(); ++j) {
    const Eigen::VectorXd col = Xs.col(j);
    if (col.cwiseAbs().sum() == 0.0) continue;
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / 30.0;
    CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
  }

  // keep_sparse skips densification even for narrow data.
  {
    std::ofstream out(dir.path() / "narrow.libsvm");
    out << "1 1:1\n-1 2:1\n1 1:2 2:-1\n";
  }
  wlb::DatasetRegistryEntry narrow;
  narrow.name = "narrow";
  narrow.n = 3;
  narrow.d = 2;
  narrow.source = "narrow.libsvm";
  narrow.standardize = false;
  narrow.keep_sparse = true;
  const wlb::Benchmark nb = wlb::load_real_benchmark(narrow, dir.path());
  CHECK(nb.dataset().is_sparse());
}

TEST_SUITE_END();
