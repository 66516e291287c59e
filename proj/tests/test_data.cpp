#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "otl/data.hpp"
#include "otl/random.hpp"
#include "otl/synth.hpp"

using namespace otl;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

// Multiset fingerprint of a dataset, order-independent. Scalar loop on
// purpose: vectorized reductions round differently per column alignment.
std::multiset<std::pair<double, int>> fingerprint(const Dataset& d) {
  std::multiset<std::pair<double, int>> s;
  for (int i = 0; i < d.size(); ++i) {
    double key = 31.0 * d.X(0, i);
    for (int j = 0; j < d.dim(); ++j) key += d.X(j, i);
    s.insert({key, d.labels[i]});
  }
  return s;
}

}  // namespace

TEST_CASE("load_dataset parses rows and infers dim and K") {
  const auto path = write_temp("otl_basic.csv", "1.0,2.0,1\n3.0,4.0,2\n5.0,6.0,1\n");
  const Dataset d = load_dataset(path);
  CHECK(d.dim() == 2);
  CHECK(d.size() == 3);
  CHECK(d.num_classes == 2);
  CHECK(d.X(0, 0) == 1.0);
  CHECK(d.labels[0] == 0);  // 1-based in file, 0-based internally
  CHECK(d.labels[1] == 1);
}

TEST_CASE("load_dataset rejects an empty file") {
  const auto path = write_temp("otl_empty.csv", "");
  CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("empty dataset"),
                       std::runtime_error);
}

TEST_CASE("load_dataset names the row on width mismatch") {
  const auto path = write_temp("otl_width.csv", "1,2,3,1\n1,2,1\n");
  CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("row 2"),
                       std::runtime_error);
}

TEST_CASE("load_dataset respects a class count override") {
  const auto path = write_temp("otl_k.csv", "1,2,1\n3,4,2\n");
  CHECK(load_dataset(path, false, 5).num_classes == 5);
  CHECK_THROWS(load_dataset(path, false, 1));
}

TEST_CASE("save/load round trip") {
  const auto path = write_temp("otl_rt.csv", "");
  SyntheticSpec spec;
  spec.num_sources = 1;
  spec.dim = 4;
  spec.per_class_count = 5;
  spec.target_per_class = 5;
  const Dataset d = gen_synthetic(spec).target;
  save_dataset(d, path);
  const Dataset d2 = load_dataset(path);
  CHECK(d2.size() == d.size());
  CHECK((d2.X - d.X).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((d2.labels - d.labels).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("split_target sizes and determinism") {
  SyntheticSpec spec;
  spec.num_sources = 1;
  spec.dim = 3;
  spec.classes = 2;
  spec.target_per_class = 50;  // 100 total
  const Dataset d = gen_synthetic(spec).target;

  const TargetSplit a = split_target(d, 0.3, 7);
  CHECK(a.unlabeled.size() == 30);
  CHECK(a.online_stream.size() == 70);

  const TargetSplit b = split_target(d, 0.3, 7);
  CHECK(a.unlabeled.X == b.unlabeled.X);
  CHECK(a.online_stream.X == b.online_stream.X);

  // recombining reproduces the original multiset
  auto combined = fingerprint(a.unlabeled);
  for (auto& e : fingerprint(a.online_stream)) combined.insert(e);
  CHECK(combined == fingerprint(d));

  CHECK_THROWS(split_target(d, 0.0, 1));
  CHECK_THROWS(split_target(d, 1.0, 1));
}

TEST_CASE("different seeds give different partitions") {
  SyntheticSpec spec;
  spec.num_sources = 1;
  spec.dim = 2;
  spec.classes = 2;
  spec.target_per_class = 5;  // 10 instances
  const Dataset d = gen_synthetic(spec).target;
  const TargetSplit s1 = split_target(d, 0.5, 1);
  const TargetSplit s2 = split_target(d, 0.5, 2);
  CHECK(s1.unlabeled.X != s2.unlabeled.X);
}

TEST_CASE("permute_stream determinism and multiset preservation") {
  SyntheticSpec spec;
  spec.num_sources = 1;
  spec.dim = 3;
  spec.classes = 3;
  spec.target_per_class = 20;
  const Dataset d = gen_synthetic(spec).target;
  const TargetSplit split = split_target(d, 0.3, 5);

  const Dataset p1 = permute_stream(split, 11);
  const Dataset p2 = permute_stream(split, 11);
  CHECK(p1.X == p2.X);
  CHECK(p1.labels == p2.labels);

  const Dataset p3 = permute_stream(split, 12);
  CHECK(fingerprint(p3) == fingerprint(split.online_stream));
}

TEST_CASE("permute_stream on a single instance is the identity") {
  Dataset d;
  d.X = Matrix::Constant(2, 1, 3.0);
  d.labels = IntVector::Zero(1);
  d.num_classes = 1;
  TargetSplit split;
  split.online_stream = d;
  const Dataset p = permute_stream(split, 99);
  CHECK(p.X == d.X);
}

TEST_CASE("zscore standardizes columns and is idempotent") {
  const auto in = write_temp("otl_z_in.csv", "1,7,1\n2,7,1\n3,7,2\n");
  const auto out1 = write_temp("otl_z_out1.csv", "");
  const auto out2 = write_temp("otl_z_out2.csv", "");
  zscore_file(in, out1);
  const Dataset z = load_dataset(out1);
  CHECK(z.X(0, 0) == doctest::Approx(-1.224744871).epsilon(1e-8));
  CHECK(z.X(0, 1) == doctest::Approx(0.0));
  CHECK(z.X(0, 2) == doctest::Approx(1.224744871).epsilon(1e-8));
  // constant column zeroed
  CHECK(z.X.row(1).cwiseAbs().maxCoeff() == 0.0);
  // double application
  zscore_file(out1, out2);
  const Dataset z2 = load_dataset(out2);
  CHECK((z2.X.row(0) - z.X.row(0)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gen_synthetic is deterministic per seed") {
  SyntheticSpec spec;
  spec.seed = 42;
  const auto t1 = gen_synthetic(spec);
  const auto t2 = gen_synthetic(spec);
  CHECK(t1.target.X == t2.target.X);
  CHECK(t1.sources[0].X == t2.sources[0].X);
  spec.seed = 43;
  CHECK(gen_synthetic(spec).target.X != t1.target.X);
}
