#include "otl/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "otl/random.hpp"

namespace otl {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

Dataset load_dataset(const std::string& path, bool skip_header,
                     int num_classes_override, const std::string& domain_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.size() < 2) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " has fewer than 2 fields");
    }
    if (dim < 0) {
      dim = static_cast<int>(fields.size()) - 1;
    } else if (static_cast<int>(fields.size()) - 1 != dim) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " has " + std::to_string(fields.size() - 1) +
                               " features, expected " + std::to_string(dim));
    }
    std::vector<double> x(dim);
    try {
      for (int j = 0; j < dim; ++j) x[j] = std::stod(fields[j]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " has a malformed numeric field");
    }
    int label;
    try {
      label = std::stoi(fields.back());
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " has a malformed label");
    }
    if (label < 1) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " has label " + std::to_string(label) +
                               ", labels must be >= 1");
    }
    rows.push_back(std::move(x));
    labels.push_back(label - 1);  // 1-based in files, 0-based internally
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty dataset");

  int k = 0;
  for (int y : labels) k = std::max(k, y + 1);
  if (num_classes_override > 0) {
    if (k > num_classes_override) {
      throw std::runtime_error(path + ": label " + std::to_string(k) +
                               " exceeds configured class count " +
                               std::to_string(num_classes_override));
    }
    k = num_classes_override;
  }

  Dataset d;
  d.X.resize(dim, static_cast<int>(rows.size()));
  d.labels.resize(static_cast<int>(rows.size()));
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < dim; ++j) d.X(j, i) = rows[i][j];
    d.labels[i] = labels[i];
  }
  d.num_classes = k;
  d.name = domain_name.empty() ? path : domain_name;
  return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out.precision(17);
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.dim(); ++j) out << d.X(j, i) << ',';
    out << d.labels[i] + 1 << '\n';
  }
}

Dataset select_columns(const Dataset& d, const std::vector<int>& idx) {
  Dataset out;
  out.X.resize(d.dim(), static_cast<int>(idx.size()));
  out.labels.resize(static_cast<int>(idx.size()));
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
    out.X.col(i) = d.X.col(idx[i]);
    out.labels[i] = d.labels[idx[i]];
  }
  out.num_classes = d.num_classes;
  out.name = d.name;
  return out;
}

Dataset concat_datasets(const std::vector<Dataset>& parts) {
  if (parts.empty()) throw std::runtime_error("concat_datasets: no datasets");
  int n = 0, k = 0;
  const int m = parts.front().dim();
  for (const auto& p : parts) {
    if (p.dim() != m) throw std::runtime_error("concat_datasets: dim mismatch");
    n += p.size();
    k = std::max(k, p.num_classes);
  }
  Dataset out;
  out.X.resize(m, n);
  out.labels.resize(n);
  int at = 0;
  for (const auto& p : parts) {
    out.X.middleCols(at, p.size()) = p.X;
    out.labels.segment(at, p.size()) = p.labels;
    at += p.size();
  }
  out.num_classes = k;
  out.name = "union";
  return out;
}

TargetSplit split_target(const Dataset& d, double unlabeled_fraction,
                         unsigned long long seed) {
  if (d.empty()) throw std::runtime_error("split_target: empty dataset");
  if (!(unlabeled_fraction > 0.0 && unlabeled_fraction < 1.0)) {
    throw std::runtime_error("split_target: fraction must be in (0,1)");
  }
  const int n = d.size();
  const int n_u = static_cast<int>(std::lround(unlabeled_fraction * n));
  auto perm = identity_permutation(n);
  Rng rng(seed);
  rng.shuffle(perm);

  std::vector<int> u_idx(perm.begin(), perm.begin() + n_u);
  std::vector<int> s_idx(perm.begin() + n_u, perm.end());
  // keep file order within each side
  std::sort(u_idx.begin(), u_idx.end());
  std::sort(s_idx.begin(), s_idx.end());

  TargetSplit split;
  split.unlabeled = select_columns(d, u_idx);
  split.online_stream = select_columns(d, s_idx);
  split.seed = seed;
  return split;
}

Dataset permute_stream(const TargetSplit& split, unsigned long long trial_seed) {
  const int n = split.online_stream.size();
  if (n == 0) throw std::runtime_error("permute_stream: empty online stream");
  auto perm = identity_permutation(n);
  Rng rng(trial_seed);
  rng.shuffle(perm);
  return select_columns(split.online_stream, perm);
}

void zscore_file(const std::string& in_path, const std::string& out_path,
                 bool skip_header) {
  Dataset d = load_dataset(in_path, skip_header);
  const int n = d.size();
  for (int j = 0; j < d.dim(); ++j) {
    const double mean = d.X.row(j).mean();
    const double var = (d.X.row(j).array() - mean).square().sum() / n;
    if (var <= 0.0) {
      std::cerr << "zscore: feature " << j + 1 << " has zero variance, zeroed\n";
      d.X.row(j).setZero();
    } else {
      d.X.row(j) = (d.X.row(j).array() - mean) / std::sqrt(var);
    }
  }
  save_dataset(d, out_path);
}

}  // namespace otl
