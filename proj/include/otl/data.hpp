#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otl/types.hpp"

namespace otl {

// CSV: m comma-separated features then a 1-based integer label per row.
// K is inferred as the max label unless num_classes_override is given.
Dataset load_dataset(const std::string& path, bool skip_header = false,
                     int num_classes_override = 0,
                     const std::string& domain_name = "");

void save_dataset(const Dataset& d, const std::string& path);

// Deterministic split: |unlabeled| = round(unlabeled_fraction * n).
TargetSplit split_target(const Dataset& d, double unlabeled_fraction,
                         unsigned long long seed);

// A fresh permutation of the online stream for one trial.
Dataset permute_stream(const TargetSplit& split, unsigned long long trial_seed);

Dataset select_columns(const Dataset& d, const std::vector<int>& idx);

Dataset concat_datasets(const std::vector<Dataset>& parts);

// Standardize each feature column of a CSV in place (population std).
// Zero-variance features are zeroed with a warning on stderr.
void zscore_file(const std::string& in_path, const std::string& out_path,
                 bool skip_header = false);

}  // namespace otl
