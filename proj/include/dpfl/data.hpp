// Copyright 2026 The DPFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFL_DATA_HPP_
#define DPFL_DATA_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpfl/models.hpp"

namespace dpfl {
namespace data {

// Samples-by-genes expression table with explicit missingness. Missing cells
// stay marked until impute_zeros resolves them; no loader or selector ever
// substitutes a computed statistic.
struct ExpressionMatrix {
  std::vector<std::string> gene_names;  // column names, unique
  std::vector<int> labels;              // one per row, 0 = normal, 1 = tumor
  std::vector<double> values;           // row-major, n_samples x n_genes
  std::vector<std::uint8_t> missing;    // same shape, 1 = missing

  std::size_t n_samples() const { return labels.size(); }
  std::size_t n_genes() const { return gene_names.size(); }

  double value_at(std::size_t row, std::size_t col) const {
    return values[row * n_genes() + col];
  }
  bool missing_at(std::size_t row, std::size_t col) const {
    return missing[row * n_genes() + col] != 0;
  }

  void validate() const;  // shape consistency, unique names, labels in {0,1}
};

// Ordered list of public gene names that defines a feature set.
struct GeneSignature {
  std::string name;
  std::vector<std::string> genes;

  void validate() const;  // non-empty, unique gene names
};

// Named fractions of a split; fractions are positive and sum to 1 within
// 1e-9. The seed drives the per-class shuffles.
struct SplitSpec {
  std::vector<std::pair<std::string, double>> fractions;
  std::uint64_t seed = 0;

  void validate() const;
};

// Reads a comma- or tab-separated table: first row gene names plus a final
// `label` column, one data row per sample. Empty cells and the literal token
// NA mark missing entries. Errors (malformed header, ragged row, non-numeric
// cell, duplicate gene name, unknown label) name the offending line.
ExpressionMatrix load_matrix(const std::string& path);

// Inverse of load_matrix: comma-separated, missing cells written as NA,
// values in shortest round-trip decimal form. load(write(m)) == m.
void write_matrix(const ExpressionMatrix& m, const std::string& path);

// Keeps only the columns named in the signature, in signature order; genes
// missing from the matrix are silently dropped (the retained count is the
// result's n_genes()). Zero overlap is an error.
ExpressionMatrix select_features(const ExpressionMatrix& m,
                                 const GeneSignature& sig);

// Replaces every missing entry with 0.0, touching nothing else and computing
// no dataset statistic.
ExpressionMatrix impute_zeros(const ExpressionMatrix& m);

// Splits rows into spec.fractions.size() parts, stratified by label: each
// class is shuffled (seeded) and partitioned independently, with per-class
// part sizes given by largest-remainder rounding of the fractions. Within a
// part, rows keep their original relative order. Requires every class to
// have at least as many samples as there are parts.
std::vector<ExpressionMatrix> stratified_split(const ExpressionMatrix& m,
                                               const SplitSpec& spec);

// Class-conditional Gaussian data: every gene is unit-variance noise around
// 0 for normal samples; for tumor samples, genes named in signal_genes are
// shifted by effect_size. Rows are the n_normal normal samples followed by
// the n_tumor tumor samples; generated columns are named gene_1..gene_N.
// Each cell is independently marked missing with probability missing_rate.
// Deterministic in seed (per cell: one normal draw, then one uniform draw).
ExpressionMatrix synthesize_dataset(std::size_t n_normal, std::size_t n_tumor,
                                    std::size_t n_genes,
                                    const GeneSignature& signal_genes,
                                    double effect_size, double missing_rate,
                                    std::uint64_t seed);

// Signature covering the first `count` generated column names
// (gene_1..gene_count), for use with synthesize_dataset.
GeneSignature synthetic_signal_signature(std::size_t count);

// Plain-text signature file: one gene name per line, blank lines and lines
// starting with # ignored, surrounding whitespace trimmed.
GeneSignature load_signature(const std::string& path, const std::string& name);

// Converts to training samples. Requires a fully observed matrix: call
// impute_zeros first; unresolved missingness is an error.
std::vector<models::LabeledSample> to_samples(const ExpressionMatrix& m);

}  // namespace data
}  // namespace dpfl

#endif  // DPFL_DATA_HPP_
