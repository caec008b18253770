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

#include "dpfl/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dpfl/rng.hpp"
#include "dpfl/text.hpp"

namespace dpfl {
namespace data {
namespace {

// Stream tags for seeded operations.
constexpr std::uint64_t kSplitStreamTag = 0x646174612d73706cULL;
constexpr std::uint64_t kSynthStreamTag = 0x646174612d73796eULL;

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw std::runtime_error(msg.str());
}

void check_gene_name(const std::string& name) {
  if (name.empty()) {
    throw std::invalid_argument("empty gene name");
  }
  if (name == "label") {
    throw std::invalid_argument("gene name 'label' collides with the label column");
  }
  if (name.find_first_of(",\t\r\n") != std::string::npos) {
    throw std::invalid_argument("gene name contains a separator character: " +
                                name);
  }
}

// Uniform integer in [0, bound) from the stream's 53-bit uniforms; exact
// enough for any dataset this handles and fully deterministic.
std::size_t uniform_index(RngStream& rng, std::size_t bound) {
  const std::size_t idx =
      static_cast<std::size_t>(rng.uniform() * static_cast<double>(bound));
  return std::min(idx, bound - 1);
}

// Largest-remainder apportionment of n items to the given fractions: floor
// every share, then hand the leftover items to the parts with the largest
// fractional remainders (ties to the earlier part).
std::vector<std::size_t> apportion(std::size_t n,
                                   const std::vector<double>& fractions) {
  const std::size_t parts = fractions.size();
  std::vector<std::size_t> sizes(parts);
  std::vector<double> remainders(parts);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const double share = fractions[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(share));
    remainders[i] = share - std::floor(share);
    assigned += sizes[i];
  }
  std::vector<std::size_t> order(parts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    sizes[order[i % parts]] += 1;
  }
  return sizes;
}

ExpressionMatrix rows_subset(const ExpressionMatrix& m,
                             const std::vector<std::size_t>& rows) {
  ExpressionMatrix out;
  out.gene_names = m.gene_names;
  const std::size_t g = m.n_genes();
  out.labels.reserve(rows.size());
  out.values.reserve(rows.size() * g);
  out.missing.reserve(rows.size() * g);
  for (std::size_t r : rows) {
    out.labels.push_back(m.labels[r]);
    out.values.insert(out.values.end(), m.values.begin() + r * g,
                      m.values.begin() + (r + 1) * g);
    out.missing.insert(out.missing.end(), m.missing.begin() + r * g,
                       m.missing.begin() + (r + 1) * g);
  }
  return out;
}

}  // namespace

void ExpressionMatrix::validate() const {
  const std::size_t g = gene_names.size();
  if (values.size() != labels.size() * g || missing.size() != values.size()) {
    throw std::invalid_argument("matrix shape is inconsistent");
  }
  std::unordered_set<std::string> seen;
  for (const std::string& name : gene_names) {
    check_gene_name(name);
    if (!seen.insert(name).second) {
      throw std::invalid_argument("duplicate gene name: " + name);
    }
  }
  for (int label : labels) {
    if (label != 0 && label != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
  }
}

void GeneSignature::validate() const {
  if (genes.empty()) {
    throw std::invalid_argument("signature has no genes");
  }
  std::unordered_set<std::string> seen;
  for (const std::string& gene : genes) {
    check_gene_name(gene);
    if (!seen.insert(gene).second) {
      throw std::invalid_argument("duplicate gene in signature: " + gene);
    }
  }
}

void SplitSpec::validate() const {
  if (fractions.empty()) {
    throw std::invalid_argument("split spec has no parts");
  }
  double sum = 0.0;
  for (const auto& [name, fraction] : fractions) {
    if (!(fraction > 0.0)) {
      throw std::invalid_argument("split fraction must be positive: " + name);
    }
    sum += fraction;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

ExpressionMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string line;
  std::size_t line_no = 0;

  // Header
  do {
    if (!std::getline(in, line)) {
      throw std::runtime_error(path + ": empty file");
    }
    ++line_no;
  } while (text::trim(line).empty());
  const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
  std::vector<std::string_view> header = text::split(line, sep);
  if (header.size() < 2 || text::trim(header.back()) != "label") {
    fail_line(path, line_no, "header must end with a 'label' column");
  }
  ExpressionMatrix m;
  m.gene_names.reserve(header.size() - 1);
  for (std::size_t i = 0; i + 1 < header.size(); ++i) {
    m.gene_names.emplace_back(text::trim(header[i]));
  }
  {
    std::unordered_set<std::string> seen;
    for (const std::string& name : m.gene_names) {
      try {
        check_gene_name(name);
      } catch (const std::invalid_argument& e) {
        fail_line(path, line_no, e.what());
      }
      if (!seen.insert(name).second) {
        fail_line(path, line_no, "duplicate gene name: " + name);
      }
    }
  }
  const std::size_t g = m.gene_names.size();

  // Data rows
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::vector<std::string_view> fields = text::split(line, sep);
    if (fields.size() != g + 1) {
      std::ostringstream what;
      what << "row has " << fields.size() << " fields, expected " << (g + 1);
      fail_line(path, line_no, what.str());
    }
    for (std::size_t i = 0; i < g; ++i) {
      const std::string_view cell = text::trim(fields[i]);
      if (cell.empty() || cell == "NA") {
        m.values.push_back(0.0);
        m.missing.push_back(1);
        continue;
      }
      double value = 0.0;
      if (!text::parse_double(cell, &value)) {
        fail_line(path, line_no,
                  "non-numeric cell '" + std::string(cell) + "' in column " +
                      m.gene_names[i]);
      }
      m.values.push_back(value);
      m.missing.push_back(0);
    }
    const std::string_view label_cell = text::trim(fields[g]);
    if (label_cell == "0") {
      m.labels.push_back(0);
    } else if (label_cell == "1") {
      m.labels.push_back(1);
    } else {
      fail_line(path, line_no,
                "unknown label value '" + std::string(label_cell) + "'");
    }
  }
  m.validate();
  return m;
}

void write_matrix(const ExpressionMatrix& m, const std::string& path) {
  m.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  const std::size_t g = m.n_genes();
  for (std::size_t i = 0; i < g; ++i) {
    out << m.gene_names[i] << ',';
  }
  out << "label\n";
  for (std::size_t r = 0; r < m.n_samples(); ++r) {
    for (std::size_t c = 0; c < g; ++c) {
      if (m.missing_at(r, c)) {
        out << "NA";
      } else {
        out << text::format_double(m.value_at(r, c));
      }
      out << ',';
    }
    out << m.labels[r] << '\n';
  }
  if (!out) {
    throw std::runtime_error("short write: " + path);
  }
}

ExpressionMatrix select_features(const ExpressionMatrix& m,
                                 const GeneSignature& sig) {
  m.validate();
  sig.validate();
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < m.n_genes(); ++c) {
    column_of.emplace(m.gene_names[c], c);
  }
  std::vector<std::size_t> keep;
  keep.reserve(sig.genes.size());
  for (const std::string& gene : sig.genes) {
    const auto it = column_of.find(gene);
    if (it != column_of.end()) keep.push_back(it->second);
  }
  if (keep.empty()) {
    throw std::runtime_error("signature '" + sig.name +
                             "' shares no genes with the matrix");
  }
  ExpressionMatrix out;
  out.labels = m.labels;
  out.gene_names.reserve(keep.size());
  for (std::size_t c : keep) out.gene_names.push_back(m.gene_names[c]);
  const std::size_t n = m.n_samples();
  out.values.reserve(n * keep.size());
  out.missing.reserve(n * keep.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c : keep) {
      out.values.push_back(m.value_at(r, c));
      out.missing.push_back(m.missing[r * m.n_genes() + c]);
    }
  }
  return out;
}

ExpressionMatrix impute_zeros(const ExpressionMatrix& m) {
  ExpressionMatrix out = m;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.missing[i] != 0) {
      out.values[i] = 0.0;
      out.missing[i] = 0;
    }
  }
  return out;
}

std::vector<ExpressionMatrix> stratified_split(const ExpressionMatrix& m,
                                               const SplitSpec& spec) {
  m.validate();
  spec.validate();
  const std::size_t parts = spec.fractions.size();
  std::vector<double> fractions;
  fractions.reserve(parts);
  for (const auto& [name, fraction] : spec.fractions) {
    fractions.push_back(fraction);
  }

  std::vector<std::vector<std::size_t>> part_rows(parts);
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < m.n_samples(); ++r) {
      if (m.labels[r] == cls) rows.push_back(r);
    }
    if (rows.empty()) continue;  // a single-class matrix splits trivially
    if (rows.size() < parts) {
      std::ostringstream msg;
      msg << "class " << cls << " has " << rows.size()
          << " samples, fewer than the " << parts << " requested parts";
      throw std::invalid_argument(msg.str());
    }
    RngStream rng(spec.seed,
                  RngStream::derive_stream(
                      {kSplitStreamTag, static_cast<std::uint64_t>(cls)}));
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      std::swap(rows[i], rows[uniform_index(rng, i + 1)]);
    }
    const std::vector<std::size_t> sizes = apportion(rows.size(), fractions);
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts; ++p) {
      part_rows[p].insert(part_rows[p].end(), rows.begin() + offset,
                          rows.begin() + offset + sizes[p]);
      offset += sizes[p];
    }
  }

  std::vector<ExpressionMatrix> result;
  result.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    std::sort(part_rows[p].begin(), part_rows[p].end());
    result.push_back(rows_subset(m, part_rows[p]));
  }
  return result;
}

ExpressionMatrix synthesize_dataset(std::size_t n_normal, std::size_t n_tumor,
                                    std::size_t n_genes,
                                    const GeneSignature& signal_genes,
                                    double effect_size, double missing_rate,
                                    std::uint64_t seed) {
  if (n_normal < 1 || n_tumor < 1 || n_genes < 1) {
    throw std::invalid_argument("sample and gene counts must be >= 1");
  }
  if (!(missing_rate >= 0.0 && missing_rate <= 1.0)) {
    throw std::invalid_argument("missing_rate must lie in [0, 1]");
  }
  if (!std::isfinite(effect_size)) {
    throw std::invalid_argument("effect_size must be finite");
  }
  signal_genes.validate();
  const std::unordered_set<std::string> signal(signal_genes.genes.begin(),
                                               signal_genes.genes.end());
  ExpressionMatrix m;
  m.gene_names.reserve(n_genes);
  std::vector<bool> is_signal(n_genes);
  for (std::size_t c = 0; c < n_genes; ++c) {
    m.gene_names.push_back("gene_" + std::to_string(c + 1));
    is_signal[c] = signal.count(m.gene_names.back()) > 0;
  }
  const std::size_t n = n_normal + n_tumor;
  m.labels.reserve(n);
  m.values.reserve(n * n_genes);
  m.missing.reserve(n * n_genes);
  RngStream rng(seed, RngStream::derive_stream({kSynthStreamTag}));
  for (std::size_t r = 0; r < n; ++r) {
    const int label = r < n_normal ? 0 : 1;
    m.labels.push_back(label);
    for (std::size_t c = 0; c < n_genes; ++c) {
      double value = rng.normal();
      if (label == 1 && is_signal[c]) value += effect_size;
      const bool missing = rng.uniform() < missing_rate;
      m.values.push_back(value);
      m.missing.push_back(missing ? 1 : 0);
    }
  }
  return m;
}

GeneSignature synthetic_signal_signature(std::size_t count) {
  if (count < 1) {
    throw std::invalid_argument("signature gene count must be >= 1");
  }
  GeneSignature sig;
  sig.name = "synthetic_signal";
  sig.genes.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    sig.genes.push_back("gene_" + std::to_string(c + 1));
  }
  return sig;
}

GeneSignature load_signature(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  GeneSignature sig;
  sig.name = name;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view entry = text::trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    sig.genes.emplace_back(entry);
  }
  sig.validate();
  return sig;
}

std::vector<models::LabeledSample> to_samples(const ExpressionMatrix& m) {
  m.validate();
  for (std::uint8_t flag : m.missing) {
    if (flag != 0) {
      throw std::invalid_argument(
          "matrix still has missing entries; impute before training");
    }
  }
  std::vector<models::LabeledSample> samples;
  const std::size_t g = m.n_genes();
  samples.reserve(m.n_samples());
  for (std::size_t r = 0; r < m.n_samples(); ++r) {
    models::LabeledSample s;
    s.label = m.labels[r];
    s.features.assign(m.values.begin() + r * g, m.values.begin() + (r + 1) * g);
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace data
}  // namespace dpfl
