// Copyright 2026 The rsmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsm/designs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <ostream>

#include "rsm/csv.hpp"
#include "rsm/errors.hpp"

namespace rsm {
namespace {

constexpr std::string_view kLetters = "ABCDEFGHJKLMNOPQ";
constexpr int kMaxFactors = 16;

void require_factor_count(std::span<const Factor> factors) {
  if (factors.empty()) throw InvalidArgument("design needs at least one factor");
  if (factors.size() > kMaxFactors) {
    throw InvalidArgument("at most 16 factors are supported");
  }
  validate_factors(factors);
}

// Yates-order +/-1 row for run index `r` over `k` columns.
std::vector<double> yates_row(std::size_t r, std::size_t k) {
  std::vector<double> row(k);
  for (std::size_t j = 0; j < k; ++j) row[j] = ((r >> j) & 1U) ? 1.0 : -1.0;
  return row;
}

std::vector<Factor> to_vector(std::span<const Factor> f) { return {f.begin(), f.end()}; }

}  // namespace

double Factor::to_coded(double natural) const {
  const double h = half_range();
  if (h == 0.0) throw InvalidArgument("factor '" + name + "' has zero half-range");
  return (natural - center()) / h;
}

Factor Factor::around(std::string name, double center, double half_range, std::string units) {
  return Factor{std::move(name), center - half_range, center + half_range, std::move(units)};
}

void validate_factors(std::span<const Factor> factors) {
  std::set<std::string> seen;
  for (const auto& f : factors) {
    if (!(f.low < f.high)) {
      throw InvalidArgument("factor '" + f.name + "' must satisfy low < high");
    }
    if (!seen.insert(f.name).second) {
      throw InvalidArgument("duplicate factor name '" + f.name + "'");
    }
  }
}

std::string to_string(PointType type) {
  switch (type) {
    case PointType::factorial: return "factorial";
    case PointType::center: return "center";
    case PointType::axial: return "axial";
    case PointType::path: return "path";
  }
  return "factorial";
}

PointType point_type_from_string(const std::string& s) {
  if (s == "factorial" || s == "cube" || s == "1") return PointType::factorial;
  if (s == "center" || s == "0") return PointType::center;
  if (s == "axial" || s == "star" || s == "-1") return PointType::axial;
  if (s == "path") return PointType::path;
  throw SchemaError("unknown point type '" + s + "'");
}

Eigen::MatrixXd Design::coded_matrix() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(runs.size()),
                    static_cast<Eigen::Index>(factors.size()));
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t j = 0; j < factors.size(); ++j) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = runs[r].coded.at(j);
    }
  }
  return m;
}

std::vector<std::string> Design::factor_names() const {
  std::vector<std::string> names;
  names.reserve(factors.size());
  for (const auto& f : factors) names.push_back(f.name);
  return names;
}

void Design::add_coded(std::vector<double> coded, PointType type) {
  DesignPoint pt;
  pt.run_id = static_cast<int>(runs.size()) + 1;
  pt.natural = code_to_natural(factors, coded);
  pt.coded = std::move(coded);
  pt.type = type;
  runs.push_back(std::move(pt));
}

char factor_letter(int index) {
  if (index < 0 || index >= kMaxFactors) throw InvalidArgument("factor index out of range");
  return kLetters[static_cast<std::size_t>(index)];
}

int letter_index(char letter) {
  const auto pos = kLetters.find(letter);
  if (pos == std::string_view::npos) {
    throw InvalidArgument(std::string("unknown factor letter '") + letter + "'");
  }
  return static_cast<int>(pos);
}

std::string word_to_string(Word w) {
  if (w == 0) return "I";
  std::string s;
  for (int i = 0; i < kMaxFactors; ++i) {
    if (w & (Word{1} << i)) s.push_back(kLetters[static_cast<std::size_t>(i)]);
  }
  return s;
}

Word word_from_string(const std::string& letters) {
  Word w = 0;
  for (char c : letters) {
    const Word bit = Word{1} << letter_index(c);
    if (w & bit) throw InvalidArgument("repeated letter in word '" + letters + "'");
    w |= bit;
  }
  return w;
}

int word_order(Word w) { return std::popcount(w); }

std::vector<Word> defining_relation(std::span<const Word> generator_words) {
  std::vector<Word> words;
  const std::size_t p = generator_words.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << p); ++mask) {
    Word w = 0;
    for (std::size_t g = 0; g < p; ++g) {
      if (mask & (std::size_t{1} << g)) w ^= generator_words[g];
    }
    words.push_back(w);
  }
  std::sort(words.begin(), words.end(), [](Word a, Word b) {
    const int oa = word_order(a), ob = word_order(b);
    if (oa != ob) return oa < ob;
    return word_to_string(a) < word_to_string(b);
  });
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

Design full_factorial(std::span<const Factor> factors) {
  require_factor_count(factors);
  Design d;
  d.factors = to_vector(factors);
  const std::size_t k = factors.size();
  const std::size_t n = std::size_t{1} << k;
  d.runs.reserve(n);
  for (std::size_t r = 0; r < n; ++r) d.add_coded(yates_row(r, k), PointType::factorial);
  return d;
}

FractionalDesign fractional_factorial(std::span<const Factor> factors, int p,
                                      std::span<const std::string> generators) {
  require_factor_count(factors);
  const int k = static_cast<int>(factors.size());
  if (p < 0 || p >= k) throw InvalidArgument("fractionation p must satisfy 0 <= p < k");
  if (static_cast<int>(generators.size()) != p) {
    throw InvalidArgument("expected " + std::to_string(p) + " generators, got " +
                          std::to_string(generators.size()));
  }
  const int base = k - p;
  const Word base_mask = (Word{1} << base) - 1;

  // target index -> word over base factors
  std::map<int, Word> rules;
  std::vector<Word> gen_words;
  std::vector<std::string> normalized;
  for (const auto& g : generators) {
    const auto eq = g.find('=');
    if (eq == std::string::npos || eq != 1 || g.size() < 3) {
      throw InvalidArgument("generator '" + g + "' must look like G=ABCD");
    }
    const int target = letter_index(g[0]);
    if (target < base || target >= k) {
      throw InvalidArgument("generator '" + g + "' must assign one of the last p factors");
    }
    const Word w = word_from_string(g.substr(eq + 1));
    if (w & ~base_mask) {
      throw InvalidArgument("generator '" + g + "' references a generated factor");
    }
    if (word_order(w) < 1) throw InvalidArgument("generator '" + g + "' has an empty word");
    if (!rules.emplace(target, w).second) {
      throw InvalidArgument("duplicate generator target in '" + g + "'");
    }
    gen_words.push_back(w | (Word{1} << target));
    normalized.push_back(g);
  }

  FractionalDesign out;
  out.design.factors = to_vector(factors);
  const std::size_t n = std::size_t{1} << base;
  out.design.runs.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = yates_row(r, static_cast<std::size_t>(base));
    row.resize(static_cast<std::size_t>(k));
    for (const auto& [target, w] : rules) {
      double prod = 1.0;
      for (int j = 0; j < base; ++j) {
        if (w & (Word{1} << j)) prod *= row[static_cast<std::size_t>(j)];
      }
      row[static_cast<std::size_t>(target)] = prod;
    }
    out.design.add_coded(std::move(row), PointType::factorial);
  }

  out.spec.k = k;
  out.spec.p = p;
  out.spec.generators = std::move(normalized);
  out.spec.defining_relation = defining_relation(gen_words);
  if (!out.spec.defining_relation.empty()) {
    int res = kMaxFactors + 1;
    for (Word w : out.spec.defining_relation) res = std::min(res, word_order(w));
    out.spec.resolution = res;
  }
  return out;
}

std::vector<std::string> default_generators(int k, int p) {
  static const std::map<std::pair<int, int>, std::vector<std::string>> table = {
      {{3, 1}, {"C=AB"}},
      {{4, 1}, {"D=ABC"}},
      {{5, 1}, {"E=ABCD"}},
      {{5, 2}, {"D=AB", "E=AC"}},
      {{6, 1}, {"F=ABCDE"}},
      {{6, 2}, {"E=ABC", "F=BCD"}},
      {{7, 1}, {"G=ABCDEF"}},
      {{7, 2}, {"F=ABCD", "G=ABDE"}},
      {{7, 3}, {"E=ABC", "F=BCD", "G=ACD"}},
      {{8, 2}, {"G=ABCD", "H=ABEF"}},
      {{8, 3}, {"F=ABC", "G=ABD", "H=BCDE"}},
      {{8, 4}, {"E=BCD", "F=ACD", "G=ABC", "H=ABD"}},
  };
  if (p == 0) return {};
  const auto it = table.find({k, p});
  if (it == table.end()) {
    throw InvalidArgument("no default generators for 2^(" + std::to_string(k) + "-" +
                          std::to_string(p) + "); supply them explicitly");
  }
  return it->second;
}

std::map<std::string, std::set<std::string>> alias_structure(
    const FractionalFactorialSpec& spec, int max_order) {
  if (max_order < 1) throw InvalidArgument("max_order must be >= 1");
  if (spec.k < 1 || spec.k > kMaxFactors) throw InvalidArgument("invalid spec: k");
  std::map<std::string, std::set<std::string>> aliases;
  const Word all = (Word{1} << spec.k) - 1;
  for (Word e = 1; e <= all; ++e) {
    if (word_order(e) > max_order) continue;
    auto& set = aliases[word_to_string(e)];
    for (Word w : spec.defining_relation) set.insert(word_to_string(e ^ w));
  }
  return aliases;
}

Design first_order_design(std::span<const Factor> factors, int n_c) {
  if (n_c < 1) throw InvalidArgument("first-order design needs n_c >= 1 center points");
  Design d = full_factorial(factors);
  for (int c = 0; c < n_c; ++c) {
    d.add_coded(std::vector<double>(factors.size(), 0.0), PointType::center);
  }
  return d;
}

CompositeDesign central_composite(std::span<const Factor> factors, int n_c, AlphaMode mode,
                                  double custom_alpha) {
  if (n_c < 1) throw InvalidArgument("central composite design needs n_c >= 1");
  CompositeDesign out;
  out.design = full_factorial(factors);
  const std::size_t k = factors.size();
  double alpha = 1.0;
  switch (mode) {
    case AlphaMode::rotatable:
      alpha = std::pow(static_cast<double>(std::size_t{1} << k), 0.25);
      break;
    case AlphaMode::face_centered:
      alpha = 1.0;
      break;
    case AlphaMode::custom:
      if (!(custom_alpha > 0.0)) throw InvalidArgument("custom alpha must be positive");
      alpha = custom_alpha;
      break;
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (double sign : {-1.0, 1.0}) {
      std::vector<double> row(k, 0.0);
      row[i] = sign * alpha;
      out.design.add_coded(std::move(row), PointType::axial);
    }
  }
  for (int c = 0; c < n_c; ++c) {
    out.design.add_coded(std::vector<double>(k, 0.0), PointType::center);
  }
  out.spec = CCDSpec{static_cast<int>(k), n_c, alpha, mode};
  return out;
}

std::string to_string(AlphaMode mode) {
  switch (mode) {
    case AlphaMode::rotatable: return "rotatable";
    case AlphaMode::face_centered: return "face_centered";
    case AlphaMode::custom: return "custom";
  }
  return "rotatable";
}

AlphaMode alpha_mode_from_string(const std::string& s) {
  if (s == "rotatable") return AlphaMode::rotatable;
  if (s == "face_centered" || s == "faces" || s == "face") return AlphaMode::face_centered;
  if (s == "custom") return AlphaMode::custom;
  throw InvalidArgument("unknown alpha mode '" + s + "'");
}

std::vector<double> code_to_natural(std::span<const Factor> factors,
                                    std::span<const double> coded) {
  if (coded.size() != factors.size()) throw InvalidArgument("coded vector length != k");
  std::vector<double> out(coded.size());
  for (std::size_t i = 0; i < coded.size(); ++i) {
    if (factors[i].half_range() == 0.0) {
      throw InvalidArgument("factor '" + factors[i].name + "' has zero half-range");
    }
    out[i] = factors[i].to_natural(coded[i]);
  }
  return out;
}

std::vector<double> natural_to_code(std::span<const Factor> factors,
                                    std::span<const double> natural) {
  if (natural.size() != factors.size()) throw InvalidArgument("natural vector length != k");
  std::vector<double> out(natural.size());
  for (std::size_t i = 0; i < natural.size(); ++i) out[i] = factors[i].to_coded(natural[i]);
  return out;
}

void write_design_csv(std::ostream& out, const Design& design, bool coded) {
  std::vector<std::string> header{"run_id", "pt_type"};
  for (const auto& f : design.factors) header.push_back(f.name);
  csv::write_row(out, header);
  for (const auto& run : design.runs) {
    std::vector<std::string> row{std::to_string(run.run_id), to_string(run.type)};
    for (double v : coded ? run.coded : run.natural) row.push_back(csv::format(v));
    csv::write_row(out, row);
  }
}

void write_design_files(const std::filesystem::path& natural_csv, const Design& design) {
  auto coded_path = natural_csv;
  coded_path.replace_extension();
  coded_path += ".coded.csv";
  std::ofstream nat(natural_csv);
  std::ofstream cod(coded_path);
  if (!nat || !cod) throw InvalidInput("cannot write design files at " + natural_csv.string());
  write_design_csv(nat, design, false);
  write_design_csv(cod, design, true);
}

namespace {

Design read_design_table(const csv::Table& t, std::vector<Factor> factors, bool coded) {
  Design d;
  const auto id_col = t.column("run_id");
  const auto type_col = t.has_column("pt_type") ? t.column("pt_type") : t.header.size();
  std::vector<std::size_t> cols;
  for (const auto& f : factors) cols.push_back(t.column(f.name));
  d.factors = std::move(factors);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    DesignPoint pt;
    pt.run_id = static_cast<int>(t.number(r, id_col));
    pt.type = type_col < t.header.size() ? point_type_from_string(t.rows[r][type_col])
                                         : PointType::factorial;
    std::vector<double> values;
    for (auto c : cols) values.push_back(t.number(r, c));
    if (coded) {
      pt.natural = code_to_natural(d.factors, values);
      pt.coded = std::move(values);
    } else {
      pt.coded = natural_to_code(d.factors, values);
      pt.natural = std::move(values);
    }
    d.runs.push_back(std::move(pt));
  }
  return d;
}

}  // namespace

Design read_design_csv(std::istream& in, std::span<const Factor> factors) {
  validate_factors(factors);
  return read_design_table(csv::read(in), to_vector(factors), false);
}

Design read_coded_design_csv(std::istream& in, std::span<const std::string> factor_names) {
  const auto t = csv::read(in);
  std::vector<Factor> factors;
  if (factor_names.empty()) {
    for (const auto& h : t.header) {
      if (h != "run_id" && h != "pt_type") factors.push_back(Factor{h, -1.0, 1.0, {}});
    }
  } else {
    for (const auto& n : factor_names) factors.push_back(Factor{n, -1.0, 1.0, {}});
  }
  return read_design_table(t, std::move(factors), true);
}

}  // namespace rsm
