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

#ifndef RSM_DESIGNS_HPP_
#define RSM_DESIGNS_HPP_

// Two-level factorial, fractional factorial, orthogonal first-order and
// central composite designs, plus the coded <-> natural unit maps.
//
// Coded units: coded = (natural - center) / half_range, so the factor's low
// level is -1 and its high level is +1. All generators emit runs in a fixed
// standard order; nothing is randomized.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rsm {

struct Factor {
  std::string name;
  double low = -1.0;   // natural value at coded -1
  double high = 1.0;   // natural value at coded +1
  std::string units;

  double center() const { return 0.5 * (low + high); }
  double half_range() const { return 0.5 * (high - low); }
  double to_natural(double coded) const { return center() + coded * half_range(); }
  double to_coded(double natural) const;

  // Factor centered on `center` spanning +/- `half_range`.
  static Factor around(std::string name, double center, double half_range,
                       std::string units = {});
};

// Throws InvalidArgument unless every factor has low < high and a unique name.
void validate_factors(std::span<const Factor> factors);

enum class PointType { factorial, center, axial, path };

std::string to_string(PointType type);
PointType point_type_from_string(const std::string& s);

struct DesignPoint {
  int run_id = 0;
  std::vector<double> coded;
  std::vector<double> natural;
  PointType type = PointType::factorial;
};

struct Design {
  std::vector<Factor> factors;
  std::vector<DesignPoint> runs;

  std::size_t size() const { return runs.size(); }
  std::size_t dimension() const { return factors.size(); }
  // runs x factors matrix of coded coordinates.
  Eigen::MatrixXd coded_matrix() const;
  std::vector<std::string> factor_names() const;
  // Appends a run with the next run id; natural coordinates derived from coded.
  void add_coded(std::vector<double> coded, PointType type);
};

// Effect word over factor letters, one bit per factor (bit 0 = A).
using Word = std::uint32_t;

// Factor letters A..H, J, K, ... (I is reserved for the identity).
char factor_letter(int index);
int letter_index(char letter);
std::string word_to_string(Word w);
Word word_from_string(const std::string& letters);
int word_order(Word w);

struct FractionalFactorialSpec {
  int k = 0;
  int p = 0;
  std::vector<std::string> generators;    // e.g. "G=ABCD"
  std::vector<Word> defining_relation;    // all 2^p - 1 non-identity words
  std::optional<int> resolution;          // nullopt for a full factorial
};

struct FractionalDesign {
  Design design;
  FractionalFactorialSpec spec;
};

enum class AlphaMode { rotatable, face_centered, custom };

std::string to_string(AlphaMode mode);
AlphaMode alpha_mode_from_string(const std::string& s);

struct CCDSpec {
  int k = 0;
  int n_c = 0;
  double alpha = 0.0;
  AlphaMode alpha_mode = AlphaMode::rotatable;
};

struct CompositeDesign {
  Design design;
  CCDSpec spec;
};

// 2^k runs in Yates order: the first factor alternates fastest.
Design full_factorial(std::span<const Factor> factors);

// 2^(k-p) fraction. Generators have the form "G=ABCD": the target must be one
// of the last p factors and the word may only use the first k-p factors.
FractionalDesign fractional_factorial(std::span<const Factor> factors, int p,
                                      std::span<const std::string> generators);

// Standard minimum-aberration generators for common (k, p); G=ABCD, H=ABEF
// for the 2^(8-2) resolution V design. Throws InvalidArgument when unknown.
std::vector<std::string> default_generators(int k, int p);

// Closure of the generator words under multiplication, sorted by (order, word).
std::vector<Word> defining_relation(std::span<const Word> generator_words);

// For every effect of order 1..max_order, the set of effects it is aliased
// with (product with each defining word, squared letters cancelled).
std::map<std::string, std::set<std::string>> alias_structure(
    const FractionalFactorialSpec& spec, int max_order);

// 2^k factorial plus n_c all-zero center runs.
Design first_order_design(std::span<const Factor> factors, int n_c = 3);

// 2^k factorial, 2k axial runs at +/- alpha, n_c centers.
CompositeDesign central_composite(std::span<const Factor> factors, int n_c = 3,
                                  AlphaMode mode = AlphaMode::rotatable,
                                  double custom_alpha = 0.0);

std::vector<double> code_to_natural(std::span<const Factor> factors,
                                    std::span<const double> coded);
std::vector<double> natural_to_code(std::span<const Factor> factors,
                                    std::span<const double> natural);

// Design CSV: header `run_id,pt_type,<factor names...>`; natural or coded values.
void write_design_csv(std::ostream& out, const Design& design, bool coded = false);
// Writes `<stem>.csv` (natural) and `<stem>.coded.csv` next to it.
void write_design_files(const std::filesystem::path& natural_csv, const Design& design);
// Reads natural values for `factors` (matched by column name) from a design CSV.
Design read_design_csv(std::istream& in, std::span<const Factor> factors);
// Reads a coded design CSV; factors default to [-1, +1] when not supplied.
Design read_coded_design_csv(std::istream& in, std::span<const std::string> factor_names);

}  // namespace rsm

#endif  // RSM_DESIGNS_HPP_
