#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

#include "gestura/coordination.hpp"
#include "gestura/error.hpp"

namespace gestura {

/// Seven flags aligned with the coordination table. Written as the 1-based
/// index set of its ones, e.g. {1,2,6}.
class SelectionVector {
 public:
  SelectionVector() = default;

  static SelectionVector all() {
    SelectionVector s;
    s.bits_.set();
    return s;
  }
  static SelectionVector none() { return SelectionVector(); }

  /// From 1-based articulator indices.
  static SelectionVector from_indices(std::initializer_list<int> indices) {
    return from_indices(std::vector<int>(indices));
  }
  static SelectionVector from_indices(const std::vector<int>& indices) {
    SelectionVector s;
    for (int i : indices) {
      if (i < 1 || i > static_cast<int>(kArticulatorCount)) {
        throw Error(ErrorKind::kInventory,
                    "selection index " + std::to_string(i) + " outside 1..7");
      }
      s.bits_.set(static_cast<std::size_t>(i - 1));
    }
    return s;
  }

  bool operator[](std::size_t i) const { return bits_.test(i); }
  double weight(std::size_t i) const { return bits_.test(i) ? 1.0 : 0.0; }

  SelectionVector complement() const {
    SelectionVector s;
    s.bits_ = ~bits_;
    return s;
  }

  /// S + S' == 1 and S . S' == 0.
  bool exclusive_with(const SelectionVector& other) const {
    return (bits_ & other.bits_).none() && (bits_ | other.bits_).all();
  }

  bool is_all() const { return bits_.all(); }
  bool is_none() const { return bits_.none(); }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < kArticulatorCount; ++i) {
      if (bits_.test(i)) out.push_back(static_cast<int>(i) + 1);
    }
    return out;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const SelectionVector&, const SelectionVector&) = default;

 private:
  std::bitset<kArticulatorCount> bits_;
};

/// Vowels in the front half of the planning circle (the /i/ side).
inline bool is_front_vowel_angle(double theta) {
  const double t = canonical_angle(theta);
  return t > std::numbers::pi && t < kTwoPi;
}

struct FixedLocation {
  PolarPoint point;
};

/// Velar/palatal alternation keyed on the frontness of the following vowel.
struct FrontBackLocation {
  PolarPoint front;
  PolarPoint back;
};

/// Place that leans toward the vowel angle: base.theta + coefficient * (theta_V
/// - base.theta), with the lean clamped to +-max_lean.
struct VowelLeanLocation {
  PolarPoint base;
  double coefficient = 0.1;
  double max_lean = std::numbers::pi / 6.0;
};

using LocationRule = std::variant<FixedLocation, FrontBackLocation, VowelLeanLocation>;

struct ConsonantSpec {
  LocationRule location;
  SelectionVector selection;
  /// Place used inside a consonant cluster, when it differs.
  std::optional<PolarPoint> cluster_location;
};

inline PolarPoint resolve_location(const LocationRule& rule, double vowel_theta) {
  return std::visit(
      [vowel_theta](const auto& r) -> PolarPoint {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FixedLocation>) {
          return r.point;
        } else if constexpr (std::is_same_v<R, FrontBackLocation>) {
          return is_front_vowel_angle(vowel_theta) ? r.front : r.back;
        } else {
          const double lean = std::clamp(
              r.coefficient * (canonical_angle(vowel_theta) - r.base.theta()),
              -r.max_lean, r.max_lean);
          return PolarPoint(r.base.rho(), r.base.theta() + lean);
        }
      },
      rule);
}

class PhonemeInventory {
 public:
  void add_vowel(const std::string& symbol, PolarPoint location) {
    if (location.rho() > 1.0) {
      throw Error(ErrorKind::kInventory, "vowel '" + symbol + "' lies outside the unit disc");
    }
    vowels_[symbol] = location;
  }

  void add_consonant(const std::string& symbol, ConsonantSpec spec) {
    check_crown_location(symbol, spec);
    consonants_[symbol] = std::move(spec);
  }

  void add_cluster_rule(const std::string& a, const std::string& b, SelectionVector selection) {
    clusters_[pair_key(a, b)] = selection;
  }

  void add_alias(const std::string& alias, const std::string& symbol) {
    aliases_[alias] = symbol;
  }

  bool is_vowel(const std::string& s) const { return vowels_.contains(s); }
  bool is_consonant(const std::string& s) const { return consonants_.contains(s); }

  const PolarPoint& vowel(const std::string& s) const {
    auto it = vowels_.find(s);
    if (it == vowels_.end()) throw Error(ErrorKind::kInventory, "unknown vowel '" + s + "'");
    return it->second;
  }

  const ConsonantSpec& consonant(const std::string& s) const {
    auto it = consonants_.find(s);
    if (it == consonants_.end()) {
      throw Error(ErrorKind::kInventory, "unknown consonant '" + s + "'");
    }
    return it->second;
  }

  /// Location of a consonant articulated with a vowel of angle `vowel_theta`.
  PolarPoint consonant_location(const std::string& s, double vowel_theta,
                                bool in_cluster = false) const {
    const ConsonantSpec& spec = consonant(s);
    if (in_cluster && spec.cluster_location) return *spec.cluster_location;
    return resolve_location(spec.location, vowel_theta);
  }

  bool has_cluster_rule(const std::string& a, const std::string& b) const {
    return clusters_.contains(pair_key(a, b));
  }

  const SelectionVector& cluster_selection(const std::string& a, const std::string& b) const {
    auto it = clusters_.find(pair_key(a, b));
    if (it == clusters_.end()) {
      throw Error(ErrorKind::kInventory, "no cluster rule for /" + a + b + "/");
    }
    return it->second;
  }

  /// Canonical symbol for `s` (aliases resolved), or `s` unchanged.
  std::string canonical(const std::string& s) const {
    auto it = aliases_.find(s);
    return it == aliases_.end() ? s : it->second;
  }

  /// Every spelling the tokenizer should recognize, including aliases.
  std::vector<std::string> spellings() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : vowels_) out.push_back(k);
    for (const auto& [k, v] : consonants_) out.push_back(k);
    for (const auto& [k, v] : aliases_) out.push_back(k);
    return out;
  }

  const std::map<std::string, PolarPoint>& vowels() const { return vowels_; }
  const std::map<std::string, ConsonantSpec>& consonants() const { return consonants_; }
  const std::map<std::pair<std::string, std::string>, SelectionVector>& clusters() const {
    return clusters_;
  }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  /// Seven peripheral vowels evenly spaced from /u/ (pi/3) to /i/ (5pi/3),
  /// schwa at the origin, and the tuned plosives /b d g/.
  static PhonemeInventory standard() {
    constexpr double pi = std::numbers::pi;
    PhonemeInventory inv;
    const std::array<const char*, 7> peripheral = {"u", "o", "ɔ", "a", "ɛ", "e", "i"};
    for (std::size_t k = 0; k < peripheral.size(); ++k) {
      inv.add_vowel(peripheral[k], PolarPoint(1.0, pi / 3.0 + static_cast<double>(k) * 2.0 * pi / 9.0));
    }
    // The 2pi/9 spacing lands /a/ and /i/ one ulp off the table angles.
    inv.add_vowel("a", PolarPoint(1.0, pi));
    inv.add_vowel("i", PolarPoint(1.0, 5.0 * pi / 3.0));
    inv.add_vowel("ə", PolarPoint(0.0, 0.0));

    inv.add_consonant("b", {FixedLocation{PolarPoint(1.0, pi / 3.0)},
                            SelectionVector::from_indices({1, 2, 6}), std::nullopt});
    inv.add_consonant("d", {VowelLeanLocation{PolarPoint(1.2, 3.0 * pi / 2.0), 0.1, pi / 6.0},
                            SelectionVector::from_indices({1, 2, 3, 4}), std::nullopt});
    const PolarPoint palatal(1.1, 23.0 * pi / 12.0);
    inv.add_consonant("g", {FrontBackLocation{palatal, PolarPoint(1.2, pi / 3.0)},
                            SelectionVector::from_indices({1, 2, 3, 4}), palatal});

    inv.add_cluster_rule("b", "d", SelectionVector::from_indices({1, 2, 3, 6}));
    inv.add_cluster_rule("b", "g", SelectionVector::from_indices({1, 2, 3, 6}));
    inv.add_cluster_rule("d", "g", SelectionVector::from_indices({1, 2, 3, 4}));

    // ASCII spellings (SAMPA) for the non-ASCII vowels.
    inv.add_alias("O", "ɔ");
    inv.add_alias("E", "ɛ");
    inv.add_alias("@", "ə");
    return inv;
  }

 private:
  static std::pair<std::string, std::string> pair_key(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  static void check_crown_location(const std::string& symbol, const ConsonantSpec& spec) {
    auto check = [&](const PolarPoint& p) {
      if (p.rho() > kCrownRadius) {
        throw Error(ErrorKind::kInventory, "consonant '" + symbol + "' lies outside the crown");
      }
    };
    std::visit(
        [&](const auto& r) {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, FixedLocation>) {
            check(r.point);
          } else if constexpr (std::is_same_v<R, FrontBackLocation>) {
            check(r.front);
            check(r.back);
          } else {
            check(r.base);
          }
        },
        spec.location);
    if (spec.cluster_location) check(*spec.cluster_location);
  }

  std::map<std::string, PolarPoint> vowels_;
  std::map<std::string, ConsonantSpec> consonants_;
  std::map<std::pair<std::string, std::string>, SelectionVector> clusters_;
  std::map<std::string, std::string> aliases_;
};

}  // namespace gestura
