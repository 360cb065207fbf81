#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bootlex {

enum class Feature : std::uint8_t { Cas, Num, Gen };

inline constexpr Feature kAllFeatures[] = {Feature::Cas, Feature::Num, Feature::Gen};

// Bit layout of the value sets.
namespace cas {
inline constexpr std::uint8_t NOM = 1, GEN = 2, DAT = 4, AKK = 8, ALL = 15;
}
namespace num {
inline constexpr std::uint8_t SG = 1, PL = 2, ALL = 3;
}
namespace gen {
inline constexpr std::uint8_t MAS = 1, FEM = 2, NTR = 4, ALL = 7;
}

std::uint8_t full_mask(Feature f);

/// Set-valued case/number/gender features. A component is never empty: an
/// empty intersection is a unification failure and is never stored.
struct FeatureBundle {
  std::uint8_t cas = cas::ALL;
  std::uint8_t num = num::ALL;
  std::uint8_t gen = gen::ALL;

  static FeatureBundle full() { return {}; }

  std::uint8_t get(Feature f) const;
  void set(Feature f, std::uint8_t mask);
  bool is_full() const { return cas == cas::ALL && num == num::ALL && gen == gen::ALL; }
  bool is_full(Feature f) const { return get(f) == full_mask(f); }

  friend bool operator==(const FeatureBundle&, const FeatureBundle&) = default;
  friend auto operator<=>(const FeatureBundle&, const FeatureBundle&) = default;
};

std::optional<FeatureBundle> unify(const FeatureBundle& a, const FeatureBundle& b);

std::string_view feature_name(Feature f);            // "CAS", "NUM", "GEN"
std::string format_component(Feature f, std::uint8_t mask);  // "_" when full
/// Parses "_" or a comma list such as "NOM,AKK". Returns nullopt on unknown
/// symbols or an empty set.
std::optional<std::uint8_t> parse_component(Feature f, std::string_view text);

/// "cas=NOM,AKK num=SG gen=_" (all three components, fixed order).
std::string format_bundle(const FeatureBundle& b);

}  // namespace bootlex
