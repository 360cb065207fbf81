#include "bootlex/features.hpp"

#include <array>
#include <span>

#include "text_util.hpp"

namespace bootlex {

namespace {

struct Symbol {
  std::string_view name;
  std::uint8_t bit;
};

constexpr std::array kCaseSymbols{Symbol{"NOM", cas::NOM}, Symbol{"GEN", cas::GEN},
                                  Symbol{"DAT", cas::DAT}, Symbol{"AKK", cas::AKK}};
constexpr std::array kNumSymbols{Symbol{"SG", num::SG}, Symbol{"PL", num::PL}};
constexpr std::array kGenSymbols{Symbol{"MAS", gen::MAS}, Symbol{"FEM", gen::FEM},
                                 Symbol{"NTR", gen::NTR}};

template <typename F>
auto with_symbols(Feature f, F&& fn) {
  switch (f) {
    case Feature::Cas: return fn(std::span<const Symbol>(kCaseSymbols));
    case Feature::Num: return fn(std::span<const Symbol>(kNumSymbols));
    case Feature::Gen: break;
  }
  return fn(std::span<const Symbol>(kGenSymbols));
}

}  // namespace

std::uint8_t full_mask(Feature f) {
  switch (f) {
    case Feature::Cas: return cas::ALL;
    case Feature::Num: return num::ALL;
    case Feature::Gen: break;
  }
  return gen::ALL;
}

std::uint8_t FeatureBundle::get(Feature f) const {
  switch (f) {
    case Feature::Cas: return cas;
    case Feature::Num: return num;
    case Feature::Gen: break;
  }
  return gen;
}

void FeatureBundle::set(Feature f, std::uint8_t mask) {
  switch (f) {
    case Feature::Cas: cas = mask; return;
    case Feature::Num: num = mask; return;
    case Feature::Gen: gen = mask; return;
  }
}

std::optional<FeatureBundle> unify(const FeatureBundle& a, const FeatureBundle& b) {
  FeatureBundle out;
  for (Feature f : kAllFeatures) {
    std::uint8_t m = a.get(f) & b.get(f);
    if (m == 0) return std::nullopt;
    out.set(f, m);
  }
  return out;
}

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::Cas: return "CAS";
    case Feature::Num: return "NUM";
    case Feature::Gen: break;
  }
  return "GEN";
}

std::string format_component(Feature f, std::uint8_t mask) {
  if (mask == full_mask(f)) return "_";
  return with_symbols(f, [mask](std::span<const Symbol> symbols) {
    std::string out;
    for (const auto& s : symbols) {
      if (mask & s.bit) {
        if (!out.empty()) out += ',';
        out += s.name;
      }
    }
    return out;
  });
}

std::optional<std::uint8_t> parse_component(Feature f, std::string_view text) {
  if (text == "_") return full_mask(f);
  std::uint8_t mask = 0;
  for (std::string_view part : split(text, ',')) {
    bool found = false;
    with_symbols(f, [&](std::span<const Symbol> symbols) {
      for (const auto& s : symbols) {
        if (s.name == part) {
          mask |= s.bit;
          found = true;
        }
      }
      return 0;
    });
    if (!found) return std::nullopt;
  }
  if (mask == 0) return std::nullopt;
  return mask;
}

std::string format_bundle(const FeatureBundle& b) {
  return "cas=" + format_component(Feature::Cas, b.cas) +
         " num=" + format_component(Feature::Num, b.num) +
         " gen=" + format_component(Feature::Gen, b.gen);
}

}  // namespace bootlex
