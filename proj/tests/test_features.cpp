#include <doctest.h>

#include <random>

#include "bootlex/features.hpp"

using namespace bootlex;

namespace {

FeatureBundle random_bundle(std::mt19937& rng) {
  auto pick = [&](int all) { return static_cast<std::uint8_t>(std::uniform_int_distribution<int>(1, all)(rng)); };
  return FeatureBundle{pick(cas::ALL), pick(num::ALL), pick(gen::ALL)};
}

}  // namespace

TEST_CASE("unification laws on random bundles") {
  std::mt19937 rng(20241015);
  const int cases = 20000;
  int failures_seen = 0;
  for (int i = 0; i < cases; ++i) {
    auto a = random_bundle(rng), b = random_bundle(rng), c = random_bundle(rng);

    auto ab = unify(a, b), ba = unify(b, a);
    REQUIRE(ab == ba);

    std::optional<FeatureBundle> left = ab ? unify(*ab, c) : std::nullopt;
    auto bc = unify(b, c);
    std::optional<FeatureBundle> right = bc ? unify(a, *bc) : std::nullopt;
    REQUIRE(left == right);

    REQUIRE(unify(a, a) == a);
    REQUIRE(unify(a, FeatureBundle::full()) == a);
    REQUIRE(unify(FeatureBundle::full(), a) == a);

    bool empty = (a.cas & b.cas) == 0 || (a.num & b.num) == 0 || (a.gen & b.gen) == 0;
    REQUIRE(ab.has_value() == !empty);
    if (ab) {
      CHECK(ab->cas == (a.cas & b.cas));
      CHECK(ab->num == (a.num & b.num));
      CHECK(ab->gen == (a.gen & b.gen));
    } else {
      ++failures_seen;
    }
  }
  // both outcomes must actually occur for the laws to mean anything
  CHECK(failures_seen > 0);
  CHECK(failures_seen < cases);
}

TEST_CASE("component formatting") {
  CHECK(format_component(Feature::Cas, cas::ALL) == "_");
  CHECK(format_component(Feature::Cas, cas::DAT) == "DAT");
  CHECK(format_component(Feature::Gen, gen::MAS | gen::NTR) == "MAS,NTR");
  CHECK(parse_component(Feature::Num, "PL") == num::PL);
  CHECK(parse_component(Feature::Num, "_") == num::ALL);
  CHECK(parse_component(Feature::Cas, "NOM,AKK") == (cas::NOM | cas::AKK));
  CHECK_FALSE(parse_component(Feature::Gen, "XYZ").has_value());
  CHECK_FALSE(parse_component(Feature::Gen, "").has_value());
  CHECK(format_bundle(FeatureBundle{cas::NOM, num::SG, gen::ALL}) == "cas=NOM num=SG gen=_");
}

TEST_CASE("every mask round-trips through text") {
  for (auto f : kAllFeatures) {
    for (int m = 1; m <= full_mask(f); ++m) {
      auto text = format_component(f, static_cast<std::uint8_t>(m));
      CHECK(parse_component(f, text) == m);
    }
  }
}
