#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bootlex/doc_model.hpp"
#include "bootlex/relations.hpp"

namespace bootlex {

enum class Resolution { CompoundSplit, Focus };
std::string_view to_string(Resolution r);

struct Measurement {
  std::string entity;
  std::string property;
  double value = 0.0;
  std::string unit;
  Resolution resolved_by = Resolution::CompoundSplit;
  EvidenceRef evidence;
  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Most recently introduced entity of the current document.
class FocusRegister {
 public:
  const std::optional<std::string>& current() const { return current_; }
  std::size_t set_at() const { return set_at_; }
  void update(std::string entity, std::size_t segment_id);
  void clear();

 private:
  std::optional<std::string> current_;
  std::size_t set_at_ = 0;
};

/// Units, property suffixes ("gewicht" -> Gewicht) and compound linking
/// elements. Resource format:
///   unit g
///   property gewicht Gewicht
///   link n
struct MeasureConfig {
  std::set<std::string, std::less<>> units{"g", "kg", "cm", "mm", "ml"};
  std::map<std::string, std::string, std::less<>> properties{{"gewicht", "Gewicht"},
                                                             {"durchmesser", "Durchmesser"}};
  std::vector<std::string> linking{"n", "en", "s", "es"};

  static MeasureConfig load(const std::filesystem::path& path);
  static MeasureConfig parse(std::string_view text, const std::string& origin = "<string>");
};

/// "<organ>gewicht <number> g." splits the compound; a bare "Gewicht <n> g."
/// refers to the entity in focus. `known_entities` lets the compound split
/// drop a linking element ("Nierengewicht" -> "Niere"). Returns nullopt when
/// the segment has no number followed by a unit. Throws FocusUnresolved.
std::optional<Measurement> extract_measurement(const Segment& segment, const FocusRegister& focus,
                                               const MeasureConfig& config,
                                               const std::set<std::string, std::less<>>& known_entities,
                                               const std::string& doc_id);

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// Range over measurements of one entity/property/unit. Throws NoData.
ValueRange property_range(std::span<const Measurement> measurements, std::string_view entity,
                          std::string_view property, std::string_view unit);

/// Parses "1490" or "13,5".
std::optional<double> parse_german_number(std::string_view text);

}  // namespace bootlex
