#include "bootlex/measurement.hpp"

#include <algorithm>
#include <charconv>

#include "bootlex/error.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace bootlex {

std::string_view to_string(Resolution r) { return r == Resolution::Focus ? "FOCUS" : "COMPOUND_SPLIT"; }

void FocusRegister::update(std::string entity, std::size_t segment_id) {
  current_ = std::move(entity);
  set_at_ = segment_id;
}

void FocusRegister::clear() {
  current_.reset();
  set_at_ = 0;
}

MeasureConfig MeasureConfig::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

MeasureConfig MeasureConfig::parse(std::string_view text, const std::string& origin) {
  MeasureConfig cfg;
  cfg.units.clear();
  cfg.properties.clear();
  cfg.linking.clear();
  for (const auto& [number, line] : resource_lines(text)) {
    auto f = split_ws(line);
    if (f[0] == "unit" && f.size() == 2) {
      cfg.units.emplace(f[1]);
    } else if (f[0] == "property" && f.size() == 3) {
      cfg.properties.emplace(to_lower_ascii(f[1]), std::string(f[2]));
    } else if (f[0] == "link" && f.size() == 2) {
      cfg.linking.emplace_back(f[1]);
    } else {
      resource_error(origin, number, "expected 'unit U', 'property SUFFIX Name' or 'link L'");
    }
  }
  // longest linking element first
  std::stable_sort(cfg.linking.begin(), cfg.linking.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return cfg;
}

std::optional<double> parse_german_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', '.');
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

namespace {

std::string organ_from_prefix(std::string prefix, const MeasureConfig& config,
                              const std::set<std::string, std::less<>>& known) {
  std::string organ = utf8::upper_first(prefix);
  if (known.contains(organ)) return organ;
  for (const auto& link : config.linking) {
    if (organ.size() > link.size() && organ.ends_with(link)) {
      std::string stripped = organ.substr(0, organ.size() - link.size());
      if (known.contains(stripped)) return stripped;
    }
  }
  return organ;
}

}  // namespace

std::optional<Measurement> extract_measurement(const Segment& segment, const FocusRegister& focus,
                                               const MeasureConfig& config,
                                               const std::set<std::string, std::less<>>& known_entities,
                                               const std::string& doc_id) {
  const auto& toks = segment.tokens;
  std::size_t num = toks.size();
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].shape == TokenShape::Number && config.units.contains(toks[i + 1].surface)) {
      num = i;
      break;
    }
  }
  if (num == toks.size()) return std::nullopt;
  auto value = parse_german_number(toks[num].surface);
  if (!value || *value <= 0) return std::nullopt;

  for (std::size_t i = 0; i < num; ++i) {
    std::string lower = to_lower_ascii(toks[i].surface);
    for (const auto& [suffix, property] : config.properties) {
      if (!lower.ends_with(suffix)) continue;
      Measurement m;
      m.property = property;
      m.value = *value;
      m.unit = toks[num + 1].surface;
      m.evidence = EvidenceRef{doc_id, segment.id};
      if (lower.size() == suffix.size()) {
        if (!focus.current()) {
          throw Error(ErrorCode::FocusUnresolved, doc_id + " segment " + std::to_string(segment.id) + ": '" +
                                                      toks[i].surface + "' with no entity in focus");
        }
        m.entity = *focus.current();
        m.resolved_by = Resolution::Focus;
      } else {
        m.entity = organ_from_prefix(toks[i].surface.substr(0, toks[i].surface.size() - suffix.size()), config,
                                     known_entities);
        m.resolved_by = Resolution::CompoundSplit;
      }
      return m;
    }
  }
  return std::nullopt;
}

ValueRange property_range(std::span<const Measurement> measurements, std::string_view entity,
                          std::string_view property, std::string_view unit) {
  ValueRange r;
  for (const auto& m : measurements) {
    if (m.entity != entity || m.property != property || m.unit != unit) continue;
    if (r.n == 0) {
      r.min = r.max = m.value;
    } else {
      r.min = std::min(r.min, m.value);
      r.max = std::max(r.max, m.value);
    }
    ++r.n;
  }
  if (r.n == 0) {
    throw Error(ErrorCode::NoData, "no " + std::string(property) + " measurements for " + std::string(entity));
  }
  return r;
}

}  // namespace bootlex
