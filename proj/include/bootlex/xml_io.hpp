#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bootlex/chart.hpp"
#include "bootlex/doc_model.hpp"
#include "bootlex/pos.hpp"
#include "bootlex/relations.hpp"

namespace bootlex {

enum class Layer { Pos, Parse, Relation };
std::string_view to_string(Layer l);

/// Annotation layers of one segment; absent layers were not computed.
struct SegmentLayers {
  std::optional<std::vector<TaggedToken>> pos;
  std::optional<ParseResult> parse;
  std::optional<std::vector<Relation>> relations;
  friend bool operator==(const SegmentLayers&, const SegmentLayers&) = default;
};

struct AnnotatedDocument {
  Document doc;
  std::vector<SegmentLayers> layers;  // parallel to doc.segments
  friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

std::string xml_escape(std::string_view text);

/// Canonical attribute order, for byte-stable output.
inline constexpr std::string_view kAttributeOrder[] = {"TYPE", "RULE", "CAS", "NUM", "GEN",
                                                       "SRC",  "AS",   "CNT"};

/// Full, lossless rendering of the requested layers. Throws LayerMissing when
/// a requested layer has not been computed for some segment.
std::string export_xml(const AnnotatedDocument& doc, const std::set<Layer>& layers);

/// Inverse of export_xml. Throws XmlError.
AnnotatedDocument import_xml(std::string_view xml);

/// Display rendering of a tree in the compact style of the annotation
/// vocabulary: TYPE/RULE/CAS/NUM/GEN on typed NPs, CAS on PPs and
/// prepositions, SRC on heuristic leaves, AS on hypothesised ones.
std::string render_tree(const ParseNode& node, int indent = 0);

/// One <RATT-V> element per line: <RATT-V><ENTITY>..</ENTITY><VALUE CNT="n">..</VALUE></RATT-V>
std::string ratt_v(const std::string& entity, std::span<const RelationValue> values);
std::string relations_xml(const RelationTable& table);

}  // namespace bootlex
