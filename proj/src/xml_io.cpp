#include "bootlex/xml_io.hpp"

#include <algorithm>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "bootlex/error.hpp"

namespace bootlex {

std::string_view to_string(Layer l) {
  switch (l) {
    case Layer::Pos: return "POS";
    case Layer::Parse: return "PARSE";
    case Layer::Relation: break;
  }
  return "RELATIONS";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

using Attrs = std::vector<std::pair<std::string, std::string>>;

std::size_t attr_rank(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kAttributeOrder); ++i) {
    if (kAttributeOrder[i] == name) return i;
  }
  return std::size(kAttributeOrder);
}

std::string open_tag(const std::string& name, Attrs attrs, bool self_close = false) {
  std::stable_sort(attrs.begin(), attrs.end(),
                   [](const auto& a, const auto& b) { return attr_rank(a.first) < attr_rank(b.first); });
  std::string out = "<" + name;
  for (const auto& [k, v] : attrs) out += " " + k + "=\"" + xml_escape(v) + "\"";
  return out + (self_close ? "/>" : ">");
}

void features_attrs(Attrs& a, const FeatureBundle& f) {
  a.emplace_back("CAS", format_component(Feature::Cas, f.cas));
  a.emplace_back("NUM", format_component(Feature::Num, f.num));
  a.emplace_back("GEN", format_component(Feature::Gen, f.gen));
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

std::string leaf_tag(const ParseNode& n) { return n.assumed ? "XXX" : n.category; }

void write_node(std::ostream& os, const ParseNode& n, int indent) {
  Attrs a;
  if (n.is_leaf()) {
    features_attrs(a, n.features);
    if (n.src) a.emplace_back("SRC", std::string(to_string(*n.src)));
    if (n.assumed) a.emplace_back("AS", std::string(to_string(*n.assumed)));
    a.emplace_back("I", std::to_string(n.span.begin));
    if (n.reading) a.emplace_back("R", std::to_string(*n.reading));
    if (n.lemma) a.emplace_back("LEMMA", *n.lemma);
    os << pad(indent) << open_tag(leaf_tag(n), a) << xml_escape(n.surface) << "</" << leaf_tag(n) << ">\n";
    return;
  }
  if (!n.type.empty()) a.emplace_back("TYPE", n.type);
  a.emplace_back("RULE", n.rule.value_or(""));
  features_attrs(a, n.features);
  a.emplace_back("B", std::to_string(n.span.begin));
  a.emplace_back("E", std::to_string(n.span.end));
  os << pad(indent) << open_tag(n.category, a) << "\n";
  for (const auto& c : n.children) write_node(os, c, indent + 1);
  os << pad(indent) << "</" << n.category << ">\n";
}

void write_relation(std::ostream& os, const Relation& r, int indent) {
  os << pad(indent) << open_tag("MATCH", {{"PATTERN", r.pattern}}) << ratt_v(r.entity, r.values) << "</MATCH>\n";
}

}  // namespace

std::string export_xml(const AnnotatedDocument& ad, const std::set<Layer>& layers) {
  const auto& doc = ad.doc;
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    for (auto layer : layers) {
      const SegmentLayers* sl = i < ad.layers.size() ? &ad.layers[i] : nullptr;
      bool present = sl && ((layer == Layer::Pos && sl->pos) || (layer == Layer::Parse && sl->parse) ||
                            (layer == Layer::Relation && sl->relations));
      if (!present) {
        throw Error(ErrorCode::LayerMissing, std::string(to_string(layer)) + " layer missing for " + doc.id() +
                                                 " segment " + std::to_string(doc.segments[i].id));
      }
    }
  }
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << open_tag("DOCUMENT", {{"ID", doc.id()}}) << "\n";
  os << "  <TEXT>" << xml_escape(doc.source.text) << "</TEXT>\n";
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& seg = doc.segments[i];
    Attrs sa{{"ID", std::to_string(seg.id)}, {"KIND", std::string(to_string(seg.kind))}};
    if (seg.label) {
      sa.emplace_back("LABEL", *seg.label);
      sa.emplace_back("LB", std::to_string(seg.label_span->begin));
      sa.emplace_back("LE", std::to_string(seg.label_span->end));
    }
    os << "  " << open_tag("SEGMENT", sa) << "\n    <TOKENS>\n";
    for (const auto& t : seg.tokens) {
      os << "      "
         << open_tag("T", {{"B", std::to_string(t.span.begin)},
                           {"E", std::to_string(t.span.end)},
                           {"SHAPE", std::string(to_string(t.shape))}})
         << xml_escape(t.surface) << "</T>\n";
    }
    os << "    </TOKENS>\n";
    if (layers.contains(Layer::Pos)) {
      os << "    <POS>\n";
      const auto& pos = *ad.layers[i].pos;
      for (std::size_t k = 0; k < pos.size(); ++k) {
        os << "      " << open_tag("W", {{"I", std::to_string(k)}});
        for (const auto& r : pos[k].readings) {
          Attrs a{{"CLS", std::string(to_string(r.cls))}};
          features_attrs(a, r.features);
          a.emplace_back("SRC", std::string(to_string(r.src)));
          if (r.lemma) a.emplace_back("LEMMA", *r.lemma);
          os << open_tag("R", a, true);
        }
        os << "</W>\n";
      }
      os << "    </POS>\n";
    }
    if (layers.contains(Layer::Parse)) {
      const auto& p = *ad.layers[i].parse;
      os << "    "
         << open_tag("PARSE", {{"KIND", std::string(to_string(p.kind))}, {"TRUNCATED", p.truncated ? "1" : "0"}})
         << "\n";
      for (const auto& t : p.trees) write_node(os, t, 3);
      os << "    </PARSE>\n";
    }
    if (layers.contains(Layer::Relation)) {
      os << "    <RELATIONS>\n";
      for (const auto& r : *ad.layers[i].relations) write_relation(os, r, 3);
      os << "    </RELATIONS>\n";
    }
    os << "  </SEGMENT>\n";
  }
  os << "</DOCUMENT>\n";
  return os.str();
}

namespace {

namespace pt = boost::property_tree;

std::string attr(const pt::ptree& node, const char* name) { return node.get<std::string>(std::string("<xmlattr>.") + name); }

std::optional<std::string> opt_attr(const pt::ptree& node, const char* name) {
  auto v = node.get_optional<std::string>(std::string("<xmlattr>.") + name);
  if (!v) return std::nullopt;
  return *v;
}

std::size_t num_attr(const pt::ptree& node, const char* name) { return std::stoul(attr(node, name)); }

FeatureBundle features_from(const pt::ptree& node) {
  auto cas = parse_component(Feature::Cas, attr(node, "CAS"));
  auto num = parse_component(Feature::Num, attr(node, "NUM"));
  auto gen = parse_component(Feature::Gen, attr(node, "GEN"));
  if (!cas || !num || !gen) throw Error(ErrorCode::XmlError, "bad feature value");
  return FeatureBundle{*cas, *num, *gen};
}

ParseNode node_from(const std::string& tag, const pt::ptree& node) {
  ParseNode n;
  n.features = features_from(node);
  if (auto rule = opt_attr(node, "RULE")) {
    n.category = tag;
    n.rule = *rule;
    n.type = opt_attr(node, "TYPE").value_or("");
    n.span = Span{num_attr(node, "B"), num_attr(node, "E")};
    for (const auto& [child, c] : node) {
      if (child == "<xmlattr>") continue;
      n.children.push_back(node_from(child, c));
    }
    return n;
  }
  n.category = tag;
  if (auto as = opt_attr(node, "AS")) {
    auto cls = parse_pos_class(*as);
    if (!cls) throw Error(ErrorCode::XmlError, "bad AS value " + *as);
    n.assumed = *cls;
    n.category = *as;
  }
  if (auto src = opt_attr(node, "SRC")) {
    auto s = parse_reading_source(*src);
    if (!s) throw Error(ErrorCode::XmlError, "bad SRC value " + *src);
    n.src = *s;
  }
  std::size_t i = num_attr(node, "I");
  n.span = Span{i, i + 1};
  if (auto r = opt_attr(node, "R")) n.reading = std::stoul(*r);
  n.lemma = opt_attr(node, "LEMMA");
  n.surface = node.data();
  return n;
}

}  // namespace

AnnotatedDocument import_xml(std::string_view xml) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::XmlError, e.what());
  }
  AnnotatedDocument ad;
  try {
    const auto& root = tree.get_child("DOCUMENT");
    ad.doc.source.path = attr(root, "ID");
    ad.doc.source.text = root.get<std::string>("TEXT");
    for (const auto& [name, sn] : root) {
      if (name != "SEGMENT") continue;
      Segment seg;
      seg.id = num_attr(sn, "ID");
      seg.kind = attr(sn, "KIND") == "SENTENCE" ? SegmentKind::Sentence : SegmentKind::Telegraphic;
      if (auto label = opt_attr(sn, "LABEL")) {
        seg.label = *label;
        seg.label_span = Span{num_attr(sn, "LB"), num_attr(sn, "LE")};
      }
      SegmentLayers layers;
      for (const auto& [part, pn] : sn) {
        if (part == "TOKENS") {
          for (const auto& [tn, t] : pn) {
            if (tn != "T") continue;
            auto shape = parse_token_shape(attr(t, "SHAPE"));
            if (!shape) throw Error(ErrorCode::XmlError, "bad SHAPE");
            seg.tokens.push_back(Token{t.data(), Span{num_attr(t, "B"), num_attr(t, "E")}, *shape});
          }
        } else if (part == "POS") {
          std::vector<TaggedToken> pos;
          for (const auto& [wn, w] : pn) {
            if (wn != "W") continue;
            std::size_t i = num_attr(w, "I");
            if (i >= seg.tokens.size()) throw Error(ErrorCode::XmlError, "W index out of range");
            TaggedToken tt{seg.tokens[i], {}};
            for (const auto& [rn, r] : w) {
              if (rn != "R") continue;
              PosReading reading;
              auto cls = parse_pos_class(attr(r, "CLS"));
              auto src = parse_reading_source(attr(r, "SRC"));
              if (!cls || !src) throw Error(ErrorCode::XmlError, "bad reading");
              reading.cls = *cls;
              reading.src = *src;
              reading.features = features_from(r);
              reading.lemma = opt_attr(r, "LEMMA");
              tt.readings.push_back(std::move(reading));
            }
            pos.push_back(std::move(tt));
          }
          layers.pos = std::move(pos);
        } else if (part == "PARSE") {
          ParseResult p;
          p.kind = attr(pn, "KIND") == "FULL" ? ParseKind::Full : ParseKind::Partial;
          p.truncated = attr(pn, "TRUNCATED") == "1";
          for (const auto& [tag, t] : pn) {
            if (tag == "<xmlattr>") continue;
            p.trees.push_back(node_from(tag, t));
          }
          layers.parse = std::move(p);
        } else if (part == "RELATIONS") {
          std::vector<Relation> rels;
          for (const auto& [rn, r] : pn) {
            if (rn != "MATCH") continue;
            Relation rel;
            rel.pattern = opt_attr(r, "PATTERN").value_or("");
            rel.evidence = {EvidenceRef{ad.doc.source.path, seg.id}};
            for (const auto& [vn, v] : r.get_child("RATT-V")) {
              if (vn == "ENTITY") rel.entity = v.data();
              else if (vn == "VALUE") rel.values.push_back(RelationValue{v.data(), std::stoi(attr(v, "CNT"))});
            }
            rels.push_back(std::move(rel));
          }
          layers.relations = std::move(rels);
        }
      }
      ad.doc.segments.push_back(std::move(seg));
      ad.layers.push_back(std::move(layers));
    }
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::XmlError, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::XmlError, std::string("bad number: ") + e.what());
  }
  return ad;
}

std::string render_tree(const ParseNode& n, int indent) {
  Attrs a;
  std::string tag = n.category;
  if (n.is_leaf()) {
    if (n.category == "PRP") a.emplace_back("CAS", format_component(Feature::Cas, n.features.cas));
    if (n.src && is_heuristic(*n.src)) a.emplace_back("SRC", std::string(to_string(*n.src)));
    if (n.assumed) {
      tag = "XXX";
      a.emplace_back("AS", std::string(to_string(*n.assumed)));
    }
    return pad(indent) + open_tag(tag, a) + xml_escape(n.surface) + "</" + tag + ">\n";
  }
  if (!n.type.empty()) {
    a.emplace_back("TYPE", n.type);
    a.emplace_back("RULE", n.rule.value_or(""));
    features_attrs(a, n.features);
  } else if (n.category == "PP") {
    a.emplace_back("CAS", format_component(Feature::Cas, n.features.cas));
  } else {
    a.emplace_back("RULE", n.rule.value_or(""));
  }
  std::string out = pad(indent) + open_tag(tag, a) + "\n";
  for (const auto& c : n.children) out += render_tree(c, indent + 1);
  return out + pad(indent) + "</" + tag + ">\n";
}

std::string ratt_v(const std::string& entity, std::span<const RelationValue> values) {
  std::string out = "<RATT-V><ENTITY>" + xml_escape(entity) + "</ENTITY>";
  for (const auto& v : values) {
    out += open_tag("VALUE", {{"CNT", std::to_string(v.count)}}) + xml_escape(v.value) + "</VALUE>";
  }
  return out + "</RATT-V>";
}

std::string relations_xml(const RelationTable& table) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<RELATIONS>\n";
  for (const auto& row : table.rows()) out += ratt_v(row.entity, row.values) + "\n";
  return out + "</RELATIONS>\n";
}

}  // namespace bootlex
