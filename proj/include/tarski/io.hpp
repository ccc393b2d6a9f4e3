#pragma once

// Text and JSON formats. Elements are written in their canonical text form
// (see format_element), so decoding always needs the GroupSpec.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tarski/cayley.hpp"
#include "tarski/decomposition.hpp"
#include "tarski/doubling.hpp"
#include "tarski/error.hpp"
#include "tarski/forest.hpp"
#include "tarski/group.hpp"

namespace tarski {

using json = nlohmann::json;

namespace detail {

inline json elements_json(const GroupSpec& spec, const auto& range) {
  json out = json::array();
  for (const Element& e : range) out.push_back(format_element(spec, e));
  return out;
}

inline std::vector<Element> elements_from_json(const GroupSpec& spec, const json& j) {
  std::vector<Element> out;
  for (const auto& s : j) out.push_back(parse_element(spec, s.get<std::string>()));
  return out;
}

inline ElementSet element_set_from_json(const GroupSpec& spec, const json& j) {
  auto v = elements_from_json(spec, j);
  return ElementSet(v.begin(), v.end());
}

inline json pairs_json(const GroupSpec& spec,
                       const std::vector<std::pair<Element, Element>>& ps) {
  json out = json::array();
  for (const auto& [x, y] : ps)
    out.push_back(json::array({format_element(spec, x), format_element(spec, y)}));
  return out;
}

inline std::vector<std::pair<Element, Element>> pairs_from_json(const GroupSpec& spec,
                                                                const json& j) {
  std::vector<std::pair<Element, Element>> out;
  for (const auto& p : j)
    out.emplace_back(parse_element(spec, p.at(0).get<std::string>()),
                     parse_element(spec, p.at(1).get<std::string>()));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Patches

/// Edge-list text: `#` header lines (group, radius, one `# v` line per vertex
/// with index, distance and normal form) followed by
/// `source<TAB>label<TAB>target` lines.
inline void write_edge_list(std::ostream& os, const CayleyPatch& p) {
  os << "# group\t" << p.spec.to_string() << "\n";
  os << "# radius\t" << p.radius << "\n";
  for (std::size_t v = 0; v < p.size(); ++v)
    os << "# v\t" << v << "\t" << p.distance[v] << "\t" << format_element(p.spec, p.vertices[v])
       << "\n";
  for (const auto& e : p.edges)
    os << e.source << "\t" << p.labels[e.label].text() << "\t" << e.target << "\n";
}

/// Forest edges in the same format; each unoriented edge is written once,
/// from its smaller endpoint, with the first label that realizes it.
inline void write_forest_edge_list(std::ostream& os, const CayleyPatch& p,
                                   const ForestSample& f) {
  os << "# group\t" << p.spec.to_string() << "\n";
  os << "# radius\t" << p.radius << "\n";
  os << "# seed\t" << f.seed << "\n";
  for (std::size_t v = 0; v < p.size(); ++v)
    os << "# v\t" << v << "\t" << p.distance[v] << "\t" << format_element(p.spec, p.vertices[v])
       << "\n";
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> label_of;
  for (const auto& e : p.edges)
    if (e.source < e.target) label_of.try_emplace({e.source, e.target}, e.label);
  for (const auto& [u, v] : f.edges) {
    auto it = label_of.find({u, v});
    const std::string label = it == label_of.end() ? "?" : p.labels[it->second].text();
    os << u << "\t" << label << "\t" << v << "\n";
  }
}

struct EdgeList {
  std::map<std::string, std::string> header;
  struct Vertex {
    std::size_t index = 0;
    std::size_t distance = 0;
    std::string normal_form;
    friend bool operator==(const Vertex&, const Vertex&) = default;
  };
  std::vector<Vertex> vertices;
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
};

inline EdgeList read_edge_list(std::istream& is) {
  EdgeList out;
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == '\t') {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };
  auto number = [&](const std::string& s) -> std::size_t {
    try {
      std::size_t used = 0;
      auto v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ParseError("expected a vertex index, got '" + s + "'", lineno, 1);
    }
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto parts = split(line);
    if (line.front() == '#') {
      if (parts.size() == 4 && parts[0] == "# v") {
        out.vertices.push_back({number(parts[1]), number(parts[2]), parts[3]});
      } else if (parts.size() == 2) {
        out.header[parts[0].substr(std::min<std::size_t>(2, parts[0].size()))] = parts[1];
      } else {
        throw ParseError("malformed header line", lineno, 1);
      }
      continue;
    }
    if (parts.size() != 3) throw ParseError("expected source<TAB>label<TAB>target", lineno, 1);
    out.edges.emplace_back(number(parts[0]), parts[1], number(parts[2]));
  }
  return out;
}

inline json patch_to_json(const CayleyPatch& p) {
  json j;
  j["group"] = p.spec.to_string();
  j["generators"] = p.spec.names();
  j["radius"] = p.radius;
  json labels = json::array();
  for (const auto& l : p.labels) labels.push_back(l.text());
  j["labels"] = labels;
  json vs = json::array();
  for (std::size_t v = 0; v < p.size(); ++v)
    vs.push_back({{"index", v}, {"distance", p.distance[v]},
                  {"element", format_element(p.spec, p.vertices[v])}});
  j["vertices"] = vs;
  json es = json::array();
  for (const auto& e : p.edges)
    es.push_back(json::array({e.source, p.labels[e.label].text(), e.target}));
  j["edges"] = es;
  return j;
}

// ---------------------------------------------------------------------------
// Doubling

inline json translating_sets_to_json(const GroupSpec& spec, const TranslatingSets& ts) {
  return {{"s1", detail::elements_json(spec, ts.s1)}, {"s2", detail::elements_json(spec, ts.s2)}};
}

inline TranslatingSets translating_sets_from_json(const GroupSpec& spec, const json& j) {
  return {detail::elements_from_json(spec, j.at("s1")),
          detail::elements_from_json(spec, j.at("s2"))};
}

inline json violator_to_json(const GroupSpec& spec, const Violator& v) {
  return {{"kind", "violator"},
          {"a1", detail::elements_json(spec, v.a1)},
          {"a2", detail::elements_json(spec, v.a2)},
          {"union_size", v.union_size}};
}

inline json verdict_to_json(const GroupSpec& spec, const DoublingVerdict& v) {
  if (const auto* c = std::get_if<Certificate>(&v)) {
    return {{"kind", "certificate"},
            {"phi1", detail::pairs_json(spec, c->phi1)},
            {"phi2", detail::pairs_json(spec, c->phi2)}};
  }
  return violator_to_json(spec, std::get<Violator>(v));
}

/// Violators are rebuilt through make_violator, so a stored union size that
/// disagrees with the recomputed one is rejected.
inline Violator violator_from_json(const GroupSpec& spec, const TranslatingSets& ts,
                                   const json& j) {
  Violator v = make_violator(spec, ts, detail::element_set_from_json(spec, j.at("a1")),
                             detail::element_set_from_json(spec, j.at("a2")));
  if (v.union_size != j.at("union_size").get<std::size_t>())
    throw PreconditionError("stored union size does not match the recomputed one");
  return v;
}

inline DoublingVerdict verdict_from_json(const GroupSpec& spec, const TranslatingSets& ts,
                                         const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "certificate")
    return Certificate{detail::pairs_from_json(spec, j.at("phi1")),
                       detail::pairs_from_json(spec, j.at("phi2"))};
  if (kind == "violator") return violator_from_json(spec, ts, j);
  throw PreconditionError("unknown verdict kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Decomposition

inline json decomposition_to_json(const GroupSpec& spec, const PartialDecomposition& pd) {
  auto family = [&](const auto& fam) {
    json out = json::array();
    for (const auto& [s, piece] : fam)
      out.push_back({{"translator", format_element(spec, s)},
                     {"elements", detail::elements_json(spec, piece)}});
    return out;
  };
  return {{"pieces1", family(pd.pieces1)},
          {"pieces2", family(pd.pieces2)},
          {"domain", detail::elements_json(spec, pd.domain)}};
}

inline PartialDecomposition decomposition_from_json(const GroupSpec& spec, const json& j) {
  auto family = [&](const json& arr) {
    std::vector<std::pair<Element, ElementSet>> out;
    for (const auto& p : arr)
      out.emplace_back(parse_element(spec, p.at("translator").get<std::string>()),
                       detail::element_set_from_json(spec, p.at("elements")));
    return out;
  };
  PartialDecomposition pd;
  pd.pieces1 = family(j.at("pieces1"));
  pd.pieces2 = family(j.at("pieces2"));
  pd.domain = detail::elements_from_json(spec, j.at("domain"));
  return pd;
}

inline json report_to_json(const GroupSpec& spec, const DecompositionReport& r) {
  return {{"pass", r.pass()},
          {"disjoint", r.disjoint()},
          {"overlaps", detail::elements_json(spec, r.overlaps)},
          {"uncovered1", detail::elements_json(spec, r.uncovered1)},
          {"uncovered2", detail::elements_json(spec, r.uncovered2)},
          {"indeterminate", detail::elements_json(spec, r.indeterminate)}};
}

inline DecompositionReport report_from_json(const GroupSpec& spec, const json& j) {
  return {detail::elements_from_json(spec, j.at("overlaps")),
          detail::elements_from_json(spec, j.at("uncovered1")),
          detail::elements_from_json(spec, j.at("uncovered2")),
          detail::elements_from_json(spec, j.at("indeterminate"))};
}

/// Word-list rendering of the pieces, one translator per line.
inline void print_decomposition(std::ostream& os, const GroupSpec& spec,
                                const PartialDecomposition& pd) {
  for (int i : {1, 2}) {
    const auto& fam = i == 1 ? pd.pieces1 : pd.pieces2;
    for (const auto& [s, piece] : fam) {
      os << (i == 1 ? "P" : "Q") << "[" << format_element(spec, s) << "] (" << piece.size()
         << "): {";
      bool first = true;
      for (const Element& x : piece) {
        os << (first ? "" : ", ") << format_element(spec, x);
        first = false;
      }
      os << "}\n";
    }
  }
}

inline json freeness_to_json(const FreenessResult& r) {
  return {{"free", r.free},
          {"length", r.length},
          {"witness", r.witness ? json(format_relation(*r.witness)) : json(nullptr)}};
}

inline FreenessResult freeness_from_json(const json& j) {
  FreenessResult r;
  r.free = j.at("free").get<bool>();
  r.length = j.at("length").get<std::size_t>();
  if (!j.at("witness").is_null()) {
    const GroupSpec gh = GroupSpec::free(2).with_names({"g", "h"});
    r.witness = parse_word(gh, j.at("witness").get<std::string>());
  }
  return r;
}

inline json bound_report_to_json(const TarskiBoundReport& r) {
  return {{"upper", r.upper ? json(*r.upper) : json(nullptr)},
          {"lower", r.lower},
          {"justification", r.justification}};
}

inline TarskiBoundReport bound_report_from_json(const json& j) {
  TarskiBoundReport r;
  if (!j.at("upper").is_null()) r.upper = j.at("upper").get<std::size_t>();
  r.lower = j.at("lower").get<std::size_t>();
  r.justification = j.at("justification").get<std::vector<std::string>>();
  return r;
}

// ---------------------------------------------------------------------------
// Forest audit

inline json audit_to_json(const GroupSpec& spec, const ForestAudit& a) {
  auto edges = [&](const std::vector<DirectedEdge>& es) {
    json out = json::array();
    for (const auto& e : es)
      out.push_back(json::array({format_element(spec, e.from), e.label, format_element(spec, e.to)}));
    return out;
  };
  json ledger = json::array();
  for (const auto& l : a.ledger)
    ledger.push_back({{"name", l.name}, {"lhs", l.lhs}, {"relation", l.relation},
                      {"rhs", l.rhs}, {"pass", l.pass}});
  return {{"E", edges(a.e)},
          {"E1", edges(a.e1)},
          {"E2", edges(a.e2)},
          {"E3", edges(a.e3)},
          {"lambda", {{"vertices", detail::elements_json(spec, a.lambda_vertices)},
                      {"edges", detail::pairs_json(spec, a.lambda_edges)}}},
          {"ledger", ledger},
          {"all_pass", a.all_pass()}};
}

inline ForestAudit audit_from_json(const GroupSpec& spec, const json& j) {
  auto edges = [&](const json& arr) {
    std::vector<DirectedEdge> out;
    for (const auto& e : arr)
      out.push_back({parse_element(spec, e.at(0).get<std::string>()), e.at(1).get<std::string>(),
                     parse_element(spec, e.at(2).get<std::string>())});
    return out;
  };
  ForestAudit a;
  a.e = edges(j.at("E"));
  a.e1 = edges(j.at("E1"));
  a.e2 = edges(j.at("E2"));
  a.e3 = edges(j.at("E3"));
  a.lambda_vertices = detail::elements_from_json(spec, j.at("lambda").at("vertices"));
  a.lambda_edges = detail::pairs_from_json(spec, j.at("lambda").at("edges"));
  for (const auto& l : j.at("ledger"))
    a.ledger.push_back({l.at("name").get<std::string>(), l.at("lhs").get<std::int64_t>(),
                        l.at("relation").get<std::string>(), l.at("rhs").get<std::int64_t>(),
                        l.at("pass").get<bool>()});
  return a;
}

inline json degree_summary_to_json(const DegreeSummary& s) {
  return {{"samples", s.samples}, {"mean", s.mean},     {"min", s.min},
          {"max", s.max},         {"threshold", s.threshold}, {"meets_threshold", s.meets_threshold}};
}

}  // namespace tarski
