#pragma once

// Command implementations behind the `tarski` executable. Each command writes
// its report to `out` and returns the process exit code:
//   0  success / positive result
//   1  mathematical negative result (violator where a certificate was
//      requested, failed verification, failed audit, relation found)
//   2  usage, parse or resource errors (raised as tarski::Error and mapped
//      by the executable)

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tarski/cayley.hpp"
#include "tarski/decomposition.hpp"
#include "tarski/doubling.hpp"
#include "tarski/error.hpp"
#include "tarski/forest.hpp"
#include "tarski/group.hpp"
#include "tarski/io.hpp"

namespace tarski::cli {

enum class Format { Text, Json };

struct JobConfig {
  std::string group = "free:2";
  /// Comma-separated generator symbols replacing the model defaults.
  std::string generators;
  std::string s1 = "1,a";
  std::string s2 = "1,b";
  std::size_t radius = 2;
  std::size_t max_radius = 6;
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  std::size_t pairs = 100;
  std::size_t max_set_size = 6;
  std::size_t vertex_budget = kDefaultVertexBudget;
  std::string g;
  std::string h;
  std::size_t length = 8;
  std::string export_kind;  // "", "edges" or "json" for `ball`
  std::vector<std::string> inputs;
  Format format = Format::Text;
};

/// TARSKI_VERTEX_BUDGET overrides the default vertex budget.
inline std::size_t default_vertex_budget() {
  if (const char* env = std::getenv("TARSKI_VERTEX_BUDGET")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw ParseError("TARSKI_VERTEX_BUDGET is not a number", 1, 1);
    }
  }
  return kDefaultVertexBudget;
}

inline GroupSpec make_spec(const JobConfig& c) {
  GroupSpec spec = parse_group_spec(c.group);
  if (!c.generators.empty()) {
    std::vector<std::string> names;
    for (auto& [item, col] : split_top_level(c.generators)) names.push_back(item);
    try {
      spec = spec.with_names(std::move(names));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), 1, 1);
    }
  }
  return spec;
}

inline GroupSpec spec_from_document(const json& doc) {
  GroupSpec spec = parse_group_spec(doc.at("group").get<std::string>());
  if (doc.contains("generators"))
    spec = spec.with_names(doc.at("generators").get<std::vector<std::string>>());
  return spec;
}

namespace detail {

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

inline json header(const char* command, const GroupSpec& spec) {
  return {{"command", command}, {"group", spec.to_string()}, {"generators", spec.names()}};
}

inline TranslatingSets parse_sets(const GroupSpec& spec, const JobConfig& c) {
  return {parse_element_list(spec, c.s1), parse_element_list(spec, c.s2)};
}

inline std::string join(const GroupSpec& spec, const auto& range) {
  std::string s = "{";
  bool first = true;
  for (const Element& e : range) {
    if (!first) s += ", ";
    s += format_element(spec, e);
    first = false;
  }
  return s + "}";
}

}  // namespace detail

inline int cmd_ball(const JobConfig& c, std::ostream& out) {
  const GroupSpec spec = make_spec(c);
  const CayleyPatch p =
      enumerate_ball(spec, GeneratingSet::standard(spec), c.radius, c.vertex_budget);
  if (c.export_kind == "edges") {
    write_edge_list(out, p);
    return 0;
  }
  if (c.export_kind == "json") {
    detail::emit(out, patch_to_json(p));
    return 0;
  }
  if (!c.export_kind.empty()) throw ParseError("unknown export kind '" + c.export_kind + "'", 1, 1);
  const auto spheres = sphere_sizes(p);
  const std::size_t undirected = simple_graph(p).edges.size();
  if (c.format == Format::Json) {
    json j = detail::header("ball", spec);
    j["radius"] = c.radius;
    j["vertices"] = p.size();
    j["directed_edges"] = p.edges.size();
    j["undirected_edges"] = undirected;
    j["sphere_sizes"] = spheres;
    detail::emit(out, j);
  } else {
    out << "group " << spec.to_string() << ", radius " << c.radius << "\n";
    out << "vertices: " << p.size() << "\n";
    out << "labeled edges: " << p.edges.size() << " (" << undirected << " unoriented)\n";
    out << "sphere sizes:";
    for (auto s : spheres) out << " " << s;
    out << "\n";
  }
  return 0;
}

inline int cmd_check(const JobConfig& c, std::ostream& out) {
  const GroupSpec spec = make_spec(c);
  const TranslatingSets ts = detail::parse_sets(spec, c);
  const CayleyPatch p =
      enumerate_ball(spec, GeneratingSet::standard(spec), c.radius, c.vertex_budget);
  const DoublingVerdict v = check_domain(spec, ts, p.vertices);
  if (c.format == Format::Json) {
    json j = detail::header("check", spec);
    j["radius"] = c.radius;
    j["translating_sets"] = translating_sets_to_json(spec, ts);
    j["domain_size"] = p.size();
    j["verdict"] = verdict_to_json(spec, v);
    detail::emit(out, j);
  } else if (const auto* viol = std::get_if<Violator>(&v)) {
    out << "violator on ball of radius " << c.radius << " (" << p.size() << " elements)\n";
    out << "A1 = " << detail::join(spec, viol->a1) << "\n";
    out << "A2 = " << detail::join(spec, viol->a2) << "\n";
    out << "|A1 S1 u A2 S2| = " << viol->union_size << " < " << viol->a1.size() + viol->a2.size()
        << " = |A1| + |A2|\n";
  } else {
    out << "certificate on ball of radius " << c.radius << " (" << p.size() << " elements): "
        << "doubling inequality holds for all A1, A2 in the ball; m + n = " << ts.total() << "\n";
  }
  return is_certificate(v) ? 0 : 1;
}

inline int cmd_violate(const JobConfig& c, std::ostream& out) {
  const GroupSpec spec = make_spec(c);
  const TranslatingSets ts = detail::parse_sets(spec, c);
  const auto found = minimal_violating_radius(spec, GeneratingSet::standard(spec), ts,
                                              c.max_radius, c.vertex_budget);
  if (c.format == Format::Json) {
    json j = detail::header("violate", spec);
    j["max_radius"] = c.max_radius;
    j["translating_sets"] = translating_sets_to_json(spec, ts);
    j["found"] = found.has_value();
    j["radius"] = found ? json(found->radius) : json(nullptr);
    j["violator"] = found ? violator_to_json(spec, found->violator) : json(nullptr);
    detail::emit(out, j);
  } else if (found) {
    const auto& v = found->violator;
    out << "violator at radius " << found->radius << "\n";
    out << "A1 = " << detail::join(spec, v.a1) << "\n";
    out << "A2 = " << detail::join(spec, v.a2) << "\n";
    out << "|A1 S1 u A2 S2| = " << v.union_size << " < " << v.a1.size() + v.a2.size() << "\n";
  } else {
    out << "no violator up to radius " << c.max_radius << "\n";
  }
  return found ? 0 : 1;
}

inline int cmd_decompose(const JobConfig& c, std::ostream& out) {
  const GroupSpec spec = make_spec(c);
  const TranslatingSets ts = detail::parse_sets(spec, c);
  const CayleyPatch p =
      enumerate_ball(spec, GeneratingSet::standard(spec), c.radius, c.vertex_budget);
  const DoublingVerdict v = check_domain(spec, ts, p.vertices);
  json j = detail::header("decompose", spec);
  j["radius"] = c.radius;
  j["translating_sets"] = translating_sets_to_json(spec, ts);
  j["verdict"] = verdict_to_json(spec, v);
  const auto* cert = std::get_if<Certificate>(&v);
  if (!cert) {
    if (c.format == Format::Json) {
      j["decomposition"] = nullptr;
      j["report"] = nullptr;
      detail::emit(out, j);
    } else {
      out << "no decomposition: the ball admits a violator (run `check` for details)\n";
    }
    return 1;
  }
  const PartialDecomposition pd = pieces_from_certificate(spec, *cert, ts);
  const DecompositionReport r = verify_decomposition(spec, pd, p.vertices);
  if (c.format == Format::Json) {
    j["decomposition"] = decomposition_to_json(spec, pd);
    j["report"] = report_to_json(spec, r);
    j["nonempty_pieces"] = pd.nonempty_pieces();
    j["m_plus_n"] = ts.total();
    detail::emit(out, j);
  } else {
    print_decomposition(out, spec, pd);
    out << "nonempty pieces: " << pd.nonempty_pieces() << ", m + n = " << ts.total() << "\n";
    out << "verification on the full ball: " << (r.pass() ? "pass" : "FAIL") << "\n";
  }
  return r.pass() ? 0 : 1;
}

/// Random interior subsets for the counting audit: sizes uniform in
/// [0, max_set_size], never both empty.
inline std::pair<ElementSet, ElementSet> random_interior_pair(const CayleyPatch& p,
                                                              std::size_t max_set_size, Rng& rng) {
  const auto interior = p.interior();
  if (interior.empty()) throw PreconditionError("patch has no interior vertices");
  const std::size_t cap = std::min(max_set_size, interior.size());
  std::uniform_int_distribution<std::size_t> size_dist(0, cap);
  auto draw = [&](std::size_t k) {
    std::vector<std::size_t> pool = interior;
    ElementSet s;
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      s.insert(p.vertices[pool[i]]);
    }
    return s;
  };
  while (true) {
    const std::size_t k1 = size_dist(rng), k2 = size_dist(rng);
    if (k1 + k2 == 0) continue;
    ElementSet a1 = draw(k1);
    ElementSet a2 = draw(k2);
    return {std::move(a1), std::move(a2)};
  }
}

inline int cmd_forest_audit(const JobConfig& c, std::ostream& out) {
  const GroupSpec spec = make_spec(c);
  const GeneratingSet gens = GeneratingSet::standard(spec);
  if (gens.size() != 3)
    throw PreconditionError("forest-audit needs a group with exactly three generators (a, b, c)");
  const auto& names = spec.names();
  const TranslatingSets ts{{identity(spec), gens.generators()[0].second},
                           {identity(spec), gens.generators()[1].second,
                            gens.generators()[2].second}};
  const CayleyPatch p = enumerate_ball(spec, gens, c.radius, c.vertex_budget);
  const SimpleGraph g = simple_graph(p);

  Rng rng(c.seed);
  json audits = json::array();
  std::size_t passed = 0;
  for (std::size_t k = 0; k < c.pairs; ++k) {
    const auto [a1, a2] = random_interior_pair(p, c.max_set_size, rng);
    const std::uint64_t fs = sample_seed(c.seed, k);
    const ForestSample f = sample_forest_containing_a_edges(g, names[0], fs);
    const ForestAudit au = audit_counting_argument(p, f, a1, a2, ts, gens);
    passed += au.all_pass() ? 1 : 0;
    audits.push_back({{"a1", tarski::detail::elements_json(spec, a1)},
                      {"a2", tarski::detail::elements_json(spec, a2)},
                      {"forest_seed", fs},
                      {"audit", audit_to_json(spec, au)}});
  }
  ElementSet interior_set;
  for (auto v : p.interior()) interior_set.insert(p.vertices[v]);
  const DegreeSummary deg = degree_statistics(p, names[0], interior_set, c.samples, c.seed);

  if (c.format == Format::Json) {
    json j = detail::header("forest-audit", spec);
    j["radius"] = c.radius;
    j["seed"] = c.seed;
    j["audits"] = audits;
    j["passed"] = passed;
    j["total"] = c.pairs;
    j["interior_degrees"] = degree_summary_to_json(deg);
    detail::emit(out, j);
  } else {
    out << "forest audits on " << spec.to_string() << " ball of radius " << c.radius << ": "
        << passed << "/" << c.pairs << " passed\n";
    for (std::size_t k = 0; k < audits.size(); ++k) {
      const auto& a = audits[k]["audit"];
      if (a["all_pass"].get<bool>()) continue;
      out << "audit " << k << " failed:";
      for (const auto& l : a["ledger"])
        if (!l["pass"].get<bool>()) out << " [" << l["name"].get<std::string>() << "]";
      out << "\n";
    }
    out << "interior degree sum over " << deg.samples << " forests: mean " << deg.mean
        << ", min " << deg.min << ", max " << deg.max << ", threshold 5|A2| = " << deg.threshold
        << (deg.meets_threshold ? " (met)" : " (not met)") << "\n";
  }
  return passed == c.pairs ? 0 : 1;
}

inline int cmd_free_check(const JobConfig& c, std::ostream& out) {
  const GroupSpec spec = make_spec(c);
  if (spec.generator_count() < 2 && (c.g.empty() || c.h.empty()))
    throw PreconditionError("free-check needs --g and --h for a one-generator group");
  const Element g = c.g.empty() ? generator(spec, 0) : parse_element(spec, c.g);
  const Element h = c.h.empty() ? generator(spec, 1) : parse_element(spec, c.h);
  const FreenessResult r = free_up_to_length(spec, g, h, c.length);
  if (c.format == Format::Json) {
    json j = detail::header("free-check", spec);
    j["g"] = format_element(spec, g);
    j["h"] = format_element(spec, h);
    j["result"] = freeness_to_json(r);
    detail::emit(out, j);
  } else if (r.free) {
    out << "no relation of length <= " << c.length << " between g = " << format_element(spec, g)
        << " and h = " << format_element(spec, h) << "\n";
  } else {
    out << "relation found: " << format_relation(*r.witness) << " = 1\n";
  }
  return r.free ? 0 : 1;
}

/// Aggregates JSON documents from `check`, `decompose` and `free-check` runs
/// on a single group into a bound report.
inline int cmd_report(const JobConfig& c, std::ostream& out) {
  if (c.inputs.empty()) throw ParseError("report needs at least one input file", 1, 1);
  std::optional<GroupSpec> spec;
  std::vector<BoundEvidence> evidence;
  std::optional<FreenessResult> freeness;
  for (const auto& path : c.inputs) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open '" + path + "'", 1, 1);
    json doc;
    try {
      doc = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": " + e.what(), 1, e.byte);
    }
    const GroupSpec s = spec_from_document(doc);
    if (spec && !(*spec == s)) throw PreconditionError("report inputs mix different groups");
    spec = s;
    const auto cmd = doc.at("command").get<std::string>();
    if (cmd == "check" || cmd == "decompose") {
      const TranslatingSets ts = translating_sets_from_json(s, doc.at("translating_sets"));
      const CayleyPatch p = enumerate_ball(s, GeneratingSet::standard(s),
                                           doc.at("radius").get<std::size_t>(), c.vertex_budget);
      evidence.push_back({ts, p.vertices, verdict_from_json(s, ts, doc.at("verdict"))});
    } else if (cmd == "free-check") {
      FreenessResult r = freeness_from_json(doc.at("result"));
      if (!freeness || (r.free && !freeness->free) ||
          (r.free == freeness->free && r.length > freeness->length))
        freeness = r;
    } else {
      throw PreconditionError("report cannot use output of '" + cmd + "'");
    }
  }
  const TarskiBoundReport r = tarski_bound_report(*spec, evidence, freeness);
  if (c.format == Format::Json) {
    json j = detail::header("report", *spec);
    j["report"] = bound_report_to_json(r);
    detail::emit(out, j);
  } else {
    out << "Tarski number bounds for " << spec->to_string() << " (finite-domain evidence)\n";
    out << "upper: " << (r.upper ? std::to_string(*r.upper) : std::string("none")) << "\n";
    out << "lower: " << r.lower << "\n";
    for (const auto& line : r.justification) out << "  - " << line << "\n";
  }
  return 0;
}

}  // namespace tarski::cli
