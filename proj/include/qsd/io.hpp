#ifndef QSD_IO_HPP
#define QSD_IO_HPP

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsd/families.hpp"
#include "qsd/graph.hpp"
#include "qsd/kernels.hpp"

namespace qsd {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Domain-spec files
//
// { "generator": {"family": ..., "N": ..., "L": ..., "d": ..., "lazy": ...,
//                 "poles": [[x,y,z],...] }
//   | "explicit": {"vertices": n, "edges": [[u,v],...], "pi": [...],
//                  "mu": [...], "coords": [[x,y,z],...], "dim": d,
//                  "members": [...]},
//   "center": optional vertex }

inline json family_spec_to_json(const FamilySpec& spec) {
  json j;
  j["family"] = spec.family;
  j["N"] = spec.N;
  if (spec.L) j["L"] = spec.L;
  j["d"] = spec.d;
  if (spec.lazy) j["lazy"] = true;
  if (!spec.poles.empty()) {
    json p = json::array();
    for (auto& c : spec.poles) p.push_back({c[0], c[1], c[2]});
    j["poles"] = p;
  }
  return j;
}

inline FamilySpec family_spec_from_json(const json& j) {
  FamilySpec spec;
  spec.family = j.at("family").get<std::string>();
  spec.N = j.value("N", 0);
  spec.L = j.value("L", 0);
  spec.d = j.value("d", 2);
  spec.lazy = j.value("lazy", false);
  if (j.contains("poles"))
    for (auto& p : j["poles"]) spec.poles.push_back({p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()});
  return spec;
}

inline json domain_spec_to_json(const WeightedGraph& g, const DomainView& dom) {
  json e;
  e["vertices"] = g.size();
  json edges = json::array(), mu = json::array();
  for (auto& edge : g.edges()) {
    edges.push_back({edge.u, edge.v});
    mu.push_back(edge.mu);
  }
  e["edges"] = edges;
  e["mu"] = mu;
  e["pi"] = g.pi();
  if (g.has_coords()) {
    json coords = json::array();
    for (Vertex v = 0; v < g.size(); ++v) {
      auto c = g.coord(v);
      coords.push_back({c[0], c[1], c[2]});
    }
    e["coords"] = coords;
    e["dim"] = g.coord_dim();
  }
  e["members"] = dom.members();
  json j;
  j["explicit"] = e;
  j["center"] = dom.center();
  return j;
}

inline std::pair<GraphPtr, DomainView> domain_spec_from_json(const json& j) {
  if (j.contains("generator")) {
    FamilySpec spec = family_spec_from_json(j["generator"]);
    FamilyInstance inst = generate(spec);
    if (j.contains("center"))
      return {inst.graph, DomainView(inst.graph, inst.domain.members(), j["center"].get<Vertex>())};
    return {inst.graph, std::move(inst.domain)};
  }
  const json& e = j.at("explicit");
  int n = e.at("vertices").get<int>();
  std::vector<WeightedGraph::Edge> edges;
  const auto& je = e.at("edges");
  const auto& jm = e.at("mu");
  for (std::size_t i = 0; i < je.size(); ++i)
    edges.push_back({je[i].at(0).get<int>(), je[i].at(1).get<int>(), jm.at(i).get<double>()});
  std::vector<double> pi = e.at("pi").get<std::vector<double>>();
  std::vector<std::array<int, 3>> coords;
  int dim = 0;
  if (e.contains("coords")) {
    for (auto& c : e["coords"]) coords.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()});
    dim = e.value("dim", 2);
  }
  auto g = std::make_shared<WeightedGraph>(n, std::move(edges), std::move(pi), std::move(coords), dim);
  std::vector<Vertex> members = e.at("members").get<std::vector<Vertex>>();
  Vertex center = j.contains("center") ? j["center"].get<Vertex>() : -1;
  DomainView dom(g, std::move(members), center);
  return {g, std::move(dom)};
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

// ---------------------------------------------------------------------------
// CSV and kernel exports

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw GraphError("cannot open for writing: " + path);
    out_ << std::setprecision(17);
  }
  void header(const std::vector<std::string>& cols) { write_row(cols); }
  void write_row(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
  }
  template <class... Ts>
  void row(const Ts&... vals) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    int i = 0;
    ((ss << (i++ ? "," : "") << vals), ...);
    out_ << ss.str() << "\n";
  }

 private:
  std::ofstream out_;
};

/// Sparse triplet text export: one "row col value" line per entry, with a
/// sidecar CSV for the reversing measure.
inline void export_kernel_triplets(const KernelMatrix& k, const std::string& path,
                                   const std::string& sidecar_path) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot open for writing: " + path);
  out << std::setprecision(17);
  for (int i = 0; i < k.size(); ++i)
    for (auto& [j, v] : k.row(i)) out << i << " " << j << " " << v << "\n";
  CsvWriter side(sidecar_path);
  side.header({"local", "vertex", "reversing_measure", "row_deficiency"});
  for (int i = 0; i < k.size(); ++i)
    side.row(i, k.domain()[i], k.reversing_measure()[i], k.row_deficiency(i));
}

}  // namespace qsd

#endif
