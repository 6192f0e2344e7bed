#include "egr/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "egr/error.hpp"
#include "json.hpp"

namespace egr {

namespace {

bool connected(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : edges) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

}  // namespace

Graph from_edge_list(int n, std::vector<std::pair<int, int>> edges,
                     std::optional<std::vector<double>> phi, std::vector<std::string> labels) {
  if (n < 2) throw Error(Errc::BadParam, "need at least 2 vertices, got " + std::to_string(n));

  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw Error(Errc::BadIndex,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    if (a == b) throw Error(Errc::SelfLoop, "vertex " + std::to_string(a));
    es.push_back({std::min(a, b), std::max(a, b)});
  }

  // Normalize order; phi entries travel with their edges.
  std::vector<int> perm(es.size());
  for (size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return std::pair(es[a].tail, es[a].head) < std::pair(es[b].tail, es[b].head);
  });

  std::vector<Edge> sorted;
  sorted.reserve(es.size());
  for (int k : perm) sorted.push_back(es[k]);
  for (size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k - 1].tail == sorted[k].tail && sorted[k - 1].head == sorted[k].head)
      throw Error(Errc::DuplicateEdge, "edge (" + std::to_string(sorted[k].tail) + "," +
                                           std::to_string(sorted[k].head) + ") repeated");
  }

  const int m = static_cast<int>(sorted.size());
  LengthSpec spec;
  if (phi) {
    if (static_cast<int>(phi->size()) != m)
      throw Error(Errc::LengthMismatch, "phi has " + std::to_string(phi->size()) + " entries for " +
                                            std::to_string(m) + " edges");
    spec.phi.resize(m);
    for (int k = 0; k < m; ++k) {
      const double v = (*phi)[perm[k]];
      if (!(v >= 0.0)) throw Error(Errc::NegativePhi, "phi[" + std::to_string(perm[k]) + "]");
      spec.phi[k] = v;
    }
  } else {
    spec = LengthSpec::ones(m);
  }

  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw Error(Errc::BadParam, "labels length differs from vertex count");

  if (!connected(n, sorted)) throw Error(Errc::DisconnectedGraph, std::to_string(n) + " vertices");

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(sorted);
  g.phi_ = std::move(spec);
  g.labels_ = std::move(labels);
  return g;
}

Matrix incidence_matrix(const Graph& g) {
  Matrix b(g.m(), g.n());
  for (int k = 0; k < g.m(); ++k) {
    b(k, g.edge(k).head) = 1.0;
    b(k, g.edge(k).tail) = -1.0;
  }
  return b;
}

SymMatrix laplacian(const Graph& g, std::span<const double> w) {
  if (static_cast<int>(w.size()) != g.m())
    throw Error(Errc::LengthMismatch, "weight vector has " + std::to_string(w.size()) +
                                          " entries for " + std::to_string(g.m()) + " edges");
  SymMatrix d(g.n());
  for (int k = 0; k < g.m(); ++k) {
    const auto [i, j] = g.edge(k);
    d.at(i, i) += w[k];
    d.at(j, j) += w[k];
    d.at(i, j) -= w[k];
  }
  return d;
}

SymMatrix laplacian(const Graph& g, const WeightVector& w) { return laplacian(g, std::span(w.w)); }

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeList cycle_edges(int n) {
  EdgeList e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

EdgeList petersen_edges() {
  EdgeList e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);          // outer cycle
    e.emplace_back(i, 5 + i);                // spokes
    e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
  }
  return e;
}

EdgeList house_edges() {
  return {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {2, 4}, {3, 4}};
}

EdgeList cube_edges() {
  EdgeList e;
  for (int v = 0; v < 8; ++v)
    for (int bit = 0; bit < 3; ++bit) {
      int u = v ^ (1 << bit);
      if (v < u) e.emplace_back(v, u);
    }
  return e;
}

EdgeList octahedral_edges() {
  EdgeList e;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (j - i != 3) e.emplace_back(i, j);
  return e;
}

EdgeList dodecahedral_edges() {
  EdgeList e;
  for (int i = 0; i < 10; ++i) {
    e.emplace_back(i, (i + 1) % 10);
    e.emplace_back(i, 10 + i);
    e.emplace_back(10 + i, 10 + (i + 2) % 10);
  }
  return e;
}

EdgeList icosahedral_edges() {
  EdgeList e;
  for (int i = 1; i <= 5; ++i) {
    e.emplace_back(0, i);                    // top apex to upper pentagon
    e.emplace_back(i, i % 5 + 1);            // upper pentagon cycle
    e.emplace_back(5 + i, 5 + i % 5 + 1);    // lower pentagon cycle
    e.emplace_back(11, 5 + i);               // bottom apex to lower pentagon
    e.emplace_back(i, 5 + i);                // antiprism band
    e.emplace_back(i, 6 + i % 5);
  }
  return e;
}

}  // namespace

Graph generate(std::string_view family, int n, int p, int q) {
  auto need_n = [&](int least) {
    if (n < least)
      throw Error(Errc::BadParam, std::string(family) + " needs n >= " + std::to_string(least));
  };

  if (family == "cycle") {
    need_n(3);
    return from_edge_list(n, cycle_edges(n));
  }
  if (family == "path") {
    need_n(2);
    EdgeList e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return from_edge_list(n, e);
  }
  if (family == "complete") {
    need_n(2);
    EdgeList e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return from_edge_list(n, e);
  }
  if (family == "grid") {
    if (p < 1 || q < 1 || p * q < 2) throw Error(Errc::BadParam, "grid needs p, q >= 1 and p*q >= 2");
    EdgeList e;
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < q; ++c) {
        if (c + 1 < q) e.emplace_back(r * q + c, r * q + c + 1);
        if (r + 1 < p) e.emplace_back(r * q + c, (r + 1) * q + c);
      }
    return from_edge_list(p * q, e);
  }
  if (family == "circular_ladder") {
    need_n(3);
    EdgeList e;
    for (int i = 0; i < n; ++i) {
      e.emplace_back(i, (i + 1) % n);
      e.emplace_back(n + i, n + (i + 1) % n);
      e.emplace_back(i, n + i);
    }
    return from_edge_list(2 * n, e);
  }
  if (family == "petersen") return from_edge_list(10, petersen_edges());
  if (family == "house") return from_edge_list(5, house_edges());
  if (family == "house_x") {
    EdgeList e = house_edges();
    e.emplace_back(0, 2);
    e.emplace_back(1, 3);
    return from_edge_list(5, e);
  }
  if (family == "tetrahedral") return generate("complete", 4);
  if (family == "cube") return from_edge_list(8, cube_edges());
  if (family == "octahedral") return from_edge_list(6, octahedral_edges());
  if (family == "dodecahedral") return from_edge_list(20, dodecahedral_edges());
  if (family == "icosahedral") return from_edge_list(12, icosahedral_edges());

  throw Error(Errc::UnknownFamily, std::string(family));
}

const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> families = {
      "cycle",    "path",  "complete", "grid",       "circular_ladder",
      "petersen", "house", "house_x",  "tetrahedral", "cube",
      "octahedral", "dodecahedral", "icosahedral"};
  return families;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Graph load_graph_json_string(const std::string& text, std::vector<std::string>* warnings) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::IoError, std::string("graph JSON parse failed: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::IoError, "graph JSON root must be an object");

  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "edges" && key != "phi" && key != "labels") {
      if (warnings) warnings->push_back("ignoring unknown key \"" + key + "\"");
    }
  }
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw Error(Errc::IoError, "graph JSON needs integer \"n\"");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw Error(Errc::IoError, "graph JSON needs array \"edges\"");

  const int n = j["n"].get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw Error(Errc::IoError, "each edge must be a pair of vertex indices");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }

  std::optional<std::vector<double>> phi;
  if (j.contains("phi")) {
    if (!j["phi"].is_array()) throw Error(Errc::IoError, "\"phi\" must be an array");
    phi = std::vector<double>();
    for (const auto& v : j["phi"]) {
      if (!v.is_number()) throw Error(Errc::IoError, "\"phi\" entries must be numbers");
      phi->push_back(v.get<double>());
    }
  }

  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw Error(Errc::IoError, "\"labels\" must be an array");
    for (const auto& v : j["labels"]) labels.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }

  return from_edge_list(n, std::move(edges), std::move(phi), std::move(labels));
}

Graph load_graph_json(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_graph_json_string(ss.str(), warnings);
}

std::string graph_to_json(const Graph& g) {
  std::ostringstream out;
  out << "{\n  \"n\": " << g.n() << ",\n  \"edges\": [";
  for (int k = 0; k < g.m(); ++k) {
    if (k) out << ", ";
    out << "[" << g.edge(k).tail << ", " << g.edge(k).head << "]";
  }
  out << "],\n  \"phi\": [";
  for (int k = 0; k < g.m(); ++k) {
    if (k) out << ", ";
    out << fmt17(g.phi()[k]);
  }
  out << "]";
  if (!g.labels().empty()) {
    out << ",\n  \"labels\": [";
    for (int i = 0; i < g.n(); ++i) {
      if (i) out << ", ";
      out << nlohmann::json(g.labels()[i]).dump();
    }
    out << "]";
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace egr
